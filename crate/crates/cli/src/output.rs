use starprod::exactcomb::{to_f64, BigRat};

/// Ten significant digits, trailing zeros kept.
pub fn sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..10).contains(&mag) {
        format!("{:.*}", (9 - mag).max(0) as usize, x)
    } else {
        format!("{x:.9e}")
    }
}

pub fn rat_str(r: &BigRat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `num/den (decimal)`.
pub fn rat_line(r: &BigRat) -> String {
    format!("{} ({})", rat_str(r), sig10(to_f64(r)))
}
