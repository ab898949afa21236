//! Figures of merit for star-product based PIR, SDMM and CSS-T constructions.

use serde::{Deserialize, Serialize};

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::exactcomb::BigRat;

/// Rational serialised as the string `num/den`.
mod rat_str {
    use super::BigRat;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRat, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).ok_or_else(|| D::Error::custom(format!("bad rational `{s}`")))
    }

    pub fn parse(s: &str) -> Option<BigRat> {
        let (a, b) = s.split_once('/').unwrap_or((s, "1"));
        let den: num_bigint::BigInt = b.trim().parse().ok()?;
        if den == 0.into() {
            return None;
        }
        Some(BigRat::new(a.trim().parse().ok()?, den))
    }

    pub mod opt {
        use super::*;
        use serde::Serialize;

        pub fn serialize<S: Serializer>(r: &Option<BigRat>, s: S) -> Result<S::Ok, S::Error> {
            r.as_ref().map(|r| format!("{}/{}", r.numer(), r.denom())).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRat>, D::Error> {
            match Option::<String>::deserialize(d)? {
                None => Ok(None),
                Some(s) => parse(&s)
                    .map(Some)
                    .ok_or_else(|| D::Error::custom(format!("bad rational `{s}`"))),
            }
        }
    }
}

pub use rat_str::parse as parse_rational;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PirReport {
    pub n: usize,
    pub star_dim: usize,
    /// `1 - dim(C * D) / n`.
    #[serde(with = "rat_str")]
    pub rate_upper: BigRat,
    /// `(d(C * D) - 1) / n`; absent when the distance is beyond the enumeration budget.
    #[serde(with = "rat_str::opt")]
    pub rate_lower: Option<BigRat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SdmmReport {
    pub servers: usize,
    pub d_star: usize,
    pub recovery: usize,
    pub stragglers: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsstReport {
    pub feasible: bool,
    /// `dim(C1 ∩ (C1 * C1)^perp)`.
    pub envelope_dim: usize,
    /// Whether the supplied `C2` lies in `C1` and in `(C1 * C1)^perp`.
    pub c2_contained: Option<bool>,
    /// `d(C2^perp)`, when a `C2` is supplied and the dual distance exists.
    pub distance_floor: Option<usize>,
}

fn rat(a: usize, b: usize) -> BigRat {
    BigRat::new(a.into(), b.into())
}

/// Rate bounds of a PIR scheme built from the pair `(C, D)`.
pub fn pir_rate_bounds(c: &LinearCode, d: &LinearCode) -> Result<PirReport> {
    let star = c.star(d)?;
    let n = c.n();
    let rate_lower = match star.min_distance() {
        Ok(dist) => Some(rat(dist - 1, n)),
        Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(PirReport {
        n,
        star_dim: star.k(),
        rate_upper: BigRat::from_integer(1.into()) - rat(star.k(), n),
        rate_lower,
    })
}

/// Recovery threshold and straggler tolerance of an SDMM scheme from `(C_A, C_B)`.
pub fn sdmm_thresholds(ca: &LinearCode, cb: &LinearCode) -> Result<SdmmReport> {
    let d_star = ca.star(cb)?.min_distance()?;
    let servers = ca.n();
    Ok(SdmmReport {
        servers,
        d_star,
        recovery: servers - d_star + 1,
        stragglers: d_star - 1,
    })
}

/// The largest admissible `C2` for a binary CSS-T pair with first code `C1`,
/// namely `C1 ∩ (C1 * C1)^perp`, and optionally a check of a candidate `C2`.
pub fn csst_envelope(c1: &LinearCode, c2: Option<&LinearCode>) -> Result<CsstReport> {
    let q = c1.field().q();
    if q != 2 {
        return Err(Error::NotBinary(q));
    }
    let square = c1.star(c1)?;
    let envelope = match square.dual() {
        Ok(sq_dual) => c1.intersection(&sq_dual)?,
        Err(Error::ZeroDual) => None,
        Err(e) => return Err(e),
    };
    let envelope_dim = envelope.as_ref().map_or(0, LinearCode::k);
    let (c2_contained, distance_floor) = match c2 {
        None => (None, None),
        Some(c2) => {
            let inside = match &envelope {
                Some(env) => c1.contains(c2)? && env.contains(c2)?,
                None => false,
            };
            let floor = match c2.dual_distance() {
                Ok(d) => Some(d),
                Err(Error::ZeroDual) => None,
                Err(e) => return Err(e),
            };
            (Some(inside), floor)
        }
    };
    Ok(CsstReport {
        feasible: envelope_dim >= 1 && c2_contained != Some(false),
        envelope_dim,
        c2_contained,
        distance_floor,
    })
}
