//! Exact evaluation of the closed-form counts, expectations, bounds and limit
//! values for star products of random codes.
//!
//! Everything is computed over arbitrary-precision integers and rationals;
//! floating point appears only in the final logarithm or exponential.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fqlinalg::prime_power;

/// Reduced rational with arbitrary-precision numerator and positive denominator.
pub type BigRat = BigRational;

/// Parameters `(q, n, k1, k2)` of a pair of codes, normalised to `k1 <= k2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    q: u64,
    n: usize,
    k1: usize,
    k2: usize,
}

impl Params {
    /// Validates `q` as a prime power and `1 <= k1, k2 <= n`, swapping so that `k1 <= k2`.
    pub fn new(q: u64, n: usize, k1: usize, k2: usize) -> Result<Self> {
        check_prime_power(q)?;
        if n == 0 {
            return Err(Error::BadRange("length n must be at least 1".into()));
        }
        for k in [k1, k2] {
            if k == 0 || k > n {
                return Err(Error::BadRange(format!("dimension {k} outside [1, {n}]")));
            }
        }
        Ok(Params {
            q,
            n,
            k1: k1.min(k2),
            k2: k1.max(k2),
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k1(&self) -> usize {
        self.k1
    }
    pub fn k2(&self) -> usize {
        self.k2
    }
}

fn check_prime_power(q: u64) -> Result<()> {
    match prime_power(q) {
        Some(_) => Ok(()),
        None => Err(Error::NotPrimePower(q)),
    }
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

fn pow(base: u64, e: usize) -> BigInt {
    num_traits::pow(big(base), e)
}

fn pow_big(base: &BigInt, e: usize) -> BigInt {
    num_traits::pow(base.clone(), e)
}

fn sign(k: i64) -> i32 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn choose2(m: i64) -> i64 {
    m * (m - 1) / 2
}

/// Binomial coefficient; zero when `k < 0`, `n < 0` or `k > n`.
pub fn binom(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * big((n - i) as u64) / big((i + 1) as u64);
    }
    acc
}

/// Gaussian binomial `[n choose k]_q`; zero when `k < 0`, `n < 0` or `k > n`.
pub fn qbinom(n: i64, k: i64, q: u64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k) as usize;
    let n = n as usize;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= pow(q, n - i) - 1;
        den *= pow(q, i + 1) - 1;
    }
    num / den
}

/// Exact float conversion of a rational.
pub fn to_f64(x: &BigRat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Natural log of a positive integer, accurate to double precision.
fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 60 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 60;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational, using `ln_1p` near 1 to avoid cancellation.
pub fn ln_rat(x: &BigRat) -> f64 {
    assert!(x.is_positive(), "logarithm of a non-positive rational");
    let (a, b) = (x.numer(), x.denom());
    if a < &(b * 2) && a > &(b / 2) {
        let d = BigRat::new(a - b, b.clone());
        return to_f64(&d).ln_1p();
    }
    ln_big(a) - ln_big(b)
}

fn check_dims(k1: usize, k2: usize, r: usize) -> Result<()> {
    if k1 > k2 || r > k1 {
        return Err(Error::BadRange(format!(
            "need 0 <= r <= k1 <= k2, got r = {r}, k1 = {k1}, k2 = {k2}"
        )));
    }
    Ok(())
}

/// `q^{k1} * |S_r|` with each `j`-term additionally weighted by `q^{-j m}`
/// (`m` zero columns forced), evaluated as `|S_r^{k1, k2 - m}|`-style sums.
fn zero_diag_sum(k1: usize, k2: usize, r: usize, m: usize, q: u64) -> BigInt {
    let (k1i, ri) = (k1 as i64, r as i64);
    let mut total = BigInt::zero();
    for i in 0..=k1 {
        let head = binom(k1i, i as i64) * pow(q - 1, i);
        for j in 0..=k1 {
            let qb = qbinom(k1i - i as i64, j as i64, q) * qbinom(k1i - j as i64, k1i - ri, q);
            if qb.is_zero() {
                continue;
            }
            // j <= r here, since qbinom(k1 - j, k1 - r) vanishes otherwise
            let e = (j * (k2 - m)) as i64 + choose2(ri - j as i64);
            let term = &head * qb * pow(q, e as usize);
            if sign(ri - j as i64) > 0 {
                total += term;
            } else {
                total -= term;
            }
        }
    }
    total
}

fn exact_div(num: BigInt, den: &BigInt) -> BigInt {
    let (quo, rem) = num.div_rem(den);
    debug_assert!(rem.is_zero(), "inexact division in a counting formula");
    quo
}

/// `|S_r^{k1,k2}|`: the number of `k1 x k2` matrices over F_q of rank `r`
/// with `A_{ii} = 0` for `i < k1`.
pub fn count_zero_diag_rank(k1: usize, k2: usize, r: usize, q: u64) -> Result<BigInt> {
    check_prime_power(q)?;
    check_dims(k1, k2, r)?;
    Ok(exact_div(zero_diag_sum(k1, k2, r, 0, q), &pow(q, k1)))
}

/// `S_{r,l}`: rank-`r` zero-diagonal matrices whose columns in a fixed
/// `l`-subset of the `k2 - k1` extra columns vanish and whose remaining extra
/// columns are all nonzero.
pub fn count_zero_diag_rank_zerocols(k1: usize, k2: usize, r: usize, l: usize, q: u64) -> Result<BigInt> {
    check_prime_power(q)?;
    check_dims(k1, k2, r)?;
    let extra = k2 - k1;
    if l > extra {
        return Err(Error::BadRange(format!("l = {l} exceeds k2 - k1 = {extra}")));
    }
    let mut total = BigInt::zero();
    for m in l..=extra {
        let term = binom((extra - l) as i64, (m - l) as i64) * zero_diag_sum(k1, k2, r, m, q);
        if sign((m - l) as i64) > 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(exact_div(total, &pow(q, k1)))
}

/// Number of pairs `(v1, v2) in F_q^{k1} x F_q^{k2}` on which a bilinear form of rank `r` vanishes.
pub fn zeros_of_form(r: usize, k1: usize, k2: usize, q: u64) -> Result<BigInt> {
    check_prime_power(q)?;
    if r > k1.min(k2) {
        return Err(Error::BadRange(format!(
            "rank {r} exceeds min(k1, k2) = {}",
            k1.min(k2)
        )));
    }
    if r == 0 {
        return Ok(pow(q, k1 + k2));
    }
    Ok((pow(q, r) + q - 1) * pow(q, k1 + k2 - r - 1))
}

/// Upper limit of the innermost sum of the kernel formula. The two forms agree
/// because the q-binomial `[k1 - i choose j]` vanishes for `j > k1 - i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum JLimit {
    R,
    #[cfg_attr(not(test), allow(dead_code))]
    MinRK1MinusI,
}

pub(crate) fn expected_kernel_size_with(p: &Params, limit: JLimit) -> BigRat {
    let (q, n, k1, k2) = (p.q, p.n, p.k1, p.k2);
    let k1i = k1 as i64;
    // gamma(j)^e = (q^j + q - 1)^e q^{-je}; all terms share the denominator q^shift
    let shift = (n + k1 * (n - k2)) as i64;
    let mut num = BigInt::zero();
    for r in 0..=k1 {
        let gr = pow_big(&(pow(q, r) + q - 1), n - k2);
        for i in 0..=k1 {
            let head = &gr * binom(k1i, i as i64) * pow(q - 1, i);
            let jmax = match limit {
                JLimit::R => r,
                JLimit::MinRK1MinusI => r.min(k1 - i),
            };
            for j in 0..=jmax {
                let qb = qbinom(k1i - i as i64, j as i64, q) * qbinom(k1i - j as i64, (k1 - r) as i64, q);
                if qb.is_zero() {
                    continue;
                }
                let gj = pow_big(&(pow(q, j) + q - 1), k2 - k1);
                let e = (j * k2) as i64 - n as i64 + choose2((r - j) as i64)
                    - (r * (n - k2)) as i64
                    - (j * (k2 - k1)) as i64
                    + shift;
                debug_assert!(e >= 0);
                let term = &head * gj * qb * pow(q, e as usize);
                if sign((r - j) as i64) > 0 {
                    num += term;
                } else {
                    num -= term;
                }
            }
        }
    }
    BigRat::new(num, pow(q, shift as usize))
}

/// Exact `E[|ker psi|]` for codes drawn from the systematic model.
pub fn expected_kernel_size(p: &Params) -> BigRat {
    expected_kernel_size_with(p, JLimit::R)
}

/// The Jensen lower bound `k1 k2 - log_q E[|ker psi|]` on the expected star dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct JensenBound {
    pub value: f64,
    pub expected_kernel: BigRat,
}

pub fn star_dim_lower_bound(p: &Params) -> JensenBound {
    let e = expected_kernel_size(p);
    // k1 k2 - log_q E = log_q(q^{k1 k2} / E)
    let x = BigRat::from_integer(pow(p.q, p.k1 * p.k2)) / &e;
    JensenBound {
        value: ln_rat(&x) / (p.q as f64).ln(),
        expected_kernel: e,
    }
}

/// Exact `E[dim(C1 * C2)]` for a fixed MDS code `C1` of dimension `mds_dim`
/// and `C2` uniform over subspaces of dimension `random_dim`. Defined when
/// `random_dim = 1` or `random_dim >= n - mds_dim + 1`.
pub fn expected_star_dim_mds(q: u64, n: usize, mds_dim: usize, random_dim: usize) -> Result<BigRat> {
    check_prime_power(q)?;
    let (k1, k2) = (mds_dim, random_dim);
    if n == 0 || k1 == 0 || k2 == 0 || k1 > n || k2 > n {
        return Err(Error::BadRange(format!(
            "need 1 <= k1, k2 <= n, got n = {n}, k1 = {k1}, k2 = {k2}"
        )));
    }
    let ni = n as i64;
    if k2 == 1 {
        let mut num = BigInt::zero();
        for i in 1..=n {
            num += binom(ni, i as i64) * pow(q - 1, i) * big(k1.min(i) as u64);
        }
        return Ok(BigRat::new(num, pow(q, n) - 1));
    }
    if k2 + k1 > n {
        let mut num = BigInt::zero();
        for s in k2..=n {
            let phi = count_subspaces_with_support(q, s, k2, s)?;
            num += big(s as u64) * binom(ni, s as i64) * phi;
        }
        return Ok(BigRat::new(num, qbinom(ni, k2 as i64, q)));
    }
    Err(Error::UncoveredCase { n, k1, k2 })
}

/// Number of `l`-dimensional subspaces of F_q^n whose support is exactly a fixed `s`-subset.
pub fn count_subspaces_with_support(q: u64, n: usize, l: usize, s: usize) -> Result<BigInt> {
    check_prime_power(q)?;
    if l > n || s > n {
        return Err(Error::BadRange(format!(
            "need l, s <= n, got l = {l}, s = {s}, n = {n}"
        )));
    }
    let mut total = BigInt::zero();
    for i in l..=s {
        let term = binom(s as i64, i as i64) * qbinom(i as i64, l as i64, q);
        if sign((s - i) as i64) > 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

/// Exact `E[dim(C1 ∩ C2)]` for independent uniform subspaces.
pub fn expected_intersection_dim(p: &Params) -> BigRat {
    let (q, n, k1, k2) = (p.q, p.n as i64, p.k1 as i64, p.k2 as i64);
    let mut num = BigInt::zero();
    for i in 1..=k1 {
        num += big(i as u64)
            * qbinom(n, i, q)
            * qbinom(n - i, k1 - i, q)
            * pow(q, ((k1 - i) * (k2 - i)) as usize)
            * qbinom(n - k1, k2 - i, q);
    }
    BigRat::new(num, qbinom(n, k1, q) * qbinom(n, k2, q))
}

/// `1 + q^{k1 k2 - n}`, the large-`q` behaviour of `E[|ker psi|]` at fixed `q`.
pub fn kernel_limit_value(p: &Params) -> BigRat {
    let e = (p.k1 * p.k2) as i64 - p.n as i64;
    let t = if e >= 0 {
        BigRat::from_integer(pow(p.q, e as usize))
    } else {
        BigRat::new(BigInt::one(), pow(p.q, (-e) as usize))
    };
    t + BigRat::one()
}

/// `1 - ((2q - 1) / q^2)^t`.
pub fn full_dim_probability_bound_exponent(q: u64, t: i64) -> Result<f64> {
    if t < 0 {
        return Err(Error::BadRange(format!("exponent {t} is negative")));
    }
    let base = BigRat::new(big(2 * q - 1), big(q * q));
    Ok(to_f64(&(BigRat::one() - num_traits::pow(base, t as usize))))
}

/// The bound with exponent `n - k1 k2`; requires `n >= k1 k2`.
pub fn full_dim_probability_bound(q: u64, n: usize, k1: usize, k2: usize) -> Result<f64> {
    check_prime_power(q)?;
    full_dim_probability_bound_exponent(q, n as i64 - (k1 * k2) as i64)
}

/// `exp((q - 1) k2 (k1 - 1) / q^{k1}) + 1`.
pub fn kernel_conjecture_value(q: u64, k1: usize, k2: usize) -> f64 {
    let x = BigRat::new(big((q - 1) * k2 as u64 * (k1 as u64).saturating_sub(1)), pow(q, k1));
    to_f64(&x).exp() + 1.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(a: i64, b: i64) -> BigRat {
        BigRat::new(BigInt::from(a), BigInt::from(b))
    }

    fn p(q: u64, n: usize, k1: usize, k2: usize) -> Params {
        Params::new(q, n, k1, k2).unwrap()
    }

    #[test]
    fn qbinom_examples() {
        assert_eq!(qbinom(5, 0, 3), BigInt::from(1));
        assert_eq!(qbinom(3, 1, 2), BigInt::from(7));
        assert_eq!(qbinom(4, 2, 2), BigInt::from(35));
        assert_eq!(qbinom(2, 3, 5), BigInt::zero());
        assert_eq!(qbinom(-1, 0, 2), BigInt::zero());
        assert_eq!(qbinom(3, -1, 2), BigInt::zero());
        assert_eq!(qbinom(6, 2, 7), BigInt::from(6_865_251));
        assert_eq!(qbinom(6, 3, 7), BigInt::from(48_177_200));
        for n in 0..8 {
            for k in 0..=n {
                assert_eq!(qbinom(n, k, 4), qbinom(n, n - k, 4));
            }
        }
    }

    #[test]
    fn binom_conventions() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(5, 6), BigInt::zero());
        assert_eq!(binom(-2, 1), BigInt::zero());
        assert_eq!(binom(0, 0), BigInt::one());
    }

    #[test]
    fn params_validation() {
        assert_eq!(p(2, 5, 3, 2), p(2, 5, 2, 3));
        assert_eq!(Params::new(6, 5, 1, 1).unwrap_err(), Error::NotPrimePower(6));
        assert!(Params::new(2, 3, 0, 1).is_err());
        assert!(Params::new(2, 3, 1, 4).is_err());
        assert!(Params::new(2, 0, 1, 1).is_err());
    }

    #[test]
    fn zero_diag_examples() {
        assert_eq!(count_zero_diag_rank(2, 2, 0, 2).unwrap(), BigInt::from(1));
        assert_eq!(count_zero_diag_rank(2, 2, 1, 2).unwrap(), BigInt::from(2));
        assert_eq!(count_zero_diag_rank(2, 2, 2, 2).unwrap(), BigInt::from(1));
        assert_eq!(count_zero_diag_rank(3, 4, 0, 5).unwrap(), BigInt::from(1));
        assert_eq!(count_zero_diag_rank_zerocols(1, 2, 1, 1, 2).unwrap(), BigInt::zero());
        assert_eq!(count_zero_diag_rank_zerocols(1, 2, 1, 0, 2).unwrap(), BigInt::from(1));
        assert!(count_zero_diag_rank(3, 2, 0, 2).is_err());
        assert!(count_zero_diag_rank(2, 3, 3, 2).is_err());
        assert!(count_zero_diag_rank_zerocols(2, 3, 1, 2, 2).is_err());
    }

    #[test]
    fn zero_diag_checksum_and_consistency() {
        for q in [2u64, 3, 4, 5] {
            for k1 in 1..=5 {
                for k2 in k1..=5 {
                    let mut total = BigInt::zero();
                    for r in 0..=k1 {
                        let s = count_zero_diag_rank(k1, k2, r, q).unwrap();
                        let mut split = BigInt::zero();
                        for l in 0..=k2 - k1 {
                            split += binom((k2 - k1) as i64, l as i64)
                                * count_zero_diag_rank_zerocols(k1, k2, r, l, q).unwrap();
                        }
                        assert_eq!(split, s, "q={q} k1={k1} k2={k2} r={r}");
                        if k1 == k2 {
                            assert_eq!(count_zero_diag_rank_zerocols(k1, k2, r, 0, q).unwrap(), s);
                        }
                        total += s;
                    }
                    assert_eq!(total, pow(q, k1 * k2 - k1));
                }
            }
        }
    }

    #[test]
    fn zeros_of_form_examples() {
        assert_eq!(zeros_of_form(0, 2, 3, 5).unwrap(), pow(5, 5));
        assert_eq!(zeros_of_form(1, 1, 1, 2).unwrap(), BigInt::from(3));
        assert_eq!(zeros_of_form(2, 2, 2, 3).unwrap(), BigInt::from(33));
        for q in [2u64, 3, 7] {
            for r in 1..=3 {
                assert!(zeros_of_form(r, 3, 4, q).unwrap() < zeros_of_form(r - 1, 3, 4, q).unwrap());
            }
        }
        assert!(zeros_of_form(3, 2, 4, 2).is_err());
    }

    #[test]
    fn expected_kernel_examples() {
        assert_eq!(expected_kernel_size(&p(2, 2, 1, 1)), BigRat::one());
        // a systematic pair of lines has a product with first coordinate 1
        for q in [2u64, 3, 4, 7] {
            for n in 1..7 {
                assert_eq!(expected_kernel_size(&p(q, n, 1, 1)), BigRat::one());
            }
        }
    }

    #[test]
    fn j_limit_conventions_agree() {
        for q in [2u64, 3, 4, 5, 7] {
            for n in 1..=9 {
                for k1 in 1..=n.min(4) {
                    for k2 in k1..=n.min(5) {
                        let pp = p(q, n, k1, k2);
                        let a = expected_kernel_size_with(&pp, JLimit::R);
                        let b = expected_kernel_size_with(&pp, JLimit::MinRK1MinusI);
                        assert_eq!(a, b);
                        assert!(a >= BigRat::one());
                    }
                }
            }
        }
    }

    const PRIMES: [u64; 26] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101,
    ];

    fn relative_gap(pp: &Params) -> BigRat {
        let lim = kernel_limit_value(pp);
        (expected_kernel_size(pp) - &lim).abs() / lim
    }

    #[test]
    fn kernel_approaches_limit_in_q() {
        for (n, k1, k2) in [(7, 2, 3), (11, 3, 3), (15, 3, 4), (9, 2, 2)] {
            let gaps: Vec<BigRat> = PRIMES
                .iter()
                .map(|&q| (expected_kernel_size(&p(q, n, k1, k2)) - kernel_limit_value(&p(q, n, k1, k2))).abs())
                .collect();
            assert!(
                gaps.windows(2).all(|w| w[1] < w[0]),
                "({n},{k1},{k2}) {:?}",
                gaps.iter().map(to_f64).collect::<Vec<_>>()
            );
        }
        for n in 1..=10 {
            for k1 in 1..=n.min(3) {
                for k2 in k1..=n.min(4) {
                    if k1 == 1 && k2 == n {
                        continue;
                    }
                    let gaps: Vec<BigRat> = PRIMES[3..].iter().map(|&q| relative_gap(&p(q, n, k1, k2))).collect();
                    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "({n},{k1},{k2})");
                }
            }
        }
    }

    #[test]
    fn kernel_gap_not_monotone_from_q2() {
        let gap = |q| (expected_kernel_size(&p(q, 6, 2, 3)) - kernel_limit_value(&p(q, 6, 2, 3))).abs();
        assert!(gap(3) > gap(2));
    }

    #[test]
    fn line_times_full_space() {
        // C1 * F^n is supported on supp(C1), so each zero among the n - 1 free
        // entries multiplies the kernel by q: E = (2 - 1/q)^{n-1}, tending to 2^{n-1}
        for &q in &PRIMES[..8] {
            for n in 1..7 {
                let pp = p(q, n, 1, n);
                let per_coord = BigRat::new(BigInt::from(2 * q - 1), BigInt::from(q));
                assert_eq!(expected_kernel_size(&pp), num_traits::pow(per_coord, n - 1));
                assert_eq!(kernel_limit_value(&pp), rat(2, 1));
            }
        }
    }

    #[test]
    fn jensen_bound_values() {
        let cases = [((2, 7, 2, 3), 4.3629), ((3, 11, 3, 3), 8.5237), ((7, 15, 3, 4), 11.998)];
        for ((q, n, k1, k2), want) in cases {
            let b = star_dim_lower_bound(&p(q, n, k1, k2));
            let digits = if want > 10.0 { 1e3 } else { 1e4 };
            assert_eq!(
                (b.value * digits).round() / digits,
                want,
                "{q} {n} {k1} {k2}: {}",
                b.value
            );
            assert!(b.value <= (k1 * k2) as f64);
        }
    }

    #[test]
    fn ln_rat_precision() {
        let x = BigRat::new(pow(10, 40) + 1, pow(10, 40));
        assert!((ln_rat(&x) - 1e-40).abs() < 1e-55);
        let y = BigRat::new(pow(3, 200), BigInt::from(1));
        assert!((ln_rat(&y) / 200.0 - 3f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn mds_expectation_examples() {
        assert_eq!(expected_star_dim_mds(2, 2, 2, 1).unwrap(), rat(4, 3));
        assert_eq!(expected_star_dim_mds(2, 2, 2, 2).unwrap(), rat(2, 1));
        assert_eq!(expected_star_dim_mds(2, 3, 2, 2).unwrap(), rat(18, 7));
        assert_eq!(
            expected_star_dim_mds(7, 6, 3, 2).unwrap_err(),
            Error::UncoveredCase { n: 6, k1: 3, k2: 2 }
        );
    }

    #[test]
    fn support_count_examples() {
        assert_eq!(count_subspaces_with_support(2, 2, 1, 2).unwrap(), BigInt::from(1));
        assert_eq!(count_subspaces_with_support(2, 3, 2, 3).unwrap(), BigInt::from(4));
        assert_eq!(count_subspaces_with_support(3, 4, 3, 2).unwrap(), BigInt::zero());
        // every subspace has some support: summing over supports recovers qbinom
        for q in [2u64, 3, 4] {
            for n in 0..6usize {
                for l in 0..=n {
                    let mut total = BigInt::zero();
                    for s in 0..=n {
                        total += binom(n as i64, s as i64) * count_subspaces_with_support(q, n, l, s).unwrap();
                    }
                    assert_eq!(total, qbinom(n as i64, l as i64, q));
                }
            }
        }
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(expected_intersection_dim(&p(2, 2, 1, 1)), rat(1, 3));
        assert_eq!(expected_intersection_dim(&p(2, 3, 1, 2)), rat(3, 7));
        for n in 1..6 {
            assert_eq!(expected_intersection_dim(&p(3, n, n, n)), rat(n as i64, 1));
            for k in 1..=n {
                assert_eq!(expected_intersection_dim(&p(2, n, k, n)), rat(k as i64, 1));
            }
        }
        let mut prev = BigRat::from_integer(BigInt::from(100));
        for k in 2..=5 {
            let v = expected_intersection_dim(&p(2, k * k, k, k));
            assert!(v < prev && v.is_positive());
            prev = v;
        }
    }

    #[test]
    fn limit_and_bound_examples() {
        assert_eq!(kernel_limit_value(&p(3, 6, 2, 3)), rat(2, 1));
        assert_eq!(kernel_limit_value(&p(2, 7, 2, 3)), rat(3, 2));
        assert_eq!(kernel_limit_value(&p(5, 5, 2, 3)), rat(6, 1));
        assert_eq!(full_dim_probability_bound_exponent(2, 0).unwrap(), 0.0);
        assert_eq!(full_dim_probability_bound_exponent(2, 4).unwrap(), 0.68359375);
        assert!((full_dim_probability_bound_exponent(7, 2).unwrap() - 0.929613).abs() < 1e-5);
        assert!(full_dim_probability_bound_exponent(2, -1).is_err());
        assert!(full_dim_probability_bound(2, 5, 2, 3).is_err());
        assert_eq!(kernel_conjecture_value(5, 1, 4), 2.0);
        assert!((kernel_conjecture_value(2, 2, 2) - 2.648721).abs() < 1e-6);
    }
}
