//! Arithmetic in GF(p^m) for p^m <= 2^16.
//!
//! Elements are encoded as integers in `[0, q)`: the polynomial
//! `a_0 + a_1 x + ... + a_{m-1} x^{m-1}` maps to `a_0 + a_1 p + ... + a_{m-1} p^{m-1}`.
//! Prime fields use modular arithmetic with a precomputed inverse table.
//! Extension fields use exp/log tables with respect to the root `x` of the
//! Conway polynomial, plus a Zech logarithm table for addition in odd
//! characteristic.

use std::fmt;
use std::sync::Arc;

use super::conway_table::CONWAY;
use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

const NO_LOG: u32 = u32::MAX;

/// An element of a finite field in its canonical integer encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct FieldElem(u16);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    /// Integer encoding of the element.
    #[inline]
    pub fn value(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub(crate) fn from_raw(v: u32) -> Self {
        debug_assert!(v < MAX_ORDER as u32);
        FieldElem(v as u16)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The binary operations exposed through [`FieldSpec::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Unary; the second operand is ignored.
    Inv,
    /// Unary; the second operand is ignored.
    Neg,
}

enum Kind {
    Prime {
        inv: Vec<u16>,
    },
    Extension {
        /// `exp[i] = x^i`, stored for `i < 2(q-1)` so products need no reduction.
        exp: Vec<u16>,
        /// `log[a]` for `a != 0`.
        log: Vec<u32>,
        /// `zech[d] = log(1 + x^d)`, or `NO_LOG` when `1 + x^d = 0`.
        zech: Vec<u32>,
        neg: Vec<u16>,
        binary: bool,
    },
}

struct Tables {
    p: u32,
    m: u32,
    q: u32,
    modulus: Option<Vec<u32>>,
    kind: Kind,
}

/// A finite field GF(p^m). Cheap to clone; the tables are shared.
///
/// Two specs with the same order are interchangeable: the modulus for each
/// order is fixed by the shipped Conway polynomial table.
#[derive(Clone)]
pub struct FieldSpec {
    t: Arc<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.t.q == other.t.q
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.t.q)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^m`, if it is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u32, m))
}

impl FieldSpec {
    /// Builds GF(p^m).
    pub fn new(p: u32, m: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(Error::BadRange("extension degree must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if q > MAX_ORDER {
            return Err(Error::TooLarge(q));
        }
        let q = q as u32;
        let tables = if m == 1 {
            let mut inv = vec![0u16; p as usize];
            for a in 1..p as u64 {
                // a^(p-2) by square-and-multiply
                let (mut base, mut e, mut acc) = (a, p as u64 - 2, 1u64);
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % p as u64;
                    }
                    base = base * base % p as u64;
                    e >>= 1;
                }
                inv[a as usize] = acc as u16;
            }
            Tables {
                p,
                m,
                q,
                modulus: None,
                kind: Kind::Prime { inv },
            }
        } else {
            let modulus = CONWAY
                .iter()
                .find(|(pp, mm, _)| *pp == p && *mm == m)
                .map(|(_, _, c)| c.to_vec())
                .ok_or(Error::NoModulusTableEntry { p, m })?;
            let kind = build_extension(p, m, q, &modulus)?;
            Tables {
                p,
                m,
                q,
                modulus: Some(modulus),
                kind,
            }
        };
        Ok(FieldSpec { t: Arc::new(tables) })
    }

    /// Builds the field of order `q`.
    pub fn from_order(q: u64) -> Result<Self> {
        if q > MAX_ORDER {
            return Err(Error::TooLarge(q));
        }
        let (p, m) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, m)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.t.p
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.t.m
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.t.q
    }

    /// Modulus coefficients from `x^0` to the monic `x^m`; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.t.modulus.as_deref()
    }

    /// Validates an integer encoding.
    pub fn elem(&self, v: u64) -> Result<FieldElem> {
        if v >= self.t.q as u64 {
            return Err(Error::ElementOutOfRange { value: v, q: self.t.q });
        }
        Ok(FieldElem::from_raw(v as u32))
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.t.q).map(FieldElem::from_raw)
    }

    /// The elements `1, x, ..., x^{m-1}`, an F_p-basis of the field.
    pub fn prime_basis(&self) -> Vec<FieldElem> {
        (0..self.t.m).map(|j| FieldElem::from_raw(self.t.p.pow(j))).collect()
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.t.kind {
            Kind::Prime { .. } => {
                let s = a.value() + b.value();
                let p = self.t.p;
                FieldElem::from_raw(if s >= p { s - p } else { s })
            }
            Kind::Extension {
                exp, log, zech, binary, ..
            } => {
                if *binary {
                    return FieldElem(a.0 ^ b.0);
                }
                if a.is_zero() {
                    return b;
                }
                if b.is_zero() {
                    return a;
                }
                let qm1 = self.t.q - 1;
                let la = log[a.0 as usize];
                let lb = log[b.0 as usize];
                let d = if lb >= la { lb - la } else { lb + qm1 - la };
                let z = zech[d as usize];
                if z == NO_LOG {
                    FieldElem::ZERO
                } else {
                    FieldElem(exp[(la + z) as usize])
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        match &self.t.kind {
            Kind::Prime { .. } => {
                if a.is_zero() {
                    a
                } else {
                    FieldElem::from_raw(self.t.p - a.value())
                }
            }
            Kind::Extension { neg, .. } => FieldElem(neg[a.0 as usize]),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.t.kind {
            Kind::Prime { .. } => FieldElem::from_raw((a.value() as u64 * b.value() as u64 % self.t.p as u64) as u32),
            Kind::Extension { exp, log, .. } => {
                if a.is_zero() || b.is_zero() {
                    FieldElem::ZERO
                } else {
                    FieldElem(exp[(log[a.0 as usize] + log[b.0 as usize]) as usize])
                }
            }
        }
    }

    #[inline]
    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv_nonzero(a))
    }

    #[inline]
    pub(crate) fn inv_nonzero(&self, a: FieldElem) -> FieldElem {
        match &self.t.kind {
            Kind::Prime { inv } => FieldElem(inv[a.0 as usize]),
            Kind::Extension { exp, log, .. } => {
                let l = log[a.0 as usize];
                let qm1 = self.t.q - 1;
                FieldElem(exp[((qm1 - l) % qm1) as usize])
            }
        }
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Single entry point for the field operations; unary ops ignore `b`.
    pub fn arith(&self, a: FieldElem, b: FieldElem, op: ArithOp) -> Result<FieldElem> {
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.div(a, b)?,
            ArithOp::Inv => self.inv(a)?,
            ArithOp::Neg => self.neg(a),
        })
    }

    /// `dst -= factor * src`, elementwise.
    #[inline]
    pub(crate) fn sub_scaled(&self, dst: &mut [FieldElem], factor: FieldElem, src: &[FieldElem]) {
        debug_assert_eq!(dst.len(), src.len());
        if factor.is_zero() {
            return;
        }
        match &self.t.kind {
            Kind::Prime { .. } => {
                let p = self.t.p as u64;
                let nf = p - factor.value() as u64;
                for (d, s) in dst.iter_mut().zip(src) {
                    if !s.is_zero() {
                        *d = FieldElem::from_raw(((d.value() as u64 + nf * s.value() as u64) % p) as u32);
                    }
                }
            }
            Kind::Extension { exp, log, binary, .. } => {
                let nf = self.neg(factor);
                let lf = log[nf.0 as usize];
                if *binary {
                    for (d, s) in dst.iter_mut().zip(src) {
                        if !s.is_zero() {
                            d.0 ^= exp[(lf + log[s.0 as usize]) as usize];
                        }
                    }
                } else {
                    for (d, s) in dst.iter_mut().zip(src) {
                        if !s.is_zero() {
                            let t = FieldElem(exp[(lf + log[s.0 as usize]) as usize]);
                            *d = self.add(*d, t);
                        }
                    }
                }
            }
        }
    }

    /// `row *= factor`, elementwise.
    #[inline]
    pub(crate) fn scale(&self, row: &mut [FieldElem], factor: FieldElem) {
        if factor == FieldElem::ONE {
            return;
        }
        for x in row.iter_mut() {
            *x = self.mul(*x, factor);
        }
    }

    /// `dst += src`, elementwise.
    #[inline]
    pub(crate) fn add_assign(&self, dst: &mut [FieldElem], src: &[FieldElem]) {
        for (d, s) in dst.iter_mut().zip(src) {
            *d = self.add(*d, *s);
        }
    }
}

/// Digit-wise addition of two base-p encodings; independent of the tables.
pub(crate) fn add_digits(p: u32, m: u32, a: u32, b: u32) -> u32 {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    for _ in 0..m {
        let d = (a % p + b % p) % p;
        out += d * place;
        place *= p;
        a /= p;
        b /= p;
    }
    out
}

fn build_extension(p: u32, m: u32, q: u32, modulus: &[u32]) -> Result<Kind> {
    let qm1 = (q - 1) as usize;
    let mut exp = vec![0u16; 2 * qm1];
    let mut log = vec![NO_LOG; q as usize];
    let mut digits = vec![0u32; m as usize];
    digits[0] = 1;
    let encode = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &x| acc * p + x);
    for (i, slot) in exp.iter_mut().take(qm1).enumerate() {
        let e = encode(&digits);
        if log[e as usize] != NO_LOG {
            // x has order < q-1: the modulus is not primitive.
            return Err(Error::InvalidParams(format!(
                "modulus for GF({p}^{m}) is not primitive"
            )));
        }
        *slot = e as u16;
        log[e as usize] = i as u32;
        // multiply by x and reduce by the monic modulus
        let top = digits[m as usize - 1];
        for j in (1..m as usize).rev() {
            digits[j] = (digits[j - 1] + (p - top) * modulus[j] % p) % p;
        }
        digits[0] = (p - top) * modulus[0] % p;
    }
    if encode(&digits) != 1 {
        return Err(Error::InvalidParams(format!(
            "modulus for GF({p}^{m}) is not primitive"
        )));
    }
    exp.copy_within(0..qm1, qm1);
    let mut zech = vec![NO_LOG; qm1];
    let mut neg = vec![0u16; q as usize];
    for a in 0..q {
        // negate each base-p digit
        let mut v = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..m {
            out += ((p - v % p) % p) * place;
            place *= p;
            v /= p;
        }
        neg[a as usize] = out as u16;
    }
    for (d, z) in zech.iter_mut().enumerate() {
        let one_plus = add_digits(p, m, 1, exp[d] as u32);
        if one_plus != 0 {
            *z = log[one_plus as usize];
        }
    }
    Ok(Kind::Extension {
        exp,
        log,
        zech,
        neg,
        binary: p == 2,
    })
}
