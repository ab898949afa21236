//! Exhaustive enumeration at small parameters: the ground truth against which
//! the closed forms and the Monte Carlo estimators are checked.
//!
//! Systematic codes are enumerated as matrices `[I | A]` (the probability
//! space of the systematic model), subspaces as RREF canonical forms. Both are
//! addressed by a shape (pivot set) plus an integer counter over the free
//! entries, which lets large enumerations be split into independent chunks
//! whose exact partial sums are added.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::codes::{star_rank, LinearCode, Monomial};
use crate::error::{Error, Result};
use crate::exactcomb::{qbinom, BigRat, Params};
use crate::fqlinalg::{rank_in_place, FieldElem, FieldSpec, Mat};
use crate::sampling::RandomModel;

/// Default enumeration limit.
pub const DEFAULT_BUDGET: u64 = 1 << 26;

const CHUNK: u64 = 1 << 14;

/// Caps the number of items an enumeration may visit; exceeding it is an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumBudget {
    pub max_items: u64,
    pub observed: u64,
}

impl Default for EnumBudget {
    fn default() -> Self {
        EnumBudget::new(DEFAULT_BUDGET)
    }
}

impl EnumBudget {
    pub fn new(max_items: u64) -> Self {
        EnumBudget { max_items, observed: 0 }
    }

    /// Reserves `needed` further items or fails without reserving any.
    pub fn charge(&mut self, needed: &BigInt) -> Result<u64> {
        let total = needed + BigInt::from(self.observed);
        match total.to_u64() {
            Some(t) if t <= self.max_items => {
                self.observed = t;
                Ok(needed.to_u64().unwrap())
            }
            _ => Err(Error::BudgetExceeded {
                needed: needed.to_string(),
                limit: self.max_items.saturating_sub(self.observed),
            }),
        }
    }
}

/// RREF pattern: pivot columns plus the free `(row, col)` positions, row-major.
#[derive(Clone, Debug)]
struct Shape {
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
}

impl Shape {
    fn new(n: usize, pivots: Vec<usize>) -> Self {
        let mut free = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            for c in p + 1..n {
                if !pivots.contains(&c) {
                    free.push((i, c));
                }
            }
        }
        Shape { pivots, free }
    }

    fn systematic(n: usize, k: usize) -> Self {
        Shape::new(n, (0..k).collect())
    }

    fn count(&self, q: u32) -> BigInt {
        num_traits::pow(BigInt::from(q), self.free.len())
    }

    /// Writes the basis with the given counter into `buf`; the first free
    /// entry is the most significant digit.
    fn fill(&self, q: u32, n: usize, mut counter: u64, buf: &mut [FieldElem]) {
        buf.fill(FieldElem::ZERO);
        for (i, &p) in self.pivots.iter().enumerate() {
            buf[i * n + p] = FieldElem::ONE;
        }
        for &(i, c) in self.free.iter().rev() {
            buf[i * n + c] = FieldElem::from_raw((counter % q as u64) as u32);
            counter /= q as u64;
        }
    }

    fn code(&self, f: &FieldSpec, n: usize, counter: u64) -> LinearCode {
        let k = self.pivots.len();
        let mut buf = vec![FieldElem::ZERO; k * n];
        self.fill(f.q(), n, counter, &mut buf);
        LinearCode::from_rref_unchecked(Mat::from_elems_unchecked(f, k, n, buf), self.pivots.clone())
    }
}

fn pivot_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..=n - (k - cur.len()) {
            cur.push(c);
            rec(n, k, c + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

fn check_dim(n: usize, k: usize) -> Result<()> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::BadRange(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    Ok(())
}

/// A family of codes addressed by (shape, counter).
#[derive(Clone, Debug)]
struct Family {
    n: usize,
    k: usize,
    shapes: Vec<(Shape, u64)>,
}

impl Family {
    fn systematic(q: u32, n: usize, k: usize) -> Self {
        let s = Shape::systematic(n, k);
        let c = s.count(q).to_u64().unwrap_or(u64::MAX);
        Family {
            n,
            k,
            shapes: vec![(s, c)],
        }
    }

    fn subspaces(q: u32, n: usize, k: usize) -> Self {
        let shapes = pivot_sets(n, k)
            .into_iter()
            .map(|p| {
                let s = Shape::new(n, p);
                let c = s.count(q).to_u64().unwrap_or(u64::MAX);
                (s, c)
            })
            .collect();
        Family { n, k, shapes }
    }

    fn of_model(q: u32, n: usize, k: usize, model: RandomModel) -> Self {
        match model {
            RandomModel::Systematic => Family::systematic(q, n, k),
            RandomModel::UniformSubspace => Family::subspaces(q, n, k),
        }
    }

    fn size(&self, q: u32) -> BigInt {
        self.shapes.iter().map(|(s, _)| s.count(q)).sum()
    }

    /// Disjoint `(shape, start, end)` counter ranges covering the family.
    fn chunks(&self) -> Vec<(usize, u64, u64)> {
        let mut out = Vec::new();
        for (i, (_, count)) in self.shapes.iter().enumerate() {
            let mut start = 0;
            while start < *count {
                let end = (start + CHUNK).min(*count);
                out.push((i, start, end));
                start = end;
            }
        }
        out
    }

    fn for_each_in(
        &self,
        q: u32,
        chunk: (usize, u64, u64),
        buf: &mut Vec<FieldElem>,
        mut visit: impl FnMut(&[FieldElem]),
    ) {
        let (i, start, end) = chunk;
        buf.resize(self.k * self.n, FieldElem::ZERO);
        let shape = &self.shapes[i].0;
        for counter in start..end {
            shape.fill(q, self.n, counter, buf);
            visit(buf);
        }
    }

    fn for_each(&self, q: u32, buf: &mut Vec<FieldElem>, mut visit: impl FnMut(&[FieldElem])) {
        for (i, (_, count)) in self.shapes.iter().enumerate() {
            self.for_each_in(q, (i, 0, *count), buf, &mut visit);
        }
    }
}

fn codes_of(f: &FieldSpec, fam: Family) -> impl Iterator<Item = LinearCode> + '_ {
    let n = fam.n;
    fam.shapes
        .into_iter()
        .flat_map(move |(s, count)| (0..count).map(move |c| s.code(f, n, c)))
}

/// All `q^{k(n-k)}` generators `[I_k | A]`, in lexicographic order of `A`
/// (row-major, first entry most significant).
pub fn enumerate_systematic<'a>(
    f: &'a FieldSpec,
    n: usize,
    k: usize,
    budget: &mut EnumBudget,
) -> Result<impl Iterator<Item = LinearCode> + 'a> {
    check_dim(n, k)?;
    let fam = Family::systematic(f.q(), n, k);
    budget.charge(&fam.size(f.q()))?;
    Ok(codes_of(f, fam))
}

/// Every `k`-dimensional subspace of F_q^n exactly once, by pivot set then free entries.
pub fn enumerate_subspaces<'a>(
    f: &'a FieldSpec,
    n: usize,
    k: usize,
    budget: &mut EnumBudget,
) -> Result<impl Iterator<Item = LinearCode> + 'a> {
    check_dim(n, k)?;
    let fam = Family::subspaces(f.q(), n, k);
    budget.charge(&fam.size(f.q()))?;
    Ok(codes_of(f, fam))
}

/// Exact average over all ordered pairs `(a, b)` of `value(a, b)`, with `a`
/// from `fa` and `b` from `fb`. Parallel over chunks of `fa`.
fn pair_average<V>(q: u32, fa: &Family, fb: &Family, budget: &mut EnumBudget, value: V) -> Result<BigRat>
where
    V: Fn(&[FieldElem], &[FieldElem], &mut Vec<FieldElem>) -> u128 + Sync,
{
    let total = fa.size(q) * fb.size(q);
    budget.charge(&total)?;
    let sum: BigInt = fa
        .chunks()
        .into_par_iter()
        .map(|chunk| {
            let (mut ba, mut bb, mut scratch) = (Vec::new(), Vec::new(), Vec::new());
            let mut acc = BigInt::zero();
            let mut local: u128 = 0;
            fa.for_each_in(q, chunk, &mut ba, |a| {
                fb.for_each(q, &mut bb, |b| {
                    let v = value(a, b, &mut scratch);
                    match local.checked_add(v) {
                        Some(s) => local = s,
                        None => {
                            acc += local;
                            local = v;
                        }
                    }
                });
            });
            acc + local
        })
        .sum();
    Ok(BigRat::new(sum, total))
}

/// Exact `E[|ker psi|]` over all systematic pairs, as the mean of `q^{k1 k2 - dim(C1 * C2)}`.
pub fn exact_expected_kernel(p: &Params, budget: &mut EnumBudget) -> Result<BigRat> {
    let f = FieldSpec::from_order(p.q())?;
    let (q, n, k1, k2) = (f.q(), p.n(), p.k1(), p.k2());
    let kk = (k1 * k2) as u32;
    let qq = q as u128;
    if qq.checked_pow(kk).is_none() {
        return Err(Error::BudgetExceeded {
            needed: format!("{q}^{kk} per pair"),
            limit: u64::MAX,
        });
    }
    let fa = Family::systematic(q, n, k1);
    let fb = Family::systematic(q, n, k2);
    pair_average(q, &fa, &fb, budget, |a, b, s| {
        qq.pow(kk - star_rank(&f, a, k1, b, k2, n, s) as u32)
    })
}

/// Exact `E[dim(C1 * C2)]` over all pairs of the given model.
pub fn exact_expected_star_dim(p: &Params, model: RandomModel, budget: &mut EnumBudget) -> Result<BigRat> {
    let f = FieldSpec::from_order(p.q())?;
    let (q, n, k1, k2) = (f.q(), p.n(), p.k1(), p.k2());
    let fa = Family::of_model(q, n, k1, model);
    let fb = Family::of_model(q, n, k2, model);
    pair_average(q, &fa, &fb, budget, |a, b, s| star_rank(&f, a, k1, b, k2, n, s) as u128)
}

/// Exact `E[dim(C * D)]` for fixed `C` and `D` uniform over `l`-dimensional subspaces.
pub fn exact_expected_star_dim_fixed(c: &LinearCode, l: usize, budget: &mut EnumBudget) -> Result<BigRat> {
    let f = c.field();
    let (q, n, k) = (f.q(), c.n(), c.k());
    check_dim(n, l)?;
    let fam = Family::subspaces(q, n, l);
    let total = fam.size(q);
    budget.charge(&total)?;
    let g = c.basis().elems();
    let sum: u128 = fam
        .chunks()
        .into_par_iter()
        .map(|chunk| {
            let (mut buf, mut scratch) = (Vec::new(), Vec::new());
            let mut acc: u128 = 0;
            fam.for_each_in(q, chunk, &mut buf, |d| {
                acc += star_rank(f, g, k, d, l, n, &mut scratch) as u128;
            });
            acc
        })
        .sum();
    Ok(BigRat::new(BigInt::from(sum), total))
}

/// Exact `E[dim(C1 ∩ C2)]` over all pairs of subspaces.
pub fn exact_expected_intersection(p: &Params, budget: &mut EnumBudget) -> Result<BigRat> {
    let f = FieldSpec::from_order(p.q())?;
    let (q, n, k1, k2) = (f.q(), p.n(), p.k1(), p.k2());
    let fa = Family::subspaces(q, n, k1);
    let fb = Family::subspaces(q, n, k2);
    pair_average(q, &fa, &fb, budget, |a, b, s| {
        s.clear();
        s.extend_from_slice(a);
        s.extend_from_slice(b);
        (k1 + k2 - rank_in_place(&f, s, k1 + k2, n)) as u128
    })
}

/// Counts of zero-diagonal `k1 x k2` matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroDiagCounts {
    /// `by_rank[r]`: matrices of rank `r`.
    pub by_rank: Vec<u64>,
    /// `by_rank_mask[r][m]`: matrices of rank `r` whose zero columns among the
    /// last `k2 - k1` are exactly those in bitmask `m`.
    pub by_rank_mask: Vec<Vec<u64>>,
}

/// Enumerates all `k1 x k2` matrices with `A_{ii} = 0`, bucketed by rank and zero extra columns.
pub fn count_zero_diag_oracle(k1: usize, k2: usize, q: u64, budget: &mut EnumBudget) -> Result<ZeroDiagCounts> {
    if k1 > k2 {
        return Err(Error::BadRange(format!("need k1 <= k2, got {k1} > {k2}")));
    }
    let f = FieldSpec::from_order(q)?;
    let free: Vec<usize> = (0..k1 * k2).filter(|&idx| idx / k2 != idx % k2).collect();
    let total = budget.charge(&num_traits::pow(BigInt::from(q), free.len()))?;
    let extra = k2 - k1;
    let mut by_rank_mask = vec![vec![0u64; 1 << extra]; k1 + 1];
    let mut m = vec![FieldElem::ZERO; k1 * k2];
    let mut scratch = Vec::with_capacity(k1 * k2);
    for counter in 0..total {
        let mut c = counter;
        for &idx in &free {
            m[idx] = FieldElem::from_raw((c % q) as u32);
            c /= q;
        }
        let mut mask = 0usize;
        for e in 0..extra {
            if (0..k1).all(|r| m[r * k2 + k1 + e].is_zero()) {
                mask |= 1 << e;
            }
        }
        scratch.clear();
        scratch.extend_from_slice(&m);
        let r = rank_in_place(&f, &mut scratch, k1, k2);
        by_rank_mask[r][mask] += 1;
    }
    let by_rank = by_rank_mask.iter().map(|row| row.iter().sum()).collect();
    Ok(ZeroDiagCounts { by_rank, by_rank_mask })
}

/// Distribution of supports: `out[s]` counts `l`-dimensional subspaces with `|supp| = s`,
/// keyed by the exact support set.
pub fn support_histogram(
    f: &FieldSpec,
    n: usize,
    l: usize,
    budget: &mut EnumBudget,
) -> Result<BTreeMap<Vec<usize>, u64>> {
    let mut out = BTreeMap::new();
    for d in enumerate_subspaces(f, n, l, budget)? {
        *out.entry(d.support()).or_insert(0) += 1;
    }
    Ok(out)
}

/// Both exact expectations `E[dim(C * D)]` and `E[dim(CM * D)]` over `l`-dimensional `D`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    pub equal: bool,
    pub original: BigRat,
    pub transformed: BigRat,
}

pub fn monomial_invariance_check(
    c: &LinearCode,
    m: &Monomial,
    l: usize,
    budget: &mut EnumBudget,
) -> Result<InvarianceReport> {
    let image = c.apply_monomial(m)?;
    let original = exact_expected_star_dim_fixed(c, l, budget)?;
    let transformed = exact_expected_star_dim_fixed(&image, l, budget)?;
    Ok(InvarianceReport {
        equal: original == transformed,
        original,
        transformed,
    })
}

/// `qbinom(n, k)_q` as a count, for budgeting subspace enumerations.
pub fn subspace_count(q: u64, n: usize, k: usize) -> BigInt {
    qbinom(n as i64, k as i64, q)
}
