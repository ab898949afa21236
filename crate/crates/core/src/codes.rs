//! Linear codes held in canonical form, and the deterministic computations on
//! them: star product, dual, minimum distance, support, projection, MDS test,
//! intersection and the classical lower bounds on star-product dimension.

use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::fqlinalg::{rank_in_place, FieldElem, FieldSpec, Mat};

/// Default limit on the number of codewords enumerated by [`LinearCode::min_distance`].
pub const DEFAULT_DISTANCE_BUDGET: u64 = 1 << 24;

/// A nonzero subspace of F_q^n, stored as the RREF of any generator matrix.
///
/// Two codes compare equal iff their RREF bases are identical, i.e. iff
/// they are the same subspace.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearCode {
    basis: Mat,
    pivots: Vec<usize>,
}

impl Hash for LinearCode {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.basis.field().q().hash(state);
        self.basis.cols().hash(state);
        self.basis.elems().hash(state);
    }
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]_{} {:?}",
            self.n(),
            self.k(),
            self.field().q(),
            self.basis.to_u32_rows()
        )
    }
}

fn check_compatible(a: &LinearCode, b: &LinearCode) -> Result<()> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().q(), b.field().q()));
    }
    if a.n() != b.n() {
        return Err(Error::LengthMismatch(a.n(), b.n()));
    }
    Ok(())
}

/// Rank of the `k1*k2` pairwise componentwise products of the rows of `g1` and `g2`.
///
/// `scratch` is reused across calls to avoid reallocating in hot loops.
pub(crate) fn star_rank(
    f: &FieldSpec,
    g1: &[FieldElem],
    k1: usize,
    g2: &[FieldElem],
    k2: usize,
    n: usize,
    scratch: &mut Vec<FieldElem>,
) -> usize {
    scratch.clear();
    scratch.reserve(k1 * k2 * n);
    for i in 0..k1 {
        let a = &g1[i * n..(i + 1) * n];
        for j in 0..k2 {
            let b = &g2[j * n..(j + 1) * n];
            scratch.extend(a.iter().zip(b).map(|(&x, &y)| f.mul(x, y)));
        }
    }
    rank_in_place(f, scratch, k1 * k2, n)
}

/// Reduces `v` against an echelon set; returns `true` if `v` becomes zero.
/// Otherwise `v` is normalised and appended to the set.
fn reduce_into(f: &FieldSpec, basis: &mut Vec<(usize, Vec<FieldElem>)>, mut v: Vec<FieldElem>) -> bool {
    for (piv, b) in basis.iter() {
        let c = v[*piv];
        if !c.is_zero() {
            f.sub_scaled(&mut v, c, b);
        }
    }
    match v.iter().position(|x| !x.is_zero()) {
        None => true,
        Some(p) => {
            let inv = f.inv_nonzero(v[p]);
            f.scale(&mut v, inv);
            basis.push((p, v));
            false
        }
    }
}

impl LinearCode {
    /// The code spanned by the rows of `m`.
    pub fn from_matrix(m: &Mat) -> Result<Self> {
        let r = m.rref();
        let k = r.pivots.len();
        if k == 0 {
            return Err(Error::ZeroCode);
        }
        Ok(LinearCode {
            basis: r.matrix.truncate_rows(k),
            pivots: r.pivots,
        })
    }

    /// Wraps a basis that is already in RREF with the given pivots.
    pub(crate) fn from_rref_unchecked(basis: Mat, pivots: Vec<usize>) -> Self {
        debug_assert_eq!(basis.rows(), pivots.len());
        debug_assert!(!pivots.is_empty());
        LinearCode { basis, pivots }
    }

    /// The code generated by `[I_k | a]`, where `a` holds `k*(n-k)` entries row-major.
    pub(crate) fn from_systematic_part(f: &FieldSpec, k: usize, n: usize, a: &[FieldElem]) -> Self {
        debug_assert_eq!(a.len(), k * (n - k));
        let mut data = vec![FieldElem::ZERO; k * n];
        for i in 0..k {
            data[i * n + i] = FieldElem::ONE;
            data[i * n + k..(i + 1) * n].copy_from_slice(&a[i * (n - k)..(i + 1) * (n - k)]);
        }
        LinearCode {
            basis: Mat::from_elems_unchecked(f, k, n, data),
            pivots: (0..k).collect(),
        }
    }

    /// F_q^n.
    pub fn full_space(f: &FieldSpec, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroCode);
        }
        Ok(LinearCode {
            basis: Mat::identity(f, n)?,
            pivots: (0..n).collect(),
        })
    }

    /// The length-`n` repetition code `<(1, ..., 1)>`.
    pub fn repetition(f: &FieldSpec, n: usize) -> Result<Self> {
        Self::from_matrix(&Mat::from_rows(f, &[vec![1u32; n]])?)
    }

    /// The evaluation code of polynomials of degree `< k` at `points`
    /// (a Reed-Solomon code when the points are distinct).
    pub fn evaluation(f: &FieldSpec, points: &[FieldElem], k: usize) -> Result<Self> {
        let n = points.len();
        let mut data = Vec::with_capacity(k * n);
        for i in 0..k {
            data.extend(points.iter().map(|&x| f.pow(x, i as u64)));
        }
        Self::from_matrix(&Mat::from_elems(f, k, n, data)?)
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        self.basis.field()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.basis.cols()
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.basis.rows()
    }

    /// The canonical (RREF) generator matrix.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The systematic generator `[I_k | A]`, present when the first `k`
    /// coordinates form an information set.
    pub fn systematic(&self) -> Option<&Mat> {
        self.pivots
            .iter()
            .enumerate()
            .all(|(i, &p)| i == p)
            .then_some(&self.basis)
    }

    /// Span of all componentwise products `b_i * c_j` of basis rows.
    pub fn star(&self, other: &LinearCode) -> Result<LinearCode> {
        check_compatible(self, other)?;
        let (k1, k2, n) = (self.k(), other.k(), self.n());
        let f = self.field();
        let mut data = Vec::with_capacity(k1 * k2 * n);
        for a in self.basis.iter_rows() {
            for b in other.basis.iter_rows() {
                data.extend(a.iter().zip(b).map(|(&x, &y)| f.mul(x, y)));
            }
        }
        Self::from_matrix(&Mat::from_elems_unchecked(f, k1 * k2, n, data))
    }

    /// `dim(self * other)` without building the product code.
    pub fn star_dim(&self, other: &LinearCode) -> Result<usize> {
        check_compatible(self, other)?;
        let mut scratch = Vec::new();
        Ok(star_rank(
            self.field(),
            self.basis.elems(),
            self.k(),
            other.basis.elems(),
            other.k(),
            self.n(),
            &mut scratch,
        ))
    }

    /// A parity-check matrix: rows span the dual. Has zero rows when `k = n`.
    pub fn parity_check(&self) -> Mat {
        self.basis.right_kernel_basis()
    }

    pub fn dual(&self) -> Result<LinearCode> {
        if self.k() == self.n() {
            return Err(Error::ZeroDual);
        }
        Self::from_matrix(&self.parity_check())
    }

    /// Calls `visit` on every nonzero codeword. Consecutive words differ by one
    /// generator of the code viewed as an F_p-space, so each step is a single
    /// vector addition.
    pub fn for_each_nonzero_codeword(&self, budget: u64, mut visit: impl FnMut(&[FieldElem]) -> bool) -> Result<()> {
        let q = self.field().q() as u64;
        let total = (q as u128).checked_pow(self.k() as u32);
        if total.is_none_or(|t| t > budget as u128) {
            return Err(Error::BudgetExceeded {
                needed: format!("{q}^{}", self.k()),
                limit: budget,
            });
        }
        let f = self.field();
        let p = f.p();
        let n = self.n();
        let gens: Vec<Vec<FieldElem>> = self
            .basis
            .iter_rows()
            .flat_map(|row| {
                f.prime_basis().into_iter().map(move |b| {
                    let mut v = row.to_vec();
                    f.scale(&mut v, b);
                    v
                })
            })
            .collect();
        let mut digits = vec![0u32; gens.len()];
        let mut word = vec![FieldElem::ZERO; n];
        loop {
            let mut i = 0;
            loop {
                if i == gens.len() {
                    return Ok(());
                }
                f.add_assign(&mut word, &gens[i]);
                digits[i] += 1;
                if digits[i] == p {
                    digits[i] = 0;
                    i += 1;
                } else {
                    break;
                }
            }
            if !visit(&word) {
                return Ok(());
            }
        }
    }

    /// Minimum Hamming weight of a nonzero codeword, by enumeration.
    pub fn min_distance(&self) -> Result<usize> {
        self.min_distance_with_budget(DEFAULT_DISTANCE_BUDGET)
    }

    pub fn min_distance_with_budget(&self, budget: u64) -> Result<usize> {
        let mut best = self.n();
        self.for_each_nonzero_codeword(budget, |w| {
            let wt = w.iter().filter(|x| !x.is_zero()).count();
            if wt < best {
                best = wt;
            }
            best > 1
        })?;
        Ok(best)
    }

    /// `d(C^perp)`: the size of the smallest linearly dependent set of columns
    /// of a generator matrix. Found by depth-first search over column subsets
    /// with incremental elimination, so no dual codewords are enumerated.
    pub fn dual_distance(&self) -> Result<usize> {
        let (k, n) = (self.k(), self.n());
        if k == n {
            return Err(Error::ZeroDual);
        }
        let f = self.field();
        let columns: Vec<Vec<FieldElem>> = (0..n).map(|c| (0..k).map(|r| self.basis.get(r, c)).collect()).collect();
        // k + 1 columns are always dependent
        let mut best = k + 1;
        fn dfs(
            f: &FieldSpec,
            columns: &[Vec<FieldElem>],
            start: usize,
            basis: &mut Vec<(usize, Vec<FieldElem>)>,
            best: &mut usize,
        ) {
            let depth = basis.len();
            for j in start..columns.len() {
                if depth + 1 >= *best {
                    return;
                }
                if reduce_into(f, basis, columns[j].clone()) {
                    *best = depth + 1;
                    return;
                }
                dfs(f, columns, j + 1, basis, best);
                basis.pop();
            }
        }
        let mut basis = Vec::with_capacity(k);
        dfs(f, &columns, 0, &mut basis, &mut best);
        Ok(best)
    }

    /// Coordinates where some codeword is nonzero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&c| (0..self.k()).any(|r| !self.basis.get(r, c).is_zero()))
            .collect()
    }

    pub fn is_degenerate(&self) -> bool {
        self.support().len() != self.n()
    }

    /// Restriction of every codeword to the coordinates in `idx`.
    pub fn project(&self, idx: &[usize]) -> Result<LinearCode> {
        if idx.is_empty() {
            return Err(Error::BadRange("projection onto an empty index set".into()));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.n()) {
            return Err(Error::BadRange(format!("coordinate {bad} outside [0, {})", self.n())));
        }
        Self::from_matrix(&self.basis.select_columns(idx))
    }

    /// Whether `d = n - k + 1`; decided as `d(C^perp) = k + 1`, which is equivalent.
    pub fn is_mds(&self) -> Result<bool> {
        if self.k() == self.n() {
            return Ok(true);
        }
        Ok(self.dual_distance()? == self.k() + 1)
    }

    pub fn intersection_dim(&self, other: &LinearCode) -> Result<usize> {
        check_compatible(self, other)?;
        let stacked = self.basis.vstack(&other.basis)?;
        Ok(self.k() + other.k() - stacked.rank())
    }

    /// `self ∩ other` as a code, or `None` when the intersection is zero.
    pub fn intersection(&self, other: &LinearCode) -> Result<Option<LinearCode>> {
        check_compatible(self, other)?;
        let checks = self.parity_check().vstack(&other.parity_check())?;
        let common = checks.right_kernel_basis();
        if common.rows() == 0 {
            return Ok(None);
        }
        Self::from_matrix(&common).map(Some)
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &LinearCode) -> Result<bool> {
        check_compatible(self, other)?;
        Ok(self.basis.vstack(&other.basis)?.rank() == self.k())
    }

    /// Whether `v` is a codeword.
    pub fn contains_word(&self, v: &[FieldElem]) -> Result<bool> {
        if v.len() != self.n() {
            return Err(Error::LengthMismatch(self.n(), v.len()));
        }
        let row = Mat::from_elems(self.field(), 1, v.len(), v.to_vec())?;
        Ok(self.basis.vstack(&row)?.rank() == self.k())
    }

    /// The code with generator `G M` for a monomial matrix `M`.
    pub fn apply_monomial(&self, m: &Monomial) -> Result<LinearCode> {
        if m.n() != self.n() {
            return Err(Error::LengthMismatch(self.n(), m.n()));
        }
        Self::from_matrix(&self.basis.mul(&m.to_mat(self.field())?)?)
    }
}

/// A monomial (generalized permutation) matrix: row `i` has the single
/// nonzero entry `scale[i]` in column `perm[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    perm: Vec<usize>,
    scale: Vec<FieldElem>,
}

impl Monomial {
    pub fn new(perm: Vec<usize>, scale: Vec<FieldElem>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        if scale.len() != n || scale.iter().any(|s| s.is_zero()) {
            return Err(Error::NotMonomial);
        }
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::NotMonomial);
            }
        }
        Ok(Monomial { perm, scale })
    }

    pub fn identity(n: usize) -> Self {
        Monomial {
            perm: (0..n).collect(),
            scale: vec![FieldElem::ONE; n],
        }
    }

    /// Recognises a square matrix with exactly one nonzero entry per row and column.
    pub fn from_mat(m: &Mat) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::NotMonomial);
        }
        let mut perm = Vec::with_capacity(m.rows());
        let mut scale = Vec::with_capacity(m.rows());
        for row in m.iter_rows() {
            let mut nz = row.iter().enumerate().filter(|(_, x)| !x.is_zero());
            match (nz.next(), nz.next()) {
                (Some((c, &s)), None) => {
                    perm.push(c);
                    scale.push(s);
                }
                _ => return Err(Error::NotMonomial),
            }
        }
        Self::new(perm, scale)
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn to_mat(&self, f: &FieldSpec) -> Result<Mat> {
        let n = self.n();
        let mut m = Mat::zeros(f, n, n)?;
        for (i, (&c, &s)) in self.perm.iter().zip(&self.scale).enumerate() {
            if s.value() >= f.q() {
                return Err(Error::ElementOutOfRange {
                    value: s.value() as u64,
                    q: f.q(),
                });
            }
            m.set(i, c, s);
        }
        Ok(m)
    }
}

/// `min{n, k1 + d(C2^perp) - 2, k2 + d(C1^perp) - 2}`, a lower bound on
/// `dim(C1 * C2)` for non-degenerate codes.
pub fn star_lower_bound_dual_distance(c1: &LinearCode, c2: &LinearCode) -> Result<usize> {
    check_compatible(c1, c2)?;
    if c1.is_degenerate() || c2.is_degenerate() {
        return Err(Error::DegenerateInput);
    }
    let d1 = c1.dual_distance()?;
    let d2 = c2.dual_distance()?;
    let n = c1.n();
    Ok(n.min(c1.k() + d2 - 2).min(c2.k() + d1 - 2))
}

/// `min{n, k1 + k2 - 1}`, a lower bound on `dim(C1 * C2)` for non-degenerate
/// codes at least one of which is MDS.
pub fn star_lower_bound_mds(c1: &LinearCode, c2: &LinearCode) -> Result<usize> {
    check_compatible(c1, c2)?;
    if c1.is_degenerate() || c2.is_degenerate() {
        return Err(Error::DegenerateInput);
    }
    if !c1.is_mds()? && !c2.is_mds()? {
        return Err(Error::NeitherMds);
    }
    Ok(c1.n().min(c1.k() + c2.k() - 1))
}
