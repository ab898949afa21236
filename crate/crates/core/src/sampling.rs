//! Random codes under the systematic and uniform-subspace models, and
//! reproducible Monte Carlo estimates of star-product dimension, kernel size
//! and intersection dimension.
//!
//! Sample `i` of a run with seed `s` draws from ChaCha8 keyed by `s` on
//! stream `i`, and sums are exact integers, so estimates do not depend on how
//! the work is split across threads.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{star_rank, LinearCode};
use crate::error::{Error, Result};
use crate::exactcomb::{star_dim_lower_bound, to_f64, BigRat, Params};
use crate::fqlinalg::{rank_in_place, FieldElem, FieldSpec};

/// Default Monte Carlo sample count.
pub const DEFAULT_SAMPLES: u64 = 100_000;

/// Full-rank rejection attempts allowed per uniform-subspace draw.
pub const REJECTION_BUDGET: usize = 1000;

const CHUNK: u64 = 1024;

/// The `(n, k1, k2)` shapes of the comparison table, each run at q = 2, 3, 5, 7.
pub const TABLE1_SHAPES: [(usize, usize, usize); 9] = [
    (7, 2, 3),
    (7, 3, 3),
    (7, 3, 4),
    (11, 2, 3),
    (11, 3, 3),
    (11, 3, 4),
    (15, 2, 3),
    (15, 3, 3),
    (15, 3, 4),
];
pub const TABLE1_FIELDS: [u64; 4] = [2, 3, 5, 7];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomModel {
    /// Generator `[I_k | A]` with `A` uniform.
    Systematic,
    /// Uniform over the Grassmannian of `k`-dimensional subspaces.
    UniformSubspace,
}

impl fmt::Display for RandomModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RandomModel::Systematic => "systematic",
            RandomModel::UniformSubspace => "uniform_subspace",
        })
    }
}

impl FromStr for RandomModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "systematic" => Ok(RandomModel::Systematic),
            "uniform_subspace" | "uniform" | "subspace" => Ok(RandomModel::UniformSubspace),
            other => Err(Error::InvalidParams(format!("unknown random model `{other}`"))),
        }
    }
}

/// The generator for sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn random_elem(rng: &mut impl Rng, q: u32) -> FieldElem {
    FieldElem::from_raw(rng.random_range(0..q))
}

/// Writes a `k x n` generator drawn under `model` into `out`; rows are independent.
fn draw_generator(
    f: &FieldSpec,
    n: usize,
    k: usize,
    model: RandomModel,
    rng: &mut impl Rng,
    out: &mut Vec<FieldElem>,
    scratch: &mut Vec<FieldElem>,
) -> Result<()> {
    let q = f.q();
    out.clear();
    match model {
        RandomModel::Systematic => {
            for i in 0..k {
                out.extend((0..k).map(|j| if i == j { FieldElem::ONE } else { FieldElem::ZERO }));
                out.extend((k..n).map(|_| random_elem(rng, q)));
            }
            Ok(())
        }
        RandomModel::UniformSubspace => {
            for _ in 0..REJECTION_BUDGET {
                out.clear();
                out.extend((0..k * n).map(|_| random_elem(rng, q)));
                scratch.clear();
                scratch.extend_from_slice(out);
                if rank_in_place(f, scratch, k, n) == k {
                    return Ok(());
                }
            }
            Err(Error::RejectionBudgetExceeded(REJECTION_BUDGET))
        }
    }
}

/// Draws one `[n, k]_q` code under `model`.
pub fn sample_code(f: &FieldSpec, n: usize, k: usize, model: RandomModel, rng: &mut impl Rng) -> Result<LinearCode> {
    if k == 0 || k > n {
        return Err(Error::BadRange(format!("dimension {k} outside [1, {n}]")));
    }
    let (mut g, mut scratch) = (Vec::new(), Vec::new());
    draw_generator(f, n, k, model, rng, &mut g, &mut scratch)?;
    match model {
        RandomModel::Systematic => Ok(LinearCode::from_systematic_part(f, k, n, &systematic_tail(&g, k, n))),
        RandomModel::UniformSubspace => {
            LinearCode::from_matrix(&crate::fqlinalg::Mat::from_elems_unchecked(f, k, n, g))
        }
    }
}

fn systematic_tail(g: &[FieldElem], k: usize, n: usize) -> Vec<FieldElem> {
    (0..k).flat_map(|i| g[i * n + k..(i + 1) * n].iter().copied()).collect()
}

/// Reusable buffers for drawing a pair of generators and measuring it.
struct PairSampler {
    f: FieldSpec,
    p: Params,
    model: RandomModel,
    g1: Vec<FieldElem>,
    g2: Vec<FieldElem>,
    scratch: Vec<FieldElem>,
}

impl PairSampler {
    fn new(f: &FieldSpec, p: Params, model: RandomModel) -> Self {
        PairSampler {
            f: f.clone(),
            p,
            model,
            g1: Vec::new(),
            g2: Vec::new(),
            scratch: Vec::new(),
        }
    }

    fn draw(&mut self, rng: &mut ChaCha8Rng) -> Result<()> {
        let (n, k1, k2) = (self.p.n(), self.p.k1(), self.p.k2());
        draw_generator(&self.f, n, k1, self.model, rng, &mut self.g1, &mut self.scratch)?;
        draw_generator(&self.f, n, k2, self.model, rng, &mut self.g2, &mut self.scratch)
    }

    fn star_dim(&mut self) -> usize {
        let (n, k1, k2) = (self.p.n(), self.p.k1(), self.p.k2());
        star_rank(&self.f, &self.g1, k1, &self.g2, k2, n, &mut self.scratch)
    }

    fn intersection_dim(&mut self) -> usize {
        let (n, k1, k2) = (self.p.n(), self.p.k1(), self.p.k2());
        self.scratch.clear();
        self.scratch.extend_from_slice(&self.g1);
        self.scratch.extend_from_slice(&self.g2);
        k1 + k2 - rank_in_place(&self.f, &mut self.scratch, k1 + k2, n)
    }
}

/// Exact running sums of integer samples and their squares.
#[derive(Clone, Debug, Default)]
struct Sums {
    sum: BigInt,
    sum_sq: BigInt,
}

impl Sums {
    fn add_small(&mut self, v: u64) {
        self.sum += v;
        self.sum_sq += (v as u128) * (v as u128);
    }

    fn add_big(&mut self, v: BigInt) {
        self.sum_sq += &v * &v;
        self.sum += v;
    }

    fn merge(mut self, other: Sums) -> Sums {
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self
    }
}

/// A Monte Carlo estimate with exact integer aggregates.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub params: Params,
    pub model: RandomModel,
    pub samples: u64,
    pub seed: u64,
    pub sum: BigInt,
    pub sum_sq: BigInt,
    pub mean: BigRat,
    /// Sample standard deviation divided by `sqrt(samples)`; zero for one sample.
    pub stderr: f64,
}

impl Estimate {
    fn from_sums(params: Params, model: RandomModel, samples: u64, seed: u64, s: Sums) -> Self {
        let nn = BigInt::from(samples);
        let mean = BigRat::new(s.sum.clone(), nn.clone());
        let stderr = if samples > 1 {
            let var_num = &nn * &s.sum_sq - &s.sum * &s.sum;
            let var_den = &nn * &nn * BigInt::from(samples - 1);
            to_f64(&BigRat::new(var_num, var_den)).sqrt()
        } else {
            0.0
        };
        Estimate {
            params,
            model,
            samples,
            seed,
            sum: s.sum,
            sum_sq: s.sum_sq,
            mean,
            stderr,
        }
    }

    pub fn mean_f64(&self) -> f64 {
        to_f64(&self.mean)
    }

    /// The flat JSON record, optionally carrying a reference bound and the ratio mean / bound.
    pub fn record(&self, bound: Option<f64>) -> EstimateRecord {
        let mean_f64 = self.mean_f64();
        EstimateRecord {
            q: self.params.q(),
            n: self.params.n(),
            k1: self.params.k1(),
            k2: self.params.k2(),
            model: self.model,
            samples: self.samples,
            seed: self.seed,
            sum: self.sum.to_string(),
            mean_num: self.mean.numer().to_string(),
            mean_den: self.mean.denom().to_string(),
            mean_f64,
            stderr: self.stderr,
            bound,
            ratio: bound.map(|b| mean_f64 / b),
        }
    }
}

/// Serialised form of an [`Estimate`]; big integers are decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub q: u64,
    pub n: usize,
    pub k1: usize,
    pub k2: usize,
    pub model: RandomModel,
    pub samples: u64,
    pub seed: u64,
    pub sum: String,
    pub mean_num: String,
    pub mean_den: String,
    pub mean_f64: f64,
    pub stderr: f64,
    pub bound: Option<f64>,
    pub ratio: Option<f64>,
}

fn run<F>(p: &Params, model: RandomModel, samples: u64, seed: u64, measure: F) -> Result<Estimate>
where
    F: Fn(&mut PairSampler, &mut Sums) -> Result<()> + Sync,
{
    if samples == 0 {
        return Err(Error::BadRange("at least one sample is required".into()));
    }
    let f = FieldSpec::from_order(p.q())?;
    let chunks = samples.div_ceil(CHUNK);
    let sums = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut sampler = PairSampler::new(&f, *p, model);
            let mut acc = Sums::default();
            for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                let mut rng = sample_rng(seed, i);
                sampler.draw(&mut rng)?;
                measure(&mut sampler, &mut acc)?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<Sums>>>()?
        .into_iter()
        .fold(Sums::default(), Sums::merge);
    Ok(Estimate::from_sums(*p, model, samples, seed, sums))
}

/// Mean of `dim(C1 * C2)` over independent random pairs.
pub fn mc_star_dim(p: &Params, model: RandomModel, samples: u64, seed: u64) -> Result<Estimate> {
    run(p, model, samples, seed, |s, acc| {
        let d = s.star_dim();
        acc.add_small(d as u64);
        Ok(())
    })
}

/// Mean of `|ker psi| = q^{k1 k2 - dim(C1 * C2)}` over independent random pairs.
pub fn mc_kernel_size(p: &Params, model: RandomModel, samples: u64, seed: u64) -> Result<Estimate> {
    let (q, kk) = (p.q(), p.k1() * p.k2());
    run(p, model, samples, seed, move |s, acc| {
        let e = (kk - s.star_dim()) as u32;
        match q.checked_pow(e) {
            Some(v) => acc.add_small(v),
            None => acc.add_big(num_traits::pow(BigInt::from(q), e as usize)),
        }
        Ok(())
    })
}

/// Fraction of pairs with `dim(C1 * C2) = min(k1 k2, n)`, as a mean of 0/1 samples.
pub fn mc_full_dim_frequency(p: &Params, model: RandomModel, samples: u64, seed: u64) -> Result<Estimate> {
    let full = (p.k1() * p.k2()).min(p.n());
    run(p, model, samples, seed, move |s, acc| {
        acc.add_small((s.star_dim() == full) as u64);
        Ok(())
    })
}

/// Mean of `dim(C1 ∩ C2)` for independent uniform subspaces.
pub fn mc_intersection_dim(p: &Params, samples: u64, seed: u64) -> Result<Estimate> {
    run(p, RandomModel::UniformSubspace, samples, seed, |s, acc| {
        acc.add_small(s.intersection_dim() as u64);
        Ok(())
    })
}

/// One row of the bound-versus-simulation table.
#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub params: Params,
    pub bound: f64,
    pub estimate: Estimate,
    pub ratio: f64,
}

impl TableRow {
    pub fn csv_line(&self) -> String {
        let p = &self.params;
        format!(
            "{},{},{},{},{:.5},{:.5},{:.5}",
            p.n(),
            p.k1(),
            p.k2(),
            p.q(),
            self.estimate.mean_f64(),
            self.bound,
            self.ratio
        )
    }
}

pub const TABLE1_CSV_HEADER: &str = "n,k1,k2,q,mc_mean,bound,ratio";

/// The parameter rows of the table in order: shapes outer, field sizes inner.
pub fn table1_params() -> Vec<Params> {
    TABLE1_SHAPES
        .iter()
        .flat_map(|&(n, k1, k2)| TABLE1_FIELDS.iter().map(move |&q| Params::new(q, n, k1, k2).unwrap()))
        .collect()
}

/// Every row: Jensen bound, systematic-model Monte Carlo mean (same seed for each row) and their ratio.
pub fn reproduce_table1(samples: u64, seed: u64) -> Result<Vec<TableRow>> {
    table1_params()
        .into_iter()
        .map(|p| {
            let bound = star_dim_lower_bound(&p).value;
            let estimate = mc_star_dim(&p, RandomModel::Systematic, samples, seed)?;
            let ratio = estimate.mean_f64() / bound;
            Ok(TableRow {
                params: p,
                bound,
                estimate,
                ratio,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcomb::{expected_intersection_dim, expected_kernel_size};
    use num_traits::One;
    use std::collections::HashMap;

    fn p(q: u64, n: usize, k1: usize, k2: usize) -> Params {
        Params::new(q, n, k1, k2).unwrap()
    }

    fn within(est: &Estimate, exact: &BigRat, sigmas: f64) -> bool {
        (est.mean_f64() - to_f64(exact)).abs() <= sigmas * est.stderr.max(1e-12)
    }

    #[test]
    fn systematic_draw_is_reproducible() {
        let f = FieldSpec::from_order(2).unwrap();
        let a = sample_code(&f, 3, 2, RandomModel::Systematic, &mut sample_rng(9, 4)).unwrap();
        let b = sample_code(&f, 3, 2, RandomModel::Systematic, &mut sample_rng(9, 4)).unwrap();
        assert_eq!(a, b);
        assert!(a.systematic().is_some());
        assert_eq!(a.k(), 2);
    }

    #[test]
    fn uniform_subspace_lines_are_uniform() {
        let f = FieldSpec::from_order(2).unwrap();
        let draws = 30_000u64;
        let mut freq: HashMap<LinearCode, u64> = HashMap::new();
        for i in 0..draws {
            let c = sample_code(&f, 2, 1, RandomModel::UniformSubspace, &mut sample_rng(1, i)).unwrap();
            *freq.entry(c).or_default() += 1;
        }
        assert_eq!(freq.len(), 3);
        let sigma = (draws as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for &count in freq.values() {
            assert!((count as f64 - draws as f64 / 3.0).abs() < 3.0 * sigma);
        }
    }

    #[test]
    fn model_parsing() {
        assert_eq!("systematic".parse::<RandomModel>().unwrap(), RandomModel::Systematic);
        assert_eq!(
            "uniform-subspace".parse::<RandomModel>().unwrap(),
            RandomModel::UniformSubspace
        );
        assert!("other".parse::<RandomModel>().is_err());
        assert_eq!(RandomModel::UniformSubspace.to_string(), "uniform_subspace");
    }

    #[test]
    fn full_space_pair_is_constant() {
        let e = mc_star_dim(&p(3, 4, 4, 4), RandomModel::Systematic, 500, 1).unwrap();
        assert_eq!(e.mean, BigRat::from_integer(BigInt::from(4)));
        assert_eq!(e.stderr, 0.0);
        let fr = mc_full_dim_frequency(&p(3, 4, 4, 4), RandomModel::UniformSubspace, 300, 1).unwrap();
        assert_eq!(fr.mean, BigRat::one());
    }

    #[test]
    fn kernel_of_lines_is_trivial() {
        for n in 1..6 {
            let e = mc_kernel_size(&p(2, n, 1, 1), RandomModel::Systematic, 2000, 3).unwrap();
            assert_eq!(e.mean, BigRat::one());
        }
    }

    #[test]
    fn kernel_estimates_match_exact_values() {
        for pp in [p(2, 3, 2, 2), p(2, 4, 2, 2)] {
            let e = mc_kernel_size(&pp, RandomModel::Systematic, 200_000, 11).unwrap();
            assert!(within(&e, &expected_kernel_size(&pp), 3.0), "{pp:?}: {}", e.mean_f64());
        }
    }

    #[test]
    fn intersection_estimates_match_exact_values() {
        for pp in [p(2, 2, 1, 1), p(2, 3, 1, 2)] {
            let e = mc_intersection_dim(&pp, 100_000, 5).unwrap();
            assert!(within(&e, &expected_intersection_dim(&pp), 3.0), "{pp:?}");
        }
        let e = mc_intersection_dim(&p(3, 4, 2, 4), 1000, 5).unwrap();
        assert_eq!(e.mean, BigRat::from_integer(BigInt::from(2)));
    }

    #[test]
    fn estimates_do_not_depend_on_thread_count() {
        let pp = p(3, 7, 2, 3);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| mc_star_dim(&pp, RandomModel::UniformSubspace, 5000, 77).unwrap());
        let b = four.install(|| mc_star_dim(&pp, RandomModel::UniformSubspace, 5000, 77).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn star_dim_samples_in_range() {
        let e = mc_star_dim(&p(2, 7, 3, 4), RandomModel::Systematic, 3000, 2).unwrap();
        let m = e.mean_f64();
        assert!((1.0..=7.0).contains(&m));
    }

    #[test]
    fn table_layout() {
        let rows = table1_params();
        assert_eq!(rows.len(), 36);
        assert_eq!(rows[0], p(2, 7, 2, 3));
        assert_eq!(rows[35], p(7, 15, 3, 4));
        let r = reproduce_table1(50, 1).unwrap();
        assert_eq!(r.len(), 36);
        assert!(r[0].csv_line().starts_with("7,2,3,2,"));
    }

    #[test]
    fn record_fields() {
        let e = mc_star_dim(&p(2, 4, 2, 2), RandomModel::Systematic, 10, 3).unwrap();
        let rec = e.record(Some(2.0));
        assert_eq!(rec.sum, e.sum.to_string());
        assert_eq!(rec.ratio, Some(rec.mean_f64 / 2.0));
    }
}
