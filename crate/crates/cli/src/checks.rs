//! Closed forms against exhaustive enumeration over small parameter grids.
//!
//! Every case gets a fresh budget. A case that would exceed it is reported
//! as a budget failure rather than skipped.

use std::collections::HashSet;

use clap::ValueEnum;
use num_bigint::BigInt;
use num_traits::{pow, ToPrimitive};

use starprod::codes::LinearCode;
use starprod::exactcomb::{
    count_subspaces_with_support, count_zero_diag_rank, count_zero_diag_rank_zerocols, expected_intersection_dim,
    expected_kernel_size, expected_star_dim_mds, star_dim_lower_bound, to_f64, Params,
};
use starprod::fqlinalg::FieldSpec;
use starprod::oracle::{
    count_zero_diag_oracle, enumerate_systematic, exact_expected_intersection, exact_expected_kernel,
    exact_expected_star_dim, exact_expected_star_dim_fixed, support_histogram, EnumBudget,
};
use starprod::sampling::RandomModel;
use starprod::{Error, Result};

use crate::output::rat_str;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Kernel,
    Zerodiag,
    Intersection,
    Mds,
    Support,
    Jensen,
    All,
}

/// `(q, n, k1)` triples for the MDS check.
pub const MDS_CASES: [(u64, usize, usize); 4] = [(2, 3, 2), (3, 4, 2), (3, 4, 3), (5, 4, 2)];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Budget,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub check: &'static str,
    pub case: String,
    pub status: Status,
    pub detail: String,
}

impl Outcome {
    pub fn line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Budget => "BUDGET",
        };
        if self.detail.is_empty() {
            format!("{tag} {} {}", self.check, self.case)
        } else {
            format!("{tag} {} {} {}", self.check, self.case, self.detail)
        }
    }
}

/// Grid bounds shared by the checks; each check caps them further.
#[derive(Clone, Copy, Debug)]
pub struct Grid {
    pub qmax: u64,
    pub nmax: usize,
    pub budget: u64,
}

fn fields(qmax: u64) -> Vec<u64> {
    (2..=qmax).filter(|&q| FieldSpec::from_order(q).is_ok()).collect()
}

fn outcome(check: &'static str, case: String, r: Result<(bool, String)>) -> Result<Outcome> {
    let (status, detail) = match r {
        Ok((true, _)) => (Status::Pass, String::new()),
        Ok((false, d)) => (Status::Fail, d),
        Err(e @ Error::BudgetExceeded { .. }) => (Status::Budget, e.to_string()),
        Err(e) => return Err(e),
    };
    Ok(Outcome {
        check,
        case,
        status,
        detail,
    })
}

fn pair_grid(g: &Grid, qcap: u64, ncap: usize, kcap: usize) -> Vec<Params> {
    let mut out = Vec::new();
    for q in fields(g.qmax.min(qcap)) {
        for n in 1..=g.nmax.min(ncap) {
            for k2 in 1..=n.min(kcap) {
                for k1 in 1..=k2 {
                    out.push(Params::new(q, n, k1, k2).expect("valid grid point"));
                }
            }
        }
    }
    out
}

fn case(p: &Params) -> String {
    format!("q={} n={} k1={} k2={}", p.q(), p.n(), p.k1(), p.k2())
}

/// Kernel formula against enumeration of every systematic pair, `k2 <= 3`.
pub fn kernel(g: &Grid) -> Result<Vec<Outcome>> {
    pair_grid(g, u64::MAX, usize::MAX, 3)
        .into_iter()
        .map(|p| {
            let r = exact_expected_kernel(&p, &mut EnumBudget::new(g.budget)).map(|o| {
                let e = expected_kernel_size(&p);
                (o == e, format!("formula {} enumeration {}", rat_str(&e), rat_str(&o)))
            });
            outcome("kernel", case(&p), r)
        })
        .collect()
}

/// The bound never exceeds the exact systematic expectation, `k2 <= 3`.
pub fn jensen(g: &Grid) -> Result<Vec<Outcome>> {
    pair_grid(g, u64::MAX, usize::MAX, 3)
        .into_iter()
        .map(|p| {
            let r = exact_expected_star_dim(&p, RandomModel::Systematic, &mut EnumBudget::new(g.budget)).map(|o| {
                let b = star_dim_lower_bound(&p).value;
                let exact = to_f64(&o);
                (b <= exact + 1e-12, format!("bound {b} exceeds {exact}"))
            });
            outcome("jensen", case(&p), r)
        })
        .collect()
}

/// Intersection formula against enumeration of all subspace pairs, `n <= 4`.
pub fn intersection(g: &Grid) -> Result<Vec<Outcome>> {
    pair_grid(g, u64::MAX, 4, usize::MAX)
        .into_iter()
        .map(|p| {
            let r = exact_expected_intersection(&p, &mut EnumBudget::new(g.budget)).map(|o| {
                let e = expected_intersection_dim(&p);
                (o == e, format!("formula {} enumeration {}", rat_str(&e), rat_str(&o)))
            });
            outcome("intersection", case(&p), r)
        })
        .collect()
}

/// Zero-diagonal rank counts, by rank and by zero extra columns, for `k1 <= 3`, `k2 <= 4`,
/// then the total `q^{k1 k2 - k1}` for `k1, k2 <= 5`.
pub fn zerodiag(g: &Grid) -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    for q in fields(g.qmax) {
        for k2 in 1..=4 {
            for k1 in 1..=k2.min(3) {
                let r = count_zero_diag_oracle(k1, k2, q, &mut EnumBudget::new(g.budget)).and_then(|o| {
                    for r in 0..=k1 {
                        let s = count_zero_diag_rank(k1, k2, r, q)?;
                        if s != BigInt::from(o.by_rank[r]) {
                            return Ok((false, format!("rank {r}: formula {s} enumeration {}", o.by_rank[r])));
                        }
                        for (mask, &count) in o.by_rank_mask[r].iter().enumerate() {
                            let l = mask.count_ones() as usize;
                            let s = count_zero_diag_rank_zerocols(k1, k2, r, l, q)?;
                            if s != BigInt::from(count) {
                                return Ok((
                                    false,
                                    format!("rank {r} zero columns {mask:b}: formula {s} enumeration {count}"),
                                ));
                            }
                        }
                    }
                    Ok((true, String::new()))
                });
                out.push(outcome("zerodiag", format!("q={q} k1={k1} k2={k2}"), r)?);
            }
        }
    }
    for q in fields(5) {
        for k1 in 1..=5 {
            for k2 in k1..=5 {
                let total = (0..=k1).try_fold(BigInt::from(0), |acc, r| {
                    Ok::<_, Error>(acc + count_zero_diag_rank(k1, k2, r, q)?)
                })?;
                let expect = pow(BigInt::from(q), k1 * k2 - k1);
                out.push(outcome(
                    "zerodiag-total",
                    format!("q={q} k1={k1} k2={k2}"),
                    Ok((total == expect, format!("sum {total} expected {expect}"))),
                )?);
            }
        }
    }
    Ok(out)
}

/// Distinct MDS codes among all systematic `[n, k1]_q` codes.
pub fn mds_codes(f: &FieldSpec, n: usize, k1: usize, budget: u64) -> Result<Vec<LinearCode>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for c in enumerate_systematic(f, n, k1, &mut EnumBudget::new(budget))? {
        if c.is_mds()? && seen.insert(c.clone()) {
            out.push(c);
        }
    }
    Ok(out)
}

/// MDS formula against subspace enumeration for every MDS code of each listed shape
/// and every random dimension the formula covers.
pub fn mds(g: &Grid) -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    for &(q, n, k1) in MDS_CASES.iter().filter(|c| c.0 <= g.qmax && c.1 <= g.nmax) {
        let f = FieldSpec::from_order(q)?;
        let codes = match mds_codes(&f, n, k1, g.budget) {
            Ok(c) => c,
            Err(e @ Error::BudgetExceeded { .. }) => {
                out.push(outcome("mds", format!("q={q} n={n} k1={k1}"), Err(e))?);
                continue;
            }
            Err(e) => return Err(e),
        };
        let covered = (1..=n).filter(|&k2| k2 == 1 || k2 + k1 > n);
        for k2 in covered {
            let formula = expected_star_dim_mds(q, n, k1, k2)?;
            let mut bad = None;
            let mut budget_err = None;
            for (i, c) in codes.iter().enumerate() {
                match exact_expected_star_dim_fixed(c, k2, &mut EnumBudget::new(g.budget)) {
                    Ok(v) if v != formula => {
                        bad = Some(format!(
                            "code #{i}: formula {} enumeration {}",
                            rat_str(&formula),
                            rat_str(&v)
                        ));
                        break;
                    }
                    Ok(_) => {}
                    Err(e @ Error::BudgetExceeded { .. }) => {
                        budget_err = Some(e);
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            let r = match budget_err {
                Some(e) => Err(e),
                None => Ok((bad.is_none(), bad.unwrap_or_default())),
            };
            out.push(outcome(
                "mds",
                format!("q={q} n={n} k1={k1} k2={k2} codes={}", codes.len()),
                r,
            )?);
        }
    }
    Ok(out)
}

/// Subspaces with a prescribed exact support, against a support histogram, `n <= 4`.
pub fn support(g: &Grid) -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    for q in fields(g.qmax) {
        let f = FieldSpec::from_order(q)?;
        for n in 1..=g.nmax.min(4) {
            for l in 1..=n {
                let r = support_histogram(&f, n, l, &mut EnumBudget::new(g.budget)).and_then(|h| {
                    for (supp, &count) in &h {
                        let s = count_subspaces_with_support(q, n, l, supp.len())?;
                        if s.to_u64() != Some(count) {
                            return Ok((false, format!("support {supp:?}: formula {s} enumeration {count}")));
                        }
                    }
                    // Supports that never occur must have formula value zero.
                    for s in 0..=n {
                        let occurs = h.keys().any(|k| k.len() == s);
                        if !occurs && count_subspaces_with_support(q, n, l, s)? != BigInt::from(0) {
                            return Ok((false, format!("support size {s} missing from enumeration")));
                        }
                    }
                    Ok((true, String::new()))
                });
                out.push(outcome("support", format!("q={q} n={n} l={l}"), r)?);
            }
        }
    }
    Ok(out)
}

pub fn run_check(check: Check, g: &Grid) -> Result<Vec<Outcome>> {
    match check {
        Check::Kernel => kernel(g),
        Check::Zerodiag => zerodiag(g),
        Check::Intersection => intersection(g),
        Check::Mds => mds(g),
        Check::Support => support(g),
        Check::Jensen => jensen(g),
        Check::All => {
            let mut all = Vec::new();
            for c in [
                Check::Kernel,
                Check::Zerodiag,
                Check::Intersection,
                Check::Mds,
                Check::Support,
                Check::Jensen,
            ] {
                all.extend(run_check(c, g)?);
            }
            Ok(all)
        }
    }
}
