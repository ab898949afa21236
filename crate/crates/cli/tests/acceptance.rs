//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! A criterion listed in `KNOWN_UNATTAINABLE` still prints FAIL when it fails,
//! but does not make the process exit nonzero. Anything else failing does.
//!
//! Run with `cargo test -p starprod-cli --test acceptance`.

use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;

use starprod::codes::{star_lower_bound_dual_distance, star_lower_bound_mds, LinearCode};
use starprod::exactcomb::{
    expected_intersection_dim, expected_kernel_size, full_dim_probability_bound, kernel_limit_value,
    star_dim_lower_bound, to_f64, BigRat, Params,
};
use starprod::fqlinalg::{FieldSpec, Mat};
use starprod::oracle::{exact_expected_star_dim_fixed, EnumBudget};
use starprod::sampling::{mc_full_dim_frequency, mc_star_dim, sample_code, sample_rng, table1_params, RandomModel};
use starprod_cli::checks::{self, Grid, Outcome, Status};

/// Criteria that cannot hold as stated; see the README.
const KNOWN_UNATTAINABLE: &[&str] = &["8b"];

/// Reference bound column, rows in table order, as printed to 4 or 5 significant digits.
const REFERENCE_BOUNDS: [&str; 36] = [
    "4.3629", "5.1610", "5.6761", "5.8348", "5.4339", "6.2843", "6.7708", "6.8982", "5.9594", "6.6232", "6.9011",
    "6.9582", "5.3628", "5.9117", "5.9960", "5.9996", "7.3205", "8.5237", "8.9360", "8.9822", "8.5278", "9.9850",
    "10.691", "10.851", "5.7877", "5.9922", "5.999", "6.0000", "8.3906", "8.9642", "8.9995", "9.0000", "10.473",
    "11.793", "11.990", "11.998",
];

/// Reference Monte Carlo means (100,000 samples each), rows in table order.
const REFERENCE_MEANS: [f64; 36] = [
    4.6264, 5.4398, 5.8522, 5.9415, 5.7123, 6.5425, 6.9000, 6.9663, 6.1949, 6.7812, 6.9595, 6.9858, 5.5339, 5.9514,
    5.9984, 5.9999, 7.6598, 8.7159, 8.9731, 8.9943, 8.9618, 10.336, 10.859, 10.947, 5.8525, 5.9963, 6.0000, 6.0000,
    8.5608, 8.9812, 8.9999, 9.0000, 10.843, 11.885, 11.996, 11.999,
];

const LIMIT_QS: [u64; 9] = [2, 3, 5, 7, 11, 13, 17, 19, 23];

/// Identifier, description and check.
type Criterion = (&'static str, &'static str, fn() -> Verdict);

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn p(q: u64, n: usize, k1: usize, k2: usize) -> Params {
    Params::new(q, n, k1, k2).unwrap()
}

fn rat(a: i64, b: i64) -> BigRat {
    BigRat::new(BigInt::from(a), BigInt::from(b))
}

fn summarise(outcomes: &[Outcome]) -> Verdict {
    let bad: Vec<String> = outcomes
        .iter()
        .filter(|o| o.status != Status::Pass)
        .map(Outcome::line)
        .collect();
    if bad.is_empty() {
        verdict(true, format!("{} cases equal", outcomes.len()))
    } else {
        verdict(
            false,
            format!("{} of {} cases differ: {}", bad.len(), outcomes.len(), bad.join("; ")),
        )
    }
}

fn kernel_formula() -> Verdict {
    let g = Grid {
        qmax: 3,
        nmax: 5,
        budget: 1 << 26,
    };
    summarise(&checks::kernel(&g).unwrap())
}

fn zero_diagonal() -> Verdict {
    let g = Grid {
        qmax: 3,
        nmax: 0,
        budget: 1 << 26,
    };
    summarise(&checks::zerodiag(&g).unwrap())
}

/// Matches when `value` rounds to `printed` within one unit of its last digit.
fn matches_printed(value: f64, printed: &str) -> bool {
    let decimals = printed.split('.').nth(1).map_or(0, str::len);
    let unit = 10f64.powi(-(decimals as i32));
    (value - printed.parse::<f64>().unwrap()).abs() <= unit * (1.0 + 1e-9)
}

fn bound_column() -> Verdict {
    let mut bad = Vec::new();
    for (pp, printed) in table1_params().iter().zip(REFERENCE_BOUNDS) {
        let b = star_dim_lower_bound(pp).value;
        if !matches_printed(b, printed) {
            bad.push(format!(
                "(n={}, k1={}, k2={}, q={}) {b:.6} vs {printed}",
                pp.n(),
                pp.k1(),
                pp.k2(),
                pp.q()
            ));
        }
    }
    verdict(
        bad.is_empty(),
        if bad.is_empty() {
            "36 of 36 bounds match".into()
        } else {
            bad.join("; ")
        },
    )
}

fn mc_column() -> Verdict {
    let mut bad = Vec::new();
    let mut worst = 0.0f64;
    for (pp, reference) in table1_params().iter().zip(REFERENCE_MEANS) {
        let e = mc_star_dim(pp, RandomModel::Systematic, 100_000, 42).unwrap();
        let tol = 0.02f64.max(4.0 * e.stderr);
        let dev = (e.mean_f64() - reference).abs();
        worst = worst.max(dev / tol);
        if dev > tol {
            bad.push(format!(
                "(n={}, k1={}, k2={}, q={}) {:.4} vs {reference} (tolerance {tol:.4})",
                pp.n(),
                pp.k1(),
                pp.k2(),
                pp.q(),
                e.mean_f64()
            ));
        }
    }
    if bad.is_empty() {
        verdict(
            true,
            format!("36 of 36 means within tolerance, worst deviation {worst:.2} of tolerance"),
        )
    } else {
        verdict(false, bad.join("; "))
    }
}

fn gf7(rows: [[u32; 6]; 3]) -> LinearCode {
    let f = FieldSpec::from_order(7).unwrap();
    LinearCode::from_matrix(&Mat::from_rows(&f, &rows).unwrap()).unwrap()
}

fn example_codes() -> Verdict {
    let c = gf7([[1, 0, 0, 4, 5, 2], [0, 1, 0, 6, 1, 1], [0, 0, 1, 5, 6, 5]]);
    let d = gf7([[1, 0, 0, 1, 1, 6], [0, 1, 0, 4, 1, 4], [0, 0, 1, 6, 2, 4]]);
    let expected = [
        (&c, 2, rat(13138498, 2288417)),
        (&d, 2, rat(13154050, 2288417)),
        (&c, 3, rat(72051027, 12044300)),
        (&d, 3, rat(72051027, 12044300)),
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for (code, l, want) in expected {
        let got = exact_expected_star_dim_fixed(code, l, &mut EnumBudget::new(1 << 26)).unwrap();
        ok &= got == want;
        lines.push(format!("l={l} {}/{}", got.numer(), got.denom()));
    }
    verdict(ok, lines.join(", "))
}

fn mds_formula() -> Verdict {
    let g = Grid {
        qmax: 5,
        nmax: 4,
        budget: 1 << 26,
    };
    let outcomes = checks::mds(&g).unwrap();
    let shapes = checks::MDS_CASES.len();
    let mut v = summarise(&outcomes);
    // Every listed shape must contribute at least one code.
    let empty: Vec<&Outcome> = outcomes.iter().filter(|o| o.case.ends_with("codes=0")).collect();
    if !empty.is_empty() || outcomes.len() < shapes {
        v.ok = false;
        v.detail.push_str("; some shape had no MDS code");
    }
    v
}

fn intersection_formula() -> Verdict {
    let g = Grid {
        qmax: 2,
        nmax: 4,
        budget: 1 << 26,
    };
    let mut v = summarise(&checks::intersection(&g).unwrap());
    let trend: Vec<BigRat> = (2..=5).map(|k| expected_intersection_dim(&p(2, k * k, k, k))).collect();
    let decreasing = trend.windows(2).all(|w| w[1] < w[0]);
    let shown: Vec<String> = trend.iter().map(|r| format!("{:.3e}", to_f64(r))).collect();
    v.ok &= decreasing;
    v.detail = format!("{}; n=k^2 trend k=2..5: {}", v.detail, shown.join(" > "));
    v
}

fn limit_seven() -> Verdict {
    let gaps: Vec<BigRat> = LIMIT_QS
        .iter()
        .map(|&q| {
            let pp = p(q, 7, 2, 3);
            let g = expected_kernel_size(&pp) - kernel_limit_value(&pp);
            if g < BigRat::from_integer(0.into()) {
                -g
            } else {
                g
            }
        })
        .collect();
    let ok = gaps.windows(2).all(|w| w[1] < w[0]);
    let shown: Vec<String> = gaps.iter().map(|g| format!("{:.4}", to_f64(g))).collect();
    verdict(ok, format!("|E - (1 + 1/q)| = {}", shown.join(", ")))
}

fn limit_six() -> Verdict {
    let gaps: Vec<BigRat> = LIMIT_QS
        .iter()
        .map(|&q| expected_kernel_size(&p(q, 6, 2, 3)) - BigRat::from_integer(2.into()))
        .collect();
    let ok = gaps.windows(2).all(|w| w[1] < w[0]);
    let shown: Vec<String> = gaps.iter().map(|g| format!("{:.4}", to_f64(g))).collect();
    let note = if ok {
        String::new()
    } else {
        "; the gap rises from q=2 to q=3 before decreasing, so monotonicity over the whole list is false".into()
    };
    verdict(ok, format!("E - 2 = {}{note}", shown.join(", ")))
}

/// Draws a pair of non-degenerate uniform codes for trial `t` (stream `2t + attempt`).
fn nondegenerate_pair(f: &FieldSpec, n: usize, k1: usize, k2: usize, seed: u64, t: u64) -> (LinearCode, LinearCode) {
    let draw = |k: usize, stream: u64| -> LinearCode {
        (0..)
            .map(|attempt| {
                let mut rng = sample_rng(seed, (stream << 16) + attempt);
                sample_code(f, n, k, RandomModel::UniformSubspace, &mut rng).unwrap()
            })
            .find(|c| !c.is_degenerate())
            .unwrap()
    };
    (draw(k1, 2 * t), draw(k2, 2 * t + 1))
}

fn per_instance_bounds() -> Verdict {
    const TRIALS: u64 = 10_000;
    let mut grid = Vec::new();
    for q in [2u64, 3, 5] {
        for n in 2..=8 {
            for k2 in 1..n {
                for k1 in 1..=k2 {
                    grid.push((q, n, k1, k2));
                }
            }
        }
    }
    let results: Vec<(u64, u64, Option<String>)> = grid
        .par_iter()
        .map(|&(q, n, k1, k2)| {
            let f = FieldSpec::from_order(q).unwrap();
            let seed = (q << 32) | ((n as u64) << 16) | ((k1 as u64) << 8) | k2 as u64;
            let (mut mds_pairs, mut violations, mut first) = (0u64, 0u64, None);
            for t in 0..TRIALS {
                let (c1, c2) = nondegenerate_pair(&f, n, k1, k2, seed, t);
                let dim = c1.star_dim(&c2).unwrap();
                let lemma = star_lower_bound_dual_distance(&c1, &c2).unwrap();
                let mds = if c1.is_mds().unwrap() || c2.is_mds().unwrap() {
                    mds_pairs += 1;
                    Some(star_lower_bound_mds(&c1, &c2).unwrap())
                } else {
                    None
                };
                if dim < lemma || mds.is_some_and(|b| dim < b) {
                    violations += 1;
                    first.get_or_insert(format!("q={q} n={n} k1={k1} k2={k2} trial {t}: dim {dim}"));
                }
            }
            (mds_pairs, violations, first)
        })
        .collect();
    let pairs = grid.len() as u64 * TRIALS;
    let mds_pairs: u64 = results.iter().map(|r| r.0).sum();
    let violations: u64 = results.iter().map(|r| r.1).sum();
    let first = results.iter().find_map(|r| r.2.clone());
    verdict(
        violations == 0,
        format!(
            "{} grid points, {pairs} pairs ({mds_pairs} with an MDS code), {violations} violations{}",
            grid.len(),
            first.map(|s| format!(", first: {s}")).unwrap_or_default()
        ),
    )
}

fn run_mc(threads: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_starprod"))
        .env_remove("STARPROD_THREADS")
        .args([
            "--threads",
            threads,
            "mc",
            "-q",
            "3",
            "-n",
            "11",
            "-k1",
            "3",
            "-k2",
            "4",
        ])
        .args(["--samples", "20000", "--seed", "42", "--model", "uniform-subspace"])
        .output()
        .expect("run starprod");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn determinism() -> Verdict {
    let one = run_mc("1");
    let same = ["4", "8"].iter().all(|t| run_mc(t) == one);
    verdict(same, format!("{} bytes of JSON at 1, 4 and 8 threads", one.len()))
}

/// Not a criterion: prints empirical full-dimension frequencies beside their
/// asymptotic bound for context.
fn report_full_dim() {
    for (q, n, k1, k2) in [(2u64, 12usize, 2usize, 3usize), (3, 12, 2, 3), (2, 15, 3, 4)] {
        let e = mc_full_dim_frequency(&p(q, n, k1, k2), RandomModel::Systematic, 20_000, 42).unwrap();
        let b = full_dim_probability_bound(q, n, k1, k2).unwrap();
        println!(
            "INFO full-dimension frequency q={q} n={n} k1={k1} k2={k2}: {:.4} (asymptotic bound {b:.4})",
            e.mean_f64()
        );
    }
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("1", "kernel formula equals enumeration", kernel_formula),
        ("2", "zero-diagonal counts equal enumeration", zero_diagonal),
        ("3", "bound column reproduces the reference values", bound_column),
        ("4", "Monte Carlo column within max(0.02, 4 stderr)", mc_column),
        ("5", "GF(7) example rationals at l = 2 and l = 3", example_codes),
        ("6", "MDS formula equals subspace enumeration", mds_formula),
        (
            "7",
            "intersection formula and its vanishing trend",
            intersection_formula,
        ),
        ("8a", "(7,2,3) gap to 1 + 1/q strictly decreasing", limit_seven),
        ("8b", "(6,2,3) gap to 2 decreasing over q = 2..23", limit_six),
        (
            "9",
            "per-instance bounds hold on random non-degenerate pairs",
            per_instance_bounds,
        ),
        ("10", "mc JSON identical at 1, 4 and 8 threads", determinism),
    ];
    let mut unexpected = 0;
    for (id, name, f) in criteria {
        let start = Instant::now();
        let v = f();
        let secs = start.elapsed().as_secs_f64();
        let known = KNOWN_UNATTAINABLE.contains(&id);
        let tag = match (v.ok, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known unattainable)",
            (false, false) => "FAIL",
        };
        println!("{tag} criterion {id}: {name} [{secs:.1}s] {}", v.detail);
        if !v.ok && !known {
            unexpected += 1;
        }
    }
    report_full_dim();
    if unexpected > 0 {
        println!("{unexpected} criterion/criteria failed");
        std::process::exit(1);
    }
}
