use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use starprod::apps::{csst_envelope, pir_rate_bounds, sdmm_thresholds};
use starprod::codes::LinearCode;
use starprod::exactcomb::{
    expected_intersection_dim, expected_kernel_size, expected_star_dim_mds, full_dim_probability_bound,
    kernel_conjecture_value, kernel_limit_value, star_dim_lower_bound, to_f64, BigRat, Params,
};
use starprod::fqlinalg::{FieldSpec, Mat};
use starprod::oracle::{
    exact_expected_intersection, exact_expected_kernel, exact_expected_star_dim_fixed, EnumBudget, DEFAULT_BUDGET,
};
use starprod::sampling::{
    mc_full_dim_frequency, mc_intersection_dim, mc_kernel_size, mc_star_dim, reproduce_table1, RandomModel,
    DEFAULT_SAMPLES, TABLE1_CSV_HEADER,
};
use starprod::Error;

use starprod_cli::checks;
use starprod_cli::output::{self, rat_line, sig10};

#[derive(Parser, Debug)]
#[command(
    name = "starprod",
    version,
    about = "Star products of random linear codes: exact values, bounds and simulation"
)]
struct Cli {
    /// Worker threads (the STARPROD_THREADS environment variable takes precedence).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Copy)]
struct PairArgs {
    /// Field size (a prime power).
    #[arg(short = 'q')]
    q: u64,
    /// Code length.
    #[arg(short = 'n')]
    n: usize,
    /// Dimension of the first code.
    #[arg(long = "k1")]
    k1: usize,
    /// Dimension of the second code.
    #[arg(long = "k2")]
    k2: usize,
}

impl PairArgs {
    fn params(&self) -> Result<Params, CliError> {
        Ok(Params::new(self.q, self.n, self.k1, self.k2)?)
    }
}

#[derive(Args, Debug, Clone, Copy)]
struct McArgs {
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ModelArg::Systematic)]
    model: ModelArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Systematic,
    UniformSubspace,
}

impl From<ModelArg> for RandomModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Systematic => RandomModel::Systematic,
            ModelArg::UniformSubspace => RandomModel::UniformSubspace,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Quantity {
    StarDim,
    Kernel,
    FullDim,
    Intersection,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact expected kernel size and the resulting lower bound on E[dim(C1 * C2)].
    Bound(PairArgs),
    /// Exact expected kernel size with its large-q limit, optionally checked by enumeration.
    ExpectKernel {
        #[command(flatten)]
        pair: PairArgs,
        /// Also enumerate every systematic pair and compare.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Monte Carlo estimate over random code pairs.
    Mc {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, value_enum, default_value_t = Quantity::StarDim)]
        quantity: Quantity,
    },
    /// Bound versus simulation for the 36 standard parameter rows.
    Table1 {
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Compare closed forms against exhaustive enumeration on a grid.
    Oracle {
        #[arg(long, value_enum, default_value_t = checks::Check::All)]
        check: checks::Check,
        #[arg(long, default_value_t = 3)]
        qmax: u64,
        #[arg(long, default_value_t = 5)]
        nmax: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Expected star dimension of an MDS code with a uniformly random code.
    Mds {
        #[arg(short = 'q')]
        q: Option<u64>,
        #[arg(short = 'n')]
        n: Option<usize>,
        /// Dimension of the MDS code.
        #[arg(long = "k1")]
        k1: Option<usize>,
        /// Dimension of the random code.
        #[arg(long = "k2")]
        k2: usize,
        /// Use this MDS code (matrix file) and verify the formula by enumeration.
        #[arg(long)]
        code: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Expected dimension of the intersection of two uniformly random codes.
    Intersect {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        oracle: bool,
        /// Also estimate by simulation with this many samples.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Expected kernel size against its large-q limit across field sizes.
    LimitQ {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long = "k1")]
        k1: usize,
        #[arg(long = "k2")]
        k2: usize,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7,11,13,17,19,23")]
        qs: Vec<u64>,
    },
    /// PIR, SDMM and CSS-T figures of merit for codes read from matrix files.
    Apps {
        #[command(subcommand)]
        app: AppCommand,
    },
    /// Expected star dimension of a fixed code with every l-dimensional subspace.
    ExampleMds {
        /// Matrix file of the fixed code; without it the two built-in GF(7) codes are used.
        #[arg(long)]
        code: Option<PathBuf>,
        #[arg(long)]
        l: Option<usize>,
        /// Expected field size of the code file.
        #[arg(short = 'q')]
        q: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Subcommand, Debug)]
enum AppCommand {
    Pir {
        #[arg(long)]
        c: PathBuf,
        #[arg(long)]
        d: PathBuf,
    },
    Sdmm {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    Csst {
        #[arg(long)]
        c1: PathBuf,
        #[arg(long)]
        c2: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Lib(Error),
    Io(String),
    CheckFailed(String),
    OverBudget(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::BudgetExceeded { .. } | Error::RejectionBudgetExceeded(_)) => 3,
            CliError::Lib(_) => 2,
            CliError::Io(_) => 4,
            CliError::CheckFailed(_) => 1,
            CliError::OverBudget(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(m) | CliError::CheckFailed(m) | CliError::OverBudget(m) => f.write_str(m),
        }
    }
}

type CliResult = Result<(), CliError>;

/// Accepts the single-dash spellings `-k1` and `-k2`.
fn normalise_args(args: impl IntoIterator<Item = OsString>) -> Vec<OsString> {
    args.into_iter()
        .map(|a| match a.to_str() {
            Some(s) if s == "-k1" || s == "-k2" || s.starts_with("-k1=") || s.starts_with("-k2=") => {
                OsString::from(format!("-{s}"))
            }
            _ => a,
        })
        .collect()
}

fn configure_threads(cli_threads: Option<usize>) -> Result<(), CliError> {
    let env = std::env::var("STARPROD_THREADS").ok();
    let threads = match env {
        Some(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidParams(format!("STARPROD_THREADS=`{v}` is not a thread count")))?,
        ),
        None => cli_threads,
    };
    if let Some(t) = threads {
        if t == 0 {
            return Err(Error::InvalidParams("thread count must be positive".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(())
}

fn read_code(path: &Path) -> Result<LinearCode, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(LinearCode::from_matrix(&Mat::parse_text(&text)?)?)
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serialisable report"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(normalise_args(std::env::args_os())) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = configure_threads(cli.threads).and_then(|_| run(cli.cmd, cli.format));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.exit_code() == 2 {
                eprintln!("run `starprod help` for usage");
            }
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cmd: Command, format: Option<Format>) -> CliResult {
    match cmd {
        Command::Bound(pair) => cmd_bound(pair, format.unwrap_or(Format::Plain)),
        Command::ExpectKernel { pair, oracle, budget } => {
            cmd_expect_kernel(pair, oracle, budget, format.unwrap_or(Format::Plain))
        }
        Command::Mc { pair, mc, quantity } => cmd_mc(pair, mc, quantity, format.unwrap_or(Format::Json)),
        Command::Table1 { samples, seed } => cmd_table1(samples, seed, format.unwrap_or(Format::Csv)),
        Command::Oracle {
            check,
            qmax,
            nmax,
            budget,
        } => cmd_oracle(check, qmax, nmax, budget),
        Command::Mds {
            q,
            n,
            k1,
            k2,
            code,
            budget,
        } => cmd_mds(q, n, k1, k2, code.as_deref(), budget),
        Command::Intersect {
            pair,
            oracle,
            samples,
            seed,
            budget,
        } => cmd_intersect(pair, oracle, samples, seed, budget),
        Command::LimitQ { n, k1, k2, qs } => cmd_limit_q(n, k1, k2, &qs, format.unwrap_or(Format::Plain)),
        Command::Apps { app } => cmd_apps(app),
        Command::ExampleMds { code, l, q, budget } => cmd_example_mds(code.as_deref(), l, q, budget),
    }
}

#[derive(Serialize)]
struct BoundReport {
    q: u64,
    n: usize,
    k1: usize,
    k2: usize,
    expected_kernel: String,
    expected_kernel_f64: f64,
    bound: f64,
}

fn cmd_bound(pair: PairArgs, format: Format) -> CliResult {
    let p = pair.params()?;
    let b = star_dim_lower_bound(&p);
    match format {
        Format::Json => print_json(&BoundReport {
            q: p.q(),
            n: p.n(),
            k1: p.k1(),
            k2: p.k2(),
            expected_kernel: format!("{}/{}", b.expected_kernel.numer(), b.expected_kernel.denom()),
            expected_kernel_f64: to_f64(&b.expected_kernel),
            bound: b.value,
        }),
        _ => {
            println!("E[|ker psi|] = {}", rat_line(&b.expected_kernel));
            println!("bound = {}", sig10(b.value));
        }
    }
    Ok(())
}

fn cmd_expect_kernel(pair: PairArgs, oracle: bool, budget: u64, format: Format) -> CliResult {
    let p = pair.params()?;
    let e = expected_kernel_size(&p);
    let limit = kernel_limit_value(&p);
    let conj = kernel_conjecture_value(p.q(), p.k1(), p.k2());
    let enumerated = if oracle {
        Some(exact_expected_kernel(&p, &mut EnumBudget::new(budget))?)
    } else {
        None
    };
    if format == Format::Json {
        #[derive(Serialize)]
        struct R {
            expected_kernel: String,
            limit: String,
            conjecture: f64,
            oracle: Option<String>,
        }
        print_json(&R {
            expected_kernel: output::rat_str(&e),
            limit: output::rat_str(&limit),
            conjecture: conj,
            oracle: enumerated.as_ref().map(output::rat_str),
        });
    } else {
        println!("E[|ker psi|] = {}", rat_line(&e));
        println!("1 + q^(k1 k2 - n) = {}", rat_line(&limit));
        println!("conjectured limit = {}", sig10(conj));
        if let Some(o) = &enumerated {
            println!("enumeration = {}", rat_line(o));
        }
    }
    match enumerated {
        Some(o) if o != e => Err(CliError::CheckFailed(format!(
            "formula {} differs from enumeration {}",
            output::rat_str(&e),
            output::rat_str(&o)
        ))),
        _ => Ok(()),
    }
}

fn cmd_mc(pair: PairArgs, mc: McArgs, quantity: Quantity, format: Format) -> CliResult {
    let p = pair.params()?;
    let model: RandomModel = mc.model.into();
    let (est, bound) = match quantity {
        Quantity::StarDim => (
            mc_star_dim(&p, model, mc.samples, mc.seed)?,
            Some(star_dim_lower_bound(&p).value),
        ),
        Quantity::Kernel => (mc_kernel_size(&p, model, mc.samples, mc.seed)?, None),
        Quantity::FullDim => {
            let b = full_dim_probability_bound(p.q(), p.n(), p.k1(), p.k2()).ok();
            (mc_full_dim_frequency(&p, model, mc.samples, mc.seed)?, b)
        }
        Quantity::Intersection => {
            if model != RandomModel::UniformSubspace {
                return Err(Error::InvalidParams("intersection estimates use --model uniform-subspace".into()).into());
            }
            (mc_intersection_dim(&p, mc.samples, mc.seed)?, None)
        }
    };
    let rec = est.record(bound);
    match format {
        Format::Json => print_json(&rec),
        Format::Csv => {
            println!("q,n,k1,k2,model,samples,seed,mean,stderr,bound,ratio");
            println!(
                "{},{},{},{},{},{},{},{},{},{},{}",
                rec.q,
                rec.n,
                rec.k1,
                rec.k2,
                rec.model,
                rec.samples,
                rec.seed,
                rec.mean_f64,
                rec.stderr,
                rec.bound.map(|b| b.to_string()).unwrap_or_default(),
                rec.ratio.map(|b| b.to_string()).unwrap_or_default()
            );
        }
        Format::Plain => {
            println!("mean = {}", rat_line(&est.mean));
            println!("stderr = {}", sig10(est.stderr));
            if let Some(b) = bound {
                println!("bound = {}", sig10(b));
            }
        }
    }
    Ok(())
}

fn cmd_table1(samples: u64, seed: u64, format: Format) -> CliResult {
    let rows = reproduce_table1(samples, seed)?;
    match format {
        Format::Json => {
            let recs: Vec<_> = rows.iter().map(|r| r.estimate.record(Some(r.bound))).collect();
            print_json(&recs);
        }
        Format::Csv => {
            println!("{TABLE1_CSV_HEADER}");
            for r in &rows {
                println!("{}", r.csv_line());
            }
        }
        Format::Plain => {
            println!(
                "{:>3} {:>3} {:>3} {:>2} {:>9} {:>9} {:>8}",
                "n", "k1", "k2", "q", "mc_mean", "bound", "ratio"
            );
            for r in &rows {
                let p = &r.params;
                println!(
                    "{:>3} {:>3} {:>3} {:>2} {:>9.4} {:>9.4} {:>8.5}",
                    p.n(),
                    p.k1(),
                    p.k2(),
                    p.q(),
                    r.estimate.mean_f64(),
                    r.bound,
                    r.ratio
                );
            }
        }
    }
    Ok(())
}

fn cmd_mds(
    q: Option<u64>,
    n: Option<usize>,
    k1: Option<usize>,
    k2: usize,
    code: Option<&Path>,
    budget: u64,
) -> CliResult {
    match code {
        Some(path) => {
            let c = read_code(path)?;
            if let Some(q) = q {
                if q != c.field().q() as u64 {
                    return Err(Error::FieldMismatch(q as u32, c.field().q()).into());
                }
            }
            if !c.is_mds()? {
                return Err(Error::InvalidParams(format!("{} is not an MDS code", path.display())).into());
            }
            let formula = expected_star_dim_mds(c.field().q() as u64, c.n(), c.k(), k2)?;
            let enumerated = exact_expected_star_dim_fixed(&c, k2, &mut EnumBudget::new(budget))?;
            println!("formula = {}", rat_line(&formula));
            println!("enumeration = {}", rat_line(&enumerated));
            if formula != enumerated {
                return Err(CliError::CheckFailed("formula and enumeration differ".into()));
            }
        }
        None => {
            let missing = || Error::InvalidParams("give -q, -n and -k1, or --code".into());
            let v = expected_star_dim_mds(
                q.ok_or_else(missing)?,
                n.ok_or_else(missing)?,
                k1.ok_or_else(missing)?,
                k2,
            )?;
            println!("E[dim(C1 * C2)] = {}", rat_line(&v));
        }
    }
    Ok(())
}

fn cmd_intersect(pair: PairArgs, oracle: bool, samples: Option<u64>, seed: u64, budget: u64) -> CliResult {
    let p = pair.params()?;
    let v = expected_intersection_dim(&p);
    println!("E[dim(C1 ∩ C2)] = {}", rat_line(&v));
    if let Some(s) = samples {
        let est = mc_intersection_dim(&p, s, seed)?;
        println!("simulation = {} (stderr {})", sig10(est.mean_f64()), sig10(est.stderr));
    }
    if oracle {
        let o = exact_expected_intersection(&p, &mut EnumBudget::new(budget))?;
        println!("enumeration = {}", rat_line(&o));
        if o != v {
            return Err(CliError::CheckFailed("formula and enumeration differ".into()));
        }
    }
    Ok(())
}

fn cmd_limit_q(n: usize, k1: usize, k2: usize, qs: &[u64], format: Format) -> CliResult {
    let mut rows = Vec::new();
    for &q in qs {
        let p = Params::new(q, n, k1, k2)?;
        let e = expected_kernel_size(&p);
        let lim = kernel_limit_value(&p);
        let gap: BigRat = &e - &lim;
        rows.push((
            q,
            to_f64(&e),
            to_f64(&lim),
            to_f64(&gap).abs(),
            full_dim_probability_bound(q, n, k1, k2).ok(),
        ));
    }
    if format == Format::Csv {
        println!("q,expected_kernel,limit,abs_gap,full_dim_bound");
        for (q, e, l, g, b) in rows {
            println!("{q},{e},{l},{g},{}", b.map(|b| b.to_string()).unwrap_or_default());
        }
    } else {
        println!(
            "{:>5} {:>16} {:>16} {:>16} {:>14}",
            "q", "E[|ker psi|]", "1+q^(k1k2-n)", "|gap|", "full-dim bound"
        );
        for (q, e, l, g, b) in rows {
            let b = b.map(sig10).unwrap_or_else(|| "-".into());
            println!("{q:>5} {:>16} {:>16} {:>16} {b:>14}", sig10(e), sig10(l), sig10(g));
        }
    }
    Ok(())
}

fn cmd_apps(app: AppCommand) -> CliResult {
    match app {
        AppCommand::Pir { c, d } => print_json(&pir_rate_bounds(&read_code(&c)?, &read_code(&d)?)?),
        AppCommand::Sdmm { a, b } => print_json(&sdmm_thresholds(&read_code(&a)?, &read_code(&b)?)?),
        AppCommand::Csst { c1, c2 } => {
            let c2 = c2.as_deref().map(read_code).transpose()?;
            print_json(&csst_envelope(&read_code(&c1)?, c2.as_ref())?);
        }
    }
    Ok(())
}

const GF7_FIRST: [[u32; 6]; 3] = [[1, 0, 0, 4, 5, 2], [0, 1, 0, 6, 1, 1], [0, 0, 1, 5, 6, 5]];
const GF7_SECOND: [[u32; 6]; 3] = [[1, 0, 0, 1, 1, 6], [0, 1, 0, 4, 1, 4], [0, 0, 1, 6, 2, 4]];

fn cmd_example_mds(code: Option<&Path>, l: Option<usize>, q: Option<u64>, budget: u64) -> CliResult {
    let mut budget = EnumBudget::new(budget);
    match code {
        Some(path) => {
            let c = read_code(path)?;
            if let Some(q) = q {
                if q != c.field().q() as u64 {
                    return Err(Error::FieldMismatch(q as u32, c.field().q()).into());
                }
            }
            let ls: Vec<usize> = match l {
                Some(l) => vec![l],
                None => (1..=c.n()).collect(),
            };
            for l in ls {
                let v = exact_expected_star_dim_fixed(&c, l, &mut budget)?;
                println!("l={l} {}", rat_line(&v));
            }
        }
        None => {
            let f = FieldSpec::from_order(7)?;
            if let Some(q) = q {
                if q != 7 {
                    return Err(Error::FieldMismatch(q as u32, 7).into());
                }
            }
            let codes = [
                ("C", LinearCode::from_matrix(&Mat::from_rows(&f, &GF7_FIRST)?)?),
                ("C'", LinearCode::from_matrix(&Mat::from_rows(&f, &GF7_SECOND)?)?),
            ];
            let ls: Vec<usize> = match l {
                Some(l) => vec![l],
                None => vec![2, 3],
            };
            for l in ls {
                for (name, c) in &codes {
                    let v = exact_expected_star_dim_fixed(c, l, &mut budget)?;
                    println!("{name} l={l} {}", rat_line(&v));
                }
            }
        }
    }
    Ok(())
}

fn cmd_oracle(check: checks::Check, qmax: u64, nmax: usize, budget: u64) -> CliResult {
    let outcomes = checks::run_check(check, &checks::Grid { qmax, nmax, budget })?;
    for o in &outcomes {
        println!("{}", o.line());
    }
    let count = |s| outcomes.iter().filter(|o| o.status == s).count();
    let (fail, over) = (count(checks::Status::Fail), count(checks::Status::Budget));
    println!(
        "{} cases: {} pass, {fail} fail, {over} over budget",
        outcomes.len(),
        count(checks::Status::Pass)
    );
    if fail > 0 {
        Err(CliError::CheckFailed(format!("{fail} check(s) failed")))
    } else if over > 0 {
        Err(CliError::OverBudget(format!(
            "{over} case(s) exceed the enumeration budget of {budget} items"
        )))
    } else {
        Ok(())
    }
}
