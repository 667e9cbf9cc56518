mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use fibdisp::dispersion::{box_is_empty, nonperiodic_dispersion_2d, periodic_dispersion_2d, DispersionResult};
use fibdisp::pointset::{self, DistortedFibSpec, GridPointSet, LatticeSpec};
use fibdisp::search::{self, Profile, SearchReport, ThresholdMode};
use fibdisp::splitting::{lattice_dispersion_2d, lattice_dispersion_3d, splitting_table};
use fibdisp::{Error, Rational};

#[derive(Parser, Debug)]
#[command(name = "fibdisp", version, about = "Exact dispersion of lattices and point sets on the torus")]
struct Cli {
    /// Output format; each subcommand has its own default.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// File of key=value lines supplying defaults for flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for searches and verification.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a point set file.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Dispersion of a lattice or a point file, with a witness box.
    Disp(DispArgs),
    /// Consecutive splittings of the circle by k q mod n.
    Splittings {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ell_max: Option<u64>,
    },
    /// Exhaustive search for lattices of minimal dispersion.
    Search {
        #[arg(long, value_parser = ["2", "3"])]
        dim: String,
        /// Inclusive range A..B.
        #[arg(long, value_parser = parse_range)]
        n_range: (u64, u64),
    },
    /// Run every certification suite.
    Verify {
        #[arg(long)]
        profile: String,
    },
    /// Distortion threshold of the Fibonacci lattice.
    Threshold {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value = "exact")]
        mode: String,
        #[arg(long, default_value = "1/100")]
        step: Rational,
    },
    /// Known bounds on the dispersion constants (reported, not computed).
    Table,
}

#[derive(Subcommand, Debug)]
enum GenFamily {
    Fib {
        #[arg(long)]
        m: u32,
    },
    Lattice {
        #[arg(long)]
        n: u64,
        /// One generator for the plane, two for space.
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
    },
    Distorted {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        xi: Rational,
        #[arg(long, default_value = "0")]
        eta: Rational,
    },
}

#[derive(Args, Debug)]
struct DispArgs {
    #[arg(long, conflicts_with = "nonperiodic")]
    periodic: bool,
    #[arg(long)]
    nonperiodic: bool,
    #[arg(long)]
    drop_origin: bool,
    /// n,q or n,q1,q2
    #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with = "input", required_unless_present = "input")]
    lattice: Option<Vec<u64>>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Use the general solvers even for lattices.
    #[arg(long)]
    generic: bool,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once("..").ok_or("expected A..B")?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: u64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }
    fn verification(message: impl Into<String>) -> Failure {
        Failure { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Invariant(_) => 1,
            Error::Io(_) => 3,
            Error::Domain(_) | Error::Parse { .. } | Error::Number(_) => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

/// Text to emit plus whether it reports a verification failure.
struct Output {
    text: String,
    failed: Option<String>,
}

impl Output {
    fn ok(text: String) -> Output {
        Output { text, failed: None }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    match run(argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("fibdisp: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(argv: Vec<String>) -> Result<(), Failure> {
    let argv = match config::config_path(&argv) {
        Some(path) => {
            let text = config::read(Path::new(&path)).map_err(|e| Failure { code: 3, message: format!("{path}: {e}") })?;
            config::merge(argv, &text).map_err(Failure::usage)?
        }
        None => argv,
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return Err(Failure { code, message: String::new() });
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure::usage("--jobs must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }

    let output = dispatch(&cli)?;
    match &cli.out {
        Some(path) => std::fs::write(path, &output.text)
            .map_err(|e| Failure { code: 3, message: format!("{}: {e}", path.display()) })?,
        None => print!("{}", output.text),
    }
    match output.failed {
        Some(message) => Err(Failure::verification(message)),
        None => Ok(()),
    }
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    let format = cli.format;
    match &cli.command {
        Command::Gen { family } => generate(family, format),
        Command::Disp(args) => dispersion(args, format),
        Command::Splittings { n, q, ell_max } => splittings(*n, *q, *ell_max, format),
        Command::Search { dim, n_range } => search_range(dim == "3", *n_range, format),
        Command::Verify { profile } => verify(profile, format),
        Command::Threshold { m, mode, step } => threshold(*m, mode, step, format),
        Command::Table => Ok(Output::ok(table(format))),
    }
}

fn generate(family: &GenFamily, format: Option<Format>) -> Result<Output, Failure> {
    let p = match family {
        GenFamily::Fib { m } => pointset::gen_fibonacci_lattice(*m)?,
        GenFamily::Lattice { n, q } => pointset::gen_integration_lattice(&LatticeSpec::new(*n, q.clone())?)?,
        GenFamily::Distorted { m, xi, eta } => {
            pointset::gen_distorted_fibonacci(&DistortedFibSpec { m: *m, xi: xi.clone(), eta: eta.clone() })?
        }
    };
    let text = match format.unwrap_or(Format::Text) {
        Format::Text => pointset::format_points(&p),
        Format::Csv => {
            let mut s = (0..p.dim()).map(|a| format!("x{}", a + 1)).collect::<Vec<_>>().join(",") + "\n";
            for i in 0..p.len() {
                let row: Vec<String> = (0..p.dim()).map(|a| p.coordinate(i, a).to_string()).collect();
                s += &(row.join(",") + "\n");
            }
            s
        }
        Format::Json => {
            let points: Vec<Vec<String>> =
                (0..p.len()).map(|i| (0..p.dim()).map(|a| p.coordinate(i, a).to_string()).collect()).collect();
            json!({ "dim": p.dim(), "den": p.den(), "points": points }).to_string() + "\n"
        }
    };
    Ok(Output::ok(text))
}

fn lattice_points(spec: &[u64]) -> Result<GridPointSet, Failure> {
    match spec {
        [n, gens @ ..] if (1..=2).contains(&gens.len()) => {
            Ok(pointset::gen_integration_lattice(&LatticeSpec::new(*n, gens.to_vec())?)?)
        }
        _ => Err(Failure::usage("--lattice takes n,q or n,q1,q2")),
    }
}

fn dispersion(args: &DispArgs, format: Option<Format>) -> Result<Output, Failure> {
    let mut points = match (&args.lattice, &args.input) {
        (Some(spec), _) => lattice_points(spec)?,
        (None, Some(path)) => pointset::load(path).map_err(|e| match e {
            Error::Io(io) => Failure { code: 3, message: format!("{}: {io}", path.display()) },
            e => e.into(),
        })?,
        (None, None) => return Err(Failure::usage("need --lattice or --in")),
    };
    if args.drop_origin {
        points = points.without_origin();
    }
    // the lattice fast paths need every lattice point
    let fast = args.lattice.as_deref().filter(|_| !args.generic && !args.drop_origin && !args.nonperiodic);
    let result: DispersionResult = match fast {
        Some([n, q]) => lattice_dispersion_2d(*n, *q)?,
        Some([n, q1, q2]) => lattice_dispersion_3d(*n, *q1, *q2)?,
        _ if args.nonperiodic => nonperiodic_dispersion_2d(&points)?,
        _ => periodic_dispersion_2d(&points)?,
    };
    if !box_is_empty(&points, &result.witness) {
        return Err(Failure::verification(format!("witness {} contains a point", result.witness)));
    }
    let text = match format.unwrap_or(Format::Text) {
        Format::Text => format!("{result}\n"),
        Format::Json => result.to_json() + "\n",
        Format::Csv => {
            let mut header = vec!["value".to_string(), "algorithm".to_string()];
            let mut row = vec![result.value.to_string(), result.algorithm.tag().to_string()];
            for (a, e) in result.witness.extents().iter().enumerate() {
                header.extend([format!("lo{}", a + 1), format!("len{}", a + 1)]);
                row.extend([e.lo.to_string(), e.len.to_string()]);
            }
            format!("{}\n{}\n", header.join(","), row.join(","))
        }
    };
    Ok(Output::ok(text))
}

fn splittings(n: u64, q: u64, ell_max: Option<u64>, format: Option<Format>) -> Result<Output, Failure> {
    let rows = splitting_table(n, q, ell_max.unwrap_or(n))?;
    let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    let text = match format.unwrap_or(Format::Csv) {
        Format::Json => serde_json::to_string(&rows).expect("rows serialize") + "\n",
        Format::Csv | Format::Text => {
            let mut s = String::from("ell,d1,a1,d2,a2,d3,a3,new_value,split_gap_len\n");
            for r in &rows {
                let mut cells = vec![r.len.to_string()];
                for i in 0..3 {
                    match r.splitting.entries().get(i) {
                        Some((d, a)) => cells.extend([d.to_string(), a.to_string()]),
                        None => cells.extend([String::new(), String::new()]),
                    }
                }
                cells.extend([opt(r.new_value), opt(r.split_gap_len)]);
                s += &(cells.join(",") + "\n");
            }
            s
        }
    };
    Ok(Output::ok(text))
}

fn search_range(three: bool, (lo, hi): (u64, u64), format: Option<Format>) -> Result<Output, Failure> {
    use rayon::prelude::*;
    if lo < 2 {
        return Err(Failure::usage("search range must start at n >= 2"));
    }
    let reports: Vec<SearchReport> = if three {
        (lo..=hi).into_par_iter().map(search::search_optimal_3d).collect::<Result<_, _>>()?
    } else {
        search::search_range_2d(lo, hi)?
    };

    let mut failed = None;
    if three {
        let bad: Vec<u64> = reports.iter().filter(|r| r.n > 4 && !r.hits.is_empty()).map(|r| r.n).collect();
        if !bad.is_empty() {
            failed = Some(format!("optimal three-dimensional lattices with n > 4 at n = {bad:?}"));
        }
    } else {
        let summary = search::summarize_range(&reports);
        if !summary.consistent() {
            failed = Some(format!("search disagrees with the Fibonacci families: {summary:?}"));
        }
    }

    let text = match format.unwrap_or(Format::Csv) {
        Format::Json => {
            let v: Vec<_> = reports
                .iter()
                .map(|r| json!({ "n": r.n, "dim": r.dim, "hits": r.hits, "candidatesExamined": r.candidates_examined }))
                .collect();
            serde_json::to_string(&v).expect("reports serialize") + "\n"
        }
        Format::Csv | Format::Text => {
            let mut s = String::from(if three { "n,q1,q2,disp_num,disp_den,optimal,class\n" } else { "n,q1,disp_num,disp_den,optimal,class\n" });
            for r in &reports {
                for row in &r.rows {
                    let gens: Vec<String> = row.generators.iter().map(u64::to_string).collect();
                    let class = r.class_of(&row.generators).map(|c| c.tag()).unwrap_or("none");
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{}",
                        r.n,
                        gens.join(","),
                        row.dispersion.numer(),
                        row.dispersion.denom(),
                        u8::from(row.optimal),
                        class
                    );
                }
            }
            s
        }
    };
    Ok(Output { text, failed })
}

fn verify(profile: &str, format: Option<Format>) -> Result<Output, Failure> {
    let profile: Profile = profile.parse()?;
    let report = search::verify_theorems(profile);
    let text = match format.unwrap_or(Format::Text) {
        Format::Json => report.to_json() + "\n",
        Format::Text | Format::Csv => report.to_string(),
    };
    let failed = (!report.passed()).then(|| "verification failed".to_string());
    Ok(Output { text, failed })
}

fn threshold(m: u32, mode: &str, step: &Rational, format: Option<Format>) -> Result<Output, Failure> {
    let mode: ThresholdMode = mode.parse()?;
    let r = search::distortion_threshold(m, mode, step)?;
    let text = match format.unwrap_or(Format::Text) {
        Format::Json => serde_json::to_string(&r).expect("report serializes") + "\n",
        Format::Csv => format!(
            "m,threshold,predicted,predicted_decimal,holds_at_threshold,fails_past_threshold\n{},{},{},{:.6},{},{}\n",
            r.m,
            r.threshold,
            r.predicted,
            r.predicted.to_f64(),
            r.holds_at_threshold,
            r.fails_past_threshold
        ),
        Format::Text => format!(
            "m={} threshold={} predicted={} (~{:.6}, limit 2phi-3 ~ 0.236068) holds={} fails_past={}\n",
            r.m,
            r.threshold,
            r.predicted,
            r.predicted.to_f64(),
            r.holds_at_threshold,
            r.fails_past_threshold
        ),
    };
    let failed = (!(r.holds_at_threshold && r.fails_past_threshold)).then(|| "threshold not confirmed by the solver".to_string());
    Ok(Output { text, failed })
}

/// Published bounds on `a(d) = liminf n disp(n, d)`, `b(d) = limsup n disp(n, d)`
/// and their nonperiodic counterparts `a*(d)`, `b*(d)`.
const BOUNDS: &[(&str, &str, &str)] = &[
    ("a(2)", "= 2", "2"),
    ("b(2)", "<= (3+sqrt5)/2", "2.6180339"),
    ("a*(2)", ">= 5/4", "1.25"),
    ("a*(2)", "<= 2", "2"),
    ("b*(2)", "<= (3+sqrt5)/2", "2.6180339"),
    ("disp*(n points)", ">= 5/(4(n+5))", ""),
    ("a(d)", ">= d", ""),
    ("a(d)", "<= 2^(7d)", ""),
    ("b(d)", "<= 2^(7d+1)", ""),
    ("a*(d)", ">= log2(d)/4", ""),
    ("a*(d)", "<= 2^(7d)", ""),
    ("b*(d)", "<= 2^(7d+1)", ""),
];

fn table(format: Option<Format>) -> String {
    match format.unwrap_or(Format::Text) {
        Format::Json => {
            let v: Vec<_> = BOUNDS.iter().map(|(q, b, d)| json!({ "quantity": q, "bound": b, "decimal": d })).collect();
            serde_json::to_string(&v).expect("table serializes") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("quantity,bound,decimal\n");
            for (q, b, d) in BOUNDS {
                let _ = writeln!(s, "{q},{b},{d}");
            }
            s
        }
        Format::Text => {
            let mut s = String::from("# reported bounds, not computed here\n");
            for (q, b, d) in BOUNDS {
                let _ = writeln!(s, "{q:<16} {b:<16} {d}");
            }
            s
        }
    }
}
