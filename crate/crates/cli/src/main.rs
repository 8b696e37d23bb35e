//! `thetasplit`: exact Verlinde numbers, torsion splittings, PGL dimensions,
//! slope-class transforms and Heisenberg censuses from the command line.
//!
//! Exit codes: 0 success, 1 hypothesis violation or exhausted budget,
//! 2 an identity failed, 3 usage error.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use thetasplit::arith::divisors;
use thetasplit::chern::{fm_transform, fm_transform_by_kernel, SlopeClass};
use thetasplit::heisenberg::irrep_census;
use thetasplit::pgl::{pgl_compare, PglQuery};
use thetasplit::splitting::{multiplicity, trace_of_torsion, SplitQuery, TraceQuery};
use thetasplit::suite::{run_identities, RangeSpec};
use thetasplit::torsion::{count_order, totient_symbol, SymbolQuery};
use thetasplit::verlinde::{
    set_necklace_budget, v_number, v_number_float, v_number_with, verlinde_dim, Engine,
    EvalOptions, VerlindeQuery,
};
use thetasplit::{Error, Rational};

use output::{Format, Mode, OutputRecord};

#[derive(Parser)]
#[command(name = "thetasplit", version, about = "Exact generalized theta function dimension tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value = "plain")]
    format: Format,

    #[arg(long, global = true, value_enum, default_value = "exact")]
    mode: Mode,

    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Refuse Verlinde sums needing more necklace evaluations than this.
    #[arg(long, global = true)]
    max_necklaces: Option<u64>,

    /// Report wall-clock time with the result.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Args, Clone, Copy)]
struct Grk {
    #[arg(long)]
    genus: u32,
    #[arg(long)]
    rank: u32,
    #[arg(long)]
    level: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Auto,
    Cyclotomic,
    Modular,
    Subsets,
}

#[derive(Subcommand)]
enum Command {
    /// The Verlinde number v_g(r, k).
    V {
        #[command(flatten)]
        q: Grk,
        #[arg(long, value_enum, default_value = "auto")]
        engine: EngineArg,
    },
    /// dim H⁰(SU_X(r), L^k).
    Dim {
        #[command(flatten)]
        q: Grk,
    },
    /// The genus-g totient symbol {λ/h}_g.
    Symbol {
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        genus: u32,
    },
    /// Trace of an h-torsion point of order δ, for every δ | h unless --order is given.
    Trace {
        #[command(flatten)]
        q: Grk,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        order: Option<u64>,
    },
    /// Multiplicities of every character order in the splitting of the
    /// rank hr, level hk theta space.
    Split {
        #[command(flatten)]
        q: Grk,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        order: Option<u64>,
    },
    /// SL_r/Z_d theta dimension by both routes.
    Pgl {
        #[command(flatten)]
        q: Grk,
        #[arg(long)]
        d: u32,
    },
    /// Fourier–Mukai transform of the slope class (rank, slope).
    Fm {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        rank: String,
        #[arg(long)]
        slope: String,
    },
    /// Finite Heisenberg group computations.
    Heisenberg {
        #[command(subcommand)]
        command: HeisenbergCommand,
    },
    /// Runs the full identity suite.
    Identities {
        /// key=value file with g_max, n_max, h_list, d_list, hn_max.
        #[arg(long)]
        range_spec: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum HeisenbergCommand {
    /// Brute-force irreducible census of H̃[m].
    Census {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        genus: u32,
    },
}

enum Failure {
    Lib(Error),
    Usage(String),
    Internal(String),
    /// A suite ran but some case failed; the report is already printed.
    Suite { internal: bool },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<OutputRecord, Failure>;

fn exact_only(mode: Mode, what: &str) -> Result<(), Failure> {
    match mode {
        Mode::Exact => Ok(()),
        Mode::Float => Err(Failure::Usage(format!("{what} has no float mode"))),
    }
}

fn grk_query(q: &Grk) -> Vec<(&'static str, String)> {
    vec![
        ("g", q.genus.to_string()),
        ("r", q.rank.to_string()),
        ("k", q.level.to_string()),
    ]
}

fn cmd_v(q: &Grk, engine: EngineArg, mode: Mode) -> Outcome {
    let vq = VerlindeQuery::new(q.genus, q.rank, q.level)?;
    let mut rec = OutputRecord::new("v", &grk_query(q), &["v"]);
    let engine = match engine {
        EngineArg::Auto => None,
        EngineArg::Cyclotomic => Some(Engine::Cyclotomic),
        EngineArg::Modular => Some(Engine::Modular),
        EngineArg::Subsets => Some(Engine::Subsets),
    };
    let value = match (mode, engine) {
        (Mode::Float, _) => format!("{:?}", v_number_float::<f64>(&vq)?),
        (Mode::Exact, None) => v_number(&vq)?.to_string(),
        (Mode::Exact, Some(engine)) => {
            let opts = EvalOptions {
                engine,
                ..EvalOptions::default()
            };
            v_number_with(&vq, &opts)?.to_string()
        }
    };
    rec.row(vec![value]);
    Ok(rec)
}

fn cmd_dim(q: &Grk, mode: Mode) -> Outcome {
    let vq = VerlindeQuery::new(q.genus, q.rank, q.level)?;
    let mut rec = OutputRecord::new("dim", &grk_query(q), &["dim"]);
    let value = match mode {
        Mode::Exact => verlinde_dim(&vq)?.to_string(),
        Mode::Float => {
            let ratio = (q.rank as f64 / (q.rank + q.level) as f64).powi(q.genus as i32);
            format!("{:?}", ratio * v_number_float::<f64>(&vq)?)
        }
    };
    rec.row(vec![value]);
    Ok(rec)
}

fn cmd_symbol(lambda: u64, h: u64, genus: u32) -> Outcome {
    let value = totient_symbol(&SymbolQuery { lambda, h, g: genus })?;
    let mut rec = OutputRecord::new(
        "symbol",
        &[("lambda", lambda.to_string()), ("h", h.to_string()), ("g", genus.to_string())],
        &["symbol"],
    );
    rec.row(vec![value.to_string()]);
    Ok(rec)
}

fn orders(h: u64, order: Option<u64>) -> Result<Vec<u64>, Failure> {
    match order {
        Some(o) if o == 0 || h % o != 0 => {
            Err(Failure::Usage(format!("--order {o} must divide h = {h}")))
        }
        Some(o) => Ok(vec![o]),
        None => Ok(divisors(h)),
    }
}

fn cmd_trace(q: &Grk, h: u64, order: Option<u64>) -> Outcome {
    let tq = TraceQuery::new(q.genus, q.rank, q.level, h)?;
    let mut query = grk_query(q);
    query.push(("h", h.to_string()));
    let mut rec = OutputRecord::new("trace", &query, &["order", "trace"]);
    for delta in orders(h, order)? {
        rec.row(vec![delta.to_string(), trace_of_torsion(&tq, delta)?.value.to_string()]);
    }
    Ok(rec)
}

fn cmd_split(q: &Grk, h: u64, order: Option<u64>) -> Outcome {
    let sq = SplitQuery::new(q.genus, q.rank, q.level, h)?;
    let mut query = grk_query(q);
    query.push(("h", h.to_string()));
    let mut rec = OutputRecord::new(
        "split",
        &query,
        &["omega", "characters", "multiplicity", "rank"],
    );
    let rank_factor = num_traits::pow(BigInt::from(q.rank), q.genus as usize);
    let mut total = BigInt::from(0);
    let mut total_chars = BigInt::from(0);
    for omega in orders(h, order)? {
        let count = count_order(h, omega, q.genus)?;
        let m = multiplicity(&sq, omega)?;
        let part = &count * &m * &rank_factor;
        total += &part;
        total_chars += &count;
        rec.row(vec![omega.to_string(), count.to_string(), m.to_string(), part.to_string()]);
    }
    if order.is_none() {
        let dim = verlinde_dim(&VerlindeQuery::new(
            q.genus,
            h as u32 * q.rank,
            h as u32 * q.level,
        )?)?;
        if total != dim {
            return Err(Failure::Internal(format!(
                "split pieces add up to {total}, but the rank hr, level hk dimension is {dim}"
            )));
        }
        rec.row(vec!["total".into(), total_chars.to_string(), String::new(), total.to_string()]);
    }
    Ok(rec)
}

fn cmd_pgl(q: &Grk, d: u32) -> Outcome {
    let pq = PglQuery::new(q.genus, q.rank, q.level, d)?;
    let cmp = pgl_compare(&pq)?;
    let mut query = grk_query(q);
    query.push(("d", d.to_string()));
    let mut rec = OutputRecord::new("pgl", &query, &["charsum", "coperiodic", "agree"]);
    rec.row(vec![
        cmp.charsum.to_string(),
        cmp.coperiodic.to_string(),
        cmp.agree().to_string(),
    ]);
    if !cmp.agree() {
        return Err(Failure::Internal(format!(
            "the two SL_r/Z_d routes disagree: {} vs {}",
            cmp.charsum, cmp.coperiodic
        )));
    }
    Ok(rec)
}

fn cmd_fm(genus: u32, rank: &str, slope: &str, mode: Mode) -> Outcome {
    let query = [
        ("g", genus.to_string()),
        ("rank", rank.to_string()),
        ("slope", slope.to_string()),
    ];
    let mut rec = OutputRecord::new("fm", &query, &["fm_rank", "fm_slope"]);
    match mode {
        Mode::Exact => {
            let parse = |s: &str| {
                s.parse::<Rational>()
                    .map_err(|_| Failure::Usage(format!("{s:?} is not a rational number")))
            };
            let c = SlopeClass::new(genus, parse(rank)?, parse(slope)?);
            let t = fm_transform(&c)?;
            if (1..=4).contains(&genus) && fm_transform_by_kernel(&c)? != t {
                return Err(Failure::Internal(
                    "closed-form transform disagrees with the kernel integral".into(),
                ));
            }
            rec.row(vec![t.rank.to_string(), t.slope.to_string()]);
        }
        Mode::Float => {
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Failure::Usage(format!("{s:?} is not a number")))
            };
            let t = fm_transform(&SlopeClass::new(genus, parse(rank)?, parse(slope)?))?;
            rec.row(vec![format!("{:?}", t.rank), format!("{:?}", t.slope)]);
        }
    }
    Ok(rec)
}

fn cmd_census(m: u64, genus: u32) -> Outcome {
    let census = irrep_census(m, genus)?;
    let mut rec = OutputRecord::new(
        "heisenberg census",
        &[
            ("m", m.to_string()),
            ("g", genus.to_string()),
            ("order", census.order.to_string()),
            ("classes", census.classes.to_string()),
        ],
        &["dimension", "central_weight", "multiplicity"],
    );
    for e in &census.entries {
        rec.row(vec![
            e.dimension.to_string(),
            e.central_weight.to_string(),
            e.multiplicity.to_string(),
        ]);
    }
    Ok(rec)
}

fn cmd_identities(path: Option<&PathBuf>, format: Format) -> Result<(), Failure> {
    let spec = match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?
            .parse::<RangeSpec>()?,
        None => RangeSpec::default(),
    };
    let report = run_identities(&spec);
    let text = if format == Format::Plain {
        report.render()
    } else {
        let mut rec = OutputRecord::new(
            "identities",
            &[
                ("g_max", spec.g_max.to_string()),
                ("n_max", spec.n_max.to_string()),
            ],
            &["status", "family", "case", "identity", "value"],
        );
        for c in &report.cases {
            rec.row(vec![
                if c.passed { "PASS" } else { "FAIL" }.into(),
                c.family.into(),
                c.case.clone(),
                c.identity.into(),
                c.value.clone(),
            ]);
        }
        rec.render(format)?
    };
    print!("{text}");
    for c in report.failures() {
        eprintln!("failed: {} [{}]: {} ({})", c.family, c.case, c.identity, c.value);
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Suite {
            internal: report.has_internal_failure(),
        })
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    if let Some(b) = cli.max_necklaces {
        set_necklace_budget(b);
    }
    let start = Instant::now();
    let mut rec = match &cli.command {
        Command::V { q, engine } => cmd_v(q, *engine, cli.mode)?,
        Command::Dim { q } => cmd_dim(q, cli.mode)?,
        Command::Symbol { lambda, h, genus } => {
            exact_only(cli.mode, "symbol")?;
            cmd_symbol(*lambda, *h, *genus)?
        }
        Command::Trace { q, h, order } => {
            exact_only(cli.mode, "trace")?;
            cmd_trace(q, *h, *order)?
        }
        Command::Split { q, h, order } => {
            exact_only(cli.mode, "split")?;
            cmd_split(q, *h, *order)?
        }
        Command::Pgl { q, d } => {
            exact_only(cli.mode, "pgl")?;
            cmd_pgl(q, *d)?
        }
        Command::Fm { genus, rank, slope } => cmd_fm(*genus, rank, slope, cli.mode)?,
        Command::Heisenberg {
            command: HeisenbergCommand::Census { m, genus },
        } => {
            exact_only(cli.mode, "heisenberg census")?;
            cmd_census(*m, *genus)?
        }
        Command::Identities { range_spec } => {
            exact_only(cli.mode, "identities")?;
            return cmd_identities(range_spec.as_ref(), cli.format);
        }
    };
    rec.mode = cli.mode;
    if cli.timing {
        rec.elapsed_ms = Some(start.elapsed().as_millis());
    }
    print!("{}", rec.render(cli.format)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("consistency failure: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Suite { internal }) => ExitCode::from(if internal { 2 } else { 1 }),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            let code = match e {
                _ if e.is_internal() => 2,
                Error::InvalidArgument(_) => 3,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
