use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gwn::suites::{
    jacobi_report, laguerre_report, loop_census, mc_suite, run_all, verify_all, verify_suite,
    ReportBundle, RunReport, SuiteOptions,
};
use gwn::wickcalc::{laguerre_system, s_transform, PolyFunctional};
use gwn::{AtomicMeasure, GwnError, Result, TestFunction};

#[derive(Parser)]
#[command(
    name = "gwn",
    version,
    about = "Gamma white-noise calculus: tables, samplers and verification suites"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Base measure JSON file: {"weights": [...]}
    #[arg(long, global = true, value_name = "FILE")]
    measure: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo sample count
    #[arg(long, global = true, default_value_t = 100_000)]
    samples: usize,
    /// Degree / size parameter
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Total mass σ(Δ) for jacobi and laguerre
    #[arg(long, global = true, default_value_t = 1.0)]
    sigma: f64,
    /// Write output here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Human-readable tables instead of JSON
    #[arg(long, global = true)]
    pretty: bool,
    /// Standard-error multiplier for Monte Carlo cases
    #[arg(long, global = true)]
    se_mult: Option<f64>,
    /// Record wall time in reports (breaks byte-for-byte reproducibility)
    #[arg(long, global = true)]
    timing: bool,
    /// Random cases per identity suite
    #[arg(long, global = true, default_value_t = 100)]
    cases: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Loop census of set partitions, as CSV
    Loops,
    /// Jacobi coefficients and ext-norm check, as CSV
    Jacobi,
    /// Orthonormal Laguerre coefficients, as CSV
    Laguerre,
    /// S-transform of a functional at a test function
    Stransform {
        /// Functional JSON: {"basis": ..., "kernels": [...]}
        #[arg(long, value_name = "FILE")]
        functional: PathBuf,
        /// Comma-separated θ values, one per atom
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        theta: Vec<f64>,
    },
    /// Monte Carlo suites
    Mc {
        #[arg(long, value_enum)]
        suite: McSuite,
    },
    /// Deterministic identity suites
    Verify {
        #[arg(value_enum, conflicts_with = "suite")]
        which: Option<VerifySuite>,
        #[arg(long, value_enum)]
        suite: Option<VerifySuite>,
    },
    /// Every table and suite
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum McSuite {
    Laplace,
    Gram,
    Chaos,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifySuite {
    Theorem5,
    Theorem6,
    Theorem7,
    Theorem8,
    Theorem9,
    Series,
    Multiplication,
    All,
}

impl VerifySuite {
    fn name(self) -> &'static str {
        match self {
            Self::Theorem5 => "theorem5",
            Self::Theorem6 => "theorem6",
            Self::Theorem7 => "theorem7",
            Self::Theorem8 => "theorem8",
            Self::Theorem9 => "theorem9",
            Self::Series => "series",
            Self::Multiplication => "multiplication",
            Self::All => "all",
        }
    }
}

struct Output {
    text: String,
    pass: bool,
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn emit_report(mut report: RunReport, g: &Global, started: Instant) -> Result<Output> {
    if g.timing {
        report.wall_time_s = Some(started.elapsed().as_secs_f64());
    }
    let text = if g.pretty {
        report.to_table()
    } else {
        json(&report)?
    };
    Ok(Output {
        text,
        pass: report.pass,
    })
}

fn emit_bundle(bundle: ReportBundle, g: &Global, started: Instant) -> Result<Output> {
    let mut bundle = bundle;
    if g.timing {
        let t = started.elapsed().as_secs_f64();
        for r in &mut bundle.reports {
            r.wall_time_s = Some(t);
        }
    }
    let text = if g.pretty {
        bundle.to_table()
    } else {
        json(&bundle)?
    };
    Ok(Output {
        text,
        pass: bundle.pass,
    })
}

fn options(g: &Global) -> Result<SuiteOptions> {
    let measure = g
        .measure
        .as_ref()
        .map(AtomicMeasure::from_json_file)
        .transpose()?;
    Ok(SuiteOptions {
        seed: g.seed,
        samples: g.samples,
        cases: g.cases,
        se_mult: g.se_mult,
        measure,
    })
}

fn run(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    let started = Instant::now();
    match &cli.command {
        Command::Loops => {
            let n = g.n.unwrap_or(4);
            let (rows, total) = loop_census(n)?;
            let mut text = String::from("blocks,multiplicity,running_sum\n");
            for r in &rows {
                let _ = writeln!(text, "{},{},{}", r.blocks, r.multiplicity, r.running_sum);
            }
            let _ = writeln!(text, "total,{total},{total}");
            Ok(Output {
                text,
                pass: total == gwn::suites::factorial_u64(n),
            })
        }
        Command::Jacobi => {
            let n = g.n.unwrap_or(6);
            let coeffs = gwn::fieldops::jacobi_coefficients(g.sigma, n)?;
            let report = jacobi_report(g.sigma, n, g.seed)?;
            let m = AtomicMeasure::new(vec![g.sigma])?;
            let check = gwn::fieldops::jacobi_action_check(&m, &TestFunction::constant(1, 1.0), n)?;
            let mut text = String::from("n,alpha_n,beta_n,c_n,c_n_from_extnorm,abs_err\n");
            for row in &check.rows {
                let k = row.n;
                let _ = writeln!(
                    text,
                    "{k},{},{},{},{},{:e}",
                    coeffs.alphas[k],
                    coeffs.betas[k],
                    row.c_n,
                    row.c_n_from_extnorm,
                    (row.c_n - row.c_n_from_extnorm).abs()
                );
            }
            Ok(Output {
                text,
                pass: report.pass,
            })
        }
        Command::Laguerre => {
            let n = g.n.unwrap_or(10);
            let sys = laguerre_system(g.sigma, n)?;
            let report = laguerre_report(g.sigma, n, g.seed)?;
            let mut text = String::from("n,k,coefficient,classical,abs_err\n");
            for d in 0..=n {
                for (k, (a, b)) in sys.coefficients[d]
                    .iter()
                    .zip(sys.classical_coefficients(d))
                    .enumerate()
                {
                    let _ = writeln!(text, "{d},{k},{a},{b},{:e}", (a - b).abs());
                }
            }
            Ok(Output {
                text,
                pass: report.pass,
            })
        }
        Command::Stransform { functional, theta } => {
            let m = options(g)?.measure_or_default();
            let raw: serde_json::Value =
                serde_json::from_str(&std::fs::read_to_string(functional)?)?;
            let p = PolyFunctional::from_json(m.atoms(), &raw)?;
            let theta = TestFunction::new(theta.clone());
            let value = s_transform(&p, &theta, &m)?;
            let text = if g.pretty {
                format!("S[p](θ) = {value}\n")
            } else {
                json(&serde_json::json!({ "theta": theta.values(), "value": value }))?
            };
            Ok(Output { text, pass: true })
        }
        Command::Mc { suite } => {
            let name = match suite {
                McSuite::Laplace => "laplace",
                McSuite::Gram => "gram",
                McSuite::Chaos => "chaos",
            };
            emit_report(mc_suite(name, &options(g)?)?, g, started)
        }
        Command::Verify { which, suite } => {
            let Some(s) = which.or(*suite) else {
                return Err(GwnError::Precondition("verify needs a suite name".into()));
            };
            let opts = options(g)?;
            match s {
                VerifySuite::All => emit_bundle(verify_all(&opts)?, g, started),
                other => emit_report(verify_suite(other.name(), &opts)?, g, started),
            }
        }
        Command::All => {
            let n = g.n.unwrap_or(6);
            emit_bundle(run_all(&options(g)?, n, g.sigma)?, g, started)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.global.out {
                Some(path) => std::fs::write(path, &out.text).map_err(GwnError::from),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("gwn: {e}");
                return ExitCode::from(2);
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("gwn: {e}");
            ExitCode::from(2)
        }
    }
}
