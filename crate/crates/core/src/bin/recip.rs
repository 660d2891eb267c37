use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use recip::census::{count_xyz_square, fit_asymptotic, run_census, CensusConfig, CensusRecord, SCHEMA_VERSION};
use recip::disc_lab::SplittingType;
use recip::fourier::{fourier_report, lambda_delta_split};
use recip::galois::{classify, Budgets};
use recip::verify::{run_suite, Suite};
use recip::wreath::overgroup_census_with_containment;
use recip::{IntPoly, RecipError};

#[derive(Parser)]
#[command(name = "recip", version, about = "Galois groups of reciprocal polynomials: flags, censuses and sieve checks")]
struct Cli {
    /// Worker threads (default: logical cores).
    #[arg(long, global = true, env = "RECIP_WORKERS")]
    workers: Option<usize>,
    #[arg(long, global = true, env = "RECIP_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1000)]
    prime_budget: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Poly,
    Disc,
    Groups,
    Fourier,
    All,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a reciprocal polynomial given as ascending coefficients.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Prime budget for certificates and the fingerprint.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        no_fingerprint: bool,
    },
    /// Enumerate every g with coefficients bounded by H.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long = "H")]
        h: u64,
        #[arg(long)]
        monic: bool,
        /// Resume from and update this checkpoint.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Count solutions of xy = z^2 up to H.
    Xyz {
        #[arg(long = "H")]
        h: u64,
    },
    /// Exact transform of a divisor-counting function.
    Fourier {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma: String,
        /// Mark a linear factor at +2 or -2.
        #[arg(long, allow_hyphen_values = true)]
        pointed: Option<String>,
        #[arg(long)]
        monic: bool,
        /// Report the Lambda + Delta split instead.
        #[arg(long)]
        lambda_delta: bool,
    },
    /// Subgroups of the wreath product surjecting onto S_n.
    Groups {
        #[arg(long)]
        n: usize,
        /// Include the containment relation between classes.
        #[arg(long)]
        all_overgroups: bool,
    },
    /// Run invariant suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

#[derive(Serialize)]
struct Versioned<T: Serialize> {
    schema_version: u32,
    #[serde(flatten)]
    body: T,
}

fn versioned<T: Serialize>(body: T) -> String {
    serde_json::to_string_pretty(&Versioned {
        schema_version: SCHEMA_VERSION,
        body,
    })
    .expect("serializable")
}

enum Failure {
    Verification(String),
    Usage(String),
}

impl From<RecipError> for Failure {
    fn from(e: RecipError) -> Self {
        match e {
            RecipError::Resource(_) | RecipError::Io(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Verification(e.to_string())
    }
}

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

/// With `--pointed`, the first listed linear factor is the marked one.
fn parse_sigma(sigma: &str, pointed: Option<&str>) -> Result<SplittingType, Failure> {
    let text = match pointed {
        None => sigma.to_string(),
        Some("+2") | Some("2") => format!("{sigma}@+2"),
        Some("-2") => format!("{sigma}@-2"),
        Some(other) => return Err(Failure::Usage(format!("--pointed takes +2 or -2, got {other}"))),
    };
    text.parse().map_err(|e: RecipError| Failure::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut w = sink(&cli.out)?;
    match cli.cmd {
        Cmd::Classify {
            poly,
            budget,
            no_fingerprint,
        } => {
            let f: IntPoly = poly.parse()?;
            let budgets = Budgets {
                prime_budget: budget.unwrap_or(cli.prime_budget),
                fingerprint: !no_fingerprint,
            };
            let flags = classify(&f, &budgets)?;
            writeln!(w, "{}", versioned(flags))?;
        }
        Cmd::Census { n, h, monic, checkpoint } => {
            let mut cfg = CensusConfig::new(n, h, monic);
            if let Some(k) = cli.workers {
                cfg.workers = k.max(1);
            }
            cfg.seed = cli.seed;
            cfg.prime_budget = cli.prime_budget;
            cfg.checkpoint = checkpoint;
            let rec = run_census(&cfg)?;
            match cli.format {
                Format::Json => writeln!(w, "{}", rec.json_line())?,
                Format::Csv => writeln!(w, "{}\n{}", CensusRecord::CSV_HEADER, rec.csv_row())?,
            }
        }
        Cmd::Xyz { h } => {
            if h == 0 {
                return Err(Failure::Usage("--H must be at least 1".into()));
            }
            writeln!(w, "{}", count_xyz_square(h))?;
            let heights: Vec<u64> = [h / 4, h / 2, h].into_iter().filter(|&x| x >= 2).collect();
            if heights.len() == 3 {
                let samples: Vec<(u64, u64)> = heights.iter().map(|&x| (x, count_xyz_square(x))).collect();
                let fit = fit_asymptotic(&samples, 1.0, 1.0)?;
                writeln!(
                    w,
                    "fit H log H: c in [{:.4}, {:.4}], ratio {:.4}",
                    fit.fitted_constant_range.0, fit.fitted_constant_range.1, fit.ratio
                )?;
            }
        }
        Cmd::Fourier {
            p,
            n,
            sigma,
            pointed,
            monic,
            lambda_delta,
        } => {
            let s = parse_sigma(&sigma, pointed.as_deref())?;
            if lambda_delta {
                writeln!(w, "{}", versioned(lambda_delta_split(p, n, &s)?))?;
            } else {
                writeln!(w, "{}", versioned(fourier_report(p, n, &s, s.is_marked(), monic)?))?;
            }
        }
        Cmd::Groups { n, all_overgroups } => {
            #[derive(Serialize)]
            struct Groups {
                n: usize,
                classes: Vec<recip::wreath::SubgroupDescriptor>,
                #[serde(skip_serializing_if = "Option::is_none")]
                containment: Option<Vec<(usize, usize)>>,
            }
            let (classes, edges) = overgroup_census_with_containment(n)?;
            let body = Groups {
                n,
                classes,
                containment: all_overgroups.then_some(edges),
            };
            writeln!(w, "{}", versioned(body))?;
        }
        Cmd::Verify { suite } => {
            let suite = match suite {
                SuiteArg::Poly => Suite::Poly,
                SuiteArg::Disc => Suite::Disc,
                SuiteArg::Groups => Suite::Groups,
                SuiteArg::Fourier => Suite::Fourier,
                SuiteArg::All => Suite::All,
            };
            let checks = run_suite(suite, cli.seed);
            for c in &checks {
                writeln!(w, "{c}")?;
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(Failure::Verification(format!("{failed} checks failed")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
