use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use k3mirror::flow::triangle::write_csv;
use k3mirror_cli::checks;
use k3mirror_cli::{Config, RunReport, VerificationReport};

#[derive(Parser)]
#[command(name = "k3mirror", version, about = "Verify the quartic K3 mirror map, its periods, monodromy and lattices")]
struct Cli {
    /// TOML config; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// working precision in bits (default 256, or $K3MIRROR_PREC_BITS)
    #[arg(long, global = true)]
    prec: Option<u32>,
    /// ball width accepted for monodromy entries
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// write the report here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Mirror-map q-expansion and period-map coefficients
    Mirrormap {
        #[arg(long)]
        order: Option<usize>,
    },
    /// Exact operator identities and the Griffiths-Dwork relation
    VerifyOperators,
    /// Numerical monodromy; with --loop, a single loop or word over 0, 1, i
    Monodromy {
        #[arg(long = "loop")]
        word: Option<String>,
    },
    /// Closed form near t = 1 against analytic continuation
    NsConsistency {
        /// comma-separated points in (1, 1.2)
        #[arg(long, value_delimiter = ',')]
        t: Vec<String>,
    },
    /// Sample the Schwarz triangle; --out receives CSV
    Triangle {
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Exact lattice and monodromy-matrix audit
    LatticeAudit,
    /// The 22 period integrals at p = RE,IM
    PeriodVector {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
    },
    /// The mirror square, symbolically
    DiagramCheck,
    /// Every check
    RunAll,
}

fn config(cli: &Cli) -> anyhow::Result<Config> {
    let mut c = match &cli.config {
        Some(p) => Config::from_file(p)?,
        None => Config::default(),
    }
    .with_env()?;
    if let Some(p) = cli.prec {
        c.precision_bits = p;
    }
    if let Some(t) = cli.tol {
        c.tolerance = t;
    }
    if let Command::Mirrormap { order: Some(o) } = cli.command {
        c.order = o;
    }
    if let Command::Triangle { samples: Some(s) } = cli.command {
        c.samples = s;
    }
    c.validate()?;
    Ok(c)
}

fn emit(cli: &Cli, report: &RunReport) -> anyhow::Result<()> {
    let text = match cli.format {
        Format::Json => report.to_json()? + "\n",
        Format::Text => report.to_text(),
    };
    match &cli.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let c = config(cli)?;
    let reports: Vec<VerificationReport> = match &cli.command {
        Command::Mirrormap { .. } => vec![checks::mirror_map(c.order)],
        Command::VerifyOperators => {
            let (a, b) = rayon::join(
                || checks::operator_identities(c.clausen_order),
                || checks::griffiths_dwork(&c.griffiths_dwork_points),
            );
            vec![a, b]
        }
        Command::Monodromy { word: None } => vec![checks::monodromy_check(c.precision_bits, c.tolerance)],
        Command::Monodromy { word: Some(w) } => vec![checks::monodromy_loop(w, c.precision_bits, c.tolerance)],
        Command::NsConsistency { t } => {
            let points = if t.is_empty() {
                checks::default_ns_points()
            } else {
                t.iter().map(|s| checks::parse_rational(s)).collect::<anyhow::Result<_>>()?
            };
            vec![checks::ns_check(&points, c.precision_bits, c.ns_tolerance)]
        }
        Command::Triangle { .. } => {
            // CSV goes to --out (or stdout); the report goes to stderr
            let (samples, report) = checks::triangle(c.samples, c.triangle_precision_bits, c.triangle_tolerance)?;
            match &cli.out {
                Some(p) => write_csv(&samples, File::create(p)?)?,
                None => write_csv(&samples, std::io::stdout())?,
            }
            eprintln!("{}", serde_json::to_string_pretty(&report)?);
            return Ok(report.passed);
        }
        Command::LatticeAudit => vec![checks::lattice()],
        Command::PeriodVector { p } => vec![checks::period_vector(&checks::parse_complex(p)?)],
        Command::DiagramCheck => vec![checks::diagram(c.precision_bits)],
        Command::RunAll => checks::run_all(&c),
    };
    let report = RunReport::new(c, reports);
    emit(cli, &report)?;
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
