mod commands;
mod input;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cohesio_core::{Budget, Error};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "cohesio", version, about = "Pieces, points and homotopy in presheaf toposes over finite sites")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Global {
    /// Enumeration budget (candidate extensions tried).
    #[arg(long, global = true, env = "COHESIO_BUDGET")]
    budget: Option<u64>,
    /// Worker threads for the parallel checks.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, visible_alias = "report")]
    out: Option<PathBuf>,
}

impl Global {
    fn budget(&self) -> u64 {
        self.budget.unwrap_or(Budget::DEFAULT_LIMIT)
    }
}

#[derive(Debug, Clone, Args)]
struct SiteArgs {
    /// A standard site: terminal, delta<n>, cube<k>, bipointed_op<k>.
    #[arg(long, conflicts_with = "site")]
    builtin: Option<String>,
    /// A builtin name or a site document.
    #[arg(long)]
    site: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sites: classification and interchange documents.
    #[command(subcommand)]
    Site(SiteCmd),
    /// Presheaf documents.
    #[command(subcommand)]
    Presheaf(PresheafCmd),
    /// Pieces, points, θ and κ.
    #[command(subcommand)]
    Cohesion(CohesionCmd),
    /// Connectors, distance bounds, navigability, horn fillers, Hurewicz homs.
    #[command(subcommand)]
    Homotopy(HomotopyCmd),
    /// Interiors of the geometric filtering functors and realized points.
    #[command(subcommand)]
    Realize(RealizeCmd),
    /// Geometric morphisms induced by site functors.
    #[command(subcommand)]
    Morphism(MorphismCmd),
}

#[derive(Debug, Subcommand)]
enum SiteCmd {
    /// Pre-cohesion criteria.
    Classify(SiteArgs),
    /// Canonical site document.
    Emit(SiteArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Terminal,
    Initial,
    Yoneda,
    Discrete,
    Codiscrete,
    Path,
    Nerve,
    Random,
}

#[derive(Debug, Subcommand)]
enum PresheafCmd {
    /// Check a document and summarise it.
    Validate {
        #[arg(long)]
        object: PathBuf,
        #[arg(long)]
        site: Option<String>,
    },
    /// Re-emit a document canonically.
    Emit {
        #[arg(long)]
        object: PathBuf,
    },
    /// Build a standard presheaf.
    Generate {
        #[command(flatten)]
        site: SiteArgs,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Set size, path length or cyclic group order.
        #[arg(long, default_value_t = 1)]
        size: usize,
        /// Object represented by `yoneda`.
        #[arg(long)]
        at: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Elements per object for `random`.
        #[arg(long, default_value_t = 3)]
        cap: usize,
    },
}

#[derive(Debug, Subcommand)]
enum CohesionCmd {
    /// Pieces, points, θ surjectivity, and κ against `--with`.
    Report {
        #[arg(long)]
        object: PathBuf,
        #[arg(long)]
        with: Option<PathBuf>,
        #[arg(long)]
        site: Option<String>,
    },
    /// `p_!(X × Y) → p_!X × p_!Y`.
    Product {
        #[arg(long)]
        object: PathBuf,
        #[arg(long)]
        with: PathBuf,
        #[arg(long)]
        site: Option<String>,
    },
    /// `p_!(X^{p^*A}) → (p_!X)^A` for `|A| = index`.
    Quintessential {
        #[arg(long)]
        object: PathBuf,
        #[arg(long, default_value_t = 2)]
        index: usize,
        #[arg(long)]
        site: Option<String>,
    },
}

#[derive(Debug, Clone, Args)]
struct HomotopyArgs {
    #[arg(long)]
    object: PathBuf,
    #[arg(long)]
    site: Option<String>,
    /// Connector document; defaults to the first representable with two points.
    #[arg(long)]
    connector: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum HomotopyCmd {
    /// Distance bound along the connector.
    Bound(HomotopyArgs),
    /// Directed navigability.
    Navigable(HomotopyArgs),
    /// Horn fillers up to `--max-dim`.
    Kan {
        #[command(flatten)]
        args: HomotopyArgs,
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Whether the connector fork is a coequalizer at the object.
    Connector(HomotopyArgs),
    /// `|H(X, Y)|`.
    Hurewicz {
        #[command(flatten)]
        args: HomotopyArgs,
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Everything above in one report.
    Report {
        #[command(flatten)]
        args: HomotopyArgs,
        #[arg(long)]
        max_dim: Option<usize>,
        #[arg(long)]
        target: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
struct CarrierArgs {
    /// Standard simplices over `delta<n>`.
    #[arg(long, conflicts_with = "cube")]
    simplex: Option<usize>,
    /// Standard cubes up to dimension `n`.
    #[arg(long)]
    cube: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum RealizeCmd {
    /// Closed-form interior test, cross-checked by the definition.
    Interior {
        #[command(flatten)]
        carrier: CarrierArgs,
        /// Exact fractions, e.g. `1/3,2/3`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// The interior by its definition only.
    Brute {
        #[command(flatten)]
        carrier: CarrierArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Closed form against definition over a rational grid, every object.
    Grid {
        #[command(flatten)]
        carrier: CarrierArgs,
        /// Largest denominator.
        #[arg(long, default_value_t = 7)]
        grid_step: usize,
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Nonempty interiors at every object.
    Certificate {
        #[command(flatten)]
        carrier: CarrierArgs,
        /// Tabular carrier document.
        #[arg(long, conflicts_with_all = ["simplex", "cube"])]
        tabular: Option<PathBuf>,
    },
    /// `y[n]` as a retract of `(y[1])ⁿ`.
    Retraction {
        #[arg(long)]
        simplex: usize,
    },
    /// Canonical representative of `(x, a)`.
    Point {
        #[arg(long)]
        object: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        element: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

#[derive(Debug, Subcommand)]
enum MorphismCmd {
    /// Pieces preservation over a directory of test objects.
    Analyze {
        #[arg(long)]
        functor: PathBuf,
        /// Presheaf documents over either site.
        #[arg(long)]
        tests: PathBuf,
    },
    /// The name-matching inclusion (or the collapse) between two sites, as a functor document.
    Functor {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        collapse: bool,
    },
}

/// A finished command: the report, whether its checks passed, and whether
/// it is a plain document (no options block).
pub struct Outcome {
    value: Value,
    passed: bool,
    document: bool,
}

impl Outcome {
    pub fn report<T: serde::Serialize>(r: &T, passed: bool) -> Self {
        Self {
            value: serde_json::to_value(r).expect("serializable report"),
            passed,
            document: false,
        }
    }

    pub fn document<T: serde::Serialize>(r: &T) -> Self {
        Self {
            document: true,
            ..Self::report(r, true)
        }
    }
}

fn envelope(e: &Error) -> Value {
    let mut v = json!({ "code": e.code(), "message": e.to_string() });
    if let Error::Schema { pointer, .. } = e {
        v["pointer"] = json!(pointer);
    }
    v
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Invalid(format!("cannot write {}: {e}", p.display()))),
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let v = json!({ "code": "usage_error", "message": e.to_string().trim_end() });
            eprint!("{}", cohesio_core::json::to_string(&v));
            return ExitCode::from(1);
        }
    };
    if let Some(j) = cli.global.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let result = commands::run(&cli.command, &cli.global).and_then(|mut o| {
        if !o.document {
            let opts = commands::options(&cli.command, &cli.global);
            if let Value::Object(m) = &mut o.value {
                m.insert("options".into(), opts);
            }
        }
        emit(&cohesio_core::json::to_string(&o.value), cli.global.out.as_ref())?;
        Ok(o.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprint!("{}", cohesio_core::json::to_string(&envelope(&e)));
            ExitCode::from(1)
        }
    }
}
