mod commands;
mod inputs;
mod repro;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use lnc_core::solver::SearchBudget;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "lnc", version, about = "Linear network coding over finite rings and modules")]
pub struct Cli {
    /// Human-readable tables instead of compact JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Emit a network as JSON.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Construct and inspect rings and modules.
    #[command(subcommand)]
    Ring(RingCmd),
    /// Build, verify and measure codes.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Apply one transport to a code.
    Transport(TransportArgs),
    /// Carry a code to a field of the given characteristic.
    Pipeline(PipelineArgs),
    /// Search for a scalar linear solution.
    Solve(SolveArgs),
    /// Decide a single (k, n) profile.
    Achievable(AchievableArgs),
    /// Enumerate the inner rate region on a lattice.
    Region(RegionArgs),
    /// Linear capacity of the Char-m network over characteristic p.
    Capacity {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: u64,
    },
    /// Run a named acceptance experiment.
    Repro(repro::ReproArgs),
    /// Run every command listed in a JSON manifest.
    Batch {
        manifest: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum GenCmd {
    Butterfly,
    /// The butterfly with kx, ky symbols per message and n per edge.
    KnButterfly {
        #[arg(long)]
        kx: usize,
        #[arg(long)]
        ky: usize,
        #[arg(long)]
        n: usize,
    },
    Char {
        #[arg(long)]
        m: usize,
    },
    Union {
        a: String,
        b: String,
    },
    /// The (k, n)-fractional network.
    Fractional {
        net: String,
        #[arg(long)]
        k: String,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
pub enum RingCmd {
    Inspect {
        spec: String,
        /// Include operation tables up to this size.
        #[arg(long, default_value_t = 16)]
        tables: usize,
    },
    Tensor {
        a: String,
        b: String,
    },
    /// A surjection onto a matrix ring over a field.
    Quotient {
        spec: String,
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Find a unital ring homomorphism between two rings.
    Hom {
        source: String,
        target: String,
        #[arg(long)]
        injective: bool,
    },
    /// Module report: sizes, faithfulness, coprime splitting.
    Module {
        spec: String,
    },
}

#[derive(Subcommand)]
pub enum CodeCmd {
    Verify {
        #[arg(long)]
        net: String,
        #[arg(long)]
        code: PathBuf,
        #[arg(long, alias = "ring")]
        module: Option<String>,
    },
    Rate {
        #[arg(long)]
        net: String,
        #[arg(long)]
        code: PathBuf,
        #[arg(long, alias = "ring")]
        module: Option<String>,
    },
    /// The routing code on the butterfly with kx + ky <= 2n.
    Butterfly {
        #[arg(long, alias = "ring")]
        module: String,
        #[arg(long)]
        kx: usize,
        #[arg(long)]
        ky: usize,
        #[arg(long)]
        n: usize,
    },
    /// The all-ones scalar code on the Char-m network.
    Char {
        #[arg(long, alias = "ring")]
        module: String,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Lemma {
    /// (t·k, t·n) code to a t-dim vector code on the (k, n)-fractional network.
    EquivSplit,
    /// The inverse of equiv-split.
    EquivJoin,
    Vectorize,
    Devectorize,
    SameRing,
    Hom,
    Faithful,
    Primary,
    Subfield,
}

#[derive(Args)]
pub struct TransportArgs {
    #[arg(long, value_enum)]
    lemma: Lemma,
    #[arg(long)]
    net: String,
    #[arg(long)]
    code: PathBuf,
    #[arg(long, alias = "ring")]
    module: Option<String>,
    /// Small profile for equiv-split / equiv-join.
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Vector dimension for devectorize.
    #[arg(long)]
    t: Option<usize>,
    /// Target module for same-ring and hom.
    #[arg(long)]
    target: Option<String>,
    /// Target ring for hom; the module defaults to its regular module.
    #[arg(long)]
    target_ring: Option<String>,
    #[arg(long)]
    prime: Option<u64>,
}

#[derive(Args)]
pub struct PipelineArgs {
    #[arg(long)]
    prime: u64,
    #[arg(long)]
    net: String,
    #[arg(long)]
    code: PathBuf,
    #[arg(long, alias = "ring")]
    module: Option<String>,
    /// Finish inside this field of characteristic p.
    #[arg(long)]
    field: Option<String>,
}

#[derive(Args, Clone)]
pub struct BudgetArgs {
    /// Assignment budget per search partition.
    #[arg(long, default_value_t = 2_000_000)]
    budget: u64,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time: Option<f64>,
    /// Worker threads; 1 searches sequentially.
    #[arg(long)]
    threads: Option<usize>,
    /// Largest vector dimension tried.
    #[arg(long, default_value_t = 1)]
    tmax: usize,
}

impl BudgetArgs {
    pub fn budget(&self) -> anyhow::Result<SearchBudget> {
        let max_time = match self.time {
            Some(s) if !(s.is_finite() && s > 0.0) => anyhow::bail!("--time must be positive"),
            Some(s) => Some(Duration::from_secs_f64(s)),
            None => None,
        };
        let b = SearchBudget { max_assignments: self.budget, max_time, max_t: self.tmax, threads: self.threads };
        b.validate()?;
        Ok(b)
    }
}

#[derive(Args)]
pub struct SolveArgs {
    #[arg(long)]
    net: String,
    #[arg(long, alias = "ring")]
    module: String,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
pub struct AchievableArgs {
    #[arg(long)]
    net: String,
    #[arg(long, alias = "ring")]
    module: String,
    /// Comma-separated message block sizes.
    #[arg(long)]
    k: String,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
pub struct RegionArgs {
    #[arg(long)]
    net: String,
    #[arg(long, alias = "ring")]
    module: String,
    #[arg(long)]
    kmax: usize,
    #[arg(long)]
    nmax: usize,
    #[command(flatten)]
    budget: BudgetArgs,
}

/// A command's result: JSON, an optional table for `--pretty`, and whether it succeeded.
pub struct Output {
    pub json: Value,
    pub table: Option<String>,
    pub ok: bool,
}

impl Output {
    pub fn json(json: Value) -> Self {
        Output { json, table: None, ok: true }
    }

    pub fn render(&self, pretty: bool) -> String {
        match (&self.table, pretty) {
            (Some(t), true) => t.trim_end().to_string(),
            (None, true) => serde_json::to_string_pretty(&self.json).expect("json"),
            (_, false) => serde_json::to_string(&self.json).expect("json"),
        }
    }
}

pub fn execute(cli: &Cli) -> anyhow::Result<Output> {
    commands::run(&cli.command)
}

fn error_kind(e: &anyhow::Error) -> &'static str {
    use lnc_core::Error as E;
    match e.downcast_ref::<E>() {
        Some(E::MalformedSpec(_)) => "malformed-spec",
        Some(E::NotPrime(_)) => "not-prime",
        Some(E::Reducible(_)) => "reducible",
        Some(E::ZeroModulus) => "zero-modulus",
        Some(E::TooLarge(_)) => "too-large",
        Some(E::InvalidTable(_)) => "invalid-table",
        Some(E::Cycle(_)) => "cycle",
        Some(E::Dangling(_)) => "dangling",
        Some(E::Duplicate(_)) => "duplicate",
        Some(E::Shape(_)) => "shape",
        Some(E::Precondition(_)) => "precondition",
        Some(E::NotFaithful) => "not-faithful",
        Some(E::InvalidHom) => "invalid-hom",
        Some(E::SearchBound(_)) => "search-bound",
        Some(E::Json(_)) => "json",
        None if e.downcast_ref::<std::io::Error>().is_some() => "io",
        None => "input",
    }
}

pub fn error_json(e: &anyhow::Error) -> Value {
    json!({ "error": { "kind": error_kind(e), "message": format!("{e:#}") } })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(out) => {
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{}", out.render(cli.pretty));
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(1)
        }
    }
}
