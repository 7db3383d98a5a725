use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rtk_cli::commands::{self, Ctx, Outcome, Subject};

#[derive(Parser)]
#[command(name = "rtk", version, about = "Weight multiplicities, forms and regular tori for simple algebraic groups")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Table file to use instead of the built-in one.
    #[arg(long, global = true, env = "RTK_TABLES")]
    tables: Option<PathBuf>,
    /// Embedding data file to use instead of the built-in one.
    #[arg(long, global = true, env = "RTK_EMBEDDINGS")]
    embeddings: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct WeightArgs {
    /// Simple type such as `E8` or `C3`.
    #[arg(long = "type")]
    ty: String,
    /// Highest weight in fundamental weight coordinates, `0,0,1`.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Highest weight by name, `w3` or `w1+2w4`.
    #[arg(long)]
    weight_name: Option<String>,
    /// Characteristic, 0 or a prime.
    #[arg(long, default_value_t = 0)]
    p: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dominant weights and multiplicities of the Weyl module.
    Weights(WeightArgs),
    /// Omega-set membership, form and regular torus verdict.
    Classify(WeightArgs),
    /// Self-duality, form type and classical overgroup.
    Forms(WeightArgs),
    /// Whether the image contains a regular torus of its classical overgroup.
    RegularTorus(WeightArgs),
    /// Regularity of a torus element of a classical group.
    Element {
        #[arg(long = "type")]
        ty: String,
        /// Comma separated eigenvalues: `2`, `1/3`, `e(1/5)`, `2*e(1/3)`.
        #[arg(long, allow_hyphen_values = true)]
        entries: String,
        /// Middle entry for type B.
        #[arg(long)]
        central: Option<String>,
    },
    /// Audit the exceptional embedding data against the subgroup table.
    Exceptional {
        /// Restrict to one exceptional group.
        #[arg(long)]
        group: Option<String>,
    },
    /// Recompute the tables from the weight multisets.
    VerifyTables {
        #[arg(long, default_value_t = 5000)]
        max_dim: u64,
        /// Largest rank for the zero-multiplicity pairing check; 0 skips it.
        #[arg(long, default_value_t = 8)]
        pairing_rank: usize,
    },
    /// Classify every dominant weight of one type up to a dimension bound.
    Sweep {
        #[arg(long = "type")]
        ty: String,
        #[arg(long, default_value_t = 1000)]
        max_dim: u64,
        #[arg(long, default_value_t = 0)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let ctx = Ctx::load(cli.tables.clone(), cli.embeddings.clone())?;
    let subject = |a: &WeightArgs| Subject::parse(&a.ty, a.lambda.as_deref(), a.weight_name.as_deref(), a.p);
    match &cli.cmd {
        Cmd::Weights(a) => commands::weights(&ctx, &subject(a)?),
        Cmd::Classify(a) => commands::classify(&ctx, &subject(a)?),
        Cmd::Forms(a) => commands::forms(&ctx, &subject(a)?),
        Cmd::RegularTorus(a) => commands::regular_torus(&ctx, &subject(a)?),
        Cmd::Element { ty, entries, central } => commands::element(&ctx, ty, entries, central.as_deref()),
        Cmd::Exceptional { group } => commands::exceptional(&ctx, group.as_deref()),
        Cmd::VerifyTables { max_dim, pairing_rank } => commands::verify_tables(&ctx, *max_dim, *pairing_rank),
        Cmd::Sweep { ty, max_dim, p, workers } => commands::sweep(&ctx, ty, *max_dim, *p, *workers),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let text = if cli.json { out.report.to_json() + "\n" } else { out.report.to_text() };
            // a closed pipe is not an error for a report printer
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(if out.mismatch { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
