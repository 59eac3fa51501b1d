use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ekr_core::{Edge, Permutation, DEFAULT_PERM_LIMIT};

mod commands;
mod output;

use output::{emit, render, Format};

/// Construct and verify the cycle-method machinery for intersecting
/// families of matchings in K_2n.
///
/// Exit status: 0 all checks pass, 1 a check was falsified, 2 usage error,
/// 3 search budget exhausted.
#[derive(Debug, Parser)]
#[command(name = "ekr", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Seed for randomized sampling of permutations.
    #[arg(long, global = true, default_value_t = 2024)]
    pub seed: u64,
    /// Largest 2n for which S_2n is swept exhaustively.
    #[arg(long, global = true, default_value_t = DEFAULT_PERM_LIMIT)]
    pub limit_perms: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rooted Baranyai order and cyclic order for a permutation.
    Construct {
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated images, e.g. 2,1,3,4 (default: identity).
        #[arg(long)]
        sigma: Option<Permutation>,
        /// Also check the shifted permutation pi_c against the original.
        #[arg(long)]
        c: Option<usize>,
    },
    /// Check that every short interval of the cyclic orders is a matching.
    VerifyGoodness {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma: Option<Permutation>,
        /// Interval length (default n - 1).
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// chi, phi and the compatible-permutation count (formula and oracle).
    Count {
        #[command(flatten)]
        inst: Instance,
    },
    /// Double-count inequality for the star centered at --edge.
    DoubleCount {
        #[command(flatten)]
        inst: Instance,
        #[arg(long, value_parser = parse_edge)]
        edge: Option<Edge>,
    },
    /// Exact maximum intersecting family by clique search.
    EkrSearch {
        #[command(flatten)]
        inst: Instance,
        #[command(flatten)]
        budget: Budget,
    },
    /// Independent r-sets of the complement of K(2n,2) and the strict EKR property.
    EkrBridge {
        #[command(flatten)]
        inst: Instance,
        #[command(flatten)]
        budget: Budget,
    },
    /// Saturation and center of every permutation for the star at --edge.
    CenterMap {
        #[command(flatten)]
        inst: Instance,
        #[arg(long, value_parser = parse_edge)]
        edge: Option<Edge>,
    },
    /// Swap identities for T_j and R_j, and the composition identity.
    LemmaIdentities {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma: Option<Permutation>,
        #[arg(long)]
        j: Option<usize>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Hamiltonian-power certificate for K(2n,2) read off a cyclic order.
    KneserCert {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma: Option<Permutation>,
        /// Claimed power (default n - 2).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Verify a Hamiltonian-power certificate.
    KneserVerify {
        /// Certificate JSON file; otherwise one is built from --n/--sigma/--k.
        #[arg(long)]
        cert: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        sigma: Option<Permutation>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// One row per (n, r) with 2 <= n <= --max-n and r <= n - 1.
    Sweep {
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        #[command(flatten)]
        budget: Budget,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Instance {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub r: usize,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Budget {
    #[arg(long, default_value_t = 50_000_000)]
    pub max_nodes: u64,
    #[arg(long, default_value_t = 300.0)]
    pub max_seconds: f64,
    #[arg(long)]
    pub enumerate_max: bool,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Sampling {
    /// Permutations sampled when 2n exceeds --limit-perms.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

fn parse_edge(s: &str) -> Result<Edge, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected a,b, got {s:?}"))?;
    let a = a.trim().parse().map_err(|_| format!("bad vertex {a:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad vertex {b:?}"))?;
    Edge::new(a, b).map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> Result<i32, String> {
    let outcome = commands::dispatch(cli).map_err(|e| e.to_string())?;
    let text = render(&outcome, cli.format)?;
    emit(&text, cli.out.as_deref())?;
    Ok(outcome.status().exit_code())
}

#[cfg(feature = "parallel")]
fn run_with_jobs(cli: &Cli) -> Result<i32, String> {
    if cli.jobs == 0 {
        return run(cli);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| e.to_string())?;
    pool.install(|| run(cli))
}

#[cfg(not(feature = "parallel"))]
fn run_with_jobs(cli: &Cli) -> Result<i32, String> {
    run(cli)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_with_jobs(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
