//! `stathyp` — sphere counts, distance statistics and free-product
//! diagnostics for word metrics on finitely generated groups.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "stathyp", version, about, propagate_version = true)]
struct Cli {
    /// Worker threads (defaults to all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Directory for cached sphere datasets.
    #[arg(long, global = true, env = "STATHYP_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// TOML file with run keys; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default, Clone)]
struct Common {
    /// Group, e.g. "free(2)" or "free_product(abelian(2),free(1))".
    #[arg(long)]
    group: Option<String>,

    /// Radii: "5", "1..6" (inclusive) or "2,4,8".
    #[arg(long = "n", visible_alias = "radii")]
    radii: Option<String>,

    /// Output CSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sphere sizes |S_n|; enumerated spheres populate the cache.
    Spheres {
        #[command(flatten)]
        common: Common,
        /// Keep only counts instead of enumerating elements.
        #[arg(long)]
        counts_only: bool,
    },
    /// E_n over a series of radii (exact below the pair budget, sampled above).
    Estimate {
        #[command(flatten)]
        common: Common,
        /// Pair budget for exact evaluation.
        #[arg(long)]
        pairs: Option<u128>,
        /// Sampled pairs per radius.
        #[arg(long)]
        samples: Option<u64>,
        /// Seed; required whenever a radius is sampled.
        #[arg(long)]
        seed: Option<u64>,
        /// Two-column (n, E_n) data file; defaults to the CSV path with `.dat`.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// C_{R+i} decomposition profiles and peripheral Poincaré sums.
    Diagnose {
        #[command(flatten)]
        common: Common,
        /// Split fraction ρ, 0 < ρ < 0.5 (default 0.4)
        #[arg(long)]
        rho: Option<f64>,
        /// Depth parameters R: "2", "2..4" or "2,3,4".
        #[arg(long = "bigR", visible_alias = "big-r")]
        big_r: Option<String>,
        /// Annulus fraction for split direct products.
        #[arg(long)]
        t: Option<f64>,
        /// Poincaré exponent (defaults to the growth-rate estimate).
        #[arg(long)]
        s: Option<f64>,
        /// Largest N for the Poincaré partial sums.
        #[arg(long, default_value_t = 400)]
        poincare_max: u32,
        /// Poincaré CSV; defaults to the profile path with `_poincare`.
        #[arg(long)]
        poincare_out: Option<PathBuf>,
        /// Classify an enumerated sphere instead of counting normal forms.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Growth-rate estimates from sphere counts up to the largest radius.
    Growth {
        #[command(flatten)]
        common: Common,
    },
    /// Inspect or verify cache files.
    #[command(subcommand)]
    Cache(CacheCommand),
}

#[derive(Subcommand, Debug)]
enum CacheCommand {
    /// Print a cache file's header.
    Inspect { file: PathBuf },
    /// Fully verify one file, or every file in the cache directory.
    Verify { file: Option<PathBuf> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<commands::UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
