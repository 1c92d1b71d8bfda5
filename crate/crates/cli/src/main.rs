//! `qcap` — command-line front end for the capacity toolkit.
//!
//! Every subcommand accepts `--output` (file path; stdout otherwise) and
//! `--seed`; stochastic runs are fully determined by the seed. Exit
//! codes: 0 success, 1 failed invariant or assertion (first failing
//! check named on stderr), 2 invalid input, 3 resource budget exceeded.

mod channel_spec;
mod commands;
mod output;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "qcap", version, about = "Classical capacities of quantum channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximize the quantum mutual information of a channel.
    Capacity {
        /// Channel: identity:d, depolarizing:d:p, unital:p0,px,py,pz, or a JSON file path.
        #[arg(long)]
        channel: String,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        /// Convergence tolerance on the relative value change.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
    /// Closed-form capacity sweep for the depolarizing channel.
    DepolTable {
        #[arg(long)]
        d: usize,
        /// Comma-separated parameter values.
        #[arg(long = "p-grid")]
        p_grid: String,
        #[arg(long, value_parser = ["csv", "json"], default_value = "csv")]
        format: String,
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
    /// Extreme-noise capacities and their ratio for d = 2..d_max.
    RatioExtreme {
        #[arg(long = "d-max")]
        d_max: usize,
        #[arg(long, value_parser = ["csv", "json"], default_value = "csv")]
        format: String,
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
    /// Verify the subspace dense-coding construction and its rate.
    DensecodeVerify {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: usize,
        /// Channel the signals travel through (default identity:d).
        #[arg(long)]
        channel: Option<String>,
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
    /// Construct encodings for an equal-marginal family and verify the
    /// reconstruction.
    LemmaVerify {
        /// JSON family file ({"dim_a", "dim_b", "members": [matrix...]}).
        #[arg(long, conflicts_with = "random")]
        family: Option<std::path::PathBuf>,
        /// Generate this many random family members instead.
        #[arg(long)]
        random: Option<usize>,
        /// Dimension for randomly generated families.
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Schmidt rank of the generated shared state (defaults to d;
        /// smaller values exercise the degenerate-marginal branch).
        #[arg(long = "schmidt-rank")]
        schmidt_rank: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
    /// Strongly-typical-projector convergence table.
    Typicality {
        /// Comma-separated spectrum, e.g. 0.9,0.1.
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        delta: f64,
        /// Comma-separated copy counts, e.g. 4,8,12.
        #[arg(long)]
        n: String,
        /// Channel applied per copy (default identity on the spectrum size).
        #[arg(long)]
        channel: Option<String>,
        #[arg(long, value_parser = ["csv", "json"], default_value = "csv")]
        format: String,
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
    /// Margin report for the capacity inequality over a channel class.
    Inequality {
        #[arg(long = "class", value_parser = ["depolarizing", "unital-qubit"])]
        class: String,
        /// Number of random channels (unital-qubit class).
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Capacity {
            channel,
            restarts,
            tol,
            seed,
            output,
        } => commands::capacity(&channel, restarts, tol, seed, output.as_deref()),
        Command::DepolTable {
            d,
            p_grid,
            format,
            output,
        } => commands::depol_table(d, &p_grid, &format, output.as_deref()),
        Command::RatioExtreme {
            d_max,
            format,
            output,
        } => commands::ratio_extreme(d_max, &format, output.as_deref()),
        Command::DensecodeVerify {
            d,
            m,
            channel,
            output,
        } => commands::densecode_verify(d, m, channel.as_deref(), output.as_deref()),
        Command::LemmaVerify {
            family,
            random,
            d,
            schmidt_rank,
            seed,
            output,
        } => commands::lemma_verify(
            family.as_deref(),
            random,
            d,
            schmidt_rank,
            seed,
            output.as_deref(),
        ),
        Command::Typicality {
            lambda,
            delta,
            n,
            channel,
            format,
            output,
        } => commands::typicality(&lambda, delta, &n, channel.as_deref(), &format, output.as_deref()),
        Command::Inequality {
            class,
            samples,
            seed,
            output,
        } => commands::inequality(&class, samples, seed, output.as_deref()),
    };

    match result {
        Ok(()) => {}
        Err(err) => {
            eprintln!("qcap: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
