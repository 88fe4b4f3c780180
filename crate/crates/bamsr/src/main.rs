//! `bamsr`: encode files into bandwidth-adaptive MSR shares, repair lost
//! shares from any admissible number of helpers, reconstruct, verify, and
//! simulate. All logic lives in the library; this binary only parses
//! arguments and maps errors to exit codes (2 usage, 3 parameter,
//! 4 integrity, 5 I/O).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "bamsr",
    version,
    about = "Bandwidth-adaptive MSR erasure coding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the derived code parameters and the prior-art comparison.
    Params {
        #[arg(long)]
        mu: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "gf256")]
        field: String,
    },
    /// Encode a file into n share files plus a manifest.
    Encode {
        input: PathBuf,
        #[arg(long)]
        outdir: PathBuf,
        #[arg(long)]
        mu: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "gf256")]
        field: String,
    },
    /// Produce a repair-packet file from one share file.
    Helper {
        share: PathBuf,
        #[arg(long)]
        failed: usize,
        #[arg(long)]
        d: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Regenerate a lost share from d packet files.
    Repair {
        #[arg(long)]
        failed: usize,
        #[arg(short, long)]
        output: PathBuf,
        packets: Vec<PathBuf>,
    },
    /// Rebuild the original file from the manifest and k share files.
    Reconstruct {
        manifest: PathBuf,
        shares: Vec<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check share integrity and run the oracle equivalence on one stripe.
    Verify {
        manifest: PathBuf,
        shares: Vec<PathBuf>,
    },
    /// Run the failure/repair simulator from a TOML config.
    Simulate {
        config: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Params {
            mu,
            delta,
            n,
            field,
        } => bamsr::cli::cmd_params(mu, delta, n, &field),
        Command::Encode {
            input,
            outdir,
            mu,
            delta,
            n,
            field,
        } => bamsr::cli::cmd_encode(&input, &outdir, mu, delta, n, &field),
        Command::Helper {
            share,
            failed,
            d,
            output,
        } => bamsr::cli::cmd_helper(&share, failed, d, output),
        Command::Repair {
            failed,
            output,
            packets,
        } => bamsr::cli::cmd_repair(failed, &packets, &output),
        Command::Reconstruct {
            manifest,
            shares,
            output,
        } => bamsr::cli::cmd_reconstruct(&manifest, &shares, &output),
        Command::Verify { manifest, shares } => bamsr::cli::cmd_verify(&manifest, &shares),
        Command::Simulate {
            config,
            trace,
            summary,
        } => bamsr::cli::cmd_simulate(&config, trace, summary),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
