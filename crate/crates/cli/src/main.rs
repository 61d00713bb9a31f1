use std::path::PathBuf;
use std::process::ExitCode;

use akns_cli::{cmd_direct, cmd_inverse, cmd_roundtrip, cmd_validate, CliError, RunConfig};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "akns", version, about = "Direct and inverse scattering for the AKNS system")]
struct Cli {
    /// Cap on worker threads (defaults to one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Scattering data of the configured potential.
    Direct(Common),
    /// Recover the potential from scattering files.
    Inverse {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        scattering: PathBuf,
        /// Defaults to discrete.json next to the scattering file.
        #[arg(long)]
        discrete: Option<PathBuf>,
    },
    /// Direct then inverse, with errors against the true potential.
    Roundtrip(Common),
    /// Check |a ã + b b̃ − 1| over a scattering file.
    Validate {
        #[arg(long)]
        scattering: PathBuf,
        /// Supplies the tolerance and enables the Wronskian check.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn out_dir(cfg: &RunConfig, out: Option<PathBuf>) -> PathBuf {
    out.unwrap_or_else(|| cfg.output_dir.clone())
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Direct(c) => {
            let cfg = RunConfig::load(&c.config)?;
            let out = out_dir(&cfg, c.out);
            let sol = cmd_direct(&cfg, &out)?;
            println!(
                "direct: {} samples, {} upper and {} lower eigenvalues, max unitarity residual {:.3e}",
                sol.data.samples.len(),
                sol.data.upper.len(),
                sol.data.lower.len(),
                sol.data.max_unitarity_residual()
            );
            println!("wrote {}", out.display());
        }
        Command::Inverse {
            common,
            scattering,
            discrete,
        } => {
            let cfg = RunConfig::load(&common.config)?;
            let out = out_dir(&cfg, common.out);
            let sol = cmd_inverse(&cfg, &scattering, discrete.as_deref(), &out)?;
            println!("inverse: {} reconstruction nodes", sol.recovered.x.len());
            println!("wrote {}", out.display());
        }
        Command::Roundtrip(c) => {
            let cfg = RunConfig::load(&c.config)?;
            let out = out_dir(&cfg, c.out);
            let rep = cmd_roundtrip(&cfg, &out)?;
            println!(
                "roundtrip: max |q err| {:.3e}, max |r err| {:.3e}",
                rep.max_abs_err_q, rep.max_abs_err_r
            );
            println!("wrote {}", out.display());
        }
        Command::Validate {
            scattering,
            config,
            out,
        } => {
            let cfg = config.as_deref().map(RunConfig::load).transpose()?;
            let rep = cmd_validate(cfg.as_ref(), &scattering, out.as_deref())?;
            let (i, max) = rep
                .unitarity
                .iter()
                .enumerate()
                .fold((0, 0.0), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
            println!(
                "validate: {} samples, max unitarity residual {max:.3e} at rho = {}",
                rep.rho.len(),
                rep.rho.get(i).copied().unwrap_or(f64::NAN)
            );
            if let Some(w) = rep.max_wronskian() {
                println!("validate: max |W[phi, phitil] + 1| {w:.3e}");
            }
            if !rep.passed() {
                return Err(CliError::Validation {
                    max: rep.worst(),
                    tol: rep.tolerance,
                });
            }
            println!("validate: within {:.1e}", rep.tolerance);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

