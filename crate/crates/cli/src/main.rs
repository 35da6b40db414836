use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use hyperbargmann::io;
use hyperbargmann_cli::config::ExperimentConfig;
use hyperbargmann_cli::emit::{emit_outputs, summary_text, Report};
use hyperbargmann_cli::experiments as ex;

#[derive(Parser, Debug)]
#[command(name = "hyperbargmann", version, about = "Radon and Bargmann transform experiments")]
struct Cli {
    /// TOML experiment configuration; defaults are used for missing fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Restrict to one dimension (2 or 3).
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Comma-separated semiclassical parameters for the chosen command.
    #[arg(long, global = true, value_delimiter = ',')]
    h: Option<Vec<f64>>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Back-projection filter: `derivative` or `multiplier`.
    #[arg(long, global = true)]
    filter: Option<String>,
    /// Worker threads, 0 for all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Sinogram of the configured phantom plus closed-form and moment checks.
    Transform,
    /// Compare the hyperplane transform of the data with the Bargmann transform.
    VerifyIdentity,
    /// Radon Plancherel identity.
    Plancherel,
    /// Filtered back-projection against the closed-form object.
    Invert,
    /// Coherent-state moments and the uncertainty bound.
    Heisenberg,
    /// Canonical-transform round trips and the phase critical set.
    Kappa,
    /// Decay of a cut-off sinogram near the degenerate set.
    CutoffExperiment,
    /// Wave-front decay scan of the unit disk.
    WfScan,
    /// Every check above.
    All,
}

fn configure(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if cli.n.is_some() {
        cfg.n = cli.n;
    }
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    if let Some(f) = &cli.filter {
        cfg.filter = f.clone();
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if let Some(h) = &cli.h {
        match cli.command {
            Command::Transform => cfg.radon.h_values = h.clone(),
            Command::VerifyIdentity => cfg.h_list = h.clone(),
            Command::Heisenberg => cfg.coherent.h_values = h.clone(),
            Command::CutoffExperiment => cfg.cutoff.h_list = h.clone(),
            Command::WfScan => cfg.wf.h_list = h.clone(),
            Command::All => cfg.h_list = h.clone(),
            Command::Plancherel | Command::Invert | Command::Kappa => {
                eprintln!("warning: --h has no effect on this command")
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cmd: Command, cfg: &ExperimentConfig) -> Result<Report> {
    let mut report = Report::default();
    match cmd {
        Command::Transform => {
            report.merge(ex::run_radon_closed_form(cfg)?);
            let (r, sino) = ex::run_transform(cfg)?;
            report.merge(r);
            std::fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
            let csv = cfg.out.join("sinogram.csv");
            io::write_sinogram_csv(&sino, BufWriter::new(File::create(&csv)?))?;
            let bin = cfg.out.join("sinogram.pbsg");
            io::write_sinogram_binary(&sino, BufWriter::new(File::create(&bin)?))?;
            report.notes.push(format!("wrote {} and {}", csv.display(), bin.display()));
        }
        Command::VerifyIdentity => report.merge(ex::run_verify_identity(cfg)?),
        Command::Plancherel => report.merge(ex::run_plancherel(cfg)?),
        Command::Invert => report.merge(ex::run_invert(cfg)?),
        Command::Heisenberg => report.merge(ex::run_heisenberg(cfg)?),
        Command::Kappa => {
            report.merge(ex::run_kappa(cfg)?);
            report.merge(ex::run_phase(cfg)?);
        }
        Command::CutoffExperiment => report.merge(ex::run_cutoff(cfg)?),
        Command::WfScan => report.merge(ex::run_wf_disk(cfg)?),
        Command::All => {
            for c in [
                Command::Transform,
                Command::VerifyIdentity,
                Command::Plancherel,
                Command::Invert,
                Command::Heisenberg,
                Command::Kappa,
                Command::CutoffExperiment,
                Command::WfScan,
            ] {
                report.merge(run(c, cfg)?);
            }
        }
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure(&cli).and_then(|cfg| {
        if cfg.threads > 0 {
            rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global()?;
        }
        let report = run(cli.command, &cfg)?;
        print!("{}", summary_text(&report));
        let files = emit_outputs(&report, &cfg.out)?;
        println!("{} files written to {}", files.len(), cfg.out.display());
        Ok(report.all_passed())
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
