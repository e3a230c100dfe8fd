use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mtb_dqm_cli::commands;
use mtb_dqm_cli::config::ExperimentConfig;
use mtb_dqm_cli::error::{io_err, CliError};

#[derive(Parser)]
#[command(name = "mtbdqm", version, about = "Trigonometric B-spline DQM solver for coupled Burgers equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one problem and write solution snapshots and errors.
    Solve(Common),
    /// Error norms and orders over a doubling sequence of grids.
    Convergence(Common),
    /// Frozen-coefficient spectra and step-size verdicts.
    Stability(Common),
    /// Write the first and second order weighting matrices.
    WeightsDump(Common),
    /// Rerun a published table and compare.
    Table {
        /// 1.1, 1.3, 2.1, 2.3, 3.1 or 4.1
        id: String,
        #[command(flatten)]
        common: Common,
    },
}

/// Flags mirror the config-file keys and override them.
#[derive(Args, Default)]
struct Common {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// p1, p2, p3 or p4
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    /// Reynolds number (2D problems).
    #[arg(long)]
    re: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    /// Comma-separated output times.
    #[arg(long)]
    snapshots: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "boundary-policy", value_parser = ["base", "stage"])]
    boundary_policy: Option<String>,
    #[arg(long, value_parser = ["printed", "symmetric"])]
    gform: Option<String>,
    /// Run a frozen-coefficient stability check before solving.
    #[arg(long = "stability-check")]
    stability_check: Option<bool>,
    /// 2D box a,b,c,d (p2 and p4 only).
    #[arg(long, allow_hyphen_values = true)]
    domain: Option<String>,
    /// Grid sizes for `convergence`, comma separated.
    #[arg(long)]
    ns: Option<String>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    tau0: Option<f64>,
    #[arg(long)]
    kappa0: Option<f64>,
    /// Step sizes for `stability`, comma separated.
    #[arg(long)]
    dts: Option<String>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::parse(&std::fs::read_to_string(path).map_err(|e| match e.kind() {
                std::io::ErrorKind::NotFound => CliError::Config(format!("config file {} not found", path.display())),
                _ => io_err(path)(e),
            })?)?,
            None => ExperimentConfig::default(),
        };
        let mut flags = ExperimentConfig::default();
        let text = |v: &Option<String>| v.clone();
        let show = |v: Option<f64>| v.map(|x| x.to_string());
        for (key, value) in [
            ("problem", text(&self.problem)),
            ("nx", self.nx.map(|x| x.to_string())),
            ("ny", self.ny.map(|x| x.to_string())),
            ("re", show(self.re)),
            ("dt", show(self.dt)),
            ("t_end", show(self.t_end)),
            ("snapshots", text(&self.snapshots)),
            ("out", self.out.as_ref().map(|p| p.display().to_string())),
            ("boundary_policy", text(&self.boundary_policy)),
            ("gform", text(&self.gform)),
            ("stability_check", self.stability_check.map(|b| b.to_string())),
            ("domain", text(&self.domain)),
            ("ns", text(&self.ns)),
            ("nu", show(self.nu)),
            ("tau0", show(self.tau0)),
            ("kappa0", show(self.kappa0)),
            ("dts", text(&self.dts)),
        ] {
            if let Some(v) = value {
                flags.set(key, &v)?;
            }
        }
        cfg.overlay(&flags);
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let manifest = match cli.command {
        Command::Solve(c) => commands::run_solve(&c.load()?)?,
        Command::Convergence(c) => commands::run_convergence(&c.load()?)?,
        Command::Stability(c) => commands::run_stability(&c.load()?)?,
        Command::WeightsDump(c) => commands::run_weights_dump(&c.load()?)?,
        Command::Table { id, common } => commands::run_table(&id, &common.load()?)?,
    };
    for f in &manifest.files {
        println!("wrote {}", f.path);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mtbdqm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;
    use mtb_dqm::burgers::{BoundaryPolicy, GForm};
    use mtb_dqm_cli::config::ProblemId;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "problem = p4\nnx = 8\ndt = 0.001\n").unwrap();
        let c = Common {
            config: Some(path),
            nx: Some(16),
            boundary_policy: Some("stage".into()),
            ..Default::default()
        };
        let cfg = c.load().unwrap();
        assert_eq!(cfg.problem, Some(ProblemId::P4));
        assert_eq!(cfg.nx, Some(16));
        assert_eq!(cfg.dt, Some(0.001));
        assert_eq!(cfg.boundary_policy, Some(BoundaryPolicy::Stage));
        assert_eq!(cfg.gform, None::<GForm>);
    }

    #[test]
    fn missing_config_file_is_a_config_error() {
        let c = Common {
            config: Some("/nonexistent/run.cfg".into()),
            ..Default::default()
        };
        assert_eq!(c.load().unwrap_err().exit_code(), 2);
    }
}
