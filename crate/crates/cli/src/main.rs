mod commands;
mod descriptor;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use descriptor::{parse_config, Command, Experiment, Parameters, ValidationError};
use output::{write_run, ManifestInfo};

const EXIT_CHECK: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_DOMAIN: u8 = 3;

#[derive(Parser)]
#[command(name = "conformal-flow", version, about = "Conformable-clock dynamics experiments")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Clock, derivative and integral identities over the function library.
    Transform(Options),
    /// Mild solutions of an α-family and their classical counterparts.
    Evolve(Options),
    /// Hypercyclic candidate of the weighted conformable translation.
    Orbit(Options),
    /// Spectral chaos hypotheses of the weighted translation generator.
    Dsw(Options),
    /// Norm and inner-product preservation of the transport map.
    Isometry(Options),
    /// Every invariant suite at reduced size.
    Selftest(Options),
}

#[derive(Args, Clone, Default)]
struct Options {
    /// `key = value` descriptor; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long = "x-max")]
    x_max: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `re_lo,re_hi,im_lo,im_hi` for `dsw`.
    #[arg(long, allow_hyphen_values = true)]
    region: Option<String>,
    /// Number of step targets for `orbit`.
    #[arg(long)]
    targets: Option<u64>,
    /// exponential, heat, rotation or translation, for `evolve`.
    #[arg(long)]
    family: Option<String>,
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Add deliberately failing controls.
    #[arg(long)]
    inject_negative_control: bool,
}

impl Options {
    fn parameters(&self) -> Result<Parameters, ValidationError> {
        let mut p = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| ValidationError(format!("cannot read {}: {e}", path.display())))?;
                Parameters::from_map(parse_config(&text, path)?)
            }
            None => Parameters::default(),
        };
        let real = [
            ("alpha", self.alpha),
            ("p", self.p),
            ("kappa", self.kappa),
            ("epsilon", self.epsilon),
            ("x_max", self.x_max),
            ("tolerance", self.tolerance),
            ("t_max", self.t_max),
        ];
        for (k, v) in real {
            if let Some(v) = v {
                p.set(k, v);
            }
        }
        for (k, v) in [("n", self.n), ("seed", self.seed), ("targets", self.targets)] {
            if let Some(v) = v {
                p.set(k, v);
            }
        }
        if let Some(v) = &self.out {
            p.set("out", v.display());
        }
        if let Some(v) = &self.region {
            p.set("region", v);
        }
        if let Some(v) = &self.family {
            p.set("family", v);
        }
        if self.inject_negative_control {
            p.set("inject_negative_control", true);
        }
        Ok(p)
    }
}

fn execute(command: Command, options: &Options) -> u8 {
    let start = Instant::now();
    let experiment = match options.parameters().and_then(|p| Experiment::validate(command, p)) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("validation error: {e}");
            return EXIT_VALIDATION;
        }
    };
    let result = match commands::run(&experiment) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{command}: {e}");
            return EXIT_DOMAIN;
        }
    };
    print!("{}", result.console);
    let descriptor = experiment.echo();
    let info = ManifestInfo {
        command: &command.to_string(),
        descriptor: &descriptor,
        duration: start.elapsed(),
        checks: &result.checks,
    };
    if let Err(e) = write_run(&experiment.out, &result.artifacts, &info) {
        eprintln!("cannot write outputs to {}: {e}", experiment.out.display());
        return EXIT_DOMAIN;
    }
    if result.passed() {
        0
    } else {
        for c in result.checks.iter().filter(|c| !c.passed) {
            eprintln!("FAIL {}: {}", c.name, c.detail);
        }
        EXIT_CHECK
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (command, options) = match &cli.command {
        Sub::Transform(o) => (Command::Transform, o),
        Sub::Evolve(o) => (Command::Evolve, o),
        Sub::Orbit(o) => (Command::Orbit, o),
        Sub::Dsw(o) => (Command::Dsw, o),
        Sub::Isometry(o) => (Command::Isometry, o),
        Sub::Selftest(o) => (Command::Selftest, o),
    };
    ExitCode::from(execute(command, options))
}
