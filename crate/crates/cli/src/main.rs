//! Command line front end: every subsystem as a subcommand with JSON IO,
//! seeded determinism, and the verification suite under `verify-all`.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use sjspace_cli::acceptance;
use sjspace_cli::commands::{self, CliError, RunConfig};
use sjspace_cli::json::TolFile;
use sjspace_core::num::C64;
use sjspace_core::Tolerances;

#[derive(Parser)]
#[command(
    name = "sjspace",
    about = "Geometry and harmonic analysis on the Siegel upper half space, the Siegel-Jacobi space and its disk model",
    version
)]
struct Cli {
    /// Input file for point/element JSON ('-' reads stdin)
    #[arg(long, global = true, default_value = "-")]
    input: String,
    /// Root seed for all randomized suites
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// JSON file with tolerance overrides
    #[arg(long, global = true)]
    tol_file: Option<String>,
    /// Worker threads for parallelizable subcommands
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Pretty-print JSON with this indent (0 = compact)
    #[arg(long, global = true, default_value_t = 0)]
    json_indent: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a group element to a point
    Act {
        #[arg(long, value_parser = ["hn", "hnm", "disk"])]
        space: String,
    },
    /// Multiply two Jacobi group elements
    Multiply,
    /// Partial Cayley transform between disk and space
    Cayley {
        #[arg(long, conflicts_with = "to_disk")]
        to_space: bool,
        #[arg(long)]
        to_disk: bool,
    },
    /// Invariant metric tensor at a point
    Metric {
        #[arg(long, value_parser = ["hn", "hnm", "disk"])]
        space: String,
        #[arg(long, default_value_t = 1.0)]
        a_scale: f64,
        #[arg(long, default_value_t = 1.0)]
        b_scale: f64,
    },
    /// Invariant volume density at a Siegel-Jacobi point
    VolumeDensity,
    /// Invariant Laplacian of a named field at a point
    Laplacian {
        #[arg(long, value_parser = ["hn", "hnm", "disk"])]
        space: String,
        #[arg(long, default_value = "ys")]
        field: String,
        #[arg(long, default_value_t = 1.5)]
        s_re: f64,
        #[arg(long, default_value_t = 0.0)]
        s_im: f64,
        #[arg(long, default_value_t = 1.0)]
        a_scale: f64,
        #[arg(long, default_value_t = 1.0)]
        b_scale: f64,
    },
    /// Apply a named invariant operator to a named field
    Operator {
        #[arg(long)]
        name: String,
        #[arg(long, default_value = "ys")]
        field: String,
        #[arg(long, default_value_t = 1.5)]
        s_re: f64,
        #[arg(long, default_value_t = 0.0)]
        s_im: f64,
    },
    /// Randomized invariance suite for metric, volume or an operator
    InvarianceTest {
        #[arg(long, value_parser = ["metric", "volume", "operator"])]
        what: String,
        #[arg(long)]
        name: Option<String>,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 25)]
        trials: usize,
    },
    /// Evaluate an invariant polynomial on a tangent pair
    InvariantPoly {
        #[arg(long)]
        family: String,
        #[arg(long, default_value = "1")]
        indices: String,
    },
    /// Reduce a point into the fundamental domain
    Reduce {
        #[arg(long, value_parser = ["hn", "hnm"])]
        space: String,
    },
    /// Fundamental-domain membership flags and margins
    Membership {
        #[arg(long, value_parser = ["hn", "hnm"])]
        space: String,
    },
    /// Volume of the degree-n modular variety (closed formula or estimator)
    Volume {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        estimate: bool,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
    },
    /// K-Bessel function through its integral representation
    Bessel {
        #[arg(long, default_value_t = 0.5)]
        s_re: f64,
        #[arg(long, default_value_t = 0.0)]
        s_im: f64,
        #[arg(long)]
        z: f64,
    },
    /// Residuals of the eigenfunction catalog
    EigenCheck {
        #[arg(long)]
        entry: usize,
        #[arg(long)]
        variant: Option<usize>,
        #[arg(long, default_value_t = 1.35)]
        s_re: f64,
        #[arg(long, default_value_t = 0.0)]
        s_im: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Residual of the Fourier coefficient equation
    OdeCheck {
        #[arg(long, default_value_t = 1.3)]
        s_re: f64,
        #[arg(long, default_value_t = 0.0)]
        s_im: f64,
        #[arg(long, default_value_t = 1)]
        n_idx: i64,
        #[arg(long, default_value_t = 0)]
        r_idx: i64,
        #[arg(long, default_value_t = 0.7)]
        y: f64,
        #[arg(long, default_value_t = 0.4)]
        v: f64,
    },
    /// Truncated Eisenstein sum at a point
    Eisenstein {
        #[arg(long, default_value_t = 3)]
        bound: i64,
        #[arg(long, default_value_t = 1.5)]
        s_re: f64,
        #[arg(long, default_value_t = 0.0)]
        s_im: f64,
    },
    /// Gram matrix of the torus characters on a quadrature grid
    TorusGram {
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Run the full verification suite and print a pass/fail table
    VerifyAll,
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut tol = Tolerances::default();
    if let Some(path) = &cli.tol_file {
        let text = commands::read_input(path)?;
        let file: TolFile = commands::parse_json(&text)?;
        tol = file.apply(tol);
    }
    Ok(RunConfig {
        seed: cli.seed,
        tol,
        workers: cli.workers,
        json_indent: cli.json_indent,
    })
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> Result<Option<serde_json::Value>, CliError> {
    let input = || commands::read_input(&cli.input);
    let out = match &cli.command {
        Command::Act { space } => Some(commands::cmd_act(space, &input()?, cfg)?),
        Command::Multiply => Some(commands::cmd_multiply(&input()?, cfg)?),
        Command::Cayley { to_space, to_disk } => {
            if !to_space && !to_disk {
                return Err(CliError::Usage(
                    "cayley needs --to-space or --to-disk".into(),
                ));
            }
            Some(commands::cmd_cayley(*to_space, &input()?, cfg)?)
        }
        Command::Metric {
            space,
            a_scale,
            b_scale,
        } => Some(commands::cmd_metric(
            space,
            *a_scale,
            *b_scale,
            &input()?,
            cfg,
        )?),
        Command::VolumeDensity => Some(commands::cmd_volume_density(&input()?, cfg)?),
        Command::Laplacian {
            space,
            field,
            s_re,
            s_im,
            a_scale,
            b_scale,
        } => Some(commands::cmd_laplacian(
            space,
            field,
            C64::c(*s_re, *s_im),
            *a_scale,
            *b_scale,
            &input()?,
            cfg,
        )?),
        Command::Operator {
            name,
            field,
            s_re,
            s_im,
        } => Some(commands::cmd_operator(
            name,
            field,
            C64::c(*s_re, *s_im),
            &input()?,
            cfg,
        )?),
        Command::InvarianceTest {
            what,
            name,
            n,
            m,
            trials,
        } => Some(commands::cmd_invariance_test(
            what,
            name.as_deref(),
            *n,
            *m,
            *trials,
            cfg,
        )?),
        Command::InvariantPoly { family, indices } => Some(commands::cmd_invariant_poly(
            family,
            indices,
            &input()?,
            cfg,
        )?),
        Command::Reduce { space } => Some(commands::cmd_reduce(space, &input()?, cfg)?),
        Command::Membership { space } => Some(commands::cmd_membership(space, &input()?, cfg)?),
        Command::Volume {
            n,
            estimate,
            samples,
        } => Some(commands::cmd_volume(*n, *estimate, *samples, cfg)?),
        Command::Bessel { s_re, s_im, z } => Some(commands::cmd_bessel(C64::c(*s_re, *s_im), *z)?),
        Command::EigenCheck {
            entry,
            variant,
            s_re,
            s_im,
            a,
            points,
        } => Some(commands::cmd_eigen_check(
            *entry,
            *variant,
            C64::c(*s_re, *s_im),
            *a,
            *points,
            cfg,
        )?),
        Command::OdeCheck {
            s_re,
            s_im,
            n_idx,
            r_idx,
            y,
            v,
        } => Some(commands::cmd_ode_check(
            C64::c(*s_re, *s_im),
            *n_idx,
            *r_idx,
            *y,
            *v,
        )?),
        Command::Eisenstein { bound, s_re, s_im } => Some(commands::cmd_eisenstein(
            *bound,
            C64::c(*s_re, *s_im),
            &input()?,
            cfg,
        )?),
        Command::TorusGram { grid } => Some(commands::cmd_torus_gram(*grid, &input()?, cfg)?),
        Command::VerifyAll => {
            let reports = acceptance::run_all(cfg.seed);
            for r in &reports {
                println!("{}", r.line());
            }
            println!("\nSkipped by design (not reproducible at desk scale):");
            for s in acceptance::SKIPPED_BY_DESIGN {
                println!("  - {s}");
            }
            let failed = reports.iter().filter(|r| !r.pass).count();
            if failed > 0 {
                println!("\n{failed} of {} criteria FAILED", reports.len());
                std::process::exit(commands::EXIT_SUITE_FAILED);
            }
            println!("\nall {} criteria passed", reports.len());
            None
        }
    };
    Ok(out)
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    std::process::exit(commands::EXIT_OK);
                }
                _ => {
                    let _ = e.print();
                    std::process::exit(commands::EXIT_UNKNOWN_SUBCOMMAND);
                }
            };
        }
    };
    let cfg = match load_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            println!("{}", serde_json::to_string(&e.body()).unwrap());
            std::process::exit(e.exit_code());
        }
    };
    match dispatch(&cli, &cfg) {
        Ok(Some(v)) => println!("{}", cfg.render(&v)),
        Ok(None) => {}
        Err(e) => {
            println!("{}", cfg.render(&e.body()));
            std::process::exit(e.exit_code());
        }
    }
}
