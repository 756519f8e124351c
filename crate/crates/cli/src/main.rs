//! `lemnis` — multiprecision zero computation, verification suites, and
//! figure-data export for the monic Jacobi family with parameters
//! `(m + 1/2, -m - 1/2)`.

mod commands;
mod config;
mod output;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use config::{OutputFormat, Overrides, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "lemnis",
    version,
    about = "Zeros, orthogonality and asymptotics checks for a non-classical Jacobi family",
    disable_help_subcommand = true
)]
struct Cli {
    /// Key = value configuration file (flags win over file entries).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Output directory (also via LEMNIS_OUTPUT_DIR).
    #[arg(long, global = true, value_name = "DIR")]
    output_dir: Option<PathBuf>,

    /// Mantissa bits; default is the auto rule 2m + 64 rounded up to 64.
    #[arg(long, global = true)]
    precision_bits: Option<u32>,

    /// Radius of the u_eps disk around the origin.
    #[arg(long, global = true)]
    epsilon: Option<f64>,

    /// Outer modulus bound of the operational band.
    #[arg(long, global = true)]
    band_outer: Option<f64>,

    /// Radius of the circular quadrature contour.
    #[arg(long, global = true)]
    gamma_radius: Option<f64>,

    /// Trapezoid node count on the contour.
    #[arg(long, global = true)]
    quad_nodes: Option<usize>,

    /// Radius of the xi-plane disk for the local model.
    #[arg(long, global = true)]
    xi_r: Option<f64>,

    /// Output format for tabular data: csv or json.
    #[arg(long, global = true, value_parser = OutputFormat::parse)]
    format: Option<OutputFormat>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute, certify and export the zeros of the degree-m member.
    Zeros {
        #[arg(long)]
        m: usize,
        /// Also export the diagnostic boxes around each predicted zero.
        #[arg(long)]
        with_boxes: bool,
        /// Relative convergence tolerance for the root iteration.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run verification suites and write a machine-readable verdict.
    Verify {
        /// Comma-separated ascending degrees, e.g. 10,20,40.
        #[arg(long, value_delimiter = ',')]
        m_list: Option<Vec<usize>>,
        /// all, proposition, pairing, lemniscate, orthogonality or local.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Largest polynomial degree in the orthogonality grid.
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        /// Largest weight index in the orthogonality grid.
        #[arg(long, default_value_t = 1)]
        n_max: usize,
    },
    /// Export plot data: 1 zero scatter, 6 Sigma + zeros, 9 Sigma + the
    /// scaled level curve, 10 the |q_l| grid.
    Figures {
        #[arg(long)]
        which: String,
        #[arg(long)]
        m: Option<usize>,
        /// Points per exported curve.
        #[arg(long, default_value_t = 512)]
        samples: usize,
        /// Grid nodes per side for figure 10.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Exact-vs-predicted comparison samples for the outer formula.
    Asymptotics {
        #[arg(long, value_delimiter = ',')]
        m_list: Vec<usize>,
        /// Band sample points per degree.
        #[arg(long, default_value_t = 5)]
        points: usize,
    },
    /// |q_l| grid over the xi square (same data as figure 10).
    PcfGrid {
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Exact rational JSON export of the monic polynomial.
    Polynomial {
        #[arg(long)]
        m: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let flags = Overrides {
        precision_bits: cli.precision_bits,
        epsilon: cli.epsilon,
        band_outer: cli.band_outer,
        gamma_radius: cli.gamma_radius,
        quad_nodes: cli.quad_nodes,
        xi_r: cli.xi_r,
        output_dir: cli.output_dir.clone(),
        format: cli.format,
    };
    let cfg = match RunConfig::assemble(cli.config.as_deref(), &flags) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(64);
        }
    };

    let result = match &cli.command {
        Command::Zeros { m, with_boxes, tol } => commands::cmd_zeros(&cfg, *m, *with_boxes, *tol),
        Command::Verify {
            m_list,
            suite,
            k_max,
            n_max,
        } => {
            let default_list = vec![10, 20, 40];
            let list = m_list.clone().unwrap_or(default_list);
            commands::cmd_verify(&cfg, &list, suite, *k_max, *n_max)
        }
        Command::Figures {
            which,
            m,
            samples,
            grid,
        } => commands::cmd_figures(&cfg, which, *m, *samples, *grid),
        Command::Asymptotics { m_list, points } => {
            commands::cmd_asymptotics(&cfg, m_list, *points)
        }
        Command::PcfGrid { grid } => commands::cmd_pcf_grid(&cfg, *grid),
        Command::Polynomial { m } => commands::cmd_polynomial(&cfg, *m),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
