use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pptdisc::cli::{
    all_table_rows, cmd_error_curve, cmd_exponents, cmd_separation, cmd_tradeoff, cmd_verify,
    load_basis, parse_curve_case, parse_grid, OutputFormat, RunConfig,
};
use pptdisc::exponents::TableRow;

/// Optimal error probabilities, trade-off curves, and error exponents for
/// multi-copy quantum state discrimination under LOCC/SEP/PPT measurements.
#[derive(Parser)]
#[command(name = "pptdisc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_parser = ["csv", "json"], default_value = "csv")]
    format: String,
    /// Output file path (stdout when omitted). Relative paths are prefixed
    /// by $PPTDISC_OUT_DIR when set.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suppress the timestamp header line (CSV only).
    #[arg(long)]
    no_timestamp: bool,
    /// Seed for any randomized internals.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restart budget for randomized optimizers.
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    /// Tolerance override where a command supports one.
    #[arg(long)]
    tol: Option<f64>,
}

impl OutputArgs {
    fn to_config(&self) -> RunConfig {
        RunConfig {
            format: if self.format == "json" {
                OutputFormat::Json
            } else {
                OutputFormat::Csv
            },
            out: self.out.clone(),
            seed: self.seed,
            timestamp: !self.no_timestamp,
            restarts: self.restarts,
            tol: self.tol,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Error-probability curve over a range of copy counts.
    ///
    /// CSV columns: case, n, p_e_closed_form, p_e_lp, p_e_lower_cert. The LP
    /// and certificate columns are filled for the `mes` case, where the
    /// symmetry-reduced solver applies.
    ErrorCurve {
        /// Hypothesis case: mes | mes-high | mes-high-1 | sym-high | sym-high-1.
        #[arg(long, default_value = "mes")]
        case: String,
        /// Local dimension d.
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Embedded dimension m (padded cases).
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Mixing weight lambda (padded cases).
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Prior probability of the null hypothesis.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long, default_value_t = 6)]
        n_max: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Optimal type-I/type-II trade-off over an alpha grid.
    ///
    /// CSV columns: d, n, alpha, beta_lp, beta_closed.
    Tradeoff {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long, default_value_t = 3)]
        n_max: u32,
        /// Comma-separated alpha values in [0, 1].
        #[arg(long, default_value = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1")]
        alpha_grid: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exponent summary rows over a rate grid.
    ///
    /// CSV columns: case, d, m, lambda, r, chernoff, stein, hoeffding,
    /// strong_converse.
    Exponents {
        /// Row name (mes-forward, mes-reverse, werner-forward,
        /// werner-reverse, mes-padded, mes-perp-padded, werner-padded,
        /// werner-perp-padded), a row number 1-8, or "all".
        #[arg(long, default_value = "all")]
        case: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        /// Comma-separated positive rates.
        #[arg(long, default_value = "0.5,1,1.5,2")]
        r_grid: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Separation report for an unextendible product basis (default: Tiles).
    ///
    /// Emits JSON with the minimax-overlap estimate, the PPT-perfect flag,
    /// the geometric SEP error bound series, and witness checks.
    Separation {
        /// JSON file with a product basis; the built-in Tiles basis when
        /// omitted.
        #[arg(long)]
        basis: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long, default_value_t = 2)]
        n_max: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Runs the certificate suite and reports pass/fail per check.
    Verify {
        #[command(flatten)]
        output: OutputArgs,
        /// Inject a perturbation into Q as a negative control.
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb_q: f64,
    },
}

fn run() -> pptdisc::Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::ErrorCurve {
            case,
            d,
            m,
            lambda,
            p,
            n_min,
            n_max,
            output,
        } => {
            let cfg = output.to_config();
            let spec = parse_curve_case(&case, d, m, lambda)?;
            let text = cmd_error_curve(&spec, p, n_min, n_max, &cfg)?;
            emit(&cfg, text)?;
            Ok(true)
        }
        Command::Tradeoff {
            d,
            n_min,
            n_max,
            alpha_grid,
            output,
        } => {
            let cfg = output.to_config();
            let grid = parse_grid(&alpha_grid)?;
            let text = cmd_tradeoff(d, n_min, n_max, &grid, &cfg)?;
            emit(&cfg, text)?;
            Ok(true)
        }
        Command::Exponents {
            case,
            d,
            m,
            lambda,
            r_grid,
            output,
        } => {
            let cfg = output.to_config();
            let rows = if case == "all" {
                all_table_rows(d, m, lambda)?
            } else if let Ok(index) = case.parse::<usize>() {
                vec![TableRow::from_index(index, d, m, lambda)?]
            } else {
                vec![TableRow::from_label(&case, d, m, lambda)?]
            };
            let grid = parse_grid(&r_grid)?;
            let text = cmd_exponents(&rows, &grid, &cfg)?;
            emit(&cfg, text)?;
            Ok(true)
        }
        Command::Separation {
            basis,
            n_min,
            n_max,
            output,
        } => {
            let cfg = output.to_config();
            let loaded = basis.as_deref().map(load_basis).transpose()?;
            let text = cmd_separation(loaded.as_ref(), n_min, n_max, &cfg)?;
            emit(&cfg, text)?;
            Ok(true)
        }
        Command::Verify { output, perturb_q } => {
            let cfg = output.to_config();
            let (text, passed) = cmd_verify(cfg.seed, perturb_q)?;
            emit(&cfg, text)?;
            Ok(passed)
        }
    }
}

fn emit(cfg: &RunConfig, text: String) -> pptdisc::Result<()> {
    if let Some(stdout_text) = cfg.deliver(text)? {
        print!("{stdout_text}");
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
