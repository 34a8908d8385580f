use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use krylov_cli::config::{Format, Mode, Overrides};
use krylov_cli::error::{CliError, Result, EXIT_INVALID_CONFIG, EXIT_VERIFICATION};
use krylov_cli::figures::{figure_data, Figure};
use krylov_cli::output::{write_csv, write_json};
use krylov_cli::{run_sweep, verify};

/// Krylov complexity sweeps for L = alpha (a^dag + a) + beta/2 (a^dag^2 + a^2).
#[derive(Debug, Parser)]
#[command(name = "krylov", version)]
struct Args {
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long)]
    tmin: Option<f64>,
    #[arg(long)]
    tmax: Option<f64>,
    /// Grid points, endpoints included.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// complexity, variance, distribution, autocorrelator, lanczos or verify.
    #[arg(long)]
    mode: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Output file, or directory for --figure. Defaults to stdout / the current directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// File of `key = value` lines; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the data for fig1, fig2 or fig3 as CSV.
    #[arg(long)]
    figure: Option<String>,
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(args: Args) -> Result<i32> {
    let flags = Overrides {
        alpha: args.alpha,
        beta: args.beta,
        t_min: args.tmin,
        t_max: args.tmax,
        steps: args.steps,
        dim: args.dim,
        tol: args.tol,
        mode: args.mode.as_deref().map(str::parse::<Mode>).transpose()?,
        format: args.format.as_deref().map(str::parse::<Format>).transpose()?,
        out: args.out,
    };
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            Overrides::from_config_text(&text)?
        }
        None => Overrides::default(),
    };

    if let Some(name) = args.figure {
        let table = figure_data(name.parse::<Figure>()?)?;
        let dir = flags.out.unwrap_or_else(|| PathBuf::from("."));
        fs::create_dir_all(&dir)?;
        let path = dir.join(format!("{}.csv", table.name));
        let mut w = BufWriter::new(File::create(&path)?);
        table.write_csv(&mut w)?;
        w.flush()?;
        eprintln!("wrote {}", path.display());
        return Ok(0);
    }

    let (cfg, format, out) = flags.over(file).into_config()?;
    let mut w = sink(&out)?;
    if cfg.mode == Mode::Verify {
        let report = verify(&cfg)?;
        match format {
            Format::Csv => report.write_text(&mut w)?,
            Format::Json => serde_json::to_writer_pretty(&mut w, &report)?,
        }
        w.flush()?;
        return Ok(if report.passed() { 0 } else { EXIT_VERIFICATION });
    }
    let rows = run_sweep(&cfg)?;
    match format {
        Format::Csv => write_csv(&rows, &mut w)?,
        Format::Json => write_json(&cfg, &rows, &mut w)?,
    }
    w.flush()?;
    Ok(0)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
