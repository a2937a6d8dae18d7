use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use predsearch_cli::commands::{lowerbound_scene, points_csv};
use predsearch_cli::output::to_json;
use predsearch_cli::svg::render_svg;
use predsearch_cli::{
    cmd_lowerbound, cmd_net, cmd_run, cmd_sweep, ExperimentConfig, HarnessError, Result,
    SweepParams,
};
use predsearch_core::StrategyKind;

#[derive(Parser)]
#[command(
    name = "predsearch",
    version,
    about = "Search with noisy distance predictions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    KnownC,
    UnknownC,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configured search, audit it and write trace/report files.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Trace CSV path (overrides config output.trace).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report JSON path (overrides config output.report).
        #[arg(long)]
        report: Option<PathBuf>,
        /// SVG path, d = 2 only (overrides config output.svg).
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        delta_stop: Option<f64>,
    },
    /// Seeded-noise trials over a grid of dimensions and prediction factors.
    Sweep {
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        d: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2,4")]
        c: Vec<f64>,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-3)]
        delta_stop: f64,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Play a strategy against the adaptive lower-bound adversary.
    Lowerbound {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value = "unknown-c")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 1e-3)]
        delta_stop: f64,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Build an ε-net of B(o, r) and print its size against the bounds.
    Net {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long)]
        eps: f64,
        /// Run the sampled covering check and the exact separation check.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the net points as CSV.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

fn write(path: &PathBuf, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            out,
            report,
            svg,
            seed,
            delta_stop,
        } => {
            let text = fs::read_to_string(&config).map_err(|source| HarnessError::Io {
                path: config.display().to_string(),
                source,
            })?;
            let mut cfg = ExperimentConfig::from_json(&text)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(dl) = delta_stop {
                cfg.strategy.delta_stop = dl;
            }
            let out = out.or(cfg.output.trace.clone().map(PathBuf::from));
            let report = report.or(cfg.output.report.clone().map(PathBuf::from));
            let svg = svg.or(cfg.output.svg.clone().map(PathBuf::from));

            let result = cmd_run(&cfg, svg.is_some())?;
            match &out {
                Some(p) => write(p, &result.trace_csv)?,
                None => print!("{}", result.trace_csv),
            }
            match &report {
                Some(p) => write(p, &result.report_json)?,
                None => print!("{}", result.report_json),
            }
            if let (Some(p), Some(doc)) = (&svg, &result.svg) {
                write(p, doc)?;
            }
            if !result.report.ok() {
                let why = if result.report.reached {
                    result.report.violations.join("; ")
                } else {
                    "target not reached".to_string()
                };
                return Err(HarnessError::Violation(why));
            }
            Ok(())
        }
        Command::Sweep {
            d,
            c,
            trials,
            seed,
            delta_stop,
            out,
        } => {
            let mut params = SweepParams::new(d, c, trials, seed);
            params.delta_stop = delta_stop;
            let result = cmd_sweep(&params)?;
            match &out {
                Some(p) => write(p, &result.csv)?,
                None => print!("{}", result.csv),
            }
            let failures = result.failures();
            if !failures.is_empty() {
                for f in &failures {
                    eprintln!(
                        "FLAGGED d={} c={} trial={} {:?}: {}",
                        f.d,
                        f.c,
                        f.trial,
                        f.strategy,
                        f.report.violations.join("; ")
                    );
                }
                return Err(HarnessError::Violation(format!(
                    "{} sweep rows flagged",
                    failures.len()
                )));
            }
            Ok(())
        }
        Command::Lowerbound {
            c,
            d,
            strategy,
            delta_stop,
            report,
            svg,
        } => {
            let kind = match strategy {
                StrategyArg::KnownC => StrategyKind::KnownC,
                StrategyArg::UnknownC => StrategyKind::UnknownC,
            };
            let result = cmd_lowerbound(c, d, kind, delta_stop)?;
            match &report {
                Some(p) => write(p, &result.json)?,
                None => print!("{}", result.json),
            }
            if let Some(p) = &svg {
                let doc = render_svg(&result.trace, &lowerbound_scene(&result.instance))?;
                write(p, &doc)?;
            }
            if !result.ok() {
                return Err(HarnessError::Violation(
                    result.summary.report.violations.join("; "),
                ));
            }
            Ok(())
        }
        Command::Net {
            d,
            r,
            eps,
            check,
            seed,
            dump,
        } => {
            let (summary, points) = cmd_net(d, r, eps, check, seed)?;
            print!("{}", to_json(&summary)?);
            if let Some(p) = &dump {
                write(p, &points_csv(&points))?;
            }
            let checks_ok =
                summary.covering.is_none_or(|c| c.ok) && summary.separated != Some(false);
            if !summary.within_bounds || !checks_ok {
                return Err(HarnessError::Violation("net certificate failed".into()));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
