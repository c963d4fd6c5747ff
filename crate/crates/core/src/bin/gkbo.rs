use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gkbo::harness::{self, ConfigFile, ExperimentReport, ReportOptions};

#[derive(Parser)]
#[command(
    name = "gkbo",
    version,
    about = "Leader/follower kinetic optimization experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment (M repetitions of a single configuration).
    Run(RunArgs),
    /// Run every point of the `[sweep]` grid in the config file.
    Sweep(RunArgs),
    /// Re-render plots from an existing summary.csv.
    Plot {
        /// Directory holding summary.csv; plots are written next to it.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// TOML file with [dynamics], [transition], [experiment] and [sweep] sections.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Base seed; overrides `experiment.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Record moment traces every n iterations.
    #[arg(long)]
    trace_every: Option<usize>,
    /// Repetitions per grid point; overrides `experiment.repetitions`.
    #[arg(long)]
    repetitions: Option<usize>,
    /// Fill the wall_time_ms column (makes runs.csv timing dependent).
    #[arg(long)]
    wall_time: bool,
    /// Skip SVG plots.
    #[arg(long)]
    no_plots: bool,
}

fn load(args: &RunArgs) -> gkbo::Result<ConfigFile> {
    let mut file = match &args.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let exp = &mut file.run.experiment;
    if let Some(seed) = args.seed {
        exp.seed = seed;
    }
    if let Some(every) = args.trace_every {
        exp.trace_every = every;
    }
    if let Some(m) = args.repetitions {
        exp.repetitions = m;
    }
    Ok(file)
}

fn execute(args: &RunArgs, sweep: bool) -> gkbo::Result<Vec<ExperimentReport>> {
    let file = load(args)?;
    let cfg = &file.run;
    let (m, seed) = (cfg.experiment.repetitions, cfg.experiment.seed);
    let work = || {
        if sweep {
            if file.axes.is_empty() {
                log::warn!("config has no [sweep] axes; running a single grid point");
            }
            harness::sweep(cfg, &file.axes, m, seed)
        } else {
            if !file.axes.is_empty() {
                log::warn!("`run` ignores the [sweep] section; use `sweep` for grids");
            }
            harness::run_experiment(cfg, m, seed).map(|r| vec![r])
        }
    };
    match args.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| gkbo::Error::Config(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

fn emit(reports: &[ExperimentReport], args: &RunArgs) -> gkbo::Result<()> {
    let opts = ReportOptions {
        wall_time: args.wall_time,
        plots: !args.no_plots,
    };
    let files = harness::emit_report(reports, &args.out, opts)?;
    for rep in reports {
        match &rep.error {
            Some(e) => println!("[{}] {}: error: {e}", rep.experiment_id, rep.grid_label()),
            None => println!(
                "[{}] {} success={:.2} iterations mean={:.1} min={} max={}",
                rep.experiment_id,
                if rep.grid_point.is_empty() {
                    "-".to_string()
                } else {
                    rep.grid_label()
                },
                rep.success_rate(),
                rep.iter_mean(),
                rep.iter_min().unwrap_or(0),
                rep.iter_max().unwrap_or(0),
            ),
        }
    }
    log::info!("wrote {} files to {}", files.len(), args.out.display());
    Ok(())
}

fn replot(out: &Path) -> gkbo::Result<()> {
    let rows = harness::read_summary(out.join(harness::SUMMARY_FILE))?;
    let files = harness::render_plots(&rows, out)?;
    for f in files {
        println!("{}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => execute(args, false).and_then(|r| emit(&r, args)),
        Command::Sweep(args) => execute(args, true).and_then(|r| emit(&r, args)),
        Command::Plot { out } => replot(out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
