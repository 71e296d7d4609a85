use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cbm_rl::baselines::{BaselineKind, GridSpec};
use cbm_rl::pipeline::{self, McSettings, PolicySource};
use cbm_rl::{load_case, AgentConfig, CaseConfig, Error};

#[derive(Parser)]
#[command(name = "cbm-rl", version, about = "Gamma-process maintenance: DDQN training, baselines and Monte Carlo evaluation")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Built-in case id (1-7, 2 is the baseline) or path to a TOML case file.
    #[arg(long, global = true)]
    case: Option<String>,
    /// Master seed; defaults to the case file's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo iterations; defaults to the case's value (200).
    #[arg(long, global = true)]
    iterations: Option<usize>,
    /// Inspections per iteration; defaults to the case's value (1000).
    #[arg(long, global = true)]
    horizon: Option<usize>,
    /// Output file (train, trace) or directory (evaluate, optimize, compare).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Train a DDQN agent; writes the model and `<model>.log.csv`. Requires --case.
    Train {
        #[arg(long, default_value_t = 50_000)]
        episodes: usize,
        #[arg(long, default_value_t = 500)]
        episode_length: usize,
        /// Print a progress line every N episodes (0 = silent).
        #[arg(long, default_value_t = 1000)]
        progress: usize,
    },
    /// Monte Carlo evaluation of a model or baseline.
    Evaluate {
        /// `fr`, a baseline spec JSON from `optimize`, or a model file.
        #[arg(long)]
        policy: String,
    },
    /// Grid-search the parameters of a conventional policy.
    Optimize {
        /// tbm, age or atbm (fr has no parameters).
        #[arg(long)]
        baseline: String,
        #[arg(long)]
        threshold_step: Option<f64>,
        #[arg(long)]
        max_period: Option<u32>,
        #[arg(long)]
        period_step: Option<u32>,
    },
    /// Compare a trained model against FR and the optimized TBM, Age and ATBM.
    Compare {
        #[arg(long)]
        model: PathBuf,
        /// Directory holding `<kind>_best.json` files; defaults to --out.
        #[arg(long)]
        specs: Option<PathBuf>,
    },
    /// Export one episode trace for plotting.
    Trace {
        #[arg(long)]
        policy: String,
        #[arg(long, default_value_t = 250)]
        steps: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = cli.global;
    if matches!(cli.command, Command::Train { .. }) && g.case.is_none() {
        return Err(Failure::Usage("train needs an explicit --case".into()));
    }
    let case = load_case(g.case.as_deref().unwrap_or("2"))?;
    let seed = g.seed.unwrap_or(case.seed);
    let mc = McSettings {
        iterations: g.iterations.unwrap_or(case.iterations),
        horizon: g.horizon.unwrap_or(case.horizon),
        seed,
    };
    let out_or = |default: &str| g.out.clone().unwrap_or_else(|| PathBuf::from(default));

    match cli.command {
        Command::Train { episodes, episode_length, progress } => {
            let cfg = AgentConfig { episodes, episode_length, seed, ..AgentConfig::default() };
            let out = out_or("model.json");
            let report = pipeline::cmd_train(&case, &cfg, &out, |e| {
                if progress > 0 && e.episode % progress == 0 {
                    eprintln!("episode {:>6}  reward {:>10.0}  epsilon {:.3}  loss {:.3e}", e.episode, e.cumulative_reward, e.epsilon, e.mean_loss);
                }
            })?;
            println!("model: {}\nlog:   {}", report.model_path.display(), report.log_path.display());
        }
        Command::Evaluate { policy } => {
            let source = PolicySource::parse(&policy)?;
            let report = pipeline::cmd_evaluate(&case, &source, mc, &out_or("results"))?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            print_summary(&case, &report.policy, &report.summary);
            println!("results: {}\nsummary: {}", report.results_path.display(), report.summary_path.display());
        }
        Command::Optimize { baseline, threshold_step, max_period, period_step } => {
            let kind: BaselineKind = baseline.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            let grid = if threshold_step.is_some() || max_period.is_some() || period_step.is_some() {
                let d = GridSpec::default_for(kind, case.failure_threshold);
                let step = threshold_step.unwrap_or(if kind == BaselineKind::Atbm { 0.5 } else { 0.25 });
                let max = max_period.unwrap_or_else(|| d.periods.iter().flatten().copied().max().unwrap_or(80));
                let pstep = period_step.unwrap_or(if kind == BaselineKind::Atbm { 10 } else { 1 });
                Some(GridSpec::regular(case.failure_threshold, step, max, pstep)?)
            } else {
                None
            };
            let report = pipeline::cmd_optimize(kind, &case, grid, mc, &out_or("results"))?;
            let best = report.optimized.best;
            println!(
                "best {}: cost per inspection {:.3} ± {:.3} over {} candidates",
                best.spec.describe(),
                best.mean_cost_rate,
                best.ci_half_width,
                report.optimized.surface.len()
            );
            println!("surface: {}\nbest:    {}", report.surface_path.display(), report.best_path.display());
        }
        Command::Compare { model, specs } => {
            let out = out_or("results");
            let specs = specs.unwrap_or_else(|| out.clone());
            let report = pipeline::cmd_compare(&case, &model, &specs, mc, &out)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            println!("{:<6} {:>12} {:>10} {:>14}", "policy", "cost/insp.", "EC", "RL reduction");
            for r in &report.rows {
                println!(
                    "{:<6} {:>12.2} {:>10.1} {:>13.1}%",
                    r.policy, r.summary.cost_per_inspection.mean, r.summary.cycle_cost_rate.mean, r.rl_reduction_percent
                );
            }
            println!("costs:      {}\nreductions: {}", report.costs_path.display(), report.reductions_path.display());
        }
        Command::Trace { policy, steps } => {
            let source = PolicySource::parse(&policy)?;
            let out = out_or("trace.csv");
            let trace = pipeline::cmd_trace(&case, &source, steps, seed, &out)?;
            println!("{} steps -> {}", trace.len(), out.display());
        }
    }
    Ok(())
}

fn print_summary(case: &CaseConfig, policy: &str, s: &cbm_rl::eval::Summary) {
    println!("case {} ({}), policy {policy}", case.id, case.label);
    println!("{:<6} {:>9} {:>8} {:>20}", "", "mean", "sd", "95% interval");
    for (name, e) in [
        ("N_P", &s.repairs),
        ("N_PR", &s.preventive_replacements),
        ("N_CR", &s.corrective_replacements),
        ("S", &s.cycle_length),
        ("EC", &s.cycle_cost_rate),
    ] {
        println!("{name:<6} {:>9.2} {:>8.2} {:>9.2} .. {:<9.2}", e.mean, e.sd, e.lower, e.upper);
    }
    println!("cost per inspection {:.2}, E[N_CR]·C_down {:.0}", s.cost_per_inspection.mean, s.availability);
}
