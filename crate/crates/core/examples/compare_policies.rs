//! The full pipeline on Case 2 in a scratch directory: train, optimize the
//! baselines, compare everything on the same random streams.
//!
//!     cargo run --release --example compare_policies -- [episodes] [iterations]
//!
//! Defaults are small enough for a quick look; use 5000+ episodes and 200
//! iterations for meaningful numbers.

use cbm_rl::baselines::{BaselineKind, GridSpec};
use cbm_rl::pipeline::{cmd_compare, cmd_optimize, cmd_train, McSettings};
use cbm_rl::{AgentConfig, CaseConfig};

fn main() -> cbm_rl::Result<()> {
    let mut args = std::env::args().skip(1);
    let episodes = args.next().map_or(300, |a| a.parse().expect("episodes must be a number"));
    let iterations = args.next().map_or(50, |a| a.parse().expect("iterations must be a number"));

    let case = CaseConfig::builtin(2)?;
    let dir = std::env::temp_dir().join("cbm_compare");
    let model = dir.join("model.json");
    let mc = McSettings { iterations, horizon: case.horizon, seed: 5 };

    cmd_train(&case, &AgentConfig { episodes, seed: 5, ..AgentConfig::default() }, &model, |_| {})?;
    let l = case.failure_threshold;
    cmd_optimize(BaselineKind::Tbm, &case, Some(GridSpec::regular(l, 0.5, 1, 1)?), mc, &dir)?;
    cmd_optimize(BaselineKind::Age, &case, Some(GridSpec::regular(l, 1.0, 60, 2)?), mc, &dir)?;
    // Picks up the TBM and Age optima written above.
    cmd_optimize(BaselineKind::Atbm, &case, Some(GridSpec::regular(l, 1.0, 60, 20)?), mc, &dir)?;

    let report = cmd_compare(&case, &model, &dir, mc, &dir)?;
    println!("{:<6} {:<52} {:>10} {:>13}", "policy", "parameters", "cost/insp.", "RL reduction");
    for r in &report.rows {
        let spec = r.spec.map_or_else(|| "greedy DDQN".to_string(), |s| s.describe());
        println!("{:<6} {:<52} {:>10.2} {:>12.1}%", r.policy, spec, r.summary.cost_per_inspection.mean, r.rl_reduction_percent);
    }
    println!("\nper-iteration costs: {}", report.costs_path.display());
    Ok(())
}
