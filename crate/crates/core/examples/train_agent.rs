//! Trains a DDQN agent on Case 2, saves it, and shows what it learned.
//!
//!     cargo run --release --example train_agent -- [episodes] [model path]
//!
//! 300 episodes take well under a minute; the full budget is 50000.

use std::path::PathBuf;

use cbm_rl::pipeline::cmd_train;
use cbm_rl::{greedy_policy, AgentConfig, CaseConfig, SystemState};

fn main() -> cbm_rl::Result<()> {
    let mut args = std::env::args().skip(1);
    let episodes = args.next().map_or(300, |a| a.parse().expect("episodes must be a number"));
    let out = args.next().map_or_else(|| std::env::temp_dir().join("cbm_case2.json"), PathBuf::from);

    let case = CaseConfig::builtin(2)?;
    let cfg = AgentConfig { episodes, seed: 1, ..AgentConfig::default() };
    let report = cmd_train(&case, &cfg, &out, |e| {
        if e.episode % 50 == 0 {
            println!("episode {:>5}  reward {:>9.0}  epsilon {:.3}  loss {:.2e}", e.episode, e.cumulative_reward, e.epsilon, e.mean_loss);
        }
    })?;
    println!("model {} and log {}", report.model_path.display(), report.log_path.display());

    // Greedy action over a coarse grid of (x, x_m).
    let policy = greedy_policy(report.net, case.failure_threshold);
    print!("\n x \\ x_m");
    let levels = [0.0, 2.0, 4.0, 6.0];
    for m in levels {
        print!("{m:>5}");
    }
    println!();
    for i in 0..=15 {
        let x = i as f64 * 0.5;
        print!("{x:>8.1}");
        for m in levels {
            let cell = if m > x { "  ." } else { policy.action(&SystemState { x, x_m: m }).label() };
            print!("{cell:>5}");
        }
        println!();
    }
    Ok(())
}
