//! Grid search over TBM thresholds and Age periods under common random
//! numbers, then the four-parameter ATBM with both optima in its grid.
//!
//!     cargo run --release --example optimize_baseline

use cbm_rl::baselines::{optimize_baseline, BaselineKind, GridSpec};
use cbm_rl::CaseConfig;

fn main() -> cbm_rl::Result<()> {
    let case = CaseConfig::builtin(2)?;
    let (iterations, horizon, seed) = (50, 1000, 3);
    let l = case.failure_threshold;

    let tbm = optimize_baseline(BaselineKind::Tbm, &case, &GridSpec::regular(l, 0.5, 1, 1)?, iterations, horizon, seed)?;
    let age = optimize_baseline(BaselineKind::Age, &case, &GridSpec::regular(l, 1.0, 60, 4)?, iterations, horizon, seed)?;
    let mut grid = GridSpec::regular(l, 1.0, 60, 20)?;
    grid.include(&tbm.best.spec);
    grid.include(&age.best.spec);
    let atbm = optimize_baseline(BaselineKind::Atbm, &case, &grid, iterations, horizon, seed)?;

    for o in [&tbm, &age, &atbm] {
        println!(
            "{:<55} cost per inspection {:>7.2} ± {:.2}  ({} candidates)",
            o.best.spec.describe(),
            o.best.mean_cost_rate,
            o.best.ci_half_width,
            o.surface.len()
        );
    }

    // The TBM cost surface along the diagonal of repair threshold = 6.
    println!("\nTBM, repair at 6:");
    for p in tbm.surface.iter().filter(|p| matches!(p.spec, cbm_rl::BaselineSpec::Tbm { repair_threshold, .. } if repair_threshold == 6.0)) {
        println!("  {:<40} {:>7.2}", p.spec.describe(), p.mean_cost_rate);
    }
    Ok(())
}
