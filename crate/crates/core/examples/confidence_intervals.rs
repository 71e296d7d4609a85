//! Interval and cost-rate arithmetic from published count summaries: 95%
//! intervals from mean/sd over 200 iterations, the renewal-cycle cost rate
//! and the downtime exposure E[N_CR]·C_down.
//!
//!     cargo run --example confidence_intervals

use cbm_rl::eval::{cost_rate_from_expectations, interval_from_summary, ExpectedCounts};
use cbm_rl::CaseConfig;

fn main() -> cbm_rl::Result<()> {
    // (N_P, N_PR, N_CR, S) as (mean, sd) pairs for a trained agent on Case 2.
    let counts = [("N_P", 44.12, 1.87), ("N_PR", 18.54, 1.14), ("N_CR", 0.31, 0.55), ("S", 51.70, 2.87)];
    for (name, mean, sd) in counts {
        let ci = interval_from_summary(mean, sd, 200, 0.95)?;
        println!("{name:<5} {mean:>6.2} ± {sd:<5.2} -> [{:.2}, {:.2}]", ci.lower, ci.upper);
    }

    let case = CaseConfig::builtin(2)?;
    let e = ExpectedCounts { repairs: 44.12, preventive_replacements: 18.54, corrective_replacements: 0.31, cycle_length: 51.70 };
    let costs = case.costs();
    println!("\nlong-run cost rate {:.1}", cost_rate_from_expectations(&e, &costs));
    println!("E[N_CR]·C_down     {:.0}", e.corrective_replacements * costs.c_down);
    Ok(())
}
