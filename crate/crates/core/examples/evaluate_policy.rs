//! Monte Carlo evaluation (200 iterations x 1000 inspections) of conventional
//! policies, printed as count means, 95% intervals and cost rates.
//!
//!     cargo run --release --example evaluate_policy

use cbm_rl::eval::{ks_normality, summarize, Summary};
use cbm_rl::{monte_carlo, BaselineSpec, CaseConfig};

fn main() -> cbm_rl::Result<()> {
    let case = CaseConfig::builtin(2)?;
    let env = case.env()?;
    let policies = [
        ("FR", BaselineSpec::Fr),
        ("TBM 6/7", BaselineSpec::Tbm { repair_threshold: 6.0, replacement_threshold: 7.0 }),
        ("Age 20/40", BaselineSpec::Age { repair_period: Some(20), replacement_period: Some(40) }),
    ];
    for (name, spec) in policies {
        // Same seed for every policy: common random numbers.
        let stats = monte_carlo(&spec, &env, case.iterations, case.horizon, 11)?;
        let s = summarize(&stats, &case.costs())?;
        report(name, &s);
        let totals: Vec<f64> = stats.iter().map(|r| r.total_cost).collect();
        let ks = ks_normality(&totals)?;
        println!("  KS normality of total cost: D = {:.4} (5% critical {:.4})", ks.statistic, ks.critical_value);
    }
    Ok(())
}

fn report(name: &str, s: &Summary) {
    println!("\n{name}");
    for (label, e) in [
        ("N_P", &s.repairs),
        ("N_PR", &s.preventive_replacements),
        ("N_CR", &s.corrective_replacements),
        ("S", &s.cycle_length),
    ] {
        println!("  {label:<5} {:>8.2} ± {:<6.2} [{:.2}, {:.2}]", e.mean, e.sd, e.lower, e.upper);
    }
    println!("  cost per inspection {:.2}, cycle cost rate {:.0}", s.cost_per_inspection.mean, s.cycle_cost_rate.mean);
}
