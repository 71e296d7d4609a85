//! Monte Carlo evaluation: renewal cycles, action counts, cost rates,
//! confidence intervals, the unavailability proxy and a normality check.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::env::{CostParams, EnvRng, Event, MaintenanceEnv, Policy, StepOutcome};
use crate::error::{Error, Result};
use crate::sampling::std_normal_quantile;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunStatistics {
    pub n_repairs: u32,
    pub n_preventive_replacements: u32,
    pub n_corrective_replacements: u32,
    /// Lengths, in inspections, of every complete renewal cycle.
    pub cycle_durations: Vec<usize>,
    pub total_cost: f64,
    pub horizon: usize,
}

impl RunStatistics {
    pub fn n_replacements(&self) -> u32 {
        self.n_preventive_replacements + self.n_corrective_replacements
    }

    pub fn mean_cycle(&self) -> Option<f64> {
        if self.cycle_durations.is_empty() {
            None
        } else {
            Some(self.cycle_durations.iter().sum::<usize>() as f64 / self.cycle_durations.len() as f64)
        }
    }

    /// C_P·N_P + C_R·N_PR + (C_R + C_down)·N_CR
    pub fn cost_from_counts(&self, costs: &CostParams) -> f64 {
        costs.c_p * self.n_repairs as f64
            + costs.c_r * self.n_preventive_replacements as f64
            + (costs.c_r + costs.c_down) * self.n_corrective_replacements as f64
    }

    /// Average maintenance cost per inspection over the horizon.
    pub fn cost_per_inspection(&self) -> f64 {
        self.total_cost / self.horizon as f64
    }

    /// Horizon-level cost divided by the mean renewal-cycle length.
    pub fn cycle_cost_rate(&self) -> Option<f64> {
        self.mean_cycle().map(|s| self.total_cost / s)
    }
}

/// Counts events and cuts the trace into renewal cycles.
///
/// The run starts from a new system at inspection 0, so that instant and every
/// replacement are renewal points. A cycle runs from one renewal point to the
/// next; the trailing stretch after the last replacement is incomplete and
/// left out of the durations, but its events and costs are counted.
pub fn collect_run(trace: &[StepOutcome]) -> RunStatistics {
    let mut stats = RunStatistics {
        n_repairs: 0,
        n_preventive_replacements: 0,
        n_corrective_replacements: 0,
        cycle_durations: Vec::new(),
        total_cost: 0.0,
        horizon: trace.len(),
    };
    let mut renewal = 0usize;
    for (step, o) in trace.iter().enumerate() {
        stats.total_cost -= o.reward;
        match o.event {
            Event::None => {}
            Event::Repair => stats.n_repairs += 1,
            Event::PreventiveReplacement => stats.n_preventive_replacements += 1,
            Event::CorrectiveReplacement => stats.n_corrective_replacements += 1,
        }
        if o.event.is_replacement() && step > renewal {
            stats.cycle_durations.push(step - renewal);
            renewal = step;
        }
    }
    stats
}

/// Runs `iterations` independent episodes of `horizon` inspections. Iteration
/// `i` always uses the streams of [`EnvRng::for_iteration`]`(seed, i)`, so
/// different policies evaluated with one seed see common random numbers.
pub fn monte_carlo<P: Policy + ?Sized>(
    policy: &P,
    env: &MaintenanceEnv,
    iterations: usize,
    horizon: usize,
    seed: u64,
) -> Result<Vec<RunStatistics>> {
    if iterations < 2 {
        return Err(Error::InsufficientData(format!(
            "Monte Carlo needs at least 2 iterations for an interval, got {iterations}"
        )));
    }
    if horizon == 0 {
        return Err(Error::param("horizon must be positive"));
    }
    Ok((0..iterations as u64)
        .map(|i| collect_run(&env.run_episode(policy, horizon, &mut EnvRng::for_iteration(seed, i))))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalEstimate {
    pub mean: f64,
    pub sd: f64,
    pub lower: f64,
    pub upper: f64,
    pub n: usize,
}

impl IntervalEstimate {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

pub fn mean_sd(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Normal-theory interval from summary statistics: mean ± z·sd/√n.
pub fn interval_from_summary(mean: f64, sd: f64, n: usize, level: f64) -> Result<IntervalEstimate> {
    if n < 2 {
        return Err(Error::InsufficientData(format!("a confidence interval needs n >= 2, got {n}")));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::param(format!("confidence level must lie in (0, 1), got {level}")));
    }
    let z = std_normal_quantile(0.5 + 0.5 * level)?;
    let h = z * sd / (n as f64).sqrt();
    Ok(IntervalEstimate { mean, sd, lower: mean - h, upper: mean + h, n })
}

pub fn confidence_interval(samples: &[f64], level: f64) -> Result<IntervalEstimate> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "a confidence interval needs n >= 2, got {}",
            samples.len()
        )));
    }
    let (mean, sd) = mean_sd(samples);
    interval_from_summary(mean, sd, samples.len(), level)
}

/// Expected counts per horizon and expected renewal-cycle length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedCounts {
    pub repairs: f64,
    pub preventive_replacements: f64,
    pub corrective_replacements: f64,
    pub cycle_length: f64,
}

/// (C_P·E[N_P] + C_R·E[N_PR] + (C_R + C_down)·E[N_CR]) / E[S]
pub fn cost_rate_from_expectations(e: &ExpectedCounts, costs: &CostParams) -> f64 {
    (costs.c_p * e.repairs
        + costs.c_r * e.preventive_replacements
        + (costs.c_r + costs.c_down) * e.corrective_replacements)
        / e.cycle_length
}

/// Cycle-normalized long-run cost rate with a 95% interval built from one
/// ratio sample per iteration.
pub fn long_run_cost_rate(stats: &[RunStatistics], costs: &CostParams) -> Result<IntervalEstimate> {
    let samples = cycle_cost_rate_samples(stats, costs)?;
    confidence_interval(&samples, 0.95)
}

pub fn cycle_cost_rate_samples(stats: &[RunStatistics], costs: &CostParams) -> Result<Vec<f64>> {
    stats
        .iter()
        .enumerate()
        .map(|(i, s)| {
            s.mean_cycle()
                .map(|cycle| s.cost_from_counts(costs) / cycle)
                .ok_or_else(|| Error::InsufficientData(format!("iteration {i} has no complete renewal cycle")))
        })
        .collect()
}

/// Fractions of the total cost due to each kind of action.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostShares {
    pub preventive_replacement: f64,
    pub repair: f64,
    pub corrective_replacement: f64,
}

pub fn cost_breakdown(stats: &[RunStatistics], costs: &CostParams) -> Result<CostShares> {
    if stats.is_empty() {
        return Err(Error::InsufficientData("no runs to break down".into()));
    }
    let sum = |f: &dyn Fn(&RunStatistics) -> u32| stats.iter().map(|s| f(s) as f64).sum::<f64>();
    let repair = costs.c_p * sum(&|s| s.n_repairs);
    let preventive = costs.c_r * sum(&|s| s.n_preventive_replacements);
    let corrective = (costs.c_r + costs.c_down) * sum(&|s| s.n_corrective_replacements);
    let total = repair + preventive + corrective;
    if total == 0.0 {
        return Ok(CostShares { preventive_replacement: 0.0, repair: 0.0, corrective_replacement: 0.0 });
    }
    Ok(CostShares {
        preventive_replacement: preventive / total,
        repair: repair / total,
        corrective_replacement: corrective / total,
    })
}

/// E[N_CR]·C_down, a relative measure of unavailability.
pub fn availability_metric(stats: &[RunStatistics], costs: &CostParams) -> Result<f64> {
    if stats.is_empty() {
        return Err(Error::InsufficientData("no runs".into()));
    }
    let mean_cr = stats.iter().map(|s| s.n_corrective_replacements as f64).sum::<f64>() / stats.len() as f64;
    Ok(mean_cr * costs.c_down)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsOutcome {
    pub statistic: f64,
    pub critical_value: f64,
    pub passed: bool,
}

/// Largest gap between the empirical CDF of `samples` and `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let f = cdf(x);
        d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    })
}

/// One-sample KS test against the normal with the sample's own mean and sd,
/// judged at 5% with the asymptotic critical value 1.358/√n. Estimating the
/// parameters from the data makes the test conservative (Lilliefors).
pub fn ks_normality(samples: &[f64]) -> Result<KsOutcome> {
    if samples.len() < 20 {
        return Err(Error::InsufficientData(format!("KS normality needs n >= 20, got {}", samples.len())));
    }
    let (mean, sd) = mean_sd(samples);
    if !(sd > 0.0) {
        return Err(Error::InsufficientData("samples have zero variance".into()));
    }
    let statistic = ks_statistic(samples, |x| crate::sampling::std_normal_cdf((x - mean) / sd));
    let critical_value = 1.358 / (samples.len() as f64).sqrt();
    Ok(KsOutcome { statistic, critical_value, passed: statistic < critical_value })
}

/// Table-style summary of a set of runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub repairs: IntervalEstimate,
    pub preventive_replacements: IntervalEstimate,
    pub corrective_replacements: IntervalEstimate,
    pub cycle_length: IntervalEstimate,
    pub cycle_cost_rate: IntervalEstimate,
    pub cost_per_inspection: IntervalEstimate,
    pub total_cost: IntervalEstimate,
    pub availability: f64,
    pub shares: CostShares,
}

pub fn summarize(stats: &[RunStatistics], costs: &CostParams) -> Result<Summary> {
    let ci = |f: &dyn Fn(&RunStatistics) -> f64| confidence_interval(&stats.iter().map(f).collect::<Vec<_>>(), 0.95);
    let cycles: Vec<f64> = stats
        .iter()
        .enumerate()
        .map(|(i, s)| {
            s.mean_cycle()
                .ok_or_else(|| Error::InsufficientData(format!("iteration {i} has no complete renewal cycle")))
        })
        .collect::<Result<_>>()?;
    Ok(Summary {
        repairs: ci(&|s| s.n_repairs as f64)?,
        preventive_replacements: ci(&|s| s.n_preventive_replacements as f64)?,
        corrective_replacements: ci(&|s| s.n_corrective_replacements as f64)?,
        cycle_length: confidence_interval(&cycles, 0.95)?,
        cycle_cost_rate: long_run_cost_rate(stats, costs)?,
        cost_per_inspection: ci(&|s| s.cost_per_inspection())?,
        total_cost: ci(&|s| s.total_cost)?,
        availability: availability_metric(stats, costs)?,
        shares: cost_breakdown(stats, costs)?,
    })
}

pub const RESULTS_HEADER: &str = "iteration,N_P,N_PR,N_CR,mean_cycle,total_cost,cost_rate";

pub fn write_results_csv<W: Write>(
    mut w: W,
    stats: &[RunStatistics],
    costs: &CostParams,
    meta: Option<&str>,
) -> std::io::Result<()> {
    if let Some(meta) = meta {
        writeln!(w, "# {meta}")?;
    }
    writeln!(w, "{RESULTS_HEADER}")?;
    for (i, s) in stats.iter().enumerate() {
        let cycle = s.mean_cycle().map_or(String::from("NaN"), |c| c.to_string());
        let rate = s.mean_cycle().map_or(String::from("NaN"), |c| (s.cost_from_counts(costs) / c).to_string());
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            i, s.n_repairs, s.n_preventive_replacements, s.n_corrective_replacements, cycle, s.total_cost, rate
        )?;
    }
    Ok(())
}

pub const SUMMARY_HEADER: &str = "case,policy,N_P_mean,N_P_sd,N_PR_mean,N_PR_sd,N_CR_mean,N_CR_sd,S_mean,S_sd,\
N_P_lo,N_P_hi,N_PR_lo,N_PR_hi,N_CR_lo,N_CR_hi,S_lo,S_hi,EC_lo,EC_hi,EC_mean,C_down,availability,\
share_preventive_replacement,share_repair,share_corrective_replacement,cost_per_inspection";

pub fn summary_row(case_id: &str, policy: &str, s: &Summary, costs: &CostParams) -> String {
    let f = |x: f64| format!("{x:.4}");
    [
        case_id.to_string(),
        policy.to_string(),
        f(s.repairs.mean),
        f(s.repairs.sd),
        f(s.preventive_replacements.mean),
        f(s.preventive_replacements.sd),
        f(s.corrective_replacements.mean),
        f(s.corrective_replacements.sd),
        f(s.cycle_length.mean),
        f(s.cycle_length.sd),
        f(s.repairs.lower),
        f(s.repairs.upper),
        f(s.preventive_replacements.lower),
        f(s.preventive_replacements.upper),
        f(s.corrective_replacements.lower),
        f(s.corrective_replacements.upper),
        f(s.cycle_length.lower),
        f(s.cycle_length.upper),
        f(s.cycle_cost_rate.lower),
        f(s.cycle_cost_rate.upper),
        f(s.cycle_cost_rate.mean),
        f(costs.c_down),
        f(s.availability),
        f(s.shares.preventive_replacement),
        f(s.shares.repair),
        f(s.shares.corrective_replacement),
        f(s.cost_per_inspection.mean),
    ]
    .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases::CaseConfig;
    use crate::env::{Action, Observation};

    fn case2() -> CaseConfig {
        CaseConfig::builtin(2).unwrap()
    }

    #[test]
    fn always_replace_over_ten_inspections() {
        let case = case2();
        let env = case.env().unwrap();
        let trace = env.run_episode(&|_: &Observation| Action::Replace, 10, &mut EnvRng::for_iteration(1, 0));
        let s = collect_run(&trace);
        assert_eq!(s.n_preventive_replacements, 10);
        assert_eq!(s.total_cost, 35_000.0);
        assert!(s.cycle_durations.iter().all(|&d| d == 1));
        assert_eq!(s.cycle_durations.len(), 9);
    }

    #[test]
    fn failure_replacement_runs() {
        let case = case2();
        let env = case.env().unwrap();
        let stats = monte_carlo(&|_: &Observation| Action::NoAction, &env, 20, 1000, 3).unwrap();
        for s in &stats {
            assert_eq!(s.n_repairs, 0);
            assert_eq!(s.n_preventive_replacements, 0);
            assert_eq!(s.cycle_durations.len() as u32, s.n_corrective_replacements);
            assert_eq!(s.total_cost, s.cost_from_counts(&case.costs()));
        }
        let shares = cost_breakdown(&stats, &case.costs()).unwrap();
        assert_eq!(shares.corrective_replacement, 1.0);
    }

    #[test]
    fn monte_carlo_needs_two_iterations() {
        let env = case2().env().unwrap();
        assert!(monte_carlo(&|_: &Observation| Action::NoAction, &env, 1, 10, 0).is_err());
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let env = case2().env().unwrap();
        let p = |o: &Observation| if o.state.x > 5.0 { Action::Repair } else { Action::NoAction };
        assert_eq!(monte_carlo(&p, &env, 5, 300, 8).unwrap(), monte_carlo(&p, &env, 5, 300, 8).unwrap());
    }

    #[test]
    fn interval_arithmetic() {
        let ci = interval_from_summary(44.12, 1.87, 200, 0.95).unwrap();
        assert!((ci.lower - 43.86).abs() < 0.01 && (ci.upper - 44.38).abs() < 0.01);
        let ci = interval_from_summary(29.23, 1.46, 200, 0.95).unwrap();
        assert!((ci.lower - 29.03).abs() < 0.01 && (ci.upper - 29.43).abs() < 0.01);
        let ci = confidence_interval(&[3.0; 10], 0.95).unwrap();
        assert_eq!((ci.lower, ci.upper), (3.0, 3.0));
        assert!(confidence_interval(&[1.0], 0.95).is_err());
    }

    #[test]
    fn plug_in_cost_rates() {
        let c2 = case2().costs();
        let e = ExpectedCounts { repairs: 44.12, preventive_replacements: 18.54, corrective_replacements: 0.31, cycle_length: 51.70 };
        let r = cost_rate_from_expectations(&e, &c2);
        assert!((r - 1800.1).abs() < 0.1, "{r}");
        let c1 = CaseConfig::builtin(1).unwrap().costs();
        let e = ExpectedCounts { repairs: 46.19, preventive_replacements: 17.99, corrective_replacements: 0.28, cycle_length: 53.33 };
        assert!((cost_rate_from_expectations(&e, &c1) - 1469.4).abs() < 0.1);
    }

    #[test]
    fn availability_values() {
        let costs = CaseConfig::builtin(5).unwrap().costs();
        let run = |n_cr| RunStatistics {
            n_repairs: 0,
            n_preventive_replacements: 0,
            n_corrective_replacements: n_cr,
            cycle_durations: vec![10],
            total_cost: 0.0,
            horizon: 10,
        };
        let stats = vec![run(1), run(1), run(1), run(1), run(1), run(1), run(1), run(1), run(1), run(2)];
        assert!((availability_metric(&stats, &costs).unwrap() - 550.0).abs() < 1e-9);
    }

    #[test]
    fn ks_normality_cases() {
        use rand_distr::{Distribution, Exp, StandardNormal};
        let mut rng = crate::rng::RngStream::new(4, 0);
        let normal: Vec<f64> = (0..200).map(|_| { let z: f64 = StandardNormal.sample(&mut rng); 10.0 + 2.0 * z }).collect();
        assert!(ks_normality(&normal).unwrap().passed);
        let exp = Exp::new(1.0).unwrap();
        let skewed: Vec<f64> = (0..200).map(|_| exp.sample(&mut rng)).collect();
        assert!(!ks_normality(&skewed).unwrap().passed);
        assert!(ks_normality(&[1.0; 50]).is_err());
        assert!(ks_normality(&normal[..10]).is_err());
    }

    #[test]
    fn renewal_counts_match_replacements() {
        let case = case2();
        let env = case.env().unwrap();
        let p = |o: &Observation| if o.state.x > 6.0 { Action::Replace } else if o.state.x > 4.0 { Action::Repair } else { Action::NoAction };
        for s in monte_carlo(&p, &env, 30, 1000, 5).unwrap() {
            let complete = s.cycle_durations.len() as u32;
            assert!(complete == s.n_replacements() || complete + 1 == s.n_replacements());
            assert!(s.cycle_durations.iter().sum::<usize>() <= s.horizon);
            assert_eq!(s.total_cost, s.cost_from_counts(&case.costs()));
        }
    }
}
