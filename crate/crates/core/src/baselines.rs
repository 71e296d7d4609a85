//! Conventional maintenance policies (failure replacement, age-based,
//! threshold-based and their combination) and a common-random-numbers grid
//! search over their parameters.

use std::cmp::Ordering;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cases::CaseConfig;
use crate::env::{Action, Observation, Policy, SystemState};
use crate::error::{Error, Result};
use crate::eval::{confidence_interval, monte_carlo};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineKind {
    Fr,
    Age,
    Tbm,
    Atbm,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 4] = [BaselineKind::Fr, BaselineKind::Age, BaselineKind::Tbm, BaselineKind::Atbm];

    pub fn name(self) -> &'static str {
        match self {
            BaselineKind::Fr => "fr",
            BaselineKind::Age => "age",
            BaselineKind::Tbm => "tbm",
            BaselineKind::Atbm => "atbm",
        }
    }
}

impl fmt::Display for BaselineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaselineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fr" => Ok(BaselineKind::Fr),
            "age" => Ok(BaselineKind::Age),
            "tbm" => Ok(BaselineKind::Tbm),
            "atbm" => Ok(BaselineKind::Atbm),
            other => Err(Error::Validation(format!("unknown baseline {other:?}; expected fr, age, tbm or atbm"))),
        }
    }
}

/// A period of `None` never fires.
pub type Period = Option<u32>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BaselineSpec {
    Fr,
    Age {
        repair_period: Period,
        replacement_period: Period,
    },
    Tbm {
        repair_threshold: f64,
        replacement_threshold: f64,
    },
    Atbm {
        repair_threshold: f64,
        replacement_threshold: f64,
        repair_period: Period,
        replacement_period: Period,
    },
}

impl BaselineSpec {
    pub fn kind(&self) -> BaselineKind {
        match self {
            BaselineSpec::Fr => BaselineKind::Fr,
            BaselineSpec::Age { .. } => BaselineKind::Age,
            BaselineSpec::Tbm { .. } => BaselineKind::Tbm,
            BaselineSpec::Atbm { .. } => BaselineKind::Atbm,
        }
    }

    pub fn validate(&self, failure_threshold: f64) -> Result<()> {
        let threshold_ok = |t: f64| t.is_finite() && t >= 0.0 && t <= failure_threshold;
        let period_ok = |p: Period| p.is_none_or(|p| p >= 1);
        let (thresholds, periods): (Vec<f64>, Vec<Period>) = match *self {
            BaselineSpec::Fr => (vec![], vec![]),
            BaselineSpec::Age { repair_period, replacement_period } => (vec![], vec![repair_period, replacement_period]),
            BaselineSpec::Tbm { repair_threshold, replacement_threshold } => {
                (vec![repair_threshold, replacement_threshold], vec![])
            }
            BaselineSpec::Atbm { repair_threshold, replacement_threshold, repair_period, replacement_period } => {
                (vec![repair_threshold, replacement_threshold], vec![repair_period, replacement_period])
            }
        };
        if let Some(t) = thresholds.iter().find(|&&t| !threshold_ok(t)) {
            return Err(Error::Validation(format!(
                "{} threshold {t} must lie in [0, {failure_threshold}]",
                self.kind()
            )));
        }
        if !periods.iter().all(|&p| period_ok(p)) {
            return Err(Error::Validation(format!("{} periods must be at least 1", self.kind())));
        }
        Ok(())
    }

    /// Lexicographic "amount of intervention", used to break cost ties toward
    /// higher thresholds and longer periods.
    fn restraint(&self) -> (f64, f64, u64, u64) {
        let p = |p: Period| p.map_or(u64::MAX, u64::from);
        match *self {
            BaselineSpec::Fr => (f64::INFINITY, f64::INFINITY, u64::MAX, u64::MAX),
            BaselineSpec::Age { repair_period, replacement_period } => {
                (f64::INFINITY, f64::INFINITY, p(replacement_period), p(repair_period))
            }
            BaselineSpec::Tbm { repair_threshold, replacement_threshold } => {
                (replacement_threshold, repair_threshold, u64::MAX, u64::MAX)
            }
            BaselineSpec::Atbm { repair_threshold, replacement_threshold, repair_period, replacement_period } => {
                (replacement_threshold, repair_threshold, p(replacement_period), p(repair_period))
            }
        }
    }

    pub fn describe(&self) -> String {
        let every = |p: Period| p.map_or("never".to_string(), |v| format!("every {v}"));
        let or_every = |p: Period| p.map_or(String::new(), |v| format!(" or every {v}"));
        match *self {
            BaselineSpec::Fr => "fr".into(),
            BaselineSpec::Age { repair_period, replacement_period } => {
                format!("age(repair {}, replace {})", every(repair_period), every(replacement_period))
            }
            BaselineSpec::Tbm { repair_threshold, replacement_threshold } => {
                format!("tbm(repair at {repair_threshold}, replace at {replacement_threshold})")
            }
            BaselineSpec::Atbm { repair_threshold, replacement_threshold, repair_period, replacement_period } => format!(
                "atbm(repair at {repair_threshold}{}, replace at {replacement_threshold}{})",
                or_every(repair_period),
                or_every(replacement_period)
            ),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("baseline spec: {e}")))
    }
}

fn due(counter: u32, period: Period) -> bool {
    period.is_some_and(|p| counter >= p)
}

/// Replacement triggers take precedence over repair triggers. Failures are
/// left to the environment's forced replacement.
pub fn baseline_decision(spec: &BaselineSpec, s: &SystemState, steps_since_repair: u32, steps_since_replacement: u32) -> Action {
    let (replace, repair) = match *spec {
        BaselineSpec::Fr => (false, false),
        BaselineSpec::Age { repair_period, replacement_period } => {
            (due(steps_since_replacement, replacement_period), due(steps_since_repair, repair_period))
        }
        BaselineSpec::Tbm { repair_threshold, replacement_threshold } => {
            (s.x >= replacement_threshold, s.x >= repair_threshold)
        }
        BaselineSpec::Atbm { repair_threshold, replacement_threshold, repair_period, replacement_period } => (
            s.x >= replacement_threshold || due(steps_since_replacement, replacement_period),
            s.x >= repair_threshold || due(steps_since_repair, repair_period),
        ),
    };
    if replace {
        Action::Replace
    } else if repair {
        Action::Repair
    } else {
        Action::NoAction
    }
}

impl Policy for BaselineSpec {
    fn decide(&self, obs: &Observation) -> Action {
        baseline_decision(self, &obs.state, obs.steps_since_repair, obs.steps_since_replacement)
    }
}

/// Candidate values for each parameter family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub thresholds: Vec<f64>,
    pub periods: Vec<Period>,
}

impl GridSpec {
    /// Thresholds `step, 2·step, …, L`, and periods `1..=max_period` plus never.
    pub fn regular(failure_threshold: f64, threshold_step: f64, max_period: u32, period_step: u32) -> Result<Self> {
        if !(threshold_step > 0.0) || period_step == 0 {
            return Err(Error::Validation("grid steps must be positive".into()));
        }
        let n = (failure_threshold / threshold_step + 1e-9).floor() as usize;
        let mut thresholds: Vec<f64> = (1..=n).map(|i| i as f64 * threshold_step).collect();
        if thresholds.last().is_none_or(|&t| (t - failure_threshold).abs() > 1e-9) {
            thresholds.push(failure_threshold);
        }
        let mut periods: Vec<Period> = (1..=max_period).step_by(period_step as usize).map(Some).collect();
        periods.push(None);
        Ok(Self { thresholds, periods })
    }

    /// Default resolution for `kind`: thresholds every 0.25, periods every
    /// inspection up to 80. The four-parameter family uses thresholds every 0.5
    /// and periods every 10.
    pub fn default_for(kind: BaselineKind, failure_threshold: f64) -> Self {
        match kind {
            BaselineKind::Atbm => Self::regular(failure_threshold, 0.5, 80, 10).unwrap(),
            _ => Self::regular(failure_threshold, 0.25, 80, 1).unwrap(),
        }
    }

    pub fn candidates(&self, kind: BaselineKind) -> Vec<BaselineSpec> {
        let threshold_pairs: Vec<(f64, f64)> = self
            .thresholds
            .iter()
            .flat_map(|&r| self.thresholds.iter().filter(move |&&big| big >= r).map(move |&big| (r, big)))
            .collect();
        let period_pairs: Vec<(Period, Period)> =
            self.periods.iter().flat_map(|&a| self.periods.iter().map(move |&b| (a, b))).collect();
        match kind {
            BaselineKind::Fr => vec![BaselineSpec::Fr],
            BaselineKind::Age => period_pairs
                .iter()
                .map(|&(repair_period, replacement_period)| BaselineSpec::Age { repair_period, replacement_period })
                .collect(),
            BaselineKind::Tbm => threshold_pairs
                .iter()
                .map(|&(repair_threshold, replacement_threshold)| BaselineSpec::Tbm { repair_threshold, replacement_threshold })
                .collect(),
            BaselineKind::Atbm => threshold_pairs
                .iter()
                .flat_map(|&(rt, bt)| {
                    period_pairs.iter().map(move |&(rp, bp)| BaselineSpec::Atbm {
                        repair_threshold: rt,
                        replacement_threshold: bt,
                        repair_period: rp,
                        replacement_period: bp,
                    })
                })
                .collect(),
        }
    }

    /// Adds the parameters of `spec` to the grid so its policy is reachable.
    pub fn include(&mut self, spec: &BaselineSpec) {
        let (ts, ps): (Vec<f64>, Vec<Period>) = match *spec {
            BaselineSpec::Fr => (vec![], vec![]),
            BaselineSpec::Age { repair_period, replacement_period } => (vec![], vec![repair_period, replacement_period]),
            BaselineSpec::Tbm { repair_threshold, replacement_threshold } => {
                (vec![repair_threshold, replacement_threshold], vec![])
            }
            BaselineSpec::Atbm { repair_threshold, replacement_threshold, repair_period, replacement_period } => {
                (vec![repair_threshold, replacement_threshold], vec![repair_period, replacement_period])
            }
        };
        for t in ts {
            if !self.thresholds.contains(&t) {
                self.thresholds.push(t);
            }
        }
        for p in ps {
            if !self.periods.contains(&p) {
                self.periods.push(p);
            }
        }
        self.thresholds.sort_by(f64::total_cmp);
        self.periods.sort_by_key(|p| p.map_or(u64::MAX, u64::from));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub spec: BaselineSpec,
    /// Mean maintenance cost per inspection.
    pub mean_cost_rate: f64,
    pub ci_half_width: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Optimized {
    pub best: SurfacePoint,
    pub surface: Vec<SurfacePoint>,
}

/// Mean cost per inspection of `spec` with a 95% half-width.
pub fn evaluate_spec(spec: &BaselineSpec, case: &CaseConfig, iterations: usize, horizon: usize, seed: u64) -> Result<SurfacePoint> {
    let env = case.env()?;
    let stats = monte_carlo(spec, &env, iterations, horizon, seed)?;
    let rates: Vec<f64> = stats.iter().map(|s| s.cost_per_inspection()).collect();
    let ci = confidence_interval(&rates, 0.95)?;
    Ok(SurfacePoint { spec: *spec, mean_cost_rate: ci.mean, ci_half_width: ci.half_width() })
}

/// Evaluates every grid candidate of `kind` on the same iteration streams and
/// returns the cheapest, ties going to the least intervention.
pub fn optimize_baseline(
    kind: BaselineKind,
    case: &CaseConfig,
    grid: &GridSpec,
    iterations: usize,
    horizon: usize,
    seed: u64,
) -> Result<Optimized> {
    let candidates = grid.candidates(kind);
    if kind == BaselineKind::Fr {
        return Err(Error::Validation("the failure-replacement policy has no parameters to optimize".into()));
    }
    if candidates.is_empty() {
        return Err(Error::Validation(format!("empty {kind} grid")));
    }
    for c in &candidates {
        c.validate(case.failure_threshold)?;
    }
    let surface = candidates
        .iter()
        .map(|c| evaluate_spec(c, case, iterations, horizon, seed))
        .collect::<Result<Vec<_>>>()?;
    let best = *surface
        .iter()
        .min_by(|a, b| {
            a.mean_cost_rate
                .total_cmp(&b.mean_cost_rate)
                .then_with(|| b.spec.restraint().partial_cmp(&a.spec.restraint()).unwrap_or(Ordering::Equal))
        })
        .unwrap();
    Ok(Optimized { best, surface })
}

pub const SURFACE_HEADER: &str =
    "kind,repair_threshold,replacement_threshold,repair_period,replacement_period,mean_cost_rate,ci_half_width";

pub fn write_surface_csv<W: Write>(mut w: W, surface: &[SurfacePoint], meta: Option<&str>) -> std::io::Result<()> {
    if let Some(meta) = meta {
        writeln!(w, "# {meta}")?;
    }
    writeln!(w, "{SURFACE_HEADER}")?;
    let p = |p: Period| p.map_or(String::from("never"), |v| v.to_string());
    for pt in surface {
        let (rt, bt, rp, bp) = match pt.spec {
            BaselineSpec::Fr => (String::new(), String::new(), String::new(), String::new()),
            BaselineSpec::Age { repair_period, replacement_period } => {
                (String::new(), String::new(), p(repair_period), p(replacement_period))
            }
            BaselineSpec::Tbm { repair_threshold, replacement_threshold } => {
                (repair_threshold.to_string(), replacement_threshold.to_string(), String::new(), String::new())
            }
            BaselineSpec::Atbm { repair_threshold, replacement_threshold, repair_period, replacement_period } => (
                repair_threshold.to_string(),
                replacement_threshold.to_string(),
                p(repair_period),
                p(replacement_period),
            ),
        };
        writeln!(w, "{},{rt},{bt},{rp},{bp},{},{}", pt.spec.kind(), pt.mean_cost_rate, pt.ci_half_width)?;
    }
    Ok(())
}
