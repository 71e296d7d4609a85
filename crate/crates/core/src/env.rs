//! The inspection-epoch maintenance MDP: actions, rewards, imperfect repairs
//! with memory, forced corrective replacement and episode traces.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::degradation::{GammaProcessParams, IncrementSampler};
use crate::error::{Error, Result};
use crate::rng::{domain, RngStream};
use crate::sampling::{sample_trunc_normal, TruncNormalParams};

/// Deterioration `x` at the current inspection and `x_m`, the level left by
/// the most recent maintenance action.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SystemState {
    pub x: f64,
    pub x_m: f64,
}

impl SystemState {
    pub const NEW: SystemState = SystemState { x: 0.0, x_m: 0.0 };

    pub fn new(x: f64, x_m: f64) -> Result<Self> {
        let s = Self { x, x_m };
        if !(x.is_finite() && x_m.is_finite()) || x_m < 0.0 || x_m > x {
            return Err(Error::param(format!("state requires 0 <= x_m <= x, got x={x}, x_m={x_m}")));
        }
        Ok(s)
    }

    pub fn is_valid(&self) -> bool {
        self.x_m >= 0.0 && self.x_m <= self.x && self.x.is_finite()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    NoAction,
    Repair,
    Replace,
}

impl Action {
    pub const ALL: [Action; 3] = [Action::NoAction, Action::Repair, Action::Replace];

    pub fn index(self) -> usize {
        match self {
            Action::NoAction => 0,
            Action::Repair => 1,
            Action::Replace => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Action> {
        Action::ALL.get(i).copied()
    }

    pub fn label(self) -> &'static str {
        match self {
            Action::NoAction => "a0",
            Action::Repair => "a1",
            Action::Replace => "a2",
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Event {
    None,
    Repair,
    PreventiveReplacement,
    CorrectiveReplacement,
}

impl Event {
    pub fn label(self) -> &'static str {
        match self {
            Event::None => "none",
            Event::Repair => "repair",
            Event::PreventiveReplacement => "preventive_replacement",
            Event::CorrectiveReplacement => "corrective_replacement",
        }
    }

    pub fn is_replacement(self) -> bool {
        matches!(self, Event::PreventiveReplacement | Event::CorrectiveReplacement)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    pub c_p: f64,
    pub c_r: f64,
    pub c_down: f64,
    pub failure_threshold: f64,
}

impl CostParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("c_p", self.c_p), ("c_r", self.c_r), ("c_down", self.c_down)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::param(format!("{name} must be non-negative, got {v}")));
            }
        }
        if !(self.failure_threshold > 0.0 && self.failure_threshold.is_finite()) {
            return Err(Error::param(format!(
                "failure threshold must be positive, got {}",
                self.failure_threshold
            )));
        }
        Ok(())
    }
}

/// Immediate reward for acting on a system inspected at deterioration `x_pre`.
///
/// At `x_pre >= L` every request is executed as a corrective replacement, so
/// a0 and a1 there carry the corrective cost as well.
pub fn reward(action: Action, x_pre: f64, costs: &CostParams) -> f64 {
    if x_pre >= costs.failure_threshold {
        return -costs.c_r - costs.c_down;
    }
    match action {
        Action::NoAction => 0.0,
        Action::Repair => -costs.c_p,
        Action::Replace => -costs.c_r,
    }
}

/// Standard deviation rule of the repair distribution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepairSpread {
    /// σ = (x_m + x) / 6
    #[default]
    Sum,
    /// σ = (x − x_m) / 6
    Width,
}

impl RepairSpread {
    pub fn sigma(self, x_m: f64, x: f64) -> f64 {
        match self {
            RepairSpread::Sum => (x_m + x) / 6.0,
            RepairSpread::Width => (x - x_m) / 6.0,
        }
    }
}

/// Post-repair level drawn from the normal law with μ = (x_m + x)/2 truncated
/// to [x_m, x]. The result becomes both coordinates of the new state.
pub fn apply_repair(s: SystemState, spread: RepairSpread, rng: &mut RngStream) -> SystemState {
    if s.x_m >= s.x {
        return SystemState { x: s.x, x_m: s.x };
    }
    let params = TruncNormalParams {
        mu: 0.5 * (s.x_m + s.x),
        sigma: spread.sigma(s.x_m, s.x),
        lower: s.x_m,
        upper: s.x,
    };
    let x = sample_trunc_normal(&params, rng).expect("repair interval is ordered and sigma positive");
    SystemState { x, x_m: x }
}

/// Independent randomness for the environment: one stream feeds degradation
/// increments, the other repair outcomes. Keeping them apart lets different
/// policies share the same degradation draws.
#[derive(Clone, Debug)]
pub struct EnvRng {
    pub degradation: RngStream,
    pub repair: RngStream,
}

impl EnvRng {
    pub fn new(degradation: RngStream, repair: RngStream) -> Self {
        Self { degradation, repair }
    }

    /// Streams for Monte Carlo iteration `index` under `seed`.
    pub fn for_iteration(seed: u64, index: u64) -> Self {
        Self::new(
            RngStream::derive(seed, domain::EVAL_DEGRADATION, index),
            RngStream::derive(seed, domain::EVAL_REPAIR, index),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepOutcome {
    pub state: SystemState,
    pub requested: Action,
    pub executed: Action,
    pub reward: f64,
    pub event: Event,
    /// State right after the maintenance decision, before degradation resumes.
    pub maintained: SystemState,
    pub next_state: SystemState,
}

/// What a policy sees at an inspection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observation {
    pub step: usize,
    pub state: SystemState,
    pub steps_since_repair: u32,
    pub steps_since_replacement: u32,
}

pub trait Policy {
    fn decide(&self, obs: &Observation) -> Action;
}

impl<F: Fn(&Observation) -> Action> Policy for F {
    fn decide(&self, obs: &Observation) -> Action {
        self(obs)
    }
}

#[derive(Clone, Debug)]
pub struct MaintenanceEnv {
    process: GammaProcessParams,
    costs: CostParams,
    spread: RepairSpread,
    sampler: IncrementSampler,
}

impl MaintenanceEnv {
    pub fn new(process: GammaProcessParams, costs: CostParams, spread: RepairSpread) -> Result<Self> {
        costs.validate()?;
        let sampler = process.sampler()?;
        Ok(Self { process, costs, spread, sampler })
    }

    pub fn process(&self) -> &GammaProcessParams {
        &self.process
    }

    pub fn costs(&self) -> &CostParams {
        &self.costs
    }

    pub fn spread(&self) -> RepairSpread {
        self.spread
    }

    pub fn step(&self, s: SystemState, requested: Action, rng: &mut EnvRng) -> StepOutcome {
        debug_assert!(s.is_valid(), "{s:?}");
        let failed = s.x >= self.costs.failure_threshold;
        let executed = if failed { Action::Replace } else { requested };
        let (maintained, event) = match executed {
            Action::NoAction => (s, Event::None),
            Action::Repair => (apply_repair(s, self.spread, &mut rng.repair), Event::Repair),
            Action::Replace if failed => (SystemState::NEW, Event::CorrectiveReplacement),
            Action::Replace => (SystemState::NEW, Event::PreventiveReplacement),
        };
        let increment = self.sampler.sample(&mut rng.degradation);
        StepOutcome {
            state: s,
            requested,
            executed,
            reward: reward(executed, s.x, &self.costs),
            event,
            maintained,
            next_state: SystemState { x: maintained.x + increment, x_m: maintained.x_m },
        }
    }

    /// `length` inspections from a new system.
    pub fn run_episode<P: Policy + ?Sized>(&self, policy: &P, length: usize, rng: &mut EnvRng) -> Vec<StepOutcome> {
        let mut trace = Vec::with_capacity(length);
        let mut obs = Observation {
            step: 0,
            state: SystemState::NEW,
            steps_since_repair: 0,
            steps_since_replacement: 0,
        };
        for step in 0..length {
            obs.step = step;
            let out = self.step(obs.state, policy.decide(&obs), rng);
            obs.state = out.next_state;
            advance_counters(&mut obs, out.event);
            trace.push(out);
        }
        trace
    }
}

fn advance_counters(obs: &mut Observation, event: Event) {
    match event {
        Event::None => {
            obs.steps_since_repair += 1;
            obs.steps_since_replacement += 1;
        }
        Event::Repair => {
            obs.steps_since_repair = 1;
            obs.steps_since_replacement += 1;
        }
        Event::PreventiveReplacement | Event::CorrectiveReplacement => {
            obs.steps_since_repair = 1;
            obs.steps_since_replacement = 1;
        }
    }
}

pub const TRACE_HEADER: &str = "step,x_pre,x_m_pre,requested_action,executed_action,reward,event,x_post";

/// Writes a trace as CSV: one `#` metadata line (if given), the header, one
/// row per inspection.
pub fn write_trace_csv<W: Write>(mut w: W, trace: &[StepOutcome], meta: Option<&str>) -> std::io::Result<()> {
    if let Some(meta) = meta {
        writeln!(w, "# {meta}")?;
    }
    writeln!(w, "{TRACE_HEADER}")?;
    for (i, o) in trace.iter().enumerate() {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            i,
            o.state.x,
            o.state.x_m,
            o.requested,
            o.executed,
            o.reward,
            o.event.label(),
            o.next_state.x
        )?;
    }
    Ok(())
}
