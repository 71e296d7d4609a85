//! Double DQN: replay memory, epsilon-greedy exploration, target
//! construction and the training loop over maintenance episodes.

use std::cell::RefCell;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::cases::CaseConfig;
use crate::env::{Action, EnvRng, Observation, Policy, SystemState};
use crate::error::{Error, Result};
use crate::nn::{soft_update, AdamState, Mlp, TrainingMetadata, Workspace};
use crate::rng::{domain, RngStream};

pub const STATE_DIM: usize = 2;

pub type Encoding = [f64; STATE_DIM];

/// Network input for a maintenance state: deterioration levels over L.
pub fn encode(s: &SystemState, failure_threshold: f64) -> Encoding {
    [s.x / failure_threshold, s.x_m / failure_threshold]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub state: Encoding,
    /// Executed action (after any forced override).
    pub action: usize,
    pub reward: f64,
    pub next_state: Encoding,
    /// The only action executable in `next_state`, if the environment forces
    /// one there. The bootstrap then uses that action instead of the argmax.
    #[serde(default)]
    pub next_forced: Option<usize>,
}

/// Fixed-capacity ring of transitions; the oldest entry is overwritten first.
#[derive(Clone, Debug)]
pub struct ReplayBuffer {
    capacity: usize,
    items: Vec<Transition>,
    next: usize,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "replay capacity must be positive");
        Self { capacity, items: Vec::with_capacity(capacity), next: 0 }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn push(&mut self, t: Transition) {
        if self.items.len() < self.capacity {
            self.items.push(t);
        } else {
            self.items[self.next] = t;
        }
        self.next = (self.next + 1) % self.capacity;
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transition> {
        self.items.iter()
    }

    /// `batch` distinct indices drawn uniformly (Floyd's algorithm).
    pub fn sample_indices(&self, batch: usize, rng: &mut RngStream) -> Vec<usize> {
        let n = self.items.len();
        assert!(batch <= n, "batch {batch} exceeds buffer length {n}");
        let mut chosen: Vec<usize> = Vec::with_capacity(batch);
        for j in n - batch..n {
            let t = rng.below(j + 1);
            if chosen.contains(&t) {
                chosen.push(j);
            } else {
                chosen.push(t);
            }
        }
        chosen
    }

    pub fn get(&self, i: usize) -> &Transition {
        &self.items[i]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplorationSchedule {
    pub epsilon: f64,
    pub eps_max: f64,
    pub eps_min: f64,
    pub decay: f64,
}

impl Default for ExplorationSchedule {
    fn default() -> Self {
        Self { epsilon: 1.0, eps_max: 1.0, eps_min: 0.01, decay: 0.005 }
    }
}

impl ExplorationSchedule {
    pub fn fixed(epsilon: f64) -> Self {
        Self { epsilon, eps_max: epsilon, eps_min: epsilon, decay: 0.0 }
    }

    /// ε ← max(ε·(1 − decay), ε_min)
    pub fn advance(&mut self) {
        self.epsilon = (self.epsilon * (1.0 - self.decay)).max(self.eps_min);
    }
}

/// Index of the largest entry; ties go to the lowest index.
pub fn argmax(q: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in q.iter().enumerate().skip(1) {
        if v > q[best] {
            best = i;
        }
    }
    best
}

pub fn select_action_index(
    net: &Mlp,
    state: &Encoding,
    sched: &ExplorationSchedule,
    rng: &mut RngStream,
    ws: &mut Workspace,
) -> usize {
    if sched.epsilon > 0.0 && rng.uniform() < sched.epsilon {
        return rng.below(net.output_dim());
    }
    argmax(net.forward_batch(state, 1, ws))
}

pub fn select_action(
    net: &Mlp,
    s: &SystemState,
    failure_threshold: f64,
    sched: &ExplorationSchedule,
    rng: &mut RngStream,
) -> Action {
    let i = select_action_index(net, &encode(s, failure_threshold), sched, rng, &mut Workspace::default());
    Action::from_index(i).expect("network has three outputs")
}

/// r + γ Q(s', a*; θ') with a* = argmax_a' Q(s', a'; θ), or the forced action
/// when `s'` admits only one.
pub fn ddqn_target(main: &Mlp, target: &Mlp, t: &Transition, gamma: f64) -> f64 {
    let mut out = [0.0];
    ddqn_targets(main, target, std::slice::from_ref(t), gamma, 1.0, &mut out, &mut Workspace::default());
    out[0]
}

/// Batched DDQN targets with rewards multiplied by `reward_scale`.
pub fn ddqn_targets(
    main: &Mlp,
    target: &Mlp,
    batch: &[Transition],
    gamma: f64,
    reward_scale: f64,
    out: &mut [f64],
    ws: &mut Workspace,
) {
    let n = batch.len();
    let n_out = main.output_dim();
    let next: Vec<f64> = batch.iter().flat_map(|t| t.next_state).collect();
    let greedy: Vec<usize> = main
        .forward_batch(&next, n, ws)
        .chunks(n_out)
        .zip(batch)
        .map(|(q, t)| t.next_forced.unwrap_or_else(|| argmax(q)))
        .collect();
    let q_target = target.forward_batch(&next, n, ws);
    for (b, t) in batch.iter().enumerate() {
        out[b] = t.reward * reward_scale + gamma * q_target[b * n_out + greedy[b]];
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TargetUpdate {
    /// θ' ← τθ + (1 − τ)θ' after every learning step.
    Soft { tau: f64 },
    /// θ' ← θ every `every` learning steps.
    Hard { every: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnerConfig {
    pub gamma: f64,
    pub batch_size: usize,
    pub buffer_capacity: usize,
    pub target_update: TargetUpdate,
    pub learn_rate: f64,
    pub gradient_decay: f64,
    pub squared_gradient_decay: f64,
    pub adam_epsilon: f64,
    /// Multiplier applied to rewards before regression.
    pub reward_scale: f64,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        Self {
            gamma: 0.99,
            batch_size: 64,
            buffer_capacity: 10_000,
            target_update: TargetUpdate::Soft { tau: 1e-3 },
            learn_rate: 0.01,
            gradient_decay: 0.9,
            squared_gradient_decay: 0.999,
            adam_epsilon: 1e-8,
            reward_scale: 1e-2,
        }
    }
}

impl LearnerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::Validation(format!("discount must lie in [0, 1], got {}", self.gamma)));
        }
        if self.batch_size == 0 || self.buffer_capacity < self.batch_size {
            return Err(Error::Validation(format!(
                "batch size {} must be positive and fit in the buffer ({})",
                self.batch_size, self.buffer_capacity
            )));
        }
        if !(self.learn_rate > 0.0) || !(self.reward_scale > 0.0) {
            return Err(Error::Validation("learn rate and reward scale must be positive".into()));
        }
        match self.target_update {
            TargetUpdate::Soft { tau } if !(tau > 0.0 && tau <= 1.0) => {
                Err(Error::Validation(format!("tau must lie in (0, 1], got {tau}")))
            }
            TargetUpdate::Hard { every: 0 } => Err(Error::Validation("hard update period must be positive".into())),
            _ => Ok(()),
        }
    }
}

/// Main and target networks, optimizer and replay memory.
#[derive(Clone, Debug)]
pub struct DdqnLearner {
    pub main: Mlp,
    pub target: Mlp,
    pub buffer: ReplayBuffer,
    cfg: LearnerConfig,
    opt: AdamState,
    grad: Vec<f64>,
    ws: Workspace,
    learn_steps: u64,
}

impl DdqnLearner {
    pub fn new(main: Mlp, cfg: LearnerConfig) -> Result<Self> {
        cfg.validate()?;
        if main.input_dim() != STATE_DIM {
            return Err(Error::DimensionMismatch { expected: STATE_DIM, actual: main.input_dim() });
        }
        let opt = AdamState::new(
            main.num_params(),
            cfg.learn_rate,
            cfg.gradient_decay,
            cfg.squared_gradient_decay,
            cfg.adam_epsilon,
        );
        Ok(Self {
            target: main.clone(),
            grad: vec![0.0; main.num_params()],
            main,
            buffer: ReplayBuffer::new(cfg.buffer_capacity),
            cfg,
            opt,
            ws: Workspace::default(),
            learn_steps: 0,
        })
    }

    pub fn config(&self) -> &LearnerConfig {
        &self.cfg
    }

    pub fn remember(&mut self, t: Transition) {
        self.buffer.push(t);
    }

    /// One minibatch regression toward the DDQN targets followed by the target
    /// network update. Returns the loss, or `None` while the buffer is shorter
    /// than a batch.
    pub fn learn(&mut self, rng: &mut RngStream) -> Option<f64> {
        let n = self.cfg.batch_size;
        if self.buffer.len() < n {
            return None;
        }
        let batch: Vec<Transition> = self.buffer.sample_indices(n, rng).into_iter().map(|i| *self.buffer.get(i)).collect();
        let mut targets = vec![0.0; n];
        ddqn_targets(&self.main, &self.target, &batch, self.cfg.gamma, self.cfg.reward_scale, &mut targets, &mut self.ws);
        let inputs: Vec<f64> = batch.iter().flat_map(|t| t.state).collect();
        let actions: Vec<usize> = batch.iter().map(|t| t.action).collect();
        let loss = self
            .main
            .mse_gradient(&inputs, &actions, &targets, &mut self.grad, &mut self.ws)
            .expect("batch shapes are consistent");
        self.opt.apply(&mut self.main, &self.grad).expect("gradient matches parameters");
        self.learn_steps += 1;
        match self.cfg.target_update {
            TargetUpdate::Soft { tau } => soft_update(&mut self.target, &self.main, tau).expect("same architecture"),
            TargetUpdate::Hard { every } => {
                if self.learn_steps.is_multiple_of(every) {
                    self.target.clone_from(&self.main);
                }
            }
        }
        Some(loss)
    }

    pub fn act(&mut self, state: &Encoding, sched: &ExplorationSchedule, rng: &mut RngStream) -> usize {
        select_action_index(&self.main, state, sched, rng, &mut self.ws)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentConfig {
    pub learner: LearnerConfig,
    pub exploration: ExplorationSchedule,
    pub episodes: usize,
    pub episode_length: usize,
    pub hidden: Vec<usize>,
    pub seed: u64,
}

impl Default for AgentConfig {
    fn default() -> Self {
        Self {
            learner: LearnerConfig::default(),
            exploration: ExplorationSchedule::default(),
            episodes: 50_000,
            episode_length: 500,
            hidden: vec![64, 64],
            seed: 0,
        }
    }
}

impl AgentConfig {
    pub fn validate(&self) -> Result<()> {
        self.learner.validate()?;
        if self.episodes == 0 || self.episode_length == 0 {
            return Err(Error::Validation("episodes and episode length must be positive".into()));
        }
        if self.hidden.contains(&0) {
            return Err(Error::Validation("hidden layer widths must be positive".into()));
        }
        let e = &self.exploration;
        if !(0.0 <= e.eps_min && e.eps_min <= e.epsilon && e.epsilon <= e.eps_max && e.eps_max <= 1.0) {
            return Err(Error::Validation("exploration requires 0 <= eps_min <= epsilon <= eps_max <= 1".into()));
        }
        if !(0.0..1.0).contains(&e.decay) {
            return Err(Error::Validation(format!("epsilon decay must lie in [0, 1), got {}", e.decay)));
        }
        Ok(())
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![STATE_DIM];
        sizes.extend(&self.hidden);
        sizes.push(Action::ALL.len());
        sizes
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeLog {
    pub episode: usize,
    pub cumulative_reward: f64,
    pub epsilon: f64,
    pub mean_loss: f64,
}

pub const TRAINING_LOG_HEADER: &str = "episode,cumulative_reward,epsilon,mean_loss";

pub fn write_training_log<W: Write>(mut w: W, log: &[EpisodeLog], meta: Option<&str>) -> std::io::Result<()> {
    if let Some(meta) = meta {
        writeln!(w, "# {meta}")?;
    }
    writeln!(w, "{TRAINING_LOG_HEADER}")?;
    for e in log {
        writeln!(w, "{},{},{},{}", e.episode, e.cumulative_reward, e.epsilon, e.mean_loss)?;
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct TrainedAgent {
    pub net: Mlp,
    pub log: Vec<EpisodeLog>,
    pub metadata: TrainingMetadata,
}

/// Trains a DDQN maintenance agent on `case`. `on_episode` sees each log row
/// as it is produced.
pub fn train(case: &CaseConfig, cfg: &AgentConfig, mut on_episode: impl FnMut(&EpisodeLog)) -> Result<TrainedAgent> {
    cfg.validate()?;
    let env = case.env()?;
    let l = case.failure_threshold;
    let mut init_rng = RngStream::derive(cfg.seed, domain::TRAINING_INIT, 0);
    let mut agent_rng = RngStream::derive(cfg.seed, domain::TRAINING_AGENT, 0);
    let mut env_rng = EnvRng::new(
        RngStream::derive(cfg.seed, domain::TRAINING_ENV, 0),
        RngStream::derive(cfg.seed, domain::TRAINING_ENV, 1),
    );
    let mut learner = DdqnLearner::new(Mlp::new(&cfg.layer_sizes(), &mut init_rng)?, cfg.learner.clone())?;
    let mut sched = cfg.exploration;
    let mut log = Vec::with_capacity(cfg.episodes);

    for episode in 1..=cfg.episodes {
        let mut state = SystemState::NEW;
        let mut total = 0.0;
        let (mut loss_sum, mut loss_n) = (0.0, 0usize);
        for _ in 0..cfg.episode_length {
            let enc = encode(&state, l);
            let requested = Action::from_index(learner.act(&enc, &sched, &mut agent_rng)).unwrap();
            let out = env.step(state, requested, &mut env_rng);
            learner.remember(Transition {
                state: enc,
                action: out.executed.index(),
                reward: out.reward,
                next_state: encode(&out.next_state, l),
                next_forced: (out.next_state.x >= l).then_some(Action::Replace.index()),
            });
            sched.advance();
            if let Some(loss) = learner.learn(&mut agent_rng) {
                loss_sum += loss;
                loss_n += 1;
            }
            total += out.reward;
            state = out.next_state;
        }
        let row = EpisodeLog {
            episode,
            cumulative_reward: total,
            epsilon: sched.epsilon,
            mean_loss: if loss_n > 0 { loss_sum / loss_n as f64 } else { 0.0 },
        };
        on_episode(&row);
        log.push(row);
        if !learner.main.all_finite() {
            return Err(Error::NonFinite(format!("network parameters diverged in episode {episode}")));
        }
    }
    let metadata = TrainingMetadata {
        case_id: case.id.clone(),
        seed: cfg.seed,
        episodes: cfg.episodes,
        reward_scale: cfg.learner.reward_scale,
        config_hash: case.config_hash(),
    };
    Ok(TrainedAgent { net: learner.main, log, metadata })
}

/// Deterministic argmax policy over a frozen network.
#[derive(Debug)]
pub struct GreedyPolicy {
    net: Mlp,
    failure_threshold: f64,
    ws: RefCell<Workspace>,
}

impl GreedyPolicy {
    pub fn new(net: Mlp, failure_threshold: f64) -> Self {
        Self { net, failure_threshold, ws: RefCell::new(Workspace::default()) }
    }

    pub fn net(&self) -> &Mlp {
        &self.net
    }

    pub fn q_values(&self, s: &SystemState) -> Vec<f64> {
        let enc = encode(s, self.failure_threshold);
        self.net.forward_batch(&enc, 1, &mut self.ws.borrow_mut()).to_vec()
    }

    pub fn action(&self, s: &SystemState) -> Action {
        let enc = encode(s, self.failure_threshold);
        let mut ws = self.ws.borrow_mut();
        Action::from_index(argmax(self.net.forward_batch(&enc, 1, &mut ws))).expect("three outputs")
    }
}

impl Clone for GreedyPolicy {
    fn clone(&self) -> Self {
        Self::new(self.net.clone(), self.failure_threshold)
    }
}

impl Policy for GreedyPolicy {
    fn decide(&self, obs: &Observation) -> Action {
        self.action(&obs.state)
    }
}

pub fn greedy_policy(net: Mlp, failure_threshold: f64) -> GreedyPolicy {
    GreedyPolicy::new(net, failure_threshold)
}
