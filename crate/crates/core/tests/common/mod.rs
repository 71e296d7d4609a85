//! Independent oracles shared by the integration tests. They use statrs for
//! distribution functions, not the crate's own special functions.
#![allow(dead_code)]

use cbm_rl::agent::{DdqnLearner, LearnerConfig, TargetUpdate, Transition};
use cbm_rl::{Action, CaseConfig, Mlp, Observation, Policy, RngStream, SystemState};
use statrs::distribution::{ContinuousCDF, Gamma, Normal};

/// P(X_k < L) for the unmaintained process after k increments.
fn below_threshold(case: &CaseConfig, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let shape = k as f64 * case.v_coeff * case.delta_t;
    Gamma::new(shape, case.beta).unwrap().cdf(case.failure_threshold)
}

/// Expected number of failure replacements under FR within steps
/// `0..horizon`, from the exact discrete renewal equation
/// m(n) = Σ_{k=1..n} f(k) (1 + m(n − k)).
pub fn fr_expected_failures(case: &CaseConfig, horizon: usize) -> f64 {
    let n = horizon - 1;
    let f: Vec<f64> = (0..=n)
        .map(|k| if k == 0 { 0.0 } else { below_threshold(case, k - 1) - below_threshold(case, k) })
        .collect();
    let mut m = vec![0.0; n + 1];
    for t in 1..=n {
        m[t] = (1..=t).map(|k| f[k] * (1.0 + m[t - k])).sum();
    }
    m[n]
}

/// Mean FR cycle length in inspections, Σ_k P(X_k < L).
pub fn fr_mean_cycle(case: &CaseConfig) -> f64 {
    let mut total = 0.0;
    for k in 0.. {
        let p = below_threshold(case, k);
        total += p;
        if p < 1e-16 {
            break;
        }
    }
    total
}

/// Optimal long-run cost per inspection by relative value iteration on a
/// grid of step `h` over (x, x_m), 0 ≤ x_m ≤ x < L.
pub fn optimal_cost_per_inspection(case: &CaseConfig, h: f64) -> f64 {
    solve_average_cost(case, h).gain
}

/// Average-cost optimal solution on a grid: the gain and the minimizing action
/// at every grid state.
pub struct GridSolution {
    pub gain: f64,
    h: f64,
    n: usize,
    actions: Vec<Action>,
}

impl GridSolution {
    /// Action at the grid point nearest to `s`, as a simulation policy.
    pub fn action(&self, s: &SystemState) -> Action {
        let i = ((s.x / self.h).round() as usize).min(self.n - 1);
        let j = ((s.x_m / self.h).round() as usize).min(i);
        self.actions[i * self.n + j]
    }
}

impl Policy for GridSolution {
    fn decide(&self, obs: &Observation) -> Action {
        self.action(&obs.state)
    }
}

pub fn solve_average_cost(case: &CaseConfig, h: f64) -> GridSolution {
    let l = case.failure_threshold;
    let n = (l / h).round() as usize;
    let inc = Gamma::new(case.v_coeff * case.delta_t, case.beta).unwrap();
    let cdf = |x: f64| if x <= 0.0 { 0.0 } else { inc.cdf(x) };
    let pk: Vec<f64> = (0..=n)
        .map(|k| {
            let lo = if k == 0 { 0.0 } else { (k as f64 - 0.5) * h };
            cdf((k as f64 + 0.5) * h) - cdf(lo)
        })
        .collect();
    let std = Normal::new(0.0, 1.0).unwrap();
    // Post-repair level distribution over grid indices j..=i.
    let repair: Vec<Vec<Vec<f64>>> = (0..n)
        .map(|i| {
            (0..=i)
                .map(|j| {
                    if i == j {
                        return vec![1.0];
                    }
                    let (x, m) = (i as f64 * h, j as f64 * h);
                    let (mu, sd) = ((x + m) / 2.0, (x + m) / 6.0);
                    let edges: Vec<f64> = (j..=i + 1)
                        .map(|t| {
                            let e = if t == j {
                                m
                            } else if t == i + 1 {
                                x
                            } else {
                                (t as f64 - 0.5) * h
                            };
                            std.cdf((e - mu) / sd)
                        })
                        .collect();
                    let total = edges[edges.len() - 1] - edges[0];
                    edges.windows(2).map(|w| (w[1] - w[0]) / total).collect()
                })
                .collect()
        })
        .collect();
    let at = |i: usize, j: usize| i * n + j;
    let mut v = vec![0.0; n * n];
    let mut w = vec![0.0; n * n];
    let mut actions = vec![Action::NoAction; n * n];
    let mut gain = 0.0;
    for _ in 0..100_000 {
        let w_reset = w[0];
        for i in 0..n {
            for j in 0..=i {
                let mut s = 0.0;
                let mut stay = 0.0;
                for k in 0..n - i {
                    s += pk[k] * v[at(i + k, j)];
                    stay += pk[k];
                }
                w[at(i, j)] = s + (1.0 - stay) * (case.c_r + case.c_down + w_reset);
            }
        }
        let mut next = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let a0 = w[at(i, j)];
                let a1 = case.c_p + repair[i][j].iter().enumerate().map(|(t, q)| q * w[at(j + t, j + t)]).sum::<f64>();
                let a2 = case.c_r + w[0];
                let (best, action) = if a0 <= a1 && a0 <= a2 {
                    (a0, Action::NoAction)
                } else if a1 <= a2 {
                    (a1, Action::Repair)
                } else {
                    (a2, Action::Replace)
                };
                next[at(i, j)] = best;
                actions[at(i, j)] = action;
            }
        }
        let g = next[0];
        next.iter_mut().for_each(|x| *x -= g);
        let diff = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = next;
        let settled = diff < 1e-7 && (g - gain).abs() < 1e-9;
        gain = g;
        if settled {
            break;
        }
    }
    GridSolution { gain, h, n, actions }
}

/// Two states, two actions: a0 stays, a1 switches. Rewards r(s, a).
pub const TOY_REWARDS: [[f64; 2]; 2] = [[1.0, 0.5], [2.0, 0.5]];
pub const TOY_GAMMA: f64 = 0.5;

fn toy_next(s: usize, a: usize) -> usize {
    if a == 0 {
        s
    } else {
        1 - s
    }
}

/// Optimal Q by value iteration.
pub fn toy_q_star() -> [[f64; 2]; 2] {
    let mut q = [[0.0f64; 2]; 2];
    for _ in 0..200 {
        let v = [q[0][0].max(q[0][1]), q[1][0].max(q[1][1])];
        for s in 0..2 {
            for a in 0..2 {
                q[s][a] = TOY_REWARDS[s][a] + TOY_GAMMA * v[toy_next(s, a)];
            }
        }
    }
    q
}

/// Trains the crate's DDQN learner on the toy MDP with uniform exploration
/// and returns the learned Q table.
pub fn toy_ddqn_q(seed: u64, steps: usize) -> [[f64; 2]; 2] {
    let one_hot = |s: usize| if s == 0 { [1.0, 0.0] } else { [0.0, 1.0] };
    let mut rng = RngStream::new(seed, 0);
    let net = Mlp::new(&[2, 16, 2], &mut rng).unwrap();
    let cfg = LearnerConfig {
        gamma: TOY_GAMMA,
        batch_size: 32,
        buffer_capacity: 1000,
        target_update: TargetUpdate::Soft { tau: 0.05 },
        learn_rate: 1e-3,
        reward_scale: 1.0,
        ..LearnerConfig::default()
    };
    let mut learner = DdqnLearner::new(net, cfg).unwrap();
    let mut s = 0;
    for _ in 0..steps {
        let a = rng.below(2);
        let next = toy_next(s, a);
        learner.remember(Transition {
            state: one_hot(s),
            action: a,
            reward: TOY_REWARDS[s][a],
            next_state: one_hot(next),
            next_forced: None,
        });
        learner.learn(&mut rng);
        s = next;
    }
    let q0 = learner.main.forward(&one_hot(0)).unwrap();
    let q1 = learner.main.forward(&one_hot(1)).unwrap();
    [[q0[0], q0[1]], [q1[0], q1[1]]]
}

/// Largest relative gap between the analytic gradient of ½(Q(s,a) − t)² and
/// central finite differences with step `h`.
pub fn gradient_check(net: &Mlp, input: &[f64], action: usize, target: f64, h: f64) -> f64 {
    let analytic = net.backward_mse(input, action, target).unwrap();
    let loss = |n: &Mlp| {
        let q = n.forward(input).unwrap()[action];
        0.5 * (q - target) * (q - target)
    };
    let mut worst: f64 = 0.0;
    let mut probe = net.clone();
    for (i, &a) in analytic.iter().enumerate() {
        let orig = probe.params()[i];
        probe.params_mut()[i] = orig + h;
        let up = loss(&probe);
        probe.params_mut()[i] = orig - h;
        let down = loss(&probe);
        probe.params_mut()[i] = orig;
        let numeric = (up - down) / (2.0 * h);
        let scale = a.abs().max(numeric.abs()).max(1e-6);
        worst = worst.max((a - numeric).abs() / scale);
    }
    worst
}

/// A random net with 1–3 hidden layers of 2–12 units and random biases (so no
/// pre-activation sits exactly on a ReLU kink), a random input, action and
/// target, all from `seed`.
pub fn random_gradient_instance(seed: u64) -> (Mlp, Vec<f64>, usize, f64) {
    let mut rng = RngStream::new(seed, 99);
    let depth = 1 + rng.below(3);
    let mut sizes = vec![2];
    for _ in 0..depth {
        sizes.push(2 + rng.below(11));
    }
    sizes.push(3);
    let mut net = Mlp::new(&sizes, &mut rng).unwrap();
    for layer in 0..sizes.len() - 1 {
        for b in net.layer_biases_mut(layer) {
            *b = rng.uniform() - 0.5;
        }
    }
    let input = vec![rng.uniform() * 1.5, rng.uniform()];
    let action = rng.below(3);
    let target = rng.uniform() * 4.0 - 2.0;
    (net, input, action, target)
}
