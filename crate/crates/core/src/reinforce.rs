//! Monte Carlo policy-gradient training of a softmax circuit policy.

use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::env::{EnvKind, MountainCarReward};
use crate::error::{Error, Result};
use crate::genome::Architecture;
use crate::optim::{Optimizer, OptimizerKind};
use crate::policy::{sample_action, LogProbGrads, PolicyParams, Preprocess, SoftmaxPqcPolicy};
use crate::seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainConfig {
    pub episodes: usize,
    pub batch_size: usize,
    pub lr_theta: f64,
    pub lr_lambda: f64,
    pub lr_weights: f64,
    pub gamma: f64,
    pub use_baseline: bool,
    pub seed: u64,
    pub beta: f64,
    pub preprocess: Preprocess,
    pub mountain_car_reward: MountainCarReward,
    pub optimizer: OptimizerKind,
    pub normalize_returns: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self::for_env(EnvKind::CartPole)
    }
}

impl TrainConfig {
    /// Per-environment defaults (learning rates, baseline, budget).
    pub fn for_env(kind: EnvKind) -> Self {
        let (lr_theta, lr_lambda, lr_weights) = kind.learning_rates();
        Self {
            episodes: kind.default_episodes(),
            batch_size: 10,
            lr_theta,
            lr_lambda,
            lr_weights,
            gamma: kind.spec().gamma,
            use_baseline: kind.uses_baseline(),
            seed: 0,
            beta: 1.0,
            preprocess: Preprocess::Arctan,
            mountain_car_reward: MountainCarReward::Height,
            optimizer: OptimizerKind::Adam,
            normalize_returns: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, why: &str| Err(Error::Config(format!("train.{field}: {why}")));
        for (name, lr) in [
            ("lr_theta", self.lr_theta),
            ("lr_lambda", self.lr_lambda),
            ("lr_weights", self.lr_weights),
        ] {
            if !(lr.is_finite() && lr > 0.0) {
                return bad(name, "learning rate must be positive");
            }
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return bad("gamma", "must be in [0, 1]");
        }
        if self.batch_size == 0 {
            return bad("batch_size", "must be at least 1");
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return bad("beta", "must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub state: Vec<f64>,
    pub action: usize,
    pub reward: f64,
    pub grads: LogProbGrads,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub steps: Vec<Step>,
    pub total_reward: f64,
}

impl Trajectory {
    pub fn rewards(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.reward).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LearningCurve {
    pub episode_rewards: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub params: PolicyParams,
    pub curve: LearningCurve,
}

/// Discounted suffix sums `G_t = Σ_{k≥t} γ^{k−t} r_k`.
pub fn compute_returns(rewards: &[f64], gamma: f64) -> Vec<f64> {
    let mut out = vec![0.0; rewards.len()];
    let mut acc = 0.0;
    for (t, r) in rewards.iter().enumerate().rev() {
        acc = r + gamma * acc;
        out[t] = acc;
    }
    out
}

/// Mean-return baseline per time step: `b_t` averages `G_t` over the
/// trajectories that reached step `t`. At `t = 0` this is the batch-mean
/// episode return.
fn baselines(returns: &[Vec<f64>]) -> Vec<f64> {
    let horizon = returns.iter().map(Vec::len).max().unwrap_or(0);
    (0..horizon)
        .map(|t| {
            let (sum, n) = returns
                .iter()
                .filter_map(|g| g.get(t))
                .fold((0.0, 0usize), |(s, n), g| (s + g, n + 1));
            sum / n as f64
        })
        .collect()
}

/// Batch-mean score-function gradient `mean_i Σ_t (G_t − b_t) ∇log π`.
pub fn batch_gradient(
    params: &PolicyParams,
    trajectories: &[Trajectory],
    cfg: &TrainConfig,
) -> Result<LogProbGrads> {
    if trajectories.is_empty() {
        return Err(Error::Usage(
            "batch_update needs at least one trajectory".into(),
        ));
    }
    let returns: Vec<Vec<f64>> = trajectories
        .iter()
        .map(|t| compute_returns(&t.rewards(), cfg.gamma))
        .collect();
    let base = if cfg.use_baseline {
        baselines(&returns)
    } else {
        Vec::new()
    };
    let (mu, sigma) = if cfg.normalize_returns {
        let all: Vec<f64> = returns.iter().flatten().copied().collect();
        let mu = all.iter().sum::<f64>() / all.len() as f64;
        let var = all.iter().map(|g| (g - mu) * (g - mu)).sum::<f64>() / all.len() as f64;
        (mu, var.sqrt() + 1e-8)
    } else {
        (0.0, 1.0)
    };

    let mut grad = LogProbGrads {
        theta: vec![0.0; params.theta.len()],
        lambda: vec![0.0; params.lambda.len()],
        weights: vec![0.0; params.weights.len()],
    };
    let scale = 1.0 / trajectories.len() as f64;
    for (traj, g) in trajectories.iter().zip(&returns) {
        for (t, step) in traj.steps.iter().enumerate() {
            let advantage = if cfg.normalize_returns {
                (g[t] - mu) / sigma
            } else {
                g[t] - base.get(t).copied().unwrap_or(0.0)
            };
            if advantage != 0.0 {
                grad.add_scaled(scale * advantage, &step.grads);
            }
        }
    }
    if !grad.is_finite() {
        return Err(Error::Training("non-finite policy gradient".into()));
    }
    Ok(grad)
}

/// One gradient-ascent step from a batch of trajectories.
pub fn batch_update(
    params: &PolicyParams,
    trajectories: &[Trajectory],
    cfg: &TrainConfig,
) -> Result<PolicyParams> {
    let grad = batch_gradient(params, trajectories, cfg)?;
    let mut next = params.clone();
    let groups = [
        (&mut next.theta, &grad.theta, cfg.lr_theta),
        (&mut next.lambda, &grad.lambda, cfg.lr_lambda),
        (&mut next.weights, &grad.weights, cfg.lr_weights),
    ];
    for (p, g, lr) in groups {
        for (p, g) in p.iter_mut().zip(g) {
            *p += lr * g;
        }
    }
    if !next.is_finite() {
        return Err(Error::Training("parameters became non-finite".into()));
    }
    Ok(next)
}

/// Play one episode, recording per-step score gradients.
pub fn rollout(
    policy: &SoftmaxPqcPolicy,
    params: &PolicyParams,
    kind: EnvKind,
    cfg: &TrainConfig,
    episode_seed: u64,
) -> Result<Trajectory> {
    let mut rng = seed::rng(episode_seed);
    let mut env = kind.make_with(cfg.mountain_car_reward);
    let mut state = env.reset(rng.next_u64());
    let mut steps = Vec::new();
    let mut total_reward = 0.0;
    loop {
        let eval = policy.forward(params, &state)?;
        let action = sample_action(&eval.probs, rng.random::<f64>());
        let grads = policy.grads_from(params, &eval, action)?;
        let result = env.step(action)?;
        total_reward += result.reward;
        steps.push(Step {
            state: std::mem::replace(&mut state, result.next_state.clone()),
            action,
            reward: result.reward,
            grads,
        });
        if result.done() {
            break;
        }
    }
    Ok(Trajectory {
        steps,
        total_reward,
    })
}

pub fn build_policy(
    arch: &Architecture,
    kind: EnvKind,
    cfg: &TrainConfig,
) -> Result<SoftmaxPqcPolicy> {
    SoftmaxPqcPolicy::new(
        arch.clone(),
        kind.spec().state_dim,
        kind.observables(),
        cfg.preprocess,
    )
}

/// Train for `cfg.episodes` episodes, updating after every `batch_size`.
/// A trailing partial batch still produces an update.
pub fn train(arch: &Architecture, kind: EnvKind, cfg: &TrainConfig) -> Result<TrainOutcome> {
    cfg.validate()?;
    let policy = build_policy(arch, kind, cfg)?;
    let mut params = policy.init_params(cfg.beta, &mut seed::derived_rng(cfg.seed, "init", &[]));
    let mut curve = LearningCurve::default();
    let mut opt = Optimizer::new(
        cfg.optimizer,
        [cfg.lr_theta, cfg.lr_lambda, cfg.lr_weights],
        policy.shape(),
    );

    let mut start = 0;
    while start < cfg.episodes {
        let end = (start + cfg.batch_size).min(cfg.episodes);
        let batch = (start..end)
            .into_par_iter()
            .map(|ep| {
                let s = seed::derive(cfg.seed, "episode", &[ep as u64]);
                rollout(&policy, &params, kind, cfg, s)
            })
            .collect::<Result<Vec<_>>>()?;
        curve
            .episode_rewards
            .extend(batch.iter().map(|t| t.total_reward));
        let grad = batch_gradient(&params, &batch, cfg)?;
        opt.step(&mut params, &grad);
        if !params.is_finite() {
            return Err(Error::Training("parameters became non-finite".into()));
        }
        start = end;
    }
    Ok(TrainOutcome { params, curve })
}

/// Mean episode reward.
pub fn fitness(curve: &LearningCurve) -> Result<f64> {
    let r = &curve.episode_rewards;
    if r.is_empty() {
        return Err(Error::Usage("fitness of an empty learning curve".into()));
    }
    Ok(r.iter().sum::<f64>() / r.len() as f64)
}
