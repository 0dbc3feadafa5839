//! Proximal Policy Optimization for the trigger-placement environment.
//!
//! The policy is multi-discrete: one categorical head of
//! [`TriggerAction::COUNT`] moves per trigger, all heads fed by a shared
//! actor network; a separate critic estimates state value. Training uses
//! the clipped surrogate objective with generalized advantage estimation
//! and Adam. Both networks live in flat `f64` vectors with hand-written
//! backpropagation, so the analytic gradient can be validated against
//! finite differences of [`batch_loss`] — the loss and its gradient share
//! one code path and cannot drift apart.

pub mod buffer;
pub mod nn;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rl_env::{scaled_steps, EnvError, EnvState, TriggerAction, TrojanEnv};
use buffer::RolloutBuffer;

/// Optimization hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PpoConfig {
    /// Clip radius of the surrogate ratio.
    pub clip: f64,
    /// Reward discount.
    pub gamma: f64,
    /// Advantage-estimation decay.
    pub gae_lambda: f64,
    pub learning_rate: f64,
    /// Steps collected between policy updates.
    pub rollout_len: usize,
    /// Optimization passes over each rollout.
    pub epochs: usize,
    pub minibatch_size: usize,
    pub entropy_coef: f64,
    pub value_coef: f64,
    /// Hidden layer widths shared by actor and critic.
    pub hidden: Vec<usize>,
}

impl Default for PpoConfig {
    fn default() -> PpoConfig {
        PpoConfig {
            clip: 0.2,
            gamma: 0.99,
            gae_lambda: 0.95,
            learning_rate: 3e-4,
            rollout_len: 2048,
            epochs: 10,
            minibatch_size: 64,
            entropy_coef: 0.01,
            value_coef: 0.5,
            hidden: vec![64, 64],
        }
    }
}

/// Training length scaled by trigger count, mirroring the episode-length
/// growth law in the environment.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainSchedule {
    pub base_timesteps: u64,
    pub growth: f64,
}

impl Default for TrainSchedule {
    fn default() -> TrainSchedule {
        TrainSchedule {
            base_timesteps: 120_000,
            growth: 0.10,
        }
    }
}

impl TrainSchedule {
    pub fn total_timesteps(&self, n_triggers: usize) -> u64 {
        scaled_steps(self.base_timesteps, self.growth, n_triggers)
    }
}

pub const CHECKPOINT_VERSION: u32 = 1;

/// Complete, serializable policy state. `level_scale` records the
/// normalization constant observations were divided by during training, so
/// a checkpoint replays identically on its circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyParams {
    pub version: u32,
    pub obs_dim: usize,
    pub n_heads: usize,
    pub actions_per_head: usize,
    pub hidden: Vec<usize>,
    pub level_scale: f64,
    pub actor: Vec<f64>,
    pub critic: Vec<f64>,
}

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("checkpoint version {got} is not the supported version {expected}")]
    Version { got: u32, expected: u32 },
    #[error("{field} holds {got} parameters, expected {expected}")]
    Shape {
        field: &'static str,
        got: usize,
        expected: usize,
    },
}

impl PolicyParams {
    pub fn new<R: Rng>(
        obs_dim: usize,
        n_heads: usize,
        hidden: &[usize],
        level_scale: f64,
        rng: &mut R,
    ) -> PolicyParams {
        let mut p = PolicyParams {
            version: CHECKPOINT_VERSION,
            obs_dim,
            n_heads,
            actions_per_head: TriggerAction::COUNT,
            hidden: hidden.to_vec(),
            level_scale,
            actor: Vec::new(),
            critic: Vec::new(),
        };
        p.actor = nn::init_params(&p.actor_sizes(), rng);
        p.critic = nn::init_params(&p.critic_sizes(), rng);
        p
    }

    pub fn actor_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![self.obs_dim];
        sizes.extend_from_slice(&self.hidden);
        sizes.push(self.n_heads * self.actions_per_head);
        sizes
    }

    pub fn critic_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![self.obs_dim];
        sizes.extend_from_slice(&self.hidden);
        sizes.push(1);
        sizes
    }

    /// Scales raw level observations into the roughly unit range the
    /// networks were trained on.
    pub fn normalize_state(&self, state: &EnvState) -> Vec<f64> {
        state
            .0
            .iter()
            .map(|&lvl| lvl as f64 / self.level_scale)
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("policy parameters always serialize")
    }

    pub fn from_json(s: &str) -> Result<PolicyParams, CheckpointError> {
        let p: PolicyParams = serde_json::from_str(s)?;
        if p.version != CHECKPOINT_VERSION {
            return Err(CheckpointError::Version {
                got: p.version,
                expected: CHECKPOINT_VERSION,
            });
        }
        let want_actor = nn::param_count(&p.actor_sizes());
        if p.actor.len() != want_actor {
            return Err(CheckpointError::Shape {
                field: "actor",
                got: p.actor.len(),
                expected: want_actor,
            });
        }
        let want_critic = nn::param_count(&p.critic_sizes());
        if p.critic.len() != want_critic {
            return Err(CheckpointError::Shape {
                field: "critic",
                got: p.critic.len(),
                expected: want_critic,
            });
        }
        Ok(p)
    }
}

/// All action logits for one observation, heads concatenated.
pub fn action_logits(params: &PolicyParams, obs: &[f64]) -> Vec<f64> {
    nn::forward(&params.actor_sizes(), &params.actor, obs)
}

/// Critic estimate for one observation.
pub fn state_value(params: &PolicyParams, obs: &[f64]) -> f64 {
    nn::forward(&params.critic_sizes(), &params.critic, obs)[0]
}

/// Log-softmax of one head's logits (numerically stable).
fn log_softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let log_sum = logits.iter().map(|z| (z - max).exp()).sum::<f64>().ln();
    logits.iter().map(|z| z - max - log_sum).collect()
}

#[derive(Debug, Clone)]
pub struct SampledActions {
    /// Per-head action indices.
    pub actions: Vec<usize>,
    /// Joint log-probability of the sampled action vector.
    pub log_prob: f64,
}

/// Samples one action per head from the categorical distributions the
/// logits define.
pub fn sample_actions<R: Rng>(
    params: &PolicyParams,
    obs: &[f64],
    rng: &mut R,
) -> SampledActions {
    let logits = action_logits(params, obs);
    let k = params.actions_per_head;
    let mut actions = Vec::with_capacity(params.n_heads);
    let mut log_prob = 0.0;
    for h in 0..params.n_heads {
        let lsm = log_softmax(&logits[h * k..(h + 1) * k]);
        let draw: f64 = rng.random();
        let mut cumulative = 0.0;
        let mut chosen = k - 1;
        for (i, l) in lsm.iter().enumerate() {
            cumulative += l.exp();
            if draw < cumulative {
                chosen = i;
                break;
            }
        }
        actions.push(chosen);
        log_prob += lsm[chosen];
    }
    SampledActions { actions, log_prob }
}

/// Deterministic argmax action per head.
pub fn greedy_actions(params: &PolicyParams, obs: &[f64]) -> Vec<usize> {
    let logits = action_logits(params, obs);
    let k = params.actions_per_head;
    (0..params.n_heads)
        .map(|h| {
            let head = &logits[h * k..(h + 1) * k];
            let mut best = 0;
            for i in 1..k {
                if head[i] > head[best] {
                    best = i;
                }
            }
            best
        })
        .collect()
}

pub fn to_trigger_actions(indices: &[usize]) -> Vec<TriggerAction> {
    indices
        .iter()
        .map(|&i| TriggerAction::from_index(i))
        .collect()
}

/// Loss and parameter gradients for one minibatch.
#[derive(Debug, Clone)]
pub struct BatchGrad {
    pub loss: f64,
    pub actor: Vec<f64>,
    pub critic: Vec<f64>,
}

/// PPO loss over the buffer rows selected by `idx`: clipped policy
/// surrogate plus `value_coef` times squared value error minus
/// `entropy_coef` times policy entropy, averaged over the minibatch.
pub fn batch_loss(
    params: &PolicyParams,
    buf: &RolloutBuffer,
    idx: &[usize],
    cfg: &PpoConfig,
) -> f64 {
    run_batch(params, buf, idx, cfg, None)
}

/// Same objective as [`batch_loss`], plus its analytic gradient.
pub fn batch_gradient(
    params: &PolicyParams,
    buf: &RolloutBuffer,
    idx: &[usize],
    cfg: &PpoConfig,
) -> BatchGrad {
    let mut grad = BatchGrad {
        loss: 0.0,
        actor: vec![0.0; params.actor.len()],
        critic: vec![0.0; params.critic.len()],
    };
    grad.loss = run_batch(params, buf, idx, cfg, Some(&mut grad));
    grad
}

/// Shared forward (and optional backward) pass over a minibatch.
fn run_batch(
    params: &PolicyParams,
    buf: &RolloutBuffer,
    idx: &[usize],
    cfg: &PpoConfig,
    mut grads: Option<&mut BatchGrad>,
) -> f64 {
    let actor_sizes = params.actor_sizes();
    let critic_sizes = params.critic_sizes();
    let k = params.actions_per_head;
    let scale = 1.0 / idx.len() as f64;
    let mut total_loss = 0.0;
    for &row in idx {
        let obs = &buf.states[row];
        let advantage = buf.advantages[row];
        let ret = buf.returns[row];

        let actor_acts = nn::forward_cached(&actor_sizes, &params.actor, obs);
        let logits = actor_acts.last().expect("actor output layer");
        let mut log_prob = 0.0;
        let mut entropy = 0.0;
        // dLoss/dlogits for this sample; filled only when grads are wanted
        // but cheap enough to build unconditionally.
        let mut d_logits = vec![0.0; logits.len()];
        let mut head_terms = Vec::with_capacity(params.n_heads);
        for h in 0..params.n_heads {
            let lsm = log_softmax(&logits[h * k..(h + 1) * k]);
            let action = buf.actions[row][h];
            log_prob += lsm[action];
            let head_entropy = -lsm.iter().map(|l| l.exp() * l).sum::<f64>();
            entropy += head_entropy;
            head_terms.push((lsm, action, head_entropy));
        }

        let ratio = (log_prob - buf.log_probs[row]).exp();
        let clipped_ratio = ratio.clamp(1.0 - cfg.clip, 1.0 + cfg.clip);
        let unclipped = ratio * advantage;
        let clipped = clipped_ratio * advantage;
        // Tie goes to the unclipped branch so the gradient flows whenever
        // the two objectives coincide (in particular at ratio = 1).
        let use_unclipped = unclipped <= clipped;
        let policy_loss = -if use_unclipped { unclipped } else { clipped };

        let critic_acts = nn::forward_cached(&critic_sizes, &params.critic, obs);
        let value = critic_acts.last().expect("critic output layer")[0];
        let value_loss = (value - ret) * (value - ret);

        total_loss += scale
            * (policy_loss + cfg.value_coef * value_loss - cfg.entropy_coef * entropy);

        if let Some(g) = grads.as_deref_mut() {
            // d(policy_loss)/d(log_prob): the clipped branch is flat.
            let d_log_prob = if use_unclipped { -advantage * ratio } else { 0.0 };
            for (h, (lsm, action, head_entropy)) in head_terms.iter().enumerate() {
                for i in 0..k {
                    let p = lsm[i].exp();
                    let indicator = if i == *action { 1.0 } else { 0.0 };
                    // logp term: d logp / dz = 1[action] - p.
                    // entropy term: dH/dz = -p (log p + H).
                    d_logits[h * k + i] = scale
                        * (d_log_prob * (indicator - p)
                            + cfg.entropy_coef * p * (lsm[i] + head_entropy));
                }
            }
            nn::backward(&actor_sizes, &params.actor, &actor_acts, &d_logits, &mut g.actor);
            let d_value = scale * 2.0 * cfg.value_coef * (value - ret);
            nn::backward(
                &critic_sizes,
                &params.critic,
                &critic_acts,
                &[d_value],
                &mut g.critic,
            );
        }
    }
    total_loss
}

/// Adam optimizer over one flat parameter vector.
#[derive(Debug, Clone)]
pub struct Adam {
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    t: u64,
    m: Vec<f64>,
    v: Vec<f64>,
}

impl Adam {
    pub fn new(n_params: usize, lr: f64) -> Adam {
        Adam {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            t: 0,
            m: vec![0.0; n_params],
            v: vec![0.0; n_params],
        }
    }

    pub fn step(&mut self, params: &mut [f64], grad: &[f64]) {
        debug_assert_eq!(params.len(), grad.len());
        self.t += 1;
        let bias1 = 1.0 - self.beta1.powi(self.t as i32);
        let bias2 = 1.0 - self.beta2.powi(self.t as i32);
        for i in 0..params.len() {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * grad[i];
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * grad[i] * grad[i];
            let m_hat = self.m[i] / bias1;
            let v_hat = self.v[i] / bias2;
            params[i] -= self.lr * m_hat / (v_hat.sqrt() + self.eps);
        }
    }
}

/// One line of the training log, emitted after every policy update.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    /// Environment steps taken so far.
    pub timestep: u64,
    /// Episodes completed so far.
    pub episodes: u64,
    /// Mean return of episodes finished since the previous update (carried
    /// forward when none finished).
    pub mean_episode_reward: f64,
    /// Cumulative count of distinct activatable Trojans discovered.
    pub trojans_found: usize,
}

#[derive(Debug)]
pub struct TrainResult {
    pub params: PolicyParams,
    pub metrics: Vec<MetricsRow>,
    /// Reward of every environment step, in order.
    pub step_rewards: Vec<f64>,
}

#[derive(Debug, Error)]
pub enum TrainError {
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error("optimization diverged: non-finite loss at timestep {timestep}")]
    NonFiniteLoss { timestep: u64 },
}

/// Runs PPO on the environment for the scheduled number of timesteps.
///
/// `seed` drives policy initialization, action sampling, and minibatch
/// shuffling on an RNG stream separate from the environment's, so the two
/// never interleave. `on_update` fires after each policy update with the
/// latest metrics row and the current parameters (for progress reporting
/// or mid-training checkpoints).
pub fn train(
    env: &mut TrojanEnv,
    schedule: &TrainSchedule,
    cfg: &PpoConfig,
    seed: u64,
    mut on_update: impl FnMut(&MetricsRow, &PolicyParams),
) -> Result<TrainResult, TrainError> {
    let total = schedule.total_timesteps(env.n_triggers());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);

    let n_heads = env.n_triggers();
    let obs_dim = n_heads + 2;
    let level_scale = env.base().max_level().max(1) as f64;
    let mut params = PolicyParams::new(obs_dim, n_heads, &cfg.hidden, level_scale, &mut rng);
    let mut adam_actor = Adam::new(params.actor.len(), cfg.learning_rate);
    let mut adam_critic = Adam::new(params.critic.len(), cfg.learning_rate);

    let mut buf = RolloutBuffer::with_capacity(cfg.rollout_len);
    let mut metrics = Vec::new();
    let mut step_rewards = Vec::with_capacity(total as usize);
    let mut state = env.state();
    let mut episode_return = 0.0;
    let mut window_returns: Vec<f64> = Vec::new();
    let mut episodes = 0u64;
    let mut last_mean_reward = 0.0;

    for t in 0..total {
        let obs = params.normalize_state(&state);
        let sampled = sample_actions(&params, &obs, &mut rng);
        let value = state_value(&params, &obs);
        let moves = to_trigger_actions(&sampled.actions);
        let out = env.step(&moves)?;
        buf.push(obs, sampled.actions, sampled.log_prob, value, out.reward, out.done);
        step_rewards.push(out.reward);
        episode_return += out.reward;
        if out.done {
            episodes += 1;
            window_returns.push(episode_return);
            episode_return = 0.0;
            state = env.reset()?;
        } else {
            state = out.state;
        }

        if buf.len() == cfg.rollout_len || t + 1 == total {
            let bootstrap = state_value(&params, &params.normalize_state(&state));
            buf.compute_gae(cfg.gamma, cfg.gae_lambda, bootstrap);
            buf.normalize_advantages();
            let mut order: Vec<usize> = (0..buf.len()).collect();
            for _ in 0..cfg.epochs {
                shuffle(&mut order, &mut rng);
                for chunk in order.chunks(cfg.minibatch_size) {
                    let g = batch_gradient(&params, &buf, chunk, cfg);
                    if !g.loss.is_finite() {
                        return Err(TrainError::NonFiniteLoss { timestep: t + 1 });
                    }
                    adam_actor.step(&mut params.actor, &g.actor);
                    adam_critic.step(&mut params.critic, &g.critic);
                }
            }
            buf.clear();

            if !window_returns.is_empty() {
                last_mean_reward =
                    window_returns.iter().sum::<f64>() / window_returns.len() as f64;
                window_returns.clear();
            }
            let row = MetricsRow {
                timestep: t + 1,
                episodes,
                mean_episode_reward: last_mean_reward,
                trojans_found: env.log().len(),
            };
            on_update(&row, &params);
            metrics.push(row);
        }
    }

    Ok(TrainResult {
        params,
        metrics,
        step_rewards,
    })
}

/// Fisher-Yates shuffle; kept local so minibatch order depends only on the
/// learner RNG stream.
fn shuffle<R: Rng>(order: &mut [usize], rng: &mut R) {
    for i in (1..order.len()).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_bench;
    use crate::rl_env::EnvConfig;
    use crate::scoap::{compute_scoap, select_suspicious_by_threshold};
    use crate::trojan::TrojanConfig;

    fn tiny_params(seed: u64) -> PolicyParams {
        PolicyParams::new(4, 2, &[6], 3.0, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    #[test]
    fn schedule_grows_ten_percent_per_extra_trigger() {
        let s = TrainSchedule::default();
        assert_eq!(s.total_timesteps(2), 120_000);
        assert_eq!(s.total_timesteps(3), 132_000);
        assert_eq!(s.total_timesteps(4), 145_200);
        assert_eq!(s.total_timesteps(5), 159_720);
    }

    #[test]
    fn log_softmax_of_uniform_logits_is_uniform() {
        let lsm = log_softmax(&[0.7, 0.7, 0.7, 0.7, 0.7]);
        for l in &lsm {
            assert!((l - (0.2f64).ln()).abs() < 1e-12);
        }
        let p_sum: f64 = lsm.iter().map(|l| l.exp()).sum();
        assert!((p_sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_policy_has_log_k_entropy() {
        // Zero weights after scaling by 0 -> uniform heads.
        let mut p = tiny_params(3);
        for w in p.actor.iter_mut() {
            *w = 0.0;
        }
        let obs = [0.1, 0.2, 0.3, 0.4];
        let logits = action_logits(&p, &obs);
        let mut entropy = 0.0;
        for h in 0..p.n_heads {
            let lsm = log_softmax(&logits[h * 5..(h + 1) * 5]);
            entropy += -lsm.iter().map(|l| l.exp() * l).sum::<f64>();
        }
        assert!((entropy - 2.0 * (5.0f64).ln()).abs() < 1e-12);
        // Any action vector has probability (1/5)^2.
        let sampled = sample_actions(&p, &obs, &mut ChaCha8Rng::seed_from_u64(0));
        assert!((sampled.log_prob - 2.0 * (0.2f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn sampling_is_rng_deterministic_and_in_range() {
        let p = tiny_params(9);
        let obs = [0.3, 0.1, 0.9, 0.5];
        let a = sample_actions(&p, &obs, &mut ChaCha8Rng::seed_from_u64(1));
        let b = sample_actions(&p, &obs, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(a.actions, b.actions);
        assert_eq!(a.log_prob, b.log_prob);
        assert_eq!(a.actions.len(), 2);
        assert!(a.actions.iter().all(|&i| i < 5));
        // Greedy picks the max-logit index of each head.
        let logits = action_logits(&p, &obs);
        let greedy = greedy_actions(&p, &obs);
        for h in 0..2 {
            let head = &logits[h * 5..(h + 1) * 5];
            assert!(head.iter().all(|&z| z <= head[greedy[h]]));
        }
    }

    /// A small synthetic rollout covering both clip branches and both
    /// advantage signs.
    fn synthetic_buffer(params: &PolicyParams, seed: u64) -> RolloutBuffer {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut buf = RolloutBuffer::default();
        for i in 0..8 {
            let obs: Vec<f64> = (0..params.obs_dim)
                .map(|_| rng.random_range(-1.0..1.0))
                .collect();
            let sampled = sample_actions(params, &obs, &mut rng);
            // Offset some stored log-probs so the current ratio lands well
            // inside, above, or below the clip interval.
            let offset = match i % 4 {
                0 => 0.0,
                1 => 0.4,
                2 => -0.4,
                _ => 0.05,
            };
            buf.push(
                obs,
                sampled.actions,
                sampled.log_prob + offset,
                rng.random_range(-1.0..1.0),
                rng.random_range(-2.0..2.0),
                i == 7,
            );
        }
        buf.compute_gae(0.99, 0.95, 0.3);
        buf.normalize_advantages();
        buf
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let params = tiny_params(17);
        let cfg = PpoConfig {
            hidden: vec![6],
            ..PpoConfig::default()
        };
        let buf = synthetic_buffer(&params, 23);
        let idx: Vec<usize> = (0..buf.len()).collect();
        let g = batch_gradient(&params, &buf, &idx, &cfg);
        assert!((g.loss - batch_loss(&params, &buf, &idx, &cfg)).abs() < 1e-12);

        let h = 1e-6;
        let check = |which: &str, analytic: &[f64], dim: usize| {
            for i in 0..dim {
                let mut perturbed = params.clone();
                let slot = if which == "actor" {
                    &mut perturbed.actor[i]
                } else {
                    &mut perturbed.critic[i]
                };
                *slot += h;
                let up = batch_loss(&perturbed, &buf, &idx, &cfg);
                let slot = if which == "actor" {
                    &mut perturbed.actor[i]
                } else {
                    &mut perturbed.critic[i]
                };
                *slot -= 2.0 * h;
                let dn = batch_loss(&perturbed, &buf, &idx, &cfg);
                let numeric = (up - dn) / (2.0 * h);
                let denom = numeric.abs().max(analytic[i].abs()).max(1e-6);
                assert!(
                    (numeric - analytic[i]).abs() / denom < 1e-4,
                    "{which}[{i}]: analytic {} vs numeric {numeric}",
                    analytic[i]
                );
            }
        };
        check("actor", &g.actor, params.actor.len());
        check("critic", &g.critic, params.critic.len());
    }

    #[test]
    fn gradient_descends_the_batch_loss() {
        let mut params = tiny_params(29);
        let cfg = PpoConfig {
            hidden: vec![6],
            learning_rate: 1e-2,
            ..PpoConfig::default()
        };
        let buf = synthetic_buffer(&params, 31);
        let idx: Vec<usize> = (0..buf.len()).collect();
        let initial = batch_loss(&params, &buf, &idx, &cfg);
        let mut adam_a = Adam::new(params.actor.len(), cfg.learning_rate);
        let mut adam_c = Adam::new(params.critic.len(), cfg.learning_rate);
        for _ in 0..50 {
            let g = batch_gradient(&params, &buf, &idx, &cfg);
            adam_a.step(&mut params.actor, &g.actor);
            adam_c.step(&mut params.critic, &g.critic);
        }
        let final_loss = batch_loss(&params, &buf, &idx, &cfg);
        assert!(
            final_loss < initial,
            "loss should fall: {initial} -> {final_loss}"
        );
    }

    #[test]
    fn adam_first_step_moves_by_learning_rate() {
        let mut adam = Adam::new(2, 0.1);
        let mut params = vec![0.0, 0.0];
        adam.step(&mut params, &[0.5, -2.0]);
        // Bias correction makes the first update lr * sign(gradient).
        assert!((params[0] + 0.1).abs() < 1e-6);
        assert!((params[1] - 0.1).abs() < 1e-6);
    }

    #[test]
    fn checkpoint_round_trips_exactly() {
        let p = tiny_params(41);
        let restored = PolicyParams::from_json(&p.to_json()).unwrap();
        assert_eq!(p, restored);
    }

    #[test]
    fn checkpoint_rejects_bad_version_and_shape() {
        let mut p = tiny_params(43);
        p.version = 999;
        assert!(matches!(
            PolicyParams::from_json(&p.to_json()),
            Err(CheckpointError::Version { got: 999, .. })
        ));
        let mut p = tiny_params(43);
        p.actor.pop();
        assert!(matches!(
            PolicyParams::from_json(&p.to_json()),
            Err(CheckpointError::Shape { field: "actor", .. })
        ));
    }

    fn c17_env(seed: u64) -> TrojanEnv {
        let c = parse_bench(include_str!("../../../../benchmarks/c17.bench"), "c17").unwrap();
        let table = compute_scoap(&c);
        let suspicious = select_suspicious_by_threshold(&c, &table, 0.0, f64::INFINITY);
        TrojanEnv::new(
            c,
            suspicious,
            EnvConfig {
                trojan: TrojanConfig { n_triggers: 2 },
                steps_per_episode: 20,
                seed,
                podem_backtrack_limit: 10_000,
            },
        )
        .unwrap()
    }

    fn tiny_cfg() -> PpoConfig {
        PpoConfig {
            rollout_len: 64,
            epochs: 2,
            minibatch_size: 16,
            hidden: vec![8],
            ..PpoConfig::default()
        }
    }

    #[test]
    fn training_runs_and_is_seed_deterministic() {
        let schedule = TrainSchedule {
            base_timesteps: 200,
            growth: 0.10,
        };
        let run = |seed: u64| {
            let mut env = c17_env(seed);
            train(&mut env, &schedule, &tiny_cfg(), seed, |_, _| {}).unwrap()
        };
        let a = run(7);
        let b = run(7);
        assert_eq!(a.step_rewards, b.step_rewards);
        assert_eq!(a.params.to_json(), b.params.to_json());
        assert_eq!(a.metrics, b.metrics);
        let c = run(8);
        assert_ne!(a.step_rewards, c.step_rewards);
    }

    #[test]
    fn training_metrics_track_progress() {
        let schedule = TrainSchedule {
            base_timesteps: 200,
            growth: 0.10,
        };
        let mut env = c17_env(11);
        let mut update_calls = 0;
        let result = train(&mut env, &schedule, &tiny_cfg(), 11, |_, _| update_calls += 1).unwrap();
        assert_eq!(result.step_rewards.len(), 200);
        assert!(result.step_rewards.iter().all(|r| r.is_finite()));
        // 200 steps at rollout 64: updates at 64, 128, 192, 200.
        assert_eq!(result.metrics.len(), 4);
        assert_eq!(update_calls, 4);
        assert_eq!(
            result.metrics.iter().map(|m| m.timestep).collect::<Vec<_>>(),
            vec![64, 128, 192, 200]
        );
        // 20-step episodes: 10 complete episodes in 200 steps.
        assert_eq!(result.metrics.last().unwrap().episodes, 10);
        let found: Vec<usize> = result.metrics.iter().map(|m| m.trojans_found).collect();
        assert!(found.windows(2).all(|w| w[0] <= w[1]));
        assert!(result.params.actor.iter().all(|w| w.is_finite()));
        assert!(result.params.critic.iter().all(|w| w.is_finite()));
    }
}
