//! On-policy rollout storage and generalized advantage estimation.

/// One rollout's worth of transitions, column-wise. `advantages` and
/// `returns` are empty until [`RolloutBuffer::compute_gae`] runs.
#[derive(Debug, Default, Clone)]
pub struct RolloutBuffer {
    pub states: Vec<Vec<f64>>,
    pub actions: Vec<Vec<usize>>,
    pub log_probs: Vec<f64>,
    pub values: Vec<f64>,
    pub rewards: Vec<f64>,
    pub dones: Vec<bool>,
    pub advantages: Vec<f64>,
    pub returns: Vec<f64>,
}

impl RolloutBuffer {
    pub fn with_capacity(n: usize) -> RolloutBuffer {
        RolloutBuffer {
            states: Vec::with_capacity(n),
            actions: Vec::with_capacity(n),
            log_probs: Vec::with_capacity(n),
            values: Vec::with_capacity(n),
            rewards: Vec::with_capacity(n),
            dones: Vec::with_capacity(n),
            advantages: Vec::with_capacity(n),
            returns: Vec::with_capacity(n),
        }
    }

    pub fn push(
        &mut self,
        state: Vec<f64>,
        actions: Vec<usize>,
        log_prob: f64,
        value: f64,
        reward: f64,
        done: bool,
    ) {
        self.states.push(state);
        self.actions.push(actions);
        self.log_probs.push(log_prob);
        self.values.push(value);
        self.rewards.push(reward);
        self.dones.push(done);
    }

    pub fn len(&self) -> usize {
        self.rewards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rewards.is_empty()
    }

    pub fn clear(&mut self) {
        self.states.clear();
        self.actions.clear();
        self.log_probs.clear();
        self.values.clear();
        self.rewards.clear();
        self.dones.clear();
        self.advantages.clear();
        self.returns.clear();
    }

    /// Fills `advantages` (GAE) and `returns` (advantage + value).
    ///
    /// `bootstrap_value` is the critic's estimate for the state following
    /// the final transition; it is masked out when that transition ended
    /// its episode, as are all value/advantage flows across `done`
    /// boundaries inside the buffer.
    pub fn compute_gae(&mut self, gamma: f64, lambda: f64, bootstrap_value: f64) {
        let n = self.len();
        self.advantages = vec![0.0; n];
        self.returns = vec![0.0; n];
        let mut gae = 0.0;
        for t in (0..n).rev() {
            let nonterminal = if self.dones[t] { 0.0 } else { 1.0 };
            let next_value = if t + 1 == n {
                bootstrap_value
            } else {
                self.values[t + 1]
            };
            let delta = self.rewards[t] + gamma * next_value * nonterminal - self.values[t];
            gae = delta + gamma * lambda * nonterminal * gae;
            self.advantages[t] = gae;
            self.returns[t] = gae + self.values[t];
        }
    }

    /// Shifts and scales `advantages` to zero mean and unit variance.
    pub fn normalize_advantages(&mut self) {
        let n = self.advantages.len();
        if n == 0 {
            return;
        }
        let mean = self.advantages.iter().sum::<f64>() / n as f64;
        let var = self
            .advantages
            .iter()
            .map(|a| (a - mean) * (a - mean))
            .sum::<f64>()
            / n as f64;
        let std = var.sqrt() + 1e-8;
        for a in self.advantages.iter_mut() {
            *a = (*a - mean) / std;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn filled(rewards: &[f64], values: &[f64], dones: &[bool]) -> RolloutBuffer {
        let mut b = RolloutBuffer::default();
        for i in 0..rewards.len() {
            b.push(vec![], vec![], 0.0, values[i], rewards[i], dones[i]);
        }
        b
    }

    /// Direct evaluation of the advantage series: the discounted sum of
    /// one-step TD errors, truncated at the episode boundary.
    fn gae_oracle(
        rewards: &[f64],
        values: &[f64],
        dones: &[bool],
        gamma: f64,
        lambda: f64,
        bootstrap: f64,
    ) -> Vec<f64> {
        let n = rewards.len();
        let mut adv = vec![0.0; n];
        for t in 0..n {
            let mut acc = 0.0;
            let mut coeff = 1.0;
            for l in t..n {
                let next = if dones[l] {
                    0.0
                } else if l + 1 == n {
                    bootstrap
                } else {
                    values[l + 1]
                };
                acc += coeff * (rewards[l] + gamma * next - values[l]);
                if dones[l] {
                    break;
                }
                coeff *= gamma * lambda;
            }
            adv[t] = acc;
        }
        adv
    }

    #[test]
    fn single_step_episode_is_plain_td_error() {
        let mut b = filled(&[2.0], &[0.5], &[true]);
        b.compute_gae(0.99, 0.95, 123.0); // bootstrap must be ignored
        assert!((b.advantages[0] - (2.0 - 0.5)).abs() < 1e-12);
        assert!((b.returns[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bootstrap_feeds_the_unfinished_tail() {
        let mut b = filled(&[1.0], &[0.5], &[false]);
        b.compute_gae(0.9, 0.8, 2.0);
        // delta = 1 + 0.9*2 - 0.5 = 2.3
        assert!((b.advantages[0] - 2.3).abs() < 1e-12);
        assert!((b.returns[0] - 2.8).abs() < 1e-12);
    }

    #[test]
    fn hand_computed_two_episode_buffer() {
        // Episode A: two steps, ends at t=1. Episode B: one open step.
        let gamma = 0.5;
        let lambda = 0.5;
        let mut b = filled(
            &[1.0, 2.0, 3.0],
            &[0.25, 0.5, 0.75],
            &[false, true, false],
        );
        b.compute_gae(gamma, lambda, 4.0);
        // t=2: delta = 3 + 0.5*4 - 0.75 = 4.25.
        // t=1: delta = 2 - 0.5 = 1.5 (terminal), gae = 1.5.
        // t=0: delta = 1 + 0.5*0.5 - 0.25 = 1.0; gae = 1 + 0.25*1.5 = 1.375.
        assert!((b.advantages[2] - 4.25).abs() < 1e-12);
        assert!((b.advantages[1] - 1.5).abs() < 1e-12);
        assert!((b.advantages[0] - 1.375).abs() < 1e-12);
    }

    #[test]
    fn recursive_form_matches_direct_summation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let n = rng.random_range(1..40);
            let rewards: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let values: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let dones: Vec<bool> = (0..n).map(|_| rng.random_range(0..4) == 0).collect();
            let bootstrap = rng.random_range(-5.0..5.0);
            let mut b = filled(&rewards, &values, &dones);
            b.compute_gae(0.99, 0.95, bootstrap);
            let oracle = gae_oracle(&rewards, &values, &dones, 0.99, 0.95, bootstrap);
            for (a, o) in b.advantages.iter().zip(&oracle) {
                assert!((a - o).abs() < 1e-10, "{a} vs {o}");
            }
            for i in 0..n {
                assert!((b.returns[i] - (b.advantages[i] + values[i])).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn normalization_centers_and_scales() {
        let mut b = filled(
            &[1.0, 2.0, 3.0, 4.0],
            &[0.0; 4],
            &[false, false, false, true],
        );
        b.compute_gae(0.99, 0.95, 0.0);
        b.normalize_advantages();
        let mean: f64 = b.advantages.iter().sum::<f64>() / 4.0;
        let var: f64 = b.advantages.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / 4.0;
        assert!(mean.abs() < 1e-12);
        assert!((var - 1.0).abs() < 1e-6);
    }

    #[test]
    fn clear_resets_every_column() {
        let mut b = filled(&[1.0, 2.0], &[0.1, 0.2], &[false, true]);
        b.compute_gae(0.99, 0.95, 0.0);
        b.clear();
        assert!(b.is_empty());
        assert_eq!(b.len(), 0);
        assert!(b.advantages.is_empty() && b.returns.is_empty());
        assert!(b.states.is_empty() && b.actions.is_empty());
    }
}
