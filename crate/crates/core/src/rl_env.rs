//! Gym-style environment over Trojan trigger placement.
//!
//! An episode freezes one payload target (drawn by [`trojan::random_insert`])
//! and lets the agent move each trigger tap through the circuit's level
//! structure. The observation is the vector of instance-terminal levels
//! `[trigger_1 .. trigger_n, target, payload]`; per trigger the agent picks
//! one of five moves. After each step the Trojan is re-inserted and scored:
//!
//! * `-1` if no trigger net is in the suspicious (rare-net) set;
//! * `20 * |input_stack| / |primary inputs|` if PODEM finds an activating
//!   test — tying the reward directly to input-constraint coverage;
//! * `0` otherwise (suspicious but not provably activatable in budget).
//!
//! Every newly discovered activatable Trojan is appended to a structured
//! log, deduplicated by (trigger set, target).

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atpg::{AtpgError, TestResult};
use crate::circuit::{Circuit, FaninClosure, NetId};
use crate::scoap::{compute_scoap, SuspiciousSet};
use crate::trojan::{
    insert_with_closure, random_insert, InsertError, TrojanConfig, TrojanInstance,
};

/// Per-trigger moves. Level moves pick uniformly among the nets one level
/// up/down that keep the placement rules satisfiable; same-level moves step
/// deterministically to the id-wise successor/predecessor. A move with no
/// legal candidate degrades to `NoAction`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TriggerAction {
    NextLevel,
    PrevLevel,
    SameLevelUp,
    SameLevelDown,
    NoAction,
}

impl TriggerAction {
    pub const COUNT: usize = 5;
    pub const ALL: [TriggerAction; 5] = [
        TriggerAction::NextLevel,
        TriggerAction::PrevLevel,
        TriggerAction::SameLevelUp,
        TriggerAction::SameLevelDown,
        TriggerAction::NoAction,
    ];

    pub fn from_index(i: usize) -> TriggerAction {
        Self::ALL[i]
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&a| a == self).unwrap()
    }
}

/// Observation: levels (in the infected circuit) of the trigger nets in
/// slot order, then the target net, then the payload net.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvState(pub Vec<u32>);

/// Extra information reported with each step.
#[derive(Debug, Clone)]
pub struct StepInfo {
    /// Whether PODEM found an activating test for this configuration.
    pub activated: bool,
    /// Input-constraint percentage of that test, when activated.
    pub icp: Option<f64>,
    pub instance: TrojanInstance,
}

#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub state: EnvState,
    pub reward: f64,
    pub done: bool,
    pub info: StepInfo,
}

/// One discovered Trojan, as written to the JSONL log. Triggers are listed
/// in ascending net-id order; `input_stack` maps input names to 0/1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrojanLogRecord {
    pub circuit: String,
    pub seed: u64,
    pub episode: u64,
    pub step: u32,
    pub triggers: Vec<String>,
    pub target: String,
    pub icp: f64,
    pub input_stack: BTreeMap<String, u8>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvConfig {
    pub trojan: TrojanConfig,
    pub steps_per_episode: u32,
    pub seed: u64,
    pub podem_backtrack_limit: u32,
}

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("expected {expected} actions (one per trigger), got {got}")]
    ActionArity { expected: usize, got: usize },
    #[error(transparent)]
    Placement(#[from] InsertError),
    #[error(transparent)]
    Atpg(#[from] AtpgError),
}

/// Episode length scaled for trigger count: `round(base * (1+growth)^(n-2))`.
/// The same growth law applies to training timesteps.
pub fn scaled_steps(base: u64, growth: f64, n_triggers: usize) -> u64 {
    (base as f64 * (1.0 + growth).powi(n_triggers as i32 - 2)).round() as u64
}

pub struct TrojanEnv {
    base: Circuit,
    closure: FaninClosure,
    by_level: Vec<Vec<NetId>>,
    suspicious: SuspiciousSet,
    config: EnvConfig,
    rng: ChaCha8Rng,
    // Current placement.
    triggers: Vec<NetId>,
    target: NetId,
    infected: Circuit,
    instance: TrojanInstance,
    episode: u64,
    step_in_episode: u32,
    log: Vec<TrojanLogRecord>,
    seen: HashSet<(Vec<NetId>, NetId)>,
    activation_cache: HashMap<(Vec<NetId>, NetId), TestResult>,
}

impl TrojanEnv {
    /// Builds the environment and draws the first placement.
    pub fn new(
        base: Circuit,
        suspicious: SuspiciousSet,
        config: EnvConfig,
    ) -> Result<TrojanEnv, EnvError> {
        let closure = FaninClosure::build(&base);
        let by_level = base.nets_by_level();
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let (infected, instance) = random_insert(&base, config.trojan, &mut rng)?;
        Ok(TrojanEnv {
            triggers: instance.trigger_nets.clone(),
            target: instance.target_net,
            base,
            closure,
            by_level,
            suspicious,
            config,
            rng,
            infected,
            instance,
            episode: 0,
            step_in_episode: 0,
            log: Vec::new(),
            seen: HashSet::new(),
            activation_cache: HashMap::new(),
        })
    }

    pub fn base(&self) -> &Circuit {
        &self.base
    }

    pub fn infected(&self) -> &Circuit {
        &self.infected
    }

    pub fn instance(&self) -> &TrojanInstance {
        &self.instance
    }

    pub fn config(&self) -> &EnvConfig {
        &self.config
    }

    pub fn n_triggers(&self) -> usize {
        self.config.trojan.n_triggers
    }

    pub fn episode(&self) -> u64 {
        self.episode
    }

    /// Discovered-Trojan log, in discovery order.
    pub fn log(&self) -> &[TrojanLogRecord] {
        &self.log
    }

    pub fn take_log(&mut self) -> Vec<TrojanLogRecord> {
        std::mem::take(&mut self.log)
    }

    /// Observation for the current placement.
    pub fn state(&self) -> EnvState {
        let mut v: Vec<u32> = self
            .triggers
            .iter()
            .map(|&t| self.infected.level(t))
            .collect();
        v.push(self.infected.level(self.target));
        v.push(self.infected.level(self.instance.payload_net));
        EnvState(v)
    }

    /// Starts a new episode: fresh random placement, step counter reset.
    pub fn reset(&mut self) -> Result<EnvState, EnvError> {
        self.episode += 1;
        self.step_in_episode = 0;
        let (infected, instance) = random_insert(&self.base, self.config.trojan, &mut self.rng)?;
        self.triggers = instance.trigger_nets.clone();
        self.target = instance.target_net;
        self.infected = infected;
        self.instance = instance;
        Ok(self.state())
    }

    /// Pins an explicit placement (validated against the rules) without
    /// advancing the episode counter. Useful for scripted evaluation.
    pub fn set_placement(
        &mut self,
        triggers: &[NetId],
        target: NetId,
    ) -> Result<EnvState, EnvError> {
        let (infected, instance) =
            insert_with_closure(&self.base, &self.closure, triggers, target)?;
        self.triggers = triggers.to_vec();
        self.target = target;
        self.infected = infected;
        self.instance = instance;
        Ok(self.state())
    }

    /// Whether a net may become trigger `slot`'s new tap, given the other
    /// triggers and the frozen target.
    fn placeable(&self, slot: usize, candidate: NetId) -> bool {
        if candidate == self.target
            || self.base.level(candidate) >= self.base.level(self.target)
        {
            return false;
        }
        self.triggers.iter().enumerate().all(|(j, &other)| {
            j == slot
                || (candidate != other
                    && !self.closure.in_fanin_cone(candidate, other)
                    && !self.closure.in_fanin_cone(other, candidate))
        })
    }

    /// Applies one trigger's move and returns the (possibly unchanged) net
    /// now tapped by that slot. Level moves draw uniformly from the legal
    /// candidates; if none exist the move becomes a no-op.
    pub fn apply_trigger_action(&mut self, input_index: usize, action: TriggerAction) -> NetId {
        let cur = self.triggers[input_index];
        let level = self.base.level(cur) as i64;
        let chosen = match action {
            TriggerAction::NoAction => cur,
            TriggerAction::NextLevel | TriggerAction::PrevLevel => {
                let dst = if action == TriggerAction::NextLevel {
                    level + 1
                } else {
                    level - 1
                };
                if dst < 0 || dst > self.base.max_level() as i64 {
                    cur
                } else {
                    let candidates: Vec<NetId> = self.by_level[dst as usize]
                        .iter()
                        .copied()
                        .filter(|&n| self.placeable(input_index, n))
                        .collect();
                    if candidates.is_empty() {
                        cur
                    } else {
                        candidates[self.rng.random_range(0..candidates.len())]
                    }
                }
            }
            TriggerAction::SameLevelUp | TriggerAction::SameLevelDown => {
                let peers = &self.by_level[level as usize];
                let neighbor = if action == TriggerAction::SameLevelUp {
                    peers.iter().copied().find(|&n| n > cur)
                } else {
                    peers.iter().copied().rev().find(|&n| n < cur)
                };
                match neighbor {
                    Some(n) if self.placeable(input_index, n) => n,
                    _ => cur,
                }
            }
        };
        self.triggers[input_index] = chosen;
        chosen
    }

    /// Applies all trigger moves, re-inserts the Trojan, and scores the new
    /// configuration.
    pub fn step(&mut self, actions: &[TriggerAction]) -> Result<StepOutcome, EnvError> {
        let n = self.n_triggers();
        if actions.len() != n {
            return Err(EnvError::ActionArity {
                expected: n,
                got: actions.len(),
            });
        }
        for (i, &a) in actions.iter().enumerate() {
            self.apply_trigger_action(i, a);
        }
        let (infected, instance) =
            insert_with_closure(&self.base, &self.closure, &self.triggers, self.target)?;
        self.infected = infected;
        self.instance = instance;
        self.step_in_episode += 1;

        let mut reward = -1.0;
        let mut activated = false;
        let mut cov = None;
        if self.triggers.iter().any(|&t| self.suspicious.contains(t)) {
            let mut key: Vec<NetId> = self.triggers.clone();
            key.sort();
            let key = (key, self.target);
            let result = match self.activation_cache.get(&key) {
                Some(r) => r.clone(),
                None => {
                    let table = compute_scoap(&self.infected);
                    let r = crate::trojan::check_activation(
                        &self.infected,
                        &self.instance,
                        &table,
                        self.config.podem_backtrack_limit,
                    )?;
                    self.activation_cache.insert(key.clone(), r.clone());
                    r
                }
            };
            if result.detected() {
                let c = crate::trojan::icp(&result, &self.infected)
                    .expect("detected result always has coverage");
                activated = true;
                cov = Some(c);
                reward = 20.0 * c;
                if self.seen.insert(key) {
                    self.log.push(self.record(&result, c));
                }
            } else {
                reward = 0.0;
            }
        }

        let done = self.step_in_episode >= self.config.steps_per_episode;
        Ok(StepOutcome {
            state: self.state(),
            reward,
            done,
            info: StepInfo {
                activated,
                icp: cov,
                instance: self.instance.clone(),
            },
        })
    }

    fn record(&self, result: &TestResult, cov: f64) -> TrojanLogRecord {
        let mut trigger_ids = self.triggers.clone();
        trigger_ids.sort();
        TrojanLogRecord {
            circuit: self.base.name().to_owned(),
            seed: self.config.seed,
            episode: self.episode,
            step: self.step_in_episode,
            triggers: trigger_ids
                .iter()
                .map(|&t| self.base.net(t).name.clone())
                .collect(),
            target: self.base.net(self.target).name.clone(),
            icp: cov,
            input_stack: result
                .input_stack
                .iter()
                .map(|(&pi, &v)| (self.infected.net(pi).name.clone(), v as u8))
                .collect(),
        }
    }
}
