//! Stuck-at-fault test generation.
//!
//! [`podem`] implements the PODEM branch-and-bound algorithm over the
//! five-valued logic of [`logic`], guided by SCOAP costs; [`exhaustive_test`]
//! is a brute-force oracle for small circuits based on bit-parallel
//! simulation. Both report the same three-way outcome: a detecting test was
//! found, the fault is provably untestable, or the search budget ran out.

mod exhaustive;
mod logic;
mod podem;

pub use exhaustive::exhaustive_test;
pub use logic::Value5;
pub use podem::{podem, podem_guided};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{eval_packed, Assignment, Circuit, NetId};

/// A single stuck-at fault: the net is permanently stuck at `stuck`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fault {
    pub net: NetId,
    pub stuck: bool,
}

impl Fault {
    pub fn stuck_at_0(net: NetId) -> Fault {
        Fault { net, stuck: false }
    }

    pub fn stuck_at_1(net: NetId) -> Fault {
        Fault { net, stuck: true }
    }
}

/// Three-way outcome of a test-generation attempt. `Untestable` is a proof
/// of redundancy; `Aborted` only means the backtrack budget was exhausted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TestOutcome {
    Detected,
    Untestable,
    Aborted,
}

/// Result of one test-generation attempt. For `Detected`, `input_stack`
/// holds the decided primary-input values — a partial assignment; inputs it
/// leaves out are don't-cares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestResult {
    pub outcome: TestOutcome,
    pub input_stack: Assignment,
    pub backtracks: u32,
}

impl TestResult {
    pub fn detected(&self) -> bool {
        matches!(self.outcome, TestOutcome::Detected)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AtpgError {
    #[error("fault net {net} does not exist in circuit {circuit:?}")]
    InvalidNet { net: NetId, circuit: String },
    #[error("{count} primary inputs exceed the exhaustive limit of {max}")]
    TooManyInputs { count: usize, max: usize },
}

/// Checks whether `stack` (don't-cares completed with 0) distinguishes the
/// faulty circuit from the good one at some primary output.
pub fn replay_detects(c: &Circuit, fault: Fault, stack: &Assignment) -> bool {
    let words: Vec<u64> = c
        .primary_inputs()
        .iter()
        .map(|pi| if stack.get(pi).copied().unwrap_or(false) { 1u64 } else { 0 })
        .collect();
    let good = eval_packed(c, &words, None);
    let faulty = eval_packed(c, &words, Some((fault.net, fault.stuck)));
    c.primary_outputs()
        .iter()
        .any(|po| (good[po.index()] ^ faulty[po.index()]) & 1 == 1)
}
