//! Brute-force stuck-at testing for narrow circuits.
//!
//! Simulates the good and faulty circuits over every input vector, 64
//! vectors per machine word, and reports the first vector (in ascending
//! binary order, first primary input as the most significant bit) whose
//! primary outputs differ.

use crate::circuit::{eval_packed, Assignment, Circuit};

use super::{AtpgError, Fault, TestOutcome, TestResult};

/// Largest primary-input count accepted; past this, `2^n` enumeration is no
/// longer a practical oracle.
pub const MAX_EXHAUSTIVE_INPUTS: usize = 24;

/// Bit patterns for input index bits 0..5 within a 64-lane block: lane `l`
/// of pattern `p` holds bit `p` of `l`.
const LANE_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Tests `fault` by exhaustive bit-parallel enumeration. The result is
/// never `Aborted`; a detection carries the full assignment of the first
/// differing vector.
pub fn exhaustive_test(c: &Circuit, fault: Fault) -> Result<TestResult, AtpgError> {
    if fault.net.index() >= c.net_count() {
        return Err(AtpgError::InvalidNet {
            net: fault.net,
            circuit: c.name().to_owned(),
        });
    }
    let n = c.primary_inputs().len();
    if n > MAX_EXHAUSTIVE_INPUTS {
        return Err(AtpgError::TooManyInputs {
            count: n,
            max: MAX_EXHAUSTIVE_INPUTS,
        });
    }

    let total: u64 = 1u64 << n;
    let lanes_per_block = total.min(64);
    let lane_mask: u64 = if lanes_per_block == 64 {
        !0
    } else {
        (1u64 << lanes_per_block) - 1
    };
    let blocks = total.div_ceil(64);
    let mut words = vec![0u64; n];

    for block in 0..blocks {
        // Vector index v = block * 64 + lane; primary input i carries bit
        // n-1-i of v.
        for (i, w) in words.iter_mut().enumerate() {
            let bit = n - 1 - i;
            *w = if bit < 6 {
                LANE_PATTERNS[bit]
            } else if block >> (bit - 6) & 1 == 1 {
                !0
            } else {
                0
            };
        }
        let good = eval_packed(c, &words, None);
        let faulty = eval_packed(c, &words, Some((fault.net, fault.stuck)));
        let mut diff = 0u64;
        for &po in c.primary_outputs() {
            diff |= good[po.index()] ^ faulty[po.index()];
        }
        diff &= lane_mask;
        if diff != 0 {
            let lane = diff.trailing_zeros() as u64;
            let v = block * 64 + lane;
            let input_stack: Assignment = c
                .primary_inputs()
                .iter()
                .enumerate()
                .map(|(i, &pi)| (pi, v >> (n - 1 - i) & 1 == 1))
                .collect();
            return Ok(TestResult {
                outcome: TestOutcome::Detected,
                input_stack,
                backtracks: 0,
            });
        }
    }

    Ok(TestResult {
        outcome: TestOutcome::Untestable,
        input_stack: Assignment::new(),
        backtracks: 0,
    })
}
