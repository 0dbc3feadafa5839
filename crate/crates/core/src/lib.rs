//! Toolchain for inserting hard-to-activate combinational hardware Trojans
//! into gate-level benchmark netlists.
//!
//! The pipeline: parse a netlist ([`circuit`]), compute testability metrics
//! ([`scoap`]) to find rarely-switching nets, insert a trigger/payload pair
//! ([`trojan`]), and train a PPO agent ([`ppo`]) that steers the trigger taps
//! through the circuit's level structure ([`rl_env`]) so that the cheapest
//! activating test — found by a PODEM engine ([`atpg`]) — constrains as many
//! primary inputs as possible. [`harness`] wires the stages into seeded,
//! reproducible experiments.

pub mod atpg;
pub mod circuit;
pub mod harness;
pub mod ppo;
pub mod rl_env;
pub mod scoap;
#[cfg(test)]
pub(crate) mod testutil;
pub mod trojan;
