//! Combinational hardware-Trojan insertion and activation checking.
//!
//! A Trojan instance is an n-input AND *trigger* over existing nets plus a
//! 2-input XOR *payload* that re-drives the fanout of a chosen target net:
//! while the trigger output is 0 the XOR passes the target through and the
//! circuit behaves identically; when every trigger net is 1 the payload
//! inverts the target. Placement obeys four rules:
//!
//! 1. triggers are drawn from the whole netlist (randomly at reset);
//! 2. triggers are mutually independent — none lies in the transitive
//!    fanin or fanout cone of another;
//! 3. the target is not a trigger;
//! 4. the target's level strictly exceeds every trigger's level, which also
//!    rules out combinational cycles through the new gates.
//!
//! Activation is posed as a test-generation question: the Trojan can fire
//! and be seen iff PODEM detects a stuck-at-0 fault on the trigger AND
//! output.

use rand::Rng;
use thiserror::Error;

use crate::atpg::{podem_guided, Fault, TestResult};
use crate::circuit::{BuildError, Circuit, FaninClosure, GateId, GateKind, NetId};
use crate::scoap::ScoapTable;

/// Placement parameters for randomly drawn instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrojanConfig {
    /// Number of trigger inputs (at least 2).
    pub n_triggers: usize,
}

/// Handle to an inserted Trojan: the chosen nets plus the ids of the two
/// gates and two nets the insertion appended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrojanInstance {
    pub trigger_nets: Vec<NetId>,
    pub target_net: NetId,
    pub and_gate: GateId,
    pub xor_gate: GateId,
    /// Output net of the trigger AND.
    pub trigger_and_net: NetId,
    /// Output net of the payload XOR, re-driving the target's old fanout.
    pub payload_net: NetId,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InsertError {
    #[error("need at least 2 trigger nets, got {got}")]
    TooFewTriggers { got: usize },
    #[error("net {0} does not exist")]
    UnknownNet(NetId),
    #[error("trigger net {0} listed twice")]
    DuplicateTrigger(NetId),
    #[error("target net {0} is also a trigger")]
    TargetIsTrigger(NetId),
    #[error(
        "trigger {trigger} at level {trigger_level} does not precede target {target} at level {target_level}"
    )]
    LevelOrder {
        trigger: NetId,
        trigger_level: u32,
        target: NetId,
        target_level: u32,
    },
    #[error("triggers {a} and {b} are connected through a fanin/fanout path")]
    DependentTriggers { a: NetId, b: NetId },
    #[error("no rule-satisfying placement found after {attempts} attempts")]
    NoFeasiblePlacement { attempts: u32 },
    #[error(transparent)]
    Build(#[from] BuildError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RemoveError {
    #[error("instance does not match this circuit: {0}")]
    StaleInstance(String),
    #[error(transparent)]
    Build(#[from] BuildError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IcpError {
    #[error("test did not detect the activation fault; coverage is undefined")]
    NotDetected,
}

fn fresh_name(c: &Circuit, base: &str) -> String {
    if c.net_id(base).is_none() {
        return base.to_owned();
    }
    let mut k = 2;
    loop {
        let candidate = format!("{base}_{k}");
        if c.net_id(&candidate).is_none() {
            return candidate;
        }
        k += 1;
    }
}

/// Validates placement rules 2–4 for an explicit choice of nets.
fn validate(
    c: &Circuit,
    closure: &FaninClosure,
    triggers: &[NetId],
    target: NetId,
) -> Result<(), InsertError> {
    if triggers.len() < 2 {
        return Err(InsertError::TooFewTriggers {
            got: triggers.len(),
        });
    }
    for &t in triggers.iter().chain([&target]) {
        if t.index() >= c.net_count() {
            return Err(InsertError::UnknownNet(t));
        }
    }
    for (i, &a) in triggers.iter().enumerate() {
        if triggers[..i].contains(&a) {
            return Err(InsertError::DuplicateTrigger(a));
        }
        if a == target {
            return Err(InsertError::TargetIsTrigger(a));
        }
        if c.level(a) >= c.level(target) {
            return Err(InsertError::LevelOrder {
                trigger: a,
                trigger_level: c.level(a),
                target,
                target_level: c.level(target),
            });
        }
        for &b in &triggers[..i] {
            if closure.in_fanin_cone(a, b) || closure.in_fanin_cone(b, a) {
                return Err(InsertError::DependentTriggers { a: b, b: a });
            }
        }
    }
    Ok(())
}

/// Inserts a Trojan with the given trigger nets and target net, returning
/// the modified circuit (original ids preserved, two nets and two gates
/// appended) and the instance handle.
pub fn insert(
    c: &Circuit,
    triggers: &[NetId],
    target: NetId,
) -> Result<(Circuit, TrojanInstance), InsertError> {
    let closure = FaninClosure::build(c);
    insert_with_closure(c, &closure, triggers, target)
}

/// [`insert`] with a caller-provided fanin closure of `c`, so repeated
/// insertions into the same base circuit skip the reachability rebuild.
pub(crate) fn insert_with_closure(
    c: &Circuit,
    closure: &FaninClosure,
    triggers: &[NetId],
    target: NetId,
) -> Result<(Circuit, TrojanInstance), InsertError> {
    validate(c, closure, triggers, target)?;

    let and_name = fresh_name(c, "ht_trigger_and");
    let payload_name = fresh_name(c, "ht_payload");
    let and_net = NetId(c.net_count() as u32);
    let payload_net = NetId(c.net_count() as u32 + 1);

    let mut net_names: Vec<String> = c.nets().iter().map(|n| n.name.clone()).collect();
    net_names.push(and_name);
    net_names.push(payload_name);

    // Original gates with the target's fanout redirected to the payload.
    let mut gates: Vec<(GateKind, Vec<NetId>, NetId)> = c
        .gates()
        .iter()
        .map(|g| {
            let ins = g
                .inputs
                .iter()
                .map(|&i| if i == target { payload_net } else { i })
                .collect();
            (g.kind, ins, g.output)
        })
        .collect();
    let and_gate = GateId(gates.len() as u32);
    gates.push((GateKind::And, triggers.to_vec(), and_net));
    let xor_gate = GateId(gates.len() as u32);
    gates.push((GateKind::Xor, vec![target, and_net], payload_net));

    let pos = c
        .primary_outputs()
        .iter()
        .map(|&po| if po == target { payload_net } else { po })
        .collect();

    let infected = Circuit::assemble(
        c.name().to_owned(),
        net_names,
        gates,
        c.primary_inputs().to_vec(),
        pos,
    )?;
    Ok((
        infected,
        TrojanInstance {
            trigger_nets: triggers.to_vec(),
            target_net: target,
            and_gate,
            xor_gate,
            trigger_and_net: and_net,
            payload_net,
        },
    ))
}

/// Undoes [`insert`]: drops the instance's two gates and nets and restores
/// the target's original fanout. The instance must describe the last
/// insertion performed on `c`.
pub fn remove(c: &Circuit, inst: &TrojanInstance) -> Result<Circuit, RemoveError> {
    let stale = |why: &str| RemoveError::StaleInstance(why.to_owned());
    let n = c.net_count();
    let g = c.gate_count();
    if inst.and_gate.index() + 2 != g || inst.xor_gate.index() + 1 != g {
        return Err(stale("trigger/payload gates are not the last two gates"));
    }
    if inst.trigger_and_net.index() + 2 != n || inst.payload_net.index() + 1 != n {
        return Err(stale("trigger/payload nets are not the last two nets"));
    }
    let and = c.gate(inst.and_gate);
    if and.kind != GateKind::And
        || and.inputs != inst.trigger_nets
        || and.output != inst.trigger_and_net
    {
        return Err(stale("trigger AND gate does not match the instance"));
    }
    let xor = c.gate(inst.xor_gate);
    if xor.kind != GateKind::Xor
        || xor.inputs != [inst.target_net, inst.trigger_and_net]
        || xor.output != inst.payload_net
    {
        return Err(stale("payload XOR gate does not match the instance"));
    }

    let net_names: Vec<String> = c.nets()[..n - 2].iter().map(|nn| nn.name.clone()).collect();
    let gates: Vec<(GateKind, Vec<NetId>, NetId)> = c.gates()[..g - 2]
        .iter()
        .map(|gg| {
            let ins = gg
                .inputs
                .iter()
                .map(|&i| {
                    if i == inst.payload_net {
                        inst.target_net
                    } else {
                        i
                    }
                })
                .collect();
            (gg.kind, ins, gg.output)
        })
        .collect();
    let pos = c
        .primary_outputs()
        .iter()
        .map(|&po| {
            if po == inst.payload_net {
                inst.target_net
            } else {
                po
            }
        })
        .collect();
    Ok(Circuit::assemble(
        c.name().to_owned(),
        net_names,
        gates,
        c.primary_inputs().to_vec(),
        pos,
    )?)
}

/// How many trigger redraws [`random_insert`] makes before giving up.
pub const PLACEMENT_ATTEMPTS: u32 = 1000;

/// Draws a rule-satisfying placement uniformly: trigger nets from the whole
/// netlist (rejecting dependent sets), then a target above them that is
/// outside all trigger fanout cones.
pub fn random_insert<R: Rng>(
    c: &Circuit,
    config: TrojanConfig,
    rng: &mut R,
) -> Result<(Circuit, TrojanInstance), InsertError> {
    if config.n_triggers < 2 {
        return Err(InsertError::TooFewTriggers {
            got: config.n_triggers,
        });
    }
    if config.n_triggers >= c.net_count() {
        return Err(InsertError::NoFeasiblePlacement { attempts: 0 });
    }
    let closure = FaninClosure::build(c);

    for _ in 0..PLACEMENT_ATTEMPTS {
        let triggers: Vec<NetId> = rand::seq::index::sample(rng, c.net_count(), config.n_triggers)
            .iter()
            .map(|i| NetId(i as u32))
            .collect();
        let independent = triggers.iter().enumerate().all(|(i, &a)| {
            triggers[..i]
                .iter()
                .all(|&b| !closure.in_fanin_cone(a, b) && !closure.in_fanin_cone(b, a))
        });
        if !independent {
            continue;
        }
        let max_level = triggers.iter().map(|&t| c.level(t)).max().unwrap();
        let eligible: Vec<NetId> = c
            .nets()
            .iter()
            .map(|nn| nn.id)
            .filter(|&t| {
                c.level(t) > max_level
                    && !triggers.contains(&t)
                    && triggers.iter().all(|&tr| !closure.in_fanin_cone(tr, t))
            })
            .collect();
        if eligible.is_empty() {
            continue;
        }
        let target = eligible[rng.random_range(0..eligible.len())];
        return insert_with_closure(c, &closure, &triggers, target);
    }
    Err(InsertError::NoFeasiblePlacement {
        attempts: PLACEMENT_ATTEMPTS,
    })
}

/// Poses Trojan activation as test generation: PODEM searches for inputs
/// that raise the trigger AND output (stuck-at-0 excitation) and make the
/// payload flip visible at a primary output. `table` must be the SCOAP
/// table of the *infected* circuit.
pub fn check_activation(
    c_infected: &Circuit,
    inst: &TrojanInstance,
    table: &ScoapTable,
    backtrack_limit: u32,
) -> Result<TestResult, crate::atpg::AtpgError> {
    podem_guided(
        c_infected,
        Fault::stuck_at_0(inst.trigger_and_net),
        backtrack_limit,
        table,
    )
}

/// Input-constraint percentage of an activating test: the fraction of
/// primary inputs the test pins to specific values. Higher means the
/// trigger is harder to reach by accident.
pub fn icp(result: &TestResult, c: &Circuit) -> Result<f64, IcpError> {
    if !result.detected() {
        return Err(IcpError::NotDetected);
    }
    Ok(result.input_stack.len() as f64 / c.primary_inputs().len() as f64)
}
