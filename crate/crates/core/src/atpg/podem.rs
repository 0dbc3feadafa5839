//! PODEM test generation.
//!
//! The search assigns one primary input per iteration: derive an objective
//! (excite the fault, then advance the D-frontier), backtrace it through
//! unknown-valued nets to a primary input, simulate, and branch-and-bound
//! over input flips on conflicts. SCOAP controllabilities pick which input
//! to backtrace through (hardest first when every input must cooperate,
//! easiest when one suffices) and observabilities pick the D-frontier gate
//! closest to an output; every choice breaks ties deterministically.

use crate::circuit::{Assignment, Circuit, GateKind, NetDriver, NetId};
use crate::scoap::{compute_scoap, ScoapTable};

use super::logic::{eval5, Value5};
use super::{AtpgError, Fault, TestOutcome, TestResult};

/// Runs PODEM with SCOAP guidance computed internally from `c`.
pub fn podem(c: &Circuit, fault: Fault, backtrack_limit: u32) -> Result<TestResult, AtpgError> {
    let table = compute_scoap(c);
    podem_guided(c, fault, backtrack_limit, &table)
}

/// Runs PODEM using a caller-supplied SCOAP table (which must describe
/// exactly this circuit). Returns `Detected` with the decided inputs,
/// `Untestable` when the whole decision tree is exhausted, or `Aborted`
/// after more than `backtrack_limit` backtracks.
pub fn podem_guided(
    c: &Circuit,
    fault: Fault,
    backtrack_limit: u32,
    table: &ScoapTable,
) -> Result<TestResult, AtpgError> {
    if fault.net.index() >= c.net_count() {
        return Err(AtpgError::InvalidNet {
            net: fault.net,
            circuit: c.name().to_owned(),
        });
    }
    assert_eq!(
        table.len(),
        c.net_count(),
        "SCOAP table does not match circuit"
    );

    struct Decision {
        pi: NetId,
        value: bool,
        flipped: bool,
    }
    let mut decisions: Vec<Decision> = Vec::new();
    let mut assignment: Vec<Option<bool>> = vec![None; c.net_count()];
    let mut values: Vec<Value5> = vec![Value5::X; c.net_count()];
    let mut backtracks: u32 = 0;

    loop {
        simulate5(c, fault, &assignment, &mut values);

        if c
            .primary_outputs()
            .iter()
            .any(|po| values[po.index()].is_fault_effect())
        {
            let input_stack: Assignment =
                decisions.iter().map(|d| (d.pi, d.value)).collect();
            return Ok(TestResult {
                outcome: TestOutcome::Detected,
                input_stack,
                backtracks,
            });
        }

        let objective = next_objective(c, fault, &values, table);
        match objective {
            Some((net, target)) => {
                let (pi, value) = backtrace(c, &values, table, net, target);
                assignment[pi.index()] = Some(value);
                decisions.push(Decision {
                    pi,
                    value,
                    flipped: false,
                });
            }
            None => {
                // Conflict: undo flipped decisions, flip the most recent
                // unflipped one.
                loop {
                    match decisions.pop() {
                        Some(d) if !d.flipped => {
                            backtracks += 1;
                            if backtracks > backtrack_limit {
                                return Ok(TestResult {
                                    outcome: TestOutcome::Aborted,
                                    input_stack: Assignment::new(),
                                    backtracks,
                                });
                            }
                            assignment[d.pi.index()] = Some(!d.value);
                            decisions.push(Decision {
                                pi: d.pi,
                                value: !d.value,
                                flipped: true,
                            });
                            break;
                        }
                        Some(d) => {
                            assignment[d.pi.index()] = None;
                        }
                        None => {
                            return Ok(TestResult {
                                outcome: TestOutcome::Untestable,
                                input_stack: Assignment::new(),
                                backtracks,
                            });
                        }
                    }
                }
            }
        }
    }
}

/// Full five-valued resimulation under the current input assignment, with
/// the stuck value injected at the fault site.
fn simulate5(c: &Circuit, fault: Fault, assignment: &[Option<bool>], values: &mut [Value5]) {
    let inject = |good: Value5| -> Value5 {
        // Upstream of the only fault site both planes agree, so `good()`
        // is total here; the faulty plane is pinned to the stuck value.
        Value5::compose(good.good(), Some(fault.stuck))
    };
    for &pi in c.primary_inputs() {
        let v = match assignment[pi.index()] {
            Some(b) => Value5::from_bool(b),
            None => Value5::X,
        };
        values[pi.index()] = if pi == fault.net { inject(v) } else { v };
    }
    let mut buf: Vec<Value5> = Vec::new();
    for &gid in c.topo_gates() {
        let g = c.gate(gid);
        buf.clear();
        buf.extend(g.inputs.iter().map(|i| values[i.index()]));
        let out = eval5(g.kind, &buf);
        values[g.output.index()] = if g.output == fault.net { inject(out) } else { out };
    }
}

/// Picks the next objective `(net, value)`, or `None` on a dead end:
/// excite the fault if it is not yet, otherwise pick the most observable
/// D-frontier gate and demand the non-controlling value on its hardest
/// unknown input.
fn next_objective(
    c: &Circuit,
    fault: Fault,
    values: &[Value5],
    table: &ScoapTable,
) -> Option<(NetId, bool)> {
    let site = values[fault.net.index()];
    if !site.is_fault_effect() {
        return match site {
            Value5::X => Some((fault.net, !fault.stuck)),
            _ => None, // the site settled at the stuck value: conflict
        };
    }

    // D-frontier: gates whose output is X with a fault effect on an input.
    let mut frontier: Option<(u64, u32, &crate::circuit::Gate)> = None;
    for &gid in c.topo_gates() {
        let g = c.gate(gid);
        if values[g.output.index()] != Value5::X {
            continue;
        }
        if !g.inputs.iter().any(|i| values[i.index()].is_fault_effect()) {
            continue;
        }
        let key = (table.co[g.output.index()], g.id.0);
        if frontier.is_none_or(|(co, id, _)| (key.0, key.1) < (co, id)) {
            frontier = Some((key.0, key.1, g));
        }
    }
    let (_, _, g) = frontier?;

    match g.kind {
        GateKind::Xor | GateKind::Xnor => {
            // The side input is unknown (otherwise the output would not be
            // X): ask for its easier binary value.
            let (pin, _) = g
                .inputs
                .iter()
                .enumerate()
                .find(|(_, i)| values[i.index()] == Value5::X)
                .expect("X output with no X input");
            let net = g.inputs[pin];
            let easy_one = table.cc1[net.index()] < table.cc0[net.index()];
            Some((net, easy_one))
        }
        _ => {
            let non_controlling = matches!(g.kind, GateKind::And | GateKind::Nand);
            // Hardest unknown input first: if it cannot be justified the
            // whole gate cannot propagate, and we learn that earliest.
            let cost = |net: NetId| {
                if non_controlling {
                    table.cc1[net.index()]
                } else {
                    table.cc0[net.index()]
                }
            };
            let net = g
                .inputs
                .iter()
                .copied()
                .filter(|i| values[i.index()] == Value5::X)
                .max_by_key(|&i| (cost(i), std::cmp::Reverse(i)))
                .expect("X output with no X input");
            Some((net, non_controlling))
        }
    }
}

/// Maps an objective to a primary-input assignment by walking drivers
/// through unknown-valued nets.
fn backtrace(
    c: &Circuit,
    values: &[Value5],
    table: &ScoapTable,
    mut net: NetId,
    mut target: bool,
) -> (NetId, bool) {
    loop {
        debug_assert_eq!(values[net.index()], Value5::X);
        let gid = match c.net(net).driver {
            NetDriver::PrimaryInput => return (net, target),
            NetDriver::Gate(g) => g,
        };
        let g = c.gate(gid);
        match g.kind {
            GateKind::Not => {
                net = g.inputs[0];
                target = !target;
            }
            GateKind::Buf => {
                net = g.inputs[0];
            }
            GateKind::Xor | GateKind::Xnor => {
                let want = target ^ (g.kind == GateKind::Xnor);
                let (a, b) = (g.inputs[0], g.inputs[1]);
                let (next, other) = if values[a.index()] == Value5::X {
                    (a, b)
                } else {
                    (b, a)
                };
                // If the other input is already binary, compensate for it;
                // if unknown, aim as though it will settle at 0.
                let other_val = values[other.index()].good().unwrap_or(false);
                net = next;
                target = want ^ other_val;
            }
            _ => {
                let invert = matches!(g.kind, GateKind::Nand | GateKind::Nor);
                let controlling = matches!(g.kind, GateKind::Or | GateKind::Nor);
                let want = target ^ invert;
                let unknowns = || {
                    g.inputs
                        .iter()
                        .copied()
                        .filter(|i| values[i.index()] == Value5::X)
                };
                let (next, value) = if want == controlling {
                    // One controlling input suffices: take the easiest.
                    let cost = |i: NetId| {
                        if controlling {
                            table.cc1[i.index()]
                        } else {
                            table.cc0[i.index()]
                        }
                    };
                    let i = unknowns()
                        .min_by_key(|&i| (cost(i), i))
                        .expect("X output with no X input");
                    (i, controlling)
                } else {
                    // Every input must go non-controlling: take the hardest.
                    let cost = |i: NetId| {
                        if controlling {
                            table.cc0[i.index()]
                        } else {
                            table.cc1[i.index()]
                        }
                    };
                    let i = unknowns()
                        .max_by_key(|&i| (cost(i), std::cmp::Reverse(i)))
                        .expect("X output with no X input");
                    (i, !controlling)
                };
                net = next;
                target = value;
            }
        }
    }
}
