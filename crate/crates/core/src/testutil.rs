//! Random circuit generation for property tests.

use proptest::prelude::*;

use crate::circuit::{Circuit, CircuitBuilder, GateKind, NetId};

const KINDS: [GateKind; 8] = [
    GateKind::And,
    GateKind::Nand,
    GateKind::Or,
    GateKind::Nor,
    GateKind::Xor,
    GateKind::Xnor,
    GateKind::Not,
    GateKind::Buf,
];

/// Builds a valid random circuit from raw choice data: every gate draws its
/// inputs from already-created nets, so the result is always acyclic; every
/// net without fanout becomes a primary output.
fn build(n_pis: usize, gate_data: Vec<(u8, u16, u16)>) -> Circuit {
    let mut b = CircuitBuilder::new("prop");
    let mut nets: Vec<NetId> = Vec::new();
    let mut used: Vec<bool> = Vec::new();
    for i in 0..n_pis {
        nets.push(b.input(&format!("x{i}")).unwrap());
        used.push(false);
    }
    for (gi, (sel, a, c)) in gate_data.into_iter().enumerate() {
        let kind = KINDS[(sel % 8) as usize];
        let pick = |raw: u16| nets[raw as usize % nets.len()];
        let inputs: Vec<NetId> = match kind {
            GateKind::Not | GateKind::Buf => vec![pick(a)],
            GateKind::Xor | GateKind::Xnor => vec![pick(a), pick(c)],
            _ => {
                if sel >= 128 {
                    vec![pick(a), pick(c), pick(a ^ c)]
                } else {
                    vec![pick(a), pick(c)]
                }
            }
        };
        for inp in &inputs {
            used[inp.index()] = true;
        }
        nets.push(b.gate(kind, &inputs, &format!("g{gi}")).unwrap());
        used.push(false);
    }
    for (i, &net) in nets.iter().enumerate() {
        if !used[i] {
            b.output(net);
        }
    }
    b.build().unwrap()
}

/// Strategy producing arbitrary valid combinational circuits with 1–5
/// primary inputs and 1–40 gates.
pub fn arb_circuit() -> impl Strategy<Value = Circuit> {
    (
        1..=5usize,
        prop::collection::vec((any::<u8>(), any::<u16>(), any::<u16>()), 1..40),
    )
        .prop_map(|(n_pis, gate_data)| build(n_pis, gate_data))
}

/// Strategy producing a circuit plus a full random input assignment.
pub fn arb_circuit_and_inputs() -> impl Strategy<Value = (Circuit, Vec<bool>)> {
    arb_circuit().prop_flat_map(|c| {
        let n = c.primary_inputs().len();
        (Just(c), prop::collection::vec(any::<bool>(), n))
    })
}
