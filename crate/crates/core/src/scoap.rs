//! SCOAP combinational testability measures and rare-net selection.
//!
//! Controllability `CC0`/`CC1` estimates how many net assignments are needed
//! to set a net to 0/1; observability `CO` estimates the effort to propagate
//! a net's value to a primary output. Both use saturating integer arithmetic
//! so that deep multiplier-style circuits cannot overflow.
//!
//! Two derived scores drive Trojan placement:
//!
//! * hard-to-switch score `HTS = |CC1 - CC0| / max(CC1, CC0)`, in `[0, 1)`:
//!   high when one polarity is far harder to reach than the other;
//! * observability-to-controllability ratio `OCR = CO / (CC0 + CC1)`: low
//!   when a net is easier to observe than to control.
//!
//! A net is *suspicious* (a good trigger tap) when HTS is high and OCR is
//! low.

use std::collections::HashSet;

use crate::circuit::{Circuit, GateKind, NetId};

/// Unobservable nets (driven but feeding neither a gate nor an output) keep
/// this sentinel, which also saturates all downstream additions.
const UNOBSERVABLE: u64 = u64::MAX;

/// Per-net testability values, indexed by net id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoapTable {
    pub cc0: Vec<u64>,
    pub cc1: Vec<u64>,
    pub co: Vec<u64>,
}

impl ScoapTable {
    pub fn len(&self) -> usize {
        self.cc0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cc0.is_empty()
    }

    /// Hard-to-switch score in `[0, 1)`.
    pub fn hts(&self, net: NetId) -> f64 {
        let c0 = self.cc0[net.index()];
        let c1 = self.cc1[net.index()];
        let hi = c0.max(c1);
        let lo = c0.min(c1);
        // lo >= 1 keeps the true ratio strictly below 1, but with saturated
        // values the f64 division rounds to exactly 1.0; clamp it back into
        // the documented half-open range.
        ((hi - lo) as f64 / hi as f64).min(1.0f64.next_down())
    }

    /// Observability-to-controllability ratio in `[0, +inf)`.
    pub fn ocr(&self, net: NetId) -> f64 {
        let c0 = self.cc0[net.index()];
        let c1 = self.cc1[net.index()];
        self.co[net.index()] as f64 / c0.saturating_add(c1) as f64
    }
}

/// Computes SCOAP controllabilities (forward pass) and observabilities
/// (backward pass) for every net.
pub fn compute_scoap(c: &Circuit) -> ScoapTable {
    let n = c.net_count();
    let mut cc0 = vec![1u64; n];
    let mut cc1 = vec![1u64; n];

    let sum = |vals: &[u64], ids: &[NetId]| -> u64 {
        ids.iter()
            .fold(0u64, |acc, i| acc.saturating_add(vals[i.index()]))
    };
    let min = |vals: &[u64], ids: &[NetId]| -> u64 {
        ids.iter().map(|i| vals[i.index()]).min().unwrap()
    };

    for &gid in c.topo_gates() {
        let g = c.gate(gid);
        let ins = &g.inputs;
        let (c0, c1) = match g.kind {
            GateKind::And => (min(&cc0, ins), sum(&cc1, ins)),
            GateKind::Nand => (sum(&cc1, ins), min(&cc0, ins)),
            GateKind::Or => (sum(&cc0, ins), min(&cc1, ins)),
            GateKind::Nor => (min(&cc1, ins), sum(&cc0, ins)),
            GateKind::Not => (cc1[ins[0].index()], cc0[ins[0].index()]),
            GateKind::Buf => (cc0[ins[0].index()], cc1[ins[0].index()]),
            GateKind::Xor | GateKind::Xnor => {
                let (a, b) = (ins[0].index(), ins[1].index());
                let both0 = cc0[a].saturating_add(cc0[b]);
                let both1 = cc1[a].saturating_add(cc1[b]);
                let mixed = cc0[a]
                    .saturating_add(cc1[b])
                    .min(cc1[a].saturating_add(cc0[b]));
                let even = both0.min(both1); // inputs equal -> XOR 0, XNOR 1
                if g.kind == GateKind::Xor {
                    (even, mixed)
                } else {
                    (mixed, even)
                }
            }
        };
        cc0[g.output.index()] = c0.saturating_add(1);
        cc1[g.output.index()] = c1.saturating_add(1);
    }

    let mut co = vec![UNOBSERVABLE; n];
    for &po in c.primary_outputs() {
        co[po.index()] = 0;
    }
    for &gid in c.topo_gates().iter().rev() {
        let g = c.gate(gid);
        let out_co = co[g.output.index()];
        for (pin, &inp) in g.inputs.iter().enumerate() {
            let others = || {
                g.inputs
                    .iter()
                    .enumerate()
                    .filter(move |(j, _)| *j != pin)
                    .map(|(_, i)| i.index())
            };
            let through = match g.kind {
                GateKind::And | GateKind::Nand => {
                    others().fold(out_co, |acc, j| acc.saturating_add(cc1[j]))
                }
                GateKind::Or | GateKind::Nor => {
                    others().fold(out_co, |acc, j| acc.saturating_add(cc0[j]))
                }
                GateKind::Not | GateKind::Buf => out_co,
                GateKind::Xor | GateKind::Xnor => {
                    let other = others().next().unwrap();
                    out_co.saturating_add(cc0[other].min(cc1[other]))
                }
            }
            .saturating_add(1);
            let slot = &mut co[inp.index()];
            *slot = (*slot).min(through);
        }
    }

    ScoapTable { cc0, cc1, co }
}

/// Nets flagged as promising trigger taps, most suspicious first, together
/// with the HTS/OCR thresholds that describe the selection.
#[derive(Debug, Clone)]
pub struct SuspiciousSet {
    ranked: Vec<NetId>,
    members: HashSet<NetId>,
    t_hts: f64,
    t_ocr: f64,
}

impl SuspiciousSet {
    /// Selected nets, most suspicious first.
    pub fn ranked(&self) -> &[NetId] {
        &self.ranked
    }

    pub fn contains(&self, net: NetId) -> bool {
        self.members.contains(&net)
    }

    pub fn len(&self) -> usize {
        self.ranked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranked.is_empty()
    }

    /// `(t_hts, t_ocr)`: every selected net has `hts > t_hts` and
    /// `ocr < t_ocr`.
    pub fn thresholds(&self) -> (f64, f64) {
        (self.t_hts, self.t_ocr)
    }
}

fn ranked_nets(c: &Circuit, table: &ScoapTable) -> Vec<NetId> {
    let mut ids: Vec<NetId> = c.nets().iter().map(|n| n.id).collect();
    ids.sort_by(|&a, &b| {
        table
            .hts(b)
            .total_cmp(&table.hts(a))
            .then(table.ocr(a).total_cmp(&table.ocr(b)))
            .then(a.cmp(&b))
    });
    ids
}

fn make_set(table: &ScoapTable, ranked: Vec<NetId>) -> SuspiciousSet {
    // Describe the selection by thresholds that every member strictly
    // clears: just below the lowest member HTS, just above the highest
    // member OCR.
    let t_hts = ranked
        .iter()
        .map(|&n| table.hts(n))
        .fold(f64::INFINITY, f64::min)
        .next_down();
    let t_ocr = ranked
        .iter()
        .map(|&n| table.ocr(n))
        .fold(0.0f64, f64::max)
        .next_up();
    let members = ranked.iter().copied().collect();
    SuspiciousSet {
        ranked,
        members,
        t_hts,
        t_ocr,
    }
}

/// Selects the top `fraction` of nets (at least one) ranked by descending
/// HTS, breaking ties by ascending OCR, then ascending net id.
pub fn select_suspicious(c: &Circuit, table: &ScoapTable, fraction: f64) -> SuspiciousSet {
    assert!(
        (0.0..=1.0).contains(&fraction),
        "suspicious fraction must lie in [0, 1], got {fraction}"
    );
    let k = ((fraction * c.net_count() as f64).round() as usize)
        .max(1)
        .min(c.net_count());
    let mut ranked = ranked_nets(c, table);
    ranked.truncate(k);
    make_set(table, ranked)
}

/// Selects every net with `hts >= t_hts` and `ocr <= t_ocr`, ranked like
/// [`select_suspicious`]. The result may be empty.
pub fn select_suspicious_by_threshold(
    c: &Circuit,
    table: &ScoapTable,
    t_hts: f64,
    t_ocr: f64,
) -> SuspiciousSet {
    let mut ranked = ranked_nets(c, table);
    ranked.retain(|&n| table.hts(n) >= t_hts && table.ocr(n) <= t_ocr);
    make_set(table, ranked)
}
