//! Gate-level combinational circuit model.
//!
//! A [`Circuit`] is an immutable DAG of single-output gates. Net ids are
//! dense (`0..net_count`) and, for circuits produced by [`CircuitBuilder`]
//! or the parsers, assigned in topological order of their drivers. Circuits
//! produced by Trojan insertion keep the original ids and append new nets at
//! the end, so evaluation always walks the explicitly stored topological
//! order rather than trusting id order.

mod bench;
mod json;
mod verilog;

pub use bench::{emit_bench, parse_bench, ParseError};
pub use json::{parse_json_netlist, JsonNetlistError};
pub use verilog::emit_verilog;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifier of a net (a named wire). Dense within one circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NetId(pub u32);

/// Identifier of a gate. Dense within one circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GateId(pub u32);

impl NetId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl GateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Display for GateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.0)
    }
}

/// Supported combinational gate functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    And,
    Nand,
    Or,
    Nor,
    Xor,
    Xnor,
    Not,
    Buf,
}

impl GateKind {
    /// Parses a gate keyword, case-insensitively. `BUFF` is accepted as an
    /// alias for `BUF` (both spellings occur in the wild).
    pub fn parse(s: &str) -> Option<GateKind> {
        match s.to_ascii_uppercase().as_str() {
            "AND" => Some(GateKind::And),
            "NAND" => Some(GateKind::Nand),
            "OR" => Some(GateKind::Or),
            "NOR" => Some(GateKind::Nor),
            "XOR" => Some(GateKind::Xor),
            "XNOR" => Some(GateKind::Xnor),
            "NOT" => Some(GateKind::Not),
            "BUF" | "BUFF" => Some(GateKind::Buf),
            _ => None,
        }
    }

    /// Canonical upper-case keyword, as written in `.bench` files.
    pub fn keyword(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Nand => "NAND",
            GateKind::Or => "OR",
            GateKind::Nor => "NOR",
            GateKind::Xor => "XOR",
            GateKind::Xnor => "XNOR",
            GateKind::Not => "NOT",
            GateKind::Buf => "BUF",
        }
    }

    /// Verilog primitive name implementing this function.
    pub fn verilog_primitive(self) -> &'static str {
        match self {
            GateKind::And => "and",
            GateKind::Nand => "nand",
            GateKind::Or => "or",
            GateKind::Nor => "nor",
            GateKind::Xor => "xor",
            GateKind::Xnor => "xnor",
            GateKind::Not => "not",
            GateKind::Buf => "buf",
        }
    }

    /// Inclusive range of legal input counts.
    pub fn arity(self) -> (usize, usize) {
        match self {
            GateKind::Not | GateKind::Buf => (1, 1),
            // XOR/XNOR are restricted to two inputs so that controllability
            // and parity semantics stay unambiguous.
            GateKind::Xor | GateKind::Xnor => (2, 2),
            _ => (2, usize::MAX),
        }
    }

    /// Whether `n` inputs is legal for this gate function.
    pub fn arity_ok(self, n: usize) -> bool {
        let (lo, hi) = self.arity();
        n >= lo && n <= hi
    }

    /// Evaluates the gate function over Boolean inputs.
    pub fn eval(self, inputs: &[bool]) -> bool {
        debug_assert!(self.arity_ok(inputs.len()));
        match self {
            GateKind::And => inputs.iter().all(|&v| v),
            GateKind::Nand => !inputs.iter().all(|&v| v),
            GateKind::Or => inputs.iter().any(|&v| v),
            GateKind::Nor => !inputs.iter().any(|&v| v),
            GateKind::Xor => inputs.iter().fold(false, |acc, &v| acc ^ v),
            GateKind::Xnor => !inputs.iter().fold(false, |acc, &v| acc ^ v),
            GateKind::Not => !inputs[0],
            GateKind::Buf => inputs[0],
        }
    }

    /// Evaluates the gate function over 64 packed Boolean lanes per word.
    pub fn eval_packed(self, inputs: &[u64]) -> u64 {
        debug_assert!(self.arity_ok(inputs.len()));
        match self {
            GateKind::And => inputs.iter().fold(!0u64, |acc, &v| acc & v),
            GateKind::Nand => !inputs.iter().fold(!0u64, |acc, &v| acc & v),
            GateKind::Or => inputs.iter().fold(0u64, |acc, &v| acc | v),
            GateKind::Nor => !inputs.iter().fold(0u64, |acc, &v| acc | v),
            GateKind::Xor => inputs.iter().fold(0u64, |acc, &v| acc ^ v),
            GateKind::Xnor => !inputs.iter().fold(0u64, |acc, &v| acc ^ v),
            GateKind::Not => !inputs[0],
            GateKind::Buf => inputs[0],
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// What drives a net: either the environment (primary input) or a gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetDriver {
    PrimaryInput,
    Gate(GateId),
}

/// A named wire.
#[derive(Debug, Clone)]
pub struct Net {
    pub id: NetId,
    pub name: String,
    pub driver: NetDriver,
    /// `(gate, pin)` pairs reading this net.
    pub fanout: Vec<(GateId, usize)>,
    /// Topological depth: 0 for primary inputs, `max(input levels) + 1` for
    /// gate outputs.
    pub level: u32,
}

/// A single-output logic gate.
#[derive(Debug, Clone)]
pub struct Gate {
    pub id: GateId,
    pub kind: GateKind,
    pub inputs: Vec<NetId>,
    pub output: NetId,
}

/// Partial or full assignment of Boolean values to primary-input nets.
/// Unlisted inputs are don't-cares.
pub type Assignment = BTreeMap<NetId, bool>;

/// An immutable combinational circuit.
#[derive(Debug, Clone)]
pub struct Circuit {
    name: String,
    nets: Vec<Net>,
    gates: Vec<Gate>,
    primary_inputs: Vec<NetId>,
    primary_outputs: Vec<NetId>,
    /// All gates in a valid evaluation order.
    topo_gates: Vec<GateId>,
    max_level: u32,
    name_index: HashMap<String, NetId>,
}

/// Errors raised while assembling a circuit from parts.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("duplicate net name {0:?}")]
    DuplicateNetName(String),
    #[error("unknown net {0}")]
    UnknownNet(NetId),
    #[error("net {name:?} is multiply driven")]
    MultiplyDriven { name: String },
    #[error("net {name:?} is used but never driven")]
    Undriven { name: String },
    #[error("{kind} gate driving {name:?} has {got} inputs")]
    Arity {
        kind: GateKind,
        name: String,
        got: usize,
    },
    #[error("combinational cycle through net {name:?}")]
    Cycle { name: String },
    #[error("circuit has no primary inputs")]
    NoPrimaryInputs,
    #[error("circuit has no primary outputs")]
    NoPrimaryOutputs,
    #[error("net {name:?} marked as primary output more than once")]
    DuplicateOutput { name: String },
}

/// Errors raised by [`simulate`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimError {
    #[error("no value supplied for primary input {name:?}")]
    MissingInput { name: String },
    #[error("assignment key {name:?} is not a primary input")]
    NotAnInput { name: String },
}

impl Circuit {
    /// Assembles a circuit from raw parts, computing fanout, a topological
    /// order, and levels. `net_names[i]` names net `i`; `drivers[i]` says
    /// what drives it. Gate inputs/outputs refer to those ids. The id order
    /// need not be topological (the Trojan-insertion path appends nets at
    /// the end of an already-numbered circuit); a cycle is an error.
    pub(crate) fn assemble(
        name: String,
        net_names: Vec<String>,
        gates: Vec<(GateKind, Vec<NetId>, NetId)>,
        primary_inputs: Vec<NetId>,
        primary_outputs: Vec<NetId>,
    ) -> Result<Circuit, BuildError> {
        let n = net_names.len();
        let mut name_index = HashMap::with_capacity(n);
        for (i, nm) in net_names.iter().enumerate() {
            if name_index.insert(nm.clone(), NetId(i as u32)).is_some() {
                return Err(BuildError::DuplicateNetName(nm.clone()));
            }
        }
        if primary_inputs.is_empty() {
            return Err(BuildError::NoPrimaryInputs);
        }
        if primary_outputs.is_empty() {
            return Err(BuildError::NoPrimaryOutputs);
        }

        // Determine each net's driver and reject double drivers.
        let mut driver: Vec<Option<NetDriver>> = vec![None; n];
        for &pi in &primary_inputs {
            if pi.index() >= n {
                return Err(BuildError::UnknownNet(pi));
            }
            if driver[pi.index()].is_some() {
                return Err(BuildError::MultiplyDriven {
                    name: net_names[pi.index()].clone(),
                });
            }
            driver[pi.index()] = Some(NetDriver::PrimaryInput);
        }
        for (gi, (kind, inputs, output)) in gates.iter().enumerate() {
            if output.index() >= n {
                return Err(BuildError::UnknownNet(*output));
            }
            for inp in inputs {
                if inp.index() >= n {
                    return Err(BuildError::UnknownNet(*inp));
                }
            }
            if !kind.arity_ok(inputs.len()) {
                return Err(BuildError::Arity {
                    kind: *kind,
                    name: net_names[output.index()].clone(),
                    got: inputs.len(),
                });
            }
            if driver[output.index()].is_some() {
                return Err(BuildError::MultiplyDriven {
                    name: net_names[output.index()].clone(),
                });
            }
            driver[output.index()] = Some(NetDriver::Gate(GateId(gi as u32)));
        }
        for (i, d) in driver.iter().enumerate() {
            if d.is_none() {
                return Err(BuildError::Undriven {
                    name: net_names[i].clone(),
                });
            }
        }
        let mut seen_po = vec![false; n];
        for &po in &primary_outputs {
            if seen_po[po.index()] {
                return Err(BuildError::DuplicateOutput {
                    name: net_names[po.index()].clone(),
                });
            }
            seen_po[po.index()] = true;
        }

        // Kahn's algorithm over gates; ready gates are consumed in ascending
        // id order so the stored topological order is deterministic.
        let mut fanout: Vec<Vec<(GateId, usize)>> = vec![Vec::new(); n];
        let mut missing: Vec<usize> = gates.iter().map(|(_, ins, _)| ins.len()).collect();
        let mut level: Vec<u32> = vec![0; n];
        for (gi, (_, inputs, _)) in gates.iter().enumerate() {
            for (pin, inp) in inputs.iter().enumerate() {
                fanout[inp.index()].push((GateId(gi as u32), pin));
                if matches!(driver[inp.index()], Some(NetDriver::PrimaryInput)) {
                    missing[gi] -= 1;
                }
            }
        }
        let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = missing
            .iter()
            .enumerate()
            .filter(|(_, &m)| m == 0)
            .map(|(gi, _)| std::cmp::Reverse(gi))
            .collect();
        let mut topo_gates = Vec::with_capacity(gates.len());
        while let Some(std::cmp::Reverse(gi)) = ready.pop() {
            topo_gates.push(GateId(gi as u32));
            let (_, inputs, output) = &gates[gi];
            level[output.index()] = inputs
                .iter()
                .map(|i| level[i.index()])
                .max()
                .unwrap_or(0)
                + 1;
            for &(succ, _) in &fanout[output.index()] {
                missing[succ.index()] -= 1;
                if missing[succ.index()] == 0 {
                    ready.push(std::cmp::Reverse(succ.index()));
                }
            }
        }
        if topo_gates.len() != gates.len() {
            // Some gate never became ready: it sits on a cycle. Report the
            // lowest-id net driven by such a gate.
            let name = gates
                .iter()
                .enumerate()
                .filter(|(gi, _)| missing[*gi] > 0)
                .map(|(_, (_, _, out))| net_names[out.index()].clone())
                .min()
                .unwrap();
            return Err(BuildError::Cycle { name });
        }

        let max_level = level.iter().copied().max().unwrap_or(0);
        let nets = net_names
            .into_iter()
            .enumerate()
            .map(|(i, nm)| Net {
                id: NetId(i as u32),
                name: nm,
                driver: driver[i].unwrap(),
                fanout: std::mem::take(&mut fanout[i]),
                level: level[i],
            })
            .collect();
        let gates = gates
            .into_iter()
            .enumerate()
            .map(|(gi, (kind, inputs, output))| Gate {
                id: GateId(gi as u32),
                kind,
                inputs,
                output,
            })
            .collect();
        Ok(Circuit {
            name,
            nets,
            gates,
            primary_inputs,
            primary_outputs,
            topo_gates,
            max_level,
            name_index,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn net(&self, id: NetId) -> &Net {
        &self.nets[id.index()]
    }

    pub fn gate(&self, id: GateId) -> &Gate {
        &self.gates[id.index()]
    }

    pub fn nets(&self) -> &[Net] {
        &self.nets
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn net_count(&self) -> usize {
        self.nets.len()
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn primary_inputs(&self) -> &[NetId] {
        &self.primary_inputs
    }

    pub fn primary_outputs(&self) -> &[NetId] {
        &self.primary_outputs
    }

    pub fn is_primary_input(&self, id: NetId) -> bool {
        matches!(self.net(id).driver, NetDriver::PrimaryInput)
    }

    pub fn is_primary_output(&self, id: NetId) -> bool {
        self.primary_outputs.contains(&id)
    }

    /// Net lookup by name.
    pub fn net_id(&self, name: &str) -> Option<NetId> {
        self.name_index.get(name).copied()
    }

    /// Topological depth of a net (primary inputs are level 0).
    pub fn level(&self, id: NetId) -> u32 {
        self.net(id).level
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    /// Gates in a valid evaluation order.
    pub fn topo_gates(&self) -> &[GateId] {
        &self.topo_gates
    }

    /// Net ids grouped by level: `by_level()[l]` lists, in ascending id
    /// order, every net at level `l`.
    pub fn nets_by_level(&self) -> Vec<Vec<NetId>> {
        let mut out = vec![Vec::new(); self.max_level as usize + 1];
        for net in &self.nets {
            out[net.level as usize].push(net.id);
        }
        out
    }
}

/// Recomputes net levels from scratch: level 0 for primary inputs,
/// `max(input levels) + 1` for each gate output. Indexed by net id.
pub fn levelize(c: &Circuit) -> Vec<u32> {
    let mut level = vec![0u32; c.net_count()];
    for &gid in c.topo_gates() {
        let g = c.gate(gid);
        let lv = g.inputs.iter().map(|i| level[i.index()]).max().unwrap_or(0) + 1;
        level[g.output.index()] = lv;
    }
    level
}

/// Evaluates every net of `c` under a full assignment, returning the values
/// of the primary outputs. Assignment keys must be exactly the primary
/// inputs: a missing input or a non-input key is an error.
pub fn simulate(c: &Circuit, assignment: &Assignment) -> Result<BTreeMap<NetId, bool>, SimError> {
    for &key in assignment.keys() {
        if !c.is_primary_input(key) {
            return Err(SimError::NotAnInput {
                name: c.net(key).name.clone(),
            });
        }
    }
    let mut values = vec![false; c.net_count()];
    for &pi in c.primary_inputs() {
        match assignment.get(&pi) {
            Some(&v) => values[pi.index()] = v,
            None => {
                return Err(SimError::MissingInput {
                    name: c.net(pi).name.clone(),
                })
            }
        }
    }
    eval_into(c, &mut values);
    Ok(c.primary_outputs()
        .iter()
        .map(|&po| (po, values[po.index()]))
        .collect())
}

/// Evaluates every net over 64 packed Boolean lanes per word. `pi_words`
/// supplies one word per primary input (in `primary_inputs()` order);
/// returns one word per net, indexed by net id. If `stuck` is given, that
/// net is forced to the constant in every lane before its fanout reads it.
pub fn eval_packed(c: &Circuit, pi_words: &[u64], stuck: Option<(NetId, bool)>) -> Vec<u64> {
    assert_eq!(pi_words.len(), c.primary_inputs().len());
    let mut values = vec![0u64; c.net_count()];
    for (&pi, &w) in c.primary_inputs().iter().zip(pi_words) {
        values[pi.index()] = w;
    }
    eval_into_packed(c, &mut values, stuck);
    values
}

fn eval_into(c: &Circuit, values: &mut [bool]) {
    let mut buf = Vec::new();
    for &gid in c.topo_gates() {
        let g = c.gate(gid);
        buf.clear();
        buf.extend(g.inputs.iter().map(|i| values[i.index()]));
        values[g.output.index()] = g.kind.eval(&buf);
    }
}

fn eval_into_packed(c: &Circuit, values: &mut [u64], stuck: Option<(NetId, bool)>) {
    let force = |net: NetId, w: u64| -> u64 {
        match stuck {
            Some((s, v)) if s == net => {
                if v {
                    !0u64
                } else {
                    0u64
                }
            }
            _ => w,
        }
    };
    if let Some((net, _)) = stuck {
        if c.is_primary_input(net) {
            values[net.index()] = force(net, values[net.index()]);
        }
    }
    let mut buf = Vec::new();
    for &gid in c.topo_gates() {
        let g = c.gate(gid);
        buf.clear();
        buf.extend(g.inputs.iter().map(|i| values[i.index()]));
        values[g.output.index()] = force(g.output, g.kind.eval_packed(&buf));
    }
}

/// Incremental builder for circuits whose gates are added in topological
/// order (every gate input must already exist). Net ids come out dense and
/// topologically ordered.
pub struct CircuitBuilder {
    name: String,
    net_names: Vec<String>,
    name_index: HashMap<String, NetId>,
    gates: Vec<(GateKind, Vec<NetId>, NetId)>,
    primary_inputs: Vec<NetId>,
    primary_outputs: Vec<NetId>,
}

impl CircuitBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        CircuitBuilder {
            name: name.into(),
            net_names: Vec::new(),
            name_index: HashMap::new(),
            gates: Vec::new(),
            primary_inputs: Vec::new(),
            primary_outputs: Vec::new(),
        }
    }

    fn add_net(&mut self, name: &str) -> Result<NetId, BuildError> {
        if self.name_index.contains_key(name) {
            return Err(BuildError::DuplicateNetName(name.to_owned()));
        }
        let id = NetId(self.net_names.len() as u32);
        self.net_names.push(name.to_owned());
        self.name_index.insert(name.to_owned(), id);
        Ok(id)
    }

    /// Declares a primary input net.
    pub fn input(&mut self, name: &str) -> Result<NetId, BuildError> {
        let id = self.add_net(name)?;
        self.primary_inputs.push(id);
        Ok(id)
    }

    /// Adds a gate driving a freshly created net named `out_name`.
    pub fn gate(
        &mut self,
        kind: GateKind,
        inputs: &[NetId],
        out_name: &str,
    ) -> Result<NetId, BuildError> {
        for &i in inputs {
            if i.index() >= self.net_names.len() {
                return Err(BuildError::UnknownNet(i));
            }
        }
        if !kind.arity_ok(inputs.len()) {
            return Err(BuildError::Arity {
                kind,
                name: out_name.to_owned(),
                got: inputs.len(),
            });
        }
        let out = self.add_net(out_name)?;
        self.gates.push((kind, inputs.to_vec(), out));
        Ok(out)
    }

    /// Marks an existing net as a primary output.
    pub fn output(&mut self, net: NetId) {
        self.primary_outputs.push(net);
    }

    pub fn build(self) -> Result<Circuit, BuildError> {
        Circuit::assemble(
            self.name,
            self.net_names,
            self.gates,
            self.primary_inputs,
            self.primary_outputs,
        )
    }
}

/// Transitive-fanin reachability for every net, as one bitset row per net.
/// Rows are reflexive (`in_fanin_cone(x, x)` holds), which makes the
/// input-cone of a primary input count the input itself.
pub struct FaninClosure {
    words_per_row: usize,
    bits: Vec<u64>,
}

impl FaninClosure {
    pub fn build(c: &Circuit) -> FaninClosure {
        let n = c.net_count();
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; words * n];
        for net in c.nets() {
            let i = net.id.index();
            bits[i * words + i / 64] |= 1u64 << (i % 64);
        }
        for &gid in c.topo_gates() {
            let g = c.gate(gid);
            let out = g.output.index();
            for inp in &g.inputs {
                let (dst, src) = {
                    let i = inp.index();
                    // Split borrows: rows never alias because out != input
                    // in an acyclic circuit.
                    debug_assert_ne!(out, i);
                    let (lo, hi) = if out < i {
                        let (a, b) = bits.split_at_mut(i * words);
                        (&mut a[out * words..out * words + words], &b[..words])
                    } else {
                        let (a, b) = bits.split_at_mut(out * words);
                        (&mut b[..words], &a[i * words..i * words + words])
                    };
                    (lo, hi)
                };
                for (d, s) in dst.iter_mut().zip(src) {
                    *d |= *s;
                }
            }
        }
        FaninClosure {
            words_per_row: words,
            bits,
        }
    }

    /// True if `a` lies in the (reflexive) transitive fanin cone of `b`,
    /// i.e. there is a directed path `a -> b` or `a == b`.
    pub fn in_fanin_cone(&self, a: NetId, b: NetId) -> bool {
        let row = &self.bits[b.index() * self.words_per_row..][..self.words_per_row];
        row[a.index() / 64] >> (a.index() % 64) & 1 == 1
    }

    /// Number of nets from `of` that appear in the fanin cone of `net`.
    pub fn cone_overlap(&self, net: NetId, of: &[NetId]) -> usize {
        of.iter()
            .filter(|&&a| self.in_fanin_cone(a, net))
            .count()
    }
}

/// Structural equality up to net/gate id renumbering, keyed on net names:
/// same primary input and output name sequences, same net name set, and —
/// for every net — the same driver (input vs. gate kind with the same input
/// name set). Gate input order is ignored since all supported functions are
/// symmetric.
pub fn structurally_equal(a: &Circuit, b: &Circuit) -> bool {
    let names = |ids: &[NetId], c: &Circuit| -> Vec<String> {
        ids.iter().map(|&i| c.net(i).name.clone()).collect()
    };
    if names(a.primary_inputs(), a) != names(b.primary_inputs(), b)
        || names(a.primary_outputs(), a) != names(b.primary_outputs(), b)
        || a.net_count() != b.net_count()
    {
        return false;
    }
    for net in a.nets() {
        let Some(bid) = b.net_id(&net.name) else {
            return false;
        };
        let bnet = b.net(bid);
        match (net.driver, bnet.driver) {
            (NetDriver::PrimaryInput, NetDriver::PrimaryInput) => {}
            (NetDriver::Gate(ga), NetDriver::Gate(gb)) => {
                let ga = a.gate(ga);
                let gb = b.gate(gb);
                if ga.kind != gb.kind {
                    return false;
                }
                let mut ia: Vec<&str> = ga.inputs.iter().map(|&i| a.net(i).name.as_str()).collect();
                let mut ib: Vec<&str> = gb.inputs.iter().map(|&i| b.net(i).name.as_str()).collect();
                ia.sort_unstable();
                ib.sort_unstable();
                if ia != ib {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}
