//! Reader for Yosys-style JSON netlists (`yosys -o design.json`).
//!
//! Only purely combinational, gate-level designs are accepted: a single
//! module whose cells are 1-bit logic primitives (`$_NAND_`-style internal
//! names or plain `nand`/`and`/... type names, case-insensitive). Sequential
//! cells, constant bits, inout ports and multi-bit cell connections are
//! rejected with specific errors.

use std::collections::BTreeMap;

use serde::Deserialize;
use thiserror::Error;

use super::{BuildError, Circuit, CircuitBuilder, GateKind, NetId};

#[derive(Debug, Error)]
pub enum JsonNetlistError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expected exactly one module, found {found}")]
    ExpectedSingleModule { found: usize },
    #[error("cell {cell:?} has sequential type {ty:?}; only combinational netlists are supported")]
    SequentialCell { cell: String, ty: String },
    #[error("cell {cell:?} has unsupported type {ty:?}")]
    UnsupportedCellType { cell: String, ty: String },
    #[error("constant bit in {context}; tie-offs are not supported")]
    ConstantBit { context: String },
    #[error("cell {cell:?} port {port:?} is not 1 bit wide")]
    PortWidth { cell: String, port: String },
    #[error("cell {cell:?} has no output port")]
    MissingOutputPort { cell: String },
    #[error("cell {cell:?} has more than one output port")]
    MultipleOutputPorts { cell: String },
    #[error("port {port:?} has unsupported direction {direction:?}")]
    PortDirection { port: String, direction: String },
    #[error(transparent)]
    Build(#[from] BuildError),
}

#[derive(Deserialize)]
struct JsonNetlist {
    #[serde(default)]
    modules: BTreeMap<String, JsonModule>,
}

#[derive(Deserialize)]
struct JsonModule {
    #[serde(default)]
    ports: BTreeMap<String, JsonPort>,
    #[serde(default)]
    cells: BTreeMap<String, JsonCell>,
    #[serde(default)]
    netnames: BTreeMap<String, JsonNetName>,
}

#[derive(Deserialize)]
struct JsonPort {
    direction: String,
    bits: Vec<Bit>,
}

#[derive(Deserialize)]
struct JsonCell {
    #[serde(rename = "type")]
    ty: String,
    #[serde(default)]
    port_directions: BTreeMap<String, String>,
    #[serde(default)]
    connections: BTreeMap<String, Vec<Bit>>,
}

#[derive(Deserialize)]
struct JsonNetName {
    bits: Vec<Bit>,
}

#[derive(Deserialize, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[serde(untagged)]
enum Bit {
    Net(u64),
    // Yosys encodes constants as the strings "0", "1" and "x".
    #[allow(dead_code)]
    Const(char),
}

fn cell_kind(cell: &str, ty: &str) -> Result<GateKind, JsonNetlistError> {
    let upper = ty.to_ascii_uppercase();
    if ["DFF", "LATCH", "SR_", "DLATCH", "FF_"].iter().any(|s| upper.contains(s)) {
        return Err(JsonNetlistError::SequentialCell {
            cell: cell.to_owned(),
            ty: ty.to_owned(),
        });
    }
    // "$_NAND_" -> "NAND", "$and" -> "and", "nand" -> "nand"
    let stripped = upper
        .trim_start_matches('$')
        .trim_matches('_');
    GateKind::parse(stripped).ok_or_else(|| JsonNetlistError::UnsupportedCellType {
        cell: cell.to_owned(),
        ty: ty.to_owned(),
    })
}

/// Parses a Yosys JSON netlist into a circuit. The single module's name
/// becomes the circuit name; net names are taken from ports first, then
/// `netnames` (lexicographic priority), with `_<bit>` as a fallback. Net ids
/// are renumbered densely in topological order, like the `.bench` reader.
pub fn parse_json_netlist(text: &str) -> Result<Circuit, JsonNetlistError> {
    let parsed: JsonNetlist = serde_json::from_str(text)?;
    if parsed.modules.len() != 1 {
        return Err(JsonNetlistError::ExpectedSingleModule {
            found: parsed.modules.len(),
        });
    }
    let (module_name, module) = parsed.modules.into_iter().next().unwrap();

    let bit_of = |bit: &Bit, context: &str| -> Result<u64, JsonNetlistError> {
        match bit {
            Bit::Net(n) => Ok(*n),
            Bit::Const(_) => Err(JsonNetlistError::ConstantBit {
                context: context.to_owned(),
            }),
        }
    };

    // Assign a stable name to every referenced bit.
    let mut name_of: BTreeMap<u64, String> = BTreeMap::new();
    let mut claim = |bits: &[Bit], base: &str| -> Result<(), JsonNetlistError> {
        for (i, b) in bits.iter().enumerate() {
            let n = bit_of(b, base)?;
            let name = if bits.len() == 1 {
                base.to_owned()
            } else {
                format!("{base}[{i}]")
            };
            name_of.entry(n).or_insert(name);
        }
        Ok(())
    };
    for (pname, port) in &module.ports {
        claim(&port.bits, pname)?;
    }
    for (nname, nn) in &module.netnames {
        claim(&nn.bits, nname)?;
    }

    // Collect primary inputs/outputs from port directions.
    let mut pi_bits: Vec<u64> = Vec::new();
    let mut po_bits: Vec<u64> = Vec::new();
    for (pname, port) in &module.ports {
        let dst = match port.direction.as_str() {
            "input" => &mut pi_bits,
            "output" => &mut po_bits,
            other => {
                return Err(JsonNetlistError::PortDirection {
                    port: pname.clone(),
                    direction: other.to_owned(),
                })
            }
        };
        for b in &port.bits {
            dst.push(bit_of(b, pname)?);
        }
    }

    // Flatten cells to (kind, input bits, output bit).
    struct CellDef {
        kind: GateKind,
        inputs: Vec<u64>,
        output: u64,
    }
    let mut defs: Vec<CellDef> = Vec::new();
    for (cname, cell) in &module.cells {
        let kind = cell_kind(cname, &cell.ty)?;
        let mut inputs = Vec::new();
        let mut output = None;
        for (port, bits) in &cell.connections {
            if bits.len() != 1 {
                return Err(JsonNetlistError::PortWidth {
                    cell: cname.clone(),
                    port: port.clone(),
                });
            }
            let bit = bit_of(&bits[0], &format!("cell {cname:?} port {port:?}"))?;
            name_of.entry(bit).or_insert_with(|| format!("_{bit}"));
            let dir = cell.port_directions.get(port).map(String::as_str);
            // Without explicit directions, Yosys gate primitives drive Y.
            let is_output = match dir {
                Some("output") => true,
                Some(_) => false,
                None => port == "Y" || port == "Q",
            };
            if is_output {
                if output.replace(bit).is_some() {
                    return Err(JsonNetlistError::MultipleOutputPorts { cell: cname.clone() });
                }
            } else {
                // Connections iterate in port-name order (A, B, C, ...),
                // which fixes the input order deterministically.
                inputs.push(bit);
            }
        }
        let output = output.ok_or_else(|| JsonNetlistError::MissingOutputPort {
            cell: cname.clone(),
        })?;
        defs.push(CellDef { kind, inputs, output });
    }

    // First assembly: ids in ascending bit order (not necessarily
    // topological; `assemble` sorts internally).
    let mut id_of: BTreeMap<u64, NetId> = BTreeMap::new();
    let mut names: Vec<String> = Vec::new();
    for (&bit, name) in &name_of {
        id_of.insert(bit, NetId(names.len() as u32));
        names.push(name.clone());
    }
    let gates = defs
        .iter()
        .map(|d| {
            (
                d.kind,
                d.inputs.iter().map(|b| id_of[b]).collect::<Vec<_>>(),
                id_of[&d.output],
            )
        })
        .collect();
    let pis = pi_bits.iter().map(|b| id_of[b]).collect();
    let pos = po_bits.iter().map(|b| id_of[b]).collect();
    let first = Circuit::assemble(module_name, names, gates, pis, pos)?;
    Ok(renumbered_topological(&first)?)
}

/// Rebuilds a circuit so that net ids are dense and topologically ordered:
/// primary inputs first, then gate outputs in evaluation order.
fn renumbered_topological(c: &Circuit) -> Result<Circuit, BuildError> {
    let mut b = CircuitBuilder::new(c.name());
    let mut map: Vec<Option<NetId>> = vec![None; c.net_count()];
    for &pi in c.primary_inputs() {
        map[pi.index()] = Some(b.input(&c.net(pi).name)?);
    }
    for &gid in c.topo_gates() {
        let g = c.gate(gid);
        let ins: Vec<NetId> = g.inputs.iter().map(|i| map[i.index()].unwrap()).collect();
        map[g.output.index()] = Some(b.gate(g.kind, &ins, &c.net(g.output).name)?);
    }
    for &po in c.primary_outputs() {
        b.output(map[po.index()].unwrap());
    }
    b.build()
}
