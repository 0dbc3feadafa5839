//! ISCAS-style `.bench` netlist reader and writer.
//!
//! Grammar (one statement per line, `#` starts a comment):
//!
//! ```text
//! INPUT(name)
//! OUTPUT(name)
//! name = KIND(name, name, ...)
//! ```
//!
//! Keywords and gate kinds are case-insensitive. Net names may contain any
//! characters except whitespace, parentheses, commas, `=` and `#`.

use std::collections::HashMap;

use thiserror::Error;

use super::{BuildError, Circuit, GateKind, NetId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown gate kind {kind:?}")]
    UnknownGateKind { line: usize, kind: String },
    #[error("line {line}: {kind} gate {name:?} has {got} input(s)")]
    Arity {
        line: usize,
        kind: GateKind,
        name: String,
        got: usize,
    },
    #[error("line {line}: net {name:?} is multiply driven")]
    MultiplyDriven { line: usize, name: String },
    #[error("line {line}: net {name:?} is used but never driven")]
    Undriven { line: usize, name: String },
    #[error("line {line}: net {name:?} declared as output more than once")]
    DuplicateOutput { line: usize, name: String },
    #[error("combinational cycle through net {name:?}")]
    Cycle { name: String },
    #[error("netlist has no primary inputs")]
    NoPrimaryInputs,
    #[error("netlist has no primary outputs")]
    NoPrimaryOutputs,
    #[error(transparent)]
    Build(#[from] BuildError),
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| !c.is_whitespace() && !matches!(c, '(' | ')' | ',' | '=' | '#'))
}

struct GateDef {
    line: usize,
    out: String,
    kind: GateKind,
    inputs: Vec<String>,
}

/// Parses `.bench` text into a circuit named `name`. Net ids are assigned
/// densely in topological order: primary inputs first (in declaration
/// order), then gate outputs as their dependencies complete.
pub fn parse_bench(text: &str, name: &str) -> Result<Circuit, ParseError> {
    let mut inputs: Vec<(usize, String)> = Vec::new();
    let mut outputs: Vec<(usize, String)> = Vec::new();
    let mut gates: Vec<GateDef> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stmt = raw.split('#').next().unwrap_or("").trim();
        if stmt.is_empty() {
            continue;
        }
        if let Some(eq) = stmt.find('=') {
            let out = stmt[..eq].trim();
            let rhs = stmt[eq + 1..].trim();
            if !valid_name(out) {
                return Err(ParseError::Syntax {
                    line,
                    msg: format!("invalid net name {out:?}"),
                });
            }
            let (open, close) = match (rhs.find('('), rhs.rfind(')')) {
                (Some(o), Some(c)) if o < c && c == rhs.len() - 1 => (o, c),
                _ => {
                    return Err(ParseError::Syntax {
                        line,
                        msg: format!("expected KIND(inputs) after '=', found {rhs:?}"),
                    })
                }
            };
            let kind_str = rhs[..open].trim();
            let kind = GateKind::parse(kind_str).ok_or_else(|| ParseError::UnknownGateKind {
                line,
                kind: kind_str.to_owned(),
            })?;
            let mut ins = Vec::new();
            for part in rhs[open + 1..close].split(',') {
                let part = part.trim();
                if !valid_name(part) {
                    return Err(ParseError::Syntax {
                        line,
                        msg: format!("invalid input name {part:?}"),
                    });
                }
                ins.push(part.to_owned());
            }
            if !kind.arity_ok(ins.len()) {
                return Err(ParseError::Arity {
                    line,
                    kind,
                    name: out.to_owned(),
                    got: ins.len(),
                });
            }
            gates.push(GateDef {
                line,
                out: out.to_owned(),
                kind,
                inputs: ins,
            });
        } else {
            let upper = stmt.to_ascii_uppercase();
            let (keyword, arg) = if let Some(rest) = upper.strip_prefix("INPUT") {
                ("INPUT", (rest.len(), &stmt[stmt.len() - rest.len()..]))
            } else if let Some(rest) = upper.strip_prefix("OUTPUT") {
                ("OUTPUT", (rest.len(), &stmt[stmt.len() - rest.len()..]))
            } else {
                return Err(ParseError::Syntax {
                    line,
                    msg: format!("expected INPUT, OUTPUT or assignment, found {stmt:?}"),
                });
            };
            let arg = arg.1.trim();
            let name = arg
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .map(str::trim)
                .filter(|s| valid_name(s))
                .ok_or_else(|| ParseError::Syntax {
                    line,
                    msg: format!("expected {keyword}(name)"),
                })?;
            if keyword == "INPUT" {
                inputs.push((line, name.to_owned()));
            } else {
                outputs.push((line, name.to_owned()));
            }
        }
    }

    if inputs.is_empty() {
        return Err(ParseError::NoPrimaryInputs);
    }
    if outputs.is_empty() {
        return Err(ParseError::NoPrimaryOutputs);
    }

    // Resolve drivers: every name is driven exactly once.
    #[derive(Clone, Copy)]
    enum Driver {
        Pi,
        Gate,
    }
    let mut driver: HashMap<&str, Driver> = HashMap::new();
    for (line, name) in &inputs {
        if driver.insert(name, Driver::Pi).is_some() {
            return Err(ParseError::MultiplyDriven {
                line: *line,
                name: name.clone(),
            });
        }
    }
    for def in &gates {
        if driver.insert(&def.out, Driver::Gate).is_some() {
            return Err(ParseError::MultiplyDriven {
                line: def.line,
                name: def.out.clone(),
            });
        }
    }
    for def in &gates {
        for inp in &def.inputs {
            if !driver.contains_key(inp.as_str()) {
                return Err(ParseError::Undriven {
                    line: def.line,
                    name: inp.clone(),
                });
            }
        }
    }
    for (line, name) in &outputs {
        if !driver.contains_key(name.as_str()) {
            return Err(ParseError::Undriven {
                line: *line,
                name: name.clone(),
            });
        }
    }

    // Kahn's algorithm over gate definitions, consuming ready definitions in
    // file order, so ids come out dense and topological.
    let mut id_of: HashMap<&str, NetId> = HashMap::new();
    let mut net_names: Vec<String> = Vec::new();
    for (_, name) in &inputs {
        id_of.insert(name, NetId(net_names.len() as u32));
        net_names.push(name.clone());
    }
    let mut missing: Vec<usize> = gates
        .iter()
        .map(|def| {
            def.inputs
                .iter()
                .filter(|i| matches!(driver[i.as_str()], Driver::Gate))
                .count()
        })
        .collect();
    let mut dependents: HashMap<&str, Vec<usize>> = HashMap::new();
    for (gi, def) in gates.iter().enumerate() {
        for inp in &def.inputs {
            if matches!(driver[inp.as_str()], Driver::Gate) {
                dependents.entry(inp).or_default().push(gi);
            }
        }
    }
    let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = missing
        .iter()
        .enumerate()
        .filter(|(_, &m)| m == 0)
        .map(|(gi, _)| std::cmp::Reverse(gi))
        .collect();
    let mut gate_parts: Vec<(GateKind, Vec<NetId>, NetId)> = Vec::with_capacity(gates.len());
    let mut emitted = vec![false; gates.len()];
    while let Some(std::cmp::Reverse(gi)) = ready.pop() {
        let def = &gates[gi];
        let out_id = NetId(net_names.len() as u32);
        id_of.insert(&def.out, out_id);
        net_names.push(def.out.clone());
        let ins: Vec<NetId> = def.inputs.iter().map(|i| id_of[i.as_str()]).collect();
        gate_parts.push((def.kind, ins, out_id));
        emitted[gi] = true;
        for &succ in dependents.get(def.out.as_str()).map_or(&[][..], |v| v) {
            missing[succ] -= 1;
            if missing[succ] == 0 {
                ready.push(std::cmp::Reverse(succ));
            }
        }
    }
    if gate_parts.len() != gates.len() {
        let name = gates
            .iter()
            .enumerate()
            .filter(|(gi, _)| !emitted[*gi])
            .map(|(_, def)| def.out.clone())
            .min()
            .unwrap();
        return Err(ParseError::Cycle { name });
    }

    let pis = (0..inputs.len()).map(|i| NetId(i as u32)).collect();
    let mut pos = Vec::with_capacity(outputs.len());
    let mut seen = std::collections::HashSet::new();
    for (line, name) in &outputs {
        if !seen.insert(name.as_str()) {
            return Err(ParseError::DuplicateOutput {
                line: *line,
                name: name.clone(),
            });
        }
        pos.push(id_of[name.as_str()]);
    }

    Ok(Circuit::assemble(
        name.to_owned(),
        net_names,
        gate_parts,
        pis,
        pos,
    )?)
}

/// Serializes a circuit back to `.bench` text. Deterministic: inputs and
/// outputs in declaration order, then gates in the stored topological order.
/// Parsing the result reproduces a structurally equal circuit.
pub fn emit_bench(c: &Circuit) -> String {
    let mut out = String::new();
    out.push_str(&format!("# {}\n", c.name()));
    for &pi in c.primary_inputs() {
        out.push_str(&format!("INPUT({})\n", c.net(pi).name));
    }
    for &po in c.primary_outputs() {
        out.push_str(&format!("OUTPUT({})\n", c.net(po).name));
    }
    out.push('\n');
    for &gid in c.topo_gates() {
        let g = c.gate(gid);
        let ins: Vec<&str> = g.inputs.iter().map(|&i| c.net(i).name.as_str()).collect();
        out.push_str(&format!(
            "{} = {}({})\n",
            c.net(g.output).name,
            g.kind.keyword(),
            ins.join(", ")
        ));
    }
    out
}
