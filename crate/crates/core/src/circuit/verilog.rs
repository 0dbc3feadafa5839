//! Structural Verilog writer.
//!
//! Emits one module per circuit using only gate primitives (`and`, `nand`,
//! `or`, `nor`, `xor`, `xnor`, `not`, `buf`), with an ANSI port list ordered
//! primary inputs first, then primary outputs. Net names are sanitized into
//! plain identifiers deterministically (by ascending net id), so the same
//! circuit always produces byte-identical output.

use std::collections::HashSet;

use super::{Circuit, NetId};

const KEYWORDS: &[&str] = &[
    "always", "and", "assign", "begin", "buf", "case", "else", "end", "endcase", "endmodule",
    "for", "if", "initial", "inout", "input", "integer", "localparam", "module", "nand",
    "negedge", "nor", "not", "or", "output", "parameter", "posedge", "reg", "signed", "while",
    "wire", "xnor", "xor",
];

fn sanitize(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    let starts_ok = s
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    if !starts_ok {
        s.insert(0, 'n');
    }
    if KEYWORDS.binary_search(&s.as_str()).is_ok() {
        s.push('_');
    }
    s
}

fn uniquify(base: String, taken: &mut HashSet<String>) -> String {
    if taken.insert(base.clone()) {
        return base;
    }
    let mut k = 2;
    loop {
        let candidate = format!("{base}_{k}");
        if taken.insert(candidate.clone()) {
            return candidate;
        }
        k += 1;
    }
}

/// Emits the circuit as a single structural Verilog module. A net that is
/// both a primary input and a primary output gets a separate output port
/// fed through a `buf`, since one port cannot be both directions.
pub fn emit_verilog(c: &Circuit) -> String {
    let mut taken = HashSet::new();
    let ident: Vec<String> = c
        .nets()
        .iter()
        .map(|n| uniquify(sanitize(&n.name), &mut taken))
        .collect();
    let name = |id: NetId| ident[id.index()].as_str();

    // Output ports aliasing an input net need their own name.
    let mut po_port: Vec<String> = Vec::with_capacity(c.primary_outputs().len());
    let mut po_bufs: Vec<(String, NetId)> = Vec::new();
    for &po in c.primary_outputs() {
        if c.is_primary_input(po) {
            let alias = uniquify(format!("{}_out", name(po)), &mut taken);
            po_bufs.push((alias.clone(), po));
            po_port.push(alias);
        } else {
            po_port.push(name(po).to_owned());
        }
    }

    let mut out = String::new();
    out.push_str(&format!("// {}\n", c.name()));
    out.push_str(&format!("module {} (\n", sanitize(c.name())));
    let n_ports = c.primary_inputs().len() + po_port.len();
    let mut port_idx = 0;
    for &pi in c.primary_inputs() {
        port_idx += 1;
        let sep = if port_idx == n_ports { "" } else { "," };
        out.push_str(&format!("  input  {}{sep}\n", name(pi)));
    }
    for port in &po_port {
        port_idx += 1;
        let sep = if port_idx == n_ports { "" } else { "," };
        out.push_str(&format!("  output {port}{sep}\n"));
    }
    out.push_str(");\n");

    for net in c.nets() {
        let internal = !c.is_primary_input(net.id) && !c.is_primary_output(net.id);
        if internal {
            out.push_str(&format!("  wire {};\n", name(net.id)));
        }
    }

    for &gid in c.topo_gates() {
        let g = c.gate(gid);
        let mut args = vec![name(g.output).to_owned()];
        args.extend(g.inputs.iter().map(|&i| name(i).to_owned()));
        out.push_str(&format!(
            "  {} g{} ({});\n",
            g.kind.verilog_primitive(),
            g.id.0,
            args.join(", ")
        ));
    }
    for (i, (alias, pi)) in po_bufs.iter().enumerate() {
        out.push_str(&format!("  buf pb{i} ({alias}, {});\n", name(*pi)));
    }
    out.push_str("endmodule\n");
    out
}

#[cfg(test)]
mod tests {
    use super::super::{
        eval_packed, parse_bench, simulate, Assignment, CircuitBuilder, GateKind,
    };
    use super::*;

    /// Minimal structural-Verilog reader used to close the loop on the
    /// writer: tokenizes a module of gate primitives and rebuilds a circuit
    /// by synthesizing equivalent `.bench` text.
    fn read_structural_verilog(src: &str) -> Circuit {
        // Strip comments.
        let mut text = String::new();
        let mut rest = src;
        while let Some(pos) = rest.find("//") {
            text.push_str(&rest[..pos]);
            rest = rest[pos..].split_once('\n').map_or("", |(_, r)| r);
            text.push('\n');
        }
        text.push_str(rest);

        let mut tokens = Vec::new();
        let mut cur = String::new();
        for ch in text.chars() {
            if ch.is_ascii_alphanumeric() || ch == '_' {
                cur.push(ch);
            } else {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
                if !ch.is_whitespace() {
                    tokens.push(ch.to_string());
                }
            }
        }
        if !cur.is_empty() {
            tokens.push(cur);
        }

        let mut bench = String::new();
        let mut i = 0;
        let mut module_name = String::new();
        while i < tokens.len() {
            match tokens[i].as_str() {
                "module" => {
                    module_name = tokens[i + 1].clone();
                    i += 2;
                    // Skip to ')', emitting port declarations.
                    while tokens[i] != ")" {
                        match tokens[i].as_str() {
                            "input" => bench.push_str(&format!("INPUT({})\n", tokens[i + 1])),
                            "output" => bench.push_str(&format!("OUTPUT({})\n", tokens[i + 1])),
                            _ => {}
                        }
                        i += 1;
                    }
                }
                "wire" => {
                    while tokens[i] != ";" {
                        i += 1;
                    }
                }
                kind @ ("and" | "nand" | "or" | "nor" | "xor" | "xnor" | "not" | "buf") => {
                    let kind = kind.to_owned();
                    i += 1;
                    if tokens[i] != "(" {
                        i += 1; // optional instance name
                    }
                    assert_eq!(tokens[i], "(");
                    let mut args = Vec::new();
                    while tokens[i] != ")" {
                        if tokens[i] != "(" && tokens[i] != "," {
                            args.push(tokens[i].clone());
                        }
                        i += 1;
                    }
                    bench.push_str(&format!(
                        "{} = {}({})\n",
                        args[0],
                        kind.to_ascii_uppercase(),
                        args[1..].join(", ")
                    ));
                }
                _ => {}
            }
            i += 1;
        }
        parse_bench(&bench, &module_name).expect("reader produced invalid netlist")
    }

    fn c17() -> Circuit {
        parse_bench(include_str!("../../../../benchmarks/c17.bench"), "c17").unwrap()
    }

    #[test]
    fn c17_verilog_golden() {
        let expected = "\
// c17
module c17 (
  input  n1,
  input  n2,
  input  n3,
  input  n6,
  input  n7,
  output n22,
  output n23
);
  wire n10;
  wire n11;
  wire n16;
  wire n19;
  nand g0 (n10, n1, n3);
  nand g1 (n11, n3, n6);
  nand g2 (n16, n2, n11);
  nand g3 (n19, n11, n7);
  nand g4 (n22, n10, n16);
  nand g5 (n23, n16, n19);
endmodule
";
        assert_eq!(emit_verilog(&c17()), expected);
    }

    #[test]
    fn emitted_verilog_is_behaviorally_equivalent() {
        let c = c17();
        let d = read_structural_verilog(&emit_verilog(&c));
        assert_eq!(c.primary_inputs().len(), d.primary_inputs().len());
        assert_eq!(c.primary_outputs().len(), d.primary_outputs().len());
        assert_eq!(c.gate_count(), d.gate_count());
        // Exhaustive behavioral comparison, ports matched by position.
        let n = c.primary_inputs().len();
        let mut words = vec![0u64; n];
        for v in 0..(1u64 << n) {
            for i in 0..n {
                if v >> i & 1 == 1 {
                    words[i] |= 1 << v;
                }
            }
        }
        let cv = eval_packed(&c, &words, None);
        let dv = eval_packed(&d, &words, None);
        let mask = (1u64 << (1 << n)) - 1; // 32 valid lanes for 5 inputs
        for (cp, dp) in c.primary_outputs().iter().zip(d.primary_outputs()) {
            assert_eq!(cv[cp.index()] & mask, dv[dp.index()] & mask);
        }
    }

    #[test]
    fn sanitizer_handles_keywords_and_collisions() {
        let mut b = CircuitBuilder::new("odd");
        let a = b.input("wire").unwrap();
        let x = b.input("a$b").unwrap();
        let y = b.input("a_b").unwrap();
        let g = b.gate(GateKind::And, &[a, x], "1st").unwrap();
        let h = b.gate(GateKind::Or, &[g, y], "out").unwrap();
        b.output(h);
        let c = b.build().unwrap();
        let v = emit_verilog(&c);
        assert!(v.contains("input  wire_"));
        assert!(v.contains("input  a_b,"));
        assert!(v.contains("input  a_b_2,") || v.contains("a_b_2"));
        assert!(v.contains("n1st"));
        let d = read_structural_verilog(&v);
        assert_eq!(d.gate_count(), 2);
        let mut asg = Assignment::new();
        for &pi in d.primary_inputs() {
            asg.insert(pi, true);
        }
        let out = simulate(&d, &asg).unwrap();
        assert!(out.values().all(|&v| v));
    }

    #[test]
    fn input_that_is_also_output_gets_buffered_port() {
        let mut b = CircuitBuilder::new("pass");
        let a = b.input("a").unwrap();
        let x = b.input("x").unwrap();
        let g = b.gate(GateKind::And, &[a, x], "y").unwrap();
        b.output(g);
        b.output(a);
        let c = b.build().unwrap();
        let v = emit_verilog(&c);
        assert!(v.contains("output a_out"));
        assert!(v.contains("buf pb0 (a_out, a);"));
        let d = read_structural_verilog(&v);
        // The buf becomes an extra gate; behavior must still match.
        assert_eq!(d.gate_count(), 2);
        let mut asg = Assignment::new();
        asg.insert(d.primary_inputs()[0], true);
        asg.insert(d.primary_inputs()[1], false);
        let out = simulate(&d, &asg).unwrap();
        let pos = d.primary_outputs();
        assert_eq!(out[&pos[0]], false); // and(1,0)
        assert_eq!(out[&pos[1]], true); // buffered copy of a
    }
}
