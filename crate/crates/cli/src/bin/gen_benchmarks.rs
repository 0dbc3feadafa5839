//! Generates the bundled benchmark netlists.
//!
//! Only `c17.bench` is the original ISCAS-85 circuit. The other bundled
//! benchmarks are deterministic *stand-ins*: they reproduce the canonical
//! interface (primary input/output counts) and the broad structural flavor
//! of their namesakes — priority decode, sliced ALU datapaths, global
//! error-correction parity, a deep multiplier array — but are not the
//! original netlists. Each generated file says so in its header.
//!
//! The generator is purely structural (no randomness), so every run
//! produces byte-identical files; `--check` re-derives them and verifies
//! the files on disk match.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use htforge::circuit::{emit_bench, levelize, Circuit, CircuitBuilder, GateKind, NetId};

#[derive(Parser)]
#[command(name = "gen-benchmarks", about = "Regenerate or verify the bundled benchmark netlists")]
struct Args {
    /// Directory holding the .bench files.
    #[arg(long, default_value = "benchmarks")]
    out_dir: PathBuf,
    /// Verify the files on disk instead of writing them.
    #[arg(long)]
    check: bool,
}

/// Thin wrappers so generator wiring reads as netlist description; any
/// builder rejection here is a generator bug.
fn g(b: &mut CircuitBuilder, kind: GateKind, ins: &[NetId], name: &str) -> NetId {
    b.gate(kind, ins, name)
        .expect("generator wiring is structurally valid")
}

fn pi(b: &mut CircuitBuilder, name: &str) -> NetId {
    b.input(name).expect("generator input names are unique")
}

fn bus(b: &mut CircuitBuilder, prefix: &str, width: usize) -> Vec<NetId> {
    (0..width).map(|i| pi(b, &format!("{prefix}{i}"))).collect()
}

/// 2:1 mux, select = 0 picks `x`. Callers pass the shared inverted select.
fn mux(
    b: &mut CircuitBuilder,
    sel: NetId,
    not_sel: NetId,
    x: NetId,
    y: NetId,
    name: &str,
) -> NetId {
    let w0 = g(b, GateKind::And, &[x, not_sel], &format!("{name}_a"));
    let w1 = g(b, GateKind::And, &[y, sel], &format!("{name}_b"));
    g(b, GateKind::Or, &[w0, w1], name)
}

/// XOR as the classic four-NAND expansion (the construction the ISCAS
/// error-correction benchmarks are built from).
fn xor_nand(b: &mut CircuitBuilder, x: NetId, y: NetId, name: &str) -> NetId {
    let n1 = g(b, GateKind::Nand, &[x, y], &format!("{name}_a"));
    let n2 = g(b, GateKind::Nand, &[x, n1], &format!("{name}_b"));
    let n3 = g(b, GateKind::Nand, &[y, n1], &format!("{name}_c"));
    g(b, GateKind::Nand, &[n2, n3], name)
}

/// Balanced parity tree; `nand_form` expands every XOR into four NANDs.
fn parity_tree(b: &mut CircuitBuilder, nets: &[NetId], prefix: &str, nand_form: bool) -> NetId {
    assert!(!nets.is_empty());
    let mut layer: Vec<NetId> = nets.to_vec();
    let mut level = 0;
    while layer.len() > 1 {
        let mut next = Vec::with_capacity(layer.len().div_ceil(2));
        for (i, pair) in layer.chunks(2).enumerate() {
            if let [x, y] = *pair {
                let name = format!("{prefix}_l{level}_{i}");
                next.push(if nand_form {
                    xor_nand(b, x, y, &name)
                } else {
                    g(b, GateKind::Xor, &[x, y], &name)
                });
            } else {
                next.push(pair[0]);
            }
        }
        layer = next;
        level += 1;
    }
    layer[0]
}

fn full_adder(
    b: &mut CircuitBuilder,
    x: NetId,
    y: NetId,
    cin: NetId,
    name: &str,
) -> (NetId, NetId) {
    let x1 = g(b, GateKind::Xor, &[x, y], &format!("{name}_x"));
    let sum = g(b, GateKind::Xor, &[x1, cin], &format!("{name}_s"));
    let a1 = g(b, GateKind::And, &[x, y], &format!("{name}_a"));
    let a2 = g(b, GateKind::And, &[x1, cin], &format!("{name}_b"));
    let cout = g(b, GateKind::Or, &[a1, a2], &format!("{name}_c"));
    (sum, cout)
}

fn half_adder(b: &mut CircuitBuilder, x: NetId, y: NetId, name: &str) -> (NetId, NetId) {
    let sum = g(b, GateKind::Xor, &[x, y], &format!("{name}_s"));
    let cout = g(b, GateKind::And, &[x, y], &format!("{name}_c"));
    (sum, cout)
}

/// Four 9-bit request buses compete; the winning bus is priority-encoded.
/// 36 inputs, 7 outputs (3 grant lines + 4-bit winning-bit index).
fn c432_like() -> Circuit {
    let mut builder = CircuitBuilder::new("c432_like");
    let b = &mut builder;
    let buses: Vec<Vec<NetId>> = ["a", "b", "c", "d"].iter().map(|p| bus(b, p, 9)).collect();

    let any: Vec<NetId> = buses
        .iter()
        .zip(["any_a", "any_b", "any_c", "any_d"])
        .map(|(bits, name)| g(b, GateKind::Or, bits, name))
        .collect();
    let not_any: Vec<NetId> = any
        .iter()
        .zip(["no_a", "no_b", "no_c"])
        .map(|(&a, name)| g(b, GateKind::Not, &[a], name))
        .collect();
    // Bus A outranks B outranks C outranks D.
    let grant = [
        any[0],
        g(b, GateKind::And, &[any[1], not_any[0]], "grant_b"),
        g(b, GateKind::And, &[any[2], not_any[0], not_any[1]], "grant_c"),
        g(
            b,
            GateKind::And,
            &[any[3], not_any[0], not_any[1], not_any[2]],
            "grant_d",
        ),
    ];

    // Winning bus bit i (for i in 1..=8) as an OR of NANDed grant/request
    // pairs. Bit 0 needs no decode term: the encoder emits index 0 for it
    // anyway, and it still reaches the grant lines through any_*.
    let sel: Vec<NetId> = (1..9)
        .map(|i| {
            let terms: Vec<NetId> = (0..4)
                .map(|k| {
                    g(
                        b,
                        GateKind::Nand,
                        &[buses[k][i], grant[k]],
                        &format!("w{}{i}", ["a", "b", "c", "d"][k]),
                    )
                })
                .collect();
            g(b, GateKind::Nand, &terms, &format!("sel{i}"))
        })
        .collect(); // sel[idx] holds bit idx + 1

    // Priority-encode the highest set bit; bit 8 wins outright.
    let mut hits = vec![sel[7]];
    let mut none_above = g(b, GateKind::Not, &[sel[7]], "above7");
    for idx in (0..7).rev() {
        let bit = idx + 1;
        hits.push(g(
            b,
            GateKind::And,
            &[sel[idx], none_above],
            &format!("hit{bit}"),
        ));
        if idx > 0 {
            let inv = g(b, GateKind::Not, &[sel[idx]], &format!("nsel{bit}"));
            none_above = g(
                b,
                GateKind::And,
                &[inv, none_above],
                &format!("above{}", bit - 1),
            );
        }
    }
    hits.reverse(); // hits[idx] now marks bit idx + 1 as the winner
    let idx0 = g(b, GateKind::Or, &[hits[0], hits[2], hits[4], hits[6]], "idx0");
    let idx1 = g(b, GateKind::Or, &[hits[1], hits[2], hits[5], hits[6]], "idx1");
    let idx2 = g(b, GateKind::Or, &[hits[3], hits[4], hits[5], hits[6]], "idx2");
    let idx3 = g(b, GateKind::Buf, &[hits[7]], "idx3");

    for po in [grant[0], grant[1], grant[2], idx0, idx1, idx2, idx3] {
        b.output(po);
    }
    builder.build().expect("c432_like assembles")
}

/// Eight independent ALU bit slices over six data buses; only two summary
/// flags look across slices, so most cones stay narrow. 60 inputs, 26
/// outputs (three 8-bit results + zero flag + parity flag).
fn c880_like() -> Circuit {
    let mut builder = CircuitBuilder::new("c880_like");
    let b = &mut builder;
    let [a, bb, c, d, e, f]: [Vec<NetId>; 6] = ["a", "b", "c", "d", "e", "f"]
        .map(|p| bus(b, p, 8));
    let s = bus(b, "s", 8);
    let t = bus(b, "t", 4);
    let ns: Vec<NetId> = [0, 1, 3, 5]
        .iter()
        .map(|&i| g(b, GateKind::Not, &[s[i]], &format!("ns{i}")))
        .collect();

    let mut o1 = Vec::new();
    let mut o2 = Vec::new();
    let mut o3 = Vec::new();
    for i in 0..8 {
        let g1 = g(b, GateKind::Nand, &[a[i], bb[i]], &format!("g1_{i}"));
        let g2 = g(b, GateKind::Nor, &[c[i], d[i]], &format!("g2_{i}"));
        let g3 = g(b, GateKind::Xor, &[e[i], f[i]], &format!("g3_{i}"));
        let t1 = mux(b, s[0], ns[0], g1, g2, &format!("t1_{i}"));
        let t2 = mux(b, s[1], ns[1], g2, g3, &format!("t2_{i}"));
        let t3 = g(b, GateKind::Xor, &[t1, t[i % 4]], &format!("t3_{i}"));
        let t4 = g(b, GateKind::Nand, &[t2, s[2]], &format!("t4_{i}"));
        let u1 = mux(b, s[3], ns[2], t3, t4, &format!("u1_{i}"));
        let u2 = g(b, GateKind::Xnor, &[t4, g3], &format!("u2_{i}"));
        let ga = g(b, GateKind::And, &[g1, s[4]], &format!("ga_{i}"));
        let u3 = g(b, GateKind::Nor, &[t3, ga], &format!("u3_{i}"));
        let w1 = g(b, GateKind::And, &[u1, s[6]], &format!("w1_{i}"));
        let w2a = g(b, GateKind::And, &[t1, s[7]], &format!("w2a_{i}"));
        let w2 = g(b, GateKind::Or, &[u2, w2a], &format!("w2_{i}"));
        o1.push(u1);
        o2.push(mux(b, s[5], ns[3], u2, u3, &format!("o2_{i}")));
        o3.push(g(b, GateKind::Xor, &[w1, w2], &format!("o3_{i}")));
    }
    let zero = g(b, GateKind::Nor, &o1, "zero");
    let par = parity_tree(b, &o3, "par", false);

    for po in o1.iter().chain(&o2).chain(&o3).chain([&zero, &par]) {
        b.output(*po);
    }
    builder.build().expect("c880_like assembles")
}

/// 32-bit single-error corrector: six Hamming syndromes plus a global
/// parity over every input gate the per-bit correctors, so almost every
/// internal net can see the whole input space. 41 inputs, 32 outputs.
fn c1355_like() -> Circuit {
    let mut builder = CircuitBuilder::new("c1355_like");
    let b = &mut builder;
    let d = bus(b, "d", 32);
    let p = bus(b, "p", 8);
    let en = pi(b, "en");

    let member = |i: usize, j: usize| ((i + 1) >> j) & 1 == 1;
    let syndromes: Vec<NetId> = (0..6)
        .map(|j| {
            let mut leaves: Vec<NetId> =
                (0..32).filter(|&i| member(i, j)).map(|i| d[i]).collect();
            leaves.push(p[j]);
            parity_tree(b, &leaves, &format!("s{j}"), true)
        })
        .collect();
    let mut global_leaves = d.clone();
    global_leaves.extend([p[6], p[7], en]);
    let global = parity_tree(b, &global_leaves, "gp", true);

    let not_syndromes: Vec<NetId> = syndromes
        .iter()
        .enumerate()
        .map(|(j, &sj)| g(b, GateKind::Not, &[sj], &format!("n_s{j}")))
        .collect();
    let armed = g(b, GateKind::And, &[en, global], "armed");
    for (i, &di) in d.iter().enumerate() {
        let literals: Vec<NetId> = (0..6)
            .map(|j| {
                if member(i, j) {
                    syndromes[j]
                } else {
                    not_syndromes[j]
                }
            })
            .collect();
        let flip = g(b, GateKind::And, &literals, &format!("flip{i}"));
        let act = g(b, GateKind::And, &[flip, armed], &format!("act{i}"));
        let out = xor_nand(b, di, act, &format!("y{i}"));
        b.output(out);
    }
    builder.build().expect("c1355_like assembles")
}

/// 16-bit corrector plus two diffusion rounds that fold distant bits into
/// each other. 33 inputs, 25 outputs (16 data + 5 syndromes + 4 flags).
fn c1908_like() -> Circuit {
    let mut builder = CircuitBuilder::new("c1908_like");
    let b = &mut builder;
    let d = bus(b, "d", 16);
    let k = bus(b, "k", 8);
    let m = bus(b, "m", 9);

    let member = |i: usize, j: usize| ((i + 1) >> j) & 1 == 1;
    let syndromes: Vec<NetId> = (0..5)
        .map(|j| {
            let mut leaves: Vec<NetId> =
                (0..16).filter(|&i| member(i, j)).map(|i| d[i]).collect();
            leaves.push(k[j]);
            parity_tree(b, &leaves, &format!("s{j}"), true)
        })
        .collect();
    let mut global_leaves = d.clone();
    global_leaves.extend([k[5], k[6], k[7]]);
    let mode_parity = parity_tree(b, &m, "mp", true);
    global_leaves.push(mode_parity);
    let global = parity_tree(b, &global_leaves, "gp", true);

    let not_syndromes: Vec<NetId> = syndromes
        .iter()
        .enumerate()
        .map(|(j, &sj)| g(b, GateKind::Not, &[sj], &format!("n_s{j}")))
        .collect();
    let mut flips = Vec::new();
    let mut x = Vec::new();
    for (i, &di) in d.iter().enumerate() {
        let literals: Vec<NetId> = (0..5)
            .map(|j| {
                if member(i, j) {
                    syndromes[j]
                } else {
                    not_syndromes[j]
                }
            })
            .collect();
        let flip = g(b, GateKind::And, &literals, &format!("flip{i}"));
        let act = g(b, GateKind::And, &[flip, global], &format!("act{i}"));
        flips.push(flip);
        x.push(xor_nand(b, di, act, &format!("c{i}")));
    }

    // Two rounds of cross-bit diffusion keyed by the mode bus.
    for round in 0..2 {
        let prev = x.clone();
        for (i, slot) in x.iter_mut().enumerate() {
            let tap = g(
                b,
                GateKind::And,
                &[prev[(i + 5) % 16], m[(i + 7 * round) % 9]],
                &format!("f{round}t{i}"),
            );
            *slot = xor_nand(b, prev[i], tap, &format!("f{round}x{i}"));
        }
    }

    let any_flip = g(b, GateKind::Or, &flips, "any_flip");
    let no_flip = g(b, GateKind::Not, &[any_flip], "no_flip");
    let uncorrectable = g(b, GateKind::And, &[global, no_flip], "uncorr");
    let out_parity = parity_tree(b, &x, "op", true);

    for po in x
        .iter()
        .chain(&syndromes)
        .chain([&global, &any_flip, &uncorrectable, &out_parity])
    {
        b.output(*po);
    }
    builder.build().expect("c1908_like assembles")
}

/// Multi-stage 8-bit ALU: op select, add, rotate, BCD-style adjust, and a
/// keyed output stage, with comparator and parity flags. 50 inputs, 22
/// outputs (16-bit result + 6 flags).
fn c3540_like() -> Circuit {
    let mut builder = CircuitBuilder::new("c3540_like");
    let b = &mut builder;
    let a = bus(b, "a", 8);
    let bb = bus(b, "b", 8);
    let c = bus(b, "c", 8);
    let k = bus(b, "k", 16);
    let m = bus(b, "m", 10);

    // Stage 1: one of four bit ops, AOI-selected by k0/k1.
    let nk0 = g(b, GateKind::Not, &[k[0]], "nk0");
    let nk1 = g(b, GateKind::Not, &[k[1]], "nk1");
    let s1: Vec<NetId> = (0..8)
        .map(|i| {
            let o1 = g(b, GateKind::Nand, &[a[i], bb[i]], &format!("op1_{i}"));
            let o2 = g(b, GateKind::Nor, &[a[i], c[i]], &format!("op2_{i}"));
            let o3 = g(b, GateKind::Xor, &[bb[i], c[i]], &format!("op3_{i}"));
            let o4 = g(b, GateKind::And, &[a[i], bb[i], c[i]], &format!("op4_{i}"));
            let w1 = g(b, GateKind::And, &[o1, nk0, nk1], &format!("sw1_{i}"));
            let w2 = g(b, GateKind::And, &[o2, k[0], nk1], &format!("sw2_{i}"));
            let w3 = g(b, GateKind::And, &[o3, nk0, k[1]], &format!("sw3_{i}"));
            let w4 = g(b, GateKind::And, &[o4, k[0], k[1]], &format!("sw4_{i}"));
            g(b, GateKind::Or, &[w1, w2, w3, w4], &format!("s1_{i}"))
        })
        .collect();

    // Stage 2: ripple add a k2-inverted copy of B, carry-in k3.
    let mut carry = k[3];
    let mut carries = Vec::new();
    let sum: Vec<NetId> = (0..8)
        .map(|i| {
            let y = g(b, GateKind::Xor, &[bb[i], k[2]], &format!("ad_y{i}"));
            let (s, co) = full_adder(b, s1[i], y, carry, &format!("ad{i}"));
            carry = co;
            carries.push(co);
            s
        })
        .collect();

    // Stage 3: extend to 16 bits and rotate by 1/2/4 under m0..m2.
    let mut z: Vec<NetId> = sum.clone();
    for (i, &si) in sum.iter().enumerate() {
        z.push(g(b, GateKind::And, &[si, m[3]], &format!("ext{i}")));
    }
    for (layer, shift) in [(0usize, 1usize), (1, 2), (2, 4)] {
        let nsel = g(b, GateKind::Not, &[m[layer]], &format!("nrot{layer}"));
        let prev = z.clone();
        for (i, slot) in z.iter_mut().enumerate() {
            *slot = mux(
                b,
                m[layer],
                nsel,
                prev[i],
                prev[(i + 16 - shift) % 16],
                &format!("rot{layer}_{i}"),
            );
        }
    }

    // Stage 4: BCD-style adjust of each nibble that exceeds 9 (adds 6).
    let mut adj = z.clone();
    for n in 0..4 {
        let w = &z[4 * n..4 * n + 4];
        let over = g(b, GateKind::Or, &[w[2], w[1]], &format!("bcd{n}_o"));
        let gt9 = g(b, GateKind::And, &[w[3], over], &format!("bcd{n}_g"));
        let armed = g(b, GateKind::And, &[gt9, m[4]], &format!("bcd{n}_m"));
        let (q1, c1) = half_adder(b, w[1], armed, &format!("bcd{n}_1"));
        let (q2, c2) = full_adder(b, w[2], armed, c1, &format!("bcd{n}_2"));
        let q3 = g(b, GateKind::Xor, &[w[3], c2], &format!("bcd{n}_3"));
        adj[4 * n + 1] = q1;
        adj[4 * n + 2] = q2;
        adj[4 * n + 3] = q3;
    }

    // Stage 5: keyed output whitening over k4..k15 and m5..m9.
    let r: Vec<NetId> = (0..16)
        .map(|i| {
            let key = g(
                b,
                GateKind::And,
                &[k[4 + (i % 12)], m[5 + (i % 5)]],
                &format!("key{i}"),
            );
            g(b, GateKind::Xor, &[adj[i], key], &format!("r{i}"))
        })
        .collect();

    let zero = g(b, GateKind::Nor, &r, "zero");
    let parity = parity_tree(b, &r, "par", true);
    let overflow = g(b, GateKind::Xor, &[carries[7], carries[6]], "ovf");
    let eq_bits: Vec<NetId> = (0..8)
        .map(|i| g(b, GateKind::Xnor, &[a[i], bb[i]], &format!("eq{i}")))
        .collect();
    let equal = g(b, GateKind::And, &eq_bits, "equal");
    // a > b by magnitude: some bit has a=1,b=0 with all higher bits equal.
    let mut gt_terms = Vec::new();
    let mut higher_equal = Vec::new(); // eq_bits[i+1..] AND-chained from the top
    for i in (0..8).rev() {
        let nb = g(b, GateKind::Not, &[bb[i]], &format!("gt_nb{i}"));
        let here = g(b, GateKind::And, &[a[i], nb], &format!("gt_h{i}"));
        let term = match higher_equal.last() {
            None => here,
            Some(&he) => g(b, GateKind::And, &[here, he], &format!("gt_t{i}")),
        };
        gt_terms.push(term);
        if i > 0 {
            let next = match higher_equal.last() {
                None => eq_bits[i],
                Some(&he) => g(b, GateKind::And, &[eq_bits[i], he], &format!("gt_e{i}")),
            };
            higher_equal.push(next);
        }
    }
    let greater = g(b, GateKind::Or, &gt_terms, "greater");
    let carry_flag = g(b, GateKind::And, &[carries[7], m[9]], "cflag");

    for po in r
        .iter()
        .chain([&zero, &parity, &overflow, &equal, &greater, &carry_flag])
    {
        b.output(*po);
    }
    builder.build().expect("c3540_like assembles")
}

/// 16x16 array multiplier: 256 partial products rippled together row by
/// row, giving the deep reconvergent structure the original is known for.
/// 32 inputs, 32 outputs.
fn c6288_like() -> Circuit {
    let mut builder = CircuitBuilder::new("c6288_like");
    let b = &mut builder;
    let a = bus(b, "a", 16);
    let bb = bus(b, "b", 16);

    let pp = |b: &mut CircuitBuilder, i: usize, j: usize, a: &[NetId], bbv: &[NetId]| {
        g(b, GateKind::And, &[bbv[i], a[j]], &format!("pp{i}_{j}"))
    };

    // acc[p] is product bit p of the rows accumulated so far.
    let mut acc: Vec<NetId> = (0..16).map(|j| pp(b, 0, j, &a, &bb)).collect();
    let mut high_carry: Option<NetId> = None;
    for i in 1..16 {
        let row: Vec<NetId> = (0..16).map(|j| pp(b, i, j, &a, &bb)).collect();
        let (sum0, mut carry) = half_adder(b, acc[i], row[0], &format!("r{i}_0"));
        acc[i] = sum0;
        for j in 1..15 {
            let (s, c) = full_adder(b, acc[i + j], row[j], carry, &format!("r{i}_{j}"));
            acc[i + j] = s;
            carry = c;
        }
        // The top position is new this row; the previous row's carry out
        // of its own top position joins from the side.
        let (top, spill) = match high_carry {
            None => half_adder(b, row[15], carry, &format!("r{i}_15")),
            Some(hc) => full_adder(b, row[15], carry, hc, &format!("r{i}_15")),
        };
        acc.push(top);
        high_carry = Some(spill);
    }
    // The last spill carry is product bit 31.
    acc.push(high_carry.expect("15 accumulation rows ran"));

    for po in acc {
        b.output(po);
    }
    builder.build().expect("c6288_like assembles")
}

fn header(name: &str, original: &str, blurb: &str, c: &Circuit) -> String {
    let levels = levelize(c);
    format!(
        "# {name}: deterministic stand-in for the ISCAS-85 {original} benchmark.\n\
         # Same interface as the original ({pis} inputs, {pos} outputs); {blurb}.\n\
         # This is NOT the original netlist. {gates} gates, depth {depth}.\n\
         # Regenerate with `gen-benchmarks`; verify with `gen-benchmarks --check`.\n",
        pis = c.primary_inputs().len(),
        pos = c.primary_outputs().len(),
        gates = c.gate_count(),
        depth = levels.iter().max().copied().unwrap_or(0),
    )
}

/// Stand-in name, generator, canonical namesake, and header blurb.
type Entry = (&'static str, fn() -> Circuit, &'static str, &'static str);

fn main() -> ExitCode {
    let args = Args::parse();
    let entries: [Entry; 6] = [
        ("c432_like", c432_like, "c432", "four-bus priority decode"),
        ("c880_like", c880_like, "c880", "sliced ALU datapath with narrow per-bit cones"),
        (
            "c1355_like",
            c1355_like,
            "c1355",
            "32-bit error corrector with global parity, XORs expanded to NANDs",
        ),
        (
            "c1908_like",
            c1908_like,
            "c1908",
            "16-bit error corrector with keyed diffusion rounds",
        ),
        ("c3540_like", c3540_like, "c3540", "multi-stage ALU with BCD adjust and flags"),
        ("c6288_like", c6288_like, "c6288", "16x16 ripple array multiplier"),
    ];

    let mut failures = 0;
    for (name, build, original, blurb) in entries {
        let circuit = build();
        let text = format!("{}{}", header(name, original, blurb, &circuit), emit_bench(&circuit));
        let path = args.out_dir.join(format!("{name}.bench"));
        if args.check {
            match std::fs::read_to_string(&path) {
                Ok(on_disk) if on_disk == text => {
                    println!("ok      {}", path.display());
                }
                Ok(_) => {
                    eprintln!("MISMATCH {}", path.display());
                    failures += 1;
                }
                Err(e) => {
                    eprintln!("ERROR   {}: {e}", path.display());
                    failures += 1;
                }
            }
        } else {
            if let Err(e) = std::fs::create_dir_all(&args.out_dir) {
                eprintln!("ERROR   {}: {e}", args.out_dir.display());
                return ExitCode::FAILURE;
            }
            if let Err(e) = std::fs::write(&path, &text) {
                eprintln!("ERROR   {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
            let levels = levelize(&circuit);
            println!(
                "wrote   {} ({} inputs, {} outputs, {} gates, depth {})",
                path.display(),
                circuit.primary_inputs().len(),
                circuit.primary_outputs().len(),
                circuit.gate_count(),
                levels.iter().max().copied().unwrap_or(0),
            );
        }
    }
    if failures > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
