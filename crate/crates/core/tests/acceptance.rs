//! Acceptance gate: ten independent checks, one test per criterion, named
//! so they run (and report) in order. Each prints a
//! `criterion NN (...): pass` line, visible with `--nocapture`; a failing
//! check fails its own test with the same numbering.
//!
//! Criteria 07 and 08 run the full default training protocol (three seeds
//! of 120,000 timesteps each) and dominate the suite's runtime.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use htforge::atpg::{exhaustive_test, podem_guided, Fault, TestOutcome, TestResult};
use htforge::circuit::{
    eval_packed, parse_bench, Circuit, CircuitBuilder, GateKind, NetId,
};
use htforge::harness::{mean_input_access, run_experiment, RunConfig};
use htforge::ppo::{
    action_logits, batch_gradient, batch_loss, buffer::RolloutBuffer, sample_actions,
    state_value, train, PolicyParams, PpoConfig, TrainSchedule,
};
use htforge::rl_env::{scaled_steps, EnvConfig, TriggerAction, TrojanEnv};
use htforge::scoap::{compute_scoap, select_suspicious, select_suspicious_by_threshold};
use htforge::trojan::{random_insert, TrojanConfig};

fn load_bench(stem: &str) -> Circuit {
    let path = format!("../../benchmarks/{stem}.bench");
    let text =
        std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {path}: {e}"));
    parse_bench(&text, stem).unwrap_or_else(|e| panic!("parsing {path}: {e}"))
}

fn pass(n: u32, what: &str, detail: &str) {
    println!("criterion {n:02} ({what}): pass - {detail}");
}

// --- criterion 01 -------------------------------------------------------

const ALL_KINDS: [GateKind; 8] = [
    GateKind::And,
    GateKind::Nand,
    GateKind::Or,
    GateKind::Nor,
    GateKind::Xor,
    GateKind::Xnor,
    GateKind::Not,
    GateKind::Buf,
];

/// Random DAG circuit with at most 16 inputs and 60 gates. Gate inputs are
/// drawn from all earlier nets; nets nobody reads become outputs (except
/// unread inputs, which stay dangling to stress the unobservable paths).
fn random_circuit(seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_pi = rng.random_range(3..=16);
    let n_gates = rng.random_range(8..=60);
    let mut b = CircuitBuilder::new(format!("rand{seed}"));
    let mut pool: Vec<NetId> = (0..n_pi)
        .map(|i| b.input(&format!("i{i}")).unwrap())
        .collect();
    let mut read: Vec<bool> = vec![true; n_pi]; // inputs never become POs
    for gi in 0..n_gates {
        let kind = ALL_KINDS[rng.random_range(0..ALL_KINDS.len())];
        let (lo, hi) = kind.arity();
        let hi = hi.min(4).min(pool.len());
        let k = rng.random_range(lo..=hi);
        let ins: Vec<NetId> = rand::seq::index::sample(&mut rng, pool.len(), k)
            .iter()
            .map(|i| {
                read[i] = true;
                pool[i]
            })
            .collect();
        let net = b.gate(kind, &ins, &format!("g{gi}")).unwrap();
        pool.push(net);
        read.push(false);
    }
    for (i, net) in pool.iter().enumerate().skip(n_pi) {
        if !read[i] {
            b.output(*net);
        }
    }
    b.build().unwrap()
}

/// A detected fault's test cube must expose the fault on some output under
/// every completion of the unassigned inputs; all-0 and all-1 fills probe
/// both extremes.
fn assert_replays(c: &Circuit, fault: Fault, result: &TestResult) {
    for fill in [0u64, !0u64] {
        let words: Vec<u64> = c
            .primary_inputs()
            .iter()
            .map(|pi| match result.input_stack.get(pi) {
                Some(&true) => !0u64,
                Some(&false) => 0u64,
                None => fill,
            })
            .collect();
        let good = eval_packed(c, &words, None);
        let bad = eval_packed(c, &words, Some((fault.net, fault.stuck)));
        assert!(
            c.primary_outputs()
                .iter()
                .any(|po| good[po.index()] != bad[po.index()]),
            "criterion 01: test for {} {} stuck-at-{} does not replay with fill {}",
            c.name(),
            c.net(fault.net).name,
            u8::from(fault.stuck),
            fill & 1,
        );
    }
}

#[test]
fn criterion_01_atpg_matches_exhaustive_oracle() {
    let start = Instant::now();
    let mut circuits = vec![load_bench("c17")];
    circuits.extend((0..50).map(random_circuit));

    let mut faults = 0usize;
    let mut detected = 0usize;
    for c in &circuits {
        let table = compute_scoap(c);
        for net in c.nets() {
            for stuck in [false, true] {
                let fault = Fault { net: net.id, stuck };
                let p = podem_guided(c, fault, 10_000, &table).expect("podem runs");
                let e = exhaustive_test(c, fault).expect("exhaustive oracle runs");
                assert_ne!(
                    p.outcome,
                    TestOutcome::Aborted,
                    "criterion 01: aborted on {} {} stuck-at-{}",
                    c.name(),
                    net.name,
                    u8::from(stuck)
                );
                assert_eq!(
                    p.outcome,
                    e.outcome,
                    "criterion 01: oracle disagreement on {} {} stuck-at-{}",
                    c.name(),
                    net.name,
                    u8::from(stuck)
                );
                faults += 1;
                if p.detected() {
                    detected += 1;
                    assert_replays(c, fault, &p);
                }
            }
        }
    }

    let secs = start.elapsed().as_secs_f64();
    assert!(
        secs < 120.0,
        "criterion 01: runtime {secs:.1}s exceeds the 2-minute budget"
    );
    pass(
        1,
        "test generator agrees with exhaustive oracle",
        &format!(
            "{faults} faults over {} circuits, {detected} detected and replayed, {secs:.1}s",
            circuits.len()
        ),
    );
}

// --- criterion 02 -------------------------------------------------------

/// Hand-derived testability values for every c17 net: (name, cc0, cc1, co).
const C17_GOLDEN: [(&str, u64, u64, u64); 11] = [
    ("1", 1, 1, 5),
    ("2", 1, 1, 6),
    ("3", 1, 1, 5),
    ("6", 1, 1, 7),
    ("7", 1, 1, 6),
    ("10", 3, 2, 3),
    ("11", 3, 2, 5),
    ("16", 4, 2, 3),
    ("19", 4, 2, 3),
    ("22", 5, 4, 0),
    ("23", 5, 5, 0),
];

#[test]
fn criterion_02_scoap_matches_hand_derived_goldens() {
    let c = load_bench("c17");
    let table = compute_scoap(&c);
    assert_eq!(table.len(), 11, "criterion 02: c17 has 11 nets");
    for (name, cc0, cc1, co) in C17_GOLDEN {
        let id = c.net_id(name).unwrap();
        assert_eq!(table.cc0[id.index()], cc0, "criterion 02: cc0({name})");
        assert_eq!(table.cc1[id.index()], cc1, "criterion 02: cc1({name})");
        assert_eq!(table.co[id.index()], co, "criterion 02: co({name})");
        let expected_hts = cc1.abs_diff(cc0) as f64 / cc0.max(cc1) as f64;
        let expected_ocr = co as f64 / (cc0 + cc1) as f64;
        assert!(
            (table.hts(id) - expected_hts).abs() <= 1e-12,
            "criterion 02: hts({name})"
        );
        assert!(
            (table.ocr(id) - expected_ocr).abs() <= 1e-12,
            "criterion 02: ocr({name})"
        );
    }
    pass(
        2,
        "testability matches hand-derived goldens",
        "all 11 c17 nets exact; derived scores within 1e-12",
    );
}

// --- criterion 03 -------------------------------------------------------

const BENCHMARKS: [&str; 6] = [
    "c432_like",
    "c880_like",
    "c1355_like",
    "c1908_like",
    "c3540_like",
    "c6288_like",
];

#[test]
fn criterion_03_dormant_trojans_preserve_function() {
    let start = Instant::now();
    let mut vectors_checked = 0u64;
    for (ci, name) in BENCHMARKS.iter().enumerate() {
        let c = load_bench(name);
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + ci as u64);
        for _ in 0..100 {
            let (infected, inst) =
                random_insert(&c, TrojanConfig { n_triggers: 2 }, &mut rng)
                    .expect("random insertion");
            // 16 packed evaluations x 64 lanes = 1024 random vectors.
            for _ in 0..16 {
                let words: Vec<u64> =
                    (0..c.primary_inputs().len()).map(|_| rng.random()).collect();
                let orig = eval_packed(&c, &words, None);
                let inf = eval_packed(&infected, &words, None);
                let dormant = !inf[inst.trigger_and_net.index()];
                for (po_orig, po_inf) in
                    c.primary_outputs().iter().zip(infected.primary_outputs())
                {
                    assert_eq!(
                        (orig[po_orig.index()] ^ inf[po_inf.index()]) & dormant,
                        0,
                        "criterion 03: dormant output divergence in {name}"
                    );
                }
                vectors_checked += 64;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(
        secs < 600.0,
        "criterion 03: runtime {secs:.1}s exceeds the 10-minute budget"
    );
    pass(
        3,
        "dormant trojans preserve function",
        &format!(
            "100 insertions x 1024 vectors on each of 6 circuits \
             ({vectors_checked} lane checks), 0 violations, {secs:.1}s"
        ),
    );
}

// --- criterion 04 -------------------------------------------------------

fn env_config(seed: u64) -> EnvConfig {
    EnvConfig {
        trojan: TrojanConfig { n_triggers: 2 },
        steps_per_episode: 8,
        seed,
        podem_backtrack_limit: 10_000,
    }
}

const NO_MOVES: [TriggerAction; 2] = [TriggerAction::NoAction, TriggerAction::NoAction];

/// Inputs `a` and `b` as triggers, a buffered input `c` as the target, and
/// `spare` further inputs the activating test never touches. The test
/// generator must assign `a` and `b` (trigger justification) and `c` (the
/// payload's other operand), so the input stack covers exactly 3 of the
/// 3 + spare inputs.
fn reward_probe(spare: usize) -> (Circuit, [NetId; 2], NetId) {
    let mut b = CircuitBuilder::new("probe");
    let a = b.input("a").unwrap();
    let b2 = b.input("b").unwrap();
    let c = b.input("c").unwrap();
    let v = b.gate(GateKind::Buf, &[c], "v").unwrap();
    b.output(v);
    for i in 0..spare {
        let s = b.input(&format!("s{i}")).unwrap();
        let w = b.gate(GateKind::Buf, &[s], &format!("w{i}")).unwrap();
        b.output(w);
    }
    (b.build().unwrap(), [a, b2], v)
}

#[test]
fn criterion_04_reward_law_exact_values() {
    // No unused inputs: the activating test assigns all three, paying the
    // full 20.
    let (full, triggers, target) = reward_probe(0);
    let table = compute_scoap(&full);
    let everything = select_suspicious(&full, &table, 1.0);
    let mut env = TrojanEnv::new(full, everything, env_config(1)).unwrap();
    env.set_placement(&triggers, target).unwrap();
    let out = env.step(&NO_MOVES).unwrap();
    assert!(out.info.activated, "criterion 04: full case must activate");
    assert_eq!(out.info.icp, Some(1.0), "criterion 04: full coverage");
    assert_eq!(out.reward, 20.0, "criterion 04: full input stack pays 20");

    // One spare input stays unassigned: 3 of 4 inputs pay exactly 20*(3/4).
    let (partial, triggers, target) = reward_probe(1);
    let table = compute_scoap(&partial);
    let everything = select_suspicious(&partial, &table, 1.0);
    let nothing = select_suspicious_by_threshold(&partial, &table, 2.0, 0.0);
    assert!(nothing.is_empty());

    let mut env = TrojanEnv::new(partial.clone(), everything, env_config(2)).unwrap();
    env.set_placement(&triggers, target).unwrap();
    let out = env.step(&NO_MOVES).unwrap();
    assert_eq!(out.info.icp, Some(3.0 / 4.0), "criterion 04: partial coverage");
    assert_eq!(
        out.reward,
        20.0 * (3.0 / 4.0),
        "criterion 04: partial input stack pays 20k/n"
    );

    // With no suspicious trigger the step pays -1 and skips the oracle.
    let mut env = TrojanEnv::new(partial, nothing, env_config(3)).unwrap();
    env.set_placement(&triggers, target).unwrap();
    let out = env.step(&NO_MOVES).unwrap();
    assert!(!out.info.activated);
    assert_eq!(out.info.icp, None);
    assert_eq!(out.reward, -1.0, "criterion 04: non-suspicious triggers pay -1");

    pass(
        4,
        "reward law exact",
        "-1 non-suspicious, 20*(3/4) partial, 20 full - all bit-exact",
    );
}

// --- criterion 05 -------------------------------------------------------

#[test]
fn criterion_05_training_budget_schedule() {
    let schedule = TrainSchedule::default();
    assert_eq!(schedule.base_timesteps, 120_000);
    assert_eq!(schedule.growth, 0.10);
    for (n, budget) in [(2, 120_000), (3, 132_000), (4, 145_200), (5, 159_720)] {
        assert_eq!(
            schedule.total_timesteps(n),
            budget,
            "criterion 05: budget for {n} triggers"
        );
        assert_eq!(scaled_steps(120_000, 0.10, n), budget);
    }
    pass(
        5,
        "training budget schedule",
        "120000 / 132000 / 145200 / 159720 timesteps for 2..=5 triggers",
    );
}

// --- criterion 06 -------------------------------------------------------

fn c17_env(seed: u64, steps_per_episode: u32) -> TrojanEnv {
    let c = load_bench("c17");
    let table = compute_scoap(&c);
    let suspicious = select_suspicious(&c, &table, 1.0);
    TrojanEnv::new(
        c,
        suspicious,
        EnvConfig {
            trojan: TrojanConfig { n_triggers: 2 },
            steps_per_episode,
            seed,
            podem_backtrack_limit: 10_000,
        },
    )
    .unwrap()
}

#[test]
fn criterion_06_ppo_gradients_and_stability() {
    // (a) Analytic gradient vs. central finite differences on a scripted
    // two-state batch. Stale log-probabilities put different rows on both
    // clip branches, away from the kinks.
    let cfg = PpoConfig {
        hidden: vec![4],
        ..PpoConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let params = PolicyParams::new(1, 1, &[4], 1.0, &mut rng);
    let mut buf = RolloutBuffer::default();
    let staleness = [0.0, 0.3, -0.3, 0.05, 0.0, -0.35, 0.35, 0.0];
    for (t, offset) in staleness.into_iter().enumerate() {
        let state = vec![if t % 2 == 0 { 0.0 } else { 1.0 }];
        let sampled = sample_actions(&params, &state, &mut rng);
        let value = state_value(&params, &state);
        let reward = if t % 2 == 1 { 1.0 } else { -0.2 };
        let done = t == 3 || t == 7;
        buf.push(
            state,
            sampled.actions,
            sampled.log_prob + offset,
            value,
            reward,
            done,
        );
    }
    buf.compute_gae(cfg.gamma, cfg.gae_lambda, 0.0);
    buf.normalize_advantages();
    let idx: Vec<usize> = (0..buf.len()).collect();
    let grad = batch_gradient(&params, &buf, &idx, &cfg);

    let h = 1e-6;
    let mut max_rel = 0.0f64;
    let mut n_params = 0usize;
    for actor_side in [true, false] {
        let dim = if actor_side {
            params.actor.len()
        } else {
            params.critic.len()
        };
        for i in 0..dim {
            let mut plus = params.clone();
            let mut minus = params.clone();
            if actor_side {
                plus.actor[i] += h;
                minus.actor[i] -= h;
            } else {
                plus.critic[i] += h;
                minus.critic[i] -= h;
            }
            let fd = (batch_loss(&plus, &buf, &idx, &cfg)
                - batch_loss(&minus, &buf, &idx, &cfg))
                / (2.0 * h);
            let analytic = if actor_side {
                grad.actor[i]
            } else {
                grad.critic[i]
            };
            let rel = (analytic - fd).abs() / analytic.abs().max(fd.abs()).max(1e-6);
            max_rel = max_rel.max(rel);
            n_params += 1;
        }
    }
    assert!(
        max_rel < 1e-4,
        "criterion 06: max relative gradient error {max_rel:.3e}"
    );

    // (b) Zero learning rate must leave parameters bit-identical no matter
    // how many updates run.
    let frozen = PpoConfig {
        learning_rate: 0.0,
        rollout_len: 40,
        minibatch_size: 10,
        epochs: 2,
        hidden: vec![8],
        ..PpoConfig::default()
    };
    let one = TrainSchedule {
        base_timesteps: 1,
        growth: 0.10,
    };
    let many = TrainSchedule {
        base_timesteps: 120,
        growth: 0.10,
    };
    let r1 = train(&mut c17_env(5, 20), &one, &frozen, 9, |_, _| {}).unwrap();
    let r2 = train(&mut c17_env(5, 20), &many, &frozen, 9, |_, _| {}).unwrap();
    assert_eq!(
        r1.params, r2.params,
        "criterion 06: zero learning rate moved parameters"
    );

    // (c) After every real update, each head's probabilities must still
    // normalize, recomputed from the logits the stable-softmax way.
    let live = PpoConfig {
        rollout_len: 64,
        minibatch_size: 16,
        epochs: 2,
        hidden: vec![8],
        ..PpoConfig::default()
    };
    let short = TrainSchedule {
        base_timesteps: 448,
        growth: 0.10,
    };
    let probes: [[f64; 4]; 4] = [
        [0.0, 0.0, 0.0, 0.0],
        [0.25, 0.5, 0.75, 1.0],
        [1.0, 1.0, 1.0, 1.0],
        [0.4, 0.1, 0.9, 0.6],
    ];
    let mut updates = 0u32;
    let mut worst = 0.0f64;
    train(&mut c17_env(6, 20), &short, &live, 13, |_, params| {
        updates += 1;
        for probe in &probes {
            let logits = action_logits(params, probe);
            let k = params.actions_per_head;
            for head in logits.chunks(k) {
                let max = head.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let log_sum = head.iter().map(|z| (z - max).exp()).sum::<f64>().ln();
                let total: f64 = head.iter().map(|z| (z - max - log_sum).exp()).sum();
                worst = worst.max((total - 1.0).abs());
            }
        }
    })
    .unwrap();
    assert!(updates >= 7, "criterion 06: expected 7 updates, saw {updates}");
    assert!(
        worst <= 1e-9,
        "criterion 06: head probabilities drifted from 1 by {worst:.3e}"
    );

    pass(
        6,
        "policy optimization correct",
        &format!(
            "gradient max rel err {max_rel:.2e} over {n_params} parameters; \
             bit-stable at zero learning rate; probability sums within {worst:.1e} \
             across {updates} updates"
        ),
    );
}

// --- criterion 07 -------------------------------------------------------

#[test]
fn criterion_07_learning_on_c432_like() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let config = RunConfig {
        circuit: PathBuf::from("../../benchmarks/c432_like.bench"),
        seeds: vec![1, 2, 3],
        out_dir: dir.path().to_path_buf(),
        ..RunConfig::default()
    };
    let outcome = run_experiment(&config, |_| {}).expect("experiment runs");

    let best = outcome.merged.iter().map(|r| r.icp).fold(0.0f64, f64::max);
    assert!(
        best >= 0.60,
        "criterion 07: best input coverage {best:.3} is below the 0.60 gate"
    );

    let mut improved = 0;
    for run in &outcome.seed_runs {
        let n = run.step_rewards.len();
        let k = n / 10;
        let first: f64 = run.step_rewards[..k].iter().sum::<f64>() / k as f64;
        let last: f64 = run.step_rewards[n - k..].iter().sum::<f64>() / k as f64;
        if last > first {
            improved += 1;
        }
    }
    assert!(
        improved >= 2,
        "criterion 07: mean step reward improved in only {improved} of 3 seeds"
    );

    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 3.0 * 4.0 * 3600.0, "criterion 07: over the runtime budget");
    pass(
        7,
        "agent learns on the priority-decode benchmark",
        &format!(
            "best input coverage {best:.3} (stochastic reference: 0.81), \
             reward improved in {improved}/3 seeds, \
             {} distinct trojans, {secs:.0}s",
            outcome.report.distinct_trojans
        ),
    );
}

// --- criterion 08 -------------------------------------------------------

#[test]
fn criterion_08_full_coverage_trojan_on_c1355_like() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let config = RunConfig {
        circuit: PathBuf::from("../../benchmarks/c1355_like.bench"),
        seeds: vec![1, 2, 3],
        out_dir: dir.path().to_path_buf(),
        ..RunConfig::default()
    };
    let outcome = run_experiment(&config, |_| {}).expect("experiment runs");
    let best = outcome.merged.iter().map(|r| r.icp).fold(0.0f64, f64::max);
    let secs = start.elapsed().as_secs_f64();

    // A full-coverage discovery passes outright. The fallback defined for
    // this criterion is an honestly reported coverage gap: the run report
    // must carry the best value, and criteria 01-06 stay the hard floor.
    if outcome.merged.iter().any(|r| r.icp == 1.0) {
        pass(
            8,
            "full-coverage trojan on the parity-corrector benchmark",
            &format!(
                "input coverage 1.0 reached ({} distinct trojans, {secs:.0}s)",
                outcome.report.distinct_trojans
            ),
        );
    } else {
        println!(
            "criterion 08 (full-coverage trojan on the parity-corrector benchmark): \
             coverage gap - best input coverage {best:.3} of 1.0 across 3 seeds \
             ({} distinct trojans, {secs:.0}s); reported per the criterion's fallback",
            outcome.report.distinct_trojans
        );
        assert!(
            best > 0.0,
            "criterion 08: no activatable trojan found at all - that is a failure, \
             not a coverage gap"
        );
    }
}

// --- criterion 09 -------------------------------------------------------

// Frozen from this computation on the bundled netlists.
const C880_LIKE_MEAN_INPUT_ACCESS: f64 = 0.09583333333333341;
const C1355_LIKE_MEAN_INPUT_ACCESS: f64 = 0.36121951219512155;

#[test]
fn criterion_09_input_access_ordering() {
    let sliced = mean_input_access(&load_bench("c880_like"));
    let parity = mean_input_access(&load_bench("c1355_like"));
    assert!(
        parity > sliced,
        "criterion 09: expected the parity corrector ({parity:.6}) to see more \
         of the input space than the sliced datapath ({sliced:.6})"
    );
    assert!(
        (sliced - C880_LIKE_MEAN_INPUT_ACCESS).abs() < 1e-12,
        "criterion 09: c880_like mean input access drifted: {sliced:.17e}"
    );
    assert!(
        (parity - C1355_LIKE_MEAN_INPUT_ACCESS).abs() < 1e-12,
        "criterion 09: c1355_like mean input access drifted: {parity:.17e}"
    );
    pass(
        9,
        "input-access ordering",
        &format!("c880_like {sliced:.6} < c1355_like {parity:.6}, both at frozen goldens"),
    );
}

// --- criterion 10 -------------------------------------------------------

fn short_deterministic_run(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let config = RunConfig {
        circuit: PathBuf::from("../../benchmarks/c17.bench"),
        suspicious_fraction: 1.0,
        steps_per_episode: 20,
        schedule: TrainSchedule {
            base_timesteps: 120,
            growth: 0.10,
        },
        seeds: vec![1, 2],
        out_dir: dir.to_path_buf(),
        ppo: PpoConfig {
            rollout_len: 40,
            minibatch_size: 10,
            epochs: 2,
            hidden: vec![8],
            ..PpoConfig::default()
        },
        ..RunConfig::default()
    };
    run_experiment(&config, |_| {}).expect("experiment runs");
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|entry| {
            let entry = entry.unwrap();
            (
                entry.file_name().to_string_lossy().into_owned(),
                std::fs::read(entry.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn criterion_10_byte_identical_reruns() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let a = short_deterministic_run(dir_a.path());
    let b = short_deterministic_run(dir_b.path());

    assert_eq!(
        a.iter().map(|(n, _)| n).collect::<Vec<_>>(),
        b.iter().map(|(n, _)| n).collect::<Vec<_>>(),
        "criterion 10: artifact sets differ"
    );
    for ((name, bytes_a), (_, bytes_b)) in a.iter().zip(&b) {
        assert!(!bytes_a.is_empty(), "criterion 10: {name} is empty");
        assert_eq!(
            bytes_a, bytes_b,
            "criterion 10: {name} differs between reruns"
        );
    }
    pass(
        10,
        "byte-identical reruns",
        &format!(
            "{} artifacts (logs, metrics, policies, reports) identical across \
             two independent two-seed runs",
            a.len()
        ),
    );
}
