//! Experiment harness: loading netlists, running seeded training
//! campaigns, and writing every artifact a run produces.
//!
//! One [`run_experiment`] call executes the full pipeline per seed —
//! parse, testability analysis, rare-net selection, environment, PPO —
//! and leaves a self-contained directory behind:
//!
//! * `trojans_seed<k>.jsonl` — every distinct activatable Trojan found;
//! * `metrics_seed<k>.tsv` — training curve, one row per policy update;
//! * `policy_seed<k>.json` — final policy checkpoint;
//! * `merged_trojans.jsonl` — cross-seed union, first discovery kept;
//! * `report.tsv` — headline numbers (counts above ICP thresholds, etc.);
//! * `scatter.tsv` — per-Trojan rareness/level/ICP triples for plotting.
//!
//! Outputs depend only on the configuration, so re-running a config
//! reproduces every file byte for byte.

pub mod config;

use std::collections::BTreeMap;
use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{
    emit_bench, emit_verilog, parse_bench, parse_json_netlist, Circuit, FaninClosure,
    JsonNetlistError, ParseError,
};
use crate::ppo::{train, MetricsRow, TrainError};
use crate::rl_env::{scaled_steps, EnvConfig, EnvError, TrojanEnv, TrojanLogRecord};
use crate::scoap::{compute_scoap, select_suspicious, ScoapTable};
use crate::trojan::{check_activation, icp, TrojanConfig, TrojanInstance};

pub use config::{ConfigError, RunConfig};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Bench {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: JsonNetlistError,
    },
    #[error("{path}: expected a .bench or .json netlist")]
    UnknownFormat { path: PathBuf },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Train(#[from] TrainError),
    #[error(transparent)]
    Atpg(#[from] crate::atpg::AtpgError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_owned(),
        source,
    }
}

/// Reads a netlist in either supported format, picking the parser by file
/// extension. A `.bench` circuit is named after the file stem; a Yosys
/// `.json` circuit keeps its module name.
pub fn load_netlist(path: &Path) -> Result<Circuit, HarnessError> {
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "netlist".to_owned());
    let ext = path
        .extension()
        .map(|e| e.to_ascii_lowercase())
        .unwrap_or_default();
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    if ext == "bench" {
        parse_bench(&text, &name).map_err(|source| HarnessError::Bench {
            path: path.to_owned(),
            source,
        })
    } else if ext == "json" {
        parse_json_netlist(&text).map_err(|source| HarnessError::Json {
            path: path.to_owned(),
            source,
        })
    } else {
        Err(HarnessError::UnknownFormat {
            path: path.to_owned(),
        })
    }
}

/// Fraction of primary inputs inside `net`'s transitive fanin cone. A
/// primary input's cone is itself, so its access is `1 / |PIs|`.
pub fn input_access(c: &Circuit, closure: &FaninClosure, net: crate::circuit::NetId) -> f64 {
    closure.cone_overlap(net, c.primary_inputs()) as f64 / c.primary_inputs().len() as f64
}

/// Mean input access over every net: a structural proxy for how much of
/// the input space the average internal signal can see. Wide shared cones
/// (parity trees) push it toward 1; narrow sliced datapaths keep it low.
pub fn mean_input_access(c: &Circuit) -> f64 {
    let closure = FaninClosure::build(c);
    let total: f64 = c
        .nets()
        .iter()
        .map(|net| input_access(c, &closure, net.id))
        .sum();
    total / c.net_count() as f64
}

/// Headline numbers for one run, written as `report.tsv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub circuit: String,
    pub nets: usize,
    pub primary_inputs: usize,
    pub primary_outputs: usize,
    pub suspicious_nets: usize,
    pub distinct_trojans: usize,
    pub icp_ge_060: usize,
    pub icp_ge_065: usize,
    pub icp_ge_070: usize,
    /// Mean ICP of the ten highest-ICP Trojans (all of them when fewer).
    pub top10_mean_icp: f64,
    pub mean_input_access: f64,
}

impl ReportRow {
    pub const HEADER: &'static str = "circuit\tnets\tprimary_inputs\tprimary_outputs\t\
        suspicious_nets\tdistinct_trojans\ticp_ge_0.60\ticp_ge_0.65\ticp_ge_0.70\t\
        top10_mean_icp\tmean_input_access";

    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.6}\t{:.6}",
            self.circuit,
            self.nets,
            self.primary_inputs,
            self.primary_outputs,
            self.suspicious_nets,
            self.distinct_trojans,
            self.icp_ge_060,
            self.icp_ge_065,
            self.icp_ge_070,
            self.top10_mean_icp,
            self.mean_input_access,
        )
    }
}

/// Aggregates a merged Trojan list into the report row.
pub fn build_report(
    c: &Circuit,
    suspicious_nets: usize,
    merged: &[TrojanLogRecord],
) -> ReportRow {
    let count_ge = |t: f64| merged.iter().filter(|r| r.icp >= t).count();
    let mut icps: Vec<&TrojanLogRecord> = merged.iter().collect();
    icps.sort_by(|a, b| {
        b.icp
            .partial_cmp(&a.icp)
            .expect("ICP values are finite")
            .then_with(|| a.triggers.cmp(&b.triggers))
            .then_with(|| a.target.cmp(&b.target))
    });
    let top: Vec<f64> = icps.iter().take(10).map(|r| r.icp).collect();
    let top10_mean_icp = if top.is_empty() {
        0.0
    } else {
        top.iter().sum::<f64>() / top.len() as f64
    };
    ReportRow {
        circuit: c.name().to_owned(),
        nets: c.net_count(),
        primary_inputs: c.primary_inputs().len(),
        primary_outputs: c.primary_outputs().len(),
        suspicious_nets,
        distinct_trojans: merged.len(),
        icp_ge_060: count_ge(0.60),
        icp_ge_065: count_ge(0.65),
        icp_ge_070: count_ge(0.70),
        top10_mean_icp,
        mean_input_access: mean_input_access(c),
    }
}

/// Per-Trojan plotting data: how rare the triggers were, how deep the
/// payload sat, and the ICP the activating test achieved.
fn build_scatter(c: &Circuit, table: &ScoapTable, merged: &[TrojanLogRecord]) -> String {
    let mut out = String::from("trigger_mean_hts\ttarget_level\ticp\n");
    for rec in merged {
        let hts_sum: f64 = rec
            .triggers
            .iter()
            .map(|name| table.hts(c.net_id(name).expect("trigger name from this circuit")))
            .sum();
        let target_level = c.level(c.net_id(&rec.target).expect("target name from this circuit"));
        let _ = writeln!(
            out,
            "{:.6}\t{}\t{:.6}",
            hts_sum / rec.triggers.len() as f64,
            target_level,
            rec.icp,
        );
    }
    out
}

/// Everything one seed's training run produced.
#[derive(Debug)]
pub struct SeedRun {
    pub seed: u64,
    pub metrics: Vec<MetricsRow>,
    /// Reward of every environment step, in order.
    pub step_rewards: Vec<f64>,
    pub trojans: Vec<TrojanLogRecord>,
}

/// In-memory results of a full experiment (everything also lands on disk).
#[derive(Debug)]
pub struct RunOutcome {
    pub seed_runs: Vec<SeedRun>,
    pub merged: Vec<TrojanLogRecord>,
    pub report: ReportRow,
}

/// Progress callbacks emitted while an experiment runs.
#[derive(Debug, Clone, Copy)]
pub enum Progress<'a> {
    SeedStarted { seed: u64, total_timesteps: u64 },
    Update { seed: u64, row: &'a MetricsRow },
    SeedFinished { seed: u64, distinct_trojans: usize },
}

/// Runs the full pipeline for every configured seed and writes all
/// artifacts into `config.out_dir`.
pub fn run_experiment(
    config: &RunConfig,
    mut progress: impl FnMut(Progress),
) -> Result<RunOutcome, HarnessError> {
    config.validate()?;
    let base = load_netlist(&config.circuit)?;
    let table = compute_scoap(&base);
    let suspicious = select_suspicious(&base, &table, config.suspicious_fraction);
    let steps_per_episode = scaled_steps(
        config.steps_per_episode as u64,
        config.schedule.growth,
        config.n_triggers,
    ) as u32;

    std::fs::create_dir_all(&config.out_dir).map_err(io_err(&config.out_dir))?;
    let write = |name: String, bytes: &str| -> Result<(), HarnessError> {
        let path = config.out_dir.join(name);
        std::fs::write(&path, bytes).map_err(io_err(&path))
    };

    let mut seed_runs = Vec::with_capacity(config.seeds.len());
    for &seed in &config.seeds {
        progress(Progress::SeedStarted {
            seed,
            total_timesteps: config.schedule.total_timesteps(config.n_triggers),
        });
        let mut env = TrojanEnv::new(
            base.clone(),
            suspicious.clone(),
            EnvConfig {
                trojan: TrojanConfig {
                    n_triggers: config.n_triggers,
                },
                steps_per_episode,
                seed,
                podem_backtrack_limit: config.podem_backtrack_limit,
            },
        )?;
        let result = train(&mut env, &config.schedule, &config.ppo, seed, |row, _| {
            progress(Progress::Update { seed, row })
        })?;
        let trojans = env.take_log();
        progress(Progress::SeedFinished {
            seed,
            distinct_trojans: trojans.len(),
        });

        let mut jsonl = String::new();
        for rec in &trojans {
            let _ = writeln!(
                jsonl,
                "{}",
                serde_json::to_string(rec).expect("log records always serialize")
            );
        }
        write(format!("trojans_seed{seed}.jsonl"), &jsonl)?;

        let mut tsv = String::from("timestep\tepisodes\tmean_episode_reward\ttrojans_found\n");
        for row in &result.metrics {
            let _ = writeln!(
                tsv,
                "{}\t{}\t{:.6}\t{}",
                row.timestep, row.episodes, row.mean_episode_reward, row.trojans_found
            );
        }
        write(format!("metrics_seed{seed}.tsv"), &tsv)?;
        write(format!("policy_seed{seed}.json"), &(result.params.to_json() + "\n"))?;

        seed_runs.push(SeedRun {
            seed,
            metrics: result.metrics,
            step_rewards: result.step_rewards,
            trojans,
        });
    }

    // Union across seeds, keeping each configuration's first discovery in
    // seed-list order.
    let mut seen: HashSet<(Vec<String>, String)> = HashSet::new();
    let mut merged = Vec::new();
    for run in &seed_runs {
        for rec in &run.trojans {
            if seen.insert((rec.triggers.clone(), rec.target.clone())) {
                merged.push(rec.clone());
            }
        }
    }
    let mut jsonl = String::new();
    for rec in &merged {
        let _ = writeln!(
            jsonl,
            "{}",
            serde_json::to_string(rec).expect("log records always serialize")
        );
    }
    write("merged_trojans.jsonl".into(), &jsonl)?;

    let report = build_report(&base, suspicious.len(), &merged);
    write(
        "report.tsv".into(),
        &format!("{}\n{}\n", ReportRow::HEADER, report.to_tsv()),
    )?;
    write("scatter.tsv".into(), &build_scatter(&base, &table, &merged))?;

    Ok(RunOutcome {
        seed_runs,
        merged,
        report,
    })
}

/// Metadata written next to an emitted infected netlist.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrojanMetadata {
    pub circuit: String,
    pub triggers: Vec<String>,
    pub target: String,
    pub trigger_and: String,
    pub payload: String,
    /// Whether the activation oracle proved the Trojan triggerable.
    pub activated: bool,
    pub icp: Option<f64>,
    /// The activating primary-input assignment, when one was found.
    pub input_stack: BTreeMap<String, u8>,
}

/// Paths and metadata from [`emit_infected`].
#[derive(Debug)]
pub struct InfectedArtifacts {
    pub bench_path: PathBuf,
    pub verilog_path: PathBuf,
    pub metadata_path: PathBuf,
    pub metadata: TrojanMetadata,
}

/// Writes an infected circuit as `<stem>.bench`, `<stem>.v`, and
/// `<stem>.json` (metadata), re-running the activation oracle so the
/// metadata states what is actually known about the emitted netlist.
pub fn emit_infected(
    infected: &Circuit,
    inst: &TrojanInstance,
    backtrack_limit: u32,
    dir: &Path,
    stem: &str,
) -> Result<InfectedArtifacts, HarnessError> {
    let table = compute_scoap(infected);
    let result = check_activation(infected, inst, &table, backtrack_limit)?;
    let activated = result.detected();
    let mut triggers: Vec<_> = inst.trigger_nets.clone();
    triggers.sort();
    let metadata = TrojanMetadata {
        circuit: infected.name().to_owned(),
        triggers: triggers
            .iter()
            .map(|&t| infected.net(t).name.clone())
            .collect(),
        target: infected.net(inst.target_net).name.clone(),
        trigger_and: infected.net(inst.trigger_and_net).name.clone(),
        payload: infected.net(inst.payload_net).name.clone(),
        activated,
        icp: activated.then(|| icp(&result, infected).expect("detected result has coverage")),
        input_stack: result
            .input_stack
            .iter()
            .map(|(&pi, &v)| (infected.net(pi).name.clone(), v as u8))
            .collect(),
    };

    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let bench_path = dir.join(format!("{stem}.bench"));
    std::fs::write(&bench_path, emit_bench(infected)).map_err(io_err(&bench_path))?;
    let verilog_path = dir.join(format!("{stem}.v"));
    std::fs::write(&verilog_path, emit_verilog(infected)).map_err(io_err(&verilog_path))?;
    let metadata_path = dir.join(format!("{stem}.json"));
    let json = serde_json::to_string_pretty(&metadata).expect("metadata always serializes");
    std::fs::write(&metadata_path, json + "\n").map_err(io_err(&metadata_path))?;

    Ok(InfectedArtifacts {
        bench_path,
        verilog_path,
        metadata_path,
        metadata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::structurally_equal;
    use crate::trojan::insert;

    fn c17() -> Circuit {
        parse_bench(include_str!("../../../../benchmarks/c17.bench"), "c17").unwrap()
    }

    fn read(dir: &Path, name: &str) -> String {
        std::fs::read_to_string(dir.join(name)).unwrap()
    }

    fn quick_config(dir: &Path) -> RunConfig {
        let mut cfg = RunConfig::default();
        cfg.set("n_triggers", "2").unwrap();
        cfg.set("suspicious_fraction", "1.0").unwrap();
        cfg.set("steps_per_episode", "20").unwrap();
        cfg.set("base_timesteps", "120").unwrap();
        cfg.set("seeds", "1,2").unwrap();
        cfg.set("rollout_len", "40").unwrap();
        cfg.set("minibatch_size", "10").unwrap();
        cfg.set("epochs", "2").unwrap();
        cfg.set("hidden", "8").unwrap();
        cfg.circuit = PathBuf::from("../../benchmarks/c17.bench");
        cfg.out_dir = dir.to_owned();
        cfg
    }

    #[test]
    fn input_access_on_c17_matches_hand_counts() {
        let c = c17();
        let closure = FaninClosure::build(&c);
        let id = |n: &str| c.net_id(n).unwrap();
        // PIs see only themselves.
        assert_eq!(input_access(&c, &closure, id("1")), 0.2);
        // 10 = NAND(1, 3); 16 = NAND(2, 11) with 11 = NAND(3, 6).
        assert_eq!(input_access(&c, &closure, id("10")), 0.4);
        assert_eq!(input_access(&c, &closure, id("16")), 0.6);
        // Output cone of 22: {1, 2, 3, 6}.
        assert_eq!(input_access(&c, &closure, id("22")), 0.8);
        let mean = mean_input_access(&c);
        assert!((mean - 4.6 / 11.0).abs() < 1e-12);
    }

    #[test]
    fn report_counts_icp_thresholds_and_top10() {
        let c = c17();
        let rec = |triggers: &[&str], target: &str, icp: f64| TrojanLogRecord {
            circuit: "c17".into(),
            seed: 0,
            episode: 0,
            step: 1,
            triggers: triggers.iter().map(|s| s.to_string()).collect(),
            target: target.into(),
            icp,
            input_stack: BTreeMap::new(),
        };
        let merged = vec![
            rec(&["10", "11"], "16", 0.8),
            rec(&["10", "11"], "19", 0.6),
            rec(&["1", "2"], "22", 0.65),
            rec(&["1", "7"], "23", 0.4),
        ];
        let report = build_report(&c, 3, &merged);
        assert_eq!(report.distinct_trojans, 4);
        assert_eq!(report.icp_ge_060, 3);
        assert_eq!(report.icp_ge_065, 2);
        assert_eq!(report.icp_ge_070, 1);
        assert!((report.top10_mean_icp - (0.8 + 0.65 + 0.6 + 0.4) / 4.0).abs() < 1e-12);
        assert_eq!(report.suspicious_nets, 3);
        assert_eq!(report.nets, 11);
        assert_eq!(report.primary_inputs, 5);

        let empty = build_report(&c, 0, &[]);
        assert_eq!(empty.distinct_trojans, 0);
        assert_eq!(empty.top10_mean_icp, 0.0);
    }

    #[test]
    fn load_netlist_rejects_unknown_extension() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        std::fs::write(&path, "INPUT(a)").unwrap();
        assert!(matches!(
            load_netlist(&path),
            Err(HarnessError::UnknownFormat { .. })
        ));
        assert!(matches!(
            load_netlist(&dir.path().join("missing.bench")),
            Err(HarnessError::Io { .. })
        ));
    }

    #[test]
    fn experiment_writes_all_artifacts_and_is_byte_reproducible() {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let outcome_a = run_experiment(&quick_config(dir_a.path()), |_| {}).unwrap();
        let outcome_b = run_experiment(&quick_config(dir_b.path()), |_| {}).unwrap();

        let names = [
            "trojans_seed1.jsonl",
            "trojans_seed2.jsonl",
            "metrics_seed1.tsv",
            "metrics_seed2.tsv",
            "policy_seed1.json",
            "policy_seed2.json",
            "merged_trojans.jsonl",
            "report.tsv",
            "scatter.tsv",
        ];
        for name in names {
            let a = read(dir_a.path(), name);
            let b = read(dir_b.path(), name);
            assert!(!a.is_empty(), "{name} should not be empty");
            assert_eq!(a, b, "{name} must be byte-identical across reruns");
        }

        // The JSONL files parse back into the in-memory logs.
        let parsed: Vec<TrojanLogRecord> = read(dir_a.path(), "trojans_seed1.jsonl")
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(parsed, outcome_a.seed_runs[0].trojans);

        // Merged list has no duplicate (triggers, target) configurations.
        let mut keys = HashSet::new();
        for rec in &outcome_a.merged {
            assert!(keys.insert((rec.triggers.clone(), rec.target.clone())));
        }
        assert_eq!(outcome_a.report.distinct_trojans, outcome_a.merged.len());
        assert_eq!(outcome_a.report, outcome_b.report);

        // Metrics files have the header plus one row per policy update.
        let metrics = read(dir_a.path(), "metrics_seed1.tsv");
        assert_eq!(
            metrics.lines().count(),
            outcome_a.seed_runs[0].metrics.len() + 1
        );
        assert!(metrics.starts_with("timestep\tepisodes\t"));
    }

    #[test]
    fn emitted_infected_netlist_round_trips_and_describes_itself() {
        let c = c17();
        let id = |n: &str| c.net_id(n).unwrap();
        let (infected, inst) = insert(&c, &[id("10"), id("11")], id("16")).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let artifacts = emit_infected(&infected, &inst, 10_000, dir.path(), "c17_ht").unwrap();

        let bench = std::fs::read_to_string(&artifacts.bench_path).unwrap();
        let reparsed = parse_bench(&bench, "c17").unwrap();
        assert!(structurally_equal(&infected, &reparsed));

        let verilog = std::fs::read_to_string(&artifacts.verilog_path).unwrap();
        assert!(verilog.contains("module c17 ("));
        assert!(verilog.contains("ht_trigger_and"));

        let meta: TrojanMetadata =
            serde_json::from_str(&std::fs::read_to_string(&artifacts.metadata_path).unwrap())
                .unwrap();
        assert_eq!(meta, artifacts.metadata);
        assert_eq!(meta.triggers, vec!["10", "11"]);
        assert_eq!(meta.target, "16");
        assert_eq!(meta.trigger_and, "ht_trigger_and");
        assert_eq!(meta.payload, "ht_payload");
        assert!(meta.activated);
        let cov = meta.icp.unwrap();
        assert!(cov > 0.0 && cov <= 1.0);
        assert!(!meta.input_stack.is_empty());
        assert!(meta.input_stack.values().all(|&v| v <= 1));
    }
}
