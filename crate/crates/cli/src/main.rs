//! Command-line front end for the Trojan-insertion toolchain.
//!
//! Subcommands mirror the pipeline stages: `parse` and `scoap` inspect a
//! netlist, `atpg` runs the activation oracle on a single fault, `train`
//! runs the full learning experiment, `report` summarizes a finished run
//! directory, and `emit` writes one hand-picked infected circuit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use htforge::atpg::{podem_guided, Fault, TestOutcome, TestResult};
use htforge::circuit::{emit_bench, emit_verilog, levelize, Circuit, NetId};
use htforge::harness::{
    emit_infected, load_netlist, run_experiment, Progress, ReportRow, RunConfig,
};
use htforge::rl_env::TrojanLogRecord;
use htforge::scoap::{compute_scoap, select_suspicious, ScoapTable};
use htforge::trojan::insert;

#[derive(Parser)]
#[command(
    name = "htforge",
    version,
    about = "Inserts hard-to-activate hardware Trojans into gate-level netlists: \
             SCOAP picks rare trigger nets, PODEM proves activation, and a PPO \
             agent searches trigger placements"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a netlist and print a structural summary.
    Parse {
        /// Netlist file (.bench or .json).
        netlist: PathBuf,
        /// Re-emit the parsed circuit (.bench or .v, chosen by extension).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute SCOAP testability and show the suspicious (rare) nets.
    Scoap {
        /// Netlist file (.bench or .json).
        netlist: PathBuf,
        /// Fraction of nets to select as suspicious.
        #[arg(long, default_value_t = 0.05)]
        fraction: f64,
        /// Print the full per-net table instead of only the selection.
        #[arg(long)]
        full: bool,
    },
    /// Run the PODEM activation oracle on one stuck-at fault.
    Atpg {
        /// Netlist file (.bench or .json).
        netlist: PathBuf,
        /// Name of the faulted net.
        #[arg(long)]
        net: String,
        /// Stuck-at value under test.
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        stuck: u8,
        /// Backtrack budget before giving up.
        #[arg(long, default_value_t = 10_000)]
        limit: u32,
    },
    /// Train the insertion agent and write all run artifacts.
    Train {
        /// Key=value config file; defaults apply for missing keys.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override a single config key (repeatable), e.g. --set seeds=1,2,3.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
    },
    /// Summarize a finished run directory.
    Report {
        /// Directory written by `train`.
        run_dir: PathBuf,
    },
    /// Insert one Trojan at explicit nets and write the infected circuit.
    Emit {
        /// Netlist file (.bench or .json).
        netlist: PathBuf,
        /// Comma-separated trigger net names.
        #[arg(long, value_delimiter = ',', required = true)]
        triggers: Vec<String>,
        /// Payload target net name.
        #[arg(long)]
        target: String,
        /// Output directory for the .bench/.v/.json artifacts.
        #[arg(long, default_value = "runs")]
        out_dir: PathBuf,
        /// File stem; defaults to "<circuit>_ht".
        #[arg(long)]
        stem: Option<String>,
        /// Backtrack budget for the activation check.
        #[arg(long, default_value_t = 10_000)]
        limit: u32,
    },
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Parse { netlist, out } => cmd_parse(&netlist, out.as_deref()),
        Cmd::Scoap {
            netlist,
            fraction,
            full,
        } => cmd_scoap(&netlist, fraction, full),
        Cmd::Atpg {
            netlist,
            net,
            stuck,
            limit,
        } => cmd_atpg(&netlist, &net, stuck == 1, limit),
        Cmd::Train { config, sets } => cmd_train(config.as_deref(), &sets),
        Cmd::Report { run_dir } => cmd_report(&run_dir),
        Cmd::Emit {
            netlist,
            triggers,
            target,
            out_dir,
            stem,
            limit,
        } => cmd_emit(&netlist, &triggers, &target, &out_dir, stem.as_deref(), limit),
    }
}

fn load(path: &Path) -> Result<Circuit> {
    load_netlist(path).with_context(|| format!("loading netlist {}", path.display()))
}

fn resolve_net(c: &Circuit, name: &str) -> Result<NetId> {
    c.net_id(name).with_context(|| {
        format!(
            "circuit {} has no net named {name:?} ({} nets total)",
            c.name(),
            c.net_count()
        )
    })
}

fn cmd_parse(path: &Path, out: Option<&Path>) -> Result<()> {
    let c = load(path)?;
    let levels = levelize(&c);
    println!("circuit:  {}", c.name());
    println!("inputs:   {}", c.primary_inputs().len());
    println!("outputs:  {}", c.primary_outputs().len());
    println!("gates:    {}", c.gate_count());
    println!("nets:     {}", c.net_count());
    println!("depth:    {}", levels.iter().max().copied().unwrap_or(0));
    if let Some(out) = out {
        let ext = out
            .extension()
            .map(|e| e.to_ascii_lowercase())
            .unwrap_or_default();
        let text = match ext.to_str() {
            Some("bench") => emit_bench(&c),
            Some("v") => emit_verilog(&c),
            _ => bail!(
                "cannot emit {}: unsupported extension (use .bench or .v)",
                out.display()
            ),
        };
        std::fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
        println!("wrote:    {}", out.display());
    }
    Ok(())
}

fn scoap_row(c: &Circuit, table: &ScoapTable, net: NetId) -> String {
    format!(
        "{:<16} {:>12} {:>12} {:>12} {:>8.4} {:>10.4}",
        c.net(net).name,
        table.cc0[net.index()],
        table.cc1[net.index()],
        table.co[net.index()],
        table.hts(net),
        table.ocr(net),
    )
}

fn cmd_scoap(path: &Path, fraction: f64, full: bool) -> Result<()> {
    if !(0.0..=1.0).contains(&fraction) {
        bail!("--fraction must lie in [0, 1], got {fraction}");
    }
    let c = load(path)?;
    let table = compute_scoap(&c);
    let suspicious = select_suspicious(&c, &table, fraction);
    println!(
        "{:<16} {:>12} {:>12} {:>12} {:>8} {:>10}",
        "net", "cc0", "cc1", "co", "hts", "ocr"
    );
    if full {
        for net in c.nets() {
            println!("{}", scoap_row(&c, &table, net.id));
        }
        println!();
    }
    println!(
        "suspicious nets ({} of {}, fraction {fraction}), most suspicious first:",
        suspicious.len(),
        c.net_count()
    );
    for &net in suspicious.ranked() {
        println!("{}", scoap_row(&c, &table, net));
    }
    Ok(())
}

fn format_assignment(c: &Circuit, result: &TestResult) -> String {
    let mut by_name: BTreeMap<&str, bool> = BTreeMap::new();
    for (&net, &value) in &result.input_stack {
        by_name.insert(&c.net(net).name, value);
    }
    let mut s = String::new();
    for (name, value) in by_name {
        let _ = write!(s, "{name}={} ", u8::from(value));
    }
    s.trim_end().to_owned()
}

fn cmd_atpg(path: &Path, net: &str, stuck: bool, limit: u32) -> Result<()> {
    let c = load(path)?;
    let fault_net = resolve_net(&c, net)?;
    let table = compute_scoap(&c);
    let result = podem_guided(
        &c,
        Fault {
            net: fault_net,
            stuck,
        },
        limit,
        &table,
    )
    .with_context(|| format!("running test generation for {net} stuck-at-{}", u8::from(stuck)))?;
    match result.outcome {
        TestOutcome::Detected => {
            println!(
                "detected: {net} stuck-at-{} ({} backtracks)",
                u8::from(stuck),
                result.backtracks
            );
            println!(
                "test cube ({} of {} inputs assigned): {}",
                result.input_stack.len(),
                c.primary_inputs().len(),
                format_assignment(&c, &result)
            );
        }
        TestOutcome::Untestable => println!(
            "untestable: {net} stuck-at-{} (proved, {} backtracks)",
            u8::from(stuck),
            result.backtracks
        ),
        TestOutcome::Aborted => println!(
            "aborted: {net} stuck-at-{} (budget of {limit} backtracks exhausted)",
            u8::from(stuck)
        ),
    }
    Ok(())
}

fn cmd_train(config_path: Option<&Path>, sets: &[String]) -> Result<()> {
    let mut config = RunConfig::default();
    if let Some(path) = config_path {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        config
            .apply_file(&text)
            .with_context(|| format!("applying config {}", path.display()))?;
    }
    for pair in sets {
        let (key, value) = pair
            .split_once('=')
            .with_context(|| format!("--set {pair:?}: expected KEY=VALUE"))?;
        config
            .set(key.trim(), value.trim())
            .with_context(|| format!("applying override --set {pair:?}"))?;
    }

    println!(
        "training on {} (seeds {:?}, {} triggers, artifacts in {})",
        config.circuit.display(),
        config.seeds,
        config.n_triggers,
        config.out_dir.display()
    );
    let outcome = run_experiment(&config, |p| match p {
        Progress::SeedStarted {
            seed,
            total_timesteps,
        } => println!("seed {seed}: training for {total_timesteps} timesteps"),
        Progress::Update { seed, row } => println!(
            "seed {seed}  t={:>8}  episodes={:<6}  mean_reward={:+9.4}  trojans={}",
            row.timestep, row.episodes, row.mean_episode_reward, row.trojans_found
        ),
        Progress::SeedFinished {
            seed,
            distinct_trojans,
        } => println!("seed {seed}: finished with {distinct_trojans} distinct activated trojans"),
    })
    .context("running experiment")?;

    println!();
    print_report(&outcome.report);
    println!("artifacts: {}", config.out_dir.display());
    Ok(())
}

fn print_report(row: &ReportRow) {
    println!("circuit:            {}", row.circuit);
    println!(
        "interface:          {} inputs, {} outputs, {} nets",
        row.primary_inputs, row.primary_outputs, row.nets
    );
    println!("suspicious nets:    {}", row.suspicious_nets);
    println!("distinct trojans:   {}", row.distinct_trojans);
    println!(
        "icp >= .60/.65/.70: {} / {} / {}",
        row.icp_ge_060, row.icp_ge_065, row.icp_ge_070
    );
    println!("top-10 mean icp:    {:.4}", row.top10_mean_icp);
    println!("mean input access:  {:.4}", row.mean_input_access);
}

fn cmd_report(run_dir: &Path) -> Result<()> {
    let report_path = run_dir.join("report.tsv");
    let text = std::fs::read_to_string(&report_path)
        .with_context(|| format!("reading {}", report_path.display()))?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or("").split('\t').collect();
    let values: Vec<&str> = lines.next().unwrap_or("").split('\t').collect();
    if header.len() != values.len() || header.is_empty() {
        bail!("{} is not a two-line report table", report_path.display());
    }
    let width = header.iter().map(|h| h.len()).max().unwrap_or(0);
    for (name, value) in header.iter().zip(&values) {
        println!("{name:<width$}  {value}");
    }

    let merged_path = run_dir.join("merged_trojans.jsonl");
    let merged = std::fs::read_to_string(&merged_path)
        .with_context(|| format!("reading {}", merged_path.display()))?;
    let mut records: Vec<TrojanLogRecord> = merged
        .lines()
        .map(|line| serde_json::from_str(line).context("parsing merged trojan record"))
        .collect::<Result<_>>()?;
    records.sort_by(|a, b| b.icp.total_cmp(&a.icp));
    println!();
    println!("top trojans by input coverage ({} total):", records.len());
    for r in records.iter().take(10) {
        println!(
            "  icp={:.4}  seed={}  triggers=[{}]  target={}",
            r.icp,
            r.seed,
            r.triggers.join(", "),
            r.target
        );
    }
    Ok(())
}

fn cmd_emit(
    path: &Path,
    triggers: &[String],
    target: &str,
    out_dir: &Path,
    stem: Option<&str>,
    limit: u32,
) -> Result<()> {
    let c = load(path)?;
    let trigger_ids: Vec<NetId> = triggers
        .iter()
        .map(|name| resolve_net(&c, name))
        .collect::<Result<_>>()?;
    let target_id = resolve_net(&c, target)?;
    let (infected, inst) = insert(&c, &trigger_ids, target_id)
        .with_context(|| format!("inserting trojan (triggers {triggers:?}, target {target:?})"))?;
    let stem = stem
        .map(str::to_owned)
        .unwrap_or_else(|| format!("{}_ht", c.name()));
    let artifacts = emit_infected(&infected, &inst, limit, out_dir, &stem)
        .context("writing infected-circuit artifacts")?;

    println!("wrote {}", artifacts.bench_path.display());
    println!("wrote {}", artifacts.verilog_path.display());
    println!("wrote {}", artifacts.metadata_path.display());
    let meta = &artifacts.metadata;
    if meta.activated {
        println!(
            "activation: proven (icp {:.4}, {} of {} inputs in the test cube)",
            meta.icp.unwrap_or(0.0),
            meta.input_stack.len(),
            infected.primary_inputs().len()
        );
    } else {
        println!("activation: not proven within {limit} backtracks");
    }
    Ok(())
}
