use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use linproc_core::harness::{crosscheck, metamorphic_suite, Budgets, Preset};
use linproc_core::preorders::{contextual_falsify, contextual_preorder, simulate, Verdict};
use linproc_core::prover::{check_derivation, logical_preorder, prove, Derivation, ProofResult};
use linproc_core::semantics::{explore, export_dot, export_edges, lts_successors, weak_barbs};
use linproc_core::syntax::{parse_sequent, parse_state, State};
use linproc_core::Decision;
use serde_json::{json, Value};

/// Version of every JSON document the tool prints.
const SCHEMA_VERSION: u32 = 1;
const USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "linproc", version, about = "Linear-logic processes: proofs, transitions and preorders")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Print a versioned JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Proof-search depth and τ-path length.
    #[arg(long, global = true, value_name = "N")]
    budget_depth: Option<usize>,
    /// Closure size and proof-search node limit.
    #[arg(long, global = true, value_name = "N")]
    budget_states: Option<usize>,
    /// Clone steps per proof branch and per τ-path.
    #[arg(long, global = true, value_name = "N")]
    budget_clones: Option<usize>,
    /// Seed recorded in enumeration reports.
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a proof of a sequent such as ". ; a |- a".
    Prove { sequent: String },
    /// Check a derivation saved by `prove --json`.
    CheckDeriv { file: PathBuf },
    /// One-step labeled transitions of a state.
    Step { state: String },
    /// Bounded transition system of a state.
    Lts {
        state: String,
        /// Also write the graph in DOT format.
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
    },
    /// Strong and weak barbs of a state.
    Barbs { state: String },
    /// Simulation preorder: does the left state simulate into the right one?
    Sim { left: String, right: String },
    /// Contextual preorder, with a separating context when it fails.
    Ctx {
        left: String,
        right: String,
        /// Only try these contexts (repeatable). Without it the simulation
        /// checker decides and a small context battery explains failures.
        #[arg(long, value_name = "STATE")]
        context: Vec<String>,
    },
    /// Logical preorder via proof search.
    Logical { left: String, right: String },
    /// Compare the logical and simulation checkers over a preset.
    Crosscheck {
        #[arg(long, default_value = "tiny")]
        preset: String,
        /// Write a replay script per disagreement into this directory.
        #[arg(long, value_name = "DIR")]
        replay_dir: Option<PathBuf>,
        /// Include wall-clock time (makes output run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// Run the lemma battery over a preset.
    Suite {
        #[arg(long, default_value = "tiny")]
        preset: String,
    },
}

/// A usage problem: bad syntax in an argument or an unknown preset.
struct Usage(String);

struct Output {
    code: u8,
    text: String,
    json: Value,
}

impl Global {
    fn apply(&self, mut b: Budgets) -> Budgets {
        if let Some(d) = self.budget_depth {
            b.search.max_depth = d;
            b.sim.explore.max_tau_depth = d;
        }
        if let Some(n) = self.budget_states {
            b.search.max_nodes = n;
            b.sim.explore.max_states = n;
        }
        if let Some(c) = self.budget_clones {
            b.search.max_clones_per_branch = c;
            b.sim.explore.max_clones = c;
        }
        b
    }
}

fn state(flag: &str, text: &str) -> Result<State, Usage> {
    parse_state(text).map_err(|e| Usage(format!("<{flag}>: {e}")))
}

fn preset(name: &str) -> Result<Preset, Usage> {
    Preset::named(name).ok_or_else(|| {
        let known: Vec<&str> = Preset::names().collect();
        Usage(format!("--preset: unknown preset {name:?} (known: {})", known.join(", ")))
    })
}

fn code(d: Decision) -> u8 {
    d.exit_code() as u8
}

fn proof_text(p: &ProofResult) -> String {
    match p {
        ProofResult::Proved { derivation, .. } => format!("proved\n{}", derivation.pretty()),
        ProofResult::Refuted { .. } => "refuted\n".into(),
        ProofResult::Unknown { stats } => format!("unknown: budget exhausted after {} nodes\n", stats.nodes),
    }
}

fn verdict_text(v: &Verdict) -> String {
    let mut out = format!("{}\n", v.verdict);
    if let Some(r) = &v.reason {
        out.push_str(&format!("reason: {r}\n"));
    }
    if let Some(c) = &v.context {
        out.push_str(&format!("context: {}\n{}\n", c.context, c.reason));
    }
    if let Some(w) = &v.witness {
        out.push_str(&format!("witness ({} pairs):\n", w.len()));
        for p in w {
            out.push_str(&format!("  ({}) ≼ ({})  {}\n", p.left, p.right, serde_json::to_value(&p.justification).unwrap()["by"].as_str().unwrap_or("")));
        }
    }
    if let Some(t) = &v.trace {
        out.push_str(&format!("refutation ({} steps):\n", t.len()));
        for s in t {
            out.push_str(&format!("  [{}] ({}) ≼ ({})  {}\n", s.rank, s.left, s.right, serde_json::to_string(&s.challenge).unwrap()));
        }
    }
    out
}

fn run(cli: &Cli) -> Result<Output, Usage> {
    let g = &cli.global;
    let defaults = g.apply(Budgets::default());
    Ok(match &cli.command {
        Command::Prove { sequent } => {
            let s = parse_sequent(sequent).map_err(|e| Usage(format!("<sequent>: {e}")))?;
            let p = prove(&s, &defaults.search);
            Output {
                code: code(p.decision()),
                text: proof_text(&p),
                json: json!({ "sequent": s.to_string(), "budget": defaults.search, "proof": p }),
            }
        }
        Command::CheckDeriv { file } => {
            let text = std::fs::read_to_string(file).map_err(|e| Usage(format!("<file>: {}: {e}", file.display())))?;
            let doc: Value = serde_json::from_str(&text).map_err(|e| Usage(format!("<file>: {e}")))?;
            // accepts a bare derivation or the output of `prove --json`
            let tree = doc.pointer("/proof/derivation").or_else(|| doc.get("derivation")).unwrap_or(&doc);
            let d: Derivation = serde_json::from_value(tree.clone()).map_err(|e| Usage(format!("<file>: {e}")))?;
            match check_derivation(&d) {
                Ok(()) => Output {
                    code: 0,
                    text: format!("valid derivation of {}\n", d.conclusion),
                    json: json!({ "valid": true, "conclusion": d.conclusion.to_string() }),
                },
                Err(e) => Output {
                    code: 1,
                    text: format!("invalid at {:?} ({}): {}\n", e.path, e.rule.name(), e.reason),
                    json: json!({ "valid": false, "path": e.path, "rule": e.rule.name(), "reason": e.reason }),
                },
            }
        }
        Command::Step { state: s } => {
            let s = state("state", s)?;
            let edges = lts_successors(&s);
            let text = edges.iter().map(|e| format!("{} -> {}\n", e.label, e.to)).collect();
            let rows: Vec<Value> = edges.iter().map(|e| json!({ "label": e.label, "to": e.to.to_string() })).collect();
            Output { code: 0, text, json: json!({ "state": s.to_string(), "successors": rows }) }
        }
        Command::Lts { state: s, dot } => {
            let s = state("state", s)?;
            let b = defaults.sim.explore;
            if let Some(path) = dot {
                std::fs::write(path, export_dot(&s, &b)).map_err(|e| Usage(format!("--dot: {}: {e}", path.display())))?;
            }
            let lts = explore(&s, &b);
            let mut text: String = lts.edges.iter().map(|e| format!("{} --{}--> {}\n", e.from, e.label, e.to)).collect();
            text.push_str(&format!("{} states, {} edges{}\n", lts.states.len(), lts.edges.len(), if lts.truncated { ", truncated" } else { "" }));
            let (edges, truncated) = export_edges(&s, &b);
            Output { code: 0, text, json: json!({ "root": s.to_string(), "budget": b, "truncated": truncated, "edges": edges }) }
        }
        Command::Barbs { state: s } => {
            let s = state("state", s)?;
            let strong = linproc_core::semantics::strong_barbs(&s);
            let (weak, truncated) = weak_barbs(&s, &defaults.sim.explore);
            let names = |xs: &std::collections::BTreeSet<linproc_core::syntax::Atom>| xs.iter().map(|a| a.to_string()).collect::<Vec<_>>();
            Output {
                code: 0,
                text: format!("strong: {}\nweak: {}{}\n", names(&strong).join(" "), names(&weak).join(" "), if truncated { " (truncated)" } else { "" }),
                json: json!({ "state": s.to_string(), "strong": names(&strong), "weak": names(&weak), "truncated": truncated }),
            }
        }
        Command::Sim { left, right } => {
            let (l, r) = (state("left", left)?, state("right", right)?);
            let v = simulate(&l, &r, &defaults.sim);
            Output { code: code(v.verdict), text: verdict_text(&v), json: json!({ "left": l.to_string(), "right": r.to_string(), "result": v }) }
        }
        Command::Ctx { left, right, context } => {
            let (l, r) = (state("left", left)?, state("right", right)?);
            let v = if context.is_empty() {
                contextual_preorder(&l, &r, &defaults.sim)
            } else {
                let cs = context.iter().map(|c| state("--context", c)).collect::<Result<Vec<_>, _>>()?;
                contextual_falsify(&l, &r, &cs, &defaults.sim)
            };
            Output { code: code(v.verdict), text: verdict_text(&v), json: json!({ "left": l.to_string(), "right": r.to_string(), "result": v }) }
        }
        Command::Logical { left, right } => {
            let (l, r) = (state("left", left)?, state("right", right)?);
            let v = logical_preorder(&l, &r, &defaults.search);
            Output {
                code: code(v.decision),
                text: format!("{}\nreduces to {}\n{}", v.decision, v.sequent, proof_text(&v.proof)),
                json: json!({ "left": l.to_string(), "right": r.to_string(), "result": v }),
            }
        }
        Command::Crosscheck { preset: name, replay_dir, timing } => {
            let p = preset(name)?;
            let mut spec = p.spec.clone();
            spec.seed = g.seed;
            let start = Instant::now();
            let mut report = crosscheck(&spec, &g.apply(p.budgets));
            report.wall_time_ms = timing.then(|| start.elapsed().as_millis() as u64);
            if let Some(dir) = replay_dir {
                std::fs::create_dir_all(dir).map_err(|e| Usage(format!("--replay-dir: {}: {e}", dir.display())))?;
                for (i, d) in report.disagreements.iter().enumerate() {
                    let path = dir.join(format!("disagreement-{i}.sh"));
                    std::fs::write(&path, d.replay_script()).map_err(|e| Usage(format!("--replay-dir: {}: {e}", path.display())))?;
                }
            }
            let ok = report.disagreements.is_empty()
                && report.invalid_artifacts.is_empty()
                && report.unknown_rate <= p.max_unknown_rate;
            Output { code: if ok { 0 } else { 1 }, text: report.to_string(), json: json!({ "preset": name, "report": report }) }
        }
        Command::Suite { preset: name } => {
            let p = preset(name)?;
            let mut spec = p.spec.clone();
            spec.seed = g.seed;
            let report = metamorphic_suite(&spec, &g.apply(p.lemma_budgets));
            let mut text = String::new();
            for l in &report.lemmas {
                let mark = if l.passed() { "ok  " } else { "FAIL" };
                text.push_str(&format!("{mark} {:<22} checked {:>5}, confirmed {:>5}, unknown {:>4}\n", l.name, l.checked, l.confirmed, l.unknown));
                for v in &l.violations {
                    text.push_str(&format!("     {v}\n"));
                }
            }
            Output { code: if report.passed() { 0 } else { 1 }, text, json: json!({ "preset": name, "report": report }) }
        }
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Prove { .. } => "prove",
        Command::CheckDeriv { .. } => "check-deriv",
        Command::Step { .. } => "step",
        Command::Lts { .. } => "lts",
        Command::Barbs { .. } => "barbs",
        Command::Sim { .. } => "sim",
        Command::Ctx { .. } => "ctx",
        Command::Logical { .. } => "logical",
        Command::Crosscheck { .. } => "crosscheck",
        Command::Suite { .. } => "suite",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.global.json {
                let mut doc = json!({ "schema_version": SCHEMA_VERSION, "command": command_name(&cli.command) });
                if let (Value::Object(d), Value::Object(extra)) = (&mut doc, out.json) {
                    d.extend(extra);
                }
                println!("{}", serde_json::to_string_pretty(&doc).expect("output serializes"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
    }
}
