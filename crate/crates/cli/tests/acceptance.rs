//! Acceptance suite: one line per criterion, then a non-zero exit if any
//! criterion failed.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use linproc_core::harness::{
    check_harmony, check_tau_reduction, crosscheck, enumerate_sequents, enumerate_states, metamorphic_suite,
    AgreementReport, Budgets, EnumSpec, Preset,
};
use linproc_core::preorders::{replay_trace, simulate, validate_witness, SimConfig};
use linproc_core::prover::{logical_preorder, SearchBudget};
use linproc_core::semantics::ExploreBudget;
use linproc_core::syntax::{parse_state, State};
use linproc_core::Decision;

struct Outcome {
    passed: bool,
    detail: String,
}

fn secs(d: Duration) -> String {
    format!("{:.1} s", d.as_secs_f64())
}

fn criterion(n: usize, name: &str, limit: Option<Duration>, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = run();
    let took = start.elapsed();
    let in_time = limit.is_none_or(|l| took < l);
    let passed = out.passed && in_time;
    let timing = match limit {
        Some(l) => format!("{} (limit {})", secs(took), secs(l)),
        None => secs(took),
    };
    println!("{} [{n}] {name}: {}; {timing}", if passed { "PASS" } else { "FAIL" }, out.detail);
    passed
}

fn coincidence(report: &AgreementReport, limit: f64) -> Outcome {
    Outcome {
        passed: report.disagreements.is_empty() && report.unknown_rate <= limit,
        detail: format!(
            "{} pairs, {} disagreements, unknown {:.1}% (limit {:.0}%)",
            report.pairs,
            report.disagreements.len(),
            100.0 * report.unknown_rate,
            100.0 * limit
        ),
    }
}

fn harmony() -> Outcome {
    let spec = EnumSpec::new(&["a", "b"], 5, 5, 5);
    let r = check_harmony(&spec, 6, &Budgets::default());
    Outcome {
        passed: r.violations.is_empty() && r.checked == enumerate_sequents(&spec, 6).len(),
        detail: format!(
            "{} sequents, {} agree, {} unknown, {} contradictions{}",
            r.checked,
            r.confirmed,
            r.unknown,
            r.violations.len(),
            r.violations.first().map(|v| format!(" (first: {v})")).unwrap_or_default()
        ),
    }
}

fn tau_reduction() -> Outcome {
    let spec = EnumSpec::new(&["a", "b"], 6, 6, 6).with_state_size(6);
    let depth = 4;
    let r = check_tau_reduction(&spec, depth);
    Outcome {
        passed: r.violations.is_empty(),
        detail: format!(
            "{} states, depths 1..={depth}, {} layer comparisons, {} mismatches",
            enumerate_states(&spec).len(),
            r.checked,
            r.violations.len()
        ),
    }
}

fn lemmas(p: &Preset) -> Outcome {
    let report = metamorphic_suite(&p.spec, &p.lemma_budgets);
    let parts: Vec<String> = report
        .lemmas
        .iter()
        .map(|l| format!("{} {}/{} ({} unknown, {} fails)", l.name, l.confirmed, l.checked, l.unknown, l.violations.len()))
        .collect();
    Outcome { passed: report.passed(), detail: parts.join(", ") }
}

fn verdict_table(tiny: &Preset) -> Outcome {
    let search = SearchBudget { max_depth: 8, ..SearchBudget::default() };
    let sim = SimConfig { explore: ExploreBudget { max_tau_depth: 8, ..ExploreBudget::default() }, ..SimConfig::default() };
    let st = |t: &str| parse_state(t).unwrap();
    let mut rows: Vec<(State, State, Decision)> = vec![
        (st(". ; a"), st(". ; a & b"), Decision::Holds),
        (st(". ; a & b"), st(". ; a"), Decision::Fails),
        (st(". ; a"), st(". ; !a"), Decision::Holds),
        (st(". ; !a"), st(". ; a"), Decision::Fails),
        (st(". ; 1"), st(". ; ."), Decision::Holds),
        (st(". ; ."), st(". ; 1"), Decision::Holds),
    ];
    for s in enumerate_states(&tiny.spec) {
        rows.push((st(". ; top"), s, Decision::Holds));
    }
    let mut wrong = Vec::new();
    for (l, r, want) in &rows {
        let logical = logical_preorder(l, r, &search).decision;
        let simulation = simulate(l, r, &sim).verdict;
        if logical != *want || simulation != *want {
            wrong.push(format!("({l}) ≼ ({r}): logical {logical}, simulation {simulation}, expected {want}"));
        }
    }
    Outcome {
        passed: wrong.is_empty(),
        detail: format!("{} rows incl. top below all {} tiny states, {} wrong{}", rows.len(), rows.len() - 6, wrong.len(), wrong.first().map(|w| format!(" (first: {w})")).unwrap_or_default()),
    }
}

/// Re-validates every artifact of the crosscheck run plus the verdict table
/// rows, independently of the checker.
fn artifacts(report: &AgreementReport, tiny: &Preset) -> Outcome {
    let decided_sims: usize = report
        .totals
        .iter()
        .filter(|t| t.simulation.is_decided())
        .map(|t| t.count)
        .sum();
    let mut bad = report.invalid_artifacts.clone();
    let mut checked = report.witnesses_checked + report.traces_checked;
    if checked != decided_sims {
        bad.push(format!("{checked} artifacts for {decided_sims} decided pairs"));
    }
    let st = |t: &str| parse_state(t).unwrap();
    let cfg = tiny.budgets.sim;
    for (l, r) in [(". ; a", ". ; a & b"), (". ; a & b", ". ; a"), (". ; a", ". ; !a"), (". ; !a", ". ; a"), (". ; a, b", ". ; a * b"), ("a ; a", "a ; .")] {
        let (l, r) = (st(l), st(r));
        let v = simulate(&l, &r, &cfg);
        let res = match (&v.witness, &v.trace) {
            (Some(w), _) => validate_witness(&l, &r, w, &cfg.explore),
            (_, Some(t)) => replay_trace(&l, &r, t, &cfg.explore),
            _ => Err("no artifact".into()),
        };
        checked += 1;
        if let Err(e) = res {
            bad.push(format!("({l}) ≼ ({r}): {e}"));
        }
    }
    Outcome {
        passed: bad.is_empty(),
        detail: format!(
            "{checked} artifacts ({} witnesses and {} traces from the tiny crosscheck, 6 table pairs), {} invalid{}",
            report.witnesses_checked,
            report.traces_checked,
            bad.len(),
            bad.first().map(|b| format!(" (first: {b})")).unwrap_or_default()
        ),
    }
}

fn determinism() -> Outcome {
    let commands: &[&[&str]] = &[
        &["prove", ". ; a * b |- b * a"],
        &["prove", "!a ; . |- a * a"],
        &["step", ". ; a & b, a -o b, a"],
        &["lts", "a ; a -o b"],
        &["barbs", ". ; !a, a -o b"],
        &["sim", ". ; a", ". ; a & b"],
        &["sim", ". ; a & b", ". ; a"],
        &["sim", ". ; !a", "a ; ."],
        &["ctx", ". ; a & b", ". ; a"],
        &["logical", ". ; a", ". ; !a"],
        &["crosscheck", "--preset", "tiny"],
    ];
    let run = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_linproc")).arg("--json").args(args).output().expect("binary runs");
        (out.status.code(), out.stdout)
    };
    let mut differing = Vec::new();
    for args in commands {
        let (a, b) = (run(args), run(args));
        if a != b || serde_json::from_slice::<serde_json::Value>(&a.1).is_err() {
            differing.push(args.join(" "));
        }
    }
    Outcome {
        passed: differing.is_empty(),
        detail: format!("{} commands run twice with --json, {} differ{}", commands.len(), differing.len(), if differing.is_empty() { String::new() } else { format!(": {}", differing.join("; ")) }),
    }
}

fn main() -> ExitCode {
    let tiny = Preset::named("tiny").expect("tiny preset");
    let minutes = |m: u64| Some(Duration::from_secs(60 * m));
    let mut report = None;
    let results = [
        criterion(1, "logical and simulation preorders coincide on tiny", minutes(5), || {
            let r = crosscheck(&tiny.spec, &tiny.budgets);
            let out = coincidence(&r, tiny.max_unknown_rate);
            report = Some(r);
            out
        }),
        criterion(2, "harmony over sequents of size <= 6, 2 atoms", minutes(2), harmony),
        criterion(3, "silent moves coincide with reductions over states of size <= 6, 2 atoms", minutes(1), tau_reduction),
        criterion(4, "lemma suite over tiny", minutes(5), || lemmas(&tiny)),
        criterion(5, "known verdict table in both checkers at depth 8", None, || verdict_table(&tiny)),
        criterion(6, "every witness validates and every refutation replays", None, || {
            artifacts(report.as_ref().expect("criterion 1 ran"), &tiny)
        }),
        criterion(7, "JSON output is byte-identical across runs", None, determinism),
    ];
    let failed = results.iter().filter(|p| !**p).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
