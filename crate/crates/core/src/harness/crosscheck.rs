use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{enumerate_states, Budgets, EnumSpec};
use crate::preorders::{replay_trace, simulate, validate_witness, Verdict};
use crate::prover::{logical_preorder, LogicalVerdict};
use crate::syntax::{state_text, State};
use crate::Decision;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictCount {
    pub logical: Decision,
    pub simulation: Decision,
    pub count: usize,
}

/// A decided pair on which the two checkers contradict each other, with the
/// commands that reproduce both answers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    #[serde(with = "state_text")]
    pub left: State,
    #[serde(with = "state_text")]
    pub right: State,
    pub logical: Decision,
    pub simulation: Decision,
    pub replay: Vec<String>,
}

impl Disagreement {
    /// A shell script that reruns both checkers on the pair.
    pub fn replay_script(&self) -> String {
        let mut out = format!(
            "#!/bin/sh\n# logical: {}, simulation: {}\n",
            self.logical, self.simulation
        );
        for line in &self.replay {
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub spec: EnumSpec,
    pub budgets: Budgets,
    pub states: usize,
    pub pairs: usize,
    /// Logical × simulation verdict counts, in verdict order.
    pub totals: Vec<VerdictCount>,
    pub disagreements: Vec<Disagreement>,
    /// Pairs on which at least one checker answered Unknown.
    pub unknown: usize,
    pub unknown_rate: f64,
    pub witnesses_checked: usize,
    pub traces_checked: usize,
    /// Simulation artifacts that failed independent validation.
    pub invalid_artifacts: Vec<String>,
    /// Only filled on request, so that reports stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

fn quote(s: &State) -> String {
    format!("'{s}'")
}

struct PairResult {
    logical: Decision,
    sim: Decision,
    artifact_error: Option<String>,
    witness: bool,
    trace: bool,
}

fn check_pair(s1: &State, s2: &State, b: &Budgets) -> PairResult {
    let LogicalVerdict { decision: logical, .. } = logical_preorder(s1, s2, &b.search);
    let v: Verdict = simulate(s1, s2, &b.sim);
    let mut artifact_error = None;
    if let Some(w) = &v.witness {
        artifact_error = validate_witness(s1, s2, w, &b.sim.explore).err();
    }
    if let Some(t) = &v.trace {
        artifact_error = replay_trace(s1, s2, t, &b.sim.explore).err();
    }
    PairResult { logical, sim: v.verdict, artifact_error, witness: v.witness.is_some(), trace: v.trace.is_some() }
}

/// Runs the logical and simulation checkers on every ordered pair of states
/// in `spec` and compares them. Pairs are checked in parallel and merged in
/// enumeration order, so the report does not depend on scheduling.
pub fn crosscheck(spec: &EnumSpec, budgets: &Budgets) -> AgreementReport {
    let start = Instant::now();
    let states = enumerate_states(spec);
    let pairs: Vec<(&State, &State)> = states.iter().flat_map(|x| states.iter().map(move |y| (x, y))).collect();
    let results: Vec<PairResult> = pairs.par_iter().map(|(x, y)| check_pair(x, y, budgets)).collect();

    let mut totals: BTreeMap<(Decision, Decision), usize> = BTreeMap::new();
    let mut disagreements = Vec::new();
    let mut invalid_artifacts = Vec::new();
    let (mut unknown, mut witnesses_checked, mut traces_checked) = (0, 0, 0);
    for ((x, y), r) in pairs.iter().zip(&results) {
        *totals.entry((r.logical, r.sim)).or_default() += 1;
        if !r.logical.is_decided() || !r.sim.is_decided() {
            unknown += 1;
        } else if r.logical != r.sim {
            disagreements.push(Disagreement {
                left: (*x).clone(),
                right: (*y).clone(),
                logical: r.logical,
                simulation: r.sim,
                replay: vec![
                    format!("linproc logical {} {}", quote(x), quote(y)),
                    format!("linproc sim {} {}", quote(x), quote(y)),
                ],
            });
        }
        witnesses_checked += usize::from(r.witness);
        traces_checked += usize::from(r.trace);
        if let Some(e) = &r.artifact_error {
            invalid_artifacts.push(format!("({x}) ≼ ({y}): {e}"));
        }
    }
    AgreementReport {
        spec: spec.clone(),
        budgets: *budgets,
        states: states.len(),
        pairs: pairs.len(),
        totals: totals.into_iter().map(|((logical, simulation), count)| VerdictCount { logical, simulation, count }).collect(),
        disagreements,
        unknown,
        unknown_rate: if pairs.is_empty() { 0.0 } else { unknown as f64 / pairs.len() as f64 },
        witnesses_checked,
        traces_checked,
        invalid_artifacts,
        wall_time_ms: Some(start.elapsed().as_millis() as u64),
    }
}

impl fmt::Display for AgreementReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} states, {} ordered pairs", self.states, self.pairs)?;
        writeln!(f, "{:<10} {:<10} {:>8}", "logical", "simulation", "pairs")?;
        for t in &self.totals {
            writeln!(f, "{:<10} {:<10} {:>8}", t.logical.to_string(), t.simulation.to_string(), t.count)?;
        }
        writeln!(f, "disagreements: {}", self.disagreements.len())?;
        for d in &self.disagreements {
            writeln!(f, "  ({}) ≼ ({}): logical {}, simulation {}", d.left, d.right, d.logical, d.simulation)?;
        }
        writeln!(f, "unknown: {} ({:.1}%)", self.unknown, 100.0 * self.unknown_rate)?;
        writeln!(
            f,
            "artifacts: {} witnesses, {} traces, {} invalid",
            self.witnesses_checked,
            self.traces_checked,
            self.invalid_artifacts.len()
        )?;
        for e in &self.invalid_artifacts {
            writeln!(f, "  {e}")?;
        }
        if let Some(ms) = self.wall_time_ms {
            writeln!(f, "wall time: {ms} ms")?;
        }
        Ok(())
    }
}
