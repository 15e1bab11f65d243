use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::formula::Formula;

/// A process state `(Γ;Δ)` in canonical form.
///
/// `gamma` is a sorted set (replicated processes merge), `delta` a sorted
/// multiset. Every constructor canonicalizes, so structural equality on
/// `State` is equality modulo structural congruence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(from = "RawState", into = "RawState")]
pub struct State {
    gamma: Vec<Formula>,
    delta: Vec<Formula>,
}

/// Unnormalized contexts as written by a user; duplicates and any order allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawState {
    pub gamma: Vec<Formula>,
    pub delta: Vec<Formula>,
}

impl RawState {
    pub fn canonicalize(&self) -> State {
        State::new(self.gamma.iter().cloned(), self.delta.iter().cloned())
    }
}

impl From<RawState> for State {
    fn from(raw: RawState) -> State {
        raw.canonicalize()
    }
}

impl From<State> for RawState {
    fn from(s: State) -> RawState {
        RawState { gamma: s.gamma, delta: s.delta }
    }
}

/// Maps a possibly non-canonical state to its canonical representative.
pub fn canonicalize(raw: &RawState) -> State {
    raw.canonicalize()
}

/// Which half of a split a context element goes to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Left,
    Right,
    Both,
}

impl State {
    pub fn new(
        gamma: impl IntoIterator<Item = Formula>,
        delta: impl IntoIterator<Item = Formula>,
    ) -> State {
        let mut gamma: Vec<Formula> = gamma.into_iter().collect();
        gamma.sort();
        gamma.dedup();
        let mut delta: Vec<Formula> = delta.into_iter().collect();
        delta.sort();
        State { gamma, delta }
    }

    pub fn empty() -> State {
        State::default()
    }

    /// `(·;Δ)`
    pub fn linear(delta: impl IntoIterator<Item = Formula>) -> State {
        State::new(std::iter::empty(), delta)
    }

    pub fn gamma(&self) -> &[Formula] {
        &self.gamma
    }

    pub fn delta(&self) -> &[Formula] {
        &self.delta
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty() && self.delta.is_empty()
    }

    /// Sum of formula sizes plus the cardinalities of both contexts.
    pub fn size(&self) -> usize {
        self.gamma.iter().chain(&self.delta).map(Formula::size).sum::<usize>()
            + self.gamma.len()
            + self.delta.len()
    }

    pub fn gamma_contains(&self, f: &Formula) -> bool {
        self.gamma.binary_search(f).is_ok()
    }

    pub fn delta_count(&self, f: &Formula) -> usize {
        self.delta.iter().filter(|d| *d == f).count()
    }

    /// Indices of the first occurrence of each distinct Δ element.
    pub fn distinct_delta(&self) -> impl Iterator<Item = (usize, &Formula)> {
        self.delta
            .iter()
            .enumerate()
            .filter(|(i, f)| *i == 0 || self.delta[*i - 1] != **f)
    }

    pub fn with_gamma(&self, f: Formula) -> State {
        let mut s = self.clone();
        if let Err(pos) = s.gamma.binary_search(&f) {
            s.gamma.insert(pos, f);
        }
        s
    }

    pub fn with_delta(&self, f: Formula) -> State {
        let mut s = self.clone();
        s.push_delta(f);
        s
    }

    pub(crate) fn push_delta(&mut self, f: Formula) {
        let pos = self.delta.partition_point(|d| *d <= f);
        self.delta.insert(pos, f);
    }

    /// Removes the Δ occurrence at `idx`, adding `replacements`.
    pub fn replace_delta(&self, idx: usize, replacements: impl IntoIterator<Item = Formula>) -> State {
        let mut s = self.clone();
        s.delta.remove(idx);
        for f in replacements {
            s.push_delta(f);
        }
        s
    }

    /// Removes one occurrence of `f` from Δ, if present.
    pub fn without_delta(&self, f: &Formula) -> Option<State> {
        let idx = self.delta.iter().position(|d| d == f)?;
        let mut s = self.clone();
        s.delta.remove(idx);
        Some(s)
    }

    /// `Γ` with an empty linear context.
    pub fn gamma_only(&self) -> State {
        State { gamma: self.gamma.clone(), delta: Vec::new() }
    }

    /// Γ ⊆ other.Γ and Δ ⊆ other.Δ (as multisets).
    pub fn is_substate_of(&self, other: &State) -> bool {
        self.gamma.iter().all(|g| other.gamma_contains(g)) && multiset_le(&self.delta, &other.delta)
    }

    /// `(·; !Γ, Δ)`
    pub fn expand_bangs(&self) -> State {
        State::linear(
            self.gamma
                .iter()
                .map(|g| Formula::bang(g.clone()))
                .chain(self.delta.iter().cloned()),
        )
    }

    /// Right-associated `!G1 * ... * !Gn * D1 * ... * Dm`, or `1` if empty.
    pub fn tensor_of(&self) -> Formula {
        Formula::tensor_all(
            self.gamma
                .iter()
                .map(|g| Formula::bang(g.clone()))
                .chain(self.delta.iter().cloned()),
        )
    }

    /// `((Γ₁,Γ₂);(Δ₁,Δ₂))`
    pub fn compose(&self, other: &State) -> State {
        let mut gamma = self.gamma.clone();
        gamma.extend(other.gamma.iter().cloned());
        gamma.sort();
        gamma.dedup();
        let mut delta = Vec::with_capacity(self.delta.len() + other.delta.len());
        let (mut i, mut j) = (0, 0);
        while i < self.delta.len() && j < other.delta.len() {
            if self.delta[i] <= other.delta[j] {
                delta.push(self.delta[i].clone());
                i += 1;
            } else {
                delta.push(other.delta[j].clone());
                j += 1;
            }
        }
        delta.extend_from_slice(&self.delta[i..]);
        delta.extend_from_slice(&other.delta[j..]);
        State { gamma, delta }
    }

    /// Every split `(p, q)` with `p.compose(q) == self`, in sorted order.
    ///
    /// Γ elements go left, right, or to both halves; each Δ occurrence goes
    /// to exactly one half, with equal occurrences treated as interchangeable.
    pub fn partitions(&self) -> Vec<(State, State)> {
        let mut out = BTreeSet::new();
        let groups: Vec<(&Formula, usize)> = group_counts(&self.delta);
        let mut gamma_sides = vec![Side::Left; self.gamma.len()];
        loop {
            let mut left_counts = vec![0usize; groups.len()];
            loop {
                let mut p = State::default();
                let mut q = State::default();
                for (g, side) in self.gamma.iter().zip(&gamma_sides) {
                    if *side != Side::Right {
                        p.gamma.push(g.clone());
                    }
                    if *side != Side::Left {
                        q.gamma.push(g.clone());
                    }
                }
                for ((f, n), k) in groups.iter().zip(&left_counts) {
                    p.delta.extend(std::iter::repeat_n((*f).clone(), *k));
                    q.delta.extend(std::iter::repeat_n((*f).clone(), n - k));
                }
                out.insert((p, q));
                if !next_counts(&mut left_counts, &groups) {
                    break;
                }
            }
            if !next_sides(&mut gamma_sides) {
                break;
            }
        }
        out.into_iter().collect()
    }
}

fn group_counts(items: &[Formula]) -> Vec<(&Formula, usize)> {
    let mut groups: Vec<(&Formula, usize)> = Vec::new();
    for f in items {
        match groups.last_mut() {
            Some((g, n)) if *g == f => *n += 1,
            _ => groups.push((f, 1)),
        }
    }
    groups
}

fn next_counts(counts: &mut [usize], groups: &[(&Formula, usize)]) -> bool {
    for (c, (_, n)) in counts.iter_mut().zip(groups) {
        if *c < *n {
            *c += 1;
            return true;
        }
        *c = 0;
    }
    false
}

fn next_sides(sides: &mut [Side]) -> bool {
    for s in sides.iter_mut() {
        match s {
            Side::Left => {
                *s = Side::Right;
                return true;
            }
            Side::Right => {
                *s = Side::Both;
                return true;
            }
            Side::Both => *s = Side::Left,
        }
    }
    false
}

/// Sorted-multiset inclusion.
pub(crate) fn multiset_le(small: &[Formula], big: &[Formula]) -> bool {
    let mut j = 0;
    for f in small {
        while j < big.len() && big[j] < *f {
            j += 1;
        }
        if j == big.len() || big[j] != *f {
            return false;
        }
        j += 1;
    }
    true
}

/// A sequent `Γ;Δ ⊢ C`; the context is canonical.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Sequent {
    #[serde(flatten)]
    pub context: State,
    pub goal: Formula,
}

impl Sequent {
    pub fn new(context: State, goal: Formula) -> Sequent {
        Sequent { context, goal }
    }

    pub fn gamma(&self) -> &[Formula] {
        self.context.gamma()
    }

    pub fn delta(&self) -> &[Formula] {
        self.context.delta()
    }

    pub fn size(&self) -> usize {
        self.context.size() + self.goal.size()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_state;

    fn st(text: &str) -> State {
        parse_state(text).unwrap()
    }

    // Independent oracle: every pair of sub-states whose composition is `s`.
    fn brute_partitions(s: &State) -> BTreeSet<(State, State)> {
        let subsets = |items: &[Formula]| -> Vec<Vec<Formula>> {
            (0..1u32 << items.len())
                .map(|mask| {
                    items
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, f)| f.clone())
                        .collect()
                })
                .collect()
        };
        let mut candidates = Vec::new();
        for g in subsets(s.gamma()) {
            for d in subsets(s.delta()) {
                candidates.push(State::new(g.clone(), d));
            }
        }
        let mut out = BTreeSet::new();
        for p in &candidates {
            for q in &candidates {
                if p.compose(q) == *s {
                    out.insert((p.clone(), q.clone()));
                }
            }
        }
        out
    }

    #[test]
    fn canonical_forms() {
        let raw = RawState {
            gamma: vec![Formula::atom("a"), Formula::atom("a")],
            delta: vec![Formula::atom("b")],
        };
        assert_eq!(canonicalize(&raw), st("a ; b"));
        let raw = RawState { gamma: vec![], delta: vec![Formula::atom("b"), Formula::atom("a")] };
        let c = canonicalize(&raw);
        assert_eq!(c.delta(), &[Formula::atom("a"), Formula::atom("b")]);
        assert_eq!(canonicalize(&RawState::from(c.clone())), c);
    }

    #[test]
    fn composition() {
        assert_eq!(st("a ; b").compose(&st("a ; c")), st("a ; b, c"));
        let s = st("a, !b ; c, c -o d");
        assert_eq!(s.compose(&State::empty()), s);
        assert_eq!(s.compose(&st("e ; c")), st("e ; c").compose(&s));
    }

    #[test]
    fn partition_examples() {
        let parts = st(". ; a").partitions();
        assert_eq!(parts, vec![(st(". ; ."), st(". ; a")), (st(". ; a"), st(". ; ."))]);
        let parts: BTreeSet<_> = st("a ; .").partitions().into_iter().collect();
        let expected: BTreeSet<_> = [
            (st(". ; ."), st("a ; .")),
            (st("a ; ."), st(". ; .")),
            (st("a ; ."), st("a ; .")),
        ]
        .into_iter()
        .collect();
        assert_eq!(parts, expected);
        assert_eq!(st(". ; a, b").partitions().len(), 4);
        // equal occurrences are interchangeable: {a,a} splits 3 ways, not 4
        assert_eq!(st(". ; a, a").partitions().len(), 3);
    }

    #[test]
    fn partitions_match_brute_force() {
        for text in [
            ". ; .", "a ; .", ". ; a, a", "a, b ; .", "a ; a", "a ; b, c", "1, top ; a, a",
            "a ; a, a, b", "a, b ; c, c", "!a ; !a, a",
        ] {
            let s = st(text);
            let fast: BTreeSet<_> = s.partitions().into_iter().collect();
            assert_eq!(fast, brute_partitions(&s), "{text}");
        }
    }

    #[test]
    fn tensor_of_state() {
        assert_eq!(State::empty().tensor_of(), Formula::One);
        assert_eq!(st("a ; b").tensor_of().to_string(), "!a * b");
        assert_eq!(st(". ; a, a").tensor_of().to_string(), "a * a");
        assert_eq!(st("a ; b, c").tensor_of().to_string(), "!a * b * c");
    }

    #[test]
    fn sizes_and_inclusion() {
        assert_eq!(State::empty().size(), 0);
        assert_eq!(st(". ; a").size(), 2);
        assert_eq!(st("a -o b ; a, a").size(), 3 + 1 + 2 + 2);
        assert!(st(". ; a").is_substate_of(&st("b ; a, a")));
        assert!(!st(". ; a, a").is_substate_of(&st("b ; a")));
    }
}
