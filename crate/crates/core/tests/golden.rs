use std::path::PathBuf;

use linproc_core::semantics::{export_dot, ExploreBudget};
use linproc_core::syntax::parse_state;

/// Compares the DOT export of `state` with a checked-in snapshot. Set
/// `UPDATE_GOLDEN=1` to rewrite the snapshots.
fn check(name: &str, state: &str) {
    let budget = ExploreBudget::default().with_clones(1);
    let dot = export_dot(&parse_state(state).unwrap(), &budget);
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &dot).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(dot, expected, "{name} differs from its snapshot");
}

#[test]
fn choice() {
    check("choice.dot", ". ; a & b");
}

#[test]
fn message_and_receiver() {
    check("sync.dot", ". ; a, a -o b");
}

#[test]
fn replicated_atom() {
    check("replicated.dot", "a ; .");
}
