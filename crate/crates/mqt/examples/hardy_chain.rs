//! A Hardy-style possibility chain on the singlet table: four pure
//! possibility facts that jointly contradict any local assignment of
//! pre-existing values, with no probabilities or counting anywhere.
//!
//! Facts, for measurements A, B on one side and C, D on the other:
//!   1. (+, +) is impossible for (A, D);
//!   2. (+, +) is impossible for (B, C);
//!   3. (+, +) is possible for (B, D);
//!   4. (-, -) is impossible for (A, C).
//!
//! Locally: by fact 3 a run can answer (+ for B, + for D). Fact 1 then
//! forces A to answer -, fact 2 forces C to answer -, contradicting fact 4.
//!
//! Run with: `cargo run --example hardy_chain`

use mqt::hvgames::{hardy_check, HardyLeg, HardyMapping};
use mqt::tables::{lhv_membership, singlet_table};

fn main() {
    let table = singlet_table();

    // On the singlet the chain holds with A = X, B = Y and, on the second
    // side, C = Z and D = Y with their outcomes relabeled (+ <-> -).
    let mapping = HardyMapping {
        a: HardyLeg::plain(0),
        b: HardyLeg::plain(1),
        c: HardyLeg::negated(2),
        d: HardyLeg::negated(1),
    };
    let holds = hardy_check(&table, &mapping).unwrap();
    println!("Hardy chain holds on the singlet table: {holds}");
    assert!(holds);

    // Without the outcome relabeling the same measurement choice fails.
    let plain = HardyMapping {
        a: HardyLeg::plain(0),
        b: HardyLeg::plain(1),
        c: HardyLeg::plain(2),
        d: HardyLeg::plain(1),
    };
    println!(
        "same choice without relabeling: {}",
        hardy_check(&table, &plain).unwrap()
    );

    // Consistency check: the chain implies there is no deterministic local
    // model, and indeed the exhaustive search finds none.
    assert!(lhv_membership(&table).unwrap().is_none());
    println!("exhaustive search confirms: no deterministic local model");
}
