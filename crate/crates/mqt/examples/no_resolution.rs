//! A no-signalling table with no probabilistic resolution at all: the
//! linear-programming relaxation is infeasible, and the exact-rational
//! simplex returns a certificate — a nonnegative combination of the
//! constraints that sums to a contradiction.
//!
//! Run with: `cargo run --example no_resolution`

use mqt::lp::format_ratio;
use mqt::render::render_possibility;
use mqt::resolve::{weak_resolution, WeakResolution};
use mqt::tables::{check_modal_ns, table_n};

fn main() {
    let table = table_n();
    println!("a three-measurement, three-outcome table:\n");
    println!("{}", render_possibility(&table));
    println!(
        "modal no-signalling: {}",
        if check_modal_ns(&table) { "yes" } else { "no" }
    );

    match weak_resolution(&table) {
        WeakResolution::Table(_) => unreachable!("this table admits no resolution"),
        WeakResolution::Infeasible { certificate } => {
            println!("\nno probabilistic resolution exists.");
            println!("Farkas certificate (weights on the named constraints):");
            for (label, weight) in &certificate {
                println!("  {:>6} x {label}", format_ratio(weight));
            }
            // The contradiction runs through the doubly-degenerate block:
            // both measurements W, where a whole outcome row and column of
            // the joint table are blank.
            assert!(certificate.iter().any(|(label, _)| label.contains("W,W")));
            println!("\nthe certificate involves the (W, W) block, whose empty");
            println!("outcome row and column cannot both have probability zero");
            println!("while the no-signalling marginals stay consistent.");
        }
    }
}
