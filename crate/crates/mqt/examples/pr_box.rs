//! The nonlocal-box possibility table: minimally no-signalling, strongly
//! resolvable with the familiar half/half weights, yet with no deterministic
//! local model behind it.
//!
//! Run with: `cargo run --example pr_box`

use mqt::render::{render_possibility, render_probability};
use mqt::resolve::{prbox_resolution, resolution_unique, strong_resolution};
use mqt::tables::{check_modal_ns, is_minimal_ns, lhv_membership, prbox_table};

fn main() {
    let table = prbox_table();
    println!("nonlocal-box table (questions A/B vs C/D):\n");
    println!("{}", render_possibility(&table));

    println!(
        "modal no-signalling: {}",
        if check_modal_ns(&table) { "yes" } else { "no" }
    );
    // Minimal: deleting any single mark breaks no-signalling outright
    // (after propagating forced blanks).
    println!("minimally no-signalling: {}", is_minimal_ns(&table).unwrap());

    let strong = strong_resolution(&table).expect("the box is strongly resolvable");
    println!("\nstrong resolution (positive on every mark):\n");
    println!("{}", render_probability(&strong));
    assert_eq!(strong, prbox_resolution());
    println!("matches the built-in fixture: yes");
    println!("resolution unique: {}", resolution_unique(&table).unwrap());

    // No join of deterministic local strategies reproduces the table.
    match lhv_membership(&table).unwrap() {
        Some(_) => unreachable!("the box has no local model"),
        None => println!("deterministic local model: none"),
    }
}
