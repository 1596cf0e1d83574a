//! Kochen-Specker-style contextuality for a single mobit: over any prime
//! field, no truth assignment to the projective dual points can pick exactly
//! one member of every two-element dual basis.
//!
//! Run with: `cargo run --example kochen_specker`

use mqt::field::FieldSpec;
use mqt::hvgames::{noncontextual_search, ContextFamily};

fn main() {
    for p in [2u64, 3, 5, 7] {
        let field = FieldSpec::new(p).unwrap();
        // All projective dual points of the 2-dimensional system, with one
        // context per unordered dual basis (p^2 - 1 over the scalars leaves
        // p + 1 points; every pair of distinct points is a basis).
        let family = ContextFamily::mobit_pairs(field);
        let n = family.effects().len();
        let contexts = family.contexts().len();
        match noncontextual_search(&family, 1 << 20).unwrap() {
            None => println!(
                "p = {p}: {n} effects, {contexts} contexts, all {} assignments rejected",
                1u64 << n
            ),
            Some(a) => {
                println!("p = {p}: unexpected noncontextual assignment {a:?}");
                unreachable!("a mobit admits no noncontextual assignment");
            }
        }
    }
    println!();
    println!("a valid assignment would mark exactly one point per context, but");
    println!("with p + 1 points and one context per pair, any marked point sits");
    println!("in p contexts that all demand its partners stay unmarked -- and the");
    println!("remaining points then form a context with no marked member.");
}
