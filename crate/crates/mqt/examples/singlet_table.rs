//! Build the possibility table of the two-mobit singlet state under the
//! three standard binary measurements, check no-signalling, and find its
//! unique probabilistic resolution.
//!
//! Run with: `cargo run --example singlet_table`

use mqt::field::FieldSpec;
use mqt::render::{render_possibility, render_probability};
use mqt::resolve::{resolution_unique, strong_resolution, weak_resolution, WeakResolution};
use mqt::states::{mobit, Subspace};
use mqt::tables::{build_table, check_modal_ns, singlet_table, xyz_menu};

fn main() {
    let field = FieldSpec::new(2).unwrap();

    // The singlet |S> = |0,1> - |1,0| (signs collapse over Z_2) and the
    // X/Y/Z measurement menu built from the three dual directions of a mobit.
    let psi = mobit::singlet(field);
    let state = Subspace::line(&psi).unwrap();
    let menu = xyz_menu(field);

    let table = build_table(&state, &menu, &menu).unwrap();
    println!("possibility table of the singlet under X/Y/Z on both sides:\n");
    println!("{}", render_possibility(&table));

    // The computed table coincides with the library's golden fixture.
    assert_eq!(table, singlet_table());
    println!("matches the built-in fixture: yes");
    println!(
        "modal no-signalling: {}",
        if check_modal_ns(&table) { "yes" } else { "no" }
    );

    // Every no-signalling table over this scenario admits a probabilistic
    // resolution; for the singlet it is unique but not strong (some marked
    // cells must carry probability zero).
    match weak_resolution(&table) {
        WeakResolution::Table(pt) => {
            println!("\nweak resolution:\n");
            println!("{}", render_probability(&pt));
        }
        WeakResolution::Infeasible { .. } => unreachable!("the singlet table is resolvable"),
    }
    println!(
        "resolution unique: {}",
        resolution_unique(&table).unwrap()
    );
    println!(
        "strong resolution exists: {}",
        strong_resolution(&table).is_some()
    );
}
