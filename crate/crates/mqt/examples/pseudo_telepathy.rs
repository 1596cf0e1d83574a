//! A cooperative game two separated players cannot win classically but win
//! with certainty by sharing a single entangled state: the referee asks each
//! player one of the measurements X, Y, Z, and the pair of answers must land
//! on a mark of the singlet possibility table.
//!
//! Run with: `cargo run --example pseudo_telepathy`

use mqt::field::FieldSpec;
use mqt::hvgames::{play_game, GameStrategy};
use mqt::states::{mobit, Subspace};
use mqt::tables::{all_strategies, singlet_table, xyz_menu};

fn main() {
    let table = singlet_table();

    // Every deterministic classical strategy: each player fixes an answer
    // for each possible question, 2^3 x 2^3 = 64 in total.
    let classical = all_strategies(table.scenario());
    let mut winners = 0;
    for s in &classical {
        let outcome = play_game(&table, &GameStrategy::Classical(s.clone())).unwrap();
        if outcome.wins_all {
            winners += 1;
        }
    }
    println!(
        "classical strategies winning on all question pairs: {winners} of {}",
        classical.len()
    );
    assert_eq!(winners, 0);

    // Shared-state strategy: both players measure their half of the singlet
    // with the asked measurement and answer with the outcome.
    let field = FieldSpec::new(2).unwrap();
    let menu = xyz_menu(field);
    let shared = GameStrategy::SharedState {
        state: Subspace::line(&mobit::singlet(field)).unwrap(),
        meas1: menu.clone(),
        meas2: menu,
    };
    let outcome = play_game(&table, &shared).unwrap();
    println!(
        "shared-singlet strategy wins on all pairs: {}",
        outcome.wins_all
    );
    assert!(outcome.wins_all);
}
