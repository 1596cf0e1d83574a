//! Constructive resolutions via bipartite matching: for a bipartite state of
//! maximal Schmidt number, fine-graining each measurement and matching
//! outcomes across the two sides (Hall's marriage theorem guarantees a
//! perfect matching block by block) yields a probabilistic resolution
//! without any linear programming.
//!
//! Run with: `cargo run --example hall_resolution`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mqt::field::FieldSpec;
use mqt::render::render_probability;
use mqt::resolve::{check_prob_ns, hall_resolution, singlet_resolution};
use mqt::sample::{random_dual_basis, random_maximal_state};
use mqt::states::{mobit, Measurement, StateSpace, Subspace, Vector};
use mqt::tables::{build_table, xyz_menu};

fn main() {
    let field = FieldSpec::new(2).unwrap();
    let psi = mobit::singlet(field);
    let menu = xyz_menu(field);

    // On the singlet the matching construction lands exactly on the unique
    // LP resolution.
    let pt = hall_resolution(&psi, &menu, &menu).unwrap();
    println!("matching-based resolution of the singlet:\n");
    println!("{}", render_probability(&pt));
    assert_eq!(pt, singlet_resolution());
    println!("equals the unique resolution of the singlet table: yes");

    // Random maximal-Schmidt states with random basic measurements.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for p in [2u64, 3, 5] {
        let field = FieldSpec::new(p).unwrap();
        for dim in 2..=4 {
            for _ in 0..3 {
                let psi = random_maximal_state(&mut rng, dim, field);
                let menu1 = random_menu(&mut rng, dim, field, 2);
                let menu2 = random_menu(&mut rng, dim, field, 2);
                let pt = hall_resolution(&psi, &menu1, &menu2).unwrap();
                // The construction must produce a no-signalling probability
                // table supported inside the possibility table of the state.
                assert!(check_prob_ns(&pt));
                let t = build_table(&Subspace::line(&psi).unwrap(), &menu1, &menu2).unwrap();
                assert!(pt.zero_on_blanks(&t));
                checked += 1;
            }
        }
    }
    println!("verified matching resolutions for {checked} random maximal states");
}

/// A menu of `n` random basic measurements on a `dim`-dimensional system.
fn random_menu(
    rng: &mut ChaCha8Rng,
    dim: usize,
    field: FieldSpec,
    n: usize,
) -> Vec<(String, Measurement)> {
    let space = StateSpace::new(dim, field);
    (0..n)
        .map(|i| {
            let bras: Vec<Vector> = random_dual_basis(rng, dim, field);
            (format!("M{i}"), Measurement::basic(&bras, &space).unwrap())
        })
        .collect()
}
