//! Exact structure counts for small composites: the fifteen pure states of
//! two mobits split into nine product states and six entangled ones, and the
//! subspace lattice obeys the modular law but not distributivity.
//!
//! Run with: `cargo run --example state_counting`

use mqt::field::FieldSpec;
use mqt::states::{
    all_subspaces, projective_points, schmidt, StateSpace, Variance, DEFAULT_ENUM_BUDGET,
};

fn main() {
    let field = FieldSpec::new(2).unwrap();

    // Two mobits: (2^4 - 1) / (2 - 1) = 15 projective points.
    let space = StateSpace::composite(&[2, 2], field);
    let states = projective_points(&space, Variance::Primal, DEFAULT_ENUM_BUDGET).unwrap();
    let (mut product, mut entangled) = (0, 0);
    for psi in &states {
        match schmidt(psi).unwrap().schmidt_number {
            1 => product += 1,
            2 => entangled += 1,
            n => unreachable!("Schmidt number {n} on a 2 x 2 composite"),
        }
    }
    println!("two-mobit pure states: {} ({product} product, {entangled} entangled)", states.len());
    assert_eq!((states.len(), product, entangled), (15, 9, 6));

    // The subspace lattice of Z_2^3: count subspaces by dimension and verify
    // the modular law a <= c  =>  a v (b ^ c) = (a v b) ^ c on all triples,
    // along with a failure of distributivity.
    let cube = StateSpace::new(3, field);
    let subs = all_subspaces(&cube, Variance::Primal, DEFAULT_ENUM_BUDGET).unwrap();
    let mut by_dim = [0usize; 4];
    for s in &subs {
        by_dim[s.dim()] += 1;
    }
    println!("subspaces of Z_2^3 by dimension: {by_dim:?}");
    assert_eq!(by_dim, [1, 7, 7, 1]);

    let mut modular_checked = 0u64;
    let mut distributive_fails = 0u64;
    for a in &subs {
        for b in &subs {
            for c in &subs {
                if c.contains_subspace(a).unwrap() {
                    let lhs = a.join(&b.meet(c).unwrap()).unwrap();
                    let rhs = a.join(b).unwrap().meet(c).unwrap();
                    assert_eq!(lhs, rhs);
                    modular_checked += 1;
                }
                let lhs = a.meet(&b.join(c).unwrap()).unwrap();
                let rhs = a.meet(b).unwrap().join(&a.meet(c).unwrap()).unwrap();
                if lhs != rhs {
                    distributive_fails += 1;
                }
            }
        }
    }
    println!("modular law verified on {modular_checked} admissible triples");
    println!("distributive law fails on {distributive_fails} triples");
    assert!(distributive_fails > 0);
}
