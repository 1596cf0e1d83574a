//! The smallest system: a mobit, the two-dimensional system over Z_2. Its
//! three states, three effects, three binary measurements, and the modal
//! possibility rule (an outcome is possible iff the dual pairing with the
//! state is nonzero).
//!
//! Run with: `cargo run --example mobit_basics`

use mqt::field::FieldSpec;
use mqt::states::{
    is_possible, mobit, projective_points, Subspace, Variance, DEFAULT_ENUM_BUDGET,
};

fn main() {
    let field = FieldSpec::new(2).unwrap();

    // Exact arithmetic in Z_2: 1 + 1 = 0, and every nonzero scalar inverts.
    let one = field.one();
    assert_eq!((one + one).value(), 0);
    assert_eq!(one.inv().unwrap(), one);
    println!("Z_2 arithmetic: 1 + 1 = 0, 1^-1 = 1");

    // The mobit has exactly three states (projective points) ...
    let space = mqt::states::StateSpace::new(2, field);
    let states = projective_points(&space, Variance::Primal, DEFAULT_ENUM_BUDGET).unwrap();
    println!("\nmobit states: {}", states.len());
    for s in &states {
        println!("  |{:?}>", s.coords());
    }

    // ... and three dual directions a, b, c, giving three measurements
    // X = {c, a}, Y = {b, c}, Z = {a, b}.
    let (a, b, c) = mobit::dual_vectors(field);
    println!("\ndual points: a = <{:?}|, b = <{:?}|, c = <{:?}|", a.coords(), b.coords(), c.coords());
    let [x, y, z] = mobit::xyz_measurements(field);
    for (name, m) in [("X", &x), ("Y", &y), ("Z", &z)] {
        assert!(m.is_valid());
        println!("measurement {name}: {} effects, valid", m.outcomes());
    }

    // Possibility is exact: effect <e| is possible on state |s> iff <e|s> != 0.
    println!("\npossibility of each effect on each state (1 = possible):");
    let effects = [("a", &a), ("b", &b), ("c", &c)];
    for s in &states {
        let line = Subspace::line(s).unwrap();
        let row: Vec<u8> = effects
            .iter()
            .map(|(_, e)| {
                let eff = Subspace::line(e).unwrap();
                u8::from(is_possible(&eff, &line).unwrap())
            })
            .collect();
        println!("  |{:?}>: a={} b={} c={}", s.coords(), row[0], row[1], row[2]);
    }
    println!("\neach state excludes exactly the one dual point annihilating it,");
    println!("so every binary measurement has a definite outcome on one state");
    println!("and an indefinite (both-possible) outcome pattern on the others.");
}
