//! State calculus on bipartite pure states: Schmidt decomposition, factor
//! reduction, conditioning on a remote effect, purification of a mixed
//! state, and the invertible connector between two purifications of the
//! same mixture.
//!
//! Run with: `cargo run --example schmidt_purification`

use mqt::field::FieldSpec;
use mqt::states::{
    apply_left, conditional_state, connect_purifications, purify, reduce, schmidt,
    schmidt_reassemble, StateSpace, Subspace, Variance, Vector,
};

fn main() {
    let field = FieldSpec::new(3).unwrap();
    let space = StateSpace::composite(&[3, 3], field);

    // A rank-2 state over Z_3: |0,0> + |1,1> + 2|0,1>.
    let psi = Vector::ket(&[1, 2, 0, 0, 1, 0, 0, 0, 0], &space).unwrap();

    let d = schmidt(&psi).unwrap();
    println!("Schmidt number: {}", d.schmidt_number);
    println!("left basis rows (first {} are Schmidt vectors):", d.schmidt_number);
    for r in d.left_basis.rows_raw() {
        println!("  {r:?}");
    }
    println!("right basis rows:");
    for r in d.right_basis.rows_raw() {
        println!("  {r:?}");
    }
    // The decomposition reassembles to the original state (up to the exact
    // vector here, not merely its line).
    assert_eq!(schmidt_reassemble(&d, field).unwrap(), psi);
    println!("reassembly reproduces the state: yes");

    // Both reductions have dimension equal to the Schmidt number.
    let line = Subspace::line(&psi).unwrap();
    let left = reduce(&line, 1).unwrap();
    let right = reduce(&line, 0).unwrap();
    println!(
        "reduced states: left dim {}, right dim {}",
        left.dim(),
        right.dim()
    );
    assert_eq!(left.dim(), d.schmidt_number);
    assert_eq!(right.dim(), d.schmidt_number);

    // Conditioning the right factor on the effect <0| applied to the left.
    let dual = StateSpace::new(3, field);
    let bra = Vector::new(&[1, 0, 0], &dual, Variance::Dual).unwrap();
    let cond = conditional_state(&line, &Subspace::line(&bra).unwrap(), 0).unwrap();
    println!(
        "state of the right factor given effect <0| on the left: dim {} basis {:?}",
        cond.dim(),
        cond.basis().rows_raw()
    );

    // Purify the left reduction and connect the result back to psi: any two
    // purifications of the same mixture differ by an invertible map on the
    // purifying factor alone.
    let pur = purify(&right).unwrap();
    println!("purification of the right reduction: {:?}", pur.coords());
    // Twist the purifying factor with an invertible map; the right reduction
    // is untouched, so the two kets purify the same mixture.
    let twist = mqt::linalg::Matrix::from_rows(&[vec![1, 1], vec![0, 1]], 2, field).unwrap();
    let pur2 = apply_left(&twist, &pur).unwrap();
    match connect_purifications(&pur, &pur2).unwrap() {
        Some(t) => {
            println!("recovered connector between the purifications: {:?}", t.rows_raw());
            let moved = apply_left(&t, &pur).unwrap();
            assert_eq!(
                Subspace::line(&moved).unwrap(),
                Subspace::line(&pur2).unwrap()
            );
            println!("connector carries one purification onto the other: yes");
        }
        None => unreachable!("same mixture, so a connector exists"),
    }
}
