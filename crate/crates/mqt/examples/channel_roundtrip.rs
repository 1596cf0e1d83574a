//! The representation theorem for generalized channels, as a round trip:
//! start from a Kraus family, dilate it to an invertible map on a larger
//! system, extend the dilation to act jointly with a reference system,
//! extract a Kraus family back out of the extension, and check that the
//! extracted channel agrees with the original on every state.
//!
//! Run with: `cargo run --example channel_roundtrip`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mqt::channels::{
    apply_type_l, dilate, extend_to_joint, kraus_from_extension, maps_agree, verify_type_e,
    TypeLMap,
};
use mqt::field::FieldSpec;
use mqt::linalg::Matrix;
use mqt::sample::random_unconditional_map;
use mqt::states::{StateSpace, DEFAULT_ENUM_BUDGET};

fn roundtrip(map: &TypeLMap) -> bool {
    let dim = map.input_dim();
    // Kraus family -> invertible dilation on system (x) environment.
    let dilation = dilate(map).expect("unconditional channels dilate");
    // Dilation -> joint map acting as identity on a reference factor.
    let joint = extend_to_joint(&dilation, dim).unwrap();
    // Joint map -> Kraus family, read off its action on a maximally
    // entangled reference-system state.
    let extracted = kraus_from_extension(|m| joint.apply(m), dim, map.field()).unwrap();
    // The two families may differ as matrices, but must define the same
    // channel on every subspace.
    let space = StateSpace::new(dim, map.field());
    maps_agree(
        |l| apply_type_l(&extracted, l),
        |l| apply_type_l(map, l),
        &space,
        DEFAULT_ENUM_BUDGET,
    )
    .unwrap()
}

fn main() {
    let field = FieldSpec::new(2).unwrap();

    // A hand-picked two-term channel on a mobit.
    let kraus = vec![
        Matrix::from_rows(&[vec![1, 0], vec![0, 0]], 2, field).unwrap(),
        Matrix::from_rows(&[vec![0, 0], vec![0, 1]], 2, field).unwrap(),
    ];
    let map = TypeLMap::new(kraus).unwrap();
    assert!(map.is_unconditional());
    println!(
        "dephasing-style channel round trip agrees: {}",
        roundtrip(&map)
    );

    // The conditioning diagram: extending with a reference system and then
    // conditioning on a reference effect commutes with conditioning first.
    println!(
        "conditioning diagram commutes: {}",
        verify_type_e(&map, 2, DEFAULT_ENUM_BUDGET).unwrap()
    );

    // Seeded random channels over Z_2 and Z_3.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut checked = 0;
    for p in [2u64, 3] {
        let field = FieldSpec::new(p).unwrap();
        for dim in 2..=3 {
            for k in 1..=3 {
                let map = random_unconditional_map(&mut rng, dim, k, field);
                assert!(roundtrip(&map), "round trip failed at p={p} dim={dim} k={k}");
                checked += 1;
            }
        }
    }
    println!("round trip verified on {checked} seeded random channels");
}
