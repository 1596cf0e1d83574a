//! Seeded random generators for property tests and bulk verification runs.
//!
//! Everything is driven by a caller-supplied [`rand::Rng`], typically a
//! `ChaCha8Rng` seeded for reproducibility; the library itself never touches
//! global randomness.

use rand::Rng;

use crate::channels::{check_unconditional, TypeLMap};
use crate::field::FieldSpec;
use crate::linalg::Matrix;
use crate::states::{StateSpace, Variance, Vector};
use crate::tables::{
    table_join, DeterministicLocalStrategy, PossibilityTable, Scenario,
};

/// A uniformly random matrix over the field.
pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, field: FieldSpec) -> Matrix {
    let p = field.modulus();
    let entries: Vec<Vec<u64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(0..p)).collect())
        .collect();
    Matrix::from_rows(&entries, cols, field).expect("conforming rows")
}

/// A random invertible matrix, by rejection.
pub fn random_invertible<R: Rng>(rng: &mut R, dim: usize, field: FieldSpec) -> Matrix {
    loop {
        let m = random_matrix(rng, dim, dim, field);
        if m.rank() == dim {
            return m;
        }
    }
}

/// A random bipartite pure state of maximal Schmidt number on a `d (x) d`
/// composite: the flattening of a random invertible coefficient matrix.
pub fn random_maximal_state<R: Rng>(rng: &mut R, dim: usize, field: FieldSpec) -> Vector {
    let coeff = random_invertible(rng, dim, field);
    let space = StateSpace::composite(&[dim, dim], field);
    let coords: Vec<u64> = (0..dim)
        .flat_map(|r| coeff.row(r))
        .collect();
    Vector::ket(&coords, &space).expect("conforming coordinates")
}

/// A random ordered basis of the dual space: the rows of a random invertible
/// matrix as bras.
pub fn random_dual_basis<R: Rng>(rng: &mut R, dim: usize, field: FieldSpec) -> Vec<Vector> {
    let m = random_invertible(rng, dim, field);
    let space = StateSpace::new(dim, field);
    (0..dim)
        .map(|r| Vector::new(&m.row(r), &space, Variance::Dual).expect("conforming coordinates"))
        .collect()
}

/// A random unconditional channel with `k` Kraus terms on a `dim`-dimensional
/// system, by rejection on the normalization condition.
pub fn random_unconditional_map<R: Rng>(
    rng: &mut R,
    dim: usize,
    k: usize,
    field: FieldSpec,
) -> TypeLMap {
    loop {
        let kraus: Vec<Matrix> = (0..k).map(|_| random_matrix(rng, dim, dim, field)).collect();
        if check_unconditional(&kraus).expect("conforming shapes") {
            return TypeLMap::new(kraus).expect("conforming shapes");
        }
    }
}

/// A uniformly random deterministic local strategy for a scenario.
pub fn random_strategy<R: Rng>(rng: &mut R, scenario: &Scenario) -> DeterministicLocalStrategy {
    DeterministicLocalStrategy {
        f1: scenario.rows.iter().map(|m| rng.gen_range(0..m.outcomes)).collect(),
        f2: scenario.cols.iter().map(|m| rng.gen_range(0..m.outcomes)).collect(),
    }
}

/// The join of `n` random deterministic strategies: a random table that is
/// local-hidden-variable by construction. Returns the table and the
/// strategies behind it.
pub fn random_lhv_table<R: Rng>(
    rng: &mut R,
    scenario: &Scenario,
    n: usize,
) -> (PossibilityTable, Vec<DeterministicLocalStrategy>) {
    assert!(n >= 1);
    let strategies: Vec<DeterministicLocalStrategy> =
        (0..n).map(|_| random_strategy(rng, scenario)).collect();
    let mut table = strategies[0].induced_table(scenario);
    for s in &strategies[1..] {
        table = table_join(&table, &s.induced_table(scenario)).expect("same scenario");
    }
    (table, strategies)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::states::schmidt;
    use crate::tables::check_modal_ns;

    #[test]
    fn generators_are_deterministic_under_seed() {
        let field = FieldSpec::new(3).unwrap();
        let a = random_maximal_state(&mut ChaCha8Rng::seed_from_u64(7), 3, field);
        let b = random_maximal_state(&mut ChaCha8Rng::seed_from_u64(7), 3, field);
        assert_eq!(a, b);
    }

    #[test]
    fn maximal_states_have_full_schmidt_number() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [2u64, 3, 5] {
            let field = FieldSpec::new(p).unwrap();
            for dim in 2..=4 {
                for _ in 0..5 {
                    let psi = random_maximal_state(&mut rng, dim, field);
                    assert_eq!(schmidt(&psi).unwrap().schmidt_number, dim);
                }
            }
        }
    }

    #[test]
    fn dual_bases_are_bases() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let field = FieldSpec::new(5).unwrap();
        for _ in 0..10 {
            let basis = random_dual_basis(&mut rng, 3, field);
            let rows: Vec<Vec<u64>> = basis.iter().map(|v| v.coords().to_vec()).collect();
            assert_eq!(Matrix::from_rows(&rows, 3, field).unwrap().rank(), 3);
        }
    }

    #[test]
    fn unconditional_maps_check_out() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let field = FieldSpec::new(2).unwrap();
        for k in 1..=3 {
            let m = random_unconditional_map(&mut rng, 2, k, field);
            assert!(m.is_unconditional());
            assert_eq!(m.kraus().len(), k);
        }
    }

    #[test]
    fn lhv_tables_are_ns() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let scenario = Scenario::symmetric(&["X", "Y", "Z"], 2);
        for _ in 0..20 {
            let (t, strategies) = random_lhv_table(&mut rng, &scenario, 3);
            assert_eq!(strategies.len(), 3);
            assert!(check_modal_ns(&t));
        }
    }
}
