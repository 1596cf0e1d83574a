//! Bipartite possibility tables.
//!
//! Two parties each choose a measurement; the table records, for every pair
//! of measurement choices (a *block*), which joint outcomes are possible.
//! Tables are ordered by inclusion of marks, joined entrywise, and screened
//! by the modal no-signalling principle: whether a party's outcome is
//! possible cannot depend on the other party's choice of measurement.
//!
//! The module ships the three standard fixtures: the table of the modal
//! singlet, the modal PR box, and the no-signalling table with no
//! probabilistic resolution.

use thiserror::Error;

use crate::field::FieldSpec;
use crate::states::{is_possible, Measurement, StateError, Subspace, Variance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error("scenario mismatch: {0}")]
    ScenarioMismatch(String),
    #[error("block ({row}, {col}) has no marks")]
    EmptyBlock { row: usize, col: usize },
    #[error("measurement {0} fails the normalization condition")]
    InvalidMeasurement(String),
    #[error("table does not satisfy modal no-signalling")]
    NotNoSignalling,
    #[error("search budget exceeded: {0} candidates")]
    BudgetExceeded(u64),
}

/// One party's menu of measurements: labels with outcome counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementLabel {
    pub label: String,
    pub outcomes: usize,
}

impl MeasurementLabel {
    pub fn new(label: &str, outcomes: usize) -> MeasurementLabel {
        assert!(outcomes >= 1, "a measurement needs at least one outcome");
        MeasurementLabel { label: label.to_string(), outcomes }
    }
}

/// The measurement menus of the two parties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub rows: Vec<MeasurementLabel>,
    pub cols: Vec<MeasurementLabel>,
}

impl Scenario {
    pub fn new(rows: Vec<MeasurementLabel>, cols: Vec<MeasurementLabel>) -> Scenario {
        assert!(!rows.is_empty() && !cols.is_empty());
        Scenario { rows, cols }
    }

    /// A symmetric scenario: the same `n` measurements with `k` outcomes on
    /// both sides.
    pub fn symmetric(labels: &[&str], outcomes: usize) -> Scenario {
        let menu: Vec<MeasurementLabel> =
            labels.iter().map(|l| MeasurementLabel::new(l, outcomes)).collect();
        Scenario::new(menu.clone(), menu)
    }
}

/// A possibility table: one boolean block per pair of measurement choices,
/// entry `[a][b]` marking whether outcome pair `(a, b)` is possible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PossibilityTable {
    scenario: Scenario,
    blocks: Vec<Vec<Vec<bool>>>,
}

impl PossibilityTable {
    /// Build from per-block mark matrices; every block must contain a mark
    /// (something is always possible).
    pub fn new(scenario: Scenario, blocks: Vec<Vec<Vec<bool>>>) -> Result<PossibilityTable, TableError> {
        let t = PossibilityTable::new_unchecked(scenario, blocks)?;
        for i in 0..t.scenario.rows.len() {
            for j in 0..t.scenario.cols.len() {
                if !t.block(i, j).iter().flatten().any(|&m| m) {
                    return Err(TableError::EmptyBlock { row: i, col: j });
                }
            }
        }
        Ok(t)
    }

    /// Build without the nonempty-block invariant; used for intermediate
    /// tables in the minimality search.
    pub fn new_unchecked(
        scenario: Scenario,
        blocks: Vec<Vec<Vec<bool>>>,
    ) -> Result<PossibilityTable, TableError> {
        if blocks.len() != scenario.rows.len() * scenario.cols.len() {
            return Err(TableError::ScenarioMismatch(format!(
                "{} blocks for a {}x{} scenario",
                blocks.len(),
                scenario.rows.len(),
                scenario.cols.len()
            )));
        }
        for i in 0..scenario.rows.len() {
            for j in 0..scenario.cols.len() {
                let b = &blocks[i * scenario.cols.len() + j];
                if b.len() != scenario.rows[i].outcomes
                    || b.iter().any(|r| r.len() != scenario.cols[j].outcomes)
                {
                    return Err(TableError::ScenarioMismatch(format!(
                        "block ({i}, {j}) shape does not match the outcome counts"
                    )));
                }
            }
        }
        Ok(PossibilityTable { scenario, blocks })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn block(&self, i: usize, j: usize) -> &Vec<Vec<bool>> {
        &self.blocks[i * self.scenario.cols.len() + j]
    }

    pub fn mark(&self, i: usize, j: usize, a: usize, b: usize) -> bool {
        self.block(i, j)[a][b]
    }

    pub fn set_mark(&mut self, i: usize, j: usize, a: usize, b: usize, value: bool) {
        let cols = self.scenario.cols.len();
        self.blocks[i * cols + j][a][b] = value;
    }

    /// All marked cells as `(i, j, a, b)` quadruples, in block order.
    pub fn marks(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.scenario.rows.len() {
            for j in 0..self.scenario.cols.len() {
                for (a, row) in self.block(i, j).iter().enumerate() {
                    for (b, &m) in row.iter().enumerate() {
                        if m {
                            out.push((i, j, a, b));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn has_empty_block(&self) -> bool {
        self.blocks.iter().any(|b| !b.iter().flatten().any(|&m| m))
    }
}

/// Build the possibility table of a bipartite state: outcome pair `(a, b)`
/// for measurements `(A, C)` is marked iff the joint effect spanned by the
/// products `e (x) f` of their basis vectors is possible on the state.
pub fn build_table(
    state: &Subspace,
    meas1: &[(String, Measurement)],
    meas2: &[(String, Measurement)],
) -> Result<PossibilityTable, TableError> {
    for (label, m) in meas1.iter().chain(meas2) {
        if !m.is_valid() {
            return Err(TableError::InvalidMeasurement(label.clone()));
        }
    }
    let rows: Vec<MeasurementLabel> = meas1
        .iter()
        .map(|(l, m)| MeasurementLabel::new(l, m.outcomes()))
        .collect();
    let cols: Vec<MeasurementLabel> = meas2
        .iter()
        .map(|(l, m)| MeasurementLabel::new(l, m.outcomes()))
        .collect();
    let scenario = Scenario::new(rows, cols);
    let space = state.space().clone();
    let mut blocks = Vec::new();
    for (_, m1) in meas1 {
        for (_, m2) in meas2 {
            let mut block = vec![vec![false; m2.outcomes()]; m1.outcomes()];
            for (a, e) in m1.effects().iter().enumerate() {
                for (b, f) in m2.effects().iter().enumerate() {
                    let mut joint = Vec::new();
                    for ev in e.basis_vectors() {
                        for fv in f.basis_vectors() {
                            joint.push(ev.tensor(&fv)?);
                        }
                    }
                    let joint_effect =
                        Subspace::span_with_variance(&joint, &space, Variance::Dual)?;
                    block[a][b] = is_possible(&joint_effect, state)?;
                }
            }
            blocks.push(block);
        }
    }
    PossibilityTable::new(scenario, blocks)
}

/// Modal no-signalling: for each party, whether a given outcome is possible
/// must not depend on the other party's measurement choice. Concretely, a
/// sub-row of a block is nonempty iff the matching sub-row of every peer
/// block in the same block row is nonempty; dually for sub-columns.
pub fn check_modal_ns(t: &PossibilityTable) -> bool {
    let nr = t.scenario.rows.len();
    let nc = t.scenario.cols.len();
    for i in 0..nr {
        for a in 0..t.scenario.rows[i].outcomes {
            let occupancy: Vec<bool> = (0..nc)
                .map(|j| t.block(i, j)[a].iter().any(|&m| m))
                .collect();
            if occupancy.iter().any(|&o| o != occupancy[0]) {
                return false;
            }
        }
    }
    for j in 0..nc {
        for b in 0..t.scenario.cols[j].outcomes {
            let occupancy: Vec<bool> = (0..nr)
                .map(|i| t.block(i, j).iter().any(|row| row[b]))
                .collect();
            if occupancy.iter().any(|&o| o != occupancy[0]) {
                return false;
            }
        }
    }
    true
}

fn same_scenario(a: &PossibilityTable, b: &PossibilityTable) -> Result<(), TableError> {
    if a.scenario != b.scenario {
        return Err(TableError::ScenarioMismatch("tables from different scenarios".into()));
    }
    Ok(())
}

/// Entrywise OR: possible in either table.
pub fn table_join(a: &PossibilityTable, b: &PossibilityTable) -> Result<PossibilityTable, TableError> {
    same_scenario(a, b)?;
    let blocks = a
        .blocks
        .iter()
        .zip(&b.blocks)
        .map(|(ba, bb)| {
            ba.iter()
                .zip(bb)
                .map(|(ra, rb)| ra.iter().zip(rb).map(|(&x, &y)| x || y).collect())
                .collect()
        })
        .collect();
    PossibilityTable::new_unchecked(a.scenario.clone(), blocks)
}

/// Entrywise implication: every mark of `a` is a mark of `b`.
pub fn table_leq(a: &PossibilityTable, b: &PossibilityTable) -> Result<bool, TableError> {
    same_scenario(a, b)?;
    Ok(a.blocks
        .iter()
        .zip(&b.blocks)
        .all(|(ba, bb)| {
            ba.iter()
                .zip(bb)
                .all(|(ra, rb)| ra.iter().zip(rb).all(|(&x, &y)| !x || y))
        }))
}

/// Restore modal no-signalling after marks were cleared, by propagating
/// emptiness: an empty sub-row in one block forces the matching sub-row of
/// every peer block empty, and dually for sub-columns. Iterates to a
/// fixpoint; only removes marks.
pub fn ns_closure(t: &PossibilityTable) -> PossibilityTable {
    let mut t = t.clone();
    let nr = t.scenario.rows.len();
    let nc = t.scenario.cols.len();
    loop {
        let mut changed = false;
        for i in 0..nr {
            for a in 0..t.scenario.rows[i].outcomes {
                let empty_somewhere = (0..nc).any(|j| !t.block(i, j)[a].iter().any(|&m| m));
                if empty_somewhere {
                    for j in 0..nc {
                        for b in 0..t.scenario.cols[j].outcomes {
                            if t.mark(i, j, a, b) {
                                t.set_mark(i, j, a, b, false);
                                changed = true;
                            }
                        }
                    }
                }
            }
        }
        for j in 0..nc {
            for b in 0..t.scenario.cols[j].outcomes {
                let empty_somewhere = (0..nr).any(|i| !t.block(i, j).iter().any(|row| row[b]));
                if empty_somewhere {
                    for i in 0..nr {
                        for a in 0..t.scenario.rows[i].outcomes {
                            if t.mark(i, j, a, b) {
                                t.set_mark(i, j, a, b, false);
                                changed = true;
                            }
                        }
                    }
                }
            }
        }
        if !changed {
            return t;
        }
    }
}

/// Is a no-signalling table minimal, i.e. is there no strictly smaller
/// no-signalling table with all blocks nonempty? Searched by removing each
/// mark in turn and repairing with [`ns_closure`]; minimal iff every removal
/// collapses some block to empty.
pub fn is_minimal_ns(t: &PossibilityTable) -> Result<bool, TableError> {
    if !check_modal_ns(t) {
        return Err(TableError::NotNoSignalling);
    }
    for (i, j, a, b) in t.marks() {
        let mut smaller = t.clone();
        smaller.set_mark(i, j, a, b, false);
        let repaired = ns_closure(&smaller);
        if !repaired.has_empty_block() {
            debug_assert!(check_modal_ns(&repaired));
            return Ok(false);
        }
    }
    Ok(true)
}

/// A pair of deterministic answer functions, one outcome per measurement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicLocalStrategy {
    pub f1: Vec<usize>,
    pub f2: Vec<usize>,
}

impl DeterministicLocalStrategy {
    pub fn induced_table(&self, scenario: &Scenario) -> PossibilityTable {
        let mut blocks = Vec::new();
        for (i, r) in scenario.rows.iter().enumerate() {
            for (j, c) in scenario.cols.iter().enumerate() {
                let mut block = vec![vec![false; c.outcomes]; r.outcomes];
                block[self.f1[i]][self.f2[j]] = true;
                blocks.push(block);
            }
        }
        PossibilityTable::new_unchecked(scenario.clone(), blocks).expect("conforming blocks")
    }
}

/// Enumerate every deterministic local strategy pair for a scenario.
pub fn all_strategies(scenario: &Scenario) -> Vec<DeterministicLocalStrategy> {
    fn assignments(counts: &[usize]) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for &c in counts {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..c).map(move |o| {
                        let mut next = prefix.clone();
                        next.push(o);
                        next
                    })
                })
                .collect();
        }
        out
    }
    let f1s = assignments(&scenario.rows.iter().map(|r| r.outcomes).collect::<Vec<_>>());
    let f2s = assignments(&scenario.cols.iter().map(|c| c.outcomes).collect::<Vec<_>>());
    let mut out = Vec::with_capacity(f1s.len() * f2s.len());
    for f1 in &f1s {
        for f2 in &f2s {
            out.push(DeterministicLocalStrategy { f1: f1.clone(), f2: f2.clone() });
        }
    }
    out
}

/// Decide whether a table is a mixture of deterministic local strategies:
/// keep every strategy whose induced table lies below `t`; the table is LHV
/// iff the join of the survivors reproduces `t` exactly.
pub fn lhv_membership(t: &PossibilityTable) -> Result<Option<Vec<DeterministicLocalStrategy>>, TableError> {
    let mut survivors = Vec::new();
    let mut join: Option<PossibilityTable> = None;
    for s in all_strategies(&t.scenario) {
        let induced = s.induced_table(&t.scenario);
        if table_leq(&induced, t)? {
            join = Some(match join {
                None => induced,
                Some(acc) => table_join(&acc, &induced)?,
            });
            survivors.push(s);
        }
    }
    match join {
        Some(j) if j == *t => Ok(Some(survivors)),
        _ => Ok(None),
    }
}

fn bool_block(rows: &[[u8; 2]]) -> Vec<Vec<bool>> {
    rows.iter().map(|r| r.iter().map(|&v| v != 0).collect()).collect()
}

fn bool_block3(rows: &[[u8; 3]]) -> Vec<Vec<bool>> {
    rows.iter().map(|r| r.iter().map(|&v| v != 0).collect()).collect()
}

/// The possibility table of the modal singlet measured with X, Y, Z on both
/// sides: same-measurement blocks are antidiagonal (the results always
/// disagree), each mixed block has exactly one blank.
pub fn singlet_table() -> PossibilityTable {
    let scenario = Scenario::symmetric(&["X", "Y", "Z"], 2);
    let anti = bool_block(&[[0, 1], [1, 0]]);
    let lower = bool_block(&[[1, 0], [1, 1]]); // blank at (+,-)
    let upper = bool_block(&[[1, 1], [0, 1]]); // blank at (-,+)
    let blocks = vec![
        anti.clone(),
        lower.clone(),
        upper.clone(), // X row: XX, XY, XZ
        upper.clone(),
        anti.clone(),
        lower.clone(), // Y row: YX, YY, YZ
        lower,
        upper,
        anti, // Z row: ZX, ZY, ZZ
    ];
    PossibilityTable::new(scenario, blocks).expect("fixture is well-formed")
}

/// The modal PR box: outcomes agree for three measurement pairs and disagree
/// for (B, D). The minimal no-signalling table.
pub fn prbox_table() -> PossibilityTable {
    let rows = vec![MeasurementLabel::new("A", 2), MeasurementLabel::new("B", 2)];
    let cols = vec![MeasurementLabel::new("C", 2), MeasurementLabel::new("D", 2)];
    let diag = bool_block(&[[1, 0], [0, 1]]);
    let anti = bool_block(&[[0, 1], [1, 0]]);
    let blocks = vec![diag.clone(), diag.clone(), diag, anti];
    PossibilityTable::new(Scenario::new(rows, cols), blocks).expect("fixture is well-formed")
}

/// The no-signalling table with no probabilistic resolution: three
/// three-outcome measurements per side. The published table omits the (U, W)
/// and (W, U) blocks; they are completed with the weakest choice — all marks,
/// followed by the no-signalling closure — so the completion adds no
/// constraints yet keeps the table no-signalling.
pub fn table_n() -> PossibilityTable {
    let scenario = Scenario::symmetric(&["U", "V", "W"], 3);
    let diag = bool_block3(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
    let uu = bool_block3(&[[0, 1, 0], [0, 0, 1], [1, 0, 0]]);
    let vw = bool_block3(&[[1, 0, 0], [0, 1, 0], [0, 1, 0]]);
    let wv = bool_block3(&[[1, 1, 0], [0, 0, 1], [0, 0, 0]]);
    let ww = bool_block3(&[[1, 0, 0], [0, 1, 0], [0, 0, 0]]);
    // All-marks completions, shrunk by the closure: row W and column W have a
    // third outcome that is impossible everywhere else.
    let uw = bool_block3(&[[1, 1, 0], [1, 1, 0], [1, 1, 0]]);
    let wu = bool_block3(&[[1, 1, 1], [1, 1, 1], [0, 0, 0]]);
    let blocks = vec![
        uu,
        diag.clone(),
        uw, // U row
        diag.clone(),
        diag,
        vw, // V row
        wu,
        wv,
        ww, // W row
    ];
    PossibilityTable::new(scenario, blocks).expect("fixture is well-formed")
}

/// Standard measurement inputs used to build [`singlet_table`] from the
/// modal singlet state: labeled X, Y, Z menus for one party.
pub fn xyz_menu(field: FieldSpec) -> Vec<(String, Measurement)> {
    let [x, y, z] = crate::states::mobit::xyz_measurements(field);
    vec![("X".into(), x), ("Y".into(), y), ("Z".into(), z)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{mobit, projective_points, StateSpace, Vector, DEFAULT_ENUM_BUDGET};

    fn f2() -> FieldSpec {
        FieldSpec::new(2).unwrap()
    }

    #[test]
    fn singlet_table_matches_fixture() {
        let field = f2();
        let state = Subspace::line(&mobit::singlet(field)).unwrap();
        let built = build_table(&state, &xyz_menu(field), &xyz_menu(field)).unwrap();
        assert_eq!(built, singlet_table());
    }

    #[test]
    fn product_state_tables() {
        let field = f2();
        let sp4 = StateSpace::composite(&[2, 2], field);
        let menu = |labels: &[&str]| -> Vec<(String, Measurement)> {
            let full = xyz_menu(field);
            full.into_iter().filter(|(l, _)| labels.contains(&l.as_str())).collect()
        };

        // |0,0> with Z on both sides: a single mark per block.
        let zz = menu(&["Z"]);
        let state = Subspace::line(&Vector::ket(&[1, 0, 0, 0], &sp4).unwrap()).unwrap();
        let t = build_table(&state, &zz, &zz).unwrap();
        assert_eq!(t.block(0, 0), &vec![vec![true, false], vec![false, false]]);

        // |sigma, sigma> with Z,Z: everything possible.
        let sigma2 = Subspace::line(&Vector::ket(&[1, 1, 1, 1], &sp4).unwrap()).unwrap();
        let t = build_table(&sigma2, &zz, &zz).unwrap();
        assert_eq!(t.block(0, 0), &vec![vec![true, true], vec![true, true]]);
    }

    #[test]
    fn invalid_measurement_is_rejected() {
        let field = f2();
        let sp = StateSpace::new(2, field);
        let (a, _, _) = mobit::dual_vectors(field);
        let bad = Measurement::basic(&[a.clone(), a], &sp).unwrap();
        let state = Subspace::line(&mobit::singlet(field)).unwrap();
        let menu = vec![("bad".to_string(), bad)];
        assert!(matches!(
            build_table(&state, &menu, &xyz_menu(field)),
            Err(TableError::InvalidMeasurement(_))
        ));
    }

    #[test]
    fn fixtures_satisfy_modal_ns() {
        assert!(check_modal_ns(&singlet_table()));
        assert!(check_modal_ns(&prbox_table()));
        assert!(check_modal_ns(&table_n()));
    }

    #[test]
    fn ns_violation_detected() {
        // One block marked only at (0,0), a peer marked only at (1,0):
        // sub-row occupancy differs.
        let scenario = Scenario::symmetric(&["A", "B"], 2);
        let first = vec![vec![true, false], vec![false, false]];
        let second = vec![vec![false, false], vec![true, false]];
        let t = PossibilityTable::new(
            scenario,
            vec![first.clone(), second.clone(), first, second],
        )
        .unwrap();
        assert!(!check_modal_ns(&t));
    }

    #[test]
    fn mqt_tables_are_always_ns() {
        // Every table built from a bipartite state satisfies modal NS;
        // exhaustive over the 15 mobit-pair states with X/Y/Z menus.
        let field = f2();
        let sp4 = StateSpace::composite(&[2, 2], field);
        for pt in projective_points(&sp4, crate::states::Variance::Primal, DEFAULT_ENUM_BUDGET)
            .unwrap()
        {
            let state = Subspace::line(&pt).unwrap();
            let t = build_table(&state, &xyz_menu(field), &xyz_menu(field)).unwrap();
            assert!(check_modal_ns(&t), "NS failed for state {:?}", pt.coords());
        }
    }

    #[test]
    fn order_and_join() {
        let s = singlet_table();
        let p = prbox_table();
        assert_eq!(table_join(&s, &s).unwrap(), s);
        assert!(table_leq(&p, &p).unwrap());
        assert!(table_leq(&s, &s).unwrap());
        assert!(table_join(&s, &p).is_err());
        // Join of NS tables is NS: spot-check with a strategy table below the
        // singlet scenario joined against the singlet table.
        let strategies = all_strategies(s.scenario());
        for st in strategies.iter().take(8) {
            let d = st.induced_table(s.scenario());
            assert!(check_modal_ns(&d));
            let joined = table_join(&s, &d).unwrap();
            assert!(check_modal_ns(&joined));
        }
    }

    #[test]
    fn minimality() {
        assert!(is_minimal_ns(&prbox_table()).unwrap());
        assert!(!is_minimal_ns(&singlet_table()).unwrap());

        // All-marks 2x2 table: the PR box sits strictly below it.
        let scenario = Scenario::symmetric(&["A", "B"], 2);
        let full = vec![vec![true, true], vec![true, true]];
        let t = PossibilityTable::new(scenario, vec![full.clone(); 4]).unwrap();
        assert!(!is_minimal_ns(&t).unwrap());

        // Non-NS input is an error.
        let scenario = Scenario::symmetric(&["A", "B"], 2);
        let first = vec![vec![true, false], vec![false, false]];
        let second = vec![vec![false, false], vec![true, false]];
        let bad = PossibilityTable::new(
            scenario,
            vec![first.clone(), second.clone(), first, second],
        )
        .unwrap();
        assert!(matches!(is_minimal_ns(&bad), Err(TableError::NotNoSignalling)));
    }

    #[test]
    fn lhv_examples() {
        assert!(lhv_membership(&prbox_table()).unwrap().is_none());
        assert!(lhv_membership(&singlet_table()).unwrap().is_none());

        // The |0,0> Z,Z table has exactly one survivor.
        let field = f2();
        let sp4 = StateSpace::composite(&[2, 2], field);
        let zz: Vec<(String, Measurement)> = xyz_menu(field)
            .into_iter()
            .filter(|(l, _)| l == "Z")
            .collect();
        let state = Subspace::line(&Vector::ket(&[1, 0, 0, 0], &sp4).unwrap()).unwrap();
        let t = build_table(&state, &zz, &zz).unwrap();
        let survivors = lhv_membership(&t).unwrap().unwrap();
        assert_eq!(survivors, vec![DeterministicLocalStrategy { f1: vec![0], f2: vec![0] }]);
    }

    #[test]
    fn strategies_are_ns() {
        let scenario = Scenario::symmetric(&["X", "Y", "Z"], 2);
        let strategies = all_strategies(&scenario);
        assert_eq!(strategies.len(), 64);
        for s in &strategies {
            assert!(check_modal_ns(&s.induced_table(&scenario)));
        }
    }

    #[test]
    fn table_n_details() {
        let t = table_n();
        // Printed blocks reproduced bit-exactly.
        let b = |rows: &[[u8; 3]]| bool_block3(rows);
        assert_eq!(t.block(0, 0), &b(&[[0, 1, 0], [0, 0, 1], [1, 0, 0]]));
        assert_eq!(t.block(1, 2), &b(&[[1, 0, 0], [0, 1, 0], [0, 1, 0]]));
        assert_eq!(t.block(2, 1), &b(&[[1, 1, 0], [0, 0, 1], [0, 0, 0]]));
        assert_eq!(t.block(2, 2), &b(&[[1, 0, 0], [0, 1, 0], [0, 0, 0]]));
        // The completion is the NS closure of the all-marks fill.
        let mut raw = t.clone();
        for a in 0..3 {
            for bb in 0..3 {
                raw.set_mark(0, 2, a, bb, true);
                raw.set_mark(2, 0, a, bb, true);
            }
        }
        assert_eq!(ns_closure(&raw), t);
    }
}
