//! Probabilistic resolutions of possibility tables.
//!
//! A *resolution* of a possibility table is an assignment of exact rational
//! probabilities to its cells that is zero on blanks, normalized per block,
//! and satisfies probabilistic no-signalling (equal marginals across the
//! other party's measurement choices). A *weak* resolution may assign zero
//! to a mark; a *strong* one must be positive on every mark.
//!
//! Feasibility and optimality questions are answered by the exact rational
//! LP in [`crate::lp`]; infeasibility comes with a labeled Farkas
//! certificate naming the clashing constraints. [`hall_resolution`]
//! constructs a resolution for tables of maximally entangled states directly
//! via bipartite matchings, and [`classify`] places a table in the
//! LHV / SPR / WPR / NSP hierarchy, with a bounded search for realizability
//! as a state-and-measurements table.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::field::FieldSpec;
use crate::linalg::Matrix;
use crate::lp::{ratio, LinearProgram, LpResult};
use crate::states::{schmidt, Measurement, StateError, Vector};
use crate::tables::{
    check_modal_ns, lhv_membership, MeasurementLabel, PossibilityTable, Scenario, TableError,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ResolveError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("table has no weak resolution")]
    Infeasible,
    #[error("no perfect matching in block ({row}, {col}); the input violates the construction's premises")]
    NoMatching { row: usize, col: usize },
    #[error("state must have maximal Schmidt number {expected}, got {got}")]
    NotMaximal { expected: usize, got: usize },
    #[error("{0}")]
    BadInput(String),
}

/// An exact probabilistic table over the same scenario shape as a
/// [`PossibilityTable`], one rational per cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityTable {
    scenario: Scenario,
    blocks: Vec<Vec<Vec<BigRational>>>,
}

impl ProbabilityTable {
    pub fn new(scenario: Scenario, blocks: Vec<Vec<Vec<BigRational>>>) -> Result<ProbabilityTable, ResolveError> {
        if blocks.len() != scenario.rows.len() * scenario.cols.len() {
            return Err(ResolveError::BadInput(format!(
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
                    return Err(ResolveError::BadInput(format!(
                        "block ({i}, {j}) shape does not match the outcome counts"
                    )));
                }
            }
        }
        Ok(ProbabilityTable { scenario, blocks })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn block(&self, i: usize, j: usize) -> &Vec<Vec<BigRational>> {
        &self.blocks[i * self.scenario.cols.len() + j]
    }

    pub fn prob(&self, i: usize, j: usize, a: usize, b: usize) -> &BigRational {
        &self.block(i, j)[a][b]
    }

    /// Zero wherever the possibility table is blank?
    pub fn zero_on_blanks(&self, t: &PossibilityTable) -> bool {
        if *t.scenario() != self.scenario {
            return false;
        }
        for i in 0..self.scenario.rows.len() {
            for j in 0..self.scenario.cols.len() {
                for a in 0..self.scenario.rows[i].outcomes {
                    for b in 0..self.scenario.cols[j].outcomes {
                        if !t.mark(i, j, a, b) && !self.prob(i, j, a, b).is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Positive on every mark?
    pub fn positive_on_marks(&self, t: &PossibilityTable) -> bool {
        t.marks().iter().all(|&(i, j, a, b)| self.prob(i, j, a, b).is_positive())
    }
}

/// Exact probabilistic no-signalling: entries nonnegative, every block sums
/// to one, and each party's marginals are independent of the other party's
/// measurement choice.
pub fn check_prob_ns(pt: &ProbabilityTable) -> bool {
    let nr = pt.scenario.rows.len();
    let nc = pt.scenario.cols.len();
    for i in 0..nr {
        for j in 0..nc {
            let block = pt.block(i, j);
            if block.iter().flatten().any(|p| p.is_negative()) {
                return false;
            }
            let total: BigRational = block.iter().flatten().cloned().sum();
            if !total.is_one() {
                return false;
            }
        }
    }
    for i in 0..nr {
        for a in 0..pt.scenario.rows[i].outcomes {
            let marginals: Vec<BigRational> = (0..nc)
                .map(|j| pt.block(i, j)[a].iter().cloned().sum())
                .collect();
            if marginals.iter().any(|m| *m != marginals[0]) {
                return false;
            }
        }
    }
    for j in 0..nc {
        for b in 0..pt.scenario.cols[j].outcomes {
            let marginals: Vec<BigRational> = (0..nr)
                .map(|i| pt.block(i, j).iter().map(|row| row[b].clone()).sum())
                .collect();
            if marginals.iter().any(|m| *m != marginals[0]) {
                return false;
            }
        }
    }
    true
}

/// Layout of LP variables for a table: one variable per cell, blocks in row-
/// major order, plus optionally trailing extras.
struct CellVars<'a> {
    t: &'a PossibilityTable,
    offsets: Vec<usize>,
    total: usize,
}

impl<'a> CellVars<'a> {
    fn new(t: &'a PossibilityTable) -> CellVars<'a> {
        let sc = t.scenario();
        let mut offsets = Vec::new();
        let mut total = 0;
        for i in 0..sc.rows.len() {
            for j in 0..sc.cols.len() {
                offsets.push(total);
                total += sc.rows[i].outcomes * sc.cols[j].outcomes;
            }
        }
        CellVars { t, offsets, total }
    }

    fn var(&self, i: usize, j: usize, a: usize, b: usize) -> usize {
        let sc = self.t.scenario();
        self.offsets[i * sc.cols.len() + j] + a * sc.cols[j].outcomes + b
    }

    /// The shared constraint set of every resolution: zero on blanks, block
    /// normalization, no-signalling marginal equalities.
    fn base_program(&self, extra_vars: usize) -> LinearProgram {
        let sc = self.t.scenario();
        let nr = sc.rows.len();
        let nc = sc.cols.len();
        let mut lp = LinearProgram::new(self.total + extra_vars);
        let one = BigRational::one;
        for i in 0..nr {
            for j in 0..nc {
                let li = &sc.rows[i].label;
                let lj = &sc.cols[j].label;
                let mut sum = Vec::new();
                for a in 0..sc.rows[i].outcomes {
                    for b in 0..sc.cols[j].outcomes {
                        sum.push((self.var(i, j, a, b), one()));
                        if !self.t.mark(i, j, a, b) {
                            lp.eq(
                                &format!("blank({li},{lj};{a},{b})"),
                                &[(self.var(i, j, a, b), one())],
                                BigRational::zero(),
                            );
                        }
                    }
                }
                lp.eq(&format!("sum({li},{lj})"), &sum, one());
            }
        }
        for i in 0..nr {
            for a in 0..sc.rows[i].outcomes {
                for j in 1..nc {
                    let mut coeffs = Vec::new();
                    for b in 0..sc.cols[j - 1].outcomes {
                        coeffs.push((self.var(i, j - 1, a, b), one()));
                    }
                    for b in 0..sc.cols[j].outcomes {
                        coeffs.push((self.var(i, j, a, b), -one()));
                    }
                    lp.eq(
                        &format!(
                            "row({},{a};{}|{})",
                            sc.rows[i].label,
                            sc.cols[j - 1].label,
                            sc.cols[j].label
                        ),
                        &coeffs,
                        BigRational::zero(),
                    );
                }
            }
        }
        for j in 0..nc {
            for b in 0..sc.cols[j].outcomes {
                for i in 1..nr {
                    let mut coeffs = Vec::new();
                    for a in 0..sc.rows[i - 1].outcomes {
                        coeffs.push((self.var(i - 1, j, a, b), one()));
                    }
                    for a in 0..sc.rows[i].outcomes {
                        coeffs.push((self.var(i, j, a, b), -one()));
                    }
                    lp.eq(
                        &format!(
                            "col({},{b};{}|{})",
                            sc.cols[j].label,
                            sc.rows[i - 1].label,
                            sc.rows[i].label
                        ),
                        &coeffs,
                        BigRational::zero(),
                    );
                }
            }
        }
        lp
    }

    fn to_table(&self, x: &[BigRational]) -> ProbabilityTable {
        let sc = self.t.scenario();
        let mut blocks = Vec::new();
        for i in 0..sc.rows.len() {
            for j in 0..sc.cols.len() {
                let mut block =
                    vec![vec![BigRational::zero(); sc.cols[j].outcomes]; sc.rows[i].outcomes];
                for (a, row) in block.iter_mut().enumerate() {
                    for (b, cell) in row.iter_mut().enumerate() {
                        *cell = x[self.var(i, j, a, b)].clone();
                    }
                }
                blocks.push(block);
            }
        }
        ProbabilityTable { scenario: sc.clone(), blocks }
    }
}

/// Result of a weak-resolution query: a resolution, or a Farkas certificate
/// naming the contradictory constraints.
#[derive(Debug, Clone, PartialEq)]
pub enum WeakResolution {
    Table(ProbabilityTable),
    Infeasible { certificate: Vec<(String, BigRational)> },
}

impl WeakResolution {
    pub fn table(&self) -> Option<&ProbabilityTable> {
        match self {
            WeakResolution::Table(t) => Some(t),
            WeakResolution::Infeasible { .. } => None,
        }
    }
}

/// Find any probabilistic resolution that is zero on blanks (marks may also
/// get zero).
pub fn weak_resolution(t: &PossibilityTable) -> WeakResolution {
    let vars = CellVars::new(t);
    let lp = vars.base_program(0);
    match lp.feasible() {
        LpResult::Feasible { x } => {
            let pt = vars.to_table(&x);
            debug_assert!(check_prob_ns(&pt) && pt.zero_on_blanks(t));
            WeakResolution::Table(pt)
        }
        LpResult::Infeasible { certificate } => WeakResolution::Infeasible { certificate },
        other => unreachable!("weak resolution LP is bounded: {other:?}"),
    }
}

/// Find a resolution positive on every mark, by maximizing the minimum mark
/// probability; present iff that optimum is strictly positive.
pub fn strong_resolution(t: &PossibilityTable) -> Option<ProbabilityTable> {
    let vars = CellVars::new(t);
    let floor = vars.total; // auxiliary variable: lower bound on all marks
    let mut lp = vars.base_program(1);
    for (i, j, a, b) in t.marks() {
        lp.ge(
            &format!("mark({i},{j};{a},{b})"),
            &[(vars.var(i, j, a, b), BigRational::one()), (floor, -BigRational::one())],
            BigRational::zero(),
        );
    }
    let mut objective = vec![BigRational::zero(); vars.total + 1];
    objective[floor] = BigRational::one();
    match lp.solve(Some(&objective)) {
        LpResult::Optimal { x, value } if value.is_positive() => {
            let pt = vars.to_table(&x);
            debug_assert!(check_prob_ns(&pt) && pt.positive_on_marks(t));
            Some(pt)
        }
        LpResult::Optimal { .. } | LpResult::Infeasible { .. } => None,
        other => unreachable!("strong resolution LP is bounded: {other:?}"),
    }
}

/// Is the weak resolution unique? Decided by minimizing and maximizing every
/// marked cell over the feasible polytope (blanks are pinned to zero
/// already).
pub fn resolution_unique(t: &PossibilityTable) -> Result<bool, ResolveError> {
    let vars = CellVars::new(t);
    let lp = vars.base_program(0);
    if matches!(lp.feasible(), LpResult::Infeasible { .. }) {
        return Err(ResolveError::Infeasible);
    }
    for (i, j, a, b) in t.marks() {
        let mut objective = vec![BigRational::zero(); vars.total];
        objective[vars.var(i, j, a, b)] = BigRational::one();
        let hi = match lp.solve(Some(&objective)) {
            LpResult::Optimal { value, .. } => value,
            other => unreachable!("bounded cell objective: {other:?}"),
        };
        let lo = match lp.minimize(&objective) {
            LpResult::Optimal { value, .. } => value,
            other => unreachable!("bounded cell objective: {other:?}"),
        };
        if lo != hi {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Deterministic maximum bipartite matching by augmenting paths: rows are
/// processed in index order and the lowest-index augmenting path is taken.
pub fn max_matching(adjacency: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let cols = adjacency.first().map_or(0, |r| r.len());
    let mut col_owner: Vec<Option<usize>> = vec![None; cols];

    fn augment(
        row: usize,
        adjacency: &[Vec<bool>],
        col_owner: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for (c, &edge) in adjacency[row].iter().enumerate() {
            if !edge || visited[c] {
                continue;
            }
            visited[c] = true;
            let free = match col_owner[c] {
                None => true,
                Some(owner) => augment(owner, adjacency, col_owner, visited),
            };
            if free {
                col_owner[c] = Some(row);
                return true;
            }
        }
        false
    }

    for row in 0..adjacency.len() {
        let mut visited = vec![false; cols];
        augment(row, adjacency, &mut col_owner, &mut visited);
    }
    let mut pairs: Vec<(usize, usize)> = col_owner
        .iter()
        .enumerate()
        .filter_map(|(c, &r)| r.map(|r| (r, c)))
        .collect();
    pairs.sort();
    pairs
}

/// A measurement reduced to fine-grained one-dimensional effects: a selected
/// dual basis (one fine effect per matching slot) plus the parent outcome of
/// every fine effect. Surplus fine effects (from over-complete spanning
/// sets) are excluded from the basis and get probability zero.
struct FineMeasurement {
    /// Selected fine effects forming a dual basis, as coordinate rows.
    basis: Vec<Vec<u64>>,
    /// Parent (coarse) outcome index of each selected fine effect.
    parents: Vec<usize>,
}

fn fine_grain(m: &Measurement, label: &str, dim: usize) -> Result<FineMeasurement, ResolveError> {
    if !m.is_valid() {
        return Err(TableError::InvalidMeasurement(label.to_string()).into());
    }
    let field = m.space().field();
    let mut candidates: Vec<(Vec<u64>, usize)> = Vec::new();
    for (outcome, effect) in m.effects().iter().enumerate() {
        for v in effect.basis_vectors() {
            candidates.push((v.coords().to_vec(), outcome));
        }
    }
    // Greedy independent subset, in declaration order.
    let mut basis: Vec<Vec<u64>> = Vec::new();
    let mut parents = Vec::new();
    for (coords, outcome) in candidates {
        if basis.len() == dim {
            break;
        }
        let mut trial = basis.clone();
        trial.push(coords.clone());
        if Matrix::from_rows(&trial, dim, field)
            .map_err(StateError::from)?
            .rank()
            == trial.len()
        {
            basis.push(coords);
            parents.push(outcome);
        }
    }
    debug_assert_eq!(basis.len(), dim, "a valid measurement spans the dual space");
    Ok(FineMeasurement { basis, parents })
}

/// Construct a weak resolution of the table of a maximally entangled state
/// directly: in every block, the marks form a bipartite graph with a perfect
/// matching (a system of distinct representatives), and each matched cell is
/// assigned `1/s`. Coarse or over-complete measurements are reduced to fine
/// basic ones first; fine probabilities are summed back into coarse cells.
pub fn hall_resolution(
    psi: &Vector,
    meas1: &[(String, Measurement)],
    meas2: &[(String, Measurement)],
) -> Result<ProbabilityTable, ResolveError> {
    let factors = psi
        .space()
        .factor_dims()
        .ok_or_else(|| ResolveError::BadInput("state must live on a two-factor composite".into()))?;
    let [d1, d2] = factors else {
        return Err(ResolveError::BadInput("state must live on a two-factor composite".into()));
    };
    let (d1, d2) = (*d1, *d2);
    if d1 != d2 {
        return Err(ResolveError::BadInput("the two factors must have equal dimension".into()));
    }
    let s = schmidt(psi)?.schmidt_number;
    if s != d1 {
        return Err(ResolveError::NotMaximal { expected: d1, got: s });
    }
    let field = psi.space().field();
    let p = field.modulus();
    let fine1: Vec<FineMeasurement> = meas1
        .iter()
        .map(|(l, m)| fine_grain(m, l, d1))
        .collect::<Result<_, _>>()?;
    let fine2: Vec<FineMeasurement> = meas2
        .iter()
        .map(|(l, m)| fine_grain(m, l, d2))
        .collect::<Result<_, _>>()?;

    let pairing = |e: &[u64], f: &[u64]| -> u64 {
        let mut acc = 0u64;
        for (r, &ev) in e.iter().enumerate() {
            if ev == 0 {
                continue;
            }
            for (q, &fv) in f.iter().enumerate() {
                acc = (acc + ev * fv % p * psi.coords()[r * d2 + q]) % p;
            }
        }
        acc
    };

    let scenario = Scenario::new(
        meas1
            .iter()
            .map(|(l, m)| MeasurementLabel::new(l, m.outcomes()))
            .collect(),
        meas2
            .iter()
            .map(|(l, m)| MeasurementLabel::new(l, m.outcomes()))
            .collect(),
    );
    let share = BigRational::new(1.into(), (s as i64).into());
    let mut blocks = Vec::new();
    for (i, f1) in fine1.iter().enumerate() {
        for (j, f2) in fine2.iter().enumerate() {
            let adjacency: Vec<Vec<bool>> = f1
                .basis
                .iter()
                .map(|e| f2.basis.iter().map(|f| pairing(e, f) != 0).collect())
                .collect();
            let matching = max_matching(&adjacency);
            if matching.len() != s {
                return Err(ResolveError::NoMatching { row: i, col: j });
            }
            let mut block = vec![
                vec![BigRational::zero(); scenario.cols[j].outcomes];
                scenario.rows[i].outcomes
            ];
            for (a, b) in matching {
                block[f1.parents[a]][f2.parents[b]] += share.clone();
            }
            blocks.push(block);
        }
    }
    let pt = ProbabilityTable { scenario, blocks };
    debug_assert!(check_prob_ns(&pt));
    Ok(pt)
}

/// The published unique resolution of the singlet table: halves on the
/// antidiagonal of same-measurement blocks, diagonal halves elsewhere (one
/// possible cell per mixed block is assigned zero).
pub fn singlet_resolution() -> ProbabilityTable {
    let scenario = Scenario::symmetric(&["X", "Y", "Z"], 2);
    let h = || ratio(1, 2);
    let z = BigRational::zero;
    let anti = vec![vec![z(), h()], vec![h(), z()]];
    let diag = vec![vec![h(), z()], vec![z(), h()]];
    let blocks = vec![
        anti.clone(),
        diag.clone(),
        diag.clone(),
        diag.clone(),
        anti.clone(),
        diag.clone(),
        diag.clone(),
        diag,
        anti,
    ];
    ProbabilityTable { scenario, blocks }
}

/// The unique (strong) resolution of the PR box: one half on each mark.
pub fn prbox_resolution() -> ProbabilityTable {
    let rows = vec![MeasurementLabel::new("A", 2), MeasurementLabel::new("B", 2)];
    let cols = vec![MeasurementLabel::new("C", 2), MeasurementLabel::new("D", 2)];
    let h = || ratio(1, 2);
    let z = BigRational::zero;
    let diag = vec![vec![h(), z()], vec![z(), h()]];
    let anti = vec![vec![z(), h()], vec![h(), z()]];
    let blocks = vec![diag.clone(), diag.clone(), diag, anti];
    ProbabilityTable { scenario: Scenario::new(rows, cols), blocks }
}

/// Search bounds for deciding whether a table arises from a state and
/// product measurements: which `(p, subsystem dim)` configurations to try
/// and how many `(state, measurement tuple)` candidates to examine per
/// configuration before giving up.
#[derive(Debug, Clone)]
pub struct MqtSearchBounds {
    pub configs: Vec<(u64, usize)>,
    pub max_candidates: u64,
}

impl Default for MqtSearchBounds {
    fn default() -> MqtSearchBounds {
        MqtSearchBounds {
            configs: vec![(2, 2), (2, 3), (3, 2), (3, 3)],
            max_candidates: 5_000_000,
        }
    }
}

/// Verdict of the bounded realizability search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MqtVerdict {
    /// Realized by a concrete state and measurement bases.
    Yes {
        p: u64,
        dim: usize,
        state: Vec<u64>,
        row_bases: Vec<Vec<Vec<u64>>>,
        col_bases: Vec<Vec<Vec<u64>>>,
    },
    /// Every configured search space was exhausted without a witness, or the
    /// table fails a necessary condition.
    No { reason: String },
    /// Some configuration was skipped (budget or shape); no witness found.
    Unknown { reason: String },
}

/// Where a table sits in the hierarchy of bipartite behavior classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    /// Modal no-signalling (NSP membership).
    pub ns: bool,
    /// Weak probabilistic resolution exists (WPR).
    pub wpr: bool,
    /// Strong probabilistic resolution exists (SPR).
    pub spr: bool,
    /// Mixture of deterministic local strategies (LHV).
    pub lhv: bool,
    /// Realizable as the table of a state with product measurements, within
    /// the configured search bounds.
    pub mqt: MqtVerdict,
}

/// Classify a table: NS / WPR / SPR / LHV are decided exactly; realizability
/// is decided by bounded exhaustive search over pure states and measurement
/// bases for each configured `(p, dim)`.
pub fn classify(t: &PossibilityTable, bounds: &MqtSearchBounds) -> Classification {
    let ns = check_modal_ns(t);
    let wpr = matches!(weak_resolution(t), WeakResolution::Table(_));
    let spr = strong_resolution(t).is_some();
    let lhv = lhv_membership(t).map(|s| s.is_some()).unwrap_or(false);
    let mqt = if !wpr {
        // Tables of states always admit a weak resolution (the matching
        // construction), so failing WPR rules realizability out directly.
        MqtVerdict::No { reason: "not in WPR".into() }
    } else {
        mqt_search(t, bounds)
    };
    Classification { ns, wpr, spr, lhv, mqt }
}

/// All projective representatives of nonzero vectors of `Z_p^dim`, as raw
/// coordinate vectors (first nonzero coordinate scaled to one).
fn raw_projective_points(p: u64, dim: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut coords = vec![0u64; dim];
    loop {
        let mut i = dim;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            coords[i] += 1;
            if coords[i] < p {
                break;
            }
            coords[i] = 0;
        }
        if coords.iter().find(|&&v| v != 0) == Some(&1) {
            out.push(coords.clone());
        }
    }
}

/// All ordered dual bases of `Z_p^dim` assembled from projective points.
fn raw_ordered_bases(p: u64, dim: usize) -> Vec<Vec<Vec<u64>>> {
    let points = raw_projective_points(p, dim);
    let mut out = Vec::new();
    let mut stack: Vec<Vec<u64>> = Vec::new();
    fn independent(rows: &[Vec<u64>], p: u64, dim: usize) -> bool {
        let field = FieldSpec::new(p).expect("prime configs only");
        Matrix::from_rows(&rows.to_vec(), dim, field)
            .map(|m| m.rank() == rows.len())
            .unwrap_or(false)
    }
    fn rec(
        points: &[Vec<u64>],
        p: u64,
        dim: usize,
        stack: &mut Vec<Vec<u64>>,
        out: &mut Vec<Vec<Vec<u64>>>,
    ) {
        if stack.len() == dim {
            out.push(stack.clone());
            return;
        }
        for pt in points {
            if stack.iter().any(|q| q == pt) {
                continue;
            }
            stack.push(pt.clone());
            if independent(stack, p, dim) {
                rec(points, p, dim, stack, out);
            }
            stack.pop();
        }
    }
    rec(&points, p, dim, &mut stack, &mut out);
    out
}

/// Bounded search for a finite-field state and measurement menus realizing
/// the table, over the (p, dim) configurations in `bounds`.
pub fn mqt_search(t: &PossibilityTable, bounds: &MqtSearchBounds) -> MqtVerdict {
    let sc = t.scenario();
    let nr = sc.rows.len();
    let nc = sc.cols.len();
    let mut skipped = Vec::new();
    for &(p, dim) in &bounds.configs {
        // Basic measurements of a dim-dimensional system have dim outcomes,
        // so a mismatched configuration has an empty (vacuously exhausted)
        // search space.
        if sc.rows.iter().chain(&sc.cols).any(|m| m.outcomes != dim) {
            continue;
        }
        let states = raw_projective_points(p, dim * dim);
        let bases = raw_ordered_bases(p, dim);
        let per_state = (bases.len() as u64).pow((nr + nc) as u32);
        let candidates = (states.len() as u64).saturating_mul(per_state);
        if candidates > bounds.max_candidates {
            skipped.push(format!("(p={p}, dim={dim}): {candidates} candidates over budget"));
            continue;
        }
        if let Some(v) = mqt_search_config(t, p, dim, &states, &bases) {
            return v;
        }
    }
    if skipped.is_empty() {
        MqtVerdict::No { reason: "search space exhausted for all configured (p, dim)".into() }
    } else {
        MqtVerdict::Unknown { reason: skipped.join("; ") }
    }
}

/// Exhaustive search at one configuration. For each state, the block pattern
/// of every (row basis, column basis) pair is precomputed; a realization is
/// an assignment of bases to measurements matching every block.
fn mqt_search_config(
    t: &PossibilityTable,
    p: u64,
    dim: usize,
    states: &[Vec<u64>],
    bases: &[Vec<Vec<u64>>],
) -> Option<MqtVerdict> {
    let sc = t.scenario();
    let nr = sc.rows.len();
    let nc = sc.cols.len();
    let nb = bases.len();
    let mark = |psi: &[u64], e: &[u64], f: &[u64]| -> bool {
        let mut acc = 0u64;
        for (r, &ev) in e.iter().enumerate() {
            if ev == 0 {
                continue;
            }
            for (q, &fv) in f.iter().enumerate() {
                acc = (acc + ev * fv % p * psi[r * dim + q]) % p;
            }
        }
        acc != 0
    };
    // Target block patterns as bitmasks (outcome pair (a,b) -> bit a*dim+b).
    let target: Vec<u64> = (0..nr * nc)
        .map(|ij| {
            let (i, j) = (ij / nc, ij % nc);
            let mut bits = 0u64;
            for a in 0..dim {
                for b in 0..dim {
                    if t.mark(i, j, a, b) {
                        bits |= 1 << (a * dim + b);
                    }
                }
            }
            bits
        })
        .collect();

    for psi in states {
        // pattern[e][f] = bitmask of marks for basis pair (e, f).
        let mut pattern = vec![vec![0u64; nb]; nb];
        for (ei, e) in bases.iter().enumerate() {
            for (fi, f) in bases.iter().enumerate() {
                let mut bits = 0u64;
                for (a, ea) in e.iter().enumerate() {
                    for (b, fb) in f.iter().enumerate() {
                        if mark(psi, ea, fb) {
                            bits |= 1 << (a * dim + b);
                        }
                    }
                }
                pattern[ei][fi] = bits;
            }
        }
        // Assign column bases left to right, pruning rows as we go.
        let mut col_choice = vec![0usize; nc];
        let mut row_candidates: Vec<Vec<usize>> = vec![(0..nb).collect(); nc + 1];
        // row_candidates[j] = rows... we need per row-measurement candidate
        // sets; track them as a vec of sets refined per column.
        fn assign(
            j: usize,
            nc: usize,
            nr: usize,
            nb: usize,
            pattern: &[Vec<u64>],
            target: &[u64],
            col_choice: &mut [usize],
            candidates: &[Vec<Vec<usize>>],
        ) -> Option<Vec<usize>> {
            let prev = &candidates[j];
            if j == nc {
                // Each row measurement needs any surviving basis.
                let mut rows = Vec::with_capacity(nr);
                for set in prev {
                    rows.push(*set.first()?);
                }
                return Some(rows);
            }
            for f in 0..nb {
                let mut next: Vec<Vec<usize>> = Vec::with_capacity(nr);
                let mut ok = true;
                for (i, set) in prev.iter().enumerate() {
                    let refined: Vec<usize> = set
                        .iter()
                        .copied()
                        .filter(|&e| pattern[e][f] == target[i * nc + j])
                        .collect();
                    if refined.is_empty() {
                        ok = false;
                        break;
                    }
                    next.push(refined);
                }
                if !ok {
                    continue;
                }
                col_choice[j] = f;
                let mut stacked = candidates.to_vec();
                stacked[j + 1] = next;
                if let Some(rows) = assign(j + 1, nc, nr, nb, pattern, target, col_choice, &stacked)
                {
                    return Some(rows);
                }
            }
            None
        }
        let initial: Vec<Vec<Vec<usize>>> = {
            let mut v = vec![Vec::new(); nc + 1];
            v[0] = vec![(0..nb).collect::<Vec<usize>>(); nr];
            v
        };
        if let Some(rows) =
            assign(0, nc, nr, nb, &pattern, &target, &mut col_choice, &initial)
        {
            let _ = &mut row_candidates;
            return Some(MqtVerdict::Yes {
                p,
                dim,
                state: psi.clone(),
                row_bases: rows.iter().map(|&e| bases[e].clone()).collect(),
                col_bases: col_choice.iter().map(|&f| bases[f].clone()).collect(),
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{mobit, StateSpace, Subspace};
    use crate::tables::{prbox_table, singlet_table, table_n, xyz_menu};

    fn f2() -> FieldSpec {
        FieldSpec::new(2).unwrap()
    }

    #[test]
    fn published_resolutions_pass_ns() {
        assert!(check_prob_ns(&singlet_resolution()));
        assert!(check_prob_ns(&prbox_resolution()));
        assert!(singlet_resolution().zero_on_blanks(&singlet_table()));
        assert!(prbox_resolution().zero_on_blanks(&prbox_table()));

        // Perturbing one half to a third breaks normalization.
        let mut broken = prbox_resolution();
        broken.blocks[0][0][0] = ratio(1, 3);
        assert!(!check_prob_ns(&broken));
    }

    #[test]
    fn singlet_weak_resolution_is_the_published_one() {
        let s = singlet_table();
        match weak_resolution(&s) {
            WeakResolution::Table(pt) => assert_eq!(pt, singlet_resolution()),
            other => panic!("expected a resolution, got {other:?}"),
        }
        assert!(resolution_unique(&s).unwrap());
        // Only a weak resolution: the max-min optimum is exactly zero.
        assert!(strong_resolution(&s).is_none());
    }

    #[test]
    fn prbox_strong_resolution() {
        let p = prbox_table();
        let pt = strong_resolution(&p).expect("PR box has a strong resolution");
        assert_eq!(pt, prbox_resolution());
        assert!(resolution_unique(&p).unwrap());
    }

    #[test]
    fn table_n_has_no_resolution() {
        match weak_resolution(&table_n()) {
            WeakResolution::Infeasible { certificate } => {
                assert!(!certificate.is_empty());
                // The clash lives in the (W, W) block: the row path forces
                // its corner cell to 2/3, the column path to 1/3.
                assert!(
                    certificate.iter().any(|(l, _)| l.contains("(W,W")
                        || l.contains("W,W)")
                        || (l.starts_with("row(W") && l.ends_with("|W)"))
                        || (l.starts_with("col(W") && l.ends_with("|W)"))),
                    "certificate does not reference the (W,W) block: {certificate:?}"
                );
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
        assert!(matches!(resolution_unique(&table_n()), Err(ResolveError::Infeasible)));
    }

    #[test]
    fn all_marks_block_is_feasible_but_not_unique() {
        let scenario = Scenario::symmetric(&["A"], 2);
        let full = vec![vec![true, true], vec![true, true]];
        let t = PossibilityTable::new(scenario, vec![full]).unwrap();
        match weak_resolution(&t) {
            WeakResolution::Table(pt) => assert!(check_prob_ns(&pt)),
            other => panic!("expected feasible, got {other:?}"),
        }
        assert!(!resolution_unique(&t).unwrap());
    }

    #[test]
    fn deterministic_table_strong_with_ones() {
        // One mark per block, no-signalling: probability one on each mark.
        let scenario = Scenario::symmetric(&["A", "B"], 2);
        let one_mark = vec![vec![true, false], vec![false, false]];
        let t = PossibilityTable::new(scenario, vec![one_mark; 4]).unwrap();
        let pt = strong_resolution(&t).expect("deterministic tables are strong");
        assert_eq!(*pt.prob(0, 0, 0, 0), ratio(1, 1));
        assert_eq!(*pt.prob(1, 1, 0, 0), ratio(1, 1));
    }

    #[test]
    fn matching_examples() {
        let id3 = vec![
            vec![true, false, false],
            vec![false, true, false],
            vec![false, false, true],
        ];
        assert_eq!(max_matching(&id3), vec![(0, 0), (1, 1), (2, 2)]);

        let adj = vec![vec![true, false], vec![true, true]];
        assert_eq!(max_matching(&adj), vec![(0, 0), (1, 1)]);

        let empty = vec![vec![false, false], vec![false, false]];
        assert_eq!(max_matching(&empty), vec![]);
    }

    #[test]
    fn hall_reproduces_singlet_resolution() {
        let field = f2();
        let psi = mobit::singlet(field);
        let pt = hall_resolution(&psi, &xyz_menu(field), &xyz_menu(field)).unwrap();
        assert_eq!(pt, singlet_resolution());
    }

    #[test]
    fn hall_on_diagonal_state() {
        let field = f2();
        let sp4 = StateSpace::composite(&[2, 2], field);
        let phi = Vector::ket(&[1, 0, 0, 1], &sp4).unwrap();
        let zz: Vec<(String, Measurement)> = xyz_menu(field)
            .into_iter()
            .filter(|(l, _)| l == "Z")
            .collect();
        let pt = hall_resolution(&phi, &zz, &zz).unwrap();
        let h = ratio(1, 2);
        assert_eq!(*pt.prob(0, 0, 0, 0), h);
        assert_eq!(*pt.prob(0, 0, 1, 1), h);
        assert!(pt.prob(0, 0, 0, 1).is_zero() && pt.prob(0, 0, 1, 0).is_zero());
    }

    #[test]
    fn hall_rejects_non_maximal_states() {
        let field = f2();
        let sp4 = StateSpace::composite(&[2, 2], field);
        let product = Vector::ket(&[1, 0, 0, 0], &sp4).unwrap();
        assert!(matches!(
            hall_resolution(&product, &xyz_menu(field), &xyz_menu(field)),
            Err(ResolveError::NotMaximal { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn hall_handles_coarse_measurements() {
        // A coarse two-effect measurement on a 3-dimensional system: one
        // 2-dimensional effect and one line. Fine-grained internally.
        let field = FieldSpec::new(3).unwrap();
        let sp = StateSpace::new(3, field);
        let e01 = Subspace::span(
            &[
                Vector::bra(&[1, 0, 0], &sp).unwrap(),
                Vector::bra(&[0, 1, 0], &sp).unwrap(),
            ],
            &sp,
        )
        .unwrap();
        let e2 = Subspace::line(&Vector::bra(&[0, 0, 1], &sp).unwrap()).unwrap();
        let coarse = Measurement::new(vec![e01, e2], &sp).unwrap();
        let sp9 = StateSpace::composite(&[3, 3], field);
        let mut coords = vec![0u64; 9];
        for k in 0..3 {
            coords[k * 3 + k] = 1;
        }
        let phi = Vector::ket(&coords, &sp9).unwrap();
        let menu = vec![("C".to_string(), coarse)];
        let pt = hall_resolution(&phi, &menu, &menu).unwrap();
        assert!(check_prob_ns(&pt));
        // Two fine slots land in the coarse outcome 0, one in outcome 1.
        assert_eq!(*pt.prob(0, 0, 0, 0), ratio(2, 3));
        assert_eq!(*pt.prob(0, 0, 1, 1), ratio(1, 3));
    }

    #[test]
    fn classify_fixtures() {
        let bounds = MqtSearchBounds::default();

        let c = classify(&singlet_table(), &bounds);
        assert!(c.ns && c.wpr && !c.spr && !c.lhv);
        match &c.mqt {
            MqtVerdict::Yes { p, dim, .. } => assert_eq!((*p, *dim), (2, 2)),
            other => panic!("expected a witness for the singlet table, got {other:?}"),
        }

        let c = classify(&prbox_table(), &bounds);
        assert!(c.ns && c.wpr && c.spr && !c.lhv);
        assert!(
            matches!(c.mqt, MqtVerdict::No { .. }),
            "PR box should have no realization at the default bounds: {:?}",
            c.mqt
        );

        let c = classify(&table_n(), &bounds);
        assert!(c.ns && !c.wpr && !c.spr && !c.lhv);
        assert_eq!(c.mqt, MqtVerdict::No { reason: "not in WPR".into() });
    }

    #[test]
    fn mqt_witness_reproduces_table() {
        // The singlet witness, replayed through the mark rule, rebuilds the
        // table exactly.
        let t = singlet_table();
        let MqtVerdict::Yes { p, dim, state, row_bases, col_bases } =
            classify(&t, &MqtSearchBounds::default()).mqt
        else {
            panic!("expected witness");
        };
        for (i, e) in row_bases.iter().enumerate() {
            for (j, f) in col_bases.iter().enumerate() {
                for a in 0..dim {
                    for b in 0..dim {
                        let mut acc = 0u64;
                        for r in 0..dim {
                            for q in 0..dim {
                                acc = (acc + e[a][r] * f[b][q] % p * state[r * dim + q]) % p;
                            }
                        }
                        assert_eq!(acc != 0, t.mark(i, j, a, b));
                    }
                }
            }
        }
    }
}
