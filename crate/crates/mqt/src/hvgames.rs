//! Hidden-variable refutations and the pseudo-telepathy game.
//!
//! Three ways to refute definite-value assignments:
//!
//! - [`noncontextual_search`]: Kochen–Specker-style search for a yes/no
//!   valuation of effects with exactly one "yes" per measurement context;
//! - [`joint_assignment_survivors`]: elimination of joint outcome
//!   assignments against a possibility table;
//! - [`hardy_check`]: the four-fact possibility chain that needs no counting
//!   at all.
//!
//! [`play_game`] adjudicates the cooperative game where two isolated players
//! must answer measurement questions consistently with a table: no classical
//! strategy wins every round on the singlet table, but players sharing the
//! entangled state do.

use thiserror::Error;

use crate::field::FieldSpec;
use crate::states::{
    projective_points, Measurement, StateError, StateSpace, Subspace, Variance, Vector,
};
use crate::tables::{
    build_table, table_leq, DeterministicLocalStrategy, PossibilityTable, TableError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HvError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("search budget exceeded: {0} assignments")]
    BudgetExceeded(u64),
    #[error("invalid mapping: {0}")]
    BadMapping(String),
    #[error("context {0} is not a basis of the dual space")]
    BadContext(usize),
}

/// A family of one-dimensional effects with measurement contexts: each
/// context is an index set whose effects form a basis of the dual space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextFamily {
    effects: Vec<Vector>,
    contexts: Vec<Vec<usize>>,
}

impl ContextFamily {
    /// Build from dual vectors (deduplicated projectively) and index sets;
    /// every context must be a basis.
    pub fn new(effects: Vec<Vector>, contexts: Vec<Vec<usize>>) -> Result<ContextFamily, HvError> {
        let mut canon: Vec<Vector> = Vec::new();
        let mut remap = Vec::with_capacity(effects.len());
        for e in &effects {
            let p = e.projective();
            let idx = match canon.iter().position(|c| *c == p) {
                Some(i) => i,
                None => {
                    canon.push(p);
                    canon.len() - 1
                }
            };
            remap.push(idx);
        }
        let contexts: Vec<Vec<usize>> = contexts
            .into_iter()
            .map(|ctx| ctx.into_iter().map(|i| remap[i]).collect())
            .collect();
        for (ci, ctx) in contexts.iter().enumerate() {
            let members: Vec<Vector> = ctx.iter().map(|&i| canon[i].clone()).collect();
            let space = members
                .first()
                .map(|v| v.space().clone())
                .ok_or(HvError::BadContext(ci))?;
            let span = Subspace::span(&members, &space)?;
            if span.dim() != ctx.len() || !span.is_full() {
                return Err(HvError::BadContext(ci));
            }
        }
        Ok(ContextFamily { effects: canon, contexts })
    }

    pub fn effects(&self) -> &[Vector] {
        &self.effects
    }

    pub fn contexts(&self) -> &[Vec<usize>] {
        &self.contexts
    }

    /// The family of all projective dual points of the 2-dimensional system
    /// over `field`, with every independent pair as a context.
    pub fn mobit_pairs(field: FieldSpec) -> ContextFamily {
        let space = StateSpace::new(2, field);
        let points = projective_points(&space, Variance::Dual, crate::states::DEFAULT_ENUM_BUDGET)
            .expect("tiny space");
        let mut contexts = Vec::new();
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                contexts.push(vec![i, j]);
            }
        }
        // Any two distinct projective points of a 2-dimensional space are
        // independent, so every pair is a context.
        ContextFamily::new(points, contexts).expect("pairs are bases")
    }
}

/// Search for a noncontextual valuation: "yes"/"no" per effect with exactly
/// one "yes" in every context. Exhaustive and deterministic (lexicographic
/// over bit patterns, lowest effect index = least significant); `None` means
/// the family admits no noncontextual hidden-variable model.
pub fn noncontextual_search(f: &ContextFamily, budget: u64) -> Result<Option<Vec<bool>>, HvError> {
    let n = f.effects.len();
    if n >= 63 || (1u64 << n) > budget {
        return Err(HvError::BudgetExceeded(1u64 << n.min(63)));
    }
    'outer: for bits in 0u64..(1 << n) {
        for ctx in &f.contexts {
            let yes = ctx.iter().filter(|&&i| bits >> i & 1 == 1).count();
            if yes != 1 {
                continue 'outer;
            }
        }
        return Ok(Some((0..n).map(|i| bits >> i & 1 == 1).collect()));
    }
    Ok(None)
}

/// A definite-outcome assignment for every (party, measurement) pair; the
/// shape coincides with a deterministic local strategy.
pub type JointAssignment = DeterministicLocalStrategy;

/// All joint assignments consistent with a table: `h` survives iff for every
/// measurement pair the cell it selects is marked.
pub fn joint_assignment_survivors(
    t: &PossibilityTable,
    budget: u64,
) -> Result<Vec<JointAssignment>, HvError> {
    let sc = t.scenario();
    let mut count = 1u64;
    for m in sc.rows.iter().chain(&sc.cols) {
        count = count.saturating_mul(m.outcomes as u64);
        if count > budget {
            return Err(HvError::BudgetExceeded(count));
        }
    }
    let survivors = crate::tables::all_strategies(sc)
        .into_iter()
        .filter(|h| {
            (0..sc.rows.len())
                .all(|i| (0..sc.cols.len()).all(|j| t.mark(i, j, h.f1[i], h.f2[j])))
        })
        .collect();
    Ok(survivors)
}

/// One leg of a Hardy mapping: a measurement index on the given party, and
/// whether its outcomes are negated (relabeled `+ <-> -`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HardyLeg {
    pub measurement: usize,
    pub negated: bool,
}

impl HardyLeg {
    pub fn plain(measurement: usize) -> HardyLeg {
        HardyLeg { measurement, negated: false }
    }

    pub fn negated(measurement: usize) -> HardyLeg {
        HardyLeg { measurement, negated: true }
    }

    fn outcome(&self, o: usize) -> usize {
        if self.negated {
            1 - o
        } else {
            o
        }
    }
}

/// The Hardy identification: A, B index system-1 measurements; C, D index
/// system-2 measurements (possibly negated).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HardyMapping {
    pub a: HardyLeg,
    pub b: HardyLeg,
    pub c: HardyLeg,
    pub d: HardyLeg,
}

/// The four Hardy facts, which jointly rule out definite values:
/// `(+,+|A,D)` never occurs, `(+,+|B,C)` never occurs, `(+,+|B,D)` can
/// occur, and `(-,-|A,C)` never occurs.
pub fn hardy_check(t: &PossibilityTable, mapping: &HardyMapping) -> Result<bool, HvError> {
    let sc = t.scenario();
    for (leg, count, side) in [
        (&mapping.a, sc.rows.len(), "row"),
        (&mapping.b, sc.rows.len(), "row"),
        (&mapping.c, sc.cols.len(), "col"),
        (&mapping.d, sc.cols.len(), "col"),
    ] {
        if leg.measurement >= count {
            return Err(HvError::BadMapping(format!(
                "{side} measurement {} out of range",
                leg.measurement
            )));
        }
    }
    let two_outcome = |idx: usize, is_row: bool| {
        if is_row {
            sc.rows[idx].outcomes == 2
        } else {
            sc.cols[idx].outcomes == 2
        }
    };
    if !two_outcome(mapping.a.measurement, true)
        || !two_outcome(mapping.b.measurement, true)
        || !two_outcome(mapping.c.measurement, false)
        || !two_outcome(mapping.d.measurement, false)
    {
        return Err(HvError::BadMapping("Hardy legs must be two-outcome measurements".into()));
    }
    let cell = |m1: &HardyLeg, m2: &HardyLeg, o1: usize, o2: usize| {
        t.mark(m1.measurement, m2.measurement, m1.outcome(o1), m2.outcome(o2))
    };
    Ok(!cell(&mapping.a, &mapping.d, 0, 0)
        && !cell(&mapping.b, &mapping.c, 0, 0)
        && cell(&mapping.b, &mapping.d, 0, 0)
        && !cell(&mapping.a, &mapping.c, 1, 1))
}

/// A strategy for the cooperative game on a table.
#[derive(Debug, Clone)]
pub enum GameStrategy {
    /// Fixed answers per question.
    Classical(DeterministicLocalStrategy),
    /// The players share `state` and answer with local measurements; any
    /// jointly possible outcome may be emitted.
    SharedState {
        state: Subspace,
        meas1: Vec<(String, Measurement)>,
        meas2: Vec<(String, Measurement)>,
    },
}

/// Outcome of playing every question pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameOutcome {
    pub wins_all: bool,
    /// A question pair the strategy can lose, when one exists.
    pub losing_pair: Option<(usize, usize)>,
}

/// Adjudicate a strategy against the table of admissible answers. A
/// classical strategy must land on a mark for every question pair; a
/// shared-state strategy must have *every* jointly possible outcome land on
/// a mark (the players cannot control which possible outcome occurs).
pub fn play_game(t: &PossibilityTable, strategy: &GameStrategy) -> Result<GameOutcome, HvError> {
    let sc = t.scenario();
    match strategy {
        GameStrategy::Classical(s) => {
            for i in 0..sc.rows.len() {
                for j in 0..sc.cols.len() {
                    if !t.mark(i, j, s.f1[i], s.f2[j]) {
                        return Ok(GameOutcome { wins_all: false, losing_pair: Some((i, j)) });
                    }
                }
            }
            Ok(GameOutcome { wins_all: true, losing_pair: None })
        }
        GameStrategy::SharedState { state, meas1, meas2 } => {
            let answers = build_table(state, meas1, meas2)?;
            if table_leq(&answers, t)? {
                return Ok(GameOutcome { wins_all: true, losing_pair: None });
            }
            for i in 0..sc.rows.len() {
                for j in 0..sc.cols.len() {
                    let possible = answers.block(i, j);
                    let allowed = t.block(i, j);
                    let bad = possible
                        .iter()
                        .zip(allowed)
                        .any(|(pr, ar)| pr.iter().zip(ar).any(|(&p, &a)| p && !a));
                    if bad {
                        return Ok(GameOutcome { wins_all: false, losing_pair: Some((i, j)) });
                    }
                }
            }
            unreachable!("table_leq failed, so some block must exceed the marks");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::mobit;
    use crate::tables::{all_strategies, singlet_table, prbox_table, xyz_menu, Scenario};

    const BUDGET: u64 = 1 << 20;

    fn f2() -> FieldSpec {
        FieldSpec::new(2).unwrap()
    }

    #[test]
    fn mobit_ks_obstruction() {
        // The three mobit effects with all pair contexts: each pair must
        // contain exactly one "yes", which no assignment of three bits does.
        let family = ContextFamily::mobit_pairs(f2());
        assert_eq!(family.effects().len(), 3);
        assert_eq!(family.contexts().len(), 3);
        assert_eq!(noncontextual_search(&family, BUDGET).unwrap(), None);
    }

    #[test]
    fn single_context_admits_assignments() {
        let space = StateSpace::new(2, f2());
        let effects = vec![
            Vector::bra(&[1, 0], &space).unwrap(),
            Vector::bra(&[0, 1], &space).unwrap(),
        ];
        let family = ContextFamily::new(effects, vec![vec![0, 1]]).unwrap();
        let witness = noncontextual_search(&family, BUDGET).unwrap().unwrap();
        assert_eq!(witness.iter().filter(|&&b| b).count(), 1);
        // Deterministic: the lexicographically first witness.
        assert_eq!(witness, vec![true, false]);
    }

    #[test]
    fn z3_mobit_ks_obstruction() {
        // Over Z_3 the mobit has four projective effects and six pair
        // contexts; the search rejects all 16 assignments.
        let field = FieldSpec::new(3).unwrap();
        let family = ContextFamily::mobit_pairs(field);
        assert_eq!(family.effects().len(), 4);
        assert_eq!(family.contexts().len(), 6);
        assert_eq!(noncontextual_search(&family, BUDGET).unwrap(), None);
    }

    #[test]
    fn degenerate_contexts_rejected() {
        let space = StateSpace::new(2, f2());
        let effects = vec![
            Vector::bra(&[1, 0], &space).unwrap(),
            Vector::bra(&[1, 0], &space).unwrap(), // projectively equal
        ];
        assert!(matches!(
            ContextFamily::new(effects, vec![vec![0, 1]]),
            Err(HvError::BadContext(0))
        ));
    }

    #[test]
    fn singlet_eliminates_all_joint_assignments() {
        let t = singlet_table();
        assert_eq!(all_strategies(t.scenario()).len(), 64);
        assert_eq!(joint_assignment_survivors(&t, BUDGET).unwrap(), vec![]);
    }

    #[test]
    fn prbox_eliminates_all_joint_assignments() {
        // The agree/agree/agree/disagree parity contradiction.
        assert_eq!(joint_assignment_survivors(&prbox_table(), BUDGET).unwrap(), vec![]);
    }

    #[test]
    fn product_table_has_one_survivor() {
        let field = f2();
        let sp4 = StateSpace::composite(&[2, 2], field);
        let zz: Vec<(String, Measurement)> = xyz_menu(field)
            .into_iter()
            .filter(|(l, _)| l == "Z")
            .collect();
        let state = Subspace::line(&Vector::ket(&[1, 0, 0, 0], &sp4).unwrap()).unwrap();
        let t = build_table(&state, &zz, &zz).unwrap();
        let survivors = joint_assignment_survivors(&t, BUDGET).unwrap();
        assert_eq!(survivors, vec![JointAssignment { f1: vec![0], f2: vec![0] }]);
    }

    #[test]
    fn hardy_facts() {
        let t = singlet_table();
        // A=X, B=Y, C = negated Z, D = negated Y.
        let mapping = HardyMapping {
            a: HardyLeg::plain(0),
            b: HardyLeg::plain(1),
            c: HardyLeg::negated(2),
            d: HardyLeg::negated(1),
        };
        assert!(hardy_check(&t, &mapping).unwrap());

        // Without the negations the facts fail.
        let plain = HardyMapping {
            a: HardyLeg::plain(0),
            b: HardyLeg::plain(1),
            c: HardyLeg::plain(2),
            d: HardyLeg::plain(1),
        };
        assert!(!hardy_check(&t, &plain).unwrap());

        // All-marks table: the first fact is violated.
        let scenario = Scenario::symmetric(&["A", "B"], 2);
        let full = vec![vec![true, true], vec![true, true]];
        let all = PossibilityTable::new(scenario, vec![full; 4]).unwrap();
        let small = HardyMapping {
            a: HardyLeg::plain(0),
            b: HardyLeg::plain(1),
            c: HardyLeg::plain(0),
            d: HardyLeg::plain(1),
        };
        assert!(!hardy_check(&all, &small).unwrap());

        // Out-of-range legs are rejected.
        let oob = HardyMapping { a: HardyLeg::plain(9), ..mapping };
        assert!(matches!(hardy_check(&t, &oob), Err(HvError::BadMapping(_))));
    }

    #[test]
    fn classical_players_cannot_win_on_singlet() {
        let t = singlet_table();
        let mut winners = 0;
        for s in all_strategies(t.scenario()) {
            if play_game(&t, &GameStrategy::Classical(s)).unwrap().wins_all {
                winners += 1;
            }
        }
        assert_eq!(winners, 0);
    }

    #[test]
    fn shared_singlet_wins() {
        let field = f2();
        let t = singlet_table();
        let strategy = GameStrategy::SharedState {
            state: Subspace::line(&mobit::singlet(field)).unwrap(),
            meas1: xyz_menu(field),
            meas2: xyz_menu(field),
        };
        let outcome = play_game(&t, &strategy).unwrap();
        assert!(outcome.wins_all);
        assert_eq!(outcome.losing_pair, None);
    }

    #[test]
    fn constant_strategy_wins_all_marks_table() {
        let scenario = Scenario::symmetric(&["A", "B"], 2);
        let full = vec![vec![true, true], vec![true, true]];
        let t = PossibilityTable::new(scenario, vec![full; 4]).unwrap();
        let s = DeterministicLocalStrategy { f1: vec![0, 0], f2: vec![0, 0] };
        assert!(play_game(&t, &GameStrategy::Classical(s)).unwrap().wins_all);
    }

    #[test]
    fn survivors_match_winning_strategies() {
        // Survivors of the elimination are exactly the winning classical
        // strategies, on several tables.
        for t in [singlet_table(), prbox_table()] {
            let survivors = joint_assignment_survivors(&t, BUDGET).unwrap();
            let winners: Vec<DeterministicLocalStrategy> = all_strategies(t.scenario())
                .into_iter()
                .filter(|s| {
                    play_game(&t, &GameStrategy::Classical(s.clone())).unwrap().wins_all
                })
                .collect();
            assert_eq!(survivors, winners);
        }
    }
}
