//! Exact rational linear programming.
//!
//! A small dense two-phase simplex over arbitrary-precision rationals, with
//! Bland's rule for anti-cycling. All variables are nonnegative; constraints
//! are labeled equalities or `>=` inequalities (use [`LinearProgram::le`] to
//! add a flipped inequality). When the program is infeasible the solver
//! returns a Farkas certificate: weights on the labeled constraints whose
//! combination is contradictory, so callers can report *which* constraints
//! clash, not just that they do.
//!
//! Exactness is the point: the downstream feasibility questions hinge on
//! distinctions like "optimum is 0" versus "optimum is positive", which
//! floating point cannot decide.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Convenience constructor for small rationals.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Format a rational as `n` or `n/d`.
pub fn format_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `n` or `n/d` into a rational.
pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(BigRational::from),
        Some((n, d)) => {
            let n = n.trim().parse::<BigInt>().ok()?;
            let d = d.trim().parse::<BigInt>().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Relation {
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
struct Constraint {
    label: String,
    /// Sparse coefficients on the structural variables.
    coeffs: Vec<(usize, BigRational)>,
    relation: Relation,
    rhs: BigRational,
}

/// A linear program over nonnegative variables.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    num_vars: usize,
    constraints: Vec<Constraint>,
}

/// Outcome of a solve.
#[derive(Debug, Clone, PartialEq)]
pub enum LpResult {
    /// Objective supplied and attained.
    Optimal { x: Vec<BigRational>, value: BigRational },
    /// No objective supplied; any feasible point.
    Feasible { x: Vec<BigRational> },
    /// No feasible point; the certificate lists labeled constraint weights
    /// whose combination `sum_i y_i * constraint_i` yields `0 >= positive`.
    Infeasible { certificate: Vec<(String, BigRational)> },
    /// Objective unbounded above on the feasible set.
    Unbounded,
}

impl LpResult {
    pub fn point(&self) -> Option<&[BigRational]> {
        match self {
            LpResult::Optimal { x, .. } | LpResult::Feasible { x } => Some(x),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> LinearProgram {
        LinearProgram { num_vars, constraints: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn eq(&mut self, label: &str, coeffs: &[(usize, BigRational)], rhs: BigRational) {
        self.push(label, coeffs.to_vec(), Relation::Eq, rhs);
    }

    pub fn ge(&mut self, label: &str, coeffs: &[(usize, BigRational)], rhs: BigRational) {
        self.push(label, coeffs.to_vec(), Relation::Ge, rhs);
    }

    pub fn le(&mut self, label: &str, coeffs: &[(usize, BigRational)], rhs: BigRational) {
        let negated = coeffs.iter().map(|(i, c)| (*i, -c.clone())).collect();
        self.push(label, negated, Relation::Ge, -rhs);
    }

    fn push(&mut self, label: &str, coeffs: Vec<(usize, BigRational)>, relation: Relation, rhs: BigRational) {
        for (i, _) in &coeffs {
            assert!(*i < self.num_vars, "coefficient on unknown variable {i}");
        }
        self.constraints.push(Constraint { label: label.to_string(), coeffs, relation, rhs });
    }

    /// Find any feasible point.
    pub fn feasible(&self) -> LpResult {
        self.solve(None)
    }

    /// Maximize the given dense objective (or just find a feasible point).
    pub fn solve(&self, objective: Option<&[BigRational]>) -> LpResult {
        if let Some(c) = objective {
            assert_eq!(c.len(), self.num_vars);
        }
        Tableau::assemble(self).run(objective)
    }

    /// Minimize by maximizing the negated objective; value is the minimum.
    pub fn minimize(&self, objective: &[BigRational]) -> LpResult {
        let negated: Vec<BigRational> = objective.iter().map(|c| -c.clone()).collect();
        match self.solve(Some(&negated)) {
            LpResult::Optimal { x, value } => LpResult::Optimal { x, value: -value },
            other => other,
        }
    }
}

struct Tableau {
    /// `m x (total + 1)` rows; the final column is the right-hand side.
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    num_structural: usize,
    /// Index of the first artificial column.
    art_start: usize,
    /// For each row: (original constraint index, whether it was negated to
    /// make the rhs nonnegative).
    provenance: Vec<(usize, bool)>,
    labels: Vec<String>,
}

impl Tableau {
    fn assemble(lp: &LinearProgram) -> Tableau {
        let m = lp.constraints.len();
        let n = lp.num_vars;
        let num_surplus = lp.constraints.iter().filter(|c| c.relation == Relation::Ge).count();
        let art_start = n + num_surplus;
        let total = art_start + m;
        let mut rows = Vec::with_capacity(m);
        let mut provenance = Vec::with_capacity(m);
        let mut surplus_used = 0;
        for (ci, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![BigRational::zero(); total + 1];
            for (i, v) in &c.coeffs {
                row[*i] += v.clone();
            }
            if c.relation == Relation::Ge {
                row[n + surplus_used] = -BigRational::one();
                surplus_used += 1;
            }
            row[total] = c.rhs.clone();
            let negated = row[total].is_negative();
            if negated {
                for v in row.iter_mut() {
                    *v = -v.clone();
                }
            }
            row[art_start + ci] = BigRational::one();
            rows.push(row);
            provenance.push((ci, negated));
        }
        Tableau {
            rows,
            basis: (0..m).map(|i| art_start + i).collect(),
            num_structural: n,
            art_start,
            provenance,
            labels: lp.constraints.iter().map(|c| c.label.clone()).collect(),
        }
    }

    fn total_cols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len() - 1)
    }

    /// The objective row `c_j - z_j` for cost vector `c` (dense over all
    /// columns), plus the current objective value.
    fn objective_row(&self, costs: &[BigRational]) -> (Vec<BigRational>, BigRational) {
        let total = self.total_cols();
        let mut row = costs.to_vec();
        let mut value = BigRational::zero();
        for (i, r) in self.rows.iter().enumerate() {
            let cb = &costs[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for j in 0..total {
                let delta = cb.clone() * r[j].clone();
                row[j] -= delta;
            }
            value += cb.clone() * r[total].clone();
        }
        (row, value)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let total = self.total_cols();
        let pivot = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v /= pivot.clone();
        }
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let factor = self.rows[i][col].clone();
            for j in 0..=total {
                let delta = factor.clone() * self.rows[row][j].clone();
                self.rows[i][j] -= delta;
            }
        }
        self.basis[row] = col;
    }

    /// Simplex iterations maximizing `costs`; columns at or beyond
    /// `col_limit` are never entered. Returns false on unboundedness.
    fn optimize(&mut self, costs: &[BigRational], col_limit: usize) -> bool {
        let total = self.total_cols();
        loop {
            let (obj, _) = self.objective_row(costs);
            // Bland: the lowest-index column with positive reduced cost.
            let Some(enter) = (0..col_limit).find(|&j| obj[j].is_positive()) else {
                return true;
            };
            // Ratio test; ties broken by the lowest basis variable index.
            let mut leave: Option<usize> = None;
            let mut best: Option<BigRational> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][enter].is_positive() {
                    continue;
                }
                let ratio = self.rows[i][total].clone() / self.rows[i][enter].clone();
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b
                            || (ratio == *b
                                && self.basis[i] < self.basis[leave.expect("leave set with best")])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
            let Some(leave) = leave else {
                return false;
            };
            self.pivot(leave, enter);
        }
    }

    fn extract_point(&self) -> Vec<BigRational> {
        let total = self.total_cols();
        let mut x = vec![BigRational::zero(); self.num_structural];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.num_structural {
                x[b] = self.rows[i][total].clone();
            }
        }
        x
    }

    fn run(mut self, objective: Option<&[BigRational]>) -> LpResult {
        let total = self.total_cols();
        // Phase 1: maximize minus the sum of artificials.
        let mut phase1 = vec![BigRational::zero(); total];
        for j in self.art_start..total {
            phase1[j] = -BigRational::one();
        }
        let bounded = self.optimize(&phase1, total);
        debug_assert!(bounded, "phase 1 is bounded by construction");
        let (obj, value) = self.objective_row(&phase1);
        if value.is_negative() {
            // Infeasible. Farkas weights from the artificial columns'
            // reduced costs: obj[art_i] = -1 - y_i, and -y certifies.
            let mut certificate = Vec::new();
            for (i, (ci, negated)) in self.provenance.iter().enumerate() {
                let y_i = -BigRational::one() - obj[self.art_start + i].clone();
                let mut w = -y_i;
                if *negated {
                    w = -w;
                }
                if !w.is_zero() {
                    certificate.push((self.labels[*ci].clone(), w));
                }
            }
            return LpResult::Infeasible { certificate };
        }
        // Drive leftover zero-level artificials out of the basis.
        let mut drop_rows = Vec::new();
        for i in 0..self.rows.len() {
            if self.basis[i] < self.art_start {
                continue;
            }
            match (0..self.art_start).find(|&j| !self.rows[i][j].is_zero()) {
                Some(j) => self.pivot(i, j),
                None => drop_rows.push(i), // redundant constraint
            }
        }
        for &i in drop_rows.iter().rev() {
            self.rows.remove(i);
            self.basis.remove(i);
            self.provenance.remove(i);
        }
        match objective {
            None => LpResult::Feasible { x: self.extract_point() },
            Some(c) => {
                let mut costs = vec![BigRational::zero(); total];
                costs[..c.len()].clone_from_slice(c);
                if !self.optimize(&costs, self.art_start) {
                    return LpResult::Unbounded;
                }
                let (_, value) = self.objective_row(&costs);
                LpResult::Optimal { x: self.extract_point(), value }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        ratio(n, d)
    }

    #[test]
    fn ratio_formatting() {
        assert_eq!(format_ratio(&r(1, 2)), "1/2");
        assert_eq!(format_ratio(&r(2, 1)), "2");
        assert_eq!(format_ratio(&r(-2, 4)), "-1/2");
        assert_eq!(parse_ratio("2/3"), Some(r(2, 3)));
        assert_eq!(parse_ratio("5"), Some(r(5, 1)));
        assert_eq!(parse_ratio("1/0"), None);
        assert_eq!(parse_ratio("x"), None);
    }

    #[test]
    fn simple_feasible_and_optimal() {
        let mut lp = LinearProgram::new(2);
        lp.eq("sum", &[(0, r(1, 1)), (1, r(1, 1))], r(1, 1));
        match lp.feasible() {
            LpResult::Feasible { x } => assert_eq!(x[0].clone() + x[1].clone(), r(1, 1)),
            other => panic!("expected feasible, got {other:?}"),
        }
        let obj = vec![r(1, 1), r(0, 1)];
        match lp.solve(Some(&obj)) {
            LpResult::Optimal { x, value } => {
                assert_eq!(value, r(1, 1));
                assert_eq!(x, vec![r(1, 1), r(0, 1)]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
        match lp.minimize(&obj) {
            LpResult::Optimal { value, .. } => assert_eq!(value, r(0, 1)),
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn inequality_and_bounds() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6 → optimum at (8/5, 6/5).
        let mut lp = LinearProgram::new(2);
        lp.le("c1", &[(0, r(1, 1)), (1, r(2, 1))], r(4, 1));
        lp.le("c2", &[(0, r(3, 1)), (1, r(1, 1))], r(6, 1));
        let obj = vec![r(1, 1), r(1, 1)];
        match lp.solve(Some(&obj)) {
            LpResult::Optimal { x, value } => {
                assert_eq!(value, r(14, 5));
                assert_eq!(x, vec![r(8, 5), r(6, 5)]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_with_certificate() {
        let mut lp = LinearProgram::new(2);
        lp.eq("first", &[(0, r(1, 1)), (1, r(1, 1))], r(1, 1));
        lp.eq("second", &[(0, r(1, 1)), (1, r(1, 1))], r(2, 1));
        match lp.feasible() {
            LpResult::Infeasible { certificate } => {
                let labels: Vec<&str> =
                    certificate.iter().map(|(l, _)| l.as_str()).collect();
                assert!(labels.contains(&"first") && labels.contains(&"second"));
                // The weighted combination must be contradictory:
                // coefficients cancel, right-hand side stays positive.
                let w: std::collections::HashMap<&str, BigRational> = certificate
                    .iter()
                    .map(|(l, v)| (l.as_str(), v.clone()))
                    .collect();
                assert_eq!(w["first"].clone() + w["second"].clone(), r(0, 1));
                let rhs = w["first"].clone() * r(1, 1) + w["second"].clone() * r(2, 1);
                assert!(rhs.is_positive() || (-rhs.clone()).is_positive());
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_sign_constraints() {
        // x >= 0 and x + 1 <= 0 cannot hold.
        let mut lp = LinearProgram::new(1);
        lp.le("cap", &[(0, r(1, 1))], r(-1, 1));
        assert!(matches!(lp.feasible(), LpResult::Infeasible { .. }));
    }

    #[test]
    fn unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.ge("floor", &[(0, r(1, 1))], r(1, 1));
        assert_eq!(lp.solve(Some(&[r(1, 1)])), LpResult::Unbounded);
    }

    #[test]
    fn degenerate_pivots_terminate() {
        // A classic degenerate setup; Bland's rule must terminate.
        let mut lp = LinearProgram::new(4);
        lp.le("r1", &[(0, r(1, 2)), (1, r(-11, 2)), (2, r(-5, 2)), (3, r(9, 1))], r(0, 1));
        lp.le("r2", &[(0, r(1, 2)), (1, r(-3, 2)), (2, r(-1, 2)), (3, r(1, 1))], r(0, 1));
        lp.le("r3", &[(0, r(1, 1))], r(1, 1));
        let obj = vec![r(10, 1), r(-57, 1), r(-9, 1), r(-24, 1)];
        match lp.solve(Some(&obj)) {
            LpResult::Optimal { value, .. } => assert_eq!(value, r(1, 1)),
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn equality_with_negative_rhs() {
        // Rows with negative right-hand sides are normalized internally.
        let mut lp = LinearProgram::new(2);
        lp.eq("diff", &[(0, r(1, 1)), (1, r(-1, 1))], r(-3, 1));
        lp.le("cap", &[(1, r(1, 1))], r(5, 1));
        match lp.solve(Some(&[r(1, 1), r(0, 1)])) {
            LpResult::Optimal { x, value } => {
                assert_eq!(value, r(2, 1));
                assert_eq!(x, vec![r(2, 1), r(5, 1)]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn redundant_constraints_are_handled() {
        let mut lp = LinearProgram::new(2);
        lp.eq("a", &[(0, r(1, 1)), (1, r(1, 1))], r(1, 1));
        lp.eq("b", &[(0, r(2, 1)), (1, r(2, 1))], r(2, 1));
        match lp.solve(Some(&[r(1, 1), r(0, 1)])) {
            LpResult::Optimal { value, .. } => assert_eq!(value, r(1, 1)),
            other => panic!("expected optimal, got {other:?}"),
        }
    }
}
