//! The MQT state and effect calculus.
//!
//! A pure state is a nonzero vector, a mixed state is a subspace of the state
//! space, and a generalized effect is a subspace of the dual space. Both share
//! the [`Subspace`] type, distinguished by a [`Variance`] flag; mixing
//! variances up is an error, not a silent reinterpretation.
//!
//! Composite (bipartite) spaces carry their factor dimensions so conditional
//! states, reductions, Schmidt decompositions and purifications know how to
//! contract indices. The composite index convention is row-major with the
//! left factor major: `|a, b>` lives at coordinate `a * dim_right + b`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::FieldSpec;
use crate::linalg::{LinalgError, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StateError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("expected a {expected:?} subspace, got {got:?}")]
    VarianceMismatch { expected: Variance, got: Variance },
    #[error("the space has no factor structure")]
    NoFactors,
    #[error("a pure state must be a nonzero vector")]
    ZeroState,
    #[error("the null subspace is not a valid state here")]
    NullState,
    #[error("sets span different subspaces")]
    SpanMismatch,
    #[error("expected {expected} vectors, got {got}")]
    Cardinality { expected: usize, got: usize },
    #[error("enumeration budget exceeded: {0} candidates")]
    BudgetExceeded(u64),
}

/// Primal values live in the state space V (kets, mixed states); dual values
/// live in V* (bras, effects).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Primal,
    Dual,
}

impl Variance {
    pub fn opposite(self) -> Variance {
        match self {
            Variance::Primal => Variance::Dual,
            Variance::Dual => Variance::Primal,
        }
    }
}

/// A state space: a dimension, a field, and (for composite spaces) the
/// subsystem dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateSpace {
    dim: usize,
    field: FieldSpec,
    factors: Option<Vec<usize>>,
}

impl StateSpace {
    pub fn new(dim: usize, field: FieldSpec) -> StateSpace {
        assert!(dim >= 1, "state space dimension must be at least 1");
        StateSpace { dim, field, factors: None }
    }

    /// A composite space; `dim` is the product of the factor dimensions.
    pub fn composite(factors: &[usize], field: FieldSpec) -> StateSpace {
        assert!(!factors.is_empty());
        let dim = factors.iter().product();
        StateSpace { dim, field, factors: Some(factors.to_vec()) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn factor_dims(&self) -> Option<&[usize]> {
        self.factors.as_deref()
    }

    fn bipartite_factors(&self) -> Result<(usize, usize), StateError> {
        match self.factors.as_deref() {
            Some([a, b]) => Ok((*a, *b)),
            _ => Err(StateError::NoFactors),
        }
    }

    pub fn same_as(&self, other: &StateSpace) -> Result<(), StateError> {
        if self.dim == other.dim && self.field == other.field {
            Ok(())
        } else {
            Err(StateError::SpaceMismatch(format!(
                "dim {} over {} vs dim {} over {}",
                self.dim, self.field, other.dim, other.field
            )))
        }
    }

    /// The same space with the variance-free metadata but no factor split.
    pub fn flat(&self) -> StateSpace {
        StateSpace { dim: self.dim, field: self.field, factors: None }
    }
}

/// A ket (primal) or bra (dual): coordinates in a state space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vector {
    coords: Vec<u64>,
    space: StateSpace,
    variance: Variance,
}

impl Vector {
    pub fn ket(coords: &[u64], space: &StateSpace) -> Result<Vector, StateError> {
        Self::new(coords, space, Variance::Primal)
    }

    pub fn bra(coords: &[u64], space: &StateSpace) -> Result<Vector, StateError> {
        Self::new(coords, space, Variance::Dual)
    }

    pub fn new(coords: &[u64], space: &StateSpace, variance: Variance) -> Result<Vector, StateError> {
        if coords.len() != space.dim {
            return Err(StateError::SpaceMismatch(format!(
                "{} coordinates in a {}-dimensional space",
                coords.len(),
                space.dim
            )));
        }
        let p = space.field.modulus();
        Ok(Vector { coords: coords.iter().map(|&v| v % p).collect(), space: space.clone(), variance })
    }

    /// Standard basis vector `|i>` (or `<i|`).
    pub fn basis(i: usize, space: &StateSpace, variance: Variance) -> Vector {
        let mut coords = vec![0u64; space.dim];
        coords[i] = 1;
        Vector { coords, space: space.clone(), variance }
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&v| v == 0)
    }

    /// Pairing `<bra|ket>`, a field residue.
    pub fn pair(&self, ket: &Vector) -> Result<u64, StateError> {
        if self.variance != Variance::Dual || ket.variance != Variance::Primal {
            return Err(StateError::VarianceMismatch {
                expected: Variance::Dual,
                got: self.variance,
            });
        }
        self.space.same_as(&ket.space)?;
        let p = self.space.field.modulus();
        Ok(self
            .coords
            .iter()
            .zip(&ket.coords)
            .fold(0u64, |acc, (&a, &b)| (acc + a * b) % p))
    }

    /// Tensor product; the result lives in the composite space with this
    /// vector's factor as the major index.
    pub fn tensor(&self, rhs: &Vector) -> Result<Vector, StateError> {
        self.space.field.same_as(&rhs.space.field).map_err(LinalgError::from)?;
        if self.variance != rhs.variance {
            return Err(StateError::VarianceMismatch { expected: self.variance, got: rhs.variance });
        }
        let p = self.space.field.modulus();
        let mut coords = Vec::with_capacity(self.coords.len() * rhs.coords.len());
        for &a in &self.coords {
            for &b in &rhs.coords {
                coords.push(a * b % p);
            }
        }
        let space = StateSpace::composite(&[self.space.dim, rhs.space.dim], self.space.field);
        Ok(Vector { coords, space, variance: self.variance })
    }

    /// Projective canonical form: first nonzero coordinate scaled to 1.
    pub fn projective(&self) -> Vector {
        let Some(first) = self.coords.iter().find(|&&v| v != 0) else {
            return self.clone();
        };
        let inv = self.space.field.scalar(*first as i64).inv().expect("nonzero").value();
        let p = self.space.field.modulus();
        let coords = self.coords.iter().map(|&v| v * inv % p).collect();
        Vector { coords, space: self.space.clone(), variance: self.variance }
    }

    pub fn add(&self, rhs: &Vector) -> Result<Vector, StateError> {
        self.space.same_as(&rhs.space)?;
        let p = self.space.field.modulus();
        let coords = self.coords.iter().zip(&rhs.coords).map(|(&a, &b)| (a + b) % p).collect();
        Ok(Vector { coords, space: self.space.clone(), variance: self.variance })
    }

    pub fn scale(&self, c: u64) -> Vector {
        let p = self.space.field.modulus();
        let coords = self.coords.iter().map(|&v| v * c % p).collect();
        Vector { coords, space: self.space.clone(), variance: self.variance }
    }
}

/// A subspace in canonical form: its basis matrix is the RREF of any spanning
/// set, with zero rows dropped. Primal subspaces are mixed states; dual
/// subspaces are generalized effects.
///
/// Equality compares the ambient dimension, field, variance and canonical
/// basis; the factor split of the ambient space is bookkeeping and ignored.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Subspace {
    space: StateSpace,
    variance: Variance,
    basis: Matrix,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Subspace) -> bool {
        self.space.dim == other.space.dim
            && self.space.field == other.space.field
            && self.variance == other.variance
            && self.basis == other.basis
    }
}

impl Eq for Subspace {}

impl Subspace {
    /// Span of a set of vectors; the empty set gives the null subspace.
    pub fn span(vectors: &[Vector], space: &StateSpace) -> Result<Subspace, StateError> {
        let mut variance = Variance::Primal;
        let mut rows = Vec::with_capacity(vectors.len());
        for (i, v) in vectors.iter().enumerate() {
            space.same_as(&v.space)?;
            if i == 0 {
                variance = v.variance;
            } else if v.variance != variance {
                return Err(StateError::VarianceMismatch { expected: variance, got: v.variance });
            }
            rows.push(v.coords.clone());
        }
        let m = Matrix::from_rows(&rows, space.dim, space.field)?;
        Ok(Subspace {
            space: space.clone(),
            variance,
            basis: m.rref().matrix.drop_zero_rows(),
        })
    }

    pub fn span_with_variance(
        vectors: &[Vector],
        space: &StateSpace,
        variance: Variance,
    ) -> Result<Subspace, StateError> {
        if let Some(v) = vectors.first() {
            if v.variance != variance {
                return Err(StateError::VarianceMismatch { expected: variance, got: v.variance });
            }
        }
        let mut s = Subspace::span(vectors, space)?;
        s.variance = variance;
        Ok(s)
    }

    /// Canonicalize a raw basis matrix (rows are spanning vectors).
    pub fn from_basis(basis: Matrix, space: &StateSpace, variance: Variance) -> Result<Subspace, StateError> {
        if basis.col_count() != space.dim {
            return Err(StateError::SpaceMismatch(format!(
                "{}-column basis in a {}-dimensional space",
                basis.col_count(),
                space.dim
            )));
        }
        space.field.same_as(&basis.field()).map_err(LinalgError::from)?;
        Ok(Subspace {
            space: space.clone(),
            variance,
            basis: basis.rref().matrix.drop_zero_rows(),
        })
    }

    pub fn null(space: &StateSpace, variance: Variance) -> Subspace {
        Subspace {
            space: space.clone(),
            variance,
            basis: Matrix::from_rows(&[], space.dim, space.field).expect("empty basis"),
        }
    }

    pub fn full(space: &StateSpace, variance: Variance) -> Subspace {
        Subspace {
            space: space.clone(),
            variance,
            basis: Matrix::identity(space.dim, space.field),
        }
    }

    /// Span of a single vector.
    pub fn line(v: &Vector) -> Result<Subspace, StateError> {
        Subspace::span(std::slice::from_ref(v), &v.space.clone())
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        (0..self.basis.row_count())
            .map(|r| Vector {
                coords: self.basis.row(r),
                space: self.space.clone(),
                variance: self.variance,
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.basis.row_count()
    }

    pub fn is_null(&self) -> bool {
        self.basis.row_count() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.space.dim
    }

    pub fn contains(&self, v: &Vector) -> Result<bool, StateError> {
        self.space.same_as(&v.space)?;
        if v.is_zero() {
            return Ok(true);
        }
        let t = self.basis.transpose();
        Ok(t.solve(&v.coords)?.is_some())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool, StateError> {
        self.check_compatible(other)?;
        for v in other.basis_vectors() {
            if !self.contains(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn check_compatible(&self, other: &Subspace) -> Result<(), StateError> {
        self.space.same_as(&other.space)?;
        if self.variance != other.variance {
            return Err(StateError::VarianceMismatch { expected: self.variance, got: other.variance });
        }
        Ok(())
    }

    /// Lattice join: span of the union.
    pub fn join(&self, other: &Subspace) -> Result<Subspace, StateError> {
        self.check_compatible(other)?;
        let mut rows = self.basis.rows_raw();
        rows.extend(other.basis.rows_raw());
        let m = Matrix::from_rows(&rows, self.space.dim, self.space.field)?;
        Subspace::from_basis(m, &self.space, self.variance)
    }

    /// Lattice meet: intersection, computed through annihilators.
    pub fn meet(&self, other: &Subspace) -> Result<Subspace, StateError> {
        self.check_compatible(other)?;
        // A ∧ B = (A° ∨ B°)°
        let a = self.annihilator();
        let b = other.annihilator();
        Ok(a.join(&b)?.annihilator())
    }

    /// The annihilator: all opposite-variance vectors pairing to zero with
    /// everything here. `dim(s) + dim(s°) = dim(space)`.
    pub fn annihilator(&self) -> Subspace {
        let kernel = self.basis.kernel();
        Subspace {
            space: self.space.clone(),
            variance: self.variance.opposite(),
            basis: kernel,
        }
    }
}

/// The possibility rule for generalized effects: `E(M)` is possible iff some
/// pair of vectors from the two subspaces has a nonzero pairing.
pub fn is_possible(effect: &Subspace, state: &Subspace) -> Result<bool, StateError> {
    if effect.variance != Variance::Dual {
        return Err(StateError::VarianceMismatch { expected: Variance::Dual, got: effect.variance });
    }
    if state.variance != Variance::Primal {
        return Err(StateError::VarianceMismatch { expected: Variance::Primal, got: state.variance });
    }
    effect.space.same_as(&state.space)?;
    let product = effect.basis.mul(&state.basis.transpose())?;
    Ok(!product.is_zero())
}

/// An ordered list of effect subspaces. Valid when their join is the full
/// dual space, so some outcome is always possible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measurement {
    space: StateSpace,
    effects: Vec<Subspace>,
}

impl Measurement {
    pub fn new(effects: Vec<Subspace>, space: &StateSpace) -> Result<Measurement, StateError> {
        for e in &effects {
            space.same_as(&e.space)?;
            if e.variance != Variance::Dual {
                return Err(StateError::VarianceMismatch {
                    expected: Variance::Dual,
                    got: e.variance,
                });
            }
        }
        Ok(Measurement { space: space.clone(), effects })
    }

    /// A basic measurement from dual basis vectors, one effect per outcome.
    pub fn basic(bras: &[Vector], space: &StateSpace) -> Result<Measurement, StateError> {
        let effects = bras
            .iter()
            .map(|b| Subspace::span(std::slice::from_ref(b), space))
            .collect::<Result<Vec<_>, _>>()?;
        Measurement::new(effects, space)
    }

    pub fn effects(&self) -> &[Subspace] {
        &self.effects
    }

    pub fn outcomes(&self) -> usize {
        self.effects.len()
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    /// The normalization condition: the effects must jointly span V*.
    pub fn is_valid(&self) -> bool {
        let mut acc = Subspace::null(&self.space, Variance::Dual);
        for e in &self.effects {
            acc = acc.join(e).expect("effects share the space");
        }
        acc.is_full()
    }
}

/// Contract a dual vector on one factor of a bipartite composite ket.
///
/// Conditioning on factor 0 of `|psi> = sum psi_ab |a,b>` with `<eta|` gives
/// the vector with coordinates `sum_a eta_a psi_ab`; factor 1 contracts the
/// minor index instead.
pub fn contract_factor(psi: &Vector, eta: &Vector, factor: usize) -> Result<Vector, StateError> {
    let (d0, d1) = psi.space.bipartite_factors()?;
    if eta.variance != Variance::Dual {
        return Err(StateError::VarianceMismatch { expected: Variance::Dual, got: eta.variance });
    }
    let (contracted, kept) = if factor == 0 { (d0, d1) } else { (d1, d0) };
    if eta.coords.len() != contracted {
        return Err(StateError::SpaceMismatch(format!(
            "effect of dimension {} on a factor of dimension {}",
            eta.coords.len(),
            contracted
        )));
    }
    let p = psi.space.field.modulus();
    let mut out = vec![0u64; kept];
    for a in 0..d0 {
        for b in 0..d1 {
            let amp = psi.coords[a * d1 + b];
            if amp == 0 {
                continue;
            }
            if factor == 0 {
                out[b] = (out[b] + eta.coords[a] * amp) % p;
            } else {
                out[a] = (out[a] + eta.coords[b] * amp) % p;
            }
        }
    }
    let space = StateSpace::new(kept, psi.space.field);
    Vector::ket(&out, &space)
}

/// Conditional state of the remaining factor given a generalized effect on
/// `factor`: the span of all partial pairings of spanning sets. A null result
/// means the effect is impossible for this joint state.
pub fn conditional_state(
    joint: &Subspace,
    effect: &Subspace,
    factor: usize,
) -> Result<Subspace, StateError> {
    if joint.variance != Variance::Primal {
        return Err(StateError::VarianceMismatch { expected: Variance::Primal, got: joint.variance });
    }
    if effect.variance != Variance::Dual {
        return Err(StateError::VarianceMismatch { expected: Variance::Dual, got: effect.variance });
    }
    let (d0, d1) = joint.space.bipartite_factors()?;
    let kept = if factor == 0 { d1 } else { d0 };
    let mut vectors = Vec::new();
    for mu in joint.basis_vectors() {
        for eta in effect.basis_vectors() {
            vectors.push(contract_factor(&mu, &eta, factor)?);
        }
    }
    let space = StateSpace::new(kept, joint.space.field);
    let _ = (d0, d1);
    Subspace::span_with_variance(&vectors, &space, Variance::Primal)
}

/// Reduction (the MQT partial trace): condition on the full dual space of the
/// traced factor. Never null for a non-null input.
pub fn reduce(joint: &Subspace, traced_factor: usize) -> Result<Subspace, StateError> {
    let (d0, d1) = joint.space.bipartite_factors()?;
    let traced_dim = if traced_factor == 0 { d0 } else { d1 };
    let traced_space = StateSpace::new(traced_dim, joint.space.field);
    let full = Subspace::full(&traced_space, Variance::Dual);
    conditional_state(joint, &full, traced_factor)
}

/// A Schmidt decomposition of a bipartite pure state: invertible bases for
/// the two factors whose first `schmidt_number` rows satisfy
/// `psi = sum_k left_k (x) right_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchmidtDecomposition {
    pub schmidt_number: usize,
    /// Square invertible matrix on the left factor; rows are basis kets.
    pub left_basis: Matrix,
    /// Square invertible matrix on the right factor; rows are basis kets.
    pub right_basis: Matrix,
}

/// Compute a Schmidt decomposition. The Schmidt number equals the dimension
/// of either reduction.
pub fn schmidt(psi: &Vector) -> Result<SchmidtDecomposition, StateError> {
    if psi.is_zero() {
        return Err(StateError::ZeroState);
    }
    let (d0, d1) = psi.space.bipartite_factors()?;
    let field = psi.space.field;
    // Reshape psi into the d0 x d1 coefficient matrix.
    let coeff = Matrix::from_rows(
        &(0..d0).map(|a| psi.coords[a * d1..(a + 1) * d1].to_vec()).collect::<Vec<_>>(),
        d1,
        field,
    )?;
    // Column space = left reduction; row space = right reduction.
    let col_rref = coeff.transpose().rref();
    let s = col_rref.rank;
    let left_rows: Vec<Vec<u64>> = (0..s).map(|r| col_rref.matrix.row(r)).collect();
    let left = Matrix::from_rows(&left_rows, d0, field)?;
    // Solve coeff = left^T * right for the right rows: for each column b of
    // coeff, express it in the left basis. Equivalently right = pinv; we use
    // the fact that left rows are independent so left^T has full column rank.
    let lt = left.transpose(); // d0 x s
    let mut right_rows = vec![vec![0u64; d1]; s];
    for b in 0..d1 {
        let col: Vec<u64> = (0..d0).map(|a| coeff.get_raw(a, b)).collect();
        let x = lt.solve(&col)?.expect("columns lie in the span of the left basis");
        for (k, &v) in x.iter().enumerate() {
            right_rows[k][b] = v;
        }
    }
    let right = Matrix::from_rows(&right_rows, d1, field)?;
    debug_assert_eq!(right.rank(), s);
    let left_basis = left.extend_to_basis()?;
    let right_basis = right.extend_to_basis()?;
    Ok(SchmidtDecomposition { schmidt_number: s, left_basis, right_basis })
}

/// Assemble `sum_{k<s} left_k (x) right_k` from Schmidt bases; the inverse
/// check for [`schmidt`].
pub fn schmidt_reassemble(
    d: &SchmidtDecomposition,
    field: FieldSpec,
) -> Result<Vector, StateError> {
    let d0 = d.left_basis.col_count();
    let d1 = d.right_basis.col_count();
    let space = StateSpace::composite(&[d0, d1], field);
    let p = field.modulus();
    let mut coords = vec![0u64; d0 * d1];
    for k in 0..d.schmidt_number {
        for a in 0..d0 {
            for b in 0..d1 {
                let v = d.left_basis.get_raw(k, a) * d.right_basis.get_raw(k, b) % p;
                coords[a * d1 + b] = (coords[a * d1 + b] + v) % p;
            }
        }
    }
    Vector::ket(&coords, &space)
}

/// Purification of a mixed state: with basis `{|m_i>}` of `m`, the state
/// `sum_i |i> (x) |m_i>` on R (x) Q, where `dim R = dim m`.
pub fn purify(m: &Subspace) -> Result<Vector, StateError> {
    if m.is_null() {
        return Err(StateError::NullState);
    }
    if m.variance != Variance::Primal {
        return Err(StateError::VarianceMismatch { expected: Variance::Primal, got: m.variance });
    }
    let s = m.dim();
    let dq = m.space.dim;
    let space = StateSpace::composite(&[s, dq], m.space.field);
    let mut coords = vec![0u64; s * dq];
    for i in 0..s {
        let row = m.basis.row(i);
        coords[i * dq..(i + 1) * dq].copy_from_slice(&row);
    }
    Vector::ket(&coords, &space)
}

/// An invertible matrix `T` on the left factor with `(T (x) Id) psi1` spanning
/// the same line as `psi2`; `None` when the right reductions differ.
pub fn connect_purifications(psi1: &Vector, psi2: &Vector) -> Result<Option<Matrix>, StateError> {
    psi1.space.same_as(&psi2.space)?;
    let (d0, d1) = psi1.space.bipartite_factors()?;
    let red1 = reduce(&Subspace::line(psi1)?, 0)?;
    let red2 = reduce(&Subspace::line(psi2)?, 0)?;
    if red1 != red2 {
        return Ok(None);
    }
    let field = psi1.space.field;
    let s1 = schmidt(psi1)?;
    let s2 = schmidt(psi2)?;
    let s = s1.schmidt_number;
    debug_assert_eq!(s, s2.schmidt_number);
    // Express the second right basis in terms of the first: r2 = C r1.
    let r1 = Matrix::from_rows(
        &(0..s).map(|k| s1.right_basis.row(k)).collect::<Vec<_>>(),
        d1,
        field,
    )?;
    let mut c_rows = vec![vec![0u64; s]; s];
    for k in 0..s {
        let target = s2.right_basis.row(k);
        let x = r1.transpose().solve(&target)?.ok_or(StateError::SpanMismatch)?;
        c_rows[k] = x;
    }
    let c = Matrix::from_rows(&c_rows, s, field)?;
    // psi2 = sum_k l2_k (x) (C r1)_k = sum_j (C^T l2)_j (x) r1_j, so T must
    // map the first s left-basis rows of psi1 to the rows of C^T * l2(first s).
    let l1 = Matrix::from_rows(
        &(0..s).map(|k| s1.left_basis.row(k)).collect::<Vec<_>>(),
        d0,
        field,
    )?;
    let l2 = Matrix::from_rows(
        &(0..s).map(|k| s2.left_basis.row(k)).collect::<Vec<_>>(),
        d0,
        field,
    )?;
    let targets = c.transpose().mul(&l2)?; // s x d0, rows are T(l1_k)
    // Extend both row families compatibly and read T off as a basis change.
    let dom = l1.extend_to_basis()?;
    let mut img_rows = targets.rows_raw();
    for r in s..d0 {
        img_rows.push(dom.row(r));
    }
    let img0 = Matrix::from_rows(&img_rows[..s].to_vec(), d0, field)?;
    let img = complete_images(&img0, &img_rows, d0, field)?;
    // T maps dom rows to img rows: T = img^T * (dom^T)^{-1} acting on columns.
    let t = img
        .transpose()
        .mul(&dom.transpose().invert()?.expect("extended basis is invertible"))?;
    Ok(Some(t))
}

/// Complete a set of image rows to an invertible matrix, preferring the
/// suggested rows and falling back to greedy standard vectors.
fn complete_images(
    start: &Matrix,
    suggestions: &[Vec<u64>],
    n: usize,
    field: FieldSpec,
) -> Result<Matrix, StateError> {
    let mut rows = start.rows_raw();
    for sug in suggestions.iter().skip(rows.len()) {
        if rows.len() == n {
            break;
        }
        let mut trial = rows.clone();
        trial.push(sug.clone());
        if Matrix::from_rows(&trial, n, field)?.rank() == trial.len() {
            rows.push(sug.clone());
        }
    }
    let m = Matrix::from_rows(&rows, n, field)?;
    Ok(m.extend_to_basis()?)
}

/// Apply `T (x) Id` to a bipartite ket.
pub fn apply_left(t: &Matrix, psi: &Vector) -> Result<Vector, StateError> {
    let (d0, d1) = psi.space.bipartite_factors()?;
    let joint = t.kron(&Matrix::identity(d1, psi.space.field))?;
    let coords = joint.apply(&psi.coords)?;
    let _ = d0;
    Vector::ket(&coords, &psi.space.clone())
}

/// The mixture-connection (HJW-style) matrix: invertible `T` with
/// `set2[l] = sum_k T[l][k] set1[k]`, for two equal-size spanning sets of the
/// same subspace.
pub fn connect_mixtures(set1: &[Vector], set2: &[Vector]) -> Result<Matrix, StateError> {
    if set1.len() != set2.len() || set1.is_empty() {
        return Err(StateError::Cardinality { expected: set1.len(), got: set2.len() });
    }
    let space = set1[0].space.clone();
    let span1 = Subspace::span(set1, &space)?;
    let span2 = Subspace::span(set2, &space)?;
    if span1 != span2 {
        return Err(StateError::SpanMismatch);
    }
    if span1.dim() != set1.len() {
        return Err(StateError::Cardinality { expected: span1.dim(), got: set1.len() });
    }
    let field = space.field;
    let s1 = Matrix::from_rows(
        &set1.iter().map(|v| v.coords.clone()).collect::<Vec<_>>(),
        space.dim,
        field,
    )?;
    let mut t_rows = Vec::with_capacity(set2.len());
    for v in set2 {
        let x = s1.transpose().solve(&v.coords)?.ok_or(StateError::SpanMismatch)?;
        t_rows.push(x);
    }
    let t = Matrix::from_rows(&t_rows, set1.len(), field)?;
    debug_assert!(t.invert()?.is_some());
    Ok(t)
}

/// Enumeration budget guard: `p^dim` candidates at most.
pub const DEFAULT_ENUM_BUDGET: u64 = 1 << 24;

fn check_budget(space: &StateSpace, budget: u64) -> Result<(), StateError> {
    let p = space.field.modulus();
    let mut total = 1u64;
    for _ in 0..space.dim {
        total = total.saturating_mul(p);
        if total > budget {
            return Err(StateError::BudgetExceeded(total));
        }
    }
    Ok(())
}

/// One canonical representative per projective point (first nonzero
/// coordinate = 1), in lexicographic order of raw coordinates.
pub fn projective_points(
    space: &StateSpace,
    variance: Variance,
    budget: u64,
) -> Result<Vec<Vector>, StateError> {
    check_budget(space, budget)?;
    let p = space.field.modulus();
    let dim = space.dim;
    let mut out = Vec::new();
    let mut coords = vec![0u64; dim];
    loop {
        // advance odometer
        let mut i = dim;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            coords[i] += 1;
            if coords[i] < p {
                break;
            }
            coords[i] = 0;
        }
        if coords.iter().find(|&&v| v != 0) == Some(&1) {
            out.push(Vector::new(&coords, space, variance)?);
        }
    }
}

/// All subspaces of the space, found by closing the null subspace under joins
/// with projective lines. Deterministic order: by dimension, then by basis.
pub fn all_subspaces(
    space: &StateSpace,
    variance: Variance,
    budget: u64,
) -> Result<Vec<Subspace>, StateError> {
    let points = projective_points(space, variance, budget)?;
    let lines: Vec<Subspace> = points
        .iter()
        .map(|v| Subspace::span(std::slice::from_ref(v), space))
        .collect::<Result<Vec<_>, _>>()?;
    let mut seen = vec![Subspace::null(space, variance)];
    let mut frontier = seen.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for l in &lines {
                let j = s.join(l)?;
                if !seen.contains(&j) && !next.contains(&j) {
                    next.push(j);
                }
            }
        }
        seen.extend(next.iter().cloned());
        frontier = next;
    }
    seen.sort_by(|a, b| {
        a.dim()
            .cmp(&b.dim())
            .then_with(|| a.basis.rows_raw().cmp(&b.basis.rows_raw()))
    });
    Ok(seen)
}

/// All ordered bases assembled from projective representatives, lexicographic
/// in the point order.
pub fn ordered_bases(
    space: &StateSpace,
    variance: Variance,
    budget: u64,
) -> Result<Vec<Vec<Vector>>, StateError> {
    let points = projective_points(space, variance, budget)?;
    let mut out = Vec::new();
    let mut partial: Vec<Vector> = Vec::new();
    fn rec(
        points: &[Vector],
        space: &StateSpace,
        partial: &mut Vec<Vector>,
        out: &mut Vec<Vec<Vector>>,
    ) {
        if partial.len() == space.dim() {
            out.push(partial.clone());
            return;
        }
        for pt in points {
            if partial.iter().any(|q| q == pt) {
                continue;
            }
            let mut trial = partial.clone();
            trial.push(pt.clone());
            let m = Matrix::from_rows(
                &trial.iter().map(|v| v.coords.clone()).collect::<Vec<_>>(),
                space.dim(),
                space.field(),
            )
            .expect("conforming rows");
            if m.rank() == trial.len() {
                partial.push(pt.clone());
                rec(points, space, partial, out);
                partial.pop();
            }
        }
    }
    rec(&points, space, &mut partial, &mut out);
    Ok(out)
}

/// The Z_p mobit toolkit: the named dual vectors and the three basic
/// measurements X, Y, Z of the two-dimensional system, plus the singlet.
pub mod mobit {
    use super::*;

    /// Dual vectors `<a| = <+z|`, `<b| = <-z|`, `<c| = <+x|` with the pairing
    /// table `<a|0>=1, <b|1>=1, <c|0>=<c|1>=1`.
    pub fn dual_vectors(field: FieldSpec) -> (Vector, Vector, Vector) {
        let space = StateSpace::new(2, field);
        let a = Vector::bra(&[1, 0], &space).unwrap();
        let b = Vector::bra(&[0, 1], &space).unwrap();
        let c = Vector::bra(&[1, 1], &space).unwrap();
        (a, b, c)
    }

    /// The three basic mobit measurements, outcomes ordered (+, -):
    /// `X = {c, a}`, `Y = {b, c}`, `Z = {a, b}`.
    pub fn xyz_measurements(field: FieldSpec) -> [Measurement; 3] {
        let space = StateSpace::new(2, field);
        let (a, b, c) = dual_vectors(field);
        [
            Measurement::basic(&[c.clone(), a.clone()], &space).unwrap(),
            Measurement::basic(&[b.clone(), c], &space).unwrap(),
            Measurement::basic(&[a, b], &space).unwrap(),
        ]
    }

    /// The modal singlet `|S> = |0,1> - |1,0>` on a pair of mobits.
    pub fn singlet(field: FieldSpec) -> Vector {
        let space = StateSpace::composite(&[2, 2], field);
        let p = field.modulus();
        Vector::ket(&[0, 1, p - 1, 0], &space).unwrap()
    }
}
