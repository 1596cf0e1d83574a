//! Generalized MQT dynamics.
//!
//! A channel is presented in one of three equivalent forms:
//!
//! - **Kraus form** ([`TypeLMap`]): a list of matrices `A_k`; a subspace `M`
//!   evolves to the join of the images `A_k M`.
//! - **Dilation form** ([`Dilation`]): an invertible joint evolution `T` on
//!   system (x) environment with the environment initialized to `|0>`, followed
//!   by a reduction over the environment.
//! - **Extension form** ([`JointMap`]): a subspace map on an ancilla (x) system
//!   composite that commutes with conditioning on the ancilla.
//!
//! [`dilate`], [`extend_to_joint`] and [`kraus_from_extension`] convert
//! between the forms; [`verify_type_e`] checks the commuting-diagram property
//! of the canonical extension instance by instance.
//!
//! Maps respecting joins ("Type M" maps) are determined by their action on
//! one-dimensional subspaces, so channel equality is decided by comparing
//! actions on projective points ([`maps_agree`]).

use crate::field::FieldSpec;
use crate::linalg::Matrix;
use crate::states::{
    all_subspaces, conditional_state, projective_points, reduce, StateError, StateSpace, Subspace,
    Variance, Vector,
};

/// A Kraus-style presentation of a channel: finitely many matrices applied
/// in superposition-of-cases. `unconditional` records whether the common
/// kernel of the Kraus terms is trivial, the normalization condition
/// guaranteeing every non-null state evolves to a non-null state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeLMap {
    kraus: Vec<Matrix>,
    unconditional: bool,
}

impl TypeLMap {
    pub fn new(kraus: Vec<Matrix>) -> Result<TypeLMap, StateError> {
        assert!(!kraus.is_empty(), "a channel needs at least one Kraus term");
        let first = &kraus[0];
        for a in &kraus[1..] {
            if a.row_count() != first.row_count() || a.col_count() != first.col_count() {
                return Err(StateError::SpaceMismatch(format!(
                    "Kraus terms of shape {}x{} and {}x{}",
                    first.row_count(),
                    first.col_count(),
                    a.row_count(),
                    a.col_count()
                )));
            }
            first.field().same_as(&a.field()).map_err(crate::linalg::LinalgError::from)?;
        }
        let unconditional = check_unconditional(&kraus)?;
        Ok(TypeLMap { kraus, unconditional })
    }

    pub fn kraus(&self) -> &[Matrix] {
        &self.kraus
    }

    pub fn is_unconditional(&self) -> bool {
        self.unconditional
    }

    pub fn field(&self) -> FieldSpec {
        self.kraus[0].field()
    }

    /// Input dimension (columns of each Kraus term).
    pub fn input_dim(&self) -> usize {
        self.kraus[0].col_count()
    }

    /// Output dimension (rows of each Kraus term).
    pub fn output_dim(&self) -> usize {
        self.kraus[0].row_count()
    }

    pub fn identity(dim: usize, field: FieldSpec) -> TypeLMap {
        TypeLMap { kraus: vec![Matrix::identity(dim, field)], unconditional: true }
    }
}

/// True iff the common kernel of the Kraus terms is the null subspace, i.e.
/// the channel never annihilates a state.
pub fn check_unconditional(kraus: &[Matrix]) -> Result<bool, StateError> {
    let cols = kraus[0].col_count();
    let field = kraus[0].field();
    let mut rows = Vec::new();
    for a in kraus {
        rows.extend(a.rows_raw());
    }
    let stacked = Matrix::from_rows(&rows, cols, field)?;
    Ok(stacked.rank() == cols)
}

/// Evolve a mixed state: the join over `k` of the image subspaces `A_k M`.
/// Null in, null out.
pub fn apply_type_l(map: &TypeLMap, m: &Subspace) -> Result<Subspace, StateError> {
    if m.variance() != Variance::Primal {
        return Err(StateError::VarianceMismatch {
            expected: Variance::Primal,
            got: m.variance(),
        });
    }
    if m.space().dim() != map.input_dim() {
        return Err(StateError::SpaceMismatch(format!(
            "channel input dimension {} applied to a {}-dimensional state",
            map.input_dim(),
            m.space().dim()
        )));
    }
    let out_space = StateSpace::new(map.output_dim(), map.field());
    let mut images = Vec::new();
    for a in &map.kraus {
        for v in m.basis_vectors() {
            let w = a.apply(v.coords())?;
            images.push(Vector::ket(&w, &out_space)?);
        }
    }
    Subspace::span_with_variance(&images, &out_space, Variance::Primal)
}

/// An invertible dilation of a channel: joint evolution `T` on the composite
/// system (x) environment, with the environment prepared in `|0>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dilation {
    pub env_dim: usize,
    pub env_state: Vector,
    pub joint: Matrix,
    sys_dim: usize,
}

impl Dilation {
    pub fn sys_dim(&self) -> usize {
        self.sys_dim
    }
}

/// Dilate an unconditional channel to an invertible joint evolution:
/// `T |j, 0> = sum_k (A_k |j>) (x) |k>` on the defined columns, completed to
/// an invertible matrix. The environment dimension is the number of Kraus
/// terms and the Kraus index doubles as the environment basis index.
pub fn dilate(map: &TypeLMap) -> Result<Dilation, StateError> {
    if !map.unconditional {
        return Err(StateError::SpaceMismatch(
            "only unconditional channels have dilations".into(),
        ));
    }
    let d = map.input_dim();
    assert_eq!(d, map.output_dim(), "dilation requires a square channel");
    let k_dim = map.kraus.len();
    let n = d * k_dim;
    let field = map.field();
    // Defined images: column |j,0> maps to the vector with entry A_k[s][j] at
    // joint index s*K + k.
    let mut img_rows = Vec::with_capacity(d);
    let mut dom_rows = Vec::with_capacity(d);
    for j in 0..d {
        let mut img = vec![0u64; n];
        for (k, a) in map.kraus.iter().enumerate() {
            for s in 0..d {
                img[s * k_dim + k] = a.get_raw(s, j);
            }
        }
        img_rows.push(img);
        let mut dom = vec![0u64; n];
        dom[j * k_dim] = 1;
        dom_rows.push(dom);
    }
    let img = Matrix::from_rows(&img_rows, n, field)?;
    debug_assert_eq!(img.rank(), d, "normalization makes the defined columns independent");
    let dom_basis = Matrix::from_rows(&dom_rows, n, field)?.extend_to_basis()?;
    let img_basis = img.extend_to_basis()?;
    let joint = img_basis
        .transpose()
        .mul(&dom_basis.transpose().invert()?.expect("extended basis is invertible"))?;
    let env_space = StateSpace::new(k_dim, field);
    Ok(Dilation {
        env_dim: k_dim,
        env_state: Vector::basis(0, &env_space, Variance::Primal),
        joint,
        sys_dim: d,
    })
}

/// Run a dilation as a channel: tensor with the environment state, evolve by
/// `T`, reduce over the environment.
pub fn apply_dilation(d: &Dilation, m: &Subspace) -> Result<Subspace, StateError> {
    let field = d.joint.field();
    let joint_space = StateSpace::composite(&[d.sys_dim, d.env_dim], field);
    let mut evolved = Vec::new();
    for v in m.basis_vectors() {
        let joint_vec = Vector::ket(v.coords(), &StateSpace::new(d.sys_dim, field))?
            .tensor(&d.env_state)?;
        let moved = d.joint.apply(joint_vec.coords())?;
        evolved.push(Vector::ket(&moved, &joint_space)?);
    }
    let joint_sub = Subspace::span_with_variance(&evolved, &joint_space, Variance::Primal)?;
    reduce(&joint_sub, 1)
}

/// The canonical extension of a dilation to a subspace map on an ancilla (x)
/// system composite: adjoin an untouched `r_dim`-dimensional factor, evolve
/// with `Id (x) T`, reduce over the environment.
#[derive(Debug, Clone)]
pub struct JointMap {
    r_dim: usize,
    s_dim: usize,
    env_dim: usize,
    extended: Matrix,
    env_state: Vector,
}

impl JointMap {
    pub fn space(&self) -> StateSpace {
        StateSpace::composite(&[self.r_dim, self.s_dim], self.extended.field())
    }

    /// Apply to a subspace of the ancilla (x) system composite.
    pub fn apply(&self, m: &Subspace) -> Result<Subspace, StateError> {
        let field = self.extended.field();
        let rs = self.r_dim * self.s_dim;
        if m.space().dim() != rs {
            return Err(StateError::SpaceMismatch(format!(
                "joint map on dimension {} applied to a {}-dimensional state",
                rs,
                m.space().dim()
            )));
        }
        let big = StateSpace::composite(&[rs, self.env_dim], field);
        let mut evolved = Vec::new();
        for v in m.basis_vectors() {
            let with_env = Vector::ket(v.coords(), &StateSpace::new(rs, field))?
                .tensor(&self.env_state)?;
            let moved = self.extended.apply(with_env.coords())?;
            evolved.push(Vector::ket(&moved, &big)?);
        }
        let joint_sub = Subspace::span_with_variance(&evolved, &big, Variance::Primal)?;
        let reduced = reduce(&joint_sub, 1)?;
        // Restore the r (x) s factor split on the output space.
        Subspace::from_basis(
            reduced.basis().clone(),
            &StateSpace::composite(&[self.r_dim, self.s_dim], field),
            Variance::Primal,
        )
    }
}

/// Build the canonical joint extension `G^RS = reduce_E ((Id_R (x) T) (- (x) |0>))`.
pub fn extend_to_joint(d: &Dilation, r_dim: usize) -> Result<JointMap, StateError> {
    let field = d.joint.field();
    let extended = Matrix::identity(r_dim, field).kron(&d.joint)?;
    Ok(JointMap {
        r_dim,
        s_dim: d.sys_dim,
        env_dim: d.env_dim,
        extended,
        env_state: d.env_state.clone(),
    })
}

/// The maximally entangled ket `sum_k |k, k>` on a d (x) d composite.
pub fn maximally_entangled(d: usize, field: FieldSpec) -> Vector {
    let space = StateSpace::composite(&[d, d], field);
    let mut coords = vec![0u64; d * d];
    for k in 0..d {
        coords[k * d + k] = 1;
    }
    Vector::ket(&coords, &space).expect("conforming coordinates")
}

/// Extract a Kraus presentation from any subspace map on a d (x) d composite:
/// push the maximally entangled state through the map and reshape each basis
/// vector of the image, `A[j][k] = m[k*d + j]`.
pub fn kraus_from_extension<F>(joint_map: F, s_dim: usize, field: FieldSpec) -> Result<TypeLMap, StateError>
where
    F: Fn(&Subspace) -> Result<Subspace, StateError>,
{
    let phi = maximally_entangled(s_dim, field);
    let image = joint_map(&Subspace::line(&phi)?)?;
    if image.space().dim() != s_dim * s_dim {
        return Err(StateError::SpaceMismatch(format!(
            "extension image lives in dimension {}, expected {}",
            image.space().dim(),
            s_dim * s_dim
        )));
    }
    let mut kraus = Vec::new();
    for m in image.basis_vectors() {
        let mut rows = vec![vec![0u64; s_dim]; s_dim];
        for j in 0..s_dim {
            for k in 0..s_dim {
                rows[j][k] = m.coords()[k * s_dim + j];
            }
        }
        kraus.push(Matrix::from_rows(&rows, s_dim, field)?);
    }
    TypeLMap::new(kraus)
}

/// Decide channel equality by comparing actions on every projective point.
/// Sound for join-respecting maps, since every subspace is a join of lines.
pub fn maps_agree<F, G>(f: F, g: G, space: &StateSpace, budget: u64) -> Result<bool, StateError>
where
    F: Fn(&Subspace) -> Result<Subspace, StateError>,
    G: Fn(&Subspace) -> Result<Subspace, StateError>,
{
    for pt in projective_points(space, Variance::Primal, budget)? {
        let line = Subspace::line(&pt)?;
        if f(&line)? != g(&line)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Check the commuting diagram `G^S(M / E) = G^RS(M) / E` for arbitrary maps
/// over every joint subspace `M` of the r (x) s composite and every
/// generalized effect `E` on the ancilla factor.
pub fn verify_extension_diagram<F, G>(
    s_map: F,
    joint_map: G,
    r_dim: usize,
    s_dim: usize,
    field: FieldSpec,
    budget: u64,
) -> Result<bool, StateError>
where
    F: Fn(&Subspace) -> Result<Subspace, StateError>,
    G: Fn(&Subspace) -> Result<Subspace, StateError>,
{
    let joint_space = StateSpace::composite(&[r_dim, s_dim], field);
    let r_space = StateSpace::new(r_dim, field);
    let effects = all_subspaces(&r_space, Variance::Dual, budget)?;
    for m in all_subspaces(&joint_space, Variance::Primal, budget)? {
        let image = joint_map(&m)?;
        for e in &effects {
            let lhs = s_map(&conditional_state(&m, e, 0)?)?;
            let rhs = conditional_state(&image, e, 0)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Check that the canonical dilation-induced extension of an unconditional
/// channel commutes with conditioning on an `r_dim`-dimensional ancilla.
pub fn verify_type_e(s_map: &TypeLMap, r_dim: usize, budget: u64) -> Result<bool, StateError> {
    if !s_map.unconditional {
        return Err(StateError::SpaceMismatch(
            "Type E verification is defined for unconditional channels".into(),
        ));
    }
    let joint = extend_to_joint(&dilate(s_map)?, r_dim)?;
    verify_extension_diagram(
        |m| apply_type_l(s_map, m),
        |m| joint.apply(m),
        r_dim,
        s_map.input_dim(),
        s_map.field(),
        budget,
    )
}
