//! Modal quantum theory (MQT) over prime finite fields, with exact arithmetic
//! throughout.
//!
//! MQT is a quantum-like theory whose state space is a vector space over a
//! finite field and which predicts only which measurement outcomes are
//! *possible*, not their probabilities. This crate implements the theory
//! end-to-end:
//!
//! - [`field`] / [`linalg`]: Z_p scalars and dense matrix algebra;
//! - [`states`]: pure and mixed states (subspaces), effects, annihilators,
//!   conditional states, reductions, Schmidt decompositions, purifications;
//! - [`channels`]: generalized dynamics (Kraus-style maps, dilations to
//!   invertible joint evolution, extension/extraction round trips);
//! - [`tables`]: bipartite possibility tables, the modal no-signalling
//!   principle, and the singlet / PR box / no-resolution fixture tables;
//! - [`resolve`]: exact rational feasibility for weak and strong probabilistic
//!   resolutions, the Hall-matching constructive resolution, and hierarchy
//!   classification (LHV / SPR / WPR / NSP / MQT);
//! - [`hvgames`]: hidden-variable refutations and the pseudo-telepathy game.
//!
//! Everything is exact: field arithmetic is modular, probabilities are
//! arbitrary-precision rationals, and no tolerance appears anywhere.
//!
//! See the crate examples for runnable tours of each capability, and the
//! `mqt` binary for a JSON-speaking command-line interface.

pub mod channels;
pub mod field;
pub mod hvgames;
pub mod json;
pub mod linalg;
pub mod lp;
pub mod render;
pub mod resolve;
pub mod sample;
pub mod states;
pub mod tables;

pub use field::{FieldSpec, Scalar};
pub use linalg::Matrix;
pub use states::{Measurement, StateSpace, Subspace, Variance, Vector};
pub use tables::{PossibilityTable, Scenario};
