//! Variational analysis of homogeneous geodesics on generalized flag
//! manifolds.
//!
//! The crate builds explicit compact real forms of the classical families A
//! and C, flag spaces U/K_Θ with their isotropy decompositions and invariant
//! metrics, and evaluates energy, first/second variations, and index forms of
//! homogeneous curves. On top of that sit the conjugate-point machinery
//! (perturbation pairs, canonical witnesses, discretized Morse-index
//! estimates) and the two-summand homogeneous Ricci flow on ℂP^{2n+1}.

// `!(x > 0.0)` is used for domain checks on purpose: unlike `x <= 0.0` it
// also rejects NaN inputs.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod conjugacy;
pub mod error;
pub mod flag;
pub mod geodesic;
pub mod linalg;
pub mod quad;
pub mod ricci;
pub mod roots;
pub mod trigpoly;
pub mod variation;

pub use algebra::{Algebra, AlgebraId, BasisTag, CompactBasisElement, LieElement};
pub use conjugacy::{Condition5Mode, ConjugateWitness, GramProblem, PerturbationPair};
pub use error::{Error, Result};
pub use flag::{FlagDescriptor, FlagSpace, InvariantMetric, IsotropyComponent, MVector};
pub use geodesic::HomogeneousCurve;
pub use quad::QuadratureConfig;
pub use ricci::{FlowState, HaltReason, IntegratorConfig, PipelineReport, RegionLabel, Trajectory};
pub use roots::{Family, Root, RootSystem};
pub use trigpoly::{TrigMode, TrigPoly};
pub use variation::{Transport, VariationCurve};
