//! Gapped extension problems and the classification of their self-adjoint
//! extensions.
//!
//! An [`ExtensionProblem`] is a symmetric operator given by an orthonormal
//! domain frame and its images, together with a distinguished invertible
//! self-adjoint extension `S_D` and a spectral gap containing zero. From
//! it the module derives the kernel of the adjoint, assembles the adjoint
//! relation from the three-block domain decomposition, classifies the
//! self-adjoint extensions by parameters on subspaces of that kernel,
//! transfers invertibility between a parameter and its extension, restricts
//! the adjoint to deficiency directions at a gap point, and computes the
//! scalar parameter of the unital case.
//!
//! A note on the finite-dimensional surrogate: `S_D` is stored as a full
//! Hermitian invertible matrix, so the infinite-dimensional requirement
//! that its domain meet `ker S*` trivially fails here. All formulas below
//! use only `S_D^{-1}` and the *graph-level* decomposition of the adjoint
//! relation, which stays direct: the second components force the middle
//! block's kernel summand into `ran S̄ ∩ ker S* = {0}`. Naive matrix
//! truncation of the theory would destroy that directness; the relation
//! model preserves it.

mod extension;
mod json;
mod problem;
mod random;

pub use extension::{
    AdjointTriple, BetaValue, BirmanParameter, InvertibilityReport, SelfAdjointExtension,
};
pub use json::{problem_from_json, problem_to_json, read_problem, write_problem};
pub use problem::{CheckEntry, ExtensionProblem, GapInterval, ProblemSpec, ValidationReport};
pub use random::{random_parameter, random_problem, random_problem_finite_gap, RandomParameterKind};

use crate::linalg::LinalgError;
use crate::relations::RelationError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KvbError {
    #[error("gap endpoints out of order: ({0:?}, {1})")]
    GapInvalid(Option<f64>, f64),
    #[error("domain basis is not orthonormal (deviation {0:.3e})")]
    DomainNotOrthonormal(f64),
    #[error("operator is not symmetric on its domain (form deviation {0:.3e})")]
    NotSymmetric(f64),
    #[error("distinguished matrix does not extend the operator (deviation {0:.3e})")]
    NotExtension(f64),
    #[error("distinguished extension not invertible (condition estimate {0:.3e})")]
    NotInvertibleSD(f64),
    #[error("zero is not inside the declared gap")]
    ZeroNotInGap,
    #[error("shape mismatch: {0}")]
    BadShape(String),
    #[error("assembled adjoint relation disagrees with the graph-adjoint oracle (distance {0:.3e})")]
    DecompositionMismatch(f64),
    #[error("pair is not in the adjoint relation (defect {0:.3e})")]
    NotInAdjointDomain(f64),
    #[error("point {0} is not inside the gap")]
    NotInGap(f64),
    #[error("parameter support is not contained in the adjoint kernel (distance {0:.3e})")]
    ParameterNotInKernel(f64),
    #[error("operation requires deficiency index 1, found {0}")]
    NotUnital(usize),
    #[error("extension carries no Birman parameter")]
    NotParametrized,
    #[error("assembled extension failed the self-adjointness check (distance {0:.3e})")]
    AssemblyNotSelfAdjoint(f64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Relation(#[from] RelationError),
}
