//! Minimal dense complex linear algebra: vectors, matrices, orthonormal
//! frames, a cyclic-Jacobi Hermitian eigensolver, and LU solves.
//!
//! Everything here is desk-scale (n up to a few hundred), immutable after
//! construction, and deterministic: same inputs, same bits out.
//!
//! Scalar products are conjugate-linear in the *left* argument.

mod eig;
mod frame;
mod matrix;
mod solve;

pub use eig::{hermitian_eigs, nullspace, smallest_singular_value};
pub use frame::{orthonormalize, orthonormalize_in, subspace_distance, Frame};
pub use matrix::{CMatrix, HermMatrix};
pub use solve::{solve, solve_mat, LuFactor};

use thiserror::Error;

pub type C64 = num_complex::Complex64;

/// Global default rank/drop cutoff. Overridable per call; no module keeps a
/// hidden private default.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Condition-estimate ceiling beyond which a solve is refused as singular.
pub const COND_LIMIT: f64 = 1e12;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("vectors of mixed ambient dimensions: {0} vs {1}")]
    MixedDimensions(usize, usize),
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix numerically singular (condition estimate {0:.3e})")]
    Singular(f64),
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },
}

/// `<a, b>`, conjugate-linear in `a`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn scaled(a: &[C64], s: C64) -> Vec<C64> {
    a.iter().map(|x| x * s).collect()
}

/// `a += s * b` in place.
pub fn add_scaled(a: &mut [C64], s: C64, b: &[C64]) {
    debug_assert_eq!(a.len(), b.len());
    for (x, y) in a.iter_mut().zip(b) {
        *x += s * y;
    }
}

pub fn sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn zeros(n: usize) -> Vec<C64> {
    vec![C64::new(0.0, 0.0); n]
}

/// Standard basis vector `e_i` in dimension `n`.
pub fn basis(n: usize, i: usize) -> Vec<C64> {
    let mut v = zeros(n);
    v[i] = C64::new(1.0, 0.0);
    v
}

/// Linear combination `sum_k coeffs[k] * vecs[k]` in dimension `n`.
pub fn combine(n: usize, coeffs: &[C64], vecs: &[Vec<C64>]) -> Vec<C64> {
    debug_assert_eq!(coeffs.len(), vecs.len());
    let mut out = zeros(n);
    for (c, v) in coeffs.iter().zip(vecs) {
        add_scaled(&mut out, *c, v);
    }
    out
}

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}
