//! Extension calculus for gapped symmetric operators on finite-dimensional
//! complex Hilbert spaces, together with a construction that prescribes
//! arbitrary point spectrum inside the gap.
//!
//! The crate is organised in layers:
//!
//! * [`linalg`] — dense complex vectors, frames, Jacobi eigensolver, LU.
//! * [`relations`] — linear relations (graph subspaces of `H ⊕ H`), the
//!   faithful desk-scale surrogate for unbounded symmetric operators and
//!   the brute-force oracle for every closed-form identity used elsewhere.
//! * [`kvb`] — gapped extension problems, the classification of
//!   self-adjoint extensions by parameters on the kernel of the adjoint,
//!   invertibility transfer, and the scalar parameter of the unital case.
//! * [`engineering`] — from a list of target eigenvalues in the gap,
//!   builds the extension parameter realising all of them, with a full
//!   numerical certificate of the construction identities; plus direct
//!   sums, the classical reducing-subspace route, and dyadic target nets
//!   for covering closed sets.
//! * [`halfline`] — the half-line model `-d²/dt² + 1` in an exact
//!   exponential-polynomial algebra, and its multi-copy backend for the
//!   engineering pipeline.
//! * [`selftest`] — seeded random-instance invariant suites.

pub mod engineering;
pub mod halfline;
pub mod kvb;
pub mod linalg;
pub mod relations;
pub mod samples;
pub mod selftest;
