use super::extension::BirmanParameter;
use super::problem::{ExtensionProblem, GapInterval, ProblemSpec};
use crate::linalg::{
    combine, hermitian_eigs, orthonormalize_in, C64, CMatrix, Frame, HermMatrix, DEFAULT_TOL,
};
use rand::Rng;

/// Seeded random instance machinery for the oracle suites.
///
/// Instances are built distinguished-extension-first: `S_D` is drawn as a
/// random Hermitian matrix whose spectrum avoids the intended gap (so every
/// gap point is in its resolvent set, as the lambda-dependent formulas
/// require), then the operator domain is a random frame of codimension
/// `deficiency` and the action is the restriction of `S_D` to it. The
/// compressed form inherits the spectral bound, so the gap condition holds
/// by construction; `build()` re-verifies everything.
pub fn random_problem<R: Rng>(rng: &mut R, dim: usize, deficiency: usize, b: f64) -> ExtensionProblem {
    assert!(deficiency < dim && b > 0.0);
    loop {
        let eigs: Vec<f64> = (0..dim).map(|_| rng.gen_range(b..b + 4.0)).collect();
        if let Some(p) = assemble(rng, dim, deficiency, &eigs, GapInterval::semibounded(b).unwrap())
        {
            return p;
        }
    }
}

/// Finite-gap variant: `S_D` eigenvalues land on either side of `(a, b)`,
/// with at least one on each side.
pub fn random_problem_finite_gap<R: Rng>(
    rng: &mut R,
    dim: usize,
    deficiency: usize,
    a: f64,
    b: f64,
) -> ExtensionProblem {
    assert!(deficiency < dim && a < 0.0 && b > 0.0);
    loop {
        let eigs: Vec<f64> = (0..dim)
            .map(|i| {
                let below = if i < 2 { i == 0 } else { rng.gen_bool(0.5) };
                if below {
                    rng.gen_range(a - 4.0..a)
                } else {
                    rng.gen_range(b..b + 4.0)
                }
            })
            .collect();
        if let Some(p) = assemble(rng, dim, deficiency, &eigs, GapInterval::finite(a, b).unwrap()) {
            return p;
        }
    }
}

fn assemble<R: Rng>(
    rng: &mut R,
    dim: usize,
    deficiency: usize,
    eigs: &[f64],
    gap: GapInterval,
) -> Option<ExtensionProblem> {
    let basis = random_frame(rng, dim, dim)?;
    let mut s_d = CMatrix::zeros(dim, dim);
    for (k, &mu) in eigs.iter().enumerate() {
        let q = basis.column(k);
        for i in 0..dim {
            for j in 0..dim {
                let v = s_d.at(i, j) + q[i] * q[j].conj() * C64::new(mu, 0.0);
                s_d.set(i, j, v);
            }
        }
    }
    let s_d = HermMatrix::symmetrize(&s_d).ok()?;
    let domain = random_frame(rng, dim, dim - deficiency)?;
    let action: Vec<Vec<C64>> =
        domain.columns().iter().map(|d| s_d.matrix().mul_vec(d)).collect();
    let spec = ProblemSpec {
        dim,
        domain_basis: domain.columns().to_vec(),
        action,
        s_d: s_d.matrix().clone(),
        gap,
    };
    spec.build().ok()
}

/// Random orthonormal frame of `k` columns in dimension `n`; retries until
/// the draw is numerically independent.
pub fn random_frame<R: Rng>(rng: &mut R, n: usize, k: usize) -> Option<Frame> {
    for _ in 0..16 {
        let vecs: Vec<Vec<C64>> = (0..k).map(|_| random_vector(rng, n)).collect();
        if let Ok(f) = orthonormalize_in(n, &vecs, DEFAULT_TOL) {
            if f.dim() == k {
                return Some(f);
            }
        }
    }
    None
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> HermMatrix {
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
    }
    HermMatrix::symmetrize(&m).expect("square")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RandomParameterKind {
    /// Support and matrix entirely random (may or may not be singular).
    Any,
    /// Forces a nontrivial kernel by zeroing one eigenvalue.
    Singular,
    /// Empty support.
    Friedrichs,
}

/// Random extension parameter supported inside the adjoint kernel of the
/// problem.
pub fn random_parameter<R: Rng>(
    rng: &mut R,
    problem: &ExtensionProblem,
    kind: RandomParameterKind,
) -> BirmanParameter {
    let d = problem.deficiency_index();
    let n = problem.dim();
    if kind == RandomParameterKind::Friedrichs || d == 0 {
        return BirmanParameter::friedrichs(n);
    }
    let r = rng.gen_range(1..=d);
    let support = loop {
        let combos: Vec<Vec<C64>> = (0..r)
            .map(|_| {
                let coeffs = random_vector(rng, d);
                combine(n, &coeffs, problem.kernel_frame().columns())
            })
            .collect();
        let f = orthonormalize_in(n, &combos, DEFAULT_TOL).expect("uniform");
        if f.dim() == r {
            break f;
        }
    };
    let mut matrix = random_hermitian(rng, r);
    if kind == RandomParameterKind::Singular {
        let (vals, vecs) = hermitian_eigs(&matrix);
        let kill = rng.gen_range(0..r);
        let mut m = CMatrix::zeros(r, r);
        for (idx, &val) in vals.iter().enumerate() {
            if idx == kill {
                continue;
            }
            let q = vecs.column(idx);
            for i in 0..r {
                for j in 0..r {
                    let v = m.at(i, j) + q[i] * q[j].conj() * C64::new(val, 0.0);
                    m.set(i, j, v);
                }
            }
        }
        matrix = HermMatrix::symmetrize(&m).expect("square");
    }
    BirmanParameter::new(support, matrix).expect("consistent dims")
}
