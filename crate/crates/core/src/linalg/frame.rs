use super::{add_scaled, basis, inner, norm, scaled, C64, CMatrix, LinalgError, DEFAULT_TOL};

/// Orthonormal basis of a subspace of `C^ambient_dim`.
///
/// The column list may be empty (the zero subspace). Orthonormality is a
/// construction invariant: `new` rejects violations, `orthonormalize`
/// guarantees them.
#[derive(Clone, Debug)]
pub struct Frame {
    ambient_dim: usize,
    columns: Vec<Vec<C64>>,
    tol: f64,
}

impl Frame {
    /// Validates pairwise orthonormality (Gram deviation from identity
    /// below 1e-12 in max-entry norm) and the dimension bound.
    pub fn new(ambient_dim: usize, columns: Vec<Vec<C64>>, tol: f64) -> Result<Self, LinalgError> {
        for c in &columns {
            if c.len() != ambient_dim {
                return Err(LinalgError::MixedDimensions(ambient_dim, c.len()));
            }
        }
        if columns.len() > ambient_dim {
            return Err(LinalgError::Shape { expected: ambient_dim, got: columns.len() });
        }
        let mut dev: f64 = 0.0;
        for (i, a) in columns.iter().enumerate() {
            for (j, b) in columns.iter().enumerate() {
                let g = inner(a, b);
                let target = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                dev = dev.max((g - target).norm());
            }
        }
        if dev > 1e-12 {
            return Err(LinalgError::NotHermitian(dev));
        }
        Ok(Frame { ambient_dim, columns, tol })
    }

    pub fn empty(ambient_dim: usize) -> Self {
        Frame { ambient_dim, columns: Vec::new(), tol: DEFAULT_TOL }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn column(&self, j: usize) -> &[C64] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<C64>] {
        &self.columns
    }

    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_columns(self.ambient_dim, &self.columns)
    }

    /// Orthogonal projection of `v` onto the spanned subspace.
    pub fn project(&self, v: &[C64]) -> Vec<C64> {
        let mut out = super::zeros(self.ambient_dim);
        for q in &self.columns {
            add_scaled(&mut out, inner(q, v), q);
        }
        out
    }

    /// `v - P v`: the component of `v` orthogonal to the subspace.
    pub fn reject(&self, v: &[C64]) -> Vec<C64> {
        let mut r = v.to_vec();
        for q in &self.columns {
            let c = inner(q, r.as_slice());
            add_scaled(&mut r, -c, q);
        }
        r
    }

    /// Distance from `v` to the subspace, relative to `max(1, |v|)`.
    pub fn distance_to(&self, v: &[C64]) -> f64 {
        norm(&self.reject(v)) / 1f64.max(norm(v))
    }

    /// Coefficients of `P v` over the frame columns.
    pub fn coefficients(&self, v: &[C64]) -> Vec<C64> {
        self.columns.iter().map(|q| inner(q, v)).collect()
    }

    /// The orthogonal projector as a dense matrix.
    pub fn projector(&self) -> CMatrix {
        let n = self.ambient_dim;
        let mut p = CMatrix::zeros(n, n);
        for q in &self.columns {
            for i in 0..n {
                for j in 0..n {
                    let v = p.at(i, j) + q[i] * q[j].conj();
                    p.set(i, j, v);
                }
            }
        }
        p
    }

    /// Orthonormal basis of the orthogonal complement. Deterministic: the
    /// standard basis is swept in order and dependent directions dropped.
    pub fn complement(&self) -> Frame {
        let n = self.ambient_dim;
        let mut all: Vec<Vec<C64>> = self.columns.clone();
        for i in 0..n {
            all.push(basis(n, i));
        }
        let full = orthonormalize(&all, self.tol).expect("same ambient dimension");
        let cols = full.columns[self.dim()..].to_vec();
        Frame { ambient_dim: n, columns: cols, tol: self.tol }
    }

    /// Frame spanning the same subspace expressed through new columns
    /// (used internally after exact unitary maps).
    pub(crate) fn from_orthonormal_unchecked(ambient_dim: usize, columns: Vec<Vec<C64>>, tol: f64) -> Frame {
        Frame { ambient_dim, columns, tol }
    }
}

/// Modified Gram-Schmidt with one re-orthogonalization pass.
///
/// Input order is preserved; a vector is dropped when its residual norm
/// falls below `tol * max(1, |input|)`.
pub fn orthonormalize(vectors: &[Vec<C64>], tol: f64) -> Result<Frame, LinalgError> {
    let n = vectors.first().map_or(0, Vec::len);
    orthonormalize_in(n, vectors, tol)
}

/// `orthonormalize` with the ambient dimension stated explicitly, so an
/// empty input still yields the zero subspace of the right space.
pub fn orthonormalize_in(n: usize, vectors: &[Vec<C64>], tol: f64) -> Result<Frame, LinalgError> {
    for v in vectors {
        if v.len() != n {
            return Err(LinalgError::MixedDimensions(n, v.len()));
        }
    }
    let mut chosen: Vec<Vec<C64>> = Vec::new();
    for v in vectors {
        let mut r = v.clone();
        for _pass in 0..2 {
            for q in &chosen {
                let c = inner(q, &r);
                add_scaled(&mut r, -c, q);
            }
        }
        let rn = norm(&r);
        if rn < tol * 1f64.max(norm(v)) {
            continue;
        }
        chosen.push(scaled(&r, C64::new(1.0 / rn, 0.0)));
    }
    Ok(Frame { ambient_dim: n, columns: chosen, tol })
}

/// Frobenius norm of the difference of the two orthogonal projectors.
/// Zero exactly when the frames span the same subspace.
pub fn subspace_distance(a: &Frame, b: &Frame) -> Result<f64, LinalgError> {
    if a.ambient_dim != b.ambient_dim {
        return Err(LinalgError::MixedDimensions(a.ambient_dim, b.ambient_dim));
    }
    Ok(a.projector().sub(&b.projector()).frobenius_norm())
}
