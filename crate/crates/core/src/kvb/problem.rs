use super::KvbError;
use crate::linalg::{
    hermitian_eigs, inner, norm, orthonormalize_in, smallest_singular_value, sub, C64, CMatrix,
    Frame, HermMatrix, LuFactor, DEFAULT_TOL,
};

/// Open spectral gap `(a, b)`; `a = None` encodes a semi-infinite gap
/// `(-inf, b)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapInterval {
    a: Option<f64>,
    b: f64,
}

impl GapInterval {
    pub fn new(a: Option<f64>, b: f64) -> Result<Self, KvbError> {
        if let Some(a) = a {
            if !(a < b) {
                return Err(KvbError::GapInvalid(Some(a), b));
            }
        }
        if !b.is_finite() {
            return Err(KvbError::GapInvalid(a, b));
        }
        Ok(GapInterval { a, b })
    }

    pub fn semibounded(b: f64) -> Result<Self, KvbError> {
        Self::new(None, b)
    }

    pub fn finite(a: f64, b: f64) -> Result<Self, KvbError> {
        Self::new(Some(a), b)
    }

    pub fn lower(&self) -> Option<f64> {
        self.a
    }

    pub fn upper(&self) -> f64 {
        self.b
    }

    pub fn is_semibounded(&self) -> bool {
        self.a.is_none()
    }

    /// Strict interior membership.
    pub fn contains(&self, x: f64) -> bool {
        match self.a {
            None => x < self.b,
            Some(a) => a < x && x < self.b,
        }
    }

    pub fn shifted(&self, c: f64) -> Result<GapInterval, KvbError> {
        GapInterval::new(self.a.map(|a| a - c), self.b - c)
    }

    /// Intersection, empty when the result is not a valid interval.
    pub fn intersect(&self, other: &GapInterval) -> Option<GapInterval> {
        let a = match (self.a, other.a) {
            (None, None) => None,
            (Some(x), None) | (None, Some(x)) => Some(x),
            (Some(x), Some(y)) => Some(x.max(y)),
        };
        let b = self.b.min(other.b);
        GapInterval::new(a, b).ok()
    }
}

/// Raw, unvalidated problem data. `build` checks every invariant and
/// produces the derived objects; `validate` reports each check with its
/// measured deviation without failing.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub dim: usize,
    pub domain_basis: Vec<Vec<C64>>,
    pub action: Vec<Vec<C64>>,
    pub s_d: CMatrix,
    pub gap: GapInterval,
}

#[derive(Clone, Debug)]
pub struct CheckEntry {
    pub name: &'static str,
    pub deviation: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub checks: Vec<CheckEntry>,
}

impl ValidationReport {
    fn push(&mut self, name: &'static str, deviation: f64, threshold: f64) {
        self.checks.push(CheckEntry { name, deviation, threshold, pass: deviation <= threshold });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failing(&self) -> Vec<&CheckEntry> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

impl ProblemSpec {
    /// Runs every invariant check, reporting measured deviations.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.dim;
        let shape_ok = self.domain_basis.iter().all(|v| v.len() == n)
            && self.action.iter().all(|v| v.len() == n)
            && self.action.len() == self.domain_basis.len()
            && self.s_d.rows() == n
            && self.s_d.cols() == n;
        report.push("shape", if shape_ok { 0.0 } else { 1.0 }, 0.0);
        if !shape_ok {
            return report;
        }

        // Domain columns orthonormal.
        let mut dev = 0.0f64;
        for (i, a) in self.domain_basis.iter().enumerate() {
            for (j, b) in self.domain_basis.iter().enumerate() {
                let g = inner(a, b);
                let t = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((g - C64::new(t, 0.0)).norm());
            }
        }
        report.push("domain_orthonormal", dev, 1e-12);

        // <d_i, S d_j> Hermitian.
        let k = self.domain_basis.len();
        let mut form = CMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                form.set(i, j, inner(&self.domain_basis[i], &self.action[j]));
            }
        }
        let herm_dev = form.sub(&form.adjoint()).max_abs();
        report.push("symmetric", herm_dev, 1e-10);

        // S_D d_i = action_i.
        let mut ext_dev = 0.0f64;
        for (d, a) in self.domain_basis.iter().zip(&self.action) {
            let img = self.s_d.mul_vec(d);
            ext_dev = ext_dev.max(norm(&sub(&img, a)) / 1f64.max(norm(a)));
        }
        report.push("extends", ext_dev, 1e-10);

        // S_D Hermitian and invertible: exact 2-norm condition from its
        // eigenvalues.
        let sd_herm_dev = self.s_d.sub(&self.s_d.adjoint()).max_abs();
        report.push("sd_hermitian", sd_herm_dev, 1e-12 * 1f64.max(self.s_d.max_abs()));
        let cond = match HermMatrix::symmetrize(&self.s_d) {
            Ok(h) => {
                let (vals, _) = hermitian_eigs(&h);
                let max = vals.iter().map(|v| v.abs()).fold(0.0f64, f64::max);
                let min = vals.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
                if min == 0.0 {
                    f64::INFINITY
                } else {
                    max / min
                }
            }
            Err(_) => f64::INFINITY,
        };
        report.push("sd_invertible", cond, 1e12);

        report.push("zero_in_gap", if self.gap.contains(0.0) { 0.0 } else { 1.0 }, 0.0);

        // Action columns independent (forced by invertible S_D; reported
        // for diagnostics).
        let rank = orthonormalize_in(n, &self.action, DEFAULT_TOL)
            .map(|f| f.dim())
            .unwrap_or(0);
        report.push("action_independent", (k - rank.min(k)) as f64, 0.0);

        report
    }

    pub fn build(self) -> Result<ExtensionProblem, KvbError> {
        let report = self.validate();
        for c in report.failing() {
            return Err(match c.name {
                "shape" => KvbError::BadShape("inconsistent dimensions".into()),
                "domain_orthonormal" => KvbError::DomainNotOrthonormal(c.deviation),
                "symmetric" => KvbError::NotSymmetric(c.deviation),
                "extends" | "action_independent" => KvbError::NotExtension(c.deviation),
                "sd_hermitian" | "sd_invertible" => KvbError::NotInvertibleSD(c.deviation),
                "zero_in_gap" => KvbError::ZeroNotInGap,
                other => KvbError::BadShape(other.into()),
            });
        }
        let n = self.dim;
        let domain = Frame::new(n, self.domain_basis, DEFAULT_TOL)?;
        let s_d = HermMatrix::symmetrize(&self.s_d)?;
        let s_d_lu = LuFactor::new(s_d.matrix()).map_err(|_| KvbError::NotInvertibleSD(f64::INFINITY))?;
        // ker S* = (ran S̄)^⊥.
        let range_sbar = orthonormalize_in(n, &self.action, DEFAULT_TOL)?;
        let kernel_frame = range_sbar.complement();
        Ok(ExtensionProblem {
            dim: n,
            domain,
            action: self.action,
            s_d,
            gap: self.gap,
            kernel_frame,
            s_d_lu,
        })
    }
}

/// A gapped symmetric operator with distinguished invertible self-adjoint
/// extension. Immutable; all derived data is computed at construction.
#[derive(Clone, Debug)]
pub struct ExtensionProblem {
    dim: usize,
    domain: Frame,
    action: Vec<Vec<C64>>,
    s_d: HermMatrix,
    gap: GapInterval,
    kernel_frame: Frame,
    s_d_lu: LuFactor,
}

impl ExtensionProblem {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> &Frame {
        &self.domain
    }

    pub fn action(&self) -> &[Vec<C64>] {
        &self.action
    }

    pub fn s_d(&self) -> &HermMatrix {
        &self.s_d
    }

    pub fn gap(&self) -> GapInterval {
        self.gap
    }

    /// Orthonormal basis of `ker S* = (ran S̄)^⊥`.
    pub fn kernel_frame(&self) -> &Frame {
        &self.kernel_frame
    }

    pub fn apply_sd_inverse(&self, v: &[C64]) -> Vec<C64> {
        self.s_d_lu.solve_vec(v)
    }

    pub fn spec(&self) -> ProblemSpec {
        ProblemSpec {
            dim: self.dim,
            domain_basis: self.domain.columns().to_vec(),
            action: self.action.clone(),
            s_d: self.s_d.matrix().clone(),
            gap: self.gap,
        }
    }

    /// Re-runs all construction checks (always passing for a built problem).
    pub fn validate(&self) -> ValidationReport {
        self.spec().validate()
    }

    /// Compressed quadratic-form matrix `<d_i, S d_j>`, symmetrized.
    pub fn form_matrix(&self) -> HermMatrix {
        let k = self.domain.dim();
        let mut form = CMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                form.set(i, j, inner(self.domain.column(i), &self.action[j]));
            }
        }
        HermMatrix::symmetrize(&form).expect("square")
    }

    /// `inf <f, Sf> / |f|^2` over the domain: the smallest eigenvalue of
    /// the compressed form matrix.
    pub fn lower_bound(&self) -> f64 {
        let (vals, _) = hermitian_eigs(&self.form_matrix());
        vals.first().copied().unwrap_or(f64::INFINITY)
    }

    /// Gap test. Semi-infinite branch: the form is bounded below by `b`.
    /// Finite branch: `|(S - (a+b)/2) f| >= (b-a)/2 |f|` on the domain,
    /// checked through the smallest singular value of the shifted action.
    pub fn check_gap(&self, gap: &GapInterval) -> bool {
        self.gap_margin(gap) >= -1e-10
    }

    /// Signed margin of the gap inequality; nonnegative (up to 1e-10)
    /// exactly when the gap holds.
    pub fn gap_margin(&self, gap: &GapInterval) -> f64 {
        match gap.lower() {
            None => self.lower_bound() - gap.upper(),
            Some(a) => {
                let mid = 0.5 * (a + gap.upper());
                let radius = 0.5 * (gap.upper() - a);
                let cols: Vec<Vec<C64>> = self
                    .domain
                    .columns()
                    .iter()
                    .zip(&self.action)
                    .map(|(d, act)| {
                        let mut v = act.clone();
                        crate::linalg::add_scaled(&mut v, C64::new(-mid, 0.0), d);
                        v
                    })
                    .collect();
                if cols.is_empty() {
                    return f64::INFINITY;
                }
                let m = CMatrix::from_columns(self.dim, &cols);
                smallest_singular_value(&m) - radius
            }
        }
    }

    /// Translates the problem by `-c`: action and `S_D` lose `c` times the
    /// identity, the gap shifts accordingly. Fails when `S_D - c` is
    /// singular or the shifted gap no longer contains zero.
    pub fn shift(&self, c: f64) -> Result<ExtensionProblem, KvbError> {
        let shifted_action: Vec<Vec<C64>> = self
            .domain
            .columns()
            .iter()
            .zip(&self.action)
            .map(|(d, a)| {
                let mut v = a.clone();
                crate::linalg::add_scaled(&mut v, C64::new(-c, 0.0), d);
                v
            })
            .collect();
        let spec = ProblemSpec {
            dim: self.dim,
            domain_basis: self.domain.columns().to_vec(),
            action: shifted_action,
            s_d: self.s_d.matrix().shift_diag(C64::new(c, 0.0)),
            gap: self.gap.shifted(c)?,
        };
        spec.build()
    }
}
