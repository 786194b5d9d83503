use super::problem::ExtensionProblem;
use super::KvbError;
use crate::linalg::{
    add_scaled, combine, hermitian_eigs, inner, norm, nullspace, orthonormalize_in, scaled, sub,
    subspace_distance, zeros, C64, CMatrix, Frame, HermMatrix, LuFactor, DEFAULT_TOL,
};
use crate::relations::{pair, LinearRelation};

/// Threshold above which a scalar parameter is reported as infinite
/// (the Friedrichs-type corner of the classification).
pub const BETA_OVERFLOW: f64 = 1e12;

/// A self-adjoint operator on a subspace of `ker S*`, labelling one
/// self-adjoint extension. An empty support encodes the Friedrichs-type
/// choice (the parameter "at infinity").
#[derive(Clone, Debug)]
pub struct BirmanParameter {
    support: Frame,
    matrix: HermMatrix,
}

impl BirmanParameter {
    pub fn new(support: Frame, matrix: HermMatrix) -> Result<Self, KvbError> {
        if matrix.dim() != support.dim() {
            return Err(KvbError::BadShape(format!(
                "parameter matrix {}x{} on support of dimension {}",
                matrix.dim(),
                matrix.dim(),
                support.dim()
            )));
        }
        Ok(BirmanParameter { support, matrix })
    }

    /// The Friedrichs-type choice: empty support.
    pub fn friedrichs(ambient_dim: usize) -> Self {
        BirmanParameter {
            support: Frame::empty(ambient_dim),
            matrix: HermMatrix::from_real_diag(&[]),
        }
    }

    /// `beta` times the identity on the whole adjoint kernel.
    pub fn scalar(problem: &ExtensionProblem, beta: f64) -> Self {
        let k = problem.kernel_frame().clone();
        let d = k.dim();
        BirmanParameter { support: k, matrix: HermMatrix::from_real_diag(&vec![beta; d]) }
    }

    pub fn support(&self) -> &Frame {
        &self.support
    }

    pub fn matrix(&self) -> &HermMatrix {
        &self.matrix
    }

    /// Image of the j-th support column under the parameter, in ambient
    /// coordinates.
    pub fn apply_to_support_column(&self, j: usize) -> Vec<C64> {
        let r = self.support.dim();
        let coeffs: Vec<C64> = (0..r).map(|i| self.matrix.at(i, j)).collect();
        combine(self.support.ambient_dim(), &coeffs, self.support.columns())
    }

    /// Image of an ambient vector lying in the support.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let coeffs = self.support.coefficients(v);
        let img_coeffs = self.matrix.matrix().mul_vec(&coeffs);
        combine(self.support.ambient_dim(), &img_coeffs, self.support.columns())
    }

    /// Kernel of the parameter, as an ambient frame inside the support.
    pub fn kernel(&self) -> Frame {
        let null = nullspace(self.matrix.matrix(), DEFAULT_TOL);
        let vecs: Vec<Vec<C64>> = null
            .columns()
            .iter()
            .map(|c| combine(self.support.ambient_dim(), c, self.support.columns()))
            .collect();
        orthonormalize_in(self.support.ambient_dim(), &vecs, DEFAULT_TOL).expect("uniform")
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().dim() == 0
    }

    /// In finite dimension, surjective onto the support iff injective.
    pub fn is_surjective(&self) -> bool {
        self.is_injective()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_injective()
    }
}

/// Decomposition of an adjoint-relation element over the three-block
/// splitting of the adjoint domain: coefficients over the domain frame,
/// plus kernel vectors `w` (through `S_D^{-1}`) and `u`.
#[derive(Clone, Debug)]
pub struct AdjointTriple {
    pub f: Vec<C64>,
    pub w: Vec<C64>,
    pub u: Vec<C64>,
    /// Reconstruction residual of the solved block system.
    pub residual: f64,
}

/// A self-adjoint extension, held as a linear relation together with the
/// parameter that produced it (absent for restriction-type constructions).
#[derive(Clone, Debug)]
pub struct SelfAdjointExtension {
    relation: LinearRelation,
    parameter: Option<BirmanParameter>,
}

impl SelfAdjointExtension {
    pub fn relation(&self) -> &LinearRelation {
        &self.relation
    }

    pub fn parameter(&self) -> Option<&BirmanParameter> {
        self.parameter.as_ref()
    }

    pub fn into_relation(self) -> LinearRelation {
        self.relation
    }
}

/// Scalar extension parameter of the unital case: a real number or the
/// Friedrichs point at infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BetaValue {
    Finite(f64),
    Infinite,
}

impl BetaValue {
    pub fn as_finite(&self) -> Option<f64> {
        match self {
            BetaValue::Finite(b) => Some(*b),
            BetaValue::Infinite => None,
        }
    }
}

impl ExtensionProblem {
    /// Graph of the symmetric operator itself.
    pub fn graph(&self) -> LinearRelation {
        LinearRelation::from_operator_on_subspace(self.domain(), self.action())
            .expect("validated shapes")
    }

    /// The adjoint relation, assembled from the three-block splitting
    /// `{(d_i, S d_i)}, {(S_D^{-1} k_j, k_j)}, {(k_j, 0)}` and cross-checked
    /// against the brute-force graph adjoint. Disagreement means the
    /// problem instance is broken.
    pub fn adjoint_relation(&self) -> Result<LinearRelation, KvbError> {
        let n = self.dim();
        let mut pairs: Vec<(Vec<C64>, Vec<C64>)> = Vec::new();
        for (d, a) in self.domain().columns().iter().zip(self.action()) {
            pairs.push((d.clone(), a.clone()));
        }
        for k in self.kernel_frame().columns() {
            pairs.push((self.apply_sd_inverse(k), k.clone()));
        }
        for k in self.kernel_frame().columns() {
            pairs.push((k.clone(), zeros(n)));
        }
        let assembled = LinearRelation::from_pairs(n, &pairs, DEFAULT_TOL)?;
        let expected_dim = self.domain().dim() + 2 * self.kernel_frame().dim();
        let oracle = self.graph().adjoint();
        let dist = subspace_distance(assembled.graph(), oracle.graph())?;
        if assembled.dim() != expected_dim || dist >= 1e-9 {
            return Err(KvbError::DecompositionMismatch(dist.max(1.0)));
        }
        Ok(assembled)
    }

    /// Unique three-block decomposition of a pair in the adjoint relation:
    /// `psi = Σ f_i d_i + S_D^{-1} w + u`, `phi = Σ f_i (S d_i) + w`.
    pub fn decompose(&self, psi: &[C64], phi: &[C64]) -> Result<AdjointTriple, KvbError> {
        let adj = self.adjoint_relation()?;
        let p = pair(psi, phi);
        let defect = adj.defect(psi, phi) / 1f64.max(norm(&p));
        if defect >= 1e-8 {
            return Err(KvbError::NotInAdjointDomain(defect));
        }
        let n = self.dim();
        let kd = self.domain().dim();
        let d = self.kernel_frame().dim();
        // Block columns of the 2N x (kd + 2d) system.
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(kd + 2 * d);
        for (dc, ac) in self.domain().columns().iter().zip(self.action()) {
            cols.push(pair(dc, ac));
        }
        for k in self.kernel_frame().columns() {
            cols.push(pair(&self.apply_sd_inverse(k), k));
        }
        for k in self.kernel_frame().columns() {
            cols.push(pair(k, &zeros(n)));
        }
        let m = CMatrix::from_columns(2 * n, &cols);
        // Full column rank by the graph-level directness; normal equations
        // suffice at desk scale.
        let gram = m.adjoint().mul_mat(&m);
        let rhs = m.adjoint().mul_vec(&p);
        let lu = LuFactor::new(&gram)?;
        let x = lu.solve_vec(&rhs);
        let residual = norm(&sub(&m.mul_vec(&x), &p)) / 1f64.max(norm(&p));
        if residual >= 1e-9 {
            return Err(KvbError::NotInAdjointDomain(residual));
        }
        let f = x[..kd].to_vec();
        let w = combine(n, &x[kd..kd + d], self.kernel_frame().columns());
        let u = combine(n, &x[kd + d..], self.kernel_frame().columns());
        Ok(AdjointTriple { f, w, u, residual })
    }

    /// All `psi` with `(psi, z psi)` in the adjoint relation. Real `z` must
    /// lie strictly inside the gap; non-real `z` is always admitted.
    pub fn deficiency_space(&self, z: C64) -> Result<Frame, KvbError> {
        if z.im == 0.0 && !self.gap().contains(z.re) {
            return Err(KvbError::NotInGap(z.re));
        }
        let adj = self.adjoint_relation()?;
        let n = self.dim();
        let graph = adj.graph();
        let tops: Vec<Vec<C64>> = graph.columns().iter().map(|c| c[..n].to_vec()).collect();
        let bottoms: Vec<Vec<C64>> = graph.columns().iter().map(|c| c[n..].to_vec()).collect();
        let top = CMatrix::from_columns(n, &tops);
        let bottom = CMatrix::from_columns(n, &bottoms);
        let constraint = bottom.sub(&top.scale(z));
        let null = nullspace(&constraint, 1e-8);
        let vecs: Vec<Vec<C64>> = null.columns().iter().map(|c| top.mul_vec(c)).collect();
        Ok(orthonormalize_in(n, &vecs, DEFAULT_TOL)?)
    }

    /// `dim ker S*`.
    pub fn deficiency_index(&self) -> usize {
        self.kernel_frame().dim()
    }

    /// The self-adjoint extension labelled by `parameter`: its graph is
    /// spanned by the operator graph, the lifted parameter block
    /// `(S_D^{-1}(T u_j) + u_j, T u_j)` over the support, and the
    /// Friedrichs block `(S_D^{-1} w_k, w_k)` over the kernel complement
    /// of the support.
    pub fn build_extension(
        &self,
        parameter: BirmanParameter,
    ) -> Result<SelfAdjointExtension, KvbError> {
        let n = self.dim();
        let support_dist = parameter
            .support()
            .columns()
            .iter()
            .map(|c| self.kernel_frame().distance_to(c))
            .fold(0.0f64, f64::max);
        if support_dist >= 1e-10 || parameter.support().ambient_dim() != n {
            return Err(KvbError::ParameterNotInKernel(support_dist.max(1.0)));
        }

        let mut pairs: Vec<(Vec<C64>, Vec<C64>)> = Vec::new();
        for (d, a) in self.domain().columns().iter().zip(self.action()) {
            pairs.push((d.clone(), a.clone()));
        }
        for (j, u) in parameter.support().columns().iter().enumerate() {
            let tu = parameter.apply_to_support_column(j);
            let mut psi = self.apply_sd_inverse(&tu);
            add_scaled(&mut psi, C64::new(1.0, 0.0), u);
            pairs.push((psi, tu));
        }
        for w in kernel_complement(self, parameter.support()).columns() {
            pairs.push((self.apply_sd_inverse(w), w.clone()));
        }
        let relation = LinearRelation::from_pairs(n, &pairs, DEFAULT_TOL)?;

        let adj_dist = subspace_distance(relation.graph(), relation.adjoint().graph())?;
        if relation.dim() != n || adj_dist >= 1e-9 {
            return Err(KvbError::AssemblyNotSelfAdjoint(adj_dist.max(1.0)));
        }
        let extends = relation.containment_residual(&self.graph());
        if extends >= 1e-10 {
            return Err(KvbError::AssemblyNotSelfAdjoint(extends));
        }
        Ok(SelfAdjointExtension { relation, parameter: Some(parameter) })
    }

    /// Restriction of the adjoint to the span of the operator domain and
    /// the deficiency directions at `lambda`: a self-adjoint extension
    /// admitting `lambda` as an eigenvalue of multiplicity at least the
    /// deficiency index.
    pub fn krein_type_extension(&self, lambda: f64) -> Result<SelfAdjointExtension, KvbError> {
        if !self.gap().contains(lambda) {
            return Err(KvbError::NotInGap(lambda));
        }
        let n = self.dim();
        let defic = self.deficiency_space(C64::new(lambda, 0.0))?;
        let mut pairs: Vec<(Vec<C64>, Vec<C64>)> = Vec::new();
        for (d, a) in self.domain().columns().iter().zip(self.action()) {
            pairs.push((d.clone(), a.clone()));
        }
        for k in defic.columns() {
            pairs.push((k.clone(), scaled(k, C64::new(lambda, 0.0))));
        }
        let relation = LinearRelation::from_pairs(n, &pairs, DEFAULT_TOL)?;
        let adj_dist = subspace_distance(relation.graph(), relation.adjoint().graph())?;
        if relation.dim() != n || adj_dist >= 1e-9 {
            return Err(KvbError::AssemblyNotSelfAdjoint(adj_dist.max(1.0)));
        }
        Ok(SelfAdjointExtension { relation, parameter: None })
    }

    /// Scalar parameter for deficiency index one:
    /// `beta = lambda <w0, S_D (S_D - lambda)^{-1} w0>` with `w0` the unit
    /// kernel vector. Values beyond 1e12 in magnitude report as infinite.
    pub fn beta_unital(&self, lambda: f64) -> Result<BetaValue, KvbError> {
        if self.deficiency_index() != 1 {
            return Err(KvbError::NotUnital(self.deficiency_index()));
        }
        if !self.gap().contains(lambda) {
            return Err(KvbError::NotInGap(lambda));
        }
        let w0 = self.kernel_frame().column(0);
        let shifted = self.s_d().matrix().shift_diag(C64::new(lambda, 0.0));
        let lu = LuFactor::new(&shifted).map_err(KvbError::Linalg)?;
        let resolvent = lu.solve_vec(w0);
        let sd_res = self.s_d().matrix().mul_vec(&resolvent);
        let beta = lambda * inner(w0, &sd_res).re;
        if beta.abs() > BETA_OVERFLOW {
            Ok(BetaValue::Infinite)
        } else {
            Ok(BetaValue::Finite(beta))
        }
    }

    /// Invertibility transfer report between an extension and its
    /// parameter: the kernels agree as subspaces and the three properties
    /// (injective, surjective, invertible) hold for the extension exactly
    /// when they hold for the parameter.
    pub fn invertibility_report(
        &self,
        ext: &SelfAdjointExtension,
    ) -> Result<InvertibilityReport, KvbError> {
        let parameter = ext.parameter().ok_or(KvbError::NotParametrized)?;
        let kernel = ext.relation().kernel();
        let t_kernel = parameter.kernel();
        let kernel_match = if kernel.dim() == t_kernel.dim() {
            subspace_distance(&kernel, &t_kernel)?
        } else {
            f64::INFINITY
        };
        let injective = kernel.dim() == 0;
        let surjective = ext.relation().range().dim() == self.dim();
        Ok(InvertibilityReport {
            kernel,
            t_kernel,
            kernel_match,
            injective,
            surjective,
            invertible: injective && surjective,
            t_injective: parameter.is_injective(),
            t_surjective: parameter.is_surjective(),
            t_invertible: parameter.is_invertible(),
        })
    }
}

/// Orthonormal basis of `ker S* ⊖ support`.
fn kernel_complement(problem: &ExtensionProblem, support: &Frame) -> Frame {
    let mut vecs: Vec<Vec<C64>> = support.columns().to_vec();
    vecs.extend(problem.kernel_frame().columns().iter().cloned());
    let all = orthonormalize_in(problem.dim(), &vecs, DEFAULT_TOL).expect("uniform");
    let cols = all.columns()[support.dim()..].to_vec();
    Frame::from_orthonormal_unchecked(problem.dim(), cols, DEFAULT_TOL)
}

#[derive(Clone, Debug)]
pub struct InvertibilityReport {
    pub kernel: Frame,
    pub t_kernel: Frame,
    /// Projector distance between the two kernels (infinite on rank
    /// mismatch).
    pub kernel_match: f64,
    pub injective: bool,
    pub surjective: bool,
    pub invertible: bool,
    pub t_injective: bool,
    pub t_surjective: bool,
    pub t_invertible: bool,
}

impl InvertibilityReport {
    /// All three properties agree between extension and parameter, and
    /// the kernels coincide.
    pub fn consistent(&self, tol: f64) -> bool {
        self.kernel_match < tol
            && self.injective == self.t_injective
            && self.surjective == self.t_surjective
            && self.invertible == self.t_invertible
    }
}

/// Extra dimension check used by tests: eigenvalue multiplicity of a
/// self-adjoint extension at a point, zero when absent.
pub fn eigenvalue_multiplicity(
    relation: &LinearRelation,
    lambda: f64,
    cluster_tol: f64,
) -> Result<usize, KvbError> {
    let eigs = relation.eigenpairs(1e-8, cluster_tol)?;
    Ok(eigs
        .iter()
        .filter(|p| (p.value - lambda).abs() <= cluster_tol.max(1e-9))
        .map(|p| p.multiplicity())
        .sum())
}
