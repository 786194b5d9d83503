//! Linear relations: closed subspaces of `H ⊕ H` generalising operator
//! graphs.
//!
//! In finite dimension the honest surrogate for a densely defined symmetric
//! operator with deficiency `d` is a symmetric relation of graph dimension
//! `N - d`; its adjoint has graph dimension `N + d`, and every identity of
//! extension theory can be checked against brute-force subspace algebra
//! here. Relations are immutable and all operations are pure.

use crate::linalg::{
    self, hermitian_eigs, inner, norm, nullspace, orthonormalize, orthonormalize_in,
    subspace_distance, C64, CMatrix, Frame, HermMatrix, LinalgError, LuFactor, DEFAULT_TOL,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RelationError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("one image per domain column required: {domain} columns, {images} images")]
    CountMismatch { domain: usize, images: usize },
    #[error("relation is not self-adjoint (graph distance {0:.3e})")]
    NotSelfAdjoint(f64),
}

/// A subspace of `C^N ⊕ C^N`, stored as an orthonormal frame in `C^{2N}`
/// whose first `N` coordinates are the input component.
#[derive(Clone, Debug)]
pub struct LinearRelation {
    ambient_dim: usize,
    graph: Frame,
}

/// Concatenates an (input, output) pair into a `C^{2N}` graph vector.
pub fn pair(f: &[C64], g: &[C64]) -> Vec<C64> {
    let mut v = Vec::with_capacity(f.len() + g.len());
    v.extend_from_slice(f);
    v.extend_from_slice(g);
    v
}

impl LinearRelation {
    pub fn new(ambient_dim: usize, graph: Frame) -> Result<Self, RelationError> {
        if graph.ambient_dim() != 2 * ambient_dim {
            return Err(LinalgError::MixedDimensions(2 * ambient_dim, graph.ambient_dim()).into());
        }
        Ok(LinearRelation { ambient_dim, graph })
    }

    /// Relation spanned by the given (input, output) pairs.
    pub fn from_pairs(
        ambient_dim: usize,
        pairs: &[(Vec<C64>, Vec<C64>)],
        tol: f64,
    ) -> Result<Self, RelationError> {
        let vecs: Vec<Vec<C64>> = pairs.iter().map(|(f, g)| pair(f, g)).collect();
        for v in &vecs {
            if v.len() != 2 * ambient_dim {
                return Err(LinalgError::MixedDimensions(2 * ambient_dim, v.len()).into());
            }
        }
        let graph = if vecs.is_empty() {
            Frame::empty(2 * ambient_dim)
        } else {
            orthonormalize(&vecs, tol)?
        };
        Ok(LinearRelation { ambient_dim, graph })
    }

    /// Graph of an operator defined on a subspace: one image per domain
    /// column.
    pub fn from_operator_on_subspace(
        domain: &Frame,
        images: &[Vec<C64>],
    ) -> Result<Self, RelationError> {
        if domain.dim() != images.len() {
            return Err(RelationError::CountMismatch {
                domain: domain.dim(),
                images: images.len(),
            });
        }
        let n = domain.ambient_dim();
        for im in images {
            if im.len() != n {
                return Err(LinalgError::MixedDimensions(n, im.len()).into());
            }
        }
        let pairs: Vec<(Vec<C64>, Vec<C64>)> = domain
            .columns()
            .iter()
            .cloned()
            .zip(images.iter().cloned())
            .collect();
        Self::from_pairs(n, &pairs, domain.tol())
    }

    /// Graph of an everywhere-defined matrix operator.
    pub fn from_matrix(m: &CMatrix) -> Result<Self, RelationError> {
        assert!(m.is_square());
        let n = m.rows();
        let pairs: Vec<(Vec<C64>, Vec<C64>)> = (0..n)
            .map(|i| {
                let e = linalg::basis(n, i);
                let img = m.mul_vec(&e);
                (e, img)
            })
            .collect();
        Self::from_pairs(n, &pairs, DEFAULT_TOL)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn graph(&self) -> &Frame {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.graph.dim()
    }

    /// First (input) components of the graph columns, as an `N x dim` matrix.
    fn top(&self) -> CMatrix {
        let n = self.ambient_dim;
        let cols: Vec<Vec<C64>> =
            self.graph.columns().iter().map(|c| c[..n].to_vec()).collect();
        CMatrix::from_columns(n, &cols)
    }

    /// Second (output) components of the graph columns.
    fn bottom(&self) -> CMatrix {
        let n = self.ambient_dim;
        let cols: Vec<Vec<C64>> =
            self.graph.columns().iter().map(|c| c[n..].to_vec()).collect();
        CMatrix::from_columns(n, &cols)
    }

    /// The adjoint relation `{(u,v): <g,u> = <f,v> for all (f,g) in R}`,
    /// computed as the orthogonal complement of `J R` with `J(f,g) = (-g,f)`.
    pub fn adjoint(&self) -> LinearRelation {
        let n = self.ambient_dim;
        let rotated: Vec<Vec<C64>> = self
            .graph
            .columns()
            .iter()
            .map(|c| {
                let f = &c[..n];
                let g = &c[n..];
                let mut v: Vec<C64> = g.iter().map(|x| -x).collect();
                v.extend_from_slice(f);
                v
            })
            .collect();
        // J is unitary, so the rotated columns are still orthonormal.
        let jr = Frame::from_orthonormal_unchecked(2 * n, rotated, self.graph.tol());
        LinearRelation { ambient_dim: n, graph: jr.complement() }
    }

    pub fn is_selfadjoint(&self, tol: f64) -> bool {
        if self.dim() != self.ambient_dim {
            return false;
        }
        match subspace_distance(&self.graph, &self.adjoint().graph) {
            Ok(d) => d < tol,
            Err(_) => false,
        }
    }

    /// Distance of the pair `(f, g)` to the graph subspace (absolute).
    pub fn defect(&self, f: &[C64], g: &[C64]) -> f64 {
        norm(&self.graph.reject(&pair(f, g)))
    }

    /// Max distance of the other relation's graph columns to this graph:
    /// zero when `other` is contained in `self`.
    pub fn containment_residual(&self, other: &LinearRelation) -> f64 {
        other
            .graph
            .columns()
            .iter()
            .map(|c| norm(&self.graph.reject(c)))
            .fold(0.0, f64::max)
    }

    /// `{psi : (psi, 0) in R}`.
    pub fn kernel(&self) -> Frame {
        let null = nullspace(&self.bottom(), self.graph.tol());
        let top = self.top();
        let vecs: Vec<Vec<C64>> =
            null.columns().iter().map(|c| top.mul_vec(c)).collect();
        orthonormalize_in(self.ambient_dim, &vecs, self.graph.tol()).expect("uniform dimensions")
    }

    /// Projection of the graph onto the output component.
    pub fn range(&self) -> Frame {
        let cols = self.bottom().columns();
        orthonormalize_in(self.ambient_dim, &cols, self.graph.tol()).expect("uniform dimensions")
    }

    /// Projection of the graph onto the input component.
    pub fn domain(&self) -> Frame {
        let cols = self.top().columns();
        orthonormalize_in(self.ambient_dim, &cols, self.graph.tol()).expect("uniform dimensions")
    }

    /// `{v : (0, v) in R}` — the multivalued part.
    pub fn mult_part(&self) -> Frame {
        let null = nullspace(&self.top(), self.graph.tol());
        let bottom = self.bottom();
        let vecs: Vec<Vec<C64>> =
            null.columns().iter().map(|c| bottom.mul_vec(c)).collect();
        orthonormalize_in(self.ambient_dim, &vecs, self.graph.tol()).expect("uniform dimensions")
    }

    /// Splits a self-adjoint relation into operator part and multivalued
    /// part: the operator acts on `mult^⊥` and the relation is the direct
    /// sum of the two pieces.
    pub fn split_operator_mult(
        &self,
        tol: f64,
    ) -> Result<(Frame, HermMatrix, Frame), RelationError> {
        let dist = subspace_distance(&self.graph, &self.adjoint().graph)?;
        if self.dim() != self.ambient_dim || dist >= tol {
            return Err(RelationError::NotSelfAdjoint(dist.max(f64::EPSILON)));
        }
        let mult = self.mult_part();
        let op_domain = self.domain();
        let images = self.operator_images(&op_domain, &mult)?;
        // Compress onto the domain frame; Hermitian for self-adjoint input.
        let k = op_domain.dim();
        let mut m = CMatrix::zeros(k, k);
        for (j, img) in images.iter().enumerate() {
            for i in 0..k {
                m.set(i, j, inner(op_domain.column(i), img));
            }
        }
        let herm = HermMatrix::symmetrize(&m)?;
        Ok((op_domain, herm, mult))
    }

    /// Operator-part image of each domain-frame column: the output
    /// component of a graph element above the column, projected onto
    /// `mult^⊥`. Uses the minimum-norm coefficient solution, which is what
    /// makes the value independent of the multivalued directions.
    fn operator_images(
        &self,
        op_domain: &Frame,
        mult: &Frame,
    ) -> Result<Vec<Vec<C64>>, RelationError> {
        let top = self.top();
        let bottom = self.bottom();
        let gram = top.adjoint().mul_mat(&top);
        let null = nullspace(&top, self.graph.tol());
        let reg = gram.add(&null.projector());
        let lu = LuFactor::new(&reg)?;
        let mut images = Vec::with_capacity(op_domain.dim());
        for d in op_domain.columns() {
            let rhs = top.adjoint().mul_vec(d);
            let c = lu.solve_vec(&rhs);
            let g = bottom.mul_vec(&c);
            let g_op = linalg::sub(&g, &mult.project(&g));
            images.push(g_op);
        }
        Ok(images)
    }

    /// All eigenpairs of a self-adjoint relation: vectors `psi` with
    /// `(psi, lambda psi)` in the graph, grouped into clusters of width
    /// `cluster_tol`. The multivalued part carries no finite eigenvalues.
    pub fn eigenpairs(
        &self,
        selfadj_tol: f64,
        cluster_tol: f64,
    ) -> Result<Vec<Eigenpair>, RelationError> {
        let (op_domain, op_matrix, _mult) = self.split_operator_mult(selfadj_tol)?;
        if op_domain.dim() == 0 {
            return Ok(Vec::new());
        }
        let (vals, vecs) = hermitian_eigs(&op_matrix);
        let dmat = op_domain.matrix();
        let mut out: Vec<Eigenpair> = Vec::new();
        let mut cluster: Vec<Vec<C64>> = Vec::new();
        let mut cluster_vals: Vec<f64> = Vec::new();
        for (i, &val) in vals.iter().enumerate() {
            if !cluster_vals.is_empty() && (val - cluster_vals[cluster_vals.len() - 1]).abs() > cluster_tol
            {
                out.push(self.finish_cluster(&cluster_vals, &cluster)?);
                cluster.clear();
                cluster_vals.clear();
            }
            cluster.push(dmat.mul_vec(vecs.column(i)));
            cluster_vals.push(val);
        }
        if !cluster_vals.is_empty() {
            out.push(self.finish_cluster(&cluster_vals, &cluster)?);
        }
        Ok(out)
    }

    fn finish_cluster(
        &self,
        vals: &[f64],
        members: &[Vec<C64>],
    ) -> Result<Eigenpair, RelationError> {
        let value = vals.iter().sum::<f64>() / vals.len() as f64;
        let frame = orthonormalize_in(self.ambient_dim, members, self.graph.tol())?;
        let mut residual = 0.0f64;
        for psi in frame.columns() {
            let lam_psi = linalg::scaled(psi, linalg::re(value));
            residual = residual.max(self.defect(psi, &lam_psi));
        }
        Ok(Eigenpair { value, eigenframe: frame, residual })
    }

    /// Block-diagonal direct sum of relations.
    pub fn direct_sum(blocks: &[LinearRelation]) -> LinearRelation {
        let total: usize = blocks.iter().map(|b| b.ambient_dim).sum();
        let mut cols: Vec<Vec<C64>> = Vec::new();
        let mut offset = 0usize;
        for b in blocks {
            let n = b.ambient_dim;
            for c in b.graph.columns() {
                let mut v = linalg::zeros(2 * total);
                for i in 0..n {
                    v[offset + i] = c[i];
                    v[total + offset + i] = c[n + i];
                }
                cols.push(v);
            }
            offset += n;
        }
        let graph = Frame::from_orthonormal_unchecked(2 * total, cols, DEFAULT_TOL);
        LinearRelation { ambient_dim: total, graph }
    }
}

/// One eigenvalue cluster of a self-adjoint relation.
#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub value: f64,
    pub eigenframe: Frame,
    /// Max graph-membership defect over the cluster's eigenvectors.
    pub residual: f64,
}

impl Eigenpair {
    pub fn multiplicity(&self) -> usize {
        self.eigenframe.dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{basis, re, zeros};

    fn e(n: usize, i: usize) -> Vec<C64> {
        basis(n, i)
    }

    fn diag_relation(d: &[f64]) -> LinearRelation {
        LinearRelation::from_matrix(HermMatrix::from_real_diag(d).matrix()).unwrap()
    }

    #[test]
    fn operator_on_line_gives_single_graph_line() {
        let domain = orthonormalize(&[e(2, 0)], DEFAULT_TOL).unwrap();
        let r = LinearRelation::from_operator_on_subspace(
            &domain,
            &[linalg::scaled(&e(2, 0), re(2.0))],
        )
        .unwrap();
        assert_eq!(r.dim(), 1);
        // graph = span{(1,0,2,0)/sqrt(5)}
        let expect = linalg::scaled(&vec![re(1.0), re(0.0), re(2.0), re(0.0)], re(1.0 / 5f64.sqrt()));
        assert!(norm(&r.graph().reject(&expect)) < 1e-12);
    }

    #[test]
    fn empty_domain_gives_zero_relation() {
        let domain = Frame::empty(3);
        let r = LinearRelation::from_operator_on_subspace(&domain, &[]).unwrap();
        assert_eq!(r.dim(), 0);
    }

    #[test]
    fn two_dim_graph_membership() {
        // domain span{e1,e2} in C^4, images 2e1, 3e2
        let domain = orthonormalize(&[e(4, 0), e(4, 1)], DEFAULT_TOL).unwrap();
        let images = vec![linalg::scaled(&e(4, 0), re(2.0)), linalg::scaled(&e(4, 1), re(3.0))];
        let r = LinearRelation::from_operator_on_subspace(&domain, &images).unwrap();
        assert_eq!(r.dim(), 2);
        assert!(r.defect(&e(4, 0), &linalg::scaled(&e(4, 0), re(2.0))) < 1e-12);
        assert!(r.defect(&e(4, 1), &linalg::scaled(&e(4, 1), re(3.0))) < 1e-12);
        assert!(r.defect(&e(4, 0), &linalg::scaled(&e(4, 0), re(2.5))) > 0.1);
    }

    #[test]
    fn adjoint_of_symmetric_restriction_has_dim_three() {
        // S: e1 -> 2 e1 on span{e1} in C^2; adjoint = {((u1,u2),(2u1,v2))}.
        let domain = orthonormalize(&[e(2, 0)], DEFAULT_TOL).unwrap();
        let r = LinearRelation::from_operator_on_subspace(
            &domain,
            &[linalg::scaled(&e(2, 0), re(2.0))],
        )
        .unwrap();
        let adj = r.adjoint();
        assert_eq!(adj.dim(), 3);
        // members: (e1, 2e1), (e2, 0), (0, e2)
        assert!(adj.defect(&e(2, 0), &linalg::scaled(&e(2, 0), re(2.0))) < 1e-12);
        assert!(adj.defect(&e(2, 1), &zeros(2)) < 1e-12);
        assert!(adj.defect(&zeros(2), &e(2, 1)) < 1e-12);
        // non-member: (e1, 3 e1)
        assert!(adj.defect(&e(2, 0), &linalg::scaled(&e(2, 0), re(3.0))) > 0.1);
    }

    #[test]
    fn hermitian_matrix_graph_is_selfadjoint_fixed_point() {
        let m = HermMatrix::from_real_diag(&[2.0, 0.5]);
        let r = LinearRelation::from_matrix(m.matrix()).unwrap();
        let adj = r.adjoint();
        assert_eq!(adj.dim(), 2);
        assert!(subspace_distance(r.graph(), adj.graph()).unwrap() < 1e-12);
        assert!(r.is_selfadjoint(1e-10));
    }

    #[test]
    fn zero_relation_adjoint_is_everything() {
        let r = LinearRelation::from_pairs(2, &[], DEFAULT_TOL).unwrap();
        assert_eq!(r.adjoint().dim(), 4);
    }

    #[test]
    fn symmetric_restriction_is_not_selfadjoint() {
        let domain = orthonormalize(&[e(2, 0)], DEFAULT_TOL).unwrap();
        let r = LinearRelation::from_operator_on_subspace(
            &domain,
            &[linalg::scaled(&e(2, 0), re(2.0))],
        )
        .unwrap();
        assert!(!r.is_selfadjoint(1e-10));
    }

    #[test]
    fn graph_plus_orthogonal_defect_relation_is_selfadjoint() {
        // {(f, 2f + m): f in span{e1}, m in span{e2}} — dim 2, self-adjoint.
        let pairs = vec![
            (e(2, 0), linalg::scaled(&e(2, 0), re(2.0))),
            (zeros(2), e(2, 1)),
        ];
        let r = LinearRelation::from_pairs(2, &pairs, DEFAULT_TOL).unwrap();
        assert!(r.is_selfadjoint(1e-10));
    }

    #[test]
    fn split_of_plain_matrix_has_empty_mult() {
        let r = diag_relation(&[2.0, 1.0]);
        let (dom, op, mult) = r.split_operator_mult(1e-9).unwrap();
        assert_eq!(mult.dim(), 0);
        assert_eq!(dom.dim(), 2);
        let (vals, _) = hermitian_eigs(&op);
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn split_of_block_relation_recovers_parts() {
        // span{(e1, 2e1), (0, e2)}: mult = span{e2}, op = 2 on span{e1}.
        let pairs = vec![
            (e(2, 0), linalg::scaled(&e(2, 0), re(2.0))),
            (zeros(2), e(2, 1)),
        ];
        let r = LinearRelation::from_pairs(2, &pairs, DEFAULT_TOL).unwrap();
        let (dom, op, mult) = r.split_operator_mult(1e-9).unwrap();
        assert_eq!(mult.dim(), 1);
        assert!(norm(&mult.reject(&e(2, 1))) < 1e-12);
        assert_eq!(dom.dim(), 1);
        assert!((op.at(0, 0).re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn split_rejects_non_selfadjoint() {
        let domain = orthonormalize(&[e(2, 0)], DEFAULT_TOL).unwrap();
        let r = LinearRelation::from_operator_on_subspace(
            &domain,
            &[linalg::scaled(&e(2, 0), re(2.0))],
        )
        .unwrap();
        assert!(matches!(
            r.split_operator_mult(1e-9),
            Err(RelationError::NotSelfAdjoint(_))
        ));
    }

    #[test]
    fn eigenpairs_of_diagonal() {
        let r = diag_relation(&[2.0, 0.5]);
        let pairs = r.eigenpairs(1e-9, 1e-8).unwrap();
        assert_eq!(pairs.len(), 2);
        assert!((pairs[0].value - 0.5).abs() < 1e-12);
        assert!(norm(&pairs[0].eigenframe.reject(&e(2, 1))) < 1e-10);
        assert!((pairs[1].value - 2.0).abs() < 1e-12);
        assert!(pairs.iter().all(|p| p.residual < 1e-12));
    }

    #[test]
    fn mult_part_carries_no_finite_eigenvalue() {
        let pairs = vec![
            (zeros(2), e(2, 0)),
            (e(2, 1), e(2, 1)),
        ];
        let r = LinearRelation::from_pairs(2, &pairs, DEFAULT_TOL).unwrap();
        let eigs = r.eigenpairs(1e-9, 1e-8).unwrap();
        assert_eq!(eigs.len(), 1);
        assert!((eigs[0].value - 1.0).abs() < 1e-12);
        assert!(norm(&eigs[0].eigenframe.reject(&e(2, 1))) < 1e-10);
    }

    #[test]
    fn eigenvalue_multiplicity_two() {
        let r = diag_relation(&[2.0, 3.0, 0.5, 0.5]);
        let eigs = r.eigenpairs(1e-9, 1e-8).unwrap();
        assert_eq!(eigs.len(), 3);
        assert!((eigs[0].value - 0.5).abs() < 1e-12);
        assert_eq!(eigs[0].multiplicity(), 2);
    }

    #[test]
    fn kernel_and_range_of_singular_diagonal() {
        let r = diag_relation(&[2.0, 0.0]);
        let k = r.kernel();
        assert_eq!(k.dim(), 1);
        assert!(norm(&k.reject(&e(2, 1))) < 1e-12);
        let rng = r.range();
        assert_eq!(rng.dim(), 1);
        assert!(norm(&rng.reject(&e(2, 0))) < 1e-12);
    }

    #[test]
    fn kernel_of_invertible_is_empty_range_full() {
        let r = diag_relation(&[2.0, 1.0]);
        assert_eq!(r.kernel().dim(), 0);
        assert_eq!(r.range().dim(), 2);
    }

    #[test]
    fn direct_sum_blocks() {
        let a = diag_relation(&[2.0]);
        let b = diag_relation(&[3.0, 0.5]);
        let s = LinearRelation::direct_sum(&[a, b]);
        assert_eq!(s.ambient_dim(), 3);
        assert!(s.is_selfadjoint(1e-10));
        let eigs = s.eigenpairs(1e-9, 1e-8).unwrap();
        let vals: Vec<f64> = eigs.iter().map(|p| p.value).collect();
        assert!((vals[0] - 0.5).abs() < 1e-12);
        assert!((vals[1] - 2.0).abs() < 1e-12);
        assert!((vals[2] - 3.0).abs() < 1e-12);
    }
}
