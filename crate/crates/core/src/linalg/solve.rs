use super::{C64, CMatrix, LinalgError, COND_LIMIT};

/// LU factorization with partial pivoting.
///
/// The condition estimate is the ratio of extreme pivot magnitudes; crude,
/// but all it guards here is the 1e12 refusal threshold on desk-scale
/// systems.
#[derive(Clone, Debug)]
pub struct LuFactor {
    n: usize,
    lu: CMatrix,
    perm: Vec<usize>,
    cond_estimate: f64,
}

impl LuFactor {
    pub fn new(m: &CMatrix) -> Result<Self, LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::NotSquare(m.rows(), m.cols()));
        }
        let n = m.rows();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut min_piv = f64::INFINITY;
        let mut max_piv = 0.0f64;

        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_mag = lu.at(k, k).norm();
            for i in (k + 1)..n {
                let mag = lu.at(i, k).norm();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = i;
                }
            }
            if pivot_mag == 0.0 {
                return Err(LinalgError::Singular(f64::INFINITY));
            }
            if pivot_row != k {
                for j in 0..n {
                    let a = lu.at(k, j);
                    let b = lu.at(pivot_row, j);
                    lu.set(k, j, b);
                    lu.set(pivot_row, j, a);
                }
                perm.swap(k, pivot_row);
            }
            min_piv = min_piv.min(pivot_mag);
            max_piv = max_piv.max(pivot_mag);
            let inv = C64::new(1.0, 0.0) / lu.at(k, k);
            for i in (k + 1)..n {
                let factor = lu.at(i, k) * inv;
                lu.set(i, k, factor);
                if factor == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in (k + 1)..n {
                    let v = lu.at(i, j) - factor * lu.at(k, j);
                    lu.set(i, j, v);
                }
            }
        }

        let cond_estimate = if n == 0 { 1.0 } else { max_piv / min_piv };
        if !cond_estimate.is_finite() || cond_estimate > COND_LIMIT {
            return Err(LinalgError::Singular(cond_estimate));
        }
        Ok(LuFactor { n, lu, perm, cond_estimate })
    }

    pub fn cond_estimate(&self) -> f64 {
        self.cond_estimate
    }

    pub fn solve_vec(&self, rhs: &[C64]) -> Vec<C64> {
        assert_eq!(rhs.len(), self.n, "rhs length");
        let mut x: Vec<C64> = self.perm.iter().map(|&i| rhs[i]).collect();
        for i in 0..self.n {
            for j in 0..i {
                let v = x[i] - self.lu.at(i, j) * x[j];
                x[i] = v;
            }
        }
        for i in (0..self.n).rev() {
            for j in (i + 1)..self.n {
                let v = x[i] - self.lu.at(i, j) * x[j];
                x[i] = v;
            }
            x[i] /= self.lu.at(i, i);
        }
        x
    }

    pub fn solve_mat(&self, rhs: &CMatrix) -> CMatrix {
        let cols: Vec<Vec<C64>> = (0..rhs.cols()).map(|j| self.solve_vec(&rhs.column(j))).collect();
        CMatrix::from_columns(self.n, &cols)
    }
}

/// One-shot linear solve `M x = rhs`.
pub fn solve(m: &CMatrix, rhs: &[C64]) -> Result<Vec<C64>, LinalgError> {
    Ok(LuFactor::new(m)?.solve_vec(rhs))
}

/// One-shot multi-right-hand-side solve.
pub fn solve_mat(m: &CMatrix, rhs: &CMatrix) -> Result<CMatrix, LinalgError> {
    Ok(LuFactor::new(m)?.solve_mat(rhs))
}
