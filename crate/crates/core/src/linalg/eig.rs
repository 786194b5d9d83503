use super::{C64, CMatrix, Frame, HermMatrix, DEFAULT_TOL};

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and an orthonormal eigenvector
/// frame in matching column order. Sweep order is fixed (row-major over the
/// strict upper triangle), so results are reproducible bit-for-bit.
pub fn hermitian_eigs(m: &HermMatrix) -> (Vec<f64>, Frame) {
    let n = m.dim();
    if n == 0 {
        return (Vec::new(), Frame::empty(0));
    }
    let mut a = m.matrix().clone();
    let mut v = CMatrix::identity(n);
    let scale = 1f64.max(a.frobenius_norm());
    let stop = 1e-15 * scale;

    for _sweep in 0..60 {
        let mut max_off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                max_off = max_off.max(a.at(p, q).norm());
            }
        }
        if max_off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q, stop);
            }
        }
    }

    // Ascending sort, stable in the original index for repeated eigenvalues.
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.at(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap().then(i.cmp(&j)));

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut columns = Vec::with_capacity(n);
    for &j in &order {
        columns.push(canonical_phase(v.column(j)));
    }
    let frame = Frame::from_orthonormal_unchecked(n, columns, DEFAULT_TOL);
    (values, frame)
}

/// One complex Jacobi rotation annihilating the (p,q) entry of `a`,
/// accumulated into `v`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, stop: f64) {
    let apq = a.at(p, q);
    let mag = apq.norm();
    if mag <= stop {
        return;
    }
    let n = a.rows();
    let app = a.at(p, p).re;
    let aqq = a.at(q, q).re;
    let phase = apq / C64::new(mag, 0.0);

    // tan(2θ) = 2|a_pq| / (a_pp - a_qq); smaller-angle root.
    let tau = (app - aqq) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Column rotation J: J_pp = c, J_qp = s e^{-iφ}, J_pq = -s e^{iφ}, J_qq = c.
    let sp = C64::new(s, 0.0) * phase.conj(); // J_qp
    let sm = C64::new(-s, 0.0) * phase; // J_pq

    // A <- J* A J. Off-pivot rows/columns first.
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a.at(k, p);
        let akq = a.at(k, q);
        let new_kp = akp * C64::new(c, 0.0) + akq * sp;
        let new_kq = akp * sm + akq * C64::new(c, 0.0);
        a.set(k, p, new_kp);
        a.set(p, k, new_kp.conj());
        a.set(k, q, new_kq);
        a.set(q, k, new_kq.conj());
    }
    let new_pp = app * c * c + 2.0 * mag * c * s + aqq * s * s;
    let new_qq = app * s * s - 2.0 * mag * c * s + aqq * c * c;
    a.set(p, p, C64::new(new_pp, 0.0));
    a.set(q, q, C64::new(new_qq, 0.0));
    a.set(p, q, C64::new(0.0, 0.0));
    a.set(q, p, C64::new(0.0, 0.0));

    for k in 0..n {
        let vkp = v.at(k, p);
        let vkq = v.at(k, q);
        v.set(k, p, vkp * C64::new(c, 0.0) + vkq * sp);
        v.set(k, q, vkp * sm + vkq * C64::new(c, 0.0));
    }
}

/// Orthonormal basis of `ker M` in the column (coefficient) space.
///
/// Kernel detection is by singular value: directions with
/// `sigma <= rel_tol * max(1, sigma_max)` count as null.
pub fn nullspace(m: &CMatrix, rel_tol: f64) -> Frame {
    let cols = m.cols();
    if cols == 0 {
        return Frame::empty(0);
    }
    let h = HermMatrix::symmetrize(&m.adjoint().mul_mat(m)).expect("square by construction");
    let (vals, vecs) = hermitian_eigs(&h);
    let max_val = vals.iter().cloned().fold(0.0f64, f64::max).max(0.0);
    let cut = (rel_tol * 1f64.max(max_val.sqrt())).powi(2);
    let mut kept = Vec::new();
    for (i, &val) in vals.iter().enumerate() {
        if val <= cut {
            kept.push(vecs.column(i).to_vec());
        }
    }
    Frame::from_orthonormal_unchecked(cols, kept, rel_tol)
}

/// Smallest singular value of a (possibly rectangular) matrix.
pub fn smallest_singular_value(m: &CMatrix) -> f64 {
    if m.cols() == 0 {
        return 0.0;
    }
    let h = HermMatrix::symmetrize(&m.adjoint().mul_mat(m)).expect("square by construction");
    let (vals, _) = hermitian_eigs(&h);
    vals[0].max(0.0).sqrt()
}

/// Rotates a unit vector so its largest-modulus entry is real positive.
fn canonical_phase(mut col: Vec<C64>) -> Vec<C64> {
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for (i, x) in col.iter().enumerate() {
        let m = x.norm();
        if m > best_mag + 1e-14 {
            best_mag = m;
            best = i;
        }
    }
    if best_mag > 0.0 {
        let u = col[best] / C64::new(best_mag, 0.0);
        let rot = u.conj();
        for x in col.iter_mut() {
            *x *= rot;
        }
    }
    col
}
