//! Dense Hermitian eigenvalues by cyclic Jacobi with complex rotations.
//!
//! The registers here produce thousands of small (at most 64 x 64), heavily
//! rank-deficient Hermitian matrices whose spectra must come out finite and
//! accurate every single time. Cyclic Jacobi is unconditionally convergent on
//! Hermitian input and has no shift heuristics to fall over, so it is the
//! eigensolver of record for this crate.

use nalgebra::DMatrix;
use num_complex::Complex64;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a Hermitian matrix, ascending. Only the Hermitian part of
/// the input participates: the rotations read `a_pq` and treat `a_qp` as its
/// conjugate.
pub fn hermitian_eigenvalues(mat: &DMatrix<Complex64>) -> Vec<f64> {
    let n = mat.nrows();
    assert_eq!(n, mat.ncols(), "matrix must be square");
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![mat[(0, 0)].re];
    }

    let mut a = mat.clone();
    let scale = a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return vec![0.0; n];
    }
    let tol = 1e-15 * scale;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= tol {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, p, q);
            }
        }
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).expect("Jacobi keeps eigenvalues finite"));
    eig
}

fn off_diagonal_norm(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                acc += a[(p, q)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One Jacobi rotation annihilating `a[(p, q)]`.
///
/// With `a_pq = |a_pq| e^{i phi}` the unitary is the identity outside the
/// `(p, q)` plane and `[[c, s e^{i phi}], [-s e^{-i phi}, c]]` inside it,
/// where `t = tan(theta)` solves `cot(2 theta) = (a_qq - a_pp) / (2 |a_pq|)`
/// through the round-off-stable root.
fn rotate(a: &mut DMatrix<Complex64>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let abs = apq.norm();
    if abs == 0.0 {
        return;
    }
    let phase = apq / abs;
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * abs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let s_phase = s * phase;
    let s_conj = s * phase.conj();

    let n = a.nrows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s_conj * akq;
        a[(k, q)] = s_phase * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s_phase * aqk;
        a[(q, k)] = s_conj * apk + c * aqk;
    }

    // The rotated pair is zero by construction and the diagonal stays real;
    // writing that down stops round-off from accumulating across sweeps.
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}
