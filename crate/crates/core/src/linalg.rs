//! Small dense linear-algebra helpers used by the verification paths.
//!
//! Everything here targets matrices of dimension at most a few hundred, so
//! plain cyclic Jacobi sweeps are accurate and fast enough; no external
//! factorization backend is pulled in.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

pub fn identity(dim: usize) -> Array2<Complex64> {
    Array2::from_diag_elem(dim, Complex64::new(1.0, 0.0))
}

pub fn to_complex(m: &Array2<f64>) -> Array2<Complex64> {
    m.mapv(|x| Complex64::new(x, 0.0))
}

/// Conjugate transpose.
pub fn adjoint(m: &Array2<Complex64>) -> Array2<Complex64> {
    let mut out = Array2::zeros((m.ncols(), m.nrows()));
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out[[j, i]] = m[[i, j]].conj();
        }
    }
    out
}

pub fn kron(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::zeros((ra * rb, ca * cb));
    for i in 0..ra {
        for j in 0..ca {
            for k in 0..rb {
                for l in 0..cb {
                    out[[i * rb + k, j * cb + l]] = a[[i, j]] * b[[k, l]];
                }
            }
        }
    }
    out
}

pub fn max_abs(m: &Array2<Complex64>) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
    assert_eq!(a.dim(), b.dim(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `‖U†U − I‖_max`.
pub fn unitarity_residual(u: &Array2<Complex64>) -> f64 {
    let prod = adjoint(u).dot(u);
    max_abs_diff(&prod, &identity(u.nrows()))
}

/// `‖U − U†‖_max`.
pub fn hermiticity_residual(u: &Array2<Complex64>) -> f64 {
    max_abs_diff(u, &adjoint(u))
}

pub fn frobenius_norm(m: &Array2<Complex64>) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi sweeps.
/// Returns eigenvalues (ascending) and the matching orthonormal columns.
pub fn symmetric_eigen(m: &Array2<f64>) -> (Vec<f64>, Array2<f64>) {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "square matrix required");
    let mut a = m.clone();
    let mut v: Array2<f64> = Array2::eye(n);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off = f64::max(off, a[[p, q]].abs());
            }
        }
        if off < 1e-15 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[[q, q]] - a[[p, p]]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = c * akp - s * akq;
                    a[[k, q]] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = c * apk - s * aqk;
                    a[[q, k]] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = c * vkp - s * vkq;
                    v[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[[i, i]].partial_cmp(&a[[j, j]]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[[i, i]]).collect();
    let mut vectors = Array2::zeros((n, n));
    for (newcol, &oldcol) in order.iter().enumerate() {
        for k in 0..n {
            vectors[[k, newcol]] = v[[k, oldcol]];
        }
    }
    (values, vectors)
}

/// Eigenvalues of a complex Hermitian matrix via the real symmetric embedding
/// `[[Re, -Im], [Im, Re]]`, whose spectrum is that of `H` with every value
/// doubled.
pub fn hermitian_eigenvalues(h: &Array2<Complex64>) -> Vec<f64> {
    let n = h.nrows();
    let mut big = Array2::zeros((2 * n, 2 * n));
    for i in 0..n {
        for j in 0..n {
            big[[i, j]] = h[[i, j]].re;
            big[[i, j + n]] = -h[[i, j]].im;
            big[[i + n, j]] = h[[i, j]].im;
            big[[i + n, j + n]] = h[[i, j]].re;
        }
    }
    let (vals, _) = symmetric_eigen(&big);
    // each eigenvalue appears twice; take every other one
    vals.into_iter().step_by(2).collect()
}

/// Spectral norm (largest singular value) via the Hermitian eigenvalues of
/// `M†M`.
pub fn spectral_norm(m: &Array2<Complex64>) -> f64 {
    let gram = adjoint(m).dot(m);
    let vals = hermitian_eigenvalues(&gram);
    vals.into_iter().fold(0.0f64, f64::max).max(0.0).sqrt()
}

/// Divides a matrix by the phase of its first entry with magnitude above
/// `1e-10 · max|entry|`, fixing the global phase for comparisons.
pub fn phase_aligned(m: &Array2<Complex64>) -> Array2<Complex64> {
    let cutoff = 1e-10 * max_abs(m);
    for x in m.iter() {
        if x.norm() > cutoff && x.norm() > 0.0 {
            let phase = x / x.norm();
            return m.mapv(|e| e / phase);
        }
    }
    m.clone()
}

/// `tr(M^p)` for `p = 1..=pmax`; equal trace moments up to `p = dim` certify
/// equal spectra.
pub fn trace_moments(m: &Array2<Complex64>, pmax: usize) -> Vec<Complex64> {
    let mut power = m.clone();
    let mut out = Vec::with_capacity(pmax);
    for p in 0..pmax {
        if p > 0 {
            power = power.dot(m);
        }
        out.push(power.diag().sum());
    }
    out
}

/// `M^k` for a real square matrix.
pub fn real_matrix_power(m: &Array2<f64>, k: usize) -> Array2<f64> {
    let mut out = Array2::eye(m.nrows());
    for _ in 0..k {
        out = out.dot(m);
    }
    out
}

/// Eigenvalues of a complex 2x2 matrix (closed form).
pub fn eigenvalues_2x2(m: &Array2<Complex64>) -> (Complex64, Complex64) {
    let tr = m[[0, 0]] + m[[1, 1]];
    let det = m[[0, 0]] * m[[1, 1]] - m[[0, 1]] * m[[1, 0]];
    let disc = (tr * tr - 4.0 * det).sqrt();
    ((tr + disc) / 2.0, (tr - disc) / 2.0)
}

/// Applies a polynomial in the Chebyshev sense to a real symmetric matrix:
/// `T_k(M)` by the three-term recurrence.
pub fn chebyshev_of_matrix(m: &Array2<f64>, k: usize) -> Array2<f64> {
    let n = m.nrows();
    let mut prev: Array2<f64> = Array2::eye(n);
    if k == 0 {
        return prev;
    }
    let mut cur = m.clone();
    for _ in 1..k {
        let next = 2.0 * m.dot(&cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

pub fn column_norm(v: &Array1<Complex64>) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_diagonalizes_known_matrix() {
        let m = ndarray::arr2(&[[2.0, 1.0], [1.0, 2.0]]);
        let (vals, vecs) = symmetric_eigen(&m);
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 3.0).abs() < 1e-12);
        // residual check M v = λ v
        for j in 0..2 {
            for i in 0..2 {
                let mv: f64 = (0..2).map(|k| m[[i, k]] * vecs[[k, j]]).sum();
                assert!((mv - vals[j] * vecs[[i, j]]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let mut m = Array2::zeros((3, 3));
        m[[0, 0]] = Complex64::new(0.5, 0.0);
        m[[1, 1]] = Complex64::new(-2.0, 0.0);
        m[[2, 2]] = Complex64::new(0.0, 1.5);
        assert!((spectral_norm(&m) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn hermitian_eigenvalues_complex_case() {
        let mut h = Array2::zeros((2, 2));
        h[[0, 0]] = Complex64::new(1.0, 0.0);
        h[[1, 1]] = Complex64::new(-1.0, 0.0);
        h[[0, 1]] = Complex64::new(0.0, 1.0);
        h[[1, 0]] = Complex64::new(0.0, -1.0);
        let vals = hermitian_eigenvalues(&h);
        let r = 2.0f64.sqrt();
        assert!((vals[0] + r).abs() < 1e-12);
        assert!((vals[1] - r).abs() < 1e-12);
    }

    #[test]
    fn phase_alignment_removes_global_phase() {
        let m = identity(3);
        let phased = m.mapv(|x| x * Complex64::from_polar(1.0, 1.1));
        assert!(max_abs_diff(&phase_aligned(&phased), &m) < 1e-14);
    }

    #[test]
    fn chebyshev_recurrence_small_matrix() {
        let m = ndarray::arr2(&[[0.5, 0.25], [0.25, 0.5]]);
        let t2 = chebyshev_of_matrix(&m, 2);
        let direct = 2.0 * m.dot(&m) - Array2::<f64>::eye(2);
        for i in 0..2 {
            for j in 0..2 {
                assert!((t2[[i, j]] - direct[[i, j]]).abs() < 1e-14);
            }
        }
    }
}
