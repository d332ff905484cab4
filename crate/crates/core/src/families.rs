//! Dense reference matrices for the structured families, built classically.
//! These are the oracles every encoding circuit is verified against.

use ndarray::Array2;

/// Banded circulant adjacency matrix on `2^n` vertices: `α` on the diagonal,
/// `β` on the subdiagonal, `γ` on the superdiagonal, with cyclic wrap entries
/// `(0, N-1) = β` and `(N-1, 0) = γ`.
pub fn circulant_matrix(n: usize, alpha: f64, beta: f64, gamma: f64) -> Array2<f64> {
    let size = 1usize << n;
    let mut a = Array2::zeros((size, size));
    for j in 0..size {
        a[[j, j]] = alpha;
        a[[(j + 1) % size, j]] = beta;
        a[[(j + size - 1) % size, j]] = gamma;
    }
    a
}

/// The circulant family with the cyclic corner entries removed.
pub fn tridiagonal_matrix(n: usize, alpha: f64, beta: f64, gamma: f64) -> Array2<f64> {
    let size = 1usize << n;
    let mut a = circulant_matrix(n, alpha, beta, gamma);
    a[[0, size - 1]] = 0.0;
    a[[size - 1, 0]] = 0.0;
    a
}

/// Adjacency matrix of the extended binary tree on `2^n` vertices: vertex 0 is
/// an extra root attached to vertex 1, inner vertices carry weight `α`, the
/// root and leaves carry `γ`, and every parent-child edge carries `β`.
pub fn ebtree_matrix(n: usize, alpha: f64, beta: f64, gamma: f64) -> Array2<f64> {
    let size = 1usize << n;
    let mut a = Array2::zeros((size, size));
    for v in 0..size {
        a[[v, v]] = if v == 0 || v >= size / 2 { gamma } else { alpha };
    }
    a[[0, 1]] = beta;
    a[[1, 0]] = beta;
    for v in 1..size / 2 {
        a[[v, 2 * v]] = beta;
        a[[2 * v, v]] = beta;
        a[[v, 2 * v + 1]] = beta;
        a[[2 * v + 1, v]] = beta;
    }
    a
}

/// The real symmetric 2x2 example `[[α1, α2], [α2, α1]]`.
pub fn sym2x2_matrix(alpha1: f64, alpha2: f64) -> Array2<f64> {
    ndarray::arr2(&[[alpha1, alpha2], [alpha2, alpha1]])
}
