//! Stochastic-matrix models and quantum walks: the column-amplitude oracle,
//! the scale-one Hermitian encoding built from it, the ancilla-zero
//! reflector, Chebyshev walk operators and the two-reflection walk form,
//! plus the classical reference utilities (stationary states, discriminant,
//! powers of the chain).

use ndarray::{Array1, Array2};

use crate::arith::add_register;
use crate::block::BlockEncoding;
use crate::circuit::Circuit;
use crate::error::EncodingError;
use crate::gate::{Gate, Polarity};
use crate::linalg;

/// Row-stochastic matrix check: nonnegativity and unit row sums.
#[derive(Debug, Clone)]
pub struct StochasticReport {
    pub dim: usize,
    pub square: bool,
    pub min_entry: f64,
    pub max_row_sum_error: f64,
}

impl StochasticReport {
    pub fn is_stochastic(&self) -> bool {
        self.square && self.min_entry >= -1e-12 && self.max_row_sum_error <= 1e-12
    }
}

pub fn check_stochastic(p: &Array2<f64>) -> StochasticReport {
    let square = p.nrows() == p.ncols();
    let min_entry = p.iter().copied().fold(f64::INFINITY, f64::min);
    let max_row_sum_error = if square {
        (0..p.nrows())
            .map(|i| ((0..p.ncols()).map(|j| p[[i, j]]).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    StochasticReport {
        dim: p.nrows(),
        square,
        min_entry,
        max_row_sum_error,
    }
}

/// Dense stochastic matrix wrapper; the constructor enforces the invariants.
#[derive(Debug, Clone)]
pub struct StochasticMatrix {
    p: Array2<f64>,
}

impl StochasticMatrix {
    pub fn new(p: Array2<f64>) -> Result<Self, EncodingError> {
        let report = check_stochastic(&p);
        if !report.is_stochastic() {
            return Err(EncodingError::InvalidParameters(format!(
                "not row-stochastic: min entry {}, max row-sum error {:.3e}",
                report.min_entry, report.max_row_sum_error
            )));
        }
        Ok(StochasticMatrix { p })
    }

    /// Parses a dense matrix from whitespace-separated rows, one per line.
    pub fn from_text(text: &str) -> Result<Self, EncodingError> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse).collect();
            rows.push(row.map_err(|e| {
                EncodingError::InvalidParameters(format!("bad matrix row: {e}"))
            })?);
        }
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(EncodingError::InvalidParameters(
                "matrix must be square and non-empty".into(),
            ));
        }
        let mut p = Array2::zeros((n, n));
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                p[[i, j]] = v;
            }
        }
        StochasticMatrix::new(p)
    }

    /// The symmetric banded circulant chain with weights `(α, β, γ)`.
    pub fn circulant(n: usize, alpha: f64, beta: f64, gamma: f64) -> Result<Self, EncodingError> {
        StochasticMatrix::new(crate::families::circulant_matrix(n, alpha, beta, gamma))
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.p
    }

    pub fn dim(&self) -> usize {
        self.p.nrows()
    }
}

/// Stationary distribution `π` with `π^T P = π^T`, found by damped power
/// iteration on the transpose; ties (reducible or periodic chains) resolve
/// toward the uniform starting point.
pub fn stationary_state(p: &Array2<f64>) -> Result<Array1<f64>, EncodingError> {
    if p.nrows() != p.ncols() || p.nrows() == 0 {
        return Err(EncodingError::InvalidParameters(
            "stationary state needs a square matrix".into(),
        ));
    }
    let n = p.nrows();
    let mut x = Array1::from_elem(n, 1.0 / n as f64);
    for _ in 0..200_000 {
        // lazy-chain step (P^T x + x) / 2 kills periodicity without moving π
        let mut next = p.t().dot(&x) + &x;
        let sum: f64 = next.iter().sum();
        next.mapv_inplace(|v| v / sum);
        let delta = next
            .iter()
            .zip(x.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x = next;
        if delta < 1e-16 {
            break;
        }
    }
    Ok(x)
}

/// Discriminant matrix `D_ij = √(P_ij P_ji)`, the symmetric surrogate that
/// shares the spectrum of a reversible chain.
pub fn discriminant(p: &Array2<f64>) -> Array2<f64> {
    let n = p.nrows();
    let mut d = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            d[[i, j]] = (p[[i, j]] * p[[j, i]]).max(0.0).sqrt();
        }
    }
    d
}

/// `w = P^k v` for a probability vector `v`.
pub fn classical_walk(
    p: &Array2<f64>,
    v: &Array1<f64>,
    k: usize,
) -> Result<Array1<f64>, EncodingError> {
    let sum: f64 = v.iter().sum();
    if v.len() != p.nrows() || v.iter().any(|&x| x < -1e-12) || (sum - 1.0).abs() > 1e-9 {
        return Err(EncodingError::InvalidParameters(
            "initial state is not a probability vector".into(),
        ));
    }
    let mut w = v.clone();
    for _ in 0..k {
        w = p.dot(&w);
    }
    Ok(w)
}

fn validate_walk_weights(alpha: f64, beta: f64, gamma: f64) -> Result<(), EncodingError> {
    for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
        if v <= 0.0 {
            return Err(EncodingError::InvalidParameters(format!(
                "{name} = {v} must be positive"
            )));
        }
    }
    if (alpha + beta + gamma - 1.0).abs() > 1e-12 {
        return Err(EncodingError::InvalidParameters(format!(
            "weights sum to {} instead of 1",
            alpha + beta + gamma
        )));
    }
    Ok(())
}

/// State-preparation circuit for the first chain column:
/// `K|0^n⟩ = (√α, √β, 0, …, 0, √γ)ᵀ`. Two rotations place the three weights
/// on indices 0, 1, 3; the remaining flips carry index 3 to `N-1`.
pub fn prep_circuit(alpha: f64, beta: f64, gamma: f64, n: usize) -> Result<Circuit, EncodingError> {
    validate_walk_weights(alpha, beta, gamma)?;
    if n < 2 {
        return Err(EncodingError::InvalidParameters(format!(
            "state preparation needs n >= 2, got {n}"
        )));
    }
    let a1 = 2.0 * ((beta + gamma) / alpha).sqrt().atan();
    let a2 = 2.0 * (gamma / beta).sqrt().atan();
    let mut b = Circuit::builder(n);
    b.push(Gate::ry(n - 1, a1));
    b.push(Gate::ry(n - 2, a2).with_control(n - 1, Polarity::Closed));
    let tail = [(n - 2, Polarity::Closed), (n - 1, Polarity::Closed)];
    for q in 0..n.saturating_sub(2) {
        b.push(Gate::mcx(&tail, q));
    }
    Ok(b.finish()?)
}

/// Column-amplitude oracle `O_P|0^n⟩|j⟩ = Σ_k √P_jk |k⟩|j⟩` for the symmetric
/// circulant chain: state preparation on the first register followed by the
/// controlled-shift adder driven by the second register.
pub fn op_oracle(alpha: f64, beta: f64, gamma: f64, n: usize) -> Result<Circuit, EncodingError> {
    let k = prep_circuit(alpha, beta, gamma, n)?;
    let mut b = Circuit::builder(2 * n);
    b.append(&k, 0);
    b.extend(add_register(n)?.gates().iter().cloned());
    Ok(b.finish()?)
}

/// Ancilla-zero reflector `Z_Π = 2|0^m⟩⟨0^m|⊗I − I`: +1 on the subspace where
/// the top `m` qubits are zero, −1 elsewhere.
pub fn reflector_zpi(m: usize, n: usize) -> Circuit {
    let width = m + n;
    if m == 0 {
        return Circuit::empty(width);
    }
    let controls: Vec<(usize, Polarity)> = (1..m).map(|q| (q, Polarity::Open)).collect();
    let gates = vec![
        Gate::x(0),
        Gate::z(0).with_controls(&controls),
        Gate::x(0),
        Gate::phase_z(0, std::f64::consts::PI),
    ];
    Circuit::new(width, gates).expect("static construction")
}

/// The oracle, encoding and reflector of one quantum walk instance.
#[derive(Debug, Clone)]
pub struct WalkOperators {
    pub op: Circuit,
    pub up: BlockEncoding,
    pub zpi: Circuit,
    pub n: usize,
}

/// Scale-one Hermitian encoding `U_P = O_P† · SWAP · O_P` of the symmetric
/// circulant chain; rejects asymmetric weights (use [`discriminant`] and the
/// dense path for reversible chains instead).
pub fn up_encoding(
    alpha: f64,
    beta: f64,
    gamma: f64,
    n: usize,
) -> Result<WalkOperators, EncodingError> {
    validate_walk_weights(alpha, beta, gamma)?;
    if (beta - gamma).abs() > 1e-12 {
        return Err(EncodingError::InvalidParameters(
            "chain is not symmetric (beta != gamma); encode its discriminant instead".into(),
        ));
    }
    let op = op_oracle(alpha, beta, gamma, n)?;
    let mut swap = Circuit::builder(2 * n);
    for i in 0..n {
        swap.push(Gate::swap(i, n + i));
    }
    let swap = swap.finish()?;
    let circuit = op.then(&swap)?.then(&op.adjoint())?;
    let up = BlockEncoding::new(circuit, n, n, 1.0, true)?;
    Ok(WalkOperators {
        op,
        up,
        zpi: reflector_zpi(n, n),
        n,
    })
}

/// `k` applications of `U_P Z_Π`, a scale-one block encoding of `T_k(P)`.
pub fn walk_operator(w: &WalkOperators, k: usize) -> Result<BlockEncoding, EncodingError> {
    if k == 0 {
        return Err(EncodingError::InvalidParameters("k must be >= 1".into()));
    }
    let step = w.zpi.then(w.up.circuit())?;
    Ok(BlockEncoding::new(step.repeated(k), w.n, w.n, 1.0, false)?)
}

/// The two-reflection walk `U_Z = R_{Π₂} R_{Π₁}` written as
/// `(SWAP · O_P Z_Π O_P†)²`.
pub fn szegedy_operator(w: &WalkOperators) -> Result<Circuit, EncodingError> {
    let reflect = w.op.adjoint().then(&w.zpi)?.then(&w.op)?;
    let mut swap = Circuit::builder(2 * w.n);
    for i in 0..w.n {
        swap.push(Gate::swap(i, w.n + i));
    }
    let swap = swap.finish()?;
    let half = reflect.then(&swap)?;
    Ok(half.repeated(2))
}

/// Max-norm deviation of `O_P† U_Z O_P` from `(U_P Z_Π)²`.
pub fn szegedy_equivalence_error(w: &WalkOperators) -> Result<f64, EncodingError> {
    use crate::sim::circuit_unitary;
    let uz = circuit_unitary(&szegedy_operator(w)?);
    let op = circuit_unitary(&w.op);
    let conjugated = linalg::adjoint(&op).dot(&uz).dot(&op);
    let two_steps = circuit_unitary(&walk_operator(w, 2)?.circuit().clone());
    Ok(linalg::max_abs_diff(&conjugated, &two_steps))
}

pub fn szegedy_equivalence_check(w: &WalkOperators) -> Result<bool, EncodingError> {
    Ok(szegedy_equivalence_error(w)? <= crate::DEFAULT_TOL)
}
