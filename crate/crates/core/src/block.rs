//! Block encodings: a circuit claiming `(⟨0^m| ⊗ I) U (|0^m⟩ ⊗ I) = A / scale`
//! under the ancillas-first qubit layout, plus extraction and verification.

use ndarray::{s, Array2};
use num_complex::Complex64;

use crate::circuit::Circuit;
use crate::error::CircuitError;
use crate::linalg::{hermiticity_residual, spectral_norm, unitarity_residual};
use crate::sim::{circuit_unitary, UnitaryMatrix};

/// A circuit together with its block-encoding metadata.
///
/// `circuit.width() == n + m`; the `m` ancillas occupy the top (most
/// significant) wires, so the encoded block is the upper-left `2^n` corner of
/// the unitary. `scale` is the factor `α` in `A = α · block`.
#[derive(Debug, Clone)]
pub struct BlockEncoding {
    circuit: Circuit,
    n: usize,
    m: usize,
    scale: f64,
    hermitian: bool,
}

impl BlockEncoding {
    pub fn new(
        circuit: Circuit,
        n: usize,
        m: usize,
        scale: f64,
        hermitian: bool,
    ) -> Result<Self, CircuitError> {
        if circuit.width() != n + m {
            return Err(CircuitError::WidthMismatch {
                expected: n + m,
                got: circuit.width(),
            });
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(CircuitError::NonFiniteParameter);
        }
        Ok(BlockEncoding {
            circuit,
            n,
            m,
            scale,
            hermitian,
        })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn system_qubits(&self) -> usize {
        self.n
    }

    pub fn ancilla_qubits(&self) -> usize {
        self.m
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn unitary(&self) -> UnitaryMatrix {
        circuit_unitary(&self.circuit)
    }

    /// The extracted `2^n × 2^n` block.
    pub fn block(&self) -> Array2<Complex64> {
        block_extract(&self.unitary(), self.m, self.n).expect("consistent dimensions")
    }

    /// Spectral-norm deviation `‖A − scale · block‖₂`.
    pub fn encoding_error(&self, a: &Array2<Complex64>) -> Result<f64, CircuitError> {
        encoding_error_of(&self.unitary(), self.m, self.n, self.scale, a)
    }

    /// `‖U†U − I‖_max` of the realized unitary.
    pub fn unitarity_residual(&self) -> f64 {
        unitarity_residual(&self.unitary())
    }

    /// `‖U − U†‖_max` of the realized unitary.
    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual(&self.unitary())
    }
}

/// Upper-left `2^n × 2^n` block of a `2^(m+n)` unitary (ancillas-first
/// layout).
pub fn block_extract(
    u: &UnitaryMatrix,
    m: usize,
    n: usize,
) -> Result<Array2<Complex64>, CircuitError> {
    let dim = u.nrows();
    if dim != u.ncols() || dim != (1usize << (m + n)) {
        return Err(CircuitError::NotPowerOfTwo(dim));
    }
    let nn = 1usize << n;
    Ok(u.slice(s![0..nn, 0..nn]).to_owned())
}

/// `‖A − scale · block_extract(U)‖₂`.
pub fn encoding_error_of(
    u: &UnitaryMatrix,
    m: usize,
    n: usize,
    scale: f64,
    a: &Array2<Complex64>,
) -> Result<f64, CircuitError> {
    let block = block_extract(u, m, n)?;
    if a.dim() != block.dim() {
        return Err(CircuitError::DimensionMismatch {
            expected: block.nrows(),
            got: a.nrows(),
        });
    }
    let diff = a - &block.mapv(|x| x * scale);
    Ok(spectral_norm(&diff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs_diff};

    #[test]
    fn extract_identity_block() {
        let u = identity(8);
        let b = block_extract(&u, 1, 2).unwrap();
        assert!(max_abs_diff(&b, &identity(4)) < 1e-15);
    }

    #[test]
    fn extract_rejects_bad_dimensions() {
        let u = identity(8);
        assert!(block_extract(&u, 1, 3).is_err());
    }

    #[test]
    fn exact_encoding_has_zero_error() {
        let be = BlockEncoding::new(Circuit::empty(3), 2, 1, 2.0, false).unwrap();
        let a = identity(4).mapv(|x| x * 2.0);
        assert!(be.encoding_error(&a).unwrap() < 1e-15);
    }
}
