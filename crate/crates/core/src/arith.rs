//! Reusable arithmetic circuit blocks: cyclic ±1 shifts, controlled shift
//! powers (register adder) and the multiply/divide-by-two swap ladders.
//!
//! All constructions are permutations of the computational basis and are
//! tested exhaustively against integer arithmetic.

use crate::circuit::Circuit;
use crate::error::CircuitError;
use crate::gate::{Gate, Polarity};

/// Cyclic incrementer `L`: `|j⟩ -> |j+1 mod 2^n⟩` on `n` qubits, built from a
/// carry cascade of multi-controlled NOTs (most significant bit flips first).
pub fn left_shift(n: usize) -> Result<Circuit, CircuitError> {
    if n == 0 {
        return Err(CircuitError::WidthMismatch {
            expected: 1,
            got: 0,
        });
    }
    let mut b = Circuit::builder(n);
    for target in 0..n {
        let controls: Vec<(usize, Polarity)> = ((target + 1)..n)
            .map(|q| (q, Polarity::Closed))
            .collect();
        b.push(Gate::mcx(&controls, target));
    }
    b.finish()
}

/// Cyclic decrementer `R = L†`: `|j⟩ -> |j-1 mod 2^n⟩`, the same cascade with
/// open controls (borrow instead of carry).
pub fn right_shift(n: usize) -> Result<Circuit, CircuitError> {
    if n == 0 {
        return Err(CircuitError::WidthMismatch {
            expected: 1,
            got: 0,
        });
    }
    let mut b = Circuit::builder(n);
    for target in 0..n {
        let controls: Vec<(usize, Polarity)> =
            ((target + 1)..n).map(|q| (q, Polarity::Open)).collect();
        b.push(Gate::mcx(&controls, target));
    }
    b.finish()
}

/// Verifies the shift-square identity `L_n² = L_{n-1} ⊗ I₂` numerically.
pub fn shift_square_identity_check(n: usize) -> Result<bool, CircuitError> {
    if n < 2 {
        return Err(CircuitError::WidthMismatch {
            expected: 2,
            got: n,
        });
    }
    use crate::linalg::{identity, kron, max_abs_diff};
    use crate::sim::circuit_unitary;
    let ln = circuit_unitary(&left_shift(n)?);
    let squared = ln.dot(&ln);
    let smaller = circuit_unitary(&left_shift(n - 1)?);
    let expect = kron(&smaller, &identity(2));
    Ok(max_abs_diff(&squared, &expect) < 1e-12)
}

/// Modular adder on two `n`-qubit registers: `|ℓ⟩|j⟩ -> |ℓ+j mod 2^n⟩|j⟩`.
///
/// Realized as `n` closed-controlled shift powers: bit `j_k` drives
/// `L_{n-k} ⊗ I` on the leading `n-k` qubits of the target register, so the
/// gate count is exactly `Σ_{k=1..n} k` multi-controlled NOTs.
pub fn add_register(n: usize) -> Result<Circuit, CircuitError> {
    if n == 0 {
        return Err(CircuitError::WidthMismatch {
            expected: 1,
            got: 0,
        });
    }
    let width = 2 * n;
    let mut b = Circuit::builder(width);
    for k in 0..n {
        // control wire for bit j_k (bit 0 = least significant = bottom wire)
        let control = width - 1 - k;
        let block = left_shift(n - k)?;
        for g in block.gates() {
            b.push(g.clone().with_control(control, Polarity::Closed));
        }
    }
    b.finish()
}

/// Subtracting adjoint of [`add_register`].
pub fn sub_register(n: usize) -> Result<Circuit, CircuitError> {
    Ok(add_register(n)?.adjoint())
}

/// Doubling map on a carry qubit plus `n` data qubits:
/// `|0⟩|j⟩ -> |j div 2^{n-1}⟩|2j mod 2^n⟩`, an adjacent-SWAP ladder that
/// cyclically rotates the `n+1` bits left. The carry sits on top (most
/// significant), which the tree-structure oracle relies on.
pub fn mul2(n_plus_1: usize) -> Result<Circuit, CircuitError> {
    if n_plus_1 < 2 {
        return Err(CircuitError::WidthMismatch {
            expected: 2,
            got: n_plus_1,
        });
    }
    let mut b = Circuit::builder(n_plus_1);
    for q in 0..(n_plus_1 - 1) {
        b.push(Gate::swap(q, q + 1));
    }
    b.finish()
}

/// Halving map, the reversed ladder: on even `|0⟩|j⟩` it yields `|0⟩|j/2⟩`;
/// on odd input the carry ends in `|1⟩`. `div2 ∘ mul2 = I`.
pub fn div2(n_plus_1: usize) -> Result<Circuit, CircuitError> {
    Ok(mul2(n_plus_1)?.adjoint())
}
