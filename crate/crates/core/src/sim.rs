//! Exact dense simulation: statevector application, gate embeddings and full
//! circuit unitaries.
//!
//! Basis convention: qubit 0 is the most significant bit of the basis index.
//! A controlled gate acts as `Σ_p |p⟩⟨p| ⊗ op` over matching control patterns
//! plus identity on the rest.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::circuit::Circuit;
use crate::error::CircuitError;
use crate::gate::{Gate, GateKind, Polarity};

pub type StateVector = Array1<Complex64>;
pub type UnitaryMatrix = Array2<Complex64>;

/// `|index⟩` on `width` qubits.
pub fn basis_state(width: usize, index: usize) -> StateVector {
    let mut v = Array1::zeros(1 << width);
    v[index] = Complex64::new(1.0, 0.0);
    v
}

#[inline]
fn bit_mask(width: usize, qubit: usize) -> usize {
    1 << (width - 1 - qubit)
}

#[inline]
fn controls_match(basis: usize, controls: &[(usize, Polarity)], width: usize) -> bool {
    controls.iter().all(|&(q, pol)| {
        let bit = basis & bit_mask(width, q) != 0;
        match pol {
            Polarity::Closed => bit,
            Polarity::Open => !bit,
        }
    })
}

/// Applies one gate in place. The gate must already be valid for `width`.
pub(crate) fn apply_gate(state: &mut [Complex64], gate: &Gate, width: usize) {
    let dim = 1usize << width;
    match gate.kind() {
        GateKind::Swap => {
            let a = bit_mask(width, gate.targets()[0]);
            let b = bit_mask(width, gate.targets()[1]);
            for idx in 0..dim {
                if idx & a != 0 && idx & b == 0 && controls_match(idx, gate.controls(), width) {
                    let partner = idx ^ a ^ b;
                    state.swap(idx, partner);
                }
            }
        }
        kind => {
            let u = kind.matrix2().expect("single-qubit kind");
            let t = bit_mask(width, gate.targets()[0]);
            for idx in 0..dim {
                if idx & t == 0 && controls_match(idx, gate.controls(), width) {
                    let partner = idx | t;
                    let lo = state[idx];
                    let hi = state[partner];
                    state[idx] = u[0][0] * lo + u[0][1] * hi;
                    state[partner] = u[1][0] * lo + u[1][1] * hi;
                }
            }
        }
    }
}

/// Applies a circuit to a state, gate by gate.
pub fn apply(circuit: &Circuit, state: &StateVector) -> Result<StateVector, CircuitError> {
    if state.len() != circuit.dim() {
        return Err(CircuitError::DimensionMismatch {
            expected: circuit.dim(),
            got: state.len(),
        });
    }
    let mut out = state.to_vec();
    for g in circuit.gates() {
        apply_gate(&mut out, g, circuit.width());
    }
    Ok(Array1::from_vec(out))
}

/// Dense `2^width` embedding of a single gate.
pub fn gate_unitary(gate: &Gate, width: usize) -> Result<UnitaryMatrix, CircuitError> {
    gate.validate(width)?;
    let dim = 1usize << width;
    let mut u = Array2::zeros((dim, dim));
    let mut col = vec![Complex64::new(0.0, 0.0); dim];
    for j in 0..dim {
        col.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        col[j] = Complex64::new(1.0, 0.0);
        apply_gate(&mut col, gate, width);
        for i in 0..dim {
            u[[i, j]] = col[i];
        }
    }
    Ok(u)
}

/// Dense unitary of a whole circuit: the ordered product of its gate
/// embeddings, first gate applied first (rightmost factor).
pub fn circuit_unitary(circuit: &Circuit) -> UnitaryMatrix {
    let dim = circuit.dim();
    let mut u = Array2::zeros((dim, dim));
    let mut col = vec![Complex64::new(0.0, 0.0); dim];
    for j in 0..dim {
        col.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        col[j] = Complex64::new(1.0, 0.0);
        for g in circuit.gates() {
            apply_gate(&mut col, g, circuit.width());
        }
        for i in 0..dim {
            u[[i, j]] = col[i];
        }
    }
    u
}
