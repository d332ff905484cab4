//! The circuit intermediate representation: an ordered gate sequence on a
//! declared number of qubits.
//!
//! Qubit 0 is drawn on top and carries the **most significant** bit of a basis
//! index, so an integer `j` on an `n`-qubit register reads top-to-bottom as
//! `j_{n-1} … j_1 j_0`. Circuits are immutable once built; all combinators
//! return new circuits.

use crate::error::CircuitError;
use crate::gate::{Gate, Polarity};

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    /// Builds a circuit after validating every gate against `width`.
    pub fn new(width: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        for g in &gates {
            g.validate(width)?;
        }
        Ok(Circuit { width, gates })
    }

    pub fn empty(width: usize) -> Self {
        Circuit {
            width,
            gates: Vec::new(),
        }
    }

    pub fn builder(width: usize) -> CircuitBuilder {
        CircuitBuilder {
            width,
            gates: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dim(&self) -> usize {
        1 << self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Circuit whose unitary is the Hermitian conjugate of this one's:
    /// reversed gate order, each gate inverted.
    pub fn adjoint(&self) -> Circuit {
        Circuit {
            width: self.width,
            gates: self.gates.iter().rev().map(Gate::adjoint).collect(),
        }
    }

    /// Adds the given controls to every gate. Fails if a control qubit
    /// collides with a qubit already used by some gate.
    pub fn controlled(&self, controls: &[(usize, Polarity)]) -> Result<Circuit, CircuitError> {
        let gates: Vec<Gate> = self
            .gates
            .iter()
            .map(|g| g.clone().with_controls(controls))
            .collect();
        Circuit::new(self.width, gates)
    }

    /// Embeds the circuit into `width` qubits with all indices shifted up by
    /// `offset`.
    pub fn tensor_pad(&self, offset: usize, width: usize) -> Result<Circuit, CircuitError> {
        if offset + self.width > width {
            return Err(CircuitError::WidthMismatch {
                expected: offset + self.width,
                got: width,
            });
        }
        let gates = self.gates.iter().map(|g| g.shifted(offset)).collect();
        Circuit::new(width, gates)
    }

    /// Embeds the circuit into `width` qubits sending old qubit `q` to
    /// `map[q]`. The map must be injective.
    pub fn remap(&self, map: &[usize], width: usize) -> Result<Circuit, CircuitError> {
        if map.len() != self.width {
            return Err(CircuitError::InvalidRemap(format!(
                "map length {} != circuit width {}",
                map.len(),
                self.width
            )));
        }
        let mut seen = vec![false; width];
        for &m in map {
            if m >= width {
                return Err(CircuitError::QubitOutOfRange {
                    qubit: m,
                    width,
                });
            }
            if seen[m] {
                return Err(CircuitError::InvalidRemap(format!(
                    "duplicate image qubit {m}"
                )));
            }
            seen[m] = true;
        }
        let gates = self.gates.iter().map(|g| g.remapped(map)).collect();
        Circuit::new(width, gates)
    }

    /// `self` followed by `other` (both on the same width).
    pub fn then(&self, other: &Circuit) -> Result<Circuit, CircuitError> {
        if self.width != other.width {
            return Err(CircuitError::WidthMismatch {
                expected: self.width,
                got: other.width,
            });
        }
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&other.gates);
        Ok(Circuit {
            width: self.width,
            gates,
        })
    }

    /// The circuit repeated `k` times.
    pub fn repeated(&self, k: usize) -> Circuit {
        let mut gates = Vec::with_capacity(self.gates.len() * k);
        for _ in 0..k {
            gates.extend_from_slice(&self.gates);
        }
        Circuit {
            width: self.width,
            gates,
        }
    }
}

/// Incremental construction; `finish` validates and freezes.
pub struct CircuitBuilder {
    width: usize,
    gates: Vec<Gate>,
}

impl CircuitBuilder {
    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.gates.push(gate);
        self
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> &mut Self {
        self.gates.extend(gates);
        self
    }

    /// Appends another circuit's gates shifted by `offset`.
    pub fn append(&mut self, circuit: &Circuit, offset: usize) -> &mut Self {
        self.gates
            .extend(circuit.gates().iter().map(|g| g.shifted(offset)));
        self
    }

    pub fn finish(self) -> Result<Circuit, CircuitError> {
        Circuit::new(self.width, self.gates)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::circuit_unitary;
    use crate::linalg::max_abs_diff;

    #[test]
    fn adjoint_is_involution() {
        let mut b = Circuit::builder(2);
        b.push(Gate::h(0)).push(Gate::cx(0, 1)).push(Gate::ry(1, 0.4));
        let c = b.finish().unwrap();
        let back = c.adjoint().adjoint();
        assert!(max_abs_diff(&circuit_unitary(&c), &circuit_unitary(&back)) < 1e-15);
    }

    #[test]
    fn controlled_with_zero_controls_is_identity_transform() {
        let mut b = Circuit::builder(2);
        b.push(Gate::h(0)).push(Gate::cx(0, 1));
        let c = b.finish().unwrap();
        let cc = c.controlled(&[]).unwrap();
        assert_eq!(c, cc);
    }

    #[test]
    fn controlled_rejects_collisions() {
        let c = Circuit::new(2, vec![Gate::h(0)]).unwrap();
        assert!(c.controlled(&[(0, Polarity::Closed)]).is_err());
    }

    #[test]
    fn remap_rejects_duplicates() {
        let c = Circuit::new(2, vec![Gate::cx(0, 1)]).unwrap();
        assert!(c.remap(&[1, 1], 3).is_err());
        assert!(c.remap(&[2, 0], 3).is_ok());
    }
}
