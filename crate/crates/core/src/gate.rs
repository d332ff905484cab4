//! Gate primitives.
//!
//! A [`Gate`] is a base operation on one or two target qubits together with a
//! list of polarity-tagged controls. Multi-controlled gates are ordinary gates
//! with a non-empty control list, so controlled-NOT, Toffoli and
//! multi-controlled rotations all share one representation.

use num_complex::Complex64;

use crate::error::CircuitError;

/// Base operation applied to the target qubit(s) when all controls match.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    /// Rotation about the Y axis, `e^{-i θ Y / 2}`:
    /// `[[cos(θ/2), -sin(θ/2)], [sin(θ/2), cos(θ/2)]]`.
    Ry(f64),
    /// Rotation about the Z axis with the half-angle convention,
    /// `e^{-i φ Z / 2} = diag(e^{-iφ/2}, e^{iφ/2})`.
    Rz(f64),
    /// Full-angle Z phase, `e^{-i φ Z} = diag(e^{-iφ}, e^{iφ})`.
    ///
    /// Kept distinct from [`GateKind::Rz`] so the two conventions cannot be
    /// confused: `PhaseZ(φ) == Rz(2φ)`. `PhaseZ(π) = -I` acts as a global
    /// sign, which matters inside controlled gates.
    PhaseZ(f64),
    /// Exchange of two target qubits.
    Swap,
}

impl GateKind {
    /// 2x2 matrix of a single-qubit kind; `None` for `Swap`.
    pub fn matrix2(&self) -> Option<[[Complex64; 2]; 2]> {
        let r = |x: f64| Complex64::new(x, 0.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match *self {
            GateKind::H => Some([[r(s), r(s)], [r(s), r(-s)]]),
            GateKind::X => Some([[r(0.0), r(1.0)], [r(1.0), r(0.0)]]),
            GateKind::Y => Some([
                [r(0.0), Complex64::new(0.0, -1.0)],
                [Complex64::new(0.0, 1.0), r(0.0)],
            ]),
            GateKind::Z => Some([[r(1.0), r(0.0)], [r(0.0), r(-1.0)]]),
            GateKind::Ry(t) => {
                let (sn, cs) = (t / 2.0).sin_cos();
                Some([[r(cs), r(-sn)], [r(sn), r(cs)]])
            }
            GateKind::Rz(t) => Some([
                [Complex64::from_polar(1.0, -t / 2.0), r(0.0)],
                [r(0.0), Complex64::from_polar(1.0, t / 2.0)],
            ]),
            GateKind::PhaseZ(t) => Some([
                [Complex64::from_polar(1.0, -t), r(0.0)],
                [r(0.0), Complex64::from_polar(1.0, t)],
            ]),
            GateKind::Swap => None,
        }
    }

    fn parameter(&self) -> Option<f64> {
        match *self {
            GateKind::Ry(t) | GateKind::Rz(t) | GateKind::PhaseZ(t) => Some(t),
            _ => None,
        }
    }
}

/// Control polarity: `Closed` fires on `|1⟩`, `Open` fires on `|0⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Open,
    Closed,
}

/// One primitive operation of a circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    targets: Vec<usize>,
    controls: Vec<(usize, Polarity)>,
}

impl Gate {
    pub fn new(kind: GateKind, targets: Vec<usize>, controls: Vec<(usize, Polarity)>) -> Self {
        Gate {
            kind,
            targets,
            controls,
        }
    }

    pub fn h(q: usize) -> Self {
        Gate::new(GateKind::H, vec![q], vec![])
    }
    pub fn x(q: usize) -> Self {
        Gate::new(GateKind::X, vec![q], vec![])
    }
    pub fn y(q: usize) -> Self {
        Gate::new(GateKind::Y, vec![q], vec![])
    }
    pub fn z(q: usize) -> Self {
        Gate::new(GateKind::Z, vec![q], vec![])
    }
    pub fn ry(q: usize, theta: f64) -> Self {
        Gate::new(GateKind::Ry(theta), vec![q], vec![])
    }
    pub fn rz(q: usize, phi: f64) -> Self {
        Gate::new(GateKind::Rz(phi), vec![q], vec![])
    }
    pub fn phase_z(q: usize, phi: f64) -> Self {
        Gate::new(GateKind::PhaseZ(phi), vec![q], vec![])
    }
    pub fn swap(a: usize, b: usize) -> Self {
        Gate::new(GateKind::Swap, vec![a, b], vec![])
    }

    /// Closed-controlled NOT.
    pub fn cx(control: usize, target: usize) -> Self {
        Gate::x(target).with_control(control, Polarity::Closed)
    }

    /// Multi-controlled X with explicit polarities.
    pub fn mcx(controls: &[(usize, Polarity)], target: usize) -> Self {
        Gate::new(GateKind::X, vec![target], controls.to_vec())
    }

    /// Multi-controlled Y rotation.
    pub fn mcry(controls: &[(usize, Polarity)], target: usize, theta: f64) -> Self {
        Gate::new(GateKind::Ry(theta), vec![target], controls.to_vec())
    }

    /// Multi-controlled full-angle Z phase.
    pub fn mcphase(controls: &[(usize, Polarity)], target: usize, phi: f64) -> Self {
        Gate::new(GateKind::PhaseZ(phi), vec![target], controls.to_vec())
    }

    pub fn with_control(mut self, qubit: usize, polarity: Polarity) -> Self {
        self.controls.push((qubit, polarity));
        self
    }

    pub fn with_controls(mut self, controls: &[(usize, Polarity)]) -> Self {
        self.controls.extend_from_slice(controls);
        self
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn controls(&self) -> &[(usize, Polarity)] {
        &self.controls
    }

    /// All qubits the gate touches.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets
            .iter()
            .copied()
            .chain(self.controls.iter().map(|&(q, _)| q))
    }

    /// Inverse gate: same controls, adjoint base operation.
    pub fn adjoint(&self) -> Gate {
        let kind = match self.kind {
            GateKind::Ry(t) => GateKind::Ry(-t),
            GateKind::Rz(t) => GateKind::Rz(-t),
            GateKind::PhaseZ(t) => GateKind::PhaseZ(-t),
            k => k,
        };
        Gate::new(kind, self.targets.clone(), self.controls.clone())
    }

    /// Gate with every qubit index shifted by `offset`.
    pub fn shifted(&self, offset: usize) -> Gate {
        Gate::new(
            self.kind,
            self.targets.iter().map(|q| q + offset).collect(),
            self.controls
                .iter()
                .map(|&(q, p)| (q + offset, p))
                .collect(),
        )
    }

    /// Gate with qubit indices substituted through `map` (old index -> new index).
    pub fn remapped(&self, map: &[usize]) -> Gate {
        Gate::new(
            self.kind,
            self.targets.iter().map(|&q| map[q]).collect(),
            self.controls.iter().map(|&(q, p)| (map[q], p)).collect(),
        )
    }

    /// Checks target arity, qubit ranges, pairwise distinctness and parameter
    /// finiteness for a circuit of the given width.
    pub fn validate(&self, width: usize) -> Result<(), CircuitError> {
        let arity = match self.kind {
            GateKind::Swap => 2,
            _ => 1,
        };
        if self.targets.len() != arity {
            return Err(CircuitError::InvalidGate(format!(
                "{:?} expects {} target(s), got {}",
                self.kind,
                arity,
                self.targets.len()
            )));
        }
        if let Some(p) = self.kind.parameter() {
            if !p.is_finite() {
                return Err(CircuitError::NonFiniteParameter);
            }
        }
        let mut seen = Vec::with_capacity(self.targets.len() + self.controls.len());
        for q in self.qubits() {
            if q >= width {
                return Err(CircuitError::QubitOutOfRange { qubit: q, width });
            }
            if seen.contains(&q) {
                return Err(CircuitError::OverlappingQubits(q));
            }
            seen.push(q);
        }
        Ok(())
    }
}
