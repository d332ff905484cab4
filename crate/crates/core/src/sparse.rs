//! Standard (non-Hermitian) block encodings of `A/s` for the structured
//! families: banded circulant, tridiagonal, extended binary tree and the
//! dense symmetric 2x2 case.
//!
//! Every encoding is assembled as `(I⊗D_s⊗I)(I⊗O_C) O_A (I⊗D_s⊗I)` with a
//! value-flag qubit on top, the index ancillas below it and the data register
//! at the bottom. The diffusion operator `D_s` is a layer of Hadamards over
//! the `m` index ancillas, so the realized block is `A / 2^m`.

use crate::arith::{div2, left_shift, mul2, right_shift};
use crate::block::BlockEncoding;
use crate::circuit::Circuit;
use crate::error::EncodingError;
use crate::gate::{Gate, Polarity};

use Polarity::{Closed, Open};

/// Which nonzero the index value `ℓ = 0` selects in the circulant column map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OcOrdering {
    /// `ℓ = 0` maps to the superdiagonal (`j-1`), `ℓ = 2` to the
    /// subdiagonal; `ℓ = 1` and `3` leave the column index alone.
    SuperdiagFirst,
    /// `ℓ = 0` and `3` are the diagonal slots, `ℓ = 1` the subdiagonal,
    /// `ℓ = 2` the superdiagonal. Admits the simplified one-control
    /// shift pair (the two shifts cancel on `ℓ = 3`).
    DiagFirst,
}

/// How the value oracle realizes its bank of controlled rotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OaStyle {
    /// One multi-controlled `Ry` per index pattern.
    MultiControlled,
    /// A single uniformly controlled rotation (CNOT/Ry ladder).
    UniformlyControlled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CirculantVariant {
    Cyclic,
    Tridiagonal,
}

/// Parameters of the banded circulant family.
#[derive(Debug, Clone, Copy)]
pub struct CirculantParams {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub variant: CirculantVariant,
    pub oc_ordering: OcOrdering,
    pub oa_style: OaStyle,
}

impl CirculantParams {
    pub fn new(n: usize, alpha: f64, beta: f64, gamma: f64) -> Result<Self, EncodingError> {
        if n < 2 {
            return Err(EncodingError::InvalidParameters(format!(
                "circulant family needs n >= 2, got {n}"
            )));
        }
        for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(EncodingError::InvalidParameters(format!(
                    "{name} = {v} outside (0, 1)"
                )));
            }
        }
        Ok(CirculantParams {
            n,
            alpha,
            beta,
            gamma,
            variant: CirculantVariant::Cyclic,
            oc_ordering: OcOrdering::DiagFirst,
            oa_style: OaStyle::UniformlyControlled,
        })
    }

    pub fn with_variant(mut self, v: CirculantVariant) -> Self {
        self.variant = v;
        self
    }

    pub fn with_ordering(mut self, o: OcOrdering) -> Self {
        self.oc_ordering = o;
        self
    }

    pub fn with_style(mut self, s: OaStyle) -> Self {
        self.oa_style = s;
        self
    }
}

/// Parameters of the extended-binary-tree family.
#[derive(Debug, Clone, Copy)]
pub struct EbtreeParams {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EbtreeParams {
    pub fn new(n: usize, alpha: f64, beta: f64, gamma: f64) -> Result<Self, EncodingError> {
        if n < 2 {
            return Err(EncodingError::InvalidParameters(format!(
                "tree family needs n >= 2, got {n}"
            )));
        }
        for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(EncodingError::InvalidParameters(format!(
                    "{name} = {v} outside (0, 1)"
                )));
            }
        }
        Ok(EbtreeParams {
            n,
            alpha,
            beta,
            gamma,
        })
    }
}

/// Parameters of the symmetric 2x2 example.
#[derive(Debug, Clone, Copy)]
pub struct Sym2x2Params {
    pub alpha1: f64,
    pub alpha2: f64,
}

impl Sym2x2Params {
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self, EncodingError> {
        for (name, v) in [("alpha1", alpha1), ("alpha2", alpha2)] {
            if v.abs() > 1.0 {
                return Err(EncodingError::InvalidParameters(format!(
                    "|{name}| = {} exceeds 1",
                    v.abs()
                )));
            }
        }
        Ok(Sym2x2Params { alpha1, alpha2 })
    }
}

/// `2·arccos(x)` with an explicit domain check.
fn rotation_angle(x: f64) -> Result<f64, EncodingError> {
    if x.abs() > 1.0 {
        return Err(EncodingError::InfeasibleAngle { value: x });
    }
    Ok(2.0 * x.acos())
}

/// Assembles `(I⊗D_s⊗I)(I⊗O_C) O_A (I⊗D_s⊗I)` into a block encoding.
///
/// `oa` acts on the full `1 + oc.width` qubits (flag on top); `oc` acts on
/// the index ancillas plus the data register. `m` is the number of diffusion
/// qubits, so the scale is `s = 2^m`; the ancilla count of the result is
/// everything above the `n` data qubits (flag, index qubits and any working
/// ancilla inside `oc`).
pub fn assemble_sparse_encoding(
    oc: &Circuit,
    oa: &Circuit,
    m: usize,
    n: usize,
) -> Result<BlockEncoding, EncodingError> {
    if oa.width() != oc.width() + 1 {
        return Err(EncodingError::Circuit(
            crate::error::CircuitError::WidthMismatch {
                expected: oc.width() + 1,
                got: oa.width(),
            },
        ));
    }
    if m + n > oc.width() {
        return Err(EncodingError::InvalidParameters(format!(
            "oc width {} too small for {m} index and {n} data qubits",
            oc.width()
        )));
    }
    let width = oa.width();
    let mut b = Circuit::builder(width);
    for q in 1..=m {
        b.push(Gate::h(q));
    }
    b.append(oa, 0);
    b.append(oc, 1);
    for q in 1..=m {
        b.push(Gate::h(q));
    }
    let circuit = b.finish()?;
    Ok(BlockEncoding::new(
        circuit,
        n,
        width - n,
        (1u64 << m) as f64,
        false,
    )?)
}

/// Column-index oracle for the circulant family: controlled cyclic shifts on
/// the data register, `O_C|ℓ⟩|j⟩ = |ℓ⟩|c(j,ℓ)⟩`.
pub fn circulant_oc(p: &CirculantParams) -> Result<Circuit, EncodingError> {
    let n = p.n;
    let width = 2 + n;
    let data_left = left_shift(n)?.tensor_pad(2, width)?;
    let data_right = right_shift(n)?.tensor_pad(2, width)?;
    let circuit = match p.oc_ordering {
        OcOrdering::SuperdiagFirst => {
            // R fires on ℓ=00, L on ℓ=10
            let r = data_right.controlled(&[(0, Open), (1, Open)])?;
            let l = data_left.controlled(&[(0, Closed), (1, Open)])?;
            r.then(&l)?
        }
        OcOrdering::DiagFirst => {
            // simplified pair: L on ℓ0=1, R on ℓ1=1; they cancel on ℓ=11
            let l = data_left.controlled(&[(1, Closed)])?;
            let r = data_right.controlled(&[(0, Closed)])?;
            l.then(&r)?
        }
    };
    Ok(circuit)
}

/// Index-to-angle assignment for the circulant value oracle, in slot order
/// `ℓ = 0, 1, 2` (the fourth slot stays at angle zero).
fn circulant_angles(p: &CirculantParams) -> Result<[f64; 3], EncodingError> {
    // The diagonal slot shares its value with the silent fourth slot, whose
    // amplitude is 1, so it encodes `alpha - 1` instead of `alpha`.
    match p.oc_ordering {
        OcOrdering::SuperdiagFirst => Ok([
            rotation_angle(p.gamma)?,
            rotation_angle(p.alpha - 1.0)?,
            rotation_angle(p.beta)?,
        ]),
        OcOrdering::DiagFirst => Ok([
            rotation_angle(p.alpha - 1.0)?,
            rotation_angle(p.beta)?,
            rotation_angle(p.gamma)?,
        ]),
    }
}

/// Value oracle for the circulant family: rotations on the flag qubit
/// conditioned on the two index qubits.
pub fn circulant_oa(p: &CirculantParams) -> Result<Circuit, EncodingError> {
    let width = 3 + p.n;
    let [t0, t1, t2] = circulant_angles(p)?;
    match p.oa_style {
        OaStyle::MultiControlled => {
            let mut b = Circuit::builder(width);
            b.push(Gate::mcry(&[(1, Open), (2, Open)], 0, t0));
            b.push(Gate::mcry(&[(1, Open), (2, Closed)], 0, t1));
            b.push(Gate::mcry(&[(1, Closed), (2, Open)], 0, t2));
            Ok(b.finish()?)
        }
        OaStyle::UniformlyControlled => {
            Ok(ucr_ry(&[t0, t1, t2, 0.0])?.tensor_pad(0, width)?)
        }
    }
}

/// Uniformly controlled Y rotation: an alternating `Ry`/CNOT ladder on
/// `1 + k` qubits (target on top) whose action conditioned on control basis
/// state `ℓ` is `Ry(θ_ℓ)`.
///
/// The ladder angles are the Walsh-Hadamard transform of `θ` in Gray-code
/// order, `φ_i = 2^{-k} Σ_ℓ (-1)^{⟨ℓ, g_i⟩} θ_ℓ`.
pub fn ucr_ry(thetas: &[f64]) -> Result<Circuit, EncodingError> {
    let len = thetas.len();
    if len == 0 || !len.is_power_of_two() {
        return Err(EncodingError::InvalidParameters(format!(
            "angle list length {len} is not a power of two"
        )));
    }
    let k = len.trailing_zeros() as usize;
    let mut phis = vec![0.0; len];
    for (i, phi) in phis.iter_mut().enumerate() {
        let gray = i ^ (i >> 1);
        let mut acc = 0.0;
        for (l, &theta) in thetas.iter().enumerate() {
            let sign = if ((l & gray).count_ones() & 1) == 1 {
                -1.0
            } else {
                1.0
            };
            acc += sign * theta;
        }
        *phi = acc / len as f64;
    }
    let mut b = Circuit::builder(1 + k);
    if k == 0 {
        b.push(Gate::ry(0, phis[0]));
        return Ok(b.finish()?);
    }
    for (i, &phi) in phis.iter().enumerate() {
        b.push(Gate::ry(0, phi));
        let next_gray = ((i + 1) % len) ^ (((i + 1) % len) >> 1);
        let change = (i ^ (i >> 1)) ^ next_gray;
        let bit = change.trailing_zeros() as usize;
        // control bit b lives on qubit 1 + (k-1-b)
        b.push(Gate::cx(1 + (k - 1 - bit), 0));
    }
    Ok(b.finish()?)
}

/// Full block encoding of the banded circulant matrix at scale 4.
pub fn circulant_encoding(p: &CirculantParams) -> Result<BlockEncoding, EncodingError> {
    let oc = circulant_oc(p)?;
    let oa = match p.variant {
        CirculantVariant::Cyclic => circulant_oa(p)?,
        CirculantVariant::Tridiagonal => {
            let base = circulant_oa(p)?;
            let extra = tridiagonal_corner_gates(p)?;
            base.then(&Circuit::new(base.width(), extra)?)?
        }
    };
    assemble_sparse_encoding(&oc, &oa, 2, p.n)
}

/// The two fully controlled rotations that cancel the cyclic corner entries:
/// composing them with the band rotations gives total angle π (flag amplitude
/// zero) exactly on the wrap-around index patterns.
fn tridiagonal_corner_gates(p: &CirculantParams) -> Result<Vec<Gate>, EncodingError> {
    let n = p.n;
    let [t0, t1, t2] = circulant_angles(p)?;
    // (subdiagonal slot, its angle) and (superdiagonal slot, its angle)
    let (sub_slot, sub_angle, sup_slot, sup_angle) = match p.oc_ordering {
        OcOrdering::SuperdiagFirst => (2usize, t2, 0usize, t0),
        OcOrdering::DiagFirst => (1usize, t1, 2usize, t2),
    };
    let pattern = |slot: usize| -> Vec<(usize, Polarity)> {
        vec![
            (1, if slot & 2 != 0 { Closed } else { Open }),
            (2, if slot & 1 != 0 { Closed } else { Open }),
        ]
    };
    let pi = std::f64::consts::PI;
    // subdiagonal wraps at j = N-1 (all data bits one), superdiagonal at j = 0
    let mut sub_controls = pattern(sub_slot);
    sub_controls.extend((0..n).map(|i| (3 + i, Closed)));
    let mut sup_controls = pattern(sup_slot);
    sup_controls.extend((0..n).map(|i| (3 + i, Open)));
    Ok(vec![
        Gate::mcry(&sub_controls, 0, pi - sub_angle),
        Gate::mcry(&sup_controls, 0, pi - sup_angle),
    ])
}

/// Block encoding of the tridiagonal variant (corners zeroed) at scale 4.
pub fn tridiagonal_encoding(p: &CirculantParams) -> Result<BlockEncoding, EncodingError> {
    circulant_encoding(&p.with_variant(CirculantVariant::Tridiagonal))
}

/// Block encoding of the symmetric 2x2 matrix at scale 2: Hadamard on the
/// index qubit, a two-angle uniformly controlled rotation on the flag, and a
/// CNOT as the whole column-index oracle.
pub fn sym2x2_encoding(p: &Sym2x2Params) -> Result<BlockEncoding, EncodingError> {
    let t1 = rotation_angle(p.alpha1)?;
    let t2 = rotation_angle(p.alpha2)?;
    let oa = ucr_ry(&[t1, t2])?.tensor_pad(0, 3)?;
    let oc = Circuit::new(2, vec![Gate::cx(0, 1)])?;
    assemble_sparse_encoding(&oc, &oa, 1, 1)
}

/// Column-index oracle for the extended binary tree: controlled doubling /
/// halving ladders plus ±1 shifts, with one working carry qubit that returns
/// to `|0⟩` exactly on the valid parent/child transitions.
///
/// Layout: three index qubits, the carry, then the `n`-qubit data register.
/// Index patterns `000..011` select left child, right child, even parent and
/// odd parent; patterns with the top index bit set leave the column alone.
pub fn ebtree_oc(p: &EbtreeParams) -> Result<Circuit, EncodingError> {
    let n = p.n;
    let width = 3 + 1 + n;
    let mul = mul2(n + 1)?.tensor_pad(3, width)?;
    let div = div2(n + 1)?.tensor_pad(3, width)?;
    let lsh = left_shift(n)?.tensor_pad(4, width)?;
    let rsh = right_shift(n)?.tensor_pad(4, width)?;
    let pat = |l2: Polarity, l1: Polarity, l0: Polarity| vec![(0, l2), (1, l1), (2, l0)];

    let mut b = Circuit::builder(width);
    for g in mul.controlled(&pat(Open, Open, Open))?.gates() {
        b.push(g.clone());
    }
    for g in mul.controlled(&pat(Open, Open, Closed))?.gates() {
        b.push(g.clone());
    }
    for g in lsh.controlled(&pat(Open, Open, Closed))?.gates() {
        b.push(g.clone());
    }
    for g in div.controlled(&pat(Open, Closed, Open))?.gates() {
        b.push(g.clone());
    }
    // odd parent: subtract one before halving
    for g in rsh.controlled(&pat(Open, Closed, Closed))?.gates() {
        b.push(g.clone());
    }
    for g in div.controlled(&pat(Open, Closed, Closed))?.gates() {
        b.push(g.clone());
    }
    Ok(b.finish()?)
}

/// Block encoding of the extended-binary-tree adjacency matrix at scale 8.
///
/// The four silent index slots each contribute a quarter of the diagonal
/// weight, and a fourth rotation fixes the root element, whose slots also
/// pick up two parent/child hits of `β`.
pub fn ebtree_encoding(p: &EbtreeParams) -> Result<BlockEncoding, EncodingError> {
    let n = p.n;
    let width = 1 + 3 + 1 + n;
    let t0 = rotation_angle(p.beta)?;
    let t1 = rotation_angle(p.alpha / 4.0)?;
    let t2 = rotation_angle(p.gamma / 4.0)?;
    let t3 = rotation_angle(p.gamma / 4.0 - p.beta / 2.0)? - t1;

    let msb_data = 5; // most significant data qubit
    let mut b = Circuit::builder(width);
    b.push(Gate::mcry(&[(1, Open)], 0, t0));
    b.push(Gate::mcry(&[(1, Closed), (msb_data, Open)], 0, t1));
    b.push(Gate::mcry(&[(1, Closed), (msb_data, Closed)], 0, t2));
    let mut root_controls = vec![(1, Closed)];
    root_controls.extend((0..n).map(|i| (msb_data + i, Open)));
    b.push(Gate::mcry(&root_controls, 0, t3));
    let oa = b.finish()?;

    let oc = ebtree_oc(p)?;
    assemble_sparse_encoding(&oc, &oa, 3, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{circulant_matrix, ebtree_matrix, sym2x2_matrix, tridiagonal_matrix};
    use crate::linalg::{max_abs_diff, to_complex, unitarity_residual};
    use crate::sim::{apply, basis_state, circuit_unitary, gate_unitary};
    use ndarray::Array2;
    use num_complex::Complex64;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c64(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn permutation_image(c: &Circuit, input: usize) -> usize {
        let out = apply(c, &basis_state(c.width(), input)).unwrap();
        let mut image = None;
        for (i, x) in out.iter().enumerate() {
            if x.norm() > 1e-9 {
                assert!(image.is_none());
                image = Some(i);
            }
        }
        image.unwrap()
    }

    fn cyc_map(ordering: OcOrdering, l: usize, j: usize, size: usize) -> usize {
        match ordering {
            OcOrdering::SuperdiagFirst => match l {
                0 => (j + size - 1) % size,
                2 => (j + 1) % size,
                _ => j,
            },
            OcOrdering::DiagFirst => match l {
                1 => (j + 1) % size,
                2 => (j + size - 1) % size,
                _ => j,
            },
        }
    }

    #[test]
    fn circulant_oc_exhaustive_table() {
        for ordering in [OcOrdering::SuperdiagFirst, OcOrdering::DiagFirst] {
            let p = CirculantParams::new(3, 0.5, 0.25, 0.25)
                .unwrap()
                .with_ordering(ordering);
            let oc = circulant_oc(&p).unwrap();
            for l in 0..4 {
                for j in 0..8 {
                    let out = permutation_image(&oc, l * 8 + j);
                    assert_eq!(out, l * 8 + cyc_map(ordering, l, j, 8), "l={l} j={j}");
                }
            }
        }
    }

    #[test]
    fn superdiag_ordering_sends_zero_to_seven() {
        let p = CirculantParams::new(3, 0.5, 0.25, 0.25)
            .unwrap()
            .with_ordering(OcOrdering::SuperdiagFirst);
        let oc = circulant_oc(&p).unwrap();
        assert_eq!(permutation_image(&oc, 0), 7); // ℓ=0, j=0 -> mod(-1, 8)
    }

    #[test]
    fn diag_ordering_fixes_ell_zero() {
        let p = CirculantParams::new(3, 0.5, 0.25, 0.25).unwrap();
        let oc = circulant_oc(&p).unwrap();
        for j in 0..8 {
            assert_eq!(permutation_image(&oc, j), j);
        }
    }

    #[test]
    fn circulant_rotation_angles() {
        let p = CirculantParams::new(3, 0.5, 0.25, 0.25).unwrap();
        let [t0, t1, _] = circulant_angles(&p).unwrap();
        assert!((t0 - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-14); // 2 acos(-0.5)
        assert!((t1 - 2.636232143305636).abs() < 1e-12); // 2 acos(0.25)
    }

    #[test]
    fn oa_styles_realize_identical_unitaries() {
        let base = CirculantParams::new(3, 0.5, 0.25, 0.25).unwrap();
        for ordering in [OcOrdering::SuperdiagFirst, OcOrdering::DiagFirst] {
            let mc = circulant_oa(&base.with_ordering(ordering).with_style(OaStyle::MultiControlled))
                .unwrap();
            let ucr = circulant_oa(
                &base
                    .with_ordering(ordering)
                    .with_style(OaStyle::UniformlyControlled),
            )
            .unwrap();
            assert!(max_abs_diff(&circuit_unitary(&mc), &circuit_unitary(&ucr)) < 1e-12);
        }
    }

    #[test]
    fn oa_flag_amplitude_has_predicted_cosines() {
        let p = CirculantParams::new(3, 0.6, 0.3, 0.2)
            .unwrap()
            .with_style(OaStyle::MultiControlled);
        let [t0, t1, t2] = circulant_angles(&p).unwrap();
        let u = circuit_unitary(&circulant_oa(&p).unwrap());
        for (l, t) in [(0usize, t0), (1, t1), (2, t2), (3, 0.0)] {
            for j in 0..8 {
                let idx = l * 8 + j; // flag 0
                let got = u[[idx, idx]];
                assert!((got - c64((t / 2.0).cos())).norm() < 1e-12, "l={l}");
            }
        }
    }

    #[test]
    fn ucr_solves_two_angle_relation() {
        let c = ucr_ry(&[std::f64::consts::PI / 3.0, std::f64::consts::PI / 6.0]).unwrap();
        let gates = c.gates();
        match gates[0].kind() {
            crate::gate::GateKind::Ry(t) => {
                assert!((t - std::f64::consts::PI / 4.0).abs() < 1e-14)
            }
            _ => panic!(),
        }
        match gates[2].kind() {
            crate::gate::GateKind::Ry(t) => {
                assert!((t - std::f64::consts::PI / 12.0).abs() < 1e-14)
            }
            _ => panic!(),
        }
    }

    #[test]
    fn ucr_equal_angles_become_single_rotation() {
        let c = ucr_ry(&[0.7, 0.7, 0.7, 0.7]).unwrap();
        for (i, g) in c.gates().iter().enumerate() {
            if let crate::gate::GateKind::Ry(t) = g.kind() {
                let want = if i == 0 { 0.7 } else { 0.0 };
                assert!((t - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn ucr_conditioned_action_matches_rotations() {
        let mut rng = StdRng::seed_from_u64(7);
        for k in [2usize, 3] {
            let len = 1 << k;
            let thetas: Vec<f64> = (0..len).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let u = circuit_unitary(&ucr_ry(&thetas).unwrap());
            for (l, &theta) in thetas.iter().enumerate() {
                let ry = gate_unitary(&Gate::ry(0, theta), 1).unwrap();
                for (ti, tj) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    let got = u[[ti * len + l, tj * len + l]];
                    assert!((got - ry[[ti, tj]]).norm() < 1e-12, "k={k} l={l}");
                }
            }
        }
    }

    #[test]
    fn ucr_rejects_bad_length() {
        assert!(ucr_ry(&[0.1, 0.2, 0.3]).is_err());
    }

    #[test]
    fn identity_oracles_encode_twice_identity() {
        // D_s O_C O_A D_s with trivial oracles collapses to the identity
        // unitary, i.e. an exact encoding of 2·I at scale 2.
        let oc = Circuit::empty(3);
        let oa = Circuit::empty(4);
        let be = assemble_sparse_encoding(&oc, &oa, 1, 2).unwrap();
        assert_eq!(be.scale(), 2.0);
        let block = be.block();
        assert!(max_abs_diff(&block, &crate::linalg::identity(4)) < 1e-12);
    }

    #[test]
    fn circulant_block_matches_reference() {
        let p = CirculantParams::new(3, 0.5, 0.25, 0.25).unwrap();
        let be = circulant_encoding(&p).unwrap();
        assert_eq!(be.scale(), 4.0);
        assert_eq!(be.ancilla_qubits(), 3);
        let a = to_complex(&circulant_matrix(3, 0.5, 0.25, 0.25));
        assert!(be.encoding_error(&a).unwrap() < 1e-12);
        assert!(be.unitarity_residual() < 1e-12);
    }

    #[test]
    fn circulant_all_style_combinations_agree() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..5 {
            let (al, be_, ga) = (
                rng.gen_range(0.05..0.95),
                rng.gen_range(0.05..0.95),
                rng.gen_range(0.05..0.95),
            );
            let a = to_complex(&circulant_matrix(3, al, be_, ga));
            for ordering in [OcOrdering::SuperdiagFirst, OcOrdering::DiagFirst] {
                for style in [OaStyle::MultiControlled, OaStyle::UniformlyControlled] {
                    let p = CirculantParams::new(3, al, be_, ga)
                        .unwrap()
                        .with_ordering(ordering)
                        .with_style(style);
                    let enc = circulant_encoding(&p).unwrap();
                    assert!(enc.encoding_error(&a).unwrap() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn perturbed_angle_breaks_encoding() {
        let p = CirculantParams::new(3, 0.5, 0.25, 0.25)
            .unwrap()
            .with_style(OaStyle::MultiControlled);
        let be = circulant_encoding(&p).unwrap();
        let mut gates: Vec<Gate> = be.circuit().gates().to_vec();
        for g in gates.iter_mut() {
            if let crate::gate::GateKind::Ry(t) = g.kind() {
                *g = Gate::new(crate::gate::GateKind::Ry(t + 0.1), g.targets().to_vec(), g.controls().to_vec());
                break;
            }
        }
        let tampered = BlockEncoding::new(
            Circuit::new(be.circuit().width(), gates).unwrap(),
            3,
            3,
            4.0,
            false,
        )
        .unwrap();
        let a = to_complex(&circulant_matrix(3, 0.5, 0.25, 0.25));
        assert!(tampered.encoding_error(&a).unwrap() > 1e-3);
    }

    #[test]
    fn tridiagonal_zeroes_corners_and_keeps_interior() {
        let p = CirculantParams::new(3, 0.5, 0.25, 0.25).unwrap();
        let be = tridiagonal_encoding(&p).unwrap();
        let block = be.block();
        assert!(block[[0, 7]].norm() < 1e-12);
        assert!(block[[7, 0]].norm() < 1e-12);
        let a = to_complex(&tridiagonal_matrix(3, 0.5, 0.25, 0.25));
        assert!(be.encoding_error(&a).unwrap() < 1e-12);
    }

    #[test]
    fn tridiagonal_corner_patterns_reach_angle_pi() {
        // flag amplitude on the wrap patterns is cos(π/2) = 0
        let p = CirculantParams::new(3, 0.5, 0.25, 0.25)
            .unwrap()
            .with_variant(CirculantVariant::Tridiagonal)
            .with_style(OaStyle::MultiControlled);
        let base = circulant_oa(&p).unwrap();
        let extra = tridiagonal_corner_gates(&p).unwrap();
        let oa = base
            .then(&Circuit::new(base.width(), extra).unwrap())
            .unwrap();
        let u = circuit_unitary(&oa);
        // DiagFirst: subdiagonal slot ℓ=1 at j=7, superdiagonal slot ℓ=2 at j=0
        let idx_sub = 8 + 7;
        let idx_sup = 2 * 8;
        assert!(u[[idx_sub, idx_sub]].norm() < 1e-12);
        assert!(u[[idx_sup, idx_sup]].norm() < 1e-12);
    }

    #[test]
    fn sym2x2_block_is_half_matrix() {
        let p = Sym2x2Params::new(0.6, 0.3).unwrap();
        let be = sym2x2_encoding(&p).unwrap();
        assert_eq!(be.scale(), 2.0);
        let block = be.block();
        let want = [[0.3, 0.15], [0.15, 0.3]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((block[[i, j]] - c64(want[i][j])).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn sym2x2_diagonal_case_gives_half_identity() {
        let p = Sym2x2Params::new(1.0, 0.0).unwrap();
        let block = sym2x2_encoding(&p).unwrap().block();
        assert!((block[[0, 0]] - c64(0.5)).norm() < 1e-12);
        assert!(block[[0, 1]].norm() < 1e-12);
    }

    fn ebtree_c_map(l: usize, j: usize, n: usize) -> (usize, usize) {
        // returns (carry, data) after the index map
        let size = 1usize << n;
        match l {
            0 => ((2 * j) / size, (2 * j) % size),
            1 => ((2 * j + 1) / size, (2 * j + 1) % size),
            2 => (j & 1, j >> 1),
            3 => {
                let d = (j + size - 1) % size;
                (d & 1, d >> 1)
            }
            _ => (0, j),
        }
    }

    #[test]
    fn ebtree_oc_tracks_tree_map() {
        let p = EbtreeParams::new(3, 0.5, 0.3, 0.4).unwrap();
        let oc = ebtree_oc(&p).unwrap();
        // spot values from the column map definition
        assert_eq!(permutation_image(&oc, 3), 6); // ℓ=000, j=3 -> 2j = 6
        assert_eq!(permutation_image(&oc, 3 * 16 + 5), 3 * 16 + 2); // odd parent of 5
        let out_carry = permutation_image(&oc, 2 * 16 + 5); // even-parent slot on odd j
        assert_eq!(out_carry & 8, 8, "carry must be set");
        // exhaustive where the carry stays clear
        for l in 0..8 {
            for j in 0..8 {
                let input = l * 16 + j;
                let got = permutation_image(&oc, input);
                if l < 4 {
                    let (carry, data) = ebtree_c_map(l, j, 3);
                    assert_eq!(got, l * 16 + carry * 8 + data, "l={l} j={j}");
                } else {
                    assert_eq!(got, input);
                }
            }
        }
    }

    #[test]
    fn ebtree_block_matches_reference() {
        let p = EbtreeParams::new(3, 0.5, 0.3, 0.4).unwrap();
        let be = ebtree_encoding(&p).unwrap();
        assert_eq!(be.scale(), 8.0);
        assert_eq!(be.ancilla_qubits(), 5);
        let a = to_complex(&ebtree_matrix(3, 0.5, 0.3, 0.4));
        assert!(be.encoding_error(&a).unwrap() < 1e-12);
        let block = be.block();
        // root self-weight after the fourth-rotation correction
        assert!((block[[0, 0]] - c64(0.4 / 8.0)).norm() < 1e-12);
        // leaf-parent edge
        assert!((block[[4, 2]] - c64(0.3 / 8.0)).norm() < 1e-12);
    }

    #[test]
    fn encoding_soundness_random_parameters() {
        let mut rng = StdRng::seed_from_u64(314);
        for _ in 0..20 {
            let (al, be_, ga) = (
                rng.gen_range(0.05..0.95),
                rng.gen_range(0.05..0.95),
                rng.gen_range(0.05..0.95),
            );
            let cp = CirculantParams::new(3, al, be_, ga).unwrap();
            let a = to_complex(&circulant_matrix(3, al, be_, ga));
            assert!(circulant_encoding(&cp).unwrap().encoding_error(&a).unwrap() < 1e-10);

            let tp = EbtreeParams::new(3, al, be_, ga).unwrap();
            let t = to_complex(&ebtree_matrix(3, al, be_, ga));
            assert!(ebtree_encoding(&tp).unwrap().encoding_error(&t).unwrap() < 1e-10);

            let (a1, a2) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let sp = Sym2x2Params::new(a1, a2).unwrap();
            let s = to_complex(&sym2x2_matrix(a1, a2));
            assert!(sym2x2_encoding(&sp).unwrap().encoding_error(&s).unwrap() < 1e-10);
        }
    }

    #[test]
    fn every_oc_is_a_permutation() {
        let p = CirculantParams::new(3, 0.5, 0.25, 0.25).unwrap();
        for circ in [
            circulant_oc(&p).unwrap(),
            ebtree_oc(&EbtreeParams::new(3, 0.5, 0.3, 0.4).unwrap()).unwrap(),
        ] {
            let u = circuit_unitary(&circ);
            let dim = u.nrows();
            let mut seen = vec![false; dim];
            for j in 0..dim {
                let mut image = None;
                for i in 0..dim {
                    if u[[i, j]].norm() > 1e-9 {
                        assert!(image.is_none());
                        assert!((u[[i, j]] - c64(1.0)).norm() < 1e-12);
                        image = Some(i);
                    }
                }
                let i = image.unwrap();
                assert!(!seen[i]);
                seen[i] = true;
            }
        }
    }

    #[test]
    fn params_reject_out_of_range() {
        assert!(CirculantParams::new(3, 1.5, 0.2, 0.2).is_err());
        assert!(CirculantParams::new(1, 0.5, 0.2, 0.2).is_err());
        assert!(Sym2x2Params::new(1.2, 0.0).is_err());
        assert!(EbtreeParams::new(3, 0.5, 0.0, 0.4).is_err());
    }

    #[test]
    fn assemble_rejects_width_mismatch() {
        let oc = Circuit::empty(3);
        let oa = Circuit::empty(3);
        assert!(assemble_sparse_encoding(&oc, &oa, 1, 2).is_err());
    }

    #[test]
    fn full_cyclic_circuit_shape() {
        // the complete 8x8 circulant encoding: 6 wires, at least 14 layers
        let p = CirculantParams::new(3, 0.5, 0.25, 0.25).unwrap();
        let be = circulant_encoding(&p).unwrap();
        assert_eq!(be.circuit().width(), 6);
        assert!(be.circuit().gate_count() >= 14);
        let layers = crate::draw::layout_layers(be.circuit());
        assert!(layers.len() >= 12, "got {} layers", layers.len());
        let text = crate::draw::draw_ascii(be.circuit());
        assert_eq!(text.lines().count(), 11); // 6 wires + 5 spacer rows
    }

    #[test]
    fn ebtree_encoding_unitary_is_unitary() {
        let p = EbtreeParams::new(3, 0.5, 0.3, 0.4).unwrap();
        let be = ebtree_encoding(&p).unwrap();
        let u: Array2<Complex64> = be.unitary();
        assert!(unitarity_residual(&u) < 1e-12);
    }
}
