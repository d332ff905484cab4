//! Hermitian block encodings of Hermitian sparse matrices.
//!
//! The unitary is built as `W† S W` where `W = O_C · O_A · D_s` loads the
//! square roots of matrix entries and `S` swaps the two value flags and the
//! two index registers qubit-by-qubit. `S` is Hermitian and conjugation
//! preserves that, so `U = U†` holds structurally for any oracles.
//!
//! Layout (top to bottom): two value flags, the `n`-qubit row register
//! (low `m` qubits carry the slot index after diffusion), the `n`-qubit
//! column register. The encoded block sits on the column register with all
//! `2 + n` leading qubits post-selected on zero.

use num_complex::Complex64;

use crate::arith::{add_register, right_shift};
use crate::block::BlockEncoding;
use crate::circuit::Circuit;
use crate::error::EncodingError;
use crate::gate::{Gate, Polarity};

/// Square root under the branch `√(|a|) · e^{iθ/2}` with `θ ∈ [0, 2π)`.
pub fn sqrt_entry(a: Complex64) -> Result<Complex64, EncodingError> {
    if a.norm() > 1.0 + 1e-12 {
        return Err(EncodingError::InvalidParameters(format!(
            "entry magnitude {} exceeds 1",
            a.norm()
        )));
    }
    let mut theta = a.arg();
    if theta < 0.0 {
        theta += 2.0 * std::f64::consts::PI;
    }
    Ok(Complex64::from_polar(a.norm().sqrt(), theta / 2.0))
}

/// Gates loading a complex amplitude onto the `|0⟩` component of `flag`,
/// conditioned on `controls`: a rotation fixes the magnitude, a phase gate
/// the argument. Amplitudes use the principal square-root branch so that the
/// bra/ket slot pair multiplies back to the original entry.
pub fn amplitude_loader(
    flag: usize,
    controls: &[(usize, Polarity)],
    amplitude: Complex64,
) -> Result<Vec<Gate>, EncodingError> {
    let mag = amplitude.norm();
    if mag > 1.0 + 1e-12 {
        return Err(EncodingError::InfeasibleAngle { value: mag });
    }
    let theta = 2.0 * mag.min(1.0).acos();
    let mut gates = vec![Gate::mcry(controls, flag, theta)];
    let arg = amplitude.arg();
    if mag > 0.0 && arg.abs() > 1e-15 {
        gates.push(Gate::mcphase(controls, flag, -arg));
    }
    Ok(gates)
}

/// Assembles `W† S W` from a column-index oracle acting on the two `n`-qubit
/// registers (`|ℓ⟩|j⟩ -> |c(j,ℓ)⟩|j⟩`) and a square-root value oracle acting
/// on one flag plus both registers. `m` is the number of diffusion qubits,
/// so the block equals `A / 2^m`.
pub fn hermitian_sparse_encoding(
    oc_sym: &Circuit,
    oa_sqrt: &Circuit,
    n: usize,
    m: usize,
) -> Result<BlockEncoding, EncodingError> {
    if oc_sym.width() != 2 * n {
        return Err(EncodingError::Circuit(
            crate::error::CircuitError::WidthMismatch {
                expected: 2 * n,
                got: oc_sym.width(),
            },
        ));
    }
    if oa_sqrt.width() != 1 + 2 * n {
        return Err(EncodingError::Circuit(
            crate::error::CircuitError::WidthMismatch {
                expected: 1 + 2 * n,
                got: oa_sqrt.width(),
            },
        ));
    }
    if m > n {
        return Err(EncodingError::InvalidParameters(format!(
            "m = {m} exceeds n = {n}"
        )));
    }
    let width = 2 + 2 * n;

    // W = D_s, then O_A on (flag 0, both registers), then O_C
    let mut w = Circuit::builder(width);
    for q in (2 + n - m)..(2 + n) {
        w.push(Gate::h(q));
    }
    let mut oa_map = vec![0usize];
    oa_map.extend(2..(2 + 2 * n));
    let oa_embedded = oa_sqrt.remap(&oa_map, width)?;
    w.extend(oa_embedded.gates().iter().cloned());
    w.append(oc_sym, 2);
    let w = w.finish()?;

    let mut s = Circuit::builder(width);
    s.push(Gate::swap(0, 1));
    for i in 0..n {
        s.push(Gate::swap(2 + i, 2 + n + i));
    }
    let s = s.finish()?;

    let circuit = w.then(&s)?.then(&w.adjoint())?;
    Ok(BlockEncoding::new(
        circuit,
        n,
        2 + n,
        (1u64 << m) as f64,
        true,
    )?)
}

/// Hermitian block encoding of the banded circulant matrix with `β = γ`,
/// at scale 4.
///
/// The index oracle adds `j - 1` to the row register through a decrementer
/// plus the controlled-shift adder; the value oracle loads `√entry` per slot,
/// with the unused fourth slot carried at amplitude zero so the oracle
/// contract holds for every register size.
pub fn hermitian_circulant_encoding(
    alpha: f64,
    beta: f64,
    n: usize,
) -> Result<BlockEncoding, EncodingError> {
    if n < 2 {
        return Err(EncodingError::InvalidParameters(format!(
            "circulant family needs n >= 2, got {n}"
        )));
    }
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(EncodingError::InvalidParameters(format!(
                "{name} = {v} outside (0, 1)"
            )));
        }
    }
    let m = 2usize;

    let mut oc = Circuit::builder(2 * n);
    oc.append(&right_shift(n)?, 0);
    oc.extend(add_register(n)?.gates().iter().cloned());
    let oc = oc.finish()?;

    // slots ℓ = 0..3 load √(superdiagonal), √(diagonal), √(subdiagonal), 0
    let amplitudes = [beta.sqrt(), alpha.sqrt(), beta.sqrt(), 0.0];
    let (l1, l0) = (n - 1, n); // ℓ bits: last two qubits of the local row register
    let mut oa = Circuit::builder(1 + 2 * n);
    for (slot, &amp) in amplitudes.iter().enumerate() {
        let pol = |bit: bool| if bit { Polarity::Closed } else { Polarity::Open };
        let controls = [(l1, pol(slot & 2 != 0)), (l0, pol(slot & 1 != 0))];
        for g in amplitude_loader(0, &controls, Complex64::new(amp, 0.0))? {
            oa.push(g);
        }
    }
    let oa = oa.finish()?;

    hermitian_sparse_encoding(&oc, &oa, n, m)
}
