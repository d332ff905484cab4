//! Quantum signal processing: 2x2 phase-factor products, Chebyshev
//! utilities, the nonlinear least-squares phase solver and assembly of the
//! polynomial-transform circuit around a block encoding.

use num_complex::Complex64;

use crate::block::BlockEncoding;
use crate::circuit::Circuit;
use crate::error::QspError;
use crate::gate::{Gate, Polarity};

type M2 = [[Complex64; 2]; 2];

fn m2_mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// `e^{iφZ} = diag(e^{iφ}, e^{-iφ})`.
fn phase_factor(phi: f64) -> M2 {
    [
        [Complex64::from_polar(1.0, phi), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, -phi)],
    ]
}

/// The signal operator `[[t, √(1-t²)], [√(1-t²), -t]]`.
fn signal(t: f64) -> M2 {
    let s = (1.0 - t * t).max(0.0).sqrt();
    let c = |x: f64| Complex64::new(x, 0.0);
    [[c(t), c(s)], [c(s), c(-t)]]
}

/// Ordered phase angles `φ_0 … φ_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFactors {
    phases: Vec<f64>,
}

impl PhaseFactors {
    pub fn new(phases: Vec<f64>) -> Result<Self, QspError> {
        if phases.is_empty() || phases.iter().any(|p| !p.is_finite()) {
            return Err(QspError::InvalidTarget(
                "phase list must be non-empty and finite".into(),
            ));
        }
        Ok(PhaseFactors { phases })
    }

    pub fn degree(&self) -> usize {
        self.phases.len() - 1
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// One radian value per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.phases {
            out.push_str(&format!("{p:.17e}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, QspError> {
        let mut phases = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            phases.push(
                line.parse::<f64>()
                    .map_err(|e| QspError::InvalidTarget(format!("bad phase line: {e}")))?,
            );
        }
        PhaseFactors::new(phases)
    }
}

/// The exact 2x2 product `e^{iφ_0 Z} Π_j [U(t) e^{iφ_j Z}]`; the represented
/// polynomial is the `(0,0)` entry.
pub fn qsp_unitary(phi: &PhaseFactors, t: f64) -> Result<[[Complex64; 2]; 2], QspError> {
    if t.abs() > 1.0 {
        return Err(QspError::OutOfDomain(t));
    }
    let w = signal(t);
    let mut u = phase_factor(phi.phases[0]);
    for &p in &phi.phases[1..] {
        u = m2_mul(&u, &m2_mul(&w, &phase_factor(p)));
    }
    Ok(u)
}

/// `p(t)` represented by the phase factors at point `t`.
pub fn qsp_polynomial(phi: &PhaseFactors, t: f64) -> Result<Complex64, QspError> {
    Ok(qsp_unitary(phi, t)?[0][0])
}

/// Phases `(π/4, π/2, …, π/2, π/4)` representing the degree-`d` Chebyshev
/// polynomial up to the global factor `i^d`.
pub fn cheb_phases(d: usize) -> Result<PhaseFactors, QspError> {
    if d == 0 {
        return Err(QspError::InvalidDegree(0));
    }
    let q = std::f64::consts::FRAC_PI_4;
    let h = std::f64::consts::FRAC_PI_2;
    let mut phases = vec![h; d + 1];
    phases[0] = q;
    phases[d] = q;
    PhaseFactors::new(phases)
}

/// Phases `(π/2, …, π/2, 0)` that turn the polynomial-transform circuit into
/// the `k`-step Chebyshev walk, up to the global factor `i^k`.
pub fn chebyshev_walk_phases(k: usize) -> Result<PhaseFactors, QspError> {
    if k == 0 {
        return Err(QspError::InvalidDegree(0));
    }
    let mut phases = vec![std::f64::consts::FRAC_PI_2; k + 1];
    phases[k] = 0.0;
    PhaseFactors::new(phases)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChebParity {
    Even,
    Odd,
}

/// A real target polynomial in the Chebyshev basis with definite parity,
/// bounded by one on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetPolynomial {
    coeffs: Vec<f64>,
    parity: ChebParity,
}

impl TargetPolynomial {
    pub fn from_chebyshev(coeffs: &[f64]) -> Result<Self, QspError> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(QspError::InvalidTarget(
                "coefficient list must be non-empty and finite".into(),
            ));
        }
        let d = coeffs.len() - 1;
        let parity = if d.is_multiple_of(2) {
            ChebParity::Even
        } else {
            ChebParity::Odd
        };
        for (j, &c) in coeffs.iter().enumerate() {
            if j % 2 != d % 2 && c != 0.0 {
                return Err(QspError::InvalidTarget(format!(
                    "coefficient {j} breaks the parity of degree {d}"
                )));
            }
        }
        let target = TargetPolynomial {
            coeffs: coeffs.to_vec(),
            parity,
        };
        let bound = (0..=1000)
            .map(|i| target.eval(-1.0 + 2.0 * i as f64 / 1000.0).abs())
            .fold(0.0, f64::max);
        if bound > 1.0 + 1e-9 {
            return Err(QspError::InvalidTarget(format!(
                "max |p(t)| = {bound} exceeds 1 on [-1, 1]"
            )));
        }
        Ok(target)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn parity(&self) -> ChebParity {
        self.parity
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Evaluation through the three-term recurrence.
    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        let mut t_prev = 1.0;
        let mut t_cur = t;
        for (j, &c) in self.coeffs.iter().enumerate() {
            let basis = match j {
                0 => 1.0,
                1 => t,
                _ => {
                    let next = 2.0 * t * t_cur - t_prev;
                    t_prev = t_cur;
                    t_cur = next;
                    next
                }
            };
            acc += c * basis;
        }
        acc
    }
}

/// `T_k` evaluated at an arbitrary real argument via the recurrence.
fn chebyshev_value(k: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    let mut cur = x;
    if k == 0 {
        return 1.0;
    }
    for _ in 1..k {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Re-expands `T_k(s·t')` in the Chebyshev basis of `t'` and normalizes by
/// the value at the endpoint. Returns the bounded target together with the
/// normalization constant `T_k(s)`; the raw expansion coefficients are the
/// target's coefficients times that constant.
pub fn rescale_chebyshev(k: usize, s: f64) -> Result<(TargetPolynomial, f64), QspError> {
    if k == 0 {
        return Err(QspError::InvalidDegree(0));
    }
    if s < 1.0 {
        return Err(QspError::InvalidTarget(format!("scale {s} below 1")));
    }
    // interpolation at the k+1 Chebyshev roots is exact for degree k
    let nodes = k + 1;
    let xs: Vec<f64> = (0..nodes)
        .map(|i| ((2 * i + 1) as f64 * std::f64::consts::PI / (2.0 * nodes as f64)).cos())
        .collect();
    let fs: Vec<f64> = xs.iter().map(|&x| chebyshev_value(k, s * x)).collect();
    let mut raw = vec![0.0; nodes];
    for (j, coeff) in raw.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            acc += fs[i] * chebyshev_value(j, x);
        }
        *coeff = acc * if j == 0 { 1.0 } else { 2.0 } / nodes as f64;
        if j % 2 != k % 2 {
            *coeff = 0.0; // parity-exact
        }
    }
    let norm = chebyshev_value(k, s);
    let coeffs: Vec<f64> = raw.iter().map(|c| c / norm.abs()).collect();
    Ok((TargetPolynomial::from_chebyshev(&coeffs)?, norm))
}

/// Chebyshev nodes used by the solver: the positive roots of `T_{2d̃}`.
fn solver_nodes(d_tilde: usize) -> Vec<f64> {
    (1..=d_tilde)
        .map(|k| ((2 * k - 1) as f64 * std::f64::consts::PI / (4.0 * d_tilde as f64)).cos())
        .collect()
}

/// Least-squares problem over symmetric phase deviations from the reference
/// point `(0, -π/2, …, -π/2, 0)`, where the coefficient map is the identity
/// times two. Even degrees fit the real part of the represented polynomial,
/// odd degrees its imaginary part (converted back afterwards by a `-π/4`
/// shift on the end phases).
struct PhaseProblem {
    node_targets: Vec<(f64, f64)>, // (node, target value)
    degree: usize,
    fit_imaginary: bool,
}

impl PhaseProblem {
    fn expand(&self, x: &[f64]) -> Vec<f64> {
        let d = self.degree;
        (0..=d)
            .map(|j| {
                let base = if j == 0 || j == d {
                    0.0
                } else {
                    -std::f64::consts::FRAC_PI_2
                };
                base + x[j.min(d - j)]
            })
            .collect()
    }

    fn part(&self, z: Complex64) -> f64 {
        if self.fit_imaginary {
            z.im
        } else {
            z.re
        }
    }

    /// Residual vector and `d̃ × d̃` Jacobian at the symmetric parameters.
    fn residual_jacobian(&self, x: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
        let d = self.degree;
        let n_par = x.len();
        let phases = self.expand(x);
        let mut residuals = Vec::with_capacity(self.node_targets.len());
        let mut jac = vec![vec![0.0; n_par]; self.node_targets.len()];
        let iz: M2 = [
            [Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
        ];
        for (row, &(t, target)) in self.node_targets.iter().enumerate() {
            let w = signal(t);
            // factors F_0 = E(φ0), F_j = W·E(φj)
            let mut factors: Vec<M2> = Vec::with_capacity(d + 1);
            factors.push(phase_factor(phases[0]));
            for &p in &phases[1..] {
                factors.push(m2_mul(&w, &phase_factor(p)));
            }
            // prefix[i] = F_0⋯F_{i-1}, suffix[i] = F_i⋯F_d
            let mut prefix: Vec<M2> = Vec::with_capacity(d + 2);
            prefix.push([
                [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            ]);
            for f in &factors {
                let last = prefix.last().unwrap();
                prefix.push(m2_mul(last, f));
            }
            let mut suffix: Vec<M2> = vec![prefix[0]; d + 2];
            for i in (0..=d).rev() {
                suffix[i] = m2_mul(&factors[i], &suffix[i + 1]);
            }
            let u = prefix[d + 1];
            residuals.push(self.part(u[0][0]) - target);
            for (j, phase_slot) in (0..=d).map(|j| (j, j.min(d - j))) {
                // dU/dφ_j = prefix[j+1] · iZ · suffix[j+1]
                let deriv = m2_mul(&prefix[j + 1], &m2_mul(&iz, &suffix[j + 1]));
                jac[row][phase_slot] += self.part(deriv[0][0]);
            }
        }
        (residuals, jac)
    }

    /// Chebyshev coefficients (slot `i` holds the coefficient of `T_{d-2i}`)
    /// of the fitted part, by exact quadrature at Chebyshev roots.
    fn coefficient_map(&self, x: &[f64]) -> Vec<f64> {
        let d = self.degree;
        let d_tilde = x.len();
        let m = 2 * d_tilde + 2;
        let phases = self.expand(x);
        let xs: Vec<f64> = (0..m)
            .map(|i| ((2 * i + 1) as f64 * std::f64::consts::PI / (2.0 * m as f64)).cos())
            .collect();
        let w_at = |t: f64| -> f64 {
            let wmat = signal(t);
            let mut u = phase_factor(phases[0]);
            for &p in &phases[1..] {
                u = m2_mul(&u, &m2_mul(&wmat, &phase_factor(p)));
            }
            self.part(u[0][0])
        };
        let vals: Vec<f64> = xs.iter().map(|&t| w_at(t)).collect();
        (0..d_tilde)
            .map(|i| {
                let k = d - 2 * i;
                let weight = if k > 0 { 2.0 } else { 1.0 };
                let acc: f64 = xs
                    .iter()
                    .zip(vals.iter())
                    .map(|(&t, &v)| v * chebyshev_value(k, t))
                    .sum();
                weight * acc / m as f64
            })
            .collect()
    }
}

/// Solves `A x = b` in place by Gaussian elimination with partial pivoting.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let mut pivot = col;
        for r in (col + 1)..n {
            if a[r][col].abs() > a[pivot][col].abs() {
                pivot = r;
            }
        }
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in (col + 1)..n {
            let f = a[r][col] / a[col][col];
            let (upper, lower) = a.split_at_mut(r);
            let pivot_row = &upper[col];
            for (c, entry) in lower[0].iter_mut().enumerate().skip(col) {
                *entry -= f * pivot_row[c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for c in (r + 1)..n {
            acc -= a[r][c] * x[c];
        }
        x[r] = acc / a[r][r];
    }
    Some(x)
}

/// Levenberg-Marquardt on the symmetric phase parameterization from one
/// starting point. Returns the parameters and the final objective.
fn lm_minimize(problem: &PhaseProblem, mut x: Vec<f64>, max_iters: usize) -> (Vec<f64>, f64) {
    let mut lambda = 1e-3;
    let (mut res, mut jac) = problem.residual_jacobian(&x);
    let mut obj: f64 = res.iter().map(|r| r * r).sum();
    for _ in 0..max_iters {
        if obj < 1e-26 {
            break;
        }
        let n = x.len();
        // normal equations J^T J + λ diag(J^T J)
        let mut jtj = vec![vec![0.0; n]; n];
        let mut jtr = vec![0.0; n];
        for (row, r) in res.iter().enumerate() {
            for a in 0..n {
                jtr[a] += jac[row][a] * r;
                for b in 0..n {
                    jtj[a][b] += jac[row][a] * jac[row][b];
                }
            }
        }
        let mut lhs = jtj.clone();
        for a in 0..n {
            let damp = lambda * jtj[a][a].max(1e-12);
            lhs[a][a] += damp;
        }
        let rhs: Vec<f64> = jtr.iter().map(|v| -v).collect();
        let Some(step) = solve_dense(lhs, rhs) else {
            break;
        };
        let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a + s).collect();
        let (trial_res, trial_jac) = problem.residual_jacobian(&trial);
        let trial_obj: f64 = trial_res.iter().map(|r| r * r).sum();
        if trial_obj < obj {
            x = trial;
            res = trial_res;
            jac = trial_jac;
            let improved = obj - trial_obj;
            obj = trial_obj;
            lambda = (lambda * 0.3).max(1e-14);
            if improved < 1e-30 && obj < 1e-22 {
                break;
            }
        } else {
            lambda *= 4.0;
            if lambda > 1e12 {
                break;
            }
        }
    }
    (x, obj)
}

/// Finds phase factors whose represented polynomial has real part equal to
/// the target on `[-1, 1]`: a coefficient-space fixed-point sweep seeds a
/// Levenberg-Marquardt polish on the node residuals, with a homotopy over
/// scaled-down targets as the fallback for hard cases.
pub fn solve_phases(target: &TargetPolynomial) -> Result<PhaseFactors, QspError> {
    let d = target.degree();
    if d > 64 {
        return Err(QspError::InvalidDegree(d));
    }
    if d == 0 {
        // Re p = cos(φ0), solvable in closed form
        return PhaseFactors::new(vec![target.coefficients()[0].acos()]);
    }
    let d_tilde = (d + 2) / 2;
    let nodes = solver_nodes(d_tilde);
    let fit_imaginary = d % 2 == 1;
    // slot i carries the coefficient of T_{d-2i}
    let coeff_target: Vec<f64> = (0..d_tilde)
        .map(|i| target.coefficients()[d - 2 * i])
        .collect();

    let finish = |x: &[f64], problem: &PhaseProblem| -> Result<PhaseFactors, QspError> {
        let mut phases = problem.expand(x);
        if fit_imaginary {
            // shift both ends by -π/4 to move the target into the real part
            phases[0] -= std::f64::consts::FRAC_PI_4;
            phases[d] -= std::f64::consts::FRAC_PI_4;
        }
        let phi = PhaseFactors::new(phases)?;
        let objective: f64 = nodes
            .iter()
            .map(|&t| {
                let r = qsp_polynomial(&phi, t).unwrap().re - target.eval(t);
                r * r
            })
            .sum();
        let grid_error = (0..=1000)
            .map(|i| {
                let t = -1.0 + 2.0 * i as f64 / 1000.0;
                (qsp_polynomial(&phi, t).unwrap().re - target.eval(t)).abs()
            })
            .fold(0.0, f64::max);
        if objective <= 1e-10 && grid_error <= 1e-8 {
            Ok(phi)
        } else {
            Err(QspError::NoConvergence {
                residual: objective,
            })
        }
    };

    let mut x = vec![0.0; d_tilde];
    let mut last_err = QspError::NoConvergence {
        residual: f64::INFINITY,
    };
    for schedule in [vec![1.0], vec![0.5, 0.75, 0.9, 1.0]] {
        for &gamma in &schedule {
            let scaled: Vec<f64> = coeff_target.iter().map(|c| c * gamma).collect();
            let problem = PhaseProblem {
                node_targets: nodes
                    .iter()
                    .map(|&t| {
                        let v: f64 = scaled
                            .iter()
                            .enumerate()
                            .map(|(i, c)| c * chebyshev_value(d - 2 * i, t))
                            .sum();
                        (t, v)
                    })
                    .collect(),
                degree: d,
                fit_imaginary,
            };
            // fixed-point sweep: the coefficient map has derivative 2·I at
            // the reference point
            for _ in 0..200 {
                let f = problem.coefficient_map(&x);
                let max_res = f
                    .iter()
                    .zip(scaled.iter())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                if max_res < 1e-13 {
                    break;
                }
                for (xi, (fi, ci)) in x.iter_mut().zip(f.iter().zip(scaled.iter())) {
                    *xi -= 0.5 * (fi - ci);
                }
            }
            let (polished, _) = lm_minimize(&problem, x.clone(), 400);
            x = polished;
            if gamma == 1.0 {
                match finish(&x, &problem) {
                    Ok(phi) => return Ok(phi),
                    Err(e) => last_err = e,
                }
            }
        }
        x = vec![0.0; d_tilde];
    }
    Err(last_err)
}

/// The reflection sandwich `(open-controlled X on the flag, e^{-iφZ},
/// open-controlled X)`, realizing `e^{iφ·Z_Π}` on the flag-zero sector.
fn projector_phase_gates(flag: usize, ancillas: &[usize], phi: f64) -> Vec<Gate> {
    let controls: Vec<(usize, Polarity)> =
        ancillas.iter().map(|&q| (q, Polarity::Open)).collect();
    vec![
        Gate::mcx(&controls, flag),
        Gate::phase_z(flag, phi),
        Gate::mcx(&controls, flag),
    ]
}

fn qet_gates(
    be: &BlockEncoding,
    phi: &PhaseFactors,
    with_hadamards: bool,
) -> Result<Circuit, QspError> {
    let width = be.circuit().width() + 1;
    let d = phi.degree();
    let ancillas: Vec<usize> = (1..=be.ancilla_qubits()).collect();
    let mut b = Circuit::builder(width);
    if with_hadamards {
        b.push(Gate::h(0));
    }
    b.extend(projector_phase_gates(0, &ancillas, phi.phases()[d]));
    let shifted = be.circuit().tensor_pad(1, width)?;
    let shifted_adj = shifted.adjoint();
    for i in 1..=d {
        if i % 2 == 1 {
            b.extend(shifted.gates().iter().cloned());
        } else {
            b.extend(shifted_adj.gates().iter().cloned());
        }
        b.extend(projector_phase_gates(0, &ancillas, phi.phases()[d - i]));
    }
    if with_hadamards {
        b.push(Gate::h(0));
    }
    b.finish().map_err(QspError::Circuit)
}

/// The polynomial-transform circuit of the figure form: Hadamard-conjugated
/// flag, phase reflections alternating with `U_A` and `U_A†`. With exact
/// Hermitian input its block is `Re[p](A)` for the represented polynomial.
pub fn qet_circuit(be: &BlockEncoding, phi: &PhaseFactors) -> Result<BlockEncoding, QspError> {
    let circuit = qet_gates(be, phi, true)?;
    Ok(BlockEncoding::new(circuit, be.system_qubits(), be.ancilla_qubits() + 1, 1.0, false)?)
}

/// The same assembly without the flag Hadamards; its block is the full
/// complex `p(A)`, the form taken by the Chebyshev walk circuit.
pub fn qet_core_circuit(
    be: &BlockEncoding,
    phi: &PhaseFactors,
) -> Result<BlockEncoding, QspError> {
    let circuit = qet_gates(be, phi, false)?;
    Ok(BlockEncoding::new(circuit, be.system_qubits(), be.ancilla_qubits() + 1, 1.0, false)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn cheb_t(d: usize, t: f64) -> f64 {
        chebyshev_value(d, t)
    }

    #[test]
    fn degree_zero_identity() {
        let phi = PhaseFactors::new(vec![0.0]).unwrap();
        let u = qsp_unitary(&phi, 0.3).unwrap();
        assert!((u[0][0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(u[0][1].norm() < 1e-15);
    }

    #[test]
    fn chebyshev_phases_reproduce_t2_at_half() {
        let phi = cheb_phases(2).unwrap();
        let p = qsp_polynomial(&phi, 0.5).unwrap();
        // i² T_2(0.5) = -(-0.5) = 0.5
        assert!((p - Complex64::new(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn chebyshev_phases_low_degrees() {
        let phi1 = cheb_phases(1).unwrap();
        assert_eq!(phi1.phases().len(), 2);
        let p1 = qsp_polynomial(&phi1, 0.7).unwrap();
        assert!((p1 - Complex64::new(0.0, 0.7)).norm() < 1e-14); // i·t

        let p3 = qsp_polynomial(&cheb_phases(3).unwrap(), 0.3).unwrap();
        assert!((p3 - Complex64::new(0.0, 0.792)).norm() < 1e-14); // i³·T_3(0.3)

        let p2 = qsp_polynomial(&cheb_phases(2).unwrap(), 1.0).unwrap();
        assert!((p2 - Complex64::new(-1.0, 0.0)).norm() < 1e-14); // i²·T_2(1)
    }

    #[test]
    fn chebyshev_magnitude_on_grid() {
        for d in 1..=6 {
            let phi = cheb_phases(d).unwrap();
            for i in 0..=1000 {
                let t = -1.0 + 2.0 * i as f64 / 1000.0;
                let p = qsp_polynomial(&phi, t).unwrap();
                assert!((p.norm() - cheb_t(d, t).abs()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn unitarity_identity_random_phases() {
        let mut rng = StdRng::seed_from_u64(21);
        for _ in 0..20 {
            let d = rng.gen_range(1..8);
            let phases: Vec<f64> = (0..=d).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let phi = PhaseFactors::new(phases).unwrap();
            for _ in 0..10 {
                let t: f64 = rng.gen_range(-1.0..1.0);
                let u = qsp_unitary(&phi, t).unwrap();
                let p = u[0][0];
                if t.abs() < 1.0 - 1e-9 {
                    let q = -u[0][1] / Complex64::new((1.0 - t * t).sqrt(), 0.0);
                    let lhs = p.norm_sqr() + (1.0 - t * t) * q.norm_sqr();
                    assert!((lhs - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn parity_of_represented_polynomial() {
        let mut rng = StdRng::seed_from_u64(22);
        for _ in 0..10 {
            let d = rng.gen_range(1..7);
            let phases: Vec<f64> = (0..=d).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let phi = PhaseFactors::new(phases).unwrap();
            let t: f64 = rng.gen_range(0.0..1.0);
            let plus = qsp_polynomial(&phi, t).unwrap();
            let minus = qsp_polynomial(&phi, -t).unwrap();
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            assert!((plus - minus * sign).norm() < 1e-12);
        }
    }

    #[test]
    fn out_of_domain_rejected() {
        let phi = cheb_phases(2).unwrap();
        assert!(qsp_unitary(&phi, 1.5).is_err());
        assert!(cheb_phases(0).is_err());
    }

    #[test]
    fn target_polynomial_validation() {
        assert!(TargetPolynomial::from_chebyshev(&[0.0, 1.0]).is_ok());
        assert!(TargetPolynomial::from_chebyshev(&[0.5, 1.0]).is_err()); // parity break
        assert!(TargetPolynomial::from_chebyshev(&[0.0, 2.0]).is_err()); // unbounded
    }

    #[test]
    fn rescale_t2_by_four() {
        let (target, norm) = rescale_chebyshev(2, 4.0).unwrap();
        assert!((norm - 31.0).abs() < 1e-11);
        let raw: Vec<f64> = target.coefficients().iter().map(|c| c * norm).collect();
        assert!((raw[0] - 15.0).abs() < 1e-10);
        assert!(raw[1].abs() < 1e-12);
        assert!((raw[2] - 16.0).abs() < 1e-10);
    }

    #[test]
    fn rescale_identity_and_degree_three() {
        let (t1, norm1) = rescale_chebyshev(1, 1.0).unwrap();
        assert!((norm1 - 1.0).abs() < 1e-12);
        assert!((t1.coefficients()[1] - 1.0).abs() < 1e-12);

        let (t3, norm3) = rescale_chebyshev(3, 2.0).unwrap();
        for i in 0..=100 {
            let t = -1.0 + 2.0 * i as f64 / 100.0;
            let direct = cheb_t(3, t);
            let through = t3.eval(t / 2.0) * norm3;
            assert!((direct - through).abs() < 1e-12);
        }
    }

    #[test]
    fn solve_linear_target() {
        let target = TargetPolynomial::from_chebyshev(&[0.0, 1.0]).unwrap();
        let phi = solve_phases(&target).unwrap();
        for i in 0..=100 {
            let t = -1.0 + 2.0 * i as f64 / 100.0;
            assert!((qsp_polynomial(&phi, t).unwrap().re - t).abs() < 1e-8);
        }
    }

    #[test]
    fn solve_constant_target() {
        // degree zero solves in closed form: cos(φ0) = c0
        let target = TargetPolynomial::from_chebyshev(&[1.0]).unwrap();
        let phi = solve_phases(&target).unwrap();
        assert!(phi.phases()[0].abs() < 1e-12);
        let half = TargetPolynomial::from_chebyshev(&[0.5]).unwrap();
        let phi_half = solve_phases(&half).unwrap();
        assert!((qsp_polynomial(&phi_half, 0.2).unwrap().re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn solve_rescaled_t2_matches_published_phases() {
        let (target, _) = rescale_chebyshev(2, 4.0).unwrap();
        let phi = solve_phases(&target).unwrap();
        let mut grid_err = 0.0f64;
        for i in 0..=1000 {
            let t = -1.0 + 2.0 * i as f64 / 1000.0;
            grid_err = grid_err.max((qsp_polynomial(&phi, t).unwrap().re - target.eval(t)).abs());
        }
        assert!(grid_err < 1e-8);
    }

    #[test]
    fn solve_higher_even_degree_roundtrip() {
        // a mild degree-8 target: 0.6·T_8 + 0.3·T_4 + 0.05·T_0 stays within 1
        let mut coeffs = vec![0.0; 9];
        coeffs[0] = 0.05;
        coeffs[4] = 0.3;
        coeffs[8] = 0.6;
        let target = TargetPolynomial::from_chebyshev(&coeffs).unwrap();
        let phi = solve_phases(&target).unwrap();
        for i in 0..=500 {
            let t = -1.0 + 2.0 * i as f64 / 500.0;
            assert!((qsp_polynomial(&phi, t).unwrap().re - target.eval(t)).abs() < 1e-8);
        }
    }

    #[test]
    fn solve_bare_chebyshev_target() {
        // target T_2 itself: Re p(0.5) must come back as T_2(0.5) = -0.5
        let target = TargetPolynomial::from_chebyshev(&[0.0, 0.0, 1.0]).unwrap();
        let phi = solve_phases(&target).unwrap();
        assert!((qsp_polynomial(&phi, 0.5).unwrap().re + 0.5).abs() < 1e-8);
    }

    #[test]
    fn solve_at_the_degree_cap() {
        let mut coeffs = vec![0.0; 65];
        coeffs[0] = 0.1;
        coeffs[32] = 0.2;
        coeffs[64] = 0.6;
        let target = TargetPolynomial::from_chebyshev(&coeffs).unwrap();
        let phi = solve_phases(&target).unwrap();
        assert_eq!(phi.degree(), 64);
        for i in 0..=1000 {
            let t = -1.0 + 2.0 * i as f64 / 1000.0;
            assert!((qsp_polynomial(&phi, t).unwrap().re - target.eval(t)).abs() < 1e-8);
        }
        let mut too_big = vec![0.0; 66];
        too_big[65] = 0.5;
        let over = TargetPolynomial::from_chebyshev(&too_big).unwrap();
        assert!(matches!(
            solve_phases(&over),
            Err(QspError::InvalidDegree(65))
        ));
    }

    #[test]
    fn solve_degree_thirty_roundtrip() {
        let mut coeffs = vec![0.0; 31];
        coeffs[2] = 0.2;
        coeffs[10] = 0.2;
        coeffs[30] = 0.55;
        let target = TargetPolynomial::from_chebyshev(&coeffs).unwrap();
        let phi = solve_phases(&target).unwrap();
        for i in 0..=1000 {
            let t = -1.0 + 2.0 * i as f64 / 1000.0;
            assert!(
                (qsp_polynomial(&phi, t).unwrap().re - target.eval(t)).abs() < 1e-8,
                "t = {t}"
            );
        }
    }

    #[test]
    fn analytic_jacobian_matches_finite_differences() {
        let nodes = solver_nodes(3);
        let problem = PhaseProblem {
            node_targets: nodes.iter().map(|&t| (t, 0.3 * t)).collect(),
            degree: 5,
            fit_imaginary: false,
        };
        let x = vec![0.61, -0.23, 0.11];
        let (r0, jac) = problem.residual_jacobian(&x);
        let h = 1e-6;
        for col in 0..x.len() {
            let mut xp = x.clone();
            xp[col] += h;
            let mut xm = x.clone();
            xm[col] -= h;
            let (rp, _) = problem.residual_jacobian(&xp);
            let (rm, _) = problem.residual_jacobian(&xm);
            for row in 0..r0.len() {
                let fd = (rp[row] - rm[row]) / (2.0 * h);
                assert!(
                    (jac[row][col] - fd).abs() <= 1e-6 * fd.abs().max(1.0),
                    "({row},{col}): {} vs {}",
                    jac[row][col],
                    fd
                );
            }
        }
    }

    #[test]
    fn phase_text_roundtrip() {
        let phi = cheb_phases(3).unwrap();
        let text = phi.to_text();
        let back = PhaseFactors::from_text(&text).unwrap();
        assert_eq!(phi, back);
    }
}
