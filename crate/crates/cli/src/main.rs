//! `blockenc`: build, verify and export block-encoding and quantum-walk
//! circuits for the structured matrix families, and solve signal-processing
//! phase factors.
//!
//! Exit codes: 0 success / verification pass, 1 verification failure,
//! 2 usage or configuration error, 3 infeasible parameters, 4 solver failure.

mod config;
mod qasm;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use ndarray::Array2;
use num_complex::Complex64;
use serde_json::json;
use thiserror::Error;

use blockenc_core::families::{
    circulant_matrix, ebtree_matrix, sym2x2_matrix, tridiagonal_matrix,
};
use blockenc_core::hermitian::hermitian_circulant_encoding;
use blockenc_core::linalg::{chebyshev_of_matrix, to_complex};
use blockenc_core::qsp::{rescale_chebyshev, solve_phases, TargetPolynomial};
use blockenc_core::sparse::{
    circulant_encoding, ebtree_encoding, sym2x2_encoding, tridiagonal_encoding, CirculantParams,
    EbtreeParams, Sym2x2Params,
};
use blockenc_core::walk::{szegedy_equivalence_error, up_encoding, walk_operator};
use blockenc_core::{BlockEncoding, Circuit, EncodingError, Gate, GateKind, QspError};

use config::{Config, Family, Overrides, Scheme};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    VerifyFailed(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("solver failure: {0}")]
    Solver(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Solver(_) => 4,
        }
    }
}

impl From<EncodingError> for CliError {
    fn from(e: EncodingError) -> Self {
        match e {
            EncodingError::InfeasibleAngle { .. } => CliError::Infeasible(e.to_string()),
            EncodingError::InvalidParameters(_) => CliError::Usage(e.to_string()),
            EncodingError::Circuit(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<QspError> for CliError {
    fn from(e: QspError) -> Self {
        match e {
            QspError::NoConvergence { .. } => CliError::Solver(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "blockenc",
    about = "Explicit quantum circuits for block encodings of structured sparse matrices",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct EncodingArgs {
    /// Configuration file (key=value lines or a JSON object)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Matrix family: circulant | tridiagonal | sym2x2 | ebtree | walk
    #[arg(long)]
    family: Option<String>,
    /// Encoding scheme for the circulant family: standard | hermitian
    #[arg(long)]
    scheme: Option<String>,
    /// System qubits (matrix dimension 2^n)
    #[arg(long)]
    n: Option<usize>,
    /// Diagonal weight (or first value for sym2x2)
    #[arg(long)]
    alpha: Option<f64>,
    /// Subdiagonal weight (or second value for sym2x2)
    #[arg(long)]
    beta: Option<f64>,
    /// Superdiagonal weight (defaults to beta)
    #[arg(long)]
    gamma: Option<f64>,
    /// Walk steps
    #[arg(long)]
    k: Option<usize>,
    /// Verification tolerance (also via BLOCKENC_TOL)
    #[arg(long)]
    tolerance: Option<f64>,
    /// Index-oracle slot ordering: diag-first | superdiag-first
    #[arg(long)]
    oc_ordering: Option<String>,
    /// Value-oracle rotation style: uniformly-controlled | multi-controlled
    #[arg(long)]
    oa_style: Option<String>,
    /// Where to write circuit.qasm, circuit.txt and report.json
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Construct an encoding and write circuit + report artifacts
    Build(EncodingArgs),
    /// Construct, simulate and compare against the reference matrix
    Verify {
        #[command(flatten)]
        args: EncodingArgs,
        /// Add this offset to the first rotation angle before verifying
        #[arg(long)]
        perturb: Option<f64>,
    },
    /// Solve signal-processing phase factors for a target polynomial
    Qsp {
        /// Comma-separated Chebyshev coefficients c0,c1,...
        #[arg(long, conflicts_with = "cheb_rescale")]
        target: Option<String>,
        /// Re-expand T_k(s t') and normalize: two values k s
        #[arg(long, num_args = 2, value_names = ["K", "S"])]
        cheb_rescale: Option<Vec<f64>>,
        /// Expected degree (cross-checked against the target)
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Build the k-step Chebyshev walk for a symmetric circulant chain
    Walk {
        #[command(flatten)]
        args: EncodingArgs,
    },
}

fn overrides_of(a: &EncodingArgs) -> Overrides {
    Overrides {
        family: a.family.clone(),
        scheme: a.scheme.clone(),
        n: a.n,
        alpha: a.alpha,
        beta: a.beta,
        gamma: a.gamma,
        k: a.k,
        tolerance: a.tolerance,
        oc_ordering: a.oc_ordering.clone(),
        oa_style: a.oa_style.clone(),
        output_dir: a.output_dir.clone(),
    }
}

/// A constructed encoding together with its classical reference matrix.
struct Built {
    encoding: BlockEncoding,
    reference: Array2<Complex64>,
    family: Family,
    scheme: Scheme,
    config: Config,
}

fn build_encoding(cfg: &Config) -> Result<Built, CliError> {
    let gamma = cfg.gamma.unwrap_or(cfg.beta);
    let (encoding, reference) = match (cfg.family, cfg.scheme) {
        (Family::Circulant, Scheme::Standard) => {
            let p = CirculantParams::new(cfg.n, cfg.alpha, cfg.beta, gamma)?
                .with_ordering(cfg.oc_ordering)
                .with_style(cfg.oa_style);
            (
                circulant_encoding(&p)?,
                to_complex(&circulant_matrix(cfg.n, cfg.alpha, cfg.beta, gamma)),
            )
        }
        (Family::Circulant, Scheme::Hermitian) => {
            if (gamma - cfg.beta).abs() > 1e-12 {
                return Err(CliError::Usage(
                    "hermitian scheme requires beta = gamma".into(),
                ));
            }
            (
                hermitian_circulant_encoding(cfg.alpha, cfg.beta, cfg.n)?,
                to_complex(&circulant_matrix(cfg.n, cfg.alpha, cfg.beta, cfg.beta)),
            )
        }
        (Family::Tridiagonal, Scheme::Standard) => {
            let p = CirculantParams::new(cfg.n, cfg.alpha, cfg.beta, gamma)?
                .with_ordering(cfg.oc_ordering)
                .with_style(cfg.oa_style);
            (
                tridiagonal_encoding(&p)?,
                to_complex(&tridiagonal_matrix(cfg.n, cfg.alpha, cfg.beta, gamma)),
            )
        }
        (Family::Sym2x2, Scheme::Standard) => {
            let p = Sym2x2Params::new(cfg.alpha, cfg.beta)?;
            (
                sym2x2_encoding(&p)?,
                to_complex(&sym2x2_matrix(cfg.alpha, cfg.beta)),
            )
        }
        (Family::Ebtree, Scheme::Standard) => {
            let p = EbtreeParams::new(cfg.n, cfg.alpha, cfg.beta, gamma)?;
            (
                ebtree_encoding(&p)?,
                to_complex(&ebtree_matrix(cfg.n, cfg.alpha, cfg.beta, gamma)),
            )
        }
        (Family::Walk, Scheme::Standard) => {
            let w = up_encoding(cfg.alpha, cfg.beta, gamma, cfg.n)?;
            let target = chebyshev_of_matrix(
                &circulant_matrix(cfg.n, cfg.alpha, cfg.beta, gamma),
                cfg.k,
            );
            (walk_operator(&w, cfg.k)?, to_complex(&target))
        }
        (family, Scheme::Hermitian) => {
            return Err(CliError::Usage(format!(
                "scheme 'hermitian' is not defined for family '{}'",
                family.name()
            )))
        }
    };
    Ok(Built {
        encoding,
        reference,
        family: cfg.family,
        scheme: cfg.scheme,
        config: cfg.clone(),
    })
}

fn qasm_metadata(b: &Built) -> Vec<(String, String)> {
    let mut meta = vec![
        ("family".to_string(), b.family.name().to_string()),
        ("scheme".to_string(), b.scheme.name().to_string()),
        ("n".to_string(), b.encoding.system_qubits().to_string()),
        (
            "ancillas".to_string(),
            b.encoding.ancilla_qubits().to_string(),
        ),
        ("scale".to_string(), format!("{}", b.encoding.scale())),
    ];
    if b.family == Family::Walk {
        meta.push(("k".to_string(), b.config.k.to_string()));
    }
    meta
}

fn write_artifacts(b: &Built, dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
    let circuit = b.encoding.circuit();
    let qasm_text = qasm::export_qasm(circuit, &qasm_metadata(b));
    let roundtrip = qasm::roundtrip_error(circuit, &qasm_text)
        .map_err(|e| CliError::Usage(format!("qasm self-check: {e}")))?;
    if roundtrip > 1e-12 {
        return Err(CliError::Usage(format!(
            "qasm export failed its re-simulation check ({roundtrip:.3e})"
        )));
    }
    let write = |name: &str, contents: &str| {
        std::fs::write(dir.join(name), contents)
            .map_err(|e| CliError::Usage(format!("cannot write {name}: {e}")))
    };
    write("circuit.qasm", &qasm_text)?;
    write("circuit.txt", &blockenc_core::draw::draw_ascii(circuit))?;
    Ok(())
}

fn cmd_build(args: &EncodingArgs) -> Result<(), CliError> {
    let cfg = config::resolve(args.config.as_deref(), &overrides_of(args))?;
    let built = build_encoding(&cfg)?;
    let dir = cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    write_artifacts(&built, &dir)?;
    let report = json!({
        "family": built.family.name(),
        "scheme": built.scheme.name(),
        "n": built.encoding.system_qubits(),
        "m": built.encoding.ancilla_qubits(),
        "scale": built.encoding.scale(),
        "width": built.encoding.circuit().width(),
        "gate_count": built.encoding.circuit().gate_count(),
        "hermitian": built.encoding.hermitian(),
        "k": if built.family == Family::Walk { Some(cfg.k) } else { None },
    });
    let text = serde_json::to_string_pretty(&report).expect("serializable");
    std::fs::write(dir.join("report.json"), &text)
        .map_err(|e| CliError::Usage(format!("cannot write report.json: {e}")))?;
    println!("{text}");
    Ok(())
}

/// Adds `eps` to the first rotation gate, modelling a miscalibrated angle.
fn perturb_first_rotation(circuit: &Circuit, eps: f64) -> Result<Circuit, CliError> {
    let mut gates = circuit.gates().to_vec();
    let slot = gates
        .iter()
        .position(|g| matches!(g.kind(), GateKind::Ry(_)))
        .ok_or_else(|| CliError::Usage("circuit has no rotation gate to perturb".into()))?;
    if let GateKind::Ry(t) = gates[slot].kind() {
        gates[slot] = Gate::new(
            GateKind::Ry(t + eps),
            gates[slot].targets().to_vec(),
            gates[slot].controls().to_vec(),
        );
    }
    Circuit::new(circuit.width(), gates).map_err(|e| CliError::Usage(e.to_string()))
}

fn cmd_verify(args: &EncodingArgs, perturb: Option<f64>) -> Result<(), CliError> {
    let start = Instant::now();
    let cfg = config::resolve(args.config.as_deref(), &overrides_of(args))?;
    let built = build_encoding(&cfg)?;
    let encoding = match perturb {
        Some(eps) => BlockEncoding::new(
            perturb_first_rotation(built.encoding.circuit(), eps)?,
            built.encoding.system_qubits(),
            built.encoding.ancilla_qubits(),
            built.encoding.scale(),
            built.encoding.hermitian(),
        )
        .map_err(|e| CliError::Usage(e.to_string()))?,
        None => built.encoding.clone(),
    };
    let spectral_error = encoding
        .encoding_error(&built.reference)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let unitarity = encoding.unitarity_residual();
    let pass = spectral_error <= cfg.tolerance;
    let mut report = json!({
        "family": built.family.name(),
        "scheme": built.scheme.name(),
        "n": encoding.system_qubits(),
        "m": encoding.ancilla_qubits(),
        "scale": encoding.scale(),
        "spectral_error": spectral_error,
        "hermitian": encoding.hermitian() && encoding.hermiticity_residual() <= cfg.tolerance,
        "unitarity_residual": unitarity,
        "gate_count": encoding.circuit().gate_count(),
        "tolerance": cfg.tolerance,
        "pass": pass,
        "wall_time_ms": 0,
    });
    report["wall_time_ms"] = json!(start.elapsed().as_millis() as u64);
    let text = serde_json::to_string_pretty(&report).expect("serializable");
    if let Some(dir) = &cfg.output_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
        std::fs::write(dir.join("report.json"), &text)
            .map_err(|e| CliError::Usage(format!("cannot write report.json: {e}")))?;
    }
    println!("{text}");
    if pass {
        Ok(())
    } else {
        Err(CliError::VerifyFailed(format!(
            "spectral error {spectral_error:.3e} exceeds tolerance {:.3e}",
            cfg.tolerance
        )))
    }
}

fn cmd_qsp(
    target: Option<String>,
    cheb_rescale: Option<Vec<f64>>,
    degree: Option<usize>,
    output_dir: Option<PathBuf>,
) -> Result<(), CliError> {
    let (poly, norm) = match (target, cheb_rescale) {
        (Some(list), None) => {
            let coeffs: Vec<f64> = list
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<f64>()
                        .map_err(|e| CliError::Usage(format!("bad coefficient '{tok}': {e}")))
                })
                .collect::<Result<_, _>>()?;
            (TargetPolynomial::from_chebyshev(&coeffs)?, 1.0)
        }
        (None, Some(ks)) => {
            let k = ks[0] as usize;
            if ks[0].fract() != 0.0 || k == 0 {
                return Err(CliError::Usage("rescale order must be a positive integer".into()));
            }
            rescale_chebyshev(k, ks[1])?
        }
        _ => {
            return Err(CliError::Usage(
                "provide exactly one of --target or --cheb-rescale".into(),
            ))
        }
    };
    if let Some(d) = degree {
        if d != poly.degree() {
            return Err(CliError::Usage(format!(
                "requested degree {d} does not match target degree {} (parity-preserving Chebyshev targets only)",
                poly.degree()
            )));
        }
    }
    let phi = solve_phases(&poly)?;
    let objective: f64 = {
        let d_tilde = (poly.degree() + 2) / 2;
        (1..=d_tilde)
            .map(|k| {
                let t =
                    ((2 * k - 1) as f64 * std::f64::consts::PI / (4.0 * d_tilde as f64)).cos();
                let r = blockenc_core::qsp::qsp_polynomial(&phi, t).unwrap().re - poly.eval(t);
                r * r
            })
            .sum()
    };
    let grid_error = (0..=1000)
        .map(|i| {
            let t = -1.0 + 2.0 * i as f64 / 1000.0;
            (blockenc_core::qsp::qsp_polynomial(&phi, t).unwrap().re - poly.eval(t)).abs()
        })
        .fold(0.0, f64::max);
    let report = json!({
        "degree": poly.degree(),
        "coefficients": poly.coefficients(),
        "normalization": norm,
        "objective": objective,
        "max_grid_error": grid_error,
        "phases": phi.phases(),
    });
    let text = serde_json::to_string_pretty(&report).expect("serializable");
    if let Some(dir) = output_dir {
        std::fs::create_dir_all(&dir)
            .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
        std::fs::write(dir.join("phases.txt"), phi.to_text())
            .map_err(|e| CliError::Usage(format!("cannot write phases.txt: {e}")))?;
        std::fs::write(dir.join("report.json"), &text)
            .map_err(|e| CliError::Usage(format!("cannot write report.json: {e}")))?;
    }
    println!("{text}");
    Ok(())
}

fn cmd_walk(args: &EncodingArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let mut over = overrides_of(args);
    over.family = Some("walk".into());
    let cfg = config::resolve(args.config.as_deref(), &over)?;
    let built = build_encoding(&cfg)?;
    let gamma = cfg.gamma.unwrap_or(cfg.beta);
    let operators = up_encoding(cfg.alpha, cfg.beta, gamma, cfg.n)?;
    let spectral_error = built
        .encoding
        .encoding_error(&built.reference)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let szegedy_error = szegedy_equivalence_error(&operators)?;
    let dir = cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    write_artifacts(&built, &dir)?;
    let pass = spectral_error <= cfg.tolerance && szegedy_error <= cfg.tolerance.max(1e-12);
    let report = json!({
        "family": "walk",
        "k": cfg.k,
        "n": cfg.n,
        "m": built.encoding.ancilla_qubits(),
        "scale": built.encoding.scale(),
        "block_target": format!("T_{}(P)", cfg.k),
        "spectral_error": spectral_error,
        "szegedy_equivalence_error": szegedy_error,
        "gate_count": built.encoding.circuit().gate_count(),
        "tolerance": cfg.tolerance,
        "pass": pass,
        "wall_time_ms": start.elapsed().as_millis() as u64,
    });
    let text = serde_json::to_string_pretty(&report).expect("serializable");
    std::fs::write(dir.join("report.json"), &text)
        .map_err(|e| CliError::Usage(format!("cannot write report.json: {e}")))?;
    println!("{text}");
    if pass {
        Ok(())
    } else {
        Err(CliError::VerifyFailed(format!(
            "walk verification failed: spectral {spectral_error:.3e}, equivalence {szegedy_error:.3e}"
        )))
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(args) => cmd_build(&args),
        Command::Verify { args, perturb } => cmd_verify(&args, perturb),
        Command::Qsp {
            target,
            cheb_rescale,
            degree,
            output_dir,
        } => cmd_qsp(target, cheb_rescale, degree, output_dir),
        Command::Walk { args } => cmd_walk(&args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
