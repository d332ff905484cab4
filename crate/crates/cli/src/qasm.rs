//! OpenQASM 3 export for circuits, plus a parser for the emitted subset used
//! to re-check every exported file against the original unitary.
//!
//! Multi-controlled gates keep their `ctrl @` / `negctrl @` modifiers, one
//! gate per line, no decomposition. The full-angle phase kind is emitted as
//! `rz` with a doubled angle, which is the identical unitary.

use blockenc_core::{Circuit, Gate, GateKind, Polarity};
use std::fmt::Write as _;

/// Renders a circuit as OpenQASM 3 text. `metadata` lines become leading
/// comments.
pub fn export_qasm(circuit: &Circuit, metadata: &[(String, String)]) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 3.0;\n");
    out.push_str("include \"stdgates.inc\";\n");
    for (key, value) in metadata {
        let _ = writeln!(out, "// {key}: {value}");
    }
    let _ = writeln!(out, "qubit[{}] q;", circuit.width());
    for gate in circuit.gates() {
        let mut line = String::new();
        for &(_, pol) in gate.controls() {
            line.push_str(match pol {
                Polarity::Closed => "ctrl @ ",
                Polarity::Open => "negctrl @ ",
            });
        }
        let name = match gate.kind() {
            GateKind::H => "h".to_string(),
            GateKind::X => "x".to_string(),
            GateKind::Y => "y".to_string(),
            GateKind::Z => "z".to_string(),
            GateKind::Ry(t) => format!("ry({t:.17e})"),
            GateKind::Rz(t) => format!("rz({t:.17e})"),
            GateKind::PhaseZ(t) => format!("rz({:.17e})", 2.0 * t),
            GateKind::Swap => "swap".to_string(),
        };
        line.push_str(&name);
        line.push(' ');
        let operands: Vec<String> = gate
            .controls()
            .iter()
            .map(|&(q, _)| q)
            .chain(gate.targets().iter().copied())
            .map(|q| format!("q[{q}]"))
            .collect();
        line.push_str(&operands.join(", "));
        line.push(';');
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Parses the subset of OpenQASM 3 produced by [`export_qasm`].
pub fn parse_qasm(text: &str) -> Result<Circuit, String> {
    let mut width: Option<usize> = None;
    let mut gates: Vec<Gate> = Vec::new();
    for raw in text.lines() {
        let line = raw.split("//").next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let stmt = line.strip_suffix(';').unwrap_or(line).trim();
        if stmt.starts_with("OPENQASM") || stmt.starts_with("include") {
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("qubit[") {
            let n: usize = rest
                .split(']')
                .next()
                .ok_or("malformed qubit declaration")?
                .parse()
                .map_err(|e| format!("qubit count: {e}"))?;
            width = Some(n);
            continue;
        }
        // modifiers
        let mut polarities: Vec<Polarity> = Vec::new();
        let mut body = stmt;
        loop {
            if let Some(rest) = body.strip_prefix("ctrl @") {
                polarities.push(Polarity::Closed);
                body = rest.trim_start();
            } else if let Some(rest) = body.strip_prefix("negctrl @") {
                polarities.push(Polarity::Open);
                body = rest.trim_start();
            } else {
                break;
            }
        }
        let (head, operand_text) = body
            .split_once(' ')
            .ok_or_else(|| format!("malformed gate line: {stmt}"))?;
        let (name, param) = match head.split_once('(') {
            Some((n, p)) => {
                let value: f64 = p
                    .strip_suffix(')')
                    .ok_or("unterminated parameter")?
                    .parse()
                    .map_err(|e| format!("gate parameter: {e}"))?;
                (n, Some(value))
            }
            None => (head, None),
        };
        let qubits: Vec<usize> = operand_text
            .split(',')
            .map(|tok| {
                tok.trim()
                    .strip_prefix("q[")
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or_else(|| format!("bad operand in: {stmt}"))?
                    .parse::<usize>()
                    .map_err(|e| format!("operand index: {e}"))
            })
            .collect::<Result<_, String>>()?;
        let n_controls = polarities.len();
        if qubits.len() < n_controls + 1 {
            return Err(format!("not enough operands in: {stmt}"));
        }
        let controls: Vec<(usize, Polarity)> = qubits[..n_controls]
            .iter()
            .copied()
            .zip(polarities)
            .collect();
        let targets = &qubits[n_controls..];
        let kind = match (name, param) {
            ("h", None) => GateKind::H,
            ("x", None) => GateKind::X,
            ("y", None) => GateKind::Y,
            ("z", None) => GateKind::Z,
            ("ry", Some(t)) => GateKind::Ry(t),
            ("rz", Some(t)) => GateKind::Rz(t),
            ("swap", None) => GateKind::Swap,
            _ => return Err(format!("unsupported gate: {stmt}")),
        };
        gates.push(Gate::new(kind, targets.to_vec(), controls));
    }
    let width = width.ok_or("missing qubit declaration")?;
    Circuit::new(width, gates).map_err(|e| e.to_string())
}

/// Re-simulates the exported text and returns the max-norm deviation from
/// the source circuit's unitary.
pub fn roundtrip_error(circuit: &Circuit, qasm: &str) -> Result<f64, String> {
    let parsed = parse_qasm(qasm)?;
    if parsed.width() != circuit.width() {
        return Err("width changed through the export".into());
    }
    let a = blockenc_core::circuit_unitary(circuit);
    let b = blockenc_core::circuit_unitary(&parsed);
    Ok(blockenc_core::linalg::max_abs_diff(&a, &b))
}
