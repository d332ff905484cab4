//! Deterministic layered ASCII rendering of circuits.
//!
//! Gates are packed greedily left-to-right: a gate starts a new layer only if
//! its wire span overlaps a gate already in the current layer. The same
//! circuit always renders to the same text.

use crate::circuit::Circuit;
use crate::gate::{Gate, GateKind, Polarity};

fn gate_label(g: &Gate) -> String {
    match g.kind() {
        GateKind::H => "H".to_string(),
        GateKind::X => {
            if g.controls().is_empty() {
                "X".to_string()
            } else {
                "+".to_string() // rendered as the ⊕ target glyph
            }
        }
        GateKind::Y => "Y".to_string(),
        GateKind::Z => "Z".to_string(),
        GateKind::Ry(t) => format!("Ry({t:.4})"),
        GateKind::Rz(t) => format!("Rz({t:.4})"),
        GateKind::PhaseZ(t) => format!("Pz({t:.4})"),
        GateKind::Swap => "x".to_string(),
    }
}

/// Partitions gates into non-overlapping layers (by full wire span).
pub fn layout_layers(circuit: &Circuit) -> Vec<Vec<&Gate>> {
    let mut layers: Vec<Vec<&Gate>> = Vec::new();
    let mut layer_hi: Vec<Vec<(usize, usize)>> = Vec::new(); // occupied spans per layer
    for g in circuit.gates() {
        let lo = g.qubits().min().unwrap();
        let hi = g.qubits().max().unwrap();
        // find the last layer this gate collides with
        let mut place = layers.len();
        for (i, occupied) in layer_hi.iter().enumerate().rev() {
            let collides = occupied.iter().any(|&(a, b)| lo <= b && a <= hi);
            if collides {
                place = i + 1;
                break;
            }
            place = i;
        }
        if place == layers.len() {
            layers.push(Vec::new());
            layer_hi.push(Vec::new());
        }
        layers[place].push(g);
        layer_hi[place].push((lo, hi));
    }
    layers
}

/// Renders the circuit as fixed-width ASCII art, one row per qubit wire.
pub fn draw_ascii(circuit: &Circuit) -> String {
    let width = circuit.width();
    let layers = layout_layers(circuit);
    let nrows = if width == 0 { 0 } else { 2 * width - 1 };
    let mut rows: Vec<String> = (0..nrows)
        .map(|r| {
            if r % 2 == 0 {
                format!("q{:<2}: ", r / 2)
            } else {
                "     ".to_string()
            }
        })
        .collect();

    for layer in &layers {
        // cell text per wire row for this layer
        let mut cells: Vec<String> = (0..nrows)
            .map(|r| if r % 2 == 0 { "-".into() } else { " ".into() })
            .collect();
        for g in layer {
            let lo = g.qubits().min().unwrap();
            let hi = g.qubits().max().unwrap();
            match g.kind() {
                GateKind::Swap => {
                    cells[2 * g.targets()[0]] = "x".into();
                    cells[2 * g.targets()[1]] = "x".into();
                }
                _ => {
                    let label = gate_label(g);
                    let text = if label == "+" {
                        "(+)".to_string()
                    } else {
                        format!("[{label}]")
                    };
                    cells[2 * g.targets()[0]] = text;
                }
            }
            for &(q, pol) in g.controls() {
                cells[2 * q] = match pol {
                    Polarity::Closed => "*".into(),
                    Polarity::Open => "o".into(),
                };
            }
            // vertical connector through intermediate rows
            if hi > lo {
                for cell in cells.iter_mut().take(2 * hi).skip(2 * lo + 1) {
                    if *cell == "-" || *cell == " " {
                        *cell = "|".into();
                    }
                }
            }
        }
        let colw = cells.iter().map(|c| c.len()).max().unwrap_or(1);
        for (r, cell) in cells.iter().enumerate() {
            let pad = colw - cell.len();
            let (lpad, rpad) = (pad / 2, pad - pad / 2);
            let fill = if r % 2 == 0 { '-' } else { ' ' };
            let mut piece = String::new();
            piece.push(fill);
            for _ in 0..lpad {
                piece.push(fill);
            }
            piece.push_str(cell);
            for _ in 0..rpad {
                piece.push(fill);
            }
            piece.push(fill);
            rows[r].push_str(&piece);
        }
    }
    let mut out = String::new();
    for (r, row) in rows.iter().enumerate() {
        if r % 2 == 0 {
            out.push_str(row);
            out.push('-');
        } else {
            out.push_str(row.trim_end());
        }
        out.push('\n');
    }
    out
}
