//! Gate-level quantum circuits that block encode structured sparse matrices,
//! assembled into polynomial transforms and quantum walks, with every
//! construction verified against classically built reference matrices by
//! exact dense simulation.
//!
//! - [`gate`], [`circuit`], [`sim`]: the circuit IR and the dense simulator
//!   (qubit 0 is the most significant bit of a basis index).
//! - [`block`]: block-encoding metadata, extraction and error norms.
//! - [`arith`]: cyclic shifts, the controlled-shift adder, doubling/halving.
//! - [`sparse`]: standard encodings of `A/s` for the circulant, tridiagonal,
//!   extended-binary-tree and symmetric 2x2 families.
//! - [`hermitian`]: Hermitian encodings of Hermitian sparse matrices.
//! - [`qsp`]: signal-processing products, phase-factor solving and the
//!   polynomial-transform circuit.
//! - [`walk`]: stochastic chains, the scale-one walk encoding, Chebyshev
//!   walk operators and the two-reflection walk form.
//!
//! ```
//! use blockenc_core::families::circulant_matrix;
//! use blockenc_core::linalg::to_complex;
//! use blockenc_core::sparse::{circulant_encoding, CirculantParams};
//!
//! let params = CirculantParams::new(3, 0.5, 0.25, 0.25)?;
//! let enc = circulant_encoding(&params)?;
//! assert_eq!(enc.scale(), 4.0);
//! let reference = to_complex(&circulant_matrix(3, 0.5, 0.25, 0.25));
//! assert!(enc.encoding_error(&reference)? < 1e-12);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod arith;
pub mod block;
pub mod circuit;
pub mod draw;
pub mod error;
pub mod families;
pub mod gate;
pub mod hermitian;
pub mod linalg;
pub mod qsp;
pub mod sim;
pub mod sparse;
pub mod walk;

pub use block::{block_extract, BlockEncoding};
pub use circuit::{Circuit, CircuitBuilder};
pub use error::{CircuitError, EncodingError, QspError};
pub use gate::{Gate, GateKind, Polarity};
pub use sim::{apply, basis_state, circuit_unitary, gate_unitary, StateVector, UnitaryMatrix};

/// Default numerical tolerance for exact constructions.
pub const DEFAULT_TOL: f64 = 1e-12;
