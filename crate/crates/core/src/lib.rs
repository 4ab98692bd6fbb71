//! Two-qubit gate synthesis from integer powers of one universal gate
//! `J(α, β) = blockdiag(ry(α), rz(β))` plus signed permutations.
//!
//! The pipeline, bottom up:
//!
//! - [`numerics`]: fixed-size complex matrices, operator norms, unitary
//!   eigendecomposition.
//! - [`kronecker`]: the smallest `m` putting `m·αⱼ` near every target phase.
//! - [`gates`]: `J`, its powers, and the `J^m ≈ blockdiag(ry(θ), rz(φ))`
//!   primitive.
//! - [`hypersphere`]: coordinates on the unit sphere of C⁴ and the rotation
//!   taking a vector to `(0, 0, 0, 1)`.
//! - [`synthesis`]: the gate IR, block-diagonal and general synthesis, and
//!   the error budget.
//! - [`report`] and [`cli`]: file formats and the `jsynth` binary.
//!
//! ```
//! use jsynth::gates::rz;
//! use jsynth::numerics::Matrix;
//! use jsynth::synthesis::{synth_unitary, SynthesisConfig};
//!
//! let g = Matrix::block_diag(&Matrix::identity(2), &rz(0.4)).unwrap();
//! let report = synth_unitary(&g, &SynthesisConfig::default()).unwrap();
//! assert!(report.measured_error <= report.total_budget() + 1e-9);
//! ```

pub mod cli;
pub mod error;
pub mod gates;
pub mod hypersphere;
pub mod kronecker;
pub mod numerics;
pub mod report;
pub mod synthesis;

pub use error::{Error, Result};
