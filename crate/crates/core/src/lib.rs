//! Simulation and tomography of n-qubit quantum channels in the Pauli transfer
//! matrix (PTM) picture.
//!
//! The crate is organised bottom-up:
//!
//! * [`pauli`]: Pauli-basis indexing, dense operators, vectorization.
//! * [`channel`]: Kraus / PTM / Choi representations and the channel model zoo.
//! * [`states`]: input-state families, reconstruction matrices and the
//!   preparation-channel solver.
//! * [`tomography`]: configuration planning, shot sampling, direct PTM
//!   reconstruction (DPTM) and standard process tomography (sQPT).
//! * [`io`]: JSON / CSV encodings shared with the command-line tool.
//!
//! Qubit 1 is always the most significant Kronecker factor.

pub mod channel;
pub mod error;
pub mod io;
pub mod pauli;
pub mod states;
pub mod tomography;

pub use error::{Error, Result};

/// Largest qubit count supported by the dense representations.
pub const MAX_QUBITS: usize = 6;

/// Tolerance for Hermiticity, unit trace and discarded imaginary residues.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Tolerance on eigenvalue positivity (state validity and Choi spectra).
pub const PSD_TOL: f64 = 1e-9;

/// Tolerance on trace preservation and unitality.
pub const TP_TOL: f64 = 1e-9;

pub(crate) fn check_qubits(n: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedQubits(n))
    }
}
