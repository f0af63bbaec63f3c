//! Input-state families, reconstruction matrices and preparation channels.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{ptm_to_choi, CptpReport, KrausChannel, PauliTransferMatrix};
use crate::pauli::{basis_size, dim, sigma, vectorize, CMatrix, DensityMatrix, PauliString};
use crate::{check_qubits, Error, Result, PSD_TOL};

/// Which tomography protocol an input family belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    /// Direct PTM reconstruction: inputs `𝟙/d` and `(𝟙 + P_j)/d`.
    Dptm,
    /// Standard process tomography: Kronecker products of `|1⟩, |+⟩, |i⟩, |0⟩`.
    Sqpt,
}

impl Protocol {
    pub fn as_str(&self) -> &'static str {
        match self {
            Protocol::Dptm => "dptm",
            Protocol::Sqpt => "sqpt",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dptm" => Ok(Protocol::Dptm),
            "sqpt" => Ok(Protocol::Sqpt),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

fn check_index(j: usize, n: usize) -> Result<()> {
    check_qubits(n)?;
    let bound = basis_size(n);
    if j >= bound {
        return Err(Error::IndexOutOfRange { index: j, n, bound });
    }
    Ok(())
}

/// `ρ₀ = 𝟙/d`, `ρ_j = (𝟙 + P_j)/d` for `j ≠ 0`.
pub fn dptm_state(j: usize, n: usize) -> Result<DensityMatrix> {
    check_index(j, n)?;
    let d = dim(n);
    let mut m = CMatrix::identity(d, d);
    if j != 0 {
        m += PauliString::new(n, j)?.matrix();
    }
    DensityMatrix::new(n, m / Complex64::from(d as f64))
}

fn sqpt_single(digit: u8) -> DensityMatrix {
    let h = FRAC_1_SQRT_2;
    let ket = match digit {
        0 => [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        1 => [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
        2 => [Complex64::new(h, 0.0), Complex64::new(0.0, h)],
        _ => [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    };
    DensityMatrix::pure(&DVector::from_row_slice(&ket)).expect("single-qubit pure states are valid")
}

/// Kronecker product of `|1⟩⟨1|, |+⟩⟨+|, |i⟩⟨i|, |0⟩⟨0|` selected by the base-4
/// digits of `j`, qubit 1 first. The single-qubit order is fixed: reordering it
/// changes the recombination coefficients.
pub fn sqpt_state(j: usize, n: usize) -> Result<DensityMatrix> {
    check_index(j, n)?;
    let digits = PauliString::new(n, j)?.digits();
    let mut acc = sqpt_single(digits[0]);
    for &a in &digits[1..] {
        acc = acc.kron(&sqpt_single(a))?;
    }
    Ok(acc)
}

pub fn protocol_state(protocol: Protocol, j: usize, n: usize) -> Result<DensityMatrix> {
    match protocol {
        Protocol::Dptm => dptm_state(j, n),
        Protocol::Sqpt => sqpt_state(j, n),
    }
}

/// `β_ij = Tr[P_i ρ_j]` together with its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionMatrix {
    beta: DMatrix<f64>,
    inverse: DMatrix<f64>,
}

impl ReconstructionMatrix {
    pub fn from_states(n: usize, states: &[DensityMatrix]) -> Result<Self> {
        check_qubits(n)?;
        let size = basis_size(n);
        if states.len() != size {
            return Err(Error::DimensionMismatch {
                expected: size,
                found: states.len(),
            });
        }
        let mut beta = DMatrix::zeros(size, size);
        for (j, rho) in states.iter().enumerate() {
            if rho.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: rho.n(),
                });
            }
            beta.set_column(j, vectorize(rho).coeffs());
        }
        Self::from_beta(beta)
    }

    pub fn from_beta(beta: DMatrix<f64>) -> Result<Self> {
        let sv = beta.singular_values();
        let max = sv.max();
        let min = sv.min();
        if min.is_nan() || min <= 1e-12 * max {
            return Err(Error::Singular(max / min));
        }
        let inverse = beta
            .clone()
            .try_inverse()
            .ok_or(Error::Singular(f64::INFINITY))?;
        Ok(Self { beta, inverse })
    }

    pub fn beta(&self) -> &DMatrix<f64> {
        &self.beta
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    pub fn condition_number(&self) -> f64 {
        let sv = self.beta.singular_values();
        sv.max() / sv.min()
    }
}

/// A complete, linearly independent family of `d²` input states.
#[derive(Clone, Debug)]
pub struct StateFamily {
    protocol: Option<Protocol>,
    n: usize,
    states: Vec<DensityMatrix>,
    reconstruction: ReconstructionMatrix,
}

impl StateFamily {
    pub fn new(protocol: Protocol, n: usize) -> Result<Self> {
        let states = (0..basis_size(n))
            .map(|j| protocol_state(protocol, j, n))
            .collect::<Result<Vec<_>>>()?;
        let reconstruction = ReconstructionMatrix::from_states(n, &states)?;
        Ok(Self {
            protocol: Some(protocol),
            n,
            states,
            reconstruction,
        })
    }

    /// An arbitrary family, e.g. targets for [`prep_channel_solve`].
    pub fn custom(n: usize, states: Vec<DensityMatrix>) -> Result<Self> {
        let reconstruction = ReconstructionMatrix::from_states(n, &states)?;
        Ok(Self {
            protocol: None,
            n,
            states,
            reconstruction,
        })
    }

    pub fn protocol(&self) -> Option<Protocol> {
        self.protocol
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn state(&self, j: usize) -> &DensityMatrix {
        &self.states[j]
    }

    pub fn reconstruction(&self) -> &ReconstructionMatrix {
        &self.reconstruction
    }
}

pub fn beta_matrix(family: &StateFamily) -> &ReconstructionMatrix {
    family.reconstruction()
}

/// `β⁻¹` of the DPTM family in closed form: `δ_ij − (1 − δ_0j) δ_i0`.
pub fn dptm_inverse_closed_form(n: usize) -> DMatrix<f64> {
    let size = basis_size(n);
    DMatrix::from_fn(size, size, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        let off = if j != 0 && i == 0 { 1.0 } else { 0.0 };
        delta - off
    })
}

/// Single-qubit sQPT `β⁻¹` in closed form.
pub fn sqpt_single_inverse() -> DMatrix<f64> {
    DMatrix::from_row_slice(
        4,
        4,
        &[
            0.5, -0.5, -0.5, -0.5, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.5, -0.5, -0.5, 0.5,
        ],
    )
}

/// `(β_Q⁻¹)^{⊗n}` assembled from the single-qubit inverse.
pub fn sqpt_inverse_kron(n: usize) -> Result<DMatrix<f64>> {
    check_qubits(n)?;
    let single = sqpt_single_inverse();
    let mut acc = single.clone();
    for _ in 1..n {
        acc = acc.kronecker(&single);
    }
    Ok(acc)
}

/// Output of [`prep_channel_solve`]. `lambda` always satisfies the defining
/// equations; whether it is a physical channel is recorded in `report`.
#[derive(Clone, Debug)]
pub struct PrepSolution {
    pub lambda: PauliTransferMatrix,
    pub report: CptpReport,
}

impl PrepSolution {
    pub fn is_physical(&self) -> bool {
        self.report.is_cptp()
    }
}

/// Solves `Λ B = π` for the PTM `Λ` mapping each pure seed `ψ_j` to target `ρ_j`,
/// with `B_ij = Tr[P_i ψ_j]` and `π_ij = Tr[P_i ρ_j]`. No projection onto
/// CPTP maps is attempted.
pub fn prep_channel_solve(
    targets: &[DensityMatrix],
    seeds: &[DensityMatrix],
) -> Result<PrepSolution> {
    let n = seeds
        .first()
        .map(DensityMatrix::n)
        .ok_or(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        })?;
    let size = basis_size(n);
    if targets.len() != size || seeds.len() != size {
        return Err(Error::DimensionMismatch {
            expected: size,
            found: targets.len().min(seeds.len()),
        });
    }
    for (index, psi) in seeds.iter().enumerate() {
        let purity = psi.purity();
        if purity < 1.0 - PSD_TOL {
            return Err(Error::NotPure { index, purity });
        }
    }
    let b = ReconstructionMatrix::from_states(n, seeds)?;
    let mut pi = DMatrix::zeros(size, size);
    for (j, rho) in targets.iter().enumerate() {
        if rho.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rho.n(),
            });
        }
        pi.set_column(j, vectorize(rho).coeffs());
    }
    let lambda = PauliTransferMatrix::from_matrix_unchecked(n, pi * b.inverse())?;
    let report = ptm_to_choi(&lambda)?.validate();
    if !report.is_cp() {
        log::warn!(
            "preparation map is not completely positive (min Choi eigenvalue {:.3e})",
            report.min_choi_eigenvalue
        );
    }
    Ok(PrepSolution { lambda, report })
}

/// Common single- and two-qubit gates.
pub mod gates {
    use super::*;

    pub fn hadamard() -> CMatrix {
        (sigma(1) + sigma(3)) * Complex64::from(FRAC_1_SQRT_2)
    }

    pub fn phase() -> CMatrix {
        CMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
        ]))
    }

    /// Control on qubit 1, target on qubit 2.
    pub fn cnot() -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        let one = Complex64::new(1.0, 0.0);
        m[(0, 0)] = one;
        m[(1, 1)] = one;
        m[(2, 3)] = one;
        m[(3, 2)] = one;
        m
    }

    pub fn identity() -> CMatrix {
        sigma(0)
    }
}

/// The built-in preparation channels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrepChannel {
    /// `ψ ↦ ½ψ + ½XψX` on one qubit.
    E0,
    /// `E0` on qubit 2 of a two-qubit register.
    E1,
    /// `ψ ↦ ½UψU† + ½VUψU†V†`, `U = CNOT (S⊗𝟙)(H⊗𝟙)`, `V = (𝟙⊗Z)(𝟙⊗X)`.
    E2,
}

impl FromStr for PrepChannel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "E0" => Ok(Self::E0),
            "E1" => Ok(Self::E1),
            "E2" => Ok(Self::E2),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

impl PrepChannel {
    pub fn n(&self) -> usize {
        match self {
            Self::E0 => 1,
            Self::E1 | Self::E2 => 2,
        }
    }

    pub fn channel(&self) -> Result<KrausChannel> {
        let half = Complex64::from(FRAC_1_SQRT_2);
        let e0 = || KrausChannel::new(1, vec![sigma(0) * half, sigma(1) * half]);
        match self {
            Self::E0 => e0(),
            Self::E1 => e0()?.embed(1, 2),
            Self::E2 => {
                let id = gates::identity();
                let u = gates::cnot()
                    * gates::phase().kronecker(&id)
                    * gates::hadamard().kronecker(&id);
                let v = id.kronecker(&sigma(3)) * id.kronecker(&sigma(1));
                let vu = &v * &u;
                KrausChannel::new(2, vec![u * half, vu * half])
            }
        }
    }

    /// Pure state fed into the channel.
    pub fn seed(&self) -> Result<DensityMatrix> {
        match self {
            Self::E0 => DensityMatrix::basis(1, 0),
            // H on qubit 1 of |00⟩
            Self::E1 => DensityMatrix::basis(2, 0)?
                .conjugate(&gates::hadamard().kronecker(&gates::identity())),
            Self::E2 => DensityMatrix::basis(2, 0),
        }
    }

    /// DPTM input state the channel prepares.
    pub fn target(&self) -> Result<DensityMatrix> {
        match self {
            Self::E0 => dptm_state(0, 1),
            Self::E1 => dptm_state(4, 2),
            Self::E2 => dptm_state(6, 2),
        }
    }
}

pub fn prep_channel_builtin(name: &str) -> Result<KrausChannel> {
    name.parse::<PrepChannel>()?.channel()
}

/// True if `ρ` has purity 1 within the seed tolerance.
pub fn is_pure(rho: &DensityMatrix) -> bool {
    rho.purity() >= 1.0 - PSD_TOL
}

/// Largest `|a − b|` entry of two real matrices of equal shape.
pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}
