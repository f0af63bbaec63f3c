//! Channel representations and conversions.
//!
//! Conventions:
//! * PTM: `Γ_ij = (1/d) Tr[P_i Φ(P_j)]`, acting on Pauli vectors `r_k = Tr[P_k ρ]`.
//! * Choi: `C = (Φ ⊗ Id)(|Ω⟩⟨Ω|)`, `|Ω⟩ = Σ_k |kk⟩ / √d`. The first (most
//!   significant) tensor factor is the channel output, so `Tr C = 1`, CP ⇔
//!   `C ⪰ 0` and TP ⇔ tracing out the output factor leaves `𝟙/d`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::pauli::{
    basis_size, dim, hermitian_eigenvalues, hermiticity_defect, pauli_coefficients, sigma,
    vectorize, CMatrix, DensityMatrix, PauliString, PauliVector,
};
use crate::{check_qubits, Error, Result, HERMITIAN_TOL, PSD_TOL, TP_TOL};

/// What [`KrausChannel::apply_raw`] does with a channel that is not trace preserving.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TpPolicy {
    #[default]
    Error,
    Warn,
}

/// A map `ρ ↦ Σ_i A_i ρ A_i†`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    n: usize,
    ops: Vec<CMatrix>,
}

impl KrausChannel {
    /// Validates shapes, operator count and trace preservation.
    pub fn new(n: usize, ops: Vec<CMatrix>) -> Result<Self> {
        let ch = Self::new_unchecked_tp(n, ops)?;
        let residual = ch.tp_residual();
        if residual > TP_TOL {
            return Err(Error::NotTracePreserving(residual));
        }
        Ok(ch)
    }

    /// Validates shapes and operator count only; for inspecting maps that may
    /// not be trace preserving.
    pub fn new_unchecked_tp(n: usize, ops: Vec<CMatrix>) -> Result<Self> {
        check_qubits(n)?;
        let d = dim(n);
        let max = d * d;
        if ops.is_empty() || ops.len() > max {
            return Err(Error::InvalidKrausCount {
                count: ops.len(),
                max,
            });
        }
        if let Some(bad) = ops.iter().find(|a| a.nrows() != d || a.ncols() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.nrows(),
            });
        }
        Ok(Self { n, ops })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_qubits(n)?;
        let d = dim(n);
        Ok(Self {
            n,
            ops: vec![CMatrix::identity(d, d)],
        })
    }

    pub fn unitary(n: usize, u: CMatrix) -> Result<Self> {
        Self::new(n, vec![u])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.ops
    }

    /// Frobenius norm of `Σ A†A − 𝟙`.
    pub fn tp_residual(&self) -> f64 {
        let d = dim(self.n);
        let mut acc = -CMatrix::identity(d, d);
        for a in &self.ops {
            acc += a.adjoint() * a;
        }
        acc.norm()
    }

    /// Applies the map to an arbitrary operator.
    pub fn apply_raw(&self, op: &CMatrix, policy: TpPolicy) -> Result<CMatrix> {
        let d = dim(self.n);
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: op.nrows(),
            });
        }
        let residual = self.tp_residual();
        if residual > TP_TOL {
            match policy {
                TpPolicy::Error => return Err(Error::NotTracePreserving(residual)),
                TpPolicy::Warn => {
                    log::warn!("applying a non trace preserving map (residual {residual:.3e})")
                }
            }
        }
        Ok(self.apply_unchecked(op))
    }

    fn apply_unchecked(&self, op: &CMatrix) -> CMatrix {
        let d = dim(self.n);
        let mut out = CMatrix::zeros(d, d);
        for a in &self.ops {
            out += a * op * a.adjoint();
        }
        out
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: rho.n(),
            });
        }
        let out = self.apply_raw(rho.matrix(), TpPolicy::Error)?;
        DensityMatrix::new(self.n, out)
    }

    /// Kraus set of `next ∘ self`, recompressed through the Choi matrix when
    /// the naive product has more than `d²` operators.
    pub fn then(&self, next: &KrausChannel) -> Result<KrausChannel> {
        if next.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: next.n,
            });
        }
        let ops: Vec<CMatrix> = next
            .ops
            .iter()
            .flat_map(|b| self.ops.iter().map(move |a| b * a))
            .collect();
        let max = basis_size(self.n);
        if ops.len() <= max {
            return Self::new_unchecked_tp(self.n, ops);
        }
        let choi = kraus_to_choi(&KrausChannel { n: self.n, ops });
        choi_to_kraus(&choi)
    }

    /// Embeds the channel on `position` (0-based, 0 = qubit 1) of an `n_total`-qubit register,
    /// acting as the identity elsewhere.
    pub fn embed(&self, position: usize, n_total: usize) -> Result<KrausChannel> {
        check_qubits(n_total)?;
        if position + self.n > n_total {
            return Err(Error::IndexOutOfRange {
                index: position,
                n: n_total,
                bound: n_total - self.n + 1,
            });
        }
        let left = CMatrix::identity(dim(position), dim(position));
        let rest = n_total - position - self.n;
        let right = CMatrix::identity(dim(rest), dim(rest));
        let ops = self
            .ops
            .iter()
            .map(|a| left.kronecker(a).kronecker(&right))
            .collect();
        Self::new_unchecked_tp(n_total, ops)
    }
}

/// Real `d² × d²` Pauli transfer matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliTransferMatrix {
    n: usize,
    gamma: DMatrix<f64>,
}

impl PauliTransferMatrix {
    /// Checks shape, row 0 = e₀ and `|Γ_ij| ≤ 1` within `TP_TOL`.
    pub fn new(n: usize, gamma: DMatrix<f64>) -> Result<Self> {
        let ptm = Self::from_matrix_unchecked(n, gamma)?;
        let row0 = ptm.row0_residual();
        if row0 > TP_TOL {
            return Err(Error::NotTracePreserving(row0));
        }
        if let Some(&bad) = ptm.gamma.iter().find(|v| v.abs() > 1.0 + TP_TOL) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: bad,
                reason: "PTM entries of a CPTP map lie in [-1, 1]",
            });
        }
        Ok(ptm)
    }

    /// Shape check only. Used for solver outputs whose physicality is reported
    /// separately.
    pub fn from_matrix_unchecked(n: usize, gamma: DMatrix<f64>) -> Result<Self> {
        check_qubits(n)?;
        let size = basis_size(n);
        if gamma.nrows() != size || gamma.ncols() != size {
            return Err(Error::DimensionMismatch {
                expected: size,
                found: gamma.nrows(),
            });
        }
        Ok(Self { n, gamma })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_qubits(n)?;
        let size = basis_size(n);
        Ok(Self {
            n,
            gamma: DMatrix::identity(size, size),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.gamma
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.gamma[(i, j)]
    }

    fn row0_residual(&self) -> f64 {
        (0..self.gamma.ncols())
            .map(|j| (self.gamma[(0, j)] - if j == 0 { 1.0 } else { 0.0 }).abs())
            .fold(0.0, f64::max)
    }

    /// Largest deviation of column 0 from e₀.
    pub fn unitality_residual(&self) -> f64 {
        (0..self.gamma.nrows())
            .map(|i| (self.gamma[(i, 0)] - if i == 0 { 1.0 } else { 0.0 }).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_unital(&self, tol: f64) -> bool {
        self.unitality_residual() <= tol
    }

    /// True iff every off-diagonal entry is at most `tol` in magnitude.
    pub fn is_pauli_channel(&self, tol: f64) -> bool {
        let size = self.gamma.nrows();
        (0..size).all(|i| (0..size).all(|j| i == j || self.gamma[(i, j)].abs() <= tol))
    }

    /// `Γ · r`.
    pub fn apply_vector(&self, r: &PauliVector) -> Result<PauliVector> {
        if r.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: r.n(),
            });
        }
        PauliVector::new(self.n, &self.gamma * r.coeffs())
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_vector(&vectorize(rho))?;
        crate::pauli::devectorize(&out)
    }

    /// `self · first`, i.e. the channel "first, then self".
    pub fn compose(&self, first: &PauliTransferMatrix) -> Result<PauliTransferMatrix> {
        if first.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: first.n,
            });
        }
        Ok(Self {
            n: self.n,
            gamma: &self.gamma * &first.gamma,
        })
    }

    pub fn max_abs_diff(&self, other: &PauliTransferMatrix) -> f64 {
        (&self.gamma - &other.gamma).amax()
    }
}

/// `Γ₂ · Γ₁`: apply `g1` first, then `g2`.
pub fn compose_ptm(
    g2: &PauliTransferMatrix,
    g1: &PauliTransferMatrix,
) -> Result<PauliTransferMatrix> {
    g2.compose(g1)
}

/// `Γ_ij = (1/d) Tr[P_i Φ(P_j)]`.
pub fn kraus_to_ptm(ch: &KrausChannel) -> Result<PauliTransferMatrix> {
    let n = ch.n;
    let size = basis_size(n);
    let d = dim(n) as f64;
    let mut gamma = DMatrix::zeros(size, size);
    for pj in PauliString::all(n)? {
        let image = ch.apply_unchecked(&pj.matrix());
        let col = pauli_coefficients(n, &image)? / d;
        gamma.set_column(pj.index(), &col);
    }
    let ptm = PauliTransferMatrix { n, gamma };
    let row0 = ptm.row0_residual();
    if row0 > TP_TOL {
        return Err(Error::NotTracePreserving(row0));
    }
    Ok(ptm)
}

/// `d² × d²` Choi matrix, output factor first.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    n: usize,
    data: CMatrix,
}

impl ChoiMatrix {
    pub fn new(n: usize, data: CMatrix) -> Result<Self> {
        check_qubits(n)?;
        let size = basis_size(n);
        if data.nrows() != size || data.ncols() != size {
            return Err(Error::DimensionMismatch {
                expected: size,
                found: data.nrows(),
            });
        }
        let defect = hermiticity_defect(&data);
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.data)
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&v| v > tol).count()
    }

    /// Trace over the channel-output factor, leaving the reference system.
    pub fn trace_output(&self) -> CMatrix {
        let d = dim(self.n);
        CMatrix::from_fn(d, d, |a, b| {
            (0..d).map(|o| self.data[(o * d + a, o * d + b)]).sum()
        })
    }

    /// Trace over the reference factor, leaving `Φ(𝟙)/d`.
    pub fn trace_reference(&self) -> CMatrix {
        let d = dim(self.n);
        CMatrix::from_fn(d, d, |a, b| {
            (0..d).map(|k| self.data[(a * d + k, b * d + k)]).sum()
        })
    }

    pub fn validate(&self) -> CptpReport {
        let d = dim(self.n);
        let id = CMatrix::identity(d, d);
        let df = Complex64::from(d as f64);
        let tp_residual = (self.trace_output() * df - &id).norm();
        let unital_residual = (self.trace_reference() * df - &id).norm();
        CptpReport {
            tp_residual,
            min_choi_eigenvalue: self.eigenvalues()[0],
            is_unital: unital_residual <= TP_TOL,
        }
    }
}

/// `C = (1/d²) Σ_ij Γ_ij P_i ⊗ conj(P_j)`.
pub fn ptm_to_choi(ptm: &PauliTransferMatrix) -> Result<ChoiMatrix> {
    let n = ptm.n;
    let size = basis_size(n);
    let paulis: Vec<CMatrix> = PauliString::all(n)?.map(|p| p.matrix()).collect();
    let conj: Vec<CMatrix> = paulis.iter().map(|p| p.map(|z| z.conj())).collect();
    let mut data = CMatrix::zeros(size, size);
    for (i, pi) in paulis.iter().enumerate() {
        for (j, pj) in conj.iter().enumerate() {
            let g = ptm.gamma[(i, j)];
            if g != 0.0 {
                data += pi.kronecker(pj) * Complex64::from(g);
            }
        }
    }
    data /= Complex64::from(size as f64);
    ChoiMatrix::new(n, data)
}

/// `C = Σ_a (A_a ⊗ 𝟙)|Ω⟩⟨Ω|(A_a ⊗ 𝟙)†`, built directly from the operators.
pub fn kraus_to_choi(ch: &KrausChannel) -> ChoiMatrix {
    let d = dim(ch.n);
    let scale = Complex64::from(1.0 / (d as f64).sqrt());
    let mut data = CMatrix::zeros(d * d, d * d);
    for a in &ch.ops {
        // component (o, k) of (A ⊗ 𝟙)|Ω⟩ is A[o, k]/√d
        let v = DVector::from_fn(d * d, |idx, _| a[(idx / d, idx % d)] * scale);
        data += &v * v.adjoint();
    }
    ChoiMatrix { n: ch.n, data }
}

/// Kraus operators from the Choi spectrum; eigenvalues in `(−PSD_TOL, PSD_TOL)`
/// are dropped and anything more negative is rejected.
pub fn choi_to_kraus(choi: &ChoiMatrix) -> Result<KrausChannel> {
    let d = dim(choi.n);
    let eig = choi.data.clone().symmetric_eigen();
    let min = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min < -PSD_TOL {
        return Err(Error::NotCompletelyPositive(min));
    }
    let ops: Vec<CMatrix> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &lambda)| lambda > PSD_TOL)
        .map(|(a, &lambda)| {
            let v = eig.eigenvectors.column(a);
            let scale = Complex64::from((d as f64 * lambda).sqrt());
            CMatrix::from_fn(d, d, |o, k| v[o * d + k] * scale)
        })
        .collect();
    KrausChannel::new_unchecked_tp(choi.n, ops)
}

/// Diagnostic summary of how close a map is to CPTP.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CptpReport {
    /// Frobenius norm of `Σ A†A − 𝟙`.
    pub tp_residual: f64,
    pub min_choi_eigenvalue: f64,
    pub is_unital: bool,
}

impl CptpReport {
    pub fn is_tp(&self) -> bool {
        self.tp_residual <= TP_TOL
    }

    pub fn is_cp(&self) -> bool {
        self.min_choi_eigenvalue >= -PSD_TOL
    }

    pub fn is_cptp(&self) -> bool {
        self.is_tp() && self.is_cp()
    }
}

pub fn validate_cptp(ch: &KrausChannel) -> CptpReport {
    let d = dim(ch.n);
    let unital = (ch.apply_unchecked(&CMatrix::identity(d, d)) - CMatrix::identity(d, d)).norm();
    CptpReport {
        tp_residual: ch.tp_residual(),
        min_choi_eigenvalue: kraus_to_choi(ch).eigenvalues()[0],
        is_unital: unital <= TP_TOL,
    }
}

pub fn is_pauli_channel(ptm: &PauliTransferMatrix, tol: f64) -> bool {
    ptm.is_pauli_channel(tol)
}

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: p,
            reason: "must lie in [0, 1]",
        })
    }
}

fn default_qubits() -> usize {
    1
}

/// The named channel models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", content = "params", rename_all = "snake_case")]
pub enum ChannelModel {
    Identity {
        #[serde(default = "default_qubits")]
        n: usize,
    },
    /// `|1⟩ → |0⟩` with probability `p`.
    AmplitudeDamping {
        p: f64,
    },
    BitFlip {
        p: f64,
    },
    PhaseFlip {
        p: f64,
    },
    /// `ρ ↦ (1 − p) ρ + p 𝟙/d` on `n` qubits.
    Depolarizing {
        p: f64,
        #[serde(default = "default_qubits")]
        n: usize,
    },
    /// Two-qubit Pauli channel with Markov-correlated weights
    /// `p_{a b} = p_a ((1 − μ) p_b + μ δ_ab)`.
    CorrelatedPauli {
        probs: [f64; 4],
        mu: f64,
    },
    /// [`ChannelModel::CorrelatedPauli`] with `probs = [1 − 3p/4, p/4, p/4, p/4]`.
    CorrelatedDepolarizing {
        p: f64,
        mu: f64,
    },
}

impl ChannelModel {
    pub fn n(&self) -> usize {
        match self {
            Self::Identity { n } | Self::Depolarizing { n, .. } => *n,
            Self::AmplitudeDamping { .. } | Self::BitFlip { .. } | Self::PhaseFlip { .. } => 1,
            Self::CorrelatedPauli { .. } | Self::CorrelatedDepolarizing { .. } => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Identity { .. } => "identity",
            Self::AmplitudeDamping { .. } => "amplitude_damping",
            Self::BitFlip { .. } => "bit_flip",
            Self::PhaseFlip { .. } => "phase_flip",
            Self::Depolarizing { .. } => "depolarizing",
            Self::CorrelatedPauli { .. } => "correlated_pauli",
            Self::CorrelatedDepolarizing { .. } => "correlated_depolarizing",
        }
    }

    pub fn build(&self) -> Result<KrausChannel> {
        match *self {
            Self::Identity { n } => KrausChannel::identity(n),
            Self::AmplitudeDamping { p } => amplitude_damping(p),
            Self::BitFlip { p } => single_pauli_flip(p, 1),
            Self::PhaseFlip { p } => single_pauli_flip(p, 3),
            Self::Depolarizing { p, n } => depolarizing(p, n),
            Self::CorrelatedPauli { probs, mu } => correlated_pauli(probs, mu),
            Self::CorrelatedDepolarizing { p, mu } => correlated_depolarizing(p, mu),
        }
    }
}

pub fn amplitude_damping(p: f64) -> Result<KrausChannel> {
    check_probability("p", p)?;
    let c = Complex64::from;
    let a0 = CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c((1.0 - p).sqrt())]);
    let a1 = CMatrix::from_row_slice(2, 2, &[c(0.0), c(p.sqrt()), c(0.0), c(0.0)]);
    KrausChannel::new(1, vec![a0, a1])
}

fn single_pauli_flip(p: f64, alpha: u8) -> Result<KrausChannel> {
    check_probability("p", p)?;
    let ops = vec![
        sigma(0) * Complex64::from((1.0 - p).sqrt()),
        sigma(alpha) * Complex64::from(p.sqrt()),
    ];
    KrausChannel::new(1, ops)
}

pub fn bit_flip(p: f64) -> Result<KrausChannel> {
    single_pauli_flip(p, 1)
}

pub fn phase_flip(p: f64) -> Result<KrausChannel> {
    single_pauli_flip(p, 3)
}

pub fn depolarizing(p: f64, n: usize) -> Result<KrausChannel> {
    check_probability("p", p)?;
    check_qubits(n)?;
    let size = basis_size(n) as f64;
    let ops = PauliString::all(n)?
        .map(|pk| {
            let w = if pk.is_identity() {
                1.0 - p + p / size
            } else {
                p / size
            };
            pk.matrix() * Complex64::from(w.sqrt())
        })
        .collect();
    KrausChannel::new(n, ops)
}

/// Weights `p_{ab}` of the correlated two-qubit Pauli channel, indexed `[a][b]`.
pub fn correlated_pauli_weights(probs: [f64; 4], mu: f64) -> Result<[[f64; 4]; 4]> {
    check_probability("mu", mu)?;
    for &q in &probs {
        check_probability("probs", q)?;
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > HERMITIAN_TOL {
        return Err(Error::InvalidParameter {
            name: "probs",
            value: total,
            reason: "probability vector must sum to 1",
        });
    }
    let mut w = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let cond = (1.0 - mu) * probs[b] + if a == b { mu } else { 0.0 };
            w[a][b] = probs[a] * cond;
        }
    }
    Ok(w)
}

pub fn correlated_pauli(probs: [f64; 4], mu: f64) -> Result<KrausChannel> {
    let w = correlated_pauli_weights(probs, mu)?;
    let mut ops = Vec::with_capacity(16);
    for (a, row) in w.iter().enumerate() {
        for (b, &weight) in row.iter().enumerate() {
            if weight > 0.0 {
                let op = sigma(a as u8).kronecker(&sigma(b as u8));
                ops.push(op * Complex64::from(weight.sqrt()));
            }
        }
    }
    KrausChannel::new(2, ops)
}

pub fn correlated_depolarizing(p: f64, mu: f64) -> Result<KrausChannel> {
    check_probability("p", p)?;
    let q = p / 4.0;
    correlated_pauli([1.0 - 3.0 * q, q, q, q], mu)
}

/// Random channel from a Haar-style random isometry: a complex Gaussian
/// `(num_kraus·d) × d` matrix is orthonormalized and cut into `d × d` blocks.
pub fn random_channel(n: usize, num_kraus: usize, seed: u64) -> Result<KrausChannel> {
    check_qubits(n)?;
    let d = dim(n);
    if num_kraus == 0 || num_kraus > d * d {
        return Err(Error::InvalidKrausCount {
            count: num_kraus,
            max: d * d,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMatrix::from_fn(num_kraus * d, d, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im)
    });
    let q = g.qr().q();
    let ops = (0..num_kraus)
        .map(|a| q.rows(a * d, d).into_owned())
        .collect();
    KrausChannel::new(n, ops)
}

/// Random full-rank mixed state `G G† / Tr[G G†]` with Gaussian `G`.
pub fn random_state(n: usize, seed: u64) -> Result<DensityMatrix> {
    check_qubits(n)?;
    let d = dim(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMatrix::from_fn(d, d, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im)
    });
    let m = &g * g.adjoint();
    let tr = m.trace();
    let mut m = m / tr;
    // exact Hermiticity
    m = (&m + m.adjoint()) * Complex64::from(0.5);
    DensityMatrix::new(n, m)
}
