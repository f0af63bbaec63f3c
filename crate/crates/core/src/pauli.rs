//! Pauli basis, density matrices and Pauli-coefficient vectorization.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{check_qubits, Error, Result, HERMITIAN_TOL, PSD_TOL};

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

const LABELS: [char; 4] = ['I', 'X', 'Y', 'Z'];

/// Hilbert-space dimension `2^n`.
pub fn dim(n: usize) -> usize {
    1 << n
}

/// Number of Pauli basis elements `4^n`.
pub fn basis_size(n: usize) -> usize {
    1 << (2 * n)
}

/// Single-qubit Pauli matrix `σ_α`, `α ∈ {0, 1, 2, 3}` ↔ `{I, X, Y, Z}`.
pub fn sigma(alpha: u8) -> CMatrix {
    match alpha {
        0 => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ONE]),
        1 => CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        2 => CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        3 => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        _ => panic!("Pauli digit out of range: {alpha}"),
    }
}

/// An element of the n-qubit Pauli basis, addressed by its lexicographic index.
///
/// Digit `m` (qubit `m + 1`) is the base-4 digit of weight `4^(n-1-m)`, so
/// `k = Σ 4^(n-m) α_m` with qubit 1 most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n: usize,
    index: usize,
}

impl PauliString {
    pub fn new(n: usize, index: usize) -> Result<Self> {
        check_qubits(n)?;
        let bound = basis_size(n);
        if index >= bound {
            return Err(Error::IndexOutOfRange { index, n, bound });
        }
        Ok(Self { n, index })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn from_digits(digits: &[u8]) -> Result<Self> {
        let n = digits.len();
        check_qubits(n)?;
        let mut index = 0usize;
        for &a in digits {
            if a > 3 {
                return Err(Error::Malformed(format!("Pauli digit {a} not in 0..=3")));
            }
            index = index * 4 + a as usize;
        }
        Self::new(n, index)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn is_identity(&self) -> bool {
        self.index == 0
    }

    /// Base-4 digits, qubit 1 first.
    pub fn digits(&self) -> Vec<u8> {
        (0..self.n)
            .map(|m| ((self.index >> (2 * (self.n - 1 - m))) & 3) as u8)
            .collect()
    }

    pub fn label(&self) -> String {
        self.digits().iter().map(|&a| LABELS[a as usize]).collect()
    }

    /// Dense `σ_{α₁} ⊗ … ⊗ σ_{αₙ}`.
    pub fn matrix(&self) -> CMatrix {
        let d = dim(self.n);
        let mut m = CMatrix::zeros(d, d);
        for (row, col, phase) in self.nonzeros() {
            m[(row, col)] = phase;
        }
        m
    }

    /// Kronecker-product construction of the same operator, one factor per qubit.
    pub fn matrix_by_kron(&self) -> CMatrix {
        let digits = self.digits();
        let mut acc = sigma(digits[0]);
        for &a in &digits[1..] {
            acc = acc.kronecker(&sigma(a));
        }
        acc
    }

    /// Every Pauli string is a signed/phased permutation matrix; yields
    /// `(row, col, entry)` for the single nonzero of each row.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        let digits = self.digits();
        let n = self.n;
        (0..dim(n)).map(move |row| {
            let mut col = row;
            // power of i
            let mut phase = 0u8;
            for (m, &a) in digits.iter().enumerate() {
                let shift = n - 1 - m;
                let bit = (row >> shift) & 1;
                match a {
                    1 => col ^= 1 << shift,
                    2 => {
                        col ^= 1 << shift;
                        phase += if bit == 0 { 3 } else { 1 };
                    }
                    3 => phase += 2 * bit as u8,
                    _ => {}
                }
            }
            let entry = match phase % 4 {
                0 => ONE,
                1 => I,
                2 => -ONE,
                _ => -I,
            };
            (row, col, entry)
        })
    }

    /// `Tr[P · op]` for an arbitrary square operator, using the permutation structure.
    pub fn trace_product(&self, op: &CMatrix) -> Result<Complex64> {
        let d = dim(self.n);
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: op.nrows(),
            });
        }
        Ok(self
            .nonzeros()
            .map(|(row, col, entry)| entry * op[(col, row)])
            .sum())
    }

    pub fn all(n: usize) -> Result<impl Iterator<Item = PauliString>> {
        check_qubits(n)?;
        Ok((0..basis_size(n)).map(move |index| PauliString { n, index }))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(0),
                'X' => Ok(1),
                'Y' => Ok(2),
                'Z' => Ok(3),
                _ => Err(Error::Malformed(format!("invalid Pauli label {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_digits(&digits)
    }
}

#[derive(Serialize, Deserialize)]
struct PauliStringRepr {
    label: String,
    index: usize,
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PauliStringRepr {
            label: self.label(),
            index: self.index,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PauliStringRepr::deserialize(d)?;
        let p: PauliString = repr.label.parse().map_err(serde::de::Error::custom)?;
        if p.index != repr.index {
            return Err(serde::de::Error::custom(format!(
                "label {} has index {}, not {}",
                repr.label, p.index, repr.index
            )));
        }
        Ok(p)
    }
}

/// Largest `|A - A†|` entry.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..m.nrows() {
        for c in r..m.ncols() {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// A validated n-qubit state: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    data: CMatrix,
}

impl DensityMatrix {
    pub fn new(n: usize, data: CMatrix) -> Result<Self> {
        check_qubits(n)?;
        let d = dim(n);
        if data.nrows() != d || data.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: data.nrows(),
            });
        }
        let defect = hermiticity_defect(&data);
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = data.trace();
        if (tr.re - 1.0).abs() > HERMITIAN_TOL || tr.im.abs() > HERMITIAN_TOL {
            return Err(Error::NotNormalized(tr.re));
        }
        let min_ev = hermitian_eigenvalues(&data)[0];
        if min_ev < -PSD_TOL {
            return Err(Error::NotPositive(min_ev));
        }
        Ok(Self { n, data })
    }

    /// Infers `n` from the matrix dimension.
    pub fn from_matrix(data: CMatrix) -> Result<Self> {
        let d = data.nrows();
        if !d.is_power_of_two() || d < 2 {
            return Err(Error::Malformed(format!("dimension {d} is not 2^n")));
        }
        Self::new(d.trailing_zeros() as usize, data)
    }

    /// `|ψ⟩⟨ψ|` for a normalized ket.
    pub fn pure(ket: &DVector<Complex64>) -> Result<Self> {
        let data = ket * ket.adjoint();
        Self::from_matrix(data)
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        check_qubits(n)?;
        let d = dim(n);
        Ok(Self {
            n,
            data: CMatrix::identity(d, d) / Complex64::from(d as f64),
        })
    }

    /// Computational basis state `|b⟩⟨b|`.
    pub fn basis(n: usize, b: usize) -> Result<Self> {
        check_qubits(n)?;
        let d = dim(n);
        if b >= d {
            return Err(Error::IndexOutOfRange {
                index: b,
                n,
                bound: d,
            });
        }
        let mut data = CMatrix::zeros(d, d);
        data[(b, b)] = ONE;
        Ok(Self { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        dim(self.n)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    /// `Tr[ρ²]`.
    pub fn purity(&self) -> f64 {
        // Tr[ρ ρ] = Σ |ρ_ab|² for Hermitian ρ
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn kron(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let n = self.n + other.n;
        check_qubits(n)?;
        Ok(Self {
            n,
            data: self.data.kronecker(&other.data),
        })
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &CMatrix) -> Result<DensityMatrix> {
        Self::new(self.n, u * &self.data * u.adjoint())
    }

    pub fn approx_eq(&self, other: &DensityMatrix, tol: f64) -> bool {
        self.n == other.n && (&self.data - &other.data).iter().all(|z| z.norm() <= tol)
    }
}

/// Pauli coefficients `r_k = Tr[P_k ρ]` of a state (no `1/d` factor).
#[derive(Clone, Debug, PartialEq)]
pub struct PauliVector {
    n: usize,
    coeffs: DVector<f64>,
}

impl PauliVector {
    pub fn new(n: usize, coeffs: DVector<f64>) -> Result<Self> {
        check_qubits(n)?;
        if coeffs.len() != basis_size(n) {
            return Err(Error::DimensionMismatch {
                expected: basis_size(n),
                found: coeffs.len(),
            });
        }
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &DVector<f64> {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> DVector<f64> {
        self.coeffs
    }
}

/// `Tr[P_k op]` for all `k`, discarding imaginary parts below `HERMITIAN_TOL`.
///
/// Errors if any coefficient has a larger imaginary part, i.e. `op` is not
/// Hermitian.
pub fn pauli_coefficients(n: usize, op: &CMatrix) -> Result<DVector<f64>> {
    check_qubits(n)?;
    let d = dim(n);
    if op.nrows() != d || op.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: op.nrows(),
        });
    }
    let mut out = DVector::zeros(basis_size(n));
    for p in PauliString::all(n)? {
        let z = p.trace_product(op)?;
        if z.im.abs() > HERMITIAN_TOL {
            return Err(Error::ImaginaryResidue(z.im));
        }
        out[p.index()] = z.re;
    }
    Ok(out)
}

/// `(1/d) Σ_k r_k P_k` without any validity checks.
pub fn operator_from_coefficients(n: usize, coeffs: &DVector<f64>) -> Result<CMatrix> {
    check_qubits(n)?;
    if coeffs.len() != basis_size(n) {
        return Err(Error::DimensionMismatch {
            expected: basis_size(n),
            found: coeffs.len(),
        });
    }
    let d = dim(n);
    let mut m = CMatrix::zeros(d, d);
    for p in PauliString::all(n)? {
        let c = coeffs[p.index()];
        if c == 0.0 {
            continue;
        }
        for (row, col, entry) in p.nonzeros() {
            m[(row, col)] += entry * c;
        }
    }
    Ok(m / Complex64::from(d as f64))
}

/// `Tr[P ρ]` computed as a dense matrix product trace.
pub fn pauli_expectation(p: &PauliString, rho: &DensityMatrix) -> Result<f64> {
    if p.n() != rho.n() {
        return Err(Error::DimensionMismatch {
            expected: p.n(),
            found: rho.n(),
        });
    }
    let z = (p.matrix() * rho.matrix()).trace();
    if z.im.abs() > HERMITIAN_TOL {
        return Err(Error::ImaginaryResidue(z.im));
    }
    Ok(z.re)
}

pub fn vectorize(rho: &DensityMatrix) -> PauliVector {
    // a validated state has no imaginary residue beyond tolerance
    let coeffs = pauli_coefficients(rho.n(), rho.matrix())
        .expect("validated density matrix has real Pauli coefficients");
    PauliVector { n: rho.n(), coeffs }
}

/// Inverse of [`vectorize`]. Rejects `r₀ ≠ 1` and anything that is not a valid state.
pub fn devectorize(r: &PauliVector) -> Result<DensityMatrix> {
    let r0 = r.coeffs[0];
    if (r0 - 1.0).abs() > HERMITIAN_TOL {
        return Err(Error::NotNormalized(r0));
    }
    DensityMatrix::new(r.n, operator_from_coefficients(r.n, &r.coeffs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ket(re_im: &[(f64, f64)]) -> DVector<Complex64> {
        DVector::from_iterator(
            re_im.len(),
            re_im.iter().map(|&(a, b)| Complex64::new(a, b)),
        )
    }

    fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn identity_single_qubit() {
        let p = PauliString::new(1, 0).unwrap();
        assert!(p.is_identity());
        assert_eq!(p.matrix(), CMatrix::identity(2, 2));
    }

    #[test]
    fn two_qubit_labels_follow_lexicographic_order() {
        let p4 = PauliString::new(2, 4).unwrap();
        assert_eq!(p4.label(), "XI");
        assert_eq!(p4.matrix(), sigma(1).kronecker(&sigma(0)));
        let p6 = PauliString::new(2, 6).unwrap();
        assert_eq!(p6.label(), "XY");
        assert_eq!(p6.matrix(), sigma(1).kronecker(&sigma(2)));
        assert_eq!("XY".parse::<PauliString>().unwrap(), p6);
    }

    #[test]
    fn sparse_and_kron_constructions_agree() {
        for n in 1..=3 {
            for p in PauliString::all(n).unwrap() {
                assert_eq!(p.matrix(), p.matrix_by_kron(), "{p}");
            }
        }
    }

    #[test]
    fn index_digit_round_trip_exhaustive() {
        for n in 1..=4 {
            for k in 0..basis_size(n) {
                let p = PauliString::new(n, k).unwrap();
                let q = PauliString::from_digits(&p.digits()).unwrap();
                assert_eq!(q.index(), k);
                let expected: usize = p
                    .digits()
                    .iter()
                    .enumerate()
                    .map(|(m, &a)| 4usize.pow((n - 1 - m) as u32) * a as usize)
                    .sum();
                assert_eq!(expected, k);
            }
        }
    }

    #[test]
    fn orthogonality_exhaustive() {
        for n in 1..=2 {
            let d = dim(n) as f64;
            let all: Vec<_> = PauliString::all(n).unwrap().collect();
            for a in &all {
                let ma = a.matrix();
                // Hermitian and unitary
                assert_eq!(ma.adjoint(), ma);
                assert_eq!(&ma * &ma, CMatrix::identity(ma.nrows(), ma.nrows()));
                for b in &all {
                    let t = (&ma * b.matrix()).trace() / d;
                    let expected = if a == b { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(t.re, expected, epsilon = 1e-15);
                    assert_abs_diff_eq!(t.im, 0.0, epsilon = 1e-15);
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(
            PauliString::new(1, 4),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            PauliString::new(7, 0),
            Err(Error::UnsupportedQubits(7))
        ));
        assert!(PauliString::new(0, 0).is_err());
    }

    #[test]
    fn serde_uses_label_and_index() {
        let p = PauliString::new(2, 6).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"label":"XY","index":6}"#);
        assert_eq!(serde_json::from_str::<PauliString>(&s).unwrap(), p);
        assert!(serde_json::from_str::<PauliString>(r#"{"label":"XY","index":5}"#).is_err());
    }

    #[test]
    fn expectation_examples() {
        let zero = DensityMatrix::basis(1, 0).unwrap();
        let z = PauliString::new(1, 3).unwrap();
        assert_abs_diff_eq!(pauli_expectation(&z, &zero).unwrap(), 1.0);

        let plus = DensityMatrix::pure(&ket(&[
            (std::f64::consts::FRAC_1_SQRT_2, 0.0),
            (std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ]))
        .unwrap();
        // (1 + X)/2 by hand
        let by_hand = (CMatrix::identity(2, 2) + sigma(1)) / Complex64::from(2.0);
        assert!(max_diff(plus.matrix(), &by_hand) < 1e-15);
        let x = PauliString::new(1, 1).unwrap();
        assert_abs_diff_eq!(pauli_expectation(&x, &plus).unwrap(), 1.0, epsilon = 1e-15);

        let id = PauliString::new(1, 0).unwrap();
        assert_abs_diff_eq!(pauli_expectation(&id, &plus).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn expectation_dimension_mismatch() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let z = PauliString::new(1, 3).unwrap();
        assert!(matches!(
            pauli_expectation(&z, &rho),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn vectorize_examples() {
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        let r = vectorize(&mixed);
        assert_abs_diff_eq!(r.coeffs()[0], 1.0, epsilon = 1e-15);
        assert!(r.coeffs().iter().skip(1).all(|&c| c.abs() < 1e-15));

        let zero = DensityMatrix::basis(1, 0).unwrap();
        let r = vectorize(&zero);
        assert_eq!(r.coeffs().as_slice(), &[1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn devectorize_rejects_bad_trace() {
        let r = PauliVector::new(1, DVector::from_vec(vec![0.5, 0.0, 0.0, 0.0])).unwrap();
        assert!(matches!(devectorize(&r), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn devectorize_rejects_non_state() {
        // Bloch vector of length 2
        let r = PauliVector::new(1, DVector::from_vec(vec![1.0, 2.0, 0.0, 0.0])).unwrap();
        assert!(matches!(devectorize(&r), Err(Error::NotPositive(_))));
    }

    #[test]
    fn density_matrix_validation() {
        let mut m = CMatrix::identity(2, 2);
        assert!(matches!(
            DensityMatrix::new(1, m.clone()),
            Err(Error::NotNormalized(_))
        ));
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        m /= Complex64::from(2.0);
        assert!(matches!(
            DensityMatrix::new(1, m),
            Err(Error::NotHermitian(_))
        ));
        let neg = CMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::from(1.5),
            Complex64::from(-0.5),
        ]));
        assert!(matches!(
            DensityMatrix::new(1, neg),
            Err(Error::NotPositive(_))
        ));
    }

    #[test]
    fn purity() {
        assert_abs_diff_eq!(DensityMatrix::basis(2, 3).unwrap().purity(), 1.0);
        assert_abs_diff_eq!(
            DensityMatrix::maximally_mixed(2).unwrap().purity(),
            0.25,
            epsilon = 1e-15
        );
    }
}
