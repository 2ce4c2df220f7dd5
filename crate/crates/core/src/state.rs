// Copyright 2026 The QLUE Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Bipartite pure states: Schmidt analysis, partial trace, overlaps.
//!
//! A [`StateVector`] is a normalized amplitude vector on `ℋ¹ ⊗ ℋ²` with
//! declared local dimensions. Its [`CMatrix`] coefficient form (`C[i][j]` =
//! amplitude of `|i⟩₁|j⟩₂`) is the bridge to matrix decompositions: Schmidt
//! coefficients are the singular values of `C`, and the reduced density
//! matrices are `C·C†` (side A) and `Cᵀ·conj(C)` (side B).

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::linalg::{self, CMatrix, LinalgError};

/// Norms below this count as the zero vector when renormalizing.
const ZERO_NORM_CUTOFF: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("amplitude vector has length {got}, expected {expected} for dimensions {dim_a}x{dim_b}")]
    BadShape { dim_a: usize, dim_b: usize, expected: usize, got: usize },

    #[error("state is not normalized: norm = {norm} (and renormalization was not requested)")]
    NotNormalized { norm: f64 },

    #[error("state vector is numerically zero")]
    ZeroVector,

    #[error("dimension mismatch: {da1}x{db1} vs {da2}x{db2}")]
    DimensionMismatch { da1: usize, db1: usize, da2: usize, db2: usize },

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Which subsystem an operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::A => write!(f, "A"),
            Side::B => write!(f, "B"),
        }
    }
}

/// How [`make_state`] treats an amplitude vector whose norm is not 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// Reject with [`StateError::NotNormalized`] if `|norm − 1| ≥ tol`.
    Strict,
    /// Scale the amplitudes by `1/norm`.
    Renormalize,
}

/// Normalized pure state on `ℋ¹ ⊗ ℋ²`.
///
/// Amplitudes are stored with the fixed index convention `i·dimB + j` for
/// `|i⟩₁|j⟩₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    dim_a: usize,
    dim_b: usize,
    amps: Vec<C64>,
}

/// Validates and builds a [`StateVector`].
pub fn make_state(
    dim_a: usize,
    dim_b: usize,
    amps: Vec<C64>,
    tol: f64,
    mode: Normalization,
) -> Result<StateVector, StateError> {
    if dim_a == 0 || dim_b == 0 || amps.len() != dim_a * dim_b {
        return Err(StateError::BadShape {
            dim_a,
            dim_b,
            expected: dim_a * dim_b,
            got: amps.len(),
        });
    }
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < ZERO_NORM_CUTOFF {
        return Err(StateError::ZeroVector);
    }
    match mode {
        Normalization::Strict => {
            if (norm - 1.0).abs() >= tol {
                return Err(StateError::NotNormalized { norm });
            }
            Ok(StateVector { dim_a, dim_b, amps })
        }
        Normalization::Renormalize => {
            let inv = 1.0 / norm;
            let amps = amps.into_iter().map(|z| z * inv).collect();
            Ok(StateVector { dim_a, dim_b, amps })
        }
    }
}

impl StateVector {
    /// Strict constructor: the amplitudes must already be normalized.
    pub fn new(dim_a: usize, dim_b: usize, amps: Vec<C64>, tol: f64) -> Result<Self, StateError> {
        make_state(dim_a, dim_b, amps, tol, Normalization::Strict)
    }

    /// Constructor that rescales the amplitudes to unit norm.
    pub fn renormalized(dim_a: usize, dim_b: usize, amps: Vec<C64>) -> Result<Self, StateError> {
        make_state(dim_a, dim_b, amps, f64::EPSILON, Normalization::Renormalize)
    }

    /// The maximally entangled state `(1/√d) Σᵢ |i⟩|i⟩` on `d x d`.
    pub fn maximally_entangled(d: usize) -> Self {
        assert!(d >= 1);
        let mut amps = vec![C64::new(0.0, 0.0); d * d];
        let w = 1.0 / (d as f64).sqrt();
        for i in 0..d {
            amps[i * d + i] = C64::new(w, 0.0);
        }
        StateVector { dim_a: d, dim_b: d, amps }
    }

    /// Builds a state from its coefficient matrix (rows index side A).
    pub fn from_coefficients(c: &CMatrix, tol: f64, mode: Normalization) -> Result<Self, StateError> {
        make_state(c.rows(), c.cols(), c.entries().to_vec(), tol, mode)
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, i: usize, j: usize) -> C64 {
        self.amps[i * self.dim_b + j]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// The `dimA x dimB` matrix `C` with `ψ = Σᵢⱼ C[i][j] |i⟩|j⟩`.
    pub fn coefficient_matrix(&self) -> CMatrix {
        CMatrix::from_vec(self.dim_a, self.dim_b, self.amps.clone())
    }

    fn check_same_dims(&self, other: &StateVector) -> Result<(), StateError> {
        if self.dims() != other.dims() {
            return Err(StateError::DimensionMismatch {
                da1: self.dim_a,
                db1: self.dim_b,
                da2: other.dim_a,
                db2: other.dim_b,
            });
        }
        Ok(())
    }

    /// Inner product `⟨self|other⟩`.
    pub fn overlap(&self, other: &StateVector) -> Result<C64, StateError> {
        self.check_same_dims(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Tests `other ≈ e^{iθ} self`; returns the phase `θ = arg⟨self|other⟩`
    /// when the states agree up to a global phase.
    pub fn equal_up_to_phase(&self, other: &StateVector, tol: f64) -> Result<Option<f64>, StateError> {
        let o = self.overlap(other)?;
        if o.norm() >= 1.0 - tol {
            Ok(Some(o.arg()))
        } else {
            Ok(None)
        }
    }

    /// Schmidt decomposition via the SVD of the coefficient matrix.
    ///
    /// Coefficients below `tol` are reported as exact zeros. The basis
    /// matrices are full square unitaries (zero coefficients keep their
    /// completed basis columns), so `left_basis` is `dimA x dimA` and
    /// `right_basis` is `dimB x dimB`.
    pub fn schmidt(&self, tol: f64) -> Result<SchmidtDecomposition, StateError> {
        let svd_tol = tol.clamp(f64::MIN_POSITIVE, linalg::DEFAULT_TOL);
        let svd = linalg::svd(&self.coefficient_matrix(), svd_tol)?;
        let coefficients = svd
            .singulars
            .iter()
            .map(|&s| if s < tol { 0.0 } else { s })
            .collect();
        Ok(SchmidtDecomposition {
            coefficients,
            left_basis: svd.left,
            right_basis: svd.right.conj(),
        })
    }

    /// Entanglement entropy `−Σ λ² log₂ λ²` in bits.
    pub fn entanglement_entropy(&self) -> Result<f64, StateError> {
        let schmidt = self.schmidt(linalg::DEFAULT_TOL)?;
        Ok(schmidt.entropy_bits())
    }

    /// Reduced density matrix of the kept subsystem.
    pub fn partial_trace(&self, keep: Side) -> DensityMatrix {
        let c = self.coefficient_matrix();
        let matrix = match keep {
            // ρ_A[i][i'] = Σ_j C[i][j] conj(C[i'][j])
            Side::A => {
                let mut rho = CMatrix::zeros(self.dim_a, self.dim_a);
                for i in 0..self.dim_a {
                    for i2 in 0..self.dim_a {
                        let mut acc = C64::new(0.0, 0.0);
                        for j in 0..self.dim_b {
                            acc += c[(i, j)] * c[(i2, j)].conj();
                        }
                        rho[(i, i2)] = acc;
                    }
                }
                rho
            }
            // ρ_B[j][j'] = Σ_i C[i][j] conj(C[i][j'])
            Side::B => {
                let mut rho = CMatrix::zeros(self.dim_b, self.dim_b);
                for j in 0..self.dim_b {
                    for j2 in 0..self.dim_b {
                        let mut acc = C64::new(0.0, 0.0);
                        for i in 0..self.dim_a {
                            acc += c[(i, j)] * c[(i, j2)].conj();
                        }
                        rho[(j, j2)] = acc;
                    }
                }
                rho
            }
        };
        DensityMatrix { matrix }
    }

    /// Applies local operators: `(A ⊗ B) ψ`, with `None` standing for the
    /// identity. Intended for unitary operators — the result is renormalized
    /// to absorb roundoff, so a non-unitary operator silently loses its
    /// scale.
    pub fn apply_local_unitaries(
        &self,
        op_a: Option<&CMatrix>,
        op_b: Option<&CMatrix>,
    ) -> Result<StateVector, StateError> {
        if let Some(a) = op_a {
            if a.rows() != self.dim_a || a.cols() != self.dim_a {
                return Err(StateError::DimensionMismatch {
                    da1: self.dim_a,
                    db1: self.dim_b,
                    da2: a.rows(),
                    db2: a.cols(),
                });
            }
        }
        if let Some(b) = op_b {
            if b.rows() != self.dim_b || b.cols() != self.dim_b {
                return Err(StateError::DimensionMismatch {
                    da1: self.dim_a,
                    db1: self.dim_b,
                    da2: b.rows(),
                    db2: b.cols(),
                });
            }
        }
        let mut c = self.coefficient_matrix();
        if let Some(a) = op_a {
            c = a.mul(&c);
        }
        if let Some(b) = op_b {
            c = c.mul(&b.transpose());
        }
        StateVector::from_coefficients(&c, f64::EPSILON, Normalization::Renormalize)
    }
}

/// Schmidt form `ψ = Σₖ λₖ |leftₖ⟩|rightₖ⟩`.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    /// Nonnegative, sorted descending, length `min(dimA, dimB)`.
    pub coefficients: Vec<f64>,
    /// `dimA x dimA` unitary; column `k` is the k-th left Schmidt vector.
    pub left_basis: CMatrix,
    /// `dimB x dimB` unitary; column `k` is the k-th right Schmidt vector.
    pub right_basis: CMatrix,
}

impl SchmidtDecomposition {
    /// Number of coefficients above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.coefficients.iter().filter(|&&s| s > tol).count()
    }

    /// Entanglement entropy `−Σ λ² log₂ λ²` in bits, with `0·log 0 = 0`.
    pub fn entropy_bits(&self) -> f64 {
        -self
            .coefficients
            .iter()
            .map(|&s| {
                let p = s * s;
                if p > 0.0 {
                    p * p.log2()
                } else {
                    0.0
                }
            })
            .sum::<f64>()
    }

    /// All coefficients within `tol` of `1/√d` with `d = min(dimA, dimB)`.
    pub fn is_maximally_entangled(&self, tol: f64) -> bool {
        let d = self.coefficients.len();
        let w = 1.0 / (d as f64).sqrt();
        self.coefficients.iter().all(|&s| (s - w).abs() < tol)
    }

    /// Rebuilds the coefficient matrix `Σₖ λₖ leftₖ rightₖᵀ`.
    pub fn reconstruct(&self) -> CMatrix {
        let da = self.left_basis.rows();
        let db = self.right_basis.rows();
        let mut c = CMatrix::zeros(da, db);
        for (k, &s) in self.coefficients.iter().enumerate() {
            if s == 0.0 {
                continue;
            }
            for i in 0..da {
                let li = self.left_basis[(i, k)] * s;
                for j in 0..db {
                    c[(i, j)] += li * self.right_basis[(j, k)];
                }
            }
        }
        c
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Wraps a matrix after checking the density-matrix invariants.
    pub fn new(matrix: CMatrix, tol: f64) -> Result<Self, StateError> {
        if !matrix.is_square() {
            return Err(StateError::Linalg(LinalgError::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            }));
        }
        let dm = DensityMatrix { matrix };
        dm.validate(tol)?;
        Ok(dm)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Eigenvalues sorted descending.
    pub fn eigenvalues(&self, tol: f64) -> Result<Vec<f64>, StateError> {
        let (values, _) = linalg::eigh(&self.matrix, tol)?;
        Ok(values)
    }

    /// Checks Hermiticity, positivity (eigenvalues ≥ −tol) and unit trace.
    pub fn validate(&self, tol: f64) -> Result<(), StateError> {
        let defect = self.matrix.hermitian_defect();
        if defect >= tol {
            return Err(StateError::Linalg(LinalgError::NotHermitian { defect, tol }));
        }
        let values = self.eigenvalues(tol)?;
        if values.iter().any(|&v| v < -tol) {
            return Err(StateError::Linalg(LinalgError::NonConvergence {
                sweeps: 0,
                off: values.iter().cloned().fold(0.0, f64::min).abs(),
                target: tol,
            }));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() >= tol || tr.im.abs() >= tol {
            return Err(StateError::NotNormalized { norm: tr.re });
        }
        Ok(())
    }
}
