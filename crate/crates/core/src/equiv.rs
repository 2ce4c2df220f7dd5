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

//! Local-unitary relations between bipartite pure states.
//!
//! The three relations, in decreasing strength:
//!
//! * [`one_sided_witness`] — `ψ₂ = e^{iθ}(U ⊗ I)ψ₁`. Exists iff the reduced
//!   density matrices on the untouched side coincide (two purifications of
//!   the same reduced state differ by a unitary on the purifying side).
//! * [`two_sided_witness`] — `ψ₂ = e^{iθ}(V ⊗ W)ψ₁`. Exists iff the Schmidt
//!   spectra coincide.
//! * [`max_overlap_one_sided`] — when no one-sided witness exists, the best
//!   achievable `|⟨ψ₂|(U⊗I)ψ₁⟩|` over all unitaries `U`, which is the
//!   nuclear norm of `C₁C₂†` (a unitary Procrustes problem).
//!
//! [`solve_one_sided_2x2`] treats the 2x2 one-sided problem in closed form
//! for the pair `a|00⟩+b|11⟩` / `b*|00⟩−a*|11⟩`, exposing the two
//! incompatible modulus constraints that rule a witness out whenever
//! `|a| ≠ |b|`. [`filter_from_max_entangled`] builds the local contraction
//! that prepares a state from the maximally entangled one, and
//! [`relation_chain_check`] composes it with a two-sided witness to show
//! that the composition is order-sensitive: applying the filter first
//! reaches the target, applying it last generally does not.
//! [`commutation_gap`] measures that order sensitivity directly.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::linalg::{self, CMatrix, LinalgError};
use crate::state::{Side, StateError, StateVector};

/// Unitarity tolerance for operator arguments of [`commutation_gap`].
const OPERATOR_UNITARY_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum EquivError {
    #[error("dimension mismatch: {da1}x{db1} vs {da2}x{db2}")]
    DimensionMismatch { da1: usize, db1: usize, da2: usize, db2: usize },

    #[error("invalid parameters: {reason}")]
    BadParams { reason: String },

    #[error("equal local dimensions required, got {dim_a}x{dim_b}")]
    NotSquareDims { dim_a: usize, dim_b: usize },

    #[error("degenerate state: largest Schmidt coefficient {value:.3e} below tolerance {tol:.3e}")]
    DegenerateState { value: f64, tol: f64 },

    #[error("operator {which} is not unitary: defect {defect:.3e}")]
    NotUnitary { which: &'static str, defect: f64 },

    #[error("no two-sided witness: Schmidt spectra differ by {spectrum_gap:.3e}")]
    NoTwoSidedWitness { spectrum_gap: f64 },

    #[error(transparent)]
    State(#[from] StateError),

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The unitary `[[α, λβ], [−β*, λα*]]` with `|α|² + |β|² = 1 = |λ|`.
#[derive(Clone, Copy, Debug)]
pub struct Parametrized2x2Unitary {
    pub alpha: C64,
    pub beta: C64,
    pub lambda: C64,
}

impl Parametrized2x2Unitary {
    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_rows(&[
            vec![self.alpha, self.lambda * self.beta],
            vec![-self.beta.conj(), self.lambda * self.alpha.conj()],
        ])
    }

    /// Distance of the parameters from the constraint set.
    pub fn constraint_defect(&self) -> f64 {
        let norm = (self.alpha.norm_sqr() + self.beta.norm_sqr() - 1.0).abs();
        let unimodular = (self.lambda.norm() - 1.0).abs();
        norm.max(unimodular)
    }
}

/// Amplitudes `(a, b)` of the pair `a|00⟩+b|11⟩` / `b*|00⟩−a*|11⟩`.
///
/// Both must be nonzero with `|a|² + |b|² = 1`. Whether `|a| = |b|` (the
/// maximally entangled boundary) is a separately checkable property, not an
/// invariant.
#[derive(Clone, Copy, Debug)]
pub struct CounterexampleParams {
    a: C64,
    b: C64,
}

impl CounterexampleParams {
    pub fn new(a: C64, b: C64, tol: f64) -> Result<Self, EquivError> {
        let norm = a.norm_sqr() + b.norm_sqr();
        if (norm - 1.0).abs() >= tol {
            return Err(EquivError::BadParams {
                reason: format!("|a|^2 + |b|^2 = {norm}, expected 1"),
            });
        }
        if a.norm() < tol || b.norm() < tol {
            return Err(EquivError::BadParams {
                reason: "both amplitudes must be nonzero".to_string(),
            });
        }
        Ok(CounterexampleParams { a, b })
    }

    pub fn a(&self) -> C64 {
        self.a
    }

    pub fn b(&self) -> C64 {
        self.b
    }

    pub fn equal_moduli(&self, tol: f64) -> bool {
        (self.a.norm() - self.b.norm()).abs() < tol
    }

    /// `a|00⟩ + b|11⟩`.
    pub fn psi1(&self) -> StateVector {
        let zero = C64::new(0.0, 0.0);
        StateVector::renormalized(2, 2, vec![self.a, zero, zero, self.b])
            .expect("parameters are normalized")
    }

    /// `b*|00⟩ − a*|11⟩`.
    pub fn psi2(&self) -> StateVector {
        let zero = C64::new(0.0, 0.0);
        StateVector::renormalized(2, 2, vec![self.b.conj(), zero, zero, -self.a.conj()])
            .expect("parameters are normalized")
    }
}

/// A unitary on one subsystem with `ψ₂ ≈ e^{iθ}(U ⊗ I)ψ₁` (side A; mirrored
/// for side B).
#[derive(Clone, Debug)]
pub struct OneSidedWitness {
    pub side: Side,
    pub unitary: CMatrix,
    /// `‖(U⊗I)ψ₁ − e^{iθ}ψ₂‖` at the reported phase.
    pub residual: f64,
    /// Radians.
    pub phase: f64,
}

/// Outcome of the one-sided decision problem.
#[derive(Clone, Debug)]
pub enum OneSidedOutcome {
    Witness(OneSidedWitness),
    /// No witness exists; carries the Frobenius distance between the
    /// reduced density matrices on the untouched side.
    NoWitness { reduced_state_gap: f64 },
}

impl OneSidedOutcome {
    pub fn witness(&self) -> Option<&OneSidedWitness> {
        match self {
            OneSidedOutcome::Witness(w) => Some(w),
            OneSidedOutcome::NoWitness { .. } => None,
        }
    }
}

/// A pair of local unitaries with `ψ₂ ≈ e^{iθ}(V ⊗ W)ψ₁`.
#[derive(Clone, Debug)]
pub struct TwoSidedWitness {
    pub unitary_a: CMatrix,
    pub unitary_b: CMatrix,
    pub residual: f64,
    pub phase: f64,
}

#[derive(Clone, Debug)]
pub enum TwoSidedOutcome {
    Witness(TwoSidedWitness),
    /// Schmidt spectra differ; carries both spectra and their largest
    /// elementwise gap.
    NoWitness {
        spectrum_gap: f64,
        spectrum_first: Vec<f64>,
        spectrum_second: Vec<f64>,
    },
}

impl TwoSidedOutcome {
    pub fn witness(&self) -> Option<&TwoSidedWitness> {
        match self {
            TwoSidedOutcome::Witness(w) => Some(w),
            TwoSidedOutcome::NoWitness { .. } => None,
        }
    }
}

/// Local contraction `M` (with `M†M ≤ I`) that prepares a state from the
/// maximally entangled one: `(M ⊗ I)Φ ∝ ψ`.
#[derive(Clone, Debug)]
pub struct FilterOperator {
    pub matrix: CMatrix,
    /// `⟨Φ|(M†M ⊗ I)|Φ⟩ = 1/(d·λ_max²)`.
    pub success_probability: f64,
}

/// Best one-sided overlap and the unitary achieving it.
#[derive(Clone, Debug)]
pub struct MaxOverlap {
    /// `max_U |⟨ψ₂|(U⊗I)ψ₁⟩|`, the nuclear norm of the pairing matrix.
    pub value: f64,
    pub optimizer: CMatrix,
}

/// The two incompatible modulus requirements on `α` when `|a| ≠ |b|`.
#[derive(Clone, Copy, Debug)]
pub struct Inconsistency {
    /// `|α|` forced by matching the `|00⟩` amplitude: `|b/a|`.
    pub modulus_for_component00: f64,
    /// `|α|` forced by matching the `|11⟩` amplitude: `|a/b|`.
    pub modulus_for_component11: f64,
}

/// Outcome of the closed-form 2x2 one-sided problem.
#[derive(Clone, Debug)]
pub enum CounterexampleOutcome {
    Solution {
        unitary: Parametrized2x2Unitary,
        /// `‖(U⊗I)ψ₁ − ψ₂‖` (exact equality, no phase freedom).
        residual: f64,
    },
    Inconsistent(Inconsistency),
}

/// Report of [`relation_chain_check`]: both composition orders of the
/// filter and the two-sided witness, applied to the maximally entangled
/// state and compared against the target.
#[derive(Clone, Debug)]
pub struct ChainReport {
    pub filter: FilterOperator,
    pub witness: TwoSidedWitness,
    /// Residual of `(V⊗W)(M⊗I)Φ` against the target (filter applied first).
    /// This is the valid composition and is always small.
    pub filter_first_residual: f64,
    /// Residual of `(M⊗I)(V⊗W)Φ` against the target (filter applied last).
    /// Small only when the filter happens to commute with the rotations.
    pub filter_last_residual: f64,
    /// Whether the filter-last order also reaches the target within `tol`.
    pub filter_last_holds: bool,
}

fn check_same_dims(psi1: &StateVector, psi2: &StateVector) -> Result<(), EquivError> {
    if psi1.dims() != psi2.dims() {
        return Err(EquivError::DimensionMismatch {
            da1: psi1.dim_a(),
            db1: psi1.dim_b(),
            da2: psi2.dim_a(),
            db2: psi2.dim_b(),
        });
    }
    Ok(())
}

/// Plain Gram–Schmidt re-orthonormalization of nearly orthonormal columns.
fn orthonormalize(cols: &mut [Vec<C64>]) {
    for j in 0..cols.len() {
        for _ in 0..2 {
            for k in 0..j {
                let coeff: C64 = cols[k].iter().zip(&cols[j]).map(|(x, y)| x.conj() * y).sum();
                let prev = cols[k].clone();
                for (x, y) in cols[j].iter_mut().zip(&prev) {
                    *x -= coeff * y;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
}

/// Optimal phase and residual for `x ≈ e^{iθ}·target` (both coefficient
/// matrices, `target` of unit Frobenius norm).
fn phase_and_residual(x: &CMatrix, target: &CMatrix) -> (f64, f64) {
    let o = target.frobenius_inner(x);
    let theta = if o.norm() > 0.0 { o.arg() } else { 0.0 };
    let residual = x.sub(&target.scaled(C64::from_polar(1.0, theta))).frobenius_norm();
    (theta, residual)
}

/// Decides `ψ₂ = e^{iθ}(U ⊗ I)ψ₁` (side A; `(I ⊗ U)` for side B) and
/// constructs the witness when it exists.
///
/// The criterion is purification-theoretic: the witness exists iff the
/// reduced density matrices on the untouched side agree within `tol`
/// (Frobenius). The construction eigendecomposes the shared reduced state;
/// each eigenvector `|e_k⟩` with eigenvalue `p_k > tol` induces
/// `|a_k⟩ = (I⊗⟨e_k|)ψ₁/√p_k` and `|c_k⟩ = (I⊗⟨e_k|)ψ₂/√p_k`, and `U` maps
/// `a_k ↦ c_k`, completed deterministically on the orthogonal complement.
pub fn one_sided_witness(
    psi1: &StateVector,
    psi2: &StateVector,
    side: Side,
    tol: f64,
) -> Result<OneSidedOutcome, EquivError> {
    check_same_dims(psi1, psi2)?;
    let untouched = side.other();

    let rho1 = psi1.partial_trace(untouched);
    let rho2 = psi2.partial_trace(untouched);
    let gap = rho1.matrix().sub(rho2.matrix()).frobenius_norm();
    if gap >= tol {
        return Ok(OneSidedOutcome::NoWitness { reduced_state_gap: gap });
    }

    // Shared reduced state; the average is hermitized by construction of
    // partial_trace up to roundoff, eigh hermitizes exactly.
    let shared = rho1.matrix().add(rho2.matrix()).scaled_re(0.5);
    let (eigenvalues, eigenvectors) = linalg::eigh(&shared, 1e-6)?;

    let c1 = psi1.coefficient_matrix();
    let c2 = psi2.coefficient_matrix();
    // Contraction of ψ with ⟨e_k| on the untouched side.
    let project = |c: &CMatrix, e: &[C64]| -> Vec<C64> {
        match side {
            // Untouched side B: a[i] = Σ_j C[i][j] conj(e[j]).
            Side::A => (0..c.rows())
                .map(|i| (0..c.cols()).map(|j| c[(i, j)] * e[j].conj()).sum())
                .collect(),
            // Untouched side A: a[j] = Σ_i C[i][j] conj(e[i]).
            Side::B => (0..c.cols())
                .map(|j| (0..c.rows()).map(|i| c[(i, j)] * e[i].conj()).sum())
                .collect(),
        }
    };

    let mut from_cols: Vec<Vec<C64>> = Vec::new();
    let mut to_cols: Vec<Vec<C64>> = Vec::new();
    for (k, &p) in eigenvalues.iter().enumerate() {
        if p <= tol {
            continue;
        }
        let e = eigenvectors.column(k);
        let w = 1.0 / p.sqrt();
        from_cols.push(project(&c1, &e).into_iter().map(|z| z * w).collect());
        to_cols.push(project(&c2, &e).into_iter().map(|z| z * w).collect());
    }

    // Both column families are orthonormal up to the reduced-state gap;
    // clean them so the witness is exactly unitary, then extend.
    orthonormalize(&mut from_cols);
    orthonormalize(&mut to_cols);
    let dim = match side {
        Side::A => psi1.dim_a(),
        Side::B => psi1.dim_b(),
    };
    let rank = from_cols.len();
    let from_basis = assemble(from_cols, dim);
    let to_basis = assemble(to_cols, dim);
    let gram_tol = tol.max(1e-6);
    let q_from = linalg::complete_to_unitary(&from_basis, gram_tol)?;
    let q_to = linalg::complete_to_unitary(&to_basis, gram_tol)?;
    debug_assert!(rank <= dim);
    let unitary = q_to.mul(&q_from.adjoint());

    let transformed = match side {
        Side::A => unitary.mul(&c1),
        Side::B => c1.mul(&unitary.transpose()),
    };
    let (phase, residual) = phase_and_residual(&transformed, &c2);
    Ok(OneSidedOutcome::Witness(OneSidedWitness { side, unitary, residual, phase }))
}

fn assemble(cols: Vec<Vec<C64>>, rows: usize) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            m[(i, j)] = z;
        }
    }
    m
}

/// Decides `ψ₂ = e^{iθ}(V ⊗ W)ψ₁` and constructs the witness pair.
///
/// Exists iff the sorted Schmidt spectra agree elementwise within `tol`.
/// `V` maps the left Schmidt basis of `ψ₁` onto that of `ψ₂` and `W` does
/// the same on the right; mapping both sides by index keeps the
/// construction valid inside degenerate clusters, whatever basis the
/// decomposition picked for them.
pub fn two_sided_witness(
    psi1: &StateVector,
    psi2: &StateVector,
    tol: f64,
) -> Result<TwoSidedOutcome, EquivError> {
    check_same_dims(psi1, psi2)?;
    let s1 = psi1.schmidt(tol)?;
    let s2 = psi2.schmidt(tol)?;

    let spectrum_gap = s1
        .coefficients
        .iter()
        .zip(&s2.coefficients)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    if spectrum_gap >= tol {
        return Ok(TwoSidedOutcome::NoWitness {
            spectrum_gap,
            spectrum_first: s1.coefficients,
            spectrum_second: s2.coefficients,
        });
    }

    let unitary_a = s2.left_basis.mul(&s1.left_basis.adjoint());
    let unitary_b = s2.right_basis.mul(&s1.right_basis.adjoint());

    let transformed = unitary_a.mul(&psi1.coefficient_matrix()).mul(&unitary_b.transpose());
    let (phase, residual) = phase_and_residual(&transformed, &psi2.coefficient_matrix());
    Ok(TwoSidedOutcome::Witness(TwoSidedWitness { unitary_a, unitary_b, residual, phase }))
}

/// Maximizes `|⟨ψ₂|(U⊗I)ψ₁⟩|` over unitaries `U` on the given side.
///
/// The overlap is `tr(U·A)` with pairing matrix `A = C₁C₂†` (side A) or
/// `A = C₁ᵀ·conj(C₂)` (side B), so the maximum is the nuclear norm of `A`
/// and the optimizer is `right·left†` from its SVD. The value is 1 (within
/// tolerance) exactly when a one-sided witness exists.
pub fn max_overlap_one_sided(
    psi1: &StateVector,
    psi2: &StateVector,
    side: Side,
) -> Result<MaxOverlap, EquivError> {
    check_same_dims(psi1, psi2)?;
    let c1 = psi1.coefficient_matrix();
    let c2 = psi2.coefficient_matrix();
    let pairing = match side {
        Side::A => c1.mul(&c2.adjoint()),
        Side::B => c1.transpose().mul(&c2.conj()),
    };
    let svd = linalg::svd(&pairing, linalg::DEFAULT_TOL)?;
    let value = svd.singulars.iter().sum();
    let optimizer = svd.right.mul(&svd.left.adjoint());
    Ok(MaxOverlap { value, optimizer })
}

/// Closed-form one-sided analysis for the 2x2 pair `a|00⟩+b|11⟩` /
/// `b*|00⟩−a*|11⟩`.
///
/// Writing the candidate as `[[α, λβ], [−β*, λα*]]` and matching amplitudes
/// forces `β = 0` (hence `|α| = 1`) from the cross components, and then the
/// diagonal components require `|α| = |b/a|` and `|α| = |a/b|`
/// simultaneously — possible only when `|a| = |b|`. On that boundary the
/// solution is `α = b*/a`, `β = 0`, `λ = −a*/(b·α*)`, and `(U⊗I)ψ₁ = ψ₂`
/// exactly (no phase freedom).
pub fn solve_one_sided_2x2(
    params: &CounterexampleParams,
    tol: f64,
) -> Result<CounterexampleOutcome, EquivError> {
    let a = params.a();
    let b = params.b();
    let modulus_for_component00 = b.norm() / a.norm();
    let modulus_for_component11 = a.norm() / b.norm();

    if !params.equal_moduli(tol) {
        return Ok(CounterexampleOutcome::Inconsistent(Inconsistency {
            modulus_for_component00,
            modulus_for_component11,
        }));
    }

    let alpha = b.conj() / a;
    let beta = C64::new(0.0, 0.0);
    let lambda = -a.conj() / (b * alpha.conj());
    let unitary = Parametrized2x2Unitary { alpha, beta, lambda };

    let transformed = unitary.matrix().mul(&params.psi1().coefficient_matrix());
    let residual = transformed.sub(&params.psi2().coefficient_matrix()).frobenius_norm();
    Ok(CounterexampleOutcome::Solution { unitary, residual })
}

/// Builds the filter `M = C/λ_max` with `(M ⊗ I)Φ ∝ ψ`, `M†M ≤ I`, top
/// eigenvalue of `M†M` equal to 1, and success probability
/// `⟨Φ|(M†M ⊗ I)|Φ⟩ = 1/(d·λ_max²)`.
pub fn filter_from_max_entangled(psi: &StateVector, tol: f64) -> Result<FilterOperator, EquivError> {
    let (dim_a, dim_b) = psi.dims();
    if dim_a != dim_b {
        return Err(EquivError::NotSquareDims { dim_a, dim_b });
    }
    let schmidt = psi.schmidt(tol)?;
    let lambda_max = schmidt.coefficients[0];
    if lambda_max < tol {
        return Err(EquivError::DegenerateState { value: lambda_max, tol });
    }
    let matrix = psi.coefficient_matrix().scaled_re(1.0 / lambda_max);
    let success_probability = 1.0 / (dim_a as f64 * lambda_max * lambda_max);
    Ok(FilterOperator { matrix, success_probability })
}

/// `‖(M⊗I)(V⊗W)φ − (V⊗W)(M⊗I)φ‖`, computed directly as the vector-norm
/// difference of the two application orders.
///
/// `v` and `w` must be unitary; `m` may be any operator on side A.
pub fn commutation_gap(
    m: &CMatrix,
    v: &CMatrix,
    w: &CMatrix,
    phi: &StateVector,
) -> Result<f64, EquivError> {
    let (dim_a, dim_b) = phi.dims();
    for (op, which, d) in [(m, "M", dim_a), (v, "V", dim_a), (w, "W", dim_b)] {
        if op.rows() != d || op.cols() != d {
            return Err(EquivError::DimensionMismatch {
                da1: d,
                db1: d,
                da2: op.rows(),
                db2: op.cols(),
            });
        }
        if which != "M" {
            let defect = op.unitary_defect();
            if defect >= OPERATOR_UNITARY_TOL {
                return Err(EquivError::NotUnitary { which: if which == "V" { "V" } else { "W" }, defect });
            }
        }
    }
    let c = phi.coefficient_matrix();
    let wt = w.transpose();
    let filter_last = m.mul(&v.mul(&c).mul(&wt));
    let filter_first = v.mul(&m.mul(&c)).mul(&wt);
    Ok(filter_last.sub(&filter_first).frobenius_norm())
}

/// Composes the filter for `ψ₁` with the two-sided witness taking `ψ₁` to
/// `ψⱼ`, applies both orderings to the maximally entangled state, and
/// reports how close each order comes to `ψⱼ` (up to phase, after
/// normalization).
pub fn relation_chain_check(
    psi1: &StateVector,
    psij: &StateVector,
    tol: f64,
) -> Result<ChainReport, EquivError> {
    check_same_dims(psi1, psij)?;
    let (dim_a, dim_b) = psi1.dims();
    if dim_a != dim_b {
        return Err(EquivError::NotSquareDims { dim_a, dim_b });
    }
    let witness = match two_sided_witness(psi1, psij, tol)? {
        TwoSidedOutcome::Witness(w) => w,
        TwoSidedOutcome::NoWitness { spectrum_gap, .. } => {
            return Err(EquivError::NoTwoSidedWitness { spectrum_gap });
        }
    };
    let filter = filter_from_max_entangled(psi1, tol)?;

    let d = dim_a;
    let phi_coeff = CMatrix::identity(d).scaled_re(1.0 / (d as f64).sqrt());
    let target = psij.coefficient_matrix();
    let wt = witness.unitary_b.transpose();

    let residual_of = |x: &CMatrix| -> f64 {
        let norm = x.frobenius_norm();
        if norm < 1e-15 {
            // Nothing survives the filter; report the maximal distance
            // between unit vectors.
            return std::f64::consts::SQRT_2;
        }
        let normalized = x.scaled_re(1.0 / norm);
        phase_and_residual(&normalized, &target).1
    };

    let filter_first = witness.unitary_a.mul(&filter.matrix.mul(&phi_coeff)).mul(&wt);
    let filter_last = filter.matrix.mul(&witness.unitary_a.mul(&phi_coeff).mul(&wt));
    let filter_first_residual = residual_of(&filter_first);
    let filter_last_residual = residual_of(&filter_last);

    Ok(ChainReport {
        filter,
        witness,
        filter_first_residual,
        filter_last_residual,
        filter_last_holds: filter_last_residual < tol,
    })
}
