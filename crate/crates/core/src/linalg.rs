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

//! Dense complex matrix kernels for small dimensions.
//!
//! Everything in this crate runs on matrices of dimension a few dozen at
//! most, so the decompositions below are plain Jacobi iterations: a
//! one-sided Jacobi SVD and a two-sided Jacobi Hermitian eigensolver. Both
//! are simple, numerically robust at these sizes, and fully deterministic —
//! identical inputs produce bit-identical outputs, which the rest of the
//! crate relies on for reproducible witness construction.
//!
//! Column-phase convention: the largest-magnitude entry of every left
//! singular vector (and of every eigenvector) is made real and positive,
//! with the compensating phase pushed into the paired right singular
//! vector. This pins an otherwise arbitrary gauge and makes decompositions
//! reproducible even across degenerate clusters.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64 as C64;
use thiserror::Error;

/// Default absolute tolerance for decompositions on unit-scale data.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Hard cap on Jacobi sweeps; at d <= 32 convergence takes ~10.
const MAX_SWEEPS: usize = 100;

/// Relative threshold below which a column pair counts as orthogonal.
const ORTH_EPS: f64 = 4.0 * f64::EPSILON;

/// Residual column norms below `scale * ZERO_COL_REL` are treated as zero
/// singular values whose left vectors come from basis completion instead of
/// normalizing numerical noise.
const ZERO_COL_REL: f64 = 1e-13;

#[derive(Debug, Error)]
pub enum LinalgError {
    /// Jacobi iteration did not reach the requested tolerance. Signals
    /// ill-conditioned input or a tolerance below what f64 can deliver.
    #[error("no convergence after {sweeps} sweeps: off-diagonal {off:.3e} above target {target:.3e}")]
    NonConvergence { sweeps: usize, off: f64, target: f64 },

    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("columns are not orthonormal: Gram defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotOrthonormal { defect: f64, tol: f64 },

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("cannot complete {cols} columns to a unitary in dimension {rows}")]
    TooManyColumns { rows: usize, cols: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from a row-major entry vector.
    ///
    /// Panics if `data.len() != rows * cols`; shape is a caller contract.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        CMatrix { rows, cols, data }
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        assert!(r > 0, "matrix needs at least one row");
        let c = rows[0].len();
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "all rows must have the same length");
            data.extend_from_slice(row);
        }
        CMatrix { rows: r, cols: c, data }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    fn from_columns(cols: &[Vec<C64>], rows: usize) -> Self {
        let c = cols.len();
        let mut m = CMatrix::zeros(rows, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for i in 0..rows {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scaled(&self, factor: C64) -> CMatrix {
        let data = self.data.iter().map(|z| z * factor).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scaled_re(&self, factor: f64) -> CMatrix {
        self.scaled(C64::new(factor, 0.0))
    }

    pub fn transpose(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj(&self) -> CMatrix {
        let data = self.data.iter().map(|z| z.conj()).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius inner product `tr(self† · rhs)`.
    pub fn frobenius_inner(&self, rhs: &CMatrix) -> C64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data.iter().zip(&rhs.data).map(|(a, b)| a.conj() * b).sum()
    }

    /// `‖self† self − I‖_F`; zero for unitary matrices.
    pub fn unitary_defect(&self) -> f64 {
        assert!(self.is_square());
        self.adjoint().mul(self).sub(&CMatrix::identity(self.rows)).frobenius_norm()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && self.unitary_defect() < tol
    }

    /// `‖self − self†‖_F`; zero for Hermitian matrices.
    pub fn hermitian_defect(&self) -> f64 {
        assert!(self.is_square());
        self.sub(&self.adjoint()).frobenius_norm()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Full singular value decomposition `A = left · diag(singulars) · right†`.
#[derive(Clone, Debug)]
pub struct SvdResult {
    /// Unitary, `rows x rows`.
    pub left: CMatrix,
    /// Nonnegative, sorted descending, length `min(rows, cols)`.
    pub singulars: Vec<f64>,
    /// Unitary, `cols x cols`.
    pub right: CMatrix,
}

impl SvdResult {
    /// Rebuilds `left · diag(singulars) · right†`.
    pub fn reconstruct(&self) -> CMatrix {
        let m = self.left.rows();
        let n = self.right.rows();
        let mut out = CMatrix::zeros(m, n);
        for (k, &s) in self.singulars.iter().enumerate() {
            for i in 0..m {
                let li = self.left[(i, k)] * s;
                for j in 0..n {
                    out[(i, j)] += li * self.right[(j, k)].conj();
                }
            }
        }
        out
    }
}

fn col_norm_sqr(col: &[C64]) -> f64 {
    col.iter().map(|z| z.norm_sqr()).sum()
}

/// `Σ conj(a_i) b_i`.
fn col_dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Applies the plane rotation `[[c, s·phase], [−s·conj(phase), c]]` to the
/// column pair `(p, q)` from the right. Requires `p < q`.
fn rotate_columns(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, phase: C64) {
    debug_assert!(p < q);
    let (head, tail) = cols.split_at_mut(q);
    let col_p = &mut head[p];
    let col_q = &mut tail[0];
    let s_phase = phase * s;
    let s_phase_conj = phase.conj() * s;
    for (xp, xq) in col_p.iter_mut().zip(col_q.iter_mut()) {
        let old_p = *xp;
        let old_q = *xq;
        *xp = old_p * c - old_q * s_phase_conj;
        *xq = old_p * s_phase + old_q * c;
    }
}

fn jacobi_cs(diag_p: f64, diag_q: f64, offdiag: f64) -> (f64, f64) {
    let tau = (diag_q - diag_p) / (2.0 * offdiag);
    let sign = if tau < 0.0 { -1.0 } else { 1.0 };
    let t = sign / (tau.abs() + (1.0 + tau * tau).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, c * t)
}

/// Singular value decomposition by one-sided Jacobi.
///
/// `tol` bounds the accepted relative off-orthogonality of the final column
/// set; iteration aims well below it and fails with
/// [`LinalgError::NonConvergence`] only if even `tol` is out of reach.
pub fn svd(a: &CMatrix, tol: f64) -> Result<SvdResult, LinalgError> {
    assert!(tol > 0.0, "svd: tolerance must be positive");
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    if a.rows() < a.cols() {
        // Work on the adjoint and swap the factors back.
        let t = svd(&a.adjoint(), tol)?;
        let mut result = SvdResult { left: t.right, singulars: t.singulars, right: t.left };
        fix_svd_phases(&mut result);
        return Ok(result);
    }

    let m = a.rows();
    let n = a.cols();
    let scale = a.frobenius_norm();

    let mut b: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    let mut converged = scale == 0.0 || n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let app = col_norm_sqr(&b[p]);
                let aqq = col_norm_sqr(&b[q]);
                if app == 0.0 || aqq == 0.0 {
                    continue;
                }
                let apq = col_dot(&b[p], &b[q]);
                let r = apq.norm();
                if r <= ORTH_EPS * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = apq / r;
                let (c, s) = jacobi_cs(app, aqq, r);
                rotate_columns(&mut b, p, q, c, s, phase);
                rotate_columns(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            converged = true;
        }
    }

    if !converged {
        // Accept anyway if the residual off-orthogonality meets the caller's
        // tolerance; this only triggers on pathological inputs.
        let mut off: f64 = 0.0;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let app = col_norm_sqr(&b[p]);
                let aqq = col_norm_sqr(&b[q]);
                if app == 0.0 || aqq == 0.0 {
                    continue;
                }
                off = off.max(col_dot(&b[p], &b[q]).norm() / (app * aqq).sqrt());
            }
        }
        if off > tol {
            return Err(LinalgError::NonConvergence { sweeps: MAX_SWEEPS, off, target: tol });
        }
    }

    // Stable descending sort of the singular values.
    let sig: Vec<f64> = (0..n).map(|j| col_norm_sqr(&b[j]).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sig[j].partial_cmp(&sig[i]).unwrap().then(i.cmp(&j)));

    let cutoff = scale * ZERO_COL_REL;
    let mut u_cols: Vec<Vec<C64>> = Vec::new();
    for &j in &order {
        if sig[j] > cutoff {
            let inv = 1.0 / sig[j];
            u_cols.push(b[j].iter().map(|z| z * inv).collect());
        }
    }
    let u_cols = complete_columns(u_cols, m);

    let singulars: Vec<f64> = order.iter().map(|&j| sig[j]).collect();
    let v_cols: Vec<Vec<C64>> = order.iter().map(|&j| v[j].clone()).collect();

    let mut result = SvdResult {
        left: CMatrix::from_columns(&u_cols, m),
        singulars,
        right: CMatrix::from_columns(&v_cols, n),
    };
    fix_svd_phases(&mut result);
    Ok(result)
}

/// Rotates column phases so the largest-magnitude entry of every left
/// singular vector is real positive. The compensating phase goes into the
/// paired right vector, keeping the product `left Σ right†` unchanged; right
/// vectors paired with (numerically) zero singular values are free and get
/// the same convention applied independently.
fn fix_svd_phases(result: &mut SvdResult) {
    let k = result.singulars.len();
    let top = result.singulars.first().copied().unwrap_or(0.0);
    let cutoff = top * ZERO_COL_REL;

    let m = result.left.rows();
    for col in 0..m {
        if let Some(ph) = column_phase(&result.left, col) {
            scale_column(&mut result.left, col, ph.conj());
            if col < k && result.singulars[col] > cutoff {
                scale_column(&mut result.right, col, ph.conj());
            }
        }
    }
    let n = result.right.rows();
    for col in 0..n {
        if col < k && result.singulars[col] > cutoff {
            continue;
        }
        if let Some(ph) = column_phase(&result.right, col) {
            scale_column(&mut result.right, col, ph.conj());
        }
    }
}

/// Phase of the largest-magnitude entry of a column (first index on ties).
fn column_phase(m: &CMatrix, col: usize) -> Option<C64> {
    let mut best = 0.0;
    let mut idx = None;
    for i in 0..m.rows() {
        let mag = m[(i, col)].norm();
        if mag > best {
            best = mag;
            idx = Some(i);
        }
    }
    idx.map(|i| m[(i, col)] / best)
}

fn scale_column(m: &mut CMatrix, col: usize, factor: C64) {
    for i in 0..m.rows() {
        m[(i, col)] *= factor;
    }
}

/// Eigendecomposition of a Hermitian matrix by two-sided Jacobi.
///
/// Returns eigenvalues sorted descending and a unitary whose columns are the
/// matching eigenvectors. The input must be Hermitian within `tol`; it is
/// exactly hermitized before iterating.
pub fn eigh(h: &CMatrix, tol: f64) -> Result<(Vec<f64>, CMatrix), LinalgError> {
    assert!(tol > 0.0, "eigh: tolerance must be positive");
    if !h.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    if !h.is_square() {
        return Err(LinalgError::NotSquare { rows: h.rows(), cols: h.cols() });
    }
    let defect = h.hermitian_defect();
    if defect >= tol {
        return Err(LinalgError::NotHermitian { defect, tol });
    }

    let n = h.rows();
    let mut w = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            w[(i, j)] = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
        }
        w[(i, i)] = C64::new(w[(i, i)].re, 0.0);
    }

    let scale = w.frobenius_norm();
    let mut q = CMatrix::identity(n);
    if scale == 0.0 || n < 2 {
        let values = (0..n).map(|i| w[(i, i)].re).collect();
        return Ok((values, q));
    }

    let stop = scale * ORTH_EPS;
    let mut q_cols: Vec<Vec<C64>> = (0..n).map(|j| q.column(j)).collect();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n - 1 {
            for qi in p + 1..n {
                let beta = w[(p, qi)];
                let r = beta.norm();
                if r <= stop {
                    continue;
                }
                rotated = true;
                let alpha = w[(p, p)].re;
                let gamma = w[(qi, qi)].re;
                let phase = beta / r;
                let (c, s) = jacobi_cs(alpha, gamma, r);

                // Columns p, q of W (right-multiplication by J).
                for i in 0..n {
                    let xp = w[(i, p)];
                    let xq = w[(i, qi)];
                    w[(i, p)] = xp * c - xq * (phase.conj() * s);
                    w[(i, qi)] = xp * (phase * s) + xq * c;
                }
                // Rows p, q of W (left-multiplication by J†).
                for j in 0..n {
                    let xp = w[(p, j)];
                    let xq = w[(qi, j)];
                    w[(p, j)] = xp * c - xq * (phase * s);
                    w[(qi, j)] = xp * (phase.conj() * s) + xq * c;
                }
                // The targeted entries are zero analytically; pin them.
                w[(p, qi)] = C64::new(0.0, 0.0);
                w[(qi, p)] = C64::new(0.0, 0.0);
                w[(p, p)] = C64::new(w[(p, p)].re, 0.0);
                w[(qi, qi)] = C64::new(w[(qi, qi)].re, 0.0);

                rotate_columns(&mut q_cols, p, qi, c, s, phase);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }

    if !converged {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for qi in 0..n {
                if p != qi {
                    off = off.max(w[(p, qi)].norm());
                }
            }
        }
        if off > tol * scale.max(1.0) {
            return Err(LinalgError::NonConvergence { sweeps: MAX_SWEEPS, off, target: tol * scale.max(1.0) });
        }
    }

    let values_raw: Vec<f64> = (0..n).map(|i| w[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values_raw[j].partial_cmp(&values_raw[i]).unwrap().then(i.cmp(&j)));

    let values: Vec<f64> = order.iter().map(|&i| values_raw[i]).collect();
    let cols: Vec<Vec<C64>> = order.iter().map(|&i| q_cols[i].clone()).collect();
    q = CMatrix::from_columns(&cols, n);
    for col in 0..n {
        if let Some(ph) = column_phase(&q, col) {
            scale_column(&mut q, col, ph.conj());
        }
    }
    Ok((values, q))
}

/// Extends `k <= n` orthonormal columns to a full `n x n` unitary.
///
/// The first `k` output columns equal the input columns exactly; the
/// remainder come from Gram–Schmidt over the standard basis in index order,
/// so the result is deterministic.
pub fn complete_to_unitary(cols: &CMatrix, tol: f64) -> Result<CMatrix, LinalgError> {
    assert!(tol > 0.0, "complete_to_unitary: tolerance must be positive");
    if !cols.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = cols.rows();
    let k = cols.cols();
    if k > n {
        return Err(LinalgError::TooManyColumns { rows: n, cols: k });
    }
    let gram_defect = cols.adjoint().mul(cols).sub(&CMatrix::identity(k)).frobenius_norm();
    if gram_defect >= tol {
        return Err(LinalgError::NotOrthonormal { defect: gram_defect, tol });
    }
    let given: Vec<Vec<C64>> = (0..k).map(|j| cols.column(j)).collect();
    let full = complete_columns(given, n);
    Ok(CMatrix::from_columns(&full, n))
}

/// Greedy in-order Gram–Schmidt completion against the standard basis.
///
/// The acceptance threshold is far below 1/sqrt(n) for any dimension in
/// range, which guarantees the sweep always collects `n` columns; two
/// orthogonalization passes keep accepted vectors orthonormal to roundoff.
fn complete_columns(mut cols: Vec<Vec<C64>>, n: usize) -> Vec<Vec<C64>> {
    const ACCEPT: f64 = 1e-6;
    debug_assert!(cols.len() <= n);
    for j in 0..n {
        if cols.len() == n {
            break;
        }
        let mut cand = vec![C64::new(0.0, 0.0); n];
        cand[j] = C64::new(1.0, 0.0);
        orthogonalize_against(&mut cand, &cols);
        let nrm = col_norm_sqr(&cand).sqrt();
        if nrm <= ACCEPT {
            continue;
        }
        for x in cand.iter_mut() {
            *x /= nrm;
        }
        orthogonalize_against(&mut cand, &cols);
        let nrm2 = col_norm_sqr(&cand).sqrt();
        for x in cand.iter_mut() {
            *x /= nrm2;
        }
        cols.push(cand);
    }
    debug_assert_eq!(cols.len(), n, "completion must fill the basis");
    cols
}

fn orthogonalize_against(v: &mut [C64], basis: &[Vec<C64>]) {
    for b in basis {
        let coeff = col_dot(b, v);
        for (x, y) in v.iter_mut().zip(b) {
            *x -= coeff * y;
        }
    }
}
