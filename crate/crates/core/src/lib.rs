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

//! QLUE — local-unitary relation analysis for bipartite pure quantum states.
//!
//! The crate decides and constructs the three local relations a pair of
//! bipartite pure states can stand in:
//!
//! * **one-sided**: `ψ₂ = e^{iθ} (U ⊗ I) ψ₁` for a unitary `U` on one
//!   subsystem — exists iff the reduced density matrices on the *other*
//!   subsystem coincide;
//! * **two-sided**: `ψ₂ = e^{iθ} (V ⊗ W) ψ₁` — exists iff the Schmidt
//!   spectra coincide;
//! * **filter**: `ψ = (M ⊗ I) Φ` up to normalization, where `Φ` is
//!   maximally entangled and `M` is a contraction (`M†M ≤ I`) with an
//!   associated success probability.
//!
//! On top of the constructions it quantifies the best achievable one-sided
//! overlap (a nuclear-norm maximization), solves the 2x2 one-sided problem
//! in closed form, and measures the commutation gap between applying a
//! filter before versus after a pair of local rotations — the quantity that
//! separates the valid composition order from the invalid one.
//!
//! Equally entangled orthogonal states are always two-sided related, but
//! not, in general, one-sided related; `a|00⟩ + b|11⟩` versus
//! `b*|00⟩ − a*|11⟩` with `|a| ≠ |b|` is the canonical pair exhibiting the
//! difference, and [`equiv::solve_one_sided_2x2`] reproduces it in closed
//! form.
//!
//! Index convention, fixed project-wide: a state on `ℋ¹ ⊗ ℋ²` with local
//! dimensions `(dA, dB)` stores the amplitude of `|i⟩₁|j⟩₂` at position
//! `i·dB + j`, equivalently as the `(i, j)` entry of its coefficient
//! matrix.

pub mod audit;
pub mod equiv;
pub mod linalg;
pub mod sample;
pub mod state;

/// Default equality tolerance used by the audit layer and the CLI.
pub const DEFAULT_TOL: f64 = 1e-8;

pub use linalg::{CMatrix, LinalgError, SvdResult};
pub use state::{DensityMatrix, SchmidtDecomposition, Side, StateError, StateVector};
