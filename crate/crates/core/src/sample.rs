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

//! Seeded random states and unitaries for tests and reproducible reports.
//!
//! States are Gaussian amplitude vectors normalized to the unit sphere;
//! unitaries are Gaussian matrices orthonormalized column by column. Both
//! are deterministic functions of the generator state, so recording the
//! seed reproduces a run exactly.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

use crate::linalg::CMatrix;
use crate::state::StateVector;

/// The generator used throughout the test suites.
pub type SampleRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal via Box–Muller.
fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn gaussian_c64(rng: &mut impl Rng) -> C64 {
    C64::new(gaussian(rng), gaussian(rng))
}

/// Haar-like random state: Gaussian amplitudes, normalized.
pub fn random_state(dim_a: usize, dim_b: usize, rng: &mut impl Rng) -> StateVector {
    let amps: Vec<C64> = (0..dim_a * dim_b).map(|_| gaussian_c64(rng)).collect();
    StateVector::renormalized(dim_a, dim_b, amps).expect("gaussian vector is nonzero")
}

/// Haar-like random unitary: Gaussian matrix, Gram–Schmidt orthonormalized.
pub fn random_unitary(d: usize, rng: &mut impl Rng) -> CMatrix {
    assert!(d >= 1);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    for _ in 0..d {
        let mut col: Vec<C64> = (0..d).map(|_| gaussian_c64(rng)).collect();
        // Two passes keep the basis orthonormal to roundoff.
        for _ in 0..2 {
            for b in &cols {
                let coeff: C64 = b.iter().zip(&col).map(|(x, y)| x.conj() * y).sum();
                for (c, x) in col.iter_mut().zip(b) {
                    *c -= coeff * x;
                }
            }
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 1e-8, "gaussian columns are independent almost surely");
        for c in col.iter_mut() {
            *c /= norm;
        }
        cols.push(col);
    }
    let mut u = CMatrix::zeros(d, d);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            u[(i, j)] = z;
        }
    }
    u
}
