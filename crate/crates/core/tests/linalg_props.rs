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

//! Invariants of the dense kernels on randomized inputs.

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use qlue::linalg::{self, CMatrix};
use qlue::sample;

fn matrix_strategy(max_dim: usize) -> impl Strategy<Value = CMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(m, n)| {
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), m * n).prop_map(move |entries| {
            CMatrix::from_vec(m, n, entries.into_iter().map(|(re, im)| C64::new(re, im)).collect())
        })
    })
}

fn hermitian_strategy(max_dim: usize) -> impl Strategy<Value = CMatrix> {
    (1..=max_dim).prop_flat_map(|n| {
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n).prop_map(move |entries| {
            let b = CMatrix::from_vec(n, n, entries.into_iter().map(|(re, im)| C64::new(re, im)).collect());
            b.add(&b.adjoint()).scaled_re(0.5)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn svd_reconstructs_and_factors_are_unitary(a in matrix_strategy(6)) {
        let r = linalg::svd(&a, 1e-9).unwrap();
        let bound = 1e-9 * a.frobenius_norm().max(1.0);
        prop_assert!(r.reconstruct().sub(&a).frobenius_norm() <= bound);
        prop_assert!(r.left.unitary_defect() <= 1e-9);
        prop_assert!(r.right.unitary_defect() <= 1e-9);
        for w in r.singulars.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        prop_assert!(r.singulars.iter().all(|&s| s >= 0.0));
    }

    #[test]
    fn eigh_reconstructs_hermitian_input(h in hermitian_strategy(6)) {
        let (values, vectors) = linalg::eigh(&h, 1e-9).unwrap();
        let diag = CMatrix::from_diagonal(
            &values.iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>(),
        );
        let resid = h.mul(&vectors).sub(&vectors.mul(&diag)).frobenius_norm();
        prop_assert!(resid <= 1e-9 * h.frobenius_norm().max(1.0));
        prop_assert!(vectors.unitary_defect() <= 1e-9);
        for w in values.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn eigh_on_psd_input_is_nonnegative(a in matrix_strategy(5)) {
        let gram = a.adjoint().mul(&a);
        let (values, _) = linalg::eigh(&gram, 1e-9).unwrap();
        prop_assert!(values.iter().all(|&v| v >= -1e-9));
    }
}

#[test]
fn eigh_random_hermitian_4x4_reconstruction() {
    let mut rng = sample::seeded_rng(2024);
    for _ in 0..50 {
        let b = random_matrix(4, 4, &mut rng);
        let h = b.add(&b.adjoint());
        let (values, vectors) = linalg::eigh(&h, 1e-9).unwrap();
        let diag =
            CMatrix::from_diagonal(&values.iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>());
        let recon = vectors.mul(&diag).mul(&vectors.adjoint());
        assert!(recon.sub(&h).frobenius_norm() < 1e-9 * h.frobenius_norm().max(1.0));
    }
}

#[test]
fn svd_random_3x3_reconstruction() {
    let mut rng = sample::seeded_rng(77);
    for _ in 0..50 {
        let a = random_matrix(3, 3, &mut rng);
        let r = linalg::svd(&a, 1e-9).unwrap();
        assert!(r.reconstruct().sub(&a).frobenius_norm() < 1e-9 * a.frobenius_norm().max(1.0));
        assert!(r.left.unitary_defect() < 1e-9);
        assert!(r.right.unitary_defect() < 1e-9);
    }
}

#[test]
fn singular_values_of_unitaries_are_one() {
    let mut rng = sample::seeded_rng(42);
    for d in 1..=8 {
        for _ in 0..20 {
            let u = sample::random_unitary(d, &mut rng);
            let r = linalg::svd(&u, 1e-9).unwrap();
            for &s in &r.singulars {
                assert!((s - 1.0).abs() <= 1e-9, "singular value {s} of a {d}x{d} unitary");
            }
        }
    }
}

#[test]
fn svd_and_completion_are_deterministic() {
    let mut rng = sample::seeded_rng(123);
    let a = random_matrix(5, 3, &mut rng);
    let r1 = linalg::svd(&a, 1e-9).unwrap();
    let r2 = linalg::svd(&a, 1e-9).unwrap();
    assert_eq!(r1.left.entries(), r2.left.entries());
    assert_eq!(r1.right.entries(), r2.right.entries());
    assert_eq!(r1.singulars, r2.singulars);

    let u = sample::random_unitary(6, &mut rng);
    let mut cols = CMatrix::zeros(6, 2);
    for i in 0..6 {
        cols[(i, 0)] = u[(i, 0)];
        cols[(i, 1)] = u[(i, 1)];
    }
    let c1 = linalg::complete_to_unitary(&cols, 1e-9).unwrap();
    let c2 = linalg::complete_to_unitary(&cols, 1e-9).unwrap();
    assert_eq!(c1.entries(), c2.entries());
    assert!(c1.unitary_defect() < 1e-12);
    for i in 0..6 {
        assert_eq!(c1[(i, 0)], cols[(i, 0)]);
        assert_eq!(c1[(i, 1)], cols[(i, 1)]);
    }
}

fn random_matrix(m: usize, n: usize, rng: &mut sample::SampleRng) -> CMatrix {
    // Columns of random unitaries are fine sources of generic entries, but a
    // plain normalized-state reshape keeps scales varied.
    let psi = sample::random_state(m, n, rng);
    psi.coefficient_matrix().scaled_re(1.7)
}
