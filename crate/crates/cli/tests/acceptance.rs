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

//! Acceptance suite. One test per release criterion, each printing a
//! PASS line with the measured numbers (visible with `--nocapture`):
//!
//! 1. closed-form 2x2 inconsistency and its |a| = |b| boundary;
//! 2. best one-sided overlap on the canonical pair, against a grid oracle;
//! 3. two-sided witness succeeds exactly where both one-sided witnesses fail;
//! 4. composition-order check: filter-first reaches the target, filter-last
//!    does not (except in the maximally entangled case);
//! 5. three-way one-sided equivalence and the two-sided spectrum criterion
//!    on 500 seeded pairs per dimension combination;
//! 6. round-trip witness recovery on 600 seeded cases;
//! 7. filter contraction/preparation/probability invariants on 200 states;
//! 8. audit fixtures and golden JSON stability.

use std::path::PathBuf;

use num_complex::Complex64 as C64;

use qlue::equiv::{
    self, CounterexampleOutcome, CounterexampleParams, OneSidedOutcome, TwoSidedOutcome,
};
use qlue::sample;
use qlue::state::{Side, StateVector};

const TOL: f64 = 1e-8;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn canonical_pair() -> (StateVector, StateVector) {
    let a = 0.8_f64.sqrt();
    let b = 0.2_f64.sqrt();
    let zero = C64::new(0.0, 0.0);
    let psi1 = StateVector::new(
        2,
        2,
        vec![C64::new(a, 0.0), zero, zero, C64::new(b, 0.0)],
        1e-12,
    )
    .unwrap();
    let psi2 = StateVector::new(
        2,
        2,
        vec![C64::new(b, 0.0), zero, zero, C64::new(-a, 0.0)],
        1e-12,
    )
    .unwrap();
    (psi1, psi2)
}

#[test]
fn acceptance_01_counterexample_reproduction() {
    // |a| != |b|: the two modulus requirements are 0.5 and 2.0 and no
    // witness exists on either side.
    let params =
        CounterexampleParams::new(C64::new(0.8_f64.sqrt(), 0.0), C64::new(0.2_f64.sqrt(), 0.0), TOL)
            .unwrap();
    let (m00, m11) = match equiv::solve_one_sided_2x2(&params, TOL).unwrap() {
        CounterexampleOutcome::Inconsistent(r) => {
            (r.modulus_for_component00, r.modulus_for_component11)
        }
        CounterexampleOutcome::Solution { .. } => panic!("must be inconsistent"),
    };
    assert!((m00 - 0.5).abs() < 1e-9, "modulus for |00>: {m00}");
    assert!((m11 - 2.0).abs() < 1e-9, "modulus for |11>: {m11}");

    let (psi1, psi2) = canonical_pair();
    for side in [Side::A, Side::B] {
        assert!(matches!(
            equiv::one_sided_witness(&psi1, &psi2, side, TOL).unwrap(),
            OneSidedOutcome::NoWitness { .. }
        ));
    }

    // |a| = |b| boundary: U = diag(1, -1) with residual < 1e-9.
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let boundary = CounterexampleParams::new(C64::new(s, 0.0), C64::new(s, 0.0), TOL).unwrap();
    let (unitary, residual) = match equiv::solve_one_sided_2x2(&boundary, TOL).unwrap() {
        CounterexampleOutcome::Solution { unitary, residual } => (unitary, residual),
        CounterexampleOutcome::Inconsistent(_) => panic!("|a| = |b| is solvable"),
    };
    assert!(residual < 1e-9, "boundary residual {residual}");
    let u = unitary.matrix();
    assert!((u[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-9);
    assert!((u[(1, 1)] - C64::new(-1.0, 0.0)).norm() < 1e-9);
    assert!(u[(0, 1)].norm() < 1e-9 && u[(1, 0)].norm() < 1e-9);

    let outcome = equiv::one_sided_witness(&boundary.psi1(), &boundary.psi2(), Side::A, TOL).unwrap();
    let witness = outcome.witness().expect("boundary witness exists");
    assert!(witness.residual < 1e-9);

    println!(
        "PASS acceptance 1: inconsistent moduli ({m00:.9}, {m11:.9}); boundary residual {residual:.3e}"
    );
}

/// Unitary from the (phi, theta1, theta2, theta3) chart:
/// alpha = cos(phi) e^{i theta1}, beta = sin(phi) e^{i theta2},
/// lambda = e^{i theta3}.
fn chart_unitary(p: [f64; 4]) -> [C64; 4] {
    let alpha = C64::from_polar(p[0].cos(), p[1]);
    let beta = C64::from_polar(p[0].sin(), p[2]);
    let lambda = C64::from_polar(1.0, p[3]);
    [alpha, lambda * beta, -beta.conj(), lambda * alpha.conj()]
}

/// |<psi2|(U (x) I)psi1>| by direct amplitude arithmetic.
fn chart_overlap(p: [f64; 4], psi1: &StateVector, psi2: &StateVector) -> f64 {
    let u = chart_unitary(p);
    let a1 = psi1.amplitudes();
    let a2 = psi2.amplitudes();
    // (U (x) I) on a 2x2-dimensional state.
    let out = [
        u[0] * a1[0] + u[1] * a1[2],
        u[0] * a1[1] + u[1] * a1[3],
        u[2] * a1[0] + u[3] * a1[2],
        u[2] * a1[1] + u[3] * a1[3],
    ];
    a2.iter().zip(&out).map(|(x, y)| x.conj() * y).sum::<C64>().norm()
}

#[test]
fn acceptance_02_quantitative_gap_with_grid_oracle() {
    let (psi1, psi2) = canonical_pair();
    let result = equiv::max_overlap_one_sided(&psi1, &psi2, Side::A).unwrap();
    assert!((result.value - 0.8).abs() < 1e-9, "nuclear norm {}", result.value);

    // Independent oracle: coarse grid over the full unitary chart, then
    // coordinate refinement around the best point.
    let pi = std::f64::consts::PI;
    let mut best = ([0.0; 4], 0.0_f64);
    let phi_steps = 9;
    let theta_steps = 16;
    for i in 0..=phi_steps {
        let phi = (i as f64) * (pi / 2.0) / phi_steps as f64;
        for j in 0..theta_steps {
            let t1 = (j as f64) * 2.0 * pi / theta_steps as f64;
            for k in 0..theta_steps {
                let t2 = (k as f64) * 2.0 * pi / theta_steps as f64;
                for l in 0..theta_steps {
                    let t3 = (l as f64) * 2.0 * pi / theta_steps as f64;
                    let p = [phi, t1, t2, t3];
                    let v = chart_overlap(p, &psi1, &psi2);
                    if v > best.1 {
                        best = (p, v);
                    }
                }
            }
        }
    }
    let mut center = best.0;
    let mut value = best.1;
    let mut h = pi / theta_steps as f64;
    for _ in 0..24 {
        let mut improved = false;
        for dim in 0..4 {
            for delta in [-h, h] {
                let mut p = center;
                p[dim] += delta;
                let v = chart_overlap(p, &psi1, &psi2);
                if v > value {
                    center = p;
                    value = v;
                    improved = true;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }

    assert!(
        (value - result.value).abs() < 1e-3,
        "grid oracle {value} vs nuclear norm {}",
        result.value
    );
    assert!(value <= result.value + 1e-9, "grid must not beat the optimum");
    println!(
        "PASS acceptance 2: max one-sided overlap {:.12} (grid oracle {value:.12})",
        result.value
    );
}

#[test]
fn acceptance_03_two_sided_holds_where_one_sided_fails() {
    let (psi1, psi2) = canonical_pair();

    let two_sided = match equiv::two_sided_witness(&psi1, &psi2, TOL).unwrap() {
        TwoSidedOutcome::Witness(w) => w,
        TwoSidedOutcome::NoWitness { .. } => panic!("equal spectra must yield a witness"),
    };
    assert!(two_sided.residual < 1e-9, "two-sided residual {}", two_sided.residual);

    let mut gaps = Vec::new();
    for side in [Side::A, Side::B] {
        match equiv::one_sided_witness(&psi1, &psi2, side, TOL).unwrap() {
            OneSidedOutcome::NoWitness { reduced_state_gap } => gaps.push(reduced_state_gap),
            OneSidedOutcome::Witness(_) => panic!("one-sided witness must not exist (side {side})"),
        }
    }
    println!(
        "PASS acceptance 3: two-sided residual {:.3e}; one-sided gaps {:.6}/{:.6}",
        two_sided.residual, gaps[0], gaps[1]
    );
}

#[test]
fn acceptance_04_composition_order_check() {
    let (psi1, psi2) = canonical_pair();
    let report = equiv::relation_chain_check(&psi1, &psi2, TOL).unwrap();
    assert!(
        report.filter_first_residual < 1e-9,
        "filter-first residual {}",
        report.filter_first_residual
    );
    assert!(
        report.filter_last_residual > 0.1,
        "filter-last residual {}",
        report.filter_last_residual
    );

    // Maximally entangled fixture: the filter is the identity, so both
    // orders reach the target.
    let phi = StateVector::maximally_entangled(2);
    let mut rng = sample::seeded_rng(404);
    let u = sample::random_unitary(2, &mut rng);
    let rotated = phi.apply_local_unitaries(Some(&u), None).unwrap();
    let max_report = equiv::relation_chain_check(&phi, &rotated, TOL).unwrap();
    assert!(max_report.filter_first_residual < 1e-9);
    assert!(max_report.filter_last_residual < 1e-9);

    println!(
        "PASS acceptance 4: order-sensitive residuals {:.3e} / {:.6}; maximally entangled case {:.3e} / {:.3e}",
        report.filter_first_residual,
        report.filter_last_residual,
        max_report.filter_first_residual,
        max_report.filter_last_residual
    );
}

#[test]
fn acceptance_05_iff_theorem_suites() {
    let mut rng = sample::seeded_rng(505);
    let dims = [2usize, 3, 4, 5];
    let cases_per_combo = 500;

    let mut one_sided_positive = 0usize;
    let mut one_sided_negative = 0usize;
    let mut two_sided_positive = 0usize;
    let mut two_sided_negative = 0usize;
    let mut violations = 0usize;

    for &da in &dims {
        for &db in &dims {
            for case in 0..cases_per_combo {
                let psi1 = sample::random_state(da, db, &mut rng);
                let psi2 = match case % 4 {
                    0 => sample::random_state(da, db, &mut rng),
                    1 => {
                        let u = sample::random_unitary(da, &mut rng);
                        psi1.apply_local_unitaries(Some(&u), None).unwrap()
                    }
                    2 => {
                        let u = sample::random_unitary(db, &mut rng);
                        psi1.apply_local_unitaries(None, Some(&u)).unwrap()
                    }
                    _ => {
                        let v = sample::random_unitary(da, &mut rng);
                        let w = sample::random_unitary(db, &mut rng);
                        psi1.apply_local_unitaries(Some(&v), Some(&w)).unwrap()
                    }
                };
                let side = if (case / 4) % 2 == 0 { Side::A } else { Side::B };

                // Three-way equivalence, each leg computed independently.
                let witness_exists = matches!(
                    equiv::one_sided_witness(&psi1, &psi2, side, TOL).unwrap(),
                    OneSidedOutcome::Witness(_)
                );
                let untouched = side.other();
                let reduced_equal = psi1
                    .partial_trace(untouched)
                    .matrix()
                    .sub(psi2.partial_trace(untouched).matrix())
                    .frobenius_norm()
                    < TOL;
                let overlap_is_one =
                    equiv::max_overlap_one_sided(&psi1, &psi2, side).unwrap().value >= 1.0 - TOL;
                if witness_exists != reduced_equal || witness_exists != overlap_is_one {
                    violations += 1;
                }
                if witness_exists {
                    one_sided_positive += 1;
                } else {
                    one_sided_negative += 1;
                }

                // Two-sided witness iff equal spectra.
                let s1 = psi1.schmidt(TOL).unwrap();
                let s2 = psi2.schmidt(TOL).unwrap();
                let spectra_equal = s1
                    .coefficients
                    .iter()
                    .zip(&s2.coefficients)
                    .all(|(x, y)| (x - y).abs() < TOL);
                let two_sided_exists = matches!(
                    equiv::two_sided_witness(&psi1, &psi2, TOL).unwrap(),
                    TwoSidedOutcome::Witness(_)
                );
                if two_sided_exists != spectra_equal {
                    violations += 1;
                }
                if two_sided_exists {
                    two_sided_positive += 1;
                } else {
                    two_sided_negative += 1;
                }
            }
        }
    }

    let total = dims.len() * dims.len() * cases_per_combo;
    assert_eq!(violations, 0, "equivalence violations out of {total} pairs");
    assert!(one_sided_positive > 1000 && one_sided_negative > 1000, "both branches exercised");
    assert!(two_sided_positive > 1000 && two_sided_negative > 1000, "both branches exercised");
    println!(
        "PASS acceptance 5: {total} pairs, 0 violations (one-sided {one_sided_positive}+/{one_sided_negative}-, two-sided {two_sided_positive}+/{two_sided_negative}-)"
    );
}

#[test]
fn acceptance_06_round_trip_suites() {
    let mut rng = sample::seeded_rng(606);
    let dims = [2usize, 3, 4, 5];
    let mut worst_one_sided: f64 = 0.0;
    let mut worst_two_sided: f64 = 0.0;
    let mut cases = 0usize;

    for round in 0..150 {
        let da = dims[round % dims.len()];
        let db = dims[(round / dims.len()) % dims.len()];
        let psi1 = sample::random_state(da, db, &mut rng);

        // One-sided round trips on both sides.
        for side in [Side::A, Side::B] {
            let d = if side == Side::A { da } else { db };
            let u = sample::random_unitary(d, &mut rng);
            let psi2 = match side {
                Side::A => psi1.apply_local_unitaries(Some(&u), None).unwrap(),
                Side::B => psi1.apply_local_unitaries(None, Some(&u)).unwrap(),
            };
            let outcome = equiv::one_sided_witness(&psi1, &psi2, side, TOL).unwrap();
            let w = outcome.witness().expect("round trip yields a witness");
            assert!(w.residual < 1e-9, "one-sided residual {} at {da}x{db}", w.residual);
            assert!(w.unitary.unitary_defect() < 1e-9);
            worst_one_sided = worst_one_sided.max(w.residual);
            cases += 1;
        }

        // Two-sided round trips.
        for _ in 0..2 {
            let v = sample::random_unitary(da, &mut rng);
            let w_op = sample::random_unitary(db, &mut rng);
            let psij = psi1.apply_local_unitaries(Some(&v), Some(&w_op)).unwrap();
            let outcome = equiv::two_sided_witness(&psi1, &psij, TOL).unwrap();
            let w = outcome.witness().expect("round trip yields a witness");
            assert!(w.residual < 1e-9, "two-sided residual {} at {da}x{db}", w.residual);
            assert!(w.unitary_a.unitary_defect() < 1e-9);
            assert!(w.unitary_b.unitary_defect() < 1e-9);
            worst_two_sided = worst_two_sided.max(w.residual);
            cases += 1;
        }
    }

    assert!(cases >= 500, "at least 500 round-trip cases, got {cases}");
    println!(
        "PASS acceptance 6: {cases} round trips, worst residuals {worst_one_sided:.3e} (one-sided) / {worst_two_sided:.3e} (two-sided)"
    );
}

#[test]
fn acceptance_07_filter_correctness() {
    let mut rng = sample::seeded_rng(707);
    let dims = [2usize, 3, 4, 5];
    let mut worst_fidelity_gap: f64 = 0.0;
    let mut worst_eig_excess: f64 = 0.0;
    let mut cases = 0usize;

    for round in 0..200 {
        let d = dims[round % dims.len()];
        let psi = sample::random_state(d, d, &mut rng);
        let filter = equiv::filter_from_max_entangled(&psi, TOL).unwrap();

        // Contraction: eigenvalues of M†M at most 1 + 1e-10.
        let gram = filter.matrix.adjoint().mul(&filter.matrix);
        let (eigs, _) = qlue::linalg::eigh(&gram, 1e-9).unwrap();
        assert!(eigs[0] <= 1.0 + 1e-10, "top eigenvalue {}", eigs[0]);
        worst_eig_excess = worst_eig_excess.max(eigs[0] - 1.0);

        // Preparation: normalized (M (x) I) Phi equals psi up to phase.
        let phi = StateVector::maximally_entangled(d);
        let prepared = filter.matrix.mul(&phi.coefficient_matrix());
        let norm = prepared.frobenius_norm();
        let normalized = prepared.scaled_re(1.0 / norm);
        let fidelity = psi.coefficient_matrix().frobenius_inner(&normalized).norm();
        assert!((fidelity - 1.0).abs() < 1e-9, "fidelity {fidelity}");
        worst_fidelity_gap = worst_fidelity_gap.max((fidelity - 1.0).abs());

        // Probability: squared norm of the filtered state and the closed
        // form from the top Schmidt coefficient.
        assert!((norm * norm - filter.success_probability).abs() < 1e-9);
        let lambda_max = psi.schmidt(1e-12).unwrap().coefficients[0];
        let expected = 1.0 / (d as f64 * lambda_max * lambda_max);
        assert!((filter.success_probability - expected).abs() < 1e-9);
        cases += 1;
    }

    assert_eq!(cases, 200);
    println!(
        "PASS acceptance 7: {cases} filters, worst fidelity gap {worst_fidelity_gap:.3e}, worst eigenvalue excess {worst_eig_excess:.3e}"
    );
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let argv: Vec<String> =
        std::iter::once("qlue").chain(args.iter().copied()).map(String::from).collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = qlue_cli::run_cli(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn acceptance_08_audit_fixtures_and_golden_stability() {
    // Counterexample pair: BOPEE-partial.
    let (code, out) = run_cli(&["audit", "--input", &fixture("pair.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("BOPEE-partial"), "output: {out}");

    // Four Bell states: BOPEE-maximal with every one-sided witness present.
    let (code, out) = run_cli(&["audit", "--input", &fixture("bell.json"), "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["report"]["classification"], "BOPEE-maximal");
    let pairs = v["report"]["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 16);
    for p in pairs {
        assert_eq!(p["one_sided_a"], true, "pair {} -> {}", p["from"], p["to"]);
        assert_eq!(p["one_sided_b"], true);
        assert_eq!(p["two_sided"], true);
    }

    // Golden-file stability across runs.
    let golden_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (fixture_name, golden_name) in
        [("pair.json", "audit_pair.json"), ("bell.json", "audit_bell.json")]
    {
        let args = ["audit", "--input", &fixture(fixture_name), "--json"];
        let (code, out1) = run_cli(&args);
        assert_eq!(code, 0);
        let (_, out2) = run_cli(&args);
        assert_eq!(out1, out2, "audit must be deterministic");
        let golden = std::fs::read_to_string(golden_dir.join(golden_name)).unwrap();
        assert_eq!(out1, golden, "golden drift for {golden_name}");
    }

    println!("PASS acceptance 8: fixtures classified and golden reports stable");
}
