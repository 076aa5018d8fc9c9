use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use recliff_core::decompose::{
    l1_minimal_single_qubit, single_rotation_norm, verify_decomposition, xyz_triple_norm,
};
use recliff_core::oracle::pauli_exp_matrix;
use recliff_core::PauliOperator;

type M2 = [[Complex64; 2]; 2];

fn rot(axis: &str, theta: f64) -> M2 {
    let p: PauliOperator = axis.parse().unwrap();
    let m = pauli_exp_matrix(&p, theta).unwrap();
    [[m[0][0], m[0][1]], [m[1][0], m[1][1]]]
}

fn mul(a: &M2, b: &M2) -> M2 {
    let mut o = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            o[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    o
}

fn omega(m: &M2) -> f64 {
    let d = l1_minimal_single_qubit(m).unwrap();
    let target = vec![vec![m[0][0], m[0][1]], vec![m[1][0], m[1][1]]];
    assert!(verify_decomposition(&target, &d).unwrap().matches);
    d.one_norm()
}

// Frozen from an external convex solver over the 24 single-qubit Cliffords.
#[test]
fn single_rotation_optimum_matches_solver_values() {
    for (theta, expected) in [(PI / 16.0, 1.06159435), (PI / 8.0, 1.0823922), (0.3, 1.07774497)] {
        let got = omega(&rot("Z", theta));
        assert!((got - expected).abs() < 1e-6, "θ={theta}: {got}");
        assert!((single_rotation_norm(theta) - expected).abs() < 1e-6);
    }
}

#[test]
fn xyz_norm_matches_solver_values() {
    let frozen = [(24.0, 1.11173), (16.0, 1.14822), (12.0, 1.16787), (8.0, 1.14805)];
    for (den, expected) in frozen {
        assert!((xyz_triple_norm(PI / den) - expected).abs() < 1e-5, "π/{den}");
    }
    for (den, expected) in [(24.0, 1.11172730), (16.0, 1.14821601)] {
        let t = PI / den;
        let u = mul(&mul(&rot("X", t), &rot("Z", t)), &rot("Y", t));
        assert!((omega(&u) - expected).abs() < 1e-6);
    }
}

#[test]
fn cubed_single_norm_values() {
    for (den, expected) in [(24.0, 1.14284), (16.0, 1.19640), (12.0, 1.23583), (8.0, 1.26810)] {
        assert!((single_rotation_norm(PI / den).powi(3) - expected).abs() < 1e-5);
    }
}

#[test]
fn literal_xyz_order_has_smaller_optimum_than_closed_form() {
    let t = PI / 16.0;
    let u = mul(&mul(&rot("X", t), &rot("Y", t)), &rot("Z", t));
    let got = omega(&u);
    assert!((got - 1.13214208).abs() < 1e-6, "{got}");
    assert!(got < xyz_triple_norm(t));
}

#[test]
fn single_norm_is_unimodal_with_peak_at_pi_over_8() {
    let grid: Vec<f64> = (0..=200).map(|i| i as f64 * (PI / 4.0) / 200.0).collect();
    let vals: Vec<f64> = grid.iter().map(|&t| single_rotation_norm(t)).collect();
    for i in 0..100 {
        assert!(vals[i] < vals[i + 1]);
    }
    for i in 100..200 {
        assert!(vals[i] > vals[i + 1]);
    }
    assert!((vals[0] - 1.0).abs() < 1e-15 && (vals[200] - 1.0).abs() < 1e-12);
}

#[test]
fn commuting_free_pair_is_multiplicative() {
    for t in [PI / 16.0, PI / 10.0, PI / 8.0] {
        let u = mul(&rot("X", t), &rot("Z", t));
        let prod = single_rotation_norm(t).powi(2);
        assert!((omega(&u) - prod).abs() < 1e-6, "θ={t}");
    }
}

fn axis(k: usize) -> &'static str {
    ["X", "Y", "Z"][k]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn extent_is_submultiplicative(a in 0usize..3, b in 0usize..3, t1 in 0.01f64..0.78, t2 in 0.01f64..0.78) {
        let (u1, u2) = (rot(axis(a), t1), rot(axis(b), t2));
        let lhs = omega(&mul(&u1, &u2));
        prop_assert!(lhs <= omega(&u1) * omega(&u2) + 1e-6);
    }
}
