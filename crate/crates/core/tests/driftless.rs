mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use resilience::driftless::*;
use resilience::model::InputSignal;
use resilience::numerics::{pinv, vec_norm, Matrix, VecNorm, Vector};
use resilience::simulate::brute_force_opt_tf;

/// `[[a, b], [c, d]]⁻¹` written out.
fn inverse_2x2(m: &Matrix) -> Matrix {
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let det = a * d - b * c;
    Matrix::from_row_slice(2, 2, &[d / det, -b / det, -c / det, a / det])
}

#[test]
fn robot_feasible_at_ten_seconds() {
    let (b, _, _) = robot_split();
    let x = vec(&[1.0, 1.0]);
    let needed = vec_norm(&(pinv(&b) * &x), VecNorm::Inf);
    assert!(feasibility_driftless(&b, &x, 10.0));
    assert!(feasibility_driftless(&b, &x, needed));
    assert!(!feasibility_driftless(&b, &x, needed * 0.999));
}

#[test]
fn robot_malfunctioning_energy_from_explicit_inverse() {
    let (_, b_c, b_uc) = robot_split();
    let x = vec(&[1.0, 1.0]);
    let inv = inverse_2x2(&b_c);
    let oracle = (&inv * (&x + &b_uc * 10.0)).norm_squared() / 10.0;
    let e = malfunctioning_energy_driftless(&b_c, &b_uc, &x, 10.0, &vec(&[1.0])).unwrap();
    assert!((e - oracle).abs() < 1e-12 * oracle);
    assert!((e - 18.1).abs() < 1e-12);
}

#[test]
fn robot_worst_case_attained_by_constant_worst_sign() {
    let (_, b_c, b_uc) = robot_split();
    let x = vec(&[1.0, 1.0]);
    let t_f = 10.0;
    let w = worst_case_total_exact_1act(&b_c, &b_uc, &x, t_f).unwrap();
    assert!(!w.degenerate);
    let attained =
        malfunctioning_energy_driftless(&b_c, &b_uc, &x, t_f, &vec(&[w.forcing()])).unwrap() + t_f;
    assert!((w.energy - attained).abs() < 1e-9);
    let bound = worst_case_total_bound_driftless(&b_c, &b_uc, &x, t_f).unwrap();
    assert!((bound - w.energy).abs() < 1e-9);
}

#[test]
fn worst_case_dominates_sampled_uncontrolled_inputs() {
    let (_, b_c, b_uc) = robot_split();
    let x = vec(&[1.0, 1.0]);
    let t_f = 10.0;
    let bound = worst_case_total_bound_driftless(&b_c, &b_uc, &x, t_f).unwrap();
    let mut rng = rng(3);
    for k in 0..1000 {
        let u = if k % 2 == 0 {
            InputSignal::constant(&[rng.random_range(-1.0..=1.0)])
        } else {
            InputSignal::sinusoid(
                1,
                rng.random_range(-1.0..=1.0),
                rng.random_range(0.0..30.0),
                rng.random_range(0.0..6.3),
            )
        };
        let total = malfunctioning_energy_driftless(&b_c, &b_uc, &x, t_f, &u.mean(t_f)).unwrap()
            + u.energy(t_f);
        assert!(total <= bound + 1e-9, "{u:?}: {total} > {bound}");
    }
}

#[test]
fn degenerate_cross_term_is_flagged() {
    let (_, b_c, b_uc) = robot_split();
    let bcp = pinv(&b_c);
    let cross = b_uc.transpose() * bcp.transpose() * &bcp;
    // x̃ orthogonal to the cross-term row
    let x = vec(&[cross[(0, 1)], -cross[(0, 0)]]);
    let w = worst_case_total_exact_1act(&b_c, &b_uc, &x, 1.0).unwrap();
    assert!(w.degenerate || (cross * &x)[0].abs() < 1e-15);
    assert_eq!(w.forcing(), if w.degenerate { 1.0 } else { w.sign });
}

#[test]
fn optimal_time_matches_golden_section_on_robot() {
    let (_, b_c, b_uc) = robot_split();
    let x = vec(&[1.0, 1.0]);
    let u = vec(&[1.0]);
    let t = optimal_final_time(&b_c, &b_uc, &x, &u).unwrap();
    let g = brute_force_opt_tf(&b_c, &b_uc, &x, &u).unwrap();
    assert!((t - 1.0).abs() < 1e-12);
    assert!((t - g).abs() < 1e-6 * t);
}

#[test]
fn optimal_time_is_stationary() {
    let mut rng = rng(8);
    for _ in 0..50 {
        let (_, b_c, b_uc) = random_split(&mut rng, 2, 3, 1);
        let x = uniform_vec(&mut rng, 2, 2.0);
        let u = uniform_vec(&mut rng, 1, 1.0);
        let t = optimal_final_time(&b_c, &b_uc, &x, &u).unwrap();
        let e = |t: f64| malfunctioning_energy_driftless(&b_c, &b_uc, &x, t, &u).unwrap();
        let h = 1e-5 * t;
        let slope = (e(t + h) - e(t - h)) / (2.0 * h);
        let curvature = (e(t + h) - 2.0 * e(t) + e(t - h)) / (h * h);
        assert!(
            slope.abs() <= 1e-6 * e(t).abs().max(1.0) / t,
            "slope {slope}"
        );
        assert!(curvature > 0.0);
    }
}

#[test]
fn zero_displacement_has_no_optimal_time() {
    let (_, b_c, b_uc) = robot_split();
    let r = optimal_final_time(&b_c, &b_uc, &vec(&[0.0, 0.0]), &vec(&[1.0]));
    assert!(matches!(r, Err(resilience::Error::ZeroDisplacement)));
}

#[test]
fn scalar_bound_is_achieved() {
    let b = Matrix::from_row_slice(1, 2, &[1.0, 1.0]);
    let one = Matrix::from_element(1, 1, 1.0);
    let bound = resilience_bound_driftless(&b, &one, &one, 1.0, 1.0).unwrap();
    let mut sup = f64::NEG_INFINITY;
    for xs in [1.0, -1.0] {
        for us in [1.0, -1.0] {
            let x = vec(&[xs]);
            let total =
                malfunctioning_energy_driftless(&one, &one, &x, 1.0, &vec(&[us])).unwrap() + 1.0;
            sup = sup.max(total - nominal_energy_driftless(&b, &x, 1.0).energy);
        }
    }
    assert!((bound - 4.5).abs() < 1e-12);
    assert!((sup - bound).abs() < 1e-9);
}

#[test]
fn energies_bundle_is_consistent() {
    let (b, b_c, b_uc) = robot_split();
    let x = vec(&[1.0, 1.0]);
    let e = energies(&b, &b_c, &b_uc, &x, 10.0, &vec(&[1.0])).unwrap();
    assert!(e.feasible && !e.degenerate);
    assert_eq!(
        e.e_worst_total_exact_1act.is_some(),
        e.worst_uuc_sign.is_some()
    );
    assert!(e.e_worst_total_exact_1act.unwrap() >= e.e_malf + 10.0 - 1e-9);
}

proptest! {
    #[test]
    fn dominance_single_actuator(
        seed in any::<u64>(),
        t_f in 0.1f64..20.0,
        radius in 0.01f64..100.0,
        frac in 0.0f64..=1.0,
        u in -1.0f64..=1.0,
    ) {
        let mut rng = rng(seed);
        let n = rng.random_range(1..=3);
        let m = rng.random_range(n..=n + 2);
        let (b, b_c, b_uc) = random_split(&mut rng, n, m, 1);
        let d = uniform_vec(&mut rng, n, 1.0);
        prop_assume!(d.norm() > 1e-6);
        let x = &d / d.norm() * radius * frac;
        let bound = resilience_bound_driftless(&b, &b_c, &b_uc, t_f, radius).unwrap();
        let gap = malfunctioning_energy_driftless(&b_c, &b_uc, &x, t_f, &vec(&[u])).unwrap()
            + t_f * u * u
            - nominal_energy_driftless(&b, &x, t_f).energy;
        prop_assert!(gap <= bound + 1e-9 * bound.max(1.0));
    }

    #[test]
    fn exact_and_bound_coincide_for_one_actuator(seed in any::<u64>(), t_f in 0.1f64..20.0) {
        let mut rng = rng(seed);
        let n = rng.random_range(1..=4);
        let (_, b_c, b_uc) = random_split(&mut rng, n, n + 1, 1);
        let x = uniform_vec(&mut rng, n, 5.0);
        let exact = worst_case_total_exact_1act(&b_c, &b_uc, &x, t_f).unwrap().energy;
        let bound = worst_case_total_bound_driftless(&b_c, &b_uc, &x, t_f).unwrap();
        prop_assert!((exact - bound).abs() <= 1e-9 * exact.max(1.0));
    }

    #[test]
    fn nominal_never_exceeds_malfunctioning_at_zero_input(seed in any::<u64>(), t_f in 0.1f64..20.0) {
        let mut rng = rng(seed);
        let (b, b_c, b_uc) = random_split(&mut rng, 2, 3, 2);
        let x = uniform_vec(&mut rng, 2, 5.0);
        let e_n = nominal_energy_driftless(&b, &x, t_f).energy;
        let e_m = malfunctioning_energy_driftless(&b_c, &b_uc, &x, t_f, &Vector::zeros(2)).unwrap();
        prop_assert!(e_n <= e_m * (1.0 + 1e-12) + 1e-15);
    }
}
