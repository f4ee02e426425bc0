use cvbell::dp::{b3_t_closed, J_MAX, J_MIN};
use cvbell::optim::*;
use cvbell::ps::{coeffs_t_series, e_ps3_angles, PsCoefficients};
use std::f64::consts::PI;

#[test]
fn t_closed_form_on_log_displacement() {
    let r = maximize_scalar(|lj: f64| b3_t_closed(1e4, lj.exp()).value, J_MIN.ln(), J_MAX.ln(), 1e-8).unwrap();
    assert!((r.max_value - 2.89).abs() < 0.01);
    assert!(r.bracket[0] <= 1e-8);
}

#[test]
fn coarse_scan_close_to_refined_for_unimodal() {
    let f = |lj: f64| b3_t_closed(50.0, lj.exp()).value;
    let r = maximize_scalar(f, J_MIN.ln(), J_MAX.ln(), 1e-8).unwrap();
    let step = (J_MAX.ln() - J_MIN.ln()) / (COARSE_POINTS - 1) as f64;
    let scan = (0..COARSE_POINTS).map(|i| f(J_MIN.ln() + step * i as f64)).fold(f64::MIN, f64::max);
    assert!(r.max_value >= scan);
    assert!(r.max_value - scan < 1e-3);
}

#[test]
fn angles_match_dense_grid() {
    let c = coeffs_t_series(1.0f64, 0.5, 1e-10).unwrap();
    let phis = [0.0, PI, PI];
    let f = |t: &[f64]| e_ps3_angles(&c, t, &phis) + 0.3 * (t[0] - t[2]).sin();
    let r = maximize_angles(f, 3, 32, 1e-12).unwrap();
    let k = 128;
    let h = 2.0 * PI / k as f64;
    let mut dense = f64::MIN;
    for a in 0..k {
        for b in 0..k {
            for d in 0..k {
                let t = [-PI + h * a as f64, -PI + h * b as f64, -PI + h * d as f64];
                dense = dense.max(f(&t));
            }
        }
    }
    assert!(r.max_value >= dense - 1e-12);
    assert!(r.max_value - dense < 1e-3);
}

#[test]
fn product_correlator_is_classical() {
    let c = PsCoefficients::new(0.0f64, 0.0, 0.0);
    let phis = [0.0; 3];
    let b = |x: &[f64]| {
        let e = |a: f64, b: f64, d: f64| e_ps3_angles(&c, &[a, b, d], &phis);
        (e(x[0], x[1], x[5]) + e(x[0], x[4], x[2]) + e(x[3], x[1], x[2]) - e(x[3], x[4], x[5])).abs()
    };
    let r = maximize_angles(b, 6, 32, 1e-12).unwrap();
    assert!((r.max_value - 2.0).abs() < 1e-9);
}

#[test]
fn identical_inputs_identical_results() {
    let f = |t: &[f64]| (t[0] - 0.2).cos() * (t[1] + 0.4).cos() + 0.1 * t[2].sin();
    assert_eq!(maximize_angles(f, 3, 20, 1e-10).unwrap(), maximize_angles(f, 3, 20, 1e-10).unwrap());
}

#[test]
fn asymptotic_relations_hold() {
    let rel = asymptote_relations(1e-8).unwrap();
    assert_eq!(rel.len(), 4);
    for r in &rel {
        assert!(r.holds(), "{}: measured {} predicted {} ratio {}", r.name, r.measured, r.predicted, r.ratio());
    }
}

#[test]
fn rejects_too_many_angles() {
    assert!(maximize_angles(|_: &[f64]| 0.0, 7, 8, 1e-6).is_err());
}
