use cvbell::bell::CLASSICAL_BOUND;
use cvbell::conditional::ConditionalParams;
use cvbell::fock::{build_t, build_twb, onoff_condition, quadrature_orthant_expect};
use cvbell::gaussian::{make_twb, twb_x, GaussianState};
use cvbell::homodyne::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use std::f64::consts::PI;

#[test]
fn rho1_matches_fock_orthants() {
    let p = ConditionalParams::new(0.3f64, 0.3, 0.0, 0.0, 0.8).unwrap();
    let st = build_t(&p.photon_numbers(), 30).unwrap();
    let rho = onoff_condition(&st, 2, p.eta).unwrap().state.unwrap();
    for (t, f) in [(0.0, 0.0), (0.4, -0.3), (1.2, 0.5)] {
        let a = e_h_rho1(&p, &HomodyneSetting::new(t, f)).unwrap();
        let b = quadrature_orthant_expect(&rho, t, f).unwrap();
        assert!((a - b).abs() < 1e-3, "({t},{f}): {a} vs {b}");
    }
}

#[test]
fn gaussian_matches_fock_orthants() {
    let n = 0.5f64;
    let st = build_twb(twb_x(n), 40).unwrap();
    let g = make_twb(n).unwrap();
    for (t, f) in [(0.0, 0.0), (0.7, 0.2), (-0.5, 1.1)] {
        let a = e_h_gaussian(&g, t, f).unwrap();
        let b = quadrature_orthant_expect(&st, t, f).unwrap();
        assert!((a - b).abs() < 1e-4, "({t},{f}): {a} vs {b}");
    }
}

#[test]
fn twb_orthant_against_sampling() {
    let s = make_twb(2.0f64).unwrap();
    let c = s.cov();
    let (v, k) = (c[(0, 0)], c[(0, 1)]);
    let l11 = v.sqrt();
    let l21 = k / l11;
    let l22 = (v - l21 * l21).sqrt();
    let mut rng = StdRng::seed_from_u64(17);
    let m = 200_000;
    let mut sum = 0.0;
    for _ in 0..m {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let x1 = l11 * z1;
        let x2 = l21 * z1 + l22 * z2;
        sum += (x1 * x2).signum();
    }
    let mc = sum / m as f64;
    let e = e_h_gaussian(&s, 0.0, 0.0).unwrap();
    assert!((mc - e).abs() < 0.01, "{mc} vs {e}");
}

#[test]
fn vacuum_is_uncorrelated() {
    let v = GaussianState::<f64>::vacuum(2);
    for t in [0.0, 0.5, 2.0] {
        assert_eq!(e_h_gaussian(&v, t, -t).unwrap(), 0.0);
    }
    let st = HomodyneSettings { thetas: [0.1, 0.9], phis: [-0.4, 0.3] };
    assert!(b2_h(&HomodyneSource::Gaussian(v), &st).unwrap().value <= CLASSICAL_BOUND);
}

#[test]
fn rho1_below_classical_curve() {
    for n2 in [0.5f64, 1.0, 5.0] {
        let p = ConditionalParams::new(n2, 0.5, 0.0, 0.0, 1.0).unwrap();
        for k in 0..200 {
            let psi = -PI + 2.0 * PI * k as f64 / 199.0;
            let e = e_h_rho1(&p, &HomodyneSetting::new(psi, 0.0)).unwrap();
            assert!(e.abs() <= 1.0);
            assert!(e.abs() <= classical_reference(psi).abs() + 1e-12, "N2={n2} psi={psi}: {e}");
        }
        let q = e_h_rho1(&p, &HomodyneSetting::new(PI / 2.0, 0.0)).unwrap();
        assert!(q.abs() < 1e-15);
    }
}

#[test]
fn random_chsh_sweeps_stay_classical() {
    let mut rng = StdRng::seed_from_u64(23);
    let sources = [
        HomodyneSource::rho1(&ConditionalParams::new(1.0, 0.5, 0.0, 0.0, 1.0).unwrap()).unwrap(),
        HomodyneSource::rho1(&ConditionalParams::new(0.3, 0.3, 0.4, 0.0, 0.8).unwrap()).unwrap(),
        HomodyneSource::Gaussian(make_twb(3.0).unwrap()),
    ];
    let mut worst = f64::MIN;
    for src in &sources {
        for _ in 0..10_000 {
            let st = HomodyneSettings {
                thetas: [rng.random_range(-PI..PI), rng.random_range(-PI..PI)],
                phis: [rng.random_range(-PI..PI), rng.random_range(-PI..PI)],
            };
            worst = worst.max(b2_h(src, &st).unwrap().value);
        }
    }
    assert!(worst <= CLASSICAL_BOUND + 1e-9, "{worst}");
}

#[test]
fn zero_efficiency_is_undefined() {
    let p = ConditionalParams::new(1.0, 0.5, 0.0, 0.0, 0.0).unwrap();
    assert!(e_h_rho1(&p, &HomodyneSetting::new(0.0, 0.0)).is_err());
}
