//! One PASS/FAIL line per acceptance criterion.

use cvbell::bell::{CHSH_QUANTUM_BOUND, CLASSICAL_BOUND, KLYSHKO_QUANTUM_BOUND};
use cvbell::conditional::{p_click, ConditionalParams, TwoGaussianWigner};
use cvbell::dp::*;
use cvbell::fock::{
    build_t, build_twb, displaced_parity_expect, onoff_condition, pseudospin_expect, quadrature_orthant_expect,
    SpinAxis,
};
use cvbell::gaussian::{make_t, make_twb, make_vlb, twb_x, TripartitePhotonNumbers};
use cvbell::homodyne::*;
use cvbell::optim::maximize_angles;
use cvbell::ps::*;
use cvbell::special::gauss_legendre_on;
use cvbell::Complex;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;
use std::time::{Duration, Instant};

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn all(parts: Vec<Outcome>) -> Outcome {
    Outcome {
        ok: parts.iter().all(|p| p.ok),
        detail: parts
            .iter()
            .map(|p| format!("{}{}", if p.ok { "" } else { "!" }, p.detail))
            .collect::<Vec<_>>()
            .join("; "),
    }
}

fn within(x: f64, want: f64, tol: f64) -> bool {
    (x - want).abs() <= tol
}

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn criterion_1() -> Outcome {
    let (v, _) = optimize_closed(|j: f64| b3_vlb_closed(5.0, j).value, 1e-8).unwrap();
    let zero = b3_vlb_closed(5.0f64, 0.0).value;
    let mut rng = StdRng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let r = rng.random_range(0.0..4.0);
        let j = 10f64.powf(rng.random_range(-5.0..0.0));
        let a = b3_dp_general(&make_vlb(r).unwrap(), &DpFamily::VlbSymmetric.settings(j)).unwrap().value;
        worst = worst.max((a - b3_vlb_closed(r, j).value).abs());
    }
    all(vec![
        check(v >= 2.99, format!("max at r=5 {v:.6}")),
        check(zero == 2.0, format!("J=0 gives {zero}")),
        check(worst < 1e-10, format!("closed vs assembly {worst:.1e}")),
    ])
}

fn criterion_2() -> Outcome {
    let (v, _) = optimize_closed(|j: f64| b3_t_closed(1e4, j).value, 1e-8).unwrap();
    let o = optimize_family(DpFamily::TOptimized, 1e4f64, 1e-8).unwrap();
    let jn = o.j_opt * 1e4;
    all(vec![
        check(within(v, 2.89, 0.01), format!("symmetric {v:.5}")),
        check(within(o.value.value, 2.99, 0.01), format!("optimized {:.5}", o.value.value)),
        check(within(jn / 3.21, 1.0, 0.15), format!("J*N {jn:.4}")),
    ])
}

fn best_over<F: Fn(f64) -> f64>(grid: impl Iterator<Item = f64>, f: F) -> (f64, f64) {
    grid.map(|x| (f(x), x)).fold((f64::MIN, 0.0), |a, b| if b.0 > a.0 { b } else { a })
}

fn criterion_3() -> Outcome {
    let tol = 1e-8;
    let sym = b3_ps(100.0f64, 100.0, Representation::S, tol).unwrap().value;
    let deg = b3_ps(1000.0f64, 1e-5, Representation::S, tol).unwrap().value;
    let (pt, nt) = best_over((5..=15).map(|k| k as f64 * 0.1), |n| {
        b3_ps_max(&coeffs_t_pi(n).unwrap(), Representation::Pi, 1e-10).unwrap().value
    });
    let (pv, rv) = best_over((0..=8).map(|k| 0.34 + 0.02 * k as f64), |r| {
        b3_ps_max(&coeffs_vlb_pi(r).unwrap(), Representation::Pi, 1e-10).unwrap().value
    });
    all(vec![
        check(within(sym, 2.63, 0.02), format!("symmetric N=400 {sym:.5}")),
        check(within(deg, 2f64.sqrt() * 2.0, 0.01), format!("degenerate {deg:.5}")),
        check(within(pt, 2.22, 0.02) && within(nt, 1.0, 0.2), format!("Pi T {pt:.5} at N={nt:.2}")),
        check(within(pv, 2.09, 0.02) && within(rv, 0.42, 0.04), format!("Pi VLB {pv:.5} at r={rv:.2}")),
    ])
}

fn criterion_4() -> Outcome {
    let r = 5.0f64;
    let n = 2.0 * r.sinh().powi(2);
    let bw = optimize_family(DpFamily::TwbBanaszek, n, 1e-8).unwrap();
    let im = optimize_family(DpFamily::TwbImproved, n, 1e-8).unwrap();
    let rel = (2.0 * r).exp() * im.j_opt / (3f64.ln() / 32.0);
    let co = optimize_family(DpFamily::Conditional, 1e3f64, 1e-8).unwrap();
    let jn = co.j_opt * 1e3;
    all(vec![
        check(within(bw.value.value, 2.19, 0.01), format!("BW {:.5}", bw.value.value)),
        check(within(im.value.value, 2.32, 0.01), format!("improved {:.5}", im.value.value)),
        check(within(rel, 1.0, 0.10), format!("exp(2r)J / (ln3/32) {rel:.4}")),
        check(within(co.value.value, 2.41, 0.01), format!("conditional {:.5}", co.value.value)),
        check(within(jn / 0.042, 1.0, 0.15), format!("J*N2 {jn:.4}")),
    ])
}

fn criterion_5() -> Outcome {
    let mut mono = true;
    let mut prev = 0.0;
    for k in 0..=400 {
        let f = f_twb(10f64.powf(-3.0 + k as f64 * 0.02)).unwrap();
        mono &= f >= prev && f <= 1.0;
        prev = f;
    }
    let limit = f_twb(1e8f64).unwrap();
    let f = 0.7f64;
    let (v, _) = b2_ps_from_f(f).unwrap();
    let scan = maximize_angles(|a: &[f64]| b2_ps_at(f, [a[0], a[1], a[2], a[3]]), 4, 32, 1e-12).unwrap();
    let n3 = 0.1;
    let mut ordered = true;
    let mut n_checked = 0;
    for k in 0..=98 {
        let n = 2.0 * n3 + 0.1 * k as f64;
        let p = ConditionalParams::new(n / 2.0 - n3, n3, 0.0, 0.0, 0.8).unwrap();
        ordered &= f_conditional(&p, 1e-10).unwrap() >= f_traced(&p, 1e-10).unwrap();
        n_checked += 1;
    }
    all(vec![
        check(mono && limit > 1.0 - 1e-12, format!("f_twb monotone, f_twb(1e8)={limit:.12}")),
        check((scan.max_value - v.value).abs() < 1e-6, format!("B2 closed vs search {:.1e}", (scan.max_value - v.value).abs())),
        check(ordered, format!("f1 >= f_tr on {n_checked} points of N in [0.2, 10]")),
    ])
}

fn criterion_6() -> Outcome {
    let mut below = true;
    for n2 in [0.5f64, 1.0, 5.0] {
        let p = ConditionalParams::new(n2, 0.5, 0.0, 0.0, 1.0).unwrap();
        for k in 0..200 {
            let psi = -PI + 2.0 * PI * k as f64 / 199.0;
            let e = e_h_rho1(&p, &HomodyneSetting::new(psi, 0.0)).unwrap();
            below &= e.abs() <= classical_reference(psi).abs() + 1e-12;
        }
    }
    let mut rng = StdRng::seed_from_u64(6);
    let sources = [
        HomodyneSource::rho1(&ConditionalParams::new(1.0f64, 0.5, 0.0, 0.0, 1.0).unwrap()).unwrap(),
        HomodyneSource::Gaussian(make_twb(3.0f64).unwrap()),
    ];
    let mut above = 0;
    let mut worst = f64::MIN;
    for src in &sources {
        for _ in 0..10_000 {
            let st = HomodyneSettings {
                thetas: [rng.random_range(-PI..PI), rng.random_range(-PI..PI)],
                phis: [rng.random_range(-PI..PI), rng.random_range(-PI..PI)],
            };
            let v = b2_h(src, &st).unwrap().value;
            worst = worst.max(v);
            above += (v > CLASSICAL_BOUND) as usize;
        }
    }
    all(vec![
        check(below, "|E_H| below the classical curve on 3x200 points"),
        check(above == 0, format!("{above} of 20000 CHSH draws above 2 (max {worst:.6})")),
    ])
}

fn axis(theta: f64, phi: f64) -> SpinAxis<f64> {
    SpinAxis { theta, phi }
}

fn criterion_7() -> Outcome {
    let mut runner = TestRunner::new(Config { cases: 6, failure_persistence: None, ..Config::default() });
    let small = 0.0f64..0.4;
    let dp = runner.run(&(small.clone(), small.clone(), -PI..PI, -0.5f64..0.5, -0.5f64..0.5), |(n2, n3, ph, ar, ai)| {
        let p = TripartitePhotonNumbers::new(n2, n3, ph, -ph).unwrap();
        let fock = build_t(&p, 30).unwrap();
        let a = [c(ar, ai), c(-ai, ar), c(0.5 * ar, 0.2)];
        let g = e_dp_gaussian(&make_t(&p).unwrap(), &a).unwrap();
        let o = displaced_parity_expect(&fock, &a).unwrap();
        prop_assert!((g - o).abs() < 1e-4, "{} vs {}", g, o);
        Ok(())
    });
    let ps = runner.run(&(0.01f64..0.4, 0.01f64..0.4), |(n2, n3)| {
        let fock = build_t(&TripartitePhotonNumbers::new(n2, n3, 0.0, 0.0).unwrap(), 30).unwrap();
        let co = coeffs_t_series(n2, n3, 1e-10).unwrap();
        let (z, x) = (axis(0.0, 0.0), axis(FRAC_PI_2, 0.0));
        let o = [[z, x, x], [x, z, x], [x, x, z]].map(|a| pseudospin_expect(&fock, &a).unwrap());
        for (a, b) in co.as_array().iter().zip(o) {
            prop_assert!((a.abs() - b.abs()).abs() < 1e-4);
        }
        Ok(())
    });
    let orth = runner.run(&(0.05f64..0.4, 0.05f64..0.4, 0.3f64..1.0, -PI..PI, -PI..PI), |(n2, n3, eta, t, f)| {
        let p = ConditionalParams::new(n2, n3, 0.0, 0.0, eta).unwrap();
        let fock = build_t(&p.photon_numbers(), 30).unwrap();
        let cond = onoff_condition(&fock, 2, eta).unwrap();
        let a = e_h_rho1(&p, &HomodyneSetting::new(t, f)).unwrap();
        let b = quadrature_orthant_expect(cond.state.as_ref().unwrap(), t, f).unwrap();
        prop_assert!((a - b).abs() < 1e-4, "{} vs {}", a, b);
        prop_assert!((cond.probability - p_click(&p).unwrap()).abs() < 1e-9);
        let twb = build_twb(twb_x(n2), 40).unwrap();
        let g = e_h_gaussian(&make_twb(n2).unwrap(), t, f).unwrap();
        prop_assert!((g - quadrature_orthant_expect(&twb, t, f).unwrap()).abs() < 1e-4);
        Ok(())
    });
    let (x, w) = gauss_legendre_on::<f64>(44, -7.0, 7.0);
    let mut norm_worst = 0.0f64;
    let mut negative = true;
    for (n2, n3, eta) in [(1.0, 0.5, 1.0), (0.4, 0.2, 0.6), (0.2, 0.05, 0.3)] {
        let tg = TwoGaussianWigner::new(&ConditionalParams::new(n2, n3, 0.7, -0.2, eta).unwrap()).unwrap();
        let mut total = 0.0;
        for a in 0..x.len() {
            for b in 0..x.len() {
                for d in 0..x.len() {
                    for e in 0..x.len() {
                        total += w[a] * w[b] * w[d] * w[e] * tg.eval(&[x[a], x[b], x[d], x[e]]).unwrap();
                    }
                }
            }
        }
        norm_worst = norm_worst.max((total - 1.0).abs());
        negative &= tg.eval(&[0.0; 4]).unwrap() < 0.0;
    }
    all(vec![
        check(dp.is_ok(), format!("displaced parity {}", fmt(&dp))),
        check(ps.is_ok(), format!("pseudospin {}", fmt(&ps))),
        check(orth.is_ok(), format!("orthants and click probability {}", fmt(&orth))),
        check(norm_worst < 1e-3 && negative, format!("W1 mass error {norm_worst:.1e}, negative at origin {negative}")),
    ])
}

fn fmt<E: std::fmt::Display>(r: &Result<(), E>) -> String {
    match r {
        Ok(()) => "ok".to_string(),
        Err(e) => format!("{e}"),
    }
}

fn random_alphas(rng: &mut StdRng, n: usize, scale: f64) -> Vec<Complex<f64>> {
    (0..n).map(|_| c(rng.random_range(-scale..scale), rng.random_range(-scale..scale))).collect()
}

fn criterion_8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let mut b2 = f64::MIN;
    let mut b3 = f64::MIN;
    let three = [
        make_vlb(2.0f64).unwrap(),
        make_t(&TripartitePhotonNumbers::new(3.0f64, 1.0, 0.5, 2.5).unwrap()).unwrap(),
    ];
    let two = [
        DpTarget::Gaussian(make_twb(5.0f64).unwrap()),
        DpTarget::for_family(DpFamily::Conditional, 3.0f64).unwrap(),
    ];
    let coeffs = [
        coeffs_t_series(2.0f64, 1.0, 1e-10).unwrap(),
        coeffs_t_pi(1.0f64).unwrap(),
        coeffs_vlb_pi(0.42f64).unwrap(),
    ];
    for _ in 0..5000 {
        let scale = rng.random_range(0.01..1.0);
        for s in &three {
            let st = DpSettings::new(random_alphas(&mut rng, 3, scale), random_alphas(&mut rng, 3, scale)).unwrap();
            b3 = b3.max(b3_dp_general(s, &st).unwrap().value);
        }
        for t in &two {
            let st = DpSettings::new(random_alphas(&mut rng, 2, scale), random_alphas(&mut rng, 2, scale)).unwrap();
            b2 = b2.max(b2_dp(t, &st).unwrap().value);
        }
        let a: Vec<f64> = (0..12).map(|_| rng.random_range(-PI..PI)).collect();
        let st = PsSettings {
            thetas: a[0..3].to_vec(),
            phis: a[3..6].to_vec(),
            thetas_primed: a[6..9].to_vec(),
            phis_primed: a[9..12].to_vec(),
            representation: Representation::S,
        };
        for co in &coeffs {
            b3 = b3.max(b3_ps_at(co, &st).unwrap().abs());
        }
        b2 = b2.max(b2_ps_at(rng.random_range(0.0..1.0), [a[0], a[1], a[2], a[3]]).abs());
        let hs = HomodyneSettings { thetas: [a[0], a[1]], phis: [a[2], a[3]] };
        b2 = b2.max(b2_h(&HomodyneSource::Gaussian(make_twb(1.0f64).unwrap()), &hs).unwrap().value);
    }
    all(vec![
        check(b2 <= CHSH_QUANTUM_BOUND + 1e-9, format!("max B2 {b2:.6}")),
        check(b3 <= KLYSHKO_QUANTUM_BOUND + 1e-9, format!("max B3 {b3:.6}")),
    ])
}

#[test]
fn acceptance() {
    let criteria: [(fn() -> Outcome, Option<Duration>); 8] = [
        (criterion_1, Some(Duration::from_secs(1))),
        (criterion_2, Some(Duration::from_secs(5))),
        (criterion_3, Some(Duration::from_secs(60))),
        (criterion_4, Some(Duration::from_secs(10))),
        (criterion_5, Some(Duration::from_secs(30))),
        (criterion_6, Some(Duration::from_secs(30))),
        (criterion_7, Some(Duration::from_secs(120))),
        (criterion_8, None),
    ];
    let mut failed = Vec::new();
    for (k, (run, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let mut out = run();
        let dt = t.elapsed();
        if let Some(b) = budget {
            if dt > *b {
                out.ok = false;
                out.detail.push_str(&format!("; !runtime over {b:?}"));
            }
        }
        let line = format!(
            "criterion {}: {} ({:.2}s) {}\n",
            k + 1,
            if out.ok { "PASS" } else { "FAIL" },
            dt.as_secs_f64(),
            out.detail
        );
        std::io::stdout().write_all(line.as_bytes()).unwrap();
        if !out.ok {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
