//! Log-factorials, Gauss–Legendre rules and Hermite functions.

use crate::scalar::Real;

/// Table of `ln k!` for `k = 0..len`.
pub fn ln_factorials<T: Real>(len: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(len.max(1));
    let mut acc = 0.0f64;
    out.push(T::zero());
    for k in 1..len {
        acc += (k as f64).ln();
        out.push(T::lit(acc));
    }
    out
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on<T: Real>(n: usize, a: T, b: T) -> (Vec<T>, Vec<T>) {
    let (x, w) = gauss_legendre(n);
    let half = (b - a) / T::lit(2.0);
    let mid = (a + b) / T::lit(2.0);
    (
        x.iter().map(|&xi| mid + half * T::lit(xi)).collect(),
        w.iter().map(|&wi| half * T::lit(wi)).collect(),
    )
}

/// Gauss–Hermite nodes and weights for the weight `exp(-x²)`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    let nf = n as f64;
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            let (mut p1, mut p2) = (pim4, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-14 {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    x.reverse();
    w.reverse();
    (x, w)
}

/// Normalized Hermite functions `ψ_0(x) .. ψ_{n-1}(x)`.
pub fn hermite_functions<T: Real>(n: usize, x: T) -> Vec<T> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let two = T::lit(2.0);
    let psi0 = T::PI().powf(T::lit(-0.25)) * (-x * x / two).exp();
    out.push(psi0);
    if n > 1 {
        out.push(two.sqrt() * x * psi0);
    }
    for m in 1..n.saturating_sub(1) {
        let mf = T::from_usize_lossy(m);
        let next = (two / (mf + T::one())).sqrt() * x * out[m]
            - (mf / (mf + T::one())).sqrt() * out[m - 1];
        out.push(next);
    }
    out
}
