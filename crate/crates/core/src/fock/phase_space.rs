//! Phase-space quadrature for the Π pseudospin representation.
//!
//! The Wigner kernels are `Π_x ↦ sgn x`, `Π_y ↦ −δ(x) 𝒫(1/y)` and
//! `Π_z ↦ −π δ(x) δ(y)`. They have no finite Fock matrix, so correlators are
//! integrated directly against a Gaussian Wigner function whose x and y
//! quadratures are uncorrelated: δ factors by slicing, sgn and 𝒫 by
//! symmetrized half-line Gauss–Legendre quadrature.

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::linalg::Matrix;
use crate::scalar::Real;
use crate::special::gauss_legendre_on;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PiAxis {
    X,
    Y,
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kernel {
    One,
    Delta,
    Sign,
    Pv,
}

impl Kernel {
    fn eval<T: Real>(self, u: T) -> T {
        match self {
            Kernel::Sign => u.signum(),
            Kernel::Pv => u.recip(),
            _ => T::one(),
        }
    }
}

const NODES: usize = 160;

/// `⟨⊗ⱼ Π_{axisⱼ}⟩` by phase-space quadrature.
pub fn pi_correlator<T: Real>(s: &GaussianState<T>, axes: &[PiAxis]) -> Result<T> {
    let n = s.n_modes();
    if axes.len() != n {
        return Err(Error::InvalidParameter(format!("expected {n} axes")));
    }
    let c = s.cov();
    for i in 0..n {
        for j in 0..n {
            if c[(i, n + j)] != T::zero() {
                return Err(Error::UnsupportedRegime(
                    "phase-space Π correlators need uncorrelated x and y quadratures".into(),
                ));
            }
        }
    }
    let half = T::lit(0.5);
    let sx = Matrix::from_fn(n, |i, j| c[(i, j)] * half);
    let sy = Matrix::from_fn(n, |i, j| c[(n + i, n + j)] * half);
    let mut pref = T::one();
    let mut kx = Vec::with_capacity(n);
    let mut ky = Vec::with_capacity(n);
    for a in axes {
        let (p, x, y) = match a {
            PiAxis::X => (T::one(), Kernel::Sign, Kernel::One),
            PiAxis::Y => (-T::one(), Kernel::Delta, Kernel::Pv),
            PiAxis::Z => (-T::PI(), Kernel::Delta, Kernel::Delta),
        };
        pref *= p;
        kx.push(x);
        ky.push(y);
    }
    Ok(pref * block_expect(&sx, &kx, NODES)? * block_expect(&sy, &ky, NODES)?)
}

/// `E[Π kernels]` under a zero-mean normal law with covariance `sigma`.
fn block_expect<T: Real>(sigma: &Matrix<T>, kinds: &[Kernel], nodes: usize) -> Result<T> {
    let delta: Vec<usize> = (0..kinds.len()).filter(|&k| kinds[k] == Kernel::Delta).collect();
    let rest: Vec<usize> = (0..kinds.len())
        .filter(|&k| matches!(kinds[k], Kernel::Sign | Kernel::Pv))
        .collect();
    if rest.len() % 2 == 1 {
        return Ok(T::zero());
    }
    let two_pi = T::lit(2.0) * T::PI();
    let (density, cond) = if delta.is_empty() {
        (T::one(), sigma.submatrix(&rest))
    } else {
        let sdd = sigma.submatrix(&delta);
        let ch = sdd
            .cholesky()
            .ok_or_else(|| Error::Precision("singular slice covariance".into()))?;
        let dens = T::one() / (two_pi.powi(delta.len() as i32) * ch.det()).sqrt();
        let inv = ch.inverse();
        let cond = Matrix::from_fn(rest.len(), |i, j| {
            let mut v = sigma[(rest[i], rest[j])];
            for (a, &da) in delta.iter().enumerate() {
                for (b, &db) in delta.iter().enumerate() {
                    v -= sigma[(rest[i], da)] * inv[(a, b)] * sigma[(db, rest[j])];
                }
            }
            v
        });
        (dens, cond)
    };
    match rest.len() {
        0 => Ok(density),
        2 => {
            let ka = kinds[rest[0]];
            let kb = kinds[rest[1]];
            let coarse = odd_pair_integral(&cond, ka, kb, nodes)?;
            let fine = odd_pair_integral(&cond, ka, kb, 2 * nodes)?;
            if (coarse - fine).abs() > T::lit(1e-8) {
                return Err(Error::Precision("phase-space quadrature unconverged".into()));
            }
            Ok(density * fine)
        }
        _ => Err(Error::UnsupportedRegime("more than two odd kernels in one block".into())),
    }
}

/// `∫∫ k_a(u) k_b(v) g(u, v)` for odd kernels and a centred bivariate normal.
fn odd_pair_integral<T: Real>(cov: &Matrix<T>, ka: Kernel, kb: Kernel, nodes: usize) -> Result<T> {
    let ch = cov
        .cholesky()
        .ok_or_else(|| Error::Precision("singular conditional covariance".into()))?;
    let inv = ch.inverse();
    let norm = T::one() / (T::lit(2.0) * T::PI() * ch.det().sqrt());
    let g = |u: T, v: T| {
        norm * (-(inv[(0, 0)] * u * u + T::lit(2.0) * inv[(0, 1)] * u * v + inv[(1, 1)] * v * v) / T::lit(2.0)).exp()
    };
    let lu = T::lit(12.0) * cov[(0, 0)].sqrt();
    let lv = T::lit(12.0) * cov[(1, 1)].sqrt();
    let (xu, wu) = gauss_legendre_on(nodes, T::zero(), lu);
    let (xv, wv) = gauss_legendre_on(nodes, T::zero(), lv);
    let mut acc = T::zero();
    for (&u, &wu) in xu.iter().zip(&wu) {
        let ku = ka.eval(u);
        for (&v, &wv) in xv.iter().zip(&wv) {
            acc += wu * wv * ku * kb.eval(v) * (g(u, v) - g(u, -v));
        }
    }
    Ok(T::lit(2.0) * acc)
}
