//! Dichotomized homodyne correlators, outcome `sgn(x^θ)` per mode with
//! `x^θ = cos θ x + sin θ y`.

use crate::bell::{chsh, BellValue, Settings, CHSH_TERMS};
use crate::conditional::{ConditionalParams, TwoGaussianWigner};
use crate::error::{invalid, Error, Result};
use crate::gaussian::{make_t, GaussianState};
use crate::linalg::Matrix;
use crate::scalar::Real;

const KEEP: [usize; 4] = [0, 1, 3, 4];

/// Local-oscillator phases of the two parties.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HomodyneSetting<T> {
    pub theta: T,
    pub phi: T,
}

impl<T: Real> HomodyneSetting<T> {
    pub fn new(theta: T, phi: T) -> Self {
        Self { theta, phi }
    }

    /// `ψ = θ + φ + φ₂`.
    pub fn psi(&self, phi2: T) -> T {
        self.theta + self.phi + phi2
    }
}

/// Two phases per party for the CHSH combination.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HomodyneSettings<T> {
    pub thetas: [T; 2],
    pub phis: [T; 2],
}

impl<T: Real> HomodyneSettings<T> {
    pub fn setting(&self, primed: [bool; 2]) -> HomodyneSetting<T> {
        HomodyneSetting::new(self.thetas[primed[0] as usize], self.phis[primed[1] as usize])
    }
}

/// Closed-form correlator of the conditional state, valid when `φ₃ = 0`,
/// with its phase-independent constants precomputed.
#[derive(Clone, Debug)]
pub struct Rho1<T> {
    phi2: T,
    amp_a: T,
    amp_b: T,
    k1: T,
    k2: T,
}

impl<T: Real> Rho1<T> {
    pub fn new(p: &ConditionalParams<T>) -> Result<Self> {
        p.validate()?;
        if !(p.eta > T::zero() && p.n3 > T::zero()) {
            return Err(Error::UndefinedState("no click is possible".into()));
        }
        if !(p.n2 > T::zero()) {
            return Err(invalid("closed form needs N₂ > 0"));
        }
        let c = |x: f64| T::lit(x);
        let (n1, n2, n3, eta) = (p.n1(), p.n2, p.n3, p.eta);
        let v = make_t(&p.photon_numbers())?.cov().clone();
        let det_a = v.submatrix(&KEEP).cholesky().ok_or_else(|| invalid("covariance not positive definite"))?.det();
        let shift = (c(2.0) - eta) / eta;
        let mut d = v;
        d[(2, 2)] += shift;
        d[(5, 5)] += shift;
        let det_d = d.cholesky().ok_or_else(|| invalid("D not positive definite"))?.det();
        let pi = T::PI();
        let g = (c(2.0) / pi).powi(2);
        let pre = (c(1.0) + eta * n3) / (c(4.0) * eta * n3);
        Ok(Self {
            phi2: p.phi2,
            amp_a: pre * g / det_a.sqrt() * c(2.0) * (c(1.0) + c(2.0) * n3) * pi,
            amp_b: pre * g / eta * c(2.0) / det_d.sqrt() * c(2.0) * pi * (c(-1.0) + n3 * (eta - c(2.0)))
                / (c(1.0) + eta * n3),
            k1: (c(1.0) + c(2.0) * n1) * (c(1.0) + c(2.0) * n2) / ((c(1.0) + n1) * n2),
            k2: (c(1.0) + c(2.0) * n1 - n3 * eta) * (c(1.0) + c(2.0) * n2 + n3 * eta) / ((c(1.0) + n1) * n2),
        })
    }

    pub fn eval(&self, setting: &HomodyneSetting<T>) -> Result<T> {
        let cp = setting.psi(self.phi2).cos();
        let arg = |k: T| -> Result<T> {
            let r = k - T::lit(4.0) * cp * cp;
            if !(r > T::zero()) {
                return Err(Error::Precision("square-root argument is not positive".into()));
            }
            Ok((T::lit(2.0) * cp / r.sqrt()).atan())
        };
        Ok(self.amp_a * arg(self.k1)? + self.amp_b * arg(self.k2)?)
    }
}

pub fn e_h_rho1<T: Real>(p: &ConditionalParams<T>, setting: &HomodyneSetting<T>) -> Result<T> {
    Rho1::new(p)?.eval(setting)
}

fn quadrature_correlation<T: Real>(cov: &Matrix<T>, theta: T, phi: T) -> Result<T> {
    if cov.dim() != 4 {
        return Err(invalid("two-mode covariance required"));
    }
    let (st, ct) = theta.sin_cos();
    let (sp, cph) = phi.sin_cos();
    let u = [ct, T::zero(), st, T::zero()];
    let w = [T::zero(), cph, T::zero(), sp];
    let rho = cov.bilinear(&u, &w) / (cov.quad(&u) * cov.quad(&w)).sqrt();
    if rho.abs() > T::one() + T::lit(1e-12) {
        return Err(Error::Precision(format!("correlation coefficient {} outside [-1, 1]", rho.as_f64())));
    }
    Ok(rho.max(-T::one()).min(T::one()))
}

fn orthant<T: Real>(rho: T) -> T {
    T::lit(2.0) / T::PI() * rho.asin()
}

/// `(2/π) arcsin ρ` for the quadratures at phases `θ`, `φ` of a two-mode
/// Gaussian state.
pub fn e_h_gaussian<T: Real>(s: &GaussianState<T>, theta: T, phi: T) -> Result<T> {
    if s.n_modes() != 2 {
        return Err(invalid("two-mode state required"));
    }
    Ok(orthant(quadrature_correlation(s.cov(), theta, phi)?))
}

/// Correlator of the conditional state from its two Gaussian terms, each
/// contributing `(2/π) arcsin ρ` with weight equal to its mass.
pub fn e_h_conditional_exact<T: Real>(p: &ConditionalParams<T>, setting: &HomodyneSetting<T>) -> Result<T> {
    let w = TwoGaussianWigner::new(p)?;
    let (ma, mb) = w.term_masses();
    let ra = quadrature_correlation(&w.covariance_a(), setting.theta, setting.phi)?;
    let rb = quadrature_correlation(&w.covariance_b(), setting.theta, setting.phi)?;
    Ok(ma * orthant(ra) + mb * orthant(rb))
}

/// `1 − 2|ψ|/π` with `ψ` reduced to `[−π, π]`.
pub fn classical_reference<T: Real>(psi: T) -> T {
    let two_pi = T::lit(2.0) * T::PI();
    let mut x = psi % two_pi;
    if x > T::PI() {
        x -= two_pi;
    } else if x < -T::PI() {
        x += two_pi;
    }
    T::one() - T::lit(2.0) * x.abs() / T::PI()
}

#[derive(Clone, Debug)]
pub enum HomodyneSource<T> {
    /// Closed form for the conditional state.
    Rho1(Rho1<T>),
    /// Two-term Gaussian evaluation of the conditional state.
    ConditionalExact(ConditionalParams<T>),
    Gaussian(GaussianState<T>),
}

impl<T: Real> HomodyneSource<T> {
    pub fn rho1(p: &ConditionalParams<T>) -> Result<Self> {
        Ok(HomodyneSource::Rho1(Rho1::new(p)?))
    }

    pub fn correlator(&self, setting: &HomodyneSetting<T>) -> Result<T> {
        match self {
            HomodyneSource::Rho1(r) => r.eval(setting),
            HomodyneSource::ConditionalExact(p) => e_h_conditional_exact(p, setting),
            HomodyneSource::Gaussian(s) => e_h_gaussian(s, setting.theta, setting.phi),
        }
    }
}

/// `|CHSH|` of the dichotomized homodyne correlators.
pub fn b2_h<T: Real>(source: &HomodyneSource<T>, settings: &HomodyneSettings<T>) -> Result<BellValue<T>> {
    let mut e = [T::zero(); 4];
    for (k, flags) in CHSH_TERMS.iter().enumerate() {
        e[k] = source.correlator(&settings.setting(*flags))?;
    }
    Ok(BellValue {
        value: chsh(e).abs(),
        settings: Settings::Homodyne(*settings),
    })
}
