//! Two-mode state obtained from `|T⟩` by an ON/OFF click on mode 3.

use crate::error::{invalid, Error, Result};
use crate::gaussian::{make_t, reduce_state, GaussianState, TripartitePhotonNumbers};
use crate::linalg::Matrix;
use crate::scalar::Real;

const KEEP: [usize; 4] = [0, 1, 3, 4];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionalParams<T> {
    pub n2: T,
    pub n3: T,
    pub phi2: T,
    pub phi3: T,
    pub eta: T,
}

impl<T: Real> ConditionalParams<T> {
    pub fn new(n2: T, n3: T, phi2: T, phi3: T, eta: T) -> Result<Self> {
        let p = Self { n2, n3, phi2, phi3, eta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.photon_numbers().validate()?;
        if !(self.eta >= T::zero() && self.eta <= T::one()) {
            return Err(invalid("efficiency must lie in [0, 1]"));
        }
        Ok(())
    }

    pub fn photon_numbers(&self) -> TripartitePhotonNumbers<T> {
        TripartitePhotonNumbers {
            n2: self.n2,
            n3: self.n3,
            phi2: self.phi2,
            phi3: self.phi3,
        }
    }

    pub fn n1(&self) -> T {
        self.n2 + self.n3
    }
}

/// Click probability `ηN₃/(1+ηN₃)`.
pub fn p_click<T: Real>(p: &ConditionalParams<T>) -> Result<T> {
    p.validate()?;
    let x = p.eta * p.n3;
    Ok(x / (T::one() + x))
}

/// `W(v) = Σ wᵢ det(Mᵢ)^{-1/2} exp(−vᵀ Qᵢ v)` over two Gaussian terms.
#[derive(Clone, Debug)]
pub struct TwoGaussianWigner<T> {
    pub weight_a: T,
    pub weight_b: T,
    /// `(V′)⁻¹`: restrict to modes 1, 2 then invert.
    pub quad_form_a: Matrix<T>,
    /// `(D⁻¹)′`: invert the 6×6 `D` then restrict.
    pub quad_form_b: Matrix<T>,
    /// `det V′`.
    pub norm_a: T,
    /// `det D` of the 6×6 matrix.
    pub norm_b: T,
}

impl<T: Real> TwoGaussianWigner<T> {
    pub fn new(p: &ConditionalParams<T>) -> Result<Self> {
        p.validate()?;
        if !(p.eta > T::zero()) {
            return Err(Error::UndefinedState("no click is possible at zero efficiency".into()));
        }
        if !(p.n3 > T::zero()) {
            return Err(Error::UndefinedState("no click is possible with an empty third mode".into()));
        }
        let v = make_t(&p.photon_numbers())?.cov().clone();
        let vp = v.submatrix(&KEEP);
        let ch_a = vp.cholesky().ok_or_else(|| invalid("reduced covariance not positive definite"))?;
        let shift = (T::lit(2.0) - p.eta) / p.eta;
        let mut d = v;
        d[(2, 2)] += shift;
        d[(5, 5)] += shift;
        let ch_b = d.cholesky().ok_or_else(|| invalid("D not positive definite"))?;
        let pre = (T::one() + p.eta * p.n3) / (T::lit(4.0) * p.eta * p.n3);
        let c = (T::lit(2.0) / T::PI()).powi(2);
        Ok(Self {
            weight_a: pre * c,
            weight_b: -pre * c * T::lit(2.0) / p.eta,
            quad_form_a: ch_a.inverse(),
            quad_form_b: ch_b.inverse().submatrix(&KEEP),
            norm_a: ch_a.det(),
            norm_b: ch_b.det(),
        })
    }

    /// Value at `(x₁, x₂, y₁, y₂)` in quadrature units.
    pub fn eval(&self, point: &[T]) -> Result<T> {
        if point.len() != 4 {
            return Err(invalid("point must have length 4"));
        }
        Ok(self.weight_a / self.norm_a.sqrt() * (-self.quad_form_a.quad(point)).exp()
            + self.weight_b / self.norm_b.sqrt() * (-self.quad_form_b.quad(point)).exp())
    }

    /// Covariance `V′` of the first term.
    pub fn covariance_a(&self) -> Matrix<T> {
        self.quad_form_a.cholesky().expect("positive definite").inverse()
    }

    /// Covariance `((D⁻¹)′)⁻¹` of the second term.
    pub fn covariance_b(&self) -> Matrix<T> {
        self.quad_form_b.cholesky().expect("positive definite").inverse()
    }

    /// Total weight of each term after integrating over phase space.
    pub fn term_masses(&self) -> (T, T) {
        let pi2 = T::PI() * T::PI();
        let det_qb = self.quad_form_b.cholesky().expect("positive definite").det();
        (
            self.weight_a * pi2,
            self.weight_b * pi2 / (det_qb * self.norm_b).sqrt(),
        )
    }
}

pub fn w1_eval<T: Real>(p: &ConditionalParams<T>, point: &[T]) -> Result<T> {
    TwoGaussianWigner::new(p)?.eval(point)
}

/// State of modes 1, 2 when mode 3 is discarded.
pub fn w_traced<T: Real>(p: &ConditionalParams<T>) -> Result<GaussianState<T>> {
    reduce_state(&make_t(&p.photon_numbers())?, &[0, 1])
}
