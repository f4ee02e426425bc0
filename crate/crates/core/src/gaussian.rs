//! Zero-mean Gaussian states at the covariance-matrix level.
//!
//! Covariances use the ordering `(x₁..xₙ, y₁..yₙ)` and the normalization in
//! which the vacuum covariance is the identity, so that
//! `W(v) = π⁻ⁿ det(C)^{-1/2} exp(-vᵀ C⁻¹ v)` in quadrature units.

use crate::error::{invalid, Error, Result};
use crate::linalg::{Cholesky, Matrix};
use crate::scalar::{Complex, Real};

const CONDITION_LIMIT: f64 = 1e12;

#[derive(Clone, Debug)]
pub struct GaussianState<T> {
    n_modes: usize,
    cov: Matrix<T>,
    precision: Matrix<T>,
    det: T,
}

fn validated<T: Real>(n_modes: usize, m: &Matrix<T>, what: &str) -> Result<Cholesky<T>> {
    if n_modes == 0 || m.dim() != 2 * n_modes {
        return Err(invalid(format!("{what} of dimension {} does not describe {} modes", m.dim(), n_modes)));
    }
    let scale = m.as_slice().iter().fold(T::one(), |acc, &x| acc.max(x.abs()));
    if !m.is_symmetric(T::lit(1e-9) * scale) {
        return Err(invalid(format!("{what} is not symmetric")));
    }
    if m.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(invalid(format!("{what} has non-finite entries")));
    }
    let ev = m.sym_eigenvalues();
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    if !(lo > T::zero()) {
        return Err(invalid(format!("{what} is not positive definite")));
    }
    let cond = (hi / lo).as_f64();
    if cond > CONDITION_LIMIT {
        return Err(Error::Conditioning(cond));
    }
    m.cholesky().ok_or_else(|| invalid(format!("{what} is not positive definite")))
}

impl<T: Real> GaussianState<T> {
    /// Validates symmetry, positive definiteness and conditioning.
    pub fn new(n_modes: usize, cov: Matrix<T>) -> Result<Self> {
        let ch = validated(n_modes, &cov, "covariance")?;
        Ok(Self {
            n_modes,
            det: ch.det(),
            precision: ch.inverse(),
            cov,
        })
    }

    /// Builds the state from its Wigner exponent matrix `C⁻¹`, kept exactly.
    pub fn from_precision(n_modes: usize, precision: Matrix<T>) -> Result<Self> {
        let ch = validated(n_modes, &precision, "precision matrix")?;
        Ok(Self {
            n_modes,
            det: T::one() / ch.det(),
            cov: ch.inverse(),
            precision,
        })
    }

    /// Pure states have unit determinant; setting it exactly avoids the
    /// rounding of a Cholesky determinant at large squeezing.
    pub(crate) fn pure(mut self) -> Self {
        self.det = T::one();
        self
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self::new(n_modes, Matrix::identity(2 * n_modes)).expect("identity is a valid covariance")
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cov(&self) -> &Matrix<T> {
        &self.cov
    }

    /// Inverse covariance, the matrix appearing in the Wigner exponent.
    pub fn precision(&self) -> &Matrix<T> {
        &self.precision
    }

    pub fn det(&self) -> T {
        self.det
    }

    /// Total mean photon number `Σ (C_xx + C_yy − 2)/4`.
    pub fn mean_photon_number(&self) -> T {
        let n = self.n_modes;
        (0..n)
            .map(|k| (self.cov[(k, k)] + self.cov[(n + k, n + k)] - T::lit(2.0)) / T::lit(4.0))
            .sum()
    }
}

/// Couplings of the two interlinked bilinear interactions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingParams<T> {
    pub gamma1: Complex<T>,
    pub gamma2: Complex<T>,
    pub t: T,
}

/// Photon numbers and phases of the three-mode state `|T⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TripartitePhotonNumbers<T> {
    pub n2: T,
    pub n3: T,
    pub phi2: T,
    pub phi3: T,
}

impl<T: Real> TripartitePhotonNumbers<T> {
    pub fn new(n2: T, n3: T, phi2: T, phi3: T) -> Result<Self> {
        let p = Self { n2, n3, phi2, phi3 };
        p.validate()?;
        Ok(p)
    }

    /// Symmetric split `n2 = n3 = n/4` with the given phases.
    pub fn symmetric(n: T, phi2: T, phi3: T) -> Result<Self> {
        let q = n / T::lit(4.0);
        Self::new(q, q, phi2, phi3)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n2 >= T::zero() && self.n3 >= T::zero()) || !self.n2.is_finite() || !self.n3.is_finite() {
            return Err(invalid("photon numbers must be finite and non-negative"));
        }
        if !self.phi2.is_finite() || !self.phi3.is_finite() {
            return Err(invalid("phases must be finite"));
        }
        Ok(())
    }

    pub fn n1(&self) -> T {
        self.n2 + self.n3
    }

    pub fn total(&self) -> T {
        T::lit(2.0) * self.n1()
    }
}

/// Three-mode state of three squeezed vacua mixed in a tritter.
///
/// The printed block matrix with entries `cosh2r ± sinh2r/3` and
/// `-4/3 cosh r sinh r` is the Wigner exponent matrix, so it is returned as
/// [`GaussianState::precision`]; the covariance is its inverse.
pub fn make_vlb<T: Real>(r: T) -> Result<GaussianState<T>> {
    if !r.is_finite() || r < T::zero() {
        return Err(invalid("squeezing parameter must be finite and non-negative"));
    }
    let two = T::lit(2.0);
    let third = T::one() / T::lit(3.0);
    let rr = (two * r).cosh() + third * (two * r).sinh();
    let tt = (two * r).cosh() - third * (two * r).sinh();
    let ss = -T::lit(4.0) * third * r.cosh() * r.sinh();
    let m = Matrix::from_fn(6, |i, j| match (i / 3, j / 3) {
        (0, 0) => {
            if i == j {
                rr
            } else {
                ss
            }
        }
        (1, 1) => {
            if i == j {
                tt
            } else {
                -ss
            }
        }
        _ => T::zero(),
    });
    Ok(GaussianState::from_precision(3, m)?.pure())
}

/// Total photon number `3 sinh² r` of [`make_vlb`].
pub fn vlb_photon_number<T: Real>(r: T) -> T {
    T::lit(3.0) * r.sinh().powi(2)
}

/// Squeezing giving total photon number `n` in [`make_vlb`].
pub fn vlb_squeezing<T: Real>(n: T) -> T {
    (n / T::lit(3.0)).sqrt().asinh()
}

/// Covariance of `|T⟩`.
pub fn make_t<T: Real>(p: &TripartitePhotonNumbers<T>) -> Result<GaussianState<T>> {
    p.validate()?;
    let two = T::lit(2.0);
    let (n2, n3) = (p.n2, p.n3);
    let n1 = p.n1();
    let a = two * (n2 * (T::one() + n1)).sqrt() * p.phi2.cos();
    let d = two * (n2 * (T::one() + n1)).sqrt() * p.phi2.sin();
    let b = two * (n3 * (T::one() + n1)).sqrt() * p.phi3.cos();
    let e = two * (n3 * (T::one() + n1)).sqrt() * p.phi3.sin();
    let c = two * (n2 * n3).sqrt() * (p.phi2 - p.phi3).cos();
    let l = two * (n2 * n3).sqrt() * (p.phi2 - p.phi3).sin();
    let f = two * n1 + T::one();
    let g = two * n2 + T::one();
    let h = two * n3 + T::one();
    let z = T::zero();
    let cov = Matrix::from_rows(&[
        &[f, a, b, z, -d, -e],
        &[a, g, c, -d, z, l],
        &[b, c, h, -e, -l, z],
        &[z, -d, -e, f, -a, -b],
        &[-d, z, -l, -a, g, c],
        &[-e, l, z, -b, c, h],
    ]);
    Ok(GaussianState::new(3, cov)?.pure())
}

/// Twin beam with total photon number `n = 2 sinh² r`.
pub fn make_twb<T: Real>(n: T) -> Result<GaussianState<T>> {
    if !n.is_finite() || n < T::zero() {
        return Err(invalid("photon number must be finite and non-negative"));
    }
    let ch = T::one() + n;
    let sh = (n * (n + T::lit(2.0))).sqrt();
    let z = T::zero();
    let cov = Matrix::from_rows(&[&[ch, sh, z, z], &[sh, ch, z, z], &[z, z, ch, -sh], &[z, z, -sh, ch]]);
    Ok(GaussianState::new(2, cov)?.pure())
}

/// `tanh r` of the twin beam with total photon number `n`.
pub fn twb_x<T: Real>(n: T) -> T {
    let s = (n / T::lit(2.0)).sqrt();
    s / (T::one() + s * s).sqrt()
}

pub fn coupling_to_photons<T: Real>(c: &CouplingParams<T>) -> Result<TripartitePhotonNumbers<T>> {
    let g1 = c.gamma1.norm_sqr();
    let g2 = c.gamma2.norm_sqr();
    if !c.t.is_finite() || !g1.is_finite() || !g2.is_finite() {
        return Err(invalid("couplings and time must be finite"));
    }
    if g2 <= g1 {
        return Err(Error::UnsupportedRegime(
            "|gamma2| must exceed |gamma1| for a real oscillation frequency".into(),
        ));
    }
    let om2 = g2 - g1;
    let om = om2.sqrt();
    let n2 = g1 * g2 / (om2 * om2) * ((om * c.t).cos() - T::one()).powi(2);
    let n3 = g1 / om2 * (om * c.t).sin().powi(2);
    TripartitePhotonNumbers::new(n2, n3, T::zero(), T::zero())
}

/// Wigner function in quadrature units at `(x₁..xₙ, y₁..yₙ)`.
pub fn wigner_eval<T: Real>(s: &GaussianState<T>, point: &[T]) -> Result<T> {
    if point.len() != 2 * s.n_modes {
        return Err(invalid(format!("point must have length {}", 2 * s.n_modes)));
    }
    let n = s.n_modes as i32;
    Ok(T::PI().powi(-n) / s.det.sqrt() * (-s.precision.quad(point)).exp())
}

/// Maps per-mode displacements to `(Re α₁.., Im α₁..)`.
pub fn phase_space_point<T: Real>(alphas: &[Complex<T>]) -> Vec<T> {
    alphas.iter().map(|a| a.re).chain(alphas.iter().map(|a| a.im)).collect()
}

/// Wigner function normalized over the complex displacement plane,
/// `W(α) = (2/π)ⁿ det(C)^{-1/2} exp(-2 vᵀ C⁻¹ v)` with `v = (Re α, Im α)`.
pub fn wigner_alpha<T: Real>(s: &GaussianState<T>, alphas: &[Complex<T>]) -> Result<T> {
    if alphas.len() != s.n_modes {
        return Err(invalid(format!("expected {} displacements", s.n_modes)));
    }
    let v = phase_space_point(alphas);
    let n = s.n_modes as i32;
    let two = T::lit(2.0);
    Ok((two / T::PI()).powi(n) / s.det.sqrt() * (-two * s.precision.quad(&v)).exp())
}

/// Partial trace onto the listed modes (zero-based, in the given order).
pub fn reduce_state<T: Real>(s: &GaussianState<T>, keep: &[usize]) -> Result<GaussianState<T>> {
    if keep.is_empty() {
        return Err(invalid("keep set must be nonempty"));
    }
    if keep.iter().any(|&k| k >= s.n_modes) {
        return Err(invalid("mode index out of range"));
    }
    for (i, k) in keep.iter().enumerate() {
        if keep[..i].contains(k) {
            return Err(invalid("duplicate mode index"));
        }
    }
    let idx: Vec<usize> = keep.iter().copied().chain(keep.iter().map(|k| k + s.n_modes)).collect();
    GaussianState::new(keep.len(), s.cov.submatrix(&idx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gauss_hermite;

    fn tp(n2: f64, n3: f64, p2: f64, p3: f64) -> TripartitePhotonNumbers<f64> {
        TripartitePhotonNumbers::new(n2, n3, p2, p3).unwrap()
    }

    #[test]
    fn vacuum_limits() {
        let id = Matrix::<f64>::identity(6);
        assert!(make_vlb(0.0).unwrap().cov().max_abs_diff(&id) < 1e-15);
        assert!(make_t(&tp(0.0, 0.0, 0.3, 1.0)).unwrap().cov().max_abs_diff(&id) < 1e-15);
        assert!(make_twb(0.0).unwrap().cov().max_abs_diff(&Matrix::identity(4)) < 1e-15);
    }

    #[test]
    fn vlb_entries_and_purity() {
        let s = make_vlb(1.0f64).unwrap();
        let m = s.precision();
        assert!((m[(0, 0)] - (2f64.cosh() + 2f64.sinh() / 3.0)).abs() < 1e-12);
        assert!((m[(0, 1)] + 4.0 / 3.0 * 1f64.cosh() * 1f64.sinh()).abs() < 1e-12);
        assert!((m[(3, 3)] - (2f64.cosh() - 2f64.sinh() / 3.0)).abs() < 1e-12);
        for r in [0.5f64, 1.0, 2.0] {
            let s = make_vlb(r).unwrap();
            assert!((s.det() - 1.0).abs() < 1e-9);
            assert!((s.mean_photon_number() - vlb_photon_number(r)).abs() < 1e-9);
        }
        assert!(make_vlb(f64::NAN).is_err());
    }

    #[test]
    fn t_entries_and_purity() {
        let s = make_t(&tp(1.0, 1.0, 0.0, 0.0)).unwrap();
        let c = s.cov();
        assert_eq!(c[(0, 0)], 5.0);
        assert_eq!(c[(1, 1)], 3.0);
        assert_eq!(c[(2, 2)], 3.0);
        assert!((c[(0, 1)] - 2.0 * 3f64.sqrt()).abs() < 1e-14);
        assert!((c[(0, 2)] - 2.0 * 3f64.sqrt()).abs() < 1e-14);
        assert!((c[(1, 2)] - 2.0).abs() < 1e-14);
        assert_eq!(c[(0, 4)], 0.0);
        assert_eq!(c[(1, 5)], 0.0);
        for &n2 in &[0.0, 0.3, 1.0, 4.0] {
            for &n3 in &[0.0, 0.7, 2.5] {
                let s = make_t(&tp(n2, n3, 0.4, -1.1)).unwrap();
                assert!((s.det() - 1.0).abs() < 1e-9, "det at {n2},{n3}");
                assert!((s.mean_photon_number() - 2.0 * (n2 + n3)).abs() < 1e-9);
            }
        }
        assert!(TripartitePhotonNumbers::new(-1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn twb_entries() {
        let s = make_twb(2.0f64).unwrap();
        assert!((s.cov()[(0, 0)] - 3.0).abs() < 1e-14);
        assert!((s.det() - 1.0).abs() < 1e-12);
        assert!(make_twb(-1.0f64).is_err());
    }

    #[test]
    fn couplings() {
        let c = CouplingParams {
            gamma1: Complex::new(1.0, 0.0),
            gamma2: Complex::new(2f64.sqrt(), 0.0),
            t: std::f64::consts::FRAC_PI_2,
        };
        let p = coupling_to_photons(&c).unwrap();
        assert!((p.n3 - 1.0).abs() < 1e-12);
        assert!((p.n2 - 2.0).abs() < 1e-12);
        let z = coupling_to_photons(&CouplingParams { t: 0.0, ..c }).unwrap();
        assert_eq!((z.n2, z.n3), (0.0, 0.0));
        let rev = coupling_to_photons(&CouplingParams { t: 2.0 * std::f64::consts::PI, ..c }).unwrap();
        assert!(rev.n2 < 1e-24 && rev.n3 < 1e-24);
        let bad = CouplingParams { gamma1: Complex::new(2.0, 0.0), ..c };
        assert!(matches!(coupling_to_photons(&bad), Err(Error::UnsupportedRegime(_))));
    }

    #[test]
    fn wigner_values() {
        let v = GaussianState::<f64>::vacuum(1);
        assert!((wigner_eval(&v, &[0.0, 0.0]).unwrap() - 1.0 / std::f64::consts::PI).abs() < 1e-15);
        let s = make_vlb(1.0f64).unwrap();
        let w0 = wigner_eval(&s, &[0.0; 6]).unwrap();
        assert!((w0 - std::f64::consts::PI.powi(-3)).abs() < 1e-12);
        assert!(wigner_eval(&s, &[0.0; 4]).is_err());
    }

    #[test]
    fn wigner_normalization() {
        let s = make_t(&tp(0.2, 0.1, 0.5, -0.3)).unwrap();
        let (x, w) = gauss_hermite(10);
        let mut total = 0.0;
        let mut idx = [0usize; 6];
        loop {
            let p: Vec<f64> = idx.iter().map(|&i| x[i]).collect();
            let wt: f64 = idx.iter().map(|&i| w[i] * (x[i] * x[i]).exp()).product();
            total += wt * wigner_eval(&s, &p).unwrap();
            let mut k = 0;
            while k < 6 {
                idx[k] += 1;
                if idx[k] < x.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == 6 {
                break;
            }
        }
        assert!((total - 1.0).abs() < 1e-3, "{total}");
    }

    #[test]
    fn reduction() {
        let v = reduce_state(&GaussianState::<f64>::vacuum(3), &[0, 1]).unwrap();
        assert!(v.cov().max_abs_diff(&Matrix::identity(4)) < 1e-15);
        let t = make_t(&tp(1.0, 1.0, 0.0, 0.0)).unwrap();
        let r = reduce_state(&t, &[0, 1]).unwrap();
        assert_eq!(r.cov()[(0, 0)], 5.0);
        assert_eq!(r.cov()[(2, 2)], 5.0);
        assert_eq!(r.cov()[(1, 3)], t.cov()[(1, 4)]);
        assert!(r.det() > 1.0);
        assert!(reduce_state(&t, &[]).is_err());
        let twb = reduce_state(&make_t(&tp(1.0, 0.0, 0.0, 0.0)).unwrap(), &[0, 1]).unwrap();
        assert!(twb.cov().max_abs_diff(make_twb(2.0).unwrap().cov()) < 1e-12);
    }

    #[test]
    fn f32_instantiation() {
        let s = make_t(&TripartitePhotonNumbers::<f32>::new(0.5, 0.5, 0.0, 0.0).unwrap()).unwrap();
        assert!((s.det() - 1.0).abs() < 1e-4);
        let w = wigner_eval(&s, &[0.0f32; 6]).unwrap();
        assert!((w - std::f32::consts::PI.powi(-3)).abs() < 1e-4);
    }
}
