//! Displaced-parity correlators and Bell combinations.
//!
//! For a Gaussian state `E(α) = (π/2)ⁿ W(α) = det(C)^{-1/2} exp(−2 vᵀC⁻¹v)`
//! with `v = (Re α, Im α)`.

use crate::bell::{chsh, klyshko, BellValue, Settings, CHSH_TERMS, KLYSHKO_TERMS};
use crate::conditional::{ConditionalParams, TwoGaussianWigner};
use crate::error::{invalid, Result};
use crate::gaussian::{
    make_t, make_twb, make_vlb, vlb_squeezing, wigner_alpha, GaussianState, TripartitePhotonNumbers,
};
use crate::optim::{maximize_scalar, ScanResult};
use crate::scalar::{Complex, Real};

/// Default search interval for the displacement magnitude.
pub const J_MIN: f64 = 1e-8;
pub const J_MAX: f64 = 10.0;

#[derive(Clone, Debug, PartialEq)]
pub struct DpSettings<T> {
    pub unprimed: Vec<Complex<T>>,
    pub primed: Vec<Complex<T>>,
    pub j_mag: Option<T>,
}

impl<T: Real> DpSettings<T> {
    pub fn new(unprimed: Vec<Complex<T>>, primed: Vec<Complex<T>>) -> Result<Self> {
        if unprimed.len() != primed.len() || unprimed.is_empty() {
            return Err(invalid("unprimed and primed displacements must have the same nonzero length"));
        }
        Ok(Self {
            unprimed,
            primed,
            j_mag: None,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.unprimed.len()
    }

    fn pick(&self, primed: &[bool]) -> Vec<Complex<T>> {
        primed
            .iter()
            .enumerate()
            .map(|(k, &p)| if p { self.primed[k] } else { self.unprimed[k] })
            .collect()
    }
}

fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

fn im<T: Real>(x: T) -> Complex<T> {
    Complex::new(T::zero(), x)
}

/// One-parameter displacement families.
///
/// The `T`, twin-beam and conditional families are expressed in this crate's
/// phase-space frame, rotated by 90° relative to the printed parametrizations;
/// `T` and conditional families displace by `√(𝒥/2)` per unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DpFamily {
    /// `α = i√𝒥`, `α′ = −2i√𝒥` on all three modes of the VLB state.
    VlbSymmetric,
    /// `α = √(𝒥/2)`, `α′ = −2√(𝒥/2)` on `|T⟩` with `N₂=N₃=N/4`, `φ₂=φ₃=π`.
    TSymmetric,
    /// `α₁ = ⅔ i√(𝒥/2)`, `α₂′ = −i√(𝒥/2)`, `α₃′ = i√(𝒥/2)`, others zero, on
    /// `|T⟩` with `N₂=N₃=N/4`, `φ₂=0`, `φ₃=π`.
    TOptimized,
    /// `α₁ = −α₂ = √𝒥`, `α₁′ = −α₂′ = −3√𝒥` on the twin beam.
    TwbImproved,
    /// `α₁ = α₂ = 0`, `α₁′ = −α₂′ = √𝒥` on the twin beam.
    TwbBanaszek,
    /// `α₁ = ½α₂ = ⅓α₁′ = √(𝒥/2)`, `α₂′ = 0` on the conditional state with
    /// `N₃ = 10⁻²/N₂`, `η = 1`.
    Conditional,
}

impl DpFamily {
    pub const ALL: [DpFamily; 6] = [
        DpFamily::VlbSymmetric,
        DpFamily::TSymmetric,
        DpFamily::TOptimized,
        DpFamily::TwbImproved,
        DpFamily::TwbBanaszek,
        DpFamily::Conditional,
    ];

    pub fn n_modes(self) -> usize {
        match self {
            DpFamily::VlbSymmetric | DpFamily::TSymmetric | DpFamily::TOptimized => 3,
            _ => 2,
        }
    }

    pub fn settings<T: Real>(self, j: T) -> DpSettings<T> {
        let s = j.sqrt();
        let q = (j / T::lit(2.0)).sqrt();
        let z = T::zero();
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let (unprimed, primed) = match self {
            DpFamily::VlbSymmetric => (vec![im(s); 3], vec![im(-two * s); 3]),
            DpFamily::TSymmetric => (vec![re(q); 3], vec![re(-two * q); 3]),
            DpFamily::TOptimized => (
                vec![im(two / three * q), im(z), im(z)],
                vec![im(z), im(-q), im(q)],
            ),
            DpFamily::TwbImproved => (vec![re(s), re(-s)], vec![re(-three * s), re(three * s)]),
            DpFamily::TwbBanaszek => (vec![re(z), re(z)], vec![re(s), re(-s)]),
            DpFamily::Conditional => (vec![re(q), re(two * q)], vec![re(three * q), re(z)]),
        };
        DpSettings {
            unprimed,
            primed,
            j_mag: Some(j),
        }
    }
}

/// State a family is evaluated on, parametrized by its energy: total photon
/// number `N` for the three-mode and twin-beam families, `N₂` for the
/// conditional family.
#[derive(Clone, Debug)]
pub enum DpTarget<T> {
    Gaussian(GaussianState<T>),
    Conditional(TwoGaussianWigner<T>),
}

impl<T: Real> DpTarget<T> {
    pub fn for_family(family: DpFamily, energy: T) -> Result<Self> {
        let pi = T::PI();
        let z = T::zero();
        Ok(match family {
            DpFamily::VlbSymmetric => DpTarget::Gaussian(make_vlb(vlb_squeezing(energy))?),
            DpFamily::TSymmetric => DpTarget::Gaussian(make_t(&TripartitePhotonNumbers::symmetric(energy, pi, pi)?)?),
            DpFamily::TOptimized => DpTarget::Gaussian(make_t(&TripartitePhotonNumbers::symmetric(energy, z, pi)?)?),
            DpFamily::TwbImproved | DpFamily::TwbBanaszek => DpTarget::Gaussian(make_twb(energy)?),
            DpFamily::Conditional => {
                let n3 = T::lit(1e-2) / energy;
                DpTarget::Conditional(TwoGaussianWigner::new(&ConditionalParams::new(energy, n3, z, z, T::one())?)?)
            }
        })
    }

    pub fn n_modes(&self) -> usize {
        match self {
            DpTarget::Gaussian(s) => s.n_modes(),
            DpTarget::Conditional(_) => 2,
        }
    }

    pub fn correlator(&self, alphas: &[Complex<T>]) -> Result<T> {
        match self {
            DpTarget::Gaussian(s) => e_dp_gaussian(s, alphas),
            DpTarget::Conditional(w) => e_dp_conditional(w, alphas),
        }
    }
}

pub fn e_dp_gaussian<T: Real>(s: &GaussianState<T>, alphas: &[Complex<T>]) -> Result<T> {
    let n = s.n_modes() as i32;
    Ok((T::PI() / T::lit(2.0)).powi(n) * wigner_alpha(s, alphas)?)
}

/// `E(α₁, α₂) = π² W₁(√2 Re α, √2 Im α)` for the conditional state.
pub fn e_dp_conditional<T: Real>(w: &TwoGaussianWigner<T>, alphas: &[Complex<T>]) -> Result<T> {
    if alphas.len() != 2 {
        return Err(invalid("conditional state has two modes"));
    }
    let s = T::lit(2.0).sqrt();
    let v = [alphas[0].re * s, alphas[1].re * s, alphas[0].im * s, alphas[1].im * s];
    Ok(T::PI() * T::PI() * w.eval(&v)?)
}

/// Correlator of the VLB state written out in the quadratures of `α = x + iy`.
pub fn e_dp_vlb_explicit<T: Real>(r: T, alphas: &[Complex<T>; 3]) -> T {
    let x: Vec<T> = alphas.iter().map(|a| a.re).collect();
    let y: Vec<T> = alphas.iter().map(|a| a.im).collect();
    let sq = |t: T| t * t;
    let big = sq(y[0] + y[1] + y[2]) + sq(x[1] - x[2]) + sq(x[1] - x[0]) + sq(x[0] - x[2]);
    let small = sq(x[0] + x[1] + x[2]) + sq(y[1] - y[2]) + sq(y[1] - y[0]) + sq(y[0] - y[2]);
    let c = T::lit(2.0) / T::lit(3.0);
    (-c * (T::lit(2.0) * r).exp() * big - c * (-T::lit(2.0) * r).exp() * small).exp()
}

/// `3 exp(−12 e^{−2r} 𝒥) − exp(−24 e^{2r} 𝒥)`.
pub fn b3_vlb_closed<T: Real>(r: T, j: T) -> BellValue<T> {
    let two_r = T::lit(2.0) * r;
    let value = T::lit(3.0) * (-T::lit(12.0) * (-two_r).exp() * j).exp() - (-T::lit(24.0) * two_r.exp() * j).exp();
    BellValue {
        value,
        settings: Settings::Dp(DpFamily::VlbSymmetric.settings(j)),
    }
}

/// Closed form for `|T⟩` with `N₂ = N₃ = N/4`, `φ₂ = φ₃ = π`, written with
/// negative exponents only:
/// `(−1 + e^{6𝒥(1+N+2s)} + 2e^{(3/2)𝒥(4+7N+6s)}) / e^{4𝒥(3+3N+2s)}`,
/// `s = √2 √(N(2+N))`.
pub fn b3_t_closed<T: Real>(n: T, j: T) -> BellValue<T> {
    let s = T::lit(2.0).sqrt() * (n * (T::lit(2.0) + n)).sqrt();
    let c = |a: f64| T::lit(a);
    let value = c(2.0) * (-j * (c(6.0) + c(1.5) * n - s)).exp() + (-j * (c(6.0) + c(6.0) * n - c(4.0) * s)).exp()
        - (-c(4.0) * j * (c(3.0) + c(3.0) * n + c(2.0) * s)).exp();
    BellValue {
        value,
        settings: Settings::Dp(DpFamily::TSymmetric.settings(j)),
    }
}

fn check_len<T: Real>(settings: &DpSettings<T>, n: usize) -> Result<()> {
    if settings.n_modes() != n || settings.primed.len() != n {
        return Err(invalid(format!("settings describe {} modes, state has {}", settings.n_modes(), n)));
    }
    Ok(())
}

/// `|Σ Klyshko terms|` from Gaussian correlators.
pub fn b3_dp_general<T: Real>(s: &GaussianState<T>, settings: &DpSettings<T>) -> Result<BellValue<T>> {
    b3_dp(&DpTarget::Gaussian(s.clone()), settings)
}

pub fn b3_dp<T: Real>(target: &DpTarget<T>, settings: &DpSettings<T>) -> Result<BellValue<T>> {
    check_len(settings, 3)?;
    if target.n_modes() != 3 {
        return Err(invalid("three-party test needs a three-mode state"));
    }
    let mut e = [T::zero(); 4];
    for (k, flags) in KLYSHKO_TERMS.iter().enumerate() {
        e[k] = target.correlator(&settings.pick(flags))?;
    }
    Ok(BellValue {
        value: klyshko(e).abs(),
        settings: Settings::Dp(settings.clone()),
    })
}

/// `|Σ CHSH terms|` for a two-mode Gaussian or the conditional state.
pub fn b2_dp<T: Real>(target: &DpTarget<T>, settings: &DpSettings<T>) -> Result<BellValue<T>> {
    check_len(settings, 2)?;
    if target.n_modes() != 2 {
        return Err(invalid("two-party test needs a two-mode state"));
    }
    let mut e = [T::zero(); 4];
    for (k, flags) in CHSH_TERMS.iter().enumerate() {
        e[k] = target.correlator(&settings.pick(flags))?;
    }
    Ok(BellValue {
        value: chsh(e).abs(),
        settings: Settings::Dp(settings.clone()),
    })
}

/// Sum of the three constraints that keep the positive VLB terms alive at
/// large squeezing; zero iff all three hold.
pub fn vlb_offset_residual<T: Real>(settings: &DpSettings<T>) -> Result<T> {
    check_len(settings, 3)?;
    let sq = |t: T| t * t;
    let mut total = T::zero();
    for k in 0..3 {
        let a: Vec<Complex<T>> = (0..3)
            .map(|m| if m == k { settings.primed[m] } else { settings.unprimed[m] })
            .collect();
        total += sq(a[0].im + a[1].im + a[2].im)
            + sq(a[1].re - a[2].re)
            + sq(a[1].re - a[0].re)
            + sq(a[0].re - a[2].re);
    }
    Ok(total)
}

/// Bell value of a family at fixed energy and `𝒥`.
pub fn family_value<T: Real>(family: DpFamily, target: &DpTarget<T>, j: T) -> Result<T> {
    let st = family.settings(j);
    Ok(if family.n_modes() == 3 {
        b3_dp(target, &st)?.value
    } else {
        b2_dp(target, &st)?.value
    })
}

#[derive(Clone, Debug)]
pub struct FamilyOptimum<T> {
    pub value: BellValue<T>,
    pub j_opt: T,
    pub scan: ScanResult<T>,
}

/// Maximizes a family over `log 𝒥 ∈ [ln 10⁻⁸, ln 10]`.
pub fn optimize_family<T: Real>(family: DpFamily, energy: T, tol: T) -> Result<FamilyOptimum<T>> {
    optimize_target(family, &DpTarget::for_family(family, energy)?, tol)
}

/// Same as [`optimize_family`] on an arbitrary target state.
pub fn optimize_target<T: Real>(family: DpFamily, target: &DpTarget<T>, tol: T) -> Result<FamilyOptimum<T>> {
    let mut err = None;
    let scan = maximize_scalar(
        |lj: T| match family_value(family, target, lj.exp()) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                T::zero()
            }
        },
        T::lit(J_MIN).ln(),
        T::lit(J_MAX).ln(),
        tol,
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    let j = scan.arg_max[0].exp();
    Ok(FamilyOptimum {
        value: BellValue {
            value: scan.max_value,
            settings: Settings::Dp(family.settings(j)),
        },
        j_opt: j,
        scan,
    })
}

/// Maximizes a closed form over `log 𝒥`.
pub fn optimize_closed<T: Real>(f: impl Fn(T) -> T, tol: T) -> Result<(T, T)> {
    let scan = maximize_scalar(|lj: T| f(lj.exp()), T::lit(J_MIN).ln(), T::lit(J_MAX).ln(), tol)?;
    Ok((scan.max_value, scan.arg_max[0].exp()))
}
