//! Pseudospin correlators and Bell combinations.

use crate::bell::{chsh, klyshko, BellValue, Settings, CHSH_TERMS, KLYSHKO_TERMS};
use crate::conditional::ConditionalParams;
use crate::error::{invalid, Error, Result};
use crate::optim::maximize_angles;
use crate::scalar::Real;
use crate::special::ln_factorials;

/// Cap on the number of series terms.
pub const SERIES_TERM_CAP: usize = 1_000_000;
/// Points per axis requested from the angle optimizer.
pub const ANGLE_GRID: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    S,
    Pi,
}

impl Representation {
    /// Azimuths used with this representation: `(0, π, π)` for the
    /// pseudospin series, all zero for the Π coefficients.
    pub fn preset_phis<T: Real>(self) -> [T; 3] {
        match self {
            Representation::S => [T::zero(), T::PI(), T::PI()],
            Representation::Pi => [T::zero(); 3],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PsSettings<T> {
    pub thetas: Vec<T>,
    pub phis: Vec<T>,
    pub thetas_primed: Vec<T>,
    pub phis_primed: Vec<T>,
    pub representation: Representation,
}

impl<T: Real> PsSettings<T> {
    pub fn validate(&self) -> Result<()> {
        let n = self.thetas.len();
        if n == 0 || self.phis.len() != n || self.thetas_primed.len() != n || self.phis_primed.len() != n {
            return Err(invalid("pseudospin settings need equal, nonzero lengths"));
        }
        let all = self.thetas.iter().chain(&self.phis).chain(&self.thetas_primed).chain(&self.phis_primed);
        if all.into_iter().any(|x| !x.is_finite()) {
            return Err(invalid("angles must be finite"));
        }
        Ok(())
    }

    /// `(θ, φ)` per party for one choice of primed flags.
    pub fn pick(&self, primed: &[bool]) -> (Vec<T>, Vec<T>) {
        primed
            .iter()
            .enumerate()
            .map(|(k, &p)| {
                if p {
                    (self.thetas_primed[k], self.phis_primed[k])
                } else {
                    (self.thetas[k], self.phis[k])
                }
            })
            .unzip()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsCoefficients<T> {
    pub c1: T,
    pub c2: T,
    pub c3: T,
}

impl<T: Real> PsCoefficients<T> {
    pub fn new(c1: T, c2: T, c3: T) -> Self {
        Self { c1, c2, c3 }
    }

    pub fn as_array(&self) -> [T; 3] {
        [self.c1, self.c2, self.c3]
    }
}

fn ln_pow<T: Real>(base_ln: T, k: usize) -> T {
    if k == 0 {
        T::zero()
    } else {
        base_ln * T::from_usize_lossy(k)
    }
}

/// Sums `Σ_m shell(m)` until `prefactor · tail(m) < tol`.
fn shell_series<T: Real>(
    prefactor: T,
    tol: T,
    mut shell: impl FnMut(usize) -> (T, usize),
    tail: impl Fn(usize) -> Option<T>,
) -> Result<T> {
    if !(tol > T::zero()) {
        return Err(invalid("tol must be positive"));
    }
    let mut total = T::zero();
    let mut terms = 0usize;
    let mut m = 0usize;
    loop {
        let (s, n) = shell(m);
        total += s;
        terms += n;
        if let Some(t) = tail(m + 1) {
            if prefactor.abs() * t < tol {
                return Ok(prefactor * total);
            }
        }
        if terms > SERIES_TERM_CAP {
            return Err(Error::Precision(format!("series did not reach tol within {SERIES_TERM_CAP} terms")));
        }
        m += 1;
    }
}

/// Sums a log-concave run of terms over `lo..=hi`: climbs from `guess` to the
/// largest term, then adds neighbours until they drop `e^{-40}` below it.
/// `term` returns `(log magnitude, value)`; returns the sum and the number of
/// terms evaluated.
fn sum_around_peak<T: Real>(lo: usize, hi: usize, guess: usize, mut term: impl FnMut(usize) -> (T, T)) -> (T, usize) {
    let mut evals = 0;
    let mut i = guess.clamp(lo, hi);
    let mut cur = term(i);
    evals += 1;
    loop {
        if i < hi {
            let up = term(i + 1);
            evals += 1;
            if up.0 > cur.0 {
                i += 1;
                cur = up;
                continue;
            }
        }
        if i > lo {
            let down = term(i - 1);
            evals += 1;
            if down.0 > cur.0 {
                i -= 1;
                cur = down;
                continue;
            }
        }
        break;
    }
    if cur.0 == T::neg_infinity() {
        return (T::zero(), evals);
    }
    let floor = cur.0 - T::lit(40.0);
    let mut total = cur.1;
    let mut j = i;
    while j < hi {
        j += 1;
        let t = term(j);
        evals += 1;
        if t.0 < floor {
            break;
        }
        total += t.1;
    }
    let mut j = i;
    while j > lo {
        j -= 1;
        let t = term(j);
        evals += 1;
        if t.0 < floor {
            break;
        }
        total += t.1;
    }
    (total, evals)
}

/// `Σ_{m ≥ from} w(m) x^m` for `w(m) ∈ {√(m+1), √(2m+1), 2m+1}`, bounded by a
/// geometric majorant; `None` while the ratio is not yet below one.
fn tail_bound<T: Real>(x: T, from: usize, w: impl Fn(usize) -> T) -> Option<T> {
    if x <= T::zero() {
        return Some(T::zero());
    }
    let ratio = x * w(from + 1) / w(from);
    if ratio >= T::one() {
        return None;
    }
    Some(w(from) * x.powi(from as i32) / (T::one() - ratio))
}

/// Pseudospin coefficients of `|T⟩` from their double series over
/// `(s, t)`; `c₁` carries the overall minus sign.
pub fn coeffs_t_series<T: Real>(n2: T, n3: T, tol: T) -> Result<PsCoefficients<T>> {
    if !(n2 >= T::zero() && n3 >= T::zero()) || !n2.is_finite() || !n3.is_finite() {
        return Err(invalid("photon numbers must be finite and nonnegative"));
    }
    let one = T::one();
    let two = T::lit(2.0);
    let n1 = n2 + n3;
    let a = n2 / (one + n1);
    let b = n3 / (one + n1);
    let rho2 = ((n1) / (one + n1)).powi(2);
    let (la, lb) = (a.ln(), b.ln());
    let mut lf: Vec<T> = ln_factorials(64);
    let grow = |lf: &mut Vec<T>, need: usize| {
        if lf.len() <= need {
            *lf = ln_factorials((need + 1).max(2 * lf.len()));
        }
    };
    let w_c1 = |m: usize| T::from_usize_lossy(2 * m + 1);
    let w_c2 = |m: usize| T::from_usize_lossy(2 * m + 1).sqrt();
    let mut run = |kind: u8, prefactor: T| -> Result<T> {
        if prefactor == T::zero() {
            return Ok(T::zero());
        }
        shell_series(
            prefactor,
            tol,
            |m| {
                grow(&mut lf, 2 * m + 2);
                let guess = if a + b > T::zero() { (T::from_usize_lossy(m) * a / (a + b)).round().to_usize().unwrap_or(0) } else { 0 };
                sum_around_peak(0, m, guess, |si| {
                    let ti = m - si;
                    let lw = ln_pow(la, 2 * si) + ln_pow(lb, 2 * ti);
                    if !lw.is_finite() {
                        return (T::neg_infinity(), T::zero());
                    }
                    let base = lw - lf[2 * si] - lf[2 * ti];
                    let (fs, ft) = (T::from_usize_lossy(2 * si + 1), T::from_usize_lossy(2 * ti + 1));
                    let (l, w) = match kind {
                        1 => (base + lf[2 * m + 1], T::one() / (fs * ft).sqrt()),
                        2 => (base + lf[2 * m], (T::from_usize_lossy(2 * m + 1) / ft).sqrt()),
                        _ => (base + lf[2 * m], (T::from_usize_lossy(2 * m + 1) / fs).sqrt()),
                    };
                    (l + w.ln(), l.exp() * w)
                })
            },
            |m| tail_bound(rho2, m, |i| if kind == 1 { w_c1(i) } else { w_c2(i) }),
        )
    };
    let c1 = run(1, -two * (n2 * n3).sqrt() / (one + n1).powi(2))?;
    let c2 = run(2, two * n3.sqrt() / (one + n1).powf(T::lit(1.5)))?;
    let c3 = run(3, two * n2.sqrt() / (one + n1).powf(T::lit(1.5)))?;
    Ok(PsCoefficients { c1, c2, c3 })
}

/// `C₁C₂C₃ + c₁C₁S₂S₃cos(φ²−φ³) + c₂S₁C₂S₃cos(φ¹+φ³) + c₃S₁S₂C₃cos(φ¹+φ²)`.
pub fn e_ps3_angles<T: Real>(c: &PsCoefficients<T>, thetas: &[T], phis: &[T]) -> T {
    let (s1, c1) = thetas[0].sin_cos();
    let (s2, c2) = thetas[1].sin_cos();
    let (s3, c3) = thetas[2].sin_cos();
    c1 * c2 * c3
        + c.c1 * c1 * s2 * s3 * (phis[1] - phis[2]).cos()
        + c.c2 * s1 * c2 * s3 * (phis[0] + phis[2]).cos()
        + c.c3 * s1 * s2 * c3 * (phis[0] + phis[1]).cos()
}

/// Correlator at the unprimed settings.
pub fn e_ps3<T: Real>(c: &PsCoefficients<T>, settings: &PsSettings<T>) -> Result<T> {
    settings.validate()?;
    if settings.thetas.len() != 3 {
        return Err(invalid("three-mode settings required"));
    }
    Ok(e_ps3_angles(c, &settings.thetas, &settings.phis))
}

/// Bell-Klyshko combination for explicit settings.
pub fn b3_ps_at<T: Real>(c: &PsCoefficients<T>, settings: &PsSettings<T>) -> Result<T> {
    settings.validate()?;
    if settings.thetas.len() != 3 {
        return Err(invalid("three-mode settings required"));
    }
    let mut e = [T::zero(); 4];
    for (k, flags) in KLYSHKO_TERMS.iter().enumerate() {
        let (t, p) = settings.pick(flags);
        e[k] = e_ps3_angles(c, &t, &p);
    }
    Ok(klyshko(e))
}

/// Maximizes `|B₃|` over the six polar angles with the azimuths of
/// `representation`.
pub fn b3_ps_max<T: Real>(c: &PsCoefficients<T>, representation: Representation, tol: T) -> Result<BellValue<T>> {
    let phis = representation.preset_phis::<T>();
    let settings_for = |x: &[T]| PsSettings {
        thetas: x[..3].to_vec(),
        phis: phis.to_vec(),
        thetas_primed: x[3..].to_vec(),
        phis_primed: phis.to_vec(),
        representation,
    };
    let f = |x: &[T]| {
        let mut e = [T::zero(); 4];
        for (k, flags) in KLYSHKO_TERMS.iter().enumerate() {
            let t: Vec<T> = (0..3).map(|m| if flags[m] { x[3 + m] } else { x[m] }).collect();
            e[k] = e_ps3_angles(c, &t, &phis);
        }
        klyshko(e).abs()
    };
    let scan = maximize_angles(f, 6, ANGLE_GRID, tol)?;
    Ok(BellValue {
        value: scan.max_value,
        settings: Settings::Ps(settings_for(&scan.arg_max)),
    })
}

/// `B₃` of `|T⟩`: series coefficients for [`Representation::S`], the Π
/// coefficients at `N = 2(N₂+N₃)` for [`Representation::Pi`].
pub fn b3_ps<T: Real>(n2: T, n3: T, representation: Representation, tol: T) -> Result<BellValue<T>> {
    let c = match representation {
        Representation::S => coeffs_t_series(n2, n3, tol)?,
        Representation::Pi => coeffs_t_pi(T::lit(2.0) * (n2 + n3))?,
    };
    b3_ps_max(&c, representation, tol.max(T::lit(1e-10)))
}

/// Π-representation coefficients of `|T⟩` with `N₂ = N₃ = N/4`, signed so
/// that they enter the correlator with all azimuths zero:
/// `(−c₁′, c₂′, c₂′)`.
pub fn coeffs_t_pi<T: Real>(n: T) -> Result<PsCoefficients<T>> {
    if !(n >= T::zero()) || !n.is_finite() {
        return Err(invalid("photon number must be finite and nonnegative"));
    }
    let one = T::one();
    let two = T::lit(2.0);
    let pi = T::PI();
    let c1 = two * (n / (two * (one + n).sqrt())).atan() / (pi * (one + n));
    let c2 = two * n.sqrt().atan() / (pi * (one + n / two));
    Ok(PsCoefficients { c1: -c1, c2, c3: c2 })
}

/// Π-representation coefficient of the VLB state, equal for all three pairs.
pub fn coeffs_vlb_pi<T: Real>(r: T) -> Result<PsCoefficients<T>> {
    if !(r >= T::zero()) || !r.is_finite() {
        return Err(invalid("squeezing must be finite and nonnegative"));
    }
    let c = |x: f64| T::lit(x);
    let num = c(4.0) * r.cosh() * r.sinh() / (c(3.0) * (c(2.0) + (c(4.0) * r).exp())).sqrt();
    let v = -c(6.0) * num.atan() / (T::PI() * (c(5.0) + c(4.0) * (c(4.0) * r).cosh()).sqrt());
    Ok(PsCoefficients { c1: v, c2: v, c3: v })
}

/// `√(N(N+2))/(1+N)`.
pub fn f_twb<T: Real>(n: T) -> Result<T> {
    if !(n >= T::zero()) {
        return Err(invalid("photon number must be nonnegative"));
    }
    Ok((n * (n + T::lit(2.0))).sqrt() / (T::one() + n))
}

fn f_inputs<T: Real>(p: &ConditionalParams<T>) -> Result<(T, T, T)> {
    p.validate()?;
    let n1 = p.n1();
    Ok((n1, p.n2 / (T::one() + n1), p.n3 / (T::one() + n1)))
}

/// `f₁` of the conditional state:
/// `2√a (1+ηN₃)/(ηN₃(1+N₁)) Σ_{k,p} C(2k+p, p) a^{2k} b^p √((2k+p+1)/(2k+1)) (1−(1−η)^p)`
/// with `a = N₂/(1+N₁)`, `b = N₃/(1+N₁)`.
pub fn f_conditional<T: Real>(p: &ConditionalParams<T>, tol: T) -> Result<T> {
    let (n1, a, b) = f_inputs(p)?;
    if !(p.eta > T::zero() && p.n3 > T::zero()) {
        return Err(Error::UndefinedState("no click is possible".into()));
    }
    let one = T::one();
    let pre = T::lit(2.0) * a.sqrt() * (one + p.eta * p.n3) / (p.n3 * (one + n1) * p.eta);
    if pre == T::zero() {
        return Ok(T::zero());
    }
    let (la, lb, lq) = (a.ln(), b.ln(), (one - p.eta).ln());
    let mut lf: Vec<T> = ln_factorials(64);
    let rho = n1 / (one + n1);
    shell_series(
        pre,
        tol,
        |m| {
            if lf.len() <= m + 1 {
                lf = ln_factorials((m + 2).max(2 * lf.len()));
            }
            let guess = (T::from_usize_lossy(m) * a / (T::lit(2.0) * (a + b))).round().to_usize().unwrap_or(0);
            sum_around_peak(0, m / 2, guess, |k| {
                let q = m - 2 * k;
                let lw = ln_pow(la, 2 * k) + ln_pow(lb, q);
                if q == 0 || !lw.is_finite() {
                    return (T::neg_infinity(), T::zero());
                }
                let loss = one - ln_pow(lq, q).exp();
                let l = lf[m] - lf[2 * k] - lf[q] + lw;
                let w = (T::from_usize_lossy(m + 1) / T::from_usize_lossy(2 * k + 1)).sqrt() * loss;
                (l + w.ln(), l.exp() * w)
            })
        },
        |m| tail_bound(rho, m, |i| T::from_usize_lossy(i + 1).sqrt()),
    )
}

/// `f_Tr` of the state with mode 3 traced out:
/// `2√a/(1+N₁) Σ_{p,q} C(2p+2q, 2p) a^{2p} b^{2q} √((2p+2q+1)/(2p+1))`.
pub fn f_traced<T: Real>(p: &ConditionalParams<T>, tol: T) -> Result<T> {
    let (n1, a, b) = f_inputs(p)?;
    let one = T::one();
    let pre = T::lit(2.0) * a.sqrt() / (one + n1);
    if pre == T::zero() {
        return Ok(T::zero());
    }
    let (la, lb) = (a.ln(), b.ln());
    let mut lf: Vec<T> = ln_factorials(64);
    let rho2 = (n1 / (one + n1)).powi(2);
    shell_series(
        pre,
        tol,
        |m| {
            if lf.len() <= 2 * m + 1 {
                lf = ln_factorials((2 * m + 2).max(2 * lf.len()));
            }
            let guess = (T::from_usize_lossy(m) * a / (a + b)).round().to_usize().unwrap_or(0);
            sum_around_peak(0, m, guess, |pi| {
                let qi = m - pi;
                let lw = ln_pow(la, 2 * pi) + ln_pow(lb, 2 * qi);
                if !lw.is_finite() {
                    return (T::neg_infinity(), T::zero());
                }
                let l = lf[2 * m] - lf[2 * pi] - lf[2 * qi] + lw;
                let w = (T::from_usize_lossy(2 * m + 1) / T::from_usize_lossy(2 * pi + 1)).sqrt();
                (l + w.ln(), l.exp() * w)
            })
        },
        |m| tail_bound(rho2, m, |i| T::from_usize_lossy(2 * i + 1).sqrt()),
    )
}

/// Angles maximizing CHSH for `E(θ₁, θ₂) = cosθ₁cosθ₂ + f sinθ₁sinθ₂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChshAngles<T> {
    pub theta1: T,
    pub theta1_primed: T,
    pub theta2: T,
    pub theta2_primed: T,
}

pub fn e_ps2<T: Real>(f: T, theta1: T, theta2: T) -> T {
    theta1.cos() * theta2.cos() + f * theta1.sin() * theta2.sin()
}

/// `2√(1+f²)` with its maximizing angles.
pub fn b2_ps_from_f<T: Real>(f: T) -> Result<(BellValue<T>, ChshAngles<T>)> {
    if !(f >= T::zero() && f <= T::one()) {
        return Err(invalid("f must lie in [0, 1]"));
    }
    let t = f.atan();
    let angles = ChshAngles {
        theta1: T::zero(),
        theta1_primed: T::FRAC_PI_2(),
        theta2: t,
        theta2_primed: -t,
    };
    let value = T::lit(2.0) * (T::one() + f * f).sqrt();
    Ok((
        BellValue {
            value,
            settings: Settings::Angles(vec![angles.theta1, angles.theta1_primed, angles.theta2, angles.theta2_primed]),
        },
        angles,
    ))
}

/// CHSH combination of [`e_ps2`] at explicit angles `[θ₁, θ₁′, θ₂, θ₂′]`.
pub fn b2_ps_at<T: Real>(f: T, angles: [T; 4]) -> T {
    let mut e = [T::zero(); 4];
    for (k, flags) in CHSH_TERMS.iter().enumerate() {
        let t1 = if flags[0] { angles[1] } else { angles[0] };
        let t2 = if flags[1] { angles[3] } else { angles[2] };
        e[k] = e_ps2(f, t1, t2);
    }
    chsh(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_trivial_and_bounded() {
        let c = coeffs_t_series(0.0f64, 0.0, 1e-10).unwrap();
        assert_eq!(c.as_array(), [0.0; 3]);
        for (n2, n3) in [(0.3f64, 0.3), (2.0, 0.5), (10.0, 1e-3)] {
            let c = coeffs_t_series(n2, n3, 1e-10).unwrap();
            assert!(c.as_array().iter().all(|x| x.abs() <= 1.0));
        }
    }

    #[test]
    fn series_tol_stable() {
        let a = coeffs_t_series(3.0f64, 2.0, 1e-8).unwrap();
        let b = coeffs_t_series(3.0f64, 2.0, 5e-9).unwrap();
        for (x, y) in a.as_array().iter().zip(b.as_array()) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn correlator_basics() {
        let c = PsCoefficients::new(0.3f64, -0.2, 0.5);
        assert_eq!(e_ps3_angles(&c, &[0.0; 3], &[0.0; 3]), 1.0);
    }

    #[test]
    fn pi_coefficients() {
        assert_eq!(coeffs_t_pi(0.0f64).unwrap().as_array(), [0.0; 3]);
        assert!((coeffs_t_pi(1.0f64).unwrap().c2 - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(coeffs_vlb_pi(0.0f64).unwrap().c1, 0.0);
    }

    #[test]
    fn f_functions() {
        assert_eq!(f_twb(0.0f64).unwrap(), 0.0);
        assert!((f_twb(3.0f64).unwrap() - 15f64.sqrt() / 4.0).abs() < 1e-15);
        let p = ConditionalParams::new(0.0f64, 0.4, 0.0, 0.0, 0.8).unwrap();
        assert_eq!(f_conditional(&p, 1e-10).unwrap(), 0.0);
        assert_eq!(f_traced(&p, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn b2_from_f() {
        assert_eq!(b2_ps_from_f(0.0f64).unwrap().0.value, 2.0);
        assert!((b2_ps_from_f(1.0f64).unwrap().0.value - 8f64.sqrt()).abs() < 1e-15);
        let (v, a) = b2_ps_from_f(0.7f64).unwrap();
        let at = b2_ps_at(0.7, [a.theta1, a.theta1_primed, a.theta2, a.theta2_primed]);
        assert!((at - v.value).abs() < 1e-12);
        assert!(b2_ps_from_f(1.5f64).is_err());
    }
}
