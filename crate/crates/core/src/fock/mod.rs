//! Brute-force truncated Fock-space oracle.
//!
//! Everything here is computed from amplitudes and truncated operators and
//! shares no formulas with the phase-space modules.

pub mod ops;
pub mod phase_space;

use crate::error::{invalid, Error, Result};
use crate::gaussian::TripartitePhotonNumbers;
use crate::scalar::{Complex, Real};
use crate::special::ln_factorials;

pub use ops::CMatrix;

/// Truncation budget for constructed states.
pub const TAIL_BUDGET: f64 = 1e-6;

const ORTHANT_NODES: usize = 400;

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Applies `op` along one axis of a tensor viewed as `(outer, dim, inner)`.
fn apply_axis<T: Real>(
    data: &[Complex<T>],
    outer: usize,
    dim: usize,
    inner: usize,
    op: &CMatrix<T>,
) -> Vec<Complex<T>> {
    let mut out = vec![czero(); data.len()];
    for o in 0..outer {
        let base = o * dim * inner;
        for i_out in 0..dim {
            let dst = base + i_out * inner;
            for i_in in 0..dim {
                let a = op.get(i_out, i_in);
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let src = base + i_in * inner;
                for k in 0..inner {
                    out[dst + k] = out[dst + k] + a * data[src + k];
                }
            }
        }
    }
    out
}

/// Amplitude tensor over `cutoff^n_modes` basis states, mode 0 most significant.
#[derive(Clone, Debug)]
pub struct FockPureState<T> {
    n_modes: usize,
    cutoff: usize,
    amps: Vec<Complex<T>>,
}

/// Density matrix over the truncated product basis.
#[derive(Clone, Debug)]
pub struct FockDensityOperator<T> {
    n_modes: usize,
    cutoff: usize,
    matrix: Vec<Complex<T>>,
}

/// Common interface for expectation values of local product operators.
pub trait FockState<T: Real> {
    fn n_modes(&self) -> usize;
    fn cutoff(&self) -> usize;
    /// `⟨⊗ⱼ opsⱼ⟩`.
    fn expect_product(&self, ops: &[CMatrix<T>]) -> Complex<T>;
}

impl<T: Real> FockPureState<T> {
    pub fn from_amplitudes(n_modes: usize, cutoff: usize, amps: Vec<Complex<T>>) -> Result<Self> {
        if n_modes == 0 || cutoff < 2 || amps.len() != cutoff.pow(n_modes as u32) {
            return Err(invalid("amplitude tensor does not match modes and cutoff"));
        }
        Ok(Self { n_modes, cutoff, amps })
    }

    pub fn vacuum(n_modes: usize, cutoff: usize) -> Self {
        let mut amps = vec![czero(); cutoff.pow(n_modes as u32)];
        amps[0] = Complex::new(T::one(), T::zero());
        Self { n_modes, cutoff, amps }
    }

    pub fn amps(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn amplitude(&self, occupation: &[usize]) -> Complex<T> {
        self.amps[self.index(occupation)]
    }

    fn index(&self, occupation: &[usize]) -> usize {
        occupation.iter().fold(0, |acc, &n| acc * self.cutoff + n)
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn to_density(&self) -> FockDensityOperator<T> {
        let d = self.amps.len();
        let mut matrix = vec![czero(); d * d];
        for i in 0..d {
            if self.amps[i].norm_sqr() == T::zero() {
                continue;
            }
            for j in 0..d {
                matrix[i * d + j] = self.amps[i] * self.amps[j].conj();
            }
        }
        FockDensityOperator {
            n_modes: self.n_modes,
            cutoff: self.cutoff,
            matrix,
        }
    }
}

impl<T: Real> FockState<T> for FockPureState<T> {
    fn n_modes(&self) -> usize {
        self.n_modes
    }
    fn cutoff(&self) -> usize {
        self.cutoff
    }
    fn expect_product(&self, ops: &[CMatrix<T>]) -> Complex<T> {
        let mut phi = self.amps.clone();
        let c = self.cutoff;
        for (mode, op) in ops.iter().enumerate() {
            let outer = c.pow(mode as u32);
            let inner = c.pow((self.n_modes - mode - 1) as u32);
            phi = apply_axis(&phi, outer, c, inner, op);
        }
        self.amps.iter().zip(&phi).map(|(a, b)| a.conj() * b).fold(czero(), |s, x| s + x)
    }
}

impl<T: Real> FockDensityOperator<T> {
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        self.cutoff.pow(self.n_modes as u32)
    }

    pub fn element(&self, i: usize, j: usize) -> Complex<T> {
        self.matrix[i * self.dim() + j]
    }

    pub fn trace(&self) -> Complex<T> {
        let d = self.dim();
        (0..d).map(|i| self.matrix[i * d + i]).fold(czero(), |s, x| s + x)
    }

    pub fn max_hermiticity_defect(&self) -> T {
        let d = self.dim();
        let mut worst = T::zero();
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.matrix[i * d + j] - self.matrix[j * d + i].conj()).norm());
            }
        }
        worst
    }

    /// `⟨v|ρ|v⟩`, used to probe positivity.
    pub fn quadratic_form(&self, v: &[Complex<T>]) -> Complex<T> {
        let d = self.dim();
        let mut acc = czero();
        for i in 0..d {
            let mut row = czero();
            for j in 0..d {
                row = row + self.matrix[i * d + j] * v[j];
            }
            acc = acc + v[i].conj() * row;
        }
        acc
    }
}

impl<T: Real> FockState<T> for FockDensityOperator<T> {
    fn n_modes(&self) -> usize {
        self.n_modes
    }
    fn cutoff(&self) -> usize {
        self.cutoff
    }
    fn expect_product(&self, ops: &[CMatrix<T>]) -> Complex<T> {
        let c = self.cutoff;
        let d = self.dim();
        let mut m = self.matrix.clone();
        for (mode, op) in ops.iter().enumerate() {
            let outer = c.pow(mode as u32);
            let inner = c.pow((self.n_modes - mode - 1) as u32) * d;
            m = apply_axis(&m, outer, c, inner, op);
        }
        (0..d).map(|i| m[i * d + i]).fold(czero(), |s, x| s + x)
    }
}

fn suggest_cutoff(ratio: f64) -> usize {
    (TAIL_BUDGET.ln() / ratio.ln()).ceil().max(2.0) as usize
}

/// `|T⟩` truncated at `cutoff` photons per mode.
pub fn build_t<T: Real>(p: &TripartitePhotonNumbers<T>, cutoff: usize) -> Result<FockPureState<T>> {
    p.validate()?;
    if cutoff < 2 {
        return Err(invalid("cutoff must be at least 2"));
    }
    let n1 = p.n1();
    let one = T::one();
    let lf = ln_factorials::<T>(cutoff + 1);
    let mut st = FockPureState {
        n_modes: 3,
        cutoff,
        amps: vec![czero(); cutoff.pow(3)],
    };
    let la = (p.n2 / (one + n1)).ln();
    let lb = (p.n3 / (one + n1)).ln();
    let base = -(one + n1).ln() / T::lit(2.0);
    for m in 0..cutoff {
        for q in 0..=m {
            let pp = m - q;
            let mut ln = base + (lf[m] - lf[pp] - lf[q]) / T::lit(2.0);
            if pp > 0 {
                ln += T::from_usize_lossy(pp) * la / T::lit(2.0);
            }
            if q > 0 {
                ln += T::from_usize_lossy(q) * lb / T::lit(2.0);
            }
            if !ln.is_finite() {
                continue;
            }
            let ph = -(T::from_usize_lossy(pp) * p.phi2 + T::from_usize_lossy(q) * p.phi3);
            let idx = st.index(&[m, pp, q]);
            st.amps[idx] = Complex::new(ph.cos(), ph.sin()).scale(ln.exp());
        }
    }
    let ratio = (n1 / (one + n1)).as_f64();
    let tail = ratio.powi(cutoff as i32);
    if tail > TAIL_BUDGET {
        return Err(Error::CutoffTooSmall {
            cutoff,
            suggested: suggest_cutoff(ratio),
            tail,
        });
    }
    Ok(st)
}

/// Twin beam `√(1−x²) Σ xⁿ |n,n⟩`.
pub fn build_twb<T: Real>(x: T, cutoff: usize) -> Result<FockPureState<T>> {
    if !(x >= T::zero() && x < T::one()) {
        return Err(invalid("x must lie in [0, 1)"));
    }
    if cutoff < 2 {
        return Err(invalid("cutoff must be at least 2"));
    }
    let ratio = (x * x).as_f64();
    let tail = ratio.powi(cutoff as i32);
    if tail > TAIL_BUDGET {
        return Err(Error::CutoffTooSmall {
            cutoff,
            suggested: suggest_cutoff(ratio),
            tail,
        });
    }
    let mut st = FockPureState {
        n_modes: 2,
        cutoff,
        amps: vec![czero(); cutoff * cutoff],
    };
    let pre = (T::one() - x * x).sqrt();
    for n in 0..cutoff {
        st.amps[n * cutoff + n] = Complex::new(pre * x.powi(n as i32), T::zero());
    }
    Ok(st)
}

fn check_modes<T: Real>(state: &impl FockState<T>, k: usize) -> Result<()> {
    if state.n_modes() != k {
        return Err(invalid(format!("expected {} settings, state has {} modes", k, state.n_modes())));
    }
    Ok(())
}

/// `⟨⊗ⱼ D(αⱼ)(−1)^{nⱼ} D†(αⱼ)⟩`.
pub fn displaced_parity_expect<T: Real>(state: &impl FockState<T>, alphas: &[Complex<T>]) -> Result<T> {
    check_modes(state, alphas.len())?;
    let c = state.cutoff();
    let limit = T::from_usize_lossy(c) / T::lit(10.0);
    if let Some(a) = alphas.iter().find(|a| a.norm_sqr() > limit) {
        return Err(Error::Precision(format!(
            "|alpha|^2 = {:.3e} exceeds cutoff/10 = {:.3e}",
            a.norm_sqr().as_f64(),
            limit.as_f64()
        )));
    }
    let ops: Vec<CMatrix<T>> = alphas.iter().map(|&a| ops::displaced_parity(a, c)).collect();
    Ok(state.expect_product(&ops).re)
}

/// Wigner function in quadrature units from `W(v) = π⁻ⁿ ⟨Π(α)⟩`,
/// `α = (x + i y)/√2`.
pub fn parity_wigner<T: Real>(state: &impl FockState<T>, point: &[T]) -> Result<T> {
    let n = state.n_modes();
    if point.len() != 2 * n {
        return Err(invalid(format!("point must have length {}", 2 * n)));
    }
    let s = T::lit(2.0).sqrt();
    let alphas: Vec<Complex<T>> = (0..n).map(|k| Complex::new(point[k] / s, point[n + k] / s)).collect();
    Ok(displaced_parity_expect(state, &alphas)? / T::PI().powi(n as i32))
}

/// Unit vector `(θ, φ)` for one party of a pseudospin correlator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinAxis<T> {
    pub theta: T,
    pub phi: T,
}

/// `⟨⊗ⱼ dʲ·sʲ⟩` with the pseudospin operators built on the truncated space.
pub fn pseudospin_expect<T: Real>(state: &impl FockState<T>, axes: &[SpinAxis<T>]) -> Result<T> {
    check_modes(state, axes.len())?;
    let c = state.cutoff();
    if c % 2 != 0 {
        return Err(invalid("pseudospin operators need an even cutoff"));
    }
    let ops: Vec<CMatrix<T>> = axes.iter().map(|a| ops::pseudospin(a.theta, a.phi, c)).collect();
    Ok(state.expect_product(&ops).re)
}

/// Outcome of an ON/OFF measurement conditioned on a click.
#[derive(Clone, Debug)]
pub struct Conditioned<T> {
    pub probability: T,
    /// `None` when the click probability vanishes.
    pub state: Option<FockDensityOperator<T>>,
}

/// Traces `mode` out of a pure state with per-photon-number weights.
fn weighted_trace<T: Real>(state: &FockPureState<T>, mode: usize, weights: &[T]) -> FockDensityOperator<T> {
    let c = state.cutoff;
    let n = state.n_modes;
    let outer = c.pow(mode as u32);
    let inner = c.pow((n - mode - 1) as u32);
    let d = outer * inner;
    let mut matrix = vec![czero(); d * d];
    let mut slice = vec![czero(); d];
    for (q, &w) in weights.iter().enumerate() {
        if w == T::zero() {
            continue;
        }
        let mut any = false;
        for o in 0..outer {
            for k in 0..inner {
                let a = state.amps[(o * c + q) * inner + k];
                any |= a.norm_sqr() > T::zero();
                slice[o * inner + k] = a;
            }
        }
        if !any {
            continue;
        }
        for i in 0..d {
            if slice[i].norm_sqr() == T::zero() {
                continue;
            }
            let si = slice[i].scale(w);
            for j in 0..d {
                matrix[i * d + j] = matrix[i * d + j] + si * slice[j].conj();
            }
        }
    }
    FockDensityOperator {
        n_modes: n - 1,
        cutoff: c,
        matrix,
    }
}

pub fn partial_trace<T: Real>(state: &FockPureState<T>, mode: usize) -> Result<FockDensityOperator<T>> {
    if state.n_modes < 2 || mode >= state.n_modes {
        return Err(invalid("partial trace needs a valid mode of a multimode state"));
    }
    let mut rho = weighted_trace(state, mode, &vec![T::one(); state.cutoff]);
    let tr = rho.trace().re;
    rho.matrix.iter_mut().for_each(|x| *x = x.unscale(tr));
    Ok(rho)
}

/// Applies `Π₁ = I − Σₙ (1−η)ⁿ |n⟩⟨n|` on `mode`, traces it out and renormalizes.
pub fn onoff_condition<T: Real>(state: &FockPureState<T>, mode: usize, eta: T) -> Result<Conditioned<T>> {
    if !(eta >= T::zero() && eta <= T::one()) {
        return Err(invalid("efficiency must lie in [0, 1]"));
    }
    if state.n_modes < 2 || mode >= state.n_modes {
        return Err(invalid("conditioning needs a valid mode of a multimode state"));
    }
    let weights: Vec<T> = (0..state.cutoff)
        .map(|q| T::one() - (T::one() - eta).powi(q as i32))
        .collect();
    let mut rho = weighted_trace(state, mode, &weights);
    let prob = rho.trace().re / state.norm_sqr();
    if !(prob > T::zero()) {
        return Ok(Conditioned {
            probability: T::zero(),
            state: None,
        });
    }
    let tr = rho.trace().re;
    rho.matrix.iter_mut().for_each(|x| *x = x.unscale(tr));
    Ok(Conditioned {
        probability: prob,
        state: Some(rho),
    })
}

/// Orthant probabilities `[P₊₊, P₊₋, P₋₊, P₋₋]` of the quadratures `x_θ` (mode 0)
/// and `x_φ` (mode 1).
pub fn quadrature_orthant_probabilities<T: Real>(state: &impl FockState<T>, theta: T, phi: T) -> Result<[T; 4]> {
    check_modes(state, 2)?;
    let c = state.cutoff();
    let overlaps = ops::sign_overlaps::<T>(c, ORTHANT_NODES);
    let check = ops::sign_overlaps::<T>(c, 2 * ORTHANT_NODES);
    let drift = overlaps
        .iter()
        .zip(&check)
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (*x - *y).abs()))
        .fold(T::zero(), T::max);
    if drift > T::lit(1e-9) {
        return Err(Error::Precision(format!("orthant quadrature unconverged ({:.2e})", drift.as_f64())));
    }
    let s1 = ops::sign_quadrature(theta, &overlaps);
    let s2 = ops::sign_quadrature(phi, &overlaps);
    let id = CMatrix::identity(c);
    let one = state.expect_product(&[id.clone(), id.clone()]).re;
    let e1 = state.expect_product(&[s1.clone(), id.clone()]).re;
    let e2 = state.expect_product(&[id, s2.clone()]).re;
    let e12 = state.expect_product(&[s1, s2]).re;
    let q = T::lit(4.0);
    Ok([
        (one + e1 + e2 + e12) / q,
        (one + e1 - e2 - e12) / q,
        (one - e1 + e2 - e12) / q,
        (one - e1 - e2 + e12) / q,
    ])
}

/// `E_H = P₊₊ + P₋₋ − P₊₋ − P₋₊`.
pub fn quadrature_orthant_expect<T: Real>(state: &impl FockState<T>, theta: T, phi: T) -> Result<T> {
    let p = quadrature_orthant_probabilities(state, theta, phi)?;
    Ok(p[0] + p[3] - p[1] - p[2])
}
