//! Truncated single-mode operators as dense complex matrices.

use crate::scalar::{Complex, Real};
use crate::special::{gauss_legendre_on, hermite_functions};

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    pub(crate) dim: usize,
    pub(crate) data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.dim + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        }
    }

    fn norm_inf(&self) -> T {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j].norm()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    /// Matrix exponential by scaling and squaring of a Taylor series.
    pub fn expm(&self) -> Self {
        let norm = self.norm_inf().as_f64();
        let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
        let scaled = self.scale(Complex::new(T::lit(0.5f64.powi(squarings)), T::zero()));
        let mut result = Self::identity(self.dim);
        let mut term = Self::identity(self.dim);
        for k in 1..=24 {
            term = term
                .mul(&scaled)
                .scale(Complex::new(T::one() / T::from_usize_lossy(k), T::zero()));
            result = result.add(&term);
        }
        for _ in 0..squarings {
            result = result.mul(&result);
        }
        result
    }
}

pub fn annihilation<T: Real>(cutoff: usize) -> CMatrix<T> {
    let mut a = CMatrix::zeros(cutoff);
    for n in 1..cutoff {
        a.set(n - 1, n, Complex::new(T::from_usize_lossy(n).sqrt(), T::zero()));
    }
    a
}

/// `D(α) = exp(α a† − α* a)` with the generator truncated before exponentiation.
pub fn displacement<T: Real>(alpha: Complex<T>, cutoff: usize) -> CMatrix<T> {
    let a = annihilation::<T>(cutoff);
    let gen = a.adjoint().scale(alpha).add(&a.scale(-alpha.conj()));
    gen.expm()
}

pub fn parity<T: Real>(cutoff: usize) -> CMatrix<T> {
    let mut p = CMatrix::zeros(cutoff);
    for n in 0..cutoff {
        let s = if n % 2 == 0 { T::one() } else { -T::one() };
        p.set(n, n, Complex::new(s, T::zero()));
    }
    p
}

/// `D(α) (−1)ⁿ D†(α)`.
pub fn displaced_parity<T: Real>(alpha: Complex<T>, cutoff: usize) -> CMatrix<T> {
    let d = displacement(alpha, cutoff);
    d.mul(&parity(cutoff)).mul(&d.adjoint())
}

/// `cos θ s_z + sin θ (e^{iφ} s₋ + e^{−iφ} s₊)` with `s_z` = odd minus even
/// projectors and `s₋ = Σ |2n⟩⟨2n+1|`.
pub fn pseudospin<T: Real>(theta: T, phi: T, cutoff: usize) -> CMatrix<T> {
    let mut m = CMatrix::zeros(cutoff);
    let (c, s) = (theta.cos(), theta.sin());
    let e = Complex::new(phi.cos(), phi.sin());
    for k in 0..cutoff / 2 {
        let (ev, od) = (2 * k, 2 * k + 1);
        m.set(od, od, Complex::new(c, T::zero()));
        m.set(ev, ev, Complex::new(-c, T::zero()));
        m.set(ev, od, e.scale(s));
        m.set(od, ev, e.conj().scale(s));
    }
    m
}

/// `∫ sgn(x) ψ_m(x) ψ_n(x) dx` by half-line Gauss–Legendre quadrature.
pub fn sign_overlaps<T: Real>(cutoff: usize, nodes: usize) -> Vec<Vec<T>> {
    let half = T::lit((2.0 * cutoff as f64 + 1.0).sqrt() + 12.0);
    let (x, w) = gauss_legendre_on(nodes, T::zero(), half);
    let mut s = vec![vec![T::zero(); cutoff]; cutoff];
    for (&xi, &wi) in x.iter().zip(&w) {
        let h = hermite_functions(cutoff, xi);
        for m in 0..cutoff {
            for n in (m + 1..cutoff).step_by(2) {
                let v = T::lit(2.0) * wi * h[m] * h[n];
                s[m][n] += v;
            }
        }
    }
    for m in 0..cutoff {
        for n in m + 1..cutoff {
            s[n][m] = s[m][n];
        }
    }
    s
}

/// `sgn(x_θ)` with `x_θ = (a e^{−iθ} + a† e^{iθ})/√2`, from precomputed overlaps.
pub fn sign_quadrature<T: Real>(theta: T, overlaps: &[Vec<T>]) -> CMatrix<T> {
    let n = overlaps.len();
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let ph = T::from_usize_lossy(i) * theta - T::from_usize_lossy(j) * theta;
            m.set(i, j, Complex::new(ph.cos(), ph.sin()).scale(overlaps[i][j]));
        }
    }
    m
}
