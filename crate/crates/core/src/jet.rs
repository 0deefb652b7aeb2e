//! Second-order forward-mode differentiation.
//!
//! A [`Jet<N>`] carries a value together with its gradient and Hessian with
//! respect to `N` independent variables. Closed-form material fields, the
//! secular functions and the ray Hamiltonian are all written generically over
//! [`Real`] so the same code yields values, slopes and curvatures.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar arithmetic shared by `f64` and [`Jet`].
pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn cst(v: f64) -> Self;
    fn sqrt(self) -> Self;
    fn val(self) -> f64;
}

impl Real for f64 {
    #[inline]
    fn cst(v: f64) -> Self {
        v
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn val(self) -> f64 {
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<const N: usize> {
    pub v: f64,
    pub g: [f64; N],
    pub h: [[f64; N]; N],
}

impl<const N: usize> Jet<N> {
    pub fn constant(v: f64) -> Self {
        Self { v, g: [0.0; N], h: [[0.0; N]; N] }
    }

    /// The `i`-th independent variable at value `v`.
    pub fn var(v: f64, i: usize) -> Self {
        let mut j = Self::constant(v);
        j.g[i] = 1.0;
        j
    }

    /// Compose with a scalar function given its value and first two derivatives.
    #[inline]
    pub fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        let mut out = Self::constant(f0);
        for i in 0..N {
            out.g[i] = f1 * self.g[i];
            for j in 0..N {
                out.h[i][j] = f1 * self.h[i][j] + f2 * self.g[i] * self.g[j];
            }
        }
        out
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.v;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Self {
        self.chain(self.v.ln(), 1.0 / self.v, -1.0 / (self.v * self.v))
    }

    pub fn powi(self, n: i32) -> Self {
        let nf = n as f64;
        self.chain(
            self.v.powi(n),
            nf * self.v.powi(n - 1),
            nf * (nf - 1.0) * self.v.powi(n - 2),
        )
    }

    /// Re-index into a jet over `M` variables: variable `i` of `self` becomes
    /// variable `map[i]` of the result.
    pub fn embed<const M: usize>(self, map: [usize; N]) -> Jet<M> {
        let mut out = Jet::<M>::constant(self.v);
        for i in 0..N {
            out.g[map[i]] = self.g[i];
            for j in 0..N {
                out.h[map[i]][map[j]] = self.h[i][j];
            }
        }
        out
    }
}

impl<const N: usize> Real for Jet<N> {
    #[inline]
    fn cst(v: f64) -> Self {
        Self::constant(v)
    }
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }
    #[inline]
    fn val(self) -> f64 {
        self.v
    }
}

impl<const N: usize> Add for Jet<N> {
    type Output = Self;
    #[inline]
    fn add(mut self, o: Self) -> Self {
        self.v += o.v;
        for i in 0..N {
            self.g[i] += o.g[i];
            for j in 0..N {
                self.h[i][j] += o.h[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Sub for Jet<N> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<const N: usize> Neg for Jet<N> {
    type Output = Self;
    #[inline]
    fn neg(mut self) -> Self {
        self.v = -self.v;
        for i in 0..N {
            self.g[i] = -self.g[i];
            for j in 0..N {
                self.h[i][j] = -self.h[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Mul for Jet<N> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        let mut out = Self::constant(self.v * o.v);
        for i in 0..N {
            out.g[i] = self.g[i] * o.v + self.v * o.g[i];
            for j in 0..N {
                out.h[i][j] = self.h[i][j] * o.v
                    + self.v * o.h[i][j]
                    + self.g[i] * o.g[j]
                    + o.g[i] * self.g[j];
            }
        }
        out
    }
}

impl<const N: usize> Div for Jet<N> {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl<const N: usize> Add<f64> for Jet<N> {
    type Output = Self;
    #[inline]
    fn add(mut self, o: f64) -> Self {
        self.v += o;
        self
    }
}

impl<const N: usize> Sub<f64> for Jet<N> {
    type Output = Self;
    #[inline]
    fn sub(mut self, o: f64) -> Self {
        self.v -= o;
        self
    }
}

impl<const N: usize> Mul<f64> for Jet<N> {
    type Output = Self;
    #[inline]
    fn mul(mut self, o: f64) -> Self {
        self.v *= o;
        for i in 0..N {
            self.g[i] *= o;
            for j in 0..N {
                self.h[i][j] *= o;
            }
        }
        self
    }
}

impl<const N: usize> Div<f64> for Jet<N> {
    type Output = Self;
    #[inline]
    fn div(self, o: f64) -> Self {
        self * (1.0 / o)
    }
}

/// Derivatives of an implicitly defined root `s(x)` of `G(s, x) = 0`, given
/// `G` as a jet over `(s, x_1, ..., x_{N})` evaluated at the root.
pub fn implicit_root<const M: usize, const N: usize>(g: &Jet<M>, root: f64) -> Jet<N> {
    debug_assert_eq!(M, N + 1);
    let gs = g.g[0];
    let mut out = Jet::<N>::constant(root);
    for i in 0..N {
        out.g[i] = -g.g[i + 1] / gs;
    }
    for i in 0..N {
        for j in 0..N {
            let (si, sj) = (out.g[i], out.g[j]);
            out.h[i][j] = -(g.h[i + 1][j + 1]
                + g.h[i + 1][0] * sj
                + g.h[j + 1][0] * si
                + g.h[0][0] * si * sj)
                / gs;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f<T: Real>(x: T, y: T) -> T {
        (x * x * y + T::cst(1.0)).sqrt() / (y + 2.0)
    }

    #[test]
    fn matches_finite_differences() {
        let (x0, y0) = (0.7, 1.3);
        let j = f(Jet::<2>::var(x0, 0), Jet::<2>::var(y0, 1));
        let h = 1e-4;
        let fx = (f(x0 + h, y0) - f(x0 - h, y0)) / (2.0 * h);
        let fy = (f(x0, y0 + h) - f(x0, y0 - h)) / (2.0 * h);
        let fxy = (f(x0 + h, y0 + h) - f(x0 + h, y0 - h) - f(x0 - h, y0 + h) + f(x0 - h, y0 - h))
            / (4.0 * h * h);
        let fxx = (f(x0 + h, y0) - 2.0 * f(x0, y0) + f(x0 - h, y0)) / (h * h);
        assert!((j.v - f(x0, y0)).abs() < 1e-15);
        assert!((j.g[0] - fx).abs() < 1e-8);
        assert!((j.g[1] - fy).abs() < 1e-8);
        assert!((j.h[0][1] - fxy).abs() < 1e-6);
        assert!((j.h[1][0] - fxy).abs() < 1e-6);
        assert!((j.h[0][0] - fxx).abs() < 1e-6);
    }

    #[test]
    fn implicit_root_of_circle() {
        // s^2 + x^2 - 1 = 0  =>  s = sqrt(1 - x^2)
        let x0: f64 = 0.3;
        let s0 = (1.0 - x0 * x0).sqrt();
        let s = Jet::<2>::var(s0, 0);
        let x = Jet::<2>::var(x0, 1);
        let g = s * s + x * x - 1.0;
        let r: Jet<1> = implicit_root(&g, s0);
        assert!((r.g[0] + x0 / s0).abs() < 1e-14);
        let exact = -1.0 / s0 - x0 * x0 / (s0 * s0 * s0);
        assert!((r.h[0][0] - exact).abs() < 1e-13);
    }
}
