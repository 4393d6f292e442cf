//! Forward-mode dual numbers in the four variables `(x₁, x₂, x₃, t)`.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value with its first partials `[∂₁, ∂₂, ∂₃, ∂ₜ]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub d: [f64; 4],
}

/// A point `(x₁, x₂, x₃, t)` seeded for differentiation.
pub type Point = [Dual; 4];

impl Dual {
    pub const fn constant(v: f64) -> Self {
        Self { v, d: [0.0; 4] }
    }

    /// The independent variable with index `k`.
    pub fn var(v: f64, k: usize) -> Self {
        let mut d = [0.0; 4];
        d[k] = 1.0;
        Self { v, d }
    }

    pub fn point(x1: f64, x2: f64, x3: f64, t: f64) -> Point {
        [Self::var(x1, 0), Self::var(x2, 1), Self::var(x3, 2), Self::var(t, 3)]
    }

    fn chain(self, f: f64, df: f64) -> Self {
        Self { v: f, d: self.d.map(|x| df * x) }
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s)
    }

    pub fn sinh(self) -> Self {
        self.chain(self.v.sinh(), self.v.cosh())
    }

    pub fn cosh(self) -> Self {
        self.chain(self.v.cosh(), self.v.sinh())
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e)
    }

    pub fn powf(self, p: f64) -> Self {
        self.chain(self.v.powf(p), p * self.v.powf(p - 1.0))
    }

    pub fn scale(self, c: f64) -> Self {
        Self { v: c * self.v, d: self.d.map(|x| c * x) }
    }
}

impl From<f64> for Dual {
    fn from(v: f64) -> Self {
        Self::constant(v)
    }
}

impl Add for Dual {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { v: self.v + o.v, d: std::array::from_fn(|k| self.d[k] + o.d[k]) }
    }
}

impl Sub for Dual {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { v: self.v - o.v, d: std::array::from_fn(|k| self.d[k] - o.d[k]) }
    }
}

impl Mul for Dual {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self { v: self.v * o.v, d: std::array::from_fn(|k| self.d[k] * o.v + self.v * o.d[k]) }
    }
}

impl Div for Dual {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = 1.0 / o.v;
        Self { v: self.v * inv, d: std::array::from_fn(|k| (self.d[k] - self.v * inv * o.d[k]) * inv) }
    }
}

impl Neg for Dual {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Add<f64> for Dual {
    type Output = Self;
    fn add(self, c: f64) -> Self {
        Self { v: self.v + c, d: self.d }
    }
}

impl Sub<f64> for Dual {
    type Output = Self;
    fn sub(self, c: f64) -> Self {
        Self { v: self.v - c, d: self.d }
    }
}

impl Mul<f64> for Dual {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        self.scale(c)
    }
}

impl Mul<Dual> for f64 {
    type Output = Dual;
    fn mul(self, x: Dual) -> Dual {
        x.scale(self)
    }
}

impl Add<Dual> for f64 {
    type Output = Dual;
    fn add(self, x: Dual) -> Dual {
        x + self
    }
}

impl Sub<Dual> for f64 {
    type Output = Dual;
    fn sub(self, x: Dual) -> Dual {
        -x + self
    }
}
