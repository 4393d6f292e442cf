//! Value containers for interior and boundary fields.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// Which horizontal boundary a [`BoundaryField`] lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// Rigid bottom `x₃ = 0` (Γ₀).
    Bottom,
    /// Plate interface `x₃ = 1` (Γ₁).
    Top,
}

impl Side {
    pub fn label(self) -> &'static str {
        match self {
            Side::Bottom => "G0",
            Side::Top => "G1",
        }
    }
}

/// Scalar values on every interior node, stored plane by plane.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    pub data: Vec<f64>,
}

/// Three Cartesian components.
pub type VectorField = [ScalarField; 3];

/// Scalar values on the `n1 × n2` node torus of one boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryField {
    pub side: Side,
    pub data: Vec<f64>,
}

impl ScalarField {
    pub fn from_vec(data: Vec<f64>) -> Self {
        Self { data }
    }

    pub fn constant(len: usize, value: f64) -> Self {
        Self { data: vec![value; len] }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.len(), other.len(), "field length mismatch");
        Self { data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect() }
    }

    /// `self += c·x`
    pub fn axpy(&mut self, c: f64, x: &Self) {
        for (a, b) in self.data.iter_mut().zip(&x.data) {
            *a += c * b;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

impl BoundaryField {
    pub fn from_vec(side: Side, data: Vec<f64>) -> Self {
        Self { side, data }
    }

    pub fn constant(side: Side, len: usize, value: f64) -> Self {
        Self { side, data: vec![value; len] }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { side: self.side, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.len(), other.len(), "field length mismatch");
        Self {
            side: self.side,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn axpy(&mut self, c: f64, x: &Self) {
        for (a, b) in self.data.iter_mut().zip(&x.data) {
            *a += c * b;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

macro_rules! elementwise {
    ($ty:ty) => {
        impl Add for &$ty {
            type Output = $ty;
            fn add(self, rhs: Self) -> $ty {
                self.zip_map(rhs, |a, b| a + b)
            }
        }
        impl Sub for &$ty {
            type Output = $ty;
            fn sub(self, rhs: Self) -> $ty {
                self.zip_map(rhs, |a, b| a - b)
            }
        }
        impl Mul for &$ty {
            type Output = $ty;
            fn mul(self, rhs: Self) -> $ty {
                self.zip_map(rhs, |a, b| a * b)
            }
        }
        impl Mul<f64> for &$ty {
            type Output = $ty;
            fn mul(self, rhs: f64) -> $ty {
                self.map(|a| a * rhs)
            }
        }
        impl Add<f64> for &$ty {
            type Output = $ty;
            fn add(self, rhs: f64) -> $ty {
                self.map(|a| a + rhs)
            }
        }
        impl Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                self.map(|a| -a)
            }
        }
        impl AddAssign<&$ty> for $ty {
            fn add_assign(&mut self, rhs: &$ty) {
                self.axpy(1.0, rhs);
            }
        }
        impl SubAssign<&$ty> for $ty {
            fn sub_assign(&mut self, rhs: &$ty) {
                self.axpy(-1.0, rhs);
            }
        }
    };
}

elementwise!(ScalarField);
elementwise!(BoundaryField);
