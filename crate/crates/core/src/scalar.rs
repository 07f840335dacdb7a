//! Scalar abstraction: the crate's math is generic over `f32`/`f64`
//! through [`Scalar`], and the differentiable kernels are additionally
//! generic over [`Value`] so the same forward/backward code runs on plain
//! floats and on [`Dual`] numbers. Running the gradient computation on
//! dual numbers is what turns it into an exact Hessian-vector product.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Serialization tag for the two supported float widths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dtype {
    F32,
    F64,
}

impl Dtype {
    pub fn byte(self) -> u8 {
        match self {
            Dtype::F32 => 0,
            Dtype::F64 => 1,
        }
    }

    pub fn from_byte(b: u8) -> Option<Self> {
        match b {
            0 => Some(Dtype::F32),
            1 => Some(Dtype::F64),
            _ => None,
        }
    }
}

/// Floating-point scalar: `f32` or `f64`.
pub trait Scalar:
    'static
    + Copy
    + Send
    + Sync
    + Debug
    + Display
    + Default
    + PartialOrd
    + num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + num_traits::NumAssign
{
    const DTYPE: Dtype;

    fn from_f64(v: f64) -> Self {
        <Self as num_traits::FromPrimitive>::from_f64(v).expect("finite f64 converts")
    }

    fn to_f64_lossy(self) -> f64 {
        <Self as num_traits::ToPrimitive>::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    const DTYPE: Dtype = Dtype::F32;
}

impl Scalar for f64 {
    const DTYPE: Dtype = Dtype::F64;
}

/// Arithmetic value flowing through the differentiable kernels: either a
/// plain [`Scalar`] or a [`Dual`] carrying a tangent. Branch decisions
/// (max picks, sign tests) always read the primal part so dual and plain
/// evaluation take identical paths.
pub trait Value:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    type Real: Scalar;

    fn constant(r: Self::Real) -> Self;
    fn primal(self) -> Self::Real;
    fn zero() -> Self;
    fn one() -> Self;
    fn exp(self) -> Self;
    fn ln_1p(self) -> Self;
    fn sqrt(self) -> Self;
}

macro_rules! impl_value_for_float {
    ($t:ty) => {
        impl Value for $t {
            type Real = $t;

            fn constant(r: $t) -> $t {
                r
            }

            fn primal(self) -> $t {
                self
            }

            fn zero() -> $t {
                0.0
            }

            fn one() -> $t {
                1.0
            }

            fn exp(self) -> $t {
                <$t>::exp(self)
            }

            fn ln_1p(self) -> $t {
                <$t>::ln_1p(self)
            }

            fn sqrt(self) -> $t {
                <$t>::sqrt(self)
            }
        }
    };
}

impl_value_for_float!(f32);
impl_value_for_float!(f64);

/// Forward-mode dual number: primal value plus tangent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual<F> {
    pub v: F,
    pub t: F,
}

impl<F: Scalar> Dual<F> {
    pub fn new(v: F, t: F) -> Self {
        Dual { v, t }
    }

    /// Lift a plain value with zero tangent.
    pub fn lift(v: F) -> Self {
        Dual { v, t: F::zero() }
    }
}

impl<F: Scalar> Add for Dual<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual::new(self.v + rhs.v, self.t + rhs.t)
    }
}

impl<F: Scalar> Sub for Dual<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual::new(self.v - rhs.v, self.t - rhs.t)
    }
}

impl<F: Scalar> Mul for Dual<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Dual::new(self.v * rhs.v, self.t * rhs.v + self.v * rhs.t)
    }
}

impl<F: Scalar> Div for Dual<F> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let inv = F::one() / rhs.v;
        Dual::new(self.v * inv, (self.t - self.v * inv * rhs.t) * inv)
    }
}

impl<F: Scalar> Neg for Dual<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.v, -self.t)
    }
}

impl<F: Scalar> Value for Dual<F> {
    type Real = F;

    fn constant(r: F) -> Self {
        Dual::lift(r)
    }

    fn primal(self) -> F {
        self.v
    }

    fn zero() -> Self {
        Dual::lift(F::zero())
    }

    fn one() -> Self {
        Dual::lift(F::one())
    }

    fn exp(self) -> Self {
        let e = self.v.exp();
        Dual::new(e, self.t * e)
    }

    fn ln_1p(self) -> Self {
        Dual::new(self.v.ln_1p(), self.t / (F::one() + self.v))
    }

    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        Dual::new(s, self.t / (Scalar::from_f64(2.0) * s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(f: impl Fn(f64) -> f64, x: f64) -> f64 {
        let h = 1e-6;
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn dual_matches_finite_differences_on_composites() {
        let g = |x: f64| ((x * x + 1.0).sqrt() * (0.3 * x).exp()).ln_1p();
        for &x in &[0.2_f64, 1.0, -0.7, 3.5] {
            let d = Dual::new(x, 1.0);
            let y = ((d * d + Dual::lift(1.0)).sqrt() * (Dual::lift(0.3) * d).exp()).ln_1p();
            assert!((y.v - g(x)).abs() < 1e-12);
            assert!((y.t - fd(g, x)).abs() < 1e-6, "x={x}: {} vs {}", y.t, fd(g, x));
        }
    }

    #[test]
    fn dual_division_rule() {
        let a = Dual::new(2.0_f64, 0.5);
        let b = Dual::new(4.0_f64, -1.0);
        let q = a / b;
        assert!((q.v - 0.5).abs() < 1e-15);
        // (a/b)' = (a'b - ab') / b^2
        let expect = (0.5 * 4.0 - 2.0 * (-1.0)) / 16.0;
        assert!((q.t - expect).abs() < 1e-15);
    }
}
