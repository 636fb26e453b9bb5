//! Scalar abstraction shared by the matrix kernel and the jet engine.
//!
//! The same matrix code runs over plain `f64`, complex pairs [`Cx<f64>`],
//! real jets and complex jets. Contextful constructors (`zero_like`,
//! `one_like`, `from_f64`) exist because a jet cannot be built without
//! knowing its coefficient space.

use core::fmt::Debug;
use core::ops::{Add, Mul, Neg, Sub};

/// Ring-with-approximate-inverse scalar used by [`crate::matrix::Mat`].
pub trait Scalar:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Sized
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// Embed an `f64` using `self` as the shape prototype.
    #[allow(clippy::wrong_self_convention)]
    fn from_f64(&self, v: f64) -> Self;
    /// Multiply by a real constant.
    fn scale(&self, c: f64) -> Self;
    /// Multiplicative inverse; `None` when the (constant part of the)
    /// scalar vanishes exactly.
    fn try_inv(&self) -> Option<Self>;
    /// Magnitude of the value (for jets: of the constant part); drives
    /// pivot selection and singularity tests.
    fn mag(&self) -> f64;
    /// Complex conjugate; identity for real scalars.
    fn conj_s(&self) -> Self;
}

impl Scalar for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn one_like(&self) -> Self {
        1.0
    }
    fn from_f64(&self, v: f64) -> Self {
        v
    }
    fn scale(&self, c: f64) -> Self {
        self * c
    }
    fn try_inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn mag(&self) -> f64 {
        self.abs()
    }
    fn conj_s(&self) -> Self {
        *self
    }
}

/// Complex pair over any scalar.
#[derive(Clone, PartialEq)]
pub struct Cx<T> {
    pub re: T,
    pub im: T,
}

pub type C64 = Cx<f64>;

impl<T: Debug> Debug for Cx<T> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl<T: Scalar> Cx<T> {
    pub fn new(re: T, im: T) -> Self {
        Cx { re, im }
    }
    pub fn from_re(re: T) -> Self {
        let im = re.zero_like();
        Cx { re, im }
    }
    /// Multiply by i.
    pub fn mul_i(&self) -> Self {
        Cx {
            re: -self.im.clone(),
            im: self.re.clone(),
        }
    }
    pub fn conj(&self) -> Self {
        Cx {
            re: self.re.conj_s(),
            im: -self.im.conj_s(),
        }
    }
    /// Squared magnitude as the underlying scalar: re^2 + im^2.
    pub fn norm_sq(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }
}

impl C64 {
    pub const fn c(re: f64, im: f64) -> Self {
        Cx { re, im }
    }
    pub const ZERO: C64 = Cx { re: 0.0, im: 0.0 };
    pub const ONE: C64 = Cx { re: 1.0, im: 0.0 };
    pub const I: C64 = Cx { re: 0.0, im: 1.0 };

    pub fn abs(&self) -> f64 {
        libm::hypot(self.re, self.im)
    }
    /// Complex exponential.
    pub fn exp(&self) -> C64 {
        let r = libm::exp(self.re);
        Cx::c(r * libm::cos(self.im), r * libm::sin(self.im))
    }
    /// `base^self` for a positive real base.
    pub fn pow_base(&self, base: f64) -> C64 {
        debug_assert!(base > 0.0);
        let l = libm::log(base);
        Cx::c(self.re * l, self.im * l).exp()
    }
}

impl<T: Scalar> Add for Cx<T> {
    type Output = Cx<T>;
    fn add(self, rhs: Self) -> Self {
        Cx {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl<T: Scalar> Sub for Cx<T> {
    type Output = Cx<T>;
    fn sub(self, rhs: Self) -> Self {
        Cx {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl<T: Scalar> Mul for Cx<T> {
    type Output = Cx<T>;
    fn mul(self, rhs: Self) -> Self {
        Cx {
            re: self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone(),
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl<T: Scalar> Neg for Cx<T> {
    type Output = Cx<T>;
    fn neg(self) -> Self {
        Cx {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl<T: Scalar> Scalar for Cx<T> {
    fn zero_like(&self) -> Self {
        Cx {
            re: self.re.zero_like(),
            im: self.im.zero_like(),
        }
    }
    fn one_like(&self) -> Self {
        Cx {
            re: self.re.one_like(),
            im: self.im.zero_like(),
        }
    }
    fn from_f64(&self, v: f64) -> Self {
        Cx {
            re: self.re.from_f64(v),
            im: self.im.zero_like(),
        }
    }
    fn scale(&self, c: f64) -> Self {
        Cx {
            re: self.re.scale(c),
            im: self.im.scale(c),
        }
    }
    fn try_inv(&self) -> Option<Self> {
        // (re - i im) / (re^2 + im^2)
        let d = self.norm_sq();
        let di = d.try_inv()?;
        Some(Cx {
            re: self.re.clone() * di.clone(),
            im: -(self.im.clone() * di),
        })
    }
    fn mag(&self) -> f64 {
        libm::hypot(self.re.mag(), self.im.mag())
    }
    fn conj_s(&self) -> Self {
        self.conj()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_field_ops() {
        let a = C64::c(1.0, 2.0);
        let b = C64::c(-0.5, 0.25);
        let p = a.clone() * b.clone();
        assert!((p.re - (1.0 * -0.5 - 2.0 * 0.25)).abs() < 1e-15);
        assert!((p.im - (1.0 * 0.25 + 2.0 * -0.5)).abs() < 1e-15);
        let inv = a.try_inv().unwrap();
        let one = a * inv;
        assert!((one.re - 1.0).abs() < 1e-15 && one.im.abs() < 1e-15);
    }

    #[test]
    fn complex_exp_matches_euler() {
        let z = C64::c(0.0, core::f64::consts::PI / 2.0);
        let e = z.exp();
        assert!(e.re.abs() < 1e-15 && (e.im - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pow_base_real_exponent() {
        let s = C64::c(2.0, 0.0);
        let v = s.pow_base(3.0);
        assert!((v.re - 9.0).abs() < 1e-12 && v.im.abs() < 1e-14);
    }
}
