//! Scalar trait for the numerical routines.
//!
//! Implemented for `f32`, `f64` and [`twofloat::TwoFloat`] (double-double,
//! about 32 significant digits).

use std::fmt::{Debug, Display};

use num_traits::float::FloatCore;
use num_traits::{FromPrimitive, NumAssign};
use twofloat::TwoFloat;

pub trait Real:
    FloatCore + NumAssign + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    fn sqrt(self) -> Self;
    fn ln(self) -> Self;
    fn powf(self, e: Self) -> Self;

    /// Converts a finite `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite f64 literal")
    }

    #[inline]
    fn from_count(k: u32) -> Self {
        <Self as FromPrimitive>::from_u32(k).expect("small integer")
    }

    /// `self / d`; generic code divides through this.
    #[inline]
    fn quot(self, d: Self) -> Self {
        self / d
    }

    /// `1 / k`.
    #[inline]
    fn recip_count(k: u32) -> Self {
        Self::one().quot(Self::from_count(k))
    }

    /// Relative spacing of the format (`epsilon()` for IEEE types).
    #[inline]
    fn unit_roundoff() -> Self {
        Self::epsilon()
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `sqrt(a^2 + b^2)` without undue overflow.
    fn hypot(self, other: Self) -> Self {
        let a = self.abs();
        let b = other.abs();
        let (big, small) = if a > b { (a, b) } else { (b, a) };
        if big == Self::zero() {
            return Self::zero();
        }
        let t = small.quot(big);
        big * (Self::one() + t * t).sqrt()
    }

    /// `x^(-1/p)` for `x > 0`, with two Newton corrections on `y^p x = 1`.
    fn inv_root(self, p: u32) -> Self {
        let mut y = self.powf(-Self::recip_count(p));
        for _ in 0..2 {
            let mut yp = Self::one();
            for _ in 0..p {
                yp *= y;
            }
            y += y * (Self::one() - yp * self) * Self::recip_count(p);
        }
        y
    }
}

macro_rules! impl_real_for_primitive {
    ($($t:ty),*) => {$(
        impl Real for $t {
            #[inline]
            fn sqrt(self) -> Self {
                <$t>::sqrt(self)
            }
            #[inline]
            fn ln(self) -> Self {
                <$t>::ln(self)
            }
            #[inline]
            fn powf(self, e: Self) -> Self {
                <$t>::powf(self, e)
            }
        }
    )*};
}

impl_real_for_primitive!(f32, f64);

impl Real for TwoFloat {
    #[inline]
    fn sqrt(self) -> Self {
        TwoFloat::sqrt(self)
    }
    #[inline]
    fn ln(self) -> Self {
        TwoFloat::ln(self)
    }
    #[inline]
    fn powf(self, e: Self) -> Self {
        TwoFloat::powf(self, e)
    }
    // FromPrimitive for TwoFloat truncates floats through from_i64
    #[inline]
    fn lit(x: f64) -> Self {
        TwoFloat::from(x)
    }
    // TwoFloat / TwoFloat drops its correction term (no fused multiply-add),
    // so divide by the leading word and correct once
    #[inline]
    fn quot(self, d: Self) -> Self {
        let q = self / d.hi();
        q + (self - q * d) / d.hi()
    }
    // TwoFloat::EPSILON is the smallest positive value, not the spacing
    #[inline]
    fn unit_roundoff() -> Self {
        TwoFloat::from(f64::EPSILON * f64::EPSILON)
    }
}

/// Relative symmetry tolerance: `max(1e-12, 64 eps)`.
pub fn symmetry_tolerance<T: Real>() -> T {
    let floor = T::unit_roundoff() * T::lit(64.0);
    let tol = T::lit(1e-12);
    if floor > tol {
        floor
    } else {
        tol
    }
}
