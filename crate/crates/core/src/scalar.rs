//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the solvers are generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn two_pi() -> Self {
        Self::TAU()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for `T::lit`.
#[inline]
pub(crate) fn lit<T: Real>(v: f64) -> T {
    T::lit(v)
}

/// `arccot` with range (0, π).
#[inline]
pub fn arccot<T: Real>(v: T) -> T {
    if v > T::zero() {
        v.recip().atan()
    } else if v < T::zero() {
        T::PI() + v.recip().atan()
    } else {
        T::FRAC_PI_2()
    }
}

/// Continuous lift of `atan(c·tan(θ))` for `c > 0`: agrees with `θ` at every
/// multiple of π and increases through the poles of `tan`.
pub fn lifted_atan_tan<T: Real>(c: T, theta: T) -> T {
    let tan = theta.tan();
    let branch = ((theta - tan.atan()) / T::PI()).round();
    (c * tan).atan() + T::PI() * branch
}

/// `cot(πx)`; `None` when `x` is an integer (or within `tol` of one).
pub fn cot_pi<T: Real>(x: T, tol: T) -> Option<T> {
    let frac = x - x.round();
    if frac.abs() <= tol {
        return None;
    }
    let arg = T::PI() * frac;
    Some(arg.cos() / arg.sin())
}

/// Sign with a dead zone: values with `|v| <= eps` map to zero.
#[inline]
pub(crate) fn sign_dead<T: Real>(v: T, eps: T) -> i8 {
    if v > eps {
        1
    } else if v < -eps {
        -1
    } else {
        0
    }
}

/// Cubic Hermite interpolation on `[t0, t1]` given values and slopes at the ends.
pub(crate) fn hermite<T: Real>(t0: T, y0: T, d0: T, t1: T, y1: T, d1: T, t: T) -> T {
    let h = t1 - t0;
    if h == T::zero() {
        return y0;
    }
    let s = (t - t0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let two = lit::<T>(2.0);
    let three = lit::<T>(3.0);
    let h00 = two * s3 - three * s2 + T::one();
    let h10 = s3 - two * s2 + s;
    let h01 = -two * s3 + three * s2;
    let h11 = s3 - s2;
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arccot_range() {
        assert!((arccot(0.0_f64) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!(arccot(1e300_f64) > 0.0);
        assert!(arccot(-1e300_f64) <= std::f64::consts::PI);
        assert!((arccot(-1.0_f64) - 0.75 * std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn cot_pi_rejects_integers() {
        assert!(cot_pi(1.0_f64, 1e-12).is_none());
        assert!(cot_pi(-3.0_f64, 1e-12).is_none());
        assert!(cot_pi(0.5_f64, 1e-12).unwrap().abs() < 1e-15);
        let c = cot_pi(1.25_f64, 1e-12).unwrap();
        assert!((c - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lifted_atan_is_continuous() {
        let mut prev = lifted_atan_tan(0.3_f64, -7.0);
        let mut th = -7.0;
        while th < 7.0 {
            th += 1e-3;
            let v = lifted_atan_tan(0.3, th);
            assert!(v > prev && v - prev < 0.02);
            prev = v;
        }
        let half = std::f64::consts::FRAC_PI_2;
        assert!((lifted_atan_tan(0.3, half) - half).abs() < 1e-12);
        assert!((lifted_atan_tan(0.3, -half) + half).abs() < 1e-12);
    }

    #[test]
    fn hermite_reproduces_cubics() {
        let f = |t: f64| 2.0 * t * t * t - t + 0.5;
        let df = |t: f64| 6.0 * t * t - 1.0;
        let v = hermite(0.2, f(0.2), df(0.2), 0.9, f(0.9), df(0.9), 0.47);
        assert!((v - f(0.47)).abs() < 1e-14);
    }
}
