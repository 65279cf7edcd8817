//! Elliptic integral of the first kind, Jacobi elliptic functions, and the two
//! Legendre-normal-form reductions of the first-integral quadrature.
//!
//! Everything uses the parameter convention `m = k²`.
//!
//! The incomplete integral uses descending Landen / AGM iteration:
//! `a_{n+1} = (a_n + b_n)/2`, `b_{n+1} = √(a_n b_n)`,
//! `φ_{n+1} = φ_n + atan((b_n/a_n) tan φ_n)` (lifted continuously), and
//! `F(φ, k) = φ_N / (2^N a_N)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lifted_atan_tan, lit, Real};

const MAX_AGM_ITER: usize = 40;

fn check_modulus<T: Real>(k_squared: T, allow_one: bool) -> Result<()> {
    let ok =
        k_squared >= T::zero() && (k_squared < T::one() || (allow_one && k_squared == T::one()));
    if ok {
        Ok(())
    } else {
        Err(Error::ModulusOutOfRange(k_squared.as_f64()))
    }
}

fn agm_converged<T: Real>(a: T, b: T) -> bool {
    (a - b).abs() <= lit::<T>(1e-15).max(T::epsilon()) * a
}

/// Complete elliptic integral `K(k) = π / (2·AGM(1, √(1−k²)))`.
pub fn complete_k<T: Real>(k_squared: T) -> Result<T> {
    check_modulus(k_squared, false)?;
    let mut a = T::one();
    let mut b = (T::one() - k_squared).sqrt();
    for _ in 0..MAX_AGM_ITER {
        if agm_converged(a, b) {
            break;
        }
        let an = (a + b) * lit(0.5);
        b = (a * b).sqrt();
        a = an;
    }
    Ok(T::PI() / (a + a))
}

/// Incomplete elliptic integral of the first kind
/// `F(φ, k) = ∫₀^φ dθ / √(1 − k² sin²θ)`, valid for any real `φ`.
pub fn elliptic_f<T: Real>(phi: T, k_squared: T) -> Result<T> {
    check_modulus(k_squared, false)?;
    if k_squared == T::zero() {
        return Ok(phi);
    }
    // Reduce to |φ| <= π/2 using F(φ + jπ) = F(φ) + 2jK.
    let j = (phi / T::PI()).round();
    let rem = phi - j * T::PI();
    let base = landen_f(rem, k_squared);
    if j == T::zero() {
        Ok(base)
    } else {
        Ok(base + (j + j) * complete_k(k_squared)?)
    }
}

fn landen_f<T: Real>(phi: T, k_squared: T) -> T {
    let mut a = T::one();
    let mut b = (T::one() - k_squared).sqrt();
    let mut angle = phi;
    let mut scale = T::one();
    for _ in 0..MAX_AGM_ITER {
        if agm_converged(a, b) {
            break;
        }
        angle = angle + lifted_atan_tan(b / a, angle);
        let an = (a + b) * lit(0.5);
        b = (a * b).sqrt();
        a = an;
        scale = scale + scale;
    }
    angle / (scale * a)
}

/// Jacobi elliptic functions `(sn, cn, dn)` of `u` with parameter `k²`.
///
/// `k² = 0` gives `(sin, cos, 1)`, `k² = 1` gives `(tanh, sech, sech)`.
pub fn jacobi<T: Real>(u: T, k_squared: T) -> Result<(T, T, T)> {
    check_modulus(k_squared, true)?;
    if k_squared == T::zero() {
        return Ok((u.sin(), u.cos(), T::one()));
    }
    if k_squared == T::one() {
        let sech = T::one() / u.cosh();
        return Ok((u.tanh(), sech, sech));
    }
    // Descending AGM sequence, then backward recurrence for the amplitude.
    let mut a = vec![T::one()];
    let mut c = vec![k_squared.sqrt()];
    let mut b = (T::one() - k_squared).sqrt();
    for _ in 0..MAX_AGM_ITER {
        let an = *a.last().expect("non-empty");
        if (c.last().copied().expect("non-empty")).abs() <= T::epsilon() * an {
            break;
        }
        let next_a = (an + b) * lit(0.5);
        let next_c = (an - b) * lit(0.5);
        b = (an * b).sqrt();
        a.push(next_a);
        c.push(next_c);
    }
    let n = a.len() - 1;
    let mut phi = u * a[n] * T::from_usize(1usize << n).expect("power of two");
    for i in (1..=n).rev() {
        phi = (phi + (c[i] / a[i] * phi.sin()).asin()) * lit(0.5);
    }
    let sn = phi.sin();
    let cn = phi.cos();
    let dn = (T::one() - k_squared * sn * sn).sqrt();
    Ok((sn, cn, dn))
}

pub fn jacobi_sn<T: Real>(u: T, k_squared: T) -> Result<T> {
    Ok(jacobi(u, k_squared)?.0)
}

pub fn jacobi_cn<T: Real>(u: T, k_squared: T) -> Result<T> {
    Ok(jacobi(u, k_squared)?.1)
}

pub fn jacobi_dn<T: Real>(u: T, k_squared: T) -> Result<T> {
    Ok(jacobi(u, k_squared)?.2)
}

/// Legendre normal form of `∫ dy / √(𝒞(y²+1)² − 4π²c0(y²+1) + 4π²)`.
///
/// With `y² = w` and `w = S·tan²(φ/2)`:
/// `∫₀^Y dy/√Q(y) = prefactor · F(φ(Y), k)`, `φ(Y) = 2·atan(Y/√S)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticReduction<T> {
    pub k_squared: T,
    pub prefactor: T,
    /// `S = √(1 + 4π²/𝒞 − 4π²c0/𝒞)`.
    pub subst_const: T,
    /// `𝒞` (or `A²` when `c0 = 0`).
    pub constant: T,
    pub c0: T,
}

impl<T: Real> EllipticReduction<T> {
    /// Normal-form angle for the upper limit `y` (odd in `y`).
    pub fn angle(&self, y: T) -> T {
        lit::<T>(2.0) * (y / self.subst_const.sqrt()).atan()
    }

    /// `∫₀^y ds / √Q(s)` through the normal form.
    pub fn integral_to(&self, y: T) -> Result<T> {
        Ok(self.prefactor * elliptic_f(self.angle(y), self.k_squared)?)
    }

    /// `∫_{−∞}^{∞} dy / √Q(y) = 4·prefactor·K(k)`.
    pub fn full_traversal(&self) -> Result<T> {
        Ok(lit::<T>(4.0) * self.prefactor * complete_k(self.k_squared)?)
    }

    /// The quartic `Q(y)` under the square root.
    pub fn quartic(&self, y: T) -> T {
        quartic(self.constant, self.c0, y)
    }
}

/// `Q(y) = 𝒞(y²+1)² − 4π²c0(y²+1) + 4π²`.
#[inline]
pub fn quartic<T: Real>(constant: T, c0: T, y: T) -> T {
    let w = y * y + T::one();
    let four_pi2 = lit::<T>(4.0) * T::PI() * T::PI();
    constant * w * w - four_pi2 * c0 * w + four_pi2
}

/// Reduction for zero current, `(y')² = A²(y²+1)² + 4π²`.
pub fn legendre_reduce_zero_current<T: Real>(a_squared: T) -> Result<EllipticReduction<T>> {
    if !(a_squared > T::zero()) {
        return Err(Error::DegenerateConstant);
    }
    let four_pi2 = lit::<T>(4.0) * T::PI() * T::PI();
    let s = (T::one() + four_pi2 / a_squared).sqrt();
    let k_squared = lit::<T>(0.5) * (T::one() - T::one() / s);
    let prefactor = T::one() / (lit::<T>(2.0) * a_squared.sqrt() * s.sqrt());
    Ok(EllipticReduction {
        k_squared,
        prefactor,
        subst_const: s,
        constant: a_squared,
        c0: T::zero(),
    })
}

/// Reduction for a general current, requiring `𝒞 > π²c0²`.
pub fn legendre_reduce_general<T: Real>(constant: T, c0: T) -> Result<EllipticReduction<T>> {
    let pi2 = T::PI() * T::PI();
    let bound = pi2 * c0 * c0;
    if !(constant > bound) {
        return Err(Error::ConditionViolated {
            c: constant.as_f64(),
            bound: bound.as_f64(),
        });
    }
    let four_pi2 = lit::<T>(4.0) * pi2;
    let s = (T::one() + four_pi2 / constant - four_pi2 * c0 / constant).sqrt();
    let k_squared =
        lit::<T>(0.5) * (T::one() - (constant - lit::<T>(2.0) * pi2 * c0) / (constant * s));
    let prefactor = T::one() / (lit::<T>(2.0) * constant.sqrt() * s.sqrt());
    Ok(EllipticReduction {
        k_squared,
        prefactor,
        subst_const: s,
        constant,
        c0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, QuadOptions};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn quad_f(phi: f64, m: f64) -> f64 {
        let opts = QuadOptions {
            rel_tol: 1e-14,
            abs_tol: 1e-15,
            max_depth: 50,
        };
        integrate(
            |t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(),
            0.0,
            phi,
            opts,
        )
        .unwrap()
    }

    #[test]
    fn f_degenerate_modulus() {
        assert!((elliptic_f(FRAC_PI_2, 0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        for phi in [0.3_f64, 1.0] {
            assert!((elliptic_f(phi, 0.0).unwrap() - phi).abs() < 1e-15);
        }
    }

    #[test]
    fn f_matches_quadrature() {
        let v = elliptic_f(PI / 3.0, 0.25).unwrap();
        assert!((v - quad_f(PI / 3.0, 0.25)).abs() < 1e-12);
        for &(phi, m) in &[(1.4, 0.9), (2.9, 0.5), (-0.7, 0.99), (7.5, 0.3)] {
            let q = quad_f(phi, m);
            assert!(
                ((elliptic_f(phi, m).unwrap() - q) / q).abs() < 1e-12,
                "{phi} {m}"
            );
        }
    }

    #[test]
    fn f_odd_and_quasi_periodic() {
        let m = 0.62_f64;
        let k = complete_k(m).unwrap();
        for phi in [0.2, 1.3, 2.4] {
            let f = elliptic_f(phi, m).unwrap();
            assert!((elliptic_f(-phi, m).unwrap() + f).abs() < 1e-14);
            assert!((elliptic_f(phi + PI, m).unwrap() - f - 2.0 * k).abs() < 1e-12);
        }
        assert!((elliptic_f(FRAC_PI_2, m).unwrap() - k).abs() < 1e-13);
    }

    #[test]
    fn modulus_range() {
        assert!(matches!(
            elliptic_f(0.3, 1.0),
            Err(Error::ModulusOutOfRange(_))
        ));
        assert!(matches!(
            elliptic_f(0.3, -0.1),
            Err(Error::ModulusOutOfRange(_))
        ));
        assert!(jacobi(0.3, 1.0).is_ok());
        assert!(jacobi(0.3, 1.01).is_err());
    }

    #[test]
    fn sn_special_values() {
        for u in [0.5_f64, 2.0] {
            assert!((jacobi_sn(u, 0.0).unwrap() - u.sin()).abs() < 1e-15);
        }
        assert!((jacobi_sn(1.0, 1.0).unwrap() - 1.0_f64.tanh()).abs() < 1e-15);
        let k = complete_k(0.3_f64).unwrap();
        assert!((jacobi_sn(k, 0.3).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sn_inverts_f() {
        for &(phi, m) in &[(0.4_f64, 0.2_f64), (1.2, 0.8), (-1.0, 0.95)] {
            let u = elliptic_f(phi, m).unwrap();
            assert!((jacobi_sn(u, m).unwrap() - phi.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn sn_period() {
        let m = 0.45_f64;
        let k = complete_k(m).unwrap();
        for u in [0.1, 0.9, 2.5] {
            let a = jacobi_sn(u, m).unwrap();
            assert!((jacobi_sn(u + 4.0 * k, m).unwrap() - a).abs() < 1e-11);
            assert!((jacobi_sn(u + 2.0 * k, m).unwrap() + a).abs() < 1e-11);
        }
    }

    #[test]
    fn zero_current_reduction_examples() {
        let r = legendre_reduce_zero_current(4.0 * PI * PI / 3.0).unwrap();
        assert!((r.subst_const - 2.0).abs() < 1e-14);
        assert!((r.k_squared - 0.25).abs() < 1e-15);
        let r = legendre_reduce_zero_current(4.0 * PI * PI).unwrap();
        assert!((r.k_squared - 0.5 * (1.0 - 1.0 / 2.0_f64.sqrt())).abs() < 1e-15);
        let r = legendre_reduce_zero_current(1e12).unwrap();
        assert!(r.k_squared < 1e-10);
        assert!(matches!(
            legendre_reduce_zero_current(0.0),
            Err(Error::DegenerateConstant)
        ));
    }

    #[test]
    fn general_reduction_examples() {
        let a2 = 4.0 * PI * PI / 3.0;
        let z = legendre_reduce_zero_current(a2).unwrap();
        let g = legendre_reduce_general(a2, 0.0).unwrap();
        assert!((z.k_squared - g.k_squared).abs() < 1e-15);
        assert!((z.prefactor - g.prefactor).abs() < 1e-15);
        assert!((z.subst_const - g.subst_const).abs() < 1e-15);

        let g = legendre_reduce_general(4.25 * PI * PI, 2.0).unwrap();
        assert!((g.subst_const - (1.0 - 4.0 / 4.25_f64).sqrt()).abs() < 1e-14);
        assert!(g.k_squared > 0.0 && g.k_squared < 1.0);

        assert!(matches!(
            legendre_reduce_general(PI * PI, 1.0),
            Err(Error::ConditionViolated { .. })
        ));
    }

    #[test]
    fn reduction_matches_direct_quadrature() {
        let opts = QuadOptions {
            rel_tol: 1e-13,
            abs_tol: 1e-15,
            max_depth: 50,
        };
        for &(c, c0) in &[
            (5.0 * PI * PI, 0.0),
            (4.25 * PI * PI, 2.0),
            (1.1329 * PI * PI, 0.5),
            (30.0, -1.5),
        ] {
            let r = legendre_reduce_general(c, c0).unwrap();
            for y in [0.3, 1.7, 12.0] {
                let direct =
                    integrate(|s: f64| 1.0 / quartic(c, c0, s).sqrt(), 0.0, y, opts).unwrap();
                let normal = r.integral_to(y).unwrap();
                assert!(((direct - normal) / direct).abs() < 1e-10, "{c} {c0} {y}");
            }
        }
    }
}
