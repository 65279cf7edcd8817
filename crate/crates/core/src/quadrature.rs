//! Adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Bisection budget of one [`integrate`] call.
pub const MAX_PANELS: usize = 200_000;

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_depth: u32,
}

impl<T: Real> Default for QuadOptions<T> {
    fn default() -> Self {
        Self {
            rel_tol: lit(1e-10),
            abs_tol: lit(1e-13),
            max_depth: 40,
        }
    }
}

/// One G7/K15 panel: (Kronrod estimate, |Kronrod − Gauss|).
fn panel<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = (b - a) * lit(0.5);
    let mid = (a + b) * lit(0.5);
    let fc = f(mid);
    let mut kron = fc * lit(WGK[7]);
    let mut gauss = fc * lit(WG[3]);
    for j in 0..7 {
        let dx = half * lit(XGK[j]);
        let s = f(mid - dx) + f(mid + dx);
        kron = kron + s * lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + s * lit(WG[j / 2]);
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]` by recursive bisection until every panel meets
/// `max(abs_tol, rel_tol·|I|)` scaled by its share of the interval.
pub fn integrate<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    opts: QuadOptions<T>,
) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    let (whole, err) = panel(&mut f, a, b);
    if !whole.is_finite() {
        return Err(Error::QuadratureFailure {
            a: a.as_f64(),
            b: b.as_f64(),
            err: f64::INFINITY,
        });
    }
    let target = opts.abs_tol.max(opts.rel_tol * whole.abs());
    if err <= target || unresolvable(a, b) {
        return Ok(whole);
    }
    let span = (b - a).abs();
    let mut total = T::zero();
    let mut stack = vec![(a, b, whole, 0u32)];
    let mut panels = 0usize;
    while let Some((lo, hi, est, depth)) = stack.pop() {
        panels += 1;
        let mid = (lo + hi) * lit(0.5);
        let (left, el) = panel(&mut f, lo, mid);
        let (right, er) = panel(&mut f, mid, hi);
        let refined = left + right;
        let local_err = el + er;
        let share = (hi - lo).abs() / span;
        let local_target = target * share;
        if local_err <= local_target
            || (refined - est).abs() <= local_target * lit(0.1)
            || local_err <= roundoff_floor(left, right)
            || unresolvable(lo, hi)
        {
            total = total + refined;
        } else if depth >= opts.max_depth || panels > MAX_PANELS {
            return Err(Error::QuadratureFailure {
                a: lo.as_f64(),
                b: hi.as_f64(),
                err: local_err.as_f64(),
            });
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    Ok(total)
}

/// Kronrod/Gauss differences below this are rounding noise.
fn roundoff_floor<T: Real>(left: T, right: T) -> T {
    T::epsilon() * lit::<T>(50.0) * (left.abs() + right.abs())
}

/// Too narrow to bisect meaningfully in floating point.
fn unresolvable<T: Real>(a: T, b: T) -> bool {
    (b - a).abs() <= T::epsilon() * lit::<T>(64.0) * a.abs().max(b.abs())
}

/// Integrates over `[a, b]` after splitting at the given interior points.
pub fn integrate_split<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    breaks: &[T],
    opts: QuadOptions<T>,
) -> Result<T> {
    let (lo, hi, sign) = if a <= b {
        (a, b, T::one())
    } else {
        (b, a, -T::one())
    };
    let mut pts: Vec<T> = breaks
        .iter()
        .copied()
        .filter(|&p| p > lo && p < hi)
        .collect();
    pts.sort_by(|x, y| x.partial_cmp(y).expect("finite break points"));
    let mut acc = T::zero();
    let mut left = lo;
    for p in pts.into_iter().chain(std::iter::once(hi)) {
        acc = acc + integrate(&mut f, left, p, opts)?;
        left = p;
    }
    Ok(sign * acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(
            |x: f64| x.powi(7) - 3.0 * x,
            0.0,
            2.0,
            QuadOptions::default(),
        )
        .unwrap();
        assert!((v - (32.0 - 6.0)).abs() < 1e-12);
    }

    #[test]
    fn peaked_integrand() {
        let v = integrate(
            |x: f64| 1.0 / (1e-4 + x * x),
            -1.0,
            1.0,
            QuadOptions::default(),
        )
        .unwrap();
        let exact = 2.0 * (1.0 / 1e-2) * (1.0_f64 / 1e-2).atan();
        assert!((v - exact).abs() / exact < 1e-10);
    }

    #[test]
    fn reversed_interval_with_breaks() {
        let f = |x: f64| x.sin();
        let v = integrate_split(f, 3.0, 0.0, &[1.0, 2.0, 5.0], QuadOptions::default()).unwrap();
        assert!((v + (1.0 - 3.0_f64.cos())).abs() < 1e-13);
    }

    #[test]
    fn non_finite_reports_failure() {
        let r = integrate(|x: f64| 1.0 / x, 0.0, 1.0, QuadOptions::default());
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }
}
