//! Closed-form expressions for low-dimensional traces, kept apart from the
//! matrix pipeline and used only to cross-check it.
//!
//! Expressions are evaluated as written, with complex intermediates
//! (`cosh(iπκ)`, `sinh²(iπκ)`, `e^{2iπκ}`, …) and a reality check on the
//! final value where the expression is meant to be real.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::phase::phase_and_visibility;

/// Imaginary residue above which a nominally real expression is rejected.
pub const REALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, Error, PartialEq)]
pub enum ReferenceError {
    #[error("closed form for x has imaginary part {0:e}")]
    NonRealX(f64),
    #[error("no closed form available for n = {0}")]
    UnsupportedN(usize),
}

/// Cartesian pair whose quadrant-aware arctangent is the phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormPoint {
    pub x: f64,
    pub y: f64,
}

impl ClosedFormPoint {
    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn phase(&self) -> f64 {
        phase_and_visibility(self.as_complex()).0
    }

    pub fn visibility(&self) -> f64 {
        phase_and_visibility(self.as_complex()).1
    }
}

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

/// `a = 1/cosh(α/2)`.
pub fn transport_parameter(alpha: f64) -> f64 {
    sech(alpha / 2.0)
}

/// `κ = sqrt(cos²θ + a² sin²θ)`.
pub fn kappa(alpha: f64, theta: f64) -> f64 {
    let a = transport_parameter(alpha);
    let (s, c) = theta.sin_cos();
    (c * c + a * a * s * s).sqrt()
}

/// `ζ = 3 - cos 2θ + 2 cos²θ cosh α`.
pub fn zeta(alpha: f64, theta: f64) -> f64 {
    let c = theta.cos();
    3.0 - (2.0 * theta).cos() + 2.0 * c * c * alpha.cosh()
}

/// Spin-½ first-order trace: `x = -cosh(iπκ)`,
/// `y = -cos θ sin(πκ) tanh(α/2) / κ`.
pub fn uhlmann2_trace(alpha: f64, theta: f64) -> ClosedFormPoint {
    let k = kappa(alpha, theta);
    let x = -(i() * PI * k).cosh();
    debug_assert!(x.im.abs() < REALITY_TOL);
    let y = -theta.cos() * (PI * k).sin() * (alpha / 2.0).tanh() / k;
    ClosedFormPoint { x: x.re, y }
}

/// Spin-½ visibility `sqrt(1 + 4 sinh²(iπκ) / ζ)`.
pub fn uhlmann2_visibility(alpha: f64, theta: f64) -> f64 {
    let k = kappa(alpha, theta);
    let sh = (i() * PI * k).sinh();
    let v = (Complex64::new(1.0, 0.0) + sh * sh * 4.0 / zeta(alpha, theta)).sqrt();
    debug_assert!(v.im.abs() < REALITY_TOL);
    v.re
}

/// Spin-1 first-order trace exactly as printed.
///
/// The printed pair does not reproduce the matrix trace: `x` is not even
/// symmetric in `α`, and `y` carries `cos α` in its denominator. See
/// [`uhlmann3_trace_repaired`].
pub fn uhlmann3_trace(alpha: f64, theta: f64) -> Result<ClosedFormPoint, ReferenceError> {
    let k = kappa(alpha, theta);
    let (s, c) = theta.sin_cos();
    let ea = Complex64::new(alpha.exp(), 0.0);
    let e2 = (i() * 2.0 * PI * k).exp();
    let e4 = (i() * 4.0 * PI * k).exp();
    let one = Complex64::new(1.0, 0.0);

    let cos_part = (ea + e2 * 2.0 + ea * e4) * 2.0 * (c * c);
    let sin_part = (one * 2.0 + e4 * 2.0 + ea * (one + e2) * (one + e2)) * (sech(alpha / 2.0).powi(2) * s * s);
    let x = (-i() * 2.0 * PI * k).exp() * (cos_part + sin_part) / (4.0 * k * k * (1.0 + 2.0 * alpha.cosh()));
    if x.im.abs() >= REALITY_TOL {
        return Err(ReferenceError::NonRealX(x.im));
    }
    let y = alpha.exp() * c * (2.0 * PI * k).sin() / (k + 2.0 * k * alpha.cos());
    Ok(ClosedFormPoint { x: x.re, y })
}

/// Spin-1 trace with the printed structure kept and the three evident slips
/// fixed: `e^α → 2 cosh α` in `x`, `e^α → 2 sinh α` and `cos α → cosh α` in `y`.
pub fn uhlmann3_trace_repaired(alpha: f64, theta: f64) -> ClosedFormPoint {
    let k = kappa(alpha, theta);
    let (s, c) = theta.sin_cos();
    let ch = Complex64::new(2.0 * alpha.cosh(), 0.0);
    let e2 = (i() * 2.0 * PI * k).exp();
    let e4 = (i() * 4.0 * PI * k).exp();
    let one = Complex64::new(1.0, 0.0);

    let cos_part = (ch + e2 * 2.0 + ch * e4) * 2.0 * (c * c);
    let sin_part = (one * 2.0 + e4 * 2.0 + ch * (one + e2) * (one + e2)) * (sech(alpha / 2.0).powi(2) * s * s);
    let x = (-i() * 2.0 * PI * k).exp() * (cos_part + sin_part) / (4.0 * k * k * (1.0 + 2.0 * alpha.cosh()));
    debug_assert!(x.im.abs() < REALITY_TOL);
    let y = 2.0 * alpha.sinh() * c * (2.0 * PI * k).sin() / (k + 2.0 * k * alpha.cosh());
    ClosedFormPoint { x: x.re, y }
}

/// Spin-½ trace of the squared invariant:
/// `x = (ζ(-1 + (1 + cosh α) cosh(2iπκ)) sech²(α/2) - 8 sinh²(iπκ)) / 2ζ`,
/// `y = -2iκ cos θ sinh α sinh(2iπκ) / ζ`.
pub fn uhlmann2_trace_power2(alpha: f64, theta: f64) -> ClosedFormPoint {
    let k = kappa(alpha, theta);
    let z = zeta(alpha, theta);
    let sh = (i() * PI * k).sinh();
    let ch2 = (i() * 2.0 * PI * k).cosh();
    let sh2 = (i() * 2.0 * PI * k).sinh();
    let one = Complex64::new(1.0, 0.0);

    let x = ((-one + ch2 * (1.0 + alpha.cosh())) * z * sech(alpha / 2.0).powi(2) - sh * sh * 8.0) / (2.0 * z);
    let y = -i() * 2.0 * k * theta.cos() * alpha.sinh() * sh2 / z;
    debug_assert!(x.im.abs() < REALITY_TOL && y.im.abs() < REALITY_TOL);
    ClosedFormPoint { x: x.re, y: y.re }
}

/// Printed `x² + y²` for the squared spin-½ invariant.
pub fn uhlmann2_trace_power2_modulus_sq(alpha: f64, theta: f64) -> f64 {
    let k = kappa(alpha, theta);
    let z = zeta(alpha, theta);
    let sh = (i() * PI * k).sinh();
    let sh_sq = sh * sh;
    let ch2 = (i() * 2.0 * PI * k).cosh();
    let sech2 = sech(alpha / 2.0).powi(2);
    let one = Complex64::new(1.0, 0.0);

    let v = one - ch2 * 2.0 / (1.0 + alpha.cosh())
        + 0.25 * sech2 * sech2
        + sh_sq * 4.0 * (2.0 + alpha.cosh()) * sech2 / z
        + sh_sq * sh_sq * 16.0 / (z * z);
    debug_assert!(v.im.abs() < REALITY_TOL);
    v.re
}

/// Printed population-weighted Berry traces for `n = 2..=5`.
pub fn sjoqvist_trace_closed(n: usize, alpha: f64, theta: f64) -> Result<Complex64, ReferenceError> {
    let c = theta.cos();
    let one = Complex64::new(1.0, 0.0);
    let z = match n {
        2 => Complex64::new((PI * c).cos(), (PI * c).sin() * (alpha / 2.0).tanh()),
        3 => {
            let num = Complex64::new(
                1.0 + 2.0 * (2.0 * PI * c).cos() * alpha.cosh(),
                2.0 * (2.0 * PI * c).sin() * alpha.sinh(),
            );
            num / (1.0 + 2.0 * alpha.cosh())
        }
        4 => {
            let e = |re: f64, im: f64| Complex64::new(re, im).exp();
            e(0.0, -3.0 * PI * c) * (one + e(alpha, 2.0 * PI * c)) * (one + e(2.0 * alpha, 4.0 * PI * c))
                / ((1.0 + alpha.exp()) * (1.0 + (2.0 * alpha).exp()))
        }
        5 => {
            let num = Complex64::new(
                1.0 + 2.0 * (2.0 * PI * c).cos() * alpha.cosh() + 2.0 * (4.0 * PI * c).cos() * (2.0 * alpha).cosh(),
                2.0 * (2.0 * PI * c).sin() * alpha.sinh() + 2.0 * (4.0 * PI * c).sin() * (2.0 * alpha).sinh(),
            );
            num / (1.0 + 2.0 * alpha.cosh() + 2.0 * (2.0 * alpha).cosh())
        }
        _ => return Err(ReferenceError::UnsupportedN(n)),
    };
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn spin_half_trivial_limits() {
        let p = uhlmann2_trace(1.7, 0.0);
        assert!((p.x - 1.0).abs() < 1e-15 && p.y.abs() < 1e-15);
        assert!(p.phase().abs() < 1e-15);
        let p = uhlmann2_trace(0.0, 0.9);
        assert!((p.x - 1.0).abs() < 1e-15 && p.y.abs() < 1e-15);
        assert!((p.visibility() - 1.0).abs() < 1e-15);
        assert!((uhlmann2_visibility(2.5, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn published_visibility() {
        let v = uhlmann2_visibility(5.0, FRAC_PI_2);
        assert!((v - 0.871618).abs() < 5e-6, "{v}");
        let p = uhlmann2_trace(5.0, FRAC_PI_2);
        assert!((p.visibility() - 0.871618).abs() < 5e-6);
    }

    #[test]
    fn spin_one_limits() {
        let p = uhlmann3_trace_repaired(0.0, 0.6);
        assert!((p.visibility() - 1.0).abs() < 1e-14);
        assert!(p.phase().abs() < 1e-14);
        // the printed x already fails the α = 0 limit
        let printed = uhlmann3_trace(0.0, 0.6).unwrap();
        assert!((printed.x - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn power2_at_alpha_zero() {
        let p = uhlmann2_trace_power2(0.0, 0.4);
        assert!((p.visibility() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn sjoqvist_forms_at_equator() {
        for n in [3, 5] {
            let z = sjoqvist_trace_closed(n, 1.2, FRAC_PI_2).unwrap();
            assert!((z - 1.0).norm() < 1e-14);
        }
        // the n = 4 product form gives +1 here, the direct Berry sum gives -1
        let z = sjoqvist_trace_closed(4, 1.2, FRAC_PI_2).unwrap();
        assert!((z - 1.0).norm() < 1e-14);
        assert_eq!(sjoqvist_trace_closed(6, 1.0, 1.0), Err(ReferenceError::UnsupportedN(6)));
        assert_eq!(sjoqvist_trace_closed(1, 1.0, 1.0), Err(ReferenceError::UnsupportedN(1)));
    }
}
