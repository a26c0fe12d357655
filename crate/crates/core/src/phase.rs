//! Phase and visibility extraction shared by every holonomy computation.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Principal argument in `(-π, π]`, resolving the quadrant from both signs.
///
/// `atan2` returns `-π` for a negative real axis approached from `-0.0`
/// imaginary part; that value is folded onto `π`.
pub fn principal_arg(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// Wrap an arbitrary angle into `(-π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

/// `(γ, ν)`: geometric phase and visibility of a holonomy trace.
pub fn phase_and_visibility(z: Complex64) -> (f64, f64) {
    (principal_arg(z), z.norm())
}
