//! Interferometric mixed-state holonomy: each eigenvector of the diagonal
//! Gibbs state is transported on its own, and the pure-state Berry factors
//! `e^{-2πi m (1 - cos θ)}` are averaged with the populations `p_m`.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::gibbs::GibbsSpectrum;
use crate::phase::principal_arg;
use crate::spin::Spin;
use crate::PrefactorConvention;

#[derive(Debug, Clone, Copy, Error, PartialEq, Eq)]
pub enum SjoqvistError {
    #[error("2m = {two_m} is not a level of spin 2j = {two_j}")]
    InvalidLevel { two_m: i32, two_j: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SjoqvistResult {
    pub holonomy: Complex64,
    pub phase: f64,
    pub visibility: f64,
    /// Berry factor of each level in basis order.
    pub per_level: Vec<Complex64>,
}

/// `e^{-2πi m (1 - cos θ)}` for the level `m = two_m / 2` of `spin`.
pub fn berry_factor(spin: Spin, two_m: i32, theta: f64) -> Result<Complex64, SjoqvistError> {
    if spin.index_of(two_m).is_none() {
        return Err(SjoqvistError::InvalidLevel {
            two_m,
            two_j: spin.two_j(),
        });
    }
    Ok(level_factor(two_m, theta))
}

fn level_factor(two_m: i32, theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, -PI * f64::from(two_m) * (1.0 - theta.cos()))
}

/// `Σ_m p_m e^{-2πi m (1 - cos θ)}`, the trace of the signed pure-state
/// holonomies weighted by populations.
pub fn sjoqvist_holonomy(g: &GibbsSpectrum, theta: f64) -> SjoqvistResult {
    sjoqvist_holonomy_with(g, theta, PrefactorConvention::Signed)
}

/// As [`sjoqvist_holonomy`]; `Unsigned` drops the `(-1)^{2j}` carried by every
/// Berry factor, giving `Σ_m p_m e^{2πi m cos θ}`.
pub fn sjoqvist_holonomy_with(g: &GibbsSpectrum, theta: f64, convention: PrefactorConvention) -> SjoqvistResult {
    let per_level: Vec<Complex64> = (0..g.spin.dim())
        .map(|k| level_factor(g.spin.two_m(k), theta))
        .collect();
    let mut holonomy: Complex64 = per_level.iter().zip(&g.weights).map(|(z, p)| z * p).sum();
    if convention == PrefactorConvention::Unsigned {
        holonomy *= g.spin.rotation_sign();
    }
    SjoqvistResult {
        holonomy,
        phase: principal_arg(holonomy),
        visibility: holonomy.norm(),
        per_level,
    }
}

/// `tr (ρ₀ B)^k` with `B = diag(berry factors)`: `Σ_m p_m^k e^{-2πi k m (1 - cos θ)}`,
/// times `(-1)^{2jk}` dropped under `Unsigned`. `k = 1` is the holonomy itself.
pub fn sjoqvist_trace_power(g: &GibbsSpectrum, theta: f64, k: u32, convention: PrefactorConvention) -> Complex64 {
    let kf = f64::from(k);
    let mut z: Complex64 = (0..g.spin.dim())
        .map(|i| {
            let beta = -PI * f64::from(g.spin.two_m(i)) * (1.0 - theta.cos());
            Complex64::from_polar(g.weights[i].powi(k as i32), kf * beta)
        })
        .sum();
    if convention == PrefactorConvention::Unsigned && g.spin.is_fermionic() && k % 2 == 1 {
        z = -z;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gibbs::gibbs_state;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn spin(two_j: u32) -> Spin {
        Spin::from_two_j(two_j).unwrap()
    }

    #[test]
    fn berry_factors() {
        for tm in [-3, -1, 1, 3] {
            assert_eq!(berry_factor(spin(3), tm, 0.0).unwrap(), Complex64::new(1.0, 0.0));
        }
        let z = berry_factor(spin(1), 1, FRAC_PI_2).unwrap();
        assert!((z + 1.0).norm() < 1e-15);
        let z = berry_factor(spin(2), 2, FRAC_PI_3).unwrap();
        assert!((z + 1.0).norm() < 1e-15);
        assert_eq!(
            berry_factor(spin(2), 1, 0.3),
            Err(SjoqvistError::InvalidLevel { two_m: 1, two_j: 2 })
        );
    }

    #[test]
    fn spin_half_spot_value() {
        // direct sum: p₊ e^{-iπ/2} + p₋ e^{iπ/2} = -i tanh(1)
        let g = gibbs_state(spin(1), 2.0).unwrap();
        let r = sjoqvist_holonomy(&g, FRAC_PI_3);
        assert!((r.holonomy - Complex64::new(0.0, -1.0f64.tanh())).norm() < 1e-15);
        assert!((r.phase + FRAC_PI_2).abs() < 1e-14);
        assert!((r.visibility - 0.761_594_155_955_764_9).abs() < 1e-15);
        // printed-form convention flips the sign for half-integer spin
        let u = sjoqvist_holonomy_with(&g, FRAC_PI_3, PrefactorConvention::Unsigned);
        assert!((u.holonomy - Complex64::new(0.0, 1.0f64.tanh())).norm() < 1e-15);
        assert!((u.phase - FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn equator_parity() {
        for two_j in 1..=10u32 {
            let g = gibbs_state(spin(two_j), 1.7).unwrap();
            let r = sjoqvist_holonomy(&g, FRAC_PI_2);
            let expect = if two_j % 2 == 0 { 1.0 } else { -1.0 };
            assert!((r.holonomy - expect).norm() < 1e-13);
            assert!((r.visibility - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn first_power_is_holonomy() {
        let g = gibbs_state(spin(3), 1.1).unwrap();
        for conv in [PrefactorConvention::Signed, PrefactorConvention::Unsigned] {
            let h = sjoqvist_holonomy_with(&g, 0.8, conv).holonomy;
            assert!((sjoqvist_trace_power(&g, 0.8, 1, conv) - h).norm() < 1e-15);
        }
        // θ = 0: Σ p²
        let p2: f64 = g.weights.iter().map(|p| p * p).sum();
        assert!((sjoqvist_trace_power(&g, 0.0, 2, PrefactorConvention::Signed) - p2).norm() < 1e-15);
    }

    #[test]
    fn theta_zero_is_one() {
        for two_j in 1..=10u32 {
            let g = gibbs_state(spin(two_j), -0.9).unwrap();
            let r = sjoqvist_holonomy(&g, 0.0);
            assert!((r.holonomy - 1.0).norm() < 1e-14);
            assert_eq!(r.phase, 0.0);
        }
    }
}
