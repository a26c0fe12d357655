//! Gibbs states `ρ₀ = e^{α J_z} / tr e^{α J_z}`, diagonal in the spin basis.

use thiserror::Error;

use crate::linalg::SquareMatrix;
use crate::spin::Spin;

/// Largest accepted `|α|`.
pub const MAX_ABS_ALPHA: f64 = 100.0;

#[derive(Debug, Clone, Copy, Error, PartialEq)]
pub enum GibbsError {
    #[error("alpha = {0} outside [-{MAX_ABS_ALPHA}, {MAX_ABS_ALPHA}]")]
    AlphaOutOfRange(f64),
    #[error("alpha = 0 is maximally mixed and has no dominant level")]
    DegenerateAtAlphaZero,
}

/// Level populations `p_m`, in basis order `m = j, …, -j`.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsSpectrum {
    pub alpha: f64,
    pub spin: Spin,
    pub weights: Vec<f64>,
}

pub fn gibbs_state(spin: Spin, alpha: f64) -> Result<GibbsSpectrum, GibbsError> {
    if !alpha.is_finite() || alpha.abs() > MAX_ABS_ALPHA {
        return Err(GibbsError::AlphaOutOfRange(alpha));
    }
    let n = spin.dim();
    // exponent relative to the dominant level; level k sits k (or n-1-k) steps below
    let steps = |k: usize| if alpha >= 0.0 { k } else { n - 1 - k };
    let unnormalized: Vec<f64> = (0..n).map(|k| (-alpha.abs() * steps(k) as f64).exp()).collect();
    // sum from the dominant level outwards so that p(-α) is exactly p(α) reversed
    let z: f64 = if alpha >= 0.0 {
        unnormalized.iter().sum()
    } else {
        unnormalized.iter().rev().sum()
    };
    let weights = unnormalized.into_iter().map(|w| w / z).collect();
    Ok(GibbsSpectrum {
        alpha,
        spin,
        weights,
    })
}

impl GibbsSpectrum {
    pub fn density_matrix(&self) -> SquareMatrix {
        SquareMatrix::from_real_diagonal(&self.weights).expect("spin dimension within linalg limit")
    }

    /// `ρ₀^{1/2}`, exact since `ρ₀` is diagonal.
    pub fn sqrt_density_matrix(&self) -> SquareMatrix {
        let roots: Vec<f64> = self.weights.iter().map(|p| p.sqrt()).collect();
        SquareMatrix::from_real_diagonal(&roots).expect("spin dimension within linalg limit")
    }

    /// Basis index of the level that survives as `α → ±∞`.
    pub fn purity_limit_level(&self) -> Result<usize, GibbsError> {
        if self.alpha > 0.0 {
            Ok(0)
        } else if self.alpha < 0.0 {
            Ok(self.spin.dim() - 1)
        } else {
            Err(GibbsError::DegenerateAtAlphaZero)
        }
    }

    /// `⟨J_z⟩ = Σ m p_m`.
    pub fn mean_jz(&self) -> f64 {
        self.spin.m_values().zip(&self.weights).map(|(m, p)| m * p).sum()
    }
}

pub fn density_matrix(g: &GibbsSpectrum) -> SquareMatrix {
    g.density_matrix()
}

pub fn purity_limit_level(g: &GibbsSpectrum) -> Result<usize, GibbsError> {
    g.purity_limit_level()
}
