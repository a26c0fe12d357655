//! Uhlmann parallel-lift holonomy for a Gibbs state rotated about
//! `(0, sin θ, cos θ)`.
//!
//! The state curve is `U(φ) ρ₀ U(-φ)` with `U(φ) = e^{-iφ(sin θ J_y + cos θ J_z)}`.
//! Its parallel lift starting at `ρ₀^{1/2}` is `W(φ) = U(φ) ρ₀^{1/2} V(φ)` with
//! `V(φ) = e^{iφ H̃}`, `H̃ = cos θ J_z + a sin θ J_y` and `a = 1/cosh(α/2)`.
//! After one loop `U(2π) = (-1)^{2j}`, so the holonomy invariant
//! `W(2π) W(0)†` is `(-1)^{2j} ρ₀^{1/2} e^{2πi H̃} ρ₀^{1/2}`.
//!
//! `V` is a rotation by `κφ` about the unit axis `ξ` with `κ (ξ·J) = H̃`:
//! `κ = sqrt(cos²θ + a² sin²θ)`, `ξ = (0, a sin θ / κ, cos θ / κ)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use thiserror::Error;

use crate::gibbs::{gibbs_state, GibbsError, GibbsSpectrum};
use crate::linalg::{exp_i_hermitian, general_eigenvalues, ComplexSpectrum, LinalgError, SquareMatrix};
use crate::phase::phase_and_visibility;
use crate::spin::{Spin, SpinOperators};
use crate::PrefactorConvention;

/// Below this `κ` the rotation axis is undefined.
pub const KAPPA_FLOOR: f64 = 1e-15;
/// Highest trace power a report may request.
pub const MAX_POWER: u32 = 8;
/// Powers computed when callers have no preference.
pub const DEFAULT_MAX_POWER: u32 = 5;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum UhlmannError {
    #[error("theta = {0} outside [0, π]")]
    InvalidTheta(f64),
    #[error("a override {0} outside [0, 1]")]
    InvalidAOverride(f64),
    #[error("κ = 0: rotation axis undefined")]
    KappaZero { htilde: SquareMatrix },
    #[error("central diagonal entry needs odd dimension, got {0}")]
    EvenDimension(usize),
    #[error("trace power {0} outside 1..={MAX_POWER}")]
    InvalidPower(u32),
    #[error(transparent)]
    Gibbs(#[from] GibbsError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// One point of the `(α, θ)` scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams {
    pub spin: Spin,
    pub alpha: f64,
    pub theta: f64,
    /// Replaces `a = 1/cosh(α/2)` when set.
    pub a_override: Option<f64>,
}

impl ScenarioParams {
    pub fn new(spin: Spin, alpha: f64, theta: f64) -> Result<Self, UhlmannError> {
        let p = Self {
            spin,
            alpha,
            theta,
            a_override: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_a_override(mut self, a: f64) -> Result<Self, UhlmannError> {
        self.a_override = Some(a);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), UhlmannError> {
        if !(self.theta.is_finite() && (0.0..=PI).contains(&self.theta)) {
            return Err(UhlmannError::InvalidTheta(self.theta));
        }
        if let Some(a) = self.a_override {
            if !(0.0..=1.0).contains(&a) {
                return Err(UhlmannError::InvalidAOverride(a));
            }
        }
        // surfaces AlphaOutOfRange early
        gibbs_state(self.spin, self.alpha)?;
        Ok(())
    }

    pub fn a(&self) -> f64 {
        self.a_override.unwrap_or_else(|| 1.0 / (self.alpha / 2.0).cosh())
    }

    pub fn kappa(&self) -> f64 {
        let (s, c) = self.theta.sin_cos();
        let a = self.a();
        (c * c + a * a * s * s).sqrt()
    }

    pub fn gibbs(&self) -> Result<GibbsSpectrum, UhlmannError> {
        Ok(gibbs_state(self.spin, self.alpha)?)
    }
}

/// `V(φ)` viewed as a rotation: angle fraction `κ` about axis `ξ`.
#[derive(Debug, Clone)]
pub struct LiftGeometry {
    pub a: f64,
    pub kappa: f64,
    pub xi: [f64; 3],
    pub htilde: SquareMatrix,
}

fn htilde(p: &ScenarioParams, ops: &SpinOperators) -> SquareMatrix {
    let (s, c) = p.theta.sin_cos();
    ops.generator([0.0, p.a() * s, c])
}

pub fn lift_geometry(p: &ScenarioParams) -> Result<LiftGeometry, UhlmannError> {
    p.validate()?;
    let ops = SpinOperators::new(p.spin);
    let htilde = htilde(p, &ops);
    let kappa = p.kappa();
    if kappa < KAPPA_FLOOR {
        return Err(UhlmannError::KappaZero { htilde });
    }
    let (s, c) = p.theta.sin_cos();
    let a = p.a();
    Ok(LiftGeometry {
        a,
        kappa,
        xi: [0.0, a * s / kappa, c / kappa],
        htilde,
    })
}

/// `U(φ) = e^{-iφ(sin θ J_y + cos θ J_z)}`.
pub fn evolution_unitary(p: &ScenarioParams, phi: f64) -> Result<SquareMatrix, UhlmannError> {
    let ops = SpinOperators::new(p.spin);
    let (s, c) = p.theta.sin_cos();
    Ok(exp_i_hermitian(&ops.generator([0.0, s, c]), -phi)?)
}

/// `W(φ) = U(φ) ρ₀^{1/2} V(φ)`.
pub fn parallel_lift(p: &ScenarioParams, phi: f64) -> Result<SquareMatrix, UhlmannError> {
    p.validate()?;
    let ops = SpinOperators::new(p.spin);
    let sqrt_rho = p.gibbs()?.sqrt_density_matrix();
    let u = evolution_unitary(p, phi)?;
    let v = exp_i_hermitian(&htilde(p, &ops), phi)?;
    Ok(u.matmul(&sqrt_rho)?.matmul(&v)?)
}

fn prefactor(spin: Spin, convention: PrefactorConvention) -> Complex64 {
    match convention {
        PrefactorConvention::Signed => Complex64::new(spin.rotation_sign(), 0.0),
        PrefactorConvention::Unsigned => Complex64::new(1.0, 0.0),
    }
}

fn sandwich(sqrt_rho: &SquareMatrix, middle: &SquareMatrix, factor: Complex64) -> Result<SquareMatrix, LinalgError> {
    Ok(sqrt_rho.matmul(middle)?.matmul(sqrt_rho)?.scale(factor))
}

/// `prefactor · ρ₀^{1/2} e^{2πi H̃} ρ₀^{1/2}`.
pub fn holonomy_invariant(p: &ScenarioParams, convention: PrefactorConvention) -> Result<SquareMatrix, UhlmannError> {
    p.validate()?;
    let ops = SpinOperators::new(p.spin);
    let sqrt_rho = p.gibbs()?.sqrt_density_matrix();
    let rotation = exp_i_hermitian(&htilde(p, &ops), TAU)?;
    Ok(sandwich(&sqrt_rho, &rotation, prefactor(p.spin, convention))?)
}

/// Same invariant assembled from `e^{2πiκ (ξ·J)}`; fails with `KappaZero`
/// where the axis is undefined.
pub fn holonomy_invariant_via_axis(
    p: &ScenarioParams,
    convention: PrefactorConvention,
) -> Result<SquareMatrix, UhlmannError> {
    let geom = lift_geometry(p)?;
    let ops = SpinOperators::new(p.spin);
    let sqrt_rho = p.gibbs()?.sqrt_density_matrix();
    let rotation = exp_i_hermitian(&ops.generator(geom.xi), TAU * geom.kappa)?;
    Ok(sandwich(&sqrt_rho, &rotation, prefactor(p.spin, convention))?)
}

/// Trace powers, phases, visibilities and spectrum of one invariant.
#[derive(Debug, Clone)]
pub struct HolonomyReport {
    pub invariant: SquareMatrix,
    /// `traces[k-1] = tr(M^k)`.
    pub traces: Vec<Complex64>,
    pub phases: Vec<f64>,
    pub visibilities: Vec<f64>,
    pub spectrum: ComplexSpectrum,
    pub diagonal: Vec<Complex64>,
}

pub fn trace_powers(invariant: &SquareMatrix, k_max: u32) -> Result<Vec<Complex64>, UhlmannError> {
    if !(1..=MAX_POWER).contains(&k_max) {
        return Err(UhlmannError::InvalidPower(k_max));
    }
    let mut traces = Vec::with_capacity(k_max as usize);
    let mut power = invariant.clone();
    traces.push(power.trace());
    for _ in 1..k_max {
        power = power.matmul(invariant)?;
        traces.push(power.trace());
    }
    Ok(traces)
}

pub fn holonomy_report(
    p: &ScenarioParams,
    k_max: u32,
    convention: PrefactorConvention,
) -> Result<HolonomyReport, UhlmannError> {
    if !(1..=MAX_POWER).contains(&k_max) {
        return Err(UhlmannError::InvalidPower(k_max));
    }
    let invariant = holonomy_invariant(p, convention)?;
    let traces = trace_powers(&invariant, k_max)?;
    let (phases, visibilities) = traces.iter().map(|&t| phase_and_visibility(t)).unzip();
    let spectrum = general_eigenvalues(&invariant)?;
    let diagonal = invariant.diagonal();
    Ok(HolonomyReport {
        invariant,
        traces,
        phases,
        visibilities,
        spectrum,
        diagonal,
    })
}

/// Entry `(⌈n/2⌉, ⌈n/2⌉)` (1-based) of the signed invariant.
pub fn central_diagonal_entry(p: &ScenarioParams) -> Result<Complex64, UhlmannError> {
    let n = p.spin.dim();
    if n % 2 == 0 {
        return Err(UhlmannError::EvenDimension(n));
    }
    let m = holonomy_invariant(p, PrefactorConvention::Signed)?;
    Ok(m[(n / 2, n / 2)])
}

/// Moduli of the invariant's diagonal, top-left first.
pub fn diagonal_moduli(p: &ScenarioParams) -> Result<Vec<f64>, UhlmannError> {
    let m = holonomy_invariant(p, PrefactorConvention::Signed)?;
    Ok(m.diagonal().iter().map(|z| z.norm()).collect())
}
