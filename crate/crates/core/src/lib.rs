//! Mixed-state geometric phases for rotated spin-j Gibbs states.
//!
//! A Gibbs state `ρ₀ ∝ e^{α J_z}` of an `n = 2j + 1` level system is carried
//! once around the circle generated by `sin θ J_y + cos θ J_z`. Two holonomies
//! are computed for that loop:
//!
//! * [`uhlmann`]: the parallel-lift invariant `±ρ₀^{1/2} e^{2πi H̃} ρ₀^{1/2}`,
//!   its trace powers, spectrum and diagonal;
//! * [`sjoqvist`]: the population-weighted average of pure-state Berry factors.
//!
//! The argument of a trace is the geometric phase, its modulus the visibility.
//! [`reference_forms`] holds closed forms for small `n`, used only in checks.

pub mod gibbs;
pub mod linalg;
pub mod phase;
pub mod reference_forms;
pub mod sjoqvist;
pub mod spin;
pub mod uhlmann;

pub use num_complex::Complex64;

pub use gibbs::{gibbs_state, GibbsError, GibbsSpectrum};
pub use linalg::{ComplexSpectrum, LinalgError, SquareMatrix};
pub use sjoqvist::{sjoqvist_holonomy, sjoqvist_holonomy_with, sjoqvist_trace_power, SjoqvistResult};
pub use spin::{Spin, SpinOperators};
pub use uhlmann::{holonomy_invariant, holonomy_report, HolonomyReport, ScenarioParams, UhlmannError};

/// Whether the `(-1)^{2j}` picked up by `U(2π)` is folded into a holonomy.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum PrefactorConvention {
    /// Include `(-1)^{2j}`; this is `W(2π) W(0)†` itself.
    #[default]
    Signed,
    /// Leave the sign out.
    Unsigned,
}

impl PrefactorConvention {
    pub fn label(self) -> &'static str {
        match self {
            Self::Signed => "signed",
            Self::Unsigned => "unsigned",
        }
    }
}

impl std::str::FromStr for PrefactorConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "signed" => Ok(Self::Signed),
            "unsigned" => Ok(Self::Unsigned),
            other => Err(format!("unknown convention `{other}` (expected signed|unsigned)")),
        }
    }
}
