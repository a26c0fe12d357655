//! Sweep configuration: which spins, which grid, which methods.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use holonomy::gibbs::MAX_ABS_ALPHA;
use holonomy::spin::MAX_TWO_J;
use holonomy::uhlmann::MAX_POWER;
use holonomy::PrefactorConvention;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SpecError {
    #[error("{0} must not be empty")]
    Empty(&'static str),
    #[error("{axis} range needs at least 2 steps, got {steps}")]
    TooFewSteps { axis: &'static str, steps: usize },
    #[error("{0} range has a non-finite end")]
    NonFinite(&'static str),
    #[error("theta range [{0}, {1}] leaves [0, π]")]
    ThetaOutOfRange(f64, f64),
    #[error("alpha range [{0}, {1}] leaves [-{MAX_ABS_ALPHA}, {MAX_ABS_ALPHA}]")]
    AlphaOutOfRange(f64, f64),
    #[error("2j = {0} unsupported (need 0..={MAX_TWO_J})")]
    BadTwoJ(u32),
    #[error("power {0} outside 1..={MAX_POWER}")]
    BadPower(u32),
    #[error("a override {0} outside [0, 1]")]
    BadAOverride(f64),
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error("{0}")]
    Methods(&'static str),
    #[error("cannot parse `{input}`: {why}")]
    Parse { input: String, why: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Uhlmann,
    Sjoqvist,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Uhlmann => "uhlmann",
            Method::Sjoqvist => "sjoqvist",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uhlmann" => Ok(Method::Uhlmann),
            "sjoqvist" => Ok(Method::Sjoqvist),
            _ => Err(SpecError::Parse {
                input: s.to_owned(),
                why: "expected uhlmann or sjoqvist",
            }),
        }
    }
}

/// Inclusive `[min, max]` sampled at `steps` evenly spaced points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridRange {
    pub fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    /// Endpoints are hit exactly.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / last as f64
                }
            })
            .collect()
    }

    fn check(&self, axis: &'static str) -> Result<(), SpecError> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(SpecError::NonFinite(axis));
        }
        if self.steps < 2 {
            return Err(SpecError::TooFewSteps { axis, steps: self.steps });
        }
        Ok(())
    }
}

/// `min:max:steps`.
impl FromStr for GridRange {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why| SpecError::Parse {
            input: s.to_owned(),
            why,
        };
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(bad("expected min:max:steps"));
        };
        Ok(Self {
            min: parse_real(lo).ok_or_else(|| bad("bad min"))?,
            max: parse_real(hi).ok_or_else(|| bad("bad max"))?,
            steps: n.trim().parse().map_err(|_| bad("bad step count"))?,
        })
    }
}

/// Accepts plain reals plus `pi`, `pi/2`, `pi/10`, `2pi/3`-style shorthands.
pub fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Some(v);
    }
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b.trim().parse::<f64>().ok()?),
        None => (s, 1.0),
    };
    let coeff = num.trim().strip_suffix("pi")?.trim();
    let c = if coeff.is_empty() { 1.0 } else { coeff.parse::<f64>().ok()? };
    Some(c * PI / den)
}

/// `2..11` (inclusive) or `2,3,5`, as dimensions `n = 2j + 1`.
pub fn parse_n_list(s: &str) -> Result<Vec<u32>, SpecError> {
    let bad = |why| SpecError::Parse {
        input: s.to_owned(),
        why,
    };
    let dims: Vec<u32> = if let Some((a, b)) = s.split_once("..") {
        let lo: u32 = a.trim().parse().map_err(|_| bad("bad range start"))?;
        let hi: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad("bad range end"))?;
        (lo..=hi).collect()
    } else {
        s.split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| bad("bad entry")))
            .collect::<Result<_, _>>()?
    };
    dims.into_iter()
        .map(|n| n.checked_sub(1).ok_or_else(|| bad("n must be at least 1")))
        .collect()
}

pub fn parse_powers(s: &str) -> Result<Vec<u32>, SpecError> {
    s.split(',')
        .map(|t| {
            t.trim().parse::<u32>().map_err(|_| SpecError::Parse {
                input: s.to_owned(),
                why: "bad power",
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub two_j_list: Vec<u32>,
    pub alpha_range: GridRange,
    pub theta_range: GridRange,
    pub methods: Vec<Method>,
    pub powers: Vec<u32>,
    pub convention: PrefactorConvention,
    pub a_override: Option<f64>,
    pub workers: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            two_j_list: (1..=10).collect(),
            alpha_range: GridRange::new(0.0, 5.0, 50),
            theta_range: GridRange::new(0.0, FRAC_PI_2, 50),
            methods: vec![Method::Uhlmann, Method::Sjoqvist],
            powers: vec![1],
            convention: PrefactorConvention::Signed,
            a_override: None,
            workers: 1,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SpecError> {
        if self.two_j_list.is_empty() {
            return Err(SpecError::Empty("spin list"));
        }
        if let Some(&tj) = self.two_j_list.iter().find(|&&tj| tj > MAX_TWO_J) {
            return Err(SpecError::BadTwoJ(tj));
        }
        if self.methods.is_empty() {
            return Err(SpecError::Empty("method list"));
        }
        if self.powers.is_empty() {
            return Err(SpecError::Empty("power list"));
        }
        if let Some(&k) = self.powers.iter().find(|&&k| !(1..=MAX_POWER).contains(&k)) {
            return Err(SpecError::BadPower(k));
        }
        self.alpha_range.check("alpha")?;
        self.theta_range.check("theta")?;
        check_alpha(self.alpha_range.min, self.alpha_range.max)?;
        check_theta(self.theta_range.min, self.theta_range.max)?;
        if let Some(a) = self.a_override {
            if !(0.0..=1.0).contains(&a) {
                return Err(SpecError::BadAOverride(a));
            }
        }
        if self.workers == 0 {
            return Err(SpecError::NoWorkers);
        }
        Ok(())
    }

    /// Spins and methods in canonical order, duplicates removed.
    pub(crate) fn canonical_spins(&self) -> Vec<u32> {
        let mut v = self.two_j_list.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub(crate) fn canonical_methods(&self) -> Vec<Method> {
        let mut v = self.methods.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub(crate) fn canonical_powers(&self) -> Vec<u32> {
        let mut v = self.powers.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
}

pub(crate) fn check_alpha(lo: f64, hi: f64) -> Result<(), SpecError> {
    if lo.abs() > MAX_ABS_ALPHA || hi.abs() > MAX_ABS_ALPHA {
        return Err(SpecError::AlphaOutOfRange(lo, hi));
    }
    Ok(())
}

pub(crate) fn check_theta(lo: f64, hi: f64) -> Result<(), SpecError> {
    let ok = |t: f64| (0.0..=PI).contains(&t);
    if !(ok(lo) && ok(hi)) {
        return Err(SpecError::ThetaOutOfRange(lo, hi));
    }
    Ok(())
}
