//! Grid evaluation. Every point is independent; results are produced in
//! parallel and always returned in canonical order.

use holonomy::gibbs::gibbs_state;
use holonomy::linalg::{general_eigenvalues, LinalgError};
use holonomy::phase::phase_and_visibility;
use holonomy::uhlmann::trace_powers;
use holonomy::{
    holonomy_invariant, sjoqvist_trace_power, Complex64, PrefactorConvention, ScenarioParams, Spin, UhlmannError,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::spec::{check_alpha, check_theta, Method, SpecError, SweepSpec};

/// Denominators below this make a ratio meaningless.
pub const RATIO_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n: usize,
    pub method: Method,
    pub alpha: f64,
    pub theta: f64,
    pub power: u32,
    #[serde(with = "crate::emit::nan_as_null")]
    pub trace_re: f64,
    #[serde(with = "crate::emit::nan_as_null")]
    pub trace_im: f64,
    #[serde(with = "crate::emit::nan_as_null")]
    pub phase: f64,
    #[serde(with = "crate::emit::nan_as_null")]
    pub visibility: f64,
    pub error: Option<String>,
}

impl SweepRecord {
    pub fn trace(&self) -> Complex64 {
        Complex64::new(self.trace_re, self.trace_im)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenRecord {
    pub n: usize,
    pub alpha: f64,
    pub theta: f64,
    /// 1-based, by descending modulus.
    pub rank: usize,
    #[serde(with = "crate::emit::nan_as_null")]
    pub eigen_re: f64,
    #[serde(with = "crate::emit::nan_as_null")]
    pub eigen_im: f64,
    #[serde(with = "crate::emit::nan_as_null")]
    pub eigen_arg: f64,
    #[serde(with = "crate::emit::nan_as_null")]
    pub eigen_abs: f64,
    pub error: Option<String>,
}

/// Sjöqvist over Uhlmann at one grid point and power.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompareRecord {
    pub n: usize,
    pub alpha: f64,
    pub theta: f64,
    pub power: u32,
    #[serde(with = "crate::emit::nan_as_null")]
    pub uhlmann_phase: f64,
    #[serde(with = "crate::emit::nan_as_null")]
    pub sjoqvist_phase: f64,
    #[serde(with = "crate::emit::nan_as_null")]
    pub phase_ratio: f64,
    #[serde(with = "crate::emit::nan_as_null")]
    pub uhlmann_visibility: f64,
    #[serde(with = "crate::emit::nan_as_null")]
    pub sjoqvist_visibility: f64,
    #[serde(with = "crate::emit::nan_as_null")]
    pub visibility_ratio: f64,
    /// `|tr M_U^k − (−1)^{(n+1)k} tr M_S^k|` with unsigned Uhlmann and signed
    /// Sjöqvist operators; zero when `a = 0`.
    #[serde(with = "crate::emit::nan_as_null")]
    pub reduction_residual: f64,
    /// `|`-separated: `phase_ratio_undefined`, `visibility_ratio_undefined`, or an error tag.
    pub flags: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fixed {
    Alpha(f64),
    Theta(f64),
}

/// Short stable tag for a per-point failure.
pub fn error_tag(e: &UhlmannError) -> &'static str {
    match e {
        UhlmannError::Linalg(LinalgError::NoConvergence { .. }) => "no_convergence",
        UhlmannError::Linalg(LinalgError::NonFinite(_)) => "non_finite",
        UhlmannError::Linalg(_) => "linalg",
        UhlmannError::KappaZero { .. } => "kappa_zero",
        UhlmannError::Gibbs(_) => "gibbs",
        _ => "invalid_point",
    }
}

/// One concrete grid, resolved from a `SweepSpec` into value lists.
struct Grid {
    spins: Vec<u32>,
    alphas: Vec<f64>,
    thetas: Vec<f64>,
}

impl Grid {
    fn from_spec(spec: &SweepSpec) -> Self {
        Self {
            spins: spec.canonical_spins(),
            alphas: spec.alpha_range.values(),
            thetas: spec.theta_range.values(),
        }
    }

    /// `(two_j, alpha, theta)` in (n, α index, θ index) order.
    fn points(&self) -> Vec<(u32, f64, f64)> {
        let mut v = Vec::with_capacity(self.spins.len() * self.alphas.len() * self.thetas.len());
        for &tj in &self.spins {
            for &a in &self.alphas {
                for &t in &self.thetas {
                    v.push((tj, a, t));
                }
            }
        }
        v
    }
}

fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
}

fn scenario(two_j: u32, alpha: f64, theta: f64, a_override: Option<f64>) -> Result<ScenarioParams, UhlmannError> {
    let spin = Spin::from_two_j(two_j).expect("validated spin");
    let p = ScenarioParams::new(spin, alpha, theta)?;
    match a_override {
        Some(a) => p.with_a_override(a),
        None => Ok(p),
    }
}

/// `tr M^k` for `k = 1..=k_max`.
fn traces_at(
    method: Method,
    p: &ScenarioParams,
    k_max: u32,
    convention: PrefactorConvention,
) -> Result<Vec<Complex64>, UhlmannError> {
    match method {
        Method::Uhlmann => {
            let m = holonomy_invariant(p, convention)?;
            if !m.is_finite() {
                return Err(LinalgError::NonFinite("holonomy invariant").into());
            }
            trace_powers(&m, k_max)
        }
        Method::Sjoqvist => {
            let g = gibbs_state(p.spin, p.alpha)?;
            Ok((1..=k_max).map(|k| sjoqvist_trace_power(&g, p.theta, k, convention)).collect())
        }
    }
}

fn sweep_grid(spec: &SweepSpec, grid: &Grid) -> Vec<SweepRecord> {
    let methods = spec.canonical_methods();
    let powers = spec.canonical_powers();
    let k_max = *powers.last().expect("validated powers");
    let points = grid.points();
    let tasks: Vec<(Method, (u32, f64, f64))> = methods
        .iter()
        .flat_map(|&m| points.iter().map(move |&pt| (m, pt)))
        .collect();

    let results: Vec<Result<Vec<Complex64>, UhlmannError>> = pool(spec.workers).install(|| {
        tasks
            .par_iter()
            .map(|&(m, (tj, a, t))| {
                let p = scenario(tj, a, t, spec.a_override)?;
                traces_at(m, &p, k_max, spec.convention)
            })
            .collect()
    });

    // tasks are (method, n, α, θ); emit (n, method, power, α, θ)
    let per_spin = grid.alphas.len() * grid.thetas.len();
    let per_method = points.len();
    let mut out = Vec::with_capacity(tasks.len() * powers.len());
    for (si, &tj) in grid.spins.iter().enumerate() {
        for (mi, &method) in methods.iter().enumerate() {
            for &k in &powers {
                for off in 0..per_spin {
                    let idx = mi * per_method + si * per_spin + off;
                    let (_, (_, alpha, theta)) = tasks[idx];
                    out.push(make_record(tj, method, alpha, theta, k, &results[idx]));
                }
            }
        }
    }
    out
}

fn make_record(
    two_j: u32,
    method: Method,
    alpha: f64,
    theta: f64,
    power: u32,
    res: &Result<Vec<Complex64>, UhlmannError>,
) -> SweepRecord {
    let n = two_j as usize + 1;
    match res {
        Ok(traces) => {
            let z = traces[power as usize - 1];
            let (phase, visibility) = phase_and_visibility(z);
            SweepRecord {
                n,
                method,
                alpha,
                theta,
                power,
                trace_re: z.re,
                trace_im: z.im,
                phase,
                visibility,
                error: None,
            }
        }
        Err(e) => SweepRecord {
            n,
            method,
            alpha,
            theta,
            power,
            trace_re: f64::NAN,
            trace_im: f64::NAN,
            phase: f64::NAN,
            visibility: f64::NAN,
            error: Some(error_tag(e).to_owned()),
        },
    }
}

/// One record per `(n, method, power, α, θ)`, in that order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>, SpecError> {
    spec.validate()?;
    Ok(sweep_grid(spec, &Grid::from_spec(spec)))
}

/// A `SweepSpec`'s spins, methods and powers at a single `(α, θ)`; its
/// own ranges are ignored.
pub fn run_point(spec: &SweepSpec, alpha: f64, theta: f64) -> Result<Vec<SweepRecord>, SpecError> {
    spec.validate()?;
    pin_alpha(alpha)?;
    pin_theta(theta)?;
    let grid = Grid {
        spins: spec.canonical_spins(),
        alphas: vec![alpha],
        thetas: vec![theta],
    };
    Ok(sweep_grid(spec, &grid))
}

fn pin_alpha(a: f64) -> Result<(), SpecError> {
    if !a.is_finite() {
        return Err(SpecError::NonFinite("alpha"));
    }
    check_alpha(a, a)
}

fn pin_theta(t: f64) -> Result<(), SpecError> {
    if !t.is_finite() {
        return Err(SpecError::NonFinite("theta"));
    }
    check_theta(t, t)
}

/// A `SweepSpec` grid with one axis pinned to a single value.
pub fn cross_section(spec: &SweepSpec, fixed: Fixed) -> Result<Vec<SweepRecord>, SpecError> {
    spec.validate()?;
    let mut grid = Grid::from_spec(spec);
    match fixed {
        Fixed::Alpha(a) => {
            pin_alpha(a)?;
            grid.alphas = vec![a];
        }
        Fixed::Theta(t) => {
            pin_theta(t)?;
            grid.thetas = vec![t];
        }
    }
    Ok(sweep_grid(spec, &grid))
}

/// Full Uhlmann spectrum at every grid point: `n` records per point, ranks ascending.
pub fn run_eigen_sweep(spec: &SweepSpec) -> Result<Vec<EigenRecord>, SpecError> {
    spec.validate()?;
    if spec.canonical_methods() != [Method::Uhlmann] {
        return Err(SpecError::Methods("eigen sweep needs methods = {uhlmann}"));
    }
    let grid = Grid::from_spec(spec);
    let points = grid.points();
    let spectra: Vec<Result<Vec<Complex64>, UhlmannError>> = pool(spec.workers).install(|| {
        points
            .par_iter()
            .map(|&(tj, a, t)| {
                let p = scenario(tj, a, t, spec.a_override)?;
                let m = holonomy_invariant(&p, spec.convention)?;
                Ok(general_eigenvalues(&m)?.values().to_vec())
            })
            .collect()
    });

    let mut out = Vec::new();
    for (&(tj, alpha, theta), res) in points.iter().zip(&spectra) {
        let n = tj as usize + 1;
        for rank in 1..=n {
            out.push(match res {
                Ok(vals) => {
                    let z = vals[rank - 1];
                    let (arg, abs) = phase_and_visibility(z);
                    EigenRecord {
                        n,
                        alpha,
                        theta,
                        rank,
                        eigen_re: z.re,
                        eigen_im: z.im,
                        eigen_arg: arg,
                        eigen_abs: abs,
                        error: None,
                    }
                }
                Err(e) => EigenRecord {
                    n,
                    alpha,
                    theta,
                    rank,
                    eigen_re: f64::NAN,
                    eigen_im: f64::NAN,
                    eigen_arg: f64::NAN,
                    eigen_abs: f64::NAN,
                    error: Some(error_tag(e).to_owned()),
                },
            });
        }
    }
    Ok(out)
}

/// Uhlmann traces, Sjöqvist traces, reduction residuals; one entry per power.
type Paired = (Vec<Complex64>, Vec<Complex64>, Vec<f64>);

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den.abs() >= RATIO_FLOOR).then(|| num / den)
}

/// Ratios Sjöqvist/Uhlmann of phases and visibilities, in (n, power, α, θ) order.
pub fn compare_methods(spec: &SweepSpec) -> Result<Vec<CompareRecord>, SpecError> {
    spec.validate()?;
    let methods = spec.canonical_methods();
    if methods != [Method::Uhlmann, Method::Sjoqvist] {
        return Err(SpecError::Methods("compare needs both methods"));
    }
    let grid = Grid::from_spec(spec);
    let powers = spec.canonical_powers();
    let k_max = *powers.last().expect("validated powers");
    let points = grid.points();

    let results: Vec<Result<Paired, UhlmannError>> = pool(spec.workers).install(|| {
        points
            .par_iter()
            .map(|&(tj, a, t)| {
                let p = scenario(tj, a, t, spec.a_override)?;
                let u = traces_at(Method::Uhlmann, &p, k_max, spec.convention)?;
                let s = traces_at(Method::Sjoqvist, &p, k_max, spec.convention)?;
                let u_raw = traces_at(Method::Uhlmann, &p, k_max, PrefactorConvention::Unsigned)?;
                let s_raw = traces_at(Method::Sjoqvist, &p, k_max, PrefactorConvention::Signed)?;
                let n = tj as usize + 1;
                let residual = (1..=k_max)
                    .map(|k| {
                        let odd = n % 2 == 0 && k % 2 == 1;
                        let sign = if odd { -1.0 } else { 1.0 };
                        (u_raw[k as usize - 1] - s_raw[k as usize - 1] * sign).norm()
                    })
                    .collect();
                Ok((u, s, residual))
            })
            .collect()
    });

    let per_spin = grid.alphas.len() * grid.thetas.len();
    let mut out = Vec::with_capacity(points.len() * powers.len());
    for si in 0..grid.spins.len() {
        for &k in &powers {
            for off in 0..per_spin {
                let idx = si * per_spin + off;
                let (tj, alpha, theta) = points[idx];
                out.push(compare_record(tj as usize + 1, alpha, theta, k, &results[idx]));
            }
        }
    }
    Ok(out)
}

fn compare_record(
    n: usize,
    alpha: f64,
    theta: f64,
    power: u32,
    res: &Result<Paired, UhlmannError>,
) -> CompareRecord {
    let nan = f64::NAN;
    match res {
        Ok((u, s, residual)) => {
            let i = power as usize - 1;
            let (up, uv) = phase_and_visibility(u[i]);
            let (sp, sv) = phase_and_visibility(s[i]);
            let pr = ratio(sp, up);
            let vr = ratio(sv, uv);
            let mut flags = Vec::new();
            if pr.is_none() {
                flags.push("phase_ratio_undefined");
            }
            if vr.is_none() {
                flags.push("visibility_ratio_undefined");
            }
            CompareRecord {
                n,
                alpha,
                theta,
                power,
                uhlmann_phase: up,
                sjoqvist_phase: sp,
                phase_ratio: pr.unwrap_or(nan),
                uhlmann_visibility: uv,
                sjoqvist_visibility: sv,
                visibility_ratio: vr.unwrap_or(nan),
                reduction_residual: residual[i],
                flags: (!flags.is_empty()).then(|| flags.join("|")),
            }
        }
        Err(e) => CompareRecord {
            n,
            alpha,
            theta,
            power,
            uhlmann_phase: nan,
            sjoqvist_phase: nan,
            phase_ratio: nan,
            uhlmann_visibility: nan,
            sjoqvist_visibility: nan,
            visibility_ratio: nan,
            reduction_residual: nan,
            flags: Some(error_tag(e).to_owned()),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::GridRange;
    use std::f64::consts::FRAC_PI_2;

    fn single(two_j: u32, alpha: f64, theta: f64) -> SweepSpec {
        SweepSpec {
            two_j_list: vec![two_j],
            alpha_range: GridRange::new(alpha, alpha, 2),
            theta_range: GridRange::new(theta, theta, 2),
            methods: vec![Method::Uhlmann],
            ..SweepSpec::default()
        }
    }

    #[test]
    fn trivial_point() {
        let r = run_point(&single(1, 0.0, 0.0), 0.0, 0.0).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].phase, 0.0);
        assert!((r[0].visibility - 1.0).abs() < 1e-15);
    }

    #[test]
    fn spin_half_equator_visibility() {
        let r = run_sweep(&single(1, 5.0, FRAC_PI_2)).unwrap();
        assert!((r[0].visibility - 0.871618).abs() < 5e-6);
    }

    #[test]
    fn canonical_order() {
        let spec = SweepSpec {
            two_j_list: vec![2, 1],
            alpha_range: GridRange::new(0.0, 1.0, 2),
            theta_range: GridRange::new(0.0, 1.0, 3),
            methods: vec![Method::Sjoqvist, Method::Uhlmann],
            powers: vec![2, 1],
            ..SweepSpec::default()
        };
        let r = run_sweep(&spec).unwrap();
        assert_eq!(r.len(), 2 * 2 * 2 * 6);
        let keys: Vec<_> = r.iter().map(|x| (x.n, x.method, x.power)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!((r[0].n, r[0].method, r[0].power), (2, Method::Uhlmann, 1));
        // θ runs fastest
        assert_eq!((r[1].alpha, r[1].theta), (0.0, 0.5));
        assert_eq!((r[3].alpha, r[3].theta), (1.0, 0.0));
    }

    #[test]
    fn eigen_ranks() {
        let spec = single(1, 0.0, 0.7);
        let e = run_eigen_sweep(&spec).unwrap();
        assert_eq!(e.len(), 2 * 4);
        for r in &e {
            assert!((r.eigen_abs - 0.5).abs() < 1e-14);
        }
        let bad = SweepSpec::default();
        assert!(run_eigen_sweep(&bad).is_err());
    }

    #[test]
    fn compare_trivial_lines() {
        let spec = SweepSpec {
            two_j_list: vec![1, 2],
            alpha_range: GridRange::new(0.0, 2.0, 3),
            theta_range: GridRange::new(0.0, 1.0, 3),
            ..SweepSpec::default()
        };
        for r in compare_methods(&spec).unwrap() {
            if r.theta == 0.0 {
                assert!(r.uhlmann_phase.abs() < 1e-14);
                assert_eq!(r.sjoqvist_phase, 0.0);
                assert!(r.phase_ratio.is_nan());
                assert!(r.flags.as_deref().unwrap().contains("phase_ratio_undefined"));
            }
            if r.alpha == 0.0 {
                assert!((r.uhlmann_visibility - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cross_section_pins_axis() {
        let spec = SweepSpec {
            two_j_list: vec![1],
            methods: vec![Method::Uhlmann],
            ..SweepSpec::default()
        };
        let r = cross_section(&spec, Fixed::Alpha(1.0)).unwrap();
        assert_eq!(r.len(), 50);
        assert!(r.iter().all(|x| x.alpha == 1.0));
        assert!(cross_section(&spec, Fixed::Theta(7.0)).is_err());
    }
}
