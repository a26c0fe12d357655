use std::f64::consts::{FRAC_PI_2, PI};

use holonomy::PrefactorConvention;
use holonomy_sweep::emit::{read_csv, write_csv};
use holonomy_sweep::{
    compare_methods, cross_section, emit, run_eigen_sweep, run_point, run_sweep, EmitError, Fixed, Format, GridRange,
    Method, SweepSpec,
};

fn uhlmann_only(two_j: Vec<u32>) -> SweepSpec {
    SweepSpec {
        two_j_list: two_j,
        methods: vec![Method::Uhlmann],
        ..SweepSpec::default()
    }
}

#[test]
fn default_row_count() {
    let spec = SweepSpec {
        powers: vec![1, 3],
        ..SweepSpec::default()
    };
    let r = run_sweep(&spec).unwrap();
    assert_eq!(r.len(), 10 * 2 * 2 * 50 * 50);
    for rec in &r {
        assert!(rec.phase > -PI && rec.phase <= PI);
        assert!((rec.trace().norm() - rec.visibility).abs() < 1e-14);
        assert!(rec.error.is_none());
    }
}

#[test]
fn published_point() {
    let r = run_point(&uhlmann_only(vec![1]), 5.0, FRAC_PI_2).unwrap();
    assert_eq!(r.len(), 1);
    assert!((r[0].visibility - 0.871618).abs() < 5e-6);
}

#[test]
fn eigen_spin_half_maximally_mixed() {
    let spec = SweepSpec {
        alpha_range: GridRange::new(0.0, 0.0, 2),
        theta_range: GridRange::new(0.0, PI, 9),
        ..uhlmann_only(vec![1])
    };
    for r in run_eigen_sweep(&spec).unwrap() {
        assert!((r.eigen_abs - 0.5).abs() < 1e-14);
    }
}

#[test]
fn eigen_ranks_sum_to_trace() {
    let spec = SweepSpec {
        alpha_range: GridRange::new(0.0, 5.0, 8),
        theta_range: GridRange::new(0.0, FRAC_PI_2, 8),
        ..uhlmann_only(vec![1, 2, 4, 9])
    };
    let eig = run_eigen_sweep(&spec).unwrap();
    let tr = run_sweep(&spec).unwrap();
    let mut at = 0;
    for t in &tr {
        let group = &eig[at..at + t.n];
        at += t.n;
        assert!(group.iter().enumerate().all(|(i, e)| e.rank == i + 1 && e.alpha == t.alpha && e.theta == t.theta));
        let (re, im) = group.iter().fold((0.0, 0.0), |(a, b), e| (a + e.eigen_re, b + e.eigen_im));
        assert!((re - t.trace_re).abs() < 1e-9 && (im - t.trace_im).abs() < 1e-9);
        assert!(group.windows(2).all(|w| w[0].eigen_abs >= w[1].eigen_abs));
    }
    assert_eq!(at, eig.len());
}

#[test]
fn eigen_spin_one_central_rank_is_real() {
    let spec = uhlmann_only(vec![2]);
    let bad: Vec<_> = run_eigen_sweep(&spec)
        .unwrap()
        .into_iter()
        .filter(|r| r.rank == 2 && r.eigen_im.abs() >= 1e-9)
        .map(|r| (r.alpha, r.theta, r.eigen_im))
        .collect();
    assert!(bad.is_empty(), "{} grid points with complex rank-2 eigenvalue, e.g. {:?}", bad.len(), bad.first());
}

fn phases_by_n(spec: &SweepSpec, fixed: Fixed) -> Vec<Vec<f64>> {
    let recs = cross_section(spec, fixed).unwrap();
    spec.two_j_list
        .iter()
        .map(|&tj| recs.iter().filter(|r| r.n == tj as usize + 1).map(|r| r.phase).collect())
        .collect()
}

fn ordered(curves: &[Vec<f64>], order: &[usize]) -> bool {
    (0..curves[0].len()).all(|i| order.windows(2).all(|w| curves[w[0]][i] > curves[w[1]][i]))
}

#[test]
fn uhlmann_phase_dominance_at_alpha_one() {
    let spec = SweepSpec {
        theta_range: GridRange::new(0.05, 1.5, 30),
        ..uhlmann_only((1..=10).collect())
    };
    let curves = phases_by_n(&spec, Fixed::Alpha(1.0));
    assert!(ordered(&curves, &(0..10).collect::<Vec<_>>()));
}

#[test]
fn uhlmann_phase_dominance_at_theta_pi_over_ten() {
    let spec = SweepSpec {
        alpha_range: GridRange::new(0.25, 5.0, 30),
        ..uhlmann_only((1..=10).collect())
    };
    let curves = phases_by_n(&spec, Fixed::Theta(PI / 10.0));
    assert!(ordered(&curves, &(0..10).collect::<Vec<_>>()));
}

#[test]
fn sjoqvist_even_then_odd_at_theta_pi_over_ten() {
    // index i is n = i + 2: 2,4,6,8,10 then 3,5,7,9,11
    let order = [0, 2, 4, 6, 8, 1, 3, 5, 7, 9];
    let base = SweepSpec {
        two_j_list: (1..=10).collect(),
        alpha_range: GridRange::new(0.25, 5.0, 20),
        methods: vec![Method::Sjoqvist],
        ..SweepSpec::default()
    };
    let unsigned = SweepSpec {
        convention: PrefactorConvention::Unsigned,
        ..base.clone()
    };
    assert!(ordered(&phases_by_n(&unsigned, Fixed::Theta(PI / 10.0)), &order));
    // the direct signed sum moves every even-n curve by π
    assert!(!ordered(&phases_by_n(&base, Fixed::Theta(PI / 10.0)), &order));
}

#[test]
fn reduction_residual_vanishes_at_a_zero() {
    let spec = SweepSpec {
        alpha_range: GridRange::new(0.0, 5.0, 15),
        theta_range: GridRange::new(0.0, FRAC_PI_2, 15),
        powers: vec![1, 2, 3],
        a_override: Some(0.0),
        ..SweepSpec::default()
    };
    for r in compare_methods(&spec).unwrap() {
        assert!(r.reduction_residual < 1e-12, "{r:?}");
    }
}

#[test]
fn compare_flags_degenerate_ratios() {
    let spec = SweepSpec {
        alpha_range: GridRange::new(0.0, 5.0, 6),
        theta_range: GridRange::new(0.0, FRAC_PI_2, 6),
        ..SweepSpec::default()
    };
    for r in compare_methods(&spec).unwrap() {
        if r.theta == 0.0 {
            assert!(r.phase_ratio.is_nan());
            assert!(r.flags.as_deref().unwrap().contains("phase_ratio_undefined"));
        } else if r.uhlmann_phase.abs() >= 1e-12 {
            assert!((r.phase_ratio - r.sjoqvist_phase / r.uhlmann_phase).abs() < 1e-15 * r.phase_ratio.abs().max(1.0));
        }
    }
    let one = SweepSpec {
        methods: vec![Method::Uhlmann],
        ..spec
    };
    assert!(compare_methods(&one).is_err());
}

fn alpha_zero_rows() -> Vec<holonomy_sweep::CompareRecord> {
    let spec = SweepSpec {
        alpha_range: GridRange::new(0.0, 5.0, 6),
        theta_range: GridRange::new(0.0, FRAC_PI_2, 6),
        ..SweepSpec::default()
    };
    compare_methods(&spec).unwrap().into_iter().filter(|r| r.alpha == 0.0).collect()
}

#[test]
fn visibility_ratio_is_one_at_alpha_zero() {
    let bad: Vec<_> = alpha_zero_rows()
        .into_iter()
        .filter(|r| (r.visibility_ratio - 1.0).abs() >= 1e-12)
        .map(|r| (r.n, r.theta, r.visibility_ratio))
        .collect();
    assert!(bad.is_empty(), "{} rows off 1, e.g. {:?}", bad.len(), bad.first());
}

#[test]
fn alpha_zero_visibilities() {
    // maximally mixed: Uhlmann trace is 1, Sjöqvist is the plain mean of Berry factors
    for r in alpha_zero_rows() {
        assert!((r.uhlmann_visibility - 1.0).abs() < 1e-12);
        let j = (r.n as f64 - 1.0) / 2.0;
        let mean: holonomy::Complex64 = (0..r.n)
            .map(|k| holonomy::Complex64::from_polar(1.0, -2.0 * PI * (j - k as f64) * (1.0 - r.theta.cos())))
            .sum::<holonomy::Complex64>()
            / r.n as f64;
        assert!((r.sjoqvist_visibility - mean.norm()).abs() < 1e-12);
        assert!((r.visibility_ratio - mean.norm()).abs() < 1e-12);
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let spec = SweepSpec {
        alpha_range: GridRange::new(-2.0, 5.0, 9),
        theta_range: GridRange::new(0.0, PI, 9),
        powers: vec![1, 2, 5],
        ..SweepSpec::default()
    };
    let text = |workers| {
        let mut buf = Vec::new();
        write_csv(&run_sweep(&SweepSpec { workers, ..spec.clone() }).unwrap(), &mut buf).unwrap();
        buf
    };
    let one = text(1);
    assert_eq!(one, text(3));
    assert_eq!(one, text(8));
}

#[test]
fn file_round_trip_and_io_errors() {
    let recs = run_sweep(&SweepSpec {
        alpha_range: GridRange::new(0.0, 5.0, 4),
        theta_range: GridRange::new(0.0, FRAC_PI_2, 4),
        ..SweepSpec::default()
    })
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    for (name, format) in [("a.csv", Format::Csv), ("a.json", Format::Json)] {
        let path = dir.path().join(name);
        emit(&recs, format, &path).unwrap();
        let back: Vec<holonomy_sweep::SweepRecord> = holonomy_sweep::read_from(&path, format).unwrap();
        assert_eq!(back.len(), recs.len());
        for (a, b) in back.iter().zip(&recs) {
            assert_eq!(a.trace_re.to_bits(), b.trace_re.to_bits());
            assert_eq!(a.phase.to_bits(), b.phase.to_bits());
            assert_eq!(a.theta.to_bits(), b.theta.to_bits());
        }
    }
    let missing = dir.path().join("no/such/dir/out.csv");
    match emit(&recs, Format::Csv, &missing) {
        Err(EmitError::Io { path, .. }) => assert_eq!(path, missing),
        other => panic!("expected an I/O error, got {other:?}"),
    }
    let bad = b"n,method\n2,uhlmann\n";
    assert!(read_csv::<holonomy_sweep::SweepRecord, _>(&bad[..]).is_err());
}

#[test]
fn invalid_specs_rejected() {
    let mut s = SweepSpec::default();
    s.two_j_list.clear();
    assert!(run_sweep(&s).is_err());
    let s = SweepSpec {
        a_override: Some(1.5),
        ..SweepSpec::default()
    };
    assert!(run_sweep(&s).is_err());
    assert!(cross_section(&SweepSpec::default(), Fixed::Alpha(f64::NAN)).is_err());
    assert!(run_point(&SweepSpec::default(), 0.0, -0.1).is_err());
}
