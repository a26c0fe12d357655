//! General complex eigenvalues: balancing, Householder reduction to upper
//! Hessenberg form, then implicit single-shift QR with Wilkinson shifts.

use std::cmp::Ordering;

use num_complex::Complex64;

use super::{LinalgError, SquareMatrix};

const DEFLATION_TOL: f64 = 1e-14;
const ITERATIONS_PER_EIGENVALUE: usize = 30;
const BALANCE_RADIX: f64 = 2.0;
const BALANCE_MAX_PASSES: usize = 64;

/// Eigenvalues ordered by descending modulus, then descending real part,
/// then descending imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    values: Vec<Complex64>,
}

impl ComplexSpectrum {
    pub fn from_unsorted(mut values: Vec<Complex64>) -> Self {
        values.sort_by(spectral_order);
        Self { values }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    pub fn product(&self) -> Complex64 {
        self.values.iter().product()
    }

    /// `Σ λ^k`.
    pub fn power_sum(&self, k: u32) -> Complex64 {
        self.values.iter().map(|z| z.powu(k)).sum()
    }

    /// The `⌈n/2⌉`-th value (1-based) in spectral order.
    pub fn central(&self) -> Complex64 {
        self.values[(self.values.len() - 1) / 2]
    }
}

impl std::ops::Index<usize> for ComplexSpectrum {
    type Output = Complex64;

    fn index(&self, k: usize) -> &Complex64 {
        &self.values[k]
    }
}

fn spectral_order(a: &Complex64, b: &Complex64) -> Ordering {
    b.norm()
        .total_cmp(&a.norm())
        .then_with(|| b.re.total_cmp(&a.re))
        .then_with(|| b.im.total_cmp(&a.im))
}

pub fn general_eigenvalues(a: &SquareMatrix) -> Result<ComplexSpectrum, LinalgError> {
    if !a.is_finite() {
        return Err(LinalgError::NonFinite("general_eigenvalues input"));
    }
    let mut h = a.clone();
    balance(&mut h);
    reduce_to_hessenberg(&mut h);
    let values = hessenberg_qr(&mut h).map_err(|iterations| LinalgError::NoConvergence {
        routine: "general_eigenvalues",
        iterations,
        matrix: a.clone(),
    })?;
    Ok(ComplexSpectrum::from_unsorted(values))
}

#[inline]
fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity `D⁻¹ A D` with power-of-two entries, equalizing
/// off-diagonal row and column norms. Exact in floating point.
fn balance(a: &mut SquareMatrix) {
    let n = a.dim();
    let sqr_radix = BALANCE_RADIX * BALANCE_RADIX;
    for _ in 0..BALANCE_MAX_PASSES {
        let mut done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += abs1(a[(j, i)]);
                    r += abs1(a[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / BALANCE_RADIX;
            while c < g {
                f *= BALANCE_RADIX;
                c *= sqr_radix;
            }
            g = r * BALANCE_RADIX;
            while c > g {
                f /= BALANCE_RADIX;
                c /= sqr_radix;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= inv;
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

fn reduce_to_hessenberg(a: &mut SquareMatrix) {
    let n = a.dim();
    if n < 3 {
        return;
    }
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let len = n - k - 1;
        let tail: f64 = (k + 2..n).map(|i| a[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let xnorm = (x0.norm_sqr() + tail).sqrt();
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;

        for (i, vi) in v.iter_mut().take(len).enumerate() {
            *vi = a[(k + 1 + i, k)];
        }
        v[0] -= alpha;
        let vnorm2: f64 = v[..len].iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;

        // left: (I - β v v†) A on rows k+1.., columns k..
        for j in k..n {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..len {
                s += v[i].conj() * a[(k + 1 + i, j)];
            }
            s *= beta;
            for i in 0..len {
                a[(k + 1 + i, j)] -= v[i] * s;
            }
        }
        // right: A (I - β v v†) on all rows, columns k+1..
        for i in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for l in 0..len {
                s += a[(i, k + 1 + l)] * v[l];
            }
            s *= beta;
            for l in 0..len {
                a[(i, k + 1 + l)] -= s * v[l].conj();
            }
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Givens pair `(c, s)` with real `c` such that
/// `[[c, s], [-s̄, c]] · [x, y]ᵀ = [r, 0]ᵀ`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let nrm = ax.hypot(ay);
    (ax / nrm, (x / ax) * y.conj() / nrm)
}

fn wilkinson_shift(h: &SquareMatrix, hi: usize) -> Complex64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let r1 = mean + disc;
    let r2 = mean - disc;
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

/// Eigenvalues of an upper Hessenberg matrix; `Err` carries the iteration count
/// on failure.
fn hessenberg_qr(h: &mut SquareMatrix) -> Result<Vec<Complex64>, usize> {
    let n = h.dim();
    let cap = ITERATIONS_PER_EIGENVALUE * n;
    let safe_min = f64::MIN_POSITIVE * (n as f64) / f64::EPSILON;
    let mut values = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut its = 0usize;

    loop {
        if hi == 0 {
            values.push(h[(0, 0)]);
            break;
        }
        // search for a negligible subdiagonal entry
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let mut scale = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if scale == 0.0 {
                scale = window_norm(h, l - 1, hi);
            }
            if sub <= DEFLATION_TOL * scale || sub <= safe_min {
                h[(l, l - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            values.push(h[(hi, hi)]);
            hi -= 1;
            its = 0;
            continue;
        }
        its += 1;
        if its > cap {
            return Err(its);
        }

        let shift = if its % 10 == 0 {
            // exceptional shift to break cycles
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(h, hi)
        };

        qr_sweep(h, l, hi, shift);
    }
    Ok(values)
}

fn window_norm(h: &SquareMatrix, lo: usize, hi: usize) -> f64 {
    let mut s: f64 = 0.0;
    for i in lo..=hi {
        for j in lo..=hi {
            s = s.max(h[(i, j)].norm());
        }
    }
    s
}

/// One implicit single-shift QR step on the unreduced block `l..=hi`.
fn qr_sweep(h: &mut SquareMatrix, l: usize, hi: usize, shift: Complex64) {
    for k in l..hi {
        let (x, y) = if k == l {
            (h[(l, l)] - shift, h[(l + 1, l)])
        } else {
            (h[(k, k - 1)], h[(k + 1, k - 1)])
        };
        let (c, s) = givens(x, y);
        let col_start = if k == l { l } else { k - 1 };

        for j in col_start..=hi {
            let t1 = h[(k, j)];
            let t2 = h[(k + 1, j)];
            h[(k, j)] = t1 * c + s * t2;
            h[(k + 1, j)] = -s.conj() * t1 + t2 * c;
        }
        let row_end = (k + 2).min(hi);
        for i in l..=row_end {
            let t1 = h[(i, k)];
            let t2 = h[(i, k + 1)];
            h[(i, k)] = t1 * c + t2 * s.conj();
            h[(i, k + 1)] = -t1 * s + t2 * c;
        }
        if k > l {
            h[(k + 1, k - 1)] = Complex64::new(0.0, 0.0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn upper_triangular() {
        let m = SquareMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, 1.0), c(3.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 1.0), c(-2.0, 0.5)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        ])
        .unwrap();
        let spec = general_eigenvalues(&m).unwrap();
        // |i| = |-1|: ties resolved by descending real part
        assert_eq!(spec.values(), &[c(2.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]);
    }

    #[test]
    fn one_by_one() {
        let m = SquareMatrix::from_diagonal(&[c(0.3, -0.4)]).unwrap();
        assert_eq!(general_eigenvalues(&m).unwrap().values(), &[c(0.3, -0.4)]);
    }

    #[test]
    fn rotation_has_unit_modulus_pair() {
        let t: f64 = 0.7;
        let m = SquareMatrix::from_rows(&[
            vec![c(t.cos(), 0.0), c(-t.sin(), 0.0)],
            vec![c(t.sin(), 0.0), c(t.cos(), 0.0)],
        ])
        .unwrap();
        let spec = general_eigenvalues(&m).unwrap();
        for z in spec.values() {
            assert!((z.norm() - 1.0).abs() < 1e-14);
        }
        assert!((spec[0] - c(t.cos(), t.sin())).norm() < 1e-14);
        assert!((spec[1] - c(t.cos(), -t.sin())).norm() < 1e-14);
    }

    #[test]
    fn nilpotent_and_zero() {
        let z = SquareMatrix::zeros(4).unwrap();
        assert!(general_eigenvalues(&z).unwrap().values().iter().all(|v| v.norm() == 0.0));
        let mut j = SquareMatrix::zeros(3).unwrap();
        j[(1, 0)] = c(1.0, 0.0);
        j[(2, 1)] = c(1.0, 0.0);
        let spec = general_eigenvalues(&j).unwrap();
        assert!(spec.values().iter().all(|v| v.norm() < 1e-4));
    }

    #[test]
    fn ordering_is_total() {
        let s = ComplexSpectrum::from_unsorted(vec![c(0.0, -1.0), c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]);
        assert_eq!(s.values(), &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(-1.0, 0.0)]);
        assert_eq!(s.central(), c(0.0, 1.0));
    }
}
