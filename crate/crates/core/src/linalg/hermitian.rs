use num_complex::Complex64;

use super::{LinalgError, SquareMatrix};

/// Relative Hermiticity tolerance accepted by [`hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Off-diagonal Frobenius norm, relative to the input norm, at which Jacobi stops.
const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;
/// Eigenvalues of a PSD input may dip this far below zero from rounding.
pub const PSD_CLAMP: f64 = 1e-12;

/// Spectrum and eigenbasis of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: SquareMatrix,
}

impl HermitianEigen {
    /// `V · diag(f(λ)) · V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> Complex64) -> SquareMatrix {
        let n = self.vectors.dim();
        let fl: Vec<Complex64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let mut out = SquareMatrix::zeros(n).expect("dimension already validated");
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += v[(i, k)] * fl[k] * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }
}

fn off_diagonal_norm(a: &SquareMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic complex Jacobi eigensolver.
pub fn hermitian_eig(h: &SquareMatrix) -> Result<HermitianEigen, LinalgError> {
    let n = h.dim();
    let norm = h.frobenius_norm();
    if !norm.is_finite() {
        return Err(LinalgError::NonFinite("hermitian_eig input"));
    }
    let asymmetry = h.hermitian_defect();
    if asymmetry > HERMITIAN_TOL * norm {
        return Err(LinalgError::NotHermitian { asymmetry, norm });
    }

    // work on the exactly Hermitian part
    let mut a = h.clone();
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in i + 1..n {
            let avg = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = SquareMatrix::identity(n)?;

    let mut converged = norm == 0.0;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if converged || off_diagonal_norm(&a) < JACOBI_TOL * norm {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) >= JACOBI_TOL * norm {
        return Err(LinalgError::NoConvergence {
            routine: "hermitian_eig",
            iterations: JACOBI_MAX_SWEEPS,
            matrix: h.clone(),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = SquareMatrix::zeros(n)?;
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = v[(i, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// One Jacobi rotation annihilating `a[p][q]`, accumulated into `v`.
///
/// The rotation is `G = diag(1, e^{-iφ}) · [[c, s], [-s, c]]` on the `(p, q)`
/// plane where `a[p][q] = |a[p][q]| e^{iφ}`; `a ← G† a G`.
fn rotate(a: &mut SquareMatrix, v: &mut SquareMatrix, p: usize, q: usize) {
    let n = a.dim();
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / mag;

    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau.abs() > 1e150 {
        0.5 / tau
    } else {
        let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
        sign / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(app - t * mag, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * mag, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// Principal square root of a positive-semidefinite Hermitian matrix.
pub fn psd_sqrt(h: &SquareMatrix) -> Result<SquareMatrix, LinalgError> {
    let eig = hermitian_eig(h)?;
    if let Some(&value) = eig.values.iter().find(|&&l| l < -PSD_CLAMP) {
        return Err(LinalgError::NegativeEigenvalue { value });
    }
    Ok(eig.map_spectrum(|l| Complex64::new(l.max(0.0).sqrt(), 0.0)))
}

/// `e^{i t h}` for Hermitian `h`.
pub fn exp_i_hermitian(h: &SquareMatrix, t: f64) -> Result<SquareMatrix, LinalgError> {
    let eig = hermitian_eig(h)?;
    let u = eig.map_spectrum(|l| Complex64::from_polar(1.0, t * l));
    if !u.is_finite() {
        return Err(LinalgError::NonFinite("exp_i_hermitian"));
    }
    Ok(u)
}
