use num_complex::Complex64;

use super::SquareMatrix;

/// Doolittle LU with row partial pivoting, reduced to the determinant.
pub(super) fn determinant(a: &SquareMatrix) -> Complex64 {
    let n = a.dim();
    let mut m: Vec<Complex64> = a.entries().to_vec();
    let mut det = Complex64::new(1.0, 0.0);

    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&r, &s| m[r * n + k].norm().total_cmp(&m[s * n + k].norm()))
            .unwrap();
        let pivot = m[pivot_row * n + k];
        if pivot.norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot_row != k {
            for j in 0..n {
                m.swap(k * n + j, pivot_row * n + j);
            }
            det = -det;
        }
        det *= pivot;
        for r in k + 1..n {
            let factor = m[r * n + k] / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in k + 1..n {
                let upper = m[k * n + j];
                m[r * n + j] -= factor * upper;
            }
        }
    }
    det
}
