//! Spin-j angular momentum matrices in the `|j, m⟩` basis.
//!
//! Rows and columns are ordered `m = j, j-1, …, -j`, so index `k` carries
//! `m = j - k` and `J_z` has strictly decreasing diagonal entries.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::SquareMatrix;

/// Largest supported `2j`; keeps `dim = 2j + 1` within the linalg size limit.
pub const MAX_TWO_J: u32 = 31;

#[derive(Debug, Clone, Copy, Error, PartialEq, Eq)]
pub enum SpinError {
    #[error("2j = {0} exceeds the supported maximum {MAX_TWO_J}")]
    TooLarge(u32),
    #[error("dimension {0} does not correspond to a supported spin (need 1..=32)")]
    InvalidDimension(usize),
}

/// Spin quantum number stored as the integer `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin {
    two_j: u32,
}

impl Spin {
    pub fn from_two_j(two_j: u32) -> Result<Self, SpinError> {
        if two_j > MAX_TWO_J {
            return Err(SpinError::TooLarge(two_j));
        }
        Ok(Self { two_j })
    }

    /// Spin whose representation has `dim = 2j + 1` levels.
    pub fn from_dim(dim: usize) -> Result<Self, SpinError> {
        if dim == 0 || dim > MAX_TWO_J as usize + 1 {
            return Err(SpinError::InvalidDimension(dim));
        }
        Ok(Self {
            two_j: dim as u32 - 1,
        })
    }

    pub fn two_j(self) -> u32 {
        self.two_j
    }

    pub fn dim(self) -> usize {
        self.two_j as usize + 1
    }

    pub fn j(self) -> f64 {
        f64::from(self.two_j) / 2.0
    }

    /// Half-integer spins pick up `-1` under a full `2π` rotation.
    pub fn is_fermionic(self) -> bool {
        self.two_j % 2 == 1
    }

    /// `(-1)^{2j}`.
    pub fn rotation_sign(self) -> f64 {
        if self.is_fermionic() {
            -1.0
        } else {
            1.0
        }
    }

    /// `2m` for basis index `k`.
    pub fn two_m(self, k: usize) -> i32 {
        self.two_j as i32 - 2 * k as i32
    }

    /// Basis index of the level with the given `2m`, if it exists.
    pub fn index_of(self, two_m: i32) -> Option<usize> {
        let tj = self.two_j as i32;
        if two_m.abs() > tj || (tj - two_m) % 2 != 0 {
            return None;
        }
        Some(((tj - two_m) / 2) as usize)
    }

    /// `m` values in basis order `j, j-1, …, -j`.
    pub fn m_values(self) -> impl Iterator<Item = f64> {
        (0..self.dim()).map(move |k| f64::from(self.two_m(k)) / 2.0)
    }
}

/// `J_x`, `J_y`, `J_z` with `ħ = 1`.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub spin: Spin,
    pub jx: SquareMatrix,
    pub jy: SquareMatrix,
    pub jz: SquareMatrix,
}

impl SpinOperators {
    pub fn new(spin: Spin) -> Self {
        build_spin_operators(spin)
    }

    /// `axis · J`. The axis is used as given, without normalization.
    pub fn generator(&self, axis: [f64; 3]) -> SquareMatrix {
        axis_rotation_generator(self, axis)
    }
}

/// Ladder construction: `⟨m+1|J+|m⟩ = sqrt(j(j+1) - m(m+1))`.
pub fn build_spin_operators(spin: Spin) -> SpinOperators {
    let n = spin.dim();
    let j = spin.j();
    let zero = || SquareMatrix::zeros(n).expect("spin dimension within linalg limit");

    let mut jz = zero();
    let mut jx = zero();
    let mut jy = zero();
    for k in 0..n {
        jz[(k, k)] = Complex64::new(f64::from(spin.two_m(k)) / 2.0, 0.0);
    }
    // J+ maps index k+1 (m) to index k (m+1)
    for k in 0..n.saturating_sub(1) {
        let m = f64::from(spin.two_m(k + 1)) / 2.0;
        let amp = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
        // jx = (J+ + J-)/2, jy = (J+ - J-)/(2i)
        jx[(k, k + 1)] = Complex64::new(0.5 * amp, 0.0);
        jx[(k + 1, k)] = Complex64::new(0.5 * amp, 0.0);
        jy[(k, k + 1)] = Complex64::new(0.0, -0.5 * amp);
        jy[(k + 1, k)] = Complex64::new(0.0, 0.5 * amp);
    }
    SpinOperators { spin, jx, jy, jz }
}

pub fn axis_rotation_generator(ops: &SpinOperators, axis: [f64; 3]) -> SquareMatrix {
    let n = ops.spin.dim();
    let mut g = SquareMatrix::zeros(n).expect("spin dimension within linalg limit");
    for (op, &w) in [&ops.jx, &ops.jy, &ops.jz].into_iter().zip(&axis) {
        if w == 0.0 {
            continue;
        }
        g = g
            .add(&op.scale(Complex64::new(w, 0.0)))
            .expect("operators share dimension");
    }
    g
}
