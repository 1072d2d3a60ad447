//! Complex/real representations.
//!
//! Complex vectors are lifted to real vectors with the interleaved layout
//! `[re(x0), im(x0), re(x1), im(x1), ...]`. A complex `K x Nt` channel is
//! lifted to a `2K x 2Nt` real matrix by replacing each entry `h` with the
//! 2x2 block `[[re h, -im h], [im h, re h]]`, so that `lift(H x) = H~ lift(x)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::DimensionError;

/// Dense row-major real matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, DimensionError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(DimensionError::new("ragged rows", cols, 0));
        }
        Ok(Self { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `self * x`.
    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>, DimensionError> {
        if x.len() != self.cols {
            return Err(DimensionError::new("matrix-vector product", self.cols, x.len()));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `self^T * y`.
    pub fn mul_transpose_vec(&self, y: &[f64]) -> Result<Vec<f64>, DimensionError> {
        if y.len() != self.rows {
            return Err(DimensionError::new("transpose product", self.rows, y.len()));
        }
        let mut out = vec![0.0; self.cols];
        for (i, &yi) in y.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * yi;
            }
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &RealMatrix) -> Result<RealMatrix, DimensionError> {
        if self.cols != other.rows {
            return Err(DimensionError::new("matrix product", self.cols, other.rows));
        }
        let mut out = RealMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &RealMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for RealMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense row-major complex matrix, e.g. a `K x Nt` downlink channel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self, DimensionError> {
        if entries.len() != rows * cols {
            return Err(DimensionError::new("complex matrix entries", rows * cols, entries.len()));
        }
        if entries.iter().any(|z| !z.is_finite()) {
            return Err(DimensionError::new("non-finite complex matrix entry", 0, 0));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, DimensionError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(DimensionError::new("ragged rows", cols, 0));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Result<Vec<Complex64>, DimensionError> {
        if x.len() != self.cols {
            return Err(DimensionError::new("complex matrix-vector product", self.cols, x.len()));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }
}

/// Real 2K x 2Nt equivalent of a complex channel.
#[derive(Clone, Debug, PartialEq)]
pub struct RealLiftedChannel {
    pub matrix: RealMatrix,
    pub source_rows: usize,
    pub source_cols: usize,
}

pub fn lift_scalar(x: Complex64) -> [f64; 2] {
    [x.re, x.im]
}

pub fn lift_vector(v: &[Complex64]) -> Vec<f64> {
    v.iter().flat_map(|z| [z.re, z.im]).collect()
}

pub fn unlift_vector(v: &[f64]) -> Result<Vec<Complex64>, DimensionError> {
    if v.len() % 2 != 0 {
        return Err(DimensionError::new("odd-length real vector cannot be unlifted", v.len() + 1, v.len()));
    }
    Ok(v.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect())
}

/// 2x2 real matrix acting on `[re, im]` like multiplication by `x`.
pub fn phi_expand(x: Complex64) -> [[f64; 2]; 2] {
    [[x.re, -x.im], [x.im, x.re]]
}

pub fn rotation(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    [[c, -s], [s, c]]
}

pub fn lift_channel(h: &ComplexMatrix) -> RealLiftedChannel {
    let (k, nt) = (h.rows(), h.cols());
    let mut m = RealMatrix::zeros(2 * k, 2 * nt);
    for i in 0..k {
        for j in 0..nt {
            let block = phi_expand(h.get(i, j));
            for (r, row) in block.iter().enumerate() {
                for (c, &v) in row.iter().enumerate() {
                    m[(2 * i + r, 2 * j + c)] = v;
                }
            }
        }
    }
    RealLiftedChannel { matrix: m, source_rows: k, source_cols: nt }
}

/// `exp(j 2 pi num / den)`, reduced to the first quadrant so that quarter
/// turns are exact and symmetric points agree bit-for-bit.
pub(crate) fn unit_phasor(num: i64, den: i64) -> Complex64 {
    debug_assert!(den > 0);
    // Work in units of 1 / (4 den) turns.
    let units = (4 * num).rem_euclid(4 * den);
    let quadrant = units / den;
    let rem = units % den;
    // Fold onto the first octant so that cos and sin of complementary
    // angles are the same floats.
    let octant = |r: i64| (std::f64::consts::FRAC_PI_2 * r as f64 / den as f64).sin_cos();
    let (c, s) = match (2 * rem).cmp(&den) {
        _ if rem == 0 => (1.0, 0.0),
        std::cmp::Ordering::Less => {
            let (s, c) = octant(rem);
            (c, s)
        }
        std::cmp::Ordering::Equal => (std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2),
        std::cmp::Ordering::Greater => octant(den - rem),
    };
    match quadrant {
        0 => Complex64::new(c, s),
        1 => Complex64::new(-s, c),
        2 => Complex64::new(-c, -s),
        _ => Complex64::new(s, -c),
    }
}
