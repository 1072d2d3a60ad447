//! Quantized zero-forcing baseline.
//!
//! `x = H^H (H H^H)^-1 u` with `u_k = c_{mu_k}`, then one-bit quantization of
//! every real component (`sign(0) = +1`). No antenna selection.

use num_complex::Complex64;

use super::TernaryVector;
use crate::error::{DimensionError, Error, Result};
use crate::geometry::{Constellation, MessageVector};
use crate::lift::ComplexMatrix;

/// Diagonal loading applied when `H H^H` is numerically singular.
pub const REGULARIZATION: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct QzfResult {
    pub x: TernaryVector,
    /// Unquantized zero-forcing output.
    pub linear: Vec<Complex64>,
    pub regularized: bool,
    pub multiplications: u64,
}

/// One real multiply per real product; a complex product costs 4.
#[derive(Default)]
struct Counter(u64);

impl Counter {
    fn mul(&mut self, a: Complex64, b: Complex64) -> Complex64 {
        self.0 += 4;
        a * b
    }

    fn div(&mut self, a: Complex64, b: Complex64) -> Complex64 {
        // a conj(b) / |b|^2
        self.0 += 6;
        a / b
    }
}

/// Gaussian elimination with partial pivoting. `None` if a pivot vanishes.
fn solve(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>, count: &mut Counter) -> Option<Vec<Complex64>> {
    let n = b.len();
    let scale = a.iter().enumerate().map(|(i, r)| r[i].norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .expect("nonempty range");
        if a[pivot][col].norm() <= 1e-12 * scale {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = count.div(a[row][col], a[col][col]);
            for k in col..n {
                let t = count.mul(factor, a[col][k]);
                a[row][k] -= t;
            }
            let t = count.mul(factor, b[col]);
            b[row] -= t;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= count.mul(a[row][k], x[k]);
        }
        x[row] = count.div(acc, a[row][row]);
    }
    Some(x)
}

fn one_bit(v: f64) -> i8 {
    if v >= 0.0 {
        1
    } else {
        -1
    }
}

pub fn qzf_precode(h: &ComplexMatrix, messages: &MessageVector, constellation: &Constellation) -> Result<QzfResult> {
    let (k, nt) = (h.rows(), h.cols());
    if messages.len() != k {
        return Err(DimensionError::new("channel rows vs messages", k, messages.len()).into());
    }
    if k > nt {
        return Err(Error::Config(format!("zero forcing needs K <= Nt, got K={k}, Nt={nt}")));
    }
    let mut count = Counter::default();
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); k]; k];
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = (0..nt).map(|t| count.mul(h.get(i, t), h.get(j, t).conj())).sum();
        }
    }
    let u = messages.symbols(constellation);

    let mut regularized = false;
    let v = match solve(gram.clone(), u.clone(), &mut count) {
        Some(v) => v,
        None => {
            regularized = true;
            for (i, row) in gram.iter_mut().enumerate() {
                row[i] += REGULARIZATION;
            }
            solve(gram, u, &mut count)
                .ok_or_else(|| Error::Config("H H^H is singular even after regularization".into()))?
        }
    };

    let linear: Vec<Complex64> =
        (0..nt).map(|t| (0..k).map(|i| count.mul(h.get(i, t).conj(), v[i])).sum()).collect();
    let x = TernaryVector(linear.iter().flat_map(|z| [one_bit(z.re), one_bit(z.im)]).collect());
    Ok(QzfResult { x, linear, regularized, multiplications: count.0 })
}
