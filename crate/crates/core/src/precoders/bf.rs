//! Bit-flipping refinement of the max-min coefficient objective.
//!
//! One sweep visits each coordinate in order and sets it to whichever of
//! `1, 0, -1` maximizes the smallest entry of `Lambda x~`, keeping the
//! current value on ties. Candidates are evaluated from a cached
//! `Lambda x~` plus a scaled column, `2K` multiplications each.

use super::TernaryVector;
use crate::geometry::FeasibilityMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct BfOutcome {
    pub x: TernaryVector,
    pub alpha: Vec<f64>,
    pub min_alpha: f64,
    pub multiplications: u64,
    pub sweeps: usize,
    /// Coordinates changed over all sweeps.
    pub flips: usize,
}

const ORDER: [i8; 3] = [1, 0, -1];

fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Single sweep from scratch; the initial product is counted.
pub fn bf_refine(f: &FeasibilityMatrix, x: &TernaryVector) -> BfOutcome {
    bf_refine_sweeps(f, x, 1)
}

/// Up to `max_sweeps` sweeps, stopping early at a fixed point.
pub fn bf_refine_sweeps(f: &FeasibilityMatrix, x: &TernaryVector, max_sweeps: usize) -> BfOutcome {
    let alpha = f.coefficients(x).expect("transmit vector matches Lambda");
    let mut out = refine_from_cache(f, x.clone(), alpha, max_sweeps);
    out.multiplications += (f.lambda.rows() * f.lambda.cols()) as u64;
    out
}

/// Sweeps starting from a known `alpha = Lambda x`.
pub(crate) fn refine_from_cache(
    f: &FeasibilityMatrix,
    mut x: TernaryVector,
    mut alpha: Vec<f64>,
    max_sweeps: usize,
) -> BfOutcome {
    let lambda = &f.lambda;
    let (rows, cols) = (lambda.rows(), lambda.cols());
    assert_eq!(x.len(), cols);
    assert_eq!(alpha.len(), rows);

    let mut column = vec![0.0; rows];
    let mut scratch = vec![0.0; rows];
    let mut best_alpha = vec![0.0; rows];
    let mut multiplications = 0u64;
    let mut sweeps = 0;
    let mut flips = 0;

    while sweeps < max_sweeps {
        sweeps += 1;
        let mut changed = false;
        for i in 0..cols {
            for (r, c) in column.iter_mut().enumerate() {
                *c = lambda[(r, i)];
            }
            let current = x.0[i];
            let mut best = (current, min_of(&alpha));
            for j in ORDER.into_iter().filter(|&j| j != current) {
                let step = f64::from(j - current);
                for ((s, a), c) in scratch.iter_mut().zip(&alpha).zip(&column) {
                    *s = a + step * c;
                }
                multiplications += rows as u64;
                let m = min_of(&scratch);
                if m > best.1 {
                    best = (j, m);
                    best_alpha.copy_from_slice(&scratch);
                }
            }
            if best.0 != current {
                x.0[i] = best.0;
                alpha.copy_from_slice(&best_alpha);
                changed = true;
                flips += 1;
            }
        }
        if !changed {
            break;
        }
    }

    let min_alpha = min_of(&alpha);
    BfOutcome { x, alpha, min_alpha, multiplications, sweeps, flips }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::MessageVector;
    use crate::lift::ComplexMatrix;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn qpsk_identity() -> FeasibilityMatrix {
        let h = ComplexMatrix::from_rows(&[vec![Complex64::new(1.0, 0.0)]]).unwrap();
        FeasibilityMatrix::build(&h, &MessageVector::new(vec![0], 4).unwrap(), 4).unwrap()
    }

    #[test]
    fn keeps_optimal_start() {
        let f = qpsk_identity();
        let out = bf_refine(&f, &TernaryVector::new(vec![1, 0]).unwrap());
        assert_eq!(out.x.as_slice(), &[1, 0]);
        assert!((out.min_alpha - FRAC_1_SQRT_2).abs() < 1e-12);
        assert_eq!(out.flips, 0);
        // 4 for the initial product, 2 candidates x 2 rows x 2 coordinates.
        assert_eq!(out.multiplications, 4 + 8);
    }

    #[test]
    fn repairs_infeasible_start() {
        let f = qpsk_identity();
        let out = bf_refine(&f, &TernaryVector::new(vec![-1, 0]).unwrap());
        assert_eq!(out.x.as_slice()[0], 1);
        assert!(out.min_alpha > 0.0);
    }

    #[test]
    fn multi_sweep_reaches_fixed_point() {
        let f = qpsk_identity();
        let out = bf_refine_sweeps(&f, &TernaryVector::new(vec![-1, -1]).unwrap(), 10);
        let again = bf_refine(&f, &out.x);
        assert_eq!(again.x, out.x);
        assert_eq!(again.flips, 0);
        assert!(out.sweeps < 10);
    }
}
