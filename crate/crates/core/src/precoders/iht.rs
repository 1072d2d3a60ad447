//! Iterative hard thresholding for the sign-feasibility problem
//! `Lambda x~ > 0` over ternary `x~`.
//!
//! A real iterate starts at zero. Each round thresholds it to a ternary
//! candidate, marks every coefficient of `Lambda x~` that is not strictly
//! positive with residual 2, and moves the iterate along `Lambda^T e`.

use serde::{Deserialize, Serialize};

use super::TernaryVector;
use crate::error::{Error, Result};
use crate::geometry::FeasibilityMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IhtConfig {
    /// Threshold: entries above `delta` map to 1, at or below `-delta` to -1.
    pub delta: f64,
    pub max_iterations: usize,
}

impl IhtConfig {
    pub fn new(delta: f64, max_iterations: usize) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::Config(format!("IHT threshold must be positive, got {delta}")));
        }
        if max_iterations == 0 {
            return Err(Error::Config("IHT needs at least one iteration".into()));
        }
        Ok(Self { delta, max_iterations })
    }
}

impl Default for IhtConfig {
    fn default() -> Self {
        Self { delta: 3.0, max_iterations: 12 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IhtResult {
    /// Thresholded candidate of the last iterate.
    pub x: TernaryVector,
    /// `t*`: number of updates performed.
    pub iterations: usize,
    pub feasible: bool,
    pub min_alpha: f64,
    /// `Lambda x` for the returned candidate.
    pub alpha: Vec<f64>,
    pub multiplications: u64,
}

pub fn threshold(v: f64, delta: f64) -> i8 {
    if v > delta {
        1
    } else if v <= -delta {
        -1
    } else {
        0
    }
}

/// Runs until every coefficient is strictly positive or `max_iterations`
/// updates have been made.
///
/// Multiplications are counted one per matrix-entry/vector-entry product.
/// The zero start needs none (`Lambda 0 = 0`), so every update costs the
/// transpose product plus the product for the new candidate: `8 K Nt`.
pub fn iht_solve(f: &FeasibilityMatrix, cfg: &IhtConfig) -> IhtResult {
    let lambda = &f.lambda;
    let (rows, cols) = (lambda.rows(), lambda.cols());
    let per_product = (rows * cols) as u64;

    let mut iterate = vec![0.0; cols];
    let mut candidate = TernaryVector::zeros(cols / 2);
    let mut alpha = vec![0.0; rows];
    let mut residual = vec![0.0; rows];
    let mut iterations = 0;
    let mut multiplications = 0;

    let feasible = loop {
        let mut satisfied = true;
        for (e, &a) in residual.iter_mut().zip(&alpha) {
            *e = if a > 0.0 { 0.0 } else { 2.0 };
            satisfied &= a > 0.0;
        }
        if satisfied {
            break true;
        }
        if iterations == cfg.max_iterations {
            break false;
        }
        let step = lambda.mul_transpose_vec(&residual).expect("residual has 2K entries");
        for (x, s) in iterate.iter_mut().zip(step) {
            *x += s;
        }
        candidate = TernaryVector(iterate.iter().map(|&v| threshold(v, cfg.delta)).collect());
        alpha = lambda.mul_vec(&candidate.to_f64()).expect("candidate has 2Nt entries");
        multiplications += 2 * per_product;
        iterations += 1;
    };

    let min_alpha = alpha.iter().copied().fold(f64::INFINITY, f64::min);
    IhtResult { x: candidate, iterations, feasible, min_alpha, alpha, multiplications }
}
