//! Closed-form real-multiplication counts.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

/// Exhaustive binary search: `4 K Nt 2^(2 Nt)`.
pub fn chi_exhaustive(antennas: usize, users: usize) -> BigUint {
    BigUint::from(4 * users * antennas) * BigUint::from(2u32).pow(2 * antennas as u32)
}

/// Exhaustive ternary search: `4 K Nt 3^(2 Nt)`.
pub fn chi_antenna_selection(antennas: usize, users: usize) -> BigUint {
    BigUint::from(4 * users * antennas) * BigUint::from(3u32).pow(2 * antennas as u32)
}

/// Symbol scaling, reported for reference only: `4 Nt^2 + 24 K Nt - 2 K`.
pub fn chi_symbol_scaling(antennas: usize, users: usize) -> u64 {
    let (nt, k) = (antennas as u64, users as u64);
    4 * nt * nt + 24 * k * nt - 2 * k
}

/// IHT with `t*` updates followed by one flipping sweep: `8 (t* + 1) K Nt`.
pub fn chi_proposed(antennas: usize, users: usize, iterations: usize) -> u64 {
    8 * (iterations as u64 + 1) * users as u64 * antennas as u64
}

/// All four counts, exponential ones as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityFormulas {
    pub antennas: usize,
    pub users: usize,
    pub iterations: usize,
    pub exhaustive: String,
    pub antenna_selection: String,
    pub symbol_scaling: u64,
    pub proposed: u64,
}

pub fn complexity_formulas(antennas: usize, users: usize, iterations: usize) -> ComplexityFormulas {
    ComplexityFormulas {
        antennas,
        users,
        iterations,
        exhaustive: chi_exhaustive(antennas, users).to_string(),
        antenna_selection: chi_antenna_selection(antennas, users).to_string(),
        symbol_scaling: chi_symbol_scaling(antennas, users),
        proposed: chi_proposed(antennas, users, iterations),
    }
}
