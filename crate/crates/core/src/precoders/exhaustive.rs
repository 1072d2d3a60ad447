//! Brute-force max-min search over binary or ternary transmit vectors.
//!
//! Candidates are visited in lexicographic order (`-1 < 0 < 1`, first
//! coordinate most significant) and the first maximizer wins. Each
//! candidate's coefficients are `prefix + suffix` partial products taken
//! from two precomputed tables, so a vector's score does not depend on
//! the path that reached it.

use serde::{Deserialize, Serialize};

use super::{complexity, TernaryVector};
use crate::error::SolverRefusal;
use crate::geometry::FeasibilityMatrix;

/// Largest `2 Nt` searched by default.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alphabet {
    /// `{-1, 1}`: one-bit precoding without antenna selection.
    Binary,
    /// `{-1, 0, 1}`.
    Ternary,
}

impl Alphabet {
    pub fn levels(self) -> &'static [i8] {
        match self {
            Alphabet::Binary => &[-1, 1],
            Alphabet::Ternary => &[-1, 0, 1],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExhaustiveResult {
    pub x: TernaryVector,
    pub min_alpha: f64,
    pub candidates: u64,
    pub multiplications: u64,
}

pub(crate) fn check_cap(alphabet: Alphabet, antennas: usize, users: usize, cap: usize) -> Result<(), SolverRefusal> {
    let dims = 2 * antennas;
    if dims <= cap {
        return Ok(());
    }
    let (base, formula) = match alphabet {
        Alphabet::Binary => (2, complexity::chi_exhaustive(antennas, users)),
        Alphabet::Ternary => (3, complexity::chi_antenna_selection(antennas, users)),
    };
    Err(SolverRefusal {
        solver: format!("exhaustive-{}", if base == 2 { "binary" } else { "ternary" }),
        nt: antennas,
        cap,
        base,
        exponent: dims,
        multiplications: formula.to_string(),
    })
}

/// All vectors over `levels` of length `len`, lexicographic, with their
/// partial products against columns `offset..offset+len` of `Lambda`.
fn partial_table(f: &FeasibilityMatrix, levels: &[i8], offset: usize, len: usize) -> (Vec<Vec<i8>>, Vec<f64>) {
    let rows = f.lambda.rows();
    let count = levels.len().pow(len as u32);
    let mut vectors = Vec::with_capacity(count);
    let mut sums = Vec::with_capacity(count * rows);
    let mut digits = vec![0usize; len];
    for _ in 0..count {
        let v: Vec<i8> = digits.iter().map(|&d| levels[d]).collect();
        for r in 0..rows {
            let row = &f.lambda.row(r)[offset..offset + len];
            sums.push(row.iter().zip(&v).map(|(a, &b)| a * f64::from(b)).sum());
        }
        vectors.push(v);
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < levels.len() {
                break;
            }
            *d = 0;
        }
    }
    (vectors, sums)
}

pub fn exhaustive_search(f: &FeasibilityMatrix, alphabet: Alphabet, cap: usize) -> Result<ExhaustiveResult, SolverRefusal> {
    check_cap(alphabet, f.antennas, f.users, cap)?;
    let rows = f.lambda.rows();
    let dims = f.lambda.cols();
    let suffix_len = dims / 2;
    let prefix_len = dims - suffix_len;
    let levels = alphabet.levels();

    let (prefixes, prefix_sums) = partial_table(f, levels, 0, prefix_len);
    let (suffixes, suffix_sums) = partial_table(f, levels, prefix_len, suffix_len);
    let multiplications = (rows * (prefixes.len() * prefix_len + suffixes.len() * suffix_len)) as u64;

    // Per-row maxima over all suffixes bound what any completion of a
    // prefix can reach; prefixes that cannot beat the incumbent are skipped.
    // Only strict improvements replace it, so skipping never changes the
    // lexicographic winner.
    let mut suffix_max = vec![f64::NEG_INFINITY; rows];
    for suf in suffix_sums.chunks_exact(rows) {
        for (m, &v) in suffix_max.iter_mut().zip(suf) {
            *m = m.max(v);
        }
    }

    let mut best = (f64::NEG_INFINITY, 0usize, 0usize);
    for (p, pre) in prefix_sums.chunks_exact(rows).enumerate() {
        let bound = pre.iter().zip(&suffix_max).map(|(a, b)| a + b).fold(f64::INFINITY, f64::min);
        if bound <= best.0 {
            continue;
        }
        'suffix: for (s, suf) in suffix_sums.chunks_exact(rows).enumerate() {
            let mut m = f64::INFINITY;
            for (a, b) in pre.iter().zip(suf) {
                m = m.min(a + b);
                if m <= best.0 {
                    continue 'suffix;
                }
            }
            best = (m, p, s);
        }
    }

    let (min_alpha, p, s) = best;
    let mut x = prefixes[p].clone();
    x.extend_from_slice(&suffixes[s]);
    Ok(ExhaustiveResult {
        x: TernaryVector(x),
        min_alpha,
        candidates: (prefixes.len() * suffixes.len()) as u64,
        multiplications,
    })
}
