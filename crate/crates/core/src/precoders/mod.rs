//! Transmit-vector solvers.
//!
//! Every solver produces a ternary real vector `x~ in {-1, 0, 1}^{2Nt}`;
//! the complex transmit vector is its unlifted image. A zero component
//! switches that antenna's in-phase or quadrature branch off.

pub mod bf;
pub mod complexity;
pub mod exhaustive;
pub mod iht;
pub mod qzf;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DimensionError, Result, SolverRefusal};
use crate::geometry::{Constellation, FeasibilityMatrix, MessageVector};
use crate::lift::ComplexMatrix;

pub use bf::{bf_refine, bf_refine_sweeps, BfOutcome};
pub use complexity::{complexity_formulas, ComplexityFormulas};
pub use exhaustive::{exhaustive_search, Alphabet, ExhaustiveResult, DEFAULT_EXHAUSTIVE_CAP};
pub use iht::{iht_solve, IhtConfig, IhtResult};
pub use qzf::{qzf_precode, QzfResult};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TernaryVector(Vec<i8>);

impl TernaryVector {
    pub fn new(entries: Vec<i8>) -> Result<Self, DimensionError> {
        if entries.len() % 2 != 0 {
            return Err(DimensionError::new("ternary vector length must be even", entries.len() + 1, entries.len()));
        }
        if entries.iter().any(|v| !(-1..=1).contains(v)) {
            return Err(DimensionError::new("ternary entries must lie in {-1, 0, 1}", 0, 0));
        }
        Ok(Self(entries))
    }

    /// All components off, for `antennas` antennas.
    pub fn zeros(antennas: usize) -> Self {
        Self(vec![0; 2 * antennas])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&v| f64::from(v)).collect()
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.0
            .chunks_exact(2)
            .map(|p| Complex64::new(f64::from(p[0]), f64::from(p[1])))
            .collect()
    }

    /// `||x~||^2`, the number of active real components.
    pub fn active_components(&self) -> usize {
        self.0.iter().filter(|&&v| v != 0).count()
    }

    pub fn contains_zero(&self) -> bool {
        self.0.contains(&0)
    }
}

/// Real-multiplication accounting for one solver call.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub solver: String,
    /// Counted while running.
    pub real_multiplications: u64,
    /// Closed-form count, when the solver has one.
    pub formula_value: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Precoded {
    pub x: TernaryVector,
    pub complexity: ComplexityReport,
    /// IHT iterations, for solvers that run IHT.
    pub iterations: Option<usize>,
    pub feasible: Option<bool>,
}

/// Anything that maps a channel and message vector to a transmit vector.
pub trait Precoder: Send + Sync {
    fn name(&self) -> String;

    fn precode(&self, h: &ComplexMatrix, messages: &MessageVector, constellation: &Constellation) -> Result<Precoded>;

    /// Refuse up front when a system size is out of reach.
    fn check_size(&self, _antennas: usize, _users: usize) -> Result<(), SolverRefusal> {
        Ok(())
    }
}

/// Solvers selectable from configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SolverKind {
    /// IHT followed by bit flipping.
    TwoStage { iht: IhtConfig, sweeps: usize },
    /// IHT alone.
    Iht { iht: IhtConfig },
    Qzf,
    Exhaustive { alphabet: Alphabet, cap: usize },
}

impl SolverKind {
    pub fn two_stage(iht: IhtConfig) -> Self {
        Self::TwoStage { iht, sweeps: 1 }
    }

    pub fn exhaustive(alphabet: Alphabet) -> Self {
        Self::Exhaustive { alphabet, cap: DEFAULT_EXHAUSTIVE_CAP }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::TwoStage { .. } => "two-stage",
            Self::Iht { .. } => "iht",
            Self::Qzf => "qzf",
            Self::Exhaustive { alphabet: Alphabet::Binary, .. } => "exhaustive-binary",
            Self::Exhaustive { alphabet: Alphabet::Ternary, .. } => "exhaustive-ternary",
        }
    }

    pub fn iht_config(&self) -> Option<&IhtConfig> {
        match self {
            Self::TwoStage { iht, .. } | Self::Iht { iht } => Some(iht),
            _ => None,
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// IHT then bit flipping, reusing IHT's last `Lambda x~` as the flipping
/// cache so that the whole pipeline costs `8 (t* + 1) K Nt` multiplications.
pub fn two_stage_precode(
    h: &ComplexMatrix,
    messages: &MessageVector,
    order: usize,
    cfg: &IhtConfig,
    sweeps: usize,
) -> Result<(TernaryVector, ComplexityReport, IhtResult)> {
    let f = FeasibilityMatrix::build(h, messages, order)?;
    let first = iht_solve(&f, cfg);
    let refined = bf::refine_from_cache(&f, first.x.clone(), first.alpha.clone(), sweeps);
    let report = ComplexityReport {
        solver: "two-stage".into(),
        real_multiplications: first.multiplications + refined.multiplications,
        formula_value: Some(complexity::chi_proposed(f.antennas, f.users, first.iterations)),
    };
    Ok((refined.x, report, first))
}

impl Precoder for SolverKind {
    fn name(&self) -> String {
        self.label().to_string()
    }

    fn precode(&self, h: &ComplexMatrix, messages: &MessageVector, constellation: &Constellation) -> Result<Precoded> {
        let order = constellation.order();
        match self {
            Self::TwoStage { iht, sweeps } => {
                let (x, complexity, first) = two_stage_precode(h, messages, order, iht, *sweeps)?;
                Ok(Precoded { x, complexity, iterations: Some(first.iterations), feasible: Some(first.feasible) })
            }
            Self::Iht { iht } => {
                let f = FeasibilityMatrix::build(h, messages, order)?;
                let r = iht_solve(&f, iht);
                let complexity = ComplexityReport {
                    solver: self.name(),
                    real_multiplications: r.multiplications,
                    formula_value: Some(8 * r.iterations as u64 * (f.users * f.antennas) as u64),
                };
                Ok(Precoded { x: r.x, complexity, iterations: Some(r.iterations), feasible: Some(r.feasible) })
            }
            Self::Qzf => {
                let r = qzf_precode(h, messages, constellation)?;
                let complexity = ComplexityReport {
                    solver: self.name(),
                    real_multiplications: r.multiplications,
                    formula_value: None,
                };
                Ok(Precoded { x: r.x, complexity, iterations: None, feasible: None })
            }
            Self::Exhaustive { alphabet, cap } => {
                self.check_size(h.cols(), h.rows())?;
                let f = FeasibilityMatrix::build(h, messages, order)?;
                let r = exhaustive_search(&f, *alphabet, *cap)?;
                let formula = match alphabet {
                    Alphabet::Binary => complexity::chi_exhaustive(f.antennas, f.users),
                    Alphabet::Ternary => complexity::chi_antenna_selection(f.antennas, f.users),
                };
                let complexity = ComplexityReport {
                    solver: self.name(),
                    real_multiplications: r.multiplications,
                    formula_value: u64::try_from(formula).ok(),
                };
                Ok(Precoded { x: r.x, complexity, iterations: None, feasible: Some(r.min_alpha > 0.0) })
            }
        }
    }

    fn check_size(&self, antennas: usize, users: usize) -> Result<(), SolverRefusal> {
        match self {
            Self::Exhaustive { alphabet, cap } => exhaustive::check_cap(*alphabet, antennas, users, *cap),
            _ => Ok(()),
        }
    }
}
