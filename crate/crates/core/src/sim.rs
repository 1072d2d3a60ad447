//! Seeded Monte-Carlo symbol-error-rate estimation.
//!
//! Randomness is split into ChaCha8 streams keyed by the run seed:
//! stream `t` draws trial `t`'s channel and messages, stream
//! `(p + 1) << 40 | t` draws the noise of trial `t` at SNR point `p`.
//! Every SNR point of a trial therefore sees the same channel and
//! transmit vector, every solver sees the same `(H, mu, z)` sequence, and
//! results do not depend on how trials are spread across threads.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Constellation, MessageVector};
use crate::lift::ComplexMatrix;
use crate::precoders::{ComplexityReport, Precoder, SolverKind, TernaryVector};

const TRIAL_BITS: u32 = 40;

/// How the transmit scaling `rho` follows from the SNR.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PowerNormalization {
    /// `rho = snr / (2 Nt)`: a fully active vector radiates `snr`.
    #[default]
    FullArray,
    /// `rho = snr / ||x~||^2`: whatever is active radiates `snr`.
    ActiveComponents,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub antennas: usize,
    pub users: usize,
    pub order: usize,
    pub snr_db: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub solver: SolverKind,
    #[serde(default)]
    pub normalization: PowerNormalization,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.users == 0 || self.users > self.antennas {
            return Err(Error::Config(format!(
                "need 1 <= K <= Nt, got K={}, Nt={}",
                self.users, self.antennas
            )));
        }
        if self.order < 3 {
            return Err(Error::InvalidOrder(self.order));
        }
        if self.trials == 0 || self.trials >= 1 << TRIAL_BITS {
            return Err(Error::Config(format!("trial count {} out of range", self.trials)));
        }
        if self.snr_db.is_empty() || self.snr_db.iter().any(|s| s.is_nan()) {
            return Err(Error::Config("SNR list must be nonempty and free of NaN".into()));
        }
        Ok(())
    }

    fn rho(&self, snr_db: f64, x: &TernaryVector) -> f64 {
        let snr = 10f64.powf(snr_db / 10.0);
        let power = match self.normalization {
            PowerNormalization::FullArray => 2 * self.antennas,
            PowerNormalization::ActiveComponents => x.active_components().max(1),
        };
        snr / power as f64
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn trial_stream(seed: u64, trial: u64) -> ChaCha8Rng {
    stream(seed, trial)
}

fn noise_stream(seed: u64, point: usize, trial: u64) -> ChaCha8Rng {
    stream(seed, ((point as u64 + 1) << TRIAL_BITS) | trial)
}

fn cn01<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// I.i.d. `CN(0, 1)` Rayleigh entries, row-major.
pub fn draw_channel<R: Rng + ?Sized>(users: usize, antennas: usize, rng: &mut R) -> ComplexMatrix {
    let entries = (0..users * antennas).map(|_| cn01(rng)).collect();
    ComplexMatrix::new(users, antennas, entries).expect("shape matches")
}

/// I.i.d. `CN(0, 1)` receiver noise.
pub fn draw_noise<R: Rng + ?Sized>(users: usize, rng: &mut R) -> Vec<Complex64> {
    (0..users).map(|_| cn01(rng)).collect()
}

pub fn draw_messages<R: Rng + ?Sized>(users: usize, order: usize, rng: &mut R) -> MessageVector {
    let mu = (0..users).map(|_| rng.random_range(0..order)).collect();
    MessageVector::new(mu, order).expect("drawn in range")
}

/// Everything one trial produced.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialOutcome {
    /// `errors[p][k]`: user `k` decoded wrongly at SNR point `p`.
    pub errors: Vec<Vec<bool>>,
    pub x: TernaryVector,
    pub complexity: ComplexityReport,
    pub iterations: Option<usize>,
}

pub fn run_trial(cfg: &SimConfig, precoder: &dyn Precoder, trial: u64) -> Result<TrialOutcome> {
    let constellation = Constellation::psk(cfg.order)?;
    let mut rng = trial_stream(cfg.seed, trial);
    let h = draw_channel(cfg.users, cfg.antennas, &mut rng);
    let messages = draw_messages(cfg.users, cfg.order, &mut rng);

    let pre = precoder.precode(&h, &messages, &constellation)?;
    let noiseless = h.mul_vec(&pre.x.to_complex())?;

    let errors = cfg
        .snr_db
        .iter()
        .enumerate()
        .map(|(p, &snr_db)| {
            let received: Vec<Complex64> = if snr_db == f64::INFINITY {
                noiseless.clone()
            } else {
                let gain = cfg.rho(snr_db, &pre.x).sqrt();
                let z = draw_noise(cfg.users, &mut noise_stream(cfg.seed, p, trial));
                noiseless.iter().zip(z).map(|(r, z)| r * gain + z).collect()
            };
            received
                .iter()
                .zip(messages.as_slice())
                .map(|(&y, &mu)| constellation.decode(y) != mu)
                .collect()
        })
        .collect();

    Ok(TrialOutcome { errors, x: pre.x, complexity: pre.complexity, iterations: pre.iterations })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SerPoint {
    pub snr_db: f64,
    pub symbol_errors: u64,
    pub symbols_sent: u64,
    pub ser: f64,
    pub mean_tstar: Option<f64>,
    /// Mean closed-form complexity, or the counted one for solvers without a formula.
    pub mean_chi: f64,
}

impl SerPoint {
    pub fn standard_error(&self) -> f64 {
        binomial_standard_error(self.symbol_errors, self.symbols_sent)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SerCurve {
    pub solver: String,
    pub points: Vec<SerPoint>,
}

pub fn binomial_standard_error(errors: u64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let p = errors as f64 / n as f64;
    (p * (1.0 - p) / n as f64).sqrt()
}

#[derive(Clone, Debug, Default)]
struct Tally {
    errors: Vec<u64>,
    iteration_sum: u64,
    iteration_trials: u64,
    chi_sum: u128,
}

impl Tally {
    fn from_outcome(o: &TrialOutcome) -> Self {
        Self {
            errors: o.errors.iter().map(|e| e.iter().filter(|&&b| b).count() as u64).collect(),
            iteration_sum: o.iterations.unwrap_or(0) as u64,
            iteration_trials: u64::from(o.iterations.is_some()),
            chi_sum: u128::from(o.complexity.formula_value.unwrap_or(o.complexity.real_multiplications)),
        }
    }

    fn merge(mut self, other: Self) -> Self {
        if self.errors.is_empty() {
            return other;
        }
        for (a, b) in self.errors.iter_mut().zip(other.errors) {
            *a += b;
        }
        self.iteration_sum += other.iteration_sum;
        self.iteration_trials += other.iteration_trials;
        self.chi_sum += other.chi_sum;
        self
    }
}

/// Sweep with the configured solver on the current rayon pool.
pub fn run_sweep(cfg: &SimConfig) -> Result<SerCurve> {
    run_sweep_with(cfg, &cfg.solver)
}

/// Sweep with an arbitrary precoder.
pub fn run_sweep_with(cfg: &SimConfig, precoder: &dyn Precoder) -> Result<SerCurve> {
    cfg.validate()?;
    precoder.check_size(cfg.antennas, cfg.users)?;
    let tally = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, precoder, t).map(|o| Tally::from_outcome(&o)))
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;

    let trials = cfg.trials as f64;
    let symbols_sent = cfg.trials * cfg.users as u64;
    let mean_tstar =
        (tally.iteration_trials > 0).then(|| tally.iteration_sum as f64 / tally.iteration_trials as f64);
    let mean_chi = tally.chi_sum as f64 / trials;
    let points = cfg
        .snr_db
        .iter()
        .zip(&tally.errors)
        .map(|(&snr_db, &symbol_errors)| SerPoint {
            snr_db,
            symbol_errors,
            symbols_sent,
            ser: symbol_errors as f64 / symbols_sent as f64,
            mean_tstar,
            mean_chi,
        })
        .collect();
    Ok(SerCurve { solver: precoder.name(), points })
}

/// Sweep on a dedicated pool of `workers` threads.
pub fn run_sweep_on(cfg: &SimConfig, precoder: &dyn Precoder, workers: usize) -> Result<SerCurve> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| run_sweep_with(cfg, precoder))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precoders::IhtConfig;

    fn config(solver: SolverKind) -> SimConfig {
        SimConfig {
            antennas: 8,
            users: 2,
            order: 4,
            snr_db: vec![0.0, 10.0],
            trials: 20,
            seed: 7,
            solver,
            normalization: PowerNormalization::FullArray,
        }
    }

    #[test]
    fn channel_shape_and_determinism() {
        let a = draw_channel(2, 4, &mut stream(1, 0));
        let b = draw_channel(2, 4, &mut stream(1, 0));
        assert_eq!((a.rows(), a.cols()), (2, 4));
        assert_eq!(a, b);
        assert_ne!(a, draw_channel(2, 4, &mut stream(1, 1)));
        assert_eq!(draw_noise(3, &mut stream(5, 9)), draw_noise(3, &mut stream(5, 9)));
    }

    #[test]
    fn config_validation() {
        let mut cfg = config(SolverKind::Qzf);
        assert!(cfg.validate().is_ok());
        cfg.users = 9;
        assert!(cfg.validate().is_err());
        cfg.users = 2;
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        cfg.trials = 1;
        cfg.snr_db.clear();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn single_trial_accounting() {
        let mut cfg = config(SolverKind::two_stage(IhtConfig::new(1.0, 12).unwrap()));
        cfg.trials = 1;
        cfg.snr_db = vec![5.0];
        let curve = run_sweep(&cfg).unwrap();
        assert_eq!(curve.points.len(), 1);
        assert_eq!(curve.points[0].symbols_sent, 2);
        assert!(curve.points[0].mean_tstar.is_some());
    }

    #[test]
    fn trial_is_reproducible() {
        let cfg = config(SolverKind::Qzf);
        let a = run_trial(&cfg, &cfg.solver, 3).unwrap();
        let b = run_trial(&cfg, &cfg.solver, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.errors.len(), 2);
        assert!(a.iterations.is_none());
    }

    #[test]
    fn refusal_propagates() {
        let mut cfg = config(SolverKind::exhaustive(crate::precoders::Alphabet::Ternary));
        cfg.antennas = 9;
        assert!(matches!(run_sweep(&cfg), Err(Error::Refusal(_))));
    }
}
