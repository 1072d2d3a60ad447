//! Browser bindings: one precoded instance, an SER sweep and the
//! complexity table. Every export returns a JSON string.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use onebit::precoders::complexity::complexity_formulas;
use onebit::precoders::{Alphabet, IhtConfig, Precoder, SolverKind};
use onebit::sim::{draw_channel, draw_messages, run_sweep_with, PowerNormalization, SimConfig};
use onebit::Constellation;

#[derive(Serialize)]
struct Received {
    solver: String,
    /// Noiseless `Hx`, one `[re, im]` per user.
    points: Vec<[f64; 2]>,
    decoded: Vec<usize>,
    zeros: usize,
    multiplications: u64,
    iterations: Option<usize>,
    feasible: Option<bool>,
}

#[derive(Serialize)]
struct Instance {
    constellation: Vec<[f64; 2]>,
    messages: Vec<usize>,
    results: Vec<Received>,
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn to_json(v: &impl Serialize) -> Result<String, String> {
    serde_json::to_string(v).map_err(err)
}

fn solver(name: &str, delta: f64, tmax: usize) -> Result<SolverKind, String> {
    let iht = IhtConfig::new(delta, tmax).map_err(err)?;
    match name {
        "two-stage" => Ok(SolverKind::two_stage(iht)),
        "iht" => Ok(SolverKind::Iht { iht }),
        "qzf" => Ok(SolverKind::Qzf),
        "exhaustive-binary" => Ok(SolverKind::exhaustive(Alphabet::Binary)),
        "exhaustive-ternary" => Ok(SolverKind::exhaustive(Alphabet::Ternary)),
        other => Err(err(format!("unknown solver {other:?}"))),
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn names(solvers: &str) -> impl Iterator<Item = &str> {
    solvers.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// Draw one channel and message vector, precode with each solver in
/// `solvers` (comma separated) and report the noiseless received points.
pub fn instance_json(nt: usize, k: usize, order: usize, delta: f64, tmax: usize, seed: u32, solvers: &str) -> Result<String, String> {
    let constellation = Constellation::psk(order).map_err(err)?;
    if k == 0 || nt < k {
        return Err(err(format!("need 1 <= K <= Nt, got K={k}, Nt={nt}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(u64::from(seed));
    let h = draw_channel(k, nt, &mut rng);
    let messages = draw_messages(k, order, &mut rng);

    let mut results = Vec::new();
    for name in names(solvers) {
        let kind = solver(name, delta, tmax)?;
        kind.check_size(nt, k).map_err(err)?;
        let pre = kind.precode(&h, &messages, &constellation).map_err(err)?;
        let y = h.mul_vec(&pre.x.to_complex()).map_err(err)?;
        results.push(Received {
            solver: kind.label().to_string(),
            points: y.iter().copied().map(pair).collect(),
            decoded: y.iter().map(|&z| constellation.decode(z)).collect(),
            zeros: pre.x.as_slice().iter().filter(|&&v| v == 0).count(),
            multiplications: pre.complexity.real_multiplications,
            iterations: pre.iterations,
            feasible: pre.feasible,
        });
    }
    to_json(&Instance {
        constellation: constellation.points().iter().copied().map(pair).collect(),
        messages: messages.as_slice().to_vec(),
        results,
    })
}

/// SER curves for each solver over `snr_start..=snr_stop` in `snr_step` dB.
#[allow(clippy::too_many_arguments)]
pub fn curves_json(
    nt: usize,
    k: usize,
    order: usize,
    snr_start: f64,
    snr_stop: f64,
    snr_step: f64,
    trials: u32,
    seed: u32,
    delta: f64,
    tmax: usize,
    solvers: &str,
) -> Result<String, String> {
    if !(snr_step > 0.0) || snr_stop < snr_start {
        return Err(err("SNR range must be increasing with a positive step"));
    }
    let count = ((snr_stop - snr_start) / snr_step + 1e-9).floor() as usize + 1;
    let snr_db: Vec<f64> = (0..count).map(|i| snr_start + i as f64 * snr_step).collect();
    let mut curves = Vec::new();
    for name in names(solvers) {
        let kind = solver(name, delta, tmax)?;
        let cfg = SimConfig {
            antennas: nt,
            users: k,
            order,
            snr_db: snr_db.clone(),
            trials: u64::from(trials),
            seed: u64::from(seed),
            solver: kind.clone(),
            normalization: PowerNormalization::FullArray,
        };
        curves.push(run_sweep_with(&cfg, &kind).map_err(err)?);
    }
    to_json(&curves)
}

/// Closed-form multiplication counts; the exponential ones as decimal strings.
pub fn complexity_json(nt: usize, k: usize, iterations: usize) -> Result<String, String> {
    to_json(&complexity_formulas(nt, k, iterations))
}

#[wasm_bindgen]
pub fn precode_instance(nt: usize, k: usize, order: usize, delta: f64, tmax: usize, seed: u32, solvers: &str) -> Result<String, JsError> {
    instance_json(nt, k, order, delta, tmax, seed, solvers).map_err(|e| JsError::new(&e))
}

#[allow(clippy::too_many_arguments)]
#[wasm_bindgen]
pub fn ser_curves(
    nt: usize,
    k: usize,
    order: usize,
    snr_start: f64,
    snr_stop: f64,
    snr_step: f64,
    trials: u32,
    seed: u32,
    delta: f64,
    tmax: usize,
    solvers: &str,
) -> Result<String, JsError> {
    curves_json(nt, k, order, snr_start, snr_stop, snr_step, trials, seed, delta, tmax, solvers).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn complexity_table(nt: usize, k: usize, iterations: usize) -> Result<String, JsError> {
    complexity_json(nt, k, iterations).map_err(|e| JsError::new(&e))
}
