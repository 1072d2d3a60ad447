//! Acceptance criteria. Each criterion prints one `[PASS]` / `[FAIL]` line.
//!
//! Set `ONEBIT_FULL_SCALE=1` to run the antenna-selection sweep at 10^4
//! trials per point instead of 10^3.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use onebit::geometry::{Constellation, DecisionBasis, FeasibilityMatrix, MessageVector};
use onebit::lift::{lift_channel, lift_vector};
use onebit::precoders::complexity::{chi_proposed, chi_symbol_scaling};
use onebit::precoders::{
    bf_refine, exhaustive_search, iht_solve, two_stage_precode, Alphabet, IhtConfig, SolverKind, TernaryVector,
};
use onebit::report::to_csv;
use onebit::sim::{draw_channel, run_sweep_on, PowerNormalization, SerCurve, SerPoint, SimConfig};

/// Float slack for comparing independently recomputed coefficients.
const ROUNDING: f64 = 1e-12;

fn report(id: u32, name: &str, pass: bool, detail: String, elapsed: Duration) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id}: {name} ({detail}; {:.2?})", elapsed);
}

fn instance(rng: &mut ChaCha8Rng, users: usize, antennas: usize, order: usize) -> (onebit::ComplexMatrix, MessageVector, FeasibilityMatrix) {
    let h = draw_channel(users, antennas, rng);
    let mu = MessageVector::new((0..users).map(|_| rng.random_range(0..order)).collect(), order).unwrap();
    let f = FeasibilityMatrix::build(&h, &mu, order).unwrap();
    (h, mu, f)
}

/// One-sided two-proportion z statistic for `a > b`.
fn z_greater(a: &SerPoint, b: &SerPoint) -> f64 {
    let se = (a.standard_error().powi(2) + b.standard_error().powi(2)).sqrt();
    if se == 0.0 {
        return if a.ser > b.ser { f64::INFINITY } else { 0.0 };
    }
    (a.ser - b.ser) / se
}

fn criterion_1_complexity_closed_forms() -> bool {
    let start = Instant::now();
    let chi_s = chi_symbol_scaling(128, 16);
    let chi_p = chi_proposed(128, 16, 12);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = 0;
    for i in 0..100 {
        let order = if i % 2 == 0 { 4 } else { 8 };
        let (h, mu, _) = instance(&mut rng, 16, 128, order);
        let (_, report, first) = two_stage_precode(&h, &mu, order, &IhtConfig::default(), 1).unwrap();
        let formula = chi_proposed(128, 16, first.iterations);
        if report.real_multiplications != formula || report.formula_value != Some(formula) {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed();
    let pass = chi_s == 114_656 && chi_p == 212_992 && mismatches == 0 && elapsed < Duration::from_secs(1);
    report(1, "complexity closed forms", pass, format!("chi_S={chi_s}, chi_P(12)={chi_p}, count mismatches {mismatches}/100"), elapsed);
    pass
}

fn criterion_2_feasibility_certificate() -> bool {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cfg = IhtConfig::new(3.0, 12).unwrap();
    let (mut feasible, mut violations) = (0, 0);
    for i in 0..1000 {
        let order = if i % 2 == 0 { 4 } else { 8 };
        let (h, mu, f) = instance(&mut rng, 16, 128, order);
        let r = iht_solve(&f, &cfg);
        if !r.feasible {
            continue;
        }
        feasible += 1;
        let c = Constellation::psk(order).unwrap();
        let y = h.mul_vec(&r.x.to_complex()).unwrap();
        violations += y.iter().zip(mu.as_slice()).filter(|(&y, &m)| c.decode(y) != m).count();
    }
    let elapsed = start.elapsed();
    let pass = violations == 0 && elapsed < Duration::from_secs(60);
    report(2, "feasibility certificate", pass, format!("{feasible}/1000 feasible, {violations} noiseless decoding errors"), elapsed);
    pass
}

fn criterion_3_bf_monotonicity_and_oracle_dominance() -> bool {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut decreases = 0;
    for _ in 0..10_000 {
        let users = rng.random_range(1..=8);
        let antennas = rng.random_range(users..=32);
        let order = [4, 8, 16][rng.random_range(0..3)];
        let (_, _, f) = instance(&mut rng, users, antennas, order);
        let x = TernaryVector::new((0..2 * antennas).map(|_| rng.random_range(-1..=1)).collect()).unwrap();
        let before = f.min_coefficient(&x).unwrap();
        let after = f.min_coefficient(&bf_refine(&f, &x).x).unwrap();
        if after < before - ROUNDING {
            decreases += 1;
        }
    }

    let (mut checked, mut dominance_failures) = (0, 0);
    for antennas in [4, 6] {
        for i in 0..60 {
            let order = if i % 2 == 0 { 4 } else { 8 };
            let (h, mu, f) = instance(&mut rng, 2, antennas, order);
            let tern = exhaustive_search(&f, Alphabet::Ternary, 16).unwrap();
            let bin = exhaustive_search(&f, Alphabet::Binary, 16).unwrap();
            let (x, _, _) = two_stage_precode(&h, &mu, order, &IhtConfig::new(1.0, 12).unwrap(), 1).unwrap();
            let tern_min = f.min_coefficient(&tern.x).unwrap();
            let bin_min = f.min_coefficient(&bin.x).unwrap();
            let ts_min = f.min_coefficient(&x).unwrap();
            checked += 1;
            if tern_min < ts_min - ROUNDING || tern_min < bin_min - ROUNDING {
                dominance_failures += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = decreases == 0 && dominance_failures == 0 && elapsed < Duration::from_secs(300);
    report(
        3,
        "BF monotonicity and oracle dominance",
        pass,
        format!("{decreases}/10000 BF decreases, {dominance_failures}/{checked} dominance failures"),
        elapsed,
    );
    pass
}

fn antenna_selection_sweep(order: usize, trials: u64) -> (SerCurve, SerCurve) {
    let base = SimConfig {
        antennas: 8,
        users: 2,
        order,
        snr_db: (0..=7).map(|i| 5.0 * i as f64).collect(),
        trials,
        seed: 4,
        solver: SolverKind::Qzf,
        normalization: PowerNormalization::FullArray,
    };
    let run = |alphabet| {
        let solver = SolverKind::exhaustive(alphabet);
        let cfg = SimConfig { solver: solver.clone(), ..base.clone() };
        run_sweep_on(&cfg, &solver, rayon::current_num_threads()).unwrap()
    };
    (run(Alphabet::Ternary), run(Alphabet::Binary))
}

fn criterion_4_antenna_selection_gain() -> bool {
    let start = Instant::now();
    let full = std::env::var("ONEBIT_FULL_SCALE").is_ok_and(|v| v == "1");
    let trials = if full { 10_000 } else { 1_000 };
    let (tern, bin) = antenna_selection_sweep(8, trials);

    let mut within_band = true;
    for (t, b) in tern.points.iter().zip(&bin.points) {
        // ternary <= binary, up to the 95% band of the difference
        within_band &= z_greater(t, b) <= 1.96;
        println!(
            "    m=8 {:>4} dB  ternary {:>4}/{}  binary {:>4}/{}",
            t.snr_db, t.symbol_errors, t.symbols_sent, b.symbol_errors, b.symbols_sent
        );
    }
    let n = tern.points.len();
    let strict_gap = (n - 2..n).all(|p| z_greater(&bin.points[p], &tern.points[p]) > 1.96);

    let (t4, b4) = antenna_selection_sweep(4, trials / 5);
    for (t, b) in t4.points.iter().zip(&b4.points) {
        println!(
            "    m=4 {:>4} dB  ternary {:>4}/{}  binary {:>4}/{}  (report only)",
            t.snr_db, t.symbol_errors, t.symbols_sent, b.symbol_errors, b.symbols_sent
        );
    }

    let pass = within_band && strict_gap;
    report(
        4,
        "antenna-selection gain (Nt=8, K=2, 8-PSK)",
        pass,
        format!("{trials} trials/point, ordering within band: {within_band}, strict gap at top two SNR points: {strict_gap}"),
        start.elapsed(),
    );
    pass
}

fn criterion_5_error_floor_ordering() -> bool {
    let start = Instant::now();
    let mut gaps = Vec::new();
    let mut significant = true;
    for order in [4, 8] {
        let base = SimConfig {
            antennas: 32,
            users: 8,
            order,
            snr_db: vec![0.0, 10.0, 20.0, 30.0],
            trials: 10_000,
            seed: 5,
            solver: SolverKind::Qzf,
            normalization: PowerNormalization::FullArray,
        };
        let two_stage = SolverKind::two_stage(IhtConfig::new(3.0, 12).unwrap());
        let qzf = run_sweep_on(&base, &SolverKind::Qzf, 1).unwrap();
        let ts = run_sweep_on(&SimConfig { solver: two_stage.clone(), ..base.clone() }, &two_stage, 1).unwrap();
        let (q, t) = (qzf.points.last().unwrap(), ts.points.last().unwrap());
        let z = z_greater(q, t);
        significant &= z > 1.645;
        gaps.push(q.ser - t.ser);
        println!("    m={order} at {} dB: QZF {:.5}, two-stage {:.5}, z={z:.1}", q.snr_db, q.ser, t.ser);
    }
    let elapsed = start.elapsed();
    let pass = significant && gaps[1] > gaps[0] && elapsed < Duration::from_secs(600);
    report(5, "error-floor ordering (Nt=32, K=8)", pass, format!("gaps m=4 {:.5}, m=8 {:.5}", gaps[0], gaps[1]), elapsed);
    pass
}

fn criterion_6_geometry_suite() -> bool {
    let start = Instant::now();
    let mut inverse_err = 0.0f64;
    for m in [4usize, 8, 16] {
        for i in 0..m {
            let b = DecisionBasis::new(m, i).unwrap();
            for r in 0..2 {
                for c in 0..2 {
                    let prod: f64 = (0..2).map(|t| b.s[r][t] * b.s_inv[t][c]).sum();
                    inverse_err = inverse_err.max((prod - f64::from(u8::from(r == c))).abs());
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut tested, mut disagreements) = (0, 0);
    while tested < 100_000 {
        let m = [4usize, 8, 16][tested % 3];
        let c = Constellation::psk(m).unwrap();
        let y = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let i = rng.random_range(0..m);
        let a = DecisionBasis::new(m, i).unwrap().coefficients([y.re, y.im]);
        if a[0].abs() < 1e-9 || a[1].abs() < 1e-9 {
            continue;
        }
        tested += 1;
        let in_cone = a[0] > 0.0 && a[1] > 0.0;
        if in_cone != c.in_region(y, i) || in_cone != (c.decode(y) == i) {
            disagreements += 1;
        }
    }

    let mut lift_err = 0.0f64;
    for _ in 0..1000 {
        let k = rng.random_range(1..=4);
        let nt = rng.random_range(1..=8);
        let h = draw_channel(k, nt, &mut rng);
        let x: Vec<Complex64> = (0..nt).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let direct = lift_vector(&h.mul_vec(&x).unwrap());
        let lifted = lift_channel(&h).matrix.mul_vec(&lift_vector(&x)).unwrap();
        lift_err = direct.iter().zip(&lifted).map(|(a, b)| (a - b).abs()).fold(lift_err, f64::max);
    }

    let elapsed = start.elapsed();
    let pass = inverse_err < 1e-12 && disagreements == 0 && lift_err < 1e-12 && elapsed < Duration::from_secs(10);
    report(
        6,
        "geometry suite",
        pass,
        format!("max |S S^-1 - I| {inverse_err:.1e}, {disagreements}/100000 membership disagreements, lift error {lift_err:.1e}"),
        elapsed,
    );
    pass
}

fn criterion_7_reproducibility() -> bool {
    let start = Instant::now();
    let mut identical = true;
    for solver in [SolverKind::two_stage(IhtConfig::new(3.0, 12).unwrap()), SolverKind::Qzf] {
        let cfg = SimConfig {
            antennas: 32,
            users: 8,
            order: 8,
            snr_db: vec![-10.0, 0.0, 10.0, 20.0],
            trials: 500,
            seed: 7,
            solver: solver.clone(),
            normalization: PowerNormalization::FullArray,
        };
        let a = to_csv(&[run_sweep_on(&cfg, &solver, 1).unwrap()]);
        let b = to_csv(&[run_sweep_on(&cfg, &solver, 1).unwrap()]);
        let c = to_csv(&[run_sweep_on(&cfg, &solver, 8).unwrap()]);
        identical &= a == b && a == c;
    }
    report(7, "reproducibility", identical, "byte-identical CSV across runs and 1 vs 8 workers".into(), start.elapsed());
    identical
}

fn main() {
    let criteria: [fn() -> bool; 7] = [
        criterion_1_complexity_closed_forms,
        criterion_2_feasibility_certificate,
        criterion_3_bf_monotonicity_and_oracle_dominance,
        criterion_4_antenna_selection_gain,
        criterion_5_error_floor_ordering,
        criterion_6_geometry_suite,
        criterion_7_reproducibility,
    ];
    let failed = criteria.iter().filter(|c| !c()).count();
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
