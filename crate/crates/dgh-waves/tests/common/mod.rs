//! Brute-force classification oracle shared by the property and acceptance
//! suites.
//!
//! Completely independent of the library's case tables: the admissible
//! wave interval is found by sampling the sign of `F` on every candidate
//! interval between consecutive breakpoints (the generating roots and the
//! pole), and the wave kind is read off from the endpoint types alone.

use dgh_waves::{potential_eval, TravelingWaveProblem, WaveKind};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Endpoint typology of a positive corridor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum End {
    /// Simple zero of P away from the pole: turning point.
    Turn,
    /// Repeated zero away from the pole: exponential approach.
    Double,
    /// Pole coinciding with a simple zero: removable, a peakon corner.
    Corner,
    /// Bare pole: a cusp.
    Cusp,
    /// Anything else (triple zero, pole on a repeated zero, infinity).
    Inadmissible,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleOutcome {
    Wave {
        kind: WaveKind,
        range: (f64, f64),
    },
    NoWave,
    Constant(f64),
    /// More than one admissible corridor: the case split is not exclusive.
    Ambiguous,
}

fn eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Classify `problem` from its generating roots (with exact repeats) and
/// pole by sign sampling `F` on `n` Chebyshev points per candidate interval.
pub fn oracle_classify(
    problem: &TravelingWaveProblem,
    roots: &[f64],
    pole: Option<f64>,
    n: usize,
) -> OracleOutcome {
    // Triple root: the constant wave is all there is.
    if roots.len() == 3 && eq(roots[0], roots[2]) {
        return OracleOutcome::Constant(roots[0]);
    }
    if roots.len() == 1 {
        return OracleOutcome::NoWave;
    }

    // Breakpoints: distinct root values plus the pole.
    let mut breaks: Vec<f64> = Vec::new();
    for &r in roots {
        if !breaks.iter().any(|&b| eq(b, r)) {
            breaks.push(r);
        }
    }
    if let Some(p) = pole {
        if !breaks.iter().any(|&b| eq(b, p)) {
            breaks.push(p);
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let multiplicity = |e: f64| roots.iter().filter(|&&r| eq(r, e)).count();
    let end_type = |e: f64| -> End {
        let mult = multiplicity(e);
        let on_pole = pole.map(|p| eq(p, e)).unwrap_or(false);
        match (mult, on_pole) {
            (0, true) => End::Cusp,
            (1, false) => End::Turn,
            (1, true) => End::Corner,
            (2, false) => End::Double,
            _ => End::Inadmissible,
        }
    };

    let positive_inside = |lo: f64, hi: f64| -> bool {
        let mid = 0.5 * (lo + hi);
        let rad = 0.5 * (hi - lo);
        for k in 0..n {
            let x = mid
                + rad * (std::f64::consts::PI * (2.0 * k as f64 + 1.0) / (2.0 * n as f64)).cos();
            match potential_eval(problem, x) {
                Ok(v) if v > 0.0 => {}
                Ok(_) => return false,
                Err(_) => {}
            }
        }
        true
    };

    let mut corridors: Vec<(f64, f64)> = Vec::new();
    for w in breaks.windows(2) {
        if positive_inside(w[0], w[1]) {
            corridors.push((w[0], w[1]));
        }
    }
    // A corridor whose endpoints are both admissible carries a bounded wave.
    let mut waves: Vec<(f64, f64, End, End)> = Vec::new();
    for (lo, hi) in corridors {
        let (el, eh) = (end_type(lo), end_type(hi));
        if el != End::Inadmissible && eh != End::Inadmissible {
            waves.push((lo, hi, el, eh));
        }
    }
    match waves.len() {
        0 => OracleOutcome::NoWave,
        1 => {
            let (lo, hi, el, eh) = waves[0];
            let kind = match (el, eh) {
                (End::Turn, End::Turn) => WaveKind::SmoothPeriodic,
                (End::Double, End::Turn) => WaveKind::SmoothDecayDown,
                (End::Turn, End::Double) => WaveKind::SmoothDecayUp,
                (End::Turn, End::Corner) => WaveKind::PeriodicPeakon,
                (End::Double, End::Corner) => WaveKind::PeakonDecay,
                (End::Corner, End::Turn) => WaveKind::PeriodicAntiPeakon,
                (End::Corner, End::Double) => WaveKind::AntiPeakonDecay,
                (End::Turn, End::Cusp) => WaveKind::PeriodicCuspon,
                (End::Double, End::Cusp) => WaveKind::CusponDecay,
                (End::Cusp, End::Turn) => WaveKind::PeriodicAntiCuspon,
                (End::Cusp, End::Double) => WaveKind::AntiCusponDecay,
                _ => return OracleOutcome::Ambiguous,
            };
            OracleOutcome::Wave {
                kind,
                range: (lo, hi),
            }
        }
        _ => OracleOutcome::Ambiguous,
    }
}

/// A random problem built from explicit roots, so the oracle knows the
/// ground truth. Returns the problem and its sorted generating roots.
pub struct GeneratedProblem {
    pub problem: TravelingWaveProblem,
    pub roots: [f64; 3],
    pub pole: Option<f64>,
}

/// Draw a root triple with pairwise separation > `min_sep`, a speed, and a
/// pole placed either safely away from all roots or exactly on one of them
/// (to exercise the peakon rows). A quarter of the draws are KdV-limit
/// problems with no pole at all.
pub fn random_problem(rng: &mut ChaCha8Rng, min_sep: f64) -> GeneratedProblem {
    use dgh_waves::{constants_from_roots, make_problem, ModelParams};
    loop {
        let mut roots = [
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        ];
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if roots[1] - roots[0] <= min_sep || roots[2] - roots[1] <= min_sep {
            continue;
        }
        let c: f64 = rng.gen_range(-2.0..2.0);
        let c0 = c - (roots[0] + roots[1] + roots[2]);
        let style: f64 = rng.gen_range(0.0..1.0);
        let (alpha, gamma, pole) = if style < 0.25 {
            let gamma = rng.gen_range(0.2..2.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
            (0.0, gamma, None)
        } else {
            let alpha: f64 = [0.5, 1.0, 2.0][rng.gen_range(0..3)];
            let pole = if style < 0.6 {
                // Exactly on a root: peakon family.
                roots[rng.gen_range(0..3)]
            } else {
                loop {
                    let p = rng.gen_range(-4.5..4.5);
                    if roots.iter().all(|r| (r - p).abs() > min_sep) {
                        break p;
                    }
                }
            };
            (alpha, alpha * alpha * (pole - c), Some(pole))
        };
        let params = match ModelParams::new(alpha, c0, gamma) {
            Ok(p) => p,
            Err(_) => continue, // alpha = gamma = 0 draw
        };
        let (a, b, _) = constants_from_roots(&params, c, roots[0], roots[1]);
        let problem = make_problem(params, c, a, b).unwrap();
        return GeneratedProblem {
            problem,
            roots,
            pole,
        };
    }
}
