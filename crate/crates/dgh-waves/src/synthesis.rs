//! Profile synthesis by quadrature of `(phi')^2 = F(phi)`.
//!
//! Every non-constant bounded wave is assembled from monotone branches
//! parametrized as `z(phi)`: the blowing-up ODE in `z` is never integrated
//! directly, so every integrand stays bounded. A branch starts at the
//! distinguished extremum (crest, trough, corner or cusp, placed at
//! `z = 0`) and runs to the far end of the range, which is either a simple
//! zero of `F` (a turning point, half a period away) or a repeated zero
//! (approached exponentially; the quadrature is truncated at `tail_tol`
//! and continued with the analytic tail).
//!
//! Sample placement combines quadratic clustering at turning points,
//! geometric clustering (ratio 3/2) toward cusps and repeated roots, and
//! an equidistribution pass that keeps the finite-difference residual
//! `(dphi/dz)^2 - F` of the emitted samples within its verification
//! budget.

use crate::classify::{classify, composite_compatible, stumpon_constant, WaveClass, WaveKind};
use crate::error::{DghError, Result};
use crate::model::{close, potential_cancelled, TravelingWaveProblem, DEFAULT_CLUSTER_TOL};
use crate::quadrature::{cumulative_z, potential_fn, Contact};

/// One profile sample. `dphi` is the signed derivative `dphi/dz`; it is
/// NaN at samples where the wave is not differentiable (corners, cusps).
#[derive(Debug, Clone, Copy)]
pub struct Sample {
    pub z: f64,
    pub phi: f64,
    pub dphi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentKind {
    Smooth,
    /// Peakon corner with its one-sided slopes. A NaN slope marks a side
    /// where a composite abuts a cusp arc instead.
    Corner { slope_left: f64, slope_right: f64 },
    Cusp,
    /// Flat stretch `phi = c~`; stumpons only.
    Plateau,
}

impl SegmentKind {
    pub fn name(&self) -> &'static str {
        match self {
            SegmentKind::Smooth => "smooth",
            SegmentKind::Corner { .. } => "corner",
            SegmentKind::Cusp => "cusp",
            SegmentKind::Plateau => "plateau",
        }
    }
}

/// Inclusive sample index range of one segment.
#[derive(Debug, Clone, Copy)]
pub struct Segment {
    pub kind: SegmentKind,
    pub first: usize,
    pub last: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct DecayInfo {
    /// The repeated root the wave approaches as `z -> +-inf`.
    pub limit: f64,
    /// Log-linear fit of the samples over the outer half of the quadrature
    /// region.
    pub rate_fitted: f64,
    /// `sqrt(kappa)` with `kappa = lim F / (phi - limit)^2`.
    pub rate_predicted: f64,
    /// Where quadrature stops and the analytic tail begins.
    pub z_cut: f64,
}

#[derive(Debug, Clone)]
pub struct WaveProfile {
    pub samples: Vec<Sample>,
    pub segments: Vec<Segment>,
    /// Period `2L` for periodic profiles (composites included).
    pub periodic: Option<f64>,
    pub decay: Option<DecayInfo>,
    pub problem: TravelingWaveProblem,
    pub wave_class: WaveClass,
}

#[derive(Debug, Clone, Copy)]
pub struct SynthesisOptions {
    /// Minimum number of samples per monotone branch.
    pub n: usize,
    /// Relative truncation of the infinite approach to a repeated root.
    pub tail_tol: f64,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        Self {
            n: 512,
            tail_tol: 1e-6,
        }
    }
}

/// Innermost geometric sample distance to a cusp, relative to the range.
/// Small enough that one-sided secants of `(phi - c~)^2`, which vanish
/// like `|z - z_cusp|^(1/3)`, are resolved to well below 1e-3.
pub(crate) const CUSP_DELTA_MIN: f64 = 1e-9;
/// Relative width of the cusp neighbourhood where the 2/3-power local form
/// dominates; the finite-difference equidistribution does not apply there.
pub(crate) const CUSP_STANDOFF: f64 = 1e-2;

impl WaveProfile {
    pub fn phi_min(&self) -> f64 {
        self.samples.iter().map(|s| s.phi).fold(f64::INFINITY, f64::min)
    }

    pub fn phi_max(&self) -> f64 {
        self.samples.iter().map(|s| s.phi).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn z_min(&self) -> f64 {
        self.samples.first().map(|s| s.z).unwrap_or(f64::NAN)
    }

    pub fn z_max(&self) -> f64 {
        self.samples.last().map(|s| s.z).unwrap_or(f64::NAN)
    }

    /// Indices of non-smooth samples (corners, cusps, plateau boundaries).
    pub fn singular_indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for seg in &self.segments {
            match seg.kind {
                SegmentKind::Corner { .. } | SegmentKind::Cusp => out.push(seg.first),
                SegmentKind::Plateau => {
                    out.push(seg.first);
                    out.push(seg.last);
                }
                SegmentKind::Smooth => {}
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Evaluate the profile at an arbitrary `z` by local interpolation:
    /// cubic Hermite inside smooth panels, the 2/3-power local model next
    /// to cusps. Periodic profiles wrap around.
    pub fn interpolate(&self, z: f64) -> f64 {
        let n = self.samples.len();
        assert!(n >= 2, "cannot interpolate a profile with < 2 samples");
        let (z0, z1) = (self.z_min(), self.z_max());
        let mut zq = z;
        if let Some(period) = self.periodic {
            zq = z0 + (zq - z0).rem_euclid(period);
            if zq > z1 {
                zq = z1;
            }
        } else {
            zq = zq.clamp(z0, z1);
        }
        let idx = self
            .samples
            .partition_point(|s| s.z <= zq)
            .clamp(1, n - 1);
        let (a, b) = (&self.samples[idx - 1], &self.samples[idx]);
        let h = b.z - a.z;
        if h <= 0.0 {
            return a.phi;
        }
        let t = (zq - a.z) / h;
        let pole = self.problem.pole().unwrap_or(f64::NAN);
        let near_pole = |s: &Sample| close(s.phi, pole, 1e-9);
        // Corner markers carry the finite one-sided slopes replacing the
        // undefined derivative stored at the corner sample.
        let mut da = a.dphi;
        let mut db = b.dphi;
        for seg in &self.segments {
            if let SegmentKind::Corner {
                slope_left,
                slope_right,
            } = seg.kind
            {
                if seg.first == idx - 1 {
                    da = slope_right;
                }
                if seg.first == idx {
                    db = slope_left;
                }
            }
        }
        match (da.is_finite(), db.is_finite()) {
            (true, true) => {
                // Cubic Hermite.
                let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
                let h10 = t * (1.0 - t) * (1.0 - t);
                let h01 = t * t * (3.0 - 2.0 * t);
                let h11 = t * t * (t - 1.0);
                h00 * a.phi + h10 * h * da + h01 * b.phi + h11 * h * db
            }
            (false, _) if near_pole(a) => {
                // Local 2/3 power anchored at the cusp sample `a`.
                a.phi + (b.phi - a.phi) * t.powf(2.0 / 3.0)
            }
            (_, false) if near_pole(b) => {
                b.phi + (a.phi - b.phi) * (1.0 - t).powf(2.0 / 3.0)
            }
            _ => a.phi + (b.phi - a.phi) * t,
        }
    }
}

/// How a branch terminates away from its extremum.
enum FarEnd {
    /// Simple zero of `F`, reached at the half-period.
    Turn(f64),
    /// Repeated zero approached exponentially.
    Asymptote { limit: f64 },
}

struct BranchSpec {
    start_phi: f64,
    start: Contact,
    far: FarEnd,
}

/// A monotone branch from the extremum at `z = 0` outward.
struct Branch {
    z: Vec<f64>,
    phi: Vec<f64>,
    dphi: Vec<f64>,
    decay: Option<DecayInfo>,
}

fn build_branch(
    f: &dyn Fn(f64) -> f64,
    spec: &BranchSpec,
    pole: Option<f64>,
    opts: &SynthesisOptions,
) -> Branch {
    let far_phi = match spec.far {
        FarEnd::Turn(p) => p,
        FarEnd::Asymptote { limit } => limit,
    };
    let dir = (far_phi - spec.start_phi).signum();
    let span = (far_phi - spec.start_phi).abs();
    let n_half = (opts.n / 2).max(16);

    // --- initial grid: near half [start, mid] then far half [mid, far] ---
    let mut grid: Vec<f64> = Vec::with_capacity(2 * n_half + 8);
    match spec.start {
        Contact::Pole => {
            grid.push(spec.start_phi);
            let mut deltas = Vec::new();
            let mut d = 0.5 * span;
            while d > CUSP_DELTA_MIN * span {
                deltas.push(d);
                d /= 1.5;
            }
            deltas.push(d);
            for &d in deltas.iter().rev() {
                grid.push(spec.start_phi + dir * d);
            }
        }
        _ => {
            for j in 0..=n_half {
                let th = std::f64::consts::FRAC_PI_2 * j as f64 / n_half as f64;
                let s = th.sin();
                grid.push(spec.start_phi + dir * 0.5 * span * s * s);
            }
        }
    }
    match spec.far {
        FarEnd::Turn(p) => {
            for j in 1..=n_half {
                let th = std::f64::consts::FRAC_PI_2 * (1.0 - j as f64 / n_half as f64);
                let s = th.sin();
                grid.push(p - dir * 0.5 * span * s * s);
            }
        }
        FarEnd::Asymptote { limit } => {
            let mut deltas = Vec::new();
            let mut d = 0.5 * span / 1.5;
            while d > opts.tail_tol * span {
                deltas.push(d);
                d /= 1.5;
            }
            deltas.push(opts.tail_tol * span);
            for &d in &deltas {
                grid.push(limit - dir * d);
            }
        }
    }
    dedup_monotone(&mut grid, dir);

    // --- equidistribution pass for the finite-difference residual ---
    let in_standoff = |phi: f64| {
        pole.map(|p| (phi - p).abs() < CUSP_STANDOFF * span)
            .unwrap_or(false)
    };
    let mut f_max: f64 = 1.0;
    for &phi in &grid {
        if !in_standoff(phi) && phi != spec.start_phi {
            let v = f(phi);
            if v.is_finite() {
                f_max = f_max.max(v.abs());
            }
        }
    }
    // Equidistribution target for the emitted samples' finite-difference
    // residual, two orders below the verification budget.
    let eps = 5e-8 * f_max;
    let fdd = |phi: f64| {
        let h = 1e-4 * span;
        (f(phi - h) - 2.0 * f(phi) + f(phi + h)) / (h * h)
    };
    let mut refined: Vec<f64> = Vec::with_capacity(grid.len() * 2);
    refined.push(grid[0]);
    for w in grid.windows(2) {
        let (a, b) = (w[0], w[1]);
        let pm = 0.5 * (a + b);
        let mut splits = 1usize;
        if !in_standoff(pm) {
            let fv = f(pm);
            if fv.is_finite() && fv > 0.0 {
                let h_z = (b - a).abs() / fv.sqrt();
                let curv = (fv * fdd(pm)).abs().max(1e-300);
                let limit = (6.0 * eps / curv).sqrt();
                if h_z > limit {
                    splits = ((h_z / limit).ceil() as usize).min(4096);
                }
            }
        }
        for k in 1..=splits {
            refined.push(a + (b - a) * k as f64 / splits as f64);
        }
    }
    let mut grid = refined;
    dedup_monotone(&mut grid, dir);

    // --- cumulative quadrature ---
    let end_contact = match spec.far {
        FarEnd::Turn(_) => Contact::SimpleZero,
        FarEnd::Asymptote { .. } => Contact::Regular, // truncated before the root
    };
    let z = cumulative_z(f, &grid, spec.start, end_contact);

    let mut dphi: Vec<f64> = Vec::with_capacity(grid.len());
    for (j, &phi) in grid.iter().enumerate() {
        let d = if j == 0 {
            match spec.start {
                Contact::SimpleZero => 0.0,
                Contact::Regular => dir * f(phi).max(0.0).sqrt(),
                Contact::Pole => f64::NAN,
            }
        } else if j == grid.len() - 1 && matches!(spec.far, FarEnd::Turn(_)) {
            0.0
        } else {
            dir * f(phi).max(0.0).sqrt()
        };
        dphi.push(d);
    }

    let mut branch = Branch {
        z,
        phi: grid,
        dphi,
        decay: None,
    };

    // --- analytic exponential tail beyond the truncation point ---
    if let FarEnd::Asymptote { limit } = spec.far {
        let h = 1e-4 * span;
        let probe = |hh: f64| f(limit - dir * hh) / (hh * hh);
        let kappa = (2.0 * probe(0.5 * h) - probe(h)).abs();
        let rate = kappa.sqrt();
        let z_cut = *branch.z.last().unwrap();
        let rate_fitted = fit_decay_rate(&branch, limit, z_cut);

        let z_end = (1.5 * z_cut).max(z_cut + 8.0 / rate);
        let n_tail = 256;
        let phi_cut = *branch.phi.last().unwrap();
        for k in 1..=n_tail {
            let zt = z_cut + (z_end - z_cut) * k as f64 / n_tail as f64;
            let offset = (phi_cut - limit) * (-rate * (zt - z_cut)).exp();
            branch.z.push(zt);
            branch.phi.push(limit + offset);
            branch.dphi.push(-rate * offset);
        }
        branch.decay = Some(DecayInfo {
            limit,
            rate_fitted,
            rate_predicted: rate,
            z_cut,
        });
    }
    branch
}

fn dedup_monotone(grid: &mut Vec<f64>, dir: f64) {
    grid.dedup();
    // Nodes generated from the two ends can collide after rounding; keep
    // strict monotonicity.
    let mut out = Vec::with_capacity(grid.len());
    for &v in grid.iter() {
        if out.is_empty() || (v - *out.last().unwrap()) * dir > 0.0 {
            out.push(v);
        }
    }
    *grid = out;
}

/// Log-linear regression of `ln |phi - limit|` against `z` over the outer
/// half of the quadrature region; returns the positive decay rate.
fn fit_decay_rate(branch: &Branch, limit: f64, z_cut: f64) -> f64 {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (z, phi) in branch.z.iter().zip(&branch.phi) {
        if *z >= 0.5 * z_cut && *z <= z_cut {
            let d = (phi - limit).abs();
            if d > 0.0 {
                xs.push(*z);
                ys.push(d.ln());
            }
        }
    }
    if xs.len() < 2 {
        return f64::NAN;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    -(sxy / sxx)
}

/// Mirror a branch about `z = 0` and join: the wave is even about its
/// extremum. `marker` labels the centre sample when it is singular.
fn mirror_join(branch: &Branch, marker: Option<SegmentKind>) -> (Vec<Sample>, Vec<Segment>) {
    let n = branch.z.len();
    let mut samples = Vec::with_capacity(2 * n - 1);
    for j in (1..n).rev() {
        samples.push(Sample {
            z: -branch.z[j],
            phi: branch.phi[j],
            dphi: -branch.dphi[j],
        });
    }
    for j in 0..n {
        samples.push(Sample {
            z: branch.z[j],
            phi: branch.phi[j],
            dphi: branch.dphi[j],
        });
    }
    let centre = n - 1;
    let last = samples.len() - 1;
    let segments = match marker {
        None => vec![Segment {
            kind: SegmentKind::Smooth,
            first: 0,
            last,
        }],
        Some(kind) => vec![
            Segment {
                kind: SegmentKind::Smooth,
                first: 0,
                last: centre - 1,
            },
            Segment {
                kind,
                first: centre,
                last: centre,
            },
            Segment {
                kind: SegmentKind::Smooth,
                first: centre + 1,
                last,
            },
        ],
    };
    (samples, segments)
}

fn expect_kind(class: &WaveClass, ok: &[WaveKind], what: &str) -> Result<()> {
    if ok.contains(&class.kind) {
        Ok(())
    } else {
        Err(DghError::WrongClass(format!(
            "{what} cannot synthesize a {} wave",
            class.kind
        )))
    }
}

/// Smooth periodic wave: one full period sampled, crest at `z = 0`,
/// trough at `z = +-L`. Degenerate constant classes produce a flat window.
pub fn synth_periodic(
    problem: &TravelingWaveProblem,
    class: &WaveClass,
    opts: &SynthesisOptions,
) -> Result<WaveProfile> {
    expect_kind(
        class,
        &[WaveKind::SmoothPeriodic, WaveKind::Constant],
        "synth_periodic",
    )?;
    if class.kind == WaveKind::Constant {
        return Ok(constant_profile(problem, class));
    }
    let (m, big_m) = class.interval;
    let f = potential_fn(problem);
    check_wave_interval(&*f, m, big_m)?;
    let spec = BranchSpec {
        start_phi: big_m,
        start: Contact::SimpleZero,
        far: FarEnd::Turn(m),
    };
    let branch = build_branch(&*f, &spec, class.pole, opts);
    let half = *branch.z.last().unwrap();
    let (samples, segments) = mirror_join(&branch, None);
    Ok(WaveProfile {
        samples,
        segments,
        periodic: Some(2.0 * half),
        decay: None,
        problem: *problem,
        wave_class: class.clone(),
    })
}

/// Smooth homoclinic wave: quadrature from the simple-zero extremum toward
/// the repeated root, truncated at `tail_tol` and extended analytically.
pub fn synth_decay(
    problem: &TravelingWaveProblem,
    class: &WaveClass,
    opts: &SynthesisOptions,
) -> Result<WaveProfile> {
    expect_kind(
        class,
        &[WaveKind::SmoothDecayDown, WaveKind::SmoothDecayUp],
        "synth_decay",
    )?;
    let (m, big_m) = class.interval;
    let (extremum, limit) = match class.kind {
        WaveKind::SmoothDecayDown => (big_m, m),
        _ => (m, big_m),
    };
    let f = potential_fn(problem);
    check_wave_interval(&*f, m, big_m)?;
    let spec = BranchSpec {
        start_phi: extremum,
        start: Contact::SimpleZero,
        far: FarEnd::Asymptote { limit },
    };
    let branch = build_branch(&*f, &spec, class.pole, opts);
    let decay = branch.decay;
    let (samples, segments) = mirror_join(&branch, None);
    Ok(WaveProfile {
        samples,
        segments,
        periodic: None,
        decay,
        problem: *problem,
        wave_class: class.clone(),
    })
}

/// Peaked wave: the pole is cancelled by a root, the corner at
/// `phi = c~` has finite opposite one-sided slopes `-+sqrt(F(c~))`.
pub fn synth_peakon(
    problem: &TravelingWaveProblem,
    class: &WaveClass,
    opts: &SynthesisOptions,
) -> Result<WaveProfile> {
    expect_kind(
        class,
        &[
            WaveKind::PeriodicPeakon,
            WaveKind::PeakonDecay,
            WaveKind::PeriodicAntiPeakon,
            WaveKind::AntiPeakonDecay,
        ],
        "synth_peakon",
    )?;
    let cancelled = potential_cancelled(problem, DEFAULT_CLUSTER_TOL).map_err(|_| {
        DghError::WrongClass("peakon synthesis needs a root-cancelled pole, P(c~) = 0".into())
    })?;
    let pole = class.pole.unwrap();
    let f = move |phi: f64| cancelled.eval(phi);

    let far = match class.kind {
        WaveKind::PeriodicPeakon => FarEnd::Turn(class.interval.0),
        WaveKind::PeakonDecay => FarEnd::Asymptote {
            limit: class.interval.0,
        },
        WaveKind::PeriodicAntiPeakon => FarEnd::Turn(class.interval.1),
        _ => FarEnd::Asymptote {
            limit: class.interval.1,
        },
    };
    let far_phi = match far {
        FarEnd::Turn(p) => p,
        FarEnd::Asymptote { limit } => limit,
    };
    let dir = (far_phi - pole).signum();
    let spec = BranchSpec {
        start_phi: pole,
        start: Contact::Regular,
        far,
    };
    let branch = build_branch(&f, &spec, Some(pole), opts);
    let slope = f(pole).max(0.0).sqrt();
    // The wave leaves the corner toward the far end on the right and
    // arrives mirrored from the left.
    let marker = SegmentKind::Corner {
        slope_left: -dir * slope,
        slope_right: dir * slope,
    };
    let period = match class.kind {
        WaveKind::PeriodicPeakon | WaveKind::PeriodicAntiPeakon => {
            Some(2.0 * *branch.z.last().unwrap())
        }
        _ => None,
    };
    let decay = branch.decay;
    let (samples, segments) = mirror_join(&branch, Some(marker));
    Ok(WaveProfile {
        samples,
        segments,
        periodic: period,
        decay,
        problem: *problem,
        wave_class: class.clone(),
    })
}

/// Cusped wave: the wave turns at the simple pole with locally
/// `|phi - c~| ~ |z - z_cusp|^(2/3)`; samples cluster geometrically into
/// the cusp and never exceed the pole value.
pub fn synth_cuspon(
    problem: &TravelingWaveProblem,
    class: &WaveClass,
    opts: &SynthesisOptions,
) -> Result<WaveProfile> {
    expect_kind(
        class,
        &[
            WaveKind::PeriodicCuspon,
            WaveKind::CusponDecay,
            WaveKind::PeriodicAntiCuspon,
            WaveKind::AntiCusponDecay,
        ],
        "synth_cuspon",
    )?;
    if potential_cancelled(problem, DEFAULT_CLUSTER_TOL).is_ok() {
        return Err(DghError::WrongClass(
            "cuspon synthesis needs a non-removable pole, P(c~) != 0".into(),
        ));
    }
    let pole = class.pole.unwrap();
    let f = potential_fn(problem);
    let far = match class.kind {
        WaveKind::PeriodicCuspon => FarEnd::Turn(class.interval.0),
        WaveKind::CusponDecay => FarEnd::Asymptote {
            limit: class.interval.0,
        },
        WaveKind::PeriodicAntiCuspon => FarEnd::Turn(class.interval.1),
        _ => FarEnd::Asymptote {
            limit: class.interval.1,
        },
    };
    let spec = BranchSpec {
        start_phi: pole,
        start: Contact::Pole,
        far,
    };
    let branch = build_branch(&*f, &spec, Some(pole), opts);
    let period = match class.kind {
        WaveKind::PeriodicCuspon | WaveKind::PeriodicAntiCuspon => {
            Some(2.0 * *branch.z.last().unwrap())
        }
        _ => None,
    };
    let decay = branch.decay;
    let (samples, segments) = mirror_join(&branch, Some(SegmentKind::Cusp));
    Ok(WaveProfile {
        samples,
        segments,
        periodic: period,
        decay,
        problem: *problem,
        wave_class: class.clone(),
    })
}

fn constant_profile(problem: &TravelingWaveProblem, class: &WaveClass) -> WaveProfile {
    let value = class.interval.0;
    let n = 65;
    let samples = (0..n)
        .map(|j| Sample {
            z: -5.0 + 10.0 * j as f64 / (n - 1) as f64,
            phi: value,
            dphi: 0.0,
        })
        .collect::<Vec<_>>();
    WaveProfile {
        segments: vec![Segment {
            kind: SegmentKind::Smooth,
            first: 0,
            last: samples.len() - 1,
        }],
        samples,
        periodic: None,
        decay: None,
        problem: *problem,
        wave_class: class.clone(),
    }
}

fn check_wave_interval(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Result<()> {
    for k in 0..64 {
        let x = lo + (hi - lo) * (k as f64 + 0.5) / 64.0;
        let v = f(x);
        if v.is_finite() && v <= 0.0 {
            return Err(DghError::InvalidInterval { phi: x, value: v });
        }
    }
    Ok(())
}

/// Synthesize whatever the classification of the problem admits.
pub fn synthesize(
    problem: &TravelingWaveProblem,
    opts: &SynthesisOptions,
) -> Result<WaveProfile> {
    let class = classify(problem);
    synthesize_class(problem, &class, opts)
}

pub fn synthesize_class(
    problem: &TravelingWaveProblem,
    class: &WaveClass,
    opts: &SynthesisOptions,
) -> Result<WaveProfile> {
    match class.kind {
        WaveKind::SmoothPeriodic | WaveKind::Constant => synth_periodic(problem, class, opts),
        WaveKind::SmoothDecayDown | WaveKind::SmoothDecayUp => synth_decay(problem, class, opts),
        k if k.is_peakon() => synth_peakon(problem, class, opts),
        k if k.is_cuspon() => synth_cuspon(problem, class, opts),
        _ => Err(DghError::WrongClass(
            "no bounded wave to synthesize".into(),
        )),
    }
}

/// One full arc of a periodic peakon or cuspon: from `phi = c~` through the
/// smooth extremum and back, spanning `[0, 2L]` in arc-local coordinates.
struct Arc {
    samples: Vec<Sample>,
    marker: SegmentKind,
    length: f64,
}

fn build_arc(problem: &TravelingWaveProblem, opts: &SynthesisOptions) -> Result<Arc> {
    let class = classify(problem);
    let profile = match class.kind {
        WaveKind::PeriodicPeakon | WaveKind::PeriodicAntiPeakon => {
            synth_peakon(problem, &class, opts)?
        }
        WaveKind::PeriodicCuspon | WaveKind::PeriodicAntiCuspon => {
            synth_cuspon(problem, &class, opts)?
        }
        other => {
            return Err(DghError::IncompatibleSegments(format!(
                "composite arcs must be periodic peakons or cuspons, got {other}"
            )))
        }
    };
    // The synthesized period spans [-L, L] with the singular point at 0;
    // shift so the arc runs over [0, 2L] starting at the singular point.
    let half = profile.periodic.unwrap() / 2.0;
    let centre = profile.samples.len() / 2;
    let right = &profile.samples[centre..]; // z in [0, L]
    let marker = profile.segments[1].kind;
    let mut samples: Vec<Sample> = right.to_vec();
    // Ascent mirrored about z = L; the turn sample itself is not repeated.
    for s in right[..right.len() - 1].iter().rev() {
        samples.push(Sample {
            z: 2.0 * half - s.z,
            phi: s.phi,
            dphi: -s.dphi,
        });
    }
    // The closing sample carries the finite one-sided approach slope for
    // corners; cusp arcs close with an undefined derivative.
    if let SegmentKind::Corner { slope_left, .. } = marker {
        samples.last_mut().unwrap().dphi = slope_left;
    }
    Ok(Arc {
        samples,
        marker,
        length: 2.0 * half,
    })
}

/// Concatenate peakon/cuspon arcs sharing `A` into a composite wave.
/// The first junction sits at `z = 0`; each junction carries the marker of
/// the arc starting there. `lengths`, when given, are the expected arc
/// lengths and are cross-checked against the synthesized `2L` values.
pub fn glue_composite(
    segment_problems: &[TravelingWaveProblem],
    lengths: Option<&[f64]>,
    opts: &SynthesisOptions,
) -> Result<WaveProfile> {
    let classes: Vec<WaveClass> = segment_problems.iter().map(classify).collect();
    if !composite_compatible(segment_problems, &classes) {
        return Err(DghError::IncompatibleSegments(
            "segments must share parameters, speed and the constant A".into(),
        ));
    }
    assemble(segment_problems, &[], lengths, opts)
}

/// [`glue_composite`] without the shared-`A` requirement. The result is a
/// continuous function but not a weak solution; it exists so that the
/// verifier's negative controls can be constructed.
pub fn glue_composite_unchecked(
    segment_problems: &[TravelingWaveProblem],
    lengths: Option<&[f64]>,
    opts: &SynthesisOptions,
) -> Result<WaveProfile> {
    assemble(segment_problems, &[], lengths, opts)
}

/// Cuspon arcs separated by flat plateaus `phi = c~` of the given positive
/// lengths; requires `A` to equal the stumpon constant.
pub fn synth_stumpon(
    problem: &TravelingWaveProblem,
    plateau_lengths: &[f64],
    opts: &SynthesisOptions,
) -> Result<WaveProfile> {
    let a_star = stumpon_constant(&problem.params, problem.c)?;
    if !close(problem.a, a_star, 1e-9) {
        return Err(DghError::StumponConstantViolated {
            got: problem.a,
            expected: a_star,
        });
    }
    synth_stumpon_unchecked(problem, plateau_lengths, opts)
}

/// [`synth_stumpon`] without the stumpon-constant gate, for negative
/// controls.
pub fn synth_stumpon_unchecked(
    problem: &TravelingWaveProblem,
    plateau_lengths: &[f64],
    opts: &SynthesisOptions,
) -> Result<WaveProfile> {
    let class = classify(problem);
    if !class.kind.is_cuspon() || !class.kind.is_periodic() {
        return Err(DghError::WrongClass(format!(
            "stumpon arcs must be periodic cuspons, got {}",
            class.kind
        )));
    }
    if plateau_lengths.iter().any(|l| !l.is_finite() || *l < 0.0) {
        return Err(DghError::InvalidConfig(
            "plateau lengths must be finite and non-negative".into(),
        ));
    }
    let problems = vec![*problem; plateau_lengths.len() + 1];
    assemble(&problems, plateau_lengths, None, opts)
}

fn assemble(
    problems: &[TravelingWaveProblem],
    plateaus: &[f64],
    lengths: Option<&[f64]>,
    opts: &SynthesisOptions,
) -> Result<WaveProfile> {
    if problems.is_empty() {
        return Err(DghError::IncompatibleSegments(
            "a composite needs at least one segment".into(),
        ));
    }
    if !plateaus.is_empty() && plateaus.len() != problems.len() - 1 {
        return Err(DghError::InvalidConfig(
            "need one plateau length per interior junction".into(),
        ));
    }
    let arcs: Vec<Arc> = problems
        .iter()
        .map(|p| build_arc(p, opts))
        .collect::<Result<_>>()?;
    if let Some(lengths) = lengths {
        if lengths.len() != arcs.len() {
            return Err(DghError::IncompatibleSegments(
                "one length per segment required".into(),
            ));
        }
        for (arc, &l) in arcs.iter().zip(lengths) {
            if l.is_finite() && !close(arc.length, l, 1e-6) {
                return Err(DghError::IncompatibleSegments(format!(
                    "segment length {l} does not match the arc period {}",
                    arc.length
                )));
            }
        }
    }
    let pole = problems[0].pole().unwrap();

    let mut samples: Vec<Sample> = Vec::new();
    let mut segments: Vec<Segment> = Vec::new();
    let mut offset = 0.0;
    let mut after_plateau = false;
    for (i, arc) in arcs.iter().enumerate() {
        let base = samples.len();
        // Junction marker: the arc's own singular sample at its start. At
        // interior junctions the left-hand slope belongs to whatever sits
        // on the left: the previous arc's approach, a flat plateau, or a
        // vertical cusp side (NaN).
        let mut marker = arc.marker;
        if i > 0 {
            let left = if after_plateau {
                0.0
            } else {
                match arcs[i - 1].marker {
                    SegmentKind::Corner { slope_left, .. } => slope_left,
                    _ => f64::NAN,
                }
            };
            if let SegmentKind::Corner { slope_left, .. } = &mut marker {
                *slope_left = left;
            }
        }
        segments.push(Segment {
            kind: marker,
            first: base,
            last: base,
        });
        for s in &arc.samples {
            samples.push(Sample {
                z: offset + s.z,
                phi: s.phi,
                dphi: s.dphi,
            });
        }
        offset += arc.length;
        let end = samples.len() - 1;
        if base + 2 <= end {
            segments.push(Segment {
                kind: SegmentKind::Smooth,
                first: base + 1,
                last: end - 1,
            });
        }
        let is_last = i + 1 == arcs.len();
        let plateau = if plateaus.is_empty() || is_last {
            0.0
        } else {
            plateaus[i]
        };
        if is_last {
            // Keep the closing sample inside the final smooth stretch.
            if let Some(s) = segments.last_mut() {
                if matches!(s.kind, SegmentKind::Smooth) {
                    s.last = end;
                }
            }
        } else if plateau > 0.0 {
            // The arc's closing sample opens the plateau; interior samples
            // sit at phi = c~ exactly.
            let first = end;
            let n_p = 17;
            for k in 1..n_p {
                samples.push(Sample {
                    z: offset + plateau * k as f64 / n_p as f64,
                    phi: pole,
                    dphi: 0.0,
                });
            }
            offset += plateau;
            segments.push(Segment {
                kind: SegmentKind::Plateau,
                first,
                last: samples.len() - 1,
            });
            after_plateau = true;
        } else {
            // Direct join: drop the closing sample, the next arc's marker
            // sample takes its place at the same z.
            samples.pop();
            after_plateau = false;
        }
    }

    let total = offset;
    let class = classify(&problems[0]);
    Ok(WaveProfile {
        samples,
        segments,
        periodic: Some(total),
        decay: None,
        problem: problems[0],
        wave_class: class,
    })
}
