//! Complete classification of bounded travelling waves.
//!
//! The shape of a bounded wave is decided entirely by where the pole
//! `c~` of the potential sits relative to the real zeros of the cubic
//! `P`, and by the multiplicity pattern of those zeros:
//!
//! * both wave endpoints at simple zeros with the pole outside: smooth
//!   periodic orbit;
//! * a double zero at one end: exponential approach (decay);
//! * the pole coincides with a zero: the singularity cancels and the wave
//!   meets `phi = c~` with finite, opposite slopes (a peakon corner);
//! * the pole falls strictly between zeros: the wave turns at `phi = c~`
//!   with unbounded slope (a cuspon);
//! * no admissible interval: no bounded wave at all.
//!
//! For `alpha = 0` (the KdV limit) the potential has no pole and only the
//! smooth cases survive.

use crate::error::{DghError, Result};
use crate::model::{
    close, constants_from_roots, make_problem, potential_eval, ModelParams, PotentialSpectrum,
    TravelingWaveProblem, DEFAULT_CLUSTER_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WaveKind {
    SmoothPeriodic,
    SmoothDecayDown,
    SmoothDecayUp,
    PeriodicPeakon,
    PeakonDecay,
    PeriodicCuspon,
    CusponDecay,
    PeriodicAntiPeakon,
    AntiPeakonDecay,
    PeriodicAntiCuspon,
    AntiCusponDecay,
    Constant,
    NoBoundedWave,
}

impl WaveKind {
    pub fn is_bounded_wave(self) -> bool {
        self != WaveKind::NoBoundedWave
    }

    /// Smooth classes are the only ones admissible for spectral evolution.
    pub fn is_smooth(self) -> bool {
        matches!(
            self,
            WaveKind::SmoothPeriodic
                | WaveKind::SmoothDecayDown
                | WaveKind::SmoothDecayUp
                | WaveKind::Constant
        )
    }

    pub fn is_peakon(self) -> bool {
        matches!(
            self,
            WaveKind::PeriodicPeakon
                | WaveKind::PeakonDecay
                | WaveKind::PeriodicAntiPeakon
                | WaveKind::AntiPeakonDecay
        )
    }

    pub fn is_cuspon(self) -> bool {
        matches!(
            self,
            WaveKind::PeriodicCuspon
                | WaveKind::CusponDecay
                | WaveKind::PeriodicAntiCuspon
                | WaveKind::AntiCusponDecay
        )
    }

    /// Waves that approach a double zero of `P` as `z -> +-inf`.
    pub fn is_decay(self) -> bool {
        matches!(
            self,
            WaveKind::SmoothDecayDown
                | WaveKind::SmoothDecayUp
                | WaveKind::PeakonDecay
                | WaveKind::AntiPeakonDecay
                | WaveKind::CusponDecay
                | WaveKind::AntiCusponDecay
        )
    }

    pub fn is_periodic(self) -> bool {
        matches!(
            self,
            WaveKind::SmoothPeriodic
                | WaveKind::PeriodicPeakon
                | WaveKind::PeriodicCuspon
                | WaveKind::PeriodicAntiPeakon
                | WaveKind::PeriodicAntiCuspon
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WaveKind::SmoothPeriodic => "SmoothPeriodic",
            WaveKind::SmoothDecayDown => "SmoothDecayDown",
            WaveKind::SmoothDecayUp => "SmoothDecayUp",
            WaveKind::PeriodicPeakon => "PeriodicPeakon",
            WaveKind::PeakonDecay => "PeakonDecay",
            WaveKind::PeriodicCuspon => "PeriodicCuspon",
            WaveKind::CusponDecay => "CusponDecay",
            WaveKind::PeriodicAntiPeakon => "PeriodicAntiPeakon",
            WaveKind::AntiPeakonDecay => "AntiPeakonDecay",
            WaveKind::PeriodicAntiCuspon => "PeriodicAntiCuspon",
            WaveKind::AntiCusponDecay => "AntiCusponDecay",
            WaveKind::Constant => "Constant",
            WaveKind::NoBoundedWave => "NoBoundedWave",
        }
    }
}

impl std::fmt::Display for WaveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classification outcome: the kind, the case label of the classification
/// table, and the root data `(m, M, z0)` named as in the table. For
/// anti-cuspon cases the root `m` lies below the pole and outside the wave
/// range; [`WaveClass::range`] gives the actual range of `phi`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveClass {
    pub kind: WaveKind,
    /// The roots labelled `(m, M)` by the case table.
    pub interval: (f64, f64),
    pub z0: f64,
    pub pole: Option<f64>,
    pub theorem_case: &'static str,
}

impl WaveClass {
    fn no_wave(pole: Option<f64>) -> Self {
        WaveClass {
            kind: WaveKind::NoBoundedWave,
            interval: (f64::NAN, f64::NAN),
            z0: f64::NAN,
            pole,
            theorem_case: "none",
        }
    }

    fn constant(value: f64, pole: Option<f64>) -> Self {
        WaveClass {
            kind: WaveKind::Constant,
            interval: (value, value),
            z0: value,
            pole,
            theorem_case: "degenerate",
        }
    }

    /// The range `[min phi, max phi]` actually attained by the wave.
    /// Cuspons turn at the pole, not at the far root.
    pub fn range(&self) -> (f64, f64) {
        match self.kind {
            WaveKind::PeriodicCuspon | WaveKind::CusponDecay => (self.interval.0, self.pole.unwrap()),
            WaveKind::PeriodicAntiCuspon | WaveKind::AntiCusponDecay => {
                (self.pole.unwrap(), self.interval.1)
            }
            _ => self.interval,
        }
    }
}

/// Classify a problem with the default root-clustering tolerance.
pub fn classify(problem: &TravelingWaveProblem) -> WaveClass {
    classify_with_tol(problem, DEFAULT_CLUSTER_TOL)
}

/// Classify with an explicit clustering tolerance; equality comparisons in
/// the case conditions (`z0 = m`, `M = c~`, ...) use the same tolerance.
pub fn classify_with_tol(problem: &TravelingWaveProblem, tol: f64) -> WaveClass {
    let spectrum = PotentialSpectrum::of(problem, tol);
    match spectrum.pole {
        None => classify_kdv(problem, &spectrum, tol),
        Some(pole) => classify_dgh(problem, &spectrum, pole, tol),
    }
}

/// Case table for `alpha = 0`: only smooth waves exist. With roots sorted
/// ascending, `gamma > 0` admits a wave on the upper root pair and
/// `gamma < 0` on the lower; a double zero at the matching end turns the
/// periodic orbit into a homoclinic one.
pub fn classify_kdv(
    problem: &TravelingWaveProblem,
    spectrum: &PotentialSpectrum,
    _tol: f64,
) -> WaveClass {
    let gamma = problem.params.gamma;
    match spectrum.roots.as_slice() {
        [( _, 1)] => WaveClass::no_wave(None),
        [(t, 3)] => WaveClass::constant(*t, None),
        [(r1, 1), (r2, 1), (r3, 1)] => {
            if gamma > 0.0 {
                WaveClass {
                    kind: WaveKind::SmoothPeriodic,
                    interval: (*r2, *r3),
                    z0: *r1,
                    pole: None,
                    theorem_case: "Thm1(i)",
                }
            } else {
                WaveClass {
                    kind: WaveKind::SmoothPeriodic,
                    interval: (*r1, *r2),
                    z0: *r3,
                    pole: None,
                    theorem_case: "Thm1(iii)",
                }
            }
        }
        [(d, 2), (s, 1)] if gamma > 0.0 => WaveClass {
            kind: WaveKind::SmoothDecayDown,
            interval: (*d, *s),
            z0: *d,
            pole: None,
            theorem_case: "Thm1(ii)",
        },
        [(s, 1), (d, 2)] if gamma < 0.0 => WaveClass {
            kind: WaveKind::SmoothDecayUp,
            interval: (*s, *d),
            z0: *d,
            pole: None,
            theorem_case: "Thm1(iv)",
        },
        _ => WaveClass::no_wave(None),
    }
}

/// Case table for `alpha != 0`. The pattern of root multiplicities picks
/// the row family and the position of the pole `c~` picks the column:
/// outside the admissible pair (smooth), equal to the near root (peakon),
/// or strictly between the roots (cuspon). Primed cases are the mirror
/// family living above the pole.
pub fn classify_dgh(
    _problem: &TravelingWaveProblem,
    spectrum: &PotentialSpectrum,
    pole: f64,
    tol: f64,
) -> WaveClass {
    let eq = |x: f64, y: f64| close(x, y, tol);
    let some = Some(pole);
    match spectrum.roots.as_slice() {
        [(_, 1)] => WaveClass::no_wave(some),
        [(t, 3)] => WaveClass::constant(*t, some),
        [(r1, 1), (r2, 1), (r3, 1)] => {
            let (r1, r2, r3) = (*r1, *r2, *r3);
            if eq(pole, r3) {
                WaveClass {
                    kind: WaveKind::PeriodicPeakon,
                    interval: (r2, r3),
                    z0: r1,
                    pole: some,
                    theorem_case: "Thm2(iii)",
                }
            } else if pole > r3 {
                WaveClass {
                    kind: WaveKind::SmoothPeriodic,
                    interval: (r2, r3),
                    z0: r1,
                    pole: some,
                    theorem_case: "Thm2(i)",
                }
            } else if eq(pole, r2) {
                WaveClass::no_wave(some)
            } else if pole > r2 {
                WaveClass {
                    kind: WaveKind::PeriodicCuspon,
                    interval: (r2, r3),
                    z0: r1,
                    pole: some,
                    theorem_case: "Thm2(v)",
                }
            } else if eq(pole, r1) {
                WaveClass {
                    kind: WaveKind::PeriodicAntiPeakon,
                    interval: (r1, r2),
                    z0: r3,
                    pole: some,
                    theorem_case: "Thm2(iii')",
                }
            } else if pole > r1 {
                WaveClass {
                    kind: WaveKind::PeriodicAntiCuspon,
                    interval: (r1, r2),
                    z0: r3,
                    pole: some,
                    theorem_case: "Thm2(v')",
                }
            } else {
                WaveClass {
                    kind: WaveKind::SmoothPeriodic,
                    interval: (r1, r2),
                    z0: r3,
                    pole: some,
                    theorem_case: "Thm2(i')",
                }
            }
        }
        [(d, 2), (s, 1)] => {
            // Double root below the simple one.
            let (d, s) = (*d, *s);
            if eq(pole, s) {
                WaveClass {
                    kind: WaveKind::PeakonDecay,
                    interval: (d, s),
                    z0: d,
                    pole: some,
                    theorem_case: "Thm2(iv)",
                }
            } else if pole > s {
                WaveClass {
                    kind: WaveKind::SmoothDecayDown,
                    interval: (d, s),
                    z0: d,
                    pole: some,
                    theorem_case: "Thm2(ii)",
                }
            } else if eq(pole, d) || pole < d {
                WaveClass::no_wave(some)
            } else {
                WaveClass {
                    kind: WaveKind::CusponDecay,
                    interval: (d, s),
                    z0: d,
                    pole: some,
                    theorem_case: "Thm2(vi)",
                }
            }
        }
        [(s, 1), (d, 2)] => {
            // Double root above the simple one.
            let (s, d) = (*s, *d);
            if eq(pole, s) {
                WaveClass {
                    kind: WaveKind::AntiPeakonDecay,
                    interval: (s, d),
                    z0: d,
                    pole: some,
                    theorem_case: "Thm2(iv')",
                }
            } else if pole < s {
                WaveClass {
                    kind: WaveKind::SmoothDecayUp,
                    interval: (s, d),
                    z0: d,
                    pole: some,
                    theorem_case: "Thm2(ii')",
                }
            } else if eq(pole, d) || pole > d {
                WaveClass::no_wave(some)
            } else {
                WaveClass {
                    kind: WaveKind::AntiCusponDecay,
                    interval: (s, d),
                    z0: d,
                    pole: some,
                    theorem_case: "Thm2(vi')",
                }
            }
        }
        other => unreachable!("impossible root pattern {other:?}"),
    }
}

/// The constant `A* = 3 c~^2 + 2 (c0 - c) c~`: the unique value of `A` for
/// which `P'(c~) = 0`, and the only one admitting plateaus `phi = c~` of
/// positive measure (stumpons).
pub fn stumpon_constant(params: &ModelParams, c: f64) -> Result<f64> {
    let pole = params.pole_location(c).ok_or(DghError::NoPole)?;
    Ok(3.0 * pole * pole + 2.0 * (params.c0 - c) * pole)
}

/// True iff the segments can be glued into a composite weak wave: all
/// problems share the equation constants and wave speed, every class is a
/// peakon or cuspon kind (so `phi = c~` is attained at a finite endpoint),
/// and all `A` values agree. Per-segment `B` values are free.
pub fn composite_compatible(
    problems: &[TravelingWaveProblem],
    classes: &[WaveClass],
) -> bool {
    if problems.len() != classes.len() {
        return false;
    }
    let Some(first) = problems.first() else {
        return true;
    };
    for (p, class) in problems.iter().zip(classes) {
        if p.params != first.params || p.c != first.c {
            return false;
        }
        if !(class.kind.is_peakon() || class.kind.is_cuspon()) {
            return false;
        }
        if !close(p.a, first.a, 1e-9) {
            return false;
        }
    }
    true
}

/// Independent sign check: true iff `F > 0` at all `n` Chebyshev-distributed
/// interior points of `(lo, hi)`, skipping points that coincide with the pole.
pub fn sign_oracle(problem: &TravelingWaveProblem, lo: f64, hi: f64, n: usize) -> bool {
    assert!(lo < hi, "sign_oracle needs a non-degenerate interval");
    assert!(n >= 2);
    let mid = 0.5 * (lo + hi);
    let rad = 0.5 * (hi - lo);
    for k in 0..n {
        let x = mid + rad * (std::f64::consts::PI * (2.0 * k as f64 + 1.0) / (2.0 * n as f64)).cos();
        match potential_eval(problem, x) {
            Ok(v) if v > 0.0 => {}
            Ok(_) => return false,
            // A sample landing on the pole carries no sign information.
            Err(_) => {}
        }
    }
    true
}

/// The plane being swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxes {
    /// Axis 1 is `m`, axis 2 is `M`; constants come from the root map.
    RootInterval,
    /// Axis 1 is `A`, axis 2 is `B`.
    Constants,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub y_min: f64,
    pub y_max: f64,
    pub ny: usize,
}

impl GridSpec {
    fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(DghError::InvalidConfig("sweep range must be finite".into()));
        }
        if self.nx < 2 || self.ny < 2 || self.x_max <= self.x_min || self.y_max <= self.y_min {
            return Err(DghError::InvalidConfig(
                "sweep range must have positive area and at least 2 points per axis".into(),
            ));
        }
        Ok(())
    }

    fn x(&self, j: usize) -> f64 {
        self.x_min + (self.x_max - self.x_min) * j as f64 / (self.nx - 1) as f64
    }

    fn y(&self, i: usize) -> f64 {
        self.y_min + (self.y_max - self.y_min) * i as f64 / (self.ny - 1) as f64
    }
}

/// Classification over a grid in the `(m, M)` or `(A, B)` plane.
#[derive(Debug, Clone)]
pub struct PhaseDiagram {
    pub axes: SweepAxes,
    pub grid: GridSpec,
    pub params: ModelParams,
    pub c: f64,
    /// Row-major over `(i, j) = (axis2, axis1)` indices.
    pub cells: Vec<WaveClass>,
}

impl PhaseDiagram {
    pub fn cell(&self, i: usize, j: usize) -> &WaveClass {
        &self.cells[i * self.grid.nx + j]
    }
}

/// Classify every grid cell. Cells with `m > M` are marked NoBoundedWave
/// and the degenerate diagonal `m = M` is the constant wave.
pub fn sweep(
    params: &ModelParams,
    c: f64,
    axes: SweepAxes,
    grid: &GridSpec,
) -> Result<PhaseDiagram> {
    grid.validate()?;
    let mut cells = Vec::with_capacity(grid.nx * grid.ny);
    let pole = params.pole_location(c);
    for i in 0..grid.ny {
        let y = grid.y(i);
        for j in 0..grid.nx {
            let x = grid.x(j);
            let class = match axes {
                SweepAxes::RootInterval => {
                    let (m, big_m) = (x, y);
                    if close(m, big_m, 1e-12) {
                        WaveClass::constant(m, pole)
                    } else if m > big_m {
                        WaveClass::no_wave(pole)
                    } else {
                        let (a, b, _) = constants_from_roots(params, c, m, big_m);
                        match make_problem(*params, c, a, b) {
                            Ok(problem) => classify(&problem),
                            Err(_) => WaveClass::no_wave(pole),
                        }
                    }
                }
                SweepAxes::Constants => match make_problem(*params, c, x, y) {
                    Ok(problem) => classify(&problem),
                    Err(_) => WaveClass::no_wave(pole),
                },
            };
            cells.push(class);
        }
    }
    Ok(PhaseDiagram {
        axes,
        grid: *grid,
        params: *params,
        c,
        cells,
    })
}
