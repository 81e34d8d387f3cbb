//! Parameters, the cubic potential and its spectrum.
//!
//! A travelling wave `u(t,x) = phi(x - ct)` of the equation
//!
//! ```text
//! m_t + c0 u_x + 2 u_x m + u m_x + gamma u_xxx = 0,   m = u - alpha^2 u_xx
//! ```
//!
//! reduces after two integrations to the quadrature form
//!
//! ```text
//! (phi')^2 = F(phi) = P(phi) / (alpha^2 (c - phi) + gamma),
//! P(phi)   = phi^2 (c - c0 - phi) + A phi + B,
//! ```
//!
//! with integration constants `A`, `B`. Everything in this crate is driven
//! by the real zeros of `P` (one or three, counted with multiplicity) and,
//! for `alpha != 0`, the pole `c~ = c + gamma / alpha^2` of `F`.

use crate::error::{DghError, Result};

/// Physical constants of the equation. The degenerate combination
/// `alpha = gamma = 0` (inviscid Burgers) is rejected at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub alpha: f64,
    pub c0: f64,
    pub gamma: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, c0: f64, gamma: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(DghError::NonFinite("alpha"));
        }
        if !c0.is_finite() {
            return Err(DghError::NonFinite("c0"));
        }
        if !gamma.is_finite() {
            return Err(DghError::NonFinite("gamma"));
        }
        if alpha == 0.0 && gamma == 0.0 {
            return Err(DghError::BurgersCaseExcluded);
        }
        Ok(Self { alpha, c0, gamma })
    }

    /// Pole `c~ = c + gamma / alpha^2` of the quadrature denominator,
    /// absent in the KdV limit `alpha = 0`.
    pub fn pole_location(&self, c: f64) -> Option<f64> {
        if self.alpha == 0.0 {
            None
        } else {
            Some(c + self.gamma / (self.alpha * self.alpha))
        }
    }
}

/// A concrete travelling-wave problem: constants of the equation, the wave
/// speed and the two integration constants of the quadrature form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TravelingWaveProblem {
    pub params: ModelParams,
    pub c: f64,
    pub a: f64,
    pub b: f64,
}

impl TravelingWaveProblem {
    pub fn new(params: ModelParams, c: f64, a: f64, b: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(DghError::NonFinite("c"));
        }
        if !a.is_finite() {
            return Err(DghError::NonFinite("A"));
        }
        if !b.is_finite() {
            return Err(DghError::NonFinite("B"));
        }
        Ok(Self { params, c, a, b })
    }

    pub fn pole(&self) -> Option<f64> {
        self.params.pole_location(self.c)
    }

    /// The cubic `P(phi) = -phi^3 + (c - c0) phi^2 + A phi + B`.
    pub fn cubic(&self) -> Cubic {
        Cubic {
            coeffs: [-1.0, self.c - self.params.c0, self.a, self.b],
        }
    }
}

/// Convenience constructor mirroring the CLI surface.
pub fn make_problem(params: ModelParams, c: f64, a: f64, b: f64) -> Result<TravelingWaveProblem> {
    TravelingWaveProblem::new(params, c, a, b)
}

/// Coefficients of `P`, degree-descending. The leading coefficient is
/// exactly -1 by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cubic {
    pub coeffs: [f64; 4],
}

impl Cubic {
    pub fn eval(&self, phi: f64) -> f64 {
        let [a3, a2, a1, a0] = self.coeffs;
        ((a3 * phi + a2) * phi + a1) * phi + a0
    }

    pub fn deriv(&self, phi: f64) -> f64 {
        let [a3, a2, a1, _] = self.coeffs;
        (3.0 * a3 * phi + 2.0 * a2) * phi + a1
    }

    fn deriv2(&self, phi: f64) -> f64 {
        let [a3, a2, _, _] = self.coeffs;
        6.0 * a3 * phi + 2.0 * a2
    }
}

/// Real zeros of `P` with multiplicities, plus the pole when `alpha != 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpectrum {
    /// Ascending roots as `(value, multiplicity)`; multiplicities sum to 1 or 3.
    pub roots: Vec<(f64, u8)>,
    pub pole: Option<f64>,
    /// Sign of the leading coefficient of `P` (always negative here).
    pub leading_sign: f64,
}

impl PotentialSpectrum {
    pub fn of(problem: &TravelingWaveProblem, cluster_tol: f64) -> Self {
        Self {
            roots: solve_cubic(&problem.cubic(), cluster_tol),
            pole: problem.pole(),
            leading_sign: -1.0,
        }
    }

    /// Number of real roots counted with multiplicity (1 or 3).
    pub fn count_with_multiplicity(&self) -> u8 {
        self.roots.iter().map(|&(_, m)| m).sum()
    }
}

/// Relative tolerance below which two roots are merged into one of higher
/// multiplicity. The case split of the classification (simple vs double
/// zero) is discontinuous, so this is an explicit knob.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-9;

/// Scaled equality used throughout the classifier.
pub(crate) fn close(x: f64, y: f64, rtol: f64) -> bool {
    (x - y).abs() <= rtol * x.abs().max(y.abs()).max(1.0)
}

/// Real roots of the cubic, ascending, with multiplicities.
///
/// Roots are located analytically (trigonometric for three real roots,
/// a stabilized Cardano form for one) and polished with guarded Newton
/// steps. Double and triple roots are detected through the discriminant:
/// formation of a genuine repeated root drives the discriminant to zero
/// faster than floating-point evaluation can track, so a near-zero
/// discriminant is resolved by the dedicated repeated-root formulas, which
/// are well conditioned. Roots closer than `cluster_tol * max(1, |root|)`
/// are merged at their mean.
pub fn solve_cubic(cubic: &Cubic, cluster_tol: f64) -> Vec<(f64, u8)> {
    assert!(cluster_tol > 0.0, "cluster_tol must be positive");
    // Monic form x^3 + a2 x^2 + a1 x + a0 (same roots as P).
    let a2 = -cubic.coeffs[1];
    let a1 = -cubic.coeffs[2];
    let a0 = -cubic.coeffs[3];
    let shift = a2 / 3.0;
    // Depressed cubic t^3 + p t + q with x = t - shift.
    let p = a1 - a2 * a2 / 3.0;
    let q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;

    let disc = -4.0 * p * p * p - 27.0 * q * q;
    let disc_scale = (4.0 * p.abs().powi(3)).max(27.0 * q * q);
    let coeff_scale = a2.abs().max(a1.abs().sqrt()).max(a0.abs().cbrt()).max(1.0);
    // Floating-point noise floor of the discriminant: p and q are formed
    // by cancellation from the raw coefficients, so their absolute errors
    // scale with the coefficient magnitudes, not with p and q themselves.
    let eps = f64::EPSILON;
    let err_p = eps * (a1.abs() + a2 * a2 / 3.0);
    let err_q = eps * (a0.abs() + (a2 * a1).abs() / 3.0 + 2.0 * a2.abs().powi(3) / 27.0);
    let disc_floor = 8.0 * (12.0 * p * p * err_p + 54.0 * q.abs() * err_q);

    let mut raw: Vec<f64> = if disc_scale <= 1e-30 * coeff_scale.powi(6) {
        // p and q both negligible: triple root.
        return vec![(-shift, 3)];
    } else if disc.abs() <= (1e-13 * disc_scale).max(disc_floor) {
        // Repeated root: t = -3q/2p (double), t = 3q/p (simple).
        let u = -1.5 * q / p;
        let v = 3.0 * q / p;
        vec![u - shift, u - shift, v - shift]
    } else if disc > 0.0 {
        // Three distinct real roots.
        let r = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * r)).clamp(-1.0, 1.0);
        let theta = arg.acos();
        (0..3)
            .map(|k| r * ((theta - 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos() - shift)
            .collect()
    } else {
        // One real root; pick the larger-magnitude cube-root branch.
        let s = (q * q / 4.0 + p * p * p / 27.0).sqrt();
        let c1 = -q / 2.0 + s;
        let c2 = -q / 2.0 - s;
        let u = if c1.abs() >= c2.abs() { c1.cbrt() } else { c2.cbrt() };
        let t = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
        vec![t - shift]
    };

    for x in raw.iter_mut() {
        *x = polish_root(cubic, *x);
    }
    raw.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // Cluster nearby roots into repeated ones.
    let mut out: Vec<(f64, u8)> = Vec::with_capacity(raw.len());
    for &r in &raw {
        match out.last_mut() {
            Some(&mut (ref mut v, ref mut m)) if close(*v, r, cluster_tol) => {
                *v = (*v * *m as f64 + r) / (*m as f64 + 1.0);
                *m += 1;
            }
            _ => out.push((r, 1)),
        }
    }

    // Re-center repeated roots on the well-conditioned critical points.
    for (v, m) in out.iter_mut() {
        if *m == 2 {
            *v = polish_critical(cubic, *v);
        } else if *m == 3 {
            *v = -shift;
        }
    }
    out
}

/// Guarded Newton polish; keeps the step only while it reduces |P|.
fn polish_root(cubic: &Cubic, x0: f64) -> f64 {
    let mut x = x0;
    for _ in 0..2 {
        let f = cubic.eval(x);
        let d = cubic.deriv(x);
        if d.abs() <= 1e-12 * (1.0 + x.abs() * x.abs()) {
            break;
        }
        let next = x - f / d;
        if !next.is_finite() || cubic.eval(next).abs() > f.abs() {
            break;
        }
        x = next;
    }
    x
}

/// Newton on P' near a double root; P' has a simple, well-conditioned zero there.
fn polish_critical(cubic: &Cubic, x0: f64) -> f64 {
    let mut x = x0;
    for _ in 0..3 {
        let d = cubic.deriv(x);
        let d2 = cubic.deriv2(x);
        if d2.abs() <= 1e-300 {
            break;
        }
        let next = x - d / d2;
        if !next.is_finite() {
            break;
        }
        x = next;
    }
    x
}

/// Builds the integration constants realizing prescribed roots `m <= M`:
/// the third root is forced to `z0 = c - c0 - M - m` by the sum-of-roots
/// identity, and
///
/// ```text
/// A = -(M m + M z0 + m z0),   B = M m z0.
/// ```
pub fn constants_from_roots(params: &ModelParams, c: f64, m: f64, big_m: f64) -> (f64, f64, f64) {
    let z0 = c - params.c0 - big_m - m;
    let a = -(big_m * m + big_m * z0 + m * z0);
    let b = big_m * m * z0;
    (a, b, z0)
}

/// The potential `F(phi)`: `P(phi) / (alpha^2 (c - phi) + gamma)` for
/// `alpha != 0`, `P(phi) / gamma` otherwise. Fails at the pole.
pub fn potential_eval(problem: &TravelingWaveProblem, phi: f64) -> Result<f64> {
    let p = problem.cubic().eval(phi);
    let alpha = problem.params.alpha;
    if alpha == 0.0 {
        return Ok(p / problem.params.gamma);
    }
    let denom = alpha * alpha * (problem.c - phi) + problem.params.gamma;
    let denom_scale = alpha * alpha * (problem.c.abs() + phi.abs()) + problem.params.gamma.abs();
    if denom.abs() <= 4.0 * f64::EPSILON * denom_scale.max(f64::MIN_POSITIVE) {
        return Err(DghError::PoleEvaluation(phi));
    }
    Ok(p / denom)
}

/// Pole-cancelled form of the potential, valid when `P(c~) = 0`:
/// one factor of `P` cancels the denominator, leaving
/// `F(phi) = (phi - r1)(phi - r2) / alpha^2` with `r1`, `r2` the two
/// remaining roots.
#[derive(Debug, Clone, Copy)]
pub struct CancelledPotential {
    pub r1: f64,
    pub r2: f64,
    pub inv_alpha_sq: f64,
}

impl CancelledPotential {
    pub fn eval(&self, phi: f64) -> f64 {
        (phi - self.r1) * (phi - self.r2) * self.inv_alpha_sq
    }
}

/// Removable-factor form of `F` at a root-cancelled pole. Errors with
/// [`DghError::NoPole`] for `alpha = 0` and [`DghError::PoleEvaluation`]
/// when the pole is not cancelled by a root of `P`.
pub fn potential_cancelled(
    problem: &TravelingWaveProblem,
    cluster_tol: f64,
) -> Result<CancelledPotential> {
    let alpha = problem.params.alpha;
    if alpha == 0.0 {
        return Err(DghError::NoPole);
    }
    let pole = problem.pole().unwrap();
    let spectrum = PotentialSpectrum::of(problem, cluster_tol);
    let mut rest: Vec<f64> = Vec::new();
    let mut cancelled = false;
    for &(r, mult) in &spectrum.roots {
        let mut mult = mult;
        if !cancelled && close(r, pole, cluster_tol) {
            cancelled = true;
            mult -= 1;
        }
        for _ in 0..mult {
            rest.push(r);
        }
    }
    if !cancelled || rest.len() != 2 {
        return Err(DghError::PoleEvaluation(pole));
    }
    Ok(CancelledPotential {
        r1: rest[0],
        r2: rest[1],
        inv_alpha_sq: 1.0 / (alpha * alpha),
    })
}
