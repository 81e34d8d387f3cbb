//! Quadrature of `dphi / sqrt(F)` with singular endpoints.
//!
//! Wave profiles are parametrized as `z(phi)` by integrating
//! `dz = dphi / sqrt(F(phi))`. The integrand is singular wherever the wave
//! meets an endpoint:
//!
//! * simple zero of `F`: `1/sqrt(F) ~ (phi - e)^(-1/2)`, integrable;
//! * pole of `F` (cusp): the integrand vanishes like `sqrt(|phi - e|)`;
//! * double zero: logarithmic divergence, the half-period is infinite.
//!
//! The substitution `phi = e -+ t^2` makes the integrand smooth in `t` for
//! both integrable cases, so fixed-order Gauss-Legendre panels converge at
//! spectral rate. A dyadic-subdivision integrator over plain panels in
//! `phi` provides an independent cross-check of the same integrals.

use std::sync::LazyLock;

use crate::error::{DghError, Result};
use crate::model::{
    close, potential_cancelled, potential_eval, PotentialSpectrum, TravelingWaveProblem,
    DEFAULT_CLUSTER_TOL,
};

/// Gauss-Legendre nodes and weights on [-1, 1].
fn gl_rule(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        // Newton iteration from the Chebyshev estimate.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = -p / d;
            x += dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push((x, w));
    }
    rule.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    rule
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

static GL16: LazyLock<Vec<(f64, f64)>> = LazyLock::new(|| gl_rule(16));
static GL32: LazyLock<Vec<(f64, f64)>> = LazyLock::new(|| gl_rule(32));

/// Fixed-order Gauss-Legendre integral of `f` over `[a, b]`.
pub fn gl_integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rule: GlOrder) -> f64 {
    let rule = match rule {
        GlOrder::Sixteen => &*GL16,
        GlOrder::ThirtyTwo => &*GL32,
    };
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for &(x, w) in rule {
        sum += w * f(mid + half * x);
    }
    sum * half
}

#[derive(Debug, Clone, Copy)]
pub enum GlOrder {
    Sixteen,
    ThirtyTwo,
}

/// How the wave touches an endpoint of its range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Contact {
    /// Simple zero of `F`: quadratic turning point.
    SimpleZero,
    /// Pole of `F`: cusp, the wave arrives with unbounded slope.
    Pole,
    /// `F` finite and nonzero (peakon corner) or an interior grid point.
    Regular,
}

/// `integral of dphi / sqrt(F)` over one panel `[a, b]`, where at most one
/// panel end is a singular contact of the stated kind.
pub(crate) fn panel_dz<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    contact_at_a: Contact,
    contact_at_b: Contact,
) -> f64 {
    debug_assert!(b > a);
    let g = |phi: f64| 1.0 / f(phi).max(f64::MIN_POSITIVE).sqrt();
    match (contact_at_a, contact_at_b) {
        (Contact::Regular, Contact::Regular) => gl_integrate(g, a, b, GlOrder::Sixteen),
        (Contact::SimpleZero | Contact::Pole, Contact::Regular) => {
            // phi = a + t^2 regularizes both a root and a pole at `a`.
            let t_max = (b - a).sqrt();
            gl_integrate(|t| 2.0 * t * g(a + t * t), 0.0, t_max, GlOrder::ThirtyTwo)
        }
        (Contact::Regular, Contact::SimpleZero | Contact::Pole) => {
            let t_max = (b - a).sqrt();
            gl_integrate(|t| 2.0 * t * g(b - t * t), 0.0, t_max, GlOrder::ThirtyTwo)
        }
        _ => {
            // Both ends singular: split in the middle.
            let mid = 0.5 * (a + b);
            panel_dz(f, a, mid, contact_at_a, Contact::Regular)
                + panel_dz(f, mid, b, Contact::Regular, contact_at_b)
        }
    }
}

/// Cumulative `z` along a monotone `phi` grid: `z[0] = 0` and
/// `z[j] - z[j-1]` is the panel integral of `dphi / sqrt(F)`.
/// `start`/`end` describe the contact type at the two grid extremes.
pub(crate) fn cumulative_z<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    grid: &[f64],
    start: Contact,
    end: Contact,
) -> Vec<f64> {
    let n = grid.len();
    let mut z = Vec::with_capacity(n);
    z.push(0.0);
    for j in 1..n {
        let (a, b) = (grid[j - 1], grid[j]);
        let ca = if j == 1 { start } else { Contact::Regular };
        let cb = if j == n - 1 { end } else { Contact::Regular };
        let dz = if b > a {
            panel_dz(f, a, b, ca, cb)
        } else {
            panel_dz(f, b, a, cb, ca)
        };
        z.push(z[j - 1] + dz);
    }
    z
}

/// Resolves the potential into a plain closure, using the pole-cancelled
/// factorization whenever the pole coincides with a root (peakons). The
/// rational form loses all significance near a cancelled pole.
pub(crate) fn potential_fn(problem: &TravelingWaveProblem) -> Box<dyn Fn(f64) -> f64 + Send + Sync> {
    if let Ok(f) = potential_cancelled(problem, DEFAULT_CLUSTER_TOL) {
        return Box::new(move |phi| f.eval(phi));
    }
    let problem = *problem;
    Box::new(move |phi| potential_eval(&problem, phi).unwrap_or(f64::INFINITY))
}

fn endpoint_contact(
    spectrum: &PotentialSpectrum,
    e: f64,
    tol: f64,
) -> std::result::Result<Contact, ()> {
    for &(r, mult) in &spectrum.roots {
        if close(r, e, tol) {
            // A root sitting on the pole cancels against it, dropping the
            // effective multiplicity by one.
            let cancelled = spectrum.pole.map(|p| close(p, r, tol)).unwrap_or(false);
            let eff = if cancelled { mult - 1 } else { mult };
            return match eff {
                0 => Ok(Contact::Regular), // corner: F finite and nonzero
                1 => Ok(Contact::SimpleZero),
                _ => Err(()), // repeated zero: infinite approach
            };
        }
    }
    if spectrum.pole.map(|p| close(p, e, tol)).unwrap_or(false) {
        return Ok(Contact::Pole);
    }
    Ok(Contact::Regular)
}

/// Half-period `L = integral from m to M of dphi / sqrt(F)`, computed with
/// the substitution `phi = m + (M - m) sin^2 theta` and composite
/// Gauss-Legendre panels in `theta`. Returns infinity when an endpoint is
/// a repeated zero of `P` (homoclinic orbit) and `InvalidInterval` when
/// `F` is not positive inside.
pub fn half_period(problem: &TravelingWaveProblem, m: f64, big_m: f64) -> Result<f64> {
    assert!(m < big_m, "half_period needs a non-degenerate interval");
    let spectrum = PotentialSpectrum::of(problem, DEFAULT_CLUSTER_TOL);
    for e in [m, big_m] {
        if endpoint_contact(&spectrum, e, DEFAULT_CLUSTER_TOL).is_err() {
            return Ok(f64::INFINITY);
        }
    }
    let f = potential_fn(problem);
    check_positive(&*f, m, big_m)?;

    let width = big_m - m;
    let phi_of = |theta: f64| {
        let s = theta.sin();
        m + width * s * s
    };
    let integrand = |theta: f64| {
        let phi = phi_of(theta);
        let v = f(phi);
        width * (2.0 * theta).sin() / v.max(f64::MIN_POSITIVE).sqrt()
    };
    let panels = 64;
    let h = std::f64::consts::FRAC_PI_2 / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        total += gl_integrate(integrand, k as f64 * h, (k + 1) as f64 * h, GlOrder::Sixteen);
    }
    Ok(total)
}

/// Independent evaluation of the same half-period by adaptive dyadic
/// subdivision toward both endpoints, with plain Gauss-Legendre panels in
/// `phi` and a measured-exponent closure for the innermost sliver. Used as
/// a cross-check oracle for [`half_period`].
pub fn half_period_adaptive(problem: &TravelingWaveProblem, m: f64, big_m: f64) -> Result<f64> {
    assert!(m < big_m);
    let spectrum = PotentialSpectrum::of(problem, DEFAULT_CLUSTER_TOL);
    for e in [m, big_m] {
        if endpoint_contact(&spectrum, e, DEFAULT_CLUSTER_TOL).is_err() {
            return Ok(f64::INFINITY);
        }
    }
    let f = potential_fn(problem);
    check_positive(&*f, m, big_m)?;

    let g = |phi: f64| 1.0 / f(phi).max(f64::MIN_POSITIVE).sqrt();
    let width = big_m - m;
    let delta_stop = 1e-10 * width;

    let mut total = 0.0;
    // Dyadic panels from each endpoint toward the middle.
    for (endpoint, sign) in [(m, 1.0), (big_m, -1.0)] {
        let mut delta = 0.5 * width;
        while delta > delta_stop {
            let lo = endpoint + sign * delta;
            let hi = endpoint + sign * 0.5 * delta;
            let (a, b) = if lo < hi { (lo, hi) } else { (hi, lo) };
            total += gl_integrate(g, a, b, GlOrder::Sixteen);
            delta *= 0.5;
        }
        // Closure over [endpoint, endpoint + sign * delta_stop]: measure the
        // local power of F from two probes and integrate the model power law.
        let f1 = f(endpoint + sign * delta);
        let f2 = f(endpoint + sign * 0.5 * delta);
        let ratio = f1 / f2; // ~2 simple zero, ~1 regular, ~0.5 simple pole
        let k = if ratio > 1.5 {
            2.0
        } else if ratio < 0.75 {
            2.0 / 3.0
        } else {
            1.0
        };
        total += k * delta / f1.max(f64::MIN_POSITIVE).sqrt();
    }
    Ok(total)
}

fn check_positive(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Result<()> {
    let mid = 0.5 * (lo + hi);
    let rad = 0.5 * (hi - lo);
    for k in 0..128 {
        let x = mid + rad * (std::f64::consts::PI * (2.0 * k as f64 + 1.0) / 256.0).cos();
        let v = f(x);
        if v.is_finite() && v <= 0.0 {
            return Err(DghError::InvalidInterval { phi: x, value: v });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{constants_from_roots, make_problem, ModelParams};
    use approx::assert_relative_eq;

    #[test]
    fn gl_rule_integrates_polynomials_exactly() {
        // GL-16 is exact through degree 31.
        let v = gl_integrate(|x| x.powi(10), 0.0, 1.0, GlOrder::Sixteen);
        assert_relative_eq!(v, 1.0 / 11.0, epsilon = 1e-14);
        let v = gl_integrate(|x| (3.0 * x).sin(), 0.0, 2.0, GlOrder::ThirtyTwo);
        assert_relative_eq!(v, (1.0 - (6.0_f64).cos()) / 3.0, epsilon = 1e-13);
    }

    #[test]
    fn peakon_half_period_is_infinite() {
        // F = phi^2 on (0, 3): logarithmic divergence at the double zero.
        let pr = make_problem(ModelParams::new(1.0, 0.0, 0.0).unwrap(), 3.0, 0.0, 0.0).unwrap();
        assert_eq!(half_period(&pr, 0.0, 3.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn cnoidal_half_period_cross_check() {
        // Roots {-1, 0, 1}, gamma = 1: L = integral over (0,1) of
        // dphi / sqrt(phi (1 - phi^2)), the lemniscatic value.
        let p = ModelParams::new(0.0, 1.0, 1.0).unwrap();
        let c = 1.0; // c - c0 = 0 = sum of roots
        let (a, b, _) = constants_from_roots(&p, c, 0.0, 1.0);
        let pr = make_problem(p, c, a, b).unwrap();
        let l_theta = half_period(&pr, 0.0, 1.0).unwrap();
        let l_dyadic = half_period_adaptive(&pr, 0.0, 1.0).unwrap();
        assert_relative_eq!(l_theta, l_dyadic, epsilon = 1e-9);
        // Gamma(1/4)^2 / (2 sqrt(2 pi)), evaluated once and frozen.
        assert_relative_eq!(l_theta, 2.622_057_554_292_119_8, epsilon = 1e-10);
    }

    #[test]
    fn negative_interior_is_rejected() {
        // Roots {0, 1, 2}, pole 3: F < 0 on (0, 1).
        let p = ModelParams::new(1.0, 0.0, 0.0).unwrap();
        let (a, b, _) = constants_from_roots(&p, 3.0, 1.0, 2.0);
        let pr = make_problem(p, 3.0, a, b).unwrap();
        assert!(matches!(
            half_period(&pr, 0.0, 1.0),
            Err(DghError::InvalidInterval { .. })
        ));
    }

    #[test]
    fn smooth_periodic_dgh_half_periods_agree() {
        // Roots {0, 1, 2}, pole 3: wave on (1, 2).
        let p = ModelParams::new(1.0, 0.0, 0.0).unwrap();
        let (a, b, _) = constants_from_roots(&p, 3.0, 1.0, 2.0);
        let pr = make_problem(p, 3.0, a, b).unwrap();
        let l1 = half_period(&pr, 1.0, 2.0).unwrap();
        let l2 = half_period_adaptive(&pr, 1.0, 2.0).unwrap();
        assert!(l1.is_finite() && l1 > 0.0);
        assert_relative_eq!(l1, l2, epsilon = 1e-9);
    }

    #[test]
    fn cuspon_interval_with_pole_endpoint() {
        // CH cuspon: roots {-1/2 (double), 2}, pole 1; wave on (-1/2, 1)
        // would have infinite half-period (double zero at -1/2), while the
        // sub-interval (0, 1) ending at the pole is finite.
        let p = ModelParams::new(1.0, 0.0, 0.0).unwrap();
        let pr = make_problem(p, 1.0, 1.75, 0.5).unwrap();
        assert_eq!(half_period(&pr, -0.5, 1.0).unwrap(), f64::INFINITY);
        let l1 = half_period(&pr, 0.0, 1.0).unwrap();
        let l2 = half_period_adaptive(&pr, 0.0, 1.0).unwrap();
        assert!(l1.is_finite());
        assert_relative_eq!(l1, l2, epsilon = 1e-8);
    }
}
