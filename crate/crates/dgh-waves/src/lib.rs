//! Bounded travelling waves of the Dullin-Gottwald-Holm equation
//!
//! ```text
//! m_t + c0 u_x + 2 u_x m + u m_x + gamma u_xxx = 0,   m = u - alpha^2 u_xx,
//! ```
//!
//! covering its KdV (`alpha = 0`) and Camassa-Holm (`gamma = 0`) limits:
//! complete classification of the admissible wave kinds, profile synthesis
//! by quadrature of `(phi')^2 = F(phi)`, strong/weak residual verification,
//! and a pseudo-spectral evolution check for smooth waves.
//!
//! The accompanying guide under `book/` walks through the machinery; its
//! code blocks are compiled and run as part of this crate's doc-tests.
//!
//! ```
//! use dgh_waves::{classify, make_problem, synthesize, weak_residual,
//!                 ModelParams, SynthesisOptions, WaveKind};
//!
//! // The peaked solitary wave of speed 3: phi(z) = 3 exp(-|z|).
//! let params = ModelParams::new(1.0, 0.0, 0.0)?;
//! let problem = make_problem(params, 3.0, 0.0, 0.0)?;
//! let class = classify(&problem);
//! assert_eq!(class.kind, WaveKind::PeakonDecay);
//!
//! let profile = synthesize(&problem, &SynthesisOptions::default())?;
//! let report = weak_residual(&profile, &problem, 20, 0);
//! assert!(report.pass);
//! # Ok::<(), dgh_waves::DghError>(())
//! ```

pub mod classify;
pub mod error;
pub mod evolution;
pub mod model;
pub mod quadrature;
pub mod synthesis;
pub mod verify;

pub use classify::{
    classify, classify_dgh, classify_kdv, classify_with_tol, composite_compatible, sign_oracle,
    stumpon_constant, sweep, GridSpec, PhaseDiagram, SweepAxes, WaveClass, WaveKind,
};
pub use error::{DghError, Result};
pub use evolution::{
    evolve, helmholtz_invert, rhs, shape_error, EvolutionState, ShapeError, SpectralGrid,
};
pub use model::{
    constants_from_roots, make_problem, potential_cancelled, potential_eval, solve_cubic, Cubic,
    ModelParams, PotentialSpectrum, TravelingWaveProblem, DEFAULT_CLUSTER_TOL,
};
pub use quadrature::{half_period, half_period_adaptive};
pub use synthesis::{
    glue_composite, glue_composite_unchecked, synth_cuspon, synth_decay, synth_peakon,
    synth_periodic, synth_stumpon, synth_stumpon_unchecked, synthesize, synthesize_class,
    DecayInfo, Sample, Segment, SegmentKind, SynthesisOptions, WaveProfile,
};
pub use verify::{
    decay_rate, quadrature_residual, regularity_check, strong_budget, test_functions,
    weak_residual, weak_residual_with, ResidualReport, TestFunctionKind, TestFunctionSpec,
};

// The guide's code blocks double as doc-tests so the book cannot drift
// from the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/quadrature.md")]
    mod quadrature {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/synthesis.md")]
    mod synthesis {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/evolution.md")]
    mod evolution {}
}
