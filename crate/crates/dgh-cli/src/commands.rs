//! Subcommand implementations. Outcomes partition the exit codes:
//! 0 pass, 1 usage/config error, 2 no bounded wave, 3 synthesis or
//! verification failure, 4 unsupported wave class, 5 blow-up/CFL.

use std::fmt::Write as _;

use dgh_waves::{
    classify_with_tol, decay_rate, evolve, regularity_check, shape_error, stumpon_constant,
    sweep, synth_stumpon, synthesize_class, DghError, EvolutionState, SpectralGrid,
    TravelingWaveProblem, WaveClass, WaveProfile,
};

use crate::config::RunConfig;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NO_WAVE: i32 = 2;
pub const EXIT_FAIL: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;
pub const EXIT_BLOWUP: i32 = 5;

fn usage_error(e: impl std::fmt::Display) -> i32 {
    eprintln!("error: {e}");
    EXIT_USAGE
}

fn classify_problem(cfg: &RunConfig) -> Result<(TravelingWaveProblem, WaveClass), i32> {
    let problem = cfg.problem().map_err(usage_error)?;
    let class = classify_with_tol(&problem, cfg.cluster_tol);
    Ok((problem, class))
}

pub fn cmd_classify(cfg: &RunConfig) -> i32 {
    let (problem, class) = match classify_problem(cfg) {
        Ok(v) => v,
        Err(code) => return code,
    };
    println!("{} {}", class.kind, class.theorem_case);
    println!("m = {}", class.interval.0);
    println!("M = {}", class.interval.1);
    println!("z0 = {}", class.z0);
    match class.pole {
        Some(p) => println!("c_tilde = {p}"),
        None => println!("c_tilde = none"),
    }
    println!("A = {}", problem.a);
    println!("B = {}", problem.b);
    match stumpon_constant(&problem.params, problem.c) {
        Ok(a_star) => println!("A_star = {a_star}"),
        Err(_) => println!("A_star = none"),
    }
    if class.kind.is_bounded_wave() {
        EXIT_PASS
    } else {
        EXIT_NO_WAVE
    }
}

fn synthesize_for(cfg: &RunConfig, problem: &TravelingWaveProblem, class: &WaveClass) -> Result<WaveProfile, i32> {
    let opts = cfg.synthesis_options();
    let result = if cfg.plateau_lengths.is_empty() {
        synthesize_class(problem, class, &opts)
    } else {
        synth_stumpon(problem, &cfg.plateau_lengths, &opts)
    };
    result.map_err(|e| {
        eprintln!("synthesis failed: {e}");
        EXIT_FAIL
    })
}

fn profile_csv(cfg: &RunConfig, profile: &WaveProfile) -> String {
    let mut out = cfg.header();
    if let Some(period) = profile.periodic {
        let _ = writeln!(out, "# periodic={period}");
    }
    if let Some(decay) = profile.decay {
        let _ = writeln!(out, "# decay_limit={}", decay.limit);
        let _ = writeln!(out, "# decay_rate={}", decay.rate_predicted);
    }
    out.push_str("z,phi,segment_id,segment_kind\n");
    let mut seg_of = vec![0usize; profile.samples.len()];
    for (sid, seg) in profile.segments.iter().enumerate() {
        for slot in seg_of[seg.first..=seg.last].iter_mut() {
            *slot = sid;
        }
    }
    for (j, s) in profile.samples.iter().enumerate() {
        let kind = profile.segments[seg_of[j]].kind.name();
        let _ = writeln!(out, "{},{},{},{}", s.z, s.phi, seg_of[j], kind);
    }
    out
}

fn write_output(path: &str, contents: &str) -> Result<(), i32> {
    std::fs::write(path, contents).map_err(|e| {
        eprintln!("cannot write {path}: {e}");
        EXIT_USAGE
    })
}

fn report_block(cfg: &RunConfig, profile: &WaveProfile, problem: &TravelingWaveProblem) -> (String, bool) {
    let report = dgh_waves::weak_residual(profile, problem, cfg.n_tests, cfg.seed);
    let budget = dgh_waves::strong_budget(profile, problem);
    let pass = report.max_weak <= cfg.residual_tol && report.max_strong <= budget;
    let mut out = String::new();
    let _ = writeln!(out, "max_strong = {}", report.max_strong);
    let _ = writeln!(out, "strong_budget = {budget}");
    let _ = writeln!(out, "max_weak = {}", report.max_weak);
    let _ = writeln!(out, "weak_tol = {}", cfg.residual_tol);
    let _ = writeln!(out, "n_tests = {}", report.n_tests);
    let _ = writeln!(out, "straddling_tests = {}", report.straddling_tests);
    let _ = writeln!(out, "pass = {pass}");
    (out, pass)
}

pub fn cmd_synth(cfg: &RunConfig) -> i32 {
    let (problem, class) = match classify_problem(cfg) {
        Ok(v) => v,
        Err(code) => return code,
    };
    if !class.kind.is_bounded_wave() {
        eprintln!("no bounded wave: {} {}", class.kind, class.theorem_case);
        return EXIT_NO_WAVE;
    }
    let profile = match synthesize_for(cfg, &problem, &class) {
        Ok(p) => p,
        Err(code) => return code,
    };
    if let Some(path) = &cfg.output {
        if let Err(code) = write_output(path, &profile_csv(cfg, &profile)) {
            return code;
        }
    }
    println!("kind = {}", class.kind);
    println!("case = {}", class.theorem_case);
    if let Some(period) = profile.periodic {
        println!("period = {period}");
    }
    let (block, pass) = report_block(cfg, &profile, &problem);
    print!("{block}");
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

pub fn cmd_verify(cfg: &RunConfig) -> i32 {
    let (problem, class) = match classify_problem(cfg) {
        Ok(v) => v,
        Err(code) => return code,
    };
    if !class.kind.is_bounded_wave() {
        eprintln!("no bounded wave: {} {}", class.kind, class.theorem_case);
        return EXIT_NO_WAVE;
    }
    let profile = match synthesize_for(cfg, &problem, &class) {
        Ok(p) => p,
        Err(code) => return code,
    };
    println!("kind = {}", class.kind);
    println!("case = {}", class.theorem_case);
    let (block, mut pass) = report_block(cfg, &profile, &problem);
    print!("{block}");
    if profile.decay.is_some() {
        match decay_rate(&profile) {
            Ok((fitted, predicted)) => {
                println!("decay_rate_fitted = {fitted}");
                println!("decay_rate_predicted = {predicted}");
                if (fitted - predicted).abs() > 0.01 * predicted.abs() {
                    pass = false;
                }
            }
            Err(e) => {
                eprintln!("decay-rate fit failed: {e}");
                pass = false;
            }
        }
    }
    if let Some(pole) = problem.pole() {
        if !profile.singular_indices().is_empty() {
            let ok = regularity_check(&profile, pole);
            println!("regularity = {ok}");
            pass = pass && ok;
        }
    }
    println!("verified = {pass}");
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

pub fn cmd_sweep(cfg: &RunConfig) -> i32 {
    let params = match cfg.problem() {
        Ok(p) => p.params,
        Err(e) => return usage_error(e),
    };
    let axes = match cfg.sweep_axes() {
        Ok(a) => a,
        Err(e) => return usage_error(e),
    };
    let diagram = match sweep(&params, cfg.c, axes, &cfg.grid_spec()) {
        Ok(d) => d,
        Err(e) => return usage_error(e),
    };
    let mut out = cfg.header();
    out.push_str("axis1,axis2,kind,theorem_case\n");
    for i in 0..diagram.grid.ny {
        let y = cfg.a2_min + (cfg.a2_max - cfg.a2_min) * i as f64 / (diagram.grid.ny - 1) as f64;
        for j in 0..diagram.grid.nx {
            let x =
                cfg.a1_min + (cfg.a1_max - cfg.a1_min) * j as f64 / (diagram.grid.nx - 1) as f64;
            let cell = diagram.cell(i, j);
            let _ = writeln!(out, "{},{},{},{}", x, y, cell.kind, cell.theorem_case);
        }
    }
    match &cfg.output {
        Some(path) => {
            if let Err(code) = write_output(path, &out) {
                return code;
            }
        }
        None => print!("{out}"),
    }
    EXIT_PASS
}

/// Decay waves are evolved as numerically periodic data on a domain wide
/// enough that the wrap-around tails are at the tail-truncation level.
fn wrapped_for_domain(profile: &WaveProfile, length: f64) -> WaveProfile {
    let mut p = profile.clone();
    let mid = 0.5 * length;
    for s in p.samples.iter_mut() {
        s.z += mid;
    }
    p.periodic = Some(length);
    p
}

pub fn cmd_evolve(cfg: &RunConfig) -> i32 {
    let (problem, class) = match classify_problem(cfg) {
        Ok(v) => v,
        Err(code) => return code,
    };
    if !class.kind.is_bounded_wave() {
        eprintln!("no bounded wave: {} {}", class.kind, class.theorem_case);
        return EXIT_NO_WAVE;
    }
    if !class.kind.is_smooth() {
        eprintln!(
            "evolution restricted to smooth classes; {} would only measure \
             spectral ringing",
            class.kind
        );
        return EXIT_UNSUPPORTED;
    }
    let profile = match synthesize_for(cfg, &problem, &class) {
        Ok(p) => p,
        Err(code) => return code,
    };
    // Domain: one period for periodic waves, >= 40 decay lengths otherwise.
    let (domain, compare) = match profile.periodic {
        Some(period) => (period, profile.clone()),
        None => {
            let rate = profile.decay.map(|d| d.rate_predicted).unwrap_or(1.0);
            let span = 2.0 * profile.z_max();
            let length = (40.0 / rate).max(1.05 * span);
            (length, wrapped_for_domain(&profile, length))
        }
    };
    let grid = match SpectralGrid::new(cfg.n_modes, domain) {
        Ok(g) => g,
        Err(e) => return usage_error(e),
    };
    let u0: Vec<f64> = grid.nodes.iter().map(|&x| compare.interpolate(x)).collect();

    let run = |t_end: f64, start: &[f64]| -> Result<EvolutionState, DghError> {
        evolve(start, &problem.params, t_end, cfg.dt, &grid)
    };

    let mut snapshots = cfg.header();
    snapshots.push_str(&format!("# domain_length={domain}\n"));
    snapshots.push_str("t,x,u\n");
    let push_snapshot = |t: f64, u: &[f64], out: &mut String| {
        for (j, &x) in grid.nodes.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", t, x, u[j]);
        }
    };

    let state = if cfg.snapshot_stride > 0 && cfg.output.is_some() {
        push_snapshot(0.0, &u0, &mut snapshots);
        let chunk = cfg.dt * cfg.snapshot_stride as f64;
        let mut t = 0.0;
        let mut u = u0.clone();
        while t < cfg.t_end - 1e-12 {
            let step = chunk.min(cfg.t_end - t);
            match run(step, &u) {
                Ok(s) => {
                    u = s.u;
                    t += step;
                    push_snapshot(t, &u, &mut snapshots);
                }
                Err(e) => return blowup_exit(e),
            }
        }
        EvolutionState { u, t }
    } else {
        match run(cfg.t_end, &u0) {
            Ok(s) => s,
            Err(e) => return blowup_exit(e),
        }
    };

    if cfg.snapshot_stride > 0 {
        if let Some(path) = &cfg.output {
            if let Err(code) = write_output(path, &snapshots) {
                return code;
            }
        }
    }

    let se = shape_error(&state, &compare, &grid);
    let expected = (problem.c * cfg.t_end).rem_euclid(domain);
    let shift_err = (se.shift - expected)
        .abs()
        .min(domain - (se.shift - expected).abs());
    println!("shape_error = {}", se.error);
    println!("shift = {}", se.shift);
    println!("expected_shift = {expected}");
    println!("shift_error = {shift_err}");
    println!("recovered_speed = {}", se.shift / cfg.t_end);
    let pass = se.error <= cfg.residual_tol;
    println!("pass = {pass}");
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn blowup_exit(e: DghError) -> i32 {
    eprintln!("evolution aborted: {e}");
    match e {
        DghError::Blowup(_) | DghError::CflViolated { .. } => EXIT_BLOWUP,
        _ => EXIT_USAGE,
    }
}
