//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::Instant;

use commbound::circle::{eta_lower, eta_lower_curve, truncation_envelope};
use commbound::lab::{
    block_identities, commutator_norm, folk_trials, haar_unitary, hermitian_calculus, instance, probe_max_commutator,
    rng_for, sample_sweep, Role, SpectrumMode, SweepSpec, Target,
};
use commbound::periodic::{builtin_bump, builtin_triangle, fourier_coefficient, PeriodicFunction};
use commbound::positive::{
    gamma0, pedersen_curve, pedersen_line, reflect_function, reflect_instance, sqrt_series, UnitFunction,
    DEFAULT_PEDERSEN_DEGREE, DEFAULT_TANGENT_GRID,
};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn sqrt_curve() -> commbound::BoundCurve {
    gamma0(DEFAULT_PEDERSEN_DEGREE, DEFAULT_TANGENT_GRID).expect("default γ₀")
}

fn pinch_at_quarter() -> Outcome {
    let g = sqrt_curve().evaluate(0.25);
    let probe = probe_max_commutator(0.25, 2, 128_000, 0).map_err(|e| e.to_string())?;
    let best = probe.best.measured;
    check(
        (g - 0.5).abs() <= 1e-12 && best >= 0.5 - 1e-6 && best <= g + 1e-8,
        format!("γ₀(1/4) = {g:.15}, probe best = {best:.15} at ‖[H,A]‖ = {:.3e}", probe.best.delta),
    )
}

fn gamma0_equals_sqrt() -> Outcome {
    let curve = sqrt_curve();
    let worst = (0..1000)
        .map(|k| {
            let d = 0.25 + 0.75 * k as f64 / 999.0;
            (curve.evaluate(d) - d.sqrt()).abs()
        })
        .fold(0.0, f64::max);
    check(worst <= 1e-12, format!("max |γ₀ − √δ| on [1/4, 1] = {worst:.3e}"))
}

fn pedersen_constant() -> Outcome {
    let curve = pedersen_curve(100_000).map_err(|e| e.to_string())?;
    let k = 2.0 / PI.sqrt();
    let mut worst = 0.0f64;
    for j in 0..=400 {
        let d = 10f64.powf(-4.0 + 4.0 * j as f64 / 400.0);
        worst = worst.max(curve.evaluate(d) / (k * d.sqrt()));
    }
    let small = curve.evaluate(1e-4) / (k * 1e-2);
    check(
        worst <= 1.05 && small >= 0.95,
        format!("max pedersen(δ) / ((2/√π)√δ) on [1e-4, 1] = {worst:.6}, at δ = 1e-4: {small:.6}"),
    )
}

/// `c_n = C(2n, n) / ((2n − 1) 4ⁿ)`, exact in integers before the final division.
fn closed_form_coefficient(n: u32) -> f64 {
    let mut binom: u128 = 1;
    for k in 0..n as u128 {
        binom = binom * (2 * n as u128 - k) / (k + 1);
    }
    binom as f64 / ((2 * n as u128 - 1) as f64 * 4f64.powi(n as i32))
}

fn sqrt_series_oracle() -> Outcome {
    let n_max = 100_000;
    let series = sqrt_series(n_max).map_err(|e| e.to_string())?;
    let literal = [(2, 1.0 / 8.0), (3, 1.0 / 16.0), (4, 5.0 / 128.0)];
    let mut coeff_err = literal
        .iter()
        .map(|&(n, c)| (series.coefficient(n) - c).abs())
        .fold(0.0, f64::max);
    for n in 1..=30u32 {
        let want = closed_form_coefficient(n);
        coeff_err = coeff_err.max((series.coefficient(n as usize) - want).abs() / want);
    }
    let mut sum_err = 0.0f64;
    for n in 1..=n_max {
        let b = pedersen_line(&series, n).map_err(|e| e.to_string())?.intercept;
        sum_err = sum_err.max((series.partial_sum(n) + b - 1.0).abs());
    }
    check(
        coeff_err <= 1e-13 && sum_err <= 1e-14,
        format!("coefficient error {coeff_err:.3e}, max |Σc + b_N − 1| over N ≤ 1e5 = {sum_err:.3e}"),
    )
}

fn validate_sqrt_sweep() -> Outcome {
    let spec = SweepSpec::new(2000, 2, 8, 0)
        .map_err(|e| e.to_string())?
        .with_spectrum_modes(vec![SpectrumMode::Uniform, SpectrumMode::Atoms]);
    let out = sample_sweep(&spec, &Target::Unit(UnitFunction::sqrt()), &sqrt_curve()).map_err(|e| e.to_string())?;
    check(
        out.min_margin >= -1e-8,
        format!("2000 pairs, 0 violations, min margin {:.3e}", out.min_margin),
    )
}

fn validate_circle_sweep() -> Outcome {
    let f = builtin_triangle();
    let curve = truncation_envelope(&f, 64).map_err(|e| e.to_string())?;
    let spec = SweepSpec::new(1000, 2, 8, 0).map_err(|e| e.to_string())?;
    let out = sample_sweep(&spec, &Target::Circle(f), &curve).map_err(|e| e.to_string())?;
    let folk = folk_trials(500, 2, 8, 0).map_err(|e| e.to_string())?;
    check(
        out.min_margin >= -1e-8 && folk.min_margin >= -1e-9,
        format!(
            "1000 pairs, 0 violations, min margin {:.3e}; folk bound min margin {:.3e}",
            out.min_margin, folk.min_margin
        ),
    )
}

fn lower_upper_dominance() -> Outcome {
    let deltas: Vec<f64> = (1..=500).map(|k| 2.0 * k as f64 / 501.0).collect();
    let tri = builtin_triangle();
    let upper = truncation_envelope(&tri, 64).map_err(|e| e.to_string())?;
    let lower = eta_lower_curve(&tri, &deltas, 4096).map_err(|e| e.to_string())?;
    let excess = deltas
        .iter()
        .zip(&lower)
        .map(|(&d, &lo)| lo - upper.evaluate(d))
        .fold(f64::NEG_INFINITY, f64::max);

    let bump = builtin_bump();
    let bl = eta_lower_curve(&bump, &deltas, 4096).map_err(|e| e.to_string())?;
    let nonneg = bl.iter().all(|&x| x >= 0.0);
    let monotone = bl.windows(2).all(|w| w[0] <= w[1] + 1e-10);
    let top = eta_lower(&bump, 2.0 - 1e-9, 4096).map_err(|e| e.to_string())?;
    check(
        excess <= 1e-8 && nonneg && monotone && (top - 1.0).abs() <= 1e-9,
        format!(
            "max(lower − upper) = {excess:.3e}; bump lower nonnegative {nonneg}, monotone {monotone}, at 2⁻ = {top:.12}"
        ),
    )
}

fn block_identity_check() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..200u64 {
        let n = 2 + (i as usize % 7);
        let v = haar_unitary(n, &mut rng_for(i, 0));
        let v1 = haar_unitary(n, &mut rng_for(i, 1));
        for f in [builtin_triangle(), builtin_bump()] {
            worst = worst.max(block_identities(&f, &v, &v1).map_err(|e| e.to_string())?.max_error());
        }
    }
    check(worst <= 1e-10, format!("200 unitary pairs, max error {worst:.3e}"))
}

fn reflection_check() -> Outcome {
    let spec = SweepSpec::new(500, 2, 8, 99)
        .map_err(|e| e.to_string())?
        .with_spectrum_modes(vec![SpectrumMode::Uniform, SpectrumMode::Atoms]);
    let f1 = UnitFunction::sqrt();
    let f2 = reflect_function(&f1);
    let mut worst = 0.0f64;
    for i in 0..500 {
        let pair = instance(&spec, Role::PositiveContraction, i);
        let lhs = hermitian_calculus(&f1, &pair.x).and_then(|m| commutator_norm(&m, &pair.a));
        let rhs = reflect_instance(&pair.x)
            .and_then(|h| hermitian_calculus(&f2, &h))
            .and_then(|m| commutator_norm(&m, &pair.a));
        let (lhs, rhs) = (lhs.map_err(|e| e.to_string())?, rhs.map_err(|e| e.to_string())?);
        worst = worst.max((lhs - rhs).abs());
    }
    check(worst <= 1e-12, format!("500 pairs, max difference {worst:.3e}"))
}

fn triangle_quadrature() -> Outcome {
    // same values, no coefficient rule, so coefficients come from quadrature
    let tri = builtin_triangle();
    let bare = PeriodicFunction::real("triangle-quadrature", move |x| tri.evaluate_real(x));
    let (mut odd_err, mut even_err) = (0.0f64, 0.0f64);
    for n in -16i64..=16 {
        let a = fourier_coefficient(&bare, n).map_err(|e| e.to_string())?;
        if n.rem_euclid(2) == 1 {
            let want = 4.0 / (PI * PI * (n * n) as f64);
            odd_err = odd_err.max((a - want).norm());
        } else {
            even_err = even_err.max(a.norm());
        }
    }
    check(
        odd_err <= 1e-10 && even_err <= 1e-12,
        format!("odd |n| ≤ 15 error {odd_err:.3e}, even |n| ≤ 16 magnitude {even_err:.3e}"),
    )
}

fn validate_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut reports = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("report{k}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_commbound"))
            .args(["validate", "sqrt", "--seed", "42", "--out"])
            .arg(&path)
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("run {k} exited with {status}"));
        }
        reports.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    check(
        reports[0] == reports[1] && !reports[0].is_empty(),
        format!("two runs, {} bytes each, identical {}", reports[0].len(), reports[0] == reports[1]),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("pinch at δ = 1/4", pinch_at_quarter),
        ("γ₀ = √δ on [1/4, 1]", gamma0_equals_sqrt),
        ("Pedersen constant 2/√π", pedersen_constant),
        ("√ series coefficients and complement", sqrt_series_oracle),
        ("validate sqrt sweep", validate_sqrt_sweep),
        ("validate circle sweep and folk bound", validate_circle_sweep),
        ("lower/upper dominance", lower_upper_dominance),
        ("block identities", block_identity_check),
        ("reflection identity", reflection_check),
        ("triangle quadrature coefficients", triangle_quadrature),
        ("validate report determinism", validate_determinism),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.2}s)", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
