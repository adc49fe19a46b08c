//! Bounds on `‖[f[V], A]‖` for unitary `V`, contraction `A`, given `δ = ‖[V, A]‖`.
//!
//! Upper bounds come from splitting `f = g + h` with `g` a Fourier truncation:
//! the slope is `‖g′‖_F` and the intercept is the oscillation of `h` (or the
//! coarser `2 Σ_{|n|>N} |a_n|`). The lower bound evaluates `f` on pairs of
//! angles whose chord length is at most `δ`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::envelope::{BoundCurve, BoundLine, InterceptSource, Provenance};
use crate::error::{Error, Result};
use crate::periodic::{
    self, enclosing_disk, fourier_coefficient, grid, real_extent_from_samples, reduce_angle,
    PeriodicFunction, TrigPolynomial, DEFAULT_EXTENT_GRID,
};

/// Unitary setting: `‖[V, A]‖ <= 2` whenever `‖A‖ <= 1`.
pub const UNITARY_DELTA_MAX: f64 = 2.0;
pub const DEFAULT_LOWER_GRID: usize = 4096;
pub const DEFAULT_TAIL_CUTOFF: usize = 1024;

pub fn folk_line(g: &TrigPolynomial) -> BoundLine {
    BoundLine::new(g.derivative_fourier_norm(), 0.0, UNITARY_DELTA_MAX, Provenance::Folk)
        .expect("Fourier norms are nonnegative")
}

/// `2 min_λ ‖h − λ‖∞` for a sampled remainder, refined on the grid for real `h`.
fn oscillation_of(h: &PeriodicFunction, grid_size: usize) -> Result<f64> {
    Ok(2.0 * periodic::chebyshev_radius(h, grid_size)?)
}

/// Line for the split `f = g + (f − g)`.
pub fn split_line(f: &PeriodicFunction, g: &TrigPolynomial) -> Result<BoundLine> {
    let h = f.minus(&g.to_function("g"));
    let b = oscillation_of(&h, DEFAULT_EXTENT_GRID)?;
    BoundLine::new(g.derivative_fourier_norm(), b, UNITARY_DELTA_MAX, Provenance::Split)
}

/// `Σ_{|n|>degree} |a_n|` together with the part of it that is a bound rather than a sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoefficientTail {
    pub value: f64,
    pub remainder_bound: f64,
}

/// Absolute coefficient tails for every degree `0..=n_max`.
fn coefficient_tails(
    f: &PeriodicFunction,
    n_max: usize,
    cutoff: usize,
) -> Result<Vec<CoefficientTail>> {
    let rule = f.coefficient_rule().ok_or_else(|| Error::TailNotSummable {
        name: f.name().to_string(),
        target: 0.0,
    })?;
    let abs_pair = |n: usize| -> f64 {
        let n = n as i64;
        if n == 0 {
            rule.coefficient(0).norm()
        } else {
            rule.coefficient(n).norm() + rule.coefficient(-n).norm()
        }
    };
    let (last, remainder) = if let Some(s) = rule.support {
        (s as usize, 0.0)
    } else if rule.abs_sum.is_some() {
        (n_max, 0.0)
    } else if let Some(d) = rule.decay.filter(|d| d.exponent > 1.0) {
        let m = cutoff.max(n_max + 1);
        // Σ_{n>m} C n^{-p} <= C m^{1-p}/(p-1), for both signs of n
        let r = 2.0 * d.constant * (m as f64).powf(1.0 - d.exponent) / (d.exponent - 1.0);
        (m, r)
    } else {
        return Err(Error::TailNotSummable {
            name: f.name().to_string(),
            target: 0.0,
        });
    };
    let top = last.max(n_max);
    let terms: Vec<f64> = (0..=top).map(abs_pair).collect();
    let mut tails = Vec::with_capacity(n_max + 1);
    match rule.abs_sum {
        Some(total) if rule.support.is_none() => {
            let mut partial = 0.0;
            for &t in terms.iter().take(n_max + 1) {
                partial += t;
                tails.push(CoefficientTail {
                    value: (total - partial).max(0.0),
                    remainder_bound: 0.0,
                });
            }
        }
        _ => {
            // suffix sums from the top down, then keep degrees 0..=n_max
            let mut suffix = vec![0.0; top + 2];
            for n in (0..=top).rev() {
                suffix[n] = suffix[n + 1] + terms[n];
            }
            for n in 0..=n_max {
                tails.push(CoefficientTail {
                    value: suffix[n + 1] + remainder,
                    remainder_bound: remainder,
                });
            }
        }
    }
    Ok(tails)
}

/// `Σ_{|n|>degree} |a_n|`, summed exactly for finite or closed-form series and up to
/// `cutoff` plus a decay bound otherwise.
pub fn coefficient_tail(
    f: &PeriodicFunction,
    degree: usize,
    cutoff: usize,
) -> Result<CoefficientTail> {
    Ok(coefficient_tails(f, degree, cutoff)?[degree])
}

/// `2 Σ |a_n|` when the coefficient sum is available.
fn coefficient_cap(f: &PeriodicFunction) -> Option<f64> {
    let rule = f.coefficient_rule()?;
    if let Some(s) = rule.abs_sum {
        return Some(2.0 * s);
    }
    let t = coefficient_tails(f, 0, DEFAULT_TAIL_CUTOFF).ok()?[0];
    Some(2.0 * (t.value + rule.coefficient(0).norm()))
}

/// `m = 0`, `b = min(2 Σ |a_n|, 2 min_λ ‖f − λ‖∞)`; ties go to the oscillation.
pub fn constant_cap(f: &PeriodicFunction) -> Result<BoundLine> {
    let osc = oscillation_of(f, DEFAULT_EXTENT_GRID)?;
    let (b, source) = match coefficient_cap(f) {
        Some(c) if c < osc => (c, InterceptSource::CoefficientTail),
        _ => (osc, InterceptSource::Oscillation),
    };
    BoundLine::new(0.0, b, UNITARY_DELTA_MAX, Provenance::ConstantCap { source })
}

#[derive(Clone, Copy, Debug)]
pub struct EnvelopeOptions {
    pub grid_size: usize,
    pub tail_cutoff: usize,
}

impl Default for EnvelopeOptions {
    fn default() -> Self {
        Self {
            grid_size: DEFAULT_EXTENT_GRID,
            tail_cutoff: 0,
        }
    }
}

/// One line per truncation degree `0..=n_max` plus the constant cap.
pub fn truncation_envelope(f: &PeriodicFunction, n_max: usize) -> Result<BoundCurve> {
    truncation_envelope_with(f, n_max, EnvelopeOptions::default())
}

pub fn truncation_envelope_with(
    f: &PeriodicFunction,
    n_max: usize,
    opts: EnvelopeOptions,
) -> Result<BoundCurve> {
    let cutoff = if opts.tail_cutoff == 0 {
        10 * n_max.max(1)
    } else {
        opts.tail_cutoff
    };
    let tails = coefficient_tails(f, n_max, cutoff).ok();
    let n = n_max as i64;
    let coeffs: Vec<Complex64> = (-n..=n)
        .map(|k| fourier_coefficient(f, k))
        .collect::<Result<_>>()?;
    let coef = |k: i64| coeffs[(k + n) as usize];

    let xs: Vec<f64> = grid(opts.grid_size).collect();
    let fx: Vec<Complex64> = xs.iter().map(|&x| f.evaluate(x)).collect();
    let mut gx = vec![Complex64::new(0.0, 0.0); xs.len()];
    let real = f.is_real_valued();

    let mut lines = Vec::with_capacity(n_max + 2);
    for degree in 0..=n_max {
        let d = degree as i64;
        if d == 0 {
            let a0 = coef(0);
            gx.iter_mut().for_each(|g| *g += a0);
        } else {
            let (ap, am) = (coef(d), coef(-d));
            for (g, &x) in gx.iter_mut().zip(&xs) {
                let e = Complex64::from_polar(1.0, d as f64 * x);
                *g += ap * e + am * e.conj();
            }
        }
        let poly = TrigPolynomial::from_symmetric((-d..=d).map(coef).collect())?;
        let slope = poly.derivative_fourier_norm();
        let osc = if real {
            let rem: Vec<f64> = fx.iter().zip(&gx).map(|(a, b)| (a - b).re).collect();
            let eval = |x: f64| (f.evaluate(x) - poly.evaluate(x)).re;
            real_extent_from_samples(&rem, &eval).oscillation()
        } else {
            let rem: Vec<Complex64> = fx.iter().zip(&gx).map(|(a, b)| a - b).collect();
            2.0 * enclosing_disk(rem).1
        };
        let tail = tails.as_ref().map(|t| 2.0 * t[degree].value);
        let (intercept, source, alternative) = match tail {
            Some(t) if t < osc => (t, InterceptSource::CoefficientTail, Some(osc)),
            Some(t) => (osc, InterceptSource::Oscillation, Some(t)),
            None => (osc, InterceptSource::Oscillation, None),
        };
        lines.push(BoundLine::new(
            slope,
            intercept.max(0.0),
            UNITARY_DELTA_MAX,
            Provenance::Truncation {
                degree,
                intercept: source,
                alternative,
            },
        )?);
    }
    lines.push(constant_cap(f)?);
    BoundCurve::new(lines, UNITARY_DELTA_MAX)
}

/// Largest chord-constrained jump `|f(x₂) − f(x₁)|` and where it was found.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LowerWitness {
    pub value: f64,
    pub x1: f64,
    pub x2: f64,
}

fn circular_distance(a: f64, b: f64) -> f64 {
    reduce_angle(b - a).abs()
}

/// `max |f(x₂) − f(x₁)|` over `|x₂ − x₁| <= 2 arcsin(δ/2)` (circular distance).
pub fn eta_lower(f: &PeriodicFunction, delta: f64, grid_size: usize) -> Result<f64> {
    Ok(eta_lower_witness(f, delta, grid_size)?.value)
}

pub fn eta_lower_witness(
    f: &PeriodicFunction,
    delta: f64,
    grid_size: usize,
) -> Result<LowerWitness> {
    if !(0.0..2.0).contains(&delta) {
        return Err(Error::InvalidArgument(format!(
            "lower bound needs 0 <= δ < 2, got {delta}"
        )));
    }
    if grid_size < 16 {
        return Err(Error::InvalidArgument("lower-bound grid below 16".into()));
    }
    let window = 2.0 * (delta / 2.0).asin();
    let g = grid_size;
    let h = TAU / g as f64;
    let xs: Vec<f64> = grid(g).collect();
    let vals: Vec<Complex64> = xs.iter().map(|&x| f.evaluate(x)).collect();
    // whole grid steps that fit in the window, capped at half the circle
    let steps = ((window / h) * (1.0 + 1e-12)).floor().min((g / 2) as f64) as usize;

    let (mut best, mut bi, mut bj) = (0.0f64, 0usize, 0usize);
    if steps > 0 {
        if f.is_real_valued() {
            let re: Vec<f64> = vals.iter().map(|v| v.re).collect();
            (best, bi, bj) = sliding_oscillation(&re, steps);
        } else {
            for i in 0..g {
                for s in 1..=steps {
                    let j = (i + s) % g;
                    let v = (vals[i] - vals[j]).norm();
                    if v > best {
                        (best, bi, bj) = (v, i, j);
                    }
                }
            }
        }
    }
    let mut witness = LowerWitness {
        value: best,
        x1: xs[bi],
        x2: xs[bj],
    };
    if steps > 0 {
        refine_pair(f, window, h, &mut witness);
    }
    Ok(witness)
}

/// Max of (window max − window min) over all circular windows of `steps + 1`
/// samples, by monotone deques. Returns the value and the two sample indices.
fn sliding_oscillation(v: &[f64], steps: usize) -> (f64, usize, usize) {
    use std::collections::VecDeque;
    let g = v.len();
    let at = |k: usize| v[k % g];
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    let (mut best, mut bi, mut bj) = (0.0f64, 0, 0);
    for k in 0..g + steps {
        while maxq.back().is_some_and(|&b| at(b) <= at(k)) {
            maxq.pop_back();
        }
        maxq.push_back(k);
        while minq.back().is_some_and(|&b| at(b) >= at(k)) {
            minq.pop_back();
        }
        minq.push_back(k);
        if k < steps {
            continue;
        }
        let start = k - steps;
        while maxq.front().is_some_and(|&f| f < start) {
            maxq.pop_front();
        }
        while minq.front().is_some_and(|&f| f < start) {
            minq.pop_front();
        }
        let (hi, lo) = (maxq[0], minq[0]);
        let osc = at(hi) - at(lo);
        if osc > best {
            let (a, b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
            (best, bi, bj) = (osc, a % g, b % g);
        }
    }
    (best, bi, bj)
}

fn refine_pair(f: &PeriodicFunction, window: f64, h: f64, w: &mut LowerWitness) {
    let jump = |a: f64, b: f64| (f.evaluate(a) - f.evaluate(b)).norm();
    let consider = |a: f64, b: f64, w: &mut LowerWitness| {
        if circular_distance(a, b) <= window {
            let v = jump(a, b);
            if v > w.value {
                *w = LowerWitness {
                    value: v,
                    x1: reduce_angle(a),
                    x2: reduce_angle(b),
                };
            }
        }
    };
    let (x1, x2) = (w.x1, w.x2);
    const SUB: i32 = 16;
    for p in -SUB..=SUB {
        let a = x1 + h * p as f64 / SUB as f64;
        for q in -SUB..=SUB {
            consider(a, x2 + h * q as f64 / SUB as f64, w);
        }
        consider(a, a + window, w);
        consider(a, a - window, w);
    }
    // the constraint is usually active: polish along x₂ = x₁ ± window
    for sign in [1.0, -1.0] {
        let along = |a: f64| jump(a, a + sign * window);
        let (mut lo, mut hi) = (w.x1 - h, w.x1 + h);
        const INV_PHI: f64 = 0.618_033_988_749_894_9;
        for _ in 0..60 {
            let m1 = hi - INV_PHI * (hi - lo);
            let m2 = lo + INV_PHI * (hi - lo);
            if along(m1) < along(m2) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        let a = 0.5 * (lo + hi);
        consider(a, a + sign * window * (1.0 - 1e-15), w);
    }
}

/// Lower bound at each δ, evaluated independently and in order.
pub fn eta_lower_curve(
    f: &PeriodicFunction,
    deltas: &[f64],
    grid_size: usize,
) -> Result<Vec<f64>> {
    deltas
        .par_iter()
        .map(|&d| eta_lower(f, d, grid_size))
        .collect()
}

/// `‖f[V] − f[V₁]‖ <= η_f(‖V − V₁‖)`, evaluated on an upper curve for `η_f`.
pub fn continuity_bound(curve: &BoundCurve, distance: f64) -> Result<f64> {
    if !(0.0..=UNITARY_DELTA_MAX).contains(&distance) {
        return Err(Error::InvalidArgument(format!(
            "unitary distance {distance} outside [0, 2]"
        )));
    }
    Ok(curve.evaluate(distance))
}

/// The chord-length/arc relation used by the lower bound: `|e^{ia} − e^{ib}|`.
pub fn chord(a: f64, b: f64) -> f64 {
    2.0 * ((a - b) / 2.0).sin().abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use crate::periodic::{builtin_bump, builtin_triangle, constant, cosine, exponential, truncate};

    #[test]
    fn folk_line_examples() {
        assert_eq!(folk_line(&truncate(&cosine(), 1).unwrap()).slope, 1.0);
        assert_eq!(folk_line(&truncate(&exponential(5), 5).unwrap()).slope, 5.0);
        let c = folk_line(&truncate(&constant(3.0), 2).unwrap());
        assert_eq!((c.slope, c.intercept), (0.0, 0.0));
    }

    #[test]
    fn split_line_examples() {
        let cos = cosine();
        let l = split_line(&cos, &truncate(&cos, 1).unwrap()).unwrap();
        assert!((l.slope - 1.0).abs() < 1e-15 && l.intercept < 1e-15);

        let tri = builtin_triangle();
        let l = split_line(&tri, &TrigPolynomial::zero()).unwrap();
        assert_eq!(l.slope, 0.0);
        assert!((l.intercept - 2.0).abs() < 1e-12);

        let g = truncate(&tri, 1).unwrap();
        let l = split_line(&tri, &g).unwrap();
        assert!((l.slope - 8.0 / (PI * PI)).abs() < 1e-14);
        // grid oracle for the remainder f − (8/π²) cos x
        let rem = |x: f64| 1.0 - 2.0 / PI * x.abs() - 8.0 / (PI * PI) * x.cos();
        let (mut lo, mut hi) = (f64::MAX, f64::MIN);
        for i in 0..=400_000 {
            let v = rem(-PI + TAU * i as f64 / 400_000.0);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        assert!((l.intercept - (hi - lo)).abs() < 1e-9, "{} vs {}", l.intercept, hi - lo);
    }

    #[test]
    fn triangle_tail_closed_form() {
        let tri = builtin_triangle();
        let t = coefficient_tail(&tri, 1, 10).unwrap();
        // 2 Σ_{odd n>=3} (4/π²) n^{-2} = 1 − 8/π²
        assert!((t.value - (1.0 - 8.0 / (PI * PI))).abs() < 1e-15);
        // partial sums of the same series as an independent route
        let brute: f64 = (1..2_000_000).filter(|n| n % 2 == 1 && *n >= 3)
            .map(|n| 2.0 * 4.0 / (PI * PI * (n as f64).powi(2)))
            .sum();
        assert!((t.value - brute).abs() < 1e-6);
    }

    #[test]
    fn envelope_examples() {
        let c = truncation_envelope(&exponential(2), 3).unwrap();
        for d in [0.0, 0.3, 0.9] {
            assert!((c.evaluate(d) - 2.0 * d).abs() < 1e-14);
        }
        let c = truncation_envelope(&constant(4.0), 3).unwrap();
        assert!(c.lines().iter().all(|l| c.evaluate(1.0) == 0.0 && l.slope == 0.0));

        let tri = builtin_triangle();
        let c = truncation_envelope(&tri, 1).unwrap();
        let l1 = &c.lines()[1];
        assert!((l1.slope - 8.0 / (PI * PI)).abs() < 1e-14);
        match &l1.provenance {
            Provenance::Truncation { alternative, .. } => {
                let tail = 2.0 * (1.0 - 8.0 / (PI * PI));
                let alt = alternative.unwrap();
                assert!((alt - tail).abs() < 1e-14 || (l1.intercept - tail).abs() < 1e-14);
            }
            other => panic!("unexpected provenance {other:?}"),
        }
    }

    #[test]
    fn cap_examples() {
        let cap = constant_cap(&builtin_triangle()).unwrap();
        assert!((cap.intercept - 2.0).abs() < 1e-12);
        assert_eq!(
            cap.provenance,
            Provenance::ConstantCap {
                source: InterceptSource::Oscillation
            }
        );
        assert!((constant_cap(&exponential(1)).unwrap().intercept - 2.0).abs() < 1e-12);
        assert_eq!(constant_cap(&constant(7.0)).unwrap().intercept, 0.0);
    }

    #[test]
    fn lower_bound_examples() {
        let tri = builtin_triangle();
        for d in [0.05, 0.4, 1.0, 1.7, 1.99] {
            let v = eta_lower(&tri, d, DEFAULT_LOWER_GRID).unwrap();
            let exact = 4.0 / PI * (d / 2.0).asin();
            assert!((v - exact).abs() < 1e-9, "δ={d}: {v} vs {exact}");
        }
        let near_two = eta_lower(&tri, 2.0 - 1e-12, DEFAULT_LOWER_GRID).unwrap();
        assert!((near_two - 2.0).abs() < 1e-5);
        assert!(eta_lower(&tri, 2.0, 64).is_err());
        assert_eq!(eta_lower(&tri, 0.0, 64).unwrap(), 0.0);
    }

    #[test]
    fn bump_lower_matches_grid_oracle() {
        // exhaustive fine-grid search at δ = 0.2
        let bump = builtin_bump();
        let w = 2.0 * (0.1f64).asin();
        let n = 20_000;
        let h = TAU / n as f64;
        let k = (w / h).floor() as usize;
        let v: Vec<f64> = (0..n).map(|i| bump.evaluate_real(-PI + h * i as f64)).collect();
        let mut oracle = 0.0f64;
        for i in 0..n {
            for s in 1..=k {
                oracle = oracle.max((v[i] - v[(i + s) % n]).abs());
            }
        }
        let got = eta_lower(&bump, 0.2, DEFAULT_LOWER_GRID).unwrap();
        assert!(got >= oracle - 1e-9, "{got} < {oracle}");
        assert!(got <= oracle + 1e-3);
        // √-edge: the best pair sits at the boundary of the support
        let exact = (1.0 - (1.0 - 2.0 * w / PI).powi(2)).sqrt();
        assert!((got - exact).abs() < 1e-9);
    }

    #[test]
    fn continuity_examples() {
        let cos = truncation_envelope(&cosine(), 2).unwrap();
        assert_eq!(continuity_bound(&cos, 0.0).unwrap(), 0.0);
        assert!((continuity_bound(&cos, 0.3).unwrap() - 0.3).abs() < 1e-15);
        let tri = truncation_envelope(&builtin_triangle(), 8).unwrap();
        assert!(continuity_bound(&tri, 2.0).unwrap() <= 2.0 + 1e-12);
        assert!(continuity_bound(&tri, 2.5).is_err());
    }

    #[test]
    fn chord_matches_formula() {
        assert!((chord(0.0, PI) - 2.0).abs() < 1e-15);
        assert!((chord(0.0, PI / 2.0) - 2f64.sqrt()).abs() < 1e-15);
    }
}
