//! Bounds on `‖[f(H), A]‖` for `0 <= H <= 1`, `‖A‖ <= 1`, given `δ = ‖[H, A]‖`,
//! and the square-root envelope γ₀.
//!
//! γ₀ is the pointwise minimum of
//! * the Taylor-polynomial lines of `1 − √(1 − x)` (valid for `√x` by reflection),
//!   `m_N = Σ_{n<=N} n c_n`, `b_N = 1 − Σ_{n<=N} c_n`;
//! * the tangent lines of `√x` at `a ∈ [1/4, 1]`, `δ/(2√a) + √a/2`;
//! * the constant 1.

use std::fmt;
use std::sync::Arc;

use crate::envelope::{BoundCurve, BoundLine, LineFamily, Provenance};
use crate::error::{Error, Result};
use crate::lab::{hermitian_eigen, DenseMatrix};

/// `γ₀` lives on `δ ∈ (0, 1]`; larger δ is clamped.
pub const POSITIVE_DELTA_MAX: f64 = 1.0;
pub const DEFAULT_PEDERSEN_DEGREE: usize = 100_000;
pub const DEFAULT_TANGENT_GRID: usize = 1024;
pub const TANGENT_MIN: f64 = 0.25;
pub const TANGENT_MAX: f64 = 1.0;

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }

    /// `c - self`, keeping the low-order part.
    fn complement(&self, c: f64) -> f64 {
        (c - self.sum) - self.carry
    }
}

/// Coefficients `c_0..c_N` of a power series on `[0, 1]` with running sums.
#[derive(Clone, Debug)]
pub struct PowerSeries {
    coefficients: Vec<f64>,
    description: String,
    partial: Vec<CompensatedSum>,
    weighted: Vec<f64>,
}

impl PowerSeries {
    pub fn from_coefficients(description: impl Into<String>, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(
                "power series needs finite coefficients".into(),
            ));
        }
        let mut partial = Vec::with_capacity(coefficients.len());
        let mut weighted = Vec::with_capacity(coefficients.len());
        let mut s = CompensatedSum::default();
        let mut w = CompensatedSum::default();
        for (n, &c) in coefficients.iter().enumerate() {
            s.add(c);
            w.add((n as f64 * c).abs());
            partial.push(s);
            weighted.push(w.value());
        }
        Ok(Self {
            coefficients,
            description: description.into(),
            partial,
            weighted,
        })
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficient(&self, n: usize) -> f64 {
        self.coefficients.get(n).copied().unwrap_or(0.0)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// `Σ_{n<=N} c_n`.
    pub fn partial_sum(&self, n: usize) -> f64 {
        self.partial[n.min(self.degree())].value()
    }

    /// `Σ_{n<=N} |n c_n|`.
    pub fn weighted_sum(&self, n: usize) -> f64 {
        self.weighted[n.min(self.degree())]
    }

    /// `1 − Σ_{n<=N} c_n` with the compensation term kept.
    fn unit_complement(&self, n: usize) -> f64 {
        self.partial[n.min(self.degree())].complement(1.0)
    }

    /// Split `f = g_N + h` where `g_N` is this series truncated at `N`; the caller
    /// supplies `h_osc = 2 min_λ ‖h − λ‖∞`.
    pub fn line(&self, degree: usize, h_osc: f64) -> Result<BoundLine> {
        BoundLine::new(
            self.weighted_sum(degree),
            h_osc,
            POSITIVE_DELTA_MAX,
            Provenance::PowerSeries { degree },
        )
    }
}

pub fn power_series_line(g: &PowerSeries, degree: usize, h_osc: f64) -> Result<BoundLine> {
    g.line(degree, h_osc)
}

/// Taylor coefficients of `1 − √(1 − x)` through degree `degree`, by the ratio
/// `c_{n+1}/c_n = (2n − 1)/(2n + 2)`.
pub fn sqrt_series(degree: usize) -> Result<PowerSeries> {
    if degree < 1 {
        return Err(Error::InvalidArgument("sqrt series needs N >= 1".into()));
    }
    let mut c = Vec::with_capacity(degree + 1);
    c.push(0.0);
    c.push(0.5);
    for n in 1..degree {
        let next = c[n] * (2 * n - 1) as f64 / (2 * n + 2) as f64;
        c.push(next);
    }
    PowerSeries::from_coefficients("1 - sqrt(1 - x)", c)
}

/// The line from the degree-`N` Taylor polynomial of `1 − √(1 − x)`. Its remainder is
/// nonnegative and increasing on `[0, 1]`, so the intercept is the remainder at 1.
pub fn pedersen_line(series: &PowerSeries, degree: usize) -> Result<BoundLine> {
    if degree < 1 || degree > series.degree() {
        return Err(Error::InvalidArgument(format!(
            "Pedersen degree {degree} outside 1..={}",
            series.degree()
        )));
    }
    BoundLine::new(
        series.weighted_sum(degree),
        series.unit_complement(degree),
        POSITIVE_DELTA_MAX,
        Provenance::Pedersen { degree },
    )
}

/// Expansion point of a tangent line to `√x`; only `[1/4, 1]` keeps `min h = −√a/2`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct TangentParam(f64);

impl TangentParam {
    pub fn new(a: f64) -> Result<Self> {
        if (TANGENT_MIN..=TANGENT_MAX).contains(&a) {
            Ok(Self(a))
        } else {
            Err(Error::InvalidArgument(format!(
                "tangent point {a} outside [1/4, 1]"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn tangent_line(a: TangentParam) -> BoundLine {
    let r = a.0.sqrt();
    BoundLine::new(
        1.0 / (2.0 * r),
        r / 2.0,
        POSITIVE_DELTA_MAX,
        Provenance::Tangent { a: a.0 },
    )
    .expect("tangent parameters are positive")
}

fn tangent_family() -> LineFamily {
    Arc::new(|delta: f64| {
        // over a ∈ [1/4, 1] the tangent value at δ is minimized at a = clamp(δ)
        let a = delta.clamp(TANGENT_MIN, TANGENT_MAX);
        Some(tangent_line(TangentParam(a)))
    })
}

/// Range of `√x` on `[0, 1]`.
fn range_cap() -> BoundLine {
    BoundLine::new(0.0, 1.0, POSITIVE_DELTA_MAX, Provenance::Range).expect("valid cap")
}

fn pedersen_lines(series: &PowerSeries, n_max: usize) -> Result<Vec<BoundLine>> {
    (1..=n_max).map(|n| pedersen_line(series, n)).collect()
}

/// The envelope of Pedersen lines `1..=n_max`, tangent lines on a uniform `a_grid`
/// over `[1/4, 1]`, the per-query optimal tangent, and the cap 1.
pub fn gamma0(n_max: usize, a_grid: usize) -> Result<BoundCurve> {
    if n_max < 1 || a_grid < 2 {
        return Err(Error::InvalidArgument(
            "gamma0 needs N_max >= 1 and a_grid >= 2".into(),
        ));
    }
    let series = sqrt_series(n_max)?;
    let mut lines = pedersen_lines(&series, n_max)?;
    for k in 0..a_grid {
        let a = if k + 1 == a_grid {
            TANGENT_MAX
        } else {
            TANGENT_MIN + (TANGENT_MAX - TANGENT_MIN) * k as f64 / (a_grid - 1) as f64
        };
        lines.push(tangent_line(TangentParam(a)));
    }
    lines.push(range_cap());
    Ok(BoundCurve::new(lines, POSITIVE_DELTA_MAX)?.with_family(tangent_family()))
}

/// Pedersen lines only.
pub fn pedersen_curve(n_max: usize) -> Result<BoundCurve> {
    let series = sqrt_series(n_max)?;
    BoundCurve::new(pedersen_lines(&series, n_max)?, POSITIVE_DELTA_MAX)
}

/// A continuous function on `[0, 1]`.
#[derive(Clone)]
pub struct UnitFunction {
    name: String,
    rule: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for UnitFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitFunction({})", self.name)
    }
}

impl UnitFunction {
    pub fn new(name: impl Into<String>, rule: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            rule: Arc::new(rule),
        }
    }

    pub fn sqrt() -> Self {
        Self::new("sqrt", |x: f64| x.max(0.0).sqrt())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        (self.rule)(x)
    }
}

/// `f₂(x) = 1 − f₁(1 − x)`; commutator moduli of `f₁` and `f₂` coincide.
pub fn reflect_function(f: &UnitFunction) -> UnitFunction {
    let inner = f.rule.clone();
    UnitFunction::new(format!("reflect({})", f.name), move |x| 1.0 - inner(1.0 - x))
}

/// `I − H` for a positive contraction `H`.
pub fn reflect_instance(h: &DenseMatrix) -> Result<DenseMatrix> {
    let (eigs, _) = hermitian_eigen(h)?;
    for &e in &eigs {
        if !(-1e-10..=1.0 + 1e-10).contains(&e) {
            return Err(Error::SpectrumOutOfRange(e));
        }
    }
    Ok(&DenseMatrix::identity(h.dim())? - h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn series_first_terms() {
        let s = sqrt_series(4).unwrap();
        assert_eq!(s.coefficient(0), 0.0);
        assert_eq!(s.coefficient(1), 0.5);
        assert_eq!(s.coefficient(2), 0.125);
        assert_eq!(s.coefficient(3), 0.0625);
        assert_eq!(s.coefficient(4), 5.0 / 128.0);
        assert!(sqrt_series(0).is_err());
    }

    #[test]
    fn series_ratio_and_positivity() {
        let s = sqrt_series(5000).unwrap();
        for n in 1..5000 {
            let c = s.coefficient(n);
            assert!(c > 0.0);
            let r = s.coefficient(n + 1) / c;
            let want = (2 * n - 1) as f64 / (2 * n + 2) as f64;
            assert!((r - want).abs() <= 1e-15 * want);
            assert!(s.partial_sum(n + 1) > s.partial_sum(n));
        }
        assert!(s.partial_sum(5000) < 1.0);
    }

    #[test]
    fn power_series_line_examples() {
        let id = PowerSeries::from_coefficients("x", vec![0.0, 1.0]).unwrap();
        let l = power_series_line(&id, 1, 0.0).unwrap();
        assert_eq!((l.slope, l.intercept), (1.0, 0.0));
        let zero = PowerSeries::from_coefficients("0", vec![0.0]).unwrap();
        let l = power_series_line(&zero, 0, 1.0).unwrap();
        assert_eq!((l.slope, l.intercept), (0.0, 1.0));
        let s = sqrt_series(1).unwrap();
        let l = power_series_line(&s, 1, 0.5).unwrap();
        assert_eq!((l.slope, l.intercept), (0.5, 0.5));
    }

    #[test]
    fn pedersen_examples() {
        let s = sqrt_series(10).unwrap();
        let l1 = pedersen_line(&s, 1).unwrap();
        assert_eq!((l1.slope, l1.intercept), (0.5, 0.5));
        let l2 = pedersen_line(&s, 2).unwrap();
        assert_eq!((l2.slope, l2.intercept), (0.75, 0.375));
        assert!(pedersen_line(&s, 0).is_err());
        assert!(pedersen_line(&s, 11).is_err());
    }

    #[test]
    fn pedersen_monotone_in_degree() {
        let s = sqrt_series(2000).unwrap();
        let lines: Vec<_> = (1..=2000).map(|n| pedersen_line(&s, n).unwrap()).collect();
        for w in lines.windows(2) {
            assert!(w[1].slope > w[0].slope);
            assert!(w[1].intercept < w[0].intercept);
        }
    }

    #[test]
    fn tangent_examples() {
        let l = tangent_line(TangentParam::new(1.0).unwrap());
        assert_eq!((l.slope, l.intercept), (0.5, 0.5));
        let l = tangent_line(TangentParam::new(0.25).unwrap());
        assert_eq!((l.slope, l.intercept), (1.0, 0.25));
        for a in [0.25, 0.3, 0.5, 0.77, 1.0] {
            let l = tangent_line(TangentParam::new(a).unwrap());
            assert!((l.evaluate(a) - a.sqrt()).abs() < 1e-15);
        }
        assert!(TangentParam::new(0.2).is_err());
        assert!(TangentParam::new(1.01).is_err());
    }

    #[test]
    fn gamma0_pinch_and_clamp() {
        let g = gamma0(1000, 64).unwrap();
        assert!((g.evaluate(0.25) - 0.5).abs() < 1e-12);
        assert!((g.evaluate(1.0) - 1.0).abs() < 1e-12);
        let e = g.evaluate_detailed(1.7);
        assert!(e.clamped && (e.value - 1.0).abs() < 1e-12);
        assert!(gamma0(0, 4).is_err());
        assert!(gamma0(3, 1).is_err());
    }

    #[test]
    fn reflection_examples() {
        let f2 = reflect_function(&UnitFunction::sqrt());
        for x in [0.0, 0.1, 0.5, 0.9, 1.0] {
            assert!((f2.evaluate(x) - (1.0 - (1.0 - x).sqrt())).abs() < 1e-15);
        }
        let back = reflect_function(&f2);
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            assert!((back.evaluate(x) - x.sqrt()).abs() <= 1e-15);
        }
        let h = DenseMatrix::from_real_diagonal(&[0.0, 1.0]).unwrap();
        let r = reflect_instance(&h).unwrap();
        assert_eq!(r.get(0, 0), Complex64::new(1.0, 0.0));
        assert_eq!(r.get(1, 1), Complex64::new(0.0, 0.0));
        let bad = DenseMatrix::from_real_diagonal(&[0.0, 1.5]).unwrap();
        assert!(matches!(reflect_instance(&bad), Err(Error::SpectrumOutOfRange(_))));
    }
}
