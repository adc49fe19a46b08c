//! 2π-periodic functions, their Fourier coefficients, and the builtin examples.
//!
//! Coefficients follow the complex-exponential convention
//! `f(x) = Σ a_n e^{inx}`, so a real cosine series `Σ b_n cos(nx)` has
//! `a_{±n} = b_n / 2`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub const DEFAULT_QUADRATURE_SAMPLES: usize = 1 << 14;
pub const MAX_QUADRATURE_SAMPLES: usize = 1 << 22;
pub const QUADRATURE_TARGET: f64 = 1e-10;
pub const DEFAULT_EXTENT_GRID: usize = 1 << 16;
pub const MIN_EXTENT_GRID: usize = 1024;

type Rule = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;
type CoefficientFn = Arc<dyn Fn(i64) -> Complex64 + Send + Sync>;

/// Reduce an angle into `[-π, π]`. Angles already in range are returned untouched.
pub fn reduce_angle(x: f64) -> f64 {
    if (-PI..=PI).contains(&x) {
        return x;
    }
    let r = x - TAU * (x / TAU).round();
    r.clamp(-PI, PI)
}

/// Upper bound `|a_n| <= constant * |n|^(-exponent)` for `n != 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoefficientDecay {
    pub constant: f64,
    pub exponent: f64,
}

/// Exact knowledge about a function's Fourier coefficients.
#[derive(Clone)]
pub struct CoefficientRule {
    rule: CoefficientFn,
    /// Largest `|n|` with a nonzero coefficient, when the series is finite.
    pub support: Option<u64>,
    /// Closed form of `Σ |a_n|` over all `n`.
    pub abs_sum: Option<f64>,
    pub decay: Option<CoefficientDecay>,
}

impl CoefficientRule {
    pub fn new(rule: impl Fn(i64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self {
            rule: Arc::new(rule),
            support: None,
            abs_sum: None,
            decay: None,
        }
    }

    pub fn coefficient(&self, n: i64) -> Complex64 {
        match self.support {
            Some(s) if n.unsigned_abs() > s => Complex64::new(0.0, 0.0),
            _ => (self.rule)(n),
        }
    }
}

/// A continuous 2π-periodic function evaluated on `[-π, π]`.
#[derive(Clone)]
pub struct PeriodicFunction {
    name: String,
    rule: Rule,
    real_valued: bool,
    coefficients: Option<CoefficientRule>,
}

impl fmt::Debug for PeriodicFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PeriodicFunction")
            .field("name", &self.name)
            .field("real_valued", &self.real_valued)
            .field("exact_coefficients", &self.coefficients.is_some())
            .finish()
    }
}

impl PeriodicFunction {
    pub fn new(
        name: impl Into<String>,
        real_valued: bool,
        rule: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            rule: Arc::new(rule),
            real_valued,
            coefficients: None,
        }
    }

    /// Real-valued function from a real rule.
    pub fn real(name: impl Into<String>, rule: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(name, true, move |x| Complex64::new(rule(x), 0.0))
    }

    pub fn with_coefficients(mut self, coefficients: CoefficientRule) -> Self {
        self.coefficients = Some(coefficients);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_real_valued(&self) -> bool {
        self.real_valued
    }

    pub fn coefficient_rule(&self) -> Option<&CoefficientRule> {
        self.coefficients.as_ref()
    }

    pub fn evaluate(&self, x: f64) -> Complex64 {
        (self.rule)(reduce_angle(x))
    }

    /// Real part of `f(x)`; meaningful for real-valued functions.
    pub fn evaluate_real(&self, x: f64) -> f64 {
        self.evaluate(x).re
    }

    /// `self - other`, pointwise. Coefficient knowledge is dropped unless both sides
    /// have finite exact series.
    pub fn minus(&self, other: &PeriodicFunction) -> PeriodicFunction {
        let (a, b) = (self.rule.clone(), other.rule.clone());
        let mut out = PeriodicFunction::new(
            format!("{}-{}", self.name, other.name),
            self.real_valued && other.real_valued,
            move |x| a(x) - b(x),
        );
        if let (Some(ca), Some(cb)) = (&self.coefficients, &other.coefficients) {
            if let (Some(sa), Some(sb)) = (ca.support, cb.support) {
                let (ca, cb) = (ca.clone(), cb.clone());
                let mut rule = CoefficientRule::new(move |n| ca.coefficient(n) - cb.coefficient(n));
                rule.support = Some(sa.max(sb));
                out.coefficients = Some(rule);
            }
        }
        out
    }

    /// `self + c` for a complex constant `c`.
    pub fn plus_constant(&self, c: Complex64) -> PeriodicFunction {
        let a = self.rule.clone();
        let mut out = PeriodicFunction::new(
            format!("{}+const", self.name),
            self.real_valued && c.im == 0.0,
            move |x| a(x) + c,
        );
        if let Some(cr) = &self.coefficients {
            let inner = cr.clone();
            let mut rule = CoefficientRule::new(move |n| {
                if n == 0 {
                    inner.coefficient(0) + c
                } else {
                    inner.coefficient(n)
                }
            });
            rule.support = cr.support;
            rule.decay = cr.decay;
            out.coefficients = Some(rule);
        }
        out
    }
}

/// Finite Fourier series `Σ_{|n|<=N} a_n e^{inx}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPolynomial {
    /// `coeffs[n + N]` holds `a_n`.
    coeffs: Vec<Complex64>,
}

impl TrigPolynomial {
    pub fn zero() -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0)],
        }
    }

    /// Build from `a_{-N}, ..., a_N`.
    pub fn from_symmetric(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::InvalidArgument(
                "trig polynomial needs 2N+1 coefficients".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    pub fn from_map(map: &BTreeMap<i64, Complex64>) -> Self {
        let degree = map.keys().map(|n| n.unsigned_abs()).max().unwrap_or(0) as usize;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * degree + 1];
        for (&n, &a) in map {
            coeffs[(n + degree as i64) as usize] += a;
        }
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() / 2
    }

    pub fn coefficient(&self, n: i64) -> Complex64 {
        let d = self.degree() as i64;
        if n.abs() > d {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(n + d) as usize]
        }
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let d = self.degree() as i64;
        self.coeffs.iter().enumerate().map(move |(i, &a)| (i as i64 - d, a))
    }

    /// Direct summation of `Σ a_n e^{inx}`.
    pub fn evaluate(&self, x: f64) -> Complex64 {
        let x = reduce_angle(x);
        self.coefficients()
            .map(|(n, a)| a * Complex64::from_polar(1.0, n as f64 * x))
            .sum()
    }

    /// `a_{-n} = conj(a_n)` within `tol`.
    pub fn is_real_valued(&self, tol: f64) -> bool {
        self.coefficients()
            .all(|(n, a)| (a - self.coefficient(-n).conj()).norm() <= tol)
    }

    /// `‖p′‖_F = Σ |n a_n|`.
    pub fn derivative_fourier_norm(&self) -> f64 {
        self.coefficients().map(|(n, a)| (n as f64).abs() * a.norm()).sum()
    }

    /// `Σ |a_n|`.
    pub fn fourier_norm(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm()).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    pub fn to_function(&self, name: impl Into<String>) -> PeriodicFunction {
        let real = self.is_real_valued(1e-15);
        let p = self.clone();
        let q = self.clone();
        let mut rule = CoefficientRule::new(move |n| q.coefficient(n));
        rule.support = Some(self.degree() as u64);
        rule.abs_sum = Some(self.fourier_norm());
        if real {
            PeriodicFunction::new(name, true, move |x| Complex64::new(p.evaluate(x).re, 0.0))
        } else {
            PeriodicFunction::new(name, false, move |x| p.evaluate(x))
        }
        .with_coefficients(rule)
    }
}

/// Plain trapezoid estimate of `a_n` on `k` uniform samples starting at `-π`.
fn trapezoid_sum(f: &PeriodicFunction, n: i64, k: usize, start: usize, stride: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let k_i = k as i128;
    let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let mut j = start;
    while j < k {
        let x = -PI + TAU * j as f64 / k as f64;
        // e^{-in x_j} = (-1)^n e^{-2πi (n j mod k)/k}
        let m = ((n as i128) * (j as i128)).rem_euclid(k_i) as f64;
        let phase = Complex64::from_polar(sign, -TAU * m / k as f64);
        acc += f.evaluate(x) * phase;
        j += stride;
    }
    acc
}

/// Trapezoid-rule Fourier coefficient with successive doubling.
///
/// Starts at `samples` points and doubles until two consecutive estimates agree
/// within `target` or `MAX_QUADRATURE_SAMPLES` is reached.
pub fn quadrature_coefficient(
    f: &PeriodicFunction,
    n: i64,
    samples: usize,
    target: f64,
) -> Result<Complex64> {
    let mut k = samples.max(16).next_power_of_two();
    let mut sum = trapezoid_sum(f, n, k, 0, 1);
    let mut prev = sum / k as f64;
    loop {
        // The doubled grid reuses the old points; only odd indices are new.
        let k2 = 2 * k;
        sum += trapezoid_sum(f, n, k2, 1, 2);
        let next = sum / k2 as f64;
        let estimate = (next - prev).norm();
        if estimate <= target {
            return Ok(next);
        }
        if k2 >= MAX_QUADRATURE_SAMPLES {
            return Err(Error::Quadrature {
                n,
                target,
                estimate,
                samples: k2,
            });
        }
        k = k2;
        prev = next;
    }
}

/// `a_n = (1/2π) ∫ f(x) e^{-inx} dx`, exact when a coefficient rule is attached.
pub fn fourier_coefficient(f: &PeriodicFunction, n: i64) -> Result<Complex64> {
    match &f.coefficients {
        Some(rule) => Ok(rule.coefficient(n)),
        None => quadrature_coefficient(f, n, DEFAULT_QUADRATURE_SAMPLES, QUADRATURE_TARGET),
    }
}

/// Degree-`degree` Fourier partial sum.
pub fn truncate(f: &PeriodicFunction, degree: usize) -> Result<TrigPolynomial> {
    let d = degree as i64;
    let coeffs = (-d..=d)
        .map(|n| fourier_coefficient(f, n))
        .collect::<Result<Vec<_>>>()?;
    TrigPolynomial::from_symmetric(coeffs)
}

pub fn derivative_fourier_norm(p: &TrigPolynomial) -> f64 {
    p.derivative_fourier_norm()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extent {
    pub min: f64,
    pub max: f64,
    pub argmin: f64,
    pub argmax: f64,
}

impl Extent {
    pub fn oscillation(&self) -> f64 {
        self.max - self.min
    }
}

fn golden_max(g: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = g(x1);
    let mut f2 = g(x2);
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = g(x1);
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Grid extremes of a real periodic function, refined once by golden-section search
/// in the neighbouring cells of the best grid point.
pub(crate) fn real_extent_from_samples(
    samples: &[f64],
    eval: &dyn Fn(f64) -> f64,
) -> Extent {
    let g = samples.len();
    let h = TAU / g as f64;
    let (mut jmin, mut jmax) = (0, 0);
    for (j, &v) in samples.iter().enumerate() {
        if v < samples[jmin] {
            jmin = j;
        }
        if v > samples[jmax] {
            jmax = j;
        }
    }
    let xmax = -PI + h * jmax as f64;
    let xmin = -PI + h * jmin as f64;
    let (mut max, mut argmax) = (samples[jmax], xmax);
    let (rx, rv) = golden_max(eval, xmax - h, xmax + h);
    if rv > max {
        max = rv;
        argmax = reduce_angle(rx);
    }
    let (mut min, mut argmin) = (samples[jmin], xmin);
    let neg = |x: f64| -eval(x);
    let (rx, rv) = golden_max(&neg, xmin - h, xmin + h);
    if -rv < min {
        min = -rv;
        argmin = reduce_angle(rx);
    }
    Extent {
        min,
        max,
        argmin,
        argmax,
    }
}

pub(crate) fn grid(grid_size: usize) -> impl Iterator<Item = f64> + Clone {
    let h = TAU / grid_size as f64;
    (0..grid_size).map(move |j| -PI + h * j as f64)
}

/// Min and max of a real-valued function, certified to grid tolerance.
pub fn range_extent(f: &PeriodicFunction, grid_size: usize) -> Result<Extent> {
    if !f.is_real_valued() {
        return Err(Error::NotRealValued(f.name.clone()));
    }
    if grid_size < MIN_EXTENT_GRID {
        return Err(Error::InvalidArgument(format!(
            "extent grid {grid_size} below {MIN_EXTENT_GRID}"
        )));
    }
    let samples: Vec<f64> = grid(grid_size).map(|x| f.evaluate_real(x)).collect();
    Ok(real_extent_from_samples(&samples, &|x| f.evaluate_real(x)))
}

/// `min_λ ‖f − λ‖∞` on the grid: half the oscillation for real `f`, otherwise the
/// radius of the smallest disk enclosing the sampled values.
pub fn chebyshev_radius(f: &PeriodicFunction, grid_size: usize) -> Result<f64> {
    if grid_size < MIN_EXTENT_GRID {
        return Err(Error::InvalidArgument(format!(
            "extent grid {grid_size} below {MIN_EXTENT_GRID}"
        )));
    }
    if f.is_real_valued() {
        return Ok(range_extent(f, grid_size)?.oscillation() / 2.0);
    }
    let pts: Vec<Complex64> = grid(grid_size).map(|x| f.evaluate(x)).collect();
    Ok(enclosing_disk(pts).1)
}

/// Smallest enclosing disk of a point set (randomized incremental construction
/// with a fixed shuffle seed).
pub fn enclosing_disk(mut pts: Vec<Complex64>) -> (Complex64, f64) {
    if pts.is_empty() {
        return (Complex64::new(0.0, 0.0), 0.0);
    }
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5eed));
    let inside = |c: Complex64, r: f64, p: Complex64| (p - c).norm() <= r * (1.0 + 1e-12) + 1e-15;
    let mut c = pts[0];
    let mut r = 0.0;
    for i in 1..pts.len() {
        if inside(c, r, pts[i]) {
            continue;
        }
        c = pts[i];
        r = 0.0;
        for j in 0..i {
            if inside(c, r, pts[j]) {
                continue;
            }
            c = (pts[i] + pts[j]) / 2.0;
            r = (pts[i] - pts[j]).norm() / 2.0;
            for k in 0..j {
                if inside(c, r, pts[k]) {
                    continue;
                }
                (c, r) = circumcircle(pts[i], pts[j], pts[k]);
            }
        }
    }
    (c, r)
}

fn circumcircle(a: Complex64, b: Complex64, c: Complex64) -> (Complex64, f64) {
    let (bx, by) = (b.re - a.re, b.im - a.im);
    let (cx, cy) = (c.re - a.re, c.im - a.im);
    let d = 2.0 * (bx * cy - by * cx);
    if d.abs() < 1e-300 {
        // collinear: the diameter of the farthest pair
        let pairs = [(a, b), (a, c), (b, c)];
        let (p, q) = pairs
            .into_iter()
            .max_by(|x, y| (x.0 - x.1).norm().total_cmp(&(y.0 - y.1).norm()))
            .unwrap();
        return ((p + q) / 2.0, (p - q).norm() / 2.0);
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    let center = Complex64::new(a.re + ux, a.im + uy);
    (center, (ux * ux + uy * uy).sqrt())
}

/// Bessel function `J_1`, from the periodic integral `(1/2π)∫ cos(θ − z sin θ) dθ`
/// summed with enough trapezoid nodes to push aliasing below double precision.
pub fn bessel_j1(z: f64) -> f64 {
    let az = z.abs();
    let m = (az + 20.0 * az.cbrt() + 64.0).ceil() as usize;
    let h = TAU / m as f64;
    let s: f64 = (0..m)
        .map(|j| {
            let t = h * j as f64;
            (t - z * t.sin()).cos()
        })
        .sum();
    s / m as f64
}

/// Triangle wave: `1 − (2/π)|x|` on `[-π, π]`.
pub fn builtin_triangle() -> PeriodicFunction {
    let mut rule = CoefficientRule::new(|n| {
        if n.rem_euclid(2) == 1 {
            Complex64::new(4.0 / (PI * PI * (n * n) as f64), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    // all coefficients are nonnegative, so Σ|a_n| = f(0) = 1
    rule.abs_sum = Some(1.0);
    rule.decay = Some(CoefficientDecay {
        constant: 4.0 / (PI * PI),
        exponent: 2.0,
    });
    PeriodicFunction::real("triangle", |x| 1.0 - 2.0 / PI * x.abs()).with_coefficients(rule)
}

/// Landau's bound `|J_ν(x)| <= c x^{-1/3}`, rounded up.
const LANDAU_BESSEL: f64 = 0.7858;

/// Bump: `sqrt(1 − 4x²/π²)` on `[-π/2, π/2]`, zero elsewhere.
pub fn builtin_bump() -> PeriodicFunction {
    let mut rule = CoefficientRule::new(|n| {
        if n == 0 {
            Complex64::new(PI / 8.0, 0.0)
        } else {
            let n = n.abs() as f64;
            Complex64::new(bessel_j1(n * PI / 2.0) / (2.0 * n), 0.0)
        }
    });
    rule.decay = Some(CoefficientDecay {
        constant: LANDAU_BESSEL / 2.0 * (PI / 2.0).powf(-1.0 / 3.0),
        exponent: 4.0 / 3.0,
    });
    PeriodicFunction::real("bump", |x| {
        if x.abs() <= PI / 2.0 {
            let t = 2.0 * x / PI;
            (1.0 - t * t).max(0.0).sqrt()
        } else {
            0.0
        }
    })
    .with_coefficients(rule)
}

pub fn from_coefficients(map: &BTreeMap<i64, Complex64>) -> PeriodicFunction {
    TrigPolynomial::from_map(map).to_function("coefficients")
}

/// `e^{inx}`.
pub fn exponential(n: i64) -> PeriodicFunction {
    let mut map = BTreeMap::new();
    map.insert(n, Complex64::new(1.0, 0.0));
    let mut f = from_coefficients(&map);
    f.name = format!("exp{n}");
    f
}

pub fn constant(c: f64) -> PeriodicFunction {
    let mut map = BTreeMap::new();
    map.insert(0, Complex64::new(c, 0.0));
    let mut f = from_coefficients(&map);
    f.name = "constant".into();
    f
}

pub fn cosine() -> PeriodicFunction {
    let mut map = BTreeMap::new();
    map.insert(-1, Complex64::new(0.5, 0.0));
    map.insert(1, Complex64::new(0.5, 0.0));
    let mut f = from_coefficients(&map);
    f.name = "cos".into();
    f
}

/// Parse `{"n": [re, im], ...}`.
pub fn coefficients_from_json(text: &str) -> Result<BTreeMap<i64, Complex64>> {
    let raw: BTreeMap<String, [f64; 2]> = serde_json::from_str(text)?;
    raw.into_iter()
        .map(|(k, [re, im])| {
            let n = k
                .trim()
                .parse::<i64>()
                .map_err(|_| Error::InvalidArgument(format!("bad coefficient index `{k}`")))?;
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite coefficient at {n}")));
            }
            Ok((n, Complex64::new(re, im)))
        })
        .collect()
}

pub fn coefficients_to_json(map: &BTreeMap<i64, Complex64>) -> String {
    let raw: BTreeMap<String, [f64; 2]> = map
        .iter()
        .map(|(n, a)| (n.to_string(), [a.re, a.im]))
        .collect();
    serde_json::to_string(&raw).expect("coefficient map serializes")
}
