//! Seeded random sweeps that compare measured commutator norms against a bound curve.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::calculus::{hermitian_calculus, unitary_calculus};
use super::dense::{commutator_norm, DenseMatrix};
use super::random::{ginibre, haar_unitary, random_contraction, random_positive_contraction, record_seed, rng_for, SpectrumMode};
use super::ViolationReport;
use crate::envelope::BoundCurve;
use crate::error::{Error, Result};
use crate::periodic::{PeriodicFunction, TrigPolynomial};
use crate::positive::UnitFunction;

pub const VIOLATION_TOL: f64 = 1e-8;
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub seed: u64,
    pub index: u64,
    pub dim: usize,
    pub delta: f64,
    pub measured: f64,
    pub bound: Option<f64>,
}

impl SampleRecord {
    /// `bound − measured`, when a bound is attached.
    pub fn margin(&self) -> Option<f64> {
        self.bound.map(|b| b - self.measured)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Unitary,
    PositiveContraction,
}

/// The function applied to `X`, matching its role.
#[derive(Clone, Debug)]
pub enum Target {
    Circle(PeriodicFunction),
    Unit(UnitFunction),
}

impl Target {
    pub fn role(&self) -> Role {
        match self {
            Target::Circle(_) => Role::Unitary,
            Target::Unit(_) => Role::PositiveContraction,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Target::Circle(f) => f.name(),
            Target::Unit(f) => f.name(),
        }
    }

    pub fn apply(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        match self {
            Target::Circle(f) => unitary_calculus(f, x),
            Target::Unit(f) => hermitian_calculus(f, x),
        }
    }
}

/// How the contraction `A` is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContractionFamily {
    /// Scaled Ginibre.
    Generic,
    /// `W/‖W‖ + ε G/‖G‖` with `W` a polynomial in `X`, `ε` log-uniform in
    /// `[1e−4, 1]`, rescaled to a contraction. Populates small `δ`.
    NearCommuting,
    /// A polynomial in `X`, normalized; commutes with `X` up to roundoff.
    Commuting,
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub count: u64,
    pub dim_min: usize,
    pub dim_max: usize,
    pub seed: u64,
    /// Cycled by index for positive contractions.
    pub spectrum_modes: Vec<SpectrumMode>,
    /// Cycled by index.
    pub families: Vec<ContractionFamily>,
}

impl SweepSpec {
    pub fn new(count: u64, dim_min: usize, dim_max: usize, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidArgument("sample count must be at least 1".into()));
        }
        if dim_min < 2 || dim_min > dim_max || dim_max > super::dense::MAX_DIM {
            return Err(Error::InvalidArgument(format!(
                "dimension range {dim_min}-{dim_max} must lie in 2-{}",
                super::dense::MAX_DIM
            )));
        }
        Ok(Self {
            count,
            dim_min,
            dim_max,
            seed,
            spectrum_modes: vec![SpectrumMode::Uniform, SpectrumMode::Atoms],
            families: vec![ContractionFamily::Generic, ContractionFamily::NearCommuting],
        })
    }

    pub fn with_spectrum_modes(mut self, modes: Vec<SpectrumMode>) -> Self {
        assert!(!modes.is_empty());
        self.spectrum_modes = modes;
        self
    }

    pub fn with_families(mut self, families: Vec<ContractionFamily>) -> Self {
        assert!(!families.is_empty());
        self.families = families;
        self
    }
}

#[derive(Clone, Debug)]
pub struct InstancePair {
    pub x: DenseMatrix,
    pub role: Role,
    pub a: DenseMatrix,
    pub seed: u64,
    pub dim: usize,
}

/// `Σ c_k X^k`, `k ≤ 3`, with complex Gaussian weights, normalized to norm 1.
fn polynomial_in<R: Rng>(x: &DenseMatrix, rng: &mut R) -> DenseMatrix {
    let n = x.dim();
    let id = DenseMatrix::identity(n).expect("valid dim");
    let weights = ginibre(2, rng);
    let mut power = id.clone();
    let mut w = DenseMatrix::zeros(n).expect("valid dim");
    for &c in weights.entries() {
        w = &w + &power.scale(c);
        power = &power * x;
    }
    let norm = w.op_norm();
    if norm > 0.0 {
        w.scale_real(1.0 / norm)
    } else {
        id
    }
}

fn into_contraction(m: DenseMatrix) -> DenseMatrix {
    let norm = m.op_norm();
    if norm > 1.0 {
        m.scale_real(1.0 / norm)
    } else {
        m
    }
}

/// Deterministic instance for `(spec.seed, index)`.
pub fn instance(spec: &SweepSpec, role: Role, index: u64) -> InstancePair {
    let mut rng = rng_for(spec.seed, index);
    let dim = rng.gen_range(spec.dim_min..=spec.dim_max);
    let x = match role {
        Role::Unitary => haar_unitary(dim, &mut rng),
        Role::PositiveContraction => {
            let mode = spec.spectrum_modes[(index % spec.spectrum_modes.len() as u64) as usize];
            random_positive_contraction(dim, mode, &mut rng)
        }
    };
    let family = spec.families[(index % spec.families.len() as u64) as usize];
    let a = match family {
        ContractionFamily::Generic => random_contraction(dim, &mut rng),
        ContractionFamily::Commuting => polynomial_in(&x, &mut rng),
        ContractionFamily::NearCommuting => {
            let w = polynomial_in(&x, &mut rng);
            let g = ginibre(dim, &mut rng);
            let eps = 10f64.powf(rng.gen_range(-4.0..=0.0));
            let g = g.scale_real(eps / g.op_norm());
            into_contraction(&w + &g)
        }
    };
    InstancePair {
        x,
        role,
        a,
        seed: record_seed(spec.seed, index),
        dim,
    }
}

fn measure(target: &Target, pair: &InstancePair, index: u64, curve: Option<&BoundCurve>) -> Result<SampleRecord> {
    let delta = commutator_norm(&pair.x, &pair.a)?;
    let fx = target.apply(&pair.x)?;
    let measured = commutator_norm(&fx, &pair.a)?;
    Ok(SampleRecord {
        seed: pair.seed,
        index,
        dim: pair.dim,
        delta,
        measured,
        bound: curve.map(|c| c.evaluate(delta)),
    })
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub records: Vec<SampleRecord>,
    /// Smallest margin and the record it came from.
    pub min_margin: f64,
    pub min_margin_index: u64,
    pub min_margin_seed: u64,
}

/// Sample `spec.count` instances in parallel, in index order. The first record
/// whose margin falls below `−VIOLATION_TOL` aborts the sweep with a replayable
/// report.
pub fn sample_sweep(spec: &SweepSpec, target: &Target, curve: &BoundCurve) -> Result<SweepOutcome> {
    let role = target.role();
    let records: Vec<SampleRecord> = (0..spec.count)
        .into_par_iter()
        .map(|i| measure(target, &instance(spec, role, i), i, Some(curve)))
        .collect::<Result<_>>()?;

    if let Some(bad) = records.iter().find(|r| r.margin().unwrap_or(0.0) < -VIOLATION_TOL) {
        let pair = instance(spec, role, bad.index);
        let margin = bad.margin().unwrap_or(0.0);
        return Err(Error::Violation {
            seed: spec.seed,
            index: bad.index,
            margin,
            report: Box::new(ViolationReport {
                schema_version: REPORT_SCHEMA_VERSION,
                base_seed: spec.seed,
                record_seed: pair.seed,
                index: bad.index,
                dim: pair.dim,
                role,
                function: target.name().to_string(),
                delta: bad.delta,
                measured: bad.measured,
                bound: bad.bound.unwrap_or(f64::NAN),
                margin,
                x: pair.x,
                a: pair.a,
            }),
        });
    }

    let (mut min_margin, mut min_index) = (f64::INFINITY, 0);
    for r in &records {
        let m = r.margin().unwrap_or(f64::INFINITY);
        if m < min_margin {
            min_margin = m;
            min_index = r.index;
        }
    }
    Ok(SweepOutcome {
        min_margin_seed: record_seed(spec.seed, min_index),
        records,
        min_margin,
        min_margin_index: min_index,
    })
}

/// Pairs with `A` a polynomial in `X`; every measured value should be roundoff.
pub fn commuting_smoke(target: &Target, count: u64, seed: u64) -> Result<Vec<SampleRecord>> {
    let spec = SweepSpec::new(count, 2, 8, seed)?.with_families(vec![ContractionFamily::Commuting]);
    let role = target.role();
    (0..count)
        .into_par_iter()
        .map(|i| measure(target, &instance(&spec, role, i), i, None))
        .collect()
}

/// Worst slack of `‖[g[V], A]‖ <= ‖g′‖_F ‖[V, A]‖` over random trigonometric
/// polynomials `g` of degree 1 to 6, Haar `V` and contractions `A`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FolkTrials {
    pub trials: u64,
    pub min_margin: f64,
    pub min_margin_index: u64,
}

pub fn folk_trials(count: u64, dim_min: usize, dim_max: usize, seed: u64) -> Result<FolkTrials> {
    let spec = SweepSpec::new(count, dim_min, dim_max, seed)?;
    let margins: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|i| {
            let pair = instance(&spec, Role::Unitary, i);
            // separate stream for the polynomial so the pair matches sweep instances
            let mut rng = rng_for(seed ^ 0xF01C, i);
            let degree = rng.gen_range(1..=6i64);
            let coeffs: Vec<Complex64> = (-degree..=degree)
                .map(|_| Complex64::new(rng.sample(rand_distr::StandardNormal), rng.sample(rand_distr::StandardNormal)))
                .collect();
            let g = TrigPolynomial::from_symmetric(coeffs)?;
            let gv = unitary_calculus(&g.to_function("g"), &pair.x)?;
            let lhs = commutator_norm(&gv, &pair.a)?;
            let rhs = g.derivative_fourier_norm() * commutator_norm(&pair.x, &pair.a)?;
            Ok(rhs - lhs)
        })
        .collect::<Result<_>>()?;
    let (mut min_margin, mut min_margin_index) = (f64::INFINITY, 0);
    for (i, &m) in margins.iter().enumerate() {
        if m < min_margin {
            min_margin = m;
            min_margin_index = i as u64;
        }
    }
    Ok(FolkTrials {
        trials: count,
        min_margin,
        min_margin_index,
    })
}

/// Record for an explicit pair, without a bound.
pub fn measure_pair(target: &Target, x: &DenseMatrix, a: &DenseMatrix) -> Result<SampleRecord> {
    let pair = InstancePair {
        x: x.clone(),
        role: target.role(),
        a: a.clone(),
        seed: 0,
        dim: x.dim(),
    };
    measure(target, &pair, 0, None)
}

/// `diag(0, δ)` against the swap: `δ` in, `√δ` out for the square root.
pub fn diagonal_witness(delta: f64) -> (DenseMatrix, DenseMatrix) {
    let h = DenseMatrix::from_diagonal(&[Complex64::new(0.0, 0.0), Complex64::new(delta, 0.0)]).expect("2×2");
    (h, DenseMatrix::swap(2).expect("2×2"))
}
