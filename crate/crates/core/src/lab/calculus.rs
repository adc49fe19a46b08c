//! Functional calculus on unitaries and positive contractions, plus the 2×2 block
//! and diagonal constructions used to move between scalar and operator bounds.

use num_complex::Complex64;

use super::dense::{commutator, DenseMatrix};
use super::eigen::{hermitian_eigen, unitary_eigen, RESIDUAL_LIMIT};
use super::sweep::SampleRecord;
use crate::error::{Error, Result};
use crate::periodic::PeriodicFunction;
use crate::positive::UnitFunction;

pub const SPECTRUM_TOL: f64 = 1e-10;
/// Eigenvalues this close to 0 or 1 (relative to `max(1, ‖H‖)`) are taken to be
/// the endpoint. Jacobi only resolves them to roundoff, and functions such as `√x`
/// amplify a `1e−16` perturbation at 0 to `1e−8`.
pub const ENDPOINT_SNAP: f64 = 64.0 * f64::EPSILON;

/// `f[V] = Q diag(f(φ)) Q*` where `V = Q diag(e^{iφ}) Q*`, `φ ∈ (−π, π]`.
pub fn unitary_calculus(f: &PeriodicFunction, v: &DenseMatrix) -> Result<DenseMatrix> {
    let e = unitary_eigen(v)?;
    let d: Vec<Complex64> = e.phases.iter().map(|&p| f.evaluate(p)).collect();
    Ok(DenseMatrix::reassemble(&e.vectors, &d))
}

/// `f(H)` for a Hermitian `H` with spectrum in `[0, 1]` up to [`SPECTRUM_TOL`];
/// eigenvalues within the tolerance are clamped into the interval and those within
/// [`ENDPOINT_SNAP`] of an endpoint are moved onto it.
pub fn hermitian_calculus(f: &UnitFunction, h: &DenseMatrix) -> Result<DenseMatrix> {
    let (eigs, q) = hermitian_eigen(h)?;
    let snap = ENDPOINT_SNAP * eigs.iter().fold(1.0f64, |m, e| m.max(e.abs()));
    let mut d = Vec::with_capacity(eigs.len());
    for &e in &eigs {
        if !(-SPECTRUM_TOL..=1.0 + SPECTRUM_TOL).contains(&e) {
            return Err(Error::SpectrumOutOfRange(e));
        }
        let x = if e <= snap {
            0.0
        } else if e >= 1.0 - snap {
            1.0
        } else {
            e
        };
        d.push(Complex64::new(f.evaluate(x), 0.0));
    }
    let check: Vec<Complex64> = eigs.iter().map(|&e| Complex64::new(e, 0.0)).collect();
    let residual = (h - &DenseMatrix::reassemble(&q, &check)).frobenius_norm();
    if residual > RESIDUAL_LIMIT {
        return Err(Error::DecompositionResidual {
            residual,
            limit: RESIDUAL_LIMIT,
        });
    }
    Ok(DenseMatrix::reassemble(&q, &d))
}

/// `S = [[0, I], [I, 0]]` and `T = [[0, V], [V₁, 0]]`, so `‖[S, T]‖ = ‖V − V₁‖`.
pub fn block_pair(v: &DenseMatrix, v1: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    if v.dim() != v1.dim() {
        return Err(Error::DimensionMismatch(v.dim(), v1.dim()));
    }
    let s = DenseMatrix::swap(2 * v.dim())?;
    let t = DenseMatrix::off_diagonal_blocks(v, v1)?;
    Ok((s, t))
}

/// Both sides of the two block-commutator identities for a unitary pair.
#[derive(Clone, Copy, Debug)]
pub struct BlockIdentities {
    pub commutator: f64,
    pub distance: f64,
    pub f_commutator: f64,
    pub f_distance: f64,
}

impl BlockIdentities {
    pub fn max_error(&self) -> f64 {
        (self.commutator - self.distance)
            .abs()
            .max((self.f_commutator - self.f_distance).abs())
    }
}

pub fn block_identities(f: &PeriodicFunction, v: &DenseMatrix, v1: &DenseMatrix) -> Result<BlockIdentities> {
    let (s, t) = block_pair(v, v1)?;
    let fv = unitary_calculus(f, v)?;
    let fv1 = unitary_calculus(f, v1)?;
    let ft = DenseMatrix::off_diagonal_blocks(&fv, &fv1)?;
    Ok(BlockIdentities {
        commutator: commutator(&s, &t)?.op_norm(),
        distance: (v - v1).op_norm(),
        f_commutator: commutator(&s, &ft)?.op_norm(),
        f_distance: (&fv - &fv1).op_norm(),
    })
}

/// The diagonal witness `V = diag(e^{ix₁}, e^{ix₂})`, `A = [[0,1],[1,0]]`; then
/// `f[V] = diag(f(x₁), f(x₂))`.
pub fn lower_bound_instance(f: &PeriodicFunction, x1: f64, x2: f64) -> SampleRecord {
    let v = DenseMatrix::from_diagonal(&[Complex64::from_polar(1.0, x1), Complex64::from_polar(1.0, x2)])
        .expect("2×2");
    let fv = DenseMatrix::from_diagonal(&[f.evaluate(x1), f.evaluate(x2)]).expect("2×2");
    let a = DenseMatrix::swap(2).expect("2×2");
    SampleRecord {
        seed: 0,
        index: 0,
        dim: 2,
        delta: commutator(&v, &a).expect("same dim").op_norm(),
        measured: commutator(&fv, &a).expect("same dim").op_norm(),
        bound: None,
    }
}
