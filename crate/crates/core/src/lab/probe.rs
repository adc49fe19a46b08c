//! Random-restart hill climb for `max ‖[√H, A]‖` subject to `0 ≤ H ≤ 1`, `‖A‖ ≤ 1`,
//! `‖[H, A]‖ ≤ δ`.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::calculus::hermitian_calculus;
use super::dense::{commutator_norm, DenseMatrix};
use super::eigen::hermitian_eigen;
use super::random::{ginibre, random_contraction, random_positive_contraction, record_seed, rng_for, SpectrumMode};
use super::sweep::SampleRecord;
use crate::error::{Error, Result};
use crate::positive::UnitFunction;

pub const DEFAULT_RESTARTS: usize = 64;
pub const INITIAL_STEP: f64 = 0.3;
pub const STAGNATION_LIMIT: usize = 10;
/// Step multiplier after an accepted move.
pub const SUCCESS_GROWTH: f64 = 1.5;
/// Moves that lose less than this are still taken.
const ACCEPT_SLACK: f64 = 1e-15;

#[derive(Clone, Debug, Serialize)]
pub struct ProbeResult {
    pub delta_target: f64,
    pub best: SampleRecord,
    pub h: DenseMatrix,
    pub a: DenseMatrix,
    pub restarts: usize,
    pub steps_per_restart: usize,
    pub iterations: usize,
    /// Step halvings summed over all restarts.
    pub stagnation_events: usize,
    /// `√δ − best.measured`.
    pub gap_to_sqrt: f64,
}

#[derive(Clone)]
struct State {
    h: DenseMatrix,
    a: DenseMatrix,
    delta: f64,
    value: f64,
}

/// Clamp the spectrum of `H` to `[0, 1]`, shrink `A` to a contraction, then scale
/// `A` so `‖[H, A]‖ = δ` when that keeps `‖A‖ ≤ 1`.
fn project(h: &DenseMatrix, a: &DenseMatrix, delta_target: f64) -> Result<State> {
    let (eigs, q) = hermitian_eigen(&h.hermitian_part())?;
    let d: Vec<Complex64> = eigs.iter().map(|&e| Complex64::new(e.clamp(0.0, 1.0), 0.0)).collect();
    let h = DenseMatrix::reassemble(&q, &d).hermitian_part();
    let norm = a.op_norm();
    let mut a = if norm > 1.0 { a.scale_real(1.0 / norm) } else { a.clone() };
    let c = commutator_norm(&h, &a)?;
    if c > 0.0 {
        let room = 1.0 / a.op_norm();
        a = a.scale_real((delta_target / c).min(room));
    }
    let delta = commutator_norm(&h, &a)?;
    let root = hermitian_calculus(&UnitFunction::sqrt(), &h)?;
    let value = commutator_norm(&root, &a)?;
    Ok(State { h, a, delta, value })
}

struct Climb {
    state: State,
    halvings: usize,
}

/// Gaussian step size for one block of variables, halved after
/// [`STAGNATION_LIMIT`] rejected moves in a row.
struct Step {
    sigma: f64,
    stagnant: usize,
    halvings: usize,
}

impl Step {
    fn new() -> Self {
        Self {
            sigma: INITIAL_STEP,
            stagnant: 0,
            halvings: 0,
        }
    }

    fn accepted(&mut self) {
        self.stagnant = 0;
        self.sigma = (self.sigma * SUCCESS_GROWTH).min(INITIAL_STEP);
    }

    fn rejected<R: Rng>(&mut self, rng: &mut R) {
        self.stagnant += 1;
        if self.stagnant >= STAGNATION_LIMIT {
            self.sigma *= 0.5;
            self.halvings += 1;
            self.stagnant = 0;
            // a collapsed step cannot move the state; restart the scale
            if self.sigma < 1e-12 {
                self.sigma = INITIAL_STEP * rng.gen_range(0.01..1.0);
            }
        }
    }
}

/// Moves alternate between `H` and `A`. At the optimum both `‖A‖ ≤ 1` and the
/// commutator constraint bind, and the objective has a ridge there; block moves
/// with a roundoff-sized acceptance slack can follow it where joint isotropic
/// moves stall.
fn climb(delta_target: f64, dim: usize, steps: usize, seed: u64, restart: u64) -> Result<Climb> {
    let mut rng = rng_for(seed, restart);
    let mode = if restart % 2 == 0 { SpectrumMode::Atoms } else { SpectrumMode::Uniform };
    let h0 = random_positive_contraction(dim, mode, &mut rng);
    let a0 = random_contraction(dim, &mut rng);
    let mut best = project(&h0, &a0, delta_target)?;
    let mut step_h = Step::new();
    let mut step_a = Step::new();
    for k in 0..steps {
        let move_h = k % 2 == 0;
        let candidate = if move_h {
            let dh = ginibre(dim, &mut rng).hermitian_part().scale_real(step_h.sigma);
            project(&(&best.h + &dh), &best.a, delta_target)?
        } else {
            let da = ginibre(dim, &mut rng).scale_real(step_a.sigma);
            project(&best.h, &(&best.a + &da), delta_target)?
        };
        let step = if move_h { &mut step_h } else { &mut step_a };
        let feasible = candidate.delta <= delta_target * (1.0 + 1e-12);
        if feasible && candidate.value >= best.value - ACCEPT_SLACK {
            let improved = candidate.value > best.value;
            best = candidate;
            if improved {
                step.accepted();
            } else {
                step.rejected(&mut rng);
            }
        } else {
            step.rejected(&mut rng);
        }
    }
    Ok(Climb {
        state: best,
        halvings: step_h.halvings + step_a.halvings,
    })
}

/// Best feasible `(H, A)` found by `restarts` independent climbs of
/// `iters / restarts` steps each. Ties go to the lowest restart index.
pub fn probe_max_commutator(delta_target: f64, dim: usize, iters: usize, seed: u64) -> Result<ProbeResult> {
    probe_with_restarts(delta_target, dim, iters, seed, DEFAULT_RESTARTS)
}

pub fn probe_with_restarts(
    delta_target: f64,
    dim: usize,
    iters: usize,
    seed: u64,
    restarts: usize,
) -> Result<ProbeResult> {
    if !(delta_target > 0.0 && delta_target <= 1.0) {
        return Err(Error::InvalidArgument(format!("probe delta {delta_target} must lie in (0, 1]")));
    }
    if !(2..=super::dense::MAX_DIM).contains(&dim) {
        return Err(Error::DimensionOutOfRange(dim));
    }
    if restarts == 0 {
        return Err(Error::InvalidArgument("at least one restart is required".into()));
    }
    let steps = (iters / restarts).max(1);
    let climbs: Vec<Climb> = (0..restarts as u64)
        .into_par_iter()
        .map(|r| climb(delta_target, dim, steps, seed, r))
        .collect::<Result<_>>()?;

    let mut best_index = 0;
    for (i, c) in climbs.iter().enumerate() {
        if c.state.value > climbs[best_index].state.value {
            best_index = i;
        }
    }
    let stagnation_events = climbs.iter().map(|c| c.halvings).sum();
    let best = &climbs[best_index].state;
    Ok(ProbeResult {
        delta_target,
        best: SampleRecord {
            seed: record_seed(seed, best_index as u64),
            index: best_index as u64,
            dim,
            delta: best.delta,
            measured: best.value,
            bound: None,
        },
        h: best.h.clone(),
        a: best.a.clone(),
        restarts,
        steps_per_restart: steps,
        iterations: steps * restarts,
        stagnation_events,
        gap_to_sqrt: delta_target.sqrt() - best.value,
    })
}
