//! Cyclic Jacobi for complex Hermitian matrices, and the two-step reduction that
//! diagonalizes a unitary through its Hermitian and skew-Hermitian parts.

use num_complex::Complex64;

use super::dense::DenseMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const CLUSTER_TOL: f64 = 1e-8;
pub const RESIDUAL_LIMIT: f64 = 1e-9;

/// Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix.
/// The input is used as-is; only its upper triangle and diagonal matter in exact
/// arithmetic.
pub fn jacobi_eigen(m: &DenseMatrix) -> (Vec<f64>, DenseMatrix) {
    let n = m.dim();
    let mut a: Vec<Complex64> = m.entries().to_vec();
    let mut v = DenseMatrix::identity(n).expect("dimension already validated");
    let idx = |i: usize, j: usize| i * n + j;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                let s = a[idx(i, j)].norm_sqr();
                total += s;
                if i != j {
                    off += s;
                }
            }
        }
        if off == 0.0 || off <= 1e-34 * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[idx(p, q)];
                let r = apq.norm();
                if r < 1e-300 {
                    continue;
                }
                let phase = apq / r; // e^{iα}
                let app = a[idx(p, p)].re;
                let aqq = a[idx(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let e_neg = phase.conj(); // e^{-iα}

                // A ← A U with U = [[c, s], [−s e^{−iα}, c e^{−iα}]] on (p, q)
                for k in 0..n {
                    let akp = a[idx(k, p)];
                    let akq = a[idx(k, q)];
                    a[idx(k, p)] = akp * c - akq * e_neg * s;
                    a[idx(k, q)] = akp * s + akq * e_neg * c;
                }
                // A ← U* A
                for k in 0..n {
                    let apk = a[idx(p, k)];
                    let aqk = a[idx(q, k)];
                    a[idx(p, k)] = apk * c - aqk * phase * s;
                    a[idx(q, k)] = apk * s + aqk * phase * c;
                }
                a[idx(p, p)] = Complex64::new(app - t * r, 0.0);
                a[idx(q, q)] = Complex64::new(aqq + t * r, 0.0);
                a[idx(p, q)] = Complex64::new(0.0, 0.0);
                a[idx(q, p)] = Complex64::new(0.0, 0.0);

                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * c - vkq * e_neg * s);
                    v.set(k, q, vkp * s + vkq * e_neg * c);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[idx(i, i)].re.total_cmp(&a[idx(j, j)].re));
    let eigs: Vec<f64> = order.iter().map(|&i| a[idx(i, i)].re).collect();
    let mut sorted = DenseMatrix::zeros(n).expect("valid dim");
    for (new_col, &old) in order.iter().enumerate() {
        for k in 0..n {
            sorted.set(k, new_col, v.get(k, old));
        }
    }
    (eigs, sorted)
}

/// Checked Hermitian eigendecomposition.
pub fn hermitian_eigen(m: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
    let scale = m.max_abs().max(1.0);
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotNormal(format!("hermitian defect {defect:e}")));
    }
    Ok(jacobi_eigen(&m.hermitian_part()))
}

/// Spectral data of a unitary: `V = Q diag(e^{iφ}) Q*` with `φ ∈ (−π, π]`.
#[derive(Clone, Debug)]
pub struct UnitaryEigen {
    pub phases: Vec<f64>,
    pub vectors: DenseMatrix,
    pub residual: f64,
}

/// Diagonalize a unitary via `(V + V*)/2`, splitting clusters of that spectrum with
/// the compression of `(V − V*)/(2i)`.
pub fn unitary_eigen(v: &DenseMatrix) -> Result<UnitaryEigen> {
    let defect = v.unitary_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotNormal(format!("unitary defect {defect:e}")));
    }
    let n = v.dim();
    let vs = v.adjoint();
    let re_part = (v + &vs).scale_real(0.5);
    let im_part = (v - &vs).scale(Complex64::new(0.0, -0.5));
    let (w, mut q) = jacobi_eigen(&re_part);

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && w[end] - w[end - 1] < CLUSTER_TOL {
            end += 1;
        }
        if end - start > 1 {
            split_cluster(&mut q, &im_part, start, end);
        }
        start = end;
    }

    let mut phases = Vec::with_capacity(n);
    for j in 0..n {
        let col: Vec<Complex64> = (0..n).map(|i| q.get(i, j)).collect();
        let mut rq = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let mut vi = Complex64::new(0.0, 0.0);
            for k in 0..n {
                vi += v.get(i, k) * col[k];
            }
            rq += col[i].conj() * vi;
        }
        phases.push(rq.arg());
    }
    let diag: Vec<Complex64> = phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect();
    let residual = (v - &DenseMatrix::reassemble(&q, &diag)).frobenius_norm();
    if residual > RESIDUAL_LIMIT {
        return Err(Error::DecompositionResidual {
            residual,
            limit: RESIDUAL_LIMIT,
        });
    }
    Ok(UnitaryEigen {
        phases,
        vectors: q,
        residual,
    })
}

/// Rotate columns `start..end` of `q` to diagonalize `q_c* K q_c`.
fn split_cluster(q: &mut DenseMatrix, k: &DenseMatrix, start: usize, end: usize) {
    let n = q.dim();
    let m = end - start;
    let cols: Vec<usize> = (start..end).collect();
    let basis = q.columns(&cols);
    // compression K_c = B* K B
    let mut kb = vec![vec![Complex64::new(0.0, 0.0); n]; m];
    for (c, b) in basis.iter().enumerate() {
        for i in 0..n {
            kb[c][i] = (0..n).map(|j| k.get(i, j) * b[j]).sum();
        }
    }
    let mut kc = DenseMatrix::zeros(m).expect("cluster fits");
    for r in 0..m {
        for c in 0..m {
            let z: Complex64 = (0..n).map(|i| basis[r][i].conj() * kb[c][i]).sum();
            kc.set(r, c, z);
        }
    }
    let (_, w) = jacobi_eigen(&kc.hermitian_part());
    for c in 0..m {
        let col: Vec<Complex64> = (0..n)
            .map(|i| (0..m).map(|r| basis[r][i] * w.get(r, c)).sum())
            .collect();
        q.set_column(start + c, &col);
    }
}
