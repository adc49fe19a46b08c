use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Small square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex64>,
}

/// JSON form: `{"dim": n, "entries": [[re, im], ...]}`, row-major.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl From<DenseMatrix> for MatrixRepr {
    fn from(m: DenseMatrix) -> Self {
        MatrixRepr {
            dim: m.n,
            entries: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<MatrixRepr> for DenseMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        let data: Vec<Complex64> = r.entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        DenseMatrix::from_vec(r.dim, data)
    }
}

fn check_dim(n: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange(n))
    }
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self {
            n,
            data: vec![ZERO; n * n],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        Ok(m)
    }

    pub fn from_vec(n: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dim(n)?;
        if data.len() != n * n {
            return Err(Error::DimensionMismatch(n * n, data.len()));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("matrix entries must be finite".into()));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch(n, r.len()));
            }
            data.extend_from_slice(r);
        }
        Self::from_vec(n, data)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_diagonal(d: &[Complex64]) -> Result<Self> {
        let mut m = Self::zeros(d.len())?;
        for (i, &z) in d.iter().enumerate() {
            m.set(i, i, z);
        }
        Ok(m)
    }

    pub fn from_real_diagonal(d: &[f64]) -> Result<Self> {
        let d: Vec<Complex64> = d.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    /// `[[0, I], [I, 0]]` of size `n`; `n` even.
    pub fn swap(n: usize) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::InvalidArgument("swap needs an even dimension".into()));
        }
        let h = n / 2;
        let mut m = Self::zeros(n)?;
        for i in 0..h {
            m.set(i, i + h, ONE);
            m.set(i + h, i, ONE);
        }
        Ok(m)
    }

    /// `[[0, upper], [lower, 0]]`.
    pub fn off_diagonal_blocks(upper: &DenseMatrix, lower: &DenseMatrix) -> Result<Self> {
        if upper.n != lower.n {
            return Err(Error::DimensionMismatch(upper.n, lower.n));
        }
        let h = upper.n;
        let mut m = Self::zeros(2 * h)?;
        for i in 0..h {
            for j in 0..h {
                m.set(i, j + h, upper.get(i, j));
                m.set(i + h, j, lower.get(i, j));
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.n + j] = z;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn try_mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let n = self.n;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                for (o, &b) in out[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self { n, data: out })
    }

    fn zip_with(&self, other: &DenseMatrix, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, other: &DenseMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &DenseMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `(M + M*)/2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(0.5)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `max |M − M*|` entrywise.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// `max |M*M − I|` entrywise.
    pub fn unitary_defect(&self) -> f64 {
        let g = &self.adjoint() * self;
        let id = DenseMatrix::identity(self.n).expect("valid dim");
        (&g - &id).max_abs()
    }

    /// Columns `cols` as an `n × cols.len()` block, stored column-major.
    pub(crate) fn columns(&self, cols: &[usize]) -> Vec<Vec<Complex64>> {
        cols.iter()
            .map(|&j| (0..self.n).map(|i| self.get(i, j)).collect())
            .collect()
    }

    pub(crate) fn set_column(&mut self, j: usize, v: &[Complex64]) {
        for (i, &z) in v.iter().enumerate() {
            self.set(i, j, z);
        }
    }

    /// `Q diag(d) Q*`.
    pub fn reassemble(q: &DenseMatrix, d: &[Complex64]) -> DenseMatrix {
        let n = q.n;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = ZERO;
                for k in 0..n {
                    s += q.get(i, k) * d[k] * q.get(j, k).conj();
                }
                out[i * n + j] = s;
            }
        }
        DenseMatrix { n, data: out }
    }

    /// Largest singular value, as `sqrt(λ_max(M*M))` from the Jacobi eigensolver.
    pub fn op_norm(&self) -> f64 {
        let g = (&self.adjoint() * self).hermitian_part();
        let (eigs, _) = super::eigen::jacobi_eigen(&g);
        eigs.last().copied().unwrap_or(0.0).max(0.0).sqrt()
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;

    /// Panics on dimension mismatch; use [`DenseMatrix::try_add`] otherwise.
    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.try_add(rhs).expect("dimension mismatch in +")
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;

    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.try_sub(rhs).expect("dimension mismatch in -")
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.try_mul(rhs).expect("dimension mismatch in *")
    }
}

/// `[M₁, M₂] = M₁M₂ − M₂M₁`.
pub fn commutator(m1: &DenseMatrix, m2: &DenseMatrix) -> Result<DenseMatrix> {
    Ok(&m1.try_mul(m2)? - &m2.try_mul(m1)?)
}

pub fn op_norm(m: &DenseMatrix) -> f64 {
    m.op_norm()
}

/// `‖[M₁, M₂]‖`.
pub fn commutator_norm(m1: &DenseMatrix, m2: &DenseMatrix) -> Result<f64> {
    Ok(commutator(m1, m2)?.op_norm())
}
