//! Seeded random instances. Every draw goes through a ChaCha stream keyed by a
//! per-record seed, so `(base_seed, index)` alone replays an instance.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::dense::DenseMatrix;

/// SplitMix64 finalizer over `base ^ mix(index)`.
pub fn record_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_for(base: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(record_seed(base, index))
}

fn normal_complex<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Complex Ginibre matrix with unit-variance entries.
pub fn ginibre<R: Rng>(n: usize, rng: &mut R) -> DenseMatrix {
    let data = (0..n * n).map(|_| normal_complex(rng)).collect();
    DenseMatrix::from_vec(n, data).expect("dimension checked by caller")
}

/// Haar unitary: Gram–Schmidt on a Ginibre matrix. Columns are normalized by
/// their positive norm, which is the `diag(R) > 0` phase convention.
pub fn haar_unitary<R: Rng>(n: usize, rng: &mut R) -> DenseMatrix {
    let g = ginibre(n, rng);
    let mut cols = g.columns(&(0..n).collect::<Vec<_>>());
    for j in 0..n {
        // two passes keep orthogonality at machine precision
        for _ in 0..2 {
            for k in 0..j {
                let proj: Complex64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..n {
                    let sub = proj * cols[k][i];
                    cols[j][i] -= sub;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    let mut u = DenseMatrix::zeros(n).expect("dimension checked by caller");
    for (j, c) in cols.iter().enumerate() {
        u.set_column(j, c);
    }
    u
}

/// Ginibre matrix scaled down to operator norm 1 when its norm exceeds 1.
pub fn random_contraction<R: Rng>(n: usize, rng: &mut R) -> DenseMatrix {
    let g = ginibre(n, rng);
    let norm = g.op_norm();
    if norm > 1.0 {
        g.scale_real(1.0 / norm)
    } else {
        g
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumMode {
    #[default]
    Uniform,
    /// Each eigenvalue is 0, 1 or uniform with equal odds.
    Atoms,
}

pub fn random_spectrum<R: Rng>(n: usize, mode: SpectrumMode, rng: &mut R) -> Vec<f64> {
    (0..n)
        .map(|_| match mode {
            SpectrumMode::Uniform => rng.gen::<f64>(),
            SpectrumMode::Atoms => match rng.gen_range(0..3) {
                0 => 0.0,
                1 => 1.0,
                _ => rng.gen::<f64>(),
            },
        })
        .collect()
}

/// `U Λ U*` with Haar `U` and `Λ` drawn per `mode`, returned exactly Hermitian.
pub fn random_positive_contraction<R: Rng>(n: usize, mode: SpectrumMode, rng: &mut R) -> DenseMatrix {
    let u = haar_unitary(n, rng);
    let spectrum = random_spectrum(n, mode, rng);
    let d: Vec<Complex64> = spectrum.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    DenseMatrix::reassemble(&u, &d).hermitian_part()
}
