//! Spectra of trace-normalized complex Wishart matrices and their entropy.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::eigen::hermitian_eigenvalues;
use crate::dims::SystemDims;
use crate::error::Result;

/// Eigenvalues of a reduced density matrix, ascending; positive, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Normalizes positive weights onto the simplex.
    pub fn from_weights(weights: Vec<f64>) -> Self {
        let mut values: Vec<f64> = weights.into_iter().map(|x| x.max(f64::MIN_POSITIVE)).collect();
        let total: f64 = values.iter().sum();
        for v in &mut values {
            *v /= total;
        }
        Spectrum { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Σ λᵢ^r.
    pub fn power_sum(&self, r: f64) -> f64 {
        self.values.iter().map(|x| x.powf(r)).sum()
    }

    pub fn purity(&self) -> f64 {
        self.values.iter().map(|x| x * x).sum()
    }
}

const ENTROPY_CLIP: f64 = 1e-300;

/// S = −Σ λ ln λ, clamped into [0, ln m].
pub fn entropy_of(spectrum: &Spectrum) -> f64 {
    let s: f64 = spectrum
        .values()
        .iter()
        .map(|&x| {
            let x = x.max(ENTROPY_CLIP);
            -x * x.ln()
        })
        .sum();
    s.clamp(0.0, (spectrum.len() as f64).ln())
}

/// Draws G (m×n, iid standard complex normal), forms W = G G† and returns
/// the eigenvalues of W / tr W.
pub fn sample_spectrum<R: Rng + ?Sized>(dims: SystemDims, rng: &mut R) -> Result<Spectrum> {
    let (m, n) = (dims.m(), dims.n());
    if m == 1 {
        return Ok(Spectrum { values: vec![1.0] });
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let g: Vec<Complex64> = (0..m * n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * scale, im * scale)
        })
        .collect();
    let mut w = vec![Complex64::new(0.0, 0.0); m * m];
    for i in 0..m {
        for j in i..m {
            let z: Complex64 = (0..n).map(|k| g[i * n + k] * g[j * n + k].conj()).sum();
            w[i * m + j] = z;
            w[j * m + i] = z.conj();
        }
        w[i * m + i].im = 0.0;
    }
    // Dividing by the eigenvalue sum (= tr W) pins the simplex to rounding.
    Ok(Spectrum::from_weights(hermitian_eigenvalues(&w, m)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn entropy_values() {
        assert_eq!(entropy_of(&Spectrum::from_weights(vec![1.0])), 0.0);
        let u = Spectrum::from_weights(vec![1.0; 5]);
        assert!((entropy_of(&u) - 5f64.ln()).abs() < 1e-15);
        let s = entropy_of(&Spectrum::from_weights(vec![0.9, 0.1]));
        let want = -0.9 * 0.9f64.ln() - 0.1 * 0.1f64.ln();
        assert!((s - want).abs() < 1e-15);
        assert!((want - 0.325_083_0).abs() < 1e-7);
    }

    #[test]
    fn single_eigenvalue() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = sample_spectrum(SystemDims::new(1, 4).unwrap(), &mut rng).unwrap();
        assert_eq!(s.values(), &[1.0]);
    }

    #[test]
    fn samples_lie_on_the_simplex() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (m, n) in [(2, 2), (3, 7), (5, 5), (8, 9)] {
            let d = SystemDims::new(m, n).unwrap();
            for _ in 0..200 {
                let s = sample_spectrum(d, &mut rng).unwrap();
                assert_eq!(s.len(), m);
                assert!((s.values().iter().sum::<f64>() - 1.0).abs() < 1e-12);
                assert!(s.values().iter().all(|&x| x > 0.0 && x < 1.0));
                let e = entropy_of(&s);
                assert!(e >= 0.0 && e <= (m as f64).ln());
            }
        }
    }
}
