//! Globally adaptive Gauss–Kronrod (7, 15) integration and the m = 2
//! entropy-moment oracle built on it.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const MAX_INTERVALS: usize = 4000;

// Kronrod abscissae on [-1, 1], non-negative half; odd indices are Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (i, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let pair = f(centre - half * x) + f(centre + half * x);
        kronrod += w * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// ∫_a^b f to absolute tolerance `abs_tol`. Returns `(value, error_estimate)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<(f64, f64)> {
    let mut heap = BinaryHeap::new();
    let first = gauss_kronrod(&f, a, b);
    let mut error = first.error;
    heap.push(first);
    while !(error <= abs_tol) {
        if heap.len() >= MAX_INTERVALS || !error.is_finite() {
            return Err(Error::Quadrature {
                estimate: error,
                tolerance: abs_tol,
            });
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        let left = gauss_kronrod(&f, worst.a, mid);
        let right = gauss_kronrod(&f, mid, worst.b);
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    let value: f64 = heap.iter().map(|p| p.value).sum();
    let error: f64 = heap.iter().map(|p| p.error).sum();
    if !value.is_finite() {
        return Err(Error::Quadrature {
            estimate: error,
            tolerance: abs_tol,
        });
    }
    Ok((value, error))
}

pub const ORACLE_TOLERANCE: f64 = 1e-11;

/// E[S^k] for m = 2 by one-dimensional quadrature over the smaller simplex
/// coordinate: density ∝ (2λ−1)² (λ(1−λ))^{n−2}.
pub fn quadrature_oracle_m2(n: usize, moment_order: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::Dimension { m: 2, n });
    }
    if !(1..=2).contains(&moment_order) {
        return Err(Error::Argument(format!(
            "moment order {moment_order} not in {{1, 2}}"
        )));
    }
    let power = (n - 2) as i32;
    // 4^{n−2} rescaling keeps the normalizer of order one.
    let weight = move |x: f64| (2.0 * x - 1.0).powi(2) * (4.0 * x * (1.0 - x)).powi(power);
    let entropy = |x: f64| -x * x.ln() - (1.0 - x) * (1.0 - x).ln();
    let k = moment_order as i32;
    let (num, _) = integrate(|x| weight(x) * entropy(x).powi(k), 0.0, 1.0, ORACLE_TOLERANCE)?;
    let (den, _) = integrate(weight, 0.0, 1.0, ORACLE_TOLERANCE)?;
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_are_consistent() {
        let kronrod: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        let gauss: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert!((kronrod - 2.0).abs() < 1e-15);
        assert!((gauss - 2.0).abs() < 1e-15);
    }

    #[test]
    fn single_panel_is_exact_for_high_degree_polynomials() {
        let p = gauss_kronrod(&|x: f64| x.powi(20), 0.0, 1.0);
        assert!((p.value - 1.0 / 21.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        // ∫₀¹ −x ln x dx = 1/4
        let (v, e) = integrate(|x| -x * x.ln(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 0.25).abs() < 1e-12 && e <= 1e-12);
        // ∫₀¹ ln x dx = −1
        let (v, _) = integrate(|x| x.ln(), 0.0, 1.0, 1e-10).unwrap();
        assert!((v + 1.0).abs() < 1e-10);
    }

    #[test]
    fn tolerance_not_met() {
        let r = integrate(|x| 1.0 / x, 0.0, 1.0, 1e-10);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }

    #[test]
    fn oracle_small_cases() {
        assert!((quadrature_oracle_m2(2, 1).unwrap() - 1.0 / 3.0).abs() < 1e-11);
        let s2 = 0.032_124_297_741_466 + 1.0 / 9.0;
        assert!((quadrature_oracle_m2(2, 2).unwrap() - s2).abs() < 1e-11);
        assert!(quadrature_oracle_m2(1, 1).is_err());
        assert!(quadrature_oracle_m2(3, 3).is_err());
    }
}
