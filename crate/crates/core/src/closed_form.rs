//! Analytic path: the eight trace coefficients, the three second-moment
//! parts, and the assembled mean and variance of the entanglement entropy.
//!
//! Coefficient shorthand (primes are derivatives in the exponent):
//!
//! | coeff | definition        | coeff | definition          |
//! |-------|-------------------|-------|---------------------|
//! | c1    | tr X(2)           | c5    | tr′X(1)             |
//! | c2    | tr′X(2)           | c6    | tr X(1)²            |
//! | c3    | tr″X(2)           | c7    | tr X′(1)X(1)        |
//! | c4    | tr X(1)           | c8    | tr X′(1)²           |
//!
//! c3 and c8 both carry ψ₀(n−m) and ψ₁(n−m), so they exist individually only
//! for n > m. Their difference does not, and that difference is all the
//! variance needs.

use crate::dims::SystemDims;
use crate::error::{Error, Result};
use crate::special::{digamma, trigamma, EULER_GAMMA};

/// Exact `num / den` from integer arithmetic, one rounding at the end.
fn ratio(num: i128, den: i128) -> f64 {
    num as f64 / den as f64
}

fn ints(dims: SystemDims) -> (i128, i128) {
    (dims.m() as i128, dims.n() as i128)
}

/// Mean, second moment and variance of S, in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyStats {
    pub dims: SystemDims,
    pub mean: f64,
    pub second_moment: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    pub dims: SystemDims,
    pub c1: f64,
    pub c2: f64,
    c3: Option<f64>,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    c8: Option<f64>,
    /// c3 − c8 after cancellation; defined for n = m as well.
    pub c3_minus_c8: f64,
}

impl CoefficientSet {
    pub fn c3(&self) -> Result<f64> {
        self.c3.ok_or(Error::NeedsStrictDims {
            what: "c3",
            n: self.dims.n(),
        })
    }

    pub fn c8(&self) -> Result<f64> {
        self.c8.ok_or(Error::NeedsStrictDims {
            what: "c8",
            n: self.dims.n(),
        })
    }

    pub fn has_individual_c3_c8(&self) -> bool {
        self.c3.is_some() && self.c8.is_some()
    }
}

/// E[S] = ψ₀(mn+1) − ψ₀(n) − (m+1)/(2n).
///
/// The digamma difference is telescoped into Σ_{k=n}^{mn} 1/k.
pub fn page_mean(dims: SystemDims) -> f64 {
    let (m, n) = (dims.m(), dims.n());
    let harmonic: f64 = (n..=m * n).rev().map(|k| 1.0 / k as f64).sum();
    harmonic - ratio(m as i128 + 1, 2 * n as i128)
}

/// V[S] = −ψ₁(mn+1) + (m+n)/(mn+1)·ψ₁(n) − (m+1)(m+2n+1)/(4n²(mn+1)).
///
/// Rewritten with ψ₁(n) − ψ₁(mn+1) = Σ_{k=n}^{mn} 1/k², which leaves a
/// ψ₁(n) coefficient of −(m−1)(n−1)/(mn+1).
pub fn vpo_variance(dims: SystemDims) -> f64 {
    let (m, n) = ints(dims);
    let (mu, nu) = (dims.m(), dims.n());
    let squares: f64 = (nu..=mu * nu)
        .rev()
        .map(|k| {
            let k = k as f64;
            1.0 / (k * k)
        })
        .sum();
    let psi1_coeff = ratio(-(m - 1) * (n - 1), m * n + 1);
    let psi1_term = if psi1_coeff == 0.0 {
        0.0
    } else {
        psi1_coeff * trigamma(dims.n() as f64).expect("n >= 1")
    };
    squares + psi1_term - ratio((m + 1) * (m + 2 * n + 1), 4 * n * n * (m * n + 1))
}

/// Σ_{k=1}^{m} ψ₀(k+n−m)/k.
pub fn unsimplifiable_sum(dims: SystemDims) -> f64 {
    let (m, n) = (dims.m(), dims.n());
    (1..=m)
        .map(|k| digamma((k + n - m) as f64).expect("positive argument") / k as f64)
        .sum()
}

/// c3 − c8 = m(m+2n+1)ψ₀(n) + mnψ₀²(n) + mn(m+n)ψ₁(n) + m(m+1)/2.
///
/// The unsimplifiable sum and every ψ₀(n−m), ψ₁(n−m) group cancel between
/// the two coefficients before anything is evaluated.
pub fn reduced_c3_minus_c8(dims: SystemDims) -> f64 {
    let (m, n) = ints(dims);
    let nf = dims.n() as f64;
    let p0 = digamma(nf).expect("n >= 1");
    let p1 = trigamma(nf).expect("n >= 1");
    ((m * (m + 2 * n + 1)) as f64) * p0
        + ((m * n) as f64) * p0 * p0
        + ((m * n * (m + n)) as f64) * p1
        + ratio(m * (m + 1), 2)
}

fn strict_c3_c8(dims: SystemDims) -> (f64, f64) {
    let (m, n) = ints(dims);
    let nf = dims.n() as f64;
    let p0n = digamma(nf).expect("n >= 1");
    let p1n = trigamma(nf).expect("n >= 1");
    let p0m = digamma(dims.m() as f64).expect("m >= 1");
    let d0 = digamma((dims.n() - dims.m()) as f64).expect("n > m");
    let d1 = trigamma((dims.n() - dims.m()) as f64).expect("n > m");
    let psi0_one = -EULER_GAMMA;

    let big = (m * n * (m + n)) as f64;
    let sum = unsimplifiable_sum(dims);
    let shared_d0 = ratio(
        m * m * m + 9 * m * m * n + 3 * m * m - 9 * m * n * n + 2 * m - n * n * n - 3 * n * n
            - 2 * n,
        3,
    );

    let c3 = 2.0 * big * sum
        + ratio(n * (9 * m * n - 3 * m + n * n - 3 * n + 2), 3) * p0n
        + 2.0 * big * psi0_one * d0
        + shared_d0 * d0
        - big * (d0 * d0 + 2.0 * d0 * (p0m - p0n) - d1)
        - ratio(m * (5 * m * m + 75 * m * n + 3 * m + 6 * n * n + 3 * n - 8), 18);

    let c8 = 2.0 * big * sum
        + ratio(
            -3 * m * m + 9 * m * n * n - 9 * m * n - 3 * m + n * n * n - 3 * n * n + 2 * n,
            3,
        ) * p0n
        - ((m * n) as f64) * p0n * p0n
        + shared_d0 * d0
        + big * (-d0 * d0 + 2.0 * (p0n - p0m + psi0_one) * d0 + d1 - p1n)
        - ratio(m * (5 * m * m + 75 * m * n + 12 * m + 6 * n * n + 3 * n + 1), 18);

    (c3, c8)
}

pub fn coefficients(dims: SystemDims) -> CoefficientSet {
    let (m, n) = ints(dims);
    let nf = dims.n() as f64;
    let p0n = digamma(nf).expect("n >= 1");
    let p0n1 = digamma(nf + 1.0).expect("n >= 1");

    let c1 = (m * n * (m + n)) as f64;
    let c2 = ((m * n * (m + n)) as f64) * p0n1 + ratio(m * (m * (m + 9 * n - 3) - 3 * n + 2), 6);
    let c4 = (m * n) as f64;
    let c5 = ((m * n) as f64) * p0n + ratio(m * (m + 1), 2);
    let c6 = (m * n * (m + n - 1)) as f64;
    let c7 = ((m * n * (m + n - 1)) as f64) * p0n1 + ratio(m * (m - 1) * (m + 9 * n - 5), 6);

    let (c3, c8) = if dims.n() > dims.m() {
        let (c3, c8) = strict_c3_c8(dims);
        (Some(c3), Some(c8))
    } else {
        (None, None)
    };

    CoefficientSet {
        dims,
        c1,
        c2,
        c3,
        c4,
        c5,
        c6,
        c7,
        c8,
        c3_minus_c8: reduced_c3_minus_c8(dims),
    }
}

/// The three parts of E[S²].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TParts {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl TParts {
    pub fn sum(&self) -> f64 {
        self.a + self.b + self.c
    }
}

/// ψ₀(mn+2), ψ₁(mn+2) and Γ(mn)/Γ(mn+2).
fn outer_terms(dims: SystemDims) -> (f64, f64, f64) {
    let x = dims.mn() as f64 + 2.0;
    let mn = dims.mn() as f64;
    (
        digamma(x).expect("positive"),
        trigamma(x).expect("positive"),
        1.0 / (mn * (mn + 1.0)),
    )
}

/// T_a, T_b, T_c from the coefficients. Needs c3 and c8 individually.
pub fn t_parts(coeffs: &CoefficientSet) -> Result<TParts> {
    let (p0, p1, scale) = outer_terms(coeffs.dims);
    let c3 = coeffs.c3()?;
    let c8 = coeffs.c8()?;
    let CoefficientSet {
        c1, c2, c4, c5, c6, c7, ..
    } = *coeffs;
    Ok(TParts {
        a: scale * (c3 - 2.0 * c2 * p0 + c1 * p0 * p0 - c1 * p1),
        b: scale * (c5 * c5 - 2.0 * c4 * c5 * p0 + c4 * c4 * p0 * p0 - c4 * c4 * p1),
        c: scale * (c6 * p1 - c6 * p0 * p0 + 2.0 * c7 * p0 - c8),
    })
}

fn assemble_variance(coeffs: &CoefficientSet, c3_minus_c8: f64) -> f64 {
    let (p0, p1, scale) = outer_terms(coeffs.dims);
    let CoefficientSet {
        c1, c2, c4, c5, c6, c7, ..
    } = *coeffs;
    let mean = page_mean(coeffs.dims);
    scale
        * (c5 * c5
            + c3_minus_c8
            + 2.0 * (c7 - c4 * c5 - c2) * p0
            + (c4 * c4 - c6 + c1) * (p0 * p0 - p1))
        - mean * mean
}

/// Variance assembled from the coefficients with the cancellation-reduced c3 − c8.
pub fn assembled_variance(coeffs: &CoefficientSet) -> f64 {
    assemble_variance(coeffs, coeffs.c3_minus_c8)
}

/// Variance assembled from the individual c3 and c8 (n > m only).
pub fn assembled_variance_full(coeffs: &CoefficientSet) -> Result<f64> {
    Ok(assemble_variance(coeffs, coeffs.c3()? - coeffs.c8()?))
}

pub fn exact_entropy_stats(dims: SystemDims) -> EntropyStats {
    let mean = page_mean(dims);
    let variance = assembled_variance(&coefficients(dims));
    EntropyStats {
        dims,
        mean,
        second_moment: variance + mean * mean,
        variance,
    }
}
