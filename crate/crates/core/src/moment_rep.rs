//! Two-point power-sum moments through the trace of the matrix X(r).
//!
//! For power sums `p_r = Σ λᵢ^r` of the fixed-trace spectrum,
//!
//! ```text
//! E[p_{r1} p_{r2}] = Γ(mn)/Γ(mn+r1+r2) · (tr X(r1+r2) + tr X(r1) tr X(r2) − tr X(r1)X(r2))
//! ```
//!
//! and E[S²] is the mixed derivative of that expression at r1 = r2 = 1.
//! Every Γ that appears in a denominator of an entry of X(r) is evaluated as
//! the entire function 1/Γ, so entries stay finite (and analytic in r) even
//! where single factors have poles.

use crate::dims::SystemDims;
use crate::error::{Error, Result};
use crate::richardson::{derivative, mixed_partial, Estimate, StepSchedule};
use crate::special::{
    log_gamma_signed, recip_gamma_signed, signed_log_sum, SignedLogValue,
};

/// Largest `mn` accepted by [`second_moment_numeric`].
pub const NUMERIC_MN_LIMIT: usize = 200;

/// The m×m matrix X(r), row-major, indices `i, j ∈ {0, …, m−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentMatrix {
    dims: SystemDims,
    r: f64,
    entries: Vec<f64>,
}

impl MomentMatrix {
    pub fn dims(&self) -> SystemDims {
        self.dims
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn size(&self) -> usize {
        self.dims.m()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size() + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.size()).map(|i| self.get(i, i)).sum()
    }

    /// tr(A·B) = Σ_{i,j} a_ij b_ji.
    pub fn trace_product(&self, other: &MomentMatrix) -> Result<f64> {
        if self.size() != other.size() {
            return Err(Error::DimensionMismatch {
                left: self.size(),
                right: other.size(),
            });
        }
        let m = self.size();
        let mut acc = 0.0;
        for i in 0..m {
            for j in 0..m {
                acc += self.get(i, j) * other.get(j, i);
            }
        }
        Ok(acc)
    }
}

fn gamma_log(x: f64) -> Result<SignedLogValue> {
    log_gamma_signed(x)
}

/// Entry x_ij of X(r) with the k-sum running over `0..=k_last`.
///
/// The full entry uses `k_last = m − 1`; terms with `k > min(i, j)` vanish
/// identically through 1/Γ(i−k+1) and 1/Γ(j−k+1).
pub fn moment_entry(dims: SystemDims, r: f64, i: usize, j: usize, k_last: usize) -> Result<f64> {
    let m = dims.m();
    if i >= m || j >= m {
        return Err(Error::Argument(format!("entry ({i}, {j}) outside {m}x{m}")));
    }
    let offset = (dims.n() - m) as f64;
    let (fi, fj) = (i as f64, j as f64);

    let prefactor = gamma_log(r + 1.0)?.powi(2) * gamma_log(fj + 1.0)?
        / gamma_log(offset + fi + 1.0)?;

    let mut terms = Vec::with_capacity(k_last + 1);
    for k in 0..=k_last.min(m - 1) {
        let fk = k as f64;
        let denominators = recip_gamma_signed(fk + 1.0)
            * recip_gamma_signed(fi - fk + 1.0)
            * recip_gamma_signed(fj - fk + 1.0)
            * recip_gamma_signed(r + fk - fi + 1.0)
            * recip_gamma_signed(r + fk - fj + 1.0);
        if denominators.is_zero() {
            continue;
        }
        terms.push(gamma_log(offset + r + fk + 1.0)? * denominators);
    }
    Ok((prefactor * signed_log_sum(terms)).value())
}

/// Builds X(r) for `r > 0`.
pub fn build_moment_matrix(dims: SystemDims, r: f64) -> Result<MomentMatrix> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Argument(format!("exponent r = {r} must be positive")));
    }
    let m = dims.m();
    let mut entries = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            entries.push(moment_entry(dims, r, i, j, m - 1)?);
        }
    }
    Ok(MomentMatrix { dims, r, entries })
}

pub fn trace(mat: &MomentMatrix) -> f64 {
    mat.trace()
}

pub fn trace_product(a: &MomentMatrix, b: &MomentMatrix) -> Result<f64> {
    a.trace_product(b)
}

/// E[p_{r1} p_{r2}] at a pair of exponents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointMoment {
    pub dims: SystemDims,
    pub r1: f64,
    pub r2: f64,
    pub value: f64,
}

/// Γ(mn)/Γ(mn+s).
fn normalizer(dims: SystemDims, s: f64) -> Result<f64> {
    let mn = dims.mn() as f64;
    Ok((gamma_log(mn)? / gamma_log(mn + s)?).value())
}

pub fn two_point_moment(dims: SystemDims, r1: f64, r2: f64) -> Result<TwoPointMoment> {
    let x1 = build_moment_matrix(dims, r1)?;
    let x2 = build_moment_matrix(dims, r2)?;
    let x12 = build_moment_matrix(dims, r1 + r2)?;
    let bracket = x12.trace() + x1.trace() * x2.trace() - x1.trace_product(&x2)?;
    Ok(TwoPointMoment {
        dims,
        r1,
        r2,
        value: normalizer(dims, r1 + r2)? * bracket,
    })
}

/// E[p_r] = Γ(mn)/Γ(mn+r) · tr X(r).
pub fn single_moment(dims: SystemDims, r: f64) -> Result<f64> {
    Ok(normalizer(dims, r)? * build_moment_matrix(dims, r)?.trace())
}

/// E[S²] as the mixed derivative of [`two_point_moment`] at (1, 1).
///
/// For `m = 1` the spectrum is the single point λ = 1 and the result is
/// exactly zero.
pub fn second_moment_numeric(dims: SystemDims, schedule: &StepSchedule) -> Result<Estimate> {
    if dims.mn() > NUMERIC_MN_LIMIT {
        return Err(Error::Budget {
            m: dims.m(),
            n: dims.n(),
            limit: NUMERIC_MN_LIMIT,
        });
    }
    if dims.m() == 1 {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
        });
    }
    // ∂²/∂r1∂r2 E[p_{r1} p_{r2}] = E[(Σ λ^{r1} ln λ)(Σ λ^{r2} ln λ)] → E[S²] at (1,1)
    mixed_partial(
        |a, b| two_point_moment(dims, a, b).map(|t| t.value),
        (1.0, 1.0),
        schedule,
    )
}

/// c2, c3, c5, c7, c8 taken as numerical derivatives of traces of X.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericCoefficients {
    pub dims: SystemDims,
    /// ∂/∂r₁ tr X(r₁+r₂) at (1, 1)
    pub c2: Estimate,
    /// ∂²/∂r₁∂r₂ tr X(r₁+r₂) at (1, 1)
    pub c3: Estimate,
    /// d/dr tr X(r) at 1
    pub c5: Estimate,
    /// ∂/∂r₁ tr X(r₁)X(1) at 1
    pub c7: Estimate,
    /// ∂²/∂r₁∂r₂ tr X(r₁)X(r₂) at (1, 1)
    pub c8: Estimate,
}

impl NumericCoefficients {
    pub fn named(&self) -> [(&'static str, Estimate); 5] {
        [
            ("c2", self.c2),
            ("c3", self.c3),
            ("c5", self.c5),
            ("c7", self.c7),
            ("c8", self.c8),
        ]
    }
}

fn tr_at(dims: SystemDims, r: f64) -> Result<f64> {
    Ok(build_moment_matrix(dims, r)?.trace())
}

pub fn numeric_coefficients(dims: SystemDims, schedule: &StepSchedule) -> Result<NumericCoefficients> {
    let x1 = build_moment_matrix(dims, 1.0)?;
    Ok(NumericCoefficients {
        dims,
        c2: derivative(|s| tr_at(dims, s + 1.0), 1.0, schedule)?,
        c3: mixed_partial(|a, b| tr_at(dims, a + b), (1.0, 1.0), schedule)?,
        c5: derivative(|r| tr_at(dims, r), 1.0, schedule)?,
        c7: derivative(
            |r| build_moment_matrix(dims, r)?.trace_product(&x1),
            1.0,
            schedule,
        )?,
        c8: mixed_partial(
            |a, b| build_moment_matrix(dims, a)?.trace_product(&build_moment_matrix(dims, b)?),
            (1.0, 1.0),
            schedule,
        )?,
    })
}
