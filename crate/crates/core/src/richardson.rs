//! Central differences with Richardson extrapolation.
//!
//! Steps run `h_0 = base_step * 2^levels` down to `base_step`, halving each
//! time. Every central stencil used here has an error expansion in even
//! powers of h, so column `j` of the tableau divides by `4^j - 1`.

use crate::error::{Error, Result};

/// Changes below this are accepted regardless of the derivative's size.
const ABSOLUTE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// |difference| of the last two diagonal tableau entries.
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSchedule {
    pub base_step: f64,
    pub levels: u32,
    /// Relative bound on the last tableau change.
    pub tolerance: f64,
}

impl Default for StepSchedule {
    fn default() -> Self {
        StepSchedule {
            base_step: 1e-2,
            levels: 3,
            tolerance: 1e-7,
        }
    }
}

impl StepSchedule {
    fn validate(&self) -> Result<()> {
        if !(self.base_step > 0.0 && self.base_step <= 0.1) {
            return Err(Error::Argument(format!(
                "base step {} outside (0, 0.1]",
                self.base_step
            )));
        }
        if self.levels < 1 {
            return Err(Error::Argument("need at least one halving level".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Argument("tolerance must be positive".into()));
        }
        Ok(())
    }

    /// Largest step used, i.e. the half-width of the sampled grid.
    pub fn max_step(&self) -> f64 {
        self.base_step * f64::from(1u32 << self.levels)
    }
}

fn extrapolate<S>(schedule: &StepSchedule, mut stencil: S) -> Result<Estimate>
where
    S: FnMut(f64) -> Result<f64>,
{
    schedule.validate()?;
    let rows = schedule.levels as usize + 1;
    let mut prev: Vec<f64> = Vec::with_capacity(rows);
    let mut h = schedule.max_step();
    let mut last_diag = f64::NAN;
    let mut diag = f64::NAN;
    for k in 0..rows {
        let mut row = Vec::with_capacity(k + 1);
        row.push(stencil(h)?);
        let mut factor = 1.0;
        for j in 1..=k {
            factor *= 4.0;
            let v = row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - 1.0);
            row.push(v);
        }
        last_diag = diag;
        diag = row[k];
        prev = row;
        h *= 0.5;
    }
    let change = (diag - last_diag).abs();
    let allowed = schedule.tolerance * diag.abs() + ABSOLUTE_FLOOR;
    if !diag.is_finite() || change > allowed {
        return Err(Error::NonConvergence {
            estimate: diag,
            change,
            tolerance: allowed,
        });
    }
    Ok(Estimate {
        value: diag,
        error: change,
    })
}

/// df/dx at `x`.
pub fn derivative<F>(f: F, x: f64, schedule: &StepSchedule) -> Result<Estimate>
where
    F: Fn(f64) -> Result<f64>,
{
    extrapolate(schedule, |h| Ok((f(x + h)? - f(x - h)?) / (2.0 * h)))
}

/// d²f/dx² at `x`.
pub fn second_derivative<F>(f: F, x: f64, schedule: &StepSchedule) -> Result<Estimate>
where
    F: Fn(f64) -> Result<f64>,
{
    let f0 = f(x)?;
    extrapolate(schedule, |h| Ok((f(x + h)? - 2.0 * f0 + f(x - h)?) / (h * h)))
}

/// ∂²f/∂r₁∂r₂ at `at` from the four-point cross stencil.
pub fn mixed_partial<F>(f: F, at: (f64, f64), schedule: &StepSchedule) -> Result<Estimate>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let (a, b) = at;
    extrapolate(schedule, |h| {
        let pp = f(a + h, b + h)?;
        let pm = f(a + h, b - h)?;
        let mp = f(a - h, b + h)?;
        let mm = f(a - h, b - h)?;
        Ok((pp - pm - mp + mm) / (4.0 * h * h))
    })
}
