//! Gamma-family kernel: signed log-gamma, the entire function 1/Γ, digamma,
//! trigamma, their shift recurrences, and Laurent data at the poles.
//!
//! Everything here is `f64`. Positive arguments go through a Stirling series
//! after an upward shift; arguments below 1/2 use reflection.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Absolute distance to a non-positive integer below which an argument is a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// Shift target for the asymptotic series. At x = 15 the first omitted
// Stirling term is below 1e-20.
const ASYMPTOTIC_START: f64 = 15.0;

// B_{2k} / (2k (2k-1)), k = 1..8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

// B_{2k}, k = 1..8
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// A real number stored as `sign * exp(log_magnitude)`.
///
/// `sign == 0` encodes an exact zero; `log_magnitude` is then meaningless
/// and kept at `-inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLogValue {
    pub log_magnitude: f64,
    pub sign: i8,
}

impl SignedLogValue {
    pub const ZERO: SignedLogValue = SignedLogValue {
        log_magnitude: f64::NEG_INFINITY,
        sign: 0,
    };
    pub const ONE: SignedLogValue = SignedLogValue {
        log_magnitude: 0.0,
        sign: 1,
    };

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            SignedLogValue {
                log_magnitude: v.abs().ln(),
                sign: if v > 0.0 { 1 } else { -1 },
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn value(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_magnitude.exp(),
        }
    }

    pub fn recip(self) -> Self {
        assert!(self.sign != 0, "reciprocal of zero");
        SignedLogValue {
            log_magnitude: -self.log_magnitude,
            sign: self.sign,
        }
    }

    pub fn powi(self, k: i32) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return Self::ZERO;
        }
        SignedLogValue {
            log_magnitude: self.log_magnitude * f64::from(k),
            sign: if k % 2 == 0 { 1 } else { self.sign },
        }
    }
}

impl std::ops::Mul for SignedLogValue {
    type Output = SignedLogValue;

    fn mul(self, rhs: SignedLogValue) -> SignedLogValue {
        if self.sign == 0 || rhs.sign == 0 {
            return SignedLogValue::ZERO;
        }
        SignedLogValue {
            log_magnitude: self.log_magnitude + rhs.log_magnitude,
            sign: self.sign * rhs.sign,
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl std::ops::Div for SignedLogValue {
    type Output = SignedLogValue;

    fn div(self, rhs: SignedLogValue) -> SignedLogValue {
        self * rhs.recip()
    }
}

/// Sums signed-log terms with a max shift so no intermediate overflows.
/// Returns the total in signed-log form.
pub fn signed_log_sum<I>(terms: I) -> SignedLogValue
where
    I: IntoIterator<Item = SignedLogValue>,
{
    let terms: Vec<SignedLogValue> = terms.into_iter().filter(|t| t.sign != 0).collect();
    let Some(shift) = terms
        .iter()
        .map(|t| t.log_magnitude)
        .max_by(|a, b| a.total_cmp(b))
    else {
        return SignedLogValue::ZERO;
    };
    let scaled: f64 = terms
        .iter()
        .map(|t| f64::from(t.sign) * (t.log_magnitude - shift).exp())
        .sum();
    let mut out = SignedLogValue::from_f64(scaled);
    if out.sign != 0 {
        out.log_magnitude += shift;
    }
    out
}

/// Returns `Some(l)` when `x` lies within [`POLE_TOLERANCE`] of `-l`, `l >= 0`.
pub fn pole_index(x: f64) -> Option<u64> {
    let nearest = x.round();
    if nearest <= 0.0 && (x - nearest).abs() < POLE_TOLERANCE {
        Some((-nearest) as u64)
    } else {
        None
    }
}

fn check_pole(x: f64) -> Result<()> {
    match pole_index(x) {
        Some(_) => Err(Error::Pole { x }),
        None => Ok(()),
    }
}

/// sin(πx) with exact argument reduction.
fn sin_pi(x: f64) -> f64 {
    let mut r = x - 2.0 * (x / 2.0).round(); // r in [-1, 1]
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    (PI * r).sin()
}

/// cos(πx) with exact argument reduction.
fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

fn ln_factorial_table() -> &'static [f64; 171] {
    use std::sync::OnceLock;
    static TABLE: OnceLock<[f64; 171]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; 171];
        let mut f = 1.0_f64;
        for (k, slot) in t.iter_mut().enumerate().skip(1) {
            f *= k as f64;
            *slot = f.ln();
        }
        t
    })
}

/// ln Γ(x) for x >= 1/2.
fn ln_gamma_positive(x: f64) -> f64 {
    debug_assert!(x >= 0.5);
    if x == x.floor() && x <= 171.0 {
        return ln_factorial_table()[x as usize - 1];
    }
    let mut z = x;
    let mut prod = 1.0;
    while z < ASYMPTOTIC_START {
        prod *= z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for c in STIRLING {
        series += c * pow;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series - prod.ln()
}

/// Γ(x) as a signed logarithm. Reflection handles x < 1/2.
pub fn log_gamma_signed(x: f64) -> Result<SignedLogValue> {
    if x.is_nan() {
        return Err(Error::Argument("log_gamma_signed(NaN)".into()));
    }
    check_pole(x)?;
    if x >= 0.5 {
        return Ok(SignedLogValue {
            log_magnitude: ln_gamma_positive(x),
            sign: 1,
        });
    }
    // Γ(x) = π / (sin(πx) Γ(1-x))
    let s = sin_pi(x);
    Ok(SignedLogValue {
        log_magnitude: PI.ln() - s.abs().ln() - ln_gamma_positive(1.0 - x),
        sign: if s > 0.0 { 1 } else { -1 },
    })
}

/// Γ(x) for real x off the poles.
pub fn gamma(x: f64) -> Result<f64> {
    log_gamma_signed(x).map(|v| v.value())
}

/// ln |Γ(x)|.
pub fn ln_gamma(x: f64) -> Result<f64> {
    log_gamma_signed(x).map(|v| v.log_magnitude)
}

/// 1/Γ(x) in signed-log form; exact zero at the poles.
pub fn recip_gamma_signed(x: f64) -> SignedLogValue {
    if pole_index(x).is_some() {
        return SignedLogValue::ZERO;
    }
    if x >= 0.5 {
        return SignedLogValue {
            log_magnitude: -ln_gamma_positive(x),
            sign: 1,
        };
    }
    // 1/Γ(x) = sin(πx) Γ(1-x) / π
    let s = sin_pi(x);
    if s == 0.0 {
        return SignedLogValue::ZERO;
    }
    SignedLogValue {
        log_magnitude: s.abs().ln() + ln_gamma_positive(1.0 - x) - PI.ln(),
        sign: if s > 0.0 { 1 } else { -1 },
    }
}

/// 1/Γ(x), defined for every real x.
pub fn recip_gamma(x: f64) -> f64 {
    recip_gamma_signed(x).value()
}

fn digamma_unchecked(x: f64) -> f64 {
    if x < 0.0 {
        // ψ(x) = ψ(1-x) - π cot(πx)
        return digamma_unchecked(1.0 - x) - PI * cos_pi(x) / sin_pi(x);
    }
    let mut z = x;
    let mut acc = 0.0;
    while z < ASYMPTOTIC_START {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    let mut pow = inv2;
    let mut series = 0.0;
    for (k, b) in BERNOULLI.iter().enumerate() {
        series += b / (2.0 * (k as f64 + 1.0)) * pow;
        pow *= inv2;
    }
    acc + z.ln() - 0.5 / z - series
}

/// Digamma ψ₀(x) = d ln Γ(x)/dx.
pub fn digamma(x: f64) -> Result<f64> {
    check_pole(x)?;
    Ok(digamma_unchecked(x))
}

fn trigamma_unchecked(x: f64) -> f64 {
    if x < 0.0 {
        // ψ₁(x) = π² / sin²(πx) - ψ₁(1-x)
        let s = sin_pi(x);
        return PI * PI / (s * s) - trigamma_unchecked(1.0 - x);
    }
    let mut z = x;
    let mut acc = 0.0;
    while z < ASYMPTOTIC_START {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut pow = inv2 * inv;
    let mut series = 0.0;
    for b in BERNOULLI {
        series += b * pow;
        pow *= inv2;
    }
    acc + inv + 0.5 * inv2 + series
}

/// Trigamma ψ₁(x) = d² ln Γ(x)/dx².
pub fn trigamma(x: f64) -> Result<f64> {
    check_pole(x)?;
    Ok(trigamma_unchecked(x))
}

/// ψ₀(l + steps) = ψ₀(l) + Σ_{k<steps} 1/(l+k).
pub fn digamma_shift(l: f64, steps: u32) -> Result<f64> {
    let mut acc = digamma(l)?;
    for k in 0..steps {
        let z = l + f64::from(k);
        check_pole(z)?;
        acc += 1.0 / z;
    }
    Ok(acc)
}

/// ψ₁(l + steps) = ψ₁(l) − Σ_{k<steps} 1/(l+k)².
pub fn trigamma_shift(l: f64, steps: u32) -> Result<f64> {
    let mut acc = trigamma(l)?;
    for k in 0..steps {
        let z = l + f64::from(k);
        check_pole(z)?;
        acc -= 1.0 / (z * z);
    }
    Ok(acc)
}

/// Truncated Laurent data at x = −l:
/// f(−l+ε) ≈ leading / ε^pole_order + sub_leading / ε^(pole_order−1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegIntExpansion {
    pub l: u32,
    pub pole_order: u32,
    pub leading: f64,
    pub sub_leading: f64,
}

impl NegIntExpansion {
    /// Evaluates the truncated expansion at offset `eps` from the pole.
    pub fn eval(&self, eps: f64) -> f64 {
        let p = self.pole_order as i32;
        self.leading / eps.powi(p) + self.sub_leading / eps.powi(p - 1)
    }
}

fn factorial(l: u32) -> f64 {
    (1..=l).map(f64::from).product()
}

fn harmonic_digamma(l: u32) -> f64 {
    // ψ₀(l+1) = −γ + H_l
    -EULER_GAMMA + (1..=l).map(|k| 1.0 / f64::from(k)).sum::<f64>()
}

/// Γ(−l+ε) = (−1)^l / (l! ε) · (1 + ψ₀(l+1) ε + …)
pub fn neg_int_expansion_gamma(l: u32) -> NegIntExpansion {
    let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
    let leading = sign / factorial(l);
    NegIntExpansion {
        l,
        pole_order: 1,
        leading,
        sub_leading: leading * harmonic_digamma(l),
    }
}

/// ψ₀(−l+ε) = −1/ε + ψ₀(l+1) + …
pub fn neg_int_expansion_digamma(l: u32) -> NegIntExpansion {
    NegIntExpansion {
        l,
        pole_order: 1,
        leading: -1.0,
        sub_leading: harmonic_digamma(l),
    }
}

/// ψ₁(−l+ε) = 1/ε² + O(1)
pub fn neg_int_expansion_trigamma(l: u32) -> NegIntExpansion {
    NegIntExpansion {
        l,
        pole_order: 2,
        leading: 1.0,
        sub_leading: 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn gamma_reference_values() {
        let g5 = log_gamma_signed(5.0).unwrap();
        assert_eq!(g5.sign, 1);
        assert!(rel(g5.value(), 24.0) < 1e-14);
        assert!((g5.log_magnitude - 24f64.ln()).abs() < 1e-14);
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-14);
    }

    #[test]
    fn gamma_negative_half_integer_matches_downward_recurrence() {
        // Γ(x) = Γ(x+1)/x from Γ(1/2) = √π
        let mut g = PI.sqrt();
        let mut x = 0.5;
        while x > -2.5 {
            x -= 1.0;
            g /= x;
        }
        let v = log_gamma_signed(-2.5).unwrap();
        assert_eq!(v.sign, -1);
        assert!(rel(v.value(), g) < 1e-13);
        assert!((v.value().abs() - 0.945_308_7).abs() < 1e-7);
    }

    #[test]
    fn gamma_non_integer_against_product_recurrence() {
        for &x in &[0.7, 1.3, 2.9, 7.25, 13.6] {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!(rel(lhs, rhs) < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn poles_are_rejected() {
        for x in [0.0, -1.0, -7.0, -3.0 + 5e-13] {
            assert!(matches!(log_gamma_signed(x), Err(Error::Pole { .. })));
            assert!(digamma(x).is_err());
            assert!(trigamma(x).is_err());
        }
        assert!(log_gamma_signed(-3.0 + 1e-9).is_ok());
    }

    #[test]
    fn recip_gamma_values() {
        assert_eq!(recip_gamma(0.0), 0.0);
        assert_eq!(recip_gamma(-3.0), 0.0);
        assert!(rel(recip_gamma(3.0), 0.5) < 1e-15);
        assert!(rel(recip_gamma(-2.5) * gamma(-2.5).unwrap(), 1.0) < 1e-13);
    }

    #[test]
    fn digamma_reference_values() {
        assert!(rel(digamma(1.0).unwrap(), -EULER_GAMMA) < 1e-14);
        assert!(rel(digamma(5.0).unwrap(), -EULER_GAMMA + 25.0 / 12.0) < 1e-14);
        let half = -EULER_GAMMA - 2.0 * 2f64.ln();
        assert!(rel(digamma(0.5).unwrap(), half) < 1e-13);
        assert!((digamma(0.5).unwrap() + 1.963_510_0).abs() < 1e-7);
        // reflection: ψ(1-x) - ψ(x) = π cot(πx)
        let x = -1.3;
        let lhs = digamma(1.0 - x).unwrap() - digamma(x).unwrap();
        assert!(rel(lhs, PI / (PI * x).tan()) < 1e-12);
    }

    #[test]
    fn trigamma_reference_values() {
        let z2 = PI * PI / 6.0;
        assert!(rel(trigamma(1.0).unwrap(), z2) < 1e-14);
        assert!(rel(trigamma(2.0).unwrap(), z2 - 1.0) < 1e-14);
        let t5 = z2 - 1.0 - 0.25 - 1.0 / 9.0 - 1.0 / 16.0;
        assert!(rel(trigamma(5.0).unwrap(), t5) < 1e-13);
        assert!((t5 - 0.221_323_0).abs() < 1e-7);
        // ψ₁(1/2) = π²/2
        assert!(rel(trigamma(0.5).unwrap(), PI * PI / 2.0) < 1e-13);
    }

    #[test]
    fn shift_recurrences() {
        assert!(rel(digamma_shift(1.0, 4).unwrap(), digamma(5.0).unwrap()) < 1e-14);
        assert_eq!(digamma_shift(1.0, 0).unwrap(), digamma(1.0).unwrap());
        assert!(rel(trigamma_shift(1.0, 1).unwrap(), PI * PI / 6.0 - 1.0) < 1e-14);
        assert!(rel(digamma_shift(-2.5, 6).unwrap(), digamma(3.5).unwrap()) < 1e-12);
        assert!(matches!(digamma_shift(-2.0, 3), Err(Error::Pole { .. })));
        assert!(matches!(trigamma_shift(-2.5, 3).map(|_| ()), Ok(())));
    }

    #[test]
    fn gamma_expansion_coefficients() {
        assert_eq!(neg_int_expansion_gamma(0).leading, 1.0);
        assert_eq!(neg_int_expansion_gamma(2).leading, 0.5);
        let e1 = neg_int_expansion_gamma(1);
        assert!((e1.sub_leading + (1.0 - EULER_GAMMA)).abs() < 1e-15);
    }

    #[test]
    fn gamma_sub_leading_matches_fit() {
        // ε·Γ(−1+ε) = leading + sub_leading·ε + O(ε²): fit by a symmetric slope
        let f = |e: f64| e * gamma(-1.0 + e).unwrap();
        let h = 1e-4;
        let slope = (f(h) - f(-h)) / (2.0 * h);
        let e1 = neg_int_expansion_gamma(1);
        assert!((slope - e1.sub_leading).abs() < 1e-6);
        assert!(((f(h) + f(-h)) / 2.0 - e1.leading).abs() < 1e-6);
    }

    #[test]
    fn signed_log_arithmetic() {
        let a = SignedLogValue::from_f64(-3.0);
        let b = SignedLogValue::from_f64(0.5);
        assert!(rel((a * b).value(), -1.5) < 1e-15);
        assert!(rel((a / b).value(), -6.0) < 1e-15);
        assert!((a * SignedLogValue::ZERO).is_zero());
        assert_eq!(a.powi(2).sign, 1);
        let s = signed_log_sum([a, b, SignedLogValue::ZERO, SignedLogValue::from_f64(2.5)]);
        assert!(s.is_zero() || s.value().abs() < 1e-15);
        let big = SignedLogValue {
            log_magnitude: 800.0,
            sign: 1,
        };
        let s = signed_log_sum([big, big]);
        assert!((s.log_magnitude - (800.0 + 2f64.ln())).abs() < 1e-12);
    }
}
