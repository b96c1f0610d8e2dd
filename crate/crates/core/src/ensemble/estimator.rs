//! Streaming central moments with an exact pairwise merge.
//!
//! Updates and merges follow the one-pass formulas of Pébay (2008). The
//! third central moment is carried because the fourth cannot be merged
//! without it.

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EstimatorState {
    pub count: u64,
    pub mean_acc: f64,
    pub m2_acc: f64,
    pub m3_acc: f64,
    pub m4_acc: f64,
}

impl EstimatorState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        let n1 = self.count as f64;
        self.count += 1;
        let n = self.count as f64;
        let delta = x - self.mean_acc;
        let delta_n = delta / n;
        let delta_n2 = delta_n * delta_n;
        let term1 = delta * delta_n * n1;
        self.mean_acc += delta_n;
        self.m4_acc += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * self.m2_acc
            - 4.0 * delta_n * self.m3_acc;
        self.m3_acc += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * self.m2_acc;
        self.m2_acc += term1;
    }

    pub fn merge(&self, other: &EstimatorState) -> EstimatorState {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        let delta = other.mean_acc - self.mean_acc;
        let d2 = delta * delta;
        let d3 = d2 * delta;
        let d4 = d2 * d2;
        EstimatorState {
            count: self.count + other.count,
            mean_acc: self.mean_acc + delta * nb / n,
            m2_acc: self.m2_acc + other.m2_acc + d2 * na * nb / n,
            m3_acc: self.m3_acc
                + other.m3_acc
                + d3 * na * nb * (na - nb) / (n * n)
                + 3.0 * delta * (na * other.m2_acc - nb * self.m2_acc) / n,
            m4_acc: self.m4_acc
                + other.m4_acc
                + d4 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
                + 6.0 * d2 * (na * na * other.m2_acc + nb * nb * self.m2_acc) / (n * n)
                + 4.0 * delta * (na * other.m3_acc - nb * self.m3_acc) / n,
        }
    }

    pub fn mean(&self) -> f64 {
        self.mean_acc
    }

    /// Unbiased sample variance; zero with fewer than two observations.
    pub fn sample_variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2_acc / (self.count - 1) as f64).max(0.0)
        }
    }

    pub fn population_variance(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.m2_acc / self.count as f64).max(0.0)
        }
    }

    /// Mean of squares, E[x²] = mean² + population variance.
    pub fn raw_second_moment(&self) -> f64 {
        self.mean_acc * self.mean_acc + self.population_variance()
    }

    pub fn mean_standard_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.sample_variance() / self.count as f64).sqrt()
        }
    }

    /// Sample excess kurtosis, m4·n/m2² − 3.
    pub fn excess_kurtosis(&self) -> f64 {
        if self.m2_acc == 0.0 {
            0.0
        } else {
            self.count as f64 * self.m4_acc / (self.m2_acc * self.m2_acc) - 3.0
        }
    }
}

impl FromIterator<f64> for EstimatorState {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = EstimatorState::new();
        for x in iter {
            s.push(x);
        }
        s
    }
}

/// Delete-one-group jackknife standard error of `statistic` over `groups`.
pub fn jackknife_standard_error<F>(groups: &[EstimatorState], statistic: F) -> f64
where
    F: Fn(&EstimatorState) -> f64,
{
    let b = groups.len();
    if b < 2 {
        return 0.0;
    }
    let mut prefix = vec![EstimatorState::new(); b + 1];
    for i in 0..b {
        prefix[i + 1] = prefix[i].merge(&groups[i]);
    }
    let mut suffix = vec![EstimatorState::new(); b + 1];
    for i in (0..b).rev() {
        suffix[i] = groups[i].merge(&suffix[i + 1]);
    }
    let leave_out: Vec<f64> = (0..b)
        .map(|i| statistic(&prefix[i].merge(&suffix[i + 1])))
        .collect();
    let bf = b as f64;
    let centre = leave_out.iter().sum::<f64>() / bf;
    let ss: f64 = leave_out.iter().map(|t| (t - centre).powi(2)).sum();
    ((bf - 1.0) / bf * ss).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_pass(xs: &[f64]) -> (f64, f64, f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let c = |p: i32| xs.iter().map(|x| (x - mean).powi(p)).sum::<f64>();
        (mean, c(2), c(3), c(4))
    }

    #[test]
    fn matches_two_pass_moments() {
        let xs = [0.3, 1.7, -2.2, 4.0, 0.9, 0.0, 3.3];
        let s: EstimatorState = xs.iter().copied().collect();
        let (mean, m2, m3, m4) = two_pass(&xs);
        assert!((s.mean() - mean).abs() < 1e-14);
        assert!((s.m2_acc - m2).abs() < 1e-12);
        assert!((s.m3_acc - m3).abs() < 1e-12);
        assert!((s.m4_acc - m4).abs() < 1e-11);
    }

    #[test]
    fn empty_and_constant_streams() {
        let e = EstimatorState::new();
        assert_eq!(e.sample_variance(), 0.0);
        assert_eq!(e.merge(&e), e);
        let s: EstimatorState = std::iter::repeat_n(0.0, 50).collect();
        assert_eq!(s.sample_variance(), 0.0);
        assert_eq!(s.mean_standard_error(), 0.0);
    }

    #[test]
    fn jackknife_of_mean_matches_classical_error() {
        // For the mean with equal groups, the group jackknife is close to s/√N.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let groups: Vec<EstimatorState> = (0..40)
            .map(|_| (0..250).map(|_| rng.random_range(0.0..1.0)).collect())
            .collect();
        let total = groups.iter().fold(EstimatorState::new(), |a, b| a.merge(b));
        let jk = jackknife_standard_error(&groups, |s| s.mean());
        let classical = total.mean_standard_error();
        assert!((jk / classical - 1.0).abs() < 0.35, "{jk} vs {classical}");
    }

    proptest! {
        #[test]
        fn split_merge_reproduces_single_pass(
            xs in prop::collection::vec(-10.0f64..10.0, 2..200),
            cut in 0usize..200,
        ) {
            let cut = cut % xs.len();
            let whole: EstimatorState = xs.iter().copied().collect();
            let left: EstimatorState = xs[..cut].iter().copied().collect();
            let right: EstimatorState = xs[cut..].iter().copied().collect();
            for merged in [left.merge(&right), right.merge(&left)] {
                prop_assert_eq!(merged.count, whole.count);
                prop_assert!((merged.mean() - whole.mean()).abs() <= 1e-12);
                let scale = whole.m2_acc.abs().max(1.0);
                prop_assert!((merged.m2_acc - whole.m2_acc).abs() <= 1e-12 * scale);
                let scale = whole.m4_acc.abs().max(1.0);
                prop_assert!((merged.m4_acc - whole.m4_acc).abs() <= 1e-12 * scale);
                prop_assert!(merged.sample_variance() >= 0.0);
            }
        }

        #[test]
        fn merge_is_associative(
            a in prop::collection::vec(-5.0f64..5.0, 1..50),
            b in prop::collection::vec(-5.0f64..5.0, 1..50),
            c in prop::collection::vec(-5.0f64..5.0, 1..50),
        ) {
            let (a, b, c): (EstimatorState, EstimatorState, EstimatorState) = (
                a.into_iter().collect(), b.into_iter().collect(), c.into_iter().collect());
            let l = a.merge(&b).merge(&c);
            let r = a.merge(&b.merge(&c));
            prop_assert!((l.mean() - r.mean()).abs() <= 1e-12);
            prop_assert!((l.m2_acc - r.m2_acc).abs() <= 1e-12 * l.m2_acc.abs().max(1.0));
            prop_assert!((l.m3_acc - r.m3_acc).abs() <= 1e-12 * l.m4_acc.abs().max(1.0));
            prop_assert!((l.m4_acc - r.m4_acc).abs() <= 1e-12 * l.m4_acc.abs().max(1.0));
        }
    }
}
