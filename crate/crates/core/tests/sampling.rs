use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vn_entropy::ensemble::sample_spectrum;
use vn_entropy::SystemDims;

// For m = n = 2 the largest eigenvalue has CDF (2x - 1)^3 on [1/2, 1].
#[test]
fn largest_eigenvalue_matches_distribution() {
    let dims = SystemDims::new(2, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let samples = 20_000;
    let mut maxima: Vec<f64> = (0..samples)
        .map(|_| {
            let s = sample_spectrum(dims, &mut rng).unwrap();
            s.values().iter().copied().fold(f64::MIN, f64::max)
        })
        .collect();
    maxima.sort_by(f64::total_cmp);
    let cdf = |x: f64| (2.0 * x - 1.0).clamp(0.0, 1.0).powi(3);
    let n = samples as f64;
    let d = maxima
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max);
    // 0.1% critical value
    assert!(d < 1.9495 / n.sqrt(), "KS statistic {d}");
}

#[test]
fn spectra_lie_on_simplex() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (m, n) in [(1, 3), (2, 7), (4, 4), (5, 9)] {
        let dims = SystemDims::new(m, n).unwrap();
        for _ in 0..50 {
            let s = sample_spectrum(dims, &mut rng).unwrap();
            assert_eq!(s.len(), m);
            assert!(s.values().iter().all(|&v| v > 0.0));
            assert!((s.values().iter().sum::<f64>() - 1.0).abs() < 1e-13);
            let e = vn_entropy::ensemble::entropy_of(&s);
            assert!((0.0..=(m as f64).ln() + 1e-15).contains(&e));
        }
    }
}
