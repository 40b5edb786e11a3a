use statrs::distribution::{Discrete, Poisson};

/// Two-sided 95% normal quantile.
pub const WILSON_Z: f64 = 1.959963984540054;

/// Wilson score interval for `successes` out of `trials`; `[0, 1]` when
/// there are no trials.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

fn poisson_pmf(lambda: f64, k: u64) -> f64 {
    if lambda == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    Poisson::new(lambda).map(|d| d.pmf(k)).unwrap_or(0.0)
}

/// Total variation distance between the empirical law of `histogram`
/// (`histogram[k]` = number of samples equal to `k`) and `Pois(lambda)`.
/// Poisson mass above the histogram range counts in full.
pub fn poisson_tv(histogram: &[u64], lambda: f64) -> f64 {
    let total: u64 = histogram.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let mut diff = 0.0;
    let mut covered = 0.0;
    for (k, &c) in histogram.iter().enumerate() {
        let q = poisson_pmf(lambda, k as u64);
        covered += q;
        diff += (c as f64 / total as f64 - q).abs();
    }
    0.5 * (diff + (1.0 - covered).max(0.0))
}

/// `histogram[k]` = number of entries equal to `k`.
pub fn histogram(counts: &[u64]) -> Vec<u64> {
    let top = counts.iter().copied().max().unwrap_or(0) as usize;
    let mut h = vec![0u64; top + 1];
    for &c in counts {
        h[c as usize] += 1;
    }
    h
}

/// Sample mean and unbiased variance.
pub fn mean_variance(xs: &[u64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().map(|&x| x as f64).sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let ss = xs.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>();
    (mean, ss / (n - 1.0))
}

/// Pearson correlation; `None` when either side is constant.
pub fn pearson(xs: &[u64], ys: &[u64]) -> Option<f64> {
    assert_eq!(xs.len(), ys.len());
    let (mx, vx) = mean_variance(xs);
    let (my, vy) = mean_variance(ys);
    if vx == 0.0 || vy == 0.0 {
        return None;
    }
    let n = xs.len() as f64;
    let cov = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| (x as f64 - mx) * (y as f64 - my))
        .sum::<f64>()
        / (n - 1.0);
    Some(cov / (vx * vy).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_edges() {
        let (lo, hi) = wilson_interval(0, 500);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 3.0 / 500.0 * 1.5);
        let (lo, hi) = wilson_interval(500, 500);
        assert!(lo > 0.99 && hi == 1.0);
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo + hi - 1.0).abs() < 1e-12);
        assert!((hi - 0.5966).abs() < 1e-3);
    }

    #[test]
    fn tv_matches_direct_sum() {
        let h = [70u64, 20, 8, 2];
        let lambda = 0.4f64;
        let mut fact = 1.0;
        let mut direct = 0.0;
        let mut mass = 0.0;
        for (k, &c) in h.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            let q = (-lambda).exp() * lambda.powi(k as i32) / fact;
            mass += q;
            direct += (c as f64 / 100.0 - q).abs();
        }
        direct = 0.5 * (direct + 1.0 - mass);
        assert!((poisson_tv(&h, lambda) - direct).abs() < 1e-12);
        assert_eq!(poisson_tv(&[10], 0.0), 0.0);
    }

    #[test]
    fn histogram_totals() {
        let xs = [0u64, 2, 2, 1, 0, 0];
        let h = histogram(&xs);
        assert_eq!(h, vec![3, 1, 2]);
        assert_eq!(h.iter().sum::<u64>(), xs.len() as u64);
        assert_eq!(pearson(&xs, &xs).map(|r| (r * 1e9).round()), Some(1e9));
        assert_eq!(pearson(&xs, &[1; 6]), None);
    }
}
