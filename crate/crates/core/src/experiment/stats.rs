//! Order statistics for the evaluation harness. Quartiles use Tukey hinges:
//! the median of each half, the middle element shared when the count is odd.

/// Median of an unsorted slice. Panics on empty input.
pub fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    median_sorted(&sorted)
}

fn median_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    assert!(n > 0);
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// (q1, median, q3) by Tukey hinges.
pub fn quartiles(values: &[f64]) -> (f64, f64, f64) {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = sorted.len();
    let med = median_sorted(&sorted);
    if n == 1 {
        return (sorted[0], med, sorted[0]);
    }
    let half = (n + 1) / 2;
    let lower = &sorted[..half];
    let upper = &sorted[n - half..];
    (median_sorted(lower), med, median_sorted(upper))
}

pub fn interquartile_range(values: &[f64]) -> f64 {
    let (q1, _, q3) = quartiles(values);
    q3 - q1
}

/// Ordinary least squares fit of y over x. Returns (slope, slope standard
/// error); the standard error is NaN with fewer than three points.
pub fn ols_slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    assert!(x.len() >= 2);
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    if x.len() < 3 {
        return (slope, f64::NAN);
    }
    let intercept = my - slope * mx;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (intercept + slope * a);
            r * r
        })
        .sum();
    let se = (sse / (n - 2.0) / sxx).sqrt();
    (slope, se)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent oracle: selection-free scan for the k-th order statistic.
    fn median_oracle(values: &[f64]) -> f64 {
        let kth = |k: usize| -> f64 {
            let mut best = f64::NEG_INFINITY;
            // k-th smallest by counting: O(n^2) but independent of sorting.
            for &candidate in values {
                let below = values.iter().filter(|&&v| v < candidate).count();
                let equal = values.iter().filter(|&&v| v == candidate).count();
                if below <= k && k < below + equal {
                    best = candidate;
                }
            }
            best
        };
        let n = values.len();
        if n % 2 == 1 {
            kth(n / 2)
        } else {
            0.5 * (kth(n / 2 - 1) + kth(n / 2))
        }
    }

    #[test]
    fn median_matches_counting_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..40);
            let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-50.0..50.0)).collect();
            assert_eq!(median(&values), median_oracle(&values));
        }
    }

    #[test]
    fn quartiles_of_small_sets() {
        let (q1, med, q3) = quartiles(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!((q1, med, q3), (1.5, 2.5, 3.5));
        let (q1, med, q3) = quartiles(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!((q1, med, q3), (2.0, 3.0, 4.0));
    }

    #[test]
    fn slope_recovers_line() {
        let x: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v + 2.0).collect();
        let (slope, se) = ols_slope(&x, &y);
        assert!((slope - 3.0).abs() < 1e-9);
        assert!(se.abs() < 1e-9);
    }

    #[test]
    fn noisy_flat_line_has_wide_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (slope, se) = ols_slope(&x, &y);
        assert!((slope - 1.96 * se) < 0.0 && 0.0 < (slope + 1.96 * se));
    }
}
