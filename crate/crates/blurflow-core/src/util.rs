//! Small numeric helpers shared across modules.

/// Pairwise (cascade) summation. Order is fixed by the recursion, so results
/// are reproducible and the rounding error grows like O(log n).
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 64;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Dot product with pairwise accumulation.
pub fn pairwise_dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    const LEAF: usize = 64;
    if a.len() <= LEAF {
        return a.iter().zip(b).map(|(x, y)| x * y).sum();
    }
    let mid = a.len() / 2;
    pairwise_dot(&a[..mid], &b[..mid]) + pairwise_dot(&a[mid..], &b[mid..])
}

/// Smallest 5-smooth number (2^a 3^b 5^c) >= n. FFTs of these lengths avoid
/// the Bluestein fallback.
pub fn next_fast_len(n: usize) -> usize {
    assert!(n > 0);
    let mut best = usize::MAX;
    let mut p5 = 1usize;
    while p5 < best {
        let mut p53 = p5;
        while p53 < best {
            // round p53 * 2^k up to >= n
            let mut p = p53;
            while p < n {
                match p.checked_mul(2) {
                    Some(v) => p = v,
                    None => break,
                }
            }
            if p >= n && p < best {
                best = p;
            }
            match p53.checked_mul(3) {
                Some(v) => p53 = v,
                None => break,
            }
        }
        match p5.checked_mul(5) {
            Some(v) => p5 = v,
            None => break,
        }
    }
    best
}

/// Nearest odd integer to x (ties round up), never below `min` (odd).
pub fn nearest_odd(x: f64, min: usize) -> usize {
    debug_assert!(min % 2 == 1);
    let odd = 2.0 * ((x - 1.0) / 2.0).round() + 1.0;
    (odd.max(1.0) as usize).max(min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_lengths() {
        assert_eq!(next_fast_len(1), 1);
        assert_eq!(next_fast_len(7), 8);
        assert_eq!(next_fast_len(17), 18);
        assert_eq!(next_fast_len(97), 100);
        assert_eq!(next_fast_len(128), 128);
    }

    #[test]
    fn pairwise_matches_naive() {
        let v: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = v.iter().sum();
        assert!((pairwise_sum(&v) - naive).abs() < 1e-9);
    }

    #[test]
    fn odd_rounding() {
        assert_eq!(nearest_odd(41.0, 3), 41);
        assert_eq!(nearest_odd(40.0, 3), 41);
        assert_eq!(nearest_odd(2.2, 3), 3);
        assert_eq!(nearest_odd(8.9, 3), 9);
        assert_eq!(nearest_odd(1.0, 3), 3);
    }
}
