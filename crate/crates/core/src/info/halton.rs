//! Radical-inverse (Halton) low-discrepancy sequences.

/// The first primes, used as Halton bases for successive dimensions.
pub const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Radical inverse of `index` in `base`: the base-`base` digits of `index`
/// mirrored about the radix point. For `index >= 1` the value lies in (0, 1).
pub fn halton(index: u64, base: u64) -> f64 {
    assert!(base >= 2, "halton base must be at least 2");
    let mut n = index;
    let mut numerator: u64 = 0;
    let mut denominator: u64 = 1;
    while n > 0 {
        numerator = numerator * base + n % base;
        denominator *= base;
        n /= base;
    }
    numerator as f64 / denominator as f64
}

/// Iterator over `halton(1, base), halton(2, base), ...`.
#[derive(Debug, Clone)]
pub struct HaltonSequence {
    base: u64,
    index: u64,
}

impl HaltonSequence {
    pub fn new(base: u64) -> Self {
        assert!(base >= 2, "halton base must be at least 2");
        Self { base, index: 0 }
    }
}

impl Iterator for HaltonSequence {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        self.index += 1;
        Some(halton(self.index, self.base))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn known_values() {
        assert_eq!(halton(1, 2), 0.5);
        assert_eq!(halton(2, 2), 0.25);
        assert_eq!(halton(3, 2), 0.75);
        assert_eq!(halton(1, 3), 1.0 / 3.0);
        assert_eq!(halton(2, 3), 2.0 / 3.0);
    }

    #[test]
    fn first_sixteen_base_two_fill_the_interval() {
        let mut v: Vec<f64> = HaltonSequence::new(2).take(16).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        assert_eq!(v.len(), 16);
        assert!(v.iter().all(|&x| x > 0.0 && x < 1.0));
        let mut gaps = vec![v[0], 1.0 - v[15]];
        gaps.extend(v.windows(2).map(|w| w[1] - w[0]));
        assert!(gaps.iter().all(|&g| g <= 1.0 / 8.0));
    }

    #[test]
    fn injective_over_two_to_the_twenty() {
        let set: HashSet<u64> = (1..=(1u64 << 20)).map(|i| halton(i, 2).to_bits()).collect();
        assert_eq!(set.len(), 1 << 20);
    }
}
