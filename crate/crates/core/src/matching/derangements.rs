//! Fractions of permutations avoiding one or two forbidden images per
//! position: derangements (`pi(i) != i`) and the ménage pattern
//! (`pi(i) != i`, `pi(i) != i+1 mod n`).

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::models::random_permutation;

/// Largest `n` accepted by the exact and enumeration modes.
pub const EXACT_STAT_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForbiddenPattern {
    FixedPoint,
    Menage,
}

impl ForbiddenPattern {
    fn forbidden(self, n: usize) -> Vec<Vec<usize>> {
        (0..n)
            .map(|i| match self {
                ForbiddenPattern::FixedPoint => vec![i],
                ForbiddenPattern::Menage => vec![i, (i + 1) % n],
            })
            .collect()
    }

    fn avoids(self, p: &[usize]) -> bool {
        let n = p.len();
        p.iter().enumerate().all(|(i, &x)| match self {
            ForbiddenPattern::FixedPoint => x != i,
            ForbiddenPattern::Menage => x != i && x != (i + 1) % n,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StatMode {
    /// Closed-form counts.
    Exact,
    /// Exhaustive count over subsets of used images.
    Enumerate,
    Sample {
        trials: usize,
    },
}

/// `D(n)` by `D(n) = (n-1)(D(n-1) + D(n-2))`, `D(0) = 1`, `D(1) = 0`.
pub fn derangement_count(n: usize) -> u128 {
    let (mut a, mut b) = (1u128, 0u128);
    if n == 0 {
        return a;
    }
    for k in 2..=n {
        let next = (k as u128 - 1) * (a + b);
        a = b;
        b = next;
    }
    b
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Ménage numbers by Touchard's formula, `n >= 2`.
pub fn menage_count(n: usize) -> u128 {
    assert!(n >= 2, "the ménage pattern needs n >= 2");
    let mut pos = 0u128;
    let mut neg = 0u128;
    for k in 0..=n {
        // 2n/(2n-k) * C(2n-k, k) = C(2n-k, k) + C(2n-k-1, k-1)
        let coef = binomial(2 * n - k, k)
            + if k > 0 {
                binomial(2 * n - k - 1, k - 1)
            } else {
                0
            };
        let term = coef * factorial(n - k);
        if k % 2 == 0 {
            pos += term;
        } else {
            neg += term;
        }
    }
    pos - neg
}

/// Permutations of `0..n` with `p(i)` outside `forbidden[i]` for all `i`,
/// by dynamic programming over the set of used images.
pub fn count_avoiding(forbidden: &[Vec<usize>]) -> u128 {
    let n = forbidden.len();
    assert!(n <= 24, "count_avoiding is exponential in n");
    let mut dp = vec![0u128; 1 << n];
    dp[0] = 1;
    for mask in 0..(1usize << n) {
        let ways = dp[mask];
        if ways == 0 {
            continue;
        }
        let pos = mask.count_ones() as usize;
        if pos == n {
            continue;
        }
        for img in 0..n {
            if mask & (1 << img) == 0 && !forbidden[pos].contains(&img) {
                dp[mask | (1 << img)] += ways;
            }
        }
    }
    dp[(1 << n) - 1]
}

/// Fraction of permutations of `n` points avoiding `pattern`.
pub fn derangement_stats<R: Rng + ?Sized>(
    n: usize,
    pattern: ForbiddenPattern,
    mode: StatMode,
    rng: &mut R,
) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n", "must be >= 1"));
    }
    if pattern == ForbiddenPattern::Menage && n < 2 {
        return Err(invalid("n", "the ménage pattern needs n >= 2"));
    }
    let exhaustive = matches!(mode, StatMode::Exact | StatMode::Enumerate);
    if exhaustive && n > EXACT_STAT_CAP {
        return Err(Error::EnumerationCap {
            size: factorial(n) as f64,
            cap: factorial(EXACT_STAT_CAP) as usize,
        });
    }
    let count = match mode {
        StatMode::Exact => match pattern {
            ForbiddenPattern::FixedPoint => derangement_count(n),
            ForbiddenPattern::Menage => menage_count(n),
        },
        StatMode::Enumerate => count_avoiding(&pattern.forbidden(n)),
        StatMode::Sample { trials } => {
            if trials == 0 {
                return Err(invalid("trials", "must be >= 1"));
            }
            let hits = (0..trials)
                .filter(|_| pattern.avoids(&random_permutation(n, rng)))
                .count();
            return Ok(hits as f64 / trials as f64);
        }
    };
    Ok(count as f64 / factorial(n) as f64)
}
