//! Exact sphere counts for products, from the factors' sphere counts.

use crate::group::Side;

/// `c[n] = Σ_i a[i]·b[n−i]`, the sphere sizes of a split direct product.
/// `None` on overflow. The result has the length of the shorter input.
pub fn convolve(a: &[u128], b: &[u128]) -> Option<Vec<u128>> {
    let len = a.len().min(b.len());
    (0..len)
        .map(|n| {
            (0..=n).try_fold(0u128, |acc, i| acc.checked_add(a[i].checked_mul(b[n - i])?))
        })
        .collect()
}

/// Counting tables for a free product `A * B` with the union generating set.
///
/// A normal form of length `n` is a sequence of alternating non-trivial
/// syllables whose factor lengths add up to `n`, so everything follows from
/// the factor sphere sizes.
#[derive(Clone, Debug)]
pub struct FreeProductCounts {
    factor: [Vec<u128>; 2],
    // tails[side][m]: normal forms of length m whose first syllable is not
    // on `side` (the identity counts once at m = 0).
    tails: [Vec<u128>; 2],
    total: Vec<u128>,
}

impl FreeProductCounts {
    /// `left[k]`, `right[k]` are the factor sphere sizes for `k = 0..=n_max`.
    /// `None` on overflow.
    pub fn new(left: Vec<u128>, right: Vec<u128>) -> Option<Self> {
        let n_max = left.len().min(right.len());
        let factor = [left, right];
        let mut tails = [vec![0u128; n_max], vec![0u128; n_max]];
        let mut total = vec![0u128; n_max];
        for m in 0..n_max {
            for side in Side::BOTH {
                let other = side.other();
                let mut t = u128::from(m == 0);
                for k in 1..=m {
                    t = t.checked_add(factor[other.index()][k].checked_mul(tails[other.index()][m - k])?)?;
                }
                tails[side.index()][m] = t;
            }
            let mut s = u128::from(m == 0);
            for side in Side::BOTH {
                for k in 1..=m {
                    s = s.checked_add(factor[side.index()][k].checked_mul(tails[side.index()][m - k])?)?;
                }
            }
            total[m] = s;
        }
        Some(FreeProductCounts { factor, tails, total })
    }

    /// Largest radius covered by the tables.
    pub fn max_radius(&self) -> usize {
        self.total.len() - 1
    }

    pub fn factor_count(&self, side: Side, k: usize) -> u128 {
        self.factor[side.index()][k]
    }

    /// Normal forms of length `m` that do not start with a `side` syllable.
    /// By inversion this is also the number that do not end with one.
    pub fn tail(&self, side: Side, m: usize) -> u128 {
        self.tails[side.index()][m]
    }

    /// `|S_m|` of the free product.
    pub fn sphere(&self, m: usize) -> u128 {
        self.total[m]
    }

    pub fn spheres(&self) -> &[u128] {
        &self.total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_product_of_two_copies_of_z_is_f2() {
        let z: Vec<u128> = (0..10).map(|k| if k == 0 { 1 } else { 2 }).collect();
        let c = FreeProductCounts::new(z.clone(), z).unwrap();
        for n in 1..10 {
            assert_eq!(c.sphere(n), 4 * 3u128.pow(n as u32 - 1));
        }
    }

    #[test]
    fn z2_star_z_matches_growth_series() {
        // Coefficients of 1/(1/f_A + 1/f_B − 1) with f_A = ((1+z)/(1−z))²,
        // f_B = (1+z)/(1−z), expanded independently.
        let expected = [1u128, 6, 26, 110, 466, 1974, 8362, 35422, 150050, 635622, 2692538, 11405774, 48315634];
        let z2: Vec<u128> = (0..13).map(|k| if k == 0 { 1 } else { 4 * k as u128 }).collect();
        let z: Vec<u128> = (0..13).map(|k| if k == 0 { 1 } else { 2 }).collect();
        let c = FreeProductCounts::new(z2, z).unwrap();
        assert_eq!(c.spheres(), &expected);
    }

    #[test]
    fn convolution() {
        assert_eq!(convolve(&[1, 2, 3], &[1, 1, 1, 1]).unwrap(), vec![1, 3, 6]);
        assert!(convolve(&[1, u128::MAX], &[1, 2]).is_none());
    }
}
