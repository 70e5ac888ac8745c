use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::square::LatinSquare;

/// Number of `k x k` Latin subsquares.
///
/// For each `k`-set of rows, columns are bucketed by the set of symbols they
/// show on those rows; a subsquare is any `k` columns from one bucket.
pub fn count_subsquares(sq: &LatinSquare, k: usize) -> Result<u64> {
    let n = sq.order();
    if !(2..=4).contains(&k) {
        return Err(Error::OutOfRange(format!("subsquare order {k} not in 2..=4")));
    }
    if n > 40 {
        return Err(Error::OutOfRange(format!("order {n} above 40")));
    }
    if k > n {
        return Ok(0);
    }
    let mut rows: Vec<usize> = (0..k).collect();
    let mut buckets: HashMap<u64, u64> = HashMap::new();
    let mut total = 0u64;
    loop {
        buckets.clear();
        for c in 0..n {
            let mut syms: Vec<u16> = rows.iter().map(|&r| sq.get(r, c)).collect();
            syms.sort_unstable();
            let key = syms.iter().fold(0u64, |acc, &s| acc << 16 | s as u64);
            *buckets.entry(key).or_default() += 1;
        }
        total += buckets.values().map(|&m| binomial(m, k as u64)).sum::<u64>();
        if !next_combination(&mut rows, n) {
            break;
        }
    }
    Ok(total)
}

pub(crate) fn binomial(m: u64, k: u64) -> u64 {
    if k > m {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (m - i) / (i + 1))
}

/// Advances a sorted combination of `0..n`; false when exhausted.
pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::count_intercalates;

    #[test]
    fn whole_square_is_a_subsquare() {
        assert_eq!(count_subsquares(&LatinSquare::cyclic(3), 3).unwrap(), 1);
    }

    #[test]
    fn order_two_matches_intercalates() {
        for sq in [LatinSquare::cyclic(6), LatinSquare::elementary_abelian(3).unwrap()] {
            assert_eq!(count_subsquares(&sq, 2).unwrap(), count_intercalates(&sq));
        }
    }

    #[test]
    fn range_checks() {
        assert!(count_subsquares(&LatinSquare::cyclic(4), 5).is_err());
        assert!(count_subsquares(&LatinSquare::cyclic(41), 2).is_err());
    }
}
