use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::{rng, Rng};
use crate::sample::SamplerConfig;
use crate::square::LatinRectangle;

/// Uniform `k x n` Latin rectangle by rejection: rows are independent
/// uniform permutations and the whole tuple is redrawn on any column clash.
/// Stopping at the first clashing row does not change the accepted law.
pub fn sample_rectangle(k: usize, n: usize, config: &SamplerConfig) -> Result<LatinRectangle> {
    sample_rectangle_counted(k, n, config.max_attempts, &mut rng(config.seed)).map(|(r, _)| r)
}

/// As [`sample_rectangle`] with a caller-owned generator; also returns the
/// number of attempts used.
pub fn sample_rectangle_counted(k: usize, n: usize, max_attempts: u64, rng: &mut Rng) -> Result<(LatinRectangle, u64)> {
    if k > n {
        return Err(Error::OutOfRange(format!("{k} rows exceed order {n}")));
    }
    let mut cells = vec![0u16; k * n];
    let mut col_used = vec![0u64; n * n.div_ceil(64)];
    let words = n.div_ceil(64);
    let mut perm: Vec<u16> = (0..n as u16).collect();
    'attempt: for attempt in 1..=max_attempts {
        col_used.iter_mut().for_each(|w| *w = 0);
        for r in 0..k {
            perm.shuffle(rng);
            for (c, &s) in perm.iter().enumerate() {
                let (w, b) = (c * words + s as usize / 64, s as usize % 64);
                if col_used[w] >> b & 1 == 1 {
                    continue 'attempt;
                }
                col_used[w] |= 1 << b;
            }
            cells[r * n..(r + 1) * n].copy_from_slice(&perm);
        }
        return Ok((LatinRectangle::from_cells_unchecked(k, n, cells), attempt));
    }
    Err(Error::RetryBudgetExhausted(max_attempts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_row_is_accepted_at_once() {
        let (rect, tries) = sample_rectangle_counted(1, 30, 10, &mut rng(1)).unwrap();
        assert_eq!(tries, 1);
        assert_eq!(rect.rows(), 1);
    }

    #[test]
    fn output_is_latin() {
        for seed in 0..20 {
            let cfg = SamplerConfig::with_seed(seed);
            let rect = sample_rectangle(3, 12, &cfg).unwrap();
            assert!(LatinRectangle::new(3, 12, rect.cells().to_vec()).is_ok());
        }
    }

    #[test]
    fn budget_error() {
        let cfg = SamplerConfig { max_attempts: 1, ..SamplerConfig::with_seed(5) };
        let mut failures = 0;
        for seed in 0..50 {
            let cfg = SamplerConfig { seed, ..cfg };
            if matches!(sample_rectangle(6, 6, &cfg), Err(Error::RetryBudgetExhausted(1))) {
                failures += 1;
            }
        }
        assert!(failures > 40);
    }
}
