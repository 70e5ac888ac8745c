//! Random Latin squares and rectangles.

mod cube;
mod enumerate;
mod rectangle;

pub use cube::{jm_step, IncidenceCube};
pub use enumerate::enumerate_squares;
pub use rectangle::{sample_rectangle, sample_rectangle_counted};

use serde::{Deserialize, Serialize};

use crate::rng::{rng, Rng};
use crate::square::LatinSquare;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    /// Proper-state visits before the first sample; `None` means `10 n^3`.
    pub burn_in: Option<u64>,
    /// Proper-state visits between samples; `None` means `n^3`.
    pub thin: Option<u64>,
    /// Rejection attempts allowed per rectangle.
    pub max_attempts: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { seed: 0, burn_in: None, thin: None, max_attempts: 10_000_000 }
    }
}

impl SamplerConfig {
    pub fn with_seed(seed: u64) -> Self {
        SamplerConfig { seed, ..Default::default() }
    }

    pub fn burn_in_for(&self, n: usize) -> u64 {
        self.burn_in.unwrap_or(10 * (n as u64).pow(3))
    }

    pub fn thin_for(&self, n: usize) -> u64 {
        self.thin.unwrap_or((n as u64).pow(3)).max(1)
    }
}

/// A Jacobson-Matthews chain started from the cyclic square, yielding a
/// square after burn-in and then every `thin` proper-state visits.
pub struct JmChain {
    cube: IncidenceCube,
    rng: Rng,
    next_gap: u64,
    thin: u64,
}

impl JmChain {
    pub fn new(n: usize, config: &SamplerConfig) -> Self {
        Self::with_rng(n, config, rng(config.seed))
    }

    pub fn with_rng(n: usize, config: &SamplerConfig, rng: Rng) -> Self {
        JmChain {
            cube: IncidenceCube::from_square(&LatinSquare::cyclic(n)),
            rng,
            next_gap: config.burn_in_for(n),
            thin: config.thin_for(n),
        }
    }

    fn advance(&mut self, visits: u64) -> LatinSquare {
        let mut left = visits;
        loop {
            if self.cube.order() < 2 || left == 0 && self.cube.is_proper() {
                break;
            }
            jm_step(&mut self.cube, &mut self.rng);
            if self.cube.is_proper() {
                left = left.saturating_sub(1);
            }
        }
        self.cube.to_square().expect("chain stops on a proper state")
    }
}

impl Iterator for JmChain {
    type Item = LatinSquare;

    fn next(&mut self) -> Option<LatinSquare> {
        let gap = self.next_gap;
        self.next_gap = self.thin;
        Some(self.advance(gap))
    }
}

/// One square from a fresh chain seeded by `config.seed`.
pub fn sample_square(n: usize, config: &SamplerConfig) -> LatinSquare {
    JmChain::new(n, config).next().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_one() {
        let sq = sample_square(1, &SamplerConfig::default());
        assert_eq!(sq.cells(), &[0]);
    }

    #[test]
    fn deterministic() {
        let cfg = SamplerConfig::with_seed(42);
        assert_eq!(sample_square(9, &cfg), sample_square(9, &cfg));
        let a: Vec<_> = JmChain::new(6, &cfg).take(3).collect();
        let b: Vec<_> = JmChain::new(6, &cfg).take(3).collect();
        assert_eq!(a, b);
        assert_ne!(sample_square(9, &cfg), sample_square(9, &SamplerConfig::with_seed(43)));
    }
}
