use rand::Rng as _;
use rand_distr::{Distribution, Geometric};

use crate::error::{Error, Result};
use crate::rng::rng;
use crate::triples::{Triple, TripleSystem};

/// `B_{n,p}`: every triple of `[n]^3` present independently with probability `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomTripleSystem {
    pub n: usize,
    pub p: f64,
    pub hyperedges: Vec<Triple>,
}

/// Draws `B_{n,p}` by geometric skipping over the `n^3` triple ids.
pub fn sample_bnp(n: usize, p: f64, seed: u64) -> Result<RandomTripleSystem> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::OutOfRange(format!("probability {p} not in (0, 1]")));
    }
    let mut rng = rng(seed);
    let total = (n * n * n) as u64;
    let mut hyperedges = Vec::new();
    if p == 1.0 {
        hyperedges.extend((0..total).map(|x| Triple::from_id(x as usize, n)));
    } else {
        let geo = Geometric::new(p).map_err(|e| Error::OutOfRange(e.to_string()))?;
        let mut x = geo.sample(&mut rng);
        while x < total {
            hyperedges.push(Triple::from_id(x as usize, n));
            x = x.saturating_add(1).saturating_add(geo.sample(&mut rng));
        }
    }
    // keep the generator used even for p = 1 so streams stay aligned
    let _ = rng.random::<u32>();
    Ok(RandomTripleSystem { n, p, hyperedges })
}

/// Deletes, simultaneously, every hyperedge meeting another in two
/// coordinates. The survivors form a partial Latin square.
pub fn g_star_filter(b: &RandomTripleSystem) -> TripleSystem {
    let n = b.n;
    let mut rc = vec![0u8; n * n];
    let mut rs = vec![0u8; n * n];
    let mut cs = vec![0u8; n * n];
    let bump = |v: &mut u8| *v = v.saturating_add(1);
    for t in &b.hyperedges {
        let (r, c, s) = (t.r as usize, t.c as usize, t.s as usize);
        bump(&mut rc[r * n + c]);
        bump(&mut rs[r * n + s]);
        bump(&mut cs[c * n + s]);
    }
    let kept: Vec<Triple> = b
        .hyperedges
        .iter()
        .copied()
        .filter(|t| {
            let (r, c, s) = (t.r as usize, t.c as usize, t.s as usize);
            rc[r * n + c] == 1 && rs[r * n + s] == 1 && cs[c * n + s] == 1
        })
        .collect();
    TripleSystem::from_latin_unsorted(n, kept)
}

/// `e^{-24 alpha} alpha^8 n^4`.
pub fn expected_nondegenerate_cuboctahedra(n: usize, alpha: f64) -> f64 {
    (-24.0 * alpha).exp() * alpha.powi(8) * (n as f64).powi(4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_order_two_filters_to_nothing() {
        let b = sample_bnp(2, 1.0, 0).unwrap();
        assert_eq!(b.hyperedges.len(), 8);
        assert!(g_star_filter(&b).is_empty());
    }

    #[test]
    fn sparse_draws_survive() {
        let b = sample_bnp(50, 1e-5, 3).unwrap();
        let f = g_star_filter(&b);
        assert!(b.hyperedges.len() < 10);
        assert_eq!(f.len(), b.hyperedges.len());
    }

    #[test]
    fn density_is_about_p() {
        let b = sample_bnp(40, 0.01, 11).unwrap();
        let expect = 640.0;
        assert!((b.hyperedges.len() as f64 - expect).abs() < 5.0 * expect.sqrt());
        assert!(TripleSystem::new(40, g_star_filter(&b).triples().to_vec()).is_ok());
    }

    #[test]
    fn expectation_formula() {
        assert!((expected_nondegenerate_cuboctahedra(150, 0.2) - 10.664).abs() < 0.01);
    }
}
