use rand::Rng;

use crate::square::LatinSquare;

/// `n x n x n` array with entries in {-1, 0, 1} whose axis-parallel lines
/// all sum to 1. With no -1 entry it is a Latin square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceCube {
    n: usize,
    f: Vec<i8>,
    improper: Option<(usize, usize, usize)>,
}

impl IncidenceCube {
    pub fn from_square(sq: &LatinSquare) -> Self {
        let n = sq.order();
        let mut f = vec![0i8; n * n * n];
        for r in 0..n {
            for c in 0..n {
                f[(r * n + c) * n + sq.get(r, c) as usize] = 1;
            }
        }
        IncidenceCube { n, f, improper: None }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize, s: usize) -> i8 {
        self.f[(r * self.n + c) * self.n + s]
    }

    #[inline]
    fn add(&mut self, r: usize, c: usize, s: usize, d: i8) {
        self.f[(r * self.n + c) * self.n + s] += d;
    }

    pub fn is_proper(&self) -> bool {
        self.improper.is_none()
    }

    pub fn improper_cell(&self) -> Option<(usize, usize, usize)> {
        self.improper
    }

    pub fn to_square(&self) -> Option<LatinSquare> {
        if !self.is_proper() {
            return None;
        }
        let n = self.n;
        let cells = (0..n * n)
            .map(|rc| (0..n).find(|&s| self.f[rc * n + s] == 1).expect("proper cube has a 1 per cell") as u16)
            .collect();
        Some(LatinSquare::from_cells_unchecked(n, cells))
    }

    /// Checks every line sum and the at-most-one-negative rule.
    pub fn check_invariants(&self) -> bool {
        let n = self.n;
        let mut negatives = 0;
        for a in 0..n {
            for b in 0..n {
                let (mut s1, mut s2, mut s3) = (0i32, 0i32, 0i32);
                for x in 0..n {
                    s1 += self.at(a, b, x) as i32;
                    s2 += self.at(a, x, b) as i32;
                    s3 += self.at(x, a, b) as i32;
                }
                if s1 != 1 || s2 != 1 || s3 != 1 {
                    return false;
                }
            }
        }
        for (i, &v) in self.f.iter().enumerate() {
            if !(-1..=1).contains(&v) {
                return false;
            }
            if v == -1 {
                negatives += 1;
                let s = i % n;
                let c = (i / n) % n;
                let r = i / (n * n);
                if self.improper != Some((r, c, s)) {
                    return false;
                }
            }
        }
        negatives == usize::from(self.improper.is_some())
    }

    /// Cells with value 1 along the three lines through `(r, c, s)`.
    fn ones_on_lines(&self, r: usize, c: usize, s: usize) -> ([usize; 2], [usize; 2], [usize; 2], [usize; 3]) {
        let n = self.n;
        let mut sym = [usize::MAX; 2];
        let mut row = [usize::MAX; 2];
        let mut col = [usize::MAX; 2];
        let mut k = [0usize; 3];
        for x in 0..n {
            if self.at(r, c, x) == 1 {
                sym[k[0].min(1)] = x;
                k[0] += 1;
            }
            if self.at(x, c, s) == 1 {
                row[k[1].min(1)] = x;
                k[1] += 1;
            }
            if self.at(r, x, s) == 1 {
                col[k[2].min(1)] = x;
                k[2] += 1;
            }
        }
        (sym, row, col, k)
    }
}

/// One move of the Jacobson-Matthews chain.
pub fn jm_step<R: Rng + ?Sized>(cube: &mut IncidenceCube, rng: &mut R) {
    let n = cube.n;
    if n < 2 {
        return;
    }
    let (r, c, s, s2, r2, c2) = match cube.improper {
        None => {
            let (r, c, s) = loop {
                let (r, c, s) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
                if cube.at(r, c, s) == 0 {
                    break (r, c, s);
                }
            };
            let (sym, row, col, _) = cube.ones_on_lines(r, c, s);
            (r, c, s, sym[0], row[0], col[0])
        }
        Some((r, c, s)) => {
            let (sym, row, col, _) = cube.ones_on_lines(r, c, s);
            let pick = |v: [usize; 2], b: bool| if b { v[1] } else { v[0] };
            (r, c, s, pick(sym, rng.random()), pick(row, rng.random()), pick(col, rng.random()))
        }
    };
    cube.add(r, c, s, 1);
    cube.add(r2, c2, s, 1);
    cube.add(r2, c, s2, 1);
    cube.add(r, c2, s2, 1);
    cube.add(r, c, s2, -1);
    cube.add(r2, c, s, -1);
    cube.add(r, c2, s, -1);
    cube.add(r2, c2, s2, -1);
    cube.improper = (cube.at(r2, c2, s2) == -1).then_some((r2, c2, s2));
    debug_assert!(n > 8 || cube.check_invariants());
}
