use serde::{Deserialize, Serialize};

use crate::count::{is_free_through, Hypergraph3};
use crate::error::{Error, Result};
use crate::process::indexed::IndexedSet;
use crate::rng::{rng, Rng};
use crate::triples::{Triple, TripleSystem, NONE};

/// How the next triple is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SelectionMode {
    /// Uniform pair-available candidates, rejected until girth-safe, with an
    /// exact-enumeration fallback after [`REJECTION_LIMIT`] misses.
    #[default]
    Rejection,
    /// Direct uniform draw from the maintained available set (needs `g <= 6`).
    Exact,
}

pub const REJECTION_LIMIT: u32 = 200;

/// No available triple remains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("process exhausted")]
pub struct Exhausted;

/// A running triangle removal process on `K_{n,n,n}`, optionally forbidding
/// configurations on at most `g` vertices (`g = 0`: unconstrained).
///
/// Girth at most 5 cannot occur in a partial Latin square and girth 6
/// configurations are exactly intercalates, so for `g <= 6` the set of
/// available triples is maintained exactly; larger `g` adds a bounded
/// search through each candidate.
pub struct ProcessState {
    n: usize,
    g: usize,
    chosen: Vec<Triple>,
    rc: Vec<u16>,
    rs: Vec<u16>,
    cs: Vec<u16>,
    pair_avail: IndexedSet,
    /// Pair-available and not completing an intercalate (only when `g >= 6`).
    safe: Option<IndexedSet>,
    hyper: Option<Hypergraph3>,
    rng: Rng,
    mode: SelectionMode,
    fallbacks: u64,
}

impl ProcessState {
    pub fn new(n: usize, g: usize, seed: u64, mode: SelectionMode) -> Result<Self> {
        Self::with_rng(n, g, rng(seed), mode)
    }

    pub fn with_rng(n: usize, g: usize, rng: Rng, mode: SelectionMode) -> Result<Self> {
        if n == 0 || n >= 1024 {
            return Err(Error::OutOfRange(format!("process order {n} not in 1..1024")));
        }
        if g != 0 && !(4..=12).contains(&g) {
            return Err(Error::OutOfRange(format!("girth bound {g} must be 0 or in 4..=12")));
        }
        if mode == SelectionMode::Exact && g > 6 {
            return Err(Error::Precondition("exact selection needs g <= 6".into()));
        }
        let n3 = n * n * n;
        Ok(ProcessState {
            n,
            g,
            chosen: Vec::new(),
            rc: vec![NONE; n * n],
            rs: vec![NONE; n * n],
            cs: vec![NONE; n * n],
            pair_avail: IndexedSet::full(n3),
            safe: (g >= 6).then(|| IndexedSet::full(n3)),
            hyper: (g > 6).then(|| Hypergraph3::new(3 * n)),
            rng,
            mode,
            fallbacks: 0,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn girth_bound(&self) -> usize {
        self.g
    }

    /// Steps taken so far.
    pub fn t(&self) -> u64 {
        self.chosen.len() as u64
    }

    pub fn chosen(&self) -> &[Triple] {
        &self.chosen
    }

    pub fn fallbacks(&self) -> u64 {
        self.fallbacks
    }

    pub fn to_triple_system(&self) -> TripleSystem {
        TripleSystem::from_latin_unsorted(self.n, self.chosen.clone())
    }

    pub fn pair_available(&self) -> usize {
        self.pair_avail.len()
    }

    /// Covered-pair projections `(r,c)`, `(r,s)`, `(c,s)` as bit vectors.
    pub fn covered_pairs(&self) -> [Vec<bool>; 3] {
        [&self.rc, &self.rs, &self.cs].map(|v| v.iter().map(|&x| x != NONE).collect())
    }

    #[inline]
    fn pair_free(&self, t: Triple) -> bool {
        let n = self.n;
        let (r, c, s) = (t.r as usize, t.c as usize, t.s as usize);
        self.rc[r * n + c] == NONE && self.rs[r * n + s] == NONE && self.cs[c * n + s] == NONE
    }

    /// Whether `t` and three chosen triples would form an intercalate.
    fn completes_intercalate(&self, t: Triple) -> bool {
        let n = self.n;
        let (r, c, s) = (t.r as usize, t.c as usize, t.s as usize);
        (0..n).any(|r2| {
            if r2 == r {
                return false;
            }
            let s2 = self.rc[r2 * n + c];
            if s2 == NONE {
                return false;
            }
            let c2 = self.rs[r * n + s2 as usize];
            c2 != NONE && self.rc[r2 * n + c2 as usize] == s as u16
        })
    }

    fn girth_safe_deep(&mut self, t: Triple) -> bool {
        let (n, g) = (self.n, self.g);
        let h = self.hyper.as_mut().expect("deep check only when g > 6");
        let id = h.push_triple(n, t);
        let ok = is_free_through(h, id, g);
        h.pop();
        ok
    }

    /// Full availability test from scratch, independent of the maintained sets.
    fn available_from_scratch(&mut self, t: Triple) -> bool {
        if !self.pair_free(t) {
            return false;
        }
        if self.g < 6 {
            return true;
        }
        if self.completes_intercalate(t) {
            return false;
        }
        self.g == 6 || self.girth_safe_deep(t)
    }

    /// Exact number of available triples at the current step.
    pub fn available_count(&mut self) -> u64 {
        match self.g {
            0..=5 => self.pair_avail.len() as u64,
            6 => self.safe.as_ref().unwrap().len() as u64,
            _ => {
                let cands: Vec<u32> = self.safe.as_ref().unwrap().items().to_vec();
                cands.into_iter().filter(|&x| self.girth_safe_deep(Triple::from_id(x as usize, self.n))).count()
                    as u64
            }
        }
    }

    /// Recount of the available set by brute force over all `n^3` triples.
    pub fn recount_available(&mut self) -> u64 {
        let n = self.n;
        (0..n * n * n).filter(|&x| self.available_from_scratch(Triple::from_id(x, n))).count() as u64
    }

    fn add(&mut self, t: Triple) {
        let n = self.n;
        let (a, b, d) = (t.r as usize, t.c as usize, t.s as usize);
        // newly blocked triples, computed before the indexes change
        let mut blocked = Vec::new();
        if self.safe.is_some() {
            for r2 in (0..n).filter(|&r2| r2 != a) {
                let (s, c) = (self.rc[r2 * n + b], self.rs[r2 * n + d]);
                if s != NONE && c != NONE {
                    blocked.push(Triple::new(a as u16, c, s));
                }
            }
            for c2 in (0..n).filter(|&c2| c2 != b) {
                let (s, r) = (self.rc[a * n + c2], self.cs[c2 * n + d]);
                if s != NONE && r != NONE {
                    blocked.push(Triple::new(r, b as u16, s));
                }
            }
            for s2 in (0..n).filter(|&s2| s2 != d) {
                let (r, c) = (self.cs[b * n + s2], self.rs[a * n + s2]);
                if r != NONE && c != NONE {
                    blocked.push(Triple::new(r, c, d as u16));
                }
            }
        }
        self.rc[a * n + b] = t.s;
        self.rs[a * n + d] = t.c;
        self.cs[b * n + d] = t.r;
        let drop = |x: usize, this: &mut Self| {
            this.pair_avail.remove(x);
            if let Some(s) = this.safe.as_mut() {
                s.remove(x);
            }
        };
        for k in 0..n {
            drop(Triple::new(t.r, t.c, k as u16).id(n), self);
            drop(Triple::new(t.r, k as u16, t.s).id(n), self);
            drop(Triple::new(k as u16, t.c, t.s).id(n), self);
        }
        if let Some(s) = self.safe.as_mut() {
            for x in blocked {
                s.remove(x.id(n));
            }
        }
        if let Some(h) = self.hyper.as_mut() {
            h.push_triple(n, t);
        }
        self.chosen.push(t);
    }

    fn draw_exact(&mut self) -> Option<Triple> {
        let n = self.n;
        let x = match self.g {
            0..=5 => self.pair_avail.sample(&mut self.rng)?,
            6 => self.safe.as_ref().unwrap().sample(&mut self.rng)?,
            _ => {
                let cands: Vec<u32> = self.safe.as_ref().unwrap().items().to_vec();
                let ok: Vec<u32> =
                    cands.into_iter().filter(|&x| self.girth_safe_deep(Triple::from_id(x as usize, n))).collect();
                if ok.is_empty() {
                    return None;
                }
                use rand::Rng as _;
                ok[self.rng.random_range(0..ok.len())] as usize
            }
        };
        Some(Triple::from_id(x, n))
    }

    fn draw_rejection(&mut self) -> Option<Triple> {
        let n = self.n;
        if self.g < 6 {
            return self.pair_avail.sample(&mut self.rng).map(|x| Triple::from_id(x, n));
        }
        if self.safe.as_ref().unwrap().is_empty() {
            return None;
        }
        for _ in 0..REJECTION_LIMIT {
            let x = self.pair_avail.sample(&mut self.rng)?;
            let t = Triple::from_id(x, n);
            if self.safe.as_ref().unwrap().contains(x) && (self.g == 6 || self.girth_safe_deep(t)) {
                return Some(t);
            }
        }
        self.fallbacks += 1;
        self.draw_exact()
    }

    /// Adds one uniformly random available triple.
    pub fn trp_step(&mut self) -> Result<Triple, Exhausted> {
        let t = match self.mode {
            SelectionMode::Exact => self.draw_exact(),
            SelectionMode::Rejection => self.draw_rejection(),
        }
        .ok_or(Exhausted)?;
        self.add(t);
        Ok(t)
    }
}
