use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, Violation};

pub(crate) const NONE: u16 = u16::MAX;

/// A filled cell `(row, column, symbol)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triple {
    pub r: u16,
    pub c: u16,
    pub s: u16,
}

impl Triple {
    pub const fn new(r: u16, c: u16, s: u16) -> Self {
        Triple { r, c, s }
    }

    /// Dense id in `0..n^3`.
    #[inline]
    pub fn id(self, n: usize) -> usize {
        (self.r as usize * n + self.c as usize) * n + self.s as usize
    }

    #[inline]
    pub fn from_id(id: usize, n: usize) -> Self {
        let s = id % n;
        let c = (id / n) % n;
        let r = id / (n * n);
        Triple::new(r as u16, c as u16, s as u16)
    }

    /// True when the two triples agree in at least two coordinates.
    pub fn conflicts(self, other: Triple) -> bool {
        let same = (self.r == other.r) as u8 + (self.c == other.c) as u8 + (self.s == other.s) as u8;
        same >= 2
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.c, self.s)
    }
}

/// A partial Latin square of order `n` stored as its set of triples.
///
/// Triples are kept sorted; three dense pair indexes give O(1) lookups
/// of the missing coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSystem {
    n: usize,
    triples: Vec<Triple>,
    rc: Vec<u16>,
    rs: Vec<u16>,
    cs: Vec<u16>,
    row_start: Vec<usize>,
}

/// Checks the Latin property of an arbitrary triple list.
pub fn check_triples(n: usize, triples: &[Triple]) -> Result<(), Violation> {
    let mut rc = vec![usize::MAX; n * n];
    let mut rs = vec![usize::MAX; n * n];
    let mut cs = vec![usize::MAX; n * n];
    for (i, &t) in triples.iter().enumerate() {
        if t.r as usize >= n || t.c as usize >= n || t.s as usize >= n {
            return Err(Violation::TripleOutOfRange { triple: t, n });
        }
        let (r, c, s) = (t.r as usize, t.c as usize, t.s as usize);
        for slot in [&mut rc[r * n + c], &mut rs[r * n + s], &mut cs[c * n + s]] {
            if *slot != usize::MAX {
                return Err(Violation::TripleConflict { first: triples[*slot], second: t });
            }
            *slot = i;
        }
    }
    Ok(())
}

impl TripleSystem {
    pub fn new(n: usize, mut triples: Vec<Triple>) -> Result<Self> {
        if n >= NONE as usize {
            return Err(crate::Error::OutOfRange(format!("order {n} too large")));
        }
        triples.sort_unstable();
        check_triples(n, &triples)?;
        Ok(Self::build(n, triples))
    }

    pub fn empty(n: usize) -> Self {
        Self::build(n, Vec::new())
    }

    /// Caller guarantees the triples are sorted and Latin.
    pub(crate) fn build(n: usize, triples: Vec<Triple>) -> Self {
        let mut rc = vec![NONE; n * n];
        let mut rs = vec![NONE; n * n];
        let mut cs = vec![NONE; n * n];
        let mut row_start = vec![0; n + 1];
        for t in &triples {
            let (r, c, s) = (t.r as usize, t.c as usize, t.s as usize);
            rc[r * n + c] = t.s;
            rs[r * n + s] = t.c;
            cs[c * n + s] = t.r;
            row_start[r + 1] += 1;
        }
        for r in 0..n {
            row_start[r + 1] += row_start[r];
        }
        TripleSystem { n, triples, rc, rs, cs, row_start }
    }

    /// Builds from triples already known to be Latin (sorts them).
    pub(crate) fn from_latin_unsorted(n: usize, mut triples: Vec<Triple>) -> Self {
        triples.sort_unstable();
        debug_assert!(check_triples(n, &triples).is_ok());
        Self::build(n, triples)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.triples.iter().copied()
    }

    /// Triples of row `r`, sorted by column.
    pub fn row(&self, r: usize) -> &[Triple] {
        &self.triples[self.row_start[r]..self.row_start[r + 1]]
    }

    #[inline]
    pub fn symbol_at(&self, r: usize, c: usize) -> Option<u16> {
        let v = self.rc[r * self.n + c];
        (v != NONE).then_some(v)
    }

    #[inline]
    pub fn column_of(&self, r: usize, s: usize) -> Option<u16> {
        let v = self.rs[r * self.n + s];
        (v != NONE).then_some(v)
    }

    #[inline]
    pub fn row_of(&self, c: usize, s: usize) -> Option<u16> {
        let v = self.cs[c * self.n + s];
        (v != NONE).then_some(v)
    }

    pub fn contains(&self, t: Triple) -> bool {
        (t.r as usize) < self.n && (t.c as usize) < self.n && self.symbol_at(t.r as usize, t.c as usize) == Some(t.s)
    }

    /// Whether `t` could be added without breaking the Latin property.
    pub fn accepts(&self, t: Triple) -> bool {
        let (r, c, s) = (t.r as usize, t.c as usize, t.s as usize);
        r < self.n
            && c < self.n
            && s < self.n
            && self.rc[r * self.n + c] == NONE
            && self.rs[r * self.n + s] == NONE
            && self.cs[c * self.n + s] == NONE
    }

    pub fn is_complete(&self) -> bool {
        self.triples.len() == self.n * self.n
    }
}
