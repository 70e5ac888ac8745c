//! Cuboctahedra, counted as ordered tuples
//! `((r1, r2), (r1', r2'), (c1, c2), (c1', c2'))` with
//! `L[ri][cj] = L[ri'][cj']` for all `i, j`. Degenerate tuples are included.
//!
//! A tuple is an ordered pair of quadruples `(r1, r2, c1, c2)` sharing the
//! pattern `(L[r1][c1], L[r1][c2], L[r2][c1], L[r2][c2])`, so grouping
//! quadruples by pattern gives every count.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::square::LatinSquare;
use crate::triples::TripleSystem;

/// Coincidence class of a cuboctahedron.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CuboctClass {
    /// `r1 = r2`, `c1 = c2`, and both quadruples are the same cell.
    SameCell,
    /// Two distinct cells holding one symbol.
    CellPair,
    /// `c1 = c2`: the same 2x1 submatrix twice.
    SameColumnPair,
    /// Two distinct 2x1 submatrices with the same symbol pair.
    ColumnPairs,
    /// `r1 = r2`: the same 1x2 submatrix twice.
    SameRowPair,
    /// Two distinct 1x2 submatrices with the same symbol pair.
    RowPairs,
    /// Both quadruples span 2x2 submatrices. `shared_rows` / `shared_cols`
    /// count common rows and columns; `repeated` marks patterns with a
    /// repeated symbol (`L[r1][c1] = L[r2][c2]` or the other diagonal).
    Full { shared_rows: u8, shared_cols: u8, repeated: bool },
}

impl CuboctClass {
    pub const NONDEGENERATE: CuboctClass = CuboctClass::Full { shared_rows: 0, shared_cols: 0, repeated: false };
    /// The same 2x2 submatrix twice, four distinct entries.
    pub const SAME_SUBMATRIX: CuboctClass = CuboctClass::Full { shared_rows: 2, shared_cols: 2, repeated: false };

    pub fn label(&self) -> String {
        match *self {
            CuboctClass::SameCell => "same-cell".into(),
            CuboctClass::CellPair => "cell-pair".into(),
            CuboctClass::SameColumnPair => "same-column-pair".into(),
            CuboctClass::ColumnPairs => "column-pairs".into(),
            CuboctClass::SameRowPair => "same-row-pair".into(),
            CuboctClass::RowPairs => "row-pairs".into(),
            c if c == Self::NONDEGENERATE => "nondegenerate".into(),
            c if c == Self::SAME_SUBMATRIX => "same-submatrix".into(),
            CuboctClass::Full { shared_rows, shared_cols, repeated } => {
                format!("full-r{shared_rows}c{shared_cols}-{}", if repeated { "repeated" } else { "distinct" })
            }
        }
    }
}

impl fmt::Display for CuboctClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A total with its per-class breakdown; the breakdown sums to the total.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub total: u64,
    pub breakdown: BTreeMap<CuboctClass, u64>,
}

impl CountReport {
    pub fn class(&self, c: CuboctClass) -> u64 {
        self.breakdown.get(&c).copied().unwrap_or(0)
    }

    pub fn nondegenerate(&self) -> u64 {
        self.class(CuboctClass::NONDEGENERATE)
    }

    /// The breakdown without the nondegenerate class.
    pub fn degenerate(&self) -> BTreeMap<CuboctClass, u64> {
        self.breakdown.iter().filter(|(c, _)| **c != CuboctClass::NONDEGENERATE).map(|(c, v)| (*c, *v)).collect()
    }
}

#[inline]
fn pack4(a: u16, b: u16, c: u16, d: u16) -> u64 {
    (a as u64) << 48 | (b as u64) << 32 | (c as u64) << 16 | d as u64
}

#[inline]
fn unpack4(x: u64) -> [u16; 4] {
    [(x >> 48) as u16, (x >> 32) as u16, (x >> 16) as u16, x as u16]
}

/// All fully filled quadruples as `(pattern, (r1, r2, c1, c2))`, sorted.
fn patterns(ts: &TripleSystem, distinct_only: bool) -> Vec<(u64, u64)> {
    let n = ts.order();
    let mut out = Vec::new();
    for r1 in 0..n {
        let row1 = ts.row(r1);
        for r2 in 0..n {
            if distinct_only && r1 == r2 {
                continue;
            }
            for t1 in row1 {
                let Some(s21) = ts.symbol_at(r2, t1.c as usize) else { continue };
                for t2 in row1 {
                    if distinct_only && t1.c == t2.c {
                        continue;
                    }
                    let Some(s22) = ts.symbol_at(r2, t2.c as usize) else { continue };
                    let key = pack4(t1.s, t2.s, s21, s22);
                    out.push((key, pack4(r1 as u16, r2 as u16, t1.c, t2.c)));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

fn groups(v: &[(u64, u64)]) -> impl Iterator<Item = &[(u64, u64)]> {
    v.chunk_by(|a, b| a.0 == b.0)
}

fn pattern_distinct(key: u64) -> bool {
    let [a, b, c, d] = unpack4(key);
    a != b && a != c && a != d && b != c && b != d && c != d
}

fn shared(a: [u16; 2], b: [u16; 2]) -> u8 {
    if a[0] == a[1] {
        return (b.contains(&a[0])) as u8;
    }
    b.iter().filter(|x| a.contains(x)).count() as u8
}

fn classify(key: u64, q: u64, q2: u64) -> CuboctClass {
    let [r1, r2, c1, c2] = unpack4(q);
    let [s1, s2, t1, t2] = unpack4(q2);
    let same = q == q2;
    match (r1 == r2, c1 == c2) {
        (true, true) => {
            if same {
                CuboctClass::SameCell
            } else {
                CuboctClass::CellPair
            }
        }
        (true, false) => {
            if same {
                CuboctClass::SameRowPair
            } else {
                CuboctClass::RowPairs
            }
        }
        (false, true) => {
            if same {
                CuboctClass::SameColumnPair
            } else {
                CuboctClass::ColumnPairs
            }
        }
        (false, false) => {
            let [a, b, c, d] = unpack4(key);
            CuboctClass::Full {
                shared_rows: shared([r1, r2], [s1, s2]),
                shared_cols: shared([c1, c2], [t1, t2]),
                repeated: a == d || b == c,
            }
        }
    }
}

/// Total count for any partial Latin square (only fully filled quadruples count).
pub fn count_cuboctahedra_total_partial(ts: &TripleSystem) -> u64 {
    let p = patterns(ts, false);
    groups(&p).map(|g| (g.len() as u64).pow(2)).sum()
}

pub fn count_cuboctahedra_total(sq: &LatinSquare) -> u64 {
    count_cuboctahedra_total_fast(sq)
}

/// Square-only path: patterns only, no quadruple payload.
fn count_cuboctahedra_total_fast(sq: &LatinSquare) -> u64 {
    let n = sq.order();
    let mut keys = Vec::with_capacity(n.pow(4));
    for r1 in 0..n {
        for r2 in 0..n {
            let (a, b) = (sq.row(r1), sq.row(r2));
            for c1 in 0..n {
                for c2 in 0..n {
                    keys.push(pack4(a[c1], a[c2], b[c1], b[c2]));
                }
            }
        }
    }
    keys.sort_unstable();
    keys.chunk_by(|a, b| a == b).map(|g| (g.len() as u64).pow(2)).sum()
}

/// Nondegenerate count for any partial Latin square: four distinct rows,
/// four distinct columns and four distinct symbols.
///
/// Each nondegenerate tuple is a pair of quadruples in one distinct-symbol
/// pattern class whose row pairs and column pairs are disjoint; those pairs
/// are enumerated directly inside each class.
pub fn count_cuboctahedra_nondegenerate_partial(ts: &TripleSystem) -> u64 {
    let p = patterns(ts, true);
    let mut total = 0u64;
    for g in groups(&p) {
        if g.len() < 2 || !pattern_distinct(g[0].0) {
            continue;
        }
        for &(_, q) in g {
            let [r1, r2, c1, c2] = unpack4(q);
            for &(_, q2) in g {
                let [s1, s2, t1, t2] = unpack4(q2);
                if s1 != r1 && s1 != r2 && s2 != r1 && s2 != r2 && t1 != c1 && t1 != c2 && t2 != c1 && t2 != c2 {
                    total += 1;
                }
            }
        }
    }
    total
}

pub fn count_cuboctahedra_nondegenerate(sq: &LatinSquare) -> u64 {
    count_cuboctahedra_nondegenerate_partial(&sq.to_triples())
}

/// Full breakdown by [`CuboctClass`], nondegenerate included.
pub fn cuboctahedra_report_partial(ts: &TripleSystem) -> CountReport {
    let p = patterns(ts, false);
    let mut report = CountReport::default();
    let mut small: BTreeMap<CuboctClass, u64> = BTreeMap::new();
    for g in groups(&p) {
        let key = g[0].0;
        report.total += (g.len() as u64).pow(2);
        for &(_, q) in g {
            for &(_, q2) in g {
                *small.entry(classify(key, q, q2)).or_default() += 1;
            }
        }
    }
    report.breakdown = small;
    report
}

pub fn cuboctahedra_report(sq: &LatinSquare) -> CountReport {
    cuboctahedra_report_partial(&sq.to_triples())
}

/// Per-class counts of the degenerate cuboctahedra; they sum to
/// total minus nondegenerate.
pub fn classify_degenerate_cuboctahedra(sq: &LatinSquare) -> CountReport {
    let full = cuboctahedra_report(sq);
    let breakdown = full.degenerate();
    CountReport { total: breakdown.values().sum(), breakdown }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_tables_hit_n5() {
        for n in 1..=6usize {
            let sq = LatinSquare::cyclic(n);
            assert_eq!(count_cuboctahedra_total(&sq), (n as u64).pow(5));
            assert_eq!(count_cuboctahedra_total_partial(&sq.to_triples()), (n as u64).pow(5));
        }
    }

    #[test]
    fn report_partitions_total() {
        let sq = LatinSquare::elementary_abelian(2).unwrap();
        let rep = cuboctahedra_report(&sq);
        assert_eq!(rep.total, 1024);
        assert_eq!(rep.breakdown.values().sum::<u64>(), rep.total);
        assert_eq!(rep.class(CuboctClass::SameCell), 16);
        assert_eq!(rep.class(CuboctClass::CellPair), 16 * 3);
        assert_eq!(rep.nondegenerate(), count_cuboctahedra_nondegenerate(&sq));
    }

    #[test]
    fn order_two_has_no_nondegenerate() {
        assert_eq!(count_cuboctahedra_nondegenerate(&LatinSquare::cyclic(2)), 0);
    }
}
