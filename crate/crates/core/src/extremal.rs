//! `Phi(N)`: the fewest filled cells of a partial Latin square with at least
//! `N` intercalates, with its inverse profile `I*(m)`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::count::count_intercalates_partial;
use crate::error::{Error, Result};
use crate::triples::{Triple, TripleSystem};

const EMPTY: u8 = u8::MAX;

/// Largest supported oracle cap (grids up to 6x6).
pub const ORACLE_MAX_CELLS: usize = 12;
pub const DEFAULT_ORACLE_CELLS: usize = 8;

/// A partial square inside a `b x b` grid on symbols `0..b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Grid {
    b: usize,
    cells: Vec<u8>,
}

impl Grid {
    fn intercalates(&self) -> u64 {
        let b = self.b;
        let g = |r: usize, c: usize| self.cells[r * b + c];
        let mut t = 0;
        for i in 0..b {
            for j in i + 1..b {
                for x in 0..b {
                    for y in x + 1..b {
                        let (a, bb) = (g(i, x), g(i, y));
                        if a != EMPTY && bb != EMPTY && g(j, y) == a && g(j, x) == bb {
                            t += 1;
                        }
                    }
                }
            }
        }
        t
    }

    /// Least row-major string over row and column permutations, with symbols
    /// renamed by first appearance.
    fn canonical(&self, perms: &[Vec<usize>]) -> Grid {
        let b = self.b;
        let mut best: Option<Vec<u8>> = None;
        let mut buf = vec![EMPTY; b * b];
        for rp in perms {
            for cp in perms {
                let mut rename = [EMPTY; 16];
                let mut next = 0u8;
                let mut worse = false;
                let mut better = best.is_none();
                for i in 0..b {
                    for j in 0..b {
                        let v = self.cells[rp[i] * b + cp[j]];
                        let w = if v == EMPTY {
                            EMPTY
                        } else {
                            if rename[v as usize] == EMPTY {
                                rename[v as usize] = next;
                                next += 1;
                            }
                            rename[v as usize]
                        };
                        let k = i * b + j;
                        buf[k] = w;
                        if !better {
                            let cur = best.as_ref().unwrap()[k];
                            if w < cur {
                                better = true;
                            } else if w > cur {
                                worse = true;
                                break;
                            }
                        }
                    }
                    if worse {
                        break;
                    }
                }
                if better && !worse {
                    best = Some(buf.clone());
                }
            }
        }
        Grid { b, cells: best.unwrap() }
    }

    fn to_triples(&self) -> Vec<Triple> {
        let b = self.b;
        (0..b * b)
            .filter(|&k| self.cells[k] != EMPTY)
            .map(|k| Triple::new((k / b) as u16, (k % b) as u16, self.cells[k] as u16))
            .collect()
    }
}

fn permutations(b: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..b).collect();
    permute(&mut p, 0, &mut out);
    out
}

fn permute(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == p.len() {
        out.push(p.clone());
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, out);
        p.swap(k, i);
    }
}

/// Pads a partial square with isolated cells (fresh row, column and symbol
/// each) until it has exactly `m` cells.
fn pad(triples: &[Triple], base: usize, m: usize) -> TripleSystem {
    let extra = m.saturating_sub(triples.len());
    let n = base + extra;
    let mut all = triples.to_vec();
    for i in 0..extra {
        let v = (base + i) as u16;
        all.push(Triple::new(v, v, v));
    }
    TripleSystem::from_latin_unsorted(n, all)
}

/// Exhaustive results for all partial squares with at most `max_cells` cells.
#[derive(Clone, Debug)]
pub struct PhiOracle {
    pub max_cells: usize,
    /// `profile[m] = I*(m)` for `m <= max_cells`.
    pub profile: Vec<u64>,
    /// Best witness with at most `m` cells, unpadded, per `m`.
    witnesses: Vec<Option<Vec<Triple>>>,
    /// Canonical intercalate-containing states per cell count.
    pub level_sizes: Vec<usize>,
    /// `(cells, intercalates, triangles)` for every state seen.
    pub states: Vec<(usize, u64, u64)>,
    grid: usize,
}

impl PhiOracle {
    /// Grows partial squares one cell at a time from a single intercalate,
    /// keeping one canonical representative per isomorphism class.
    ///
    /// A maximiser may be taken to have every cell in an intercalate, so it
    /// has at most `m/2` rows, columns and symbols; every such square arises
    /// from one of its intercalates by adding cells.
    pub fn build(max_cells: usize) -> Result<Self> {
        if max_cells > ORACLE_MAX_CELLS {
            return Err(Error::OutOfRange(format!("oracle cap {max_cells} above {ORACLE_MAX_CELLS}")));
        }
        let b = (max_cells / 2).max(2);
        let perms = permutations(b);
        let mut profile = vec![0u64; max_cells + 1];
        let mut witnesses: Vec<Option<Vec<Triple>>> = vec![None; max_cells + 1];
        let mut level_sizes = vec![0usize; max_cells + 1];
        let mut states = Vec::new();
        if max_cells >= 4 {
            let mut base = Grid { b, cells: vec![EMPTY; b * b] };
            base.cells[0] = 0;
            base.cells[1] = 1;
            base.cells[b] = 1;
            base.cells[b + 1] = 0;
            let mut level: Vec<Grid> = vec![base.canonical(&perms)];
            for m in 4..=max_cells {
                level_sizes[m] = level.len();
                let mut best: Option<(u64, &Grid)> = None;
                for g in &level {
                    let k = g.intercalates();
                    states.push((m, k, triangle_count(&g.to_triples())));
                    if best.is_none_or(|(bk, _)| k > bk) {
                        best = Some((k, g));
                    }
                }
                let (bk, bg) = best.expect("levels are never empty");
                if bk > profile[m - 1] {
                    profile[m] = bk;
                    witnesses[m] = Some(bg.to_triples());
                } else {
                    profile[m] = profile[m - 1];
                    witnesses[m] = witnesses[m - 1].clone();
                }
                if m == max_cells {
                    break;
                }
                let mut next: HashSet<Grid> = HashSet::new();
                for g in &level {
                    for cell in 0..b * b {
                        if g.cells[cell] != EMPTY {
                            continue;
                        }
                        let (r, c) = (cell / b, cell % b);
                        for s in 0..b as u8 {
                            let clash = (0..b).any(|k| g.cells[r * b + k] == s || g.cells[k * b + c] == s);
                            if clash {
                                continue;
                            }
                            let mut child = g.clone();
                            child.cells[cell] = s;
                            next.insert(child.canonical(&perms));
                        }
                    }
                }
                let mut v: Vec<Grid> = next.into_iter().collect();
                v.sort_by(|a, b| a.cells.cmp(&b.cells));
                level = v;
            }
        }
        Ok(PhiOracle { max_cells, profile, witnesses, level_sizes, states, grid: b })
    }

    /// `I*(m)` and a witness with exactly `m` cells.
    pub fn max_intercalates(&self, m: usize) -> Result<(u64, TripleSystem)> {
        if m > self.max_cells {
            return Err(Error::OutOfRange(format!("m = {m} above oracle cap {}", self.max_cells)));
        }
        let w = self.witnesses[m].clone().unwrap_or_default();
        Ok((self.profile[m], pad(&w, self.grid, m)))
    }

    /// `min { m : I*(m) >= N }` on the oracle range.
    pub fn phi(&self, target: u64) -> Option<usize> {
        (0..=self.max_cells).find(|&m| self.profile[m] >= target)
    }

    /// The same value by scanning every enumerated state.
    pub fn phi_direct(&self, target: u64) -> Option<usize> {
        self.states.iter().filter(|s| s.1 >= target).map(|s| s.0).min()
    }
}

/// Convenience wrapper building a fresh oracle.
pub fn max_intercalates_oracle(m: usize) -> Result<(u64, TripleSystem)> {
    PhiOracle::build(m)?.max_intercalates(m)
}

/// Triangles of the tripartite graph of a partial square: rows, columns and
/// symbols as vertices, with `r-c`, `r-s`, `c-s` edges from every cell.
pub fn triangle_count(triples: &[Triple]) -> u64 {
    let n = triples.iter().map(|t| t.r.max(t.c).max(t.s) as usize + 1).max().unwrap_or(0);
    let mut rc = vec![false; n * n];
    let mut rs = vec![false; n * n];
    let mut cs = vec![false; n * n];
    for t in triples {
        let (r, c, s) = (t.r as usize, t.c as usize, t.s as usize);
        rc[r * n + c] = true;
        rs[r * n + s] = true;
        cs[c * n + s] = true;
    }
    let mut total = 0;
    for r in 0..n {
        for c in 0..n {
            if !rc[r * n + c] {
                continue;
            }
            total += (0..n).filter(|&s| rs[r * n + s] && cs[c * n + s]).count() as u64;
        }
    }
    total
}

/// Integer cube root.
fn icbrt(x: u64) -> u64 {
    let mut r = (x as f64).cbrt() as u64;
    while r.pow(3) > x {
        r -= 1;
    }
    while (r + 1).pow(3) <= x {
        r += 1;
    }
    r
}

/// `floor((4N)^{1/3})^2`.
pub fn phi_lower_bound(target: u64) -> u64 {
    icbrt(4 * target).pow(2)
}

/// Intercalates in the `(Z_2)^k` table: `4^k (2^k - 1) / 4`.
pub fn two_group_intercalates(k: u32) -> u64 {
    (1u64 << (2 * k)) * ((1u64 << k) - 1) / 4
}

fn block_diagonal(ks: &[u32]) -> TripleSystem {
    let n: usize = ks.iter().map(|&k| 1usize << k).sum();
    let mut triples = Vec::new();
    let mut off = 0usize;
    for &k in ks {
        let m = 1usize << k;
        for r in 0..m {
            for c in 0..m {
                triples.push(Triple::new((off + r) as u16, (off + c) as u16, (off + (r ^ c)) as u16));
            }
        }
        off += m;
    }
    TripleSystem::from_latin_unsorted(n, triples)
}

/// Largest target for which disjoint-block augmentation is searched.
const AUGMENT_LIMIT: u64 = 200_000;

/// An upper bound for `Phi(N)` with its witness.
///
/// The base construction is the smallest `(Z_2)^k` table with `2^k` above
/// `(4N + N^{3/4})^{1/3}`, enlarged until it has at least `N` intercalates.
/// When `N` falls between 2-group values, disjoint unions of smaller 2-group
/// tables are also tried (a small min-cost covering DP) and the cheaper
/// construction is returned.
pub fn phi_upper_bound(target: u64) -> Result<(u64, TripleSystem)> {
    if target == 0 {
        return Ok((0, TripleSystem::empty(0)));
    }
    let x = 4.0 * target as f64 + (target as f64).powf(0.75);
    let mut k = 0u32;
    while ((1u64 << k) as f64) <= x.cbrt() {
        k += 1;
    }
    while two_group_intercalates(k) < target {
        k += 1;
    }
    if k > 7 {
        return Err(Error::OutOfRange(format!("target {target} needs a 2^{k} table, beyond u16 witness range")));
    }
    let mut blocks = vec![k];
    if two_group_intercalates(k) != target && target <= AUGMENT_LIMIT {
        let alt = cheapest_blocks(target);
        let cells = |bs: &[u32]| bs.iter().map(|&j| 1u64 << (2 * j)).sum::<u64>();
        if cells(&alt) < cells(&blocks) {
            blocks = alt;
        }
    }
    let w = block_diagonal(&blocks);
    let got = count_intercalates_partial(&w);
    if got < target {
        return Err(Error::SearchFailed(format!("witness has {got} < {target} intercalates")));
    }
    Ok((w.len() as u64, w))
}

/// Multiset of block exponents with at least `target` intercalates in total
/// and the fewest cells.
fn cheapest_blocks(target: u64) -> Vec<u32> {
    let t = target as usize;
    let ks: Vec<u32> = (1..=7).collect();
    let mut best = vec![u64::MAX; t + 1];
    let mut choice = vec![0u32; t + 1];
    best[0] = 0;
    for rem in 1..=t {
        for &k in &ks {
            let i = two_group_intercalates(k) as usize;
            let cost = 1u64 << (2 * k);
            let prev = if i >= rem { 0 } else { best[rem - i] };
            if prev != u64::MAX && prev + cost < best[rem] {
                best[rem] = prev + cost;
                choice[rem] = k;
            }
        }
    }
    let mut out = Vec::new();
    let mut rem = t;
    while rem > 0 {
        let k = choice[rem];
        out.push(k);
        rem = rem.saturating_sub(two_group_intercalates(k) as usize);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhiRecord {
    #[serde(rename = "N")]
    pub target: u64,
    pub lower: u64,
    pub upper: u64,
    pub exact: Option<u64>,
    /// `upper / (4N)^{2/3}` and `lower / (4N)^{2/3}`.
    pub upper_ratio: f64,
    pub lower_ratio: f64,
    #[serde(skip)]
    pub witness: Option<TripleSystem>,
}

pub fn phi_report(target: u64, oracle: Option<&PhiOracle>) -> Result<PhiRecord> {
    if target == 0 {
        return Err(Error::OutOfRange("N must be at least 1".into()));
    }
    let lower = phi_lower_bound(target);
    let (upper, w) = phi_upper_bound(target)?;
    let scale = (4.0 * target as f64).powf(2.0 / 3.0);
    let exact = oracle.and_then(|o| o.phi(target)).map(|m| m as u64);
    let witness = match (exact, oracle) {
        (Some(m), Some(o)) => Some(o.max_intercalates(m as usize)?.1),
        _ => Some(w),
    };
    Ok(PhiRecord {
        target,
        lower,
        upper,
        exact,
        upper_ratio: upper as f64 / scale,
        lower_ratio: lower as f64 / scale,
        witness,
    })
}
