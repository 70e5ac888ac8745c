//! Fast counters against brute-force enumeration.

use std::collections::{BTreeMap, HashSet};

use latinlab::count::{
    count_configuration, count_cuboctahedra_nondegenerate, count_cuboctahedra_total, count_intercalates,
    count_subsquares, cuboctahedra_report, girth, ColoredTripleSystem, CuboctClass, Girth,
};
use latinlab::sample::{enumerate_squares, sample_square, SamplerConfig};
use latinlab::LatinSquare;

fn squares(orders: &[usize], per_order: usize) -> Vec<LatinSquare> {
    let mut out = Vec::new();
    for &n in orders {
        for i in 0..per_order {
            let cfg = SamplerConfig { seed: 1000 * n as u64 + i as u64, burn_in: Some(200), thin: None, max_attempts: 1 };
            out.push(sample_square(n, &cfg));
        }
    }
    out
}

fn shared(a: [usize; 2], b: [usize; 2]) -> u8 {
    let a: HashSet<usize> = a.into_iter().collect();
    let b: HashSet<usize> = b.into_iter().collect();
    a.intersection(&b).count() as u8
}

/// Every ordered 8-tuple of indices, classified by coincidences.
fn brute_cuboctahedra(sq: &LatinSquare) -> (u64, u64, BTreeMap<CuboctClass, u64>) {
    let n = sq.order();
    let l = |r: usize, c: usize| sq.get(r, c);
    let mut total = 0;
    let mut nondeg = 0;
    let mut classes = BTreeMap::new();
    for r1 in 0..n {
        for r2 in 0..n {
            for c1 in 0..n {
                for c2 in 0..n {
                    for s1 in 0..n {
                        for s2 in 0..n {
                            for t1 in 0..n {
                                if l(r1, c1) != l(s1, t1) || l(r2, c1) != l(s2, t1) {
                                    continue;
                                }
                                for t2 in 0..n {
                                    if l(r1, c2) != l(s1, t2) || l(r2, c2) != l(s2, t2) {
                                        continue;
                                    }
                                    total += 1;
                                    let rows: HashSet<_> = [r1, r2, s1, s2].into_iter().collect();
                                    let cols: HashSet<_> = [c1, c2, t1, t2].into_iter().collect();
                                    let syms: HashSet<_> = [l(r1, c1), l(r1, c2), l(r2, c1), l(r2, c2)].into_iter().collect();
                                    if rows.len() == 4 && cols.len() == 4 && syms.len() == 4 {
                                        nondeg += 1;
                                    }
                                    let same = (r1, r2, c1, c2) == (s1, s2, t1, t2);
                                    let class = match (r1 == r2, c1 == c2) {
                                        (true, true) if same => CuboctClass::SameCell,
                                        (true, true) => CuboctClass::CellPair,
                                        (true, false) if same => CuboctClass::SameRowPair,
                                        (true, false) => CuboctClass::RowPairs,
                                        (false, true) if same => CuboctClass::SameColumnPair,
                                        (false, true) => CuboctClass::ColumnPairs,
                                        (false, false) => CuboctClass::Full {
                                            shared_rows: shared([r1, r2], [s1, s2]),
                                            shared_cols: shared([c1, c2], [t1, t2]),
                                            repeated: l(r1, c1) == l(r2, c2) || l(r1, c2) == l(r2, c1),
                                        },
                                    };
                                    *classes.entry(class).or_insert(0) += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    (total, nondeg, classes)
}

fn brute_intercalates(sq: &LatinSquare) -> u64 {
    let n = sq.order();
    let mut k = 0;
    for r1 in 0..n {
        for r2 in r1 + 1..n {
            for c1 in 0..n {
                for c2 in c1 + 1..n {
                    if sq.get(r1, c1) == sq.get(r2, c2) && sq.get(r1, c2) == sq.get(r2, c1) {
                        k += 1;
                    }
                }
            }
        }
    }
    k
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

fn brute_subsquares(sq: &LatinSquare, k: usize) -> u64 {
    let n = sq.order();
    let sets = subsets(n, k);
    let mut count = 0;
    for rows in &sets {
        for cols in &sets {
            let syms: HashSet<u16> = rows.iter().flat_map(|&r| cols.iter().map(move |&c| sq.get(r, c))).collect();
            if syms.len() == k {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn cuboctahedra_match_brute_force() {
    for sq in squares(&[2, 3, 4, 5, 6], 3).iter().chain([LatinSquare::cyclic(5)].iter()) {
        let (total, nondeg, classes) = brute_cuboctahedra(sq);
        assert_eq!(count_cuboctahedra_total(sq), total);
        assert_eq!(count_cuboctahedra_nondegenerate(sq), nondeg);
        let rep = cuboctahedra_report(sq);
        assert_eq!(rep.total, total);
        let fast: BTreeMap<_, _> = rep.breakdown.into_iter().filter(|&(_, v)| v > 0).collect();
        assert_eq!(fast, classes);
    }
}

#[test]
fn intercalates_match_brute_force() {
    for sq in squares(&[1, 2, 5, 8, 10], 4) {
        assert_eq!(count_intercalates(&sq), brute_intercalates(&sq));
    }
}

#[test]
fn subsquares_match_brute_force() {
    for sq in squares(&[4, 6, 8], 3) {
        for k in 2..=4 {
            assert_eq!(count_subsquares(&sq, k).unwrap(), brute_subsquares(&sq, k), "n={} k={k}", sq.order());
        }
    }
}

#[test]
fn configuration_counts_intercalates() {
    // ordering the rows and the columns fixes the symbol map, so every
    // intercalate has 4 labelled embeddings
    for sq in squares(&[4, 6], 3) {
        let x = count_configuration(&ColoredTripleSystem::intercalate(), &sq.to_triples()).unwrap();
        assert_eq!(x, 4 * brute_intercalates(&sq));
        let e = count_configuration(&ColoredTripleSystem::single_edge(), &sq.to_triples()).unwrap();
        assert_eq!(e, (sq.order() * sq.order()) as u64);
    }
}

#[test]
fn girth_six_iff_intercalate_free_on_all_order_four() {
    let all = enumerate_squares(4).unwrap();
    assert_eq!(all.len(), 576);
    let mut free = 0;
    for sq in &all {
        let g = girth(&sq.to_triples(), 6).unwrap();
        let none = count_intercalates(sq) == 0;
        assert_eq!(g.exceeds(6), none);
        free += none as usize;
    }
    // every order-4 square contains an intercalate
    assert_eq!(free, 0);
    assert_eq!(girth(&LatinSquare::cyclic(5).to_triples(), 6).unwrap(), Girth::GreaterThan(6));
}
