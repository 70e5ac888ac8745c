use crate::square::{LatinRectangle, LatinSquare};
use crate::triples::TripleSystem;

/// Intercalates among `k` full rows of length `n` stored row-major.
///
/// For each row pair the map "column of a symbol in row i -> its column in
/// row j" is a permutation; intercalates are exactly its 2-cycles.
fn count_rows(cells: &[u16], k: usize, n: usize) -> u64 {
    let mut pos = vec![0usize; n];
    let mut total = 0u64;
    for j in 1..k {
        let row_j = &cells[j * n..(j + 1) * n];
        for (c, &s) in row_j.iter().enumerate() {
            pos[s as usize] = c;
        }
        for i in 0..j {
            let row_i = &cells[i * n..(i + 1) * n];
            for x in 0..n {
                let y = pos[row_i[x] as usize];
                if y > x && pos[row_i[y] as usize] == x {
                    total += 1;
                }
            }
        }
    }
    total
}

pub fn count_intercalates(sq: &LatinSquare) -> u64 {
    count_rows(sq.cells(), sq.order(), sq.order())
}

pub fn count_intercalates_rect(rect: &LatinRectangle) -> u64 {
    count_rows(rect.cells(), rect.rows(), rect.order())
}

/// Works on any partial Latin square via the pair indexes: for two cells of
/// row `r`, the completing row is read off the (column, symbol) index.
pub fn count_intercalates_partial(ts: &TripleSystem) -> u64 {
    let mut total = 0u64;
    for r in 0..ts.order() {
        let row = ts.row(r);
        for (a, t1) in row.iter().enumerate() {
            for t2 in &row[a + 1..] {
                let Some(r2) = ts.row_of(t1.c as usize, t2.s as usize) else { continue };
                if (r2 as usize) > r && ts.symbol_at(r2 as usize, t2.c as usize) == Some(t1.s) {
                    total += 1;
                }
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(sq: &LatinSquare) -> u64 {
        let n = sq.order();
        let mut t = 0;
        for i in 0..n {
            for j in i + 1..n {
                for x in 0..n {
                    for y in x + 1..n {
                        if sq.get(i, x) == sq.get(j, y) && sq.get(i, y) == sq.get(j, x) {
                            t += 1;
                        }
                    }
                }
            }
        }
        t
    }

    #[test]
    fn small_cases() {
        assert_eq!(count_intercalates(&LatinSquare::cyclic(2)), 1);
        assert_eq!(count_intercalates(&LatinSquare::cyclic(3)), 0);
        assert_eq!(brute(&LatinSquare::cyclic(3)), 0);
        assert_eq!(count_intercalates(&LatinSquare::elementary_abelian(2).unwrap()), 12);
    }

    #[test]
    fn paths_agree() {
        for n in 1..10 {
            let sq = LatinSquare::cyclic(n);
            let b = brute(&sq);
            assert_eq!(count_intercalates(&sq), b);
            assert_eq!(count_intercalates_partial(&sq.to_triples()), b);
        }
        let sq = LatinSquare::elementary_abelian(3).unwrap();
        assert_eq!(count_intercalates_partial(&sq.to_triples()), 112);
        let rect = sq.restrict_rows(&[0, 1, 2]).unwrap();
        assert_eq!(count_intercalates_rect(&rect), count_intercalates_partial(&rect.to_triples()));
    }
}
