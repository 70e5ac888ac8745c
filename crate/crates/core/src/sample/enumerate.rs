use crate::error::{Error, Result};
use crate::square::LatinSquare;

/// Every Latin square of order `n <= 5`, by cell-by-cell backtracking in
/// row-major order (so the list is sorted and duplicate-free).
pub fn enumerate_squares(n: usize) -> Result<Vec<LatinSquare>> {
    if n > 5 {
        return Err(Error::OutOfRange(format!("enumeration supports n <= 5, got {n}")));
    }
    let mut out = Vec::new();
    if n == 0 {
        return Ok(out);
    }
    let mut cells = vec![0u16; n * n];
    let mut row_used = vec![0u32; n];
    let mut col_used = vec![0u32; n];
    fill(0, n, &mut cells, &mut row_used, &mut col_used, &mut out);
    Ok(out)
}

fn fill(i: usize, n: usize, cells: &mut [u16], ru: &mut [u32], cu: &mut [u32], out: &mut Vec<LatinSquare>) {
    if i == n * n {
        out.push(LatinSquare::from_cells_unchecked(n, cells.to_vec()));
        return;
    }
    let (r, c) = (i / n, i % n);
    for s in 0..n {
        let bit = 1 << s;
        if ru[r] & bit != 0 || cu[c] & bit != 0 {
            continue;
        }
        ru[r] |= bit;
        cu[c] |= bit;
        cells[i] = s as u16;
        fill(i + 1, n, cells, ru, cu, out);
        ru[r] &= !bit;
        cu[c] &= !bit;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_counts() {
        let counts: Vec<usize> = (1..=4).map(|n| enumerate_squares(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 12, 576]);
        assert!(enumerate_squares(6).is_err());
    }
}
