use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::triples::{Triple, TripleSystem};

/// A `rows x cols` array whose cells may be empty, as read from text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialArray {
    pub rows: usize,
    pub cols: usize,
    pub cells: Vec<Option<u16>>,
}

impl PartialArray {
    pub fn get(&self, r: usize, c: usize) -> Option<u16> {
        self.cells[r * self.cols + c]
    }

    pub fn filled(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    /// Checks symbols lie in `0..cols` and no row or column repeats a symbol.
    ///
    /// Cells are scanned in row-major order and the first offending cell is reported.
    pub fn validate(&self) -> Result<(), Violation> {
        let n = self.cols;
        let mut in_row = vec![false; n];
        let mut in_col = vec![false; n * n];
        for row in 0..self.rows {
            in_row.iter_mut().for_each(|b| *b = false);
            for col in 0..self.cols {
                let Some(s) = self.get(row, col) else { continue };
                let symbol = s as usize;
                if symbol >= n {
                    return Err(Violation::SymbolOutOfRange { row, col, symbol });
                }
                if in_col[col * n + symbol] {
                    return Err(Violation::ColumnRepeat { row, col, symbol });
                }
                if in_row[symbol] {
                    return Err(Violation::RowRepeat { row, col, symbol });
                }
                in_row[symbol] = true;
                in_col[col * n + symbol] = true;
            }
        }
        Ok(())
    }

    /// Like [`PartialArray::validate`] but also rejects empty cells.
    pub fn validate_complete(&self) -> Result<(), Violation> {
        self.validate()?;
        match self.cells.iter().position(Option::is_none) {
            Some(i) => Err(Violation::EmptyCell { row: i / self.cols, col: i % self.cols }),
            None => Ok(()),
        }
    }

    pub fn to_triples(&self) -> Result<TripleSystem> {
        if self.rows > self.cols {
            return Err(Error::OutOfRange(format!(
                "array has {} rows but only {} columns",
                self.rows, self.cols
            )));
        }
        self.validate()?;
        let mut triples = Vec::with_capacity(self.filled());
        for r in 0..self.rows {
            for c in 0..self.cols {
                if let Some(s) = self.get(r, c) {
                    triples.push(Triple::new(r as u16, c as u16, s));
                }
            }
        }
        Ok(TripleSystem::build(self.cols, triples))
    }

    pub fn from_triples(ts: &TripleSystem) -> Self {
        let n = ts.order();
        let mut cells = vec![None; n * n];
        for t in ts.iter() {
            cells[t.r as usize * n + t.c as usize] = Some(t.s);
        }
        PartialArray { rows: n, cols: n, cells }
    }
}

/// A `k x n` array on symbols `0..n` with no repeats in any row or column.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatinRectangle {
    k: usize,
    n: usize,
    cells: Vec<u16>,
}

impl LatinRectangle {
    pub fn new(k: usize, n: usize, cells: Vec<u16>) -> Result<Self> {
        if cells.len() != k * n {
            return Err(Error::OutOfRange(format!("expected {} cells, got {}", k * n, cells.len())));
        }
        if k > n {
            return Err(Error::OutOfRange(format!("{k} rows exceed order {n}")));
        }
        let arr = PartialArray { rows: k, cols: n, cells: cells.iter().map(|&s| Some(s)).collect() };
        arr.validate()?;
        Ok(LatinRectangle { k, n, cells })
    }

    pub(crate) fn from_cells_unchecked(k: usize, n: usize, cells: Vec<u16>) -> Self {
        LatinRectangle { k, n, cells }
    }

    pub fn rows(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u16 {
        self.cells[r * self.n + c]
    }

    pub fn row(&self, r: usize) -> &[u16] {
        &self.cells[r * self.n..(r + 1) * self.n]
    }

    pub fn cells(&self) -> &[u16] {
        &self.cells
    }

    pub fn to_triples(&self) -> TripleSystem {
        let mut triples = Vec::with_capacity(self.cells.len());
        for r in 0..self.k {
            for c in 0..self.n {
                triples.push(Triple::new(r as u16, c as u16, self.get(r, c)));
            }
        }
        TripleSystem::build(self.n, triples)
    }

    pub fn to_array(&self) -> PartialArray {
        PartialArray { rows: self.k, cols: self.n, cells: self.cells.iter().map(|&s| Some(s)).collect() }
    }
}

/// A complete Latin square of order `n` on symbols `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<u16>,
}

impl LatinSquare {
    pub fn new(n: usize, cells: Vec<u16>) -> Result<Self> {
        if cells.len() != n * n {
            return Err(Error::OutOfRange(format!("expected {} cells, got {}", n * n, cells.len())));
        }
        let arr = PartialArray { rows: n, cols: n, cells: cells.iter().map(|&s| Some(s)).collect() };
        arr.validate()?;
        Ok(LatinSquare { n, cells })
    }

    pub fn from_rows(rows: &[Vec<u16>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::OutOfRange(format!("row {bad} has length {} in order {n}", rows[bad].len())));
        }
        Self::new(n, rows.concat())
    }

    pub(crate) fn from_cells_unchecked(n: usize, cells: Vec<u16>) -> Self {
        LatinSquare { n, cells }
    }

    /// The Cayley table of `Z_n`: `L[r][c] = (r + c) mod n`.
    pub fn cyclic(n: usize) -> Self {
        let cells = (0..n * n).map(|i| ((i / n + i % n) % n) as u16).collect();
        LatinSquare { n, cells }
    }

    /// The Cayley table of `(Z_2)^k`: `L[r][c] = r xor c`.
    pub fn elementary_abelian(k: u32) -> Result<Self> {
        if k > 15 {
            return Err(Error::OutOfRange(format!("2^{k} is too large")));
        }
        let n = 1usize << k;
        let cells = (0..n * n).map(|i| ((i / n) ^ (i % n)) as u16).collect();
        Ok(LatinSquare { n, cells })
    }

    pub fn group_table(g: GroupSpec) -> Result<Self> {
        match g {
            GroupSpec::Cyclic(n) if n == 0 || n >= u16::MAX as usize => {
                Err(Error::OutOfRange(format!("cyclic order {n}")))
            }
            GroupSpec::Cyclic(n) => Ok(Self::cyclic(n)),
            GroupSpec::ElementaryAbelian2(k) => Self::elementary_abelian(k),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u16 {
        self.cells[r * self.n + c]
    }

    pub fn row(&self, r: usize) -> &[u16] {
        &self.cells[r * self.n..(r + 1) * self.n]
    }

    pub fn cells(&self) -> &[u16] {
        &self.cells
    }

    pub fn to_triples(&self) -> TripleSystem {
        let n = self.n;
        let triples = (0..n * n).map(|i| Triple::new((i / n) as u16, (i % n) as u16, self.cells[i])).collect();
        TripleSystem::build(n, triples)
    }

    pub fn from_triples(ts: &TripleSystem) -> Result<Self> {
        let n = ts.order();
        if !ts.is_complete() {
            return Err(Error::Incomplete(format!("{} of {} cells filled", ts.len(), n * n)));
        }
        Ok(LatinSquare { n, cells: ts.iter().map(|t| t.s).collect() })
    }

    /// The rectangle formed by the listed rows, in the given order.
    pub fn restrict_rows(&self, rows: &[usize]) -> Result<LatinRectangle> {
        let mut seen = vec![false; self.n];
        let mut cells = Vec::with_capacity(rows.len() * self.n);
        for &r in rows {
            if r >= self.n || seen[r] {
                return Err(Error::OutOfRange(format!("row {r} is out of range or repeated")));
            }
            seen[r] = true;
            cells.extend_from_slice(self.row(r));
        }
        Ok(LatinRectangle { k: rows.len(), n: self.n, cells })
    }

    pub fn to_array(&self) -> PartialArray {
        PartialArray { rows: self.n, cols: self.n, cells: self.cells.iter().map(|&s| Some(s)).collect() }
    }
}

/// Which group's Cayley table to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupSpec {
    Cyclic(usize),
    /// `(Z_2)^k`, given by `k`.
    ElementaryAbelian2(u32),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::ElementaryAbelian2(k) => write!(f, "z2:{k}"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Accepts `cyclic:N` or `z2:K`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { line: 0, message: format!("bad group spec {s:?}, expected cyclic:N or z2:K") };
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "cyclic" => Ok(GroupSpec::Cyclic(arg.parse().map_err(|_| bad())?)),
            "z2" => Ok(GroupSpec::ElementaryAbelian2(arg.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_repeat_is_reported_at_its_column() {
        let err = LatinSquare::from_rows(&[vec![0, 1], vec![0, 1]]).unwrap_err();
        match err {
            Error::Invalid(Violation::ColumnRepeat { col, .. }) => assert_eq!(col, 0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn group_tables_are_latin() {
        for n in 1..12 {
            let sq = LatinSquare::cyclic(n);
            assert!(LatinSquare::new(n, sq.cells().to_vec()).is_ok());
        }
        for k in 0..5 {
            let sq = LatinSquare::elementary_abelian(k).unwrap();
            assert!(LatinSquare::new(sq.order(), sq.cells().to_vec()).is_ok());
        }
    }

    #[test]
    fn restrict_rows_keeps_order() {
        let sq = LatinSquare::cyclic(5);
        let rect = sq.restrict_rows(&[3, 1]).unwrap();
        assert_eq!(rect.row(0), sq.row(3));
        assert_eq!(rect.row(1), sq.row(1));
        assert!(sq.restrict_rows(&[1, 1]).is_err());
    }

    #[test]
    fn triples_round_trip() {
        let sq = LatinSquare::cyclic(6);
        let ts = sq.to_triples();
        assert_eq!(ts.len(), 36);
        assert_eq!(LatinSquare::from_triples(&ts).unwrap(), sq);
    }

    #[test]
    fn group_spec_parses() {
        assert_eq!("cyclic:7".parse::<GroupSpec>().unwrap(), GroupSpec::Cyclic(7));
        assert_eq!("z2:3".parse::<GroupSpec>().unwrap(), GroupSpec::ElementaryAbelian2(3));
        assert!("dihedral:4".parse::<GroupSpec>().is_err());
    }
}
