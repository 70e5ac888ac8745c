//! Plain-text formats.
//!
//! Arrays: a `rows cols` header line (or just `n` for a square), then one
//! line per row with whitespace-separated symbols, `.` for an empty cell.
//! Triples: an `n` header line, then one `r c s` line per triple.
//! Several records may be concatenated in one file.

use crate::error::{Error, Result};
use crate::square::{LatinRectangle, LatinSquare, PartialArray};
use crate::triples::{Triple, TripleSystem};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| parse_err(line, format!("expected a non-negative integer, found {tok:?}")))
}

pub fn write_array(a: &PartialArray) -> String {
    let mut out = format!("{} {}\n", a.rows, a.cols);
    for r in 0..a.rows {
        let row: Vec<String> =
            (0..a.cols).map(|c| a.get(r, c).map_or_else(|| ".".to_string(), |s| s.to_string())).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Squares use the short one-number header.
pub fn write_square(sq: &LatinSquare) -> String {
    let full = write_array(&sq.to_array());
    let body = full.split_once('\n').map_or("", |(_, b)| b);
    format!("{}\n{body}", sq.order())
}

pub fn write_rectangle(rect: &LatinRectangle) -> String {
    write_array(&rect.to_array())
}

pub fn write_triples(ts: &TripleSystem) -> String {
    let mut out = format!("{}\n", ts.order());
    for t in ts.iter() {
        out.push_str(&format!("{} {} {}\n", t.r, t.c, t.s));
    }
    out
}

/// Parses every array in `text`. Symbols are range-checked but the Latin
/// property is left to the caller.
pub fn parse_arrays(text: &str) -> Result<Vec<PartialArray>> {
    let mut lines = content_lines(text).peekable();
    let mut out = Vec::new();
    while let Some((ln, header)) = lines.next() {
        let dims: Vec<&str> = header.split_whitespace().collect();
        let (rows, cols) = match dims[..] {
            [n] => {
                let n = parse_usize(n, ln)?;
                (n, n)
            }
            [k, n] => (parse_usize(k, ln)?, parse_usize(n, ln)?),
            _ => return Err(parse_err(ln, format!("expected a `rows cols` header, found {header:?}"))),
        };
        if cols >= u16::MAX as usize {
            return Err(parse_err(ln, format!("{cols} columns is too many")));
        }
        let mut cells = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let (rl, row) = lines.next().ok_or_else(|| parse_err(ln, format!("missing row {r}")))?;
            let toks: Vec<&str> = row.split_whitespace().collect();
            if toks.len() != cols {
                return Err(parse_err(rl, format!("expected {cols} entries, found {}", toks.len())));
            }
            for tok in toks {
                if tok == "." {
                    cells.push(None);
                    continue;
                }
                let s = parse_usize(tok, rl)?;
                if s >= cols {
                    return Err(parse_err(rl, format!("symbol {s} out of range 0..{cols}")));
                }
                cells.push(Some(s as u16));
            }
        }
        out.push(PartialArray { rows, cols, cells });
    }
    Ok(out)
}

pub fn parse_array(text: &str) -> Result<PartialArray> {
    let mut all = parse_arrays(text)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        0 => Err(parse_err(1, "no array found")),
        k => Err(parse_err(1, format!("expected one array, found {k}"))),
    }
}

pub fn parse_square(text: &str) -> Result<LatinSquare> {
    let a = parse_array(text)?;
    array_to_square(&a)
}

pub fn array_to_square(a: &PartialArray) -> Result<LatinSquare> {
    if a.rows != a.cols {
        return Err(Error::OutOfRange(format!("{}x{} array is not square", a.rows, a.cols)));
    }
    a.validate_complete()?;
    LatinSquare::new(a.cols, a.cells.iter().map(|c| c.unwrap()).collect())
}

pub fn parse_squares(text: &str) -> Result<Vec<LatinSquare>> {
    parse_arrays(text)?.iter().map(array_to_square).collect()
}

pub fn parse_rectangle(text: &str) -> Result<LatinRectangle> {
    let a = parse_array(text)?;
    a.validate_complete()?;
    LatinRectangle::new(a.rows, a.cols, a.cells.iter().map(|c| c.unwrap()).collect())
}

/// Parses a triple list, validating the Latin property.
pub fn parse_triples(text: &str) -> Result<TripleSystem> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let n = parse_usize(header, ln)?;
    if n >= u16::MAX as usize {
        return Err(parse_err(ln, format!("order {n} too large")));
    }
    let mut triples = Vec::new();
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(parse_err(ln, format!("expected `r c s`, found {line:?}")));
        }
        let mut v = [0u16; 3];
        for (slot, tok) in v.iter_mut().zip(&toks) {
            let x = parse_usize(tok, ln)?;
            if x >= n {
                return Err(parse_err(ln, format!("coordinate {x} out of range 0..{n}")));
            }
            *slot = x as u16;
        }
        triples.push(Triple::new(v[0], v[1], v[2]));
    }
    TripleSystem::new(n, triples)
}

/// Reads either format. A two-number header means an array; a one-number
/// header `n` is read as a square when exactly `n` rows of `n` entries follow,
/// otherwise as a triple list.
pub fn parse_any(text: &str) -> Result<TripleSystem> {
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    let Some((_, header)) = lines.first() else { return Err(parse_err(1, "empty input")) };
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() == 2 {
        return parse_array(text)?.to_triples();
    }
    if let Ok(n) = dims[0].parse::<usize>() {
        let grid_shaped = lines.len() == n + 1 && lines[1..].iter().all(|(_, l)| l.split_whitespace().count() == n);
        if grid_shaped && n != 3 {
            return parse_array(text)?.to_triples();
        }
        if grid_shaped {
            if let Ok(ts) = parse_array(text).and_then(|a| a.to_triples()) {
                return Ok(ts);
            }
        }
    }
    parse_triples(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_text_round_trip() {
        let text = "3\n0 1 2\n1 2 0\n2 0 1\n";
        let sq = parse_square(text).unwrap();
        assert_eq!(sq, LatinSquare::cyclic(3));
        assert_eq!(write_square(&sq), text);
    }

    #[test]
    fn partial_array_round_trip() {
        let text = "2 3\n0 . 2\n. 0 1\n";
        let a = parse_array(text).unwrap();
        assert_eq!(a.filled(), 4);
        assert_eq!(write_array(&a), text);
        assert_eq!(a.to_triples().unwrap().len(), 4);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_square("2 2\n0 1\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match parse_triples("3\n0 0 0\n1 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn out_of_range_symbol() {
        assert!(matches!(parse_square("2\n0 2\n1 0\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn rectangle_header() {
        let r = parse_rectangle("2 3\n0 1 2\n1 2 0\n").unwrap();
        assert_eq!(r.rows(), 2);
        assert_eq!(write_rectangle(&r), "2 3\n0 1 2\n1 2 0\n");
    }

    #[test]
    fn triples_reject_conflicts() {
        assert!(matches!(parse_triples("3\n0 0 0\n0 1 0\n"), Err(Error::Invalid(_))));
    }

    #[test]
    fn triple_text_round_trip() {
        let ts = LatinSquare::cyclic(4).to_triples();
        let text = write_triples(&ts);
        assert_eq!(parse_triples(&text).unwrap(), ts);
        assert_eq!(parse_any(&write_square(&LatinSquare::cyclic(4))).unwrap(), ts);
    }
}
