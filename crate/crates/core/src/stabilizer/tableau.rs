//! Text tableau: header `q n k`, then `k` lines `a_0..a_{n-1} b_0..b_{n-1} c`.

use crate::error::{Error, Result};
use crate::pauli::PauliLabel;

pub fn render_tableau(q: u64, n: usize, gens: &[PauliLabel]) -> String {
    let mut out = format!("{q} {n} {}\n", gens.len());
    for g in gens {
        let fields: Vec<String> = g.a.iter().chain(&g.b).chain(std::iter::once(&g.c)).map(u64::to_string).collect();
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_tableau(text: &str) -> Result<(u64, usize, Vec<PauliLabel>)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty tableau".into()))?;
    let head = ints(header)?;
    let [q, n, k] = head[..] else {
        return Err(Error::Parse(format!("header {header:?} must be `q n k`")));
    };
    if q < 2 {
        return Err(Error::InvalidModulus(q));
    }
    let n = n as usize;
    let mut gens = Vec::with_capacity(k as usize);
    for line in lines {
        let row = ints(line)?;
        if row.len() != 2 * n + 1 {
            return Err(Error::Parse(format!("line {line:?} has {} fields, expected {}", row.len(), 2 * n + 1)));
        }
        if row[..2 * n].iter().any(|&x| x >= q) || row[2 * n] >= 2 * q {
            return Err(Error::Parse(format!("line {line:?} has an exponent out of range")));
        }
        gens.push(PauliLabel::new(q, row[..n].to_vec(), row[n..2 * n].to_vec(), row[2 * n])?);
    }
    if gens.len() as u64 != k {
        return Err(Error::Parse(format!("header announces {k} generators, found {}", gens.len())));
    }
    Ok((q, n, gens))
}

fn ints(line: &str) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|w| w.parse::<u64>().map_err(|e| Error::Parse(format!("{w:?}: {e}"))))
        .collect()
}
