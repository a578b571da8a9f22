use crate::error::{Error, Result};

use super::content_lines;

/// A finite group given by its multiplication table, identity at index 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyGroup {
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
}

impl CayleyGroup {
    /// Validates the table: shape, index range, identity at 0, Latin-square
    /// rows and columns, associativity.
    pub fn from_table(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(not_a_group("non-empty", "order 0".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("row {i} has {} entries, expected {n}", row.len()),
                });
            }
            if let Some(j) = row.iter().position(|&x| x as usize >= n) {
                return Err(not_a_group(
                    "closure",
                    format!("table[{i}][{j}] = {} >= {n}", row[j]),
                ));
            }
        }
        for (k, row) in rows.iter().enumerate() {
            if rows[0][k] as usize != k {
                return Err(not_a_group(
                    "identity at index 0",
                    format!("table[0][{k}] = {}", rows[0][k]),
                ));
            }
            if row[0] as usize != k {
                return Err(not_a_group(
                    "identity at index 0",
                    format!("table[{k}][0] = {}", row[0]),
                ));
            }
        }
        for (i, row) in rows.iter().enumerate() {
            if let Some((a, b)) = first_repeat(row.iter().copied()) {
                return Err(not_a_group(
                    "row is a permutation",
                    format!("row {i}, columns {a} and {b}"),
                ));
            }
            if let Some((a, b)) = first_repeat((0..n).map(|j| rows[j][i])) {
                return Err(not_a_group(
                    "column is a permutation",
                    format!("column {i}, rows {a} and {b}"),
                ));
            }
        }
        let table: Vec<u32> = rows.into_iter().flatten().collect();
        let at = |i: usize, j: usize| table[i * n + j] as usize;
        for i in 0..n {
            for j in 0..n {
                let ij = at(i, j);
                for k in 0..n {
                    if at(ij, k) != at(i, at(j, k)) {
                        return Err(not_a_group(
                            "associativity",
                            format!("(i, j, k) = ({i}, {j}, {k})"),
                        ));
                    }
                }
            }
        }
        let inverses = (0..n)
            .map(|i| {
                (0..n)
                    .find(|&j| at(i, j) == 0)
                    .expect("Latin square row contains the identity") as u32
            })
            .collect();
        Ok(CayleyGroup {
            order: n,
            table,
            inverses,
        })
    }

    /// Parses `cayley <n>` followed by `n` rows of `n` indices.
    pub fn parse(text: &str) -> Result<Self> {
        let lines = content_lines(text)?;
        let mut iter = lines.into_iter();
        let (hline, header) = iter.next().ok_or(Error::Parse {
            line: 1,
            message: "empty group file".into(),
        })?;
        let mut words = header.split_whitespace();
        let n: usize = match (words.next(), words.next(), words.next()) {
            (Some("cayley"), Some(n), None) => n.parse().map_err(|_| Error::Parse {
                line: hline,
                message: format!("bad order {n:?}"),
            })?,
            _ => {
                return Err(Error::Parse {
                    line: hline,
                    message: "expected `cayley <n>`".into(),
                })
            }
        };
        let mut rows = Vec::with_capacity(n);
        for (line, content) in iter {
            let row = content
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<u32>().map_err(|_| Error::Parse {
                        line,
                        message: format!("bad index {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != n {
                return Err(Error::Parse {
                    line,
                    message: format!("row has {} entries, expected {n}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::Parse {
                line: hline,
                message: format!("found {} rows, expected {n}", rows.len()),
            });
        }
        Self::from_table(rows)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn product(&self, i: u32, j: u32) -> u32 {
        self.table[i as usize * self.order + j as usize]
    }

    pub fn inverse(&self, i: u32) -> u32 {
        self.inverses[i as usize]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order as u32;
        (0..n).all(|i| (0..n).all(|j| self.product(i, j) == self.product(j, i)))
    }
}

fn not_a_group(axiom: &str, witness: String) -> Error {
    Error::NotAGroup {
        axiom: axiom.into(),
        witness,
    }
}

fn first_repeat(values: impl Iterator<Item = u32>) -> Option<(usize, usize)> {
    let mut seen = std::collections::HashMap::new();
    for (pos, v) in values.enumerate() {
        if let Some(prev) = seen.insert(v, pos) {
            return Some((prev, pos));
        }
    }
    None
}
