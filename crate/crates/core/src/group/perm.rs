use std::fmt;

use crate::error::{Error, Result};

use super::content_lines;

/// A permutation of `{0..degree-1}` stored as its image array.
///
/// Products compose left to right: `p.then(q)` applies `p` first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x as usize >= n || std::mem::replace(&mut seen[x as usize], true) {
                return Err(Error::InvalidElement {
                    element: format!("{images:?}"),
                    reason: "not a bijection".into(),
                });
            }
        }
        Ok(Permutation(images))
    }

    /// Parses cycle notation such as `(0 1 2)(3 4)`; `e` or `()` is the
    /// identity. Fixed points may be omitted.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let text = text.trim();
        let bad = |reason: String| Error::InvalidElement {
            element: text.to_string(),
            reason,
        };
        let mut images: Vec<u32> = (0..degree as u32).collect();
        if text == "e" {
            return Ok(Permutation(images));
        }
        let mut moved = vec![false; degree];
        let mut rest = text;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| bad("expected `(`".into()))?;
            let close = body.find(')').ok_or_else(|| bad("unclosed cycle".into()))?;
            let points = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| bad(format!("bad point {t:?}")))
                        .and_then(|p| {
                            if (p as usize) < degree {
                                Ok(p)
                            } else {
                                Err(bad(format!("point {p} >= degree {degree}")))
                            }
                        })
                })
                .collect::<Result<Vec<_>>>()?;
            for &p in &points {
                if std::mem::replace(&mut moved[p as usize], true) {
                    return Err(bad(format!("point {p} appears twice")));
                }
            }
            for (i, &p) in points.iter().enumerate() {
                images[p as usize] = points[(i + 1) % points.len()];
            }
            rest = body[close + 1..].trim_start();
        }
        Ok(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.0.len()];
        let mut cycles = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cycle = vec![start as u32];
            seen[start] = true;
            let mut next = self.0[start] as usize;
            while next != start {
                seen[next] = true;
                cycle.push(next as u32);
                next = self.0[next] as usize;
            }
            cycles.push(cycle);
        }
        cycles
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("e");
        }
        for cycle in cycles {
            let points: Vec<String> = cycle.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", points.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidElement {
                element: "perm 0".into(),
                reason: "degree must be positive".into(),
            });
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::InvalidElement {
                element: g.to_string(),
                reason: format!("degree {} differs from {degree}", g.degree()),
            });
        }
        Ok(PermGroup { degree, generators })
    }

    /// Parses `perm <degree>` followed by one generator per line.
    pub fn parse(text: &str) -> Result<Self> {
        let lines = content_lines(text)?;
        let mut iter = lines.into_iter();
        let (hline, header) = iter.next().ok_or(Error::Parse {
            line: 1,
            message: "empty group file".into(),
        })?;
        let mut words = header.split_whitespace();
        let degree: usize = match (words.next(), words.next(), words.next()) {
            (Some("perm"), Some(d), None) => {
                d.parse()
                    .ok()
                    .filter(|&d| d > 0)
                    .ok_or_else(|| Error::Parse {
                        line: hline,
                        message: format!("bad degree {d:?}"),
                    })?
            }
            _ => {
                return Err(Error::Parse {
                    line: hline,
                    message: "expected `perm <degree>`".into(),
                })
            }
        };
        let generators = iter
            .map(|(line, content)| {
                Permutation::parse_cycles(content, degree).map_err(|e| Error::Parse {
                    line,
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(degree, generators)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }
}
