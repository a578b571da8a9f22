//! Finitely supported probability measures with exact rational weights and
//! their convolution.
//!
//! A [`Measure`] is always canonical: weights are strictly positive and sum to
//! exactly one, equal elements are merged, and atoms are sorted by element.
//! Structural equality of two measures is therefore equality of measures.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{content_lines, ElementIndex, Group, GroupElement};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    atoms: Vec<(GroupElement, Rational)>,
}

impl Measure {
    /// Builds a measure, merging atoms on equal elements by adding weights.
    pub fn from_atoms(
        group: &Group,
        atoms: impl IntoIterator<Item = (GroupElement, Rational)>,
    ) -> Result<Self> {
        let mut index = ElementIndex::new(group);
        let mut weights: Vec<Rational> = Vec::new();
        for (g, w) in atoms {
            if !w.is_positive() {
                return Err(Error::InvalidMeasure(format!(
                    "weight {} on {g} is not positive",
                    rational::to_exact(&w)
                )));
            }
            match index.find(&g)? {
                Some(i) => {
                    weights[i] += w;
                    // Keep the least representative so the result does not
                    // depend on input order.
                    if g < index.elements()[i] {
                        index.replace_representative(i, g);
                    }
                }
                None => {
                    index.insert(g)?;
                    weights.push(w);
                }
            }
        }
        let total = rational::sum(&weights);
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {}, expected 1",
                rational::to_exact(&total)
            )));
        }
        let mut atoms: Vec<(GroupElement, Rational)> =
            index.into_elements().into_iter().zip(weights).collect();
        atoms.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(Measure { atoms })
    }

    pub fn dirac(group: &Group, g: GroupElement) -> Result<Self> {
        Self::from_atoms(group, [(g, Rational::one())])
    }

    /// Equal weights on `{e} ∪ elements`.
    pub fn uniform_on(group: &Group, elements: &[GroupElement]) -> Result<Self> {
        let mut index = ElementIndex::new(group);
        index.insert(group.identity())?;
        for g in elements {
            index.insert(g.clone())?;
        }
        let weight = rational::frac(1, index.len() as i64);
        Self::from_atoms(
            group,
            index
                .into_elements()
                .into_iter()
                .map(|g| (g, weight.clone())),
        )
    }

    pub fn atoms(&self) -> &[(GroupElement, Rational)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// The support S(mu), in canonical order.
    pub fn support(&self) -> Vec<GroupElement> {
        self.atoms.iter().map(|(g, _)| g.clone()).collect()
    }

    pub fn weights(&self) -> Vec<Rational> {
        self.atoms.iter().map(|(_, w)| w.clone()).collect()
    }

    /// Mass at `g`, zero when `g` is outside the support.
    pub fn weight_of(&self, group: &Group, g: &GroupElement) -> Result<Rational> {
        for (x, w) in &self.atoms {
            if group.equal(x, g)? {
                return Ok(w.clone());
            }
        }
        Ok(Rational::zero())
    }

    /// Parses a measure file: one `<element> <num>/<den>` atom per line.
    pub fn parse(group: &Group, text: &str) -> Result<Self> {
        let mut atoms = Vec::new();
        let mut index = ElementIndex::new(group);
        let mut last_line = 1;
        for (line, content) in content_lines(text)? {
            last_line = line;
            let at = |e: Error| Error::Parse {
                line,
                message: e.to_string(),
            };
            let (element, weight) =
                content
                    .rsplit_once(char::is_whitespace)
                    .ok_or_else(|| Error::Parse {
                        line,
                        message: "expected `<element> <num>/<den>`".into(),
                    })?;
            let g = group.parse_element(element).map_err(at)?;
            let w = rational::parse(weight).map_err(|message| Error::Parse { line, message })?;
            if !w.is_positive() {
                return Err(Error::Parse {
                    line,
                    message: format!("weight {} is not positive", rational::to_exact(&w)),
                });
            }
            let before = index.len();
            index.insert(g.clone()).map_err(at)?;
            if index.len() == before {
                return Err(Error::Parse {
                    line,
                    message: format!("element {g} appears twice"),
                });
            }
            atoms.push((g, w));
        }
        if atoms.is_empty() {
            return Err(Error::Parse {
                line: last_line,
                message: "measure has no atoms".into(),
            });
        }
        Self::from_atoms(group, atoms).map_err(|e| Error::Parse {
            line: last_line,
            message: e.to_string(),
        })
    }

    /// The measure-file form accepted by [`Measure::parse`].
    pub fn to_text(&self) -> String {
        self.atoms
            .iter()
            .map(|(g, w)| format!("{g} {}\n", rational::to_exact(w)))
            .collect()
    }

    pub fn to_records(&self) -> Vec<AtomRecord> {
        self.atoms
            .iter()
            .map(|(g, w)| AtomRecord {
                element: g.to_string(),
                weight: rational::to_exact(w),
            })
            .collect()
    }

    pub fn from_records(group: &Group, records: &[AtomRecord]) -> Result<Self> {
        let atoms = records
            .iter()
            .map(|r| {
                let g = group.parse_element(&r.element)?;
                let w = rational::parse(&r.weight).map_err(Error::InvalidMeasure)?;
                Ok((g, w))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_atoms(group, atoms)
    }

    pub fn to_human(&self) -> String {
        let parts: Vec<String> = self
            .atoms
            .iter()
            .map(|(g, w)| format!("{} δ[{g}]", rational::to_human(w)))
            .collect();
        parts.join(" + ")
    }
}

/// JSON form of one atom; the weight is an exact `num/den` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomRecord {
    pub element: String,
    pub weight: String,
}

/// `(mu * nu)(g) = Σ { mu(x) nu(y) : x y = g }`.
pub fn convolve(group: &Group, mu: &Measure, nu: &Measure) -> Result<Measure> {
    let mut products = Vec::with_capacity(mu.len() * nu.len());
    for (x, a) in &mu.atoms {
        for (y, b) in &nu.atoms {
            products.push((group.multiply(x, y)?, a * b));
        }
    }
    Measure::from_atoms(group, products)
}

/// `δ_g * mu * δ_h`.
pub fn translate(
    group: &Group,
    mu: &Measure,
    g: &GroupElement,
    h: &GroupElement,
) -> Result<Measure> {
    let atoms = mu
        .atoms
        .iter()
        .map(|(x, w)| {
            let gx = group.multiply(g, x)?;
            Ok((group.multiply(&gx, h)?, w.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    Measure::from_atoms(group, atoms)
}

/// First pair of support elements (in atom order) whose product leaves the
/// support, with that product.
pub fn closure_witness(
    group: &Group,
    mu: &Measure,
) -> Result<Option<(GroupElement, GroupElement, GroupElement)>> {
    let mut index = ElementIndex::new(group);
    for (g, _) in &mu.atoms {
        index.insert(g.clone())?;
    }
    for (x, _) in &mu.atoms {
        for (y, _) in &mu.atoms {
            let xy = group.multiply(x, y)?;
            if index.find(&xy)?.is_none() {
                return Ok(Some((x.clone(), y.clone(), xy)));
            }
        }
    }
    Ok(None)
}

/// Whether S(mu) is closed under multiplication. For a finite subset of a
/// torsion group this is the same as being a subgroup.
pub fn is_support_closed(group: &Group, mu: &Measure) -> Result<bool> {
    Ok(closure_witness(group, mu)?.is_none())
}
