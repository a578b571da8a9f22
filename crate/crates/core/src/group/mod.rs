//! Group arithmetic over three backends: Cayley tables, permutation groups
//! and the Grigorchuk group.
//!
//! [`Group`] is the uniform interface. Elements carry their backend tag and
//! every operation checks it, so mixing elements of different backends is a
//! [`Error::BackendMismatch`] rather than garbage.

mod cayley;
mod perm;

pub mod builtin;

use std::collections::HashMap;
use std::fmt;

pub use cayley::CayleyGroup;
pub use perm::{PermGroup, Permutation};

use crate::error::{Error, Result};
use crate::grigorchuk::{GrigWord, GrigorchukGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BackendKind {
    Cayley,
    Perm,
    Grigorchuk,
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendKind::Cayley => "cayley",
            BackendKind::Perm => "perm",
            BackendKind::Grigorchuk => "grigorchuk",
        })
    }
}

/// A group element. The derived order is the canonical-key order used to
/// sort measure atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Cayley(u32),
    Perm(Permutation),
    Grigorchuk(GrigWord),
}

impl GroupElement {
    pub fn kind(&self) -> BackendKind {
        match self {
            GroupElement::Cayley(_) => BackendKind::Cayley,
            GroupElement::Perm(_) => BackendKind::Perm,
            GroupElement::Grigorchuk(_) => BackendKind::Grigorchuk,
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Cayley(i) => write!(f, "{i}"),
            GroupElement::Perm(p) => write!(f, "{p}"),
            GroupElement::Grigorchuk(w) => write!(f, "{w}"),
        }
    }
}

/// Hash bucket for an element. For Cayley and permutation elements the key
/// is the element itself; Grigorchuk words are bucketed by their action on a
/// fixed tree level, and equality inside a bucket is decided by the group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ElementKey {
    Exact(GroupElement),
    Signature(Vec<u32>),
}

#[derive(Clone, Debug)]
pub enum Group {
    Cayley(CayleyGroup),
    Perm(PermGroup),
    Grigorchuk(GrigorchukGroup),
}

impl Group {
    /// Parses a group file, dispatching on its header line.
    pub fn parse(text: &str) -> Result<Group> {
        let lines = content_lines(text)?;
        let Some(&(line, header)) = lines.first() else {
            return Err(Error::Parse {
                line: 1,
                message: "empty group file".into(),
            });
        };
        match header.split_whitespace().next() {
            Some("cayley") => Ok(Group::Cayley(CayleyGroup::parse(text)?)),
            Some("perm") => Ok(Group::Perm(PermGroup::parse(text)?)),
            Some("grigorchuk") => {
                if header.split_whitespace().count() != 1 || lines.len() != 1 {
                    return Err(Error::Parse {
                        line,
                        message: "grigorchuk file is the single line `grigorchuk`".into(),
                    });
                }
                Ok(Group::Grigorchuk(GrigorchukGroup::new()))
            }
            _ => Err(Error::Parse {
                line,
                message: format!("unknown group header {header:?}"),
            }),
        }
    }

    pub fn kind(&self) -> BackendKind {
        match self {
            Group::Cayley(_) => BackendKind::Cayley,
            Group::Perm(_) => BackendKind::Perm,
            Group::Grigorchuk(_) => BackendKind::Grigorchuk,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Group::Cayley(g) => format!("cayley {}", g.order()),
            Group::Perm(g) => format!("perm {}", g.degree()),
            Group::Grigorchuk(_) => "grigorchuk".into(),
        }
    }

    /// Whether equal elements always have identical payloads.
    pub fn has_canonical_elements(&self) -> bool {
        !matches!(self, Group::Grigorchuk(_))
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            Group::Cayley(_) => GroupElement::Cayley(0),
            Group::Perm(g) => GroupElement::Perm(Permutation::identity(g.degree())),
            Group::Grigorchuk(_) => GroupElement::Grigorchuk(GrigWord::identity()),
        }
    }

    /// Checks that `g` belongs to this backend and is well formed.
    pub fn check(&self, g: &GroupElement) -> Result<()> {
        match (self, g) {
            (Group::Cayley(c), GroupElement::Cayley(i)) => {
                if (*i as usize) < c.order() {
                    Ok(())
                } else {
                    Err(Error::InvalidElement {
                        element: i.to_string(),
                        reason: format!("index out of range for order {}", c.order()),
                    })
                }
            }
            (Group::Perm(p), GroupElement::Perm(x)) => {
                if x.degree() == p.degree() {
                    Ok(())
                } else {
                    Err(Error::InvalidElement {
                        element: x.to_string(),
                        reason: format!("degree {} differs from {}", x.degree(), p.degree()),
                    })
                }
            }
            (Group::Grigorchuk(_), GroupElement::Grigorchuk(_)) => Ok(()),
            _ => Err(Error::BackendMismatch {
                expected: self.kind(),
                found: g.kind(),
            }),
        }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (self, a, b) {
            (Group::Cayley(c), GroupElement::Cayley(x), GroupElement::Cayley(y)) => {
                GroupElement::Cayley(c.product(*x, *y))
            }
            (Group::Perm(_), GroupElement::Perm(x), GroupElement::Perm(y)) => {
                GroupElement::Perm(x.then(y))
            }
            (Group::Grigorchuk(g), GroupElement::Grigorchuk(x), GroupElement::Grigorchuk(y)) => {
                GroupElement::Grigorchuk(g.multiply(x, y))
            }
            _ => unreachable!("checked above"),
        })
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        Ok(match (self, g) {
            (Group::Cayley(c), GroupElement::Cayley(x)) => GroupElement::Cayley(c.inverse(*x)),
            (Group::Perm(_), GroupElement::Perm(x)) => GroupElement::Perm(x.inverse()),
            (Group::Grigorchuk(_), GroupElement::Grigorchuk(w)) => {
                GroupElement::Grigorchuk(w.inverse())
            }
            _ => unreachable!("checked above"),
        })
    }

    pub fn is_identity(&self, g: &GroupElement) -> Result<bool> {
        self.check(g)?;
        Ok(match (self, g) {
            (Group::Grigorchuk(gr), GroupElement::Grigorchuk(w)) => gr.is_identity(w),
            _ => *g == self.identity(),
        })
    }

    pub fn equal(&self, a: &GroupElement, b: &GroupElement) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (self, a, b) {
            (Group::Grigorchuk(g), GroupElement::Grigorchuk(x), GroupElement::Grigorchuk(y)) => {
                g.equal(x, y)
            }
            _ => a == b,
        })
    }

    /// Smallest `k >= 1` with `g^k = e`, searching no further than `cap`.
    pub fn order(&self, g: &GroupElement, cap: u64) -> Result<u64> {
        self.check(g)?;
        if let (Group::Grigorchuk(gr), GroupElement::Grigorchuk(w)) = (self, g) {
            return gr.order(w, cap);
        }
        let mut power = g.clone();
        for k in 1..=cap {
            if self.is_identity(&power)? {
                return Ok(k);
            }
            power = self.multiply(&power, g)?;
        }
        Err(Error::OrderBudgetExceeded { cap })
    }

    pub fn key(&self, g: &GroupElement) -> ElementKey {
        match (self, g) {
            (Group::Grigorchuk(gr), GroupElement::Grigorchuk(w)) => {
                ElementKey::Signature(gr.signature(w))
            }
            _ => ElementKey::Exact(g.clone()),
        }
    }

    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        let text = text.trim();
        let element = match self {
            Group::Cayley(_) if text == "e" => GroupElement::Cayley(0),
            Group::Cayley(_) => {
                GroupElement::Cayley(text.parse().map_err(|_| Error::InvalidElement {
                    element: text.to_string(),
                    reason: "expected an element index".into(),
                })?)
            }
            Group::Perm(p) => GroupElement::Perm(Permutation::parse_cycles(text, p.degree())?),
            Group::Grigorchuk(_) => GroupElement::Grigorchuk(GrigWord::parse(text)?),
        };
        self.check(&element)?;
        Ok(element)
    }

    /// All elements, identity first, when there are at most `cap`.
    pub fn elements(&self, cap: usize) -> Result<Vec<GroupElement>> {
        match self {
            Group::Cayley(c) if c.order() > cap => Err(Error::CapExceeded { cap }),
            Group::Cayley(c) => Ok((0..c.order() as u32).map(GroupElement::Cayley).collect()),
            Group::Perm(p) => {
                let gens: Vec<GroupElement> = p
                    .generators()
                    .iter()
                    .cloned()
                    .map(GroupElement::Perm)
                    .collect();
                self.closure(&gens, cap)
                    .map_err(|_| Error::CapExceeded { cap })
            }
            Group::Grigorchuk(_) => {
                let gens: Vec<GroupElement> = ["a", "b", "c", "d"]
                    .iter()
                    .map(|t| self.parse_element(t))
                    .collect::<Result<_>>()?;
                self.closure(&gens, cap)
                    .map_err(|_| Error::CapExceeded { cap })
            }
        }
    }

    /// The subgroup generated by `generators`, identity first, in breadth-first
    /// order. Every element has finite order, so right multiplication by the
    /// generators alone reaches the whole subgroup.
    pub fn closure(&self, generators: &[GroupElement], cap: usize) -> Result<Vec<GroupElement>> {
        for g in generators {
            self.check(g)?;
        }
        let mut index = ElementIndex::new(self);
        index.insert(self.identity())?;
        let mut cursor = 0;
        while cursor < index.len() {
            let x = index.elements()[cursor].clone();
            cursor += 1;
            for g in generators {
                let y = self.multiply(&x, g)?;
                if index.find(&y)?.is_none() {
                    if index.len() >= cap {
                        return Err(Error::ClosureBudgetExceeded { cap });
                    }
                    index.insert(y)?;
                }
            }
        }
        Ok(index.into_elements())
    }
}

/// An insertion-ordered set of elements with lookup by group equality.
#[derive(Debug)]
pub struct ElementIndex<'g> {
    group: &'g Group,
    elements: Vec<GroupElement>,
    buckets: HashMap<ElementKey, Vec<usize>>,
}

impl<'g> ElementIndex<'g> {
    pub fn new(group: &'g Group) -> Self {
        ElementIndex {
            group,
            elements: Vec::new(),
            buckets: HashMap::new(),
        }
    }

    pub fn find(&self, g: &GroupElement) -> Result<Option<usize>> {
        self.group.check(g)?;
        let Some(bucket) = self.buckets.get(&self.group.key(g)) else {
            return Ok(None);
        };
        if self.group.has_canonical_elements() {
            return Ok(bucket.first().copied());
        }
        if let Some(&i) = bucket.iter().find(|&&i| self.elements[i] == *g) {
            return Ok(Some(i));
        }
        for &i in bucket {
            if self.group.equal(&self.elements[i], g)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Inserts `g` unless an equal element is present; returns its index.
    pub fn insert(&mut self, g: GroupElement) -> Result<usize> {
        if let Some(i) = self.find(&g)? {
            return Ok(i);
        }
        let i = self.elements.len();
        self.buckets.entry(self.group.key(&g)).or_default().push(i);
        self.elements.push(g);
        Ok(i)
    }

    /// Replaces the stored representative at `i` with an equal element.
    pub fn replace_representative(&mut self, i: usize, g: GroupElement) {
        self.elements[i] = g;
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<GroupElement> {
        self.elements
    }
}

/// Non-comment, non-blank lines with 1-based line numbers. Rejects anything
/// outside 7-bit printable text.
pub(crate) fn content_lines(text: &str) -> Result<Vec<(usize, &str)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if let Some(ch) = raw
            .chars()
            .find(|c| !(c.is_ascii_graphic() || *c == ' ' || *c == '\t' || *c == '\r'))
        {
            return Err(Error::Parse {
                line,
                message: format!("non-printable or non-ASCII character {ch:?}"),
            });
        }
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        out.push((line, trimmed));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mismatch_is_an_error() {
        let z4 = builtin::z4();
        let grig = Group::Grigorchuk(GrigorchukGroup::new());
        let a = grig.parse_element("a").unwrap();
        assert_eq!(
            z4.multiply(&GroupElement::Cayley(1), &a),
            Err(Error::BackendMismatch {
                expected: BackendKind::Cayley,
                found: BackendKind::Grigorchuk
            })
        );
    }

    #[test]
    fn identities() {
        assert_eq!(builtin::z4().identity(), GroupElement::Cayley(0));
        let s3 = builtin::s3_perm();
        assert_eq!(s3.identity().to_string(), "e");
        assert_eq!(
            s3.identity(),
            GroupElement::Perm(Permutation::from_images(vec![0, 1, 2]).unwrap())
        );
        let grig = Group::Grigorchuk(GrigorchukGroup::new());
        assert_eq!(
            grig.identity(),
            GroupElement::Grigorchuk(GrigWord::identity())
        );
    }

    #[test]
    fn cayley_arithmetic() {
        let z4 = builtin::z4();
        let c = |i| GroupElement::Cayley(i);
        assert_eq!(z4.multiply(&c(1), &c(3)).unwrap(), c(0));
        assert_eq!(z4.inverse(&c(3)).unwrap(), c(1));
        assert_eq!(z4.order(&c(1), 100).unwrap(), 4);
        assert_eq!(z4.order(&c(0), 100).unwrap(), 1);
        assert_eq!(
            z4.order(&c(1), 3),
            Err(Error::OrderBudgetExceeded { cap: 3 })
        );
        assert!(z4.check(&c(4)).is_err());
    }

    #[test]
    fn s3_table_is_nonabelian() {
        let s3 = builtin::s3();
        // 1 = (0 1) is a reflection, 2 = (0 1 2) a rotation.
        let r = GroupElement::Cayley(2);
        let s = GroupElement::Cayley(1);
        assert_ne!(s3.multiply(&r, &s).unwrap(), s3.multiply(&s, &r).unwrap());
    }

    #[test]
    fn perm_arithmetic() {
        let g = Group::parse("perm 5\n(0 1)\n").unwrap();
        let t = g.parse_element("(0 1)").unwrap();
        assert!(g.is_identity(&g.multiply(&t, &t).unwrap()).unwrap());
        let x = g.parse_element("(0 1 2)(3 4)").unwrap();
        assert_eq!(g.order(&x, 100).unwrap(), 6);

        let g3 = Group::parse("perm 3\n(0 1)\n").unwrap();
        let p = GroupElement::Perm(Permutation::from_images(vec![1, 2, 0]).unwrap());
        let q = GroupElement::Perm(Permutation::from_images(vec![2, 0, 1]).unwrap());
        assert_eq!(g3.inverse(&p).unwrap(), q);
    }

    #[test]
    fn grigorchuk_through_interface() {
        let g = Group::parse("# comment\ngrigorchuk\n").unwrap();
        let ab = g.parse_element("ab").unwrap();
        assert_eq!(g.inverse(&ab).unwrap().to_string(), "ba");
        let ad = g.parse_element("ad").unwrap();
        let four = g.parse_element("adadadad").unwrap();
        assert!(g.equal(&four, &g.identity()).unwrap());
        assert!(!g.equal(&ad, &g.identity()).unwrap());
        assert_eq!(g.order(&ad, 1 << 16).unwrap(), 4);
    }

    #[test]
    fn closure_of_s3_generators() {
        let g = builtin::s3_perm();
        let gens = vec![
            g.parse_element("(0 1)").unwrap(),
            g.parse_element("(0 1 2)").unwrap(),
        ];
        let all = g.closure(&gens, 4096).unwrap();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], g.identity());
        assert_eq!(g.elements(100).unwrap().len(), 6);
    }

    #[test]
    fn closure_budget_for_grigorchuk() {
        let g = Group::Grigorchuk(GrigorchukGroup::new());
        let gens = vec![g.parse_element("a").unwrap(), g.parse_element("b").unwrap()];
        // <a, b> is dihedral of order 32 since ab has order 16.
        assert_eq!(g.closure(&gens, 64).unwrap().len(), 32);
        assert_eq!(
            g.closure(&gens, 16),
            Err(Error::ClosureBudgetExceeded { cap: 16 })
        );
        // <a, d> is dihedral of order 8.
        let gens = vec![g.parse_element("a").unwrap(), g.parse_element("d").unwrap()];
        assert_eq!(g.closure(&gens, 64).unwrap().len(), 8);
        assert_eq!(g.elements(64), Err(Error::CapExceeded { cap: 64 }));
    }

    #[test]
    fn element_index_merges_equal_grigorchuk_words() {
        let g = Group::Grigorchuk(GrigorchukGroup::new());
        let mut index = ElementIndex::new(&g);
        let e = index.insert(g.identity()).unwrap();
        let again = index.insert(g.parse_element("adadadad").unwrap()).unwrap();
        assert_eq!(e, again);
        assert_eq!(index.len(), 1);
    }

    #[test]
    fn rejects_non_ascii() {
        assert!(matches!(
            Group::parse("cayley 1\n0 \u{e9}\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(Group::parse("monoid 3"), Err(Error::Parse { .. })));
        assert!(matches!(
            Group::parse("# nothing\n"),
            Err(Error::Parse { .. })
        ));
    }
}
