//! The first Grigorchuk group.
//!
//! Elements are words over `a, b, c, d` acting on the rooted binary tree by
//! the wreath recursion
//!
//! ```text
//! a = (1, 1) swap    b = (a, c)    c = (a, d)    d = (1, b)
//! ```
//!
//! Words act on the right: in `uv` the letters of `u` act first, so the
//! sections of a product are `(uv)|x = u|x * v|(x^u)`. Words are kept reduced
//! under `xx -> 1` and the Klein-four relations among `b, c, d`, which is not
//! a normal form for the group (`(ad)^4` is a reduced word equal to the
//! identity). Equality is therefore decided by the contracting identity test
//! in [`GrigorchukGroup::is_identity`].

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
    C,
    D,
}

impl Letter {
    pub fn from_char(ch: char) -> Option<Letter> {
        match ch {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            'c' => Some(Letter::C),
            'd' => Some(Letter::D),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::C => 'c',
            Letter::D => 'd',
        }
    }

    fn is_bcd(self) -> bool {
        self != Letter::A
    }

    /// Product of two distinct letters of the Klein four-group {1, b, c, d}.
    fn klein_product(self, other: Letter) -> Letter {
        debug_assert!(self.is_bcd() && other.is_bcd() && self != other);
        match (self, other) {
            (Letter::B, Letter::C) | (Letter::C, Letter::B) => Letter::D,
            (Letter::B, Letter::D) | (Letter::D, Letter::B) => Letter::C,
            _ => Letter::B,
        }
    }

    /// First-level sections `(g|0, g|1)`.
    fn sections(self) -> (Option<Letter>, Option<Letter>) {
        match self {
            Letter::A => (None, None),
            Letter::B => (Some(Letter::A), Some(Letter::C)),
            Letter::C => (Some(Letter::A), Some(Letter::D)),
            Letter::D => (None, Some(Letter::B)),
        }
    }
}

/// A word over `{a, b, c, d}` reduced by the rewriting rules.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GrigWord(Vec<Letter>);

impl GrigWord {
    pub fn identity() -> Self {
        GrigWord(Vec::new())
    }

    /// Reduces an arbitrary sequence of letters to the fixed point of
    /// `xx -> 1`, `bc, cb -> d`, `bd, db -> c`, `cd, dc -> b`.
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for letter in letters {
            let mut incoming = letter;
            loop {
                match stack.last().copied() {
                    Some(top) if top == incoming => {
                        stack.pop();
                        break;
                    }
                    Some(top) if top.is_bcd() && incoming.is_bcd() => {
                        stack.pop();
                        incoming = top.klein_product(incoming);
                    }
                    _ => {
                        stack.push(incoming);
                        break;
                    }
                }
            }
        }
        GrigWord(stack)
    }

    /// Parses a word; `e` (or the empty string) is the identity.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "e" {
            return Ok(GrigWord::identity());
        }
        let letters = text
            .chars()
            .map(|ch| {
                Letter::from_char(ch).ok_or_else(|| Error::InvalidElement {
                    element: text.to_string(),
                    reason: format!("{ch:?} is not one of a, b, c, d"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GrigWord::reduce(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &GrigWord) -> GrigWord {
        GrigWord::reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    /// Every generator is an involution, so the inverse is the reversed word.
    pub fn inverse(&self) -> GrigWord {
        GrigWord(self.0.iter().rev().copied().collect())
    }

    /// Whether the word swaps the two subtrees at the root.
    pub fn swaps_root(&self) -> bool {
        self.0.iter().filter(|&&l| l == Letter::A).count() % 2 == 1
    }

    /// Root action and the two reduced first-level sections.
    pub fn sections(&self) -> (bool, GrigWord, GrigWord) {
        let mut parts: [Vec<Letter>; 2] = [Vec::new(), Vec::new()];
        for (start, part) in parts.iter_mut().enumerate() {
            let mut vertex = start;
            for &letter in &self.0 {
                let (s0, s1) = letter.sections();
                if let Some(s) = if vertex == 0 { s0 } else { s1 } {
                    part.push(s);
                }
                if letter == Letter::A {
                    vertex ^= 1;
                }
            }
        }
        let [w0, w1] = parts;
        (
            self.swaps_root(),
            GrigWord::reduce(w0),
            GrigWord::reduce(w1),
        )
    }

    /// Image of a level-`depth` vertex; bit `i` of `vertex` is the letter at
    /// level `i + 1`.
    pub fn act_on_vertex(&self, vertex: u32, depth: u32) -> u32 {
        self.0
            .iter()
            .fold(vertex, |v, &letter| act_letter(letter, v, depth))
    }
}

fn act_letter(letter: Letter, mut vertex: u32, depth: u32) -> u32 {
    let mut state = letter;
    for level in 0..depth {
        let bit = (vertex >> level) & 1;
        state = match (state, bit) {
            (Letter::A, _) => {
                vertex ^= 1 << level;
                return vertex;
            }
            (Letter::B, 0) | (Letter::C, 0) => Letter::A,
            (Letter::B, _) => Letter::C,
            (Letter::C, _) => Letter::D,
            (Letter::D, 0) => return vertex,
            (Letter::D, _) => Letter::B,
        };
    }
    vertex
}

impl fmt::Display for GrigWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for letter in &self.0 {
            write!(f, "{}", letter.as_char())?;
        }
        Ok(())
    }
}

const DEFAULT_CACHE_LIMIT: usize = 1 << 16;

/// Depth of the tree level whose action is used as a hash signature.
pub const SIGNATURE_DEPTH: u32 = 8;

/// Arithmetic for the Grigorchuk group with a memoized identity test.
///
/// The cache is an optimization only: it is cleared wholesale once it holds
/// `cache_limit` words.
pub struct GrigorchukGroup {
    cache: Mutex<HashMap<GrigWord, bool>>,
    cache_limit: usize,
}

impl GrigorchukGroup {
    pub fn new() -> Self {
        Self::with_cache_limit(DEFAULT_CACHE_LIMIT)
    }

    pub fn with_cache_limit(cache_limit: usize) -> Self {
        GrigorchukGroup {
            cache: Mutex::new(HashMap::new()),
            cache_limit: cache_limit.max(1),
        }
    }

    pub fn multiply(&self, a: &GrigWord, b: &GrigWord) -> GrigWord {
        a.concat(b)
    }

    pub fn is_identity(&self, w: &GrigWord) -> bool {
        match w.len() {
            0 => return true,
            1 => return false,
            _ => {}
        }
        if w.swaps_root() {
            return false;
        }
        if let Some(&known) = self.cache.lock().unwrap().get(w) {
            return known;
        }
        let (_, w0, w1) = w.sections();
        let result = self.is_identity(&w0) && self.is_identity(&w1);
        let mut cache = self.cache.lock().unwrap();
        if cache.len() >= self.cache_limit {
            cache.clear();
        }
        cache.insert(w.clone(), result);
        result
    }

    pub fn equal(&self, u: &GrigWord, v: &GrigWord) -> bool {
        u == v || self.is_identity(&u.concat(&v.inverse()))
    }

    /// Smallest `2^j <= cap` with `w^(2^j) = e`. If some power of two kills
    /// `w`, the order divides it and so is exactly the first such power.
    pub fn order(&self, w: &GrigWord, cap: u64) -> Result<u64> {
        let mut power = w.clone();
        let mut exponent: u64 = 1;
        loop {
            if exponent > cap {
                return Err(Error::OrderBudgetExceeded { cap });
            }
            if self.is_identity(&power) {
                return Ok(exponent);
            }
            power = power.concat(&power);
            exponent = exponent.saturating_mul(2);
        }
    }

    /// Action on level [`SIGNATURE_DEPTH`]; equal elements have equal
    /// signatures.
    pub fn signature(&self, w: &GrigWord) -> Vec<u32> {
        (0..1u32 << SIGNATURE_DEPTH)
            .map(|v| w.act_on_vertex(v, SIGNATURE_DEPTH))
            .collect()
    }

    pub fn cache_len(&self) -> usize {
        self.cache.lock().unwrap().len()
    }
}

impl Default for GrigorchukGroup {
    fn default() -> Self {
        Self::new()
    }
}

impl Clone for GrigorchukGroup {
    fn clone(&self) -> Self {
        Self::with_cache_limit(self.cache_limit)
    }
}

impl fmt::Debug for GrigorchukGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GrigorchukGroup")
            .field("cache_limit", &self.cache_limit)
            .finish_non_exhaustive()
    }
}
