use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::AmalgamError;

/// Which factor of `L *_H G` a syllable comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    L,
    G,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::L => Side::G,
            Side::G => Side::L,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub const BOTH: [Side; 2] = [Side::L, Side::G];
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::L => "L",
            Side::G => "G",
        })
    }
}

const SIDE_BIT: u32 = 1 << 31;

/// A syllable: a factor tag and an element index of that factor, packed
/// into one `u32` so that the derived order is `(side, element)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    pub fn new(side: Side, elem: usize) -> Letter {
        debug_assert!(elem < SIDE_BIT as usize);
        match side {
            Side::L => Letter(elem as u32),
            Side::G => Letter(elem as u32 | SIDE_BIT),
        }
    }

    pub fn side(self) -> Side {
        if self.0 & SIDE_BIT == 0 {
            Side::L
        } else {
            Side::G
        }
    }

    pub fn elem(self) -> usize {
        (self.0 & !SIDE_BIT) as usize
    }

    pub fn raw(self) -> u32 {
        self.0
    }

    pub fn from_raw(raw: u32) -> Letter {
        Letter(raw)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.side(), self.elem())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A token of the raw word syntax `"L:1 G:4 H:1"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Syllable {
    L(usize),
    G(usize),
    H(usize),
}

impl Syllable {
    pub fn letter(side: Side, elem: usize) -> Syllable {
        match side {
            Side::L => Syllable::L(elem),
            Side::G => Syllable::G(elem),
        }
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Syllable::L(x) => write!(f, "L:{x}"),
            Syllable::G(x) => write!(f, "G:{x}"),
            Syllable::H(x) => write!(f, "H:{x}"),
        }
    }
}

/// Parses whitespace-separated `L:i`, `G:i` and `H:i` tokens. The empty
/// string and `e` denote the empty word.
pub fn parse_raw(text: &str) -> Result<Vec<Syllable>, AmalgamError> {
    let text = text.trim();
    if text.is_empty() || text == "e" {
        return Ok(Vec::new());
    }
    text.split_whitespace()
        .map(|tok| {
            let bad = |reason| AmalgamError::Parse { token: tok.to_string(), reason };
            let (tag, idx) = tok.split_once(':').ok_or_else(|| bad("expected FACTOR:INDEX"))?;
            let idx: usize = idx.parse().map_err(|_| bad("index is not a non-negative integer"))?;
            match tag {
                "L" => Ok(Syllable::L(idx)),
                "G" => Ok(Syllable::G(idx)),
                "H" => Ok(Syllable::H(idx)),
                _ => Err(bad("factor must be L, G or H")),
            }
        })
        .collect()
}

/// Normal form `h·t₁⋯tₙ` of an element of `L *_H G`: `h` indexes `H`,
/// the letters alternate sides and are non-identity right-coset
/// representatives.
///
/// A word is only meaningful together with the [`AmalgamContext`] that
/// produced it.
///
/// [`AmalgamContext`]: super::AmalgamContext
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AmalgamWord {
    pub(crate) h: u32,
    pub(crate) letters: Vec<Letter>,
}

impl AmalgamWord {
    pub fn identity() -> AmalgamWord {
        AmalgamWord { h: 0, letters: Vec::new() }
    }

    /// Builds a word from stored parts without checking them; see
    /// `AmalgamContext::check_word`.
    pub fn from_parts(h: usize, letters: Vec<Letter>) -> AmalgamWord {
        AmalgamWord { h: h as u32, letters }
    }

    pub fn h(&self) -> usize {
        self.h as usize
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Syllable length.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty() && self.h == 0
    }

    pub fn first_side(&self) -> Option<Side> {
        self.letters.first().map(|l| l.side())
    }

    pub fn last_side(&self) -> Option<Side> {
        self.letters.last().map(|l| l.side())
    }

    /// Tokens of the literal form, with a leading `H:k` only when `h` is
    /// not the identity of `H` (index 0 by convention of the context).
    pub fn syllables(&self) -> Vec<Syllable> {
        let mut out = Vec::with_capacity(self.letters.len() + 1);
        if self.h != 0 {
            out.push(Syllable::H(self.h as usize));
        }
        out.extend(self.letters.iter().map(|l| Syllable::letter(l.side(), l.elem())));
        out
    }
}

impl fmt::Debug for AmalgamWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AmalgamWord({self})")
    }
}

impl fmt::Display for AmalgamWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks = self.syllables();
        if toks.is_empty() {
            return f.write_str("e");
        }
        for (i, t) in toks.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for AmalgamWord {
    type Err = AmalgamError;

    /// Reads a literal that is already in normal form. Nothing is
    /// normalized here.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut h = 0usize;
        let mut letters = Vec::new();
        for (i, syl) in parse_raw(s)?.into_iter().enumerate() {
            match syl {
                Syllable::H(k) if i == 0 => h = k,
                Syllable::H(k) => {
                    return Err(AmalgamError::Parse {
                        token: format!("H:{k}"),
                        reason: "H coefficient must come first in a normal form",
                    })
                }
                Syllable::L(x) => letters.push(Letter::new(Side::L, x)),
                Syllable::G(x) => letters.push(Letter::new(Side::G, x)),
            }
        }
        Ok(AmalgamWord::from_parts(h, letters))
    }
}

impl Serialize for AmalgamWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AmalgamWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
