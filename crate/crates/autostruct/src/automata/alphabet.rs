//! Alphabets and letters for n-tape automata.
//!
//! Every automaton in this crate runs over an [`Alphabet`]: a base symbol
//! set together with an arity. A letter is an arity-tuple whose coordinates
//! are base symbols or the padding mark; the all-padding tuple is excluded,
//! so an arity-1 alphabet is just the base set itself.

use crate::error::{Error, Result};
use smallvec::SmallVec;
use std::sync::Arc;

/// One coordinate of a letter: a base-symbol index, or the pad index
/// (equal to the base size) for a tape that has run out.
pub type TapeSym = u8;

/// A letter: one coordinate per tape. Orders lexicographically; the pad
/// index is the largest coordinate value, so padding sorts last.
pub type SymTuple = SmallVec<[TapeSym; 8]>;

/// A word over the base alphabet (no padding inside).
pub type Word = Vec<TapeSym>;

/// Base alphabets are capped so that one tape's symbol set plus padding
/// fits in a 64-bit mask.
pub const MAX_BASE: usize = 63;

/// Spelling of the pad coordinate in the textual formats.
pub const PAD_NAME: &str = "_";

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    base: Arc<Vec<String>>,
    arity: usize,
}

impl Alphabet {
    /// Arity-1 alphabet over the given symbol names, in the given order.
    pub fn new<S: Into<String>>(names: Vec<S>) -> Result<Self> {
        Self::tuple(names, 1)
    }

    /// Alphabet of arity-tuples over the given base names.
    pub fn tuple<S: Into<String>>(names: Vec<S>, arity: usize) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::AlphabetMismatch("empty alphabet".into()));
        }
        if names.len() > MAX_BASE {
            return Err(Error::AlphabetMismatch(format!(
                "alphabet has {} symbols, the limit is {MAX_BASE}",
                names.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty()
                || n == PAD_NAME
                || n.contains(|c: char| c.is_whitespace() || c == ',')
            {
                return Err(Error::AlphabetMismatch(format!("invalid symbol name {n:?}")));
            }
            if names[..i].contains(n) {
                return Err(Error::AlphabetMismatch(format!("duplicate symbol {n:?}")));
            }
        }
        assert!(arity >= 1, "arity must be positive");
        Ok(Alphabet {
            base: Arc::new(names),
            arity,
        })
    }

    /// Same base symbols, different arity.
    pub fn with_arity(&self, arity: usize) -> Self {
        assert!(arity >= 1, "arity must be positive");
        Alphabet {
            base: Arc::clone(&self.base),
            arity,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn base_len(&self) -> usize {
        self.base.len()
    }

    /// The pad coordinate value: one past the last base index.
    pub fn pad(&self) -> TapeSym {
        self.base.len() as TapeSym
    }

    pub fn base_names(&self) -> &[String] {
        &self.base
    }

    pub fn base_index(&self, name: &str) -> Option<TapeSym> {
        self.base.iter().position(|n| n == name).map(|i| i as TapeSym)
    }

    pub fn same_base(&self, other: &Alphabet) -> bool {
        Arc::ptr_eq(&self.base, &other.base) || self.base == other.base
    }

    /// Number of letters: (base+1)^arity - 1.
    pub fn symbol_count(&self) -> u128 {
        let b = self.base.len() as u128 + 1;
        b.pow(self.arity as u32) - 1
    }

    pub fn coord_name(&self, c: TapeSym) -> &str {
        if c == self.pad() {
            PAD_NAME
        } else {
            &self.base[c as usize]
        }
    }

    /// Letter as text: coordinate names joined with commas ("0,_,1").
    pub fn format_sym(&self, sym: &SymTuple) -> String {
        debug_assert_eq!(sym.len(), self.arity);
        sym.iter()
            .map(|&c| self.coord_name(c))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parse a letter in the `format_sym` spelling.
    pub fn parse_sym(&self, text: &str) -> Result<SymTuple> {
        let parts: Vec<&str> = text.split(',').collect();
        if parts.len() != self.arity {
            return Err(Error::ArityMismatch {
                name: text.into(),
                expected: self.arity,
                got: parts.len(),
            });
        }
        let mut sym = SymTuple::new();
        for p in &parts {
            if *p == PAD_NAME {
                sym.push(self.pad());
            } else {
                sym.push(
                    self.base_index(p)
                        .ok_or_else(|| Error::UnknownSymbol((*p).into()))?,
                );
            }
        }
        if sym.iter().all(|&c| c == self.pad()) {
            return Err(Error::UnknownSymbol(format!(
                "{text:?} is the all-padding tuple"
            )));
        }
        Ok(sym)
    }

    /// Word as text: symbol names concatenated.
    pub fn format_word(&self, w: &[TapeSym]) -> String {
        w.iter().map(|&c| &*self.base[c as usize]).collect()
    }

    /// Parse a word by greedy longest-match against the base names.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut out = Word::new();
        let mut rest = text;
        while !rest.is_empty() {
            let hit = self
                .base
                .iter()
                .enumerate()
                .filter(|(_, n)| rest.starts_with(n.as_str()))
                .max_by_key(|(_, n)| n.len());
            match hit {
                Some((i, n)) => {
                    out.push(i as TapeSym);
                    rest = &rest[n.len()..];
                }
                None => return Err(Error::UnknownSymbol(rest.into())),
            }
        }
        Ok(out)
    }
}

impl std::fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Alphabet[{} x{}]", self.base.join(" "), self.arity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use smallvec::smallvec;

    #[test]
    fn rejects_bad_alphabets() {
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new(vec!["0", "0"]).is_err());
        assert!(Alphabet::new(vec!["_"]).is_err());
        assert!(Alphabet::new(vec!["a,b"]).is_err());
    }

    #[test]
    fn sym_roundtrip_and_order() {
        let a = Alphabet::tuple(vec!["0", "1"], 2).unwrap();
        assert_eq!(a.symbol_count(), 8);
        let s = a.parse_sym("0,_").unwrap();
        assert_eq!(a.format_sym(&s), "0,_");
        assert!(a.parse_sym("_,_").is_err());
        assert!(a.parse_sym("0").is_err());
        let lo: SymTuple = smallvec![0, 1];
        let hi: SymTuple = smallvec![0, a.pad()];
        assert!(lo < hi, "padding sorts after base symbols");
    }

    #[test]
    fn word_roundtrip_longest_match() {
        let a = Alphabet::new(vec!["x", "xy", "z"]).unwrap();
        let w = a.parse_word("xyxz").unwrap();
        assert_eq!(w, vec![1, 0, 2]);
        assert_eq!(a.format_word(&w), "xyxz");
        assert_eq!(a.parse_word("").unwrap(), Vec::<TapeSym>::new());
        assert!(a.parse_word("q").is_err());
    }
}
