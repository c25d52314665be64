use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a generator symbol within its alphabet.
pub type Symbol = usize;

/// A word over a generator alphabet.
pub type Word = Vec<Symbol>;

/// Symmetric generating set: an ordered list of distinct symbols and an
/// involution pairing each symbol with its inverse. Order-two generators are
/// their own inverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorAlphabet {
    symbols: Vec<String>,
    inverse: Vec<Symbol>,
}

impl GeneratorAlphabet {
    pub fn new(symbols: Vec<String>, inverse: Vec<Symbol>) -> Result<Self> {
        if symbols.len() != inverse.len() {
            return Err(Error::Config("inverse map length mismatch".into()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::Config(format!("duplicate generator symbol `{s}`")));
            }
        }
        for (s, &t) in inverse.iter().enumerate() {
            if t >= symbols.len() || inverse[t] != s {
                return Err(Error::Config(format!(
                    "inverse map is not an involution at `{}`",
                    symbols[s]
                )));
            }
        }
        Ok(GeneratorAlphabet { symbols, inverse })
    }

    /// Alphabet `g0, g0-, g1, g1-, ...` for the given positive generator names;
    /// names listed in `involutions` are their own inverse and get no `-` twin.
    pub fn symmetric(names: &[&str], involutions: &[&str]) -> Self {
        let mut symbols = Vec::new();
        let mut inverse = Vec::new();
        for name in names {
            let s = symbols.len();
            if involutions.contains(name) {
                symbols.push(name.to_string());
                inverse.push(s);
            } else {
                symbols.push(name.to_string());
                symbols.push(format!("{name}-"));
                inverse.push(s + 1);
                inverse.push(s);
            }
        }
        GeneratorAlphabet::new(symbols, inverse).expect("generated alphabet is valid")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.symbols[s]
    }

    pub fn names(&self) -> &[String] {
        &self.symbols
    }

    #[inline]
    pub fn inverse(&self, s: Symbol) -> Symbol {
        self.inverse[s]
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.symbols.iter().position(|s| s == name)
    }

    /// Parses whitespace-separated symbol names.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        text.split_whitespace()
            .map(|tok| {
                self.lookup(tok)
                    .ok_or_else(|| Error::Argument(format!("unknown generator symbol `{tok}`")))
            })
            .collect()
    }

    pub fn format_word(&self, word: &[Symbol]) -> String {
        if word.is_empty() {
            return "e".into();
        }
        word.iter()
            .map(|&s| self.symbols[s].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn invert_word(&self, word: &[Symbol]) -> Word {
        word.iter().rev().map(|&s| self.inverse[s]).collect()
    }

    /// Cancels adjacent inverse pairs until none remain.
    pub fn free_reduce(&self, word: &[Symbol]) -> Word {
        let mut out: Word = Vec::with_capacity(word.len());
        for &s in word {
            if out.last() == Some(&self.inverse[s]) {
                out.pop();
            } else {
                out.push(s);
            }
        }
        out
    }

    pub fn is_freely_reduced(&self, word: &[Symbol]) -> bool {
        word.windows(2).all(|w| w[1] != self.inverse[w[0]])
    }

    pub fn is_cyclically_reduced(&self, word: &[Symbol]) -> bool {
        self.is_freely_reduced(word)
            && match (word.first(), word.last()) {
                (Some(&a), Some(&b)) => word.len() == 1 || b != self.inverse[a],
                _ => true,
            }
    }
}
