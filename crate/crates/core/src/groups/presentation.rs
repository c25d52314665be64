//! Finite presentations and Dehn's algorithm for C'(1/6) small-cancellation
//! presentations.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::alphabet::{GeneratorAlphabet, Symbol, Word};
use crate::error::{Error, Result};

/// `<A | R>` with every relator freely and cyclically reduced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub alphabet: GeneratorAlphabet,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(alphabet: GeneratorAlphabet, relators: Vec<Word>) -> Result<Self> {
        for r in &relators {
            if r.is_empty() || !alphabet.is_cyclically_reduced(r) {
                return Err(Error::Config(format!(
                    "relator `{}` is not freely and cyclically reduced",
                    alphabet.format_word(r)
                )));
            }
        }
        Ok(Presentation { alphabet, relators })
    }

    /// Text format: line 1 lists the generator symbols, every further
    /// non-empty line is a relator such as `a b a- b-` (`-` marks inverses).
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "presentation has no generator line".into(),
        })?;
        let names: Vec<&str> = header.split_whitespace().collect();
        if let Some(bad) = names.iter().find(|n| n.ends_with('-')) {
            return Err(Error::Parse {
                line: 1,
                message: format!("generator `{bad}` may not end in `-`"),
            });
        }
        let alphabet = GeneratorAlphabet::symmetric(&names, &[]);
        let mut relators = Vec::new();
        for (line, l) in lines {
            let word = alphabet.parse_word(l).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
            if word.is_empty() || !alphabet.is_cyclically_reduced(&word) {
                return Err(Error::Parse {
                    line,
                    message: "relator must be freely and cyclically reduced".into(),
                });
            }
            relators.push(word);
        }
        Presentation::new(alphabet, relators)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn max_relator_length(&self) -> usize {
        self.relators.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// All cyclic conjugates of the relators and their inverses, deduplicated.
    pub fn symmetrized(&self) -> Vec<Word> {
        let mut set = BTreeSet::new();
        for r in &self.relators {
            for w in [r.clone(), self.alphabet.invert_word(r)] {
                for shift in 0..w.len() {
                    let mut c = w[shift..].to_vec();
                    c.extend_from_slice(&w[..shift]);
                    set.insert(c);
                }
            }
        }
        set.into_iter().collect()
    }

    /// Longest piece (common prefix of two distinct symmetrized relators)
    /// together with the length of the shorter relator it came from, if the
    /// C'(1/6) condition `6 * |piece| < |relator|` fails.
    pub fn small_cancellation_violation(&self) -> Option<(usize, usize)> {
        let sym = self.symmetrized();
        for (i, x) in sym.iter().enumerate() {
            for y in &sym[i + 1..] {
                let piece = x.iter().zip(y).take_while(|(a, b)| a == b).count();
                let shorter = x.len().min(y.len());
                if 6 * piece >= shorter {
                    return Some((piece, shorter));
                }
            }
        }
        None
    }
}

/// Word-problem oracle for C'(1/6) presentations: repeatedly replaces any
/// subword that is more than half of a cyclic conjugate of a relator (or its
/// inverse) by the shorter complement, then freely reduces.
#[derive(Clone, Debug)]
pub struct DehnReducer {
    presentation: Presentation,
    /// long half -> shorter equivalent word
    rules: HashMap<Word, Word>,
    min_rule_len: usize,
    max_rule_len: usize,
}

impl DehnReducer {
    pub fn new(presentation: Presentation) -> Result<Self> {
        if let Some((piece, len)) = presentation.small_cancellation_violation() {
            return Err(Error::UnsupportedPresentation(format!(
                "not C'(1/6): piece of length {piece} in a relator of length {len}"
            )));
        }
        let alphabet = &presentation.alphabet;
        let mut rules: HashMap<Word, Word> = HashMap::new();
        for w in presentation.symmetrized() {
            for cut in w.len() / 2 + 1..=w.len() {
                let long = w[..cut].to_vec();
                let short = alphabet.invert_word(&w[cut..]);
                match rules.get(&long) {
                    Some(existing) if existing.len() <= short.len() => {}
                    _ => {
                        rules.insert(long, short);
                    }
                }
            }
        }
        let min_rule_len = rules.keys().map(Vec::len).min().unwrap_or(0);
        let max_rule_len = rules.keys().map(Vec::len).max().unwrap_or(0);
        Ok(DehnReducer {
            presentation,
            rules,
            min_rule_len,
            max_rule_len,
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn alphabet(&self) -> &GeneratorAlphabet {
        &self.presentation.alphabet
    }

    /// Dehn-reduced form of `word`: freely reduced, empty iff `word` is trivial.
    pub fn normalize(&self, word: &[Symbol]) -> Word {
        let alphabet = self.alphabet();
        let mut w = alphabet.free_reduce(word);
        if self.rules.is_empty() {
            return w;
        }
        'outer: loop {
            for start in 0..w.len() {
                let longest = self.max_rule_len.min(w.len() - start);
                for len in (self.min_rule_len..=longest).rev() {
                    if let Some(short) = self.rules.get(&w[start..start + len]) {
                        let mut next = Vec::with_capacity(w.len());
                        next.extend_from_slice(&w[..start]);
                        next.extend_from_slice(short);
                        next.extend_from_slice(&w[start + len..]);
                        w = alphabet.free_reduce(&next);
                        continue 'outer;
                    }
                }
            }
            return w;
        }
    }

    pub fn is_identity(&self, word: &[Symbol]) -> bool {
        self.normalize(word).is_empty()
    }

    /// Whether `u` and `v` represent the same element (`u v^-1` trivial).
    pub fn equal(&self, u: &[Symbol], v: &[Symbol]) -> bool {
        let mut w = u.to_vec();
        w.extend(self.alphabet().invert_word(v));
        self.is_identity(&w)
    }
}

/// `<a, b, c, d | [a, b][c, d]>`, the genus-two surface group.
pub fn genus_two_presentation() -> Presentation {
    Presentation::parse("a b c d\na b a- b- c d c- d-\n").expect("static presentation")
}
