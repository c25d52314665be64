//! Finitely generated groups given by normal forms or word-problem oracles,
//! and balls in their Cayley graphs.

mod alphabet;
mod ball;
mod catalog;
mod models;
mod presentation;

pub use alphabet::{GeneratorAlphabet, Symbol, Word};
pub use ball::{
    cayley_ball, cayley_ball_with_budget, growth_table, kappa, Ball, BallBuilder,
    DEFAULT_VERTEX_BUDGET,
};
pub use catalog::{catalog_group, Source, VALID_SPECS};
pub use models::{BaumslagSolitar, DehnGroup, FreeAbelian, FreeGroup, Heisenberg, Lamplighter};
pub use presentation::{genus_two_presentation, DehnReducer, Presentation};

use std::fmt;

use serde::{Deserialize, Serialize};

/// Canonical encoding of a group element (normal-form coordinates, or a word
/// as symbol indices for word-based models).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ElementKey(pub Vec<i64>);

impl ElementKey {
    pub fn from_word(word: &[Symbol]) -> Self {
        ElementKey(word.iter().map(|&s| s as i64).collect())
    }

    pub fn to_word(&self) -> Word {
        self.0.iter().map(|&s| s as Symbol).collect()
    }
}

impl fmt::Debug for ElementKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A group presented by a symmetric generating set and a right-multiplication
/// oracle on element keys.
///
/// `multiply` must be a pure function. For normal-form models keys are
/// canonical and `same_element` is key equality. Oracle-backed models
/// override `keys_are_canonical`, `same_element` and `invariant`; ball
/// construction then canonicalises keys to the first representative found.
pub trait GroupModel: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    fn alphabet(&self) -> &GeneratorAlphabet;

    fn identity(&self) -> ElementKey;

    fn multiply(&self, key: &ElementKey, generator: Symbol) -> ElementKey;

    /// Maximum relator length `M` of the chosen presentation, when known.
    fn relator_bound(&self) -> Option<usize> {
        None
    }

    fn presentation(&self) -> Option<&Presentation> {
        None
    }

    /// Known to be virtually free (documented per catalog entry, not decided).
    fn virtually_free(&self) -> bool;

    /// Known to be one-ended (documented per catalog entry, not decided).
    fn one_ended(&self) -> bool;

    /// The Cayley graph on this generating set is a tree (a free basis).
    fn cayley_graph_is_tree(&self) -> bool {
        false
    }

    fn keys_are_canonical(&self) -> bool {
        true
    }

    fn same_element(&self, a: &ElementKey, b: &ElementKey) -> bool {
        a == b
    }

    /// A value equal on equal elements, used to bucket oracle comparisons.
    fn invariant(&self, key: &ElementKey) -> ElementKey {
        key.clone()
    }

    fn format_key(&self, key: &ElementKey) -> String;

    /// Applies a word to `start` on the right.
    fn apply_word(&self, start: &ElementKey, word: &[Symbol]) -> ElementKey {
        word.iter()
            .fold(start.clone(), |k, &g| self.multiply(&k, g))
    }
}
