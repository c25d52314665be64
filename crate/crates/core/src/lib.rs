//! Separation profiles of Cayley graphs.
//!
//! The crate builds balls in Cayley graphs of finitely generated groups,
//! computes or brackets the minimum balanced vertex separator of finite
//! graphs, assembles empirical separation profiles from those cuts, and
//! searches for metric witnesses of non-hyperbolicity.

pub mod error;
pub mod graphs;
pub mod cuts;
pub mod groups;
pub mod profiles;
pub mod hyperbolicity;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/cuts.md")]
    mod cuts {}
    #[doc = include_str!("../../../book/src/profiles.md")]
    mod profiles {}
    #[doc = include_str!("../../../book/src/hyperbolicity.md")]
    mod hyperbolicity {}
}
