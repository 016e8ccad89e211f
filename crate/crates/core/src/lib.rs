//! Exact computations for central extensions of loop groups over tori and
//! reductive groups: root data, Weyl groups, level lattices, the centralizer
//! cocycle obstruction and Čech models of torus gerbes.

pub mod cech;
pub mod error;
pub mod linalg;
pub mod rootdata;
pub mod levels;
pub mod obstruction;
pub mod weyl;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/lattices.md")]
    mod lattices {}
    #[doc = include_str!("../../../book/src/root-data.md")]
    mod root_data {}
    #[doc = include_str!("../../../book/src/weyl.md")]
    mod weyl {}
    #[doc = include_str!("../../../book/src/levels.md")]
    mod levels {}
    #[doc = include_str!("../../../book/src/obstruction.md")]
    mod obstruction {}
    #[doc = include_str!("../../../book/src/cech.md")]
    mod cech {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
}
