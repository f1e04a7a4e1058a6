//! The guide in `book/` compiled as documentation, so that
//! `cargo test --doc` runs every snippet against the current library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/fields.md")]
pub mod fields {}
#[doc = include_str!("../../../book/src/heffter-arrays.md")]
pub mod heffter_arrays {}
#[doc = include_str!("../../../book/src/orderings.md")]
pub mod orderings {}
#[doc = include_str!("../../../book/src/embeddings.md")]
pub mod embeddings {}
#[doc = include_str!("../../../book/src/automorphisms.md")]
pub mod automorphisms {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
