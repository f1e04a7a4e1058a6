//! Heffter arrays over finite fields and the Archdeacon embeddings of
//! complete graphs built from them.
//!
//! The crate is organised bottom-up:
//!
//! - [`algebra`]: arithmetic in `Z_p` and `GF(p^e)`, element orders.
//! - [`heffter`]: partially filled arrays, the Heffter conditions, and the
//!   rank-one construction for odd coprime `m, n` with `q = 2mn + 1`.
//! - [`orderings`]: row/column orderings, simplicity and compatibility.
//! - [`embedding`]: the rotation `ρ₀`, face tracing, biembedding checks,
//!   genus.
//! - [`autgroup`]: embedding automorphisms, two independent searches and the
//!   group structure of the stabiliser of 0.
//! - [`cli`]: the `heffter` command line front end.
//!
//! ```
//! use heffter::algebra::FieldSpec;
//! use heffter::heffter::build_rank_one_canonical;
//! use heffter::orderings::natural_orderings;
//! use heffter::embedding::{build_rho0, surface_report};
//! use heffter::autgroup::restricted_search;
//!
//! let field = FieldSpec::prime(31).unwrap();
//! let array = build_rank_one_canonical(&field, 3, 5).unwrap();
//! let pair = natural_orderings(&array, 0).unwrap();
//! let emb = build_rho0(&array, &pair).unwrap();
//! assert_eq!(surface_report(&emb).unwrap().genus, 94);
//! assert_eq!(restricted_search(&emb, 3, 5).unwrap().total, 465);
//! ```

pub mod algebra;
pub mod autgroup;
pub mod cli;
pub mod embedding;
pub mod heffter;
pub mod orderings;
pub mod perm;

pub use algebra::{Element, FieldSpec};
pub use embedding::{Embedding, Face};
pub use heffter::PartiallyFilledArray;
pub use orderings::OrderingPair;
pub use perm::Permutation;
