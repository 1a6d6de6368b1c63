//! Amoeba graphs: feasible edge replacements and the groups they generate,
//! the recursive tree families `T_k`, `A_k`, `B_k`, factorization of label
//! permutations into replacement chains, and balancing numbers.
//!
//! Permutation products are left to right throughout: `(σ·τ)(x) = τ(σ(x))`.

pub mod amoeba;
pub mod balancing;
pub mod canon;
pub mod error;
pub mod factor;
pub mod families;
pub mod graph;
pub mod group;
pub mod io;
pub mod iso;
pub mod perm;
pub mod subgraph;
pub mod util;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeReplacement, Label, LabeledGraph};
pub use perm::Permutation;
