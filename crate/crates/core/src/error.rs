use thiserror::Error;

use crate::graph::{Edge, Label};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("loop at label {0}: edges must join distinct labels")]
    Loop(Label),
    #[error("edge {0} uses a label outside the label set")]
    DanglingEdge(Edge),
    #[error("label {0} is not in the label set")]
    UnknownLabel(Label),
    #[error("edge {0} is not present")]
    MissingEdge(Edge),
    #[error("edge {0} is already present")]
    DuplicateEdge(Edge),
    #[error("permutation domain does not match the label set")]
    DomainMismatch,
    #[error("not a bijection: {0}")]
    NotBijection(String),
    #[error("permutations disagree on shared label {0}")]
    PasteConflict(Label),
    #[error("malformed permutation: {0}")]
    ParsePermutation(String),
    #[error("malformed graph6 string: {0}")]
    Graph6(String),
    #[error("malformed graph JSON: {0}")]
    GraphJson(String),
    #[error("replacement {0} is not feasible for this graph")]
    Infeasible(String),
    #[error("index k = {k} is outside the valid range ({range})")]
    IndexOutOfRange { k: usize, range: &'static str },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("guard refused: {0} (pass --force to override)")]
    Guard(String),
    #[error("label {0} is the fixed transposition point y0")]
    FixedPoint(Label),
    #[error("Fer objects live on different canonical graphs")]
    GraphMismatch,
    #[error("recursion depth exceeded while factoring label {0}")]
    RecursionDepth(Label),
}
