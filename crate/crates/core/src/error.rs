use thiserror::Error;

use crate::label::Label;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge {0} is missing its {1} dart")]
    MissingDart(Label, char),
    #[error("dart {0}{1} occurs more than once")]
    DuplicateDart(Label, char),
    #[error("empty cycle in a map with darts")]
    EmptyCycleInNonEmptyMap,
    #[error("map is disconnected")]
    Disconnected,
    #[error("unknown edge {0}")]
    UnknownEdge(Label),
    #[error("unknown matrix label {0}")]
    UnknownLabel(Label),
    #[error("unknown vertex {0}")]
    UnknownVertex(Label),
    #[error("edge set is not a spanning quasi-tree")]
    NotQuasiTree,
    #[error("edge set is not a spanning tree of the underlying graph")]
    NotSpanningTree,
    #[error("map is not a bouquet")]
    NotBouquet,
    #[error("matrix is not skew-symmetric")]
    NotSkewSymmetric,
    #[error("pivot entry ({0},{1}) is zero")]
    ZeroPivot(Label, Label),
    #[error("graph has loops")]
    HasLoops,
    #[error("input size {size} exceeds the limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("group is infinite")]
    InfiniteGroup,
    #[error("invalid chip state: {0}")]
    InvalidState(String),
    #[error("edge {0} cannot fire")]
    IllegalFire(Label),
    #[error("state is not critical")]
    NotCritical,
    #[error("{0}")]
    Input(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
