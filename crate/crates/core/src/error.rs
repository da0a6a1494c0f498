use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{kind} node {id} out of range (count {count})")]
    InvalidNode {
        kind: NodeSide,
        id: usize,
        count: usize,
    },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("enumeration budget exceeded: {required} subsets required, cap is {cap}")]
    BudgetExceeded { cap: u64, required: u64 },
    #[error("request list of length {len} exceeds capacity {capacity}")]
    CapacityExceeded { len: usize, capacity: usize },
    #[error("flat source must have power-of-two size, got {0}")]
    InvalidSource(usize),
    #[error("redirection infeasible: {right_count} right nodes x {cap} < {edges} edges")]
    Infeasible {
        right_count: usize,
        cap: u64,
        edges: u64,
    },
    #[error("field element {element} out of range for order {order}")]
    InvalidElement { element: u32, order: u32 },
    #[error("assignment loop stalled at iteration {iteration} with core of size {core}")]
    Stalled { iteration: usize, core: usize },
    #[error("no certified graph in {tries} tries (best ratio {best})")]
    SearchFailed { tries: u32, best: String },
    #[error("stack discipline violated: {0}")]
    Discipline(String),
    #[error("duplicate terminal {0}")]
    DuplicateTerminal(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeSide {
    Left,
    Right,
}

impl std::fmt::Display for NodeSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NodeSide::Left => f.write_str("left"),
            NodeSide::Right => f.write_str("right"),
        }
    }
}

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
