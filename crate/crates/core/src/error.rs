use std::path::PathBuf;

use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node {node} is out of range for a graph with {node_count} nodes")]
    InvalidNode { node: NodeId, node_count: usize },

    #[error("agent index {index} is out of range for {agent_count} agents")]
    InvalidAgent { index: usize, agent_count: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("the graph must be connected")]
    Disconnected,

    #[error("graph generation failed: {0}")]
    Generation(String),

    #[error("infeasible transition for agent {agent}: {reason}")]
    Infeasible { agent: usize, reason: String },

    #[error("enumeration of {required} profiles exceeds the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("search failed: {0}")]
    SearchFailed(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("cannot access {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
