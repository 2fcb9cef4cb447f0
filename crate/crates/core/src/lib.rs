//! Multi-agent coverage of graphs under sensing and mobility constraints.
//!
//! Agents sit on nodes of an undirected graph and cover every node within
//! `δ` hops. Coverage is a potential game; two learning rules drive the
//! agents toward maximum coverage: binary log-linear learning ([`blll`]) and
//! the communication-free coverage rule ([`cfcm`]), in which an agent only
//! senses its own `δ`-ball and compares two positions by walking between them.

pub mod blll;
pub mod cfcm;
pub mod error;
pub mod game;
pub mod graph;
pub mod noise;
pub mod sim;
pub mod stability;
pub mod table;
pub mod trace;

pub use error::{Error, Result};
pub use game::{covered_set, partial_utility, potential, utility, ActionProfile};
pub use graph::{Graph, NodeId, NodeSet};
pub use noise::NoiseParams;
pub use table::NeighborhoodTable;
pub use trace::TraceRecord;
