//! Upper-tail toolkit for substructure counts: hypergraph moment bounds,
//! linear-system solution hypergraphs, rooted subgraph statistics, and
//! simulation-backed verification of bound envelopes.

pub mod bounds;
pub mod error;
pub mod hypergraph;
pub mod linsys;
pub mod report;
pub mod rooted;
pub mod sim;
pub mod util;

pub use error::{Error, Result};
