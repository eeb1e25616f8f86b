//! Structural analysis for delay differential-algebraic systems.
//!
//! Given the incidence structure of a system, this crate builds the shifting
//! graph, matches equations to variable groups of highest shift, and for an
//! exposed equation enumerates *all* connections: sets of alternating steps
//! that reach every equation connected to it. Connections are exactly the
//! spanning arborescences of the connection graph rooted at the exposed
//! equation, which are enumerated by depth-first growth with a bridge test.
//!
//! ```
//! use ddae_connections::{connections::connection_report, fixtures::small_system};
//!
//! let report = connection_report(&small_system(), 3, None).unwrap();
//! assert_eq!(report.connections.len(), 2);
//! ```

pub mod arborescence;
pub mod bench;
pub mod connection_graph;
pub mod connections;
pub mod ddae;
pub mod error;
pub mod fixtures;
pub mod graphs;
pub mod matching;
pub mod naive;
pub mod scenario;

pub use arborescence::{Arborescence, Digraph};
pub use connections::{Connection, ConnectionClass, Triple};
pub use ddae::{parse_ddae, DdaeStructure, VarOccurrence};
pub use error::{Error, Result};
pub use graphs::{ShiftingGraph, VarGroup};
pub use matching::{Matching, ReachReport};
