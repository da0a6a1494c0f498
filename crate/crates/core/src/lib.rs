//! Online matching in lossless expanders and its applications.
//!
//! * [`graph`]: left-regular bipartite multigraphs and counting primitives.
//! * [`certify`]: exhaustive certificates and brute-force oracles.
//! * [`matcher`]: the online assignment `f(S, x)` with bounded sharing.
//! * [`field`] and [`disjointify`]: polynomial hashing over `GF(2^s)` that
//!   turns bounded sharing into disjoint assignments.
//! * [`oneprobe`]: a dynamic membership dictionary answering with one bit.
//! * [`netsim`]: a depth-3 non-blocking network with online routing.

pub mod certify;
pub mod disjointify;
pub mod error;
pub mod field;
pub mod graph;
pub mod matcher;
pub mod netsim;
pub mod oneprobe;
pub mod ratio;

pub use disjointify::{pick_t, NoShareMatcher, OnlineMatcher, TransformedGraph};
pub use error::{Error, NodeSide, Result};
pub use field::BinaryField;
pub use graph::{BipartiteGraph, LeftSet, MatchParams};
pub use matcher::{AssignmentResult, Matcher, Matching, RequestList};
pub use netsim::{Network, Path, RouteSession, Vertex};
pub use oneprobe::{Mode, OneProbeStore};
pub use ratio::Rational;
