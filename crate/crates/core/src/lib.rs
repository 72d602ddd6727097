//! Surface braid groups on polyhedral surfaces: curve systems crossing the
//! dual graph, and their reduction to words in edge transpositions.

pub mod canonical;
pub mod cli;
pub mod chains;
pub mod curve;
pub mod rewrite;
pub mod surface;
pub mod text;
pub mod verify;

pub use canonical::Canonical;
pub use chains::{boundary, edge_chain_of, solve_preimage, Chain, ChainError, Grade};
pub use curve::{CurveError, CurveSystem, GeneratorWord, Letter, Permutation, StrandWord, Token};
pub use rewrite::{reduce_main, EngineConfig, EngineError, Move, Trace};
pub use surface::{parse_surface, EdgeId, FaceId, Sign, Surface, SurfaceError, VertexId};
pub use text::ParseError;
