//! Abstract decorated surfaces: bipartite cell decompositions of closed
//! oriented surfaces, the perturbation moves between them, and exhaustive
//! connectivity searches at small scale.

pub mod canon;
pub mod cells;
pub mod moves;
pub mod quad;
pub mod search;

pub use canon::{canonical_form, is_chiral, iso, isomorphism, CanonicalForm};
pub use cells::{parse_cells, serialize_cells, CellDecomposition, CellError, Color, Predicates};
pub use moves::{deperturb, edge_switch, parse_moves, perturb, Move, MoveError, MoveSequence};
pub use quad::{quad_dissections, quad_switch_graph, Rectangulation, SwitchGraph};
pub use search::{connect_by_switches, connect_decorations, enumerate_deperturbed, SearchError};
