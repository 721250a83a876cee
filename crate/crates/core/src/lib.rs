//! Exact computations with bigraded chain complexes over `F[u,v]`: knot Floer
//! homology in three flavors, basepoint actions, and the derived Floer groups.

pub mod cobordism;
pub mod complex;
pub mod fixture;
pub mod fv_module;
pub mod gf2;
pub mod homology;
pub mod invariants;
pub mod poly;

pub use complex::{Chain, Complex, ComplexError, Generator, Morphism, ValidationReport};
pub use fv_module::{ModuleDecomp, Summand};
pub use homology::{Action, HilbertTable, HomologyError, Window};
pub use poly::{Bigrading, Flavor, Monomial, Poly};
