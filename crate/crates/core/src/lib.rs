pub mod algebra;
pub mod canon;
pub mod category;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod extension;
pub mod fixtures;
pub mod format;
pub mod partial_maps;
pub mod pbij;
pub mod premorphism;
pub mod product;
pub mod relation;
pub mod semilattice;

pub use algebra::{check_rsmorphism, validate_restriction, CongruencePartition, RSMorphism, RSemigroup};
pub use error::{Error, Result};
pub use pbij::PBij;
pub use semilattice::Semilattice;
