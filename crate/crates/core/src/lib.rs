//! Fusion-ring level computations for rational sector systems: quantum
//! dimensions and global index, Verlinde/modular data, Longo-Rehren
//! principal graphs and alpha-induction counts, multi-interval index
//! identities, Deligne and Drinfeld doubles, and a finite-dimensional
//! crossed-product model of the Longo-Rehren inclusion for pointed systems.

pub mod catalog;
pub mod double_construction;
pub mod error;
pub mod fusion_ring;
pub mod group;
pub mod lr_graphs;
pub mod lr_oracle;
pub mod modular_data;
pub mod multi_interval;
pub mod report;
pub mod ring_file;

pub use catalog::CatalogEntry;
pub use double_construction::{DoubleComparison, DoubledRing, OrbifoldBudget, Provenance};
pub use error::{Error, Result};
pub use fusion_ring::{Combination, DimensionVector, FusionRing, Grading, ValidationReport};
pub use group::{CharacterTable, GroupTable, C64};
pub use lr_graphs::{BipartiteGraph, Chirality};
pub use lr_oracle::{CrossedProductAlgebra, ExpansionCoefficients};
pub use modular_data::{FusionTensor, ModularData, ModularityReport};
pub use multi_interval::{EvenPartRatio, IndexLedger};
pub use report::{Check, Report};
pub use ring_file::{LoadedRing, RingFile};
