//! Intermediate-ring lattices of finite commutative ring extensions.
pub mod analysis;
pub mod build;
pub mod composite;
pub mod diag;
pub mod dot;
pub mod extension;
pub mod fixtures;
pub mod ideal;
pub mod interval;
pub mod lattice;
pub mod poset;
pub mod report;
pub mod ring;
mod snf;
pub mod splitter;
pub mod support;

pub use analysis::{analyze, load_fixture, load_text, AnalyzeError, AnalyzeOptions, Instance, Loaded};
pub use build::{BuiltRing, RingKind, RingSpec};
pub use composite::{build_composite, Component, Composite, CompositeError, LabeledLattice};
pub use diag::SpecError;
pub use extension::{AnalysisError, Extension, MinimalKind};
pub use ideal::{Ideal, IdempotentDecomposition, MaximalIdeal};
pub use interval::{enumerate_interval, ExtensionLattice, Limits, Subring};
pub use lattice::{Lattice, LatticeError, LatticeMetrics};
pub use poset::{AntichainProfile, PosetError, SupportPoset};
pub use report::{AnalysisReport, SCHEMA_VERSION};
pub use ring::{Elem, ElemSet, FiniteRing, RingError, DEFAULT_SIZE_CAP};
pub use support::{CheckLog, Mask, SupportedLattice};
