//! Desk-scale combinatorics of finite pointed monoids and their pointed sets:
//! multiplication tables, action tables, admissible sequences, exactness-axiom
//! property testing, and truncated Grothendieck-group computations via integer
//! normal forms.
//!
//! Everything here is table-level and exhaustive where feasible. Monoid
//! elements and set elements are plain indices; the absorbing zero sits at
//! index 0 and the identity at index 1 throughout.
//!
//! Background constants used for documentation and sanity reference only: the
//! zeroth K-group of finite pointed sets is ℤ (rank of a wedge of circles at
//! the set level), the group-set analogue over G₊ is the Burnside ring, and
//! the projective-line/space analogues contribute one ℤ per cell, e.g.
//! ℤⁿ⁺¹ for an n-dimensional projective construction. Only the π₀-level,
//! finite-model shadows of these facts are computed in this crate.

pub mod aset;
pub mod axioms;
pub mod canon;
pub mod enumerate;
pub mod group;
pub mod io;
pub mod ktheory;
pub mod monoid;
pub mod nset;
pub mod snf;
pub mod verify;

pub use aset::{ASetError, ASetMap, ASubset, AdmissibleSeq, FiniteASet, PcDecision};
pub use axioms::{check_acgw, check_cgw, check_quasi_exact, AxiomReport};
pub use enumerate::SetFlavor;
pub use group::GroupTable;
pub use io::IoError;
pub use ktheory::{
    build_nset_presentation, build_presentation, burnside, devissage_check, g0_nset_reports,
    localization_check, smith, stabilization_scan, BurnsideReport, ClassMap, DevissageReport,
    K0Presentation, KError, LocalizationReport, NSetReport, Provenance, ScanReport,
};
pub use monoid::{FiniteMonoid, Ideal, Localization, MonoidError, MonoidMap};
pub use nset::{FgNSet, FgnSubset, FunctionalNSet, NSetClass};
pub use snf::{AbGroup, IntMat, Lattice, PresentedGroup};
pub use verify::{corpus_monoids, run_all, CriterionResult};
