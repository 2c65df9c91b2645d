//! Characteristic-class bookkeeping for the examples: Chern classes
//! orthogonal to a Kähler class, Seifert smoothness, Betti numbers of circle
//! bundles and necessary admissibility conditions.
//!
//! Everything here is exact integer or rational arithmetic.

pub mod admissibility;
pub mod gysin;
pub mod lattice;

pub use admissibility::{admissibility_report, AdmissibilityReport, CheckStatus, LinkData};
pub use gysin::{gysin_betti, gysin_tower, BettiVector, GysinInput};
pub use lattice::{chern_scan, seifert_filter, ChernCandidate, IntersectionLattice, KahlerVector, ScanFilters, ScanResult};
