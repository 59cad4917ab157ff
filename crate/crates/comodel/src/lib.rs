//! Exact computations with finite-dimensional comodules over the Hopf
//! algebra `k[x]/x^2`, `k = GF(2)`, and with model structures on the
//! categories they form.
//!
//! The library builds three finite "sites" (comodules, plain vector
//! spaces, `k[x]/x^2`-modules), puts two model structures on the comodule
//! side, transfers them along the direct-image functors of the standard
//! cover, and emits bounded, machine-checkable certificates that the two
//! structures are distinct while all their transfers coincide — i.e. that
//! model-structure data cannot be glued back from this cover.
//!
//! Everything is exact GF(2) linear algebra; all verdicts are quantified
//! over explicitly enumerated catalogs and carry their bounds.

pub mod comodule;
pub mod descent;
pub mod gf2;
pub mod model;
pub mod report;
pub mod transfer;

pub use comodule::{
    validate_coaction, Catalog, Coaction, CoactionError, Comodule, ComoduleError, Morphism,
    NormalForm, Role,
};
pub use descent::{
    equalizer_check, run_self_test, run_theorem, run_theorem_with, DescentReport, SiteNode,
};
pub use gf2::BitMatrix;
pub use model::{
    cof_membership, discrete_structure, equal_on_catalog, factor_cof_weq, find_lift,
    shared_catalog, structure_a, structure_b, verify_axioms, AxiomReport, CofCertificate,
    CofMethod, ModelStructure, Square,
};
pub use transfer::{
    check_adjunction, overlap_units, transfer, transfer_exists, SiteFunctor, TransferBounds,
    TransferResult,
};
