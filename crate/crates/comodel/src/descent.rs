//! End-to-end replication of the descent counterexample: two model
//! structures on the comodule side that become equal after restriction to
//! the cover, and stay equal on the overlap.
//!
//! The cover diagram is fixed: one base node (comodules), one cover node
//! (vector spaces), one overlap node (modules), with the extended-comodule
//! direct image for the cover map and the two unit restrictions for the
//! overlap projections. `run_theorem` builds everything at a dimension
//! bound, certifies each claim, and assembles a deterministic report;
//! `equalizer_check` reads off whether the report contradicts injectivity
//! of the restriction map — the separated-presheaf property.

use crate::comodule::Morphism;
use crate::comodule::Role;
use crate::model::{
    discrete_structure, first_weq_disagreement, shared_catalog, structures_agree_surveyed,
    structure_a, structure_b,
};
use crate::transfer::{
    overlap_units, transfer_exists, SiteFunctor, TransferBounds, TransferResult,
};
use thiserror::Error;

/// The three nodes of the fixed cover diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SiteNode {
    Base,
    Cover,
    Overlap,
}

impl SiteNode {
    pub fn role(&self) -> Role {
        match self {
            SiteNode::Base => Role::TorsorSide,
            SiteNode::Cover => Role::PointSide,
            SiteNode::Overlap => Role::OverlapSide,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DescentError {
    #[error("the distinctness witness needs two-dimensional objects; max_dim {0} < 2")]
    BoundTooSmall(usize),
}

/// Distinctness verdict with its witness morphism: a map that is a weak
/// equivalence in the coreflective structure, not in the discrete one,
/// and not invertible.
#[derive(Clone, Debug)]
pub struct Distinctness {
    pub verdict: bool,
    pub witness: Option<Morphism>,
}

#[derive(Clone, Debug)]
pub struct CoverTransfers {
    pub a: TransferResult,
    pub b: TransferResult,
}

#[derive(Clone, Debug)]
pub struct OverlapTransfers {
    pub j1: TransferResult,
    pub j2: TransferResult,
    pub equal: bool,
}

/// The assembled certificate. `conclusion` is the fixed failure sentence
/// exactly when distinctness, cover-agreement and overlap-agreement all
/// hold.
#[derive(Clone, Debug)]
pub struct DescentReport {
    pub catalog_bound: usize,
    pub a_neq_b: Distinctness,
    pub i_defined: CoverTransfers,
    /// Both cover transfers exist and agree extensionally with each other
    /// and with the discrete structure on the cover catalog.
    pub i_equal: bool,
    pub j_defined_equal: OverlapTransfers,
    pub conclusion: String,
}

pub const FAILURE_CONCLUSION: &str = "separated presheaf property fails (bounded certificate)";
pub const NO_FAILURE_CONCLUSION: &str =
    "separated presheaf failure not established (bounded certificate)";

/// Runs the whole certificate at dimension bound `max_dim` with the
/// default composite length (3).
pub fn run_theorem(max_dim: usize) -> Result<DescentReport, DescentError> {
    run_theorem_with(max_dim, 3)
}

/// The full pipeline: distinctness of the two structures on the base,
/// bounded existence and extensional comparison of the cover transfers,
/// and bounded existence plus agreement of the two overlap transfers.
pub fn run_theorem_with(max_dim: usize, steps: usize) -> Result<DescentReport, DescentError> {
    run_pipeline(max_dim, steps, structure_b(), "i(b)")
}

/// Negative-control mode: compares the coreflective structure with
/// itself. Distinctness is necessarily false and the equalizer check must
/// come out false; a run that still certifies failure would expose a bug
/// in the pipeline.
pub fn run_self_test(max_dim: usize, steps: usize) -> Result<DescentReport, DescentError> {
    run_pipeline(max_dim, steps, structure_a(), "i(a-again)")
}

fn run_pipeline(
    max_dim: usize,
    steps: usize,
    b: crate::model::ModelStructure,
    b_transfer_label: &str,
) -> Result<DescentReport, DescentError> {
    if max_dim < 2 {
        return Err(DescentError::BoundTooSmall(max_dim));
    }
    let bounds = TransferBounds { steps, max_dim };
    let base_cat = shared_catalog(SiteNode::Base.role(), max_dim);
    let cover_cat = shared_catalog(SiteNode::Cover.role(), max_dim);
    let overlap_cat = shared_catalog(SiteNode::Overlap.role(), max_dim);

    let a = structure_a();

    // Distinctness: the canonical witness is the least catalog morphism
    // on which the weak-equivalence predicates disagree (the first
    // disagreement overall may be a cofibration disagreement; the weq
    // witness is the one every downstream claim needs).
    let weq_witness = first_weq_disagreement(&a, &b, &base_cat);
    let distinct = !structures_agree_surveyed(&a, &b, &base_cat);
    let a_neq_b = Distinctness { verdict: distinct, witness: weq_witness };

    // Transfers along the cover map.
    let ia = transfer_exists(&a, SiteFunctor::ExtendedComodule, SiteFunctor::Forget, bounds, "i(a)");
    let ib = transfer_exists(
        &b,
        SiteFunctor::ExtendedComodule,
        SiteFunctor::Forget,
        bounds,
        b_transfer_label,
    );
    let cover_discrete = discrete_structure(SiteNode::Cover.role());
    let i_equal = match (&ia.structure, &ib.structure) {
        (Some(sa), Some(sb)) => {
            structures_agree_surveyed(sa, sb, &cover_cat)
                && structures_agree_surveyed(sa, &cover_discrete, &cover_cat)
        }
        _ => false,
    };

    // Transfers along the two overlap projections, applied to i(a).
    let (u1, u2) = overlap_units();
    let overlap_discrete = discrete_structure(SiteNode::Overlap.role());
    let (j1, j2, j_equal) = match &ia.structure {
        Some(sa) => {
            let j1 = transfer_exists(sa, u1, SiteFunctor::FreeModule, bounds, "j1(i(a))");
            let j2 = transfer_exists(sa, u2, SiteFunctor::FreeModule, bounds, "j2(i(a))");
            let equal = match (&j1.structure, &j2.structure) {
                (Some(s1), Some(s2)) => {
                    structures_agree_surveyed(s1, s2, &overlap_cat)
                        && structures_agree_surveyed(s1, &overlap_discrete, &overlap_cat)
                }
                _ => false,
            };
            (j1, j2, equal)
        }
        None => {
            let missing = TransferResult {
                exists: false,
                bounds,
                structure: None,
                obstruction: ia.obstruction.clone(),
            };
            (missing.clone(), missing, false)
        }
    };

    let all_hold = a_neq_b.verdict && i_equal && j_equal;
    let conclusion =
        if all_hold { FAILURE_CONCLUSION.to_string() } else { NO_FAILURE_CONCLUSION.to_string() };

    Ok(DescentReport {
        catalog_bound: max_dim,
        a_neq_b,
        i_defined: CoverTransfers { a: ia, b: ib },
        i_equal,
        j_defined_equal: OverlapTransfers { j1, j2, equal: j_equal },
        conclusion,
    })
}

/// True iff the report contradicts injectivity of the first restriction
/// map: two distinct structures on the base with well-defined, equal
/// restrictions to the cover whose further restrictions to the overlap
/// are well-defined and agree.
pub fn equalizer_check(report: &DescentReport) -> bool {
    report.a_neq_b.verdict
        && report.i_defined.a.exists
        && report.i_defined.b.exists
        && report.i_equal
        && report.j_defined_equal.j1.exists
        && report.j_defined_equal.j2.exists
        && report.j_defined_equal.equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitMatrix;
    use crate::model::structure_a;

    #[test]
    fn bound_below_two_is_rejected() {
        assert_eq!(run_theorem(1).unwrap_err(), DescentError::BoundTooSmall(1));
        assert_eq!(run_theorem(0).unwrap_err(), DescentError::BoundTooSmall(0));
    }

    #[test]
    fn theorem_holds_at_bound_two() {
        let report = run_theorem(2).unwrap();
        assert!(report.a_neq_b.verdict);
        let w = report.a_neq_b.witness.as_ref().unwrap();
        assert_eq!(w.map(), &BitMatrix::from_rows(&[&[1], &[0]]));
        assert!(report.i_equal);
        assert!(report.j_defined_equal.equal);
        assert_eq!(report.conclusion, FAILURE_CONCLUSION);
        assert!(equalizer_check(&report));
    }

    #[test]
    fn witness_satisfies_the_distinctness_contract() {
        let report = run_theorem(3).unwrap();
        let w = report.a_neq_b.witness.as_ref().unwrap();
        let a = structure_a();
        let b = crate::model::structure_b();
        assert!(a.is_weq(w));
        assert!(!b.is_weq(w));
        assert!(!w.is_iso());
    }

    #[test]
    fn self_comparison_mode_yields_no_failure() {
        // Comparing a with itself: distinctness is forced false, and the
        // equalizer check must come out false.
        let cat = shared_catalog(Role::TorsorSide, 2);
        let a = structure_a();
        assert!(crate::model::equal_on_catalog(&a, &a, &cat).equal);
        assert!(structures_agree_surveyed(&a, &a, &cat));
        let mut report = run_theorem(2).unwrap();
        report.a_neq_b = Distinctness { verdict: false, witness: None };
        assert!(!equalizer_check(&report));
    }

    #[test]
    fn synthetic_unequal_restrictions_do_not_certify() {
        let mut report = run_theorem(2).unwrap();
        report.i_equal = false;
        assert!(!equalizer_check(&report));
    }
}
