//! Wire formats and rendering for certificates and reports.
//!
//! Domain values carry closures and site tags; the wire structs here are
//! the schema-stable JSON surface: plain data, fixed field order,
//! byte-deterministic output. Matrices travel as row-major 0/1 arrays.
//! Morphism wires embed both endpoint objects, so a report is
//! self-contained; the site a morphism lives on is recorded once per
//! report, not per matrix.
//!
//! Parsing back a rendered report reproduces the wire value exactly;
//! reconstructing domain objects from wires revalidates every invariant
//! (square shapes, square-zero structure maps, intertwining).

use crate::comodule::{Comodule, ComoduleError, Morphism, NormalForm, Role};
use crate::descent::{CoverTransfers, DescentReport, Distinctness, OverlapTransfers};
use crate::gf2::BitMatrix;
use crate::model::generation::{GenerationWitness, RecipeStep};
use crate::model::{
    AxiomEntry, AxiomReport, AxiomWitness, CofCertificate, CofWitness, Square,
};
use crate::transfer::{TransferBounds, TransferResult};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Markdown,
}

pub fn render_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("wire types serialize")
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, serde_json::Error> {
    serde_json::from_str(text)
}

// ---------------------------------------------------------------------------
// Objects and morphisms
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComoduleWire {
    pub dim: usize,
    /// Structure endomorphism, row-major 0/1.
    pub d: Vec<u8>,
}

impl From<&Comodule> for ComoduleWire {
    fn from(m: &Comodule) -> Self {
        Self { dim: m.dim(), d: m.d().to_bits() }
    }
}

impl ComoduleWire {
    /// Reconstructs and revalidates the object on the given site.
    pub fn to_comodule(&self, role: Role) -> Result<Comodule, ComoduleError> {
        if self.d.len() != self.dim * self.dim || self.d.iter().any(|&b| b > 1) {
            return Err(ComoduleError::ShapeMismatch {
                exp_rows: self.dim,
                exp_cols: self.dim,
                got_rows: if self.dim == 0 { self.d.len() } else { self.d.len() / self.dim },
                got_cols: self.dim.min(self.d.len()),
            });
        }
        Comodule::new(BitMatrix::from_bits(self.dim, self.dim, &self.d), role)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismWire {
    pub src: ComoduleWire,
    pub dst: ComoduleWire,
    /// The underlying matrix (dst.dim × src.dim), row-major 0/1.
    #[serde(rename = "A")]
    pub map: Vec<u8>,
}

impl From<&Morphism> for MorphismWire {
    fn from(g: &Morphism) -> Self {
        Self { src: g.src().into(), dst: g.dst().into(), map: g.map().to_bits() }
    }
}

impl MorphismWire {
    pub fn to_morphism(&self, role: Role) -> Result<Morphism, ComoduleError> {
        let src = self.src.to_comodule(role)?;
        let dst = self.dst.to_comodule(role)?;
        if self.map.len() != dst.dim() * src.dim() || self.map.iter().any(|&b| b > 1) {
            return Err(ComoduleError::ShapeMismatch {
                exp_rows: dst.dim(),
                exp_cols: src.dim(),
                got_rows: 0,
                got_cols: self.map.len(),
            });
        }
        Morphism::new(src.clone(), dst.clone(), BitMatrix::from_bits(dst.dim(), src.dim(), &self.map))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixWire {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<u8>,
}

impl From<&BitMatrix> for MatrixWire {
    fn from(m: &BitMatrix) -> Self {
        Self { rows: m.rows(), cols: m.cols(), entries: m.to_bits() }
    }
}

impl MatrixWire {
    pub fn to_matrix(&self) -> Option<BitMatrix> {
        if self.entries.len() != self.rows * self.cols || self.entries.iter().any(|&b| b > 1) {
            return None;
        }
        Some(BitMatrix::from_bits(self.rows, self.cols, &self.entries))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareWire {
    pub top: MorphismWire,
    pub left: MorphismWire,
    pub right: MorphismWire,
    pub bottom: MorphismWire,
}

impl From<&Square> for SquareWire {
    fn from(sq: &Square) -> Self {
        Self {
            top: sq.top().into(),
            left: sq.left().into(),
            right: sq.right().into(),
            bottom: sq.bottom().into(),
        }
    }
}

// ---------------------------------------------------------------------------
// Axiom reports
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AxiomWitnessWire {
    TwoOfThree { first: MorphismWire, second: MorphismWire, composite: MorphismWire },
    Retract { outer: MorphismWire, retract: MorphismWire, class: String },
    Lifting { square: SquareWire },
    Factorization { morphism: MorphismWire, target: String },
}

impl From<&AxiomWitness> for AxiomWitnessWire {
    fn from(w: &AxiomWitness) -> Self {
        match w {
            AxiomWitness::TwoOfThree { first, second, composite } => AxiomWitnessWire::TwoOfThree {
                first: first.into(),
                second: second.into(),
                composite: composite.into(),
            },
            AxiomWitness::Retract { outer, retract, class } => AxiomWitnessWire::Retract {
                outer: outer.into(),
                retract: retract.into(),
                class: (*class).into(),
            },
            AxiomWitness::Lifting { square } => {
                AxiomWitnessWire::Lifting { square: square.into() }
            }
            AxiomWitness::Factorization { morphism, target } => AxiomWitnessWire::Factorization {
                morphism: morphism.into(),
                target: (*target).into(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomEntryWire {
    pub axiom: String,
    pub status: bool,
    pub bound: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<AxiomWitnessWire>,
}

impl From<&AxiomEntry> for AxiomEntryWire {
    fn from(e: &AxiomEntry) -> Self {
        Self {
            axiom: e.axiom.clone(),
            status: e.status,
            bound: e.bound,
            witness: e.witness.as_ref().map(Into::into),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReportWire {
    pub structure: String,
    pub site: String,
    pub bound: usize,
    pub all_pass: bool,
    pub entries: Vec<AxiomEntryWire>,
}

impl From<&AxiomReport> for AxiomReportWire {
    fn from(r: &AxiomReport) -> Self {
        Self {
            structure: r.structure.clone(),
            site: r.role.to_string(),
            bound: r.bound,
            all_pass: r.all_pass(),
            entries: r.entries.iter().map(Into::into).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Cofibration certificates
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecipeStepWire {
    pub killed: MatrixWire,
    pub added: usize,
}

impl From<&RecipeStep> for RecipeStepWire {
    fn from(s: &RecipeStep) -> Self {
        Self { killed: (&s.killed).into(), added: s.added }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationWitnessWire {
    pub source_trivial: usize,
    pub source_free: usize,
    pub steps: Vec<RecipeStepWire>,
    pub via_retract: bool,
}

impl From<&GenerationWitness> for GenerationWitnessWire {
    fn from(w: &GenerationWitness) -> Self {
        Self {
            source_trivial: w.source.trivial,
            source_free: w.source.free,
            steps: w.steps.iter().map(Into::into).collect(),
            via_retract: w.via_retract,
        }
    }
}

impl GenerationWitnessWire {
    pub fn source_normal_form(&self) -> NormalForm {
        NormalForm { trivial: self.source_trivial, free: self.source_free }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CofWitnessWire {
    NonLiftingSquare { square: SquareWire },
    Recipe { recipe: GenerationWitnessWire },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CofCertificateWire {
    pub method: String,
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<CofWitnessWire>,
}

impl From<&CofCertificate> for CofCertificateWire {
    fn from(c: &CofCertificate) -> Self {
        Self {
            method: c.method.label(),
            verdict: c.verdict,
            witness: c.witness.as_ref().map(|w| match w {
                CofWitness::NonLiftingSquare(sq) => {
                    CofWitnessWire::NonLiftingSquare { square: sq.into() }
                }
                CofWitness::Recipe(r) => CofWitnessWire::Recipe { recipe: r.into() },
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// Transfer results and the descent report
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsWire {
    pub steps: usize,
    pub max_dim: usize,
}

impl From<TransferBounds> for BoundsWire {
    fn from(b: TransferBounds) -> Self {
        Self { steps: b.steps, max_dim: b.max_dim }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferResultWire {
    pub exists: bool,
    pub bounds: BoundsWire,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub structure_name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub obstruction: Option<MorphismWire>,
}

impl From<&TransferResult> for TransferResultWire {
    fn from(r: &TransferResult) -> Self {
        Self {
            exists: r.exists,
            bounds: r.bounds.into(),
            structure_name: r.structure.as_ref().map(|s| s.name().to_string()),
            obstruction: r.obstruction.as_ref().map(Into::into),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinctnessWire {
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<MorphismWire>,
}

impl From<&Distinctness> for DistinctnessWire {
    fn from(d: &Distinctness) -> Self {
        Self { verdict: d.verdict, witness: d.witness.as_ref().map(Into::into) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverTransfersWire {
    pub a: TransferResultWire,
    pub b: TransferResultWire,
}

impl From<&CoverTransfers> for CoverTransfersWire {
    fn from(c: &CoverTransfers) -> Self {
        Self { a: (&c.a).into(), b: (&c.b).into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapTransfersWire {
    pub j1: TransferResultWire,
    pub j2: TransferResultWire,
    pub equal: bool,
}

impl From<&OverlapTransfers> for OverlapTransfersWire {
    fn from(o: &OverlapTransfers) -> Self {
        Self { j1: (&o.j1).into(), j2: (&o.j2).into(), equal: o.equal }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentReportWire {
    pub catalog_bound: usize,
    pub a_neq_b: DistinctnessWire,
    pub i_defined: CoverTransfersWire,
    pub i_equal: bool,
    pub j_defined_equal: OverlapTransfersWire,
    pub conclusion: String,
}

impl From<&DescentReport> for DescentReportWire {
    fn from(r: &DescentReport) -> Self {
        Self {
            catalog_bound: r.catalog_bound,
            a_neq_b: (&r.a_neq_b).into(),
            i_defined: (&r.i_defined).into(),
            i_equal: r.i_equal,
            j_defined_equal: (&r.j_defined_equal).into(),
            conclusion: r.conclusion.clone(),
        }
    }
}

// ---------------------------------------------------------------------------
// Catalog and cofibration survey reports (CLI surfaces)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogObjectWire {
    pub trivial: usize,
    pub free: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogReportWire {
    pub bound: usize,
    pub site: String,
    pub object_count: usize,
    pub morphism_count: u128,
    pub objects: Vec<CatalogObjectWire>,
}

impl CatalogReportWire {
    pub fn from_catalog(cat: &crate::comodule::Catalog) -> Self {
        let objects = cat
            .objects()
            .iter()
            .map(|o| {
                let nf = crate::comodule::normal_form(o);
                CatalogObjectWire { trivial: nf.trivial, free: nf.free, dim: o.dim() }
            })
            .collect();
        Self {
            bound: cat.bound(),
            site: cat.role().to_string(),
            object_count: cat.object_count(),
            morphism_count: cat.morphism_count(),
            objects,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CofDisagreementWire {
    pub morphism: MorphismWire,
    pub verdicts: BTreeMap<String, bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CofAgreementWire {
    pub all_agree: bool,
    pub disagreement_count: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_disagreement: Option<CofDisagreementWire>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CofReportWire {
    pub bound: usize,
    pub steps: usize,
    pub primary_method: String,
    pub morphisms_checked: usize,
    /// Per method: how many catalog morphisms are cofibrations.
    pub verdict_true_counts: BTreeMap<String, usize>,
    pub agreement: CofAgreementWire,
}

// ---------------------------------------------------------------------------
// Markdown rendering
// ---------------------------------------------------------------------------

fn check(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn catalog_markdown(r: &CatalogReportWire) -> String {
    let mut out = String::new();
    out.push_str(&format!("# Catalog (site: {}, max_dim = {})\n\n", r.site, r.bound));
    out.push_str(&format!("{} objects, {} morphisms\n\n", r.object_count, r.morphism_count));
    out.push_str("| object | trivial summands | two-dim blocks | dim |\n|---|---|---|---|\n");
    for (i, o) in r.objects.iter().enumerate() {
        out.push_str(&format!("| {} | {} | {} | {} |\n", i, o.trivial, o.free, o.dim));
    }
    out
}

pub fn axiom_markdown(r: &AxiomReportWire) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# Model axioms: structure {} (site: {}, max_dim = {})\n\n",
        r.structure, r.site, r.bound
    ));
    out.push_str(&format!("overall: {}\n\n", check(r.all_pass)));
    out.push_str("| axiom | status | bound |\n|---|---|---|\n");
    for e in &r.entries {
        out.push_str(&format!("| {} | {} | {} |\n", e.axiom, check(e.status), e.bound));
    }
    for e in &r.entries {
        if let Some(w) = &e.witness {
            out.push_str(&format!("\nwitness for {}:\n\n```json\n{}\n```\n", e.axiom,
                render_json(w)));
        }
    }
    out
}

pub fn cof_markdown(r: &CofReportWire) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# Cofibration survey (max_dim = {}, steps = {}, primary method: {})\n\n",
        r.bound, r.steps, r.primary_method
    ));
    out.push_str(&format!("{} morphisms checked\n\n", r.morphisms_checked));
    out.push_str("| method | cofibrations |\n|---|---|\n");
    for (m, c) in &r.verdict_true_counts {
        out.push_str(&format!("| {m} | {c} |\n"));
    }
    out.push_str(&format!(
        "\nmethod agreement: {} ({} disagreements)\n",
        check(r.agreement.all_agree),
        r.agreement.disagreement_count
    ));
    if let Some(d) = &r.agreement.first_disagreement {
        out.push_str(&format!("\nfirst disagreement:\n\n```json\n{}\n```\n", render_json(d)));
    }
    out
}

pub fn descent_markdown(r: &DescentReportWire) -> String {
    let mut out = String::new();
    out.push_str(&format!("# Descent certificate (max_dim = {})\n\n", r.catalog_bound));
    out.push_str("| claim | verdict |\n|---|---|\n");
    out.push_str(&format!("| distinct structures on the base | {} |\n", check(r.a_neq_b.verdict)));
    out.push_str(&format!(
        "| cover transfer of a exists (steps ≤ {}) | {} |\n",
        r.i_defined.a.bounds.steps,
        check(r.i_defined.a.exists)
    ));
    out.push_str(&format!(
        "| cover transfer of b exists (steps ≤ {}) | {} |\n",
        r.i_defined.b.bounds.steps,
        check(r.i_defined.b.exists)
    ));
    out.push_str(&format!(
        "| cover transfers equal (and discrete) | {} |\n",
        check(r.i_equal)
    ));
    out.push_str(&format!(
        "| overlap transfers exist | {} |\n",
        check(r.j_defined_equal.j1.exists && r.j_defined_equal.j2.exists)
    ));
    out.push_str(&format!(
        "| overlap transfers equal (and discrete) | {} |\n",
        check(r.j_defined_equal.equal)
    ));
    out.push_str(&format!("\nconclusion: {}\n", r.conclusion));
    if let Some(w) = &r.a_neq_b.witness {
        out.push_str(&format!(
            "\ndistinctness witness (weak equivalence in a, not in b, not invertible):\n\n```json\n{}\n```\n",
            render_json(w)
        ));
    }
    out
}
