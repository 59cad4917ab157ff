//! Model structures as predicate triples, the two structures on the
//! comodule side, and a desk-scale verifier for the closed model axioms.
//!
//! Everything here is *bounded* verification: predicates are total on
//! single morphisms, while quantified statements (lifting, retract
//! closure, two-of-three, factorization) run over an explicit catalog and
//! report the bound they were checked at.
//!
//! Lifting problems are linear over GF(2), which this module exploits
//! throughout: for a fixed pair (left map `g`, right map `w`) the
//! commuting squares form a linear subspace and "every square lifts" is
//! exactly surjectivity of the linear map `h ↦ (h∘g, w∘h)` onto it. That
//! turns per-square enumeration into a handful of rank computations and
//! makes exhaustive claims over six-figure square counts cheap. The
//! equivalence with direct enumeration is itself tested on small
//! catalogs.

pub mod generation;

use crate::comodule::{triv_map, ArrowClasses, Catalog, Comodule, Morphism, Role};
use crate::gf2::BitMatrix;
use generation::{generation_verdict, GenerationWitness};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("square does not commute")]
    NonCommutingSquare,
    #[error("square legs have incompatible endpoints")]
    MalformedSquare,
}

// ---------------------------------------------------------------------------
// Shared catalogs
// ---------------------------------------------------------------------------

/// Catalogs are immutable and expensive to repopulate, so bounded checks
/// share them per (role, bound).
pub fn shared_catalog(role: Role, bound: usize) -> Arc<Catalog> {
    static CACHE: OnceLock<Mutex<HashMap<(Role, usize), Arc<Catalog>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry((role, bound))
        .or_insert_with(|| Arc::new(Catalog::new(bound, role).expect("bound within cap")))
        .clone()
}

// ---------------------------------------------------------------------------
// Model structures
// ---------------------------------------------------------------------------

pub type Pred = Arc<dyn Fn(&Morphism) -> bool + Send + Sync>;
pub type FactorFn = Arc<dyn Fn(&Morphism) -> (Morphism, Morphism) + Send + Sync>;

/// A named triple of morphism predicates on one site, with an optional
/// constructive (cofibration, acyclic fibration) factorization used by
/// the axiom verifier.
#[derive(Clone)]
pub struct ModelStructure {
    name: String,
    role: Role,
    weq: Pred,
    cof: Pred,
    fib: Pred,
    factor_cof_aweq: Option<FactorFn>,
}

impl ModelStructure {
    pub fn new(name: impl Into<String>, role: Role, weq: Pred, cof: Pred, fib: Pred) -> Self {
        Self { name: name.into(), role, weq, cof, fib, factor_cof_aweq: None }
    }

    pub fn with_factorizer(mut self, f: FactorFn) -> Self {
        self.factor_cof_aweq = Some(f);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn is_weq(&self, g: &Morphism) -> bool {
        debug_assert_eq!(g.src().role(), self.role);
        (self.weq)(g)
    }

    pub fn is_cof(&self, g: &Morphism) -> bool {
        debug_assert_eq!(g.src().role(), self.role);
        (self.cof)(g)
    }

    pub fn is_fib(&self, g: &Morphism) -> bool {
        debug_assert_eq!(g.src().role(), self.role);
        (self.fib)(g)
    }
}

impl std::fmt::Debug for ModelStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ModelStructure({} on {})", self.name, self.role)
    }
}

/// The coreflective model structure on comodules: weak equivalences are
/// the maps inducing an isomorphism on maximal x-trivial subobjects,
/// every map is a fibration, and the cofibrations are the saturation of
/// the pushouts of maps between x-trivial objects, decided by the closed
/// form (see [`cof_membership`] for the cross-validated methods).
pub fn structure_a() -> ModelStructure {
    ModelStructure::new(
        "a",
        Role::TorsorSide,
        Arc::new(|g| triv_map(g).is_iso()),
        Arc::new(closed_form_cof),
        Arc::new(|_| true),
    )
    .with_factorizer(Arc::new(factor_cof_weq))
}

/// The discrete model structure on comodules.
pub fn structure_b() -> ModelStructure {
    discrete_named("b", Role::TorsorSide)
}

/// The discrete model structure on an arbitrary site: weak equivalences
/// are the isomorphisms, everything is a cofibration and a fibration.
pub fn discrete_structure(role: Role) -> ModelStructure {
    discrete_named("discrete", role)
}

fn discrete_named(name: &str, role: Role) -> ModelStructure {
    ModelStructure::new(
        name,
        role,
        Arc::new(Morphism::is_iso),
        Arc::new(|_| true),
        Arc::new(|_| true),
    )
}

// ---------------------------------------------------------------------------
// Cofibration membership
// ---------------------------------------------------------------------------

/// Decision methods for membership in the saturated cofibration class of
/// the coreflective structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CofMethod {
    /// `image(d_target) = image(g ∘ d_source)` as subspaces. A closed-form
    /// candidate criterion; it must agree with the other two methods
    /// bounded-exhaustively before being trusted.
    ClosedForm,
    /// Left lifting property against every weak equivalence between
    /// catalog objects up to the given bound.
    LlpBounded(usize),
    /// Search for an explicit recipe: at most `steps` pushouts of maps
    /// between x-trivial catalog objects (dimension bound the second
    /// field), composed, matching up to compatible isomorphisms, with
    /// retract closure applied once at the end.
    GenerationBounded(usize, usize),
}

impl CofMethod {
    pub fn label(&self) -> String {
        match self {
            CofMethod::ClosedForm => "closed_form".into(),
            CofMethod::LlpBounded(d) => format!("llp(max_dim={d})"),
            CofMethod::GenerationBounded(s, d) => format!("generation(steps={s},max_dim={d})"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum CofWitness {
    /// A commuting square with the candidate on the left that admits no
    /// lift against the recorded weak equivalence.
    NonLiftingSquare(Square),
    /// A replayable pushout recipe generating the morphism.
    Recipe(GenerationWitness),
}

/// Verdict of one membership method, with a witness whenever one explains
/// the verdict (a recipe for a positive generation verdict, a square for
/// a negative lifting verdict).
#[derive(Clone, Debug)]
pub struct CofCertificate {
    pub method: CofMethod,
    pub verdict: bool,
    pub witness: Option<CofWitness>,
}

/// Membership of `g` in the cofibration class of the coreflective
/// structure, by the requested method.
pub fn cof_membership(g: &Morphism, method: CofMethod) -> CofCertificate {
    assert_eq!(g.src().role(), Role::TorsorSide, "cofibration class lives on the comodule side");
    match method {
        CofMethod::ClosedForm => {
            CofCertificate { method, verdict: closed_form_cof(g), witness: None }
        }
        CofMethod::LlpBounded(bound) => {
            let reps = weq_class_reps(bound);
            for w in reps.iter() {
                if !has_all_lifts(g, w) {
                    let square = find_nonlifting_square(g, w).expect("criterion failed");
                    debug_assert!(find_lift(&square).is_none());
                    return CofCertificate {
                        method,
                        verdict: false,
                        witness: Some(CofWitness::NonLiftingSquare(square)),
                    };
                }
            }
            CofCertificate { method, verdict: true, witness: None }
        }
        CofMethod::GenerationBounded(steps, dim) => match generation_verdict(g, steps, dim) {
            Some(recipe) => CofCertificate {
                method,
                verdict: true,
                witness: Some(CofWitness::Recipe(recipe)),
            },
            None => CofCertificate { method, verdict: false, witness: None },
        },
    }
}

/// The closed-form criterion: the image of the target structure map
/// equals the image of `g` composed with the source structure map.
pub fn closed_form_cof(g: &Morphism) -> bool {
    let lhs = g.dst().d().column_space_canonical();
    let rhs = g.map().compose(g.src().d()).column_space_canonical();
    lhs == rhs
}

/// Weak equivalences of the coreflective structure between catalog
/// objects, one representative per arrow-isomorphism class. The lifting
/// property is invariant under arrow isomorphism on both sides, so these
/// representatives decide LLP against *every* catalog weak equivalence.
fn weq_class_reps(bound: usize) -> Arc<Vec<Morphism>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<Morphism>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(bound)
        .or_insert_with(|| {
            let cat = shared_catalog(Role::TorsorSide, bound);
            let a = structure_a();
            let mut classes = ArrowClasses::new();
            for (_, _, g) in cat.all_morphisms() {
                if a.is_weq(g) {
                    classes.insert(&cat, g);
                }
            }
            Arc::new(classes.reps)
        })
        .clone()
}

// ---------------------------------------------------------------------------
// Squares and lifting
// ---------------------------------------------------------------------------

/// A commuting square: `right ∘ top = bottom ∘ left` with
/// `top: A → X`, `left: A → B`, `right: X → Y`, `bottom: B → Y`.
#[derive(Clone, Debug)]
pub struct Square {
    top: Morphism,
    left: Morphism,
    right: Morphism,
    bottom: Morphism,
}

impl Square {
    pub fn new(
        top: Morphism,
        left: Morphism,
        right: Morphism,
        bottom: Morphism,
    ) -> Result<Self, ModelError> {
        if top.src() != left.src()
            || top.dst() != right.src()
            || left.dst() != bottom.src()
            || right.dst() != bottom.dst()
        {
            return Err(ModelError::MalformedSquare);
        }
        if right.compose(&top).map() != bottom.compose(&left).map() {
            return Err(ModelError::NonCommutingSquare);
        }
        Ok(Self { top, left, right, bottom })
    }

    pub fn top(&self) -> &Morphism {
        &self.top
    }
    pub fn left(&self) -> &Morphism {
        &self.left
    }
    pub fn right(&self) -> &Morphism {
        &self.right
    }
    pub fn bottom(&self) -> &Morphism {
        &self.bottom
    }
}

/// The canonical diagonal filler `h: B → X` with `h∘left = top` and
/// `right∘h = bottom`, if one exists. The three conditions (intertwining
/// and the two triangle identities) form one linear system over GF(2);
/// the canonical solution zeroes all free variables.
pub fn find_lift(sq: &Square) -> Option<Morphism> {
    let b = sq.left.dst();
    let x = sq.top.dst();
    let (nx, nb) = (x.dim(), b.dim());
    let vars = nx * nb;
    let (na, ny) = (sq.left.src().dim(), sq.right.dst().dim());

    let eq_count = vars + nx * na + ny * nb;
    let mut system = BitMatrix::zeros(eq_count, vars);
    let mut rhs = BitMatrix::zeros(eq_count, 1);
    // Intertwining: h d_B + d_X h = 0.
    for i in 0..nx {
        for j in 0..nb {
            let eq = i * nb + j;
            for k in 0..nb {
                if b.d().get(k, j) {
                    flip(&mut system, eq, i * nb + k);
                }
            }
            for k in 0..nx {
                if x.d().get(i, k) {
                    flip(&mut system, eq, k * nb + j);
                }
            }
        }
    }
    // h ∘ left = top.
    let base1 = vars;
    for i in 0..nx {
        for j in 0..na {
            let eq = base1 + i * na + j;
            for k in 0..nb {
                if sq.left.map().get(k, j) {
                    flip(&mut system, eq, i * nb + k);
                }
            }
            rhs.set(eq, 0, sq.top.map().get(i, j));
        }
    }
    // right ∘ h = bottom.
    let base2 = vars + nx * na;
    for i in 0..ny {
        for j in 0..nb {
            let eq = base2 + i * nb + j;
            for k in 0..nx {
                if sq.right.map().get(i, k) {
                    flip(&mut system, eq, k * nb + j);
                }
            }
            rhs.set(eq, 0, sq.bottom.map().get(i, j));
        }
    }

    let solution = system.solve(&rhs)?;
    let h = BitMatrix::from_fn(nx, nb, |i, j| solution.get(i * nb + j, 0));
    Some(Morphism::new(b.clone(), x.clone(), h).expect("solution intertwines"))
}

fn flip(m: &mut BitMatrix, i: usize, j: usize) {
    let cur = m.get(i, j);
    m.set(i, j, !cur);
}

/// Linear data for the square space of a (left, right) pair: the kernel
/// basis of the constraint system on `(vec top, vec bottom)` and the
/// stacked images `(vec(h∘left), vec(right∘h))` of an intertwiner basis.
fn square_space_and_lift_image(g: &Morphism, w: &Morphism) -> (BitMatrix, BitMatrix) {
    let (a, b) = (g.src(), g.dst());
    let (x, y) = (w.src(), w.dst());
    let (na, nb, nx, ny) = (a.dim(), b.dim(), x.dim(), y.dim());
    let t_vars = nx * na;
    let b_vars = ny * nb;
    let vars = t_vars + b_vars;

    let eq_count = t_vars + b_vars + ny * na;
    let mut system = BitMatrix::zeros(eq_count, vars);
    // top intertwines: t d_A + d_X t = 0.
    for i in 0..nx {
        for j in 0..na {
            let eq = i * na + j;
            for k in 0..na {
                if a.d().get(k, j) {
                    flip(&mut system, eq, i * na + k);
                }
            }
            for k in 0..nx {
                if x.d().get(i, k) {
                    flip(&mut system, eq, k * na + j);
                }
            }
        }
    }
    // bottom intertwines: b d_B + d_Y b = 0.
    for i in 0..ny {
        for j in 0..nb {
            let eq = t_vars + i * nb + j;
            for k in 0..nb {
                if b.d().get(k, j) {
                    flip(&mut system, eq, t_vars + i * nb + k);
                }
            }
            for k in 0..ny {
                if y.d().get(i, k) {
                    flip(&mut system, eq, t_vars + k * nb + j);
                }
            }
        }
    }
    // Commutation: w t + b g = 0.
    let base = t_vars + b_vars;
    for i in 0..ny {
        for j in 0..na {
            let eq = base + i * na + j;
            for k in 0..nx {
                if w.map().get(i, k) {
                    flip(&mut system, eq, k * na + j);
                }
            }
            for k in 0..nb {
                if g.map().get(k, j) {
                    flip(&mut system, eq, t_vars + i * nb + k);
                }
            }
        }
    }
    let squares = system.kernel_basis();

    // Image of h ↦ (h g, w h) over the intertwiner basis of Hom(B, X).
    let hom_basis = intertwiner_basis(b, x);
    let mut image = BitMatrix::zeros(vars, hom_basis.len());
    for (col, h) in hom_basis.iter().enumerate() {
        let hg = h.compose(g.map());
        let wh = w.map().compose(h);
        for i in 0..nx {
            for j in 0..na {
                if hg.get(i, j) {
                    image.set(i * na + j, col, true);
                }
            }
        }
        for i in 0..ny {
            for j in 0..nb {
                if wh.get(i, j) {
                    image.set(t_vars + i * nb + j, col, true);
                }
            }
        }
    }
    (squares, image)
}

fn intertwiner_basis(src: &Comodule, dst: &Comodule) -> Vec<BitMatrix> {
    let (ns, nd) = (src.dim(), dst.dim());
    let vars = nd * ns;
    let mut system = BitMatrix::zeros(vars, vars);
    for i in 0..nd {
        for j in 0..ns {
            let eq = i * ns + j;
            for k in 0..ns {
                if src.d().get(k, j) {
                    flip(&mut system, eq, i * ns + k);
                }
            }
            for k in 0..nd {
                if dst.d().get(i, k) {
                    flip(&mut system, eq, k * ns + j);
                }
            }
        }
    }
    let kernel = system.kernel_basis();
    (0..kernel.cols())
        .map(|c| BitMatrix::from_fn(nd, ns, |i, j| kernel.get(i * ns + j, c)))
        .collect()
}

/// True iff every commuting square with `g` on the left and `w` on the
/// right admits a lift: the square space is contained in the image of
/// `h ↦ (h∘g, w∘h)`.
pub fn has_all_lifts(g: &Morphism, w: &Morphism) -> bool {
    let (squares, image) = square_space_and_lift_image(g, w);
    image.column_space_contains(&squares)
}

/// A concrete non-lifting square for a failed pair, if any: the first
/// square-space basis vector outside the lift image.
pub fn find_nonlifting_square(g: &Morphism, w: &Morphism) -> Option<Square> {
    let (squares, image) = square_space_and_lift_image(g, w);
    let base_rank = image.rank();
    for c in 0..squares.cols() {
        let s = squares.column(c);
        if image.hstack(&s).rank() > base_rank {
            let (na, nx) = (g.src().dim(), w.src().dim());
            let (nb, ny) = (g.dst().dim(), w.dst().dim());
            let t = BitMatrix::from_fn(nx, na, |i, j| s.get(i * na + j, 0));
            let bm = BitMatrix::from_fn(ny, nb, |i, j| s.get(nx * na + i * nb + j, 0));
            let top = Morphism::new(g.src().clone(), w.src().clone(), t).expect("intertwines");
            let bottom = Morphism::new(g.dst().clone(), w.dst().clone(), bm).expect("intertwines");
            return Some(Square::new(top, g.clone(), w.clone(), bottom).expect("commutes"));
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Factorization for the coreflective structure
// ---------------------------------------------------------------------------

/// Factor `f: M → N` as a cofibration followed by a weak equivalence of
/// the coreflective structure: `Q = image(f) ⊕ T^s` where `T^s` is a
/// deterministic (echelon-completed) complement of `ker(d_N) ∩ image(f)`
/// inside `ker(d_N)`; the first factor is the corestriction of `f`
/// extended by zero, the second the inclusion of the image together with
/// the chosen complement embedding.
pub fn factor_cof_weq(f: &Morphism) -> (Morphism, Morphism) {
    let n_obj = f.dst();
    let image_basis = f.map().column_space_canonical();
    let kernel = n_obj.d().kernel_basis();

    // Intersection ker(d_N) ∩ image(f): kernel vectors of [K | I].
    let combined = kernel.hstack(&image_basis);
    let mixed_kernel = combined.kernel_basis();
    let k_part =
        BitMatrix::from_fn(kernel.cols(), mixed_kernel.cols(), |i, j| mixed_kernel.get(i, j));
    let intersection = kernel.compose(&k_part).column_space_canonical();

    // Complement of the intersection inside ker(d_N), lowest kernel
    // column first.
    let mut complement_cols: Vec<BitMatrix> = Vec::new();
    let mut span = intersection.clone();
    for j in 0..kernel.cols() {
        let cand = kernel.column(j);
        let grown = span.hstack(&cand);
        if grown.rank() > span.rank() {
            complement_cols.push(cand.clone());
            span = grown;
        }
    }
    let s = complement_cols.len();
    let complement = BitMatrix::from_fn(n_obj.dim(), s, |i, j| complement_cols[j].get(i, 0));

    // Q = image(f) ⊕ T^s with the induced structure map on the image.
    let induced = image_basis
        .solve(&n_obj.d().compose(&image_basis))
        .expect("image of a morphism is d-invariant");
    let q_obj = Comodule::new(induced.direct_sum(&BitMatrix::zeros(s, s)), n_obj.role())
        .expect("restriction of a square-zero map");

    let coords = image_basis.solve(f.map()).expect("f lands in its image");
    let c_mat = coords.vstack(&BitMatrix::zeros(s, f.src().dim()));
    let c =
        Morphism::new(f.src().clone(), q_obj.clone(), c_mat).expect("corestriction intertwines");
    let w_mat = image_basis.hstack(&complement);
    let w = Morphism::new(q_obj, n_obj.clone(), w_mat).expect("inclusion intertwines");
    debug_assert_eq!(w.compose(&c).map(), f.map());
    (c, w)
}

// ---------------------------------------------------------------------------
// Extensional comparison
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct DisagreementWitness {
    pub morphism: Morphism,
    pub predicate: &'static str,
}

#[derive(Clone, Debug)]
pub struct StructureComparison {
    pub equal: bool,
    pub witness: Option<DisagreementWitness>,
}

/// Extensional equality of two structures over a catalog: all three
/// predicates agree on every morphism (streamed exhaustively). On
/// failure, returns the first disagreeing morphism in enumeration order
/// with the predicate name.
pub fn equal_on_catalog(
    ms1: &ModelStructure,
    ms2: &ModelStructure,
    cat: &Catalog,
) -> StructureComparison {
    assert_eq!(ms1.role(), ms2.role(), "comparing structures across sites");
    assert_eq!(ms1.role(), cat.role());
    for (_, _, g) in cat.stream_all() {
        if let Some(name) = predicate_disagreement(ms1, ms2, &g) {
            return StructureComparison {
                equal: false,
                witness: Some(DisagreementWitness { morphism: g, predicate: name }),
            };
        }
    }
    StructureComparison { equal: true, witness: None }
}

fn predicate_disagreement(
    ms1: &ModelStructure,
    ms2: &ModelStructure,
    g: &Morphism,
) -> Option<&'static str> {
    if ms1.is_weq(g) != ms2.is_weq(g) {
        return Some("weq");
    }
    if ms1.is_cof(g) != ms2.is_cof(g) {
        return Some("cof");
    }
    if ms1.is_fib(g) != ms2.is_fib(g) {
        return Some("fib");
    }
    None
}

/// First morphism (in catalog enumeration order) on which the weak
/// equivalence predicates disagree.
pub fn first_weq_disagreement(
    ms1: &ModelStructure,
    ms2: &ModelStructure,
    cat: &Catalog,
) -> Option<Morphism> {
    cat.stream_all().map(|(_, _, g)| g).find(|g| ms1.is_weq(g) != ms2.is_weq(g))
}

// ---------------------------------------------------------------------------
// Isomorphism-exact surveys for large catalogs
// ---------------------------------------------------------------------------

/// Visits a set of morphisms whose predicate values determine those of
/// every catalog morphism: between x-trivial objects one representative
/// per rank (rank classifies such maps up to arrow isomorphism, and all
/// predicates in this crate are arrow-isomorphism invariants), everywhere
/// else the full hom space, streamed. Returns `false` early when the
/// visitor does.
pub fn survey_morphisms(cat: &Catalog, mut visit: impl FnMut(&Morphism) -> bool) -> bool {
    let count = cat.object_count();
    for i in 0..count {
        for j in 0..count {
            let src = &cat.objects()[i];
            let dst = &cat.objects()[j];
            if src.is_x_trivial() && dst.is_x_trivial() {
                for r in 0..=src.dim().min(dst.dim()) {
                    let map =
                        BitMatrix::from_fn(dst.dim(), src.dim(), |a, b| a == b && a < r);
                    let rep = Morphism::new(src.clone(), dst.clone(), map)
                        .expect("maps of plain spaces intertwine");
                    if !visit(&rep) {
                        return false;
                    }
                }
            } else {
                for g in cat.stream_hom(i, j) {
                    if !visit(&g) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Extensional agreement decided through [`survey_morphisms`]: exact for
/// structures whose predicates are arrow-isomorphism invariants (checked
/// against [`equal_on_catalog`] in tests), and feasible on catalogs whose
/// x-trivial hom spaces are too large to walk.
pub fn structures_agree_surveyed(
    ms1: &ModelStructure,
    ms2: &ModelStructure,
    cat: &Catalog,
) -> bool {
    assert_eq!(ms1.role(), ms2.role(), "comparing structures across sites");
    assert_eq!(ms1.role(), cat.role());
    survey_morphisms(cat, |g| predicate_disagreement(ms1, ms2, g).is_none())
}

// ---------------------------------------------------------------------------
// Axiom verification
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum AxiomWitness {
    TwoOfThree { first: Morphism, second: Morphism, composite: Morphism },
    Retract { outer: Morphism, retract: Morphism, class: &'static str },
    Lifting { square: Square },
    Factorization { morphism: Morphism, target: &'static str },
}

#[derive(Clone, Debug)]
pub struct AxiomEntry {
    pub axiom: String,
    pub status: bool,
    pub bound: usize,
    pub witness: Option<AxiomWitness>,
}

/// Result of checking the closed model axioms over a catalog. A witness
/// is attached to every failing entry.
#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub structure: String,
    pub role: Role,
    pub bound: usize,
    pub entries: Vec<AxiomEntry>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.status)
    }
}

/// Desk-scale verification of the closed model axioms for `ms` over
/// `cat`: two-of-three, retract closure of each class, both lifting
/// axioms, and both factorizations.
///
/// Lifting runs per arrow-isomorphism class pair via the linear
/// surjectivity criterion; two-of-three and retract closure enumerate
/// directly up to bound 3 and per class above that. All reductions are
/// exact, not sampling.
pub fn verify_axioms(ms: &ModelStructure, cat: &Catalog) -> AxiomReport {
    assert_eq!(ms.role(), cat.role(), "verifying a structure on the wrong site");
    let bound = cat.bound();
    let mut entries = Vec::new();

    // Arrow-isomorphism classes of all catalog morphisms, with flags.
    let mut classes = ArrowClasses::new();
    for (_, _, g) in cat.all_morphisms() {
        classes.insert(cat, g);
    }
    let class_flags: Vec<(bool, bool, bool)> = classes
        .reps
        .iter()
        .map(|g| (ms.is_weq(g), ms.is_cof(g), ms.is_fib(g)))
        .collect();

    entries.push(two_of_three_entry(ms, cat, &classes, &class_flags));
    entries.extend(retract_entries(ms, cat, &classes, &class_flags));
    entries.extend(lifting_entries(cat, &classes, &class_flags));
    entries.extend(factorization_entries(ms, cat));

    AxiomReport { structure: ms.name().to_string(), role: ms.role(), bound, entries }
}

fn two_of_three_entry(
    ms: &ModelStructure,
    cat: &Catalog,
    classes: &ArrowClasses,
    class_flags: &[(bool, bool, bool)],
) -> AxiomEntry {
    let bound = cat.bound();
    let witness = if bound <= 3 {
        two_of_three_direct(ms, cat)
    } else {
        two_of_three_by_classes(ms, cat, classes, class_flags)
    };
    AxiomEntry { axiom: "two_of_three".into(), status: witness.is_none(), bound, witness }
}

fn two_of_three_violation(
    ms: &ModelStructure,
    h: &Morphism,
    g: &Morphism,
    wh: bool,
    wg: bool,
) -> Option<AxiomWitness> {
    let composite = g.compose(h);
    let wc = ms.is_weq(&composite);
    let violated = (wh && wg && !wc) || (wc && wh && !wg) || (wc && wg && !wh);
    violated.then(|| AxiomWitness::TwoOfThree { first: h.clone(), second: g.clone(), composite })
}

fn two_of_three_direct(ms: &ModelStructure, cat: &Catalog) -> Option<AxiomWitness> {
    let n = cat.object_count();
    for i in 0..n {
        for j in 0..n {
            let h_flags: Vec<bool> = cat.hom(i, j).iter().map(|h| ms.is_weq(h)).collect();
            for l in 0..n {
                let g_flags: Vec<bool> = cat.hom(j, l).iter().map(|g| ms.is_weq(g)).collect();
                for (hk, h) in cat.hom(i, j).iter().enumerate() {
                    for (gk, g) in cat.hom(j, l).iter().enumerate() {
                        if !h_flags[hk] && !g_flags[gk] {
                            // No implication can fire without at least one
                            // weak equivalence among the two factors.
                            continue;
                        }
                        if let Some(w) =
                            two_of_three_violation(ms, h, g, h_flags[hk], g_flags[gk])
                        {
                            return Some(w);
                        }
                    }
                }
            }
        }
    }
    None
}

/// Composable pairs up to arrow isomorphism: every concrete pair is
/// isomorphic to `(h, g ∘ mu)` for class representatives and an
/// automorphism `mu` of the middle object, and all weak-equivalence flags
/// involved are arrow-isomorphism invariants.
fn two_of_three_by_classes(
    ms: &ModelStructure,
    cat: &Catalog,
    classes: &ArrowClasses,
    class_flags: &[(bool, bool, bool)],
) -> Option<AxiomWitness> {
    for (hi, h) in classes.reps.iter().enumerate() {
        let wh = class_flags[hi].0;
        for (gi, g) in classes.reps.iter().enumerate() {
            let wg = class_flags[gi].0;
            if !wh && !wg {
                continue;
            }
            if h.dst() != g.src() {
                continue;
            }
            let mid = cat.index_of(h.dst()).expect("catalog object");
            for mu in cat.automorphisms(mid) {
                let shifted =
                    Morphism::new(g.src().clone(), g.dst().clone(), g.map().compose(mu))
                        .expect("precomposition with automorphism");
                if let Some(w) = two_of_three_violation(ms, h, &shifted, wh, wg) {
                    return Some(w);
                }
            }
        }
    }
    None
}

fn retract_entries(
    ms: &ModelStructure,
    cat: &Catalog,
    classes: &ArrowClasses,
    class_flags: &[(bool, bool, bool)],
) -> Vec<AxiomEntry> {
    let bound = cat.bound();
    let idems: Vec<Vec<BitMatrix>> = (0..cat.object_count())
        .map(|i| {
            cat.hom(i, i)
                .iter()
                .map(|g| g.map().clone())
                .filter(|e| &e.compose(e) == e)
                .collect()
        })
        .collect();

    let mut witnesses: [Option<AxiomWitness>; 3] = [None, None, None];
    for (ci, rep) in classes.reps.iter().enumerate() {
        let flags = class_flags[ci];
        if !(flags.0 || flags.1 || flags.2) {
            continue;
        }
        let si = cat.index_of(rep.src()).expect("catalog object");
        let di = cat.index_of(rep.dst()).expect("catalog object");
        for retract in crate::comodule::retract_morphisms_with(rep, &idems[si], &idems[di]) {
            let checks = [
                (0, flags.0, ms.is_weq(&retract), "weq"),
                (1, flags.1, ms.is_cof(&retract), "cof"),
                (2, flags.2, ms.is_fib(&retract), "fib"),
            ];
            for (slot, outer_in, retract_in, name) in checks {
                if outer_in && !retract_in && witnesses[slot].is_none() {
                    witnesses[slot] = Some(AxiomWitness::Retract {
                        outer: rep.clone(),
                        retract: retract.clone(),
                        class: name,
                    });
                }
            }
        }
    }

    ["weq", "cof", "fib"]
        .into_iter()
        .zip(witnesses)
        .map(|(name, witness)| AxiomEntry {
            axiom: format!("retract_closure_{name}"),
            status: witness.is_none(),
            bound,
            witness,
        })
        .collect()
}

type FlagSelector = fn((bool, bool, bool)) -> bool;

fn lifting_entries(
    cat: &Catalog,
    classes: &ArrowClasses,
    class_flags: &[(bool, bool, bool)],
) -> Vec<AxiomEntry> {
    let bound = cat.bound();
    let specs: [(&str, FlagSelector, FlagSelector); 2] = [
        ("lifting_cof_against_acyclic_fib", |f| f.1, |f| f.0 && f.2),
        ("lifting_acyclic_cof_against_fib", |f| f.0 && f.1, |f| f.2),
    ];
    specs
        .into_iter()
        .map(|(axiom, left_sel, right_sel)| {
            let mut witness = None;
            'outer: for (li, l) in classes.reps.iter().enumerate() {
                if !left_sel(class_flags[li]) {
                    continue;
                }
                for (ri, r) in classes.reps.iter().enumerate() {
                    if !right_sel(class_flags[ri]) {
                        continue;
                    }
                    if !has_all_lifts(l, r) {
                        let square = find_nonlifting_square(l, r).expect("criterion failed");
                        witness = Some(AxiomWitness::Lifting { square });
                        break 'outer;
                    }
                }
            }
            AxiomEntry { axiom: axiom.into(), status: witness.is_none(), bound, witness }
        })
        .collect()
}

fn factorization_entries(ms: &ModelStructure, cat: &Catalog) -> Vec<AxiomEntry> {
    let bound = cat.bound();
    let mut w1 = None;
    let mut w2 = None;
    for (_, _, f) in cat.all_morphisms() {
        if w1.is_none() && !factors_cof_acyclic_fib(ms, f) {
            w1 = Some(AxiomWitness::Factorization {
                morphism: f.clone(),
                target: "cof_then_acyclic_fib",
            });
        }
        if w2.is_none() && !factors_acyclic_cof_fib(ms, f) {
            w2 = Some(AxiomWitness::Factorization {
                morphism: f.clone(),
                target: "acyclic_cof_then_fib",
            });
        }
        if w1.is_some() && w2.is_some() {
            break;
        }
    }
    vec![
        AxiomEntry {
            axiom: "factorization_cof_then_acyclic_fib".into(),
            status: w1.is_none(),
            bound,
            witness: w1,
        },
        AxiomEntry {
            axiom: "factorization_acyclic_cof_then_fib".into(),
            status: w2.is_none(),
            bound,
            witness: w2,
        },
    ]
}

/// `f = id ∘ f` with `f` a cofibration, `f = f ∘ id` with `f` an acyclic
/// fibration, or the structure's constructive factorization (whose
/// output is re-verified, not trusted).
fn factors_cof_acyclic_fib(ms: &ModelStructure, f: &Morphism) -> bool {
    let id_dst = Morphism::identity(f.dst());
    let id_src = Morphism::identity(f.src());
    if ms.is_cof(f) && ms.is_weq(&id_dst) && ms.is_fib(&id_dst) {
        return true;
    }
    if ms.is_cof(&id_src) && ms.is_weq(f) && ms.is_fib(f) {
        return true;
    }
    if let Some(fac) = &ms.factor_cof_aweq {
        let (c, w) = fac(f);
        return w.compose(&c).map() == f.map() && ms.is_cof(&c) && ms.is_weq(&w) && ms.is_fib(&w);
    }
    false
}

fn factors_acyclic_cof_fib(ms: &ModelStructure, f: &Morphism) -> bool {
    let id_dst = Morphism::identity(f.dst());
    let id_src = Morphism::identity(f.src());
    if ms.is_cof(f) && ms.is_weq(f) && ms.is_fib(&id_dst) {
        return true;
    }
    if ms.is_cof(&id_src) && ms.is_weq(&id_src) && ms.is_fib(f) {
        return true;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comodule::{hom_space, normal_form};

    fn socle_inclusion() -> Morphism {
        let t = Comodule::trivial_object(Role::TorsorSide);
        let f = Comodule::free_object(Role::TorsorSide);
        Morphism::new(t, f, BitMatrix::from_rows(&[&[1], &[0]])).unwrap()
    }

    fn socle_quotient() -> Morphism {
        let t = Comodule::trivial_object(Role::TorsorSide);
        let f = Comodule::free_object(Role::TorsorSide);
        Morphism::new(f, t, BitMatrix::from_rows(&[&[0, 1]])).unwrap()
    }

    #[test]
    fn structure_a_predicate_examples() {
        let a = structure_a();
        let socle = socle_inclusion();
        assert!(a.is_weq(&socle));
        assert!(!socle.is_iso());
        let quot = socle_quotient();
        assert!(!a.is_weq(&quot));
        let id = Morphism::identity(&Comodule::free_object(Role::TorsorSide));
        assert!(a.is_weq(&id) && a.is_cof(&id) && a.is_fib(&id));
    }

    #[test]
    fn structure_b_predicate_examples() {
        let b = structure_b();
        let id = Morphism::identity(&Comodule::free_object(Role::TorsorSide));
        assert!(b.is_weq(&id));
        let socle = socle_inclusion();
        assert!(!b.is_weq(&socle));
        assert!(b.is_cof(&socle) && b.is_fib(&socle));
    }

    #[test]
    fn discrete_structure_on_all_roles() {
        for role in [Role::PointSide, Role::OverlapSide] {
            let ms = discrete_structure(role);
            let obj = Comodule::canonical(1, 0, role);
            let id = Morphism::identity(&obj);
            assert!(ms.is_weq(&id));
            let zero = Morphism::identity(&Comodule::zero(role));
            assert!(ms.is_weq(&zero));
        }
    }

    #[test]
    fn closed_form_examples() {
        assert!(closed_form_cof(&socle_quotient()));
        let f = Comodule::free_object(Role::TorsorSide);
        let from_zero = Morphism::zero_map(&Comodule::zero(Role::TorsorSide), &f);
        assert!(!closed_form_cof(&from_zero));
        assert!(closed_form_cof(&Morphism::identity(&f)));
    }

    #[test]
    fn llp_method_agrees_on_the_examples() {
        let quot = cof_membership(&socle_quotient(), CofMethod::LlpBounded(3));
        assert!(quot.verdict);
        let f = Comodule::free_object(Role::TorsorSide);
        let from_zero = Morphism::zero_map(&Comodule::zero(Role::TorsorSide), &f);
        let cert = cof_membership(&from_zero, CofMethod::LlpBounded(3));
        assert!(!cert.verdict);
        let Some(CofWitness::NonLiftingSquare(square)) = cert.witness else {
            panic!("expected a non-lifting square witness");
        };
        assert!(find_lift(&square).is_none());
    }

    #[test]
    fn find_lift_examples() {
        // left = 0 → F, right = socle T → F, bottom = id_F: no lift since
        // no morphism F → T splits the socle inclusion. Confirmed by
        // exhaustive search over Hom(F, T).
        let f = Comodule::free_object(Role::TorsorSide);
        let zero = Comodule::zero(Role::TorsorSide);
        let socle = socle_inclusion();
        let left = Morphism::zero_map(&zero, &f);
        let top = Morphism::zero_map(&zero, socle.src());
        let square = Square::new(top, left, socle.clone(), Morphism::identity(&f)).unwrap();
        assert!(find_lift(&square).is_none());
        for h in hom_space(&f, socle.src()).unwrap() {
            assert_ne!(socle.compose(&h).map(), Morphism::identity(&f).map());
        }

        // Any square with invertible right leg lifts.
        let id_sq = Square::new(
            Morphism::identity(&f),
            Morphism::identity(&f),
            Morphism::identity(&f),
            Morphism::identity(&f),
        )
        .unwrap();
        let h = find_lift(&id_sq).unwrap();
        assert_eq!(h.map(), Morphism::identity(&f).map());
    }

    #[test]
    fn non_commuting_square_is_rejected() {
        let f = Comodule::free_object(Role::TorsorSide);
        let t = Comodule::trivial_object(Role::TorsorSide);
        let socle = socle_inclusion();
        let quot = socle_quotient();
        assert_eq!(
            Square::new(socle.clone(), Morphism::identity(&t), quot.clone(), quot.clone())
                .unwrap_err(),
            ModelError::MalformedSquare
        );
        // A genuinely non-commuting square: top = socle, left = socle,
        // right = id_F, bottom = 0.
        let bad = Square::new(
            socle.clone(),
            socle.clone(),
            Morphism::identity(&f),
            Morphism::zero_map(&f, &f),
        );
        assert_eq!(bad.unwrap_err(), ModelError::NonCommutingSquare);
    }

    #[test]
    fn factorization_construction_examples() {
        let a = structure_a();
        // f = 0 → F factors as 0 → T → F with the socle inclusion as the
        // weak equivalence.
        let f = Comodule::free_object(Role::TorsorSide);
        let from_zero = Morphism::zero_map(&Comodule::zero(Role::TorsorSide), &f);
        let (c, w) = factor_cof_weq(&from_zero);
        assert_eq!(c.dst().dim(), 1);
        assert!(a.is_cof(&c));
        assert!(a.is_weq(&w));
        assert_eq!(w.compose(&c).map(), from_zero.map());

        // f = quotient F → T: image is everything, complement empty.
        let quot = socle_quotient();
        let (c2, w2) = factor_cof_weq(&quot);
        assert!(a.is_cof(&c2));
        assert!(w2.is_iso());
        assert_eq!(normal_form(c2.dst()), normal_form(quot.dst()));

        // f = identity.
        let idf = Morphism::identity(&f);
        let (c3, w3) = factor_cof_weq(&idf);
        assert!(a.is_cof(&c3) && a.is_weq(&w3) && w3.is_iso());
    }

    #[test]
    fn equal_on_catalog_finds_the_socle_witness() {
        let cat = shared_catalog(Role::TorsorSide, 2);
        let a = structure_a();
        let b = structure_b();
        let cmp = equal_on_catalog(&a, &a, &cat);
        assert!(cmp.equal);
        let cmp = equal_on_catalog(&a, &b, &cat);
        assert!(!cmp.equal);
        let w = first_weq_disagreement(&a, &b, &cat).unwrap();
        // The least weq disagreement is the socle inclusion T → F.
        assert_eq!(w.src().dim(), 1);
        assert_eq!(w.dst().dim(), 2);
        assert_eq!(w.map(), &BitMatrix::from_rows(&[&[1], &[0]]));
        assert!(a.is_weq(&w) && !b.is_weq(&w) && !w.is_iso());
    }

    #[test]
    fn two_of_three_class_reduction_matches_direct_enumeration() {
        // The class-reduced path (used above bound 3) and the direct
        // enumeration must reach the same verdict for intact and
        // corrupted structures alike.
        let cat = shared_catalog(Role::TorsorSide, 2);
        let corrupted = ModelStructure::new(
            "even_rank",
            Role::TorsorSide,
            Arc::new(|g: &Morphism| g.map().rank() % 2 == 0),
            Arc::new(|_| true),
            Arc::new(|_| true),
        );
        for ms in [structure_a(), structure_b(), corrupted] {
            let mut classes = ArrowClasses::new();
            for (_, _, g) in cat.all_morphisms() {
                classes.insert(&cat, g);
            }
            let flags: Vec<(bool, bool, bool)> = classes
                .reps
                .iter()
                .map(|g| (ms.is_weq(g), ms.is_cof(g), ms.is_fib(g)))
                .collect();
            let direct = two_of_three_direct(&ms, &cat).is_some();
            let reduced = two_of_three_by_classes(&ms, &cat, &classes, &flags).is_some();
            assert_eq!(direct, reduced, "paths disagree for {}", ms.name());
        }
    }

    #[test]
    fn has_all_lifts_matches_direct_square_enumeration() {
        // Exhaustive cross-check of the linear criterion on catalog(2):
        // for every pair (g, w), enumerate all commuting squares directly
        // and compare with the rank-based verdict.
        let cat = shared_catalog(Role::TorsorSide, 2);
        let mut checked = 0usize;
        let mut lift_failures = 0usize;
        for (_, _, g) in cat.all_morphisms() {
            for (_, _, w) in cat.all_morphisms() {
                let fast = has_all_lifts(g, w);
                let mut slow = true;
                for top in hom_space(g.src(), w.src()).unwrap() {
                    for bottom in hom_space(g.dst(), w.dst()).unwrap() {
                        if w.compose(&top).map() != bottom.compose(g).map() {
                            continue;
                        }
                        let sq = Square::new(top.clone(), g.clone(), w.clone(), bottom).unwrap();
                        if find_lift(&sq).is_none() {
                            slow = false;
                        }
                    }
                }
                assert_eq!(fast, slow, "disagreement for {g:?} vs {w:?}");
                checked += 1;
                if !fast {
                    lift_failures += 1;
                }
            }
        }
        assert_eq!(checked, 49 * 49); // catalog(2) has 49 morphisms
        assert!(lift_failures > 0, "the cross-check should exercise both verdicts");
    }
}
