//! The category of finite-dimensional `k[x]/x^2`-comodules over GF(2),
//! together with its two neighbour categories in the cover diagram:
//! plain `k`-vector spaces and `k[x]/x^2`-modules.
//!
//! A counital coassociative coaction `psi(m) = psi0(m)⊗1 + psi1(m)⊗x`
//! forces `psi0 = id` and `psi1^2 = 0`, so a comodule is carried in
//! reduced form as a pair `(n, d)` with `d^2 = 0`. The same carrier, with
//! a role tag, represents all three sites: vector spaces force `d = 0`,
//! and for modules `d` is the action of `x`. The role tag exists to stop
//! accidental cross-site composition.
//!
//! `validate_coaction` is deliberately *not* implemented through the
//! reduced criterion: it expands the counit and coassociativity axioms as
//! matrix identities in `M⊗H` and `M⊗H⊗H` via Kronecker products, using
//! the structure constants of `H = k[x]/x^2` with `x` primitive. The
//! equivalence with the reduced form `(psi0 = id, psi1^2 = 0)` is then a
//! checkable fact, not an assumption.

mod arrow;
mod catalog;

pub use arrow::{
    arrow_iso, arrow_key, retract_morphisms, retract_morphisms_with, ArrowClasses, ArrowKey,
};
pub use catalog::{Catalog, DEFAULT_HARD_CAP};

use crate::gf2::BitMatrix;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Which node of the cover diagram an object lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    /// `k[x]/x^2`-comodules (quasicoherent modules on the base stack).
    TorsorSide,
    /// Plain `k`-vector spaces (modules on the cover).
    PointSide,
    /// `k[x]/x^2`-modules (modules on the overlap), `d` = action of `x`.
    OverlapSide,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Role::TorsorSide => "torsor",
            Role::PointSide => "point",
            Role::OverlapSide => "overlap",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComoduleError {
    #[error("structure map must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("structure endomorphism does not square to zero; witness column {witness}")]
    NotSquareZero { witness: BitMatrix },
    #[error("point-side objects carry no coaction data (d must be zero)")]
    PointSideStructure,
    #[error("role mismatch: {left} vs {right}")]
    RoleMismatch { left: Role, right: Role },
    #[error("matrix shape {got_rows}x{got_cols} does not match map {exp_rows}x{exp_cols}")]
    ShapeMismatch { exp_rows: usize, exp_cols: usize, got_rows: usize, got_cols: usize },
    #[error("matrix does not intertwine the structure maps; witness column {witness}")]
    NotIntertwining { witness: BitMatrix },
    #[error("pushout legs must share their source object")]
    SourceMismatch,
    #[error("catalog bound {requested} exceeds the hard cap {cap}")]
    CatalogBound { requested: usize, cap: usize },
}

/// Violations of the comodule axioms, each with a basis vector witnessing
/// the failure.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoactionError {
    #[error("counit axiom fails on the vector {witness}")]
    CounitViolation { witness: BitMatrix },
    #[error("coassociativity fails on the vector {witness}")]
    CoassociativityViolation { witness: BitMatrix },
    #[error("psi components must be square of equal dimension")]
    Malformed,
}

// ---------------------------------------------------------------------------
// Hopf structure constants of H = k[x]/x^2, x primitive.
// ---------------------------------------------------------------------------

/// Basis order of `H` is `(1, x)`; of `H⊗H` it is
/// `(1⊗1, 1⊗x, x⊗1, x⊗x)` (Kronecker index `2*h1 + h2`).
///
/// Comultiplication `Δ: H → H⊗H`, `Δ(1) = 1⊗1`, `Δ(x) = x⊗1 + 1⊗x`.
pub fn comultiplication_matrix() -> BitMatrix {
    BitMatrix::from_rows(&[&[1, 0], &[0, 1], &[0, 1], &[0, 0]])
}

/// Counit `ε: H → k`, `ε(1) = 1`, `ε(x) = 0`.
pub fn counit_matrix() -> BitMatrix {
    BitMatrix::from_rows(&[&[1, 0]])
}

/// Unit `η: k → H`, `η(1) = 1`.
pub fn unit_matrix() -> BitMatrix {
    BitMatrix::from_rows(&[&[1], &[0]])
}

// ---------------------------------------------------------------------------
// Coaction entry format
// ---------------------------------------------------------------------------

/// Raw coaction data `psi(m) = psi0(m)⊗1 + psi1(m)⊗x`, the validated
/// entry format for comodules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coaction {
    pub psi0: BitMatrix,
    pub psi1: BitMatrix,
}

impl Coaction {
    pub fn new(psi0: BitMatrix, psi1: BitMatrix) -> Result<Self, CoactionError> {
        if !psi0.is_square() || !psi1.is_square() || psi0.rows() != psi1.rows() {
            return Err(CoactionError::Malformed);
        }
        Ok(Self { psi0, psi1 })
    }

    pub fn dim(&self) -> usize {
        self.psi0.rows()
    }

    /// The coaction as a `2n x n` matrix `M → M⊗H`, Kronecker index
    /// `2*i + h` on the target.
    fn psi_matrix(&self) -> BitMatrix {
        let n = self.dim();
        BitMatrix::from_fn(2 * n, n, |r, c| {
            let (i, h) = (r / 2, r % 2);
            if h == 0 {
                self.psi0.get(i, c)
            } else {
                self.psi1.get(i, c)
            }
        })
    }
}

/// Checks the counit and coassociativity axioms for raw coaction data at
/// the tensor level and returns the reduced comodule on success.
///
/// Counit: `(id⊗ε)∘ψ = id` as maps `M → M`.
/// Coassociativity: `(ψ⊗id)∘ψ = (id⊗Δ)∘ψ` as maps `M → M⊗H⊗H`.
///
/// The checks run in that order, so a coassociativity failure is only
/// reported for counital data, where it is equivalent to `psi1^2 ≠ 0`.
pub fn validate_coaction(c: &Coaction) -> Result<Comodule, CoactionError> {
    let n = c.dim();
    let psi = c.psi_matrix();
    let id = BitMatrix::identity(n);

    let counit_side = BitMatrix::identity(n).kronecker(&counit_matrix()).compose(&psi);
    if let Some(j) = first_differing_column(&counit_side, &id) {
        return Err(CoactionError::CounitViolation { witness: basis_vector(n, j) });
    }

    let lhs = psi.kronecker(&BitMatrix::identity(2)).compose(&psi);
    let rhs = id.kronecker(&comultiplication_matrix()).compose(&psi);
    if let Some(j) = first_differing_column(&lhs, &rhs) {
        return Err(CoactionError::CoassociativityViolation { witness: basis_vector(n, j) });
    }

    Ok(Comodule::new(c.psi1.clone(), Role::TorsorSide).expect("axioms imply d^2 = 0"))
}

fn first_differing_column(a: &BitMatrix, b: &BitMatrix) -> Option<usize> {
    (0..a.cols()).find(|&j| a.column(j) != b.column(j))
}

fn basis_vector(n: usize, j: usize) -> BitMatrix {
    BitMatrix::from_fn(n, 1, |i, _| i == j)
}

// ---------------------------------------------------------------------------
// Objects
// ---------------------------------------------------------------------------

/// An object of one of the three sites, in reduced form: a dimension, a
/// structure endomorphism with `d^2 = 0`, and the site tag.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Comodule {
    n: usize,
    d: BitMatrix,
    role: Role,
}

impl Comodule {
    pub fn new(d: BitMatrix, role: Role) -> Result<Self, ComoduleError> {
        if !d.is_square() {
            return Err(ComoduleError::NotSquare { rows: d.rows(), cols: d.cols() });
        }
        let n = d.rows();
        let sq = d.compose(&d);
        if !sq.is_zero() {
            let j = (0..n).find(|&j| !sq.column(j).is_zero()).unwrap();
            return Err(ComoduleError::NotSquareZero { witness: basis_vector(n, j) });
        }
        if role == Role::PointSide && !d.is_zero() {
            return Err(ComoduleError::PointSideStructure);
        }
        Ok(Self { n, d, role })
    }

    pub fn zero(role: Role) -> Self {
        Self { n: 0, d: BitMatrix::zeros(0, 0), role }
    }

    /// The canonical object `T^a ⊕ F^b`: `a` one-dimensional summands with
    /// zero structure map, then `b` two-dimensional blocks on basis pairs
    /// `(socle, generator)` with `d(generator) = socle`.
    pub fn canonical(trivial: usize, free: usize, role: Role) -> Self {
        let n = trivial + 2 * free;
        let d = BitMatrix::from_fn(n, n, |i, j| {
            j >= trivial && (j - trivial) % 2 == 1 && i + 1 == j
        });
        debug_assert!(role != Role::PointSide || free == 0);
        Self { n, d, role }
    }

    /// The one-dimensional trivial object `T`.
    pub fn trivial_object(role: Role) -> Self {
        Self::canonical(1, 0, role)
    }

    /// The two-dimensional object `F` (`H` coacting on itself).
    pub fn free_object(role: Role) -> Self {
        Self::canonical(0, 1, role)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> &BitMatrix {
        &self.d
    }

    pub fn role(&self) -> Role {
        self.role
    }

    /// `d = 0`: the coaction has no terms involving `x`.
    pub fn is_x_trivial(&self) -> bool {
        self.d.is_zero()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        assert_eq!(self.role, other.role, "direct sum across sites");
        Self { n: self.n + other.n, d: self.d.direct_sum(&other.d), role: self.role }
    }

    /// Same underlying data viewed on another site. Panics if the target
    /// is the point side but `d` is nonzero.
    pub fn with_role(&self, role: Role) -> Self {
        assert!(role != Role::PointSide || self.d.is_zero());
        Self { n: self.n, d: self.d.clone(), role }
    }
}

impl fmt::Debug for Comodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nf = normal_form(self);
        write!(f, "Comodule({}, dim {}, T^{} F^{})", self.role, self.n, nf.trivial, nf.free)
    }
}

// ---------------------------------------------------------------------------
// Morphisms
// ---------------------------------------------------------------------------

/// A structure-preserving map: a matrix `A` with `A d_src = d_dst A`,
/// between objects of the same site.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    src: Comodule,
    dst: Comodule,
    map: BitMatrix,
}

impl Morphism {
    pub fn new(src: Comodule, dst: Comodule, map: BitMatrix) -> Result<Self, ComoduleError> {
        if src.role != dst.role {
            return Err(ComoduleError::RoleMismatch { left: src.role, right: dst.role });
        }
        if map.rows() != dst.n || map.cols() != src.n {
            return Err(ComoduleError::ShapeMismatch {
                exp_rows: dst.n,
                exp_cols: src.n,
                got_rows: map.rows(),
                got_cols: map.cols(),
            });
        }
        let lhs = map.compose(&src.d);
        let rhs = dst.d.compose(&map);
        if lhs != rhs {
            let j = first_differing_column(&lhs, &rhs).unwrap();
            return Err(ComoduleError::NotIntertwining { witness: basis_vector(src.n, j) });
        }
        Ok(Self { src, dst, map })
    }

    /// Constructor for maps already known to intertwine (hom-space
    /// enumeration, functor images). Checked in debug builds.
    pub(crate) fn new_unchecked(src: Comodule, dst: Comodule, map: BitMatrix) -> Self {
        debug_assert_eq!(map.compose(&src.d), dst.d.compose(&map));
        debug_assert_eq!(src.role, dst.role);
        Self { src, dst, map }
    }

    pub fn identity(obj: &Comodule) -> Self {
        Self::new_unchecked(obj.clone(), obj.clone(), BitMatrix::identity(obj.n))
    }

    pub fn zero_map(src: &Comodule, dst: &Comodule) -> Self {
        assert_eq!(src.role, dst.role);
        Self::new_unchecked(src.clone(), dst.clone(), BitMatrix::zeros(dst.n, src.n))
    }

    pub fn src(&self) -> &Comodule {
        &self.src
    }

    pub fn dst(&self) -> &Comodule {
        &self.dst
    }

    pub fn map(&self) -> &BitMatrix {
        &self.map
    }

    /// `self ∘ earlier`.
    ///
    /// # Panics
    /// Panics if `earlier.dst != self.src`.
    pub fn compose(&self, earlier: &Self) -> Self {
        assert_eq!(earlier.dst, self.src, "composition endpoint mismatch");
        Self::new_unchecked(earlier.src.clone(), self.dst.clone(), self.map.compose(&earlier.map))
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::new_unchecked(
            self.src.direct_sum(&other.src),
            self.dst.direct_sum(&other.dst),
            self.map.direct_sum(&other.map),
        )
    }

    pub fn is_iso(&self) -> bool {
        self.map.is_invertible()
    }

    /// # Panics
    /// Panics if the morphism is not invertible.
    pub fn inverse(&self) -> Self {
        Self::new_unchecked(self.dst.clone(), self.src.clone(), self.map.inverse())
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({:?} -> {:?}, {:?})", self.src, self.dst, self.map)
    }
}

// ---------------------------------------------------------------------------
// Normal forms and classification
// ---------------------------------------------------------------------------

/// Decomposition type `T^trivial ⊕ F^free`; `trivial + 2*free = dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalForm {
    pub trivial: usize,
    pub free: usize,
}

impl NormalForm {
    pub fn dim(&self) -> usize {
        self.trivial + 2 * self.free
    }
}

/// `free = rank(d)`, `trivial = n - 2 rank(d)`; the isomorphism to the
/// canonical representative is produced by [`canonical_iso`].
pub fn normal_form(m: &Comodule) -> NormalForm {
    let free = m.d.rank();
    NormalForm { trivial: m.n - 2 * free, free }
}

/// An explicit isomorphism `T^a ⊕ F^b → M` realizing the normal form.
///
/// Construction: pivot columns of `rref(d)` pick generators `w_i` whose
/// images `v_i = d(w_i)` form a basis of `im(d) ⊆ ker(d)`; the kernel
/// basis is then filtered (lowest index first) to complete `{v_i}` inside
/// `ker(d)`, yielding the trivial summands. Deterministic throughout.
pub fn canonical_iso(m: &Comodule) -> Morphism {
    let nf = normal_form(m);
    let (_, pivots) = m.d.rref();
    let gens = m.d_pivot_preimages(&pivots);
    let images: Vec<BitMatrix> = gens.iter().map(|w| m.d.compose(w)).collect();

    let kernel = m.d.kernel_basis();
    let mut chosen_trivials: Vec<BitMatrix> = Vec::new();
    let mut span = columns_matrix(m.n, &images);
    for j in 0..kernel.cols() {
        let cand = kernel.column(j);
        let grown = span.hstack(&cand);
        if grown.rank() > span.rank() {
            chosen_trivials.push(cand);
            span = grown;
        }
    }
    debug_assert_eq!(chosen_trivials.len(), nf.trivial);

    let mut cols = chosen_trivials;
    for (v, w) in images.iter().zip(&gens) {
        cols.push(v.clone());
        cols.push(w.clone());
    }
    let c = columns_matrix(m.n, &cols);
    let canon = Comodule::canonical(nf.trivial, nf.free, m.role);
    Morphism::new(canon, m.clone(), c).expect("canonical basis intertwines")
}

impl Comodule {
    fn d_pivot_preimages(&self, pivots: &[usize]) -> Vec<BitMatrix> {
        pivots.iter().map(|&j| basis_vector(self.n, j)).collect()
    }
}

fn columns_matrix(rows: usize, cols: &[BitMatrix]) -> BitMatrix {
    BitMatrix::from_fn(rows, cols.len(), |i, j| cols[j].get(i, 0))
}

/// Isomorphism test via normal forms. Both objects must live on the same
/// site; the cross-check by explicit intertwiner search lives in the
/// tests of this module.
pub fn iso_test(m: &Comodule, n: &Comodule) -> bool {
    assert_eq!(m.role, n.role, "iso test across sites");
    normal_form(m) == normal_form(n)
}

// ---------------------------------------------------------------------------
// Hom spaces
// ---------------------------------------------------------------------------

/// Dimension of the solution space of the intertwining system, without
/// materializing the morphisms.
pub fn hom_space_dim(m: &Comodule, n: &Comodule) -> usize {
    assert_eq!(m.role, n.role, "hom across sites");
    intertwining_system(m, n).kernel_basis().cols()
}

/// The complete list of morphisms `M → N`, enumerated deterministically:
/// all GF(2) combinations of the canonical kernel basis of the
/// intertwining system, in binary counting order (so the zero map is
/// always first).
pub fn hom_space(m: &Comodule, n: &Comodule) -> Result<Vec<Morphism>, ComoduleError> {
    Ok(hom_space_iter(m, n)?.collect())
}

/// Streaming variant of [`hom_space`], same order, nothing retained.
pub fn hom_space_iter(
    m: &Comodule,
    n: &Comodule,
) -> Result<impl Iterator<Item = Morphism>, ComoduleError> {
    if m.role != n.role {
        return Err(ComoduleError::RoleMismatch { left: m.role, right: n.role });
    }
    let basis = intertwining_system(m, n).kernel_basis();
    let k = basis.cols();
    assert!(k < 63, "hom space too large to enumerate");
    let (src, dst) = (m.clone(), n.clone());
    let (rows, cols) = (n.n, m.n);
    Ok((0..(1u64 << k)).map(move |mask| {
        let mut vec_a = BitMatrix::zeros(basis.rows(), 1);
        for bit in 0..k {
            if (mask >> bit) & 1 == 1 {
                vec_a = vec_a.add(&basis.column(bit));
            }
        }
        let a = unvectorize(&vec_a, rows, cols);
        Morphism::new_unchecked(src.clone(), dst.clone(), a)
    }))
}

/// Constraint matrix of `A d_M + d_N A = 0` over `vec(A)` (row-major).
fn intertwining_system(m: &Comodule, n: &Comodule) -> BitMatrix {
    let (rows, cols) = (n.n, m.n);
    let vars = rows * cols;
    BitMatrix::from_fn(vars, vars, |eq, var| {
        let (i, j) = (eq / cols, eq % cols);
        let (r, c) = (var / cols, var % cols);
        let left = if r == i { m.d.get(c, j) } else { false };
        let right = if c == j { n.d.get(i, r) } else { false };
        left ^ right
    })
}

fn unvectorize(v: &BitMatrix, rows: usize, cols: usize) -> BitMatrix {
    BitMatrix::from_fn(rows, cols, |i, j| v.get(i * cols + j, 0))
}

// ---------------------------------------------------------------------------
// The coreflector onto x-trivial subobjects
// ---------------------------------------------------------------------------

/// The maximal x-trivial subobject, `ker(d)`, with its inclusion. Every
/// morphism from an x-trivial object factors uniquely through it.
pub fn triv(m: &Comodule) -> (Comodule, Morphism) {
    let kernel = m.d.kernel_basis();
    let sub = Comodule {
        n: kernel.cols(),
        d: BitMatrix::zeros(kernel.cols(), kernel.cols()),
        role: m.role,
    };
    let incl = Morphism::new_unchecked(sub.clone(), m.clone(), kernel);
    (sub, incl)
}

/// Action of the coreflector on a morphism: the restriction
/// `triv(src) → triv(dst)` in kernel-basis coordinates.
pub fn triv_map(g: &Morphism) -> Morphism {
    let (s_sub, s_incl) = triv(&g.src);
    let (d_sub, d_incl) = triv(&g.dst);
    let restricted = g.map.compose(s_incl.map());
    let coords = d_incl
        .map()
        .solve(&restricted)
        .expect("morphisms map kernels into kernels");
    Morphism::new_unchecked(s_sub, d_sub, coords)
}

// ---------------------------------------------------------------------------
// Pushouts
// ---------------------------------------------------------------------------

/// A pushout `P = (M ⊕ B) / {(f(v), g(v))}` with its two structure maps.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub obj: Comodule,
    /// `M → P`.
    pub left_leg: Morphism,
    /// `B → P`.
    pub right_leg: Morphism,
    projection: BitMatrix,
    section: BitMatrix,
}

/// Pushout of `f: A → M` along `g: A → B` (characteristic 2 makes the
/// usual sign convention irrelevant). The quotient basis is the set of
/// standard basis vectors of `M ⊕ B` away from the pivot positions of the
/// glued subspace, so the construction is deterministic.
pub fn pushout(f: &Morphism, g: &Morphism) -> Result<Pushout, ComoduleError> {
    if f.src.role != g.src.role {
        return Err(ComoduleError::RoleMismatch { left: f.src.role, right: g.src.role });
    }
    if f.src != g.src {
        return Err(ComoduleError::SourceMismatch);
    }
    let role = f.src.role;
    let (m_dim, b_dim) = (f.dst.n, g.dst.n);
    let ambient = m_dim + b_dim;

    // Columns (f(v); g(v)) span the glued subspace W.
    let w = f.map.vstack(&g.map);
    let (w_rref_t, pivots) = w.transpose().rref();
    let w_basis = BitMatrix::from_fn(ambient, pivots.len(), |i, j| w_rref_t.get(j, i));

    let complement: Vec<usize> = (0..ambient).filter(|i| !pivots.contains(i)).collect();
    let section = BitMatrix::from_fn(ambient, complement.len(), |i, j| complement[j] == i);

    // [W-basis | complement] is a basis of the ambient space; the
    // projection reads off the complement coordinates.
    let full = w_basis.hstack(&section);
    let inv = full.inverse();
    let projection =
        BitMatrix::from_fn(complement.len(), ambient, |i, j| inv.get(w_basis.cols() + i, j));

    let big_d = f.dst.d.direct_sum(&g.dst.d);
    // W is invariant under d_M ⊕ d_B, so the quotient structure map is
    // induced; checked here rather than assumed.
    debug_assert!(w_basis.column_space_contains(&big_d.compose(&w_basis)));
    let d_p = projection.compose(&big_d).compose(&section);
    let obj = Comodule::new(d_p, role).expect("quotient of a square-zero map squares to zero");

    let incl_m = BitMatrix::from_fn(ambient, m_dim, |i, j| i == j);
    let incl_b = BitMatrix::from_fn(ambient, b_dim, |i, j| i == m_dim + j);
    let left_leg = Morphism::new_unchecked(f.dst.clone(), obj.clone(), projection.compose(&incl_m));
    let right_leg =
        Morphism::new_unchecked(g.dst.clone(), obj.clone(), projection.compose(&incl_b));
    Ok(Pushout { obj, left_leg, right_leg, projection, section })
}

impl Pushout {
    /// The unique mediating morphism to a commuting cocone `(p, q)`, if
    /// the cocone exists; `None` when the square `p∘f = q∘g` fails or the
    /// cocone does not factor (which cannot happen for genuine cocones).
    pub fn mediator(&self, p: &Morphism, q: &Morphism) -> Option<Morphism> {
        if p.dst != q.dst {
            return None;
        }
        let glued = p.map.hstack(q.map());
        let candidate = glued.compose(&self.section);
        if candidate.compose(&self.projection) != glued {
            return None;
        }
        Some(Morphism::new_unchecked(self.obj.clone(), p.dst.clone(), candidate))
    }
}

// ---------------------------------------------------------------------------
// Site functors on objects and morphisms
// ---------------------------------------------------------------------------

/// `V ↦ V ⊗ H` with the extended coaction, in the ordered basis
/// `(V⊗1, V⊗x)`: `d(v⊗x) = v⊗1`, `d(v⊗1) = 0`.
pub fn extended_comodule(v: &Comodule) -> Result<Comodule, ComoduleError> {
    expect_role(v, Role::PointSide)?;
    let n = v.n;
    let d = BitMatrix::from_fn(2 * n, 2 * n, |i, j| i < n && j == n + i);
    Ok(Comodule { n: 2 * n, d, role: Role::TorsorSide })
}

/// On morphisms the extension is `g ⊗ id_H`, block diagonal in the
/// `(V⊗1, V⊗x)` basis.
pub fn extended_map(g: &Morphism) -> Result<Morphism, ComoduleError> {
    let src = extended_comodule(&g.src)?;
    let dst = extended_comodule(&g.dst)?;
    Ok(Morphism::new_unchecked(src, dst, g.map.direct_sum(&g.map)))
}

/// Forget the coaction: same dimension, zero structure map, point side.
pub fn forget(m: &Comodule) -> Result<Comodule, ComoduleError> {
    expect_role(m, Role::TorsorSide)?;
    Ok(Comodule { n: m.n, d: BitMatrix::zeros(m.n, m.n), role: Role::PointSide })
}

pub fn forget_map(g: &Morphism) -> Result<Morphism, ComoduleError> {
    Ok(Morphism::new_unchecked(forget(&g.src)?, forget(&g.dst)?, g.map.clone()))
}

/// Restriction of scalars along the unit `k → k[x]/x^2`: the underlying
/// `k`-vector space of a module.
pub fn underlying_k(m: &Comodule) -> Result<Comodule, ComoduleError> {
    expect_role(m, Role::OverlapSide)?;
    Ok(Comodule { n: m.n, d: BitMatrix::zeros(m.n, m.n), role: Role::PointSide })
}

pub fn underlying_k_map(g: &Morphism) -> Result<Morphism, ComoduleError> {
    Ok(Morphism::new_unchecked(underlying_k(&g.src)?, underlying_k(&g.dst)?, g.map.clone()))
}

/// Extension of scalars `V ↦ V ⊗_k k[x]/x^2` as a module: in the ordered
/// basis `(V⊗1, V⊗x)` the action of `x` sends `v⊗1 ↦ v⊗x`, `v⊗x ↦ 0`.
pub fn free_module(v: &Comodule) -> Result<Comodule, ComoduleError> {
    expect_role(v, Role::PointSide)?;
    let n = v.n;
    let d = BitMatrix::from_fn(2 * n, 2 * n, |i, j| j < n && i == n + j);
    Ok(Comodule { n: 2 * n, d, role: Role::OverlapSide })
}

pub fn free_module_map(g: &Morphism) -> Result<Morphism, ComoduleError> {
    let src = free_module(&g.src)?;
    let dst = free_module(&g.dst)?;
    Ok(Morphism::new_unchecked(src, dst, g.map.direct_sum(&g.map)))
}

fn expect_role(m: &Comodule, role: Role) -> Result<(), ComoduleError> {
    if m.role != role {
        return Err(ComoduleError::RoleMismatch { left: m.role, right: role });
    }
    Ok(())
}
