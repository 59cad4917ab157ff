//! Exhaustive catalogs: every object up to isomorphism below a dimension
//! bound, with complete (lazily materialized) hom lists.
//!
//! Objects are the canonical representatives `T^a ⊕ F^b`, ordered by
//! total dimension and then by the number of two-dimensional blocks, so
//! every enumeration downstream is deterministic. Hom lists can be huge
//! (`2^(n*m)` between trivial objects), so they are materialized per
//! ordered pair on first use; counts are available without
//! materialization.

use super::{hom_space, hom_space_dim, normal_form, Comodule, ComoduleError, Morphism, Role};
use crate::gf2::BitMatrix;
use std::sync::OnceLock;

/// Above this bound hom-space enumeration (growing as `2^(n*m)`) leaves
/// desk scale; overridable via [`Catalog::with_cap`].
pub const DEFAULT_HARD_CAP: usize = 6;

pub struct Catalog {
    bound: usize,
    role: Role,
    objects: Vec<Comodule>,
    hom_dims: Vec<usize>,
    homs: Vec<OnceLock<Vec<Morphism>>>,
    auts: Vec<OnceLock<Vec<BitMatrix>>>,
}

impl Catalog {
    pub fn new(bound: usize, role: Role) -> Result<Self, ComoduleError> {
        Self::with_cap(bound, role, DEFAULT_HARD_CAP)
    }

    pub fn with_cap(bound: usize, role: Role, cap: usize) -> Result<Self, ComoduleError> {
        if bound > cap {
            return Err(ComoduleError::CatalogBound { requested: bound, cap });
        }
        let mut objects = Vec::new();
        for n in 0..=bound {
            let max_free = if role == Role::PointSide { 0 } else { n / 2 };
            for free in 0..=max_free {
                objects.push(Comodule::canonical(n - 2 * free, free, role));
            }
        }
        let count = objects.len();
        let mut hom_dims = Vec::with_capacity(count * count);
        for src in &objects {
            for dst in &objects {
                hom_dims.push(hom_space_dim(src, dst));
            }
        }
        let homs = (0..count * count).map(|_| OnceLock::new()).collect();
        let auts = (0..count).map(|_| OnceLock::new()).collect();
        Ok(Self { bound, role, objects, hom_dims, homs, auts })
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn objects(&self) -> &[Comodule] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    /// Index of the canonical object isomorphic to `m`.
    pub fn index_of(&self, m: &Comodule) -> Option<usize> {
        if m.role() != self.role {
            return None;
        }
        let nf = normal_form(m);
        self.objects.iter().position(|o| normal_form(o) == nf)
    }

    /// Dimension of the hom space between objects `i` and `j`.
    pub fn hom_dim(&self, i: usize, j: usize) -> usize {
        self.hom_dims[i * self.objects.len() + j]
    }

    /// The complete, deterministically ordered list of morphisms from
    /// object `i` to object `j`; computed once and cached.
    pub fn hom(&self, i: usize, j: usize) -> &[Morphism] {
        self.homs[i * self.objects.len() + j]
            .get_or_init(|| hom_space(&self.objects[i], &self.objects[j]).expect("same role"))
    }

    /// Total number of morphisms, computable without materialization.
    pub fn morphism_count(&self) -> u128 {
        self.hom_dims.iter().map(|&d| 1u128 << d).sum()
    }

    /// Invertible endomorphism matrices of object `i`.
    pub fn automorphisms(&self, i: usize) -> &[BitMatrix] {
        self.auts[i].get_or_init(|| {
            self.hom(i, i)
                .iter()
                .filter(|g| g.is_iso())
                .map(|g| g.map().clone())
                .collect()
        })
    }

    /// All morphisms in global enumeration order: ascending source index,
    /// then ascending target index, then hom order.
    pub fn all_morphisms(&self) -> impl Iterator<Item = (usize, usize, &Morphism)> {
        let count = self.objects.len();
        (0..count).flat_map(move |i| {
            (0..count).flat_map(move |j| self.hom(i, j).iter().map(move |g| (i, j, g)))
        })
    }

    /// Streaming enumeration of one hom list, without caching. Same order
    /// as [`Catalog::hom`].
    pub fn stream_hom(&self, i: usize, j: usize) -> impl Iterator<Item = Morphism> {
        super::hom_space_iter(&self.objects[i], &self.objects[j]).expect("same role")
    }

    /// Streaming enumeration of every morphism in global order, without
    /// caching. Same order as [`Catalog::all_morphisms`].
    pub fn stream_all(&self) -> impl Iterator<Item = (usize, usize, Morphism)> + '_ {
        let count = self.objects.len();
        (0..count).flat_map(move |i| {
            (0..count).flat_map(move |j| self.stream_hom(i, j).map(move |g| (i, j, g)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn object_counts() {
        let cat = Catalog::new(4, Role::TorsorSide).unwrap();
        assert_eq!(cat.object_count(), 9);
        assert_eq!(Catalog::new(0, Role::TorsorSide).unwrap().object_count(), 1);
        assert_eq!(Catalog::new(2, Role::TorsorSide).unwrap().object_count(), 4);
        // Sum over n <= D of (floor(n/2) + 1).
        let expected: usize = (0..=4).map(|n| n / 2 + 1).sum();
        assert_eq!(cat.object_count(), expected);
    }

    #[test]
    fn point_side_objects_are_plain_spaces() {
        let cat = Catalog::new(3, Role::PointSide).unwrap();
        assert_eq!(cat.object_count(), 4);
        assert!(cat.objects().iter().all(Comodule::is_x_trivial));
    }

    #[test]
    fn bound_above_cap_is_a_resource_error() {
        assert!(matches!(
            Catalog::new(7, Role::TorsorSide),
            Err(ComoduleError::CatalogBound { requested: 7, cap: 6 })
        ));
        assert!(Catalog::with_cap(7, Role::PointSide, 8).is_ok());
    }

    #[test]
    fn hom_lists_match_dimension_counts() {
        let cat = Catalog::new(3, Role::TorsorSide).unwrap();
        for i in 0..cat.object_count() {
            for j in 0..cat.object_count() {
                assert_eq!(cat.hom(i, j).len(), 1 << cat.hom_dim(i, j));
            }
        }
    }

    #[test]
    fn catalog3_morphism_total() {
        let cat = Catalog::new(3, Role::TorsorSide).unwrap();
        assert_eq!(cat.morphism_count(), 941);
    }

    #[test]
    fn automorphism_counts() {
        let cat = Catalog::new(3, Role::TorsorSide).unwrap();
        let t3 = cat.index_of(&Comodule::canonical(3, 0, Role::TorsorSide)).unwrap();
        assert_eq!(cat.automorphisms(t3).len(), 168); // |GL(3,2)|
        let f = cat.index_of(&Comodule::free_object(Role::TorsorSide)).unwrap();
        assert_eq!(cat.automorphisms(f).len(), 2);
    }
}
