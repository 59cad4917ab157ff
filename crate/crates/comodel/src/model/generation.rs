//! Bounded search for explicit pushout-generation recipes.
//!
//! A recipe is a composite of pushouts of maps between x-trivial objects.
//! Each single pushout of such a map `u: S → S'` along `phi: S → P` is,
//! up to compatible isomorphisms, the map
//! `P → P/phi(ker u) ⊕ T^{corank u}`: it glues an x-trivial subspace of
//! `ker(d_P)` to zero and adjoins trivial summands (the lemma is checked
//! in this module's tests against the raw pushout construction). The
//! search therefore walks steps parameterized by (killed subspace, number
//! of adjoined summands), records every reachable composite up to arrow
//! isomorphism, and closes the reachable set under retracts once at the
//! end.
//!
//! Witnesses are replayable: each recorded step is re-executed through
//! the real pushout operation, not the normalized shortcut.

use super::shared_catalog;
use crate::comodule::{
    canonical_iso, normal_form, pushout, retract_morphisms_with, ArrowClasses, Catalog, Comodule,
    Morphism, NormalForm, Role,
};
use crate::gf2::{subspace_bases, BitMatrix};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// One pushout step: glue an x-trivial subspace to zero and adjoin
/// trivial summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecipeStep {
    /// Columns span the subspace of `ker(d)` glued away, in the
    /// coordinates of the object the step applies to.
    pub killed: BitMatrix,
    /// Number of one-dimensional trivial summands adjoined.
    pub added: usize,
}

/// A replayable generation certificate: starting object, pushout steps,
/// and whether the match goes through the final retract closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationWitness {
    pub source: NormalForm,
    pub steps: Vec<RecipeStep>,
    pub via_retract: bool,
}

/// Replays a recipe through the pushout construction: each step is the
/// pushout of the zero map `S → T^added` (a map between x-trivial
/// objects) along the inclusion of the killed subspace, re-canonicalizing
/// the target after every step.
pub fn replay_recipe(start: &Comodule, steps: &[RecipeStep]) -> Morphism {
    let mut r = Morphism::identity(start);
    for step in steps {
        r = apply_step(&r, &step.killed, step.added);
    }
    r
}

fn apply_step(r: &Morphism, killed: &BitMatrix, added: usize) -> Morphism {
    let cur = r.dst();
    let role = cur.role();
    let s_obj = Comodule::canonical(killed.cols(), 0, role);
    let phi = Morphism::new(s_obj.clone(), cur.clone(), killed.clone())
        .expect("killed subspace lies in ker(d)");
    let summands = Comodule::canonical(added, 0, role);
    let u = Morphism::zero_map(&s_obj, &summands);
    let po = pushout(&phi, &u).expect("legs share their source");
    let gamma = canonical_iso(&po.obj);
    gamma.inverse().compose(&po.left_leg.compose(r))
}

struct GenPool {
    cat: Arc<Catalog>,
    composites: ArrowClasses,
    recipes: Vec<GenerationWitness>,
    retracts: ArrowClasses,
    retract_recipes: Vec<GenerationWitness>,
}

fn build_pool(steps: usize, dim: usize) -> GenPool {
    let cat = shared_catalog(Role::TorsorSide, dim);
    let mut composites = ArrowClasses::new();
    let mut recipes: Vec<GenerationWitness> = Vec::new();
    let mut frontier: Vec<(Morphism, Vec<RecipeStep>)> = Vec::new();

    for obj in cat.objects() {
        let id = Morphism::identity(obj);
        let (_, fresh) = composites.insert(&cat, &id);
        if fresh {
            recipes.push(GenerationWitness {
                source: normal_form(obj),
                steps: Vec::new(),
                via_retract: false,
            });
            frontier.push((id, Vec::new()));
        }
    }

    for _ in 0..steps {
        let mut next = Vec::new();
        for (mor, recipe) in &frontier {
            let cur = mor.dst();
            let kernel = cur.d().kernel_basis();
            for sub in subspace_bases(kernel.cols()) {
                let killed = kernel.compose(&sub.transpose());
                let removed = killed.cols();
                let max_add = (dim + removed).saturating_sub(cur.dim());
                for added in 0..=max_add {
                    if removed == 0 && added == 0 {
                        continue;
                    }
                    let stepped = apply_step(mor, &killed, added);
                    debug_assert!(stepped.dst().dim() <= dim);
                    let (_, fresh) = composites.insert(&cat, &stepped);
                    if fresh {
                        let mut rec = recipe.clone();
                        rec.push(RecipeStep { killed: killed.clone(), added });
                        recipes.push(GenerationWitness {
                            source: normal_form(mor.src()),
                            steps: rec.clone(),
                            via_retract: false,
                        });
                        next.push((stepped, rec));
                    }
                }
            }
        }
        frontier = next;
    }

    // Retract closure, applied once: split every idempotent pair on every
    // reachable composite.
    let idems: Vec<Vec<BitMatrix>> = (0..cat.object_count())
        .map(|i| {
            cat.hom(i, i)
                .iter()
                .map(|g| g.map().clone())
                .filter(|e| &e.compose(e) == e)
                .collect()
        })
        .collect();
    let mut retracts = ArrowClasses::new();
    let mut retract_recipes = Vec::new();
    for (ci, rep) in composites.reps.iter().enumerate() {
        let si = cat.index_of(rep.src()).expect("canonical source");
        let di = cat.index_of(rep.dst()).expect("canonical target");
        for r in retract_morphisms_with(rep, &idems[si], &idems[di]) {
            let (_, fresh) = retracts.insert(&cat, &r);
            if fresh {
                let mut w = recipes[ci].clone();
                w.via_retract = true;
                retract_recipes.push(w);
            }
        }
    }

    GenPool { cat, composites, recipes, retracts, retract_recipes }
}

fn pool(steps: usize, dim: usize) -> Arc<GenPool> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<GenPool>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry((steps, dim)).or_insert_with(|| Arc::new(build_pool(steps, dim))).clone()
}

/// Search verdict: a witness if `g` matches a reachable composite (or a
/// retract of one) up to compatible isomorphisms, `None` otherwise.
pub fn generation_verdict(g: &Morphism, steps: usize, dim: usize) -> Option<GenerationWitness> {
    if g.src().dim() > dim || g.dst().dim() > dim {
        return None;
    }
    let c_src = canonical_iso(g.src());
    let c_dst = canonical_iso(g.dst());
    let canon = c_dst.inverse().compose(&g.compose(&c_src));
    let pool = pool(steps, dim);
    if let Some(id) = pool.composites.find(&pool.cat, &canon) {
        return Some(pool.recipes[id].clone());
    }
    if let Some(id) = pool.retracts.find(&pool.cat, &canon) {
        return Some(pool.retract_recipes[id].clone());
    }
    None
}
