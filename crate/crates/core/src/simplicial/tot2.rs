//! The 2-truncated totalization of a truncated cosimplicial category.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use crate::cat::{FinCat, Functor, Mor, Obj};
use crate::error::Result;
use crate::limits::Limits;

/// Access to the parts of a truncated cosimplicial category that Tot² reads.
///
/// `X` and `H` are objects and morphisms of level 0, `A` are isomorphisms of
/// level 1. Candidate enumerations may prune, but the Tot² laws are rechecked by
/// [`tot2`] through the predicate methods.
pub trait TruncCosimplicial {
    type X: Clone + Eq + Hash + Debug + Send + Sync;
    type A: Clone + Eq + Hash + Debug + Send + Sync;
    type H: Clone + Eq + Hash + Debug + Send + Sync;

    fn objects0(&self, limits: &Limits) -> Result<Vec<Self::X>>;
    /// Isomorphisms `α: d⁰x → d¹x` of level 1.
    fn alpha_candidates(&self, x: &Self::X, limits: &Limits) -> Result<Vec<Self::A>>;
    /// Morphisms `x → y` of level 0, as candidates for `(x, α) → (y, β)`.
    fn hom_candidates(
        &self,
        x: &Self::X,
        alpha: &Self::A,
        y: &Self::X,
        beta: &Self::A,
        limits: &Limits,
    ) -> Result<Vec<Self::H>>;
    /// `s⁰α = id_x`.
    fn unit_law(&self, x: &Self::X, alpha: &Self::A) -> bool;
    /// `d²α ∘ d⁰α = d¹α`.
    fn cocycle_law(&self, x: &Self::X, alpha: &Self::A) -> bool;
    /// `β ∘ d⁰h = d¹h ∘ α` for `h: (x, α) → (y, β)`.
    fn square_commutes(&self, h: &Self::H, alpha: &Self::A, beta: &Self::A) -> bool;
    fn compose0(&self, g: &Self::H, f: &Self::H) -> Self::H;
    fn identity0(&self, x: &Self::X) -> Self::H;
    fn object_label(&self, x: &Self::X, alpha: &Self::A) -> String;
    fn morphism_label(&self, h: &Self::H) -> String;
}

/// Tot² of a truncated cosimplicial category: objects `(x, α)` with
/// `α: d⁰x → d¹x` an isomorphism satisfying `s⁰α = id_x` and
/// `d²α ∘ d⁰α = d¹α`; morphisms `h: x → y` with `β ∘ d⁰h = d¹h ∘ α`.
#[derive(Debug, Clone)]
pub struct Tot2<X, A, H> {
    pub cat: Arc<FinCat>,
    pub objects: Vec<(X, A)>,
    pub morphisms: Vec<H>,
    object_index: HashMap<(X, A), Obj>,
    morphism_index: Arc<HashMap<(Obj, Obj, H), Mor>>,
}

impl<X: Clone + Eq + Hash, A: Clone + Eq + Hash, H: Clone + Eq + Hash> Tot2<X, A, H> {
    pub fn object_index(&self, x: &X, alpha: &A) -> Option<Obj> {
        self.object_index.get(&(x.clone(), alpha.clone())).copied()
    }

    pub fn morphism_index(&self, src: Obj, tgt: Obj, h: &H) -> Option<Mor> {
        self.morphism_index.get(&(src, tgt, h.clone())).copied()
    }
}

pub fn tot2<T>(t: &Arc<T>, limits: &Limits) -> Result<Tot2<T::X, T::A, T::H>>
where
    T: TruncCosimplicial + Send + Sync + 'static,
{
    let mut objects = Vec::new();
    for x in t.objects0(limits)? {
        for alpha in t.alpha_candidates(&x, limits)? {
            if t.unit_law(&x, &alpha) && t.cocycle_law(&x, &alpha) {
                objects.push((x.clone(), alpha));
            }
        }
    }
    let object_index: HashMap<(T::X, T::A), Obj> = objects
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, o)| (o, i))
        .collect();
    let mut morphisms = Vec::new();
    let mut ends = Vec::new();
    let mut identity = vec![0; objects.len()];
    let mut index = HashMap::new();
    let mut budget = limits.budget();
    for (i, (x, alpha)) in objects.iter().enumerate() {
        for (j, (y, beta)) in objects.iter().enumerate() {
            for h in t.hom_candidates(x, alpha, y, beta, limits)? {
                budget.spend(1)?;
                if !t.square_commutes(&h, alpha, beta) {
                    continue;
                }
                if i == j && h == t.identity0(x) {
                    identity[i] = morphisms.len();
                }
                index.insert((i, j, h.clone()), morphisms.len());
                ends.push((i, j));
                morphisms.push(h);
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    let obj_names = objects
        .iter()
        .enumerate()
        .map(|(i, (x, a))| {
            let label = t.object_label(x, a);
            if seen.insert(label.clone()) {
                label
            } else {
                format!("{label}#{i}")
            }
        })
        .collect();
    let mor_names = morphisms
        .iter()
        .zip(&ends)
        .map(|(h, &(i, j))| (format!("{}:{}->{}", t.morphism_label(h), i, j), i, j))
        .collect();
    let index = Arc::new(index);
    let shared = (
        t.clone(),
        Arc::new(morphisms.clone()),
        Arc::new(ends),
        index.clone(),
    );
    let rule = move |g: Mor, f: Mor| {
        let (t, morphisms, ends, index) = &shared;
        let h = t.compose0(&morphisms[g], &morphisms[f]);
        index[&(ends[f].0, ends[g].1, h)]
    };
    let cat = FinCat::from_rule(obj_names, mor_names, identity, Arc::new(rule))?;
    Ok(Tot2 {
        cat: Arc::new(cat),
        objects,
        morphisms,
        object_index,
        morphism_index: index,
    })
}

/// A levelwise map between truncated cosimplicial categories, commuting with
/// the structure maps, as read by Tot².
pub trait TruncCosimplicialMap<S: TruncCosimplicial, T: TruncCosimplicial> {
    fn on_x(&self, x: &S::X) -> T::X;
    fn on_a(&self, a: &S::A) -> T::A;
    fn on_h(&self, h: &S::H) -> T::H;
}

/// The functor induced on Tot²: `(x, α) ↦ (φ⁰x, φ¹α)`, `h ↦ φ⁰h`.
pub fn tot2_functor<S, T, P>(
    phi: &P,
    source: &Tot2<S::X, S::A, S::H>,
    target: &Tot2<T::X, T::A, T::H>,
) -> Result<Functor>
where
    S: TruncCosimplicial,
    T: TruncCosimplicial,
    P: TruncCosimplicialMap<S, T>,
{
    let obj: Vec<Obj> = source
        .objects
        .iter()
        .map(|(x, a)| {
            target
                .object_index(&phi.on_x(x), &phi.on_a(a))
                .ok_or_else(|| {
                    crate::Error::Invariant("levelwise map does not preserve Tot² objects".into())
                })
        })
        .collect::<Result<_>>()?;
    let mor: Vec<Mor> = source
        .cat
        .morphisms()
        .map(|m| {
            let (s, d) = (source.cat.src(m), source.cat.tgt(m));
            target
                .morphism_index(obj[s], obj[d], &phi.on_h(&source.morphisms[m]))
                .ok_or_else(|| {
                    crate::Error::Invariant("levelwise map does not preserve Tot² morphisms".into())
                })
        })
        .collect::<Result<_>>()?;
    Functor::new(source.cat.clone(), target.cat.clone(), obj, mor)
}
