//! Model-structure predicates on functors between finite groupoids, natural
//! isomorphisms and the iso-comma homotopy pullback.

use std::collections::HashMap;
use std::sync::Arc;

use super::fincat::{FinCat, Mor, Obj};
use super::functor::{same_cat, Functor};
use crate::error::{Error, Result};
use crate::limits::Limits;

/// Per codomain object, a domain object and an isomorphism `F(a) → b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub preimages: Vec<(Obj, Mor)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotEquivalence {
    /// `g: F(a) → F(a')` has no preimage.
    NotFull { a: Obj, a2: Obj, g: Mor },
    /// Distinct morphisms `a → a'` with the same image.
    NotFaithful { m1: Mor, m2: Mor },
    /// No domain object maps to something isomorphic to `b`.
    NotEssentiallySurjective { b: Obj },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivalenceVerdict {
    Yes(EquivalenceWitness),
    No(NotEquivalence),
}

impl EquivalenceVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, EquivalenceVerdict::Yes(_))
    }
}

impl NotEquivalence {
    pub fn describe(&self, f: &Functor) -> String {
        let (d, c) = (f.dom(), f.cod());
        match *self {
            NotEquivalence::NotFull { a, a2, g } => format!(
                "not full: `{}` between images of `{}` and `{}` has no preimage",
                c.morphism_name(g),
                d.object_name(a),
                d.object_name(a2)
            ),
            NotEquivalence::NotFaithful { m1, m2 } => format!(
                "not faithful: `{}` and `{}` have the same image",
                d.morphism_name(m1),
                d.morphism_name(m2)
            ),
            NotEquivalence::NotEssentiallySurjective { b } => format!(
                "not essentially surjective: `{}` is not isomorphic to any image",
                c.object_name(b)
            ),
        }
    }
}

/// Full, faithful and essentially surjective, each checked exhaustively.
pub fn is_equivalence(f: &Functor, limits: &Limits) -> Result<EquivalenceVerdict> {
    let (d, c) = (f.dom(), f.cod());
    let mut pairs: u128 = 0;
    for a in d.objects() {
        for a2 in d.objects() {
            pairs += (d.hom(a, a2).len() + c.hom(f.obj(a), f.obj(a2)).len()) as u128;
        }
    }
    limits.admit(pairs + (c.num_objects() * d.num_objects()) as u128)?;
    for a in d.objects() {
        for a2 in d.objects() {
            let mut image: HashMap<Mor, Mor> = HashMap::new();
            for &m in d.hom(a, a2) {
                if let Some(&prev) = image.get(&f.mor(m)) {
                    return Ok(EquivalenceVerdict::No(NotEquivalence::NotFaithful {
                        m1: prev,
                        m2: m,
                    }));
                }
                image.insert(f.mor(m), m);
            }
            for &g in c.hom(f.obj(a), f.obj(a2)) {
                if !image.contains_key(&g) {
                    return Ok(EquivalenceVerdict::No(NotEquivalence::NotFull { a, a2, g }));
                }
            }
        }
    }
    let mut preimages = Vec::with_capacity(c.num_objects());
    for b in c.objects() {
        let found = d.objects().find_map(|a| {
            c.hom(f.obj(a), b)
                .iter()
                .find(|&&m| c.is_iso(m))
                .map(|&m| (a, m))
        });
        match found {
            Some(w) => preimages.push(w),
            None => {
                return Ok(EquivalenceVerdict::No(
                    NotEquivalence::NotEssentiallySurjective { b },
                ))
            }
        }
    }
    Ok(EquivalenceVerdict::Yes(EquivalenceWitness { preimages }))
}

/// A natural isomorphism between parallel functors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatIso {
    pub source: Functor,
    pub target: Functor,
    pub components: Vec<Mor>,
}

impl NatIso {
    pub fn new(source: Functor, target: Functor, components: Vec<Mor>) -> Result<NatIso> {
        let n = NatIso {
            source,
            target,
            components,
        };
        n.validate()?;
        Ok(n)
    }

    pub fn validate(&self) -> Result<()> {
        let (f, g) = (&self.source, &self.target);
        if !same_cat(f.dom(), g.dom()) || !same_cat(f.cod(), g.cod()) {
            return Err(Error::InvalidNatural("functors are not parallel".into()));
        }
        let (d, c) = (f.dom(), f.cod());
        if self.components.len() != d.num_objects() {
            return Err(Error::InvalidNatural("wrong number of components".into()));
        }
        for a in d.objects() {
            let eta = self.components[a];
            if c.src(eta) != f.obj(a) || c.tgt(eta) != g.obj(a) || !c.is_iso(eta) {
                return Err(Error::InvalidNatural(format!(
                    "component at `{}` is not an isomorphism F(a) → G(a)",
                    d.object_name(a)
                )));
            }
        }
        for m in d.morphisms() {
            let (a, b) = (d.src(m), d.tgt(m));
            if c.compose(g.mor(m), self.components[a]) != c.compose(self.components[b], f.mor(m)) {
                return Err(Error::InvalidNatural(format!(
                    "naturality fails at `{}`",
                    d.morphism_name(m)
                )));
            }
        }
        Ok(())
    }
}

/// Exhaustive backtracking over component choices in object order; the first
/// natural isomorphism found is returned.
pub fn natural_iso_exists(f: &Functor, g: &Functor, limits: &Limits) -> Result<Option<NatIso>> {
    if !same_cat(f.dom(), g.dom()) || !same_cat(f.cod(), g.cod()) {
        return Err(Error::InvalidNatural("functors are not parallel".into()));
    }
    let (d, c) = (f.dom().clone(), f.cod().clone());
    let candidates: Vec<Vec<Mor>> = d
        .objects()
        .map(|a| {
            c.hom(f.obj(a), g.obj(a))
                .iter()
                .copied()
                .filter(|&m| c.is_iso(m))
                .collect()
        })
        .collect();
    let gens = &d.generators().gens;
    // constraints attached to the later endpoint of each generator
    let mut checks: Vec<Vec<Mor>> = vec![Vec::new(); d.num_objects()];
    for &s in gens {
        checks[d.src(s).max(d.tgt(s))].push(s);
    }
    let mut budget = limits.budget();
    let mut chosen = vec![usize::MAX; d.num_objects()];
    fn go(
        k: usize,
        chosen: &mut Vec<Mor>,
        candidates: &[Vec<Mor>],
        checks: &[Vec<Mor>],
        d: &FinCat,
        c: &FinCat,
        f: &Functor,
        g: &Functor,
        budget: &mut crate::limits::Budget,
    ) -> Result<bool> {
        if k == chosen.len() {
            return Ok(true);
        }
        for &eta in &candidates[k] {
            budget.spend(1)?;
            chosen[k] = eta;
            let ok = checks[k].iter().all(|&s| {
                let (a, b) = (d.src(s), d.tgt(s));
                c.compose(g.mor(s), chosen[a]) == c.compose(chosen[b], f.mor(s))
            });
            if ok && go(k + 1, chosen, candidates, checks, d, c, f, g, budget)? {
                return Ok(true);
            }
        }
        chosen[k] = usize::MAX;
        Ok(false)
    }
    if go(
        0,
        &mut chosen,
        &candidates,
        &checks,
        &d,
        &c,
        f,
        g,
        &mut budget,
    )? {
        Ok(Some(NatIso::new(f.clone(), g.clone(), chosen)?))
    } else {
        Ok(None)
    }
}

fn require_groupoids(p: &Functor) -> Result<()> {
    p.dom().require_groupoid()?;
    p.cod().require_groupoid()
}

/// Every isomorphism `α: b → p(a)` lifts to some `β: c → a` with `p(β) = α`.
pub fn is_fibration(p: &Functor) -> Result<bool> {
    require_groupoids(p)?;
    let (d, c) = (p.dom(), p.cod());
    for a in d.objects() {
        let lifts: Vec<Mor> = d.morphisms_into(a).iter().map(|&m| p.mor(m)).collect();
        for &alpha in c.morphisms_into(p.obj(a)) {
            if !lifts.contains(&alpha) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Right lifting property against the endpoint inclusion `∗ → Δ¹`, checked by
/// enumerating commutative squares and candidate functors `Δ¹ → dom`.
pub fn has_rlp_against_endpoint(p: &Functor) -> Result<bool> {
    require_groupoids(p)?;
    let (d, c) = (p.dom(), p.cod());
    // a functor Δ¹ → G is a morphism u together with its inverse
    let intervals = |g: &FinCat| -> Vec<(Mor, Mor)> {
        g.morphisms()
            .filter_map(|u| g.inverse(u).map(|v| (u, v)))
            .collect()
    };
    let down = intervals(c);
    let up = intervals(d);
    for a in d.objects() {
        for &(u, v) in &down {
            if c.src(u) != p.obj(a) {
                continue;
            }
            let lifted = up
                .iter()
                .any(|&(x, y)| d.src(x) == a && p.mor(x) == u && p.mor(y) == v);
            if !lifted {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every fiber (objects over `b`, morphisms over `id_b`) has identities only.
pub fn has_discrete_fibers(p: &Functor) -> bool {
    let (d, c) = (p.dom(), p.cod());
    d.morphisms().all(|m| {
        let pm = p.mor(m);
        !c.is_identity(pm) || d.is_identity(m)
    })
}

/// The iso-comma model: objects `(a, b, γ: f(a) → g(b))`, morphisms `(u, v)`
/// with `γ' ∘ f(u) = g(v) ∘ γ`.
#[derive(Debug, Clone)]
pub struct HomotopyPullback {
    pub cat: Arc<FinCat>,
    pub objects: Vec<(Obj, Obj, Mor)>,
    pub morphisms: Vec<(Mor, Mor)>,
    pub proj_a: Functor,
    pub proj_b: Functor,
}

impl HomotopyPullback {
    pub fn find_object(&self, a: Obj, b: Obj, gamma: Mor) -> Option<Obj> {
        self.objects.iter().position(|&o| o == (a, b, gamma))
    }

    pub fn find_morphism(&self, src: Obj, u: Mor, v: Mor) -> Option<Mor> {
        self.cat
            .morphisms_from(src)
            .iter()
            .copied()
            .find(|&m| self.morphisms[m] == (u, v))
    }
}

pub fn homotopy_pullback(f: &Functor, g: &Functor, limits: &Limits) -> Result<HomotopyPullback> {
    if !same_cat(f.cod(), g.cod()) {
        return Err(Error::InvalidFunctor(
            "homotopy pullback legs have different codomains".into(),
        ));
    }
    let (a_cat, b_cat, c) = (f.dom().clone(), g.dom().clone(), f.cod().clone());
    let mut objects = Vec::new();
    for a in a_cat.objects() {
        for b in b_cat.objects() {
            for &gamma in c.hom(f.obj(a), g.obj(b)) {
                if c.is_iso(gamma) {
                    objects.push((a, b, gamma));
                }
            }
        }
    }
    let mut size: u128 = 0;
    for &(a, b, _) in &objects {
        for &(a2, b2, _) in &objects {
            size += (a_cat.hom(a, a2).len() * b_cat.hom(b, b2).len()) as u128;
        }
    }
    limits.admit(size)?;
    let mut morphisms = Vec::new();
    let mut names = Vec::new();
    let mut identity = vec![0; objects.len()];
    let mut index: HashMap<(Obj, Mor, Mor), Mor> = HashMap::new();
    for (i, &(a, b, gamma)) in objects.iter().enumerate() {
        for (j, &(a2, b2, gamma2)) in objects.iter().enumerate() {
            for &u in a_cat.hom(a, a2) {
                for &v in b_cat.hom(b, b2) {
                    if c.compose(gamma2, f.mor(u)) == c.compose(g.mor(v), gamma) {
                        if i == j && a_cat.is_identity(u) && b_cat.is_identity(v) {
                            identity[i] = morphisms.len();
                        }
                        index.insert((i, u, v), morphisms.len());
                        names.push((
                            format!(
                                "({},{}):{i}->{j}",
                                a_cat.morphism_name(u),
                                b_cat.morphism_name(v)
                            ),
                            i,
                            j,
                        ));
                        morphisms.push((u, v));
                    }
                }
            }
        }
    }
    let obj_names: Vec<String> = objects
        .iter()
        .map(|&(a, b, gamma)| {
            format!(
                "({},{},{})",
                a_cat.object_name(a),
                b_cat.object_name(b),
                c.morphism_name(gamma)
            )
        })
        .collect();
    let ends: Vec<Obj> = names.iter().map(|n| n.1).collect();
    let table = Arc::new((morphisms.clone(), ends, index));
    let (ac, bc) = (a_cat.clone(), b_cat.clone());
    let cat = FinCat::from_rule(
        obj_names,
        names,
        identity,
        Arc::new(move |x, y| {
            let (morphisms, ends, index) = &*table;
            let (u1, v1) = morphisms[x];
            let (u0, v0) = morphisms[y];
            index[&(ends[y], ac.compose(u1, u0), bc.compose(v1, v0))]
        }),
    )?;
    let cat = Arc::new(cat);
    let proj_a = Functor::new_unchecked(
        cat.clone(),
        a_cat.clone(),
        objects.iter().map(|o| o.0).collect(),
        morphisms.iter().map(|m| m.0).collect(),
    );
    let proj_b = Functor::new_unchecked(
        cat.clone(),
        b_cat.clone(),
        objects.iter().map(|o| o.1).collect(),
        morphisms.iter().map(|m| m.1).collect(),
    );
    Ok(HomotopyPullback {
        cat,
        objects,
        morphisms,
        proj_a,
        proj_b,
    })
}
