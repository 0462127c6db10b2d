//! Stack, local weak equivalence and local fibration predicates.

use std::sync::Arc;

use super::cech::cech_tot2;
use super::{PshGrpd, PshGrpdMap};
use crate::cat::{
    homotopy_pullback, is_equivalence, is_fibration, EquivalenceVerdict, Functor, Mor,
    NotEquivalence,
};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::simplicial::{tot2_functor, ProductMap};
use crate::sites::{CechNerve, Cover, Site};

pub fn is_levelwise_fibration(phi: &PshGrpdMap) -> Result<bool> {
    for f in &phi.components {
        if !is_fibration(f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A basis cover on which `F(X) → Tot²` is not an equivalence.
#[derive(Debug, Clone)]
pub struct StackFailure {
    pub cover: Cover,
    pub reason: String,
    /// The descent datum outside the essential image, when that is the reason.
    pub witness: Option<String>,
}

pub fn stack_failure(f: &PshGrpd, site: &Site, limits: &Limits) -> Result<Option<StackFailure>> {
    for cover in site.basis() {
        let t = cech_tot2(f, site, cover, limits)?;
        if let EquivalenceVerdict::No(reason) = is_equivalence(&t.comparison, limits)? {
            let witness = match reason {
                NotEquivalence::NotEssentiallySurjective { b } => {
                    Some(t.tot.cat.object_name(b).to_string())
                }
                _ => None,
            };
            return Ok(Some(StackFailure {
                cover: cover.clone(),
                reason: reason.describe(&t.comparison),
                witness,
            }));
        }
    }
    Ok(None)
}

pub fn is_stack(f: &PshGrpd, site: &Site, limits: &Limits) -> Result<bool> {
    Ok(stack_failure(f, site, limits)?.is_none())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalWeVerdict {
    Positive,
    /// No witness cover was found within the refinement depth. This is not a
    /// proof that the map is not a local weak equivalence.
    NegativeAtDepth {
        depth: usize,
        condition: String,
        detail: String,
    },
}

impl LocalWeVerdict {
    pub fn is_positive(&self) -> bool {
        matches!(self, LocalWeVerdict::Positive)
    }
}

/// True when `pred(h)` holds for `h` itself or, up to `depth` refinement
/// steps, for every leg of some basis cover of its source.
fn holds_locally(site: &Site, h: Mor, depth: usize, pred: &dyn Fn(Mor) -> bool) -> bool {
    if pred(h) {
        return true;
    }
    if depth == 0 {
        return false;
    }
    let c = site.cat();
    let y = c.src(h);
    let id = Cover::identity(c, y);
    site.covers_of(y).filter(|k| **k != id).any(|k| {
        k.legs
            .iter()
            .all(|&u| holds_locally(site, c.compose(h, u), depth - 1, pred))
    })
}

/// The local lifting conditions for `φ: F → G`: (a) objects of `G` lift
/// locally up to isomorphism, (b) morphisms between images lift locally,
/// (c) automorphisms sent to identities become identities locally.
pub fn is_local_we(phi: &PshGrpdMap, site: &Site, depth: usize) -> Result<LocalWeVerdict> {
    let (f, g) = (&phi.source, &phi.target);
    let c = site.cat();
    let negative = |cond: &str, detail: String| {
        Ok(LocalWeVerdict::NegativeAtDepth {
            depth,
            condition: cond.to_string(),
            detail,
        })
    };
    for x in c.objects() {
        let (fx, gx) = (f.value(x), g.value(x));
        let id = c.identity(x);
        for b in gx.objects() {
            let pred = |h: Mor| {
                let y = c.src(h);
                let target = g.restriction(h).obj(b);
                let gy = g.value(y);
                f.value(y).objects().any(|a| {
                    gy.hom(phi.components[y].obj(a), target)
                        .iter()
                        .any(|&m| gy.is_iso(m))
                })
            };
            if !holds_locally(site, id, depth, &pred) {
                return negative(
                    "locally essentially surjective",
                    format!(
                        "object `{}` over `{}` has no local preimage",
                        gx.object_name(b),
                        c.object_name(x)
                    ),
                );
            }
        }
        for a in fx.objects() {
            for a2 in fx.objects() {
                let (pa, pa2) = (phi.components[x].obj(a), phi.components[x].obj(a2));
                for &gm in gx.hom(pa, pa2) {
                    let pred = |h: Mor| {
                        let y = c.src(h);
                        let (ra, ra2) = (f.restriction(h).obj(a), f.restriction(h).obj(a2));
                        let want = g.restriction(h).mor(gm);
                        f.value(y)
                            .hom(ra, ra2)
                            .iter()
                            .any(|&u| phi.components[y].mor(u) == want)
                    };
                    if !holds_locally(site, id, depth, &pred) {
                        return negative(
                            "locally full",
                            format!(
                                "morphism `{}` over `{}` has no local lift",
                                gx.morphism_name(gm),
                                c.object_name(x)
                            ),
                        );
                    }
                }
            }
            for &u in fx.hom(a, a) {
                if !gx.is_identity(phi.components[x].mor(u)) || fx.is_identity(u) {
                    continue;
                }
                let pred = |h: Mor| f.value(c.src(h)).is_identity(f.restriction(h).mor(u));
                if !holds_locally(site, id, depth, &pred) {
                    return negative(
                        "locally faithful",
                        format!(
                            "automorphism `{}` over `{}` maps to an identity but never becomes one",
                            fx.morphism_name(u),
                            c.object_name(x)
                        ),
                    );
                }
            }
        }
    }
    Ok(LocalWeVerdict::Positive)
}

/// Why `φ: F → M` is not a local fibration, if it is not.
pub fn local_fibration_failure(
    phi: &PshGrpdMap,
    site: &Site,
    limits: &Limits,
) -> Result<Option<String>> {
    let (f, m) = (&phi.source, &phi.target);
    let c = site.cat();
    for x in c.objects() {
        if !is_fibration(&phi.components[x])? {
            return Ok(Some(format!(
                "component at `{}` is not a fibration",
                c.object_name(x)
            )));
        }
    }
    for cover in site.basis() {
        let ft = cech_tot2(f, site, cover, limits)?;
        let mt = cech_tot2(m, site, cover, limits)?;
        let nerve = CechNerve::new(site, cover, 2)?;
        let level = |n: usize| -> Vec<Functor> {
            nerve.levels[n]
                .iter()
                .map(|s| phi.components[s.apex].clone())
                .collect()
        };
        let pm = ProductMap {
            components: [level(0), level(1), level(2)],
        };
        pm.validate(&ft.cosimplicial, &mt.cosimplicial)?;
        let tf = tot2_functor(&pm, &ft.tot, &mt.tot)?;
        let hpb = homotopy_pullback(&mt.comparison, &tf, limits)?;
        let x = cover.target;
        let fx = f.value(x);
        let px = &phi.components[x];
        let mut obj = Vec::with_capacity(fx.num_objects());
        for a in fx.objects() {
            let (ma, ta) = (px.obj(a), ft.comparison.obj(a));
            let over = mt.comparison.obj(ma);
            if tf.obj(ta) != over {
                return Err(Error::Invariant(
                    "Čech comparison squares do not commute".into(),
                ));
            }
            let gamma = mt.tot.cat.identity(over);
            obj.push(
                hpb.find_object(ma, ta, gamma)
                    .ok_or_else(|| Error::Invariant("comparison object missing".into()))?,
            );
        }
        let mut mor = Vec::with_capacity(fx.num_morphisms());
        for u in fx.morphisms() {
            mor.push(
                hpb.find_morphism(obj[fx.src(u)], px.mor(u), ft.comparison.mor(u))
                    .ok_or_else(|| Error::Invariant("comparison morphism missing".into()))?,
            );
        }
        let comparison = Functor::new(Arc::clone(fx), hpb.cat.clone(), obj, mor)?;
        if let EquivalenceVerdict::No(reason) = is_equivalence(&comparison, limits)? {
            return Ok(Some(format!(
                "on the cover {}: {}",
                cover.describe(c),
                reason.describe(&comparison)
            )));
        }
    }
    Ok(None)
}

pub fn is_local_fibration(phi: &PshGrpdMap, site: &Site, limits: &Limits) -> Result<bool> {
    Ok(local_fibration_failure(phi, site, limits)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::FinCat;
    use crate::fixtures;
    use crate::pshgrpd::{cech_groupoid_psh, cech_tot2};

    fn bz2() -> Arc<crate::cat::FinCat> {
        Arc::new(FinCat::cyclic_group(2))
    }

    #[test]
    fn constant_bz2_is_a_stack_on_s2() {
        let site = fixtures::s2();
        let f = PshGrpd::constant(site.cat().clone(), bz2(), &[]).unwrap();
        assert!(is_stack(&f, &site, &Limits::default()).unwrap());
    }

    #[test]
    fn constant_bz2_is_not_a_stack_on_circ() {
        let site = fixtures::circ();
        let e = site.cat().object_by_name("E").unwrap();
        let f = PshGrpd::constant(site.cat().clone(), bz2(), &[e]).unwrap();
        let limits = Limits::default();
        let failure = stack_failure(&f, &site, &limits)
            .unwrap()
            .expect("not a stack");
        assert!(failure.witness.is_some());
        let t = cech_tot2(&f, &site, &site.basis()[0], &limits).unwrap();
        let tot = &t.tot.cat;
        // two isomorphism classes, each with automorphism group of order 2
        let mut classes: Vec<usize> = Vec::new();
        for o in tot.objects() {
            if !classes
                .iter()
                .any(|&r| tot.hom(r, o).iter().any(|&m| tot.is_iso(m)))
            {
                classes.push(o);
            }
        }
        assert_eq!(classes.len(), 2);
        for &r in &classes {
            assert_eq!(tot.hom(r, r).len(), 2);
        }
    }

    #[test]
    fn cech_map_is_local_we_at_depth_one() {
        for site in [fixtures::s2(), fixtures::circ(), fixtures::bg2()] {
            for cover in site.basis() {
                let phi = cech_groupoid_psh(&site, cover, &Limits::default()).unwrap();
                assert!(is_local_we(&phi, &site, 1).unwrap().is_positive());
            }
        }
    }
}
