//! Internal groupoids in a site and the presheaves of groupoids they represent.

use std::collections::HashMap;
use std::sync::Arc;

use super::PshGrpd;
use crate::cat::{FinCat, Functor, Mor, Obj, PullbackCone};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::sites::Site;

/// `(X0, X1)` with source `d`, target `r`, identity `i`, inverse `inv` and
/// composition `mu: X1 ×_{X0} X1 → X1`. The fiber product is the site's chosen
/// pullback of `(r, d)`: `p1` is the first arrow and `p2` the second, and
/// `mu` sends a composable pair to the composite "`p2` after `p1`".
#[derive(Debug, Clone)]
pub struct GroupoidObject {
    pub site: Site,
    pub x0: Obj,
    pub x1: Obj,
    pub d: Mor,
    pub r: Mor,
    pub i: Mor,
    pub mu: Mor,
    pub inv: Mor,
}

impl GroupoidObject {
    /// Checks the structure-map endpoints, the source/target equations, and
    /// the groupoid axioms at every representable `Hom(Y, −)` (which by Yoneda
    /// is equivalent to the internal axioms).
    pub fn new(
        site: Site,
        x0: Obj,
        x1: Obj,
        d: Mor,
        r: Mor,
        i: Mor,
        mu: Mor,
        inv: Mor,
        limits: &Limits,
    ) -> Result<GroupoidObject> {
        let g = GroupoidObject {
            site,
            x0,
            x1,
            d,
            r,
            i,
            mu,
            inv,
        };
        g.validate(limits)?;
        Ok(g)
    }

    /// `X ⇉ X` with every structure map the identity.
    pub fn discrete(site: Site, x: Obj, limits: &Limits) -> Result<GroupoidObject> {
        let id = site.cat().identity(x);
        GroupoidObject::new(site, x, x, id, id, id, id, id, limits)
    }

    pub fn composable_pairs(&self) -> Result<PullbackCone> {
        self.site.pullback(self.r, self.d)
    }

    pub fn validate(&self, limits: &Limits) -> Result<()> {
        let c = self.site.cat();
        let bad = |msg: &str| Err(Error::InvalidGroupoidObject(msg.to_string()));
        let x2 = self.composable_pairs()?;
        let ends = [
            (self.d, self.x1, self.x0),
            (self.r, self.x1, self.x0),
            (self.i, self.x0, self.x1),
            (self.inv, self.x1, self.x1),
            (self.mu, x2.apex, self.x1),
        ];
        if ends.iter().any(|&(m, s, t)| c.src(m) != s || c.tgt(m) != t) {
            return bad("structure maps have wrong endpoints");
        }
        let id0 = c.identity(self.x0);
        if c.compose(self.d, self.i) != id0 || c.compose(self.r, self.i) != id0 {
            return bad("identity arrows do not have matching source and target");
        }
        if c.compose(self.d, self.inv) != self.r || c.compose(self.r, self.inv) != self.d {
            return bad("inverse does not swap source and target");
        }
        if c.compose(self.d, self.mu) != c.compose(self.d, x2.p1)
            || c.compose(self.r, self.mu) != c.compose(self.r, x2.p2)
        {
            return bad("composition does not respect source and target");
        }
        for y in c.objects() {
            let v = self.value_at(y)?;
            v.check_axioms(limits)?;
            for f in v.morphisms() {
                let inv = self.inverse_at(y, f);
                if v.compose(inv, f) != v.identity(v.src(f))
                    || v.compose(f, inv) != v.identity(v.tgt(f))
                {
                    return Err(Error::InvalidGroupoidObject(format!(
                        "inverse fails for `{}` at `{}`",
                        v.morphism_name(f),
                        c.object_name(y)
                    )));
                }
            }
        }
        Ok(())
    }

    fn inverse_at(&self, y: Obj, f: usize) -> usize {
        let c = self.site.cat();
        let arrows = c.hom(y, self.x1);
        let g = c.compose(self.inv, arrows[f]);
        arrows
            .iter()
            .position(|&a| a == g)
            .expect("inverse lies in the hom-set")
    }

    /// The groupoid `Hom(Y, X0) ⇇ Hom(Y, X1)`. Object and morphism indices are
    /// positions in the hom-sets.
    pub fn value_at(&self, y: Obj) -> Result<FinCat> {
        let c = self.site.cat();
        let x2 = self.composable_pairs()?;
        let objs = c.hom(y, self.x0);
        let arrows = c.hom(y, self.x1);
        let pos = |list: &[Mor], m: Mor| {
            list.iter()
                .position(|&a| a == m)
                .expect("composite lies in the hom-set")
        };
        let mut pairs: HashMap<(usize, usize), usize> = HashMap::new();
        for &z in c.hom(y, x2.apex) {
            let key = (
                pos(arrows, c.compose(x2.p1, z)),
                pos(arrows, c.compose(x2.p2, z)),
            );
            let composite = pos(arrows, c.compose(self.mu, z));
            if pairs.insert(key, composite).is_some() {
                return Err(Error::InvalidGroupoidObject(
                    "composable pair factors twice".into(),
                ));
            }
        }
        let objects: Vec<String> = objs
            .iter()
            .map(|&a| c.morphism_name(a).to_string())
            .collect();
        let morphisms: Vec<(String, Obj, Obj)> = arrows
            .iter()
            .map(|&f| {
                (
                    c.morphism_name(f).to_string(),
                    pos(objs, c.compose(self.d, f)),
                    pos(objs, c.compose(self.r, f)),
                )
            })
            .collect();
        let identity: Vec<usize> = objs
            .iter()
            .map(|&a| pos(arrows, c.compose(self.i, a)))
            .collect();
        for (f, m) in morphisms.iter().enumerate() {
            for (g, n) in morphisms.iter().enumerate() {
                if m.2 == n.1 && !pairs.contains_key(&(f, g)) {
                    return Err(Error::InvalidGroupoidObject(format!(
                        "composable pair ({}, {}) does not factor through the chosen pullback",
                        m.0, n.0
                    )));
                }
            }
        }
        FinCat::from_fn(objects, morphisms, identity, |g, f| pairs[&(f, g)])
    }
}

/// `Y ↦` the groupoid with objects `Hom(Y, X0)`, morphisms `Hom(Y, X1)`,
/// source `d ∘ −`, target `r ∘ −`, identities `i ∘ −` and composition via `mu`.
pub fn representable_groupoid_psh(g: &GroupoidObject) -> Result<PshGrpd> {
    let c = g.site.cat().clone();
    let values: Vec<Arc<FinCat>> = c
        .objects()
        .map(|y| g.value_at(y).map(Arc::new))
        .collect::<Result<_>>()?;
    let pos = |list: &[Mor], m: Mor| {
        list.iter()
            .position(|&a| a == m)
            .expect("composite lies in the hom-set")
    };
    let restrict = c
        .morphisms()
        .map(|m| {
            let (y, z) = (c.src(m), c.tgt(m));
            let obj = c
                .hom(z, g.x0)
                .iter()
                .map(|&a| pos(c.hom(y, g.x0), c.compose(a, m)))
                .collect();
            let mor = c
                .hom(z, g.x1)
                .iter()
                .map(|&f| pos(c.hom(y, g.x1), c.compose(f, m)))
                .collect();
            Functor::new_unchecked(values[z].clone(), values[y].clone(), obj, mor)
        })
        .collect();
    PshGrpd::new(c, values, restrict)
}
