//! Finite Grothendieck sites given by a cover basis and chosen pullbacks.

mod cech;
mod kan;
mod psh;
mod sheaf;

pub use cech::{CechNerve, CechSimplex};
pub use kan::left_kan_extension;
pub use psh::{PshMap, PshSet};
pub use sheaf::{
    is_sheaf, matching_families, sheaf_failure, sheafify, SheafFailure, Sheafification,
};

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cat::{verify_pullback, FinCat, Mor, Obj, PullbackCone};
use crate::error::{Error, Result};
use crate::limits::Limits;

/// A finite family of morphisms into `target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cover {
    pub target: Obj,
    pub legs: Vec<Mor>,
}

impl Cover {
    pub fn identity(cat: &FinCat, target: Obj) -> Cover {
        Cover {
            target,
            legs: vec![cat.identity(target)],
        }
    }

    pub fn describe(&self, cat: &FinCat) -> String {
        let legs: Vec<&str> = self.legs.iter().map(|&m| cat.morphism_name(m)).collect();
        format!("{{{}}} → {}", legs.join(", "), cat.object_name(self.target))
    }
}

/// A finite site: a category, a table of chosen pullbacks and a cover basis.
///
/// Pullbacks along identities are canonical (`(id, g)` has apex `src(g)` with
/// projections `g` and `id`) and need not be listed. A pullback listed for
/// `(f, g)` also serves `(g, f)` with the projections swapped.
#[derive(Debug, Clone)]
pub struct Site {
    cat: Arc<FinCat>,
    pullbacks: BTreeMap<(Mor, Mor), PullbackCone>,
    basis: Vec<Cover>,
}

impl Site {
    /// Validates chosen cones, closure of the table under the fiber products
    /// the Čech nerve and stability need, and stability of the basis.
    pub fn new(
        cat: Arc<FinCat>,
        pullbacks: BTreeMap<(Mor, Mor), PullbackCone>,
        basis: Vec<Cover>,
        limits: &Limits,
    ) -> Result<Site> {
        for (&(f, g), cone) in &pullbacks {
            verify_pullback(&cat, f, g, cone, limits)?;
        }
        let site = Site {
            cat,
            pullbacks,
            basis,
        };
        site.check_covers()?;
        for cover in &site.basis {
            CechNerve::new(&site, cover, 2)?;
        }
        site.check_stability()?;
        Ok(site)
    }

    /// A site whose only covers are the identity covers.
    pub fn trivial(cat: Arc<FinCat>) -> Site {
        let basis = cat.objects().map(|o| Cover::identity(&cat, o)).collect();
        Site {
            cat,
            pullbacks: BTreeMap::new(),
            basis,
        }
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn basis(&self) -> &[Cover] {
        &self.basis
    }

    pub fn pullback_table(&self) -> &BTreeMap<(Mor, Mor), PullbackCone> {
        &self.pullbacks
    }

    /// Basis covers of `x`.
    pub fn covers_of(&self, x: Obj) -> impl Iterator<Item = &Cover> {
        self.basis.iter().filter(move |c| c.target == x)
    }

    /// The identity cover of `x` followed by the basis covers of `x` (without
    /// repeating the identity cover).
    pub fn covers_with_identity(&self, x: Obj) -> Vec<Cover> {
        let id = Cover::identity(&self.cat, x);
        let mut out = vec![id.clone()];
        out.extend(self.covers_of(x).filter(|c| **c != id).cloned());
        out
    }

    /// The chosen pullback of the cospan `f → · ← g`.
    pub fn pullback(&self, f: Mor, g: Mor) -> Result<PullbackCone> {
        let c = &self.cat;
        if c.tgt(f) != c.tgt(g) {
            return Err(Error::NoPullback {
                f: c.morphism_name(f).to_string(),
                g: c.morphism_name(g).to_string(),
            });
        }
        if let Some(cone) = self.pullbacks.get(&(f, g)) {
            return Ok(*cone);
        }
        if c.is_identity(f) {
            return Ok(PullbackCone {
                apex: c.src(g),
                p1: g,
                p2: c.identity(c.src(g)),
            });
        }
        if c.is_identity(g) {
            return Ok(PullbackCone {
                apex: c.src(f),
                p1: c.identity(c.src(f)),
                p2: f,
            });
        }
        if let Some(cone) = self.pullbacks.get(&(g, f)) {
            return Ok(PullbackCone {
                apex: cone.apex,
                p1: cone.p2,
                p2: cone.p1,
            });
        }
        Err(Error::MissingPullback {
            f: c.morphism_name(f).to_string(),
            g: c.morphism_name(g).to_string(),
        })
    }

    fn check_covers(&self) -> Result<()> {
        for cover in &self.basis {
            if cover.target >= self.cat.num_objects() {
                return Err(Error::InvalidCover(
                    "cover target outside the category".into(),
                ));
            }
            for &leg in &cover.legs {
                if leg >= self.cat.num_morphisms() || self.cat.tgt(leg) != cover.target {
                    return Err(Error::InvalidCover(format!(
                        "leg of {} does not end at the target",
                        cover.describe(&self.cat)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Some `m` with `leg ∘ m = w`.
    pub fn factor_through(&self, w: Mor, leg: Mor) -> Option<Mor> {
        let c = &self.cat;
        c.hom(c.src(w), c.src(leg))
            .iter()
            .copied()
            .find(|&m| c.compose(leg, m) == w)
    }

    /// `refining` refines the family `legs` when each of its legs factors
    /// through some member of `legs`.
    pub fn refines(&self, refining: &Cover, legs: &[Mor]) -> bool {
        refining
            .legs
            .iter()
            .all(|&w| legs.iter().any(|&u| self.factor_through(w, u).is_some()))
    }

    /// For every basis cover of `X` and `h: Y → X`, some basis cover of `Y`
    /// refines the pulled-back family.
    fn check_stability(&self) -> Result<()> {
        let c = &self.cat;
        for cover in &self.basis {
            for &h in c.morphisms_into(cover.target) {
                let mut pulled = Vec::with_capacity(cover.legs.len());
                for &u in &cover.legs {
                    pulled.push(self.pullback(h, u)?.p1);
                }
                let y = c.src(h);
                if !self.covers_of(y).any(|k| self.refines(k, &pulled)) {
                    return Err(Error::Stability {
                        cover: cover.describe(c),
                        morphism: c.morphism_name(h).to_string(),
                        object: c.object_name(y).to_string(),
                    });
                }
            }
        }
        Ok(())
    }
}
