//! Presheaves of groupoids on finite sites and their model-structure predicates.

mod cech;
mod groupoid_object;
mod predicates;

pub use cech::{cech_cosimplicial, cech_groupoid_psh, cech_tot2, CechTot2};
pub use groupoid_object::{representable_groupoid_psh, GroupoidObject};
pub use predicates::{
    is_levelwise_fibration, is_local_fibration, is_local_we, is_stack, local_fibration_failure,
    stack_failure, LocalWeVerdict, StackFailure,
};

use std::sync::Arc;

use crate::cat::{same_cat, FinCat, Functor, Obj};
use crate::error::{Error, Result};

/// A strict contravariant functor to finite groupoids; `restriction(m)` is
/// `F(m): F(tgt m) → F(src m)`.
#[derive(Debug, Clone)]
pub struct PshGrpd {
    cat: Arc<FinCat>,
    values: Vec<Arc<FinCat>>,
    restrict: Vec<Functor>,
}

impl PshGrpd {
    pub fn new(
        cat: Arc<FinCat>,
        values: Vec<Arc<FinCat>>,
        restrict: Vec<Functor>,
    ) -> Result<PshGrpd> {
        let f = PshGrpd {
            cat,
            values,
            restrict,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn new_unchecked(
        cat: Arc<FinCat>,
        values: Vec<Arc<FinCat>>,
        restrict: Vec<Functor>,
    ) -> PshGrpd {
        PshGrpd {
            cat,
            values,
            restrict,
        }
    }

    /// Groupoid values, restriction endpoints, identities, and
    /// `F(s ∘ f) = F(f) ∘ F(s)` for generators `s`.
    pub fn validate(&self) -> Result<()> {
        let c = &*self.cat;
        let bad = |msg: String| Err(Error::InvalidPresheaf(msg));
        if self.values.len() != c.num_objects() || self.restrict.len() != c.num_morphisms() {
            return bad("table sizes do not match the category".into());
        }
        for x in c.objects() {
            if !self.values[x].is_groupoid() {
                return bad(format!("value at `{}` is not a groupoid", c.object_name(x)));
            }
        }
        for m in c.morphisms() {
            let r = &self.restrict[m];
            if !same_cat(r.dom(), &self.values[c.tgt(m)])
                || !same_cat(r.cod(), &self.values[c.src(m)])
            {
                return bad(format!(
                    "restriction along `{}` has wrong endpoints",
                    c.morphism_name(m)
                ));
            }
        }
        for x in c.objects() {
            if !self.restrict[c.identity(x)].is_identity() {
                return bad(format!(
                    "identity of `{}` does not act as the identity",
                    c.object_name(x)
                ));
            }
        }
        for &s in &c.generators().gens {
            for &f in c.morphisms_into(c.src(s)) {
                let sf = c.compose(s, f);
                if self.restrict[f].after(&self.restrict[s]) != self.restrict[sf] {
                    return bad(format!(
                        "restriction along `{} ∘ {}` is not the composite of restrictions",
                        c.morphism_name(s),
                        c.morphism_name(f)
                    ));
                }
            }
        }
        Ok(())
    }

    /// Builds restrictions from object and morphism rules on each value.
    pub fn from_rules<O, M>(
        cat: Arc<FinCat>,
        values: Vec<Arc<FinCat>>,
        on_obj: O,
        on_mor: M,
    ) -> Result<PshGrpd>
    where
        O: Fn(usize, Obj) -> Obj,
        M: Fn(usize, usize) -> usize,
    {
        let restrict = cat
            .morphisms()
            .map(|m| {
                let (dom, cod) = (values[cat.tgt(m)].clone(), values[cat.src(m)].clone());
                let obj = dom.objects().map(|o| on_obj(m, o)).collect();
                let mor = dom.morphisms().map(|u| on_mor(m, u)).collect();
                Functor::new_unchecked(dom, cod, obj, mor)
            })
            .collect();
        PshGrpd::new(cat, values, restrict)
    }

    /// The constant presheaf with value `g`, except that objects listed in
    /// `terminal_at` take the one-point value.
    pub fn constant(cat: Arc<FinCat>, g: Arc<FinCat>, terminal_at: &[Obj]) -> Result<PshGrpd> {
        let point = Arc::new(FinCat::terminal());
        let values: Vec<Arc<FinCat>> = cat
            .objects()
            .map(|x| {
                if terminal_at.contains(&x) {
                    point.clone()
                } else {
                    g.clone()
                }
            })
            .collect();
        let restrict = cat
            .morphisms()
            .map(|m| {
                let (dom, cod) = (values[cat.tgt(m)].clone(), values[cat.src(m)].clone());
                match (
                    terminal_at.contains(&cat.tgt(m)),
                    terminal_at.contains(&cat.src(m)),
                ) {
                    (false, false) => Functor::identity(dom),
                    (_, true) => Functor::to_terminal(dom, cod),
                    (true, false) => Functor::point(dom, cod, 0),
                }
            })
            .collect();
        PshGrpd::new(cat, values, restrict)
    }

    /// `Y ↦` the discrete groupoid on `Hom(Y, x)`.
    pub fn representable(cat: Arc<FinCat>, x: Obj) -> PshGrpd {
        PshGrpd::discrete(&crate::sites::PshSet::representable(cat, x))
    }

    /// A set-valued presheaf viewed as a presheaf of discrete groupoids.
    pub fn discrete(f: &crate::sites::PshSet) -> PshGrpd {
        let cat = f.cat().clone();
        let values: Vec<Arc<FinCat>> = cat
            .objects()
            .map(|y| {
                let names: Vec<String> = f
                    .labels(y)
                    .iter()
                    .enumerate()
                    .map(|(i, l)| format!("{i}:{l}"))
                    .collect();
                Arc::new(FinCat::discrete(&names))
            })
            .collect();
        let restrict = cat
            .morphisms()
            .map(|m| {
                let (dom, cod) = (values[cat.tgt(m)].clone(), values[cat.src(m)].clone());
                let table = f.restriction(m).to_vec();
                Functor::new_unchecked(dom, cod, table.clone(), table)
            })
            .collect();
        PshGrpd {
            cat,
            values,
            restrict,
        }
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn value(&self, x: Obj) -> &Arc<FinCat> {
        &self.values[x]
    }

    pub fn values(&self) -> &[Arc<FinCat>] {
        &self.values
    }

    pub fn restriction(&self, m: usize) -> &Functor {
        &self.restrict[m]
    }

    pub fn restrictions(&self) -> &[Functor] {
        &self.restrict
    }
}

/// A strictly natural map `F → G`: `components[x]: F(x) → G(x)`.
#[derive(Debug, Clone)]
pub struct PshGrpdMap {
    pub source: PshGrpd,
    pub target: PshGrpd,
    pub components: Vec<Functor>,
}

impl PshGrpdMap {
    pub fn new(source: PshGrpd, target: PshGrpd, components: Vec<Functor>) -> Result<PshGrpdMap> {
        let m = PshGrpdMap {
            source,
            target,
            components,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let (f, g) = (&self.source, &self.target);
        if !same_cat(f.cat(), g.cat()) {
            return Err(Error::InvalidNatural(
                "presheaves live on different sites".into(),
            ));
        }
        let c = f.cat();
        if self.components.len() != c.num_objects() {
            return Err(Error::InvalidNatural("wrong number of components".into()));
        }
        for x in c.objects() {
            let phi = &self.components[x];
            if !same_cat(phi.dom(), f.value(x)) || !same_cat(phi.cod(), g.value(x)) {
                return Err(Error::InvalidNatural(format!(
                    "component at `{}` has wrong endpoints",
                    c.object_name(x)
                )));
            }
        }
        for &s in &c.generators().gens {
            let (a, b) = (c.src(s), c.tgt(s));
            if self.components[a].after(f.restriction(s))
                != g.restriction(s).after(&self.components[b])
            {
                return Err(Error::InvalidNatural(format!(
                    "naturality fails at `{}`",
                    c.morphism_name(s)
                )));
            }
        }
        Ok(())
    }

    pub fn identity(f: &PshGrpd) -> PshGrpdMap {
        let components = f
            .values()
            .iter()
            .map(|v| Functor::identity(v.clone()))
            .collect();
        PshGrpdMap {
            source: f.clone(),
            target: f.clone(),
            components,
        }
    }

    /// The unique map to the constant one-point presheaf.
    pub fn to_terminal(f: &PshGrpd) -> PshGrpdMap {
        let point = Arc::new(FinCat::terminal());
        let target =
            PshGrpd::constant(f.cat().clone(), point.clone(), &[]).expect("terminal presheaf");
        let components = f
            .values()
            .iter()
            .map(|v| Functor::to_terminal(v.clone(), point.clone()))
            .collect();
        PshGrpdMap {
            source: f.clone(),
            target,
            components,
        }
    }
}
