//! Truncated cosimplicial categories whose levels are finite products of
//! categories and whose structure maps reindex factors and apply functors.
//! Levels are never materialized.

use std::sync::Arc;

use super::tot2::{TruncCosimplicial, TruncCosimplicialMap};
use crate::cat::{same_cat, FinCat, Functor, Mor, Obj};
use crate::error::{Error, Result};
use crate::limits::{product_size, Limits};
use crate::search::backtrack;

/// A product `∏_t C_t` of finite categories, with a label per factor.
#[derive(Debug, Clone)]
pub struct ProductLevel {
    pub labels: Vec<String>,
    pub factors: Vec<Arc<FinCat>>,
}

impl ProductLevel {
    pub fn new(labels: Vec<String>, factors: Vec<Arc<FinCat>>) -> ProductLevel {
        assert_eq!(labels.len(), factors.len());
        ProductLevel { labels, factors }
    }

    pub fn single(label: &str, cat: Arc<FinCat>) -> ProductLevel {
        ProductLevel::new(vec![label.to_string()], vec![cat])
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// True when some factor has no objects, so the product is empty.
    pub fn has_empty_factor(&self) -> bool {
        self.factors.iter().any(|c| c.num_objects() == 0)
    }

    pub fn num_objects(&self) -> u128 {
        product_size(self.factors.iter().map(|c| c.num_objects()))
    }

    pub fn objects(&self, limits: &Limits) -> Result<Vec<Vec<Obj>>> {
        limits.admit(self.num_objects())?;
        let domains: Vec<Vec<Obj>> = self.factors.iter().map(|c| c.objects().collect()).collect();
        backtrack(&domains, &mut limits.budget(), |_, _| true)
    }

    pub fn identity(&self, x: &[Obj]) -> Vec<Mor> {
        x.iter()
            .zip(&self.factors)
            .map(|(&o, c)| c.identity(o))
            .collect()
    }

    pub fn compose(&self, g: &[Mor], f: &[Mor]) -> Vec<Mor> {
        g.iter()
            .zip(f)
            .zip(&self.factors)
            .map(|((&g, &f), c)| c.compose(g, f))
            .collect()
    }

    pub fn object_label(&self, x: &[Obj]) -> String {
        let parts: Vec<&str> = x
            .iter()
            .zip(&self.factors)
            .map(|(&o, c)| c.object_name(o))
            .collect();
        format!("({})", parts.join(","))
    }

    pub fn morphism_label(&self, h: &[Mor]) -> String {
        let parts: Vec<&str> = h
            .iter()
            .zip(&self.factors)
            .map(|(&m, c)| c.morphism_name(m))
            .collect();
        format!("({})", parts.join(","))
    }
}

/// Output factor `t` of a reindexing is `functor` applied to input factor `source`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leg {
    pub source: usize,
    pub functor: Functor,
}

impl Leg {
    fn constant_value(&self) -> Option<Obj> {
        let f = &self.functor;
        let cod = f.cod();
        let first = *f.obj_table().first()?;
        let constant = f.obj_table().iter().all(|&o| o == first)
            && f.mor_table().iter().all(|&m| m == cod.identity(first));
        constant.then_some(first)
    }

    fn same_map(&self, other: &Leg) -> bool {
        if self.source == other.source && self.functor == other.functor {
            return true;
        }
        match (self.constant_value(), other.constant_value()) {
            (Some(a), Some(b)) => a == b && same_cat(self.functor.cod(), other.functor.cod()),
            _ => false,
        }
    }
}

/// A functor between product levels that acts factorwise through legs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reindex {
    pub legs: Vec<Leg>,
}

impl Reindex {
    pub fn identity(level: &ProductLevel) -> Reindex {
        Reindex {
            legs: level
                .factors
                .iter()
                .enumerate()
                .map(|(t, c)| Leg {
                    source: t,
                    functor: Functor::identity(c.clone()),
                })
                .collect(),
        }
    }

    pub fn validate(&self, from: &ProductLevel, to: &ProductLevel) -> Result<()> {
        if self.legs.len() != to.len() {
            return Err(Error::InvalidFunctor(
                "reindexing has the wrong number of legs".into(),
            ));
        }
        for (t, leg) in self.legs.iter().enumerate() {
            if leg.source >= from.len()
                || !same_cat(leg.functor.dom(), &from.factors[leg.source])
                || !same_cat(leg.functor.cod(), &to.factors[t])
            {
                return Err(Error::InvalidFunctor(format!(
                    "leg for factor `{}` does not match the levels",
                    to.labels[t]
                )));
            }
        }
        Ok(())
    }

    pub fn apply_obj(&self, x: &[Obj]) -> Vec<Obj> {
        self.legs
            .iter()
            .map(|l| l.functor.obj(x[l.source]))
            .collect()
    }

    pub fn apply_mor(&self, h: &[Mor]) -> Vec<Mor> {
        self.legs
            .iter()
            .map(|l| l.functor.mor(h[l.source]))
            .collect()
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Reindex) -> Reindex {
        Reindex {
            legs: self
                .legs
                .iter()
                .map(|l| {
                    let inner = &first.legs[l.source];
                    Leg {
                        source: inner.source,
                        functor: l.functor.after(&inner.functor),
                    }
                })
                .collect(),
        }
    }

    /// Equality as functors out of `from`.
    pub fn same_map(&self, other: &Reindex, from: &ProductLevel) -> bool {
        if from.has_empty_factor() {
            return self.legs.len() == other.legs.len();
        }
        self.legs.len() == other.legs.len()
            && self
                .legs
                .iter()
                .zip(&other.legs)
                .all(|(a, b)| a.same_map(b))
    }
}

/// Levels `L⁰, L¹, L²`, cofaces `d⁰, d¹: L⁰ → L¹`, `d⁰, d¹, d²: L¹ → L²` and
/// codegeneracy `s⁰: L¹ → L⁰`.
#[derive(Debug, Clone)]
pub struct ProductCosimplicial {
    pub levels: [ProductLevel; 3],
    pub cofaces0: [Reindex; 2],
    pub cofaces1: [Reindex; 3],
    pub codegeneracy: Reindex,
}

impl ProductCosimplicial {
    pub fn new(
        levels: [ProductLevel; 3],
        cofaces0: [Reindex; 2],
        cofaces1: [Reindex; 3],
        codegeneracy: Reindex,
    ) -> Result<ProductCosimplicial> {
        let t = ProductCosimplicial {
            levels,
            cofaces0,
            cofaces1,
            codegeneracy,
        };
        t.validate()?;
        Ok(t)
    }

    /// Checks the legs and the truncated cosimplicial identities
    /// `dʲdⁱ = dⁱdʲ⁻¹` (`i < j`) and `s⁰d⁰ = s⁰d¹ = id`.
    pub fn validate(&self) -> Result<()> {
        let [l0, l1, l2] = &self.levels;
        for d in &self.cofaces0 {
            d.validate(l0, l1)?;
        }
        for d in &self.cofaces1 {
            d.validate(l1, l2)?;
        }
        self.codegeneracy.validate(l1, l0)?;
        let [a0, a1] = &self.cofaces0;
        let [b0, b1, b2] = &self.cofaces1;
        let identities = [
            ("d¹d⁰ = d⁰d⁰", b1.after(a0), b0.after(a0)),
            ("d²d⁰ = d⁰d¹", b2.after(a0), b0.after(a1)),
            ("d²d¹ = d¹d¹", b2.after(a1), b1.after(a1)),
        ];
        for (name, lhs, rhs) in &identities {
            if !lhs.same_map(rhs, l0) {
                return Err(Error::CosimplicialIdentity(name.to_string()));
            }
        }
        let id = Reindex::identity(l0);
        for (name, d) in [("s⁰d⁰ = id", a0), ("s⁰d¹ = id", a1)] {
            if !self.codegeneracy.after(d).same_map(&id, l0) {
                return Err(Error::CosimplicialIdentity(name.to_string()));
            }
        }
        Ok(())
    }

    /// Level-1 factors constrained at each position by the codegeneracy
    /// (unit law) and by each level-2 factor (cocycle).
    fn alpha_checks(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let n1 = self.levels[1].len();
        let mut unit = vec![Vec::new(); n1];
        for (i, leg) in self.codegeneracy.legs.iter().enumerate() {
            unit[leg.source].push(i);
        }
        let mut cocycle = vec![Vec::new(); n1];
        for w in 0..self.levels[2].len() {
            let last = self
                .cofaces1
                .iter()
                .map(|d| d.legs[w].source)
                .max()
                .unwrap_or(0);
            cocycle[last].push(w);
        }
        (unit, cocycle)
    }

    fn cocycle_at(&self, w: usize, alpha: &[Mor]) -> bool {
        let [b0, b1, b2] = &self.cofaces1;
        let c = &self.levels[2].factors[w];
        let part = |d: &Reindex| d.legs[w].functor.mor(alpha[d.legs[w].source]);
        c.compose(part(b2), part(b0)) == part(b1)
    }

    fn square_at(&self, t: usize, h: &[Mor], alpha: &[Mor], beta: &[Mor]) -> bool {
        let [a0, a1] = &self.cofaces0;
        let c = &self.levels[1].factors[t];
        let d0h = a0.legs[t].functor.mor(h[a0.legs[t].source]);
        let d1h = a1.legs[t].functor.mor(h[a1.legs[t].source]);
        c.compose(beta[t], d0h) == c.compose(d1h, alpha[t])
    }
}

impl TruncCosimplicial for ProductCosimplicial {
    type X = Vec<Obj>;
    type A = Vec<Mor>;
    type H = Vec<Mor>;

    fn objects0(&self, limits: &Limits) -> Result<Vec<Vec<Obj>>> {
        self.levels[0].objects(limits)
    }

    fn alpha_candidates(&self, x: &Vec<Obj>, limits: &Limits) -> Result<Vec<Vec<Mor>>> {
        let [a0, a1] = &self.cofaces0;
        let (src, tgt) = (a0.apply_obj(x), a1.apply_obj(x));
        let domains: Vec<Vec<Mor>> = self.levels[1]
            .factors
            .iter()
            .enumerate()
            .map(|(t, c)| {
                c.hom(src[t], tgt[t])
                    .iter()
                    .copied()
                    .filter(|&m| c.is_iso(m))
                    .collect()
            })
            .collect();
        let (unit, cocycle) = self.alpha_checks();
        let l0 = &self.levels[0];
        backtrack(&domains, &mut limits.budget(), |k, alpha| {
            unit[k].iter().all(|&i| {
                let leg = &self.codegeneracy.legs[i];
                leg.functor.mor(alpha[k]) == l0.factors[i].identity(x[i])
            }) && cocycle[k].iter().all(|&w| self.cocycle_at(w, alpha))
        })
    }

    fn hom_candidates(
        &self,
        x: &Vec<Obj>,
        alpha: &Vec<Mor>,
        y: &Vec<Obj>,
        beta: &Vec<Mor>,
        limits: &Limits,
    ) -> Result<Vec<Vec<Mor>>> {
        let l0 = &self.levels[0];
        let domains: Vec<Vec<Mor>> = l0
            .factors
            .iter()
            .enumerate()
            .map(|(i, c)| c.hom(x[i], y[i]).to_vec())
            .collect();
        let [a0, a1] = &self.cofaces0;
        let mut checks = vec![Vec::new(); l0.len()];
        for t in 0..self.levels[1].len() {
            checks[a0.legs[t].source.max(a1.legs[t].source)].push(t);
        }
        backtrack(&domains, &mut limits.budget(), |k, h| {
            checks[k].iter().all(|&t| self.square_at(t, h, alpha, beta))
        })
    }

    fn unit_law(&self, x: &Vec<Obj>, alpha: &Vec<Mor>) -> bool {
        self.codegeneracy.apply_mor(alpha) == self.levels[0].identity(x)
    }

    fn cocycle_law(&self, _x: &Vec<Obj>, alpha: &Vec<Mor>) -> bool {
        let [b0, b1, b2] = &self.cofaces1;
        self.levels[2].compose(&b2.apply_mor(alpha), &b0.apply_mor(alpha)) == b1.apply_mor(alpha)
    }

    fn square_commutes(&self, h: &Vec<Mor>, alpha: &Vec<Mor>, beta: &Vec<Mor>) -> bool {
        let [a0, a1] = &self.cofaces0;
        let l1 = &self.levels[1];
        l1.compose(beta, &a0.apply_mor(h)) == l1.compose(&a1.apply_mor(h), alpha)
    }

    fn compose0(&self, g: &Vec<Mor>, f: &Vec<Mor>) -> Vec<Mor> {
        self.levels[0].compose(g, f)
    }

    fn identity0(&self, x: &Vec<Obj>) -> Vec<Mor> {
        self.levels[0].identity(x)
    }

    fn object_label(&self, x: &Vec<Obj>, alpha: &Vec<Mor>) -> String {
        format!(
            "{};{}",
            self.levels[0].object_label(x),
            self.levels[1].morphism_label(alpha)
        )
    }

    fn morphism_label(&self, h: &Vec<Mor>) -> String {
        self.levels[0].morphism_label(h)
    }
}

/// A levelwise map of product-shaped cosimplicial categories of the same shape,
/// given by one functor per factor.
#[derive(Debug, Clone)]
pub struct ProductMap {
    pub components: [Vec<Functor>; 3],
}

impl ProductMap {
    /// Checks factor endpoints and strict commutation with all structure maps.
    pub fn validate(&self, s: &ProductCosimplicial, t: &ProductCosimplicial) -> Result<()> {
        for n in 0..3 {
            let (ls, lt) = (&s.levels[n], &t.levels[n]);
            if self.components[n].len() != ls.len() || ls.len() != lt.len() {
                return Err(Error::InvalidFunctor(
                    "levelwise map has the wrong shape".into(),
                ));
            }
            for (k, f) in self.components[n].iter().enumerate() {
                if !same_cat(f.dom(), &ls.factors[k]) || !same_cat(f.cod(), &lt.factors[k]) {
                    return Err(Error::InvalidFunctor(
                        "levelwise component has wrong endpoints".into(),
                    ));
                }
            }
        }
        let commutes = |n: usize, ds: &Reindex, dt: &Reindex, m: usize| -> bool {
            ds.legs.iter().zip(&dt.legs).enumerate().all(|(k, (a, b))| {
                a.source == b.source
                    && self.components[m][k].after(&a.functor)
                        == b.functor.after(&self.components[n][a.source])
            })
        };
        let ok = (0..2).all(|i| commutes(0, &s.cofaces0[i], &t.cofaces0[i], 1))
            && (0..3).all(|i| commutes(1, &s.cofaces1[i], &t.cofaces1[i], 2))
            && commutes(1, &s.codegeneracy, &t.codegeneracy, 0);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidFunctor(
                "levelwise map does not commute with the structure maps".into(),
            ))
        }
    }
}

impl TruncCosimplicialMap<ProductCosimplicial, ProductCosimplicial> for ProductMap {
    fn on_x(&self, x: &Vec<Obj>) -> Vec<Obj> {
        x.iter()
            .zip(&self.components[0])
            .map(|(&o, f)| f.obj(o))
            .collect()
    }
    fn on_a(&self, a: &Vec<Mor>) -> Vec<Mor> {
        a.iter()
            .zip(&self.components[1])
            .map(|(&m, f)| f.mor(m))
            .collect()
    }
    fn on_h(&self, h: &Vec<Mor>) -> Vec<Mor> {
        h.iter()
            .zip(&self.components[0])
            .map(|(&m, f)| f.mor(m))
            .collect()
    }
}

/// The functor `K → Tot²` induced by a cone `c: K → L⁰` with `d⁰c = d¹c`:
/// `k ↦ (c(k), id)`, `u ↦ c(u)`.
pub fn cone_to_tot2(
    t: &ProductCosimplicial,
    tot: &super::tot2::Tot2<Vec<Obj>, Vec<Mor>, Vec<Mor>>,
    k: &Arc<FinCat>,
    cone: &Reindex,
) -> Result<Functor> {
    let source = ProductLevel::single("K", k.clone());
    cone.validate(&source, &t.levels[0])?;
    let [a0, a1] = &t.cofaces0;
    if !a0.after(cone).same_map(&a1.after(cone), &source) {
        return Err(Error::InvalidFunctor(
            "cone does not equalize the cofaces".into(),
        ));
    }
    let mut obj = Vec::with_capacity(k.num_objects());
    for o in k.objects() {
        let x = cone.apply_obj(&[o]);
        let alpha = t.levels[1].identity(&a0.apply_obj(&x));
        obj.push(
            tot.object_index(&x, &alpha).ok_or_else(|| {
                Error::Invariant("canonical descent datum missing from Tot²".into())
            })?,
        );
    }
    let mut mor = Vec::with_capacity(k.num_morphisms());
    for m in k.morphisms() {
        let h = cone.apply_mor(&[m]);
        mor.push(
            tot.morphism_index(obj[k.src(m)], obj[k.tgt(m)], &h)
                .ok_or_else(|| Error::Invariant("cone morphism missing from Tot²".into()))?,
        );
    }
    Functor::new(k.clone(), tot.cat.clone(), obj, mor)
}
