//! The truncated cosimplicial diagram of presheaf categories over the nerve
//! of a groupoid object, and the comparison of its Tot² with descent data.

use std::sync::Arc;

use super::groupoid::{DescentCategory, DescentContext, SheafDescentDatum};
use crate::cat::{Functor, Obj};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::pshgrpd::{PshGrpd, PshGrpdMap};
use crate::simplicial::{tot2, Tot2, TruncCosimplicial};
use crate::sites::{PshMap, PshSet};
use crate::slice::{build_slice_site, induced_slice_functor, SliceSite};

/// `PSh(C/X0) ⇉ PSh(C/X1) ⇛ PSh(C/X2)` with level 0 cut down to presheaves of
/// bounded value size. Cofaces are `d⁰ = r*` and `d¹ = d*` at level 1 and
/// `p2*`, `μ*`, `p1*` at level 2; the codegeneracy is `i*`.
#[derive(Debug, Clone)]
pub struct SheafCosimplicial {
    pub ctx: DescentContext,
    pub level0: Vec<PshSet>,
    pub over_x1: SliceSite,
    /// `d*` and `r*` as functors `C/X1 → C/X0`
    pub along_d: Functor,
    pub along_r: Functor,
}

impl SheafCosimplicial {
    pub fn new(ctx: &DescentContext, bound: usize, limits: &Limits) -> Result<SheafCosimplicial> {
        let g = &ctx.group;
        let c = g.site.cat().clone();
        let x1 = PshGrpd::representable(c.clone(), g.x1);
        let x0 = PshGrpd::representable(c.clone(), g.x0);
        let over_x1 = build_slice_site(&g.site, &x1, limits)?;
        let along = |e: crate::cat::Mor| -> Result<Functor> {
            let components = c
                .objects()
                .map(|y| {
                    let (s, t) = (x1.value(y), x0.value(y));
                    let obj: Vec<Obj> = c
                        .hom(y, g.x1)
                        .iter()
                        .map(|&u| {
                            c.hom(y, g.x0)
                                .iter()
                                .position(|&a| a == c.compose(e, u))
                                .unwrap()
                        })
                        .collect();
                    let mor = s.morphisms().map(|m| t.identity(obj[s.src(m)])).collect();
                    Functor::new(s.clone(), t.clone(), obj, mor)
                })
                .collect::<Result<Vec<_>>>()?;
            let p = PshGrpdMap::new(x1.clone(), x0.clone(), components)?;
            induced_slice_functor(&p, &over_x1, &ctx.base)
        };
        let (along_d, along_r) = (along(g.d)?, along(g.r)?);
        let level0 = PshSet::enumerate_bounded(ctx.base.cat(), bound, limits)?;
        Ok(SheafCosimplicial {
            ctx: ctx.clone(),
            level0,
            over_x1,
            along_d,
            along_r,
        })
    }
}

impl TruncCosimplicial for SheafCosimplicial {
    type X = usize;
    type A = PshMap;
    type H = PshMap;

    fn objects0(&self, _limits: &Limits) -> Result<Vec<usize>> {
        Ok((0..self.level0.len()).collect())
    }

    fn alpha_candidates(&self, x: &usize, limits: &Limits) -> Result<Vec<PshMap>> {
        let f = &self.level0[*x];
        let (rf, df) = (
            f.pull_back_along(&self.along_r)?,
            f.pull_back_along(&self.along_d)?,
        );
        PshMap::isomorphisms(&rf, &df, limits)
    }

    fn hom_candidates(
        &self,
        x: &usize,
        _: &PshMap,
        y: &usize,
        _: &PshMap,
        limits: &Limits,
    ) -> Result<Vec<PshMap>> {
        PshMap::enumerate(&self.level0[*x], &self.level0[*y], limits)
    }

    fn unit_law(&self, _x: &usize, alpha: &PshMap) -> bool {
        let (c, m) = (self.ctx.group.site.cat(), &self.ctx.m);
        c.objects().all(|y| {
            let v = m.value(y);
            v.objects().all(|a| {
                let k = self.ctx.arrow(y, v.identity(a));
                alpha.components[k].iter().enumerate().all(|(i, &e)| i == e)
            })
        })
    }

    fn cocycle_law(&self, _x: &usize, alpha: &PshMap) -> bool {
        // at a composable pair (f, g): p1*α ∘ p2*α = μ*α, i.e. α_f ∘ α_g = α_{g∘f}
        let (c, m) = (self.ctx.group.site.cat(), &self.ctx.m);
        c.objects().all(|y| {
            let v = m.value(y);
            v.morphisms().all(|f| {
                v.morphisms_from(v.tgt(f)).iter().all(|&g| {
                    let a = &alpha.components;
                    let (kf, kg, kgf) = (
                        self.ctx.arrow(y, f),
                        self.ctx.arrow(y, g),
                        self.ctx.arrow(y, v.compose(g, f)),
                    );
                    (0..a[kg].len()).all(|e| a[kf][a[kg][e]] == a[kgf][e])
                })
            })
        })
    }

    fn square_commutes(&self, h: &PshMap, alpha: &PshMap, beta: &PshMap) -> bool {
        // β ∘ r*h = d*h ∘ α
        (0..self.ctx.arrows.len()).all(|k| {
            let (d_end, r_end) = self.ctx.ends(k);
            let (hd, hr) = (&h.components[d_end], &h.components[r_end]);
            (0..hr.len()).all(|e| beta.components[k][hr[e]] == hd[alpha.components[k][e]])
        })
    }

    fn compose0(&self, g: &PshMap, f: &PshMap) -> PshMap {
        g.after(f)
    }

    fn identity0(&self, x: &usize) -> PshMap {
        PshMap::identity(&self.level0[*x])
    }

    fn object_label(&self, x: &usize, alpha: &PshMap) -> String {
        format!("F{x}/{:?}", alpha.components)
    }

    fn morphism_label(&self, h: &PshMap) -> String {
        format!("{:?}", h.components)
    }
}

/// Tot² of the bounded presheaf diagram together with the descent-data
/// category at the same bound and the functor `(F, α) ↦ (F, α⁻¹)` between them.
#[derive(Debug, Clone)]
pub struct HolimCrosscheck {
    pub tot: Tot2<usize, PshMap, PshMap>,
    pub descent: DescentCategory,
    pub comparison: Functor,
}

impl HolimCrosscheck {
    pub fn is_isomorphism(&self) -> bool {
        self.comparison.is_isomorphism()
    }
}

pub fn holim_crosscheck(
    ctx: &DescentContext,
    bound: usize,
    limits: &Limits,
) -> Result<HolimCrosscheck> {
    let diagram = Arc::new(SheafCosimplicial::new(ctx, bound, limits)?);
    let tot = tot2(&diagram, limits)?;
    let data = ctx.enumerate_descent_data(bound, limits)?;
    let descent = ctx.descent_category(&data, limits)?;
    let missing =
        |what: &str| Error::Invariant(format!("{what} has no counterpart among descent data"));
    let obj = tot
        .objects
        .iter()
        .map(|(x, alpha)| {
            let inverse = alpha.inverse();
            let d = SheafDescentDatum {
                f0: diagram.level0[*x].clone(),
                alpha: inverse.components,
            };
            data.iter()
                .position(|e| *e == d)
                .ok_or_else(|| missing("a Tot² object"))
        })
        .collect::<Result<Vec<_>>>()?;
    let tc = &tot.cat;
    let mor = tc
        .morphisms()
        .map(|m| {
            let (i, j) = (obj[tc.src(m)], obj[tc.tgt(m)]);
            descent
                .morphism_index(i, j, &tot.morphisms[m])
                .ok_or_else(|| missing("a Tot² morphism"))
        })
        .collect::<Result<Vec<_>>>()?;
    let comparison = Functor::new(tc.clone(), descent.cat.clone(), obj, mor)?;
    Ok(HolimCrosscheck {
        tot,
        descent,
        comparison,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn tot2_matches_descent_data_on_bg2() {
        let limits = Limits::default();
        let ctx = DescentContext::new(&fixtures::bg2_groupoid(), &limits).unwrap();
        let check = holim_crosscheck(&ctx, 2, &limits).unwrap();
        assert!(check.is_isomorphism());
        assert_eq!(check.tot.cat.num_objects(), 8);
    }

    #[test]
    fn cofaces_agree_on_discrete_groupoid() {
        let limits = Limits::default();
        let site = fixtures::s2();
        let x = site.cat().object_by_name("U").unwrap();
        let g = crate::pshgrpd::GroupoidObject::discrete(site, x, &limits).unwrap();
        let ctx = DescentContext::new(&g, &limits).unwrap();
        let diagram = SheafCosimplicial::new(&ctx, 1, &limits).unwrap();
        assert_eq!(diagram.along_d, diagram.along_r);
        let check = holim_crosscheck(&ctx, 2, &limits).unwrap();
        assert!(check.is_isomorphism());
    }
}
