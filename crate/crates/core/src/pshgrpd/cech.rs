//! Čech groupoid presheaves of covers and Čech cosimplicial groupoids of
//! presheaves of groupoids.

use std::collections::HashMap;
use std::sync::Arc;

use super::{PshGrpd, PshGrpdMap};
use crate::cat::{FinCat, Functor, Mor, Obj};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::simplicial::{
    cone_to_tot2, tot2, Leg, ProductCosimplicial, ProductLevel, Reindex, Tot2,
};
use crate::sites::{CechNerve, Cover, Site};

/// `Y ↦` the groupoid with objects `⊔_i Hom(Y, U_i)` and one morphism
/// `p1∘z → p2∘z` for each `z ∈ Hom(Y, U_i ×_X U_j)`, with its map to the
/// representable of the cover target.
pub fn cech_groupoid_psh(site: &Site, cover: &Cover, limits: &Limits) -> Result<PshGrpdMap> {
    let c = site.cat().clone();
    let nerve = CechNerve::new(site, cover, 2)?;
    let k = cover.legs.len();
    let leg_name = |i: usize| c.morphism_name(cover.legs[i]).to_string();
    // per Y: objects (i, g) and morphisms (i, j, z)
    let mut objs_at: Vec<Vec<(usize, Mor)>> = Vec::new();
    let mut mors_at: Vec<Vec<(usize, usize, Mor)>> = Vec::new();
    let mut values: Vec<Arc<FinCat>> = Vec::new();
    for y in c.objects() {
        let objs: Vec<(usize, Mor)> = (0..k)
            .flat_map(|i| c.hom(y, c.src(cover.legs[i])).iter().map(move |&g| (i, g)))
            .collect();
        let obj_pos: HashMap<(usize, Mor), usize> =
            objs.iter().enumerate().map(|(n, &o)| (o, n)).collect();
        let mut mors = Vec::new();
        let mut mor_pos: HashMap<(usize, usize, Mor, Mor), usize> = HashMap::new();
        let mut names = Vec::new();
        let mut identity = vec![usize::MAX; objs.len()];
        for i in 0..k {
            for j in 0..k {
                let s = nerve.simplex(&[i, j]);
                for &z in c.hom(y, s.apex) {
                    let (a, b) = ((i, c.compose(s.proj[0], z)), (j, c.compose(s.proj[1], z)));
                    let key = (i, j, a.1, b.1);
                    if mor_pos.insert(key, mors.len()).is_some() {
                        return Err(Error::Invariant(
                            "two overlap elements with the same projections".into(),
                        ));
                    }
                    if i == j && a.1 == b.1 {
                        identity[obj_pos[&a]] = mors.len();
                    }
                    names.push((
                        format!("{}|{}|{}", leg_name(i), leg_name(j), c.morphism_name(z)),
                        obj_pos[&a],
                        obj_pos[&b],
                    ));
                    mors.push((i, j, z));
                }
            }
        }
        if identity.contains(&usize::MAX) {
            return Err(Error::Invariant(
                "Čech groupoid is missing an identity".into(),
            ));
        }
        let ends: Vec<(usize, Mor, usize, Mor)> = mors
            .iter()
            .map(|&(i, j, z)| {
                let s = nerve.simplex(&[i, j]);
                (i, c.compose(s.proj[0], z), j, c.compose(s.proj[1], z))
            })
            .collect();
        let missing = std::cell::Cell::new(false);
        let cat = FinCat::from_fn(
            objs.iter()
                .map(|&(i, g)| format!("{}|{}", leg_name(i), c.morphism_name(g)))
                .collect(),
            names,
            identity,
            |g2, f2| {
                let (i, a, _, _) = ends[f2];
                let (_, _, l, b) = ends[g2];
                match mor_pos.get(&(i, l, a, b)) {
                    Some(&m) => m,
                    None => {
                        missing.set(true);
                        0
                    }
                }
            },
        )?;
        if missing.get() {
            return Err(Error::Invariant(
                "Čech groupoid composite has no overlap element".into(),
            ));
        }
        cat.check_axioms(limits)?;
        objs_at.push(objs);
        mors_at.push(mors);
        values.push(Arc::new(cat));
    }
    let obj_index: Vec<HashMap<(usize, Mor), usize>> = objs_at
        .iter()
        .map(|o| o.iter().enumerate().map(|(n, &x)| (x, n)).collect())
        .collect();
    let mor_index: Vec<HashMap<(usize, usize, Mor), usize>> = mors_at
        .iter()
        .map(|o| o.iter().enumerate().map(|(n, &x)| (x, n)).collect())
        .collect();
    let restrict = c
        .morphisms()
        .map(|m| {
            let (y, z) = (c.src(m), c.tgt(m));
            let obj = objs_at[z]
                .iter()
                .map(|&(i, g)| obj_index[y][&(i, c.compose(g, m))])
                .collect();
            let mor = mors_at[z]
                .iter()
                .map(|&(i, j, w)| mor_index[y][&(i, j, c.compose(w, m))])
                .collect();
            Functor::new_unchecked(values[z].clone(), values[y].clone(), obj, mor)
        })
        .collect();
    let cech = PshGrpd::new(c.clone(), values.clone(), restrict)?;
    let target = PshGrpd::representable(c.clone(), cover.target);
    let components = c
        .objects()
        .map(|y| {
            let reps = c.hom(y, cover.target);
            let pos = |m: Mor| {
                reps.iter()
                    .position(|&r| r == m)
                    .expect("composite lies in the hom-set")
            };
            let obj: Vec<Obj> = objs_at[y]
                .iter()
                .map(|&(i, g)| pos(c.compose(cover.legs[i], g)))
                .collect();
            let mor = mors_at[y]
                .iter()
                .map(|&(i, j, w)| {
                    obj[obj_index[y][&(i, c.compose(nerve.simplex(&[i, j]).proj[0], w))]]
                })
                .collect();
            Functor::new_unchecked(values[y].clone(), target.value(y).clone(), obj, mor)
        })
        .collect();
    PshGrpdMap::new(cech, target, components)
}

fn tuples(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..k).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Level `n` is `∏ F(U_{i0..in})` over ordered tuples; cofaces and the
/// codegeneracy are `F` applied to the Čech faces and degeneracy.
pub fn cech_cosimplicial(f: &PshGrpd, site: &Site, cover: &Cover) -> Result<ProductCosimplicial> {
    let c = site.cat();
    let nerve = CechNerve::new(site, cover, 2)?;
    let k = cover.legs.len();
    let level = |len: usize| {
        let ts = tuples(k, len);
        let labels = ts
            .iter()
            .map(|t| {
                t.iter()
                    .map(|&i| c.morphism_name(cover.legs[i]))
                    .collect::<Vec<_>>()
                    .join("×")
            })
            .collect();
        let factors = ts
            .iter()
            .map(|t| f.value(nerve.simplex(t).apex).clone())
            .collect();
        ProductLevel::new(labels, factors)
    };
    let faces = |len: usize, face: usize| -> Result<Reindex> {
        let mut legs = Vec::new();
        for t in tuples(k, len) {
            let m = nerve.face(site, &t, face)?;
            let mut src = t.clone();
            src.remove(face);
            legs.push(Leg {
                source: nerve.position(&src),
                functor: f.restriction(m).clone(),
            });
        }
        Ok(Reindex { legs })
    };
    let mut s0 = Vec::new();
    for i in 0..k {
        let m = nerve.degeneracy(site, &[i], 0)?;
        s0.push(Leg {
            source: nerve.position(&[i, i]),
            functor: f.restriction(m).clone(),
        });
    }
    ProductCosimplicial::new(
        [level(1), level(2), level(3)],
        [faces(2, 0)?, faces(2, 1)?],
        [faces(3, 0)?, faces(3, 1)?, faces(3, 2)?],
        Reindex { legs: s0 },
    )
}

/// Tot² of the Čech cosimplicial groupoid with the canonical functor from `F(X)`.
#[derive(Debug, Clone)]
pub struct CechTot2 {
    pub cosimplicial: Arc<ProductCosimplicial>,
    pub tot: Tot2<Vec<Obj>, Vec<Mor>, Vec<Mor>>,
    pub comparison: Functor,
}

pub fn cech_tot2(f: &PshGrpd, site: &Site, cover: &Cover, limits: &Limits) -> Result<CechTot2> {
    let cosimplicial = Arc::new(cech_cosimplicial(f, site, cover)?);
    let tot = tot2(&cosimplicial, limits)?;
    let legs = Reindex {
        legs: cover
            .legs
            .iter()
            .map(|&u| Leg {
                source: 0,
                functor: f.restriction(u).clone(),
            })
            .collect(),
    };
    let comparison = cone_to_tot2(&cosimplicial, &tot, f.value(cover.target), &legs)?;
    Ok(CechTot2 {
        cosimplicial,
        tot,
        comparison,
    })
}
