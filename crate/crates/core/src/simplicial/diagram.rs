//! Finite diagrams of categories, their cosimplicial replacement and homotopy
//! limit.

use std::sync::Arc;

use super::product::{Leg, ProductCosimplicial, ProductLevel, Reindex};
use super::tot2::{tot2, Tot2};
use crate::cat::{same_cat, FinCat, Functor, Mor, Obj};
use crate::error::{Error, Result};
use crate::limits::Limits;

/// A strictly functorial diagram `I → Cat` with finite values.
#[derive(Debug, Clone)]
pub struct FinDiagram {
    pub index: Arc<FinCat>,
    pub values: Vec<Arc<FinCat>>,
    pub transitions: Vec<Functor>,
}

impl FinDiagram {
    pub fn new(
        index: Arc<FinCat>,
        values: Vec<Arc<FinCat>>,
        transitions: Vec<Functor>,
    ) -> Result<FinDiagram> {
        let d = FinDiagram {
            index,
            values,
            transitions,
        };
        d.validate()?;
        Ok(d)
    }

    /// Endpoints, identities and every composable pair.
    pub fn validate(&self) -> Result<()> {
        let i = &self.index;
        if self.values.len() != i.num_objects() || self.transitions.len() != i.num_morphisms() {
            return Err(Error::InvalidDiagram(
                "table sizes do not match the index category".into(),
            ));
        }
        for f in i.morphisms() {
            let t = &self.transitions[f];
            if !same_cat(t.dom(), &self.values[i.src(f)])
                || !same_cat(t.cod(), &self.values[i.tgt(f)])
            {
                return Err(Error::InvalidDiagram(format!(
                    "transition of `{}` has wrong endpoints",
                    i.morphism_name(f)
                )));
            }
            t.validate()?;
        }
        for o in i.objects() {
            if !self.transitions[i.identity(o)].is_identity() {
                return Err(Error::InvalidDiagram(format!(
                    "identity of `{}` is not sent to an identity",
                    i.object_name(o)
                )));
            }
        }
        for f in i.morphisms() {
            for &g in i.morphisms_from(i.tgt(f)) {
                if self.transitions[g].after(&self.transitions[f])
                    != self.transitions[i.compose(g, f)]
                {
                    return Err(Error::InvalidDiagram(format!(
                        "transition of `{} ∘ {}` is not the composite",
                        i.morphism_name(g),
                        i.morphism_name(f)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Level 0 is `∏_i D(i)`, level 1 is `∏_{f: i → j} D(j)`, level 2 is
/// `∏_{(f, g)} D(k)` over composable pairs `i → j → k`. Cofaces:
/// `(d⁰x)_f = x_j`, `(d¹x)_f = D(f)(x_i)`; `(d⁰y)_{(f,g)} = y_g`,
/// `(d¹y)_{(f,g)} = y_{g∘f}`, `(d²y)_{(f,g)} = D(g)(y_f)`; `(s⁰y)_i = y_{id_i}`.
pub fn cosimplicial_replacement(d: &FinDiagram) -> Result<ProductCosimplicial> {
    let i = &d.index;
    let id_leg = |source: usize, value: Obj| Leg {
        source,
        functor: Functor::identity(d.values[value].clone()),
    };
    let level0 = ProductLevel::new(i.object_names().to_vec(), d.values.clone());
    let level1 = ProductLevel::new(
        i.morphism_names().to_vec(),
        i.morphisms().map(|f| d.values[i.tgt(f)].clone()).collect(),
    );
    let chains: Vec<(Mor, Mor)> = i
        .morphisms()
        .flat_map(|f| i.morphisms_from(i.tgt(f)).iter().map(move |&g| (f, g)))
        .collect();
    let level2 = ProductLevel::new(
        chains
            .iter()
            .map(|&(f, g)| format!("({},{})", i.morphism_name(f), i.morphism_name(g)))
            .collect(),
        chains
            .iter()
            .map(|&(_, g)| d.values[i.tgt(g)].clone())
            .collect(),
    );
    let d0 = Reindex {
        legs: i.morphisms().map(|f| id_leg(i.tgt(f), i.tgt(f))).collect(),
    };
    let d1 = Reindex {
        legs: i
            .morphisms()
            .map(|f| Leg {
                source: i.src(f),
                functor: d.transitions[f].clone(),
            })
            .collect(),
    };
    let e0 = Reindex {
        legs: chains.iter().map(|&(_, g)| id_leg(g, i.tgt(g))).collect(),
    };
    let e1 = Reindex {
        legs: chains
            .iter()
            .map(|&(f, g)| id_leg(i.compose(g, f), i.tgt(g)))
            .collect(),
    };
    let e2 = Reindex {
        legs: chains
            .iter()
            .map(|&(f, g)| Leg {
                source: f,
                functor: d.transitions[g].clone(),
            })
            .collect(),
    };
    let s0 = Reindex {
        legs: i.objects().map(|o| id_leg(i.identity(o), o)).collect(),
    };
    ProductCosimplicial::new([level0, level1, level2], [d0, d1], [e0, e1, e2], s0)
}

/// `tot2(cosimplicial_replacement(D))`.
pub fn holim_cat(d: &FinDiagram, limits: &Limits) -> Result<Tot2<Vec<Obj>, Vec<Mor>, Vec<Mor>>> {
    tot2(&Arc::new(cosimplicial_replacement(d)?), limits)
}
