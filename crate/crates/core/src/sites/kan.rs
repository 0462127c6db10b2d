//! Left Kan extension of set-valued presheaves along a functor.

use std::collections::HashMap;

use petgraph::unionfind::UnionFind;

use super::psh::PshSet;
use crate::cat::{same_cat, Functor, Mor, Obj};
use crate::error::{Error, Result};
use crate::limits::Limits;

/// `(Lan_p F)(d) = colim F(c)` over pairs `(c, u: d → p(c))`: the disjoint union
/// of the `F(c)` modulo `(c', p(k)∘u, x') ~ (c, u, F(k)(x'))` for `k: c → c'`.
/// Restriction along `g: d' → d` sends `(c, u, x)` to `(c, u∘g, x)`.
pub fn left_kan_extension(p: &Functor, f: &PshSet, limits: &Limits) -> Result<PshSet> {
    if !same_cat(p.dom(), f.cat()) {
        return Err(Error::InvalidPresheaf(
            "presheaf does not live on the functor's domain".into(),
        ));
    }
    let (cc, dc) = (p.dom(), p.cod());
    let mut nodes_at: Vec<Vec<(Obj, Mor, usize)>> = Vec::with_capacity(dc.num_objects());
    let mut index_at: Vec<HashMap<(Obj, Mor, usize), usize>> = Vec::with_capacity(dc.num_objects());
    let mut class_at: Vec<Vec<usize>> = Vec::with_capacity(dc.num_objects());
    let mut reps_at: Vec<Vec<usize>> = Vec::with_capacity(dc.num_objects());
    let mut budget = limits.budget();
    for d in dc.objects() {
        let mut nodes = Vec::new();
        let mut index = HashMap::new();
        for c in cc.objects() {
            for &u in dc.hom(d, p.obj(c)) {
                for x in 0..f.size(c) {
                    index.insert((c, u, x), nodes.len());
                    nodes.push((c, u, x));
                }
            }
        }
        budget.spend(nodes.len() as u64)?;
        let mut uf = UnionFind::new(nodes.len());
        for &k in &cc.generators().gens {
            let (c, c2) = (cc.src(k), cc.tgt(k));
            for &u in dc.hom(d, p.obj(c)) {
                let pku = dc.compose(p.mor(k), u);
                budget.spend(f.size(c2) as u64)?;
                for x2 in 0..f.size(c2) {
                    uf.union(index[&(c2, pku, x2)], index[&(c, u, f.restrict(k, x2))]);
                }
            }
        }
        let mut class = vec![0; nodes.len()];
        let mut root_class = HashMap::new();
        let mut reps = Vec::new();
        for n in 0..nodes.len() {
            let next = root_class.len();
            class[n] = *root_class.entry(uf.find(n)).or_insert_with(|| {
                reps.push(n);
                next
            });
        }
        nodes_at.push(nodes);
        index_at.push(index);
        class_at.push(class);
        reps_at.push(reps);
    }
    let labels: Vec<Vec<String>> = dc
        .objects()
        .map(|d| {
            reps_at[d]
                .iter()
                .map(|&n| {
                    let (c, u, x) = nodes_at[d][n];
                    format!(
                        "[{},{},{}]",
                        cc.object_name(c),
                        dc.morphism_name(u),
                        f.label(c, x)
                    )
                })
                .collect()
        })
        .collect();
    let restrict = dc
        .morphisms()
        .map(|g| {
            let (d2, d) = (dc.src(g), dc.tgt(g));
            reps_at[d]
                .iter()
                .map(|&n| {
                    let (c, u, x) = nodes_at[d][n];
                    class_at[d2][index_at[d2][&(c, dc.compose(u, g), x)]]
                })
                .collect()
        })
        .collect();
    PshSet::new(dc.clone(), labels, restrict)
}
