//! The sheaf condition on basis covers and sheafification by the plus
//! construction.

use std::collections::HashMap;

use petgraph::unionfind::UnionFind;

use super::psh::{PshMap, PshSet};
use super::{Cover, Site};
use crate::cat::{same_cat, Mor, Obj};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::search::backtrack;

/// Families `(s_i ∈ F(U_i))` with `p1*(s_i) = p2*(s_j)` on every chosen
/// `U_i ×_X U_j`, in lexicographic order.
pub fn matching_families(
    f: &PshSet,
    site: &Site,
    cover: &Cover,
    limits: &Limits,
) -> Result<Vec<Vec<usize>>> {
    let c = site.cat();
    let k = cover.legs.len();
    let mut overlaps = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            overlaps.push((i, j, site.pullback(cover.legs[i], cover.legs[j])?));
        }
    }
    let mut checks: Vec<Vec<(usize, usize, Mor, Mor)>> = vec![Vec::new(); k];
    for &(i, j, cone) in &overlaps {
        checks[i.max(j)].push((i, j, cone.p1, cone.p2));
    }
    let domains: Vec<Vec<usize>> = cover
        .legs
        .iter()
        .map(|&u| (0..f.size(c.src(u))).collect())
        .collect();
    backtrack(&domains, &mut limits.budget(), |n, s| {
        checks[n]
            .iter()
            .all(|&(i, j, p1, p2)| f.restrict(p1, s[i]) == f.restrict(p2, s[j]))
    })
}

/// Why a presheaf fails the sheaf condition on a cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SheafFailure {
    /// Two sections with the same restrictions.
    NotSeparated {
        cover: Cover,
        sections: (usize, usize),
    },
    /// A matching family that does not glue.
    NotGluing { cover: Cover, family: Vec<usize> },
}

impl SheafFailure {
    pub fn describe(&self, f: &PshSet) -> String {
        let c = f.cat();
        match self {
            SheafFailure::NotSeparated {
                cover,
                sections: (a, b),
            } => format!(
                "sections `{}` and `{}` agree on the cover {}",
                f.label(cover.target, *a),
                f.label(cover.target, *b),
                cover.describe(c)
            ),
            SheafFailure::NotGluing { cover, family } => {
                let parts: Vec<&str> = family
                    .iter()
                    .zip(&cover.legs)
                    .map(|(&s, &u)| f.label(c.src(u), s))
                    .collect();
                format!(
                    "matching family ({}) on {} does not glue",
                    parts.join(", "),
                    cover.describe(c)
                )
            }
        }
    }
}

/// The first basis cover on which `F(X) → eq(∏F(U_i) ⇉ ∏F(U_i ×_X U_j))` is
/// not a bijection.
pub fn sheaf_failure(f: &PshSet, site: &Site, limits: &Limits) -> Result<Option<SheafFailure>> {
    if !same_cat(f.cat(), site.cat()) {
        return Err(Error::InvalidPresheaf(
            "presheaf does not live on the site".into(),
        ));
    }
    for cover in site.basis() {
        let families = matching_families(f, site, cover, limits)?;
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        for x in 0..f.size(cover.target) {
            let fam: Vec<usize> = cover.legs.iter().map(|&u| f.restrict(u, x)).collect();
            if let Some(&y) = seen.get(&fam) {
                return Ok(Some(SheafFailure::NotSeparated {
                    cover: cover.clone(),
                    sections: (y, x),
                }));
            }
            seen.insert(fam, x);
        }
        if let Some(fam) = families.into_iter().find(|fam| !seen.contains_key(fam)) {
            return Ok(Some(SheafFailure::NotGluing {
                cover: cover.clone(),
                family: fam,
            }));
        }
    }
    Ok(None)
}

pub fn is_sheaf(f: &PshSet, site: &Site, limits: &Limits) -> Result<bool> {
    Ok(sheaf_failure(f, site, limits)?.is_none())
}

/// A sheaf together with the unit `F → sheaf`.
#[derive(Debug, Clone)]
pub struct Sheafification {
    pub sheaf: PshSet,
    pub unit: PshMap,
}

/// Two rounds of the plus construction.
pub fn sheafify(f: &PshSet, site: &Site, limits: &Limits) -> Result<Sheafification> {
    let (once, u1) = plus(f, site, limits)?;
    let (twice, u2) = plus(&once, site, limits)?;
    let sheaf = twice;
    let unit = u2.after(&u1);
    unit.validate(f, &sheaf)?;
    Ok(Sheafification { sheaf, unit })
}

struct PlusAt {
    covers: Vec<Cover>,
    families: Vec<Vec<Vec<usize>>>,
    node: HashMap<(usize, Vec<usize>), usize>,
    class: Vec<usize>,
    /// first node of each class as (cover, family)
    reps: Vec<(usize, usize)>,
}

/// Restriction of a matching family on `legs` along `w`, through the first
/// leg that `w` factors through.
fn restrict_family(
    f: &PshSet,
    site: &Site,
    legs: &[Mor],
    family: &[usize],
    w: Mor,
) -> Option<usize> {
    legs.iter()
        .enumerate()
        .find_map(|(i, &u)| site.factor_through(w, u).map(|m| f.restrict(m, family[i])))
}

fn plus(f: &PshSet, site: &Site, limits: &Limits) -> Result<(PshSet, PshMap)> {
    let c = site.cat();
    let mut at: Vec<PlusAt> = Vec::with_capacity(c.num_objects());
    for x in c.objects() {
        let covers = site.covers_with_identity(x);
        let families: Vec<Vec<Vec<usize>>> = covers
            .iter()
            .map(|k| matching_families(f, site, k, limits))
            .collect::<Result<_>>()?;
        let mut node = HashMap::new();
        let mut nodes = Vec::new();
        for (a, fams) in families.iter().enumerate() {
            for (i, fam) in fams.iter().enumerate() {
                node.insert((a, fam.clone()), nodes.len());
                nodes.push((a, i));
            }
        }
        let mut uf = UnionFind::new(nodes.len());
        for a in 0..covers.len() {
            for b in 0..covers.len() {
                if a == b || !site.refines(&covers[b], &covers[a].legs) {
                    continue;
                }
                for fam in &families[a] {
                    let restricted: Vec<usize> = covers[b]
                        .legs
                        .iter()
                        .map(|&w| {
                            restrict_family(f, site, &covers[a].legs, fam, w)
                                .expect("refinement factors")
                        })
                        .collect();
                    let target = node.get(&(b, restricted)).ok_or_else(|| {
                        Error::Invariant("restricted matching family does not match".into())
                    })?;
                    uf.union(node[&(a, fam.clone())], *target);
                }
            }
        }
        let mut class = vec![usize::MAX; nodes.len()];
        let mut root_class: HashMap<usize, usize> = HashMap::new();
        let mut reps = Vec::new();
        for n in 0..nodes.len() {
            let r = uf.find(n);
            let next = root_class.len();
            let id = *root_class.entry(r).or_insert_with(|| {
                reps.push(nodes[n]);
                next
            });
            class[n] = id;
        }
        at.push(PlusAt {
            covers,
            families,
            node,
            class,
            reps,
        });
    }
    let sizes: Vec<usize> = at.iter().map(|p| p.reps.len()).collect();
    let mut restrict = Vec::with_capacity(c.num_morphisms());
    for h in c.morphisms() {
        let (y, x) = (c.src(h), c.tgt(h));
        let (px, py) = (&at[x], &at[y]);
        let mut table = Vec::with_capacity(px.reps.len());
        for &(a, i) in &px.reps {
            let legs = &px.covers[a].legs;
            let fam = &px.families[a][i];
            let mut image = None;
            for (b, k) in py.covers.iter().enumerate() {
                let restricted: Option<Vec<usize>> = k
                    .legs
                    .iter()
                    .map(|&w| restrict_family(f, site, legs, fam, c.compose(h, w)))
                    .collect();
                if let Some(t) = restricted {
                    let n = py.node.get(&(b, t)).ok_or_else(|| {
                        Error::Invariant("restricted matching family does not match".into())
                    })?;
                    image = Some(py.class[*n]);
                    break;
                }
            }
            table.push(image.ok_or_else(|| {
                Error::Invariant(format!(
                    "no basis cover of `{}` refines the pullback of a cover of `{}`",
                    c.object_name(y),
                    c.object_name(x)
                ))
            })?);
        }
        restrict.push(table);
    }
    let result = PshSet::from_tables(c.clone(), &sizes, restrict)?;
    let unit = PshMap {
        components: c
            .objects()
            .map(|x: Obj| {
                (0..f.size(x))
                    .map(|e| at[x].class[at[x].node[&(0, vec![e])]])
                    .collect()
            })
            .collect(),
    };
    Ok((result, unit))
}
