//! Descent data for a groupoid object `X1 ⇉ X0` and the comparison with
//! presheaves on the slice site of the represented presheaf of groupoids.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cat::{FinCat, Functor, Mor, Obj};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::pshgrpd::{representable_groupoid_psh, GroupoidObject, PshGrpd, PshGrpdMap};
use crate::search::backtrack;
use crate::sites::{PshMap, PshSet};
use crate::slice::{build_slice_site, induced_slice_functor, SliceSite};

/// The slice sites over `X0` and over `M = Hom(−, X1) ⇉ Hom(−, X0)`, sharing
/// their objects `(Y, a: Y → X0)`, and the objects `(Y, u: Y → X1)` of the
/// slice over `X1`. Arrows `u` are stored as morphisms of the groupoid `M(Y)`.
#[derive(Debug, Clone)]
pub struct DescentContext {
    pub group: GroupoidObject,
    pub m: PshGrpd,
    pub total: SliceSite,
    pub base: SliceSite,
    /// `C/X0 → C/M`, the identity on objects
    pub atlas: Functor,
    pub arrows: Vec<(Obj, Mor)>,
    arrow_index: HashMap<(Obj, Mor), usize>,
}

/// `F0` on the slice over `X0` and, for every `(Y, u)` over `X1`, a bijection
/// `α_u: F0(Y, d∘u) → F0(Y, r∘u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheafDescentDatum {
    pub f0: PshSet,
    pub alpha: Vec<Vec<usize>>,
}

fn law(law: &str, witness: String) -> Error {
    Error::DescentLaw {
        law: law.into(),
        witness,
    }
}

fn is_bijection(table: &[usize], n: usize) -> bool {
    if table.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    table
        .iter()
        .all(|&e| e < n && !std::mem::replace(&mut seen[e], true))
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for k in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for pos in 0..=k {
                let mut q = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        out = next;
    }
    out.sort();
    out
}

fn invert(table: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; table.len()];
    for (i, &e) in table.iter().enumerate() {
        inv[e] = i;
    }
    inv
}

impl DescentContext {
    pub fn new(group: &GroupoidObject, limits: &Limits) -> Result<DescentContext> {
        let c = group.site.cat().clone();
        let m = representable_groupoid_psh(group)?;
        let total = build_slice_site(&group.site, &m, limits)?;
        let x0 = PshGrpd::representable(c.clone(), group.x0);
        let base = build_slice_site(&group.site, &x0, limits)?;
        // X0 → M: objects are the same positions in Hom(Y, X0)
        let components = c
            .objects()
            .map(|y| {
                let (d, v) = (x0.value(y), m.value(y));
                let obj: Vec<Obj> = d.objects().collect();
                let mor = d.morphisms().map(|e| v.identity(d.src(e))).collect();
                Functor::new(d.clone(), v.clone(), obj, mor)
            })
            .collect::<Result<Vec<_>>>()?;
        let inclusion = PshGrpdMap::new(x0, m.clone(), components)?;
        let atlas = induced_slice_functor(&inclusion, &base, &total)?;
        let arrows: Vec<(Obj, Mor)> = c
            .objects()
            .flat_map(|y| m.value(y).morphisms().map(move |u| (y, u)))
            .collect();
        let arrow_index = arrows.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        Ok(DescentContext {
            group: group.clone(),
            m,
            total,
            base,
            atlas,
            arrows,
            arrow_index,
        })
    }

    pub fn arrow(&self, y: Obj, u: Mor) -> usize {
        self.arrow_index[&(y, u)]
    }

    /// The slice objects `(Y, d∘u)` and `(Y, r∘u)`.
    pub fn ends(&self, k: usize) -> (Obj, Obj) {
        let (y, u) = self.arrows[k];
        let v = self.m.value(y);
        (
            self.base.object(y, v.src(u)).unwrap(),
            self.base.object(y, v.tgt(u)).unwrap(),
        )
    }

    /// `F0(h)` for `h: Y → Y'` over `a': Y' → X0`, as a table
    /// `F0(Y', a') → F0(Y, a'∘h)`.
    fn base_restriction<'a>(&self, f0: &'a PshSet, h: Mor, a2: Obj) -> &'a [usize] {
        let y = self.group.site.cat().src(h);
        let a = self.m.restriction(h).obj(a2);
        let arrow = self
            .base
            .morphism(h, a2, self.base.m.value(y).identity(a))
            .unwrap();
        f0.restriction(arrow)
    }

    pub fn validate_descent_datum(
        &self,
        f0: PshSet,
        alpha: Vec<Vec<usize>>,
    ) -> Result<SheafDescentDatum> {
        let c = self.group.site.cat();
        if !crate::cat::same_cat(f0.cat(), self.base.cat()) {
            return Err(Error::InvalidPresheaf(
                "F0 does not live on the slice over X0".into(),
            ));
        }
        f0.validate()?;
        if alpha.len() != self.arrows.len() {
            return Err(law(
                "bijectivity",
                format!(
                    "{} components for {} arrows",
                    alpha.len(),
                    self.arrows.len()
                ),
            ));
        }
        let name = |k: usize| {
            let (y, u) = self.arrows[k];
            format!(
                "({}, {})",
                c.object_name(y),
                self.m.value(y).morphism_name(u)
            )
        };
        for (k, a) in alpha.iter().enumerate() {
            let (s, t) = self.ends(k);
            if f0.size(s) != f0.size(t) || !is_bijection(a, f0.size(s)) {
                return Err(law(
                    "bijectivity",
                    format!("component at {} is not a bijection", name(k)),
                ));
            }
        }
        for y in c.objects() {
            let v = self.m.value(y);
            for a in v.objects() {
                let k = self.arrow(y, v.identity(a));
                if alpha[k].iter().enumerate().any(|(i, &e)| i != e) {
                    return Err(law(
                        "unit",
                        format!(
                            "component at the identity arrow {} is not the identity",
                            name(k)
                        ),
                    ));
                }
            }
            for f in v.morphisms() {
                for &g in v.morphisms_from(v.tgt(f)) {
                    let (kf, kg, kgf) = (
                        self.arrow(y, f),
                        self.arrow(y, g),
                        self.arrow(y, v.compose(g, f)),
                    );
                    if (0..alpha[kf].len()).any(|e| alpha[kg][alpha[kf][e]] != alpha[kgf][e]) {
                        return Err(law(
                            "cocycle",
                            format!(
                                "pair ({}, {}) with composite {}",
                                name(kf),
                                name(kg),
                                name(kgf)
                            ),
                        ));
                    }
                }
            }
        }
        // naturality in h: Y → Y' over X1
        for h in c.morphisms() {
            let (y, y2) = (c.src(h), c.tgt(h));
            let (v2, mh) = (self.m.value(y2), self.m.restriction(h));
            for u2 in v2.morphisms() {
                let (k2, k) = (self.arrow(y2, u2), self.arrow(y, mh.mor(u2)));
                let fd = self.base_restriction(&f0, h, v2.src(u2));
                let fr = self.base_restriction(&f0, h, v2.tgt(u2));
                if (0..fd.len()).any(|e| alpha[k][fd[e]] != fr[alpha[k2][e]]) {
                    return Err(law(
                        "naturality",
                        format!(
                            "{} and {} along `{}`",
                            name(k2),
                            name(k),
                            c.morphism_name(h)
                        ),
                    ));
                }
            }
        }
        Ok(SheafDescentDatum { f0, alpha })
    }

    /// `F0 = F` along the atlas; `α_u = F((id, u⁻¹))`.
    pub fn sheaf_to_descent(&self, f: &PshSet) -> Result<SheafDescentDatum> {
        let c = self.group.site.cat();
        let f0 = f.pull_back_along(&self.atlas)?;
        let alpha = self
            .arrows
            .iter()
            .map(|&(y, u)| {
                let v = self.m.value(y);
                let inv = v.inverse(u).expect("groupoid");
                let arrow = self
                    .total
                    .morphism(c.identity(y), v.src(u), inv)
                    .expect("tautological morphism");
                f.restriction(arrow).to_vec()
            })
            .collect();
        self.validate_descent_datum(f0, alpha)
    }

    /// Values of `F0`; a morphism `(h, β)` acts by `α_β⁻¹ ∘ F0(h)`. Functoriality
    /// is checked, not assumed.
    pub fn descent_to_sheaf(&self, d: &SheafDescentDatum) -> Result<PshSet> {
        let sc = self.total.cat();
        let restrict = self
            .total
            .morphisms
            .iter()
            .map(|&(h, a2, beta)| {
                let y = self.group.site.cat().src(h);
                let inv = invert(&d.alpha[self.arrow(y, beta)]);
                self.base_restriction(&d.f0, h, a2)
                    .iter()
                    .map(|&e| inv[e])
                    .collect()
            })
            .collect();
        let labels = sc.objects().map(|o| d.f0.labels(o).to_vec()).collect();
        PshSet::new(sc.clone(), labels, restrict)
    }

    /// Natural maps `F0 → F0'` commuting with the gluing isomorphisms.
    pub fn is_descent_morphism(
        &self,
        d: &SheafDescentDatum,
        e: &SheafDescentDatum,
        phi: &PshMap,
    ) -> bool {
        if phi.validate(&d.f0, &e.f0).is_err() {
            return false;
        }
        (0..self.arrows.len()).all(|k| {
            let (s, t) = self.ends(k);
            (0..d.f0.size(s))
                .all(|x| e.alpha[k][phi.components[s][x]] == phi.components[t][d.alpha[k][x]])
        })
    }

    pub fn descent_homs(
        &self,
        d: &SheafDescentDatum,
        e: &SheafDescentDatum,
        limits: &Limits,
    ) -> Result<Vec<PshMap>> {
        Ok(PshMap::enumerate(&d.f0, &e.f0, limits)?
            .into_iter()
            .filter(|phi| self.is_descent_morphism(d, e, phi))
            .collect())
    }

    /// All gluing data on `f0`, by backtracking over components with each law
    /// checked once its arrows are assigned.
    pub fn gluing_data(&self, f0: &PshSet, limits: &Limits) -> Result<Vec<Vec<Vec<usize>>>> {
        let c = self.group.site.cat();
        let n = self.arrows.len();
        let domains: Vec<Vec<Vec<usize>>> = (0..n)
            .map(|k| {
                let (s, t) = self.ends(k);
                if f0.size(s) == f0.size(t) {
                    permutations(f0.size(s))
                } else {
                    Vec::new()
                }
            })
            .collect();
        // constraints keyed by the largest arrow they mention
        let mut units = vec![false; n];
        let mut natural: Vec<Vec<(usize, Vec<usize>, Vec<usize>, usize)>> = vec![Vec::new(); n];
        let mut cocycles: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n];
        for h in c.morphisms() {
            let (y, y2) = (c.src(h), c.tgt(h));
            let (v2, mh) = (self.m.value(y2), self.m.restriction(h));
            for u2 in v2.morphisms() {
                let (k2, k) = (self.arrow(y2, u2), self.arrow(y, mh.mor(u2)));
                let fd = self.base_restriction(f0, h, v2.src(u2)).to_vec();
                let fr = self.base_restriction(f0, h, v2.tgt(u2)).to_vec();
                natural[k.max(k2)].push((k2, fd, fr, k));
            }
        }
        for y in c.objects() {
            let v = self.m.value(y);
            for a in v.objects() {
                units[self.arrow(y, v.identity(a))] = true;
            }
            for f in v.morphisms() {
                for &g in v.morphisms_from(v.tgt(f)) {
                    let t = (
                        self.arrow(y, f),
                        self.arrow(y, g),
                        self.arrow(y, v.compose(g, f)),
                    );
                    cocycles[t.0.max(t.1).max(t.2)].push(t);
                }
            }
        }
        let mut budget = limits.budget();
        backtrack(&domains, &mut budget, |k, a: &[Vec<usize>]| {
            (!units[k] || a[k].iter().enumerate().all(|(i, &e)| i == e))
                && natural[k]
                    .iter()
                    .all(|(k2, fd, fr, k1)| (0..fd.len()).all(|e| a[*k1][fd[e]] == fr[a[*k2][e]]))
                && cocycles[k]
                    .iter()
                    .all(|&(kf, kg, kgf)| (0..a[kf].len()).all(|e| a[kg][a[kf][e]] == a[kgf][e]))
        })
    }

    /// Every descent datum whose `F0` has values of size at most `bound`.
    pub fn enumerate_descent_data(
        &self,
        bound: usize,
        limits: &Limits,
    ) -> Result<Vec<SheafDescentDatum>> {
        let mut out = Vec::new();
        for f0 in PshSet::enumerate_bounded(self.base.cat(), bound, limits)? {
            for alpha in self.gluing_data(&f0, limits)? {
                out.push(SheafDescentDatum {
                    f0: f0.clone(),
                    alpha,
                });
            }
        }
        Ok(out)
    }

    /// The category of the given descent data and all descent morphisms.
    pub fn descent_category(
        &self,
        data: &[SheafDescentDatum],
        limits: &Limits,
    ) -> Result<DescentCategory> {
        let mut morphisms = Vec::new();
        let mut names = Vec::new();
        let mut identity = vec![0; data.len()];
        let mut index = HashMap::new();
        for (i, d) in data.iter().enumerate() {
            for (j, e) in data.iter().enumerate() {
                for phi in self.descent_homs(d, e, limits)? {
                    if i == j && phi == PshMap::identity(&d.f0) {
                        identity[i] = morphisms.len();
                    }
                    index.insert((i, j, phi.clone()), morphisms.len());
                    names.push((format!("φ{}:{i}->{j}", morphisms.len()), i, j));
                    morphisms.push((i, j, phi));
                }
            }
        }
        let index = Arc::new(index);
        let rule_data = (Arc::new(morphisms.clone()), index.clone());
        let rule = move |g: Mor, f: Mor| {
            let (mors, index) = &rule_data;
            let (i, _, pf) = &mors[f];
            let (_, k, pg) = &mors[g];
            index[&(*i, *k, pg.after(pf))]
        };
        let objects = (0..data.len()).map(|i| format!("D{i}")).collect();
        let cat = FinCat::from_rule(objects, names, identity, Arc::new(rule))?;
        Ok(DescentCategory {
            cat: Arc::new(cat),
            objects: data.to_vec(),
            morphisms,
            index,
        })
    }
}

#[derive(Debug, Clone)]
pub struct DescentCategory {
    pub cat: Arc<FinCat>,
    pub objects: Vec<SheafDescentDatum>,
    /// `(source, target, φ)`
    pub morphisms: Vec<(usize, usize, PshMap)>,
    index: Arc<HashMap<(usize, usize, PshMap), Mor>>,
}

impl DescentCategory {
    pub fn morphism_index(&self, src: usize, tgt: usize, phi: &PshMap) -> Option<Mor> {
        self.index.get(&(src, tgt, phi.clone())).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::function_images;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bg2() -> DescentContext {
        DescentContext::new(&fixtures::bg2_groupoid(), &Limits::default()).unwrap()
    }

    /// `F0 = Hom(−, G)` with `α_u(s) = s + u` pointwise.
    fn swap_datum(ctx: &DescentContext) -> SheafDescentDatum {
        let c = ctx.group.site.cat();
        let g = ctx.base.object(ctx.group.x1, 0).unwrap();
        let f0 = PshSet::representable(ctx.base.cat().clone(), g);
        let alpha = ctx
            .arrows
            .iter()
            .map(|&(y, u)| {
                let o = ctx.base.object(y, 0).unwrap();
                let uu = function_images(c.morphism_name(c.hom(y, ctx.group.x1)[u])).unwrap();
                let elems: Vec<Vec<usize>> = ctx
                    .base
                    .cat()
                    .hom(o, g)
                    .iter()
                    .map(|&m| function_images(c.morphism_name(ctx.base.morphisms[m].0)).unwrap())
                    .collect();
                elems
                    .iter()
                    .map(|s| {
                        let t: Vec<usize> = s.iter().zip(&uu).map(|(a, b)| a ^ b).collect();
                        elems.iter().position(|e| *e == t).unwrap()
                    })
                    .collect()
            })
            .collect();
        ctx.validate_descent_datum(f0, alpha).unwrap()
    }

    #[test]
    fn permutations_are_all_bijections() {
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(permutations(3).len(), 6);
        assert!(permutations(3).iter().all(|p| is_bijection(p, 3)));
    }

    #[test]
    fn trivial_groupoid_accepts_identity_gluing() {
        let site = fixtures::s2();
        let x = site.cat().object_by_name("X").unwrap();
        let g = GroupoidObject::discrete(site, x, &Limits::default()).unwrap();
        let ctx = DescentContext::new(&g, &Limits::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f0 = PshSet::random_bounded(ctx.base.cat(), 3, &mut rng, &Limits::default()).unwrap();
        let alpha = (0..ctx.arrows.len())
            .map(|k| (0..f0.size(ctx.ends(k).0)).collect())
            .collect();
        let d = ctx.validate_descent_datum(f0, alpha).unwrap();
        let f = ctx.descent_to_sheaf(&d).unwrap();
        assert_eq!(ctx.sheaf_to_descent(&f).unwrap(), d);
    }

    #[test]
    fn swap_datum_round_trips() {
        let ctx = bg2();
        let d = swap_datum(&ctx);
        let f = ctx.descent_to_sheaf(&d).unwrap();
        assert_eq!(ctx.sheaf_to_descent(&f).unwrap(), d);
        // the tautological morphism over the non-identity point swaps F(*)
        let c = ctx.group.site.cat();
        let star = ctx.group.x0;
        let v = ctx.m.value(star);
        let flip = v.morphisms().find(|&u| !v.is_identity(u)).unwrap();
        let arrow = ctx
            .total
            .morphism(c.identity(star), 0, v.inverse(flip).unwrap())
            .unwrap();
        assert_eq!(f.restriction(arrow), &[1, 0]);
        assert_eq!(
            ctx.descent_to_sheaf(&ctx.sheaf_to_descent(&f).unwrap())
                .unwrap(),
            f
        );
    }

    #[test]
    fn cocycle_violation_is_reported() {
        let ctx = bg2();
        let sizes = vec![3; ctx.base.cat().num_objects()];
        let f0 = PshSet::from_fn(ctx.base.cat().clone(), &sizes, |_, e| e).unwrap();
        let star = ctx.group.x0;
        let v = ctx.m.value(star);
        let flip = v.morphisms().find(|&u| !v.is_identity(u)).unwrap();
        let k = ctx.arrow(star, flip);
        let alpha = (0..ctx.arrows.len())
            .map(|j| if j == k { vec![1, 2, 0] } else { vec![0, 1, 2] })
            .collect();
        match ctx.validate_descent_datum(f0, alpha) {
            Err(Error::DescentLaw { law, .. }) => assert_eq!(law, "cocycle"),
            other => panic!("expected a cocycle failure, got {other:?}"),
        }
    }

    #[test]
    fn unit_violation_is_rejected_by_descent_to_sheaf() {
        let ctx = bg2();
        let mut d = swap_datum(&ctx);
        let star = ctx.group.x0;
        let k = ctx.arrow(star, ctx.m.value(star).identity(0));
        d.alpha[k] = vec![1, 0];
        assert!(ctx.descent_to_sheaf(&d).is_err());
        assert!(matches!(
            ctx.validate_descent_datum(d.f0.clone(), d.alpha.clone()),
            Err(Error::DescentLaw { .. })
        ));
    }

    #[test]
    fn comparison_is_an_equivalence_at_bound_two() {
        let ctx = bg2();
        let limits = Limits::default();
        let sheaves = PshSet::enumerate_bounded(ctx.total.cat(), 2, &limits).unwrap();
        let data = ctx.enumerate_descent_data(2, &limits).unwrap();
        assert_eq!(sheaves.len(), data.len());
        for f in &sheaves {
            let d = ctx.sheaf_to_descent(f).unwrap();
            assert!(data.contains(&d));
            assert_eq!(&ctx.descent_to_sheaf(&d).unwrap(), f);
        }
        for d in &data {
            for e in &data {
                let (fd, fe) = (
                    ctx.descent_to_sheaf(d).unwrap(),
                    ctx.descent_to_sheaf(e).unwrap(),
                );
                for phi in ctx.descent_homs(d, e, &limits).unwrap() {
                    phi.validate(&fd, &fe).unwrap();
                }
            }
        }
    }
}
