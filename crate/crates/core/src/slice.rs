//! The Grothendieck construction `C/M` of a presheaf of groupoids with its
//! induced topology, the functors `B` and `Γ`, and change of base along maps
//! of presheaves of groupoids.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::cat::{has_discrete_fibers, is_fibration, FinCat, Functor, Mor, Obj, PullbackCone};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::pshgrpd::{PshGrpd, PshGrpdMap};
use crate::sites::{left_kan_extension, sheafify, Cover, PshMap, PshSet, Site};

/// `C/M`: objects `(X, a)` with `a ∈ M(X)`; morphisms `(h, α): (X, a) → (X', a')`
/// with `h: X → X'` and `α: a → M(h)(a')` an isomorphism in `M(X)`; composite
/// `(h', α') ∘ (h, α) = (h' ∘ h, M(h)(α') ∘ α)`.
#[derive(Debug, Clone)]
pub struct SliceSite {
    pub site: Site,
    pub ambient: Site,
    pub m: Arc<PshGrpd>,
    /// `(X, a)` per slice object
    pub objects: Vec<(Obj, Obj)>,
    /// `(h, a', α)` per slice morphism
    pub morphisms: Vec<(Mor, Obj, Mor)>,
    object_index: HashMap<(Obj, Obj), Obj>,
    morphism_index: Arc<HashMap<(Mor, Obj, Mor), Mor>>,
}

impl SliceSite {
    pub fn object(&self, x: Obj, a: Obj) -> Option<Obj> {
        self.object_index.get(&(x, a)).copied()
    }

    pub fn morphism(&self, h: Mor, a2: Obj, alpha: Mor) -> Option<Mor> {
        self.morphism_index.get(&(h, a2, alpha)).copied()
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        self.site.cat()
    }
}

/// The induced pullback of `(f, α): (Y, b) → (X, a)` and `(g, β): (Z, c) → (X, a)`:
/// the ambient chosen pullback `P` with `M(f∘p1)(a)` and projections carrying
/// `M(p1)(α)⁻¹` and `M(p2)(β)⁻¹`.
fn induced_pullback(s: &SliceSite, f: Mor, g: Mor) -> Result<PullbackCone> {
    let (c, m) = (s.ambient.cat(), &s.m);
    let (fh, _, fa) = s.morphisms[f];
    let (gh, _, ga) = s.morphisms[g];
    let cone = s.ambient.pullback(fh, gh)?;
    let (_, a) = s.objects[s.cat().tgt(f)];
    let (_, b) = s.objects[s.cat().src(f)];
    let (_, cc) = s.objects[s.cat().src(g)];
    let p = cone.apex;
    let e = m.restriction(c.compose(fh, cone.p1)).obj(a);
    let mp = m.value(p);
    let inv = |x: Mor| mp.inverse(x).expect("values are groupoids");
    let leg1 = s
        .morphism(cone.p1, b, inv(m.restriction(cone.p1).mor(fa)))
        .ok_or_else(|| Error::Invariant("induced projection missing from the slice".into()))?;
    let leg2 = s
        .morphism(cone.p2, cc, inv(m.restriction(cone.p2).mor(ga)))
        .ok_or_else(|| Error::Invariant("induced projection missing from the slice".into()))?;
    let apex = s
        .object(p, e)
        .ok_or_else(|| Error::Invariant("induced apex missing".into()))?;
    Ok(PullbackCone {
        apex,
        p1: leg1,
        p2: leg2,
    })
}

pub fn build_slice_site(ambient: &Site, m: &PshGrpd, limits: &Limits) -> Result<SliceSite> {
    let c = ambient.cat().clone();
    let m = Arc::new(m.clone());
    let mut objects = Vec::new();
    for x in c.objects() {
        for a in m.value(x).objects() {
            objects.push((x, a));
        }
    }
    let object_index: HashMap<(Obj, Obj), Obj> =
        objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let mut morphisms = Vec::new();
    let mut names = Vec::new();
    let mut identity = vec![0; objects.len()];
    let mut index = HashMap::new();
    let obj_name = |x: Obj, a: Obj| format!("({},{})", c.object_name(x), m.value(x).object_name(a));
    for (i, &(x, a)) in objects.iter().enumerate() {
        let mx = m.value(x);
        for &h in c.morphisms_from(x) {
            let x2 = c.tgt(h);
            for a2 in m.value(x2).objects() {
                let target = m.restriction(h).obj(a2);
                for &alpha in mx.hom(a, target) {
                    if c.is_identity(h) && a2 == a && mx.is_identity(alpha) {
                        identity[i] = morphisms.len();
                    }
                    index.insert((h, a2, alpha), morphisms.len());
                    names.push((
                        format!(
                            "({},{})->{}",
                            c.morphism_name(h),
                            mx.morphism_name(alpha),
                            obj_name(x2, a2)
                        ),
                        i,
                        object_index[&(x2, a2)],
                    ));
                    morphisms.push((h, a2, alpha));
                }
            }
        }
    }
    let index = Arc::new(index);
    let rule_data = (
        c.clone(),
        m.clone(),
        Arc::new(morphisms.clone()),
        index.clone(),
    );
    let rule = move |g: Mor, f: Mor| {
        let (c, m, mors, index) = &rule_data;
        let (h, _, alpha) = mors[f];
        let (h2, a3, alpha2) = mors[g];
        let x = c.src(h);
        let composite = m.value(x).compose(m.restriction(h).mor(alpha2), alpha);
        index[&(c.compose(h2, h), a3, composite)]
    };
    let cat = Arc::new(FinCat::from_rule(
        objects.iter().map(|&(x, a)| obj_name(x, a)).collect(),
        names,
        identity,
        Arc::new(rule),
    )?);
    // basis: ambient basis covers with identity homotopies
    let mut basis = Vec::new();
    for cover in ambient.basis() {
        for a in m.value(cover.target).objects() {
            let legs = cover
                .legs
                .iter()
                .map(|&u| {
                    let b = m.restriction(u).obj(a);
                    index[&(u, a, m.value(c.src(u)).identity(b))]
                })
                .collect();
            basis.push(Cover {
                target: object_index[&(cover.target, a)],
                legs,
            });
        }
    }
    let provisional = Site::trivial(cat.clone());
    let mut slice = SliceSite {
        site: provisional,
        ambient: ambient.clone(),
        m,
        objects,
        morphisms,
        object_index,
        morphism_index: index,
    };
    let table = slice_pullback_table(&slice, &basis)?;
    slice.site = Site::new(cat, table, basis, limits)?;
    Ok(slice)
}

/// Induced pullbacks for every cospan the Čech nerves and stability of the
/// basis need.
fn slice_pullback_table(
    s: &SliceSite,
    basis: &[Cover],
) -> Result<BTreeMap<(Mor, Mor), PullbackCone>> {
    let cat = s.cat();
    let mut table = BTreeMap::new();
    let add =
        |table: &mut BTreeMap<(Mor, Mor), PullbackCone>, f: Mor, g: Mor| -> Result<PullbackCone> {
            if cat.is_identity(f) {
                return Ok(PullbackCone {
                    apex: cat.src(g),
                    p1: g,
                    p2: cat.identity(cat.src(g)),
                });
            }
            if cat.is_identity(g) {
                return Ok(PullbackCone {
                    apex: cat.src(f),
                    p1: cat.identity(cat.src(f)),
                    p2: f,
                });
            }
            if let Some(cone) = table.get(&(f, g)) {
                return Ok(*cone);
            }
            let cone = induced_pullback(s, f, g)?;
            table.insert((f, g), cone);
            Ok(cone)
        };
    for cover in basis {
        for &h in cat.morphisms_into(cover.target) {
            for &u in &cover.legs {
                add(&mut table, h, u)?;
            }
        }
        for &u in &cover.legs {
            for &v in &cover.legs {
                let cone = add(&mut table, u, v)?;
                let to_target = cat.compose(u, cone.p1);
                for &w in &cover.legs {
                    add(&mut table, to_target, w)?;
                }
            }
        }
    }
    Ok(table)
}

/// `BG(X)`: objects `(a, s)` with `s ∈ G(X, a)`; a morphism `(a, s) → (b, s')`
/// is `α: a → b` with `s = α*(s')`. Returns the projection `BG → M`, checked to
/// be a levelwise fibration with discrete fibers.
pub fn functor_b(slice: &SliceSite, g: &PshSet) -> Result<PshGrpdMap> {
    let (c, m) = (slice.ambient.cat().clone(), &slice.m);
    let mut obj_lists: Vec<Vec<(Obj, usize)>> = Vec::new();
    let mut mor_lists: Vec<Vec<(usize, Mor)>> = Vec::new();
    let mut values = Vec::new();
    for x in c.objects() {
        let mx = m.value(x);
        let objs: Vec<(Obj, usize)> = mx
            .objects()
            .flat_map(|a| {
                let o = slice.object(x, a).unwrap();
                (0..g.size(o)).map(move |s| (a, s))
            })
            .collect();
        let pos: HashMap<(Obj, usize), usize> =
            objs.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let mut mors = Vec::new();
        let mut names = Vec::new();
        let mut identity = vec![0; objs.len()];
        let id_x = c.identity(x);
        for (i, &(a, s)) in objs.iter().enumerate() {
            for &alpha in mx.morphisms_from(a) {
                let b = mx.tgt(alpha);
                let arrow = slice.morphism(id_x, b, alpha).unwrap();
                let restrict = g.restriction(arrow);
                let s2 = (0..restrict.len())
                    .find(|&t| restrict[t] == s)
                    .ok_or_else(|| {
                        Error::Invariant("restriction along an isomorphism is not bijective".into())
                    })?;
                if mx.is_identity(alpha) {
                    identity[i] = mors.len();
                }
                let o = slice.object(x, a).unwrap();
                names.push((
                    format!("{}@{}", mx.morphism_name(alpha), g.label(o, s)),
                    i,
                    pos[&(b, s2)],
                ));
                mors.push((i, alpha));
            }
        }
        let index: HashMap<(usize, Mor), usize> =
            mors.iter().enumerate().map(|(n, &k)| (k, n)).collect();
        let obj_names = objs
            .iter()
            .map(|&(a, s)| {
                format!(
                    "({},{})",
                    mx.object_name(a),
                    g.label(slice.object(x, a).unwrap(), s)
                )
            })
            .collect();
        let srcs: Vec<usize> = mors.iter().map(|&(i, _)| i).collect();
        let cat = FinCat::from_fn(obj_names, names, identity, |g2, f2| {
            index[&(srcs[f2], mx.compose(mors[g2].1, mors[f2].1))]
        })?;
        obj_lists.push(objs);
        mor_lists.push(mors);
        values.push(Arc::new(cat));
    }
    let obj_pos: Vec<HashMap<(Obj, usize), usize>> = obj_lists
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, &o)| (o, i)).collect())
        .collect();
    let mut restrict = Vec::with_capacity(c.num_morphisms());
    for h in c.morphisms() {
        let (y, x) = (c.src(h), c.tgt(h));
        let mh = m.restriction(h);
        let obj: Vec<usize> = obj_lists[x]
            .iter()
            .map(|&(a, s)| {
                let b = mh.obj(a);
                let arrow = slice.morphism(h, a, m.value(y).identity(b)).unwrap();
                obj_pos[y][&(b, g.restrict(arrow, s))]
            })
            .collect();
        let mor_pos: HashMap<(usize, Mor), usize> = mor_lists[y]
            .iter()
            .enumerate()
            .map(|(n, &k)| (k, n))
            .collect();
        let mor = mor_lists[x]
            .iter()
            .map(|&(i, alpha)| mor_pos[&(obj[i], mh.mor(alpha))])
            .collect();
        restrict.push(Functor::new_unchecked(
            values[x].clone(),
            values[y].clone(),
            obj,
            mor,
        ));
    }
    let bg = PshGrpd::new(c.clone(), values.clone(), restrict)?;
    let components = c
        .objects()
        .map(|x| {
            let obj = obj_lists[x].iter().map(|&(a, _)| a).collect();
            let mor = mor_lists[x].iter().map(|&(_, alpha)| alpha).collect();
            Functor::new_unchecked(values[x].clone(), m.value(x).clone(), obj, mor)
        })
        .collect();
    let phi = PshGrpdMap::new(bg, (**m).clone(), components)?;
    for f in &phi.components {
        if !is_fibration(f)? || !has_discrete_fibers(f) {
            return Err(Error::Invariant(
                "B(G) → M is not a fibration with discrete fibers".into(),
            ));
        }
    }
    Ok(phi)
}

/// `Γ(π)(X, a)` is the fiber of `F(X)` over `a`; restriction along `(h, α)`
/// sends `x` to the source of the unique lift of `α` ending at `F(h)(x)`.
pub fn functor_gamma(slice: &SliceSite, pi: &PshGrpdMap) -> Result<PshSet> {
    let c = slice.ambient.cat();
    for (x, f) in pi.components.iter().enumerate() {
        if !is_fibration(f)? || !has_discrete_fibers(f) {
            return Err(Error::NotDiscreteFibration(c.object_name(x).to_string()));
        }
    }
    let f = &pi.source;
    let fibers: Vec<Vec<Obj>> = slice
        .objects
        .iter()
        .map(|&(x, a)| {
            f.value(x)
                .objects()
                .filter(|&o| pi.components[x].obj(o) == a)
                .collect()
        })
        .collect();
    let labels = slice
        .objects
        .iter()
        .zip(&fibers)
        .map(|(&(x, _), fib)| {
            fib.iter()
                .map(|&o| f.value(x).object_name(o).to_string())
                .collect()
        })
        .collect();
    let sc = slice.cat();
    let mut restrict = Vec::with_capacity(sc.num_morphisms());
    for arrow in sc.morphisms() {
        let (h, _, alpha) = slice.morphisms[arrow];
        let (src, tgt) = (sc.src(arrow), sc.tgt(arrow));
        let y = c.src(h);
        let fy = f.value(y);
        let mut table = Vec::with_capacity(fibers[tgt].len());
        for &o in &fibers[tgt] {
            let end = f.restriction(h).obj(o);
            let lift = fy
                .morphisms_into(end)
                .iter()
                .copied()
                .find(|&beta| pi.components[y].mor(beta) == alpha)
                .ok_or_else(|| Error::Invariant("fibration has no lift".into()))?;
            let start = fy.src(lift);
            table.push(
                fibers[src]
                    .iter()
                    .position(|&p| p == start)
                    .expect("lift starts in the fiber"),
            );
        }
        restrict.push(table);
    }
    PshSet::new(sc.clone(), labels, restrict)
}

/// The canonical bijection `G → Γ(BG)`, `s ↦ (a, s)`.
pub fn gamma_b_unit(
    slice: &SliceSite,
    g: &PshSet,
    bg: &PshGrpdMap,
    gbg: &PshSet,
) -> Result<PshMap> {
    let components = slice
        .objects
        .iter()
        .enumerate()
        .map(|(o, &(x, a))| {
            let v = bg.source.value(x);
            (0..g.size(o))
                .map(|s| {
                    let name = format!("({},{})", slice.m.value(x).object_name(a), g.label(o, s));
                    let obj = v.object_by_name(&name).expect("B(G) object");
                    gbg.labels(o)
                        .iter()
                        .position(|l| l == v.object_name(obj))
                        .expect("fiber element")
                })
                .collect()
        })
        .collect();
    let map = PshMap { components };
    map.validate(g, gbg)?;
    Ok(map)
}

/// The canonical map `B(Γ H) → H` over `M`: `(a, x) ↦ x`, and `α ↦` its lift.
pub fn b_gamma_counit(slice: &SliceSite, bgh: &PshGrpdMap, h: &PshGrpdMap) -> Result<PshGrpdMap> {
    let c = slice.ambient.cat();
    let mut components = Vec::with_capacity(c.num_objects());
    for x in c.objects() {
        let (src, tgt) = (bgh.source.value(x), h.source.value(x));
        let obj: Vec<Obj> = src
            .objects()
            .map(|o| {
                // names are "(a,x)" with x the object name in H(X)
                let name = src.object_name(o);
                let a = bgh.components[x].obj(o);
                let prefix = format!("({},", slice.m.value(x).object_name(a));
                let inner = &name[prefix.len()..name.len() - 1];
                tgt.object_by_name(inner).expect("object of H")
            })
            .collect();
        let mor: Vec<Mor> = src
            .morphisms()
            .map(|u| {
                let alpha = bgh.components[x].mor(u);
                let (s, t) = (obj[src.src(u)], obj[src.tgt(u)]);
                tgt.hom(s, t)
                    .iter()
                    .copied()
                    .find(|&v| h.components[x].mor(v) == alpha)
                    .expect("lift exists")
            })
            .collect();
        components.push(Functor::new(src.clone(), tgt.clone(), obj, mor)?);
    }
    PshGrpdMap::new(bgh.source.clone(), h.source.clone(), components)
}

/// The functor `C/M' → C/M`, `(X, a) ↦ (X, p(a))`, `(h, α) ↦ (h, p(α))`.
pub fn induced_slice_functor(
    p: &PshGrpdMap,
    source: &SliceSite,
    target: &SliceSite,
) -> Result<Functor> {
    let obj = source
        .objects
        .iter()
        .map(|&(x, a)| {
            target
                .object(x, p.components[x].obj(a))
                .ok_or_else(|| Error::Invariant("object".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let c = source.ambient.cat();
    let mor = source
        .morphisms
        .iter()
        .map(|&(h, a2, alpha)| {
            let (x, x2) = (c.src(h), c.tgt(h));
            target
                .morphism(h, p.components[x2].obj(a2), p.components[x].mor(alpha))
                .ok_or_else(|| Error::Invariant("morphism".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Functor::new(source.cat().clone(), target.cat().clone(), obj, mor)
}

/// Restriction along the induced functor `C/M' → C/M`.
pub fn p_star_restrict(
    p: &PshGrpdMap,
    source: &SliceSite,
    target: &SliceSite,
    g: &PshSet,
) -> Result<PshSet> {
    g.pull_back_along(&induced_slice_functor(p, source, target)?)
}

/// Left Kan extension along the induced functor, then sheafification.
pub fn p_lower_star(
    p: &PshGrpdMap,
    source: &SliceSite,
    target: &SliceSite,
    f: &PshSet,
    limits: &Limits,
) -> Result<PshSet> {
    let lan = left_kan_extension(&induced_slice_functor(p, source, target)?, f, limits)?;
    Ok(sheafify(&lan, &target.site, limits)?.sheaf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::pshgrpd::{is_local_fibration, representable_groupoid_psh};
    use crate::sites::is_sheaf;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bz2() -> Arc<FinCat> {
        Arc::new(FinCat::cyclic_group(2))
    }

    fn s2_slice() -> SliceSite {
        let site = fixtures::s2();
        let m = PshGrpd::constant(site.cat().clone(), bz2(), &[]).unwrap();
        build_slice_site(&site, &m, &Limits::default()).unwrap()
    }

    fn circ_slice() -> SliceSite {
        let site = fixtures::circ();
        let e = site.cat().object_by_name("E").unwrap();
        let m = PshGrpd::constant(site.cat().clone(), bz2(), &[e]).unwrap();
        build_slice_site(&site, &m, &Limits::default()).unwrap()
    }

    fn bg2_slice() -> SliceSite {
        let g = fixtures::bg2_groupoid();
        let m = representable_groupoid_psh(&g).unwrap();
        build_slice_site(&g.site, &m, &Limits::default()).unwrap()
    }

    #[test]
    fn slice_sizes() {
        let s = s2_slice();
        assert_eq!(s.cat().num_objects(), 4);
        assert_eq!(s.cat().num_morphisms(), 9 * 2);
        let b = bg2_slice();
        assert_eq!(b.cat().num_objects(), 3);
        assert_eq!(b.cat().num_morphisms(), 4466);
    }

    #[test]
    fn gamma_b_round_trip_on_random_presheaves() {
        let limits = Limits::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for s in [s2_slice(), circ_slice()] {
            for _ in 0..5 {
                let g = PshSet::random_bounded(s.cat(), 2, &mut rng, &limits).unwrap();
                let bg = functor_b(&s, &g).unwrap();
                let gbg = functor_gamma(&s, &bg).unwrap();
                let unit = gamma_b_unit(&s, &g, &bg, &gbg).unwrap();
                assert!(unit.is_iso(&g, &gbg));
                let bgbg = functor_b(&s, &gbg).unwrap();
                let counit = b_gamma_counit(&s, &bgbg, &bg).unwrap();
                assert!(counit.components.iter().all(|f| f.is_isomorphism()));
            }
        }
    }

    #[test]
    fn sheaf_iff_local_fibration() {
        let limits = Limits::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for s in [s2_slice(), circ_slice()] {
            let mut seen = [false; 2];
            for _ in 0..12 {
                let g = PshSet::random_bounded(s.cat(), 2, &mut rng, &limits).unwrap();
                let sheaf = is_sheaf(&g, &s.site, &limits).unwrap();
                let bg = functor_b(&s, &g).unwrap();
                let fib = is_local_fibration(&bg, &s.ambient, &limits).unwrap();
                assert_eq!(sheaf, fib);
                seen[sheaf as usize] = true;
            }
            assert_eq!(seen, [true, true]);
            let sh = sheafify(
                &PshSet::random_bounded(s.cat(), 2, &mut rng, &limits).unwrap(),
                &s.site,
                &limits,
            )
            .unwrap()
            .sheaf;
            let bg = functor_b(&s, &sh).unwrap();
            assert!(is_local_fibration(&bg, &s.ambient, &limits).unwrap());
        }
    }

    #[test]
    fn restriction_along_identity_is_identity() {
        let limits = Limits::default();
        let s = s2_slice();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = PshSet::random_bounded(s.cat(), 2, &mut rng, &limits).unwrap();
        let id = PshGrpdMap::identity(&s.m);
        let r = p_star_restrict(&id, &s, &s, &g).unwrap();
        assert_eq!(r.restriction_tables(), g.restriction_tables());
    }
}
