//! Descent data over a finite diagram of objects of a site.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cat::{FinCat, Functor, Mor, Obj};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::pshgrpd::{PshGrpd, PshGrpdMap};
use crate::sites::{PshMap, PshSet, Site};
use crate::slice::{build_slice_site, induced_slice_functor, SliceSite};

/// A diagram `U: I → C` with the slice sites `C/U_i` and, for `f: i → j`, the
/// functor `C/U_i → C/U_j` along which `f*` restricts.
#[derive(Debug, Clone)]
pub struct DescentShape {
    pub diagram: Functor,
    pub slices: Vec<SliceSite>,
    pub along: Vec<Functor>,
}

/// Presheaves `F_i` on `C/U_i` and isomorphisms `α_f: f*F_j → F_i`.
#[derive(Debug, Clone)]
pub struct GeneralDescentDatum {
    pub values: Vec<PshSet>,
    /// by morphism of `I`
    pub alpha: Vec<PshMap>,
}

fn law(law: &str, witness: String) -> Error {
    Error::DescentLaw {
        law: law.into(),
        witness,
    }
}

impl DescentShape {
    pub fn new(site: &Site, diagram: Functor, limits: &Limits) -> Result<DescentShape> {
        let c = site.cat().clone();
        if !crate::cat::same_cat(diagram.cod(), &c) {
            return Err(Error::InvalidDiagram(
                "the diagram does not land in the site".into(),
            ));
        }
        let index = diagram.dom().clone();
        let reps: Vec<PshGrpd> = index
            .objects()
            .map(|i| PshGrpd::representable(c.clone(), diagram.obj(i)))
            .collect();
        let slices = reps
            .iter()
            .map(|r| build_slice_site(site, r, limits))
            .collect::<Result<Vec<_>>>()?;
        let along = index
            .morphisms()
            .map(|f| {
                let (i, j) = (index.src(f), index.tgt(f));
                let uf = diagram.mor(f);
                let components = c
                    .objects()
                    .map(|y| {
                        let (s, t) = (reps[i].value(y), reps[j].value(y));
                        let obj: Vec<Obj> = c
                            .hom(y, diagram.obj(i))
                            .iter()
                            .map(|&a| {
                                let b = c.compose(uf, a);
                                c.hom(y, diagram.obj(j))
                                    .iter()
                                    .position(|&x| x == b)
                                    .unwrap()
                            })
                            .collect();
                        let mor = s.morphisms().map(|m| t.identity(obj[s.src(m)])).collect();
                        Functor::new(s.clone(), t.clone(), obj, mor)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let p = PshGrpdMap::new(reps[i].clone(), reps[j].clone(), components)?;
                induced_slice_functor(&p, &slices[i], &slices[j])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DescentShape {
            diagram,
            slices,
            along,
        })
    }

    pub fn index(&self) -> &Arc<FinCat> {
        self.diagram.dom()
    }

    /// `α` may omit identities, which then default to identity maps.
    pub fn validate(
        &self,
        values: Vec<PshSet>,
        alpha: BTreeMap<Mor, PshMap>,
    ) -> Result<GeneralDescentDatum> {
        let index = self.index().clone();
        if values.len() != index.num_objects() {
            return Err(Error::InvalidDiagram(
                "one presheaf per index object is required".into(),
            ));
        }
        for (i, f) in values.iter().enumerate() {
            if !crate::cat::same_cat(f.cat(), self.slices[i].cat()) {
                return Err(Error::InvalidPresheaf(format!(
                    "F_{} is not on its slice",
                    index.object_name(i)
                )));
            }
            f.validate()?;
        }
        let pulled: Vec<PshSet> = index
            .morphisms()
            .map(|f| values[index.tgt(f)].pull_back_along(&self.along[f]))
            .collect::<Result<_>>()?;
        let mut full = Vec::with_capacity(index.num_morphisms());
        for f in index.morphisms() {
            let name = index.morphism_name(f);
            let target = &values[index.src(f)];
            let a = match alpha.get(&f) {
                Some(a) => a.clone(),
                None if index.is_identity(f) => PshMap::identity(target),
                None => {
                    return Err(law(
                        "completeness",
                        format!("no isomorphism given for `{name}`"),
                    ))
                }
            };
            a.validate(&pulled[f], target)
                .map_err(|e| law("naturality", format!("α_{name}: {e}")))?;
            if !a.is_iso(&pulled[f], target) {
                return Err(law(
                    "bijectivity",
                    format!("α_{name} is not an isomorphism"),
                ));
            }
            if index.is_identity(f) && a != PshMap::identity(target) {
                return Err(law("identity", format!("α_{name} is not the identity")));
            }
            full.push(a);
        }
        // α_{g∘f} = α_f ∘ f*(α_g)
        for f in index.morphisms() {
            for &g in index.morphisms_from(index.tgt(f)) {
                let gf = index.compose(g, f);
                let pulled_g = PshMap {
                    components: self.slices[index.src(f)]
                        .cat()
                        .objects()
                        .map(|o| full[g].components[self.along[f].obj(o)].clone())
                        .collect(),
                };
                if full[f].after(&pulled_g) != full[gf] {
                    return Err(law(
                        "cocycle",
                        format!(
                            "pair (`{}`, `{}`)",
                            index.morphism_name(f),
                            index.morphism_name(g)
                        ),
                    ));
                }
            }
        }
        Ok(GeneralDescentDatum {
            values,
            alpha: full,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn arrow_shape() -> (DescentShape, Site) {
        let site = fixtures::s2();
        let c = site.cat().clone();
        let index = Arc::new(FinCat::poset(&["0", "1"], &[("0", "1")]).unwrap());
        let w_to_u = c.morphism_by_name("W<=U").unwrap();
        let (w, u) = (c.src(w_to_u), c.tgt(w_to_u));
        let arrow = index.morphisms().find(|&m| !index.is_identity(m)).unwrap();
        let obj = vec![w, u];
        let mor = index
            .morphisms()
            .map(|m| {
                if m == arrow {
                    w_to_u
                } else {
                    c.identity(obj[index.src(m)])
                }
            })
            .collect();
        let d = Functor::new(index, c, obj, mor).unwrap();
        (
            DescentShape::new(&site, d, &Limits::default()).unwrap(),
            site,
        )
    }

    #[test]
    fn single_object_accepts_any_presheaf() {
        let site = fixtures::s2();
        let c = site.cat().clone();
        let point = Arc::new(FinCat::terminal());
        let x = c.object_by_name("X").unwrap();
        let d = Functor::point(point, c, x);
        let shape = DescentShape::new(&site, d, &Limits::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f =
            PshSet::random_bounded(shape.slices[0].cat(), 2, &mut rng, &Limits::default()).unwrap();
        shape.validate(vec![f], BTreeMap::new()).unwrap();
    }

    #[test]
    fn arrow_with_isomorphism_is_valid_and_perturbation_is_not() {
        let (shape, _) = arrow_shape();
        let index = shape.index().clone();
        let arrow = index.morphisms().find(|&m| !index.is_identity(m)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let fu =
            PshSet::random_bounded(shape.slices[1].cat(), 2, &mut rng, &Limits::default()).unwrap();
        let fw = fu.pull_back_along(&shape.along[arrow]).unwrap();
        let mut alpha = BTreeMap::new();
        alpha.insert(arrow, PshMap::identity(&fw));
        shape
            .validate(vec![fw.clone(), fu.clone()], alpha.clone())
            .unwrap();
        // a non-identity α on an identity arrow breaks the identity law
        let id_w = index.identity(0);
        let swap: Vec<Vec<usize>> = fw.sizes().iter().map(|&n| (0..n).rev().collect()).collect();
        let perturbed = PshMap { components: swap };
        if perturbed.validate(&fw, &fw).is_ok() && perturbed != PshMap::identity(&fw) {
            alpha.insert(id_w, perturbed);
            assert!(shape.validate(vec![fw, fu], alpha).is_err());
        }
    }

    #[test]
    fn mismatched_composite_is_a_cocycle_error() {
        let site = fixtures::s2();
        let c = site.cat().clone();
        let index = Arc::new(
            FinCat::poset(&["0", "1", "2"], &[("0", "1"), ("1", "2"), ("0", "2")]).unwrap(),
        );
        let obj: Vec<Obj> = ["W", "U", "X"]
            .iter()
            .map(|n| c.object_by_name(n).unwrap())
            .collect();
        let mor = index
            .morphisms()
            .map(|m| c.hom(obj[index.src(m)], obj[index.tgt(m)])[0])
            .collect();
        let d = Functor::new(index.clone(), c, obj, mor).unwrap();
        let shape = DescentShape::new(&site, d, &Limits::default()).unwrap();
        let sizes = vec![2; shape.slices[2].cat().num_objects()];
        let fx = PshSet::from_fn(shape.slices[2].cat().clone(), &sizes, |_, e| e).unwrap();
        let m = |a: &str, b: &str| index.morphism_by_name(&format!("{a}<={b}")).unwrap();
        let fu = fx.pull_back_along(&shape.along[m("1", "2")]).unwrap();
        let fw = fu.pull_back_along(&shape.along[m("0", "1")]).unwrap();
        let mut alpha = BTreeMap::new();
        alpha.insert(m("0", "1"), PshMap::identity(&fw));
        alpha.insert(m("1", "2"), PshMap::identity(&fu));
        alpha.insert(m("0", "2"), PshMap::identity(&fw));
        let values = vec![fw.clone(), fu, fx];
        shape.validate(values.clone(), alpha.clone()).unwrap();
        let swap = PshMap {
            components: fw.sizes().iter().map(|&n| (0..n).rev().collect()).collect(),
        };
        alpha.insert(m("0", "2"), swap);
        match shape.validate(values, alpha) {
            Err(Error::DescentLaw { law, .. }) => assert_eq!(law, "cocycle"),
            other => panic!("expected a cocycle failure, got {other:?}"),
        }
    }
}
