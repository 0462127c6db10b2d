//! Čech cohomology of a cover with coefficients in a presheaf of finitely
//! presented abelian groups.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::cat::{FinCat, Obj};
use crate::error::{Error, Result};
use crate::hopf::{homology, Base, FpModule, Matrix, ModuleMap, Vector};
use crate::sites::{CechNerve, Cover, Site};

/// A contravariant functor into f.p. abelian groups: `restrict[m]` maps the
/// value at `tgt(m)` to the value at `src(m)`.
#[derive(Debug, Clone)]
pub struct AbPresheaf {
    pub cat: Arc<FinCat>,
    pub values: Vec<FpModule>,
    pub restrict: Vec<ModuleMap>,
}

impl AbPresheaf {
    /// Checks endpoints, identities and composition on every composable pair.
    pub fn new(
        cat: Arc<FinCat>,
        values: Vec<FpModule>,
        restrict: Vec<Matrix>,
    ) -> Result<AbPresheaf> {
        if values.len() != cat.num_objects() || restrict.len() != cat.num_morphisms() {
            return Err(Error::InvalidPresheaf(
                "one value per object and one map per morphism are required".into(),
            ));
        }
        let restrict = cat
            .morphisms()
            .zip(restrict)
            .map(|(m, a)| ModuleMap::new(values[cat.tgt(m)].clone(), values[cat.src(m)].clone(), a))
            .collect::<Result<Vec<_>>>()?;
        let p = AbPresheaf {
            cat,
            values,
            restrict,
        };
        let c = &p.cat;
        for o in c.objects() {
            if !p.restrict[c.identity(o)].agrees_with(&ModuleMap::identity(&p.values[o])) {
                return Err(Error::InvalidPresheaf(format!(
                    "identity of `{}` does not act as the identity",
                    c.object_name(o)
                )));
            }
        }
        for f in c.morphisms() {
            for &g in c.morphisms_from(c.tgt(f)) {
                let gf = c.compose(g, f);
                if !p.restrict[gf].agrees_with(&p.restrict[f].after(&p.restrict[g])?) {
                    return Err(Error::InvalidPresheaf(format!(
                        "restriction along `{}` ∘ `{}` is not the composite of restrictions",
                        c.morphism_name(g),
                        c.morphism_name(f)
                    )));
                }
            }
        }
        Ok(p)
    }

    /// `M` on every object with identity restrictions, except that objects
    /// covered by the empty family get the zero group.
    pub fn constant(site: &Site, m: &FpModule) -> AbPresheaf {
        let c = site.cat().clone();
        let empty: Vec<bool> = c
            .objects()
            .map(|o| site.covers_of(o).any(|cv| cv.legs.is_empty()))
            .collect();
        let zero = FpModule::zero(m.base().clone());
        let values: Vec<FpModule> = c
            .objects()
            .map(|o| if empty[o] { zero.clone() } else { m.clone() })
            .collect();
        let restrict = c
            .morphisms()
            .map(|f| {
                let (s, t) = (c.src(f), c.tgt(f));
                if empty[s] || empty[t] {
                    ModuleMap::zero(&values[t], &values[s])
                } else {
                    ModuleMap::identity(m)
                }
            })
            .collect();
        AbPresheaf {
            cat: c,
            values,
            restrict,
        }
    }

    pub fn value(&self, o: Obj) -> &FpModule {
        &self.values[o]
    }
}

/// The unnormalized ordered Čech complex in degrees `0..=3` and its
/// cohomology in degrees `0..=2`.
#[derive(Debug, Clone)]
pub struct CechCohomology {
    /// `C^n = ⊕ A(U_{i0..in})` over ordered tuples.
    pub cochains: Vec<FpModule>,
    /// `d^n: C^n → C^{n+1}`.
    pub differentials: Vec<ModuleMap>,
    pub groups: Vec<FpModule>,
}

impl CechCohomology {
    pub fn invariant_factors(&self) -> Vec<Vec<BigInt>> {
        self.groups
            .iter()
            .map(FpModule::invariant_factors)
            .collect()
    }
}

/// Block-diagonal direct sum with the offset of each summand.
fn direct_sum(base: &Base, parts: &[&FpModule]) -> (FpModule, Vec<usize>) {
    let gens: usize = parts.iter().map(|p| p.gens()).sum();
    let mut offsets = Vec::with_capacity(parts.len());
    let mut rels: Vec<Vector> = Vec::new();
    let mut at = 0;
    for p in parts {
        offsets.push(at);
        for r in p.relations().columns() {
            let mut col = vec![BigInt::from(0); gens];
            col[at..at + p.gens()].clone_from_slice(&r);
            rels.push(col);
        }
        at += p.gens();
    }
    (
        FpModule::new(base.clone(), gens, Matrix::from_columns(gens, &rels)).expect("direct sum"),
        offsets,
    )
}

pub fn cech_cohomology(site: &Site, cover: &Cover, a: &AbPresheaf) -> Result<CechCohomology> {
    if !Arc::ptr_eq(site.cat(), &a.cat) && !site.cat().structurally_eq(&a.cat) {
        return Err(Error::Incompatible(
            "presheaf lives on a different category".into(),
        ));
    }
    let base = a
        .values
        .first()
        .map_or(Base::Integers, |v| v.base().clone());
    let nerve = CechNerve::new(site, cover, 3)?;
    let sums: Vec<(FpModule, Vec<usize>)> = nerve
        .levels
        .iter()
        .map(|level| {
            let parts: Vec<&FpModule> = level.iter().map(|s| a.value(s.apex)).collect();
            direct_sum(&base, &parts)
        })
        .collect();
    let mut differentials = Vec::new();
    for n in 0..3 {
        let (src, src_off) = &sums[n];
        let (tgt, tgt_off) = &sums[n + 1];
        let mut d = Matrix::zero(tgt.gens(), src.gens());
        for (pos, s) in nerve.levels[n + 1].iter().enumerate() {
            for k in 0..s.tuple.len() {
                let face = nerve.face(site, &s.tuple, k)?;
                let mut ft = s.tuple.clone();
                ft.remove(k);
                let fpos = nerve.position(&ft);
                let r = &a.restrict[face].matrix;
                let sign = if k % 2 == 0 {
                    BigInt::from(1)
                } else {
                    BigInt::from(-1)
                };
                for i in 0..r.rows() {
                    for j in 0..r.cols() {
                        let v = &sign * &r[(i, j)];
                        d[(tgt_off[pos] + i, src_off[fpos] + j)] += v;
                    }
                }
            }
        }
        differentials.push(ModuleMap::new(src.clone(), tgt.clone(), d)?);
    }
    let mut groups = Vec::new();
    let into0 = ModuleMap::zero(&FpModule::zero(base), &sums[0].0);
    groups.push(homology(&into0, &differentials[0])?);
    groups.push(homology(&differentials[0], &differentials[1])?);
    groups.push(homology(&differentials[1], &differentials[2])?);
    Ok(CechCohomology {
        cochains: sums.into_iter().map(|s| s.0).collect(),
        differentials,
        groups,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::hopf::vector;

    fn z() -> FpModule {
        FpModule::free(Base::Integers, 1)
    }

    /// The alternating complex of the nerve of a cover, written by hand:
    /// `d^0` and `d^1` as explicit integer matrices on free groups.
    fn alternating(
        c0: usize,
        c1: usize,
        c2: usize,
        d0: &[Vec<i64>],
        d1: &[Vec<i64>],
    ) -> Vec<Vec<BigInt>> {
        let m = |rows: &[Vec<i64>], r: usize, c: usize| {
            if rows.is_empty() {
                Matrix::zero(r, c)
            } else {
                Matrix::from_rows(rows)
            }
        };
        let f = |n| FpModule::free(Base::Integers, n);
        let d0 = ModuleMap::new(f(c0), f(c1), m(d0, c1, c0)).unwrap();
        let d1 = ModuleMap::new(f(c1), f(c2), m(d1, c2, c1)).unwrap();
        let into = ModuleMap::zero(&f(0), &f(c0));
        let out = ModuleMap::zero(&f(c2), &f(0));
        vec![
            homology(&into, &d0).unwrap().invariant_factors(),
            homology(&d0, &d1).unwrap().invariant_factors(),
            homology(&d1, &out).unwrap().invariant_factors(),
        ]
    }

    #[test]
    fn circle_has_one_dimensional_h1() {
        let site = fixtures::circ();
        let a = AbPresheaf::constant(&site, &z());
        let h = cech_cohomology(&site, &site.basis()[0], &a).unwrap();
        assert_eq!(h.invariant_factors()[..2], [vector(&[0]), vector(&[0])]);
        // Vertices A, B, C; edges AB, BC, CA; no triangle.
        let oracle = alternating(
            3,
            3,
            0,
            &[vec![-1, 1, 0], vec![0, -1, 1], vec![1, 0, -1]],
            &[],
        );
        assert_eq!(h.invariant_factors()[..2], oracle[..2]);
        assert!(h.groups[2].order() == Some(BigInt::from(1)));
    }

    #[test]
    fn two_open_cover_is_acyclic() {
        let site = fixtures::s2();
        let a = AbPresheaf::constant(&site, &z());
        let h = cech_cohomology(&site, &site.basis()[0], &a).unwrap();
        let oracle = alternating(2, 1, 0, &[vec![-1, 1]], &[]);
        assert_eq!(h.invariant_factors(), vec![vector(&[0]), vec![], vec![]]);
        assert_eq!(h.invariant_factors()[..2], oracle[..2]);
    }

    #[test]
    fn identity_cover_returns_the_value() {
        let site = fixtures::s2();
        let a = AbPresheaf::constant(&site, &FpModule::cyclic(6));
        let x = site.cat().object_by_name("X").unwrap();
        let h = cech_cohomology(&site, &Cover::identity(site.cat(), x), &a).unwrap();
        assert_eq!(h.invariant_factors(), vec![vector(&[6]), vec![], vec![]]);
    }

    #[test]
    fn presheaf_validation_catches_bad_restriction() {
        let site = fixtures::s2();
        let c = site.cat().clone();
        let values = vec![z(); c.num_objects()];
        let mut restrict: Vec<Matrix> = c.morphisms().map(|_| Matrix::identity(1)).collect();
        let m = c.morphism_by_name("W<=U").unwrap();
        restrict[m] = Matrix::from_rows(&[vec![2]]);
        assert!(AbPresheaf::new(c, values, restrict).is_err());
    }
}
