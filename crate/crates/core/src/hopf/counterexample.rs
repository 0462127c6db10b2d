//! Comodules over `(Z, Z[ε]/(pε, ε²))` do not form an abelian category.

use std::sync::Arc;

use super::algebra::AModule;
use super::algebroid::HopfAlgebroid;
use super::comodule::{comodule_cokernel, comodule_iso_exists, Comodule, ComoduleMap};
use super::matrix::{vector, Matrix};
use super::module::FpModule;
use crate::error::{Error, Result};
use crate::limits::Limits;

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub p: i64,
    pub hopf: Arc<HopfAlgebroid>,
    /// `(Z/p, 1)`, `(Z/p, 1+ε)` and `(Z/p², 1)`.
    pub plain: Comodule,
    pub twisted: Comodule,
    pub target: Comodule,
    /// `x ↦ px` out of the plain and the twisted comodule.
    pub i: ComoduleMap,
    pub i_prime: ComoduleMap,
    /// Reduction `(Z/p², 1) → (Z/p, 1)`.
    pub r: ComoduleMap,
    /// Isomorphisms from each cokernel to `(Z/p, 1)` through which `r`
    /// factors.
    pub coker_i: ComoduleMap,
    pub coker_i_prime: ComoduleMap,
    /// Each unit multiplication `Z/p → Z/p` with the reason it is not a
    /// comodule map `(Z/p, 1) → (Z/p, 1+ε)`.
    pub rejected_units: Vec<(i64, String)>,
    /// Outcome of the exhaustive isomorphism search.
    pub twisted_iso: Option<ComoduleMap>,
}

impl Counterexample {
    /// Monomorphisms with a common cokernel but non-isomorphic domains.
    pub fn holds(&self) -> bool {
        self.i.is_monomorphism()
            && self.i_prime.is_monomorphism()
            && self.coker_i.is_isomorphism()
            && self.coker_i_prime.is_isomorphism()
            && self.rejected_units.len() as i64 == self.p - 1
            && self.twisted_iso.is_none()
    }
}

pub fn counterexample_nonabelian(p: i64, limits: &Limits) -> Result<Counterexample> {
    if p < 2 {
        return Err(Error::InvalidModule(format!("p = {p} must be at least 2")));
    }
    let hopf = Arc::new(HopfAlgebroid::hopf_eps(p)?);
    let zp = AModule::over_base(FpModule::cyclic(p));
    let zp2 = AModule::over_base(FpModule::cyclic(p * p));
    let plain = Comodule::scalar(hopf.clone(), zp.clone(), &vector(&[1, 0]))?;
    let twisted = Comodule::scalar(hopf.clone(), zp, &vector(&[1, 1]))?;
    let target = Comodule::scalar(hopf.clone(), zp2, &vector(&[1, 0]))?;
    let times_p = Matrix::from_rows(&[vec![p]]);
    let i = ComoduleMap::new(plain.clone(), target.clone(), times_p.clone())?;
    let i_prime = ComoduleMap::new(twisted.clone(), target.clone(), times_p)?;
    let one = Matrix::from_rows(&[vec![1]]);
    let r = ComoduleMap::new(target.clone(), plain.clone(), one.clone())?;
    let descend = |f: &ComoduleMap| -> Result<ComoduleMap> {
        let q = comodule_cokernel(f)?;
        let iso = ComoduleMap::new(q.cod.clone(), plain.clone(), one.clone())?;
        if !iso.map.after(&q.map)?.agrees_with(&r.map) {
            return Err(Error::Invariant(
                "reduction does not factor through the cokernel".into(),
            ));
        }
        Ok(iso)
    };
    let coker_i = descend(&i)?;
    let coker_i_prime = descend(&i_prime)?;
    let rejected_units = (1..p)
        .filter_map(|u| {
            match ComoduleMap::new(
                plain.clone(),
                twisted.clone(),
                Matrix::from_rows(&[vec![u]]),
            ) {
                Ok(_) => None,
                Err(e) => Some((u, e.to_string())),
            }
        })
        .collect();
    let twisted_iso = comodule_iso_exists(&plain, &twisted, limits)?;
    Ok(Counterexample {
        p,
        hopf,
        plain,
        twisted,
        target,
        i,
        i_prime,
        r,
        coker_i,
        coker_i_prime,
        rejected_units,
        twisted_iso,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexample_holds_for_small_primes() {
        for p in [2, 3, 5] {
            let c = counterexample_nonabelian(p, &Limits::default()).unwrap();
            assert!(c.holds(), "p = {p}");
        }
    }
}
