//! Exactness of the Amitsur complex `0 → M → M⊗B ⇉ M⊗B⊗B`.

use super::algebra::{pure, tensor, AModule, RingMap};
use super::matrix::Matrix;
use super::module::{basis_vector, sub, ModuleMap, Vector};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmitsurReport {
    /// `M → M⊗_A B` is injective.
    pub injective: bool,
    /// The equalizer of the two maps `M⊗B → M⊗B⊗B` is the image of `M`.
    pub exact_in_middle: bool,
}

impl AmitsurReport {
    pub fn exact(&self) -> bool {
        self.injective && self.exact_in_middle
    }
}

/// `m ↦ m⊗1`, and `m⊗b ↦ m⊗b⊗1`, `m⊗b ↦ m⊗1⊗b`.
pub fn amitsur_check(f: &RingMap, m: &AModule) -> Result<AmitsurReport> {
    let b = &f.cod;
    let gb = b.gens();
    let gm = m.module.gens();
    let b_mod = f.codomain_as_module();
    let mb = tensor(m, &b_mod)?;
    // M⊗B is an A-module through B on its last factor.
    let act_last: Vec<Matrix> = b_mod
        .action
        .iter()
        .map(|a| {
            let cols: Vec<Vector> = (0..gm * gb)
                .map(|c| pure(&basis_vector(gm, c / gb), &a.column(c % gb)))
                .collect();
            Matrix::from_columns(gm * gb, &cols)
        })
        .collect();
    let mbb = tensor(
        &AModule {
            module: mb.clone(),
            action: act_last,
        },
        &b_mod,
    )?;
    let unit_cols: Vec<Vector> = (0..gm)
        .map(|j| pure(&basis_vector(gm, j), &b.unit))
        .collect();
    let coaugment = ModuleMap::from_columns(m.module.clone(), mb.clone(), &unit_cols)?;
    let d0: Vec<Vector> = (0..gm * gb)
        .map(|c| {
            pure(
                &pure(&basis_vector(gm, c / gb), &basis_vector(gb, c % gb)),
                &b.unit,
            )
        })
        .collect();
    let d1: Vec<Vector> = (0..gm * gb)
        .map(|c| {
            pure(
                &pure(&basis_vector(gm, c / gb), &b.unit),
                &basis_vector(gb, c % gb),
            )
        })
        .collect();
    let diff: Vec<Vector> = d0.iter().zip(&d1).map(|(x, y)| sub(x, y)).collect();
    let diff = ModuleMap::from_columns(mb.clone(), mbb, &diff)?;
    let injective = coaugment.is_injective();
    let exact_in_middle = diff
        .kernel_generators()
        .iter()
        .all(|k| coaugment.preimage(k).is_some());
    Ok(AmitsurReport {
        injective,
        exact_in_middle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::algebra::AlgebraObject;
    use crate::hopf::matrix::vector;
    use crate::hopf::module::{Base, FpModule};

    fn z() -> AlgebraObject {
        AlgebraObject::base_ring(Base::Integers)
    }

    fn product_ring() -> RingMap {
        let b = AlgebraObject::new(
            FpModule::free(Base::Integers, 2),
            vector(&[1, 1]),
            vec![
                vec![vector(&[1, 0]), vector(&[0, 0])],
                vec![vector(&[0, 0]), vector(&[0, 1])],
            ],
        )
        .unwrap();
        RingMap::new(z(), b, Matrix::from_rows(&[vec![1], vec![1]])).unwrap()
    }

    fn over_z(gens: usize, rels: &[Vec<i64>]) -> AModule {
        let rels = if rels.is_empty() {
            Matrix::zero(gens, 0)
        } else {
            Matrix::from_rows(rels)
        };
        AModule::over_base(FpModule::new(Base::Integers, gens, rels).unwrap())
    }

    #[test]
    fn identity_and_diagonal_are_exact() {
        let id = RingMap::identity(&z());
        assert!(amitsur_check(&id, &over_z(1, &[vec![4]])).unwrap().exact());
        let f = product_ring();
        assert!(amitsur_check(&f, &over_z(1, &[])).unwrap().exact());
        assert!(amitsur_check(&f, &over_z(1, &[vec![4]])).unwrap().exact());
        assert!(amitsur_check(&f, &over_z(2, &[vec![3], vec![0]]))
            .unwrap()
            .exact());
    }

    #[test]
    fn reduction_mod_p_is_not_injective() {
        let zp = AlgebraObject::new(FpModule::cyclic(3), vector(&[1]), vec![vec![vector(&[1])]])
            .unwrap();
        let f = RingMap::new(z(), zp, Matrix::from_rows(&[vec![1]])).unwrap();
        let r = amitsur_check(&f, &over_z(1, &[])).unwrap();
        assert!(!r.injective && !r.exact());
    }
}
