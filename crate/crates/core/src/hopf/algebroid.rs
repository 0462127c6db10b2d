//! Hopf algebroids `(A, Γ)` and their canonical examples.

use num_bigint::BigInt;

use super::algebra::{pure, tensor, tensor_algebra, AModule, AlgebraObject, RingMap};
use super::matrix::Matrix;
use super::module::{basis_vector, Base, FpModule, ModuleMap, Vector};
use crate::error::{Error, Result};

/// Unvalidated structure maps. Matrices act on generator coordinates:
/// `eta_l`, `eta_r` are `Γ × A`, `counit` is `A × Γ`, `delta` is `(Γ⊗Γ) × Γ`
/// with `Γ⊗Γ` generator `(i, j)` at `i · |Γ| + j`, `conjugation` is `Γ × Γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawHopfAlgebroid {
    pub a: AlgebraObject,
    pub gamma: AlgebraObject,
    pub eta_l: Matrix,
    pub eta_r: Matrix,
    pub counit: Matrix,
    pub delta: Matrix,
    pub conjugation: Option<Matrix>,
}

/// `Γ ⊗_A Γ` is formed with the left factor an `A`-module through `eta_r`
/// and the right factor through `eta_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfAlgebroid {
    pub a: AlgebraObject,
    pub gamma: AlgebraObject,
    pub eta_l: RingMap,
    pub eta_r: RingMap,
    pub counit: RingMap,
    pub gamma2: AlgebraObject,
    /// Checked to be unital, `A`-bilinear, counital and coassociative. It is
    /// not required to be multiplicative: see [`HopfAlgebroid::delta_multiplicativity_failure`].
    pub delta: ModuleMap,
    pub conjugation: Option<RingMap>,
    pub raw: RawHopfAlgebroid,
}

fn axiom(name: &str, witness: String) -> Error {
    Error::HopfAxiom {
        axiom: name.to_string(),
        witness,
    }
}

fn within(name: &'static str) -> impl Fn(Error) -> Error {
    move |e| axiom(name, e.to_string())
}

impl RawHopfAlgebroid {
    pub fn validate(self) -> Result<HopfAlgebroid> {
        let (a, gamma) = (&self.a, &self.gamma);
        let eta_l = RingMap::new(a.clone(), gamma.clone(), self.eta_l.clone())
            .map_err(within("left unit is a ring map"))?;
        let eta_r = RingMap::new(a.clone(), gamma.clone(), self.eta_r.clone())
            .map_err(within("right unit is a ring map"))?;
        let counit = RingMap::new(gamma.clone(), a.clone(), self.counit.clone())
            .map_err(within("counit is a ring map"))?;
        for (name, eta) in [
            ("counit after left unit", &eta_l),
            ("counit after right unit", &eta_r),
        ] {
            for k in 0..a.gens() {
                let e = basis_vector(a.gens(), k);
                if !a.module.equal(&counit.apply(&eta.apply(&e)), &e) {
                    return Err(axiom(
                        name,
                        format!("differs from the identity at generator {k} of A"),
                    ));
                }
            }
        }
        let gamma2 = tensor_algebra(&eta_r, &eta_l).map_err(within("Γ⊗Γ is an algebra"))?;
        let delta = ModuleMap::new(
            gamma.module.clone(),
            gamma2.module.clone(),
            self.delta.clone(),
        )
        .map_err(within("comultiplication is well defined"))?;
        if !gamma2.module.equal(&delta.apply(&gamma.unit), &gamma2.unit) {
            return Err(axiom(
                "comultiplication is unital",
                "Δ(1) differs from 1⊗1".into(),
            ));
        }
        let g = gamma.gens();
        for k in 0..a.gens() {
            let e = basis_vector(a.gens(), k);
            let l = eta_l.apply(&e);
            let r = eta_r.apply(&e);
            if !gamma2
                .module
                .equal(&delta.apply(&l), &pure(&l, &gamma.unit))
                || !gamma2
                    .module
                    .equal(&delta.apply(&r), &pure(&gamma.unit, &r))
            {
                return Err(axiom(
                    "comultiplication is A-bilinear",
                    format!("fails at generator {k} of A"),
                ));
            }
        }
        let h = HopfAlgebroid {
            a: a.clone(),
            gamma: gamma.clone(),
            eta_l,
            eta_r,
            counit,
            gamma2,
            delta,
            conjugation: None,
            raw: self.clone(),
        };
        let left = h.counit_left()?;
        let right = h.counit_right()?;
        for t in 0..g {
            let d = h.delta.image_of_generator(t);
            let e = basis_vector(g, t);
            if !gamma.module.equal(&left.apply(&d), &e) {
                return Err(axiom(
                    "counit",
                    format!("(ε⊗1)∘Δ differs from the identity at generator {t} of Γ"),
                ));
            }
            if !gamma.module.equal(&right.apply(&d), &e) {
                return Err(axiom(
                    "counit",
                    format!("(1⊗ε)∘Δ differs from the identity at generator {t} of Γ"),
                ));
            }
        }
        h.check_coassociativity()?;
        let mut h = h;
        if let Some(c) = &self.conjugation {
            h.conjugation = Some(h.check_conjugation(c)?);
        }
        Ok(h)
    }
}

impl HopfAlgebroid {
    /// `(A, A)` with every structure map the identity.
    pub fn trivial(a: AlgebraObject) -> Result<HopfAlgebroid> {
        let n = a.gens();
        let id = Matrix::identity(n);
        let cols: Vec<Vector> = (0..n).map(|i| pure(&basis_vector(n, i), &a.unit)).collect();
        RawHopfAlgebroid {
            gamma: a.clone(),
            eta_l: id.clone(),
            eta_r: id.clone(),
            counit: id.clone(),
            delta: Matrix::from_columns(n * n, &cols),
            conjugation: Some(id),
            a,
        }
        .validate()
    }

    /// `(Z, Z[ε]/(pε, ε²))` with `Δ(ε) = ε⊗1 + 1⊗ε + ε⊗ε`, unchecked.
    pub fn hopf_eps_raw(p: i64) -> RawHopfAlgebroid {
        let a = AlgebraObject::base_ring(Base::Integers);
        let module = FpModule::new(Base::Integers, 2, Matrix::from_rows(&[vec![0], vec![p]]))
            .expect("Γ module");
        let v = |xs: &[i64]| -> Vector { xs.iter().map(|&x| BigInt::from(x)).collect() };
        let table = vec![vec![v(&[1, 0]), v(&[0, 1])], vec![v(&[0, 1]), v(&[0, 0])]];
        let gamma = AlgebraObject::new(module, v(&[1, 0]), table).expect("Γ algebra");
        let unit = Matrix::from_rows(&[vec![1], vec![0]]);
        // Γ⊗Γ generators: 1⊗1, 1⊗ε, ε⊗1, ε⊗ε.
        let delta = Matrix::from_columns(4, &[v(&[1, 0, 0, 0]), v(&[0, 1, 1, 1])]);
        RawHopfAlgebroid {
            a,
            gamma,
            eta_l: unit.clone(),
            eta_r: unit,
            counit: Matrix::from_rows(&[vec![1, 0]]),
            delta,
            conjugation: Some(Matrix::from_rows(&[vec![1, 0], vec![0, -1]])),
        }
    }

    pub fn hopf_eps(p: i64) -> Result<HopfAlgebroid> {
        HopfAlgebroid::hopf_eps_raw(p).validate()
    }

    /// A pair of generators on which `Δ` fails to be multiplicative, if any.
    pub fn delta_multiplicativity_failure(&self) -> Option<(usize, usize)> {
        let g = self.gamma.gens();
        (0..g)
            .flat_map(|i| (0..g).map(move |j| (i, j)))
            .find(|&(i, j)| {
                let lhs = self.delta.apply(&self.gamma.table[i][j]);
                let rhs = self.gamma2.mul(
                    &self.delta.image_of_generator(i),
                    &self.delta.image_of_generator(j),
                );
                !self.gamma2.module.equal(&lhs, &rhs)
            })
    }

    /// `Γ` as an `A`-module through the left unit.
    pub fn gamma_left(&self) -> AModule {
        self.eta_l.codomain_as_module()
    }

    /// `Γ` as an `A`-module through the right unit.
    pub fn gamma_right(&self) -> AModule {
        self.eta_r.codomain_as_module()
    }

    /// The `A`-action on `X ⊗ Γ` through the right unit on the last factor,
    /// for `X` with `x_gens` generators.
    pub fn right_action_on_last(&self, x_gens: usize) -> Vec<Matrix> {
        let g = self.gamma.gens();
        (0..self.a.gens())
            .map(|k| {
                let r = self.eta_r.map.image_of_generator(k);
                let cols: Vec<Vector> = (0..x_gens * g)
                    .map(|c| {
                        pure(
                            &basis_vector(x_gens, c / g),
                            &self.gamma.mul(&basis_vector(g, c % g), &r),
                        )
                    })
                    .collect();
                Matrix::from_columns(x_gens * g, &cols)
            })
            .collect()
    }

    /// The right `Γ`-multiplication by `γ` on the last factor of `X ⊗ Γ`.
    pub fn right_multiplication_on_last(&self, x_gens: usize, gamma: &[BigInt]) -> Matrix {
        let g = self.gamma.gens();
        let cols: Vec<Vector> = (0..x_gens * g)
            .map(|c| {
                pure(
                    &basis_vector(x_gens, c / g),
                    &self.gamma.mul(&basis_vector(g, c % g), gamma),
                )
            })
            .collect();
        Matrix::from_columns(x_gens * g, &cols)
    }

    /// `Γ ⊗_A Γ ⊗_A Γ` with generator `(i, j, k)` at `(i · |Γ| + j) · |Γ| + k`.
    pub fn gamma3(&self) -> Result<FpModule> {
        let g2 = AModule {
            module: self.gamma2.module.clone(),
            action: self.right_action_on_last(self.gamma.gens()),
        };
        tensor(&g2, &self.gamma_left())
    }

    /// `(ε⊗1): Γ⊗Γ → A⊗_A Γ ≅ Γ`, `x⊗y ↦ η_L(ε(x))·y`.
    fn counit_left(&self) -> Result<ModuleMap> {
        let g = self.gamma.gens();
        let cols: Vec<Vector> = (0..g * g)
            .map(|c| {
                self.gamma.mul(
                    &self.eta_l.apply(&self.counit.map.image_of_generator(c / g)),
                    &basis_vector(g, c % g),
                )
            })
            .collect();
        ModuleMap::from_columns(self.gamma2.module.clone(), self.gamma.module.clone(), &cols)
            .map_err(within("counit"))
    }

    /// `(1⊗ε): Γ⊗Γ → Γ⊗_A A ≅ Γ`, `x⊗y ↦ x·η_R(ε(y))`.
    fn counit_right(&self) -> Result<ModuleMap> {
        let g = self.gamma.gens();
        let cols: Vec<Vector> = (0..g * g)
            .map(|c| {
                self.gamma.mul(
                    &basis_vector(g, c / g),
                    &self.eta_r.apply(&self.counit.map.image_of_generator(c % g)),
                )
            })
            .collect();
        ModuleMap::from_columns(self.gamma2.module.clone(), self.gamma.module.clone(), &cols)
            .map_err(within("counit"))
    }

    /// `Δ⊗1` and `1⊗Δ` as maps `Γ⊗Γ → Γ⊗Γ⊗Γ`.
    pub fn delta_tensor_maps(&self) -> Result<(ModuleMap, ModuleMap)> {
        let g = self.gamma.gens();
        let g3 = self.gamma3()?;
        let d = |i: usize| self.delta.image_of_generator(i);
        let left: Vec<Vector> = (0..g * g)
            .map(|c| pure(&d(c / g), &basis_vector(g, c % g)))
            .collect();
        let right: Vec<Vector> = (0..g * g)
            .map(|c| pure(&basis_vector(g, c / g), &d(c % g)))
            .collect();
        let m = &self.gamma2.module;
        Ok((
            ModuleMap::from_columns(m.clone(), g3.clone(), &left)
                .map_err(within("coassociativity"))?,
            ModuleMap::from_columns(m.clone(), g3, &right).map_err(within("coassociativity"))?,
        ))
    }

    fn check_coassociativity(&self) -> Result<()> {
        let (left, right) = self.delta_tensor_maps()?;
        for t in 0..self.gamma.gens() {
            let d = self.delta.image_of_generator(t);
            if !left.cod.equal(&left.apply(&d), &right.apply(&d)) {
                return Err(axiom(
                    "coassociativity",
                    format!("(Δ⊗1)∘Δ and (1⊗Δ)∘Δ differ at generator {t} of Γ"),
                ));
            }
        }
        Ok(())
    }

    fn check_conjugation(&self, c: &Matrix) -> Result<RingMap> {
        let name = "conjugation";
        let c = RingMap::new(self.gamma.clone(), self.gamma.clone(), c.clone())
            .map_err(within(name))?;
        let (a, gamma) = (&self.a, &self.gamma);
        let g = gamma.gens();
        for k in 0..a.gens() {
            let e = basis_vector(a.gens(), k);
            if !gamma
                .module
                .equal(&c.apply(&self.eta_l.apply(&e)), &self.eta_r.apply(&e))
                || !gamma
                    .module
                    .equal(&c.apply(&self.eta_r.apply(&e)), &self.eta_l.apply(&e))
            {
                return Err(axiom(
                    name,
                    format!("does not swap the units at generator {k} of A"),
                ));
            }
        }
        let c_after_c = c.map.after(&c.map)?;
        if !c_after_c.agrees_with(&ModuleMap::identity(&gamma.module)) {
            return Err(axiom(name, "is not an involution".into()));
        }
        let left: Vec<Vector> = (0..g * g)
            .map(|x| gamma.mul(&c.map.image_of_generator(x / g), &basis_vector(g, x % g)))
            .collect();
        let right: Vec<Vector> = (0..g * g)
            .map(|x| gamma.mul(&basis_vector(g, x / g), &c.map.image_of_generator(x % g)))
            .collect();
        let left = ModuleMap::from_columns(self.gamma2.module.clone(), gamma.module.clone(), &left)
            .map_err(within(name))?;
        let right =
            ModuleMap::from_columns(self.gamma2.module.clone(), gamma.module.clone(), &right)
                .map_err(within(name))?;
        for t in 0..g {
            let d = self.delta.image_of_generator(t);
            let eps = self.counit.map.image_of_generator(t);
            if !gamma.module.equal(&left.apply(&d), &self.eta_r.apply(&eps))
                || !gamma
                    .module
                    .equal(&right.apply(&d), &self.eta_l.apply(&eps))
            {
                return Err(axiom(
                    name,
                    format!("antipode identity fails at generator {t} of Γ"),
                ));
            }
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::matrix::vector;

    #[test]
    fn trivial_and_example_algebroids_validate() {
        let z = AlgebraObject::base_ring(Base::Integers);
        HopfAlgebroid::trivial(z).unwrap();
        let h = HopfAlgebroid::hopf_eps(3).unwrap();
        assert_eq!(h.gamma.module.invariant_factors(), vector(&[3, 0]));
        assert_eq!(h.gamma2.module.gens(), 4);
        HopfAlgebroid::hopf_eps(5).unwrap();
    }

    #[test]
    fn primitive_comultiplication_fails_counit() {
        let mut raw = HopfAlgebroid::hopf_eps_raw(3);
        raw.delta = Matrix::from_columns(4, &[vector(&[1, 0, 0, 0]), vector(&[0, 0, 1, 0])]);
        match raw.validate() {
            Err(Error::HopfAxiom { axiom, .. }) => assert_eq!(axiom, "counit"),
            other => panic!("expected a counit failure, got {other:?}"),
        }
    }

    #[test]
    fn example_comultiplication_is_multiplicative_only_for_p_two() {
        // Δ(ε)² = 2 ε⊗ε while Δ(ε²) = 0.
        assert_eq!(
            HopfAlgebroid::hopf_eps(3)
                .unwrap()
                .delta_multiplicativity_failure(),
            Some((1, 1))
        );
        assert_eq!(
            HopfAlgebroid::hopf_eps(2)
                .unwrap()
                .delta_multiplicativity_failure(),
            None
        );
        let z = AlgebraObject::base_ring(Base::Integers);
        assert_eq!(
            HopfAlgebroid::trivial(z)
                .unwrap()
                .delta_multiplicativity_failure(),
            None
        );
    }

    #[test]
    fn non_unital_comultiplication_is_rejected() {
        let mut raw = HopfAlgebroid::hopf_eps_raw(3);
        raw.delta = Matrix::from_columns(4, &[vector(&[2, 0, 0, 0]), vector(&[0, 1, 1, 1])]);
        match raw.validate() {
            Err(Error::HopfAxiom { axiom, .. }) => assert_eq!(axiom, "comultiplication is unital"),
            other => panic!("expected a unit failure, got {other:?}"),
        }
    }

    #[test]
    fn wrong_conjugation_is_rejected() {
        let mut raw = HopfAlgebroid::hopf_eps_raw(3);
        raw.conjugation = Some(Matrix::identity(2));
        assert!(matches!(raw.validate(), Err(Error::HopfAxiom { .. })));
    }
}
