//! Commutative algebras given by multiplication tables, their modules, and
//! tensor products over them.

use num_bigint::BigInt;
use num_traits::Zero;

use super::matrix::Matrix;
use super::module::{add, basis_vector, scale, zero_vector, FpModule, ModuleMap, Vector};
use crate::error::{Error, Result};

/// A commutative unital algebra over the base ring, presented as a module
/// with a bilinear multiplication table on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraObject {
    pub module: FpModule,
    pub unit: Vector,
    /// `table[i][j]` is the product of generators `i` and `j`.
    pub table: Vec<Vec<Vector>>,
}

impl AlgebraObject {
    /// Checks well-definedness, associativity, commutativity and the unit law
    /// on generators.
    pub fn new(module: FpModule, unit: Vector, table: Vec<Vec<Vector>>) -> Result<AlgebraObject> {
        let a = AlgebraObject {
            module,
            unit,
            table,
        };
        a.validate()?;
        Ok(a)
    }

    /// The base ring itself, one generator `1`.
    pub fn base_ring(base: super::module::Base) -> AlgebraObject {
        let module = FpModule::free(base, 1);
        AlgebraObject {
            module,
            unit: vec![BigInt::from(1)],
            table: vec![vec![vec![BigInt::from(1)]]],
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.module.gens();
        let bad = |msg: String| Err(Error::InvalidModule(msg));
        if self.unit.len() != n
            || self.table.len() != n
            || self
                .table
                .iter()
                .any(|r| r.len() != n || r.iter().any(|v| v.len() != n))
        {
            return bad("multiplication table or unit has the wrong shape".into());
        }
        for (k, r) in self.module.all_relations().iter().enumerate() {
            for j in 0..n {
                if !self.module.is_zero(&self.mul(r, &basis_vector(n, j))) {
                    return bad(format!(
                        "multiplication does not preserve relation {k} (generator {j})"
                    ));
                }
            }
        }
        for i in 0..n {
            let e_i = basis_vector(n, i);
            if !self.module.equal(&self.mul(&self.unit, &e_i), &e_i) {
                return bad(format!("unit law fails at generator {i}"));
            }
            for j in 0..n {
                if !self.module.equal(&self.table[i][j], &self.table[j][i]) {
                    return bad(format!(
                        "multiplication is not commutative on generators {i}, {j}"
                    ));
                }
                for k in 0..n {
                    let left = self.mul(&self.table[i][j], &basis_vector(n, k));
                    let right = self.mul(&e_i, &self.table[j][k]);
                    if !self.module.equal(&left, &right) {
                        return bad(format!(
                            "multiplication is not associative on generators {i}, {j}, {k}"
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn gens(&self) -> usize {
        self.module.gens()
    }

    pub fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vector {
        let n = self.gens();
        let mut out = zero_vector(n);
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out = add(&out, &scale(&(x * y), &self.table[i][j]));
                }
            }
        }
        out
    }

    /// The matrix of `y ↦ x·y`.
    pub fn multiplication_by(&self, x: &[BigInt]) -> Matrix {
        let n = self.gens();
        let cols: Vec<Vector> = (0..n).map(|j| self.mul(x, &basis_vector(n, j))).collect();
        Matrix::from_columns(n, &cols)
    }
}

/// A unital multiplicative module map between algebras.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingMap {
    pub dom: AlgebraObject,
    pub cod: AlgebraObject,
    pub map: ModuleMap,
}

impl RingMap {
    pub fn new(dom: AlgebraObject, cod: AlgebraObject, matrix: Matrix) -> Result<RingMap> {
        let map = ModuleMap::new(dom.module.clone(), cod.module.clone(), matrix)?;
        let f = RingMap { dom, cod, map };
        let bad = |msg: String| Err(Error::InvalidModule(msg));
        if !f.cod.module.equal(&f.apply(&f.dom.unit), &f.cod.unit) {
            return bad("ring map does not preserve the unit".into());
        }
        let n = f.dom.gens();
        for i in 0..n {
            for j in 0..n {
                let lhs = f.apply(&f.dom.table[i][j]);
                let rhs = f
                    .cod
                    .mul(&f.map.image_of_generator(i), &f.map.image_of_generator(j));
                if !f.cod.module.equal(&lhs, &rhs) {
                    return bad(format!(
                        "ring map is not multiplicative on generators {i}, {j}"
                    ));
                }
            }
        }
        Ok(f)
    }

    pub fn identity(a: &AlgebraObject) -> RingMap {
        RingMap {
            dom: a.clone(),
            cod: a.clone(),
            map: ModuleMap::identity(&a.module),
        }
    }

    pub fn apply(&self, v: &[BigInt]) -> Vector {
        self.map.apply(v)
    }

    /// `B` as an `A`-module through this map.
    pub fn codomain_as_module(&self) -> AModule {
        let action = (0..self.dom.gens())
            .map(|k| self.cod.multiplication_by(&self.map.image_of_generator(k)))
            .collect();
        AModule {
            module: self.cod.module.clone(),
            action,
        }
    }
}

/// A module over an algebra `A`: the action of each generator of `A` as an
/// endomorphism of the underlying module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AModule {
    pub module: FpModule,
    pub action: Vec<Matrix>,
}

impl AModule {
    /// Checks that each action is well defined and that `A → End(M)` is a
    /// unital ring map.
    pub fn new(algebra: &AlgebraObject, module: FpModule, action: Vec<Matrix>) -> Result<AModule> {
        if action.len() != algebra.gens() {
            return Err(Error::InvalidModule(
                "one action matrix per algebra generator is required".into(),
            ));
        }
        for a in &action {
            ModuleMap::new(module.clone(), module.clone(), a.clone())?;
        }
        let m = AModule { module, action };
        let n = m.module.gens();
        for j in 0..n {
            let e = basis_vector(n, j);
            if !m.module.equal(&m.act(&algebra.unit, &e), &e) {
                return Err(Error::InvalidModule(format!(
                    "the unit of the algebra does not fix generator {j}"
                )));
            }
            for k in 0..algebra.gens() {
                for l in 0..algebra.gens() {
                    let lhs = m.act(&algebra.table[k][l], &e);
                    let rhs = m.act(
                        &basis_vector(algebra.gens(), k),
                        &m.act(&basis_vector(algebra.gens(), l), &e),
                    );
                    if !m.module.equal(&lhs, &rhs) {
                        return Err(Error::InvalidModule(format!(
                            "action is not multiplicative on algebra generators {k}, {l}"
                        )));
                    }
                }
            }
        }
        Ok(m)
    }

    /// A module over the base ring, viewed as a module over the algebra with
    /// the single generator `1`.
    pub fn over_base(module: FpModule) -> AModule {
        let n = module.gens();
        AModule {
            module,
            action: vec![Matrix::identity(n)],
        }
    }

    /// `a · v` for an algebra element `a`.
    pub fn act(&self, a: &[BigInt], v: &[BigInt]) -> Vector {
        let mut out = zero_vector(self.module.gens());
        for (k, c) in a.iter().enumerate() {
            if !c.is_zero() {
                out = add(&out, &scale(c, &self.action[k].apply(v)));
            }
        }
        out
    }
}

/// `M ⊗_A N` over the base ring, with generator `(i, j)` at index
/// `i · N.gens() + j`.
pub fn tensor(m: &AModule, n: &AModule) -> Result<FpModule> {
    let (fm, fn_) = (&m.module, &n.module);
    if fm.base() != fn_.base() {
        return Err(Error::Incompatible(format!(
            "base rings {} and {}",
            fm.base(),
            fn_.base()
        )));
    }
    if m.action.len() != n.action.len() {
        return Err(Error::Incompatible(
            "modules over different algebras".into(),
        ));
    }
    let (gm, gn) = (fm.gens(), fn_.gens());
    let mut rels: Vec<Vector> = Vec::new();
    for r in fm.relations().columns() {
        for j in 0..gn {
            rels.push(pure(&r, &basis_vector(gn, j)));
        }
    }
    for r in fn_.relations().columns() {
        for i in 0..gm {
            rels.push(pure(&basis_vector(gm, i), &r));
        }
    }
    for (am, an) in m.action.iter().zip(&n.action) {
        for i in 0..gm {
            for j in 0..gn {
                let left = pure(&am.column(i), &basis_vector(gn, j));
                let right = pure(&basis_vector(gm, i), &an.column(j));
                let diff: Vector = left.iter().zip(&right).map(|(x, y)| x - y).collect();
                if diff.iter().any(|x| !x.is_zero()) {
                    rels.push(diff);
                }
            }
        }
    }
    FpModule::new(
        fm.base().clone(),
        gm * gn,
        Matrix::from_columns(gm * gn, &rels),
    )
}

/// The pure tensor `x ⊗ y` in coordinates.
pub fn pure(x: &[BigInt], y: &[BigInt]) -> Vector {
    let mut out = Vec::with_capacity(x.len() * y.len());
    for a in x {
        for b in y {
            out.push(a * b);
        }
    }
    out
}

/// The algebra `B ⊗_A C` for algebras under `A`, with componentwise
/// multiplication.
pub fn tensor_algebra(f: &RingMap, g: &RingMap) -> Result<AlgebraObject> {
    let module = tensor(&f.codomain_as_module(), &g.codomain_as_module())?;
    let (b, c) = (&f.cod, &g.cod);
    let (gb, gc) = (b.gens(), c.gens());
    let mut table = vec![vec![Vec::new(); gb * gc]; gb * gc];
    for i in 0..gb {
        for j in 0..gc {
            for k in 0..gb {
                for l in 0..gc {
                    table[i * gc + j][k * gc + l] = pure(&b.table[i][k], &c.table[j][l]);
                }
            }
        }
    }
    AlgebraObject::new(module, pure(&b.unit, &c.unit), table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::matrix::{int, vector};
    use crate::hopf::module::Base;

    fn integers() -> AlgebraObject {
        AlgebraObject::base_ring(Base::Integers)
    }

    #[test]
    fn tensor_of_cyclic_groups() {
        let z3 = AModule::over_base(FpModule::cyclic(3));
        let z9 = AModule::over_base(FpModule::cyclic(9));
        assert_eq!(tensor(&z3, &z9).unwrap().invariant_factors(), vector(&[3]));
        let zero = AModule::over_base(FpModule::zero(Base::Integers));
        assert_eq!(tensor(&z9, &zero).unwrap().order(), Some(int(1)));
        let a = AModule::over_base(FpModule::free(Base::Integers, 1));
        assert!(tensor(&a, &z9).unwrap().is_isomorphic(&z9.module));
    }

    #[test]
    fn tensor_over_a_product_ring_balances() {
        // B = Z × Z with idempotents e1, e2.
        let b = AlgebraObject::new(
            FpModule::free(Base::Integers, 2),
            vector(&[1, 1]),
            vec![
                vec![vector(&[1, 0]), vector(&[0, 0])],
                vec![vector(&[0, 0]), vector(&[0, 1])],
            ],
        )
        .unwrap();
        let b_mod = RingMap::identity(&b).codomain_as_module();
        // B ⊗_B B ≅ B, while B ⊗_Z B has rank 4.
        assert_eq!(
            tensor(&b_mod, &b_mod).unwrap().invariant_factors(),
            vector(&[0, 0])
        );
        let diag = RingMap::new(
            integers(),
            b.clone(),
            Matrix::from_rows(&[vec![1], vec![1]]),
        )
        .unwrap();
        assert_eq!(
            tensor_algebra(&diag, &diag)
                .unwrap()
                .module
                .invariant_factors(),
            vector(&[0, 0, 0, 0])
        );
    }

    #[test]
    fn invalid_algebra_and_ring_map_are_rejected() {
        let m = FpModule::free(Base::Integers, 1);
        assert!(AlgebraObject::new(m.clone(), vector(&[2]), vec![vec![vector(&[1])]]).is_err());
        let z = integers();
        assert!(RingMap::new(z.clone(), z, Matrix::from_rows(&[vec![2]])).is_err());
    }
}
