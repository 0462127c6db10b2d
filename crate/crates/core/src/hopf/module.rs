//! Finitely presented modules over `Z` or `Z/n` and maps between them.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::Matrix;
use super::snf::{smith_normal_form, Snf};
use crate::error::{Error, Result};
use crate::limits::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Base {
    Integers,
    Mod(BigInt),
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Integers => write!(f, "Z"),
            Base::Mod(n) => write!(f, "Z/{n}"),
        }
    }
}

/// `base^gens / (columns of relations)`.
#[derive(Clone)]
pub struct FpModule {
    base: Base,
    gens: usize,
    relations: Matrix,
    snf: Arc<Snf>,
}

impl fmt::Debug for FpModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FpModule({} on {} gens, invariants {:?})",
            self.base,
            self.gens,
            self.invariant_factors()
        )
    }
}

impl PartialEq for FpModule {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.gens == other.gens && self.relations == other.relations
    }
}

impl Eq for FpModule {}

pub type Vector = Vec<BigInt>;

pub fn zero_vector(n: usize) -> Vector {
    vec![BigInt::zero(); n]
}

pub fn basis_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = BigInt::one();
    v
}

pub fn add(a: &[BigInt], b: &[BigInt]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[BigInt], b: &[BigInt]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(k: &BigInt, a: &[BigInt]) -> Vector {
    a.iter().map(|x| k * x).collect()
}

impl FpModule {
    pub fn new(base: Base, gens: usize, relations: Matrix) -> Result<FpModule> {
        if relations.rows() != gens {
            return Err(Error::InvalidModule(format!(
                "relation matrix has {} rows for {gens} generators",
                relations.rows()
            )));
        }
        if let Base::Mod(n) = &base {
            if !n.is_positive() {
                return Err(Error::InvalidModule(format!(
                    "base modulus {n} is not positive"
                )));
            }
        }
        let mut m = FpModule {
            base,
            gens,
            relations,
            snf: Arc::new(smith_normal_form(&Matrix::zero(0, 0))),
        };
        m.snf = Arc::new(smith_normal_form(&m.full_relations()));
        Ok(m)
    }

    pub fn free(base: Base, gens: usize) -> FpModule {
        FpModule::new(base, gens, Matrix::zero(gens, 0)).expect("free module")
    }

    pub fn zero(base: Base) -> FpModule {
        FpModule::free(base, 0)
    }

    /// `Z/n` over the integers.
    pub fn cyclic(n: i64) -> FpModule {
        FpModule::new(Base::Integers, 1, Matrix::from_rows(&[vec![n]])).expect("cyclic module")
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    fn rank(&self) -> usize {
        self.snf.rank()
    }

    /// Coordinates in the Smith basis, torsion coordinates reduced into
    /// `[0, d_i)`. Two vectors represent the same element iff these agree.
    pub fn coordinates(&self, v: &[BigInt]) -> Vector {
        assert_eq!(v.len(), self.gens, "element length");
        let mut w = self.snf.u.apply(v);
        let diag = self.snf.diagonal();
        for (i, x) in w.iter_mut().enumerate() {
            if i < diag.len() && !diag[i].is_zero() {
                *x = x.mod_floor(&diag[i]);
            }
        }
        w
    }

    /// A canonical representative of the class of `v`.
    pub fn reduce(&self, v: &[BigInt]) -> Vector {
        self.snf.u_inv.apply(&self.coordinates(v))
    }

    pub fn is_zero(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).iter().all(Zero::is_zero)
    }

    pub fn equal(&self, a: &[BigInt], b: &[BigInt]) -> bool {
        self.is_zero(&sub(a, b))
    }

    /// Invariant factors `d_i > 1` followed by a zero for each free summand.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = self
            .snf
            .diagonal()
            .into_iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .collect();
        out.extend(std::iter::repeat_n(BigInt::zero(), self.gens - self.rank()));
        out
    }

    pub fn is_isomorphic(&self, other: &FpModule) -> bool {
        self.invariant_factors() == other.invariant_factors()
    }

    pub fn free_rank(&self) -> usize {
        self.gens - self.rank()
    }

    /// The number of elements, or `None` for a module with a free summand.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank() > 0 {
            return None;
        }
        Some(self.invariant_factors().iter().product())
    }

    /// Representatives of a cyclic decomposition: `(element, order)` pairs
    /// with the module the direct sum of the cyclic subgroups they generate.
    /// Order zero marks a free generator.
    pub fn cyclic_basis(&self) -> Vec<(Vector, BigInt)> {
        let diag = self.snf.diagonal();
        (0..self.gens)
            .filter_map(|k| {
                let d = diag.get(k).cloned().unwrap_or_else(BigInt::zero);
                if d.is_one() {
                    return None;
                }
                Some((self.snf.u_inv.column(k), d))
            })
            .collect()
    }

    /// Expresses `v` in the cyclic basis: `v = Σ c_k b_k`.
    pub fn cyclic_coordinates(&self, v: &[BigInt]) -> Vector {
        let diag = self.snf.diagonal();
        let w = self.coordinates(v);
        (0..self.gens)
            .filter(|&k| !diag.get(k).is_some_and(One::is_one))
            .map(|k| w[k].clone())
            .collect()
    }

    /// Every element, as canonical representatives. Errors on infinite
    /// modules and on modules larger than the limit.
    pub fn elements(&self, limits: &Limits) -> Result<Vec<Vector>> {
        let order = self.order().ok_or(Error::InfiniteModule)?;
        limits.admit(order.to_u128().unwrap_or(u128::MAX))?;
        let basis = self.cyclic_basis();
        let mut out = vec![zero_vector(self.gens)];
        for (b, d) in &basis {
            let k = d.to_u64().expect("bounded order");
            let mut next = Vec::with_capacity(out.len() * k as usize);
            for v in &out {
                for c in 0..k {
                    next.push(add(v, &scale(&BigInt::from(c), b)));
                }
            }
            out = next;
        }
        Ok(out.iter().map(|v| self.reduce(v)).collect())
    }

    /// Elements `x` with `n·x = 0`.
    pub fn torsion_elements(&self, n: &BigInt, limits: &Limits) -> Result<Vec<Vector>> {
        if n.is_zero() {
            return self.elements(limits);
        }
        let mut out = vec![zero_vector(self.gens)];
        for (b, d) in self.cyclic_basis() {
            // The n-torsion of Z/d is generated by d / gcd(d, n); of Z it is 0.
            let (step, count) = if d.is_zero() {
                continue;
            } else {
                let g = d.gcd(n);
                (d.div_floor(&g), g.to_u64().expect("bounded order"))
            };
            limits.admit((out.len() as u128).saturating_mul(count as u128))?;
            let gen = scale(&step, &b);
            let mut next = Vec::new();
            for v in &out {
                for c in 0..count {
                    next.push(add(v, &scale(&BigInt::from(c), &gen)));
                }
            }
            out = next;
        }
        Ok(out.iter().map(|v| self.reduce(v)).collect())
    }

    /// Solves `f·x ≡ v` modulo the relations of this module, where the
    /// columns of `f` are elements of this module.
    pub fn solve(&self, f: &Matrix, v: &[BigInt]) -> Option<Vector> {
        let full = f.hstack(&self.full_relations());
        let s = smith_normal_form(&full);
        let w = s.u.apply(v);
        let mut y = zero_vector(full.cols());
        for (i, x) in w.iter().enumerate() {
            let d = if i < full.cols() {
                s.d[(i, i)].clone()
            } else {
                BigInt::zero()
            };
            if d.is_zero() {
                if !x.is_zero() {
                    return None;
                }
            } else {
                let (q, r) = x.div_mod_floor(&d);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            }
        }
        let x = s.v.apply(&y);
        Some(x[..f.cols()].to_vec())
    }

    /// The user relations together with the base-ring relations `n·e_i`.
    fn full_relations(&self) -> Matrix {
        let mut full = self.relations.clone();
        if let Base::Mod(n) = &self.base {
            let mut scalars = Matrix::identity(self.gens);
            for i in 0..self.gens {
                scalars[(i, i)] = n.clone();
            }
            full = full.hstack(&scalars);
        }
        full
    }

    /// `⟨sub⟩ / (⟨sub⟩ ∩ ⟨quot⟩)` where `sub` and `quot` are elements of this
    /// module with `quot ⊆ ⟨sub⟩`: the subquotient generated by `sub`.
    pub fn subquotient(&self, sub: &[Vector], quot: &[Vector]) -> FpModule {
        let s = sub.len();
        let mut cols: Vec<Vector> = sub.to_vec();
        cols.extend(quot.iter().cloned());
        cols.extend(self.all_relations());
        let stacked = Matrix::from_columns(self.gens, &cols);
        let rels: Vec<Vector> = integer_kernel(&stacked)
            .into_iter()
            .map(|k| k[..s].to_vec())
            .collect();
        FpModule::new(self.base.clone(), s, Matrix::from_columns(s, &rels))
            .expect("subquotient presentation")
    }

    /// All relations, including those imposed by the base ring.
    pub fn all_relations(&self) -> Vec<Vector> {
        self.full_relations().columns()
    }

    fn same_base(&self, other: &FpModule) -> Result<()> {
        if self.base != other.base {
            return Err(Error::Incompatible(format!(
                "base rings {} and {}",
                self.base, other.base
            )));
        }
        Ok(())
    }
}

/// A basis of the integer kernel `{x : a·x = 0}`.
pub fn integer_kernel(a: &Matrix) -> Vec<Vector> {
    let s = smith_normal_form(a);
    (s.rank()..a.cols()).map(|j| s.v.column(j)).collect()
}

/// `ker(out) / im(into)` for composable maps with `out ∘ into = 0`.
pub fn homology(into: &ModuleMap, out: &ModuleMap) -> Result<FpModule> {
    if into.cod != out.dom {
        return Err(Error::Incompatible(
            "homology of maps with mismatched modules".into(),
        ));
    }
    let zero = out.after(into)?;
    if !zero.agrees_with(&ModuleMap::zero(&into.dom, &out.cod)) {
        return Err(Error::Invariant(
            "consecutive differentials do not compose to zero".into(),
        ));
    }
    Ok(out
        .dom
        .subquotient(&out.kernel_generators(), &into.matrix.columns()))
}

/// A homomorphism given by the images of the domain generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleMap {
    pub dom: FpModule,
    pub cod: FpModule,
    /// `cod.gens() × dom.gens()`; column `j` is the image of generator `j`.
    pub matrix: Matrix,
}

impl ModuleMap {
    /// Checks that every relation of the domain maps to zero.
    pub fn new(dom: FpModule, cod: FpModule, matrix: Matrix) -> Result<ModuleMap> {
        dom.same_base(&cod)?;
        if matrix.rows() != cod.gens() || matrix.cols() != dom.gens() {
            return Err(Error::InvalidModule(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                cod.gens(),
                dom.gens()
            )));
        }
        for (k, r) in dom.all_relations().iter().enumerate() {
            if !cod.is_zero(&matrix.apply(r)) {
                return Err(Error::IllDefinedMap(format!(
                    "relation {k} of the domain maps to a nonzero element"
                )));
            }
        }
        Ok(ModuleMap { dom, cod, matrix })
    }

    pub fn from_columns(dom: FpModule, cod: FpModule, columns: &[Vector]) -> Result<ModuleMap> {
        let matrix = Matrix::from_columns(cod.gens(), columns);
        ModuleMap::new(dom, cod, matrix)
    }

    pub fn identity(m: &FpModule) -> ModuleMap {
        ModuleMap {
            dom: m.clone(),
            cod: m.clone(),
            matrix: Matrix::identity(m.gens()),
        }
    }

    pub fn zero(dom: &FpModule, cod: &FpModule) -> ModuleMap {
        ModuleMap {
            dom: dom.clone(),
            cod: cod.clone(),
            matrix: Matrix::zero(cod.gens(), dom.gens()),
        }
    }

    pub fn apply(&self, v: &[BigInt]) -> Vector {
        self.matrix.apply(v)
    }

    pub fn image_of_generator(&self, j: usize) -> Vector {
        self.matrix.column(j)
    }

    /// `self ∘ first`
    pub fn after(&self, first: &ModuleMap) -> Result<ModuleMap> {
        if first.cod != self.dom {
            return Err(Error::Incompatible(
                "composite of maps with mismatched modules".into(),
            ));
        }
        Ok(ModuleMap {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            matrix: &self.matrix * &first.matrix,
        })
    }

    /// Equality as homomorphisms: images of generators agree in the codomain.
    pub fn agrees_with(&self, other: &ModuleMap) -> bool {
        self.dom == other.dom
            && self.cod == other.cod
            && (0..self.dom.gens()).all(|j| {
                self.cod
                    .equal(&self.matrix.column(j), &other.matrix.column(j))
            })
    }

    /// The same map with each column replaced by its canonical representative.
    pub fn normalized(&self) -> ModuleMap {
        let cols: Vec<Vector> = self
            .matrix
            .columns()
            .iter()
            .map(|c| self.cod.reduce(c))
            .collect();
        ModuleMap {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            matrix: Matrix::from_columns(self.cod.gens(), &cols),
        }
    }

    /// Solves `self(x) = v`.
    pub fn preimage(&self, v: &[BigInt]) -> Option<Vector> {
        self.cod.solve(&self.matrix, v)
    }

    pub fn is_surjective(&self) -> bool {
        (0..self.cod.gens()).all(|i| self.preimage(&basis_vector(self.cod.gens(), i)).is_some())
    }

    /// Generators of the kernel, as elements of the domain.
    pub fn kernel_generators(&self) -> Vec<Vector> {
        // x lies in the kernel iff (x, y) solves [F | R_cod]·(x, y) = 0.
        let rels = self.cod.full_relations();
        let stacked = self.matrix.hstack(&rels);
        let s = smith_normal_form(&stacked);
        let rank = s.rank();
        (rank..stacked.cols())
            .map(|j| s.v.column(j)[..self.dom.gens()].to_vec())
            .collect()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_generators().iter().all(|x| self.dom.is_zero(x))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn inverse(&self) -> Result<ModuleMap> {
        if !self.is_injective() {
            return Err(Error::IllDefinedMap(
                "map is not injective, so it has no inverse".into(),
            ));
        }
        let cols = (0..self.cod.gens())
            .map(|i| {
                self.preimage(&basis_vector(self.cod.gens(), i))
                    .ok_or_else(|| {
                        Error::IllDefinedMap("map is not surjective, so it has no inverse".into())
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        ModuleMap::from_columns(self.cod.clone(), self.dom.clone(), &cols)
    }

    /// The cokernel and the projection onto it.
    pub fn cokernel(&self) -> ModuleMap {
        let rels = self.cod.relations().hstack(&self.matrix);
        let q = FpModule::new(self.cod.base().clone(), self.cod.gens(), rels)
            .expect("cokernel presentation");
        ModuleMap {
            dom: self.cod.clone(),
            cod: q,
            matrix: Matrix::identity(self.cod.gens()),
        }
    }
}
