//! Comodules over a Hopf algebroid and the equivalent descent data.
//!
//! Conventions: `M ⊗_A Γ` uses `Γ` as an `A`-module through `η_L`, with
//! generator `(j, i)` at `j · |Γ| + i`. `Γ ⊗_A M` uses `Γ` through `η_R`, with
//! generator `(i, j)` at `i · |M| + j`.

use std::sync::Arc;

use num_bigint::BigInt;

use super::algebra::{pure, tensor, AModule};
use super::algebroid::HopfAlgebroid;
use super::matrix::Matrix;
use super::module::{basis_vector, FpModule, ModuleMap, Vector};
use crate::error::{Error, Result};
use crate::limits::Limits;

fn law(name: &str, witness: String) -> Error {
    Error::ComoduleLaw {
        law: name.to_string(),
        witness,
    }
}

fn descent_law(name: &str, witness: String) -> Error {
    Error::DescentLaw {
        law: name.to_string(),
        witness,
    }
}

/// `M ⊗_A Γ`.
pub fn m_tensor_gamma(h: &HopfAlgebroid, m: &AModule) -> Result<FpModule> {
    tensor(m, &h.gamma_left())
}

/// `Γ ⊗_A M`.
pub fn gamma_tensor_m(h: &HopfAlgebroid, m: &AModule) -> Result<FpModule> {
    tensor(&h.gamma_right(), m)
}

/// `M ⊗_A Γ ⊗_A Γ` with generator `(j, a, b)` at `(j · |Γ| + a) · |Γ| + b`.
fn m_tensor_gamma2(h: &HopfAlgebroid, m: &AModule) -> Result<FpModule> {
    let mg = AModule {
        module: m_tensor_gamma(h, m)?,
        action: h.right_action_on_last(m.module.gens()),
    };
    tensor(&mg, &h.gamma_left())
}

/// `(1⊗ε): M ⊗ Γ → M`.
fn counit_map(h: &HopfAlgebroid, m: &AModule, mg: &FpModule) -> Result<ModuleMap> {
    let g = h.gamma.gens();
    let cols: Vec<Vector> = (0..mg.gens())
        .map(|c| {
            m.act(
                &h.counit.map.image_of_generator(c % g),
                &basis_vector(m.module.gens(), c / g),
            )
        })
        .collect();
    ModuleMap::from_columns(mg.clone(), m.module.clone(), &cols)
}

/// `(1⊗Δ): M ⊗ Γ → M ⊗ Γ ⊗ Γ`.
fn comultiply_last(
    h: &HopfAlgebroid,
    m: &AModule,
    mg: &FpModule,
    mgg: &FpModule,
) -> Result<ModuleMap> {
    let g = h.gamma.gens();
    let gm = m.module.gens();
    let cols: Vec<Vector> = (0..mg.gens())
        .map(|c| pure(&basis_vector(gm, c / g), &h.delta.image_of_generator(c % g)))
        .collect();
    ModuleMap::from_columns(mg.clone(), mgg.clone(), &cols)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comodule {
    pub hopf: Arc<HopfAlgebroid>,
    pub m: AModule,
    /// `ψ: M → M ⊗_A Γ`.
    pub coaction: ModuleMap,
}

impl Comodule {
    /// Checks well-definedness, `A`-linearity (`ψ(a·m) = ψ(m)·η_R(a)`),
    /// the counit law and coassociativity on generators.
    pub fn new(hopf: Arc<HopfAlgebroid>, m: AModule, coaction: Matrix) -> Result<Comodule> {
        let h = &hopf;
        let mg = m_tensor_gamma(h, &m)?;
        let psi = ModuleMap::new(m.module.clone(), mg.clone(), coaction)
            .map_err(|e| law("well-definedness", e.to_string()))?;
        let gm = m.module.gens();
        let right = h.right_action_on_last(gm);
        for k in 0..h.a.gens() {
            for j in 0..gm {
                let lhs = psi.apply(&m.action[k].column(j));
                let rhs = right[k].apply(&psi.image_of_generator(j));
                if !mg.equal(&lhs, &rhs) {
                    return Err(law(
                        "A-linearity",
                        format!("ψ(a·m) ≠ ψ(m)·η_R(a) at generator {j}, algebra generator {k}"),
                    ));
                }
            }
        }
        let counit = counit_map(h, &m, &mg).map_err(|e| law("counit", e.to_string()))?;
        for j in 0..gm {
            if !m.module.equal(
                &counit.apply(&psi.image_of_generator(j)),
                &basis_vector(gm, j),
            ) {
                return Err(law(
                    "counit",
                    format!("(1⊗ε)∘ψ differs from the identity at generator {j}"),
                ));
            }
        }
        let mgg = m_tensor_gamma2(h, &m)?;
        let one_delta =
            comultiply_last(h, &m, &mg, &mgg).map_err(|e| law("coassociativity", e.to_string()))?;
        let psi_one = Comodule::psi_tensor_one(h, &psi, &mg, &mgg)
            .map_err(|e| law("coassociativity", e.to_string()))?;
        for j in 0..gm {
            let x = psi.image_of_generator(j);
            if !mgg.equal(&one_delta.apply(&x), &psi_one.apply(&x)) {
                return Err(law(
                    "coassociativity",
                    format!("(1⊗Δ)∘ψ and (ψ⊗1)∘ψ differ at generator {j}"),
                ));
            }
        }
        Ok(Comodule {
            hopf,
            m,
            coaction: psi,
        })
    }

    /// `(ψ⊗1): M ⊗ Γ → M ⊗ Γ ⊗ Γ`.
    fn psi_tensor_one(
        h: &HopfAlgebroid,
        psi: &ModuleMap,
        mg: &FpModule,
        mgg: &FpModule,
    ) -> Result<ModuleMap> {
        let g = h.gamma.gens();
        let cols: Vec<Vector> = (0..mg.gens())
            .map(|c| pure(&psi.image_of_generator(c / g), &basis_vector(g, c % g)))
            .collect();
        ModuleMap::from_columns(mg.clone(), mgg.clone(), &cols)
    }

    /// `ψ(m) = m ⊗ γ` on every generator.
    pub fn scalar(hopf: Arc<HopfAlgebroid>, m: AModule, gamma: &[BigInt]) -> Result<Comodule> {
        let gm = m.module.gens();
        let cols: Vec<Vector> = (0..gm).map(|j| pure(&basis_vector(gm, j), gamma)).collect();
        let g = hopf.gamma.gens();
        Comodule::new(hopf, m, Matrix::from_columns(gm * g, &cols))
    }

    pub fn module(&self) -> &FpModule {
        &self.m.module
    }

    pub fn tensor_module(&self) -> &FpModule {
        &self.coaction.cod
    }
}

/// A module map commuting with the coactions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComoduleMap {
    pub dom: Comodule,
    pub cod: Comodule,
    pub map: ModuleMap,
}

impl ComoduleMap {
    pub fn new(dom: Comodule, cod: Comodule, matrix: Matrix) -> Result<ComoduleMap> {
        if dom.hopf != cod.hopf {
            return Err(Error::Incompatible(
                "comodules over different Hopf algebroids".into(),
            ));
        }
        let map = ModuleMap::new(dom.module().clone(), cod.module().clone(), matrix)?;
        for (k, (a, b)) in dom.m.action.iter().zip(&cod.m.action).enumerate() {
            let lhs = map.after(&ModuleMap::identity(dom.module()))?;
            for j in 0..dom.module().gens() {
                if !cod.module().equal(
                    &lhs.apply(&a.column(j)),
                    &b.apply(&map.image_of_generator(j)),
                ) {
                    return Err(Error::NotComoduleMap(format!(
                        "not A-linear at generator {j}, algebra generator {k}"
                    )));
                }
            }
        }
        let f_one = map_tensor_one(&dom.hopf, &map, dom.tensor_module(), cod.tensor_module())
            .map_err(|e| Error::NotComoduleMap(e.to_string()))?;
        for j in 0..dom.module().gens() {
            let lhs = cod.coaction.apply(&map.image_of_generator(j));
            let rhs = f_one.apply(&dom.coaction.image_of_generator(j));
            if !cod.tensor_module().equal(&lhs, &rhs) {
                return Err(Error::NotComoduleMap(format!(
                    "ψ'∘f and (f⊗1)∘ψ differ at generator {j}"
                )));
            }
        }
        Ok(ComoduleMap { dom, cod, map })
    }

    pub fn is_monomorphism(&self) -> bool {
        self.map.is_injective()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.map.is_isomorphism()
    }
}

/// `f ⊗ 1: M ⊗ Γ → N ⊗ Γ`.
fn map_tensor_one(
    h: &HopfAlgebroid,
    f: &ModuleMap,
    mg: &FpModule,
    ng: &FpModule,
) -> Result<ModuleMap> {
    let g = h.gamma.gens();
    let cols: Vec<Vector> = (0..mg.gens())
        .map(|c| pure(&f.image_of_generator(c / g), &basis_vector(g, c % g)))
        .collect();
    ModuleMap::from_columns(mg.clone(), ng.clone(), &cols)
}

/// The cokernel of the underlying module map with the induced coaction, and
/// the projection onto it as a comodule map.
pub fn comodule_cokernel(f: &ComoduleMap) -> Result<ComoduleMap> {
    let h = f.cod.hopf.clone();
    let proj = f.map.cokernel();
    let q = AModule {
        module: proj.cod.clone(),
        action: f.cod.m.action.clone(),
    };
    let qg = m_tensor_gamma(&h, &q)?;
    let p_one = map_tensor_one(&h, &proj, f.cod.tensor_module(), &qg)?;
    let cols: Vec<Vector> = (0..q.module.gens())
        .map(|j| p_one.apply(&f.cod.coaction.image_of_generator(j)))
        .collect();
    let qc = Comodule::new(h, q, Matrix::from_columns(qg.gens(), &cols))
        .map_err(|e| Error::Invariant(format!("induced coaction on the cokernel: {e}")))?;
    ComoduleMap::new(f.cod.clone(), qc, proj.matrix)
}

/// Searches every module map `C1 → C2` for a comodule isomorphism. Maps are
/// enumerated by the images of a cyclic basis of the domain.
pub fn comodule_iso_exists(
    c1: &Comodule,
    c2: &Comodule,
    limits: &Limits,
) -> Result<Option<ComoduleMap>> {
    let (m1, m2) = (c1.module(), c2.module());
    if !m1.is_isomorphic(m2) {
        return Ok(None);
    }
    if m1.free_rank() > 0 {
        return Err(Error::InfiniteModule);
    }
    let basis = m1.cyclic_basis();
    let choices: Vec<Vec<Vector>> = basis
        .iter()
        .map(|(_, d)| m2.torsion_elements(d, limits))
        .collect::<Result<_>>()?;
    limits.admit(crate::limits::product_size(choices.iter().map(Vec::len)))?;
    // Generator j of M1 is Σ_k c_jk b_k in the cyclic basis.
    let coords: Vec<Vector> = (0..m1.gens())
        .map(|j| m1.cyclic_coordinates(&basis_vector(m1.gens(), j)))
        .collect();
    let mut pick = vec![0usize; choices.len()];
    loop {
        let cols: Vec<Vector> = coords
            .iter()
            .map(|c| {
                c.iter()
                    .zip(&pick)
                    .zip(&choices)
                    .fold(vec![BigInt::from(0); m2.gens()], |acc, ((x, &p), ch)| {
                        super::module::add(&acc, &super::module::scale(x, &ch[p]))
                    })
            })
            .collect();
        let matrix = Matrix::from_columns(m2.gens(), &cols);
        if let Ok(f) = ComoduleMap::new(c1.clone(), c2.clone(), matrix) {
            if f.is_isomorphism() {
                return Ok(Some(f));
            }
        }
        let mut k = 0;
        loop {
            if k == pick.len() {
                return Ok(None);
            }
            pick[k] += 1;
            if pick[k] < choices[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

/// `α: Γ ⊗_A M → M ⊗_A Γ`, `Γ`-linear for left multiplication on the source
/// and right multiplication on the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModDescentDatum {
    pub hopf: Arc<HopfAlgebroid>,
    pub m: AModule,
    pub alpha: ModuleMap,
}

impl ModDescentDatum {
    /// Checks well-definedness, `Γ`-linearity, invertibility, the unit law
    /// `(1⊗ε)∘α∘(η_R⊗1) = id` and the cocycle
    /// `(α⊗1)∘(1⊗α)∘(Δ⊗1) = (1⊗Δ)∘α` on the `Γ`-module generators `1⊗m`.
    pub fn new(hopf: Arc<HopfAlgebroid>, m: AModule, alpha: Matrix) -> Result<ModDescentDatum> {
        let h = &hopf;
        let (g, gm) = (h.gamma.gens(), m.module.gens());
        let gmod = gamma_tensor_m(h, &m)?;
        let mg = m_tensor_gamma(h, &m)?;
        let alpha = ModuleMap::new(gmod.clone(), mg.clone(), alpha)
            .map_err(|e| descent_law("well-definedness", e.to_string()))?;
        for t in 0..g {
            let e_t = basis_vector(g, t);
            let right = h.right_multiplication_on_last(gm, &e_t);
            for c in 0..gmod.gens() {
                let moved = pure(
                    &h.gamma.mul(&e_t, &basis_vector(g, c / gm)),
                    &basis_vector(gm, c % gm),
                );
                if !mg.equal(
                    &alpha.apply(&moved),
                    &right.apply(&alpha.image_of_generator(c)),
                ) {
                    return Err(descent_law(
                        "Γ-linearity",
                        format!("α(γ·x) ≠ α(x)·γ at Γ generator {t}, source generator {c}"),
                    ));
                }
            }
        }
        if !alpha.is_isomorphism() {
            return Err(descent_law(
                "invertibility",
                "α is not an isomorphism".into(),
            ));
        }
        let counit = counit_map(h, &m, &mg)?;
        for j in 0..gm {
            let x = alpha.apply(&pure(&h.gamma.unit, &basis_vector(gm, j)));
            if !m.module.equal(&counit.apply(&x), &basis_vector(gm, j)) {
                return Err(descent_law(
                    "unit",
                    format!("(1⊗ε)∘α∘(η_R⊗1) differs from the identity at generator {j}"),
                ));
            }
        }
        let (top, bottom) = cocycle_sides(h, &m, &alpha, &gmod, &mg)
            .map_err(|e| descent_law("cocycle", e.to_string()))?;
        for j in 0..gm {
            let x = pure(&h.gamma.unit, &basis_vector(gm, j));
            if !bottom.cod.equal(&top.apply(&x), &bottom.apply(&x)) {
                return Err(descent_law(
                    "cocycle",
                    format!("the two composites differ at 1⊗m for generator {j}"),
                ));
            }
        }
        Ok(ModDescentDatum { hopf, m, alpha })
    }

    /// The first generator `γ⊗m` of `Γ ⊗ M` at which the cocycle identity
    /// fails. Both sides are determined by their values on `1⊗m` when `Δ` is
    /// multiplicative, so a defect here signals a non-multiplicative `Δ`.
    pub fn pentagon_defect(&self) -> Result<Option<usize>> {
        let h = &self.hopf;
        let gmod = &self.alpha.dom;
        let (top, bottom) = cocycle_sides(h, &self.m, &self.alpha, gmod, &self.alpha.cod)?;
        Ok((0..gmod.gens()).find(|&c| {
            !bottom
                .cod
                .equal(&top.image_of_generator(c), &bottom.image_of_generator(c))
        }))
    }
}

/// `(α⊗1)∘(1⊗α)∘(Δ⊗1)` and `(1⊗Δ)∘α` as maps `Γ ⊗ M → M ⊗ Γ ⊗ Γ`.
fn cocycle_sides(
    h: &HopfAlgebroid,
    m: &AModule,
    alpha: &ModuleMap,
    gmod: &FpModule,
    mg: &FpModule,
) -> Result<(ModuleMap, ModuleMap)> {
    let (g, gm) = (h.gamma.gens(), m.module.gens());
    let gg = AModule {
        module: h.gamma2.module.clone(),
        action: h.right_action_on_last(g),
    };
    let ggm = tensor(&gg, m)?;
    let gm_mod = AModule {
        module: gmod.clone(),
        action: m.action.iter().map(|a| kron_identity_left(g, a)).collect(),
    };
    let gmg = tensor(&gm_mod, &h.gamma_left())?;
    let mgg = m_tensor_gamma2(h, m)?;
    let delta_one: Vec<Vector> = (0..g * gm)
        .map(|c| {
            pure(
                &h.delta.image_of_generator(c / gm),
                &basis_vector(gm, c % gm),
            )
        })
        .collect();
    let delta_one = ModuleMap::from_columns(gmod.clone(), ggm.clone(), &delta_one)?;
    let one_alpha: Vec<Vector> = (0..g * g * gm)
        .map(|c| {
            pure(
                &basis_vector(g, c / (g * gm)),
                &alpha.image_of_generator(c % (g * gm)),
            )
        })
        .collect();
    let one_alpha = ModuleMap::from_columns(ggm, gmg.clone(), &one_alpha)?;
    let alpha_one: Vec<Vector> = (0..g * gm * g)
        .map(|c| pure(&alpha.image_of_generator(c / g), &basis_vector(g, c % g)))
        .collect();
    let alpha_one = ModuleMap::from_columns(gmg, mgg.clone(), &alpha_one)?;
    let top = alpha_one.after(&one_alpha)?.after(&delta_one)?;
    let bottom = comultiply_last(h, m, mg, &mgg)?.after(alpha)?;
    Ok((top, bottom))
}

/// `1_g ⊗ a` on `Z^g ⊗ Z^n`.
fn kron_identity_left(g: usize, a: &Matrix) -> Matrix {
    let n = a.rows();
    let cols: Vec<Vector> = (0..g * n)
        .map(|c| pure(&basis_vector(g, c / n), &a.column(c % n)))
        .collect();
    Matrix::from_columns(g * n, &cols)
}

/// The matrix of `α(γ ⊗ m) = ψ(m)·γ` for a coaction matrix `ψ`.
pub fn alpha_from_coaction(h: &HopfAlgebroid, gm: usize, psi: &Matrix) -> Matrix {
    let g = h.gamma.gens();
    let cols: Vec<Vector> = (0..g * gm)
        .map(|x| {
            h.right_multiplication_on_last(gm, &basis_vector(g, x / gm))
                .apply(&psi.column(x % gm))
        })
        .collect();
    Matrix::from_columns(gm * g, &cols)
}

/// The matrix of `ψ = α ∘ (η_R ⊗ 1)` for a gluing matrix `α`.
pub fn coaction_from_alpha(h: &HopfAlgebroid, gm: usize, alpha: &Matrix) -> Matrix {
    let cols: Vec<Vector> = (0..gm)
        .map(|j| alpha.apply(&pure(&h.gamma.unit, &basis_vector(gm, j))))
        .collect();
    Matrix::from_columns(gm * h.gamma.gens(), &cols)
}

pub fn comodule_to_descent(c: &Comodule) -> Result<ModDescentDatum> {
    let alpha = alpha_from_coaction(&c.hopf, c.module().gens(), &c.coaction.matrix);
    ModDescentDatum::new(c.hopf.clone(), c.m.clone(), alpha)
        .map_err(|e| Error::Invariant(format!("descent datum of a valid comodule: {e}")))
}

pub fn descent_to_comodule(d: &ModDescentDatum) -> Result<Comodule> {
    let psi = coaction_from_alpha(&d.hopf, d.m.module.gens(), &d.alpha.matrix);
    Comodule::new(d.hopf.clone(), d.m.clone(), psi)
        .map_err(|e| Error::Invariant(format!("comodule of a valid descent datum: {e}")))
}
