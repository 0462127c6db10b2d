//! Core objects as document sections, and the bundled fixture documents.

use std::collections::BTreeMap;

use descent_core::cat::FinCat;
use descent_core::fixtures;
use descent_core::hopf::{
    counterexample_nonabelian, AModule, AlgebraObject, Base, Comodule, FpModule, Matrix,
    RawHopfAlgebroid,
};
use descent_core::pshgrpd::GroupoidObject;
use descent_core::sites::{PshSet, Site};
use descent_core::Limits;

use crate::document::*;
use crate::error::{CliError, CliResult};

pub const FIXTURES: [&str; 4] = ["S2", "CIRC", "BG2", "HOPF-EPS"];

pub fn category_section(cat: &FinCat) -> CategorySection {
    CategorySection::Explicit(cat.to_raw())
}

/// The poset shorthand when every hom-set has at most one element.
pub fn poset_section(cat: &FinCat) -> Option<CategorySection> {
    let thin = cat
        .objects()
        .all(|a| cat.objects().all(|b| cat.hom(a, b).len() <= 1));
    thin.then(|| CategorySection::Poset {
        poset: PosetSpec {
            elements: cat.object_names().to_vec(),
            leq: cat
                .morphisms()
                .filter(|&m| !cat.is_identity(m))
                .map(|m| {
                    [
                        cat.object_name(cat.src(m)).to_string(),
                        cat.object_name(cat.tgt(m)).to_string(),
                    ]
                })
                .collect(),
        },
    })
}

pub fn site_section(site: &Site) -> SiteSection {
    let c = site.cat();
    let m = |x| c.morphism_name(x).to_string();
    SiteSection {
        covers: site
            .basis()
            .iter()
            .map(|cv| CoverSpec {
                target: c.object_name(cv.target).to_string(),
                legs: cv.legs.iter().map(|&l| m(l)).collect(),
            })
            .collect(),
        pullbacks: Some(
            site.pullback_table()
                .iter()
                .map(|(&(f, g), cone)| PullbackSpec {
                    f: m(f),
                    g: m(g),
                    apex: c.object_name(cone.apex).to_string(),
                    p1: m(cone.p1),
                    p2: m(cone.p2),
                })
                .collect(),
        ),
    }
}

pub fn presheaf_set_section(f: &PshSet) -> PresheafSetSection {
    let c = f.cat();
    let values = c
        .objects()
        .map(|o| (c.object_name(o).to_string(), f.labels(o).to_vec()))
        .collect();
    let restrict = c
        .morphisms()
        .filter(|&m| !c.is_identity(m))
        .map(|m| {
            let a = c.src(m);
            let row = f
                .restriction(m)
                .iter()
                .map(|&e| f.label(a, e).to_string())
                .collect();
            (c.morphism_name(m).to_string(), row)
        })
        .collect();
    PresheafSetSection { values, restrict }
}

pub fn groupoid_object_section(g: &GroupoidObject) -> GroupoidObjectSection {
    let c = g.site.cat();
    let m = |x| c.morphism_name(x).to_string();
    GroupoidObjectSection {
        x0: c.object_name(g.x0).to_string(),
        x1: c.object_name(g.x1).to_string(),
        d: m(g.d),
        r: m(g.r),
        i: m(g.i),
        mu: m(g.mu),
        inv: m(g.inv),
    }
}

fn raw_matrix(a: &Matrix) -> RawMatrix {
    (0..a.rows())
        .map(|i| a.row(i).iter().map(|x| Int(x.clone())).collect())
        .collect()
}

pub fn module_spec(m: &FpModule) -> ModuleSpec {
    ModuleSpec {
        base: match m.base() {
            Base::Integers => "Z".to_string(),
            Base::Mod(n) => format!("Z/{n}"),
        },
        generators: m.gens(),
        relations: raw_matrix(m.relations()),
    }
}

pub fn algebra_spec(a: &AlgebraObject) -> AlgebraSpec {
    let ints = |v: &[num_bigint::BigInt]| v.iter().map(|x| Int(x.clone())).collect();
    AlgebraSpec {
        module: module_spec(&a.module),
        unit: ints(&a.unit),
        table: a
            .table
            .iter()
            .map(|row| row.iter().map(|v| ints(v)).collect())
            .collect(),
    }
}

pub fn hopf_section(h: &RawHopfAlgebroid) -> HopfSection {
    HopfSection {
        a: algebra_spec(&h.a),
        gamma: algebra_spec(&h.gamma),
        eta_l: raw_matrix(&h.eta_l),
        eta_r: raw_matrix(&h.eta_r),
        counit: raw_matrix(&h.counit),
        delta: raw_matrix(&h.delta),
        conjugation: h.conjugation.as_ref().map(raw_matrix),
    }
}

fn action(algebra: &AlgebraObject, m: &AModule) -> Option<Vec<RawMatrix>> {
    (algebra.gens() != 1).then(|| m.action.iter().map(raw_matrix).collect())
}

pub fn comodule_section(c: &Comodule) -> ComoduleSection {
    ComoduleSection {
        module: module_spec(c.module()),
        action: action(&c.hopf.a, &c.m),
        coaction: raw_matrix(&c.coaction.matrix),
    }
}

fn constant_bz2(terminal_at: &[&str]) -> PresheafGrpdSection {
    PresheafGrpdSection::Constant(ConstantGrpd {
        constant: category_section(&FinCat::cyclic_group(2)),
        terminal_at: terminal_at.iter().map(|s| s.to_string()).collect(),
    })
}

fn constant_integers() -> AbelianPresheafSection {
    AbelianPresheafSection::Constant {
        constant: module_spec(&FpModule::free(Base::Integers, 1)),
    }
}

/// The constant presheaf with two sections `a` and `b` on every object.
fn constant_two_point(site: &Site) -> PshSet {
    let c = site.cat().clone();
    let labels = c
        .objects()
        .map(|_| vec!["a".to_string(), "b".to_string()])
        .collect();
    let restrict = c.morphisms().map(|_| vec![0, 1]).collect();
    PshSet::new(c, labels, restrict).expect("constant presheaf")
}

fn site_document(site: &Site, terminal_at: &[&str]) -> Document {
    Document {
        category: Some(poset_section(site.cat()).unwrap_or_else(|| category_section(site.cat()))),
        site: Some(site_section(site)),
        presheaf_set: Some(presheaf_set_section(&constant_two_point(site))),
        presheaf_grpd: Some(constant_bz2(terminal_at)),
        map: Some(MapSection::Cech { cech_cover: 0 }),
        abelian_presheaf: Some(constant_integers()),
        ..Document::default()
    }
}

fn bg2_document() -> Document {
    let g = fixtures::bg2_groupoid();
    let sizes = [("*", 1), ("G", 2), ("GG", 4)];
    Document {
        category: Some(CategorySection::FiniteSets {
            finite_sets: sizes
                .iter()
                .map(|&(name, size)| NamedSize {
                    name: name.to_string(),
                    size,
                })
                .collect(),
        }),
        site: Some(site_section(&g.site)),
        groupoid_object: Some(groupoid_object_section(&g)),
        ..Document::default()
    }
}

/// `Γ = Z[ε]/(pε, ε²)` with the comodule `(Z/p, 1+ε)` and the map
/// `x ↦ px` into `(Z/p², 1)`.
fn hopf_document(p: i64, limits: &Limits) -> CliResult<Document> {
    let ex = counterexample_nonabelian(p, limits)?;
    Ok(Document {
        hopf_algebroid: Some(hopf_section(&ex.hopf.raw)),
        comodule: Some(comodule_section(&ex.twisted)),
        module_map: Some(ModuleMapSection {
            domain: comodule_section(&ex.i_prime.dom),
            codomain: comodule_section(&ex.i_prime.cod),
            matrix: raw_matrix(&ex.i_prime.map.matrix),
        }),
        ..Document::default()
    })
}

pub fn fixture(name: &str, p: i64, limits: &Limits) -> CliResult<Document> {
    match name.to_ascii_uppercase().as_str() {
        "S2" => Ok(site_document(&fixtures::s2(), &[])),
        "CIRC" => Ok(site_document(&fixtures::circ(), &["E"])),
        "BG2" => Ok(bg2_document()),
        "HOPF-EPS" => hopf_document(p, limits),
        _ => Err(CliError::schema(
            "--fixture",
            format!(
                "unknown fixture `{name}`; expected one of {}",
                FIXTURES.join(", ")
            ),
        )),
    }
}

pub fn all_fixtures(p: i64, limits: &Limits) -> CliResult<BTreeMap<String, Document>> {
    FIXTURES
        .iter()
        .map(|n| Ok((n.to_string(), fixture(n, p, limits)?)))
        .collect()
}
