//! Conversion of document sections into checked core objects.

use std::collections::BTreeMap;
use std::sync::Arc;

use descent_core::cat::{FinCat, Functor, PullbackCone};
use descent_core::descent::{AbPresheaf, DescentContext, SheafDescentDatum};
use descent_core::fixtures::all_pullbacks;
use descent_core::hopf::{
    AModule, AlgebraObject, Base, Comodule, ComoduleMap, FpModule, HopfAlgebroid, Matrix,
    RawHopfAlgebroid, RingMap, Vector,
};
use descent_core::pshgrpd::{cech_groupoid_psh, GroupoidObject, PshGrpd, PshGrpdMap};
use descent_core::sites::{Cover, PshSet, Site};
use descent_core::Limits;
use num_bigint::BigInt;

use crate::document::*;
use crate::error::{CliError, CliResult};

pub fn require<'a, T>(section: &'a Option<T>, name: &str) -> CliResult<&'a T> {
    section.as_ref().ok_or_else(|| CliError::missing(name))
}

fn lookup<T>(found: descent_core::Result<T>, field: &str) -> CliResult<T> {
    found.map_err(|e| CliError::schema(field, e.to_string()))
}

pub fn category(sec: &CategorySection, field: &str, limits: &Limits) -> CliResult<FinCat> {
    let built = match sec {
        CategorySection::Poset { poset } => {
            let elements: Vec<&str> = poset.elements.iter().map(String::as_str).collect();
            let leq: Vec<(&str, &str)> = poset
                .leq
                .iter()
                .map(|[a, b]| (a.as_str(), b.as_str()))
                .collect();
            FinCat::poset(&elements, &leq)
        }
        CategorySection::FiniteSets { finite_sets } => {
            let sizes: Vec<(&str, usize)> = finite_sets
                .iter()
                .map(|s| (s.name.as_str(), s.size))
                .collect();
            FinCat::finite_sets(&sizes)
        }
        CategorySection::Explicit(raw) => FinCat::from_raw(raw, limits),
    };
    built.map_err(CliError::in_section(field))
}

pub fn document_category(doc: &Document, limits: &Limits) -> CliResult<Arc<FinCat>> {
    Ok(Arc::new(category(
        require(&doc.category, "category")?,
        "category",
        limits,
    )?))
}

pub fn site(doc: &Document, limits: &Limits) -> CliResult<Site> {
    let cat = document_category(doc, limits)?;
    let sec = require(&doc.site, "site")?;
    let c = &*cat;
    let mut basis = Vec::with_capacity(sec.covers.len());
    for (n, cv) in sec.covers.iter().enumerate() {
        let field = format!("site.covers[{n}]");
        basis.push(Cover {
            target: lookup(c.object_by_name(&cv.target), &field)?,
            legs: cv
                .legs
                .iter()
                .map(|l| lookup(c.morphism_by_name(l), &field))
                .collect::<CliResult<_>>()?,
        });
    }
    let table = match &sec.pullbacks {
        None => all_pullbacks(c, limits).map_err(CliError::in_section("site"))?,
        Some(list) => {
            let mut table = BTreeMap::new();
            for (n, pb) in list.iter().enumerate() {
                let field = format!("site.pullbacks[{n}]");
                let m = |name: &str| lookup(c.morphism_by_name(name), &field);
                let cone = PullbackCone {
                    apex: lookup(c.object_by_name(&pb.apex), &field)?,
                    p1: m(&pb.p1)?,
                    p2: m(&pb.p2)?,
                };
                table.insert((m(&pb.f)?, m(&pb.g)?), cone);
            }
            table
        }
    };
    Site::new(cat, table, basis, limits).map_err(CliError::in_section("site"))
}

/// A presheaf of sets on `cat`, with names resolved against `cat`.
pub fn presheaf_set(sec: &PresheafSetSection, cat: &Arc<FinCat>, field: &str) -> CliResult<PshSet> {
    let c = &**cat;
    for name in sec.values.keys() {
        lookup(c.object_by_name(name), &format!("{field}.values"))?;
    }
    for name in sec.restrict.keys() {
        lookup(c.morphism_by_name(name), &format!("{field}.restrict"))?;
    }
    let labels: Vec<Vec<String>> = c
        .objects()
        .map(|o| {
            sec.values
                .get(c.object_name(o))
                .cloned()
                .unwrap_or_default()
        })
        .collect();
    let mut restrict = Vec::with_capacity(c.num_morphisms());
    for m in c.morphisms() {
        let (a, b) = (c.src(m), c.tgt(m));
        if c.is_identity(m) {
            restrict.push((0..labels[a].len()).collect());
            continue;
        }
        let name = c.morphism_name(m);
        let f = format!("{field}.restrict.{name}");
        let table = match sec.restrict.get(name) {
            Some(t) => t,
            None if labels[b].is_empty() => {
                restrict.push(Vec::new());
                continue;
            }
            None => return Err(CliError::schema(f, "restriction table is missing")),
        };
        if table.len() != labels[b].len() {
            return Err(CliError::schema(
                f,
                format!(
                    "expected {} entries, found {}",
                    labels[b].len(),
                    table.len()
                ),
            ));
        }
        let row = table
            .iter()
            .map(|l| {
                labels[a].iter().position(|x| x == l).ok_or_else(|| {
                    CliError::schema(
                        &f,
                        format!("`{l}` is not an element over `{}`", c.object_name(a)),
                    )
                })
            })
            .collect::<CliResult<Vec<usize>>>()?;
        restrict.push(row);
    }
    PshSet::new(cat.clone(), labels, restrict).map_err(CliError::in_section(field))
}

/// A functor given by names; identities of `dom` may be omitted.
pub fn functor(
    spec: &FunctorSpec,
    dom: &Arc<FinCat>,
    cod: &Arc<FinCat>,
    field: &str,
) -> CliResult<Functor> {
    let obj = dom
        .objects()
        .map(|o| {
            let name = dom.object_name(o);
            let image = spec.objects.get(name).ok_or_else(|| {
                CliError::schema(format!("{field}.objects"), format!("no image for `{name}`"))
            })?;
            lookup(cod.object_by_name(image), &format!("{field}.objects"))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mor = dom
        .morphisms()
        .map(|u| {
            let name = dom.morphism_name(u);
            match spec.morphisms.get(name) {
                Some(image) => lookup(cod.morphism_by_name(image), &format!("{field}.morphisms")),
                None if dom.is_identity(u) => Ok(cod.identity(obj[dom.src(u)])),
                None => Err(CliError::schema(
                    format!("{field}.morphisms"),
                    format!("no image for `{name}`"),
                )),
            }
        })
        .collect::<CliResult<Vec<_>>>()?;
    Functor::new(dom.clone(), cod.clone(), obj, mor).map_err(CliError::in_section(field))
}

pub fn presheaf_grpd(
    sec: &PresheafGrpdSection,
    cat: &Arc<FinCat>,
    field: &str,
    limits: &Limits,
) -> CliResult<PshGrpd> {
    match sec {
        PresheafGrpdSection::Constant(k) => {
            let g = Arc::new(category(&k.constant, &format!("{field}.constant"), limits)?);
            let at = k
                .terminal_at
                .iter()
                .map(|n| lookup(cat.object_by_name(n), &format!("{field}.terminal_at")))
                .collect::<CliResult<Vec<_>>>()?;
            PshGrpd::constant(cat.clone(), g, &at).map_err(CliError::in_section(field))
        }
        PresheafGrpdSection::Explicit(e) => {
            let c = &**cat;
            for name in e.values.keys() {
                lookup(c.object_by_name(name), &format!("{field}.values"))?;
            }
            for name in e.restrict.keys() {
                lookup(c.morphism_by_name(name), &format!("{field}.restrict"))?;
            }
            let values = c
                .objects()
                .map(|o| {
                    let name = c.object_name(o);
                    let f = format!("{field}.values.{name}");
                    let v = e
                        .values
                        .get(name)
                        .ok_or_else(|| CliError::schema(&f, "value is missing"))?;
                    Ok(Arc::new(category(v, &f, limits)?))
                })
                .collect::<CliResult<Vec<_>>>()?;
            let restrict =
                c.morphisms()
                    .map(|m| {
                        let (dom, cod) = (&values[c.tgt(m)], &values[c.src(m)]);
                        if c.is_identity(m) {
                            return Ok(Functor::identity(dom.clone()));
                        }
                        let name = c.morphism_name(m);
                        let f = format!("{field}.restrict.{name}");
                        let spec = e.restrict.get(name).ok_or_else(|| {
                            CliError::schema(&f, "restriction functor is missing")
                        })?;
                        functor(spec, dom, cod, &f)
                    })
                    .collect::<CliResult<Vec<_>>>()?;
            PshGrpd::new(cat.clone(), values, restrict).map_err(CliError::in_section(field))
        }
    }
}

pub fn document_presheaf_grpd(
    doc: &Document,
    cat: &Arc<FinCat>,
    limits: &Limits,
) -> CliResult<PshGrpd> {
    presheaf_grpd(
        require(&doc.presheaf_grpd, "presheaf_grpd")?,
        cat,
        "presheaf_grpd",
        limits,
    )
}

/// The map section; `site` is needed only for the Čech form.
pub fn map(
    doc: &Document,
    cat: &Arc<FinCat>,
    site: Option<&Site>,
    limits: &Limits,
) -> CliResult<PshGrpdMap> {
    match require(&doc.map, "map")? {
        MapSection::Cech { cech_cover } => {
            let site = site.ok_or_else(|| CliError::missing("site"))?;
            let cover = site.basis().get(*cech_cover).ok_or_else(|| {
                CliError::schema(
                    "map.cech_cover",
                    format!("the site has {} basis covers", site.basis().len()),
                )
            })?;
            cech_groupoid_psh(site, cover, limits).map_err(CliError::in_section("map"))
        }
        MapSection::ToTerminal { to_terminal } => {
            if !to_terminal {
                return Err(CliError::schema("map.to_terminal", "must be true"));
            }
            Ok(PshGrpdMap::to_terminal(&document_presheaf_grpd(
                doc, cat, limits,
            )?))
        }
        MapSection::Explicit(e) => {
            let source = document_presheaf_grpd(doc, cat, limits)?;
            let target = presheaf_grpd(&e.target, cat, "map.target", limits)?;
            for name in e.components.keys() {
                lookup(cat.object_by_name(name), "map.components")?;
            }
            let components = cat
                .objects()
                .map(|o| {
                    let name = cat.object_name(o);
                    let f = format!("map.components.{name}");
                    let spec = e
                        .components
                        .get(name)
                        .ok_or_else(|| CliError::schema(&f, "component is missing"))?;
                    functor(spec, source.value(o), target.value(o), &f)
                })
                .collect::<CliResult<Vec<_>>>()?;
            PshGrpdMap::new(source, target, components).map_err(CliError::in_section("map"))
        }
    }
}

pub fn groupoid_object(doc: &Document, limits: &Limits) -> CliResult<GroupoidObject> {
    let site = site(doc, limits)?;
    let sec = require(&doc.groupoid_object, "groupoid_object")?;
    let c = site.cat().clone();
    let o = |n: &str| lookup(c.object_by_name(n), "groupoid_object");
    let m = |n: &str| lookup(c.morphism_by_name(n), "groupoid_object");
    GroupoidObject::new(
        site,
        o(&sec.x0)?,
        o(&sec.x1)?,
        m(&sec.d)?,
        m(&sec.r)?,
        m(&sec.i)?,
        m(&sec.mu)?,
        m(&sec.inv)?,
        limits,
    )
    .map_err(CliError::in_section("groupoid_object"))
}

pub fn descent_datum(
    sec: &DescentDatumSection,
    ctx: &DescentContext,
) -> CliResult<SheafDescentDatum> {
    let f0 = presheaf_set(&sec.f0, ctx.base.cat(), "descent_datum.f0")?;
    let c = ctx.group.site.cat();
    let mut alpha = Vec::with_capacity(ctx.arrows.len());
    for (k, &(y, u)) in ctx.arrows.iter().enumerate() {
        let (oname, aname) = (c.object_name(y), ctx.m.value(y).morphism_name(u));
        let field = format!("descent_datum.alpha[{oname}, {aname}]");
        let spec = sec
            .alpha
            .iter()
            .find(|g| g.object == oname && g.arrow == aname)
            .ok_or_else(|| CliError::schema(&field, "gluing bijection is missing"))?;
        let (s, t) = ctx.ends(k);
        if spec.table.len() != f0.size(s) {
            return Err(CliError::schema(
                field,
                format!(
                    "expected {} entries, found {}",
                    f0.size(s),
                    spec.table.len()
                ),
            ));
        }
        let row = spec
            .table
            .iter()
            .map(|l| {
                f0.labels(t)
                    .iter()
                    .position(|x| x == l)
                    .ok_or_else(|| CliError::schema(&field, format!("`{l}` is not an element")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        alpha.push(row);
    }
    if sec.alpha.len() != ctx.arrows.len() {
        return Err(CliError::schema(
            "descent_datum.alpha",
            format!(
                "expected {} bijections, found {}",
                ctx.arrows.len(),
                sec.alpha.len()
            ),
        ));
    }
    ctx.validate_descent_datum(f0, alpha)
        .map_err(CliError::in_section("descent_datum"))
}

pub fn matrix(raw: &RawMatrix, rows: usize, cols: usize, field: &str) -> CliResult<Matrix> {
    if raw.len() != rows && !(raw.is_empty() && cols == 0) {
        return Err(CliError::schema(
            field,
            format!("expected {rows} rows, found {}", raw.len()),
        ));
    }
    if let Some(n) = raw.iter().position(|r| r.len() != cols) {
        return Err(CliError::schema(
            field,
            format!("row {n} has {} entries, expected {cols}", raw[n].len()),
        ));
    }
    let mut columns = vec![Vec::with_capacity(rows); cols];
    for r in raw {
        for (j, x) in r.iter().enumerate() {
            columns[j].push(x.0.clone());
        }
    }
    Ok(Matrix::from_columns(rows, &columns))
}

fn vector(raw: &[Int], len: usize, field: &str) -> CliResult<Vector> {
    if raw.len() != len {
        return Err(CliError::schema(
            field,
            format!("expected {len} entries, found {}", raw.len()),
        ));
    }
    Ok(raw.iter().map(|x| x.0.clone()).collect())
}

pub fn base(s: &str, field: &str) -> CliResult<Base> {
    let s = s.trim();
    if s == "Z" {
        return Ok(Base::Integers);
    }
    s.strip_prefix("Z/")
        .and_then(|n| n.trim().parse::<BigInt>().ok())
        .map(Base::Mod)
        .ok_or_else(|| CliError::schema(field, format!("`{s}` is neither `Z` nor `Z/n`")))
}

pub fn module(spec: &ModuleSpec, field: &str) -> CliResult<FpModule> {
    let b = base(&spec.base, &format!("{field}.base"))?;
    let cols = spec.relations.first().map_or(0, |r| r.len());
    let rel = matrix(
        &spec.relations,
        spec.generators,
        cols,
        &format!("{field}.relations"),
    )?;
    FpModule::new(b, spec.generators, rel).map_err(CliError::in_section(field))
}

pub fn algebra(spec: &AlgebraSpec, field: &str) -> CliResult<AlgebraObject> {
    let m = module(&spec.module, &format!("{field}.module"))?;
    let n = m.gens();
    let unit = vector(&spec.unit, n, &format!("{field}.unit"))?;
    if spec.table.len() != n {
        return Err(CliError::schema(
            format!("{field}.table"),
            format!("expected {n} rows, found {}", spec.table.len()),
        ));
    }
    let table = spec
        .table
        .iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != n {
                return Err(CliError::schema(
                    format!("{field}.table[{i}]"),
                    format!("expected {n} products, found {}", row.len()),
                ));
            }
            row.iter()
                .enumerate()
                .map(|(j, v)| vector(v, n, &format!("{field}.table[{i}][{j}]")))
                .collect()
        })
        .collect::<CliResult<Vec<Vec<Vector>>>>()?;
    AlgebraObject::new(m, unit, table).map_err(CliError::in_section(field))
}

pub fn raw_hopf(sec: &HopfSection) -> CliResult<RawHopfAlgebroid> {
    let f = "hopf_algebroid";
    let a = algebra(&sec.a, &format!("{f}.a"))?;
    let gamma = algebra(&sec.gamma, &format!("{f}.gamma"))?;
    let (na, ng) = (a.gens(), gamma.gens());
    Ok(RawHopfAlgebroid {
        eta_l: matrix(&sec.eta_l, ng, na, &format!("{f}.eta_l"))?,
        eta_r: matrix(&sec.eta_r, ng, na, &format!("{f}.eta_r"))?,
        counit: matrix(&sec.counit, na, ng, &format!("{f}.counit"))?,
        delta: matrix(&sec.delta, ng * ng, ng, &format!("{f}.delta"))?,
        conjugation: sec
            .conjugation
            .as_ref()
            .map(|c| matrix(c, ng, ng, &format!("{f}.conjugation")))
            .transpose()?,
        a,
        gamma,
    })
}

pub fn hopf(doc: &Document) -> CliResult<Arc<HopfAlgebroid>> {
    let raw = raw_hopf(require(&doc.hopf_algebroid, "hopf_algebroid")?)?;
    Ok(Arc::new(
        raw.validate()
            .map_err(CliError::in_section("hopf_algebroid"))?,
    ))
}

pub fn a_module(
    algebra: &AlgebraObject,
    spec: &ModuleSpec,
    action: &Option<Vec<RawMatrix>>,
    field: &str,
) -> CliResult<AModule> {
    let m = module(spec, &format!("{field}.module"))?;
    let n = m.gens();
    match action {
        None => {
            if algebra.gens() != 1 {
                return Err(CliError::schema(
                    format!("{field}.action"),
                    "required unless the algebra is its base ring",
                ));
            }
            Ok(AModule::over_base(m))
        }
        Some(list) => {
            let mats = list
                .iter()
                .enumerate()
                .map(|(i, a)| matrix(a, n, n, &format!("{field}.action[{i}]")))
                .collect::<CliResult<Vec<_>>>()?;
            AModule::new(algebra, m, mats).map_err(CliError::in_section(field))
        }
    }
}

pub fn comodule(sec: &ComoduleSection, h: &Arc<HopfAlgebroid>, field: &str) -> CliResult<Comodule> {
    let m = a_module(&h.a, &sec.module, &sec.action, field)?;
    let n = m.module.gens();
    let psi = matrix(
        &sec.coaction,
        n * h.gamma.gens(),
        n,
        &format!("{field}.coaction"),
    )?;
    Comodule::new(h.clone(), m, psi).map_err(CliError::in_section(field))
}

pub fn module_map(doc: &Document, h: &Arc<HopfAlgebroid>) -> CliResult<ComoduleMap> {
    let sec = require(&doc.module_map, "module_map")?;
    let dom = comodule(&sec.domain, h, "module_map.domain")?;
    let cod = comodule(&sec.codomain, h, "module_map.codomain")?;
    let (m, n) = (dom.module().gens(), cod.module().gens());
    let a = matrix(&sec.matrix, n, m, "module_map.matrix")?;
    ComoduleMap::new(dom, cod, a).map_err(CliError::in_section("module_map"))
}

pub fn abelian_presheaf(doc: &Document, site: &Site) -> CliResult<AbPresheaf> {
    let f = "abelian_presheaf";
    match require(&doc.abelian_presheaf, f)? {
        AbelianPresheafSection::Constant { constant } => Ok(AbPresheaf::constant(
            site,
            &module(constant, &format!("{f}.constant"))?,
        )),
        AbelianPresheafSection::Explicit(e) => {
            let c = site.cat();
            for name in e.values.keys() {
                lookup(c.object_by_name(name), &format!("{f}.values"))?;
            }
            for name in e.restrict.keys() {
                lookup(c.morphism_by_name(name), &format!("{f}.restrict"))?;
            }
            let values = c
                .objects()
                .map(|o| {
                    let name = c.object_name(o);
                    let field = format!("{f}.values.{name}");
                    let spec = e
                        .values
                        .get(name)
                        .ok_or_else(|| CliError::schema(&field, "value is missing"))?;
                    module(spec, &field)
                })
                .collect::<CliResult<Vec<_>>>()?;
            let restrict =
                c.morphisms()
                    .map(|m| {
                        let (rows, cols) = (values[c.src(m)].gens(), values[c.tgt(m)].gens());
                        if c.is_identity(m) {
                            return Ok(Matrix::identity(rows));
                        }
                        let name = c.morphism_name(m);
                        let field = format!("{f}.restrict.{name}");
                        let raw = e.restrict.get(name).ok_or_else(|| {
                            CliError::schema(&field, "restriction matrix is missing")
                        })?;
                        matrix(raw, rows, cols, &field)
                    })
                    .collect::<CliResult<Vec<_>>>()?;
            AbPresheaf::new(c.clone(), values, restrict).map_err(CliError::in_section(f))
        }
    }
}

pub fn ring_map(sec: &RingMapSection) -> CliResult<RingMap> {
    let dom = algebra(&sec.domain, "ring_map.domain")?;
    let cod = algebra(&sec.codomain, "ring_map.codomain")?;
    let a = matrix(&sec.matrix, cod.gens(), dom.gens(), "ring_map.matrix")?;
    RingMap::new(dom, cod, a).map_err(CliError::in_section("ring_map"))
}
