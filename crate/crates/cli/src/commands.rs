//! One function per command. Each returns a verdict and a witness; errors are
//! turned into reports by the caller.

use std::sync::Arc;

use descent_core::cat::{is_fibration, FinCat};
use descent_core::descent::{cech_cohomology, holim_crosscheck, DescentContext};
use descent_core::hopf::{
    amitsur_check, comodule_cokernel, comodule_to_descent, counterexample_nonabelian,
    descent_to_comodule, AModule, ComoduleMap, FpModule, Matrix, RingMap,
};
use descent_core::pshgrpd::{
    is_local_we, local_fibration_failure, stack_failure, LocalWeVerdict, PshGrpd, PshGrpdMap,
};
use descent_core::sites::{sheaf_failure, PshSet};
use descent_core::slice::{
    b_gamma_counit, build_slice_site, functor_b, functor_gamma, gamma_b_unit,
};
use descent_core::Limits;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::build::{self, require};
use crate::document::Document;
use crate::error::{CliError, CliResult};
use crate::report::Verdict;

#[derive(Debug, Clone)]
pub struct Options {
    pub depth: usize,
    pub bound: usize,
    pub p: i64,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            depth: 2,
            bound: 3,
            p: 3,
        }
    }
}

pub const COMMANDS: [&str; 16] = [
    "validate",
    "is-sheaf",
    "is-stack",
    "is-fibration",
    "is-local-we",
    "is-local-fib",
    "bgamma-roundtrip",
    "descent-roundtrip",
    "holim-crosscheck",
    "cech-cohomology",
    "comodule-check",
    "comodule-descent-roundtrip",
    "comodule-cokernel",
    "amitsur-check",
    "counterexample-nonabelian",
    "fixtures",
];

type Outcome = CliResult<(Verdict, Value)>;

pub fn dispatch(command: &str, doc: &Document, opts: &Options, limits: &Limits) -> Outcome {
    match command {
        "validate" => validate(doc, limits),
        "is-sheaf" => is_sheaf(doc, limits),
        "is-stack" => is_stack(doc, limits),
        "is-fibration" => is_fibration_cmd(doc, limits),
        "is-local-we" => is_local_we_cmd(doc, opts, limits),
        "is-local-fib" => is_local_fib(doc, limits),
        "bgamma-roundtrip" => bgamma_roundtrip(doc, opts, limits),
        "descent-roundtrip" => descent_roundtrip(doc, opts, limits),
        "holim-crosscheck" => holim(doc, opts, limits),
        "cech-cohomology" => cohomology(doc, limits),
        "comodule-check" => comodule_check(doc),
        "comodule-descent-roundtrip" => comodule_descent_roundtrip(doc),
        "comodule-cokernel" => cokernel(doc),
        "amitsur-check" => amitsur(doc),
        "counterexample-nonabelian" => counterexample(opts, limits),
        "fixtures" => Ok((
            Verdict::Pass,
            json!({ "documents": crate::emit::all_fixtures(opts.p, limits)? }),
        )),
        other => Err(CliError::schema(
            "command",
            format!("unknown command `{other}`"),
        )),
    }
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(
        v.iter()
            .map(|x| match i64::try_from(x) {
                Ok(n) => json!(n),
                Err(_) => json!(x.to_string()),
            })
            .collect(),
    )
}

fn matrix(a: &Matrix) -> Value {
    Value::Array((0..a.rows()).map(|i| ints(a.row(i))).collect())
}

/// `Z/2 ⊕ Z`-style description of a module from its invariant factors.
pub fn describe_group(factors: &[BigInt]) -> String {
    if factors.is_empty() {
        return "0".into();
    }
    factors
        .iter()
        .map(|d| {
            if d == &BigInt::from(0) {
                "Z".to_string()
            } else {
                format!("Z/{d}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ⊕ ")
}

fn module(m: &FpModule) -> Value {
    json!({
        "group": describe_group(&m.invariant_factors()),
        "invariant_factors": ints(&m.invariant_factors()),
    })
}

fn comodule_map(f: &ComoduleMap) -> Value {
    json!({
        "domain": module(f.dom.module()),
        "domain_coaction": matrix(&f.dom.coaction.matrix),
        "codomain": module(f.cod.module()),
        "codomain_coaction": matrix(&f.cod.coaction.matrix),
        "matrix": matrix(&f.map.matrix),
    })
}

/// Checks every present section; a section that fails its laws is a negative
/// verdict rather than an error.
fn validate(doc: &Document, limits: &Limits) -> Outcome {
    let mut sections = Vec::new();
    let mut all_valid = true;
    let mut check = |name: &str, result: CliResult<()>| -> CliResult<()> {
        match result {
            Ok(()) => sections.push(json!({"section": name, "valid": true})),
            Err(e @ CliError::Invalid { .. }) => {
                all_valid = false;
                sections.push(json!({"section": name, "valid": false, "reason": e.to_string()}));
            }
            Err(e) => return Err(e),
        }
        Ok(())
    };
    if doc.category.is_some() {
        check("category", build::document_category(doc, limits).map(drop))?;
    }
    if doc.site.is_some() {
        check("site", build::site(doc, limits).map(drop))?;
    }
    if let Some(sec) = &doc.presheaf_set {
        check(
            "presheaf_set",
            build::document_category(doc, limits)
                .and_then(|c| build::presheaf_set(sec, &c, "presheaf_set").map(drop)),
        )?;
    }
    if doc.presheaf_grpd.is_some() {
        check(
            "presheaf_grpd",
            build::document_category(doc, limits)
                .and_then(|c| build::document_presheaf_grpd(doc, &c, limits).map(drop)),
        )?;
    }
    if doc.map.is_some() {
        check("map", build_map(doc, limits).map(drop))?;
    }
    if doc.groupoid_object.is_some() {
        check(
            "groupoid_object",
            build::groupoid_object(doc, limits).map(drop),
        )?;
    }
    if let Some(sec) = &doc.descent_datum {
        check(
            "descent_datum",
            build::groupoid_object(doc, limits).and_then(|g| {
                let ctx = DescentContext::new(&g, limits)?;
                build::descent_datum(sec, &ctx).map(drop)
            }),
        )?;
    }
    if doc.hopf_algebroid.is_some() {
        check("hopf_algebroid", build::hopf(doc).map(drop))?;
    }
    if let Some(sec) = &doc.comodule {
        check(
            "comodule",
            build::hopf(doc).and_then(|h| build::comodule(sec, &h, "comodule").map(drop)),
        )?;
    }
    if doc.module_map.is_some() {
        check(
            "module_map",
            build::hopf(doc).and_then(|h| build::module_map(doc, &h).map(drop)),
        )?;
    }
    if doc.abelian_presheaf.is_some() {
        check(
            "abelian_presheaf",
            build::site(doc, limits).and_then(|s| build::abelian_presheaf(doc, &s).map(drop)),
        )?;
    }
    if let Some(sec) = &doc.ring_map {
        check("ring_map", build::ring_map(sec).map(drop))?;
    }
    if doc.module.is_some() {
        check("module", amitsur_inputs(doc).map(drop))?;
    }
    Ok((
        Verdict::from_bool(all_valid),
        json!({ "sections": sections }),
    ))
}

fn build_map(doc: &Document, limits: &Limits) -> CliResult<PshGrpdMap> {
    match &doc.site {
        Some(_) => {
            let site = build::site(doc, limits)?;
            build::map(doc, &site.cat().clone(), Some(&site), limits)
        }
        None => build::map(doc, &build::document_category(doc, limits)?, None, limits),
    }
}

fn is_sheaf(doc: &Document, limits: &Limits) -> Outcome {
    let site = build::site(doc, limits)?;
    let f = build::presheaf_set(
        require(&doc.presheaf_set, "presheaf_set")?,
        site.cat(),
        "presheaf_set",
    )?;
    Ok(match sheaf_failure(&f, &site, limits)? {
        None => (
            Verdict::Pass,
            json!({ "covers_checked": site.basis().len() }),
        ),
        Some(failure) => (Verdict::Fail, json!({ "failure": failure.describe(&f) })),
    })
}

fn is_stack(doc: &Document, limits: &Limits) -> Outcome {
    let site = build::site(doc, limits)?;
    let f = build::document_presheaf_grpd(doc, site.cat(), limits)?;
    Ok(match stack_failure(&f, &site, limits)? {
        None => (
            Verdict::Pass,
            json!({ "covers_checked": site.basis().len() }),
        ),
        Some(failure) => (
            Verdict::Fail,
            json!({
                "cover": failure.cover.describe(site.cat()),
                "reason": failure.reason,
                "descent_datum_without_preimage": failure.witness,
            }),
        ),
    })
}

fn is_fibration_cmd(doc: &Document, limits: &Limits) -> Outcome {
    let phi = build_map(doc, limits)?;
    let c = phi.source.cat().clone();
    let mut failing = Vec::new();
    for x in c.objects() {
        if !is_fibration(&phi.components[x])? {
            failing.push(c.object_name(x).to_string());
        }
    }
    Ok((
        Verdict::from_bool(failing.is_empty()),
        json!({ "non_fibration_components": failing }),
    ))
}

fn is_local_we_cmd(doc: &Document, opts: &Options, limits: &Limits) -> Outcome {
    let site = build::site(doc, limits)?;
    let phi = build::map(doc, site.cat(), Some(&site), limits)?;
    Ok(match is_local_we(&phi, &site, opts.depth)? {
        LocalWeVerdict::Positive => (Verdict::Pass, json!({ "depth": opts.depth })),
        LocalWeVerdict::NegativeAtDepth {
            depth,
            condition,
            detail,
        } => (
            Verdict::Fail,
            json!({
                "depth": depth,
                "condition": condition,
                "detail": detail,
                "note": "no local witness within the refinement depth; not a proof of failure",
            }),
        ),
    })
}

fn is_local_fib(doc: &Document, limits: &Limits) -> Outcome {
    let site = build::site(doc, limits)?;
    let phi = build::map(doc, site.cat(), Some(&site), limits)?;
    Ok(match local_fibration_failure(&phi, &site, limits)? {
        None => (
            Verdict::Pass,
            json!({ "covers_checked": site.basis().len() }),
        ),
        Some(reason) => (Verdict::Fail, json!({ "reason": reason })),
    })
}

/// Presheaves checked by `bgamma-roundtrip` besides the terminal one and the
/// representables: a fixed-seed sample with values of size at most `bound`.
const BGAMMA_SAMPLES: usize = 48;

fn bgamma_roundtrip(doc: &Document, opts: &Options, limits: &Limits) -> Outcome {
    let site = build::site(doc, limits)?;
    let m = match &doc.presheaf_grpd {
        Some(_) => build::document_presheaf_grpd(doc, site.cat(), limits)?,
        None => PshGrpd::constant(site.cat().clone(), Arc::new(FinCat::terminal()), &[])?,
    };
    let slice = build_slice_site(&site, &m, limits)?;
    let sc = slice.cat();
    let mut all = vec![PshSet::terminal(sc.clone())];
    all.extend(
        sc.objects()
            .filter(|&o| {
                sc.objects()
                    .all(|y| sc.hom(y, o).len() <= REPRESENTABLE_LIMIT)
            })
            .map(|o| PshSet::representable(sc.clone(), o)),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..BGAMMA_SAMPLES {
        all.push(PshSet::random_bounded(sc, opts.bound, &mut rng, limits)?);
    }
    let mut failures = Vec::new();
    for (n, g) in all.iter().enumerate() {
        let bg = functor_b(&slice, g)?;
        let gbg = functor_gamma(&slice, &bg)?;
        let unit = gamma_b_unit(&slice, g, &bg, &gbg)?;
        let bgbg = functor_b(&slice, &gbg)?;
        let counit = b_gamma_counit(&slice, &bgbg, &bg)?;
        let unit_ok = unit.is_iso(g, &gbg);
        let counit_ok = counit.components.iter().all(|f| f.is_isomorphism());
        if !(unit_ok && counit_ok) {
            failures.push(json!({"presheaf": n, "unit_iso": unit_ok, "counit_iso": counit_ok}));
        }
    }
    Ok((
        Verdict::from_bool(failures.is_empty()),
        json!({
            "slice_objects": slice.cat().num_objects(),
            "slice_morphisms": slice.cat().num_morphisms(),
            "bound": opts.bound,
            "presheaves_checked": all.len(),
            "failures": failures,
        }),
    ))
}

/// Representables with a larger value are left out of round trips.
const REPRESENTABLE_LIMIT: usize = 256;

/// Descent data given in the document or all of them up to `bound`; in the
/// other direction the terminal presheaf and the small representables.
fn descent_roundtrip(doc: &Document, opts: &Options, limits: &Limits) -> Outcome {
    let g = build::groupoid_object(doc, limits)?;
    let ctx = DescentContext::new(&g, limits)?;
    let data = match &doc.descent_datum {
        Some(sec) => vec![build::descent_datum(sec, &ctx)?],
        None => ctx.enumerate_descent_data(opts.bound, limits)?,
    };
    let mut failures = Vec::new();
    for (n, d) in data.iter().enumerate() {
        let f = ctx.descent_to_sheaf(d)?;
        if ctx.sheaf_to_descent(&f)? != *d {
            failures.push(json!({"descent_datum": n}));
        }
    }
    let tc = ctx.total.cat();
    let mut sheaves = vec![PshSet::terminal(tc.clone())];
    sheaves.extend(
        tc.objects()
            .filter(|&o| {
                tc.objects()
                    .all(|y| tc.hom(y, o).len() <= REPRESENTABLE_LIMIT)
            })
            .map(|o| PshSet::representable(tc.clone(), o)),
    );
    for (n, f) in sheaves.iter().enumerate() {
        let d = ctx.sheaf_to_descent(f)?;
        if ctx.descent_to_sheaf(&d)? != *f {
            failures.push(json!({"presheaf": n}));
        }
    }
    Ok((
        Verdict::from_bool(failures.is_empty()),
        json!({
            "descent_data_checked": data.len(),
            "presheaves_checked": sheaves.len(),
            "failures": failures,
        }),
    ))
}

fn holim(doc: &Document, opts: &Options, limits: &Limits) -> Outcome {
    let g = build::groupoid_object(doc, limits)?;
    let ctx = DescentContext::new(&g, limits)?;
    let h = holim_crosscheck(&ctx, opts.bound, limits)?;
    Ok((
        Verdict::from_bool(h.is_isomorphism()),
        json!({
            "bound": opts.bound,
            "tot2_objects": h.tot.cat.num_objects(),
            "tot2_morphisms": h.tot.cat.num_morphisms(),
            "descent_objects": h.descent.cat.num_objects(),
            "descent_morphisms": h.descent.cat.num_morphisms(),
            "comparison_is_isomorphism": h.is_isomorphism(),
        }),
    ))
}

/// Čech cohomology of every basis cover that is not an identity cover.
fn cohomology(doc: &Document, limits: &Limits) -> Outcome {
    let site = build::site(doc, limits)?;
    let a = build::abelian_presheaf(doc, &site)?;
    let c = site.cat();
    let mut covers = Vec::new();
    for cover in site.basis() {
        if cover.legs.len() == 1 && c.is_identity(cover.legs[0]) {
            continue;
        }
        let h = cech_cohomology(&site, cover, &a)?;
        let groups: Vec<Value> = h
            .invariant_factors()
            .iter()
            .enumerate()
            .map(|(n, f)| json!({"degree": n, "group": describe_group(f), "invariant_factors": ints(f)}))
            .collect();
        covers.push(json!({"cover": cover.describe(c), "cohomology": groups}));
    }
    Ok((Verdict::Pass, json!({ "covers": covers })))
}

fn comodule_check(doc: &Document) -> Outcome {
    let built = build::hopf(doc)
        .and_then(|h| build::comodule(require(&doc.comodule, "comodule")?, &h, "comodule"));
    match built {
        Ok(c) => Ok((
            Verdict::Pass,
            json!({
                "module": module(c.module()),
                "coaction": matrix(&c.coaction.matrix),
            }),
        )),
        Err(e @ CliError::Invalid { .. }) => {
            Ok((Verdict::Fail, json!({ "reason": e.to_string() })))
        }
        Err(e) => Err(e),
    }
}

fn comodule_descent_roundtrip(doc: &Document) -> Outcome {
    let h = build::hopf(doc)?;
    let c = build::comodule(require(&doc.comodule, "comodule")?, &h, "comodule")?;
    let d = comodule_to_descent(&c)?;
    let back = descent_to_comodule(&d)?;
    let ok = back.coaction.agrees_with(&c.coaction);
    Ok((
        Verdict::from_bool(ok),
        json!({
            "alpha": matrix(&d.alpha.matrix),
            "coaction": matrix(&c.coaction.matrix),
            "recovered_coaction": matrix(&back.coaction.matrix),
            "full_cocycle_defect_at_generator": d.pentagon_defect()?,
        }),
    ))
}

fn cokernel(doc: &Document) -> Outcome {
    let h = build::hopf(doc)?;
    let f = build::module_map(doc, &h)?;
    let q = comodule_cokernel(&f)?;
    Ok((
        Verdict::Pass,
        json!({
            "map_is_monomorphism": f.is_monomorphism(),
            "cokernel": module(q.cod.module()),
            "cokernel_coaction": matrix(&q.cod.coaction.matrix),
            "projection": matrix(&q.map.matrix),
        }),
    ))
}

/// `ring_map` or else the left unit of `hopf_algebroid`; `module` or else the
/// comodule's module or else the domain algebra itself.
fn amitsur_inputs(doc: &Document) -> CliResult<(RingMap, AModule)> {
    let (f, hopf) = match &doc.ring_map {
        Some(sec) => (build::ring_map(sec)?, None),
        None => {
            let h = build::hopf(doc)?;
            (h.eta_l.clone(), Some(h))
        }
    };
    let m = if let Some(sec) = &doc.module {
        build::a_module(&f.dom, &sec.module, &sec.action, "module")?
    } else if let (Some(sec), Some(h)) = (&doc.comodule, &hopf) {
        build::comodule(sec, h, "comodule")?.m
    } else {
        RingMap::identity(&f.dom).codomain_as_module()
    };
    Ok((f, m))
}

fn amitsur(doc: &Document) -> Outcome {
    let (f, m) = amitsur_inputs(doc)?;
    let r = amitsur_check(&f, &m)?;
    Ok((
        Verdict::from_bool(r.exact()),
        json!({
            "injective": r.injective,
            "exact_in_middle": r.exact_in_middle,
        }),
    ))
}

fn counterexample(opts: &Options, limits: &Limits) -> Outcome {
    let ex = counterexample_nonabelian(opts.p, limits)?;
    let rejected: Vec<Value> = ex
        .rejected_units
        .iter()
        .map(|(u, why)| json!({"unit": u, "reason": why}))
        .collect();
    Ok((
        Verdict::from_bool(ex.holds()),
        json!({
            "p": ex.p,
            "i": comodule_map(&ex.i),
            "i_prime": comodule_map(&ex.i_prime),
            "r": comodule_map(&ex.r),
            "i_is_monomorphism": ex.i.is_monomorphism(),
            "i_prime_is_monomorphism": ex.i_prime.is_monomorphism(),
            "cokernel_of_i": comodule_map(&ex.coker_i),
            "cokernel_of_i_prime": comodule_map(&ex.coker_i_prime),
            "isomorphism_search": {
                "rejected_units": rejected,
                "isomorphism_found": ex.twisted_iso.is_some(),
            },
        }),
    ))
}
