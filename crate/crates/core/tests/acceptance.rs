//! Acceptance checks, run in order with one line per criterion.

use std::sync::Arc;
use std::time::{Duration, Instant};

use descent_core::cat::FinCat;
use descent_core::descent::{cech_cohomology, holim_crosscheck, AbPresheaf, DescentContext};
use descent_core::fixtures;
use descent_core::hopf::{
    alpha_from_coaction, amitsur_check, comodule_to_descent, counterexample_nonabelian,
    descent_to_comodule, smith_normal_form, vector, AModule, AlgebraObject, Base, Comodule,
    ComoduleMap, FpModule, HopfAlgebroid, Matrix, ModDescentDatum, RingMap, Vector,
};
use descent_core::pshgrpd::{
    cech_groupoid_psh, cech_tot2, is_local_fibration, is_local_we, is_stack,
    representable_groupoid_psh, stack_failure, PshGrpd,
};
use descent_core::sites::{is_sheaf, PshMap, PshSet, Site};
use descent_core::slice::{
    b_gamma_counit, build_slice_site, functor_b, functor_gamma, gamma_b_unit, SliceSite,
};
use descent_core::Limits;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn bz2() -> Arc<FinCat> {
    Arc::new(FinCat::cyclic_group(2))
}

fn circ_bz2(site: &Site) -> PshGrpd {
    let e = site.cat().object_by_name("E").unwrap();
    PshGrpd::constant(site.cat().clone(), bz2(), &[e]).unwrap()
}

fn counterexample() -> Check {
    let limits = Limits::default();
    let ex = ok(counterexample_nonabelian(3, &limits))?;
    ensure(ex.i.is_monomorphism(), "i is not a monomorphism")?;
    ensure(ex.i_prime.is_monomorphism(), "i' is not a monomorphism")?;
    for (name, c) in [("i", &ex.coker_i), ("i'", &ex.coker_i_prime)] {
        ensure(c.is_isomorphism(), format!("coker {name} is not (Z/p, 1)"))?;
        ensure(
            c.cod.module().is_isomorphic(&FpModule::cyclic(3)),
            format!("coker {name} has the wrong module"),
        )?;
    }
    // x ↦ px on generators
    for f in [&ex.i, &ex.i_prime] {
        ensure(
            f.map.matrix == Matrix::from_rows(&[vec![3]]),
            "map is not x ↦ 3x",
        )?;
    }
    // every unit multiplication fails to be a comodule map
    for u in 1..3 {
        let f = ComoduleMap::new(
            ex.plain.clone(),
            ex.twisted.clone(),
            Matrix::from_rows(&[vec![u]]),
        );
        ensure(
            f.is_err(),
            format!("multiplication by {u} is a comodule map"),
        )?;
    }
    ensure(ex.rejected_units.len() == 2, "expected two rejected units")?;
    ensure(ex.twisted_iso.is_none(), "an isomorphism was found")?;
    ensure(ex.holds(), "counterexample does not hold")?;
    Ok("monomorphisms, cokernels ≅ (Z/3,1), units 1 and 2 rejected".into())
}

fn random_module(rng: &mut ChaCha8Rng, max_gens: usize) -> FpModule {
    let gens = rng.gen_range(0..=max_gens);
    let cols: Vec<Vector> = (0..rng.gen_range(0..=gens))
        .map(|_| {
            (0..gens)
                .map(|_| BigInt::from(rng.gen_range(-4..=6)))
                .collect()
        })
        .collect();
    FpModule::new(Base::Integers, gens, Matrix::from_columns(gens, &cols)).unwrap()
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> Matrix {
    let data: Vec<Vector> = (0..cols)
        .map(|_| {
            (0..rows)
                .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
                .collect()
        })
        .collect();
    Matrix::from_columns(rows, &data)
}

/// `m ↦ A(m)⊗1 + N(m)⊗ε`, with `N` dropped on the trivial algebroid.
fn random_coaction(rng: &mut ChaCha8Rng, h: &HopfAlgebroid, gm: usize) -> Matrix {
    let g = h.gamma.gens();
    let a = if rng.gen_bool(0.8) {
        Matrix::identity(gm)
    } else {
        random_matrix(rng, gm, gm, 2)
    };
    let n = random_matrix(rng, gm, gm, 3);
    let cols: Vec<Vector> = (0..gm)
        .map(|j| {
            let mut col = vec![BigInt::zero(); gm * g];
            for i in 0..gm {
                col[i * g] = a[(i, j)].clone();
                if g > 1 {
                    col[i * g + 1] = n[(i, j)].clone();
                }
            }
            col
        })
        .collect();
    Matrix::from_columns(gm * g, &cols)
}

fn comodule_descent() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let eps = Arc::new(ok(HopfAlgebroid::hopf_eps(3))?);
    let trivial = Arc::new(ok(HopfAlgebroid::trivial(AlgebraObject::base_ring(
        Base::Integers,
    )))?);
    let (mut total, mut valid) = (0, 0);
    for round in 0..240 {
        let h = if round % 4 == 0 { &trivial } else { &eps };
        let m = AModule::over_base(random_module(&mut rng, 2));
        let gm = m.module.gens();
        let psi = random_coaction(&mut rng, h, gm);
        let comodule = Comodule::new(h.clone(), m.clone(), psi.clone());
        let datum = ModDescentDatum::new(h.clone(), m, alpha_from_coaction(h, gm, &psi));
        ensure(
            comodule.is_ok() == datum.is_ok(),
            format!(
                "instance {round}: comodule valid {} but descent datum valid {}",
                comodule.is_ok(),
                datum.is_ok()
            ),
        )?;
        total += 1;
        if let (Ok(c), Ok(d)) = (comodule, datum) {
            valid += 1;
            let back = ok(descent_to_comodule(&d))?;
            ensure(
                back.coaction.normalized() == c.coaction.normalized(),
                format!("instance {round}: coaction changed"),
            )?;
            ensure(
                ok(comodule_to_descent(&back))?.alpha.normalized() == d.alpha.normalized(),
                format!("instance {round}: gluing changed"),
            )?;
        }
    }
    ensure(total >= 200, "too few instances")?;
    ensure(valid > 0 && valid < total, "corpus is one-sided")?;
    Ok(format!("{total} instances, {valid} valid, 100% agreement"))
}

/// The slice sites over S2, CIRC and BG2 with their names.
fn slices() -> Vec<(&'static str, SliceSite)> {
    let limits = Limits::default();
    let s2 = fixtures::s2();
    let s2_m = PshGrpd::constant(s2.cat().clone(), bz2(), &[]).unwrap();
    let circ = fixtures::circ();
    let circ_m = circ_bz2(&circ);
    let g = fixtures::bg2_groupoid();
    let bg2_m = representable_groupoid_psh(&g).unwrap();
    vec![
        ("S2", build_slice_site(&s2, &s2_m, &limits).unwrap()),
        ("CIRC", build_slice_site(&circ, &circ_m, &limits).unwrap()),
        ("BG2", build_slice_site(&g.site, &bg2_m, &limits).unwrap()),
    ]
}

const PER_SLICE: usize = 40;

/// Random presheaves with values of size at most 3 on every slice.
fn slice_corpus(slices: &[(&'static str, SliceSite)]) -> Vec<(usize, PshSet)> {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut out = Vec::new();
    for (n, (_, s)) in slices.iter().enumerate() {
        for _ in 0..PER_SLICE {
            out.push((
                n,
                PshSet::random_bounded(s.cat(), 3, &mut rng, &limits).unwrap(),
            ));
        }
    }
    out
}

fn b_gamma(slices: &[(&'static str, SliceSite)], corpus: &[(usize, PshSet)]) -> Check {
    for (k, (n, g)) in corpus.iter().enumerate() {
        let (name, s) = &slices[*n];
        let bg = ok(functor_b(s, g))?;
        let gbg = ok(functor_gamma(s, &bg))?;
        let unit = ok(gamma_b_unit(s, g, &bg, &gbg))?;
        ensure(
            unit.is_iso(g, &gbg),
            format!("{name} #{k}: G → ΓBG is not an isomorphism"),
        )?;
        let bgbg = ok(functor_b(s, &gbg))?;
        let counit = ok(b_gamma_counit(s, &bgbg, &bg))?;
        ensure(
            counit.components.iter().all(|f| f.is_isomorphism()),
            format!("{name} #{k}: BΓH → H is not an isomorphism"),
        )?;
    }
    Ok(format!("{} instances over S2, CIRC, BG2", corpus.len()))
}

fn sheaf_vs_fibration(slices: &[(&'static str, SliceSite)], corpus: &[(usize, PshSet)]) -> Check {
    let limits = Limits::default();
    let mut sheaves = 0;
    for (k, (n, g)) in corpus.iter().enumerate() {
        let (name, s) = &slices[*n];
        let sheaf = ok(is_sheaf(g, &s.site, &limits))?;
        let fib = ok(is_local_fibration(
            &ok(functor_b(s, g))?,
            &s.ambient,
            &limits,
        ))?;
        ensure(
            sheaf == fib,
            format!("{name} #{k}: sheaf {sheaf} but local fibration {fib}"),
        )?;
        sheaves += sheaf as usize;
    }
    ensure(sheaves > 0 && sheaves < corpus.len(), "corpus is one-sided")?;
    Ok(format!(
        "{} instances, {sheaves} sheaves, 100% agreement",
        corpus.len()
    ))
}

fn stacks() -> Check {
    let limits = Limits::default();
    let s2 = fixtures::s2();
    let f = ok(PshGrpd::constant(s2.cat().clone(), bz2(), &[]))?;
    ensure(
        ok(is_stack(&f, &s2, &limits))?,
        "constant BZ/2 is not a stack on S2",
    )?;
    let circ = fixtures::circ();
    let f = circ_bz2(&circ);
    let failure =
        ok(stack_failure(&f, &circ, &limits))?.ok_or("constant BZ/2 is a stack on CIRC")?;
    let witness = failure.witness.ok_or("no descent datum witness")?;
    // Tot² of the circle cover has two isomorphism classes, BZ/2(X) has one.
    let t = ok(cech_tot2(&f, &circ, &circ.basis()[0], &limits))?;
    let tot = &t.tot.cat;
    let mut classes: Vec<usize> = Vec::new();
    for o in tot.objects() {
        if !classes
            .iter()
            .any(|&r| tot.hom(r, o).iter().any(|&m| tot.is_iso(m)))
        {
            classes.push(o);
        }
    }
    ensure(
        classes.len() == 2,
        format!("{} classes of descent data", classes.len()),
    )?;
    ensure(
        classes.iter().all(|&r| tot.hom(r, r).len() == 2),
        "descent data should have automorphism group Z/2",
    )?;
    Ok(format!("S2 stack; CIRC witness {witness}"))
}

fn local_we() -> Check {
    let limits = Limits::default();
    let mut covers = 0;
    for (name, site) in [
        ("S2", fixtures::s2()),
        ("CIRC", fixtures::circ()),
        ("BG2", fixtures::bg2()),
    ] {
        for cover in site.basis() {
            let phi = ok(cech_groupoid_psh(&site, cover, &limits))?;
            ensure(
                ok(is_local_we(&phi, &site, 1))?.is_positive(),
                format!(
                    "{name}: cover {} is not a local weak equivalence",
                    cover.describe(site.cat())
                ),
            )?;
            covers += 1;
        }
    }
    Ok(format!("{covers} basis covers"))
}

fn groupoid_descent() -> Check {
    let limits = Limits::default();
    let ctx = ok(DescentContext::new(&fixtures::bg2_groupoid(), &limits))?;
    let sheaves = ok(PshSet::enumerate_bounded(ctx.total.cat(), 3, &limits))?;
    let data = ok(ctx.enumerate_descent_data(3, &limits))?;
    let mut images = Vec::with_capacity(sheaves.len());
    for f in &sheaves {
        let d = ok(ctx.sheaf_to_descent(f))?;
        ensure(data.contains(&d), "a sheaf maps outside the descent data")?;
        ensure(
            &ok(ctx.descent_to_sheaf(&d))? == f,
            "descent_to_sheaf ∘ sheaf_to_descent ≠ id",
        )?;
        images.push(d);
    }
    for d in &data {
        let f = ok(ctx.descent_to_sheaf(d))?;
        ensure(
            &ok(ctx.sheaf_to_descent(&f))? == d,
            "sheaf_to_descent ∘ descent_to_sheaf ≠ id",
        )?;
    }
    ensure(sheaves.len() == data.len(), "object counts differ")?;
    // The comparison is the identity on components, so full faithfulness is
    // equality of hom-sets.
    let mut pairs = 0;
    for (f, d) in sheaves.iter().zip(&images) {
        for (g, e) in sheaves.iter().zip(&images) {
            let mut left = ok(PshMap::enumerate(f, g, &limits))?;
            let mut right = ok(ctx.descent_homs(d, e, &limits))?;
            left.sort_by(|a, b| a.components.cmp(&b.components));
            right.sort_by(|a, b| a.components.cmp(&b.components));
            ensure(left == right, "hom-sets differ")?;
            pairs += 1;
        }
    }
    Ok(format!(
        "{} objects, {pairs} hom-sets compared",
        sheaves.len()
    ))
}

fn tot2() -> Check {
    let limits = Limits::default();
    let ctx = ok(DescentContext::new(&fixtures::bg2_groupoid(), &limits))?;
    let check = ok(holim_crosscheck(&ctx, 3, &limits))?;
    ensure(check.is_isomorphism(), "comparison is not an isomorphism")?;
    Ok(format!(
        "{} objects, {} morphisms",
        check.tot.cat.num_objects(),
        check.tot.cat.num_morphisms()
    ))
}

/// Fraction-free determinant.
fn det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let (mut sign, mut prev) = (1, 1);
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// Invariant factors from gcds of minors: `d_k = D_k / D_{k-1}`.
fn determinantal_factors(a: &[Vec<i128>], rows: usize, cols: usize) -> Vec<i128> {
    let mut out = Vec::new();
    let mut prev = 1;
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for r in subsets(rows, k) {
            for c in subsets(cols, k) {
                let minor = r
                    .iter()
                    .map(|&i| c.iter().map(|&j| a[i][j]).collect())
                    .collect();
                g = g.gcd(&det(minor));
            }
        }
        if g == 0 {
            out.extend(std::iter::repeat_n(0, rows.min(cols) - out.len()));
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

/// Invariant factors of `H^n = ker d^n / im d^{n-1}` for a complex of free
/// modules: torsion from `d^{n-1}`, free rank from the ranks of both maps.
fn alternating_oracle(dims: &[usize], maps: &[Vec<Vec<i128>>]) -> Vec<Vec<BigInt>> {
    let factors: Vec<Vec<i128>> = maps
        .iter()
        .enumerate()
        .map(|(n, m)| determinantal_factors(m, dims[n + 1], dims[n]))
        .collect();
    let rank = |n: usize| {
        factors
            .get(n)
            .map_or(0, |f| f.iter().filter(|&&x| x != 0).count())
    };
    (0..dims.len())
        .map(|n| {
            let mut h: Vec<BigInt> = if n == 0 {
                Vec::new()
            } else {
                factors[n - 1]
                    .iter()
                    .filter(|&&x| x > 1)
                    .map(|&x| BigInt::from(x))
                    .collect()
            };
            let into = if n == 0 { 0 } else { rank(n - 1) };
            h.extend(std::iter::repeat_n(
                BigInt::zero(),
                dims[n] - rank(n) - into,
            ));
            h
        })
        .collect()
}

fn cech() -> Check {
    let z = FpModule::free(Base::Integers, 1);
    let circ = fixtures::circ();
    let h = ok(cech_cohomology(
        &circ,
        &circ.basis()[0],
        &AbPresheaf::constant(&circ, &z),
    ))?;
    // arcs A, B, C and overlaps AB, BC, CA; no triple overlap
    let oracle = alternating_oracle(
        &[3, 3, 0],
        &[vec![vec![-1, 1, 0], vec![0, -1, 1], vec![1, 0, -1]], vec![]],
    );
    ensure(
        h.invariant_factors() == oracle,
        format!("CIRC: {:?} vs oracle {oracle:?}", h.invariant_factors()),
    )?;
    ensure(
        oracle[..2] == [vector(&[0]), vector(&[0])],
        "CIRC oracle is not (Z, Z)",
    )?;
    let s2 = fixtures::s2();
    let h = ok(cech_cohomology(
        &s2,
        &s2.basis()[0],
        &AbPresheaf::constant(&s2, &z),
    ))?;
    let oracle = alternating_oracle(&[2, 1, 0], &[vec![vec![-1, 1]], vec![]]);
    ensure(
        h.invariant_factors() == oracle,
        format!("S2: {:?} vs oracle {oracle:?}", h.invariant_factors()),
    )?;
    ensure(
        oracle[..2] == [vector(&[0]), vec![]],
        "S2 oracle is not (Z, 0)",
    )?;
    Ok("CIRC (Z, Z), S2 (Z, 0)".into())
}

fn amitsur() -> Check {
    let z = AlgebraObject::base_ring(Base::Integers);
    let zz = ok(AlgebraObject::new(
        FpModule::free(Base::Integers, 2),
        vector(&[1, 1]),
        vec![
            vec![vector(&[1, 0]), vector(&[0, 0])],
            vec![vector(&[0, 0]), vector(&[0, 1])],
        ],
    ))?;
    let diagonal = ok(RingMap::new(
        z.clone(),
        zz,
        Matrix::from_rows(&[vec![1], vec![1]]),
    ))?;
    let z3_z = ok(FpModule::new(
        Base::Integers,
        2,
        Matrix::from_rows(&[vec![3], vec![0]]),
    ))?;
    for (name, m) in [
        ("Z", FpModule::free(Base::Integers, 1)),
        ("Z/4", FpModule::cyclic(4)),
        ("Z/3 ⊕ Z", z3_z),
    ] {
        let report = ok(amitsur_check(&diagonal, &AModule::over_base(m)))?;
        ensure(
            report.exact(),
            format!("Z → Z×Z fails on {name}: {report:?}"),
        )?;
    }
    for p in [2, 3, 5] {
        let zp = ok(AlgebraObject::new(
            FpModule::cyclic(p),
            vector(&[1]),
            vec![vec![vector(&[1])]],
        ))?;
        let reduce = ok(RingMap::new(z.clone(), zp, Matrix::from_rows(&[vec![1]])))?;
        let report = ok(amitsur_check(
            &reduce,
            &AModule::over_base(FpModule::free(Base::Integers, 1)),
        ))?;
        ensure(!report.exact(), format!("Z → Z/{p} passes on Z"))?;
        ensure(
            !report.injective,
            format!("Z → Z/{p} ⊗ Z should not be injective"),
        )?;
    }
    Ok("Z → Z×Z exact on Z, Z/4, Z/3 ⊕ Z; Z → Z/p fails on Z for p = 2, 3, 5".into())
}

fn snf_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..1000 {
        let (r, c) = (rng.gen_range(0..=6), rng.gen_range(0..=6));
        let rows: Vec<Vec<i128>> = (0..r)
            .map(|_| (0..c).map(|_| rng.gen_range(-50..=50)).collect())
            .collect();
        let a = if r == 0 {
            Matrix::zero(0, c)
        } else {
            Matrix::from_rows(
                &rows
                    .iter()
                    .map(|row| row.iter().map(|&x| x as i64).collect())
                    .collect::<Vec<_>>(),
            )
        };
        let s = smith_normal_form(&a);
        ensure(
            &(&s.u * &a) * &s.v == s.d,
            format!("case {case}: D ≠ U·A·V"),
        )?;
        ensure(
            s.u.is_unimodular() && s.v.is_unimodular(),
            format!("case {case}: not unimodular"),
        )?;
        for i in 0..r {
            for j in 0..c {
                ensure(
                    i == j || s.d[(i, j)].is_zero(),
                    format!("case {case}: D is not diagonal"),
                )?;
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            let divides = if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            };
            ensure(
                !w[0].is_negative() && divides,
                format!("case {case}: divisibility chain broken"),
            )?;
        }
        ensure(
            diag.last().is_none_or(|x| !x.is_negative()),
            format!("case {case}: negative entry"),
        )?;
        let oracle: Vec<BigInt> = determinantal_factors(&rows, r, c)
            .into_iter()
            .map(BigInt::from)
            .collect();
        ensure(
            diag == oracle,
            format!("case {case}: {diag:?} vs determinantal divisors {oracle:?}"),
        )?;
    }
    Ok("1000 matrices up to 6×6, entries in [-50, 50]".into())
}

fn main() {
    let mut failed = 0;
    let mut run = |n: usize, budget: Option<Duration>, check: &mut dyn FnMut() -> Check| {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let slow = budget.is_some_and(|b| elapsed > b);
        let limit = budget.map_or(String::new(), |b| format!(" (limit {} s)", b.as_secs()));
        let (verdict, detail) = match outcome {
            Ok(d) if !slow => ("pass", d),
            Ok(d) => ("fail", format!("{d}; too slow")),
            Err(e) => ("fail", e),
        };
        if verdict == "fail" {
            failed += 1;
        }
        println!(
            "criterion {n}: {verdict} in {:.3} s{limit}: {detail}",
            elapsed.as_secs_f64()
        );
    };
    let secs = |s| Some(Duration::from_secs(s));
    run(1, secs(1), &mut counterexample);
    run(2, secs(30), &mut comodule_descent);
    let slices = slices();
    let corpus = slice_corpus(&slices);
    run(3, secs(60), &mut || b_gamma(&slices, &corpus));
    run(4, None, &mut || sheaf_vs_fibration(&slices, &corpus));
    run(5, secs(5), &mut stacks);
    run(6, None, &mut local_we);
    run(7, secs(120), &mut groupoid_descent);
    run(8, None, &mut tot2);
    run(9, secs(1), &mut cech);
    run(10, None, &mut amitsur);
    run(11, secs(10), &mut snf_suite);
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
