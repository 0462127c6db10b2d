//! Pullbacks of cospans in a finite category, by search and by verification.

use super::fincat::{FinCat, Mor, Obj};
use crate::error::{Error, Result};
use crate::limits::Limits;

/// A commutative square `f ∘ p1 = g ∘ p2` over the cospan `f: A → Z ← B: g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PullbackCone {
    pub apex: Obj,
    pub p1: Mor,
    pub p2: Mor,
}

fn cone_error(c: &FinCat, f: Mor, g: Mor, reason: String) -> Error {
    Error::BadPullbackCone {
        f: c.morphism_name(f).to_string(),
        g: c.morphism_name(g).to_string(),
        reason,
    }
}

fn universal_at(c: &FinCat, f: Mor, g: Mor, cone: &PullbackCone, w: Obj) -> Option<String> {
    let (a, b) = (c.src(f), c.src(g));
    let mut seen = std::collections::HashSet::new();
    for &u in c.hom(w, cone.apex) {
        let pair = (c.compose(cone.p1, u), c.compose(cone.p2, u));
        if !seen.insert(pair) {
            return Some(format!(
                "factorization from `{}` is not unique",
                c.object_name(w)
            ));
        }
    }
    let mut expected = 0usize;
    for &w1 in c.hom(w, a) {
        let fw = c.compose(f, w1);
        for &w2 in c.hom(w, b) {
            if c.compose(g, w2) == fw {
                expected += 1;
                if !seen.contains(&(w1, w2)) {
                    return Some(format!("cone from `{}` does not factor", c.object_name(w)));
                }
            }
        }
    }
    debug_assert_eq!(expected, seen.len());
    None
}

fn search_cost(c: &FinCat, f: Mor, g: Mor, apex: Obj) -> u128 {
    c.objects()
        .map(|w| {
            (c.hom(w, apex).len() + c.hom(w, c.src(f)).len() * c.hom(w, c.src(g)).len()) as u128
        })
        .sum()
}

/// Checks that `cone` is a pullback of `f` and `g`.
pub fn verify_pullback(
    c: &FinCat,
    f: Mor,
    g: Mor,
    cone: &PullbackCone,
    limits: &Limits,
) -> Result<()> {
    if c.tgt(f) != c.tgt(g) {
        return Err(cone_error(c, f, g, "legs do not form a cospan".into()));
    }
    if c.src(cone.p1) != cone.apex
        || c.src(cone.p2) != cone.apex
        || c.tgt(cone.p1) != c.src(f)
        || c.tgt(cone.p2) != c.src(g)
    {
        return Err(cone_error(
            c,
            f,
            g,
            "projections have wrong endpoints".into(),
        ));
    }
    if c.compose(f, cone.p1) != c.compose(g, cone.p2) {
        return Err(cone_error(c, f, g, "square does not commute".into()));
    }
    // pulling back along an identity: (id, g) has pullback (g, id) and symmetrically
    if (c.is_identity(f) && cone.p1 == g && c.is_identity(cone.p2))
        || (c.is_identity(g) && cone.p2 == f && c.is_identity(cone.p1))
    {
        return Ok(());
    }
    limits.admit(search_cost(c, f, g, cone.apex))?;
    for w in c.objects() {
        if let Some(reason) = universal_at(c, f, g, cone, w) {
            return Err(cone_error(c, f, g, reason));
        }
    }
    Ok(())
}

/// Finds a pullback by exhaustive search, preferring the first apex in index order.
pub fn compute_pullback(
    c: &FinCat,
    f: Mor,
    g: Mor,
    limits: &Limits,
) -> Result<Option<PullbackCone>> {
    if c.tgt(f) != c.tgt(g) {
        return Err(cone_error(c, f, g, "legs do not form a cospan".into()));
    }
    let mut budget = limits.budget();
    for apex in c.objects() {
        for &p1 in c.hom(apex, c.src(f)) {
            let fp = c.compose(f, p1);
            for &p2 in c.hom(apex, c.src(g)) {
                budget.spend(1)?;
                if c.compose(g, p2) != fp {
                    continue;
                }
                let cone = PullbackCone { apex, p1, p2 };
                budget.spend(search_cost(c, f, g, apex).min(u64::MAX as u128) as u64)?;
                if c.objects()
                    .all(|w| universal_at(c, f, g, &cone, w).is_none())
                {
                    return Ok(Some(cone));
                }
            }
        }
    }
    Ok(None)
}
