//! The bundled fixture sites.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cat::{compute_pullback, FinCat, PullbackCone};
use crate::error::Result;
use crate::limits::Limits;
use crate::pshgrpd::GroupoidObject;
use crate::sites::{Cover, Site};

/// Chosen pullbacks for every cospan of non-identity morphisms, found by search.
pub fn all_pullbacks(
    cat: &FinCat,
    limits: &Limits,
) -> Result<BTreeMap<(usize, usize), PullbackCone>> {
    let mut table = BTreeMap::new();
    for f in cat.morphisms() {
        for &g in cat.morphisms_into(cat.tgt(f)) {
            if cat.is_identity(f) || cat.is_identity(g) || table.contains_key(&(g, f)) {
                continue;
            }
            if let Some(cone) = compute_pullback(cat, f, g, limits)? {
                table.insert((f, g), cone);
            }
        }
    }
    Ok(table)
}

fn cover(cat: &FinCat, target: &str, legs: &[&str]) -> Result<Cover> {
    Ok(Cover {
        target: cat.object_by_name(target)?,
        legs: legs
            .iter()
            .map(|l| cat.morphism_by_name(l))
            .collect::<Result<_>>()?,
    })
}

fn identity_covers(cat: &FinCat, names: &[&str]) -> Result<Vec<Cover>> {
    names
        .iter()
        .map(|n| Ok(Cover::identity(cat, cat.object_by_name(n)?)))
        .collect()
}

/// The poset `W ≤ U, V ≤ X` with the cover `{U, V → X}` and identity covers.
pub fn s2() -> Site {
    let limits = Limits::default();
    let cat = FinCat::poset(
        &["X", "U", "V", "W"],
        &[("U", "X"), ("V", "X"), ("W", "U"), ("W", "V")],
    )
    .expect("S2 poset");
    let mut basis = vec![cover(&cat, "X", &["U<=X", "V<=X"]).unwrap()];
    basis.extend(identity_covers(&cat, &["X", "U", "V", "W"]).unwrap());
    let table = all_pullbacks(&cat, &limits).unwrap();
    Site::new(Arc::new(cat), table, basis, &limits).expect("S2 site")
}

/// Three arcs `A, B, C` covering the circle `X`, their pairwise overlaps
/// `AB, BC, CA`, and the empty open `E`, covered by the empty family.
pub fn circ() -> Site {
    let limits = Limits::default();
    let elements = ["X", "A", "B", "C", "AB", "BC", "CA", "E"];
    let mut leq: Vec<(&str, &str)> = vec![
        ("A", "X"),
        ("B", "X"),
        ("C", "X"),
        ("AB", "A"),
        ("AB", "B"),
        ("BC", "B"),
        ("BC", "C"),
        ("CA", "C"),
        ("CA", "A"),
    ];
    for e in &elements[..7] {
        leq.push(("E", e));
    }
    let cat = FinCat::poset(&elements, &leq).expect("CIRC poset");
    let mut basis = vec![cover(&cat, "X", &["A<=X", "B<=X", "C<=X"]).unwrap()];
    basis.extend(identity_covers(&cat, &elements[..7]).unwrap());
    basis.push(Cover {
        target: cat.object_by_name("E").unwrap(),
        legs: vec![],
    });
    let table = all_pullbacks(&cat, &limits).unwrap();
    Site::new(Arc::new(cat), table, basis, &limits).expect("CIRC site")
}

/// Names in the BG2 category: functions between `* = {0}`, `G = {0, 1}` and
/// `GG = G × G = {0, 1, 2, 3}` with `(a, b) ↦ 2a + b`.
pub mod bg2_names {
    pub const TO_POINT: &str = "G->*[0 0]";
    pub const UNIT: &str = "*->G[0]";
    pub const MULT: &str = "GG->G[0 1 1 0]";
    pub const INV: &str = "G->G[0 1]";
    pub const P1: &str = "GG->G[0 0 1 1]";
    pub const P2: &str = "GG->G[0 1 0 1]";
}

/// Finite sets `{*, G, GG}` with the trivial topology and the chosen pullback
/// `G ×_* G = GG` with coordinate projections.
pub fn bg2() -> Site {
    let limits = Limits::default();
    let cat = FinCat::finite_sets(&[("*", 1), ("G", 2), ("GG", 4)]).expect("BG2 category");
    let t = cat.morphism_by_name(bg2_names::TO_POINT).unwrap();
    let cone = PullbackCone {
        apex: cat.object_by_name("GG").unwrap(),
        p1: cat.morphism_by_name(bg2_names::P1).unwrap(),
        p2: cat.morphism_by_name(bg2_names::P2).unwrap(),
    };
    let mut table = BTreeMap::new();
    table.insert((t, t), cone);
    let basis = cat.objects().map(|o| Cover::identity(&cat, o)).collect();
    Site::new(Arc::new(cat), table, basis, &limits).expect("BG2 site")
}

/// The one-object groupoid `Z/2` as a groupoid object `(*, G)` in BG2.
pub fn bg2_groupoid() -> GroupoidObject {
    let site = bg2();
    let c = site.cat().clone();
    let m = |n: &str| c.morphism_by_name(n).unwrap();
    let o = |n: &str| c.object_by_name(n).unwrap();
    let t = m(bg2_names::TO_POINT);
    GroupoidObject::new(
        site,
        o("*"),
        o("G"),
        t,
        t,
        m(bg2_names::UNIT),
        m(bg2_names::MULT),
        m(bg2_names::INV),
        &Limits::default(),
    )
    .expect("BG2 groupoid object")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_sites_validate() {
        assert_eq!(s2().cat().num_objects(), 4);
        assert_eq!(circ().basis().len(), 9);
        let b = bg2();
        assert_eq!(b.cat().num_morphisms(), 301);
        for n in [
            bg2_names::TO_POINT,
            bg2_names::UNIT,
            bg2_names::MULT,
            bg2_names::INV,
            bg2_names::P1,
            bg2_names::P2,
        ] {
            b.cat().morphism_by_name(n).unwrap();
        }
    }

    #[test]
    fn bg2_pullback_search_finds_coordinate_projections() {
        let b = bg2();
        let c = b.cat();
        let t = c.morphism_by_name(bg2_names::TO_POINT).unwrap();
        let cone = compute_pullback(c, t, t, &Limits::default())
            .unwrap()
            .unwrap();
        assert_eq!(c.object_name(cone.apex), "GG");
        assert_eq!(c.morphism_name(cone.p1), bg2_names::P1);
        assert_eq!(c.morphism_name(cone.p2), bg2_names::P2);
    }
}
