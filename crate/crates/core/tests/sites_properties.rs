use std::sync::Arc;

use descent_core::cat::{FinCat, Functor};
use descent_core::fixtures;
use descent_core::sites::{
    is_sheaf, left_kan_extension, sheafify, CechNerve, PshMap, PshSet, Site,
};
use descent_core::Limits;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The sheaf condition by listing every tuple of local sections.
fn brute_force_is_sheaf(f: &PshSet, site: &Site) -> bool {
    site.basis().iter().all(|cover| {
        let legs = &cover.legs;
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for &leg in legs {
            let n = f.size(site.cat().src(leg));
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (0..n).map(move |s| {
                        let mut t = t.clone();
                        t.push(s);
                        t
                    })
                })
                .collect();
        }
        let matching: Vec<Vec<usize>> = tuples
            .into_iter()
            .filter(|t| {
                (0..legs.len()).all(|i| {
                    (0..legs.len()).all(|j| {
                        let cone = site.pullback(legs[i], legs[j]).unwrap();
                        f.restrict(cone.p1, t[i]) == f.restrict(cone.p2, t[j])
                    })
                })
            })
            .collect();
        let glued: Vec<Vec<usize>> = (0..f.size(cover.target))
            .map(|s| legs.iter().map(|&l| f.restrict(l, s)).collect())
            .collect();
        let mut sorted = glued.clone();
        sorted.sort();
        sorted.dedup();
        sorted.len() == glued.len() && matching.iter().all(|t| glued.contains(t))
    })
}

fn sites() -> [Site; 3] {
    [fixtures::s2(), fixtures::circ(), fixtures::bg2()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sheaf_check_matches_brute_force(seed in any::<u64>(), which in 0usize..3, bound in 1usize..=3) {
        let site = &sites()[which];
        let limits = Limits::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = PshSet::random_bounded(site.cat(), bound, &mut rng, &limits).unwrap();
        prop_assert_eq!(is_sheaf(&f, site, &limits).unwrap(), brute_force_is_sheaf(&f, site));
    }

    #[test]
    fn sheafification_is_a_sheaf_and_fixes_sheaves(seed in any::<u64>(), which in 0usize..2) {
        let site = &sites()[which];
        let limits = Limits::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = PshSet::random_bounded(site.cat(), 2, &mut rng, &limits).unwrap();
        let sh = sheafify(&f, site, &limits).unwrap();
        prop_assert!(brute_force_is_sheaf(&sh.sheaf, site));
        sh.unit.validate(&f, &sh.sheaf).unwrap();
        if is_sheaf(&f, site, &limits).unwrap() {
            prop_assert!(sh.unit.is_iso(&f, &sh.sheaf));
        }
        let again = sheafify(&sh.sheaf, site, &limits).unwrap();
        prop_assert!(again.unit.is_iso(&sh.sheaf, &again.sheaf));
    }
}

#[test]
fn cech_nerve_projections_commute_with_the_cover() {
    for site in sites() {
        let c = site.cat();
        for cover in site.basis() {
            let nerve = CechNerve::new(&site, cover, 2).unwrap();
            let k = cover.legs.len();
            for (n, level) in nerve.levels.iter().enumerate() {
                assert_eq!(level.len(), k.pow(n as u32 + 1));
                for s in level {
                    assert_eq!(c.tgt(s.to_target), cover.target);
                    for (j, &p) in s.proj.iter().enumerate() {
                        assert_eq!(c.src(p), s.apex);
                        assert_eq!(c.compose(cover.legs[s.tuple[j]], p), s.to_target);
                    }
                }
            }
        }
    }
}

#[test]
fn s2_double_overlap_is_w() {
    let site = fixtures::s2();
    let nerve = CechNerve::new(&site, &site.basis()[0], 1).unwrap();
    let c = site.cat();
    assert_eq!(c.object_name(nerve.simplex(&[0, 1]).apex), "W");
    assert_eq!(c.object_name(nerve.simplex(&[1, 1]).apex), "V");
}

#[test]
fn kan_extension_along_the_identity_is_the_presheaf() {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let site = fixtures::circ();
    let id = Functor::identity(site.cat().clone());
    for _ in 0..10 {
        let f = PshSet::random_bounded(site.cat(), 2, &mut rng, &limits).unwrap();
        let lan = left_kan_extension(&id, &f, &limits).unwrap();
        assert!(PshMap::find_iso(&f, &lan, &limits).unwrap().is_some());
    }
}

/// Extending to a point takes the set of components of the category of elements.
#[test]
fn kan_extension_to_a_point_counts_components() {
    let limits = Limits::default();
    let point = Arc::new(FinCat::terminal());
    let s2 = fixtures::s2();
    let to_point = Functor::to_terminal(s2.cat().clone(), point.clone());
    for x in s2.cat().objects() {
        let rep = PshSet::representable(s2.cat().clone(), x);
        assert_eq!(
            left_kan_extension(&to_point, &rep, &limits)
                .unwrap()
                .size(0),
            1
        );
    }
    let terminal = PshSet::terminal(s2.cat().clone());
    assert_eq!(
        left_kan_extension(&to_point, &terminal, &limits)
            .unwrap()
            .size(0),
        1
    );
    let two = Arc::new(FinCat::discrete(&["a", "b"]));
    let to_point = Functor::to_terminal(two.clone(), point);
    let terminal = PshSet::terminal(two);
    assert_eq!(
        left_kan_extension(&to_point, &terminal, &limits)
            .unwrap()
            .size(0),
        2
    );
}
