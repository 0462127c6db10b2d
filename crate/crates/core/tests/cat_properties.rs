use std::sync::Arc;

use descent_core::cat::{
    compute_pullback, function_images, has_rlp_against_endpoint, homotopy_pullback, is_equivalence,
    is_fibration, natural_iso_exists, FinCat, Functor,
};
use descent_core::Limits;
use proptest::prelude::*;

/// A random order on `0..n` refining the index order, with its transitive closure.
fn poset_strategy(max: usize) -> impl Strategy<Value = (usize, Vec<Vec<bool>>)> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let mut leq = vec![vec![false; n]; n];
            for i in 0..n {
                leq[i][i] = true;
                for j in i + 1..n {
                    leq[i][j] = bits[i * n + j];
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if leq[i][k] && leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
            (n, leq)
        })
    })
}

fn build_poset(n: usize, leq: &[Vec<bool>]) -> FinCat {
    let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let pairs: Vec<(String, String)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && leq[i][j])
        .map(|(i, j)| (names[i].clone(), names[j].clone()))
        .collect();
    FinCat::poset(&names, &pairs).unwrap()
}

proptest! {
    #[test]
    fn poset_homs_match_the_order((n, leq) in poset_strategy(6)) {
        let c = build_poset(n, &leq);
        c.check_axioms(&Limits::default()).unwrap();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(c.hom(i, j).len(), leq[i][j] as usize);
            }
        }
        let raw = FinCat::from_raw(&c.to_raw(), &Limits::default()).unwrap();
        prop_assert_eq!(raw.num_morphisms(), c.num_morphisms());
        for a in c.objects() {
            for b in c.objects() {
                let (ra, rb) = (
                    raw.object_by_name(c.object_name(a)).unwrap(),
                    raw.object_by_name(c.object_name(b)).unwrap(),
                );
                prop_assert_eq!(raw.hom(ra, rb).len(), c.hom(a, b).len());
            }
        }
    }

    /// In a poset the pullback of `a ≤ z ≥ b` is the meet of `a` and `b`.
    #[test]
    fn poset_pullbacks_are_meets((n, leq) in poset_strategy(6)) {
        let c = build_poset(n, &leq);
        for z in 0..n {
            for a in (0..n).filter(|&a| leq[a][z]) {
                for b in (0..n).filter(|&b| leq[b][z]) {
                    let lower: Vec<usize> = (0..n).filter(|&w| leq[w][a] && leq[w][b]).collect();
                    let meet = lower.iter().copied().find(|&m| lower.iter().all(|&w| leq[w][m]));
                    let (f, g) = (c.hom(a, z)[0], c.hom(b, z)[0]);
                    let cone = compute_pullback(&c, f, g, &Limits::default()).unwrap();
                    prop_assert_eq!(cone.map(|k| k.apex), meet);
                }
            }
        }
    }

    /// Functor validation on generators agrees with checking every composite.
    #[test]
    fn functor_validation_matches_brute_force(
        m in 1usize..6,
        n in 1usize..6,
        images in prop::collection::vec(0usize..6, 6),
    ) {
        let (d, c) = (Arc::new(FinCat::cyclic_group(m)), Arc::new(FinCat::cyclic_group(n)));
        let mor: Vec<usize> = (0..m).map(|i| images[i] % n).collect();
        let brute = c.is_identity(mor[d.identity(0)])
            && d.morphisms().all(|f| {
                d.morphisms().all(|g| mor[d.compose(g, f)] == c.compose(mor[g], mor[f]))
            });
        let built = Functor::new(d, c, vec![0], mor);
        prop_assert_eq!(built.is_ok(), brute);
    }
}

#[test]
fn finite_sets_hom_sizes_and_composition() {
    let c = FinCat::finite_sets(&[("a", 2), ("b", 3), ("e", 0)]).unwrap();
    c.check_axioms(&Limits::default()).unwrap();
    let size = [2u32, 3, 0];
    for x in c.objects() {
        for y in c.objects() {
            assert_eq!(c.hom(x, y).len(), (size[y] as usize).pow(size[x]));
        }
    }
    let (a, b) = (
        c.object_by_name("a").unwrap(),
        c.object_by_name("b").unwrap(),
    );
    let f = c.function(a, b, &[2, 0]).unwrap();
    let g = c.function(b, a, &[1, 1, 0]).unwrap();
    let gf = c.compose(g, f);
    assert_eq!(function_images(c.morphism_name(gf)).unwrap(), vec![0, 1]);
    assert!(c.is_identity(gf));
}

#[test]
fn cyclic_group_composition_is_addition() {
    let c = FinCat::cyclic_group(5);
    assert!(c.is_groupoid());
    for i in 0..5 {
        for j in 0..5 {
            let (gi, gj) = (
                c.morphism_by_name(&format!("g{i}")).unwrap(),
                c.morphism_by_name(&format!("g{j}")).unwrap(),
            );
            assert_eq!(
                c.morphism_name(c.compose(gj, gi)),
                format!("g{}", (i + j) % 5)
            );
        }
    }
}

#[test]
fn equivalences_among_small_groupoids() {
    let limits = Limits::default();
    let point = Arc::new(FinCat::terminal());
    let interval = Arc::new(FinCat::interval());
    let bz2 = Arc::new(FinCat::cyclic_group(2));
    let to_point = Functor::to_terminal(interval.clone(), point.clone());
    assert!(is_equivalence(&to_point, &limits).unwrap().holds());
    assert!(is_equivalence(&Functor::identity(bz2.clone()), &limits)
        .unwrap()
        .holds());
    // B(Z/2) → ∗ is not faithful and ∗ → B(Z/2) is not full
    assert!(
        !is_equivalence(&Functor::to_terminal(bz2.clone(), point.clone()), &limits)
            .unwrap()
            .holds()
    );
    assert!(
        !is_equivalence(&Functor::point(point.clone(), bz2, 0), &limits)
            .unwrap()
            .holds()
    );
    let two = Arc::new(FinCat::discrete(&["a", "b"]));
    assert!(!is_equivalence(&Functor::to_terminal(two, point), &limits)
        .unwrap()
        .holds());
}

#[test]
fn fibrations_and_the_endpoint_lifting_property_agree() {
    let point = Arc::new(FinCat::terminal());
    let interval = Arc::new(FinCat::interval());
    let bz2 = Arc::new(FinCat::cyclic_group(2));
    let cases = [
        (Functor::to_terminal(interval.clone(), point.clone()), true),
        (Functor::to_terminal(bz2.clone(), point.clone()), true),
        (Functor::point(point.clone(), interval.clone(), 0), false),
        (Functor::point(point.clone(), bz2.clone(), 0), false),
        (Functor::identity(interval), true),
    ];
    for (p, expected) in cases {
        assert_eq!(is_fibration(&p).unwrap(), expected);
        assert_eq!(has_rlp_against_endpoint(&p).unwrap(), expected);
    }
}

#[test]
fn loop_space_of_bz2_is_discrete_z2() {
    let point = Arc::new(FinCat::terminal());
    let bz2 = Arc::new(FinCat::cyclic_group(2));
    let base = Functor::point(point, bz2, 0);
    let h = homotopy_pullback(&base, &base, &Limits::default()).unwrap();
    assert_eq!(h.cat.num_objects(), 2);
    assert!(h.cat.is_discrete());
}

#[test]
fn points_of_a_connected_groupoid_are_isomorphic() {
    let limits = Limits::default();
    let point = Arc::new(FinCat::terminal());
    let interval = Arc::new(FinCat::interval());
    let (p0, p1) = (
        Functor::point(point.clone(), interval.clone(), 0),
        Functor::point(point.clone(), interval, 1),
    );
    assert!(natural_iso_exists(&p0, &p1, &limits).unwrap().is_some());
    let two = Arc::new(FinCat::discrete(&["a", "b"]));
    let (q0, q1) = (
        Functor::point(point.clone(), two.clone(), 0),
        Functor::point(point, two, 1),
    );
    assert!(natural_iso_exists(&q0, &q1, &limits).unwrap().is_none());
}
