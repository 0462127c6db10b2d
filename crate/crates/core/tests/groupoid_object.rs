use descent_core::fixtures::{self, bg2_names};
use descent_core::pshgrpd::GroupoidObject;
use descent_core::Limits;

#[test]
fn bg2_values_are_powers_of_z2() {
    let g = fixtures::bg2_groupoid();
    let c = g.site.cat();
    for (name, arrows) in [("*", 2), ("G", 4), ("GG", 16)] {
        let v = g.value_at(c.object_by_name(name).unwrap()).unwrap();
        assert_eq!(v.num_objects(), 1);
        assert_eq!(v.num_morphisms(), arrows);
        assert!(v.is_groupoid());
    }
}

#[test]
fn broken_structure_maps_are_rejected() {
    let limits = Limits::default();
    let g = fixtures::bg2_groupoid();
    let c = g.site.cat();
    let m = |n: &str| c.morphism_by_name(n).unwrap();
    // a projection is not a unital multiplication
    let bad_mu = GroupoidObject::new(
        g.site.clone(),
        g.x0,
        g.x1,
        g.d,
        g.r,
        g.i,
        m(bg2_names::P1),
        g.inv,
        &limits,
    );
    assert!(bad_mu.is_err());
    // the constant map at the unit is not an inverse
    let unit_const = c.compose(g.i, g.d);
    let bad_inv = GroupoidObject::new(
        g.site.clone(),
        g.x0,
        g.x1,
        g.d,
        g.r,
        g.i,
        g.mu,
        unit_const,
        &limits,
    );
    assert!(bad_inv.is_err());
}
