use std::sync::Arc;

use descent_core::hopf::{
    alpha_from_coaction, comodule_to_descent, descent_to_comodule, pure, smith_normal_form, tensor,
    AModule, AlgebraObject, Base, Comodule, FpModule, HopfAlgebroid, Matrix, ModDescentDatum,
    ModuleMap, Vector,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn matrix_strategy(max: usize, bound: i64) -> impl Strategy<Value = Matrix> {
    (0..=max, 0..=max).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r).prop_map(move |rows| {
            if rows.is_empty() {
                Matrix::zero(0, c)
            } else {
                Matrix::from_rows(&rows)
            }
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn smith_normal_form_properties(a in matrix_strategy(6, 50)) {
        let s = smith_normal_form(&a);
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.d.clone());
        prop_assert!(s.u.is_unimodular());
        prop_assert!(s.v.is_unimodular());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                prop_assert!(i == j || s.d[(i, j)].is_zero());
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(!w[0].is_negative());
            let divides = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            prop_assert!(divides);
        }
    }
}

fn random_module(rng: &mut ChaCha8Rng, max_gens: usize) -> FpModule {
    let gens = rng.gen_range(0..=max_gens);
    let nrels = rng.gen_range(0..=gens);
    let cols: Vec<Vector> = (0..nrels)
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

/// The map `f ⊗ 1_N` on generators.
fn tensor_with(f: &Matrix, n_gens: usize) -> Matrix {
    let cols: Vec<Vector> = (0..f.cols() * n_gens)
        .map(|c| {
            let mut e = vec![BigInt::zero(); n_gens];
            e[c % n_gens] = BigInt::from(1);
            pure(&f.column(c / n_gens), &e)
        })
        .collect();
    Matrix::from_columns(f.rows() * n_gens, &cols)
}

#[test]
fn tensor_is_right_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let m = random_module(&mut rng, 3);
        let n = random_module(&mut rng, 3);
        // K → M → M'' → 0 with K free and M'' the cokernel.
        let k = FpModule::free(Base::Integers, rng.gen_range(0..=2));
        let g = random_matrix(&mut rng, m.gens(), k.gens(), 3);
        let g = ModuleMap::new(k.clone(), m.clone(), g).unwrap();
        let pi = g.cokernel();
        let mm = AModule::over_base(m.clone());
        let nn = AModule::over_base(n.clone());
        let m_n = tensor(&mm, &nn).unwrap();
        let q_n = tensor(&AModule::over_base(pi.cod.clone()), &nn).unwrap();
        let k_n = tensor(&AModule::over_base(k.clone()), &nn).unwrap();
        let pi_n = ModuleMap::new(m_n.clone(), q_n, tensor_with(&pi.matrix, n.gens())).unwrap();
        let g_n = ModuleMap::new(k_n, m_n, tensor_with(&g.matrix, n.gens())).unwrap();
        assert!(pi_n.is_surjective());
        for x in pi_n.kernel_generators() {
            assert!(
                g_n.preimage(&x).is_some(),
                "kernel element outside the image"
            );
        }
        for j in 0..g_n.dom.gens() {
            assert!(pi_n.cod.is_zero(&pi_n.apply(&g_n.image_of_generator(j))));
        }
    }
}

/// A coaction matrix `m ↦ A(m)⊗1 + N(m)⊗ε` on HOPF-EPS, or `m ↦ A(m)` on the
/// trivial algebroid. `A` is the identity most of the time.
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

#[test]
fn comodule_and_descent_validity_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let eps = Arc::new(HopfAlgebroid::hopf_eps(3).unwrap());
    let trivial =
        Arc::new(HopfAlgebroid::trivial(AlgebraObject::base_ring(Base::Integers)).unwrap());
    let (mut instances, mut valid) = (0, 0);
    for round in 0..240 {
        let h = if round % 4 == 0 {
            trivial.clone()
        } else {
            eps.clone()
        };
        let m = AModule::over_base(random_module(&mut rng, 2));
        let gm = m.module.gens();
        let psi = random_coaction(&mut rng, &h, gm);
        let comodule = Comodule::new(h.clone(), m.clone(), psi.clone());
        let alpha = alpha_from_coaction(&h, gm, &psi);
        let datum = ModDescentDatum::new(h.clone(), m.clone(), alpha);
        assert_eq!(
            comodule.is_ok(),
            datum.is_ok(),
            "round {round}: {comodule:?} vs {datum:?}"
        );
        instances += 1;
        if let (Ok(c), Ok(d)) = (comodule, datum) {
            valid += 1;
            let back = descent_to_comodule(&d).unwrap();
            assert_eq!(back.coaction.normalized(), c.coaction.normalized());
            assert_eq!(
                comodule_to_descent(&back).unwrap().alpha.normalized(),
                d.alpha.normalized()
            );
        }
    }
    assert!(instances >= 200);
    assert!(
        valid > 20 && valid < instances,
        "valid {valid} of {instances}"
    );
}
