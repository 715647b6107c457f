use std::sync::Arc;

use algforge_core::builtins;
use algforge_core::charclass::{
    cartan_residual, char_form, dr_residual, homotopy_identity_check, product_algebroid, trace_chain_residual,
    trace_commutator,
};
use algforge_core::forms::{lambda2_basis, pullback, strong_closed, weak_closed, Form};
use algforge_core::poly::Poly;
use algforge_core::random;
use algforge_core::Algebroid;
use proptest::prelude::*;

fn e0() -> Arc<Algebroid> {
    Arc::new(builtins::e0().algebroid)
}

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn poly_ring_laws(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let (a, b, c) = (random::poly(&mut r, 3, 3, 4), random::poly(&mut r, 3, 3, 4), random::poly(&mut r, 3, 3, 4));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        let lhs = (&a * &b).partial(1).unwrap();
        let rhs = &(&a.partial(1).unwrap() * &b) + &(&a * &b.partial(1).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn jacobiator_is_tensorial(seed in any::<u64>()) {
        let a = e0();
        let mut r = random::rng(seed);
        let x = random::section(&mut r, 4, 2, 1);
        let y = random::section(&mut r, 4, 2, 1);
        let z = random::section(&mut r, 4, 2, 1);
        let f = random::poly(&mut r, 2, 2, 3);
        let lhs = a.jacobiator(&x, &y.scale(&f), &z).unwrap();
        prop_assert_eq!(lhs, a.jacobiator(&x, &y, &z).unwrap().scale(&f));
        let rho = a.anchor_apply(&a.jacobiator(&x, &y, &z).unwrap()).unwrap();
        prop_assert!(rho.is_zero());
    }

    #[test]
    fn d_squared_relations(seed in any::<u64>()) {
        let a = e0();
        let mut r = random::rng(seed);
        let f = Form::function(4, random::poly(&mut r, 2, 4, 4));
        prop_assert!(f.d_squared(&a).unwrap().is_zero());
        let w = random::form(&mut r, 4, 2, 1, 3);
        prop_assert_eq!(w.d_squared(&a).unwrap(), -&w.compose_jacobiator(&a).unwrap());
        for k in 3..=4 {
            let w = random::form(&mut r, 4, 2, k, 3);
            prop_assert!(w.d_squared(&a).unwrap().is_zero());
        }
        let basis = lambda2_basis(&a).unwrap();
        let d2 = w_d2(&a, &random::form(&mut r, 4, 2, 1, 2));
        prop_assert!(basis.contains(&d2, 0).unwrap().is_yes());
        for c in d2.comps().values() {
            for (m, _) in c.terms() {
                prop_assert!(m.exps()[0] >= 2 || m.exps()[1] >= 2);
            }
        }
    }

    #[test]
    fn wedge_and_leibniz(seed in any::<u64>(), p in 0usize..3, q in 0usize..3) {
        let a = e0();
        let mut r = random::rng(seed);
        let x = random::form(&mut r, 4, 2, p, 2);
        let y = random::form(&mut r, 4, 2, q, 2);
        let z = random::form(&mut r, 4, 2, 1, 1);
        let xy = x.wedge(&y).unwrap();
        let yx = y.wedge(&x).unwrap();
        prop_assert_eq!(&xy, &if (p * q) % 2 == 0 { yx } else { -&yx });
        prop_assert_eq!(xy.wedge(&z).unwrap(), x.wedge(&y.wedge(&z).unwrap()).unwrap());
        let lhs = xy.differential(&a).unwrap();
        let t1 = x.differential(&a).unwrap().wedge(&y).unwrap();
        let t2 = x.wedge(&y.differential(&a).unwrap()).unwrap();
        let rhs = if p % 2 == 0 { &t1 + &t2 } else { &t1 - &t2 };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_is_a_chain_map(seed in any::<u64>(), k in 0usize..2) {
        let a = e0();
        let t2 = builtins::tangent(2).algebroid;
        let mut r = random::rng(seed);
        let w = random::form(&mut r, 2, 2, k, 3);
        let lhs = pullback(&a, &w.differential(&t2).unwrap()).unwrap();
        let rhs = pullback(&a, &w).unwrap().differential(&a).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lie_builtins_have_d_squared_zero(seed in any::<u64>(), k in 0usize..3) {
        let a = builtins::e0_prime_lie().algebroid;
        let mut r = random::rng(seed);
        let w = random::form(&mut r, 4, 2, k, 2);
        prop_assert!(w.d_squared(&a).unwrap().is_zero());
    }
}

fn w_d2(a: &Algebroid, w: &Form) -> Form {
    w.d_squared(a).unwrap()
}

proptest! {
    #![proptest_config(cfg(12))]

    #[test]
    fn cartan_structure_equations(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let c = random::connection(&mut r, e0(), 1).unwrap();
        prop_assert!(cartan_residual(&c).unwrap().is_zero());
        prop_assert!(dr_residual(&c).unwrap().is_zero());
        prop_assert!(trace_commutator(&c, 1).unwrap().is_zero());
        prop_assert!(trace_chain_residual(&c, 2).unwrap().is_zero());
        let a = c.algebroid();
        prop_assert!(strong_closed(a, &char_form(&c, 1).unwrap(), 2).unwrap().is_yes());
        prop_assert!(weak_closed(a, &char_form(&c, 2).unwrap(), 2).unwrap().is_yes());
    }

    #[test]
    fn bianchi_for_random_connections(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let c = random::connection(&mut r, e0(), 1).unwrap();
        let a = c.algebroid();
        for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
            prop_assert!(c.bianchi_defect(&a.gen(i), &a.gen(j), &a.gen(k)).unwrap().is_zero());
        }
    }

    #[test]
    fn homotopy_identity(seed in any::<u64>(), k in 0usize..5) {
        let p = product_algebroid(e0()).unwrap();
        let mut r = random::rng(seed);
        let w = random::form(&mut r, 5, 3, k, 2);
        let report = homotopy_identity_check(&p, &w, 0).unwrap();
        prop_assert!(report.identity_residual.is_zero());
        prop_assert!(report.d2_residual.is_zero());
    }

    #[test]
    fn ideal_witness_recombines(seed in any::<u64>()) {
        let a = e0();
        let basis = lambda2_basis(&a).unwrap();
        let mut r = random::rng(seed);
        let eta: Vec<Form> = (0..4).map(|_| random::form(&mut r, 4, 2, 1, 2)).collect();
        let w = basis.combine(&eta).unwrap();
        let dec = basis.contains(&w, 2).unwrap();
        prop_assert!(dec.is_yes());
        prop_assert_eq!(basis.combine(dec.witness().unwrap()).unwrap(), w.clone());
        prop_assert!(basis.normal_form(&w, 2).is_zero());
    }
}

#[test]
fn metric_connection_trace_remark() {
    // Tr θ = 0 forces d Tr R̄ = 0.
    let a = e0();
    let mut r = random::rng(7);
    for _ in 0..5 {
        let c = random::connection(&mut r, a.clone(), 1).unwrap();
        let mut gamma = c.gammas().to_vec();
        for (beta, row) in gamma.iter_mut().enumerate() {
            let tr = (0..4).fold(Poly::zero(2), |acc, b| &acc + c.christoffel(b, beta, b));
            let mut s = row[0].clone().into_coeffs();
            s[0] = &s[0] - &tr;
            row[0] = algforge_core::Section::new(s);
        }
        let c = algforge_core::EConnection::on_self(a.clone(), gamma).unwrap();
        let tr = char_form(&c, 1).unwrap();
        assert!(tr.differential(&a).unwrap().is_zero());
    }
}
