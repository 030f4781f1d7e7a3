use bateman::dynamics::{eigen_record, pairing_in_time};
use bateman::pseudo_bogoliubov::{ft_norm_closed_form, standard_norm_at};
use bateman::{derive_params, Approach, Branch};
use proptest::prelude::*;

fn branch() -> impl Strategy<Value = Branch> {
    prop_oneof![Just(Branch::Plus), Just(Branch::Minus)]
}

fn approach() -> impl Strategy<Value = Approach> {
    prop_oneof![Just(Approach::Ft), Just(Approach::Is)]
}

proptest! {
    #[test]
    fn flipping_the_branch_reverses_the_class(a in approach(), b in branch(), n1 in 0i64..20, n2 in 0i64..20) {
        let p = derive_params(1.0, 1.0, 1.25, 1.0).unwrap();
        let here = eigen_record(a, b, n1, n2, &p).unwrap();
        let there = eigen_record(a, b.flipped(), n1, n2, &p).unwrap();
        prop_assert_eq!(here.p, there.p);
        prop_assert_eq!(here.q, -there.q);
        prop_assert_eq!(here.class().reversed(), there.class());
    }

    #[test]
    fn distinct_states_stay_unpaired(
        a in approach(), b in branch(),
        m in (0i64..6, 0i64..6), n in (0i64..6, 0i64..6),
        t in -5.0f64..5.0,
    ) {
        let p = derive_params(1.0, 0.4, 2.0, 1.0).unwrap();
        let z = pairing_in_time(a, b, m, n, &[t], &p).unwrap()[0];
        if m == n {
            prop_assert_eq!(z.re, 1.0);
            prop_assert_eq!(z.im, 0.0);
        } else {
            prop_assert_eq!(z.norm(), 0.0);
        }
    }

    #[test]
    fn standard_norms_exceed_one(big in 0.01f64..1.5, n1 in 0usize..6, n2 in 0usize..6) {
        let v = standard_norm_at(big, n1, n2).unwrap();
        prop_assert!(v > 1.0);
        if let Some(cf) = ft_norm_closed_form(big, n1, n2) {
            prop_assert!((v - cf).abs() <= 1e-12 * cf);
        }
    }

    #[test]
    fn damping_sets_the_imaginary_unit(m in 0.5f64..3.0, gamma in 0.0f64..1.0, extra in 0.1f64..4.0) {
        let k = gamma * gamma / (4.0 * m) + extra;
        let p = derive_params(m, gamma, k, 1.0).unwrap();
        let ev = p.eigen_value(0, 1);
        prop_assert!((ev.im - gamma / (2.0 * m)).abs() <= 1e-12);
        prop_assert!((p.omega * p.omega - extra / m).abs() <= 1e-9 * (1.0 + extra / m));
    }
}

#[test]
fn overdamped_parameters_are_rejected() {
    assert!(derive_params(1.0, 2.0, 1.0, 1.0).is_err());
    assert!(derive_params(1.0, 3.0, 1.0, 1.0).is_err());
}
