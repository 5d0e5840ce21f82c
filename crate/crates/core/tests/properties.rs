use proptest::prelude::*;
use trunczeta::budget::Budget;
use trunczeta::closed_forms::{self, Parity};
use trunczeta::dirichlet::{self, Kind};
use trunczeta::enumerate;
use trunczeta::exact::{rf_invert_variables, QuadraticRational};
use trunczeta::ring::HnfSubringMatrix;

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #[test]
    fn quadratic_division_round_trips(a in -50i64..50, b in -50i64..50, c in -50i64..50, d in -50i64..50) {
        let x = QuadraticRational::from_integers(a, b);
        let y = QuadraticRational::from_integers(c, d);
        prop_assume!(!y.is_zero());
        let q = x.checked_div(&y).unwrap();
        prop_assert_eq!(&q * &y, x);
    }

    #[test]
    fn cocyclic_never_exceeds_subrings(p in prime(), m in 0u32..7) {
        let all = enumerate::count_subrings(p, m).unwrap();
        let cc = enumerate::count_cocyclic(p, m).unwrap();
        prop_assert!(cc <= all);
    }

    #[test]
    fn coefficients_are_multiplicative(a in 1u64..300, b in 1u64..300) {
        prop_assume!(gcd(a, b) == 1);
        let budget = Budget::default();
        for kind in [Kind::Subring, Kind::Cocyclic] {
            let ab = dirichlet::coefficient(a * b, kind, &budget).unwrap();
            let sa = dirichlet::coefficient(a, kind, &budget).unwrap();
            let sb = dirichlet::coefficient(b, kind, &budget).unwrap();
            prop_assert_eq!(ab, sa * sb);
        }
    }

    #[test]
    fn closure_is_independent_of_a31(k in 0u32..4, l in 0u32..4, r in 0u32..4, seed in any::<u64>()) {
        let p = 3u64;
        let pk = p.pow(k);
        let pl = p.pow(l);
        let a21 = seed % pk;
        let a32 = (seed / 7) % pl;
        let base = HnfSubringMatrix::new(p, (k, l, r), a21, 0, a32).unwrap();
        for a31 in 0..pk {
            let m = HnfSubringMatrix::new(p, (k, l, r), a21, a31, a32).unwrap();
            prop_assert_eq!(m.is_subring(), base.is_subring());
        }
    }
}

#[test]
fn variable_inversion_is_an_involution() {
    let f = closed_forms::subring_local_factor(Parity::Odd);
    let (m1, g) = rf_invert_variables(&f);
    let (m2, h) = rf_invert_variables(&g);
    assert!(h.rf_equal(&f));
    assert_eq!((m1.p_exp, m1.x_exp, m1.sign), (m2.p_exp, m2.x_exp, m2.sign));
}
