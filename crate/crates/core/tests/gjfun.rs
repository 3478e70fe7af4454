use cornerlab::gjfun::{check_minimal_pure, check_subadditive, slope_lift, PwlPeriodic};
use cornerlab::rational::{q, Q};
use cornerlab::selftest::{grid_subadditivity_violation, minimal_function_suite};
use num::{BigInt, One, ToPrimitive, Zero};
use proptest::prelude::*;

fn pwl_strategy() -> impl Strategy<Value = PwlPeriodic> {
    (2i64..=6, prop::collection::vec(0i64..=12, 6), prop::collection::vec(any::<bool>(), 6)).prop_map(|(den, vals, keep)| {
        let mut bps = vec![Q::zero()];
        let mut values = vec![Q::zero()];
        for k in 1..den {
            if keep[k as usize % keep.len()] {
                bps.push(q(k, den));
                values.push(q(vals[k as usize % vals.len()], 6));
            }
        }
        PwlPeriodic::new(bps, values).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn vertex_check_matches_grid(f in pwl_strategy()) {
        let n = 4 * f.denominator_lcm().to_u64().unwrap();
        let exact = check_subadditive(&f);
        let grid = grid_subadditivity_violation(&f, n);
        prop_assert_eq!(exact.holds, grid.is_none());
        if let Some((u, v)) = exact.witness_q {
            prop_assert!(f.eval_q(&u) + f.eval_q(&v) < f.eval_q(&(&u + &v)));
        }
    }

    #[test]
    fn periodicity(f in pwl_strategy(), k in -50i64..50, shift in -3i64..3) {
        let x = q(k, 17);
        prop_assert_eq!(f.eval_q(&x), f.eval_q(&(&x + Q::from_integer(BigInt::from(shift)))));
    }

    #[test]
    fn subadditive_zero_at_zero_gives_sublinear_lift(f in pwl_strategy()) {
        if check_subadditive(&f).holds {
            prop_assert!(slope_lift(&f).is_sublinear());
        }
    }
}

#[test]
fn minimal_functions_lie_below_their_lift() {
    for (f, b) in minimal_function_suite() {
        assert!(check_minimal_pure(&f, &b).unwrap().minimal);
        let psi = slope_lift(&f);
        let den = 4 * f.denominator_lcm().to_i64().unwrap();
        for k in -2 * den..=2 * den {
            let x = q(k, den);
            assert!(f.eval_q(&x) <= psi.eval_q(&x), "f({x}) > psi({x})");
        }
        for k in -194..=194 {
            let x = q(k, 97);
            assert!(f.eval_q(&x) <= psi.eval_q(&x));
        }
    }
}

#[test]
fn slope_lift_is_the_supremum() {
    for b in [q(1, 4), q(2, 5), q(3, 7)] {
        let g = PwlPeriodic::gmic(&b).unwrap();
        let psi = slope_lift(&g);
        let (mut up, mut down) = (Q::zero(), Q::zero());
        for k in 1..=10_000i64 {
            let kq = Q::from_integer(BigInt::from(k));
            let eps = kq.recip();
            up = up.max(g.eval_q(&eps) * &kq);
            down = down.max(g.eval_q(&-eps) * &kq);
        }
        assert_eq!(up, b.recip());
        assert_eq!(down, (Q::one() - &b).recip());
        assert_eq!((psi.s_plus, psi.s_minus), (up, down));
    }
}
