use std::cmp::Ordering;

use cornerlab::numctx::{GroupReal, NumberContext};
use cornerlab::rational::q;
use proptest::prelude::*;

fn value() -> impl Strategy<Value = GroupReal> {
    (-30i64..30, 1i64..9, -5i64..5, 1i64..4, -5i64..5, 1i64..4).prop_map(|(a, b, c, d, e, f)| {
        GroupReal::from_parts(q(a, b), [("sqrt2".to_string(), q(c, d)), ("sqrt5".to_string(), q(e, f))])
    })
}

proptest! {
    #[test]
    fn comparison_is_a_total_order(x in value(), y in value(), z in value()) {
        let ctx = NumberContext::with_sqrts(&[2, 5]).unwrap();
        let xy = ctx.compare(&x, &y).unwrap();
        prop_assert_eq!(ctx.compare(&y, &x).unwrap(), xy.reverse());
        prop_assert_eq!(xy == Ordering::Equal, x == y);
        if xy != Ordering::Greater && ctx.compare(&y, &z).unwrap() != Ordering::Greater {
            prop_assert_ne!(ctx.compare(&x, &z).unwrap(), Ordering::Greater);
        }
    }

    #[test]
    fn floor_and_frac(x in value()) {
        let ctx = NumberContext::with_sqrts(&[2, 5]).unwrap();
        let f = ctx.frac(&x).unwrap();
        prop_assert_ne!(ctx.sign(&f).unwrap(), Ordering::Less);
        prop_assert_eq!(ctx.compare(&f, &GroupReal::from(q(1, 1))).unwrap(), Ordering::Less);
        let fl = GroupReal::from(cornerlab::Q::from_integer(ctx.floor(&x).unwrap()));
        prop_assert_eq!(&fl + &f, x);
    }
}
