use cornerlab::gjfun::{AdditiveFunction, PwlPeriodic, ShiftedFunction};
use cornerlab::io::{function_to_json, instance_to_json, parse_function, parse_group_real, parse_instance};
use cornerlab::model::MixedInstance;
use cornerlab::numctx::{GroupReal, GroupVector, NumberContext};
use cornerlab::rational::q;
use proptest::prelude::*;

fn value() -> impl Strategy<Value = GroupReal> {
    (-30i64..30, 1i64..9, -5i64..5, 1i64..4, -5i64..5, 1i64..4).prop_map(|(a, b, c, d, e, f)| {
        GroupReal::from_parts(q(a, b), [("sqrt2".to_string(), q(c, d)), ("sqrt3".to_string(), q(e, f))])
    })
}

proptest! {
    #[test]
    fn text_round_trip(x in value()) {
        prop_assert_eq!(parse_group_real(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn instance_round_trip(b in value(), p in prop::collection::vec(value(), 1..4), r in prop::collection::vec(value(), 0..3)) {
        prop_assume!(!b.is_integer());
        let mut p = p;
        p.sort();
        p.dedup();
        let mut r = r;
        r.sort();
        r.dedup();
        let ctx = NumberContext::with_sqrts(&[2, 3]).unwrap();
        let col = |x: GroupReal| GroupVector(vec![x]);
        let inst = MixedInstance::new(ctx, col(b), p.into_iter().map(col).collect(), r.into_iter().map(col).collect()).unwrap();
        let text = instance_to_json(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back.pure.b, &inst.pure.b);
        prop_assert_eq!(&back.pure.p, &inst.pure.p);
        prop_assert_eq!(&back.r, &inst.r);
        prop_assert_eq!(instance_to_json(&back), text);
    }
}

#[test]
fn function_round_trip() {
    let base = PwlPeriodic::new(vec![q(0, 1), q(1, 5), q(2, 5)], vec![q(0, 1), q(1, 2), q(1, 1)]).unwrap();
    let f = ShiftedFunction::new(base, AdditiveFunction::new([("sqrt2".to_string(), q(-2, 7))])).unwrap();
    let ctx = NumberContext::with_sqrts(&[2]).unwrap();
    let text = function_to_json(&f, &ctx);
    let (g, ctx2) = parse_function(&text).unwrap();
    assert_eq!(f, g);
    assert_eq!(function_to_json(&g, &ctx2), text);
}
