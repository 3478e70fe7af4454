use cornerlab::exactlp::DEFAULT_NODE_CAP;
use cornerlab::hull::{CornerPolyhedron, EnumCaps};
use cornerlab::lift::{separate_from_closure, LiftData, Separation};
use cornerlab::model::MixedInstance;
use cornerlab::numctx::GroupVector;
use cornerlab::par::Exec;
use cornerlab::rational::{dot, q, qi, Q};
use cornerlab::selftest::rational_suite;
use proptest::prelude::*;

fn data() -> LiftData {
    let inst = MixedInstance::rational(&[q(2, 5)], &[vec![q(1, 5)], vec![q(2, 5)]], &[vec![qi(1)], vec![qi(-1)]]).unwrap();
    LiftData::new(inst, vec![q(5, 2), q(5, 3)], vec![q(1, 2), qi(1)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn psi_is_sublinear(a in -40i64..40, b in -40i64..40, den in 1i64..9, lam in 1i64..12) {
        let ld = data();
        let psi = |x: Q| ld.psi(&GroupVector::rational(&[x])).unwrap();
        let (x, y) = (q(a, den), q(b, den));
        prop_assert!(psi(&x + &y) <= psi(x.clone()) + psi(y.clone()));
        prop_assert_eq!(psi(&x * q(lam, 3)), psi(x) * q(lam, 3));
    }

    #[test]
    fn pi_below_psi(a in -20i64..20, den in 1i64..11) {
        let ld = data();
        let x = GroupVector::rational(&[q(a, den)]);
        prop_assert!(ld.pi(&x, DEFAULT_NODE_CAP).unwrap() <= ld.psi(&x).unwrap());
    }
}

#[test]
fn separators_verify_against_generators() {
    for inst in rational_suite(15, 3, 2, 3, 5) {
        let cp = CornerPolyhedron::compute(&inst, EnumCaps::default(), Exec::Sequential).unwrap();
        let np = cp.dim();
        let probes = [vec![Q::from_integer(0.into()); np], vec![q(1, 3); np], vec![qi(1); np]];
        for y in probes {
            match separate_from_closure(&cp, &y).unwrap() {
                Separation::Separator(t) => {
                    assert!(dot(&t.d, &y) < qi(1));
                    assert!(cp.point_vectors().iter().all(|e| dot(&t.d, e) >= qi(1)));
                    assert!(!cp.member_closure(&y).unwrap().is_member());
                }
                Separation::Member { .. } => assert!(cp.member_closure(&y).unwrap().is_member()),
            }
        }
    }
}
