use cornerlab::exactlp::{solve_lp, solve_mip, LinearProgram, MipProblem, Sense, Status};
use cornerlab::rational::{q, qi, Q};
use proptest::prelude::*;

fn lp_strategy() -> impl Strategy<Value = LinearProgram> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(-5i64..=5, n),
            prop::collection::vec((prop::collection::vec(-4i64..=4, n), 0usize..3, -6i64..=6), m),
            prop::collection::vec(0usize..4, n),
        )
            .prop_map(move |(c, rows, bounds)| {
                let mut lp = LinearProgram::new(c.into_iter().map(qi).collect());
                for (row, s, rhs) in rows {
                    let sense = [Sense::Ge, Sense::Le, Sense::Eq][s];
                    lp.add(row.into_iter().map(qi).collect(), sense, qi(rhs));
                }
                for (j, kind) in bounds.into_iter().enumerate() {
                    match kind {
                        0 => {
                            lp.set_bounds(j, None, None);
                        }
                        1 => {
                            lp.set_bounds(j, Some(qi(-2)), Some(qi(3)));
                        }
                        _ => {}
                    }
                }
                lp
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn certificates_verify(lp in lp_strategy()) {
        let out = solve_lp(&lp);
        prop_assert!(out.verify(&lp).is_ok(), "{:?}", out);
    }

    #[test]
    fn solving_is_deterministic(lp in lp_strategy()) {
        prop_assert_eq!(solve_lp(&lp), solve_lp(&lp));
    }
}

fn brute(lp: &LinearProgram, n: usize) -> Option<Q> {
    let mut best: Option<Q> = None;
    let total = 11usize.pow(n as u32);
    for code in 0..total {
        let x: Vec<Q> = (0..n).map(|j| qi(((code / 11usize.pow(j as u32)) % 11) as i64)).collect();
        if lp.is_feasible(&x) {
            let v = lp.value(&x);
            if best.as_ref().is_none_or(|b| &v < b) {
                best = Some(v);
            }
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn branch_and_bound_matches_brute_force(
        c in prop::collection::vec(-5i64..=5, 3),
        rows in prop::collection::vec((prop::collection::vec(-6i64..=6, 3), 1i64..=3, 0usize..3, -10i64..=10), 1..=3),
    ) {
        let n = 3;
        let mut lp = LinearProgram::new(c.into_iter().map(qi).collect());
        for (row, den, s, rhs) in rows {
            let sense = [Sense::Ge, Sense::Le, Sense::Eq][s];
            lp.add(row.into_iter().map(|a| q(a, den)).collect(), sense, q(rhs, 2));
        }
        for j in 0..n {
            lp.set_bounds(j, Some(Q::from_integer(0.into())), Some(qi(10)));
        }
        let mip = MipProblem { lp: lp.clone(), integer: vec![true; n] };
        let out = solve_mip(&mip, 1_000_000);
        let expected = brute(&lp, n);
        match out.status {
            Status::Optimal => prop_assert_eq!(out.optimum.clone(), expected),
            Status::Infeasible => prop_assert!(expected.is_none()),
            s => prop_assert!(false, "unexpected status {:?}", s),
        }
        prop_assert!(out.verify_mip(&mip).is_ok());
    }
}
