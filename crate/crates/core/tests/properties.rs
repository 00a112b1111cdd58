use cherry_mwpm::verify::{check_certificate, oracle_mwpm};
use cherry_mwpm::*;
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = Instance> {
    (1usize..=12).prop_flat_map(|n| {
        let edge = (0..n as u32, 0..n as u32, -50i64..=50);
        proptest::collection::vec(edge, 0..=3 * n).prop_map(move |triples| {
            let triples: Vec<_> = triples.into_iter().filter(|&(u, v, _)| u != v).collect();
            Instance::from_triples(n, &triples).unwrap()
        })
    })
}

fn config() -> impl Strategy<Value = SolverConfig> {
    (0usize..3, any::<bool>(), 1usize..5, 1usize..5).prop_map(|(init, lp, it, lt)| SolverConfig {
        init: [InitStrategy::Greedy, InitStrategy::Fractional, InitStrategy::FractionalThresholded][init],
        dual_mode: if lp { DualMode::Lp } else { DualMode::ConnectedComponents },
        init_threshold: it,
        lp_tree_threshold: lt,
        time_limit: None,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn dimacs_roundtrip(inst in instance()) {
        let back = Instance::parse(&inst.to_dimacs()).unwrap();
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn solution_roundtrip_and_optimality(inst in instance(), cfg in config()) {
        let oracle = oracle_mwpm(&inst).map(|(w, _)| w);
        match Solver::new(&inst, cfg).unwrap().solve() {
            Outcome::Matched(sol) => {
                prop_assert_eq!(Some(sol.weight), oracle);
                let report = check_certificate(&inst, &sol.pairs, &sol.certificate).unwrap();
                prop_assert!(report.is_ok(), "{:?}", report.violations);
                let file = SolutionFile::Matched { weight: sol.weight, pairs: sol.pairs, certificate: Some(sol.certificate) };
                prop_assert_eq!(SolutionFile::parse(&file.to_text(), inst.n).unwrap(), file);
            }
            Outcome::Infeasible(_) => prop_assert_eq!(oracle, None),
            Outcome::TimedOut(_) => prop_assert!(false, "no time limit was set"),
        }
    }
}
