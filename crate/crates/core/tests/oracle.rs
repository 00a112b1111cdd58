use cherry_mwpm::rng::SplitMix64;
use cherry_mwpm::verify::{audit_forest, check_certificate, oracle_mwpm};
use cherry_mwpm::*;

fn random_instance(rng: &mut SplitMix64, n: usize, p: f64, wmax: i64) -> Instance {
    let mut triples = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.unit_f64() < p {
                triples.push((u, v, rng.range_i64(-wmax, wmax)));
            }
        }
    }
    Instance::from_triples(n, &triples).unwrap()
}

fn configs() -> Vec<SolverConfig> {
    let mut out = Vec::new();
    for init in [InitStrategy::Greedy, InitStrategy::Fractional, InitStrategy::FractionalThresholded] {
        for dual_mode in [DualMode::ConnectedComponents, DualMode::Lp] {
            out.push(SolverConfig { init, dual_mode, init_threshold: 3, lp_tree_threshold: 2, ..Default::default() });
        }
    }
    out
}

fn check(inst: &Instance, cfg: &SolverConfig, audit: bool) {
    let expected = oracle_mwpm(inst).map(|r| r.0);
    let solver = Solver::new(inst, cfg.clone()).unwrap();
    let mut problems = Vec::new();
    let outcome = if audit {
        solver.solve_with_hook(&mut |s, ev| {
            let heaps = matches!(ev, PhaseEvent::AfterDual);
            for p in audit_forest(s, heaps) {
                problems.push(format!("{ev:?}: {p}"));
            }
        })
    } else {
        solver.solve()
    };
    assert!(problems.is_empty(), "{}\n{:?}\n{:?}", problems[..problems.len().min(10)].join("\n"), cfg, inst.to_dimacs());
    assert_eq!(outcome.weight(), expected, "{cfg:?}\n{}", inst.to_dimacs());
    if let Outcome::Matched(sol) = outcome {
        let report = check_certificate(inst, &sol.pairs, &sol.certificate).unwrap();
        assert!(report.is_ok(), "{:?}\n{}", report.violations, inst.to_dimacs());
    }
}

#[test]
fn random_small_instances_match_the_oracle() {
    let mut rng = SplitMix64::new(7);
    for round in 0..3000 {
        let n = 2 + 2 * rng.below(7) as usize;
        let p = [0.3, 0.6, 1.0][round % 3];
        let wmax = [3, 20, 1000][(round / 3) % 3];
        let inst = random_instance(&mut rng, n, p, wmax);
        for cfg in configs() {
            check(&inst, &cfg, round % 4 == 0);
        }
    }
}

#[test]
fn larger_instances_certify_and_agree_across_configurations() {
    let mut rng = SplitMix64::new(9);
    let mut expands = 0;
    for round in 0..400 {
        let n = 20 + 2 * rng.below(60) as usize;
        let p = [0.1, 0.3, 1.0][round % 3];
        let wmax = [3, 20, 1000][(round / 3) % 3];
        let inst = random_instance(&mut rng, n, p, wmax);
        let mut weight = None;
        for (i, cfg) in configs().into_iter().enumerate() {
            let solver = Solver::new(&inst, cfg.clone()).unwrap();
            let audit = round % 10 == 0 && i % 2 == 0;
            let mut problems = Vec::new();
            let outcome = solver.solve_with_hook(&mut |s, ev| {
                if audit {
                    problems.extend(audit_forest(s, matches!(ev, PhaseEvent::AfterDual)));
                }
            });
            assert!(problems.is_empty(), "{:?}", &problems[..problems.len().min(10)]);
            expands += outcome.stats().expands;
            match weight {
                None => weight = Some(outcome.weight()),
                Some(w) => assert_eq!(w, outcome.weight(), "{cfg:?}\n{}", inst.to_dimacs()),
            }
            if let Outcome::Matched(sol) = outcome {
                let report = check_certificate(&inst, &sol.pairs, &sol.certificate).unwrap();
                assert!(report.is_ok(), "{:?}", report.violations);
            }
        }
    }
    assert!(expands > 0);
}
