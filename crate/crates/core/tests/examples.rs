//! Small worked examples with hand-checked answers.

use cherry_mwpm::dual::{dual_update_cc, dual_update_lp, DeltaConstraints};
use cherry_mwpm::verify::{check_certificate, max_matching_oracle, oracle_mwpm};
use cherry_mwpm::*;

fn inst(n: usize, t: &[(u32, u32, i64)]) -> Instance {
    Instance::from_triples(n, t).unwrap()
}

fn solved(instance: &Instance) -> Solution {
    match solve(instance, &SolverConfig::default()).unwrap() {
        Outcome::Matched(s) => s,
        other => panic!("unexpected outcome {other:?}"),
    }
}

fn two_triangles() -> Instance {
    inst(6, &[(0, 1, 0), (1, 2, 0), (0, 2, 0), (3, 4, 0), (4, 5, 0), (3, 5, 0), (2, 3, 5)])
}

fn k4() -> Instance {
    inst(4, &[(0, 1, 1), (2, 3, 1), (0, 2, 10), (0, 3, 10), (1, 2, 10), (1, 3, 10)])
}

#[test]
fn single_edge() {
    let s = solved(&inst(2, &[(0, 1, 7)]));
    assert_eq!(s.weight, 7);
    assert_eq!(s.pairs, vec![(0, 1)]);
    assert_eq!(oracle_mwpm(&inst(2, &[(0, 1, 7)])), Some((7, vec![0])));
}

#[test]
fn k4_cheap_pairs() {
    assert_eq!(solved(&k4()).weight, 2);
    assert_eq!(oracle_mwpm(&k4()).unwrap().0, 2);
}

#[test]
fn two_triangles_joined_by_a_bridge() {
    // Only two perfect matchings exist; both use the bridge and weigh 5.
    assert_eq!(oracle_mwpm(&two_triangles()).unwrap().0, 5);
    let s = solved(&two_triangles());
    assert_eq!(s.weight, 5);
    assert!(s.stats.shrinks >= 1);
    assert!(check_certificate(&two_triangles(), &s.pairs, &s.certificate).unwrap().is_ok());
}

#[test]
fn infeasible_inputs() {
    let odd = inst(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]);
    assert!(matches!(solve(&odd, &SolverConfig::default()).unwrap(), Outcome::Infeasible(_)));
    let isolated = inst(4, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]);
    assert!(matches!(solve(&isolated, &SolverConfig::default()).unwrap(), Outcome::Infeasible(_)));
    // Star: every vertex has an edge but no perfect matching exists.
    let star = inst(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]);
    assert!(matches!(solve(&star, &SolverConfig::default()).unwrap(), Outcome::Infeasible(_)));
    assert_eq!(oracle_mwpm(&star), None);
}

#[test]
fn parallel_edges_use_the_cheapest() {
    let g = inst(2, &[(0, 1, 9), (0, 1, 4), (1, 0, 6)]);
    let s = solved(&g);
    assert_eq!(s.weight, 4);
    assert_eq!(s.edges, vec![1]);
}

#[test]
fn certificate_of_single_edge() {
    let g = inst(2, &[(0, 1, 8)]);
    let s = solved(&g);
    let report = check_certificate(&g, &s.pairs, &s.certificate).unwrap();
    assert!(report.is_ok());
    assert_eq!(report.primal, 8 * s.certificate.scale as i128);
    assert_eq!(report.dual, report.primal);
    let mut bad = s.certificate.clone();
    bad.vertex[0] += 1;
    let report = check_certificate(&g, &s.pairs, &bad).unwrap();
    assert!(report.violations.iter().any(|v| v.contains("negative slack")));
}

#[test]
fn certificate_with_a_blossom_dual() {
    // Triangle {1,2,3} carrying dual 4 plus a pendant edge (3,4) of weight 9
    // with endpoint duals 2 and 3: the pendant slack is 9 - 2 - 3 - 4 = 0.
    let g = inst(4, &[(0, 1, 2), (0, 2, 3), (1, 2, 3), (2, 3, 9)]);
    let cert = Certificate {
        scale: 1,
        vertex: vec![1, 1, 2, 3],
        sets: vec![SetDual { vertices: vec![0, 1, 2], value: 4 }],
    };
    let pairs = [(0, 1), (2, 3)];
    let report = check_certificate(&g, &pairs, &cert).unwrap();
    assert!(report.is_ok(), "{:?}", report.violations);
    assert_eq!((report.primal, report.dual), (11, 11));
    assert_eq!(oracle_mwpm(&g).unwrap().0, 11);

    // Structural rejections.
    let mut even = cert.clone();
    even.sets[0].vertices = vec![0, 1];
    assert!(check_certificate(&g, &pairs, &even).is_err());
    let g6 = two_triangles();
    let crossing = Certificate {
        scale: 1,
        vertex: vec![0; 6],
        sets: vec![
            SetDual { vertices: vec![0, 1, 2], value: 0 },
            SetDual { vertices: vec![2, 3, 4], value: 0 },
        ],
    };
    assert!(check_certificate(&g6, &[(0, 1), (2, 3), (4, 5)], &crossing).is_err());
}

#[test]
fn max_matching_oracle_examples() {
    assert_eq!(max_matching_oracle(6, &[]), 0);
    assert_eq!(max_matching_oracle(4, &[(0, 1), (2, 3), (1, 2)]), 2);
    let c5: Vec<(u32, u32)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
    assert_eq!(max_matching_oracle(5, &c5), 2);
}

#[test]
fn cc_dual_update_examples() {
    let mut halvings = 0;
    let mut one = DeltaConstraints::new(1);
    one.cap(0, 6);
    assert_eq!(dual_update_cc(&one, &mut halvings), Some(vec![6]));
    assert_eq!(dual_update_lp(&one).unwrap().deltas, vec![6]);

    // A tight difference cap forces equal increments.
    let mut tied = DeltaConstraints::new(2);
    tied.cap(0, 4);
    tied.cap(1, 9);
    tied.c.push((0, 1, 0));
    assert_eq!(dual_update_cc(&tied, &mut halvings), Some(vec![4, 4]));

    let mut three = DeltaConstraints::new(3);
    for (i, a) in [4, 9, 2].into_iter().enumerate() {
        three.cap(i, a);
    }
    three.b.push((0, 2, 5));
    let d = dual_update_cc(&three, &mut halvings).unwrap();
    assert!(three.feasible(&d));
    assert_eq!(d, vec![4, 9, 1]);

    // No cap at all: unbounded.
    assert_eq!(dual_update_cc(&DeltaConstraints::new(1), &mut halvings), None);
    assert_eq!(halvings, 0);
}

#[test]
fn lp_dual_update_examples() {
    let mut sym = DeltaConstraints::new(2);
    sym.b.push((0, 1, 7));
    let lp = dual_update_lp(&sym).unwrap();
    // Optimum 7 = 3.5 + 3.5; rounding down gives 3 + 3 and the first tree
    // takes the remaining unit.
    assert_eq!(lp.twice_objective, 14);
    assert_eq!(lp.deltas, vec![4, 3]);
    assert!(sym.feasible(&lp.deltas));

    let mut three = DeltaConstraints::new(3);
    for (i, a) in [4, 9, 2].into_iter().enumerate() {
        three.cap(i, a);
    }
    three.b.push((0, 2, 5));
    let lp = dual_update_lp(&three).unwrap();
    assert_eq!(lp.twice_objective, 2 * 14);
    assert!(three.feasible(&lp.deltas));

    assert_eq!(dual_update_lp(&DeltaConstraints::new(2)), None);

    // An odd pair cap still ends tight after rounding.
    let mut odd = DeltaConstraints::new(2);
    odd.cap(0, 1156);
    odd.cap(1, 1514);
    odd.b.push((0, 1, 1621));
    odd.c.push((0, 1, 17907));
    odd.c.push((1, 0, 23837));
    let lp = dual_update_lp(&odd).unwrap();
    assert_eq!(lp.twice_objective, 3242);
    assert_eq!(lp.deltas, vec![811, 810]);
}

#[test]
fn lp_mode_on_a_dense_instance_certifies() {
    let g = instances::generate(&instances::GenSpec { family: instances::Family::RandomDense, n: 1000, seed: 0 }).unwrap();
    let cfg = SolverConfig { init: InitStrategy::Greedy, dual_mode: DualMode::Lp, ..Default::default() };
    let Outcome::Matched(sol) = solve(&g, &cfg).unwrap() else { panic!("no matching") };
    assert!(sol.stats.lp_updates > 0);
    assert!(check_certificate(&g, &sol.pairs, &sol.certificate).unwrap().is_ok());
}

#[test]
fn fractional_threshold_one_matches_greedy_result() {
    let g = two_triangles();
    for init in [InitStrategy::Greedy, InitStrategy::Fractional, InitStrategy::FractionalThresholded] {
        for init_threshold in [1, 100] {
            let config = SolverConfig { init, init_threshold, ..Default::default() };
            assert_eq!(solve(&g, &config).unwrap().weight(), Some(5));
        }
    }
}

#[test]
fn fractional_init_leaves_few_trees_on_bipartite_instances() {
    // Complete bipartite graph with distinct weights: the fractional phase
    // finds an integral optimum, leaving nothing for the main loop.
    let k = 20u32;
    let mut t = Vec::new();
    for i in 0..k {
        for j in 0..k {
            t.push((i, k + j, ((i * 7 + j * 13) % 31) as i64));
        }
    }
    let g = inst(2 * k as usize, &t);
    let frac = solve(&g, &SolverConfig { init: InitStrategy::Fractional, ..Default::default() }).unwrap();
    let greedy = solve(&g, &SolverConfig { init: InitStrategy::Greedy, ..Default::default() }).unwrap();
    assert_eq!(frac.weight(), greedy.weight());
    assert!(frac.stats().init_trees <= greedy.stats().init_trees);
    assert!(frac.stats().init_trees <= 2, "{} trees after fractional init", frac.stats().init_trees);
}

#[test]
fn triangle_chains_stay_shallow() {
    // Zero-weight triangles linked in a path by unit-weight edges.
    for k in [2u32, 10, 50, 400] {
        let mut t = Vec::new();
        for i in 0..k {
            let b = 3 * i;
            t.extend([(b, b + 1, 0), (b + 1, b + 2, 0), (b, b + 2, 0)]);
            if i + 1 < k {
                t.push((b + 2, b + 3, 1));
            }
        }
        let g = inst(3 * k as usize, &t);
        let s = solved(&g);
        assert!(check_certificate(&g, &s.pairs, &s.certificate).unwrap().is_ok());
        assert!(s.stats.max_node_depth <= 3, "depth {} for {k} triangles", s.stats.max_node_depth);
    }
}
