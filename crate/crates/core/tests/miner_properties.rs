// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

mod common;

use corrdense::correlation::build_correlation_graph_exact;
use corrdense::density::{density_avg_k, density_min_k};
use corrdense::miner::{find_diverse_dense, DensityTester, Verdict};
use corrdense::oracle::brute_force;
use corrdense::{find_maximal_cliques, mine, DensityKind, EdgeSet, MinerConfig};
use proptest::prelude::*;

use common::*;

fn kind_strategy() -> impl Strategy<Value = DensityKind> {
    prop_oneof![Just(DensityKind::Min), Just(DensityKind::Avg)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn results_are_sound_against_oracle(
        seed in any::<u64>(),
        nodes in 3usize..=7,
        snapshots in 1usize..=8,
        sigma in prop_oneof![Just(0.0), Just(0.3), Just(0.6), Just(0.9)],
        delta in prop_oneof![Just(1.0), Just(1.25), Just(1.5), Just(2.0)],
        k in 1usize..=2,
        kind in kind_strategy(),
    ) {
        let mut rng = rng(seed);
        let edges = (nodes * (nodes - 1) / 2).min(14);
        let net = random_network(&mut rng, nodes, edges, snapshots);
        let cfg = MinerConfig { sigma, delta, k, epsilon: 1.0, density_kind: kind, ..Default::default() };
        let run = mine(&net, &cfg).unwrap();
        let answer = brute_force(&net, sigma, delta, k, kind, 16).unwrap();
        for r in &run.results {
            prop_assert!(answer.all_valid.contains(&r.edges), "{:?} not valid", r.edges);
        }
        prop_assert!(check_results(&net, &cfg, &run.results).is_empty());
    }

    #[test]
    fn invariants_hold_with_diversity_and_size_limits(
        seed in any::<u64>(),
        nodes in 4usize..=9,
        snapshots in 2usize..=10,
        epsilon in prop_oneof![Just(0.0), Just(0.25), Just(0.5), Just(0.75)],
        max_size in prop_oneof![Just(None), Just(Some(3usize)), Just(Some(6usize))],
        kind in kind_strategy(),
    ) {
        let mut rng = rng(seed);
        let edges = nodes * (nodes - 1) / 3;
        let net = random_network(&mut rng, nodes, edges, snapshots);
        let cfg = MinerConfig {
            sigma: 0.3,
            delta: 1.2,
            epsilon,
            max_size,
            density_kind: kind,
            ..Default::default()
        };
        let run = mine(&net, &cfg).unwrap();
        let bad = check_results(&net, &cfg, &run.results);
        prop_assert!(bad.is_empty(), "{bad:?}");
        for r in &run.results {
            let want = match kind {
                DensityKind::Min => density_min_k(&net, &r.edges, cfg.k).unwrap(),
                DensityKind::Avg => density_avg_k(&net, &r.edges, cfg.k).unwrap(),
            };
            prop_assert_eq!(r.density_value, want);
            prop_assert!(r.correlation_floor >= cfg.sigma);
            prop_assert_eq!(r.active_snapshots.len(), densities_ref(&net, &r.edges, cfg.k).len());
            if let Some(m) = max_size {
                prop_assert!(r.edges.len() < m);
            }
        }
    }

    #[test]
    fn min_dense_implies_avg_dense(
        seed in any::<u64>(),
        nodes in 2usize..=8,
        snapshots in 1usize..=12,
        threshold in 0.5f64..3.0,
        k in 1usize..=3,
    ) {
        let mut rng = rng(seed);
        let edges = nodes * (nodes - 1) / 2;
        let net = random_network(&mut rng, nodes, edges, snapshots);
        let cfg = MinerConfig { k, ..Default::default() };
        let tester = DensityTester::new(&net, &cfg);
        let all = EdgeSet::new(0..net.edge_count() as u32);
        let active = tester.active_snapshots(all.as_slice());
        if tester.is_min_dense(all.as_slice(), &active, threshold) {
            prop_assert!(tester.is_avg_dense(all.as_slice(), &active, threshold));
        }
        let avg = density_ref(&net, &all, k, DensityKind::Avg);
        prop_assert_eq!(tester.is_avg_dense(all.as_slice(), &active, threshold), !active.none() && avg >= threshold);
    }

    #[test]
    fn extracted_subsets_are_dense_and_connected(
        seed in any::<u64>(),
        nodes in 3usize..=8,
        snapshots in 1usize..=6,
        delta in prop_oneof![Just(1.5), Just(2.0), Just(2.5)],
        kind in kind_strategy(),
        strict in any::<bool>(),
    ) {
        let mut rng = rng(seed);
        let edges = (nodes * (nodes - 1) / 2).min(12);
        let net = random_network(&mut rng, nodes, edges, snapshots);
        let cfg = MinerConfig { delta, density_kind: kind, strict_min_gate: strict, ..Default::default() };
        let tester = DensityTester::new(&net, &cfg);
        let all = EdgeSet::new(0..net.edge_count() as u32);
        if let Verdict::ContainsDense(found) = tester.is_dense(&all).unwrap() {
            let mut seen = std::collections::HashSet::new();
            for s in &found {
                prop_assert!(seen.insert(s.clone()), "duplicate {s:?}");
                prop_assert!(connected_ref(&net, s));
                prop_assert!(density_ref(&net, s, 1, kind) >= delta);
                prop_assert!(s.is_subset_of(&all) && s != &all);
            }
        }
    }
}

#[test]
fn dense_components_are_recovered_exactly() {
    // two disjoint 4-cliques with their own timelines and a weak link
    let a: Vec<bool> = (0..8).map(|t| t < 4).collect();
    let b: Vec<bool> = (0..8).map(|t| t >= 4).collect();
    let link: Vec<bool> = (0..8).map(|t| t % 3 == 0).collect();
    let mut edges = Vec::new();
    for (base, series) in [(0u32, &a), (4u32, &b)] {
        for u in 0..4 {
            for v in u + 1..4 {
                edges.push((base + u, base + v, corrdense::BitSeries::from_bools(series)));
            }
        }
    }
    edges.push((3, 4, corrdense::BitSeries::from_bools(&link)));
    let net = corrdense::DynamicNetwork::new(8, 8, edges).unwrap();
    for kind in [DensityKind::Min, DensityKind::Avg] {
        let cfg = MinerConfig {
            sigma: 0.9,
            delta: 3.0,
            epsilon: 1.0,
            density_kind: kind,
            ..Default::default()
        };
        let graph = build_correlation_graph_exact(&net, cfg.sigma);
        let cliques = find_maximal_cliques(&graph).unwrap();
        let results = find_diverse_dense(&net, &cliques, &cfg).unwrap();
        let answer = brute_force_if_small(&net, &cfg);
        let mut got: Vec<EdgeSet> = results.iter().map(|r| r.edges.clone()).collect();
        got.sort();
        assert_eq!(got.len(), 2);
        if let Some(mut want) = answer {
            want.sort();
            assert_eq!(got, want);
        }
        assert_eq!(
            result_keys(&net, &results)
                .iter()
                .map(Vec::len)
                .collect::<Vec<_>>(),
            vec![6, 6]
        );
    }
}

fn brute_force_if_small(
    net: &corrdense::DynamicNetwork,
    cfg: &MinerConfig,
) -> Option<Vec<EdgeSet>> {
    brute_force(net, cfg.sigma, cfg.delta, cfg.k, cfg.density_kind, 16)
        .ok()
        .map(|a| a.maximal)
}

#[test]
fn repeated_runs_are_identical() {
    let mut rng = rng(11);
    let net = random_network(&mut rng, 12, 40, 16);
    let cfg = MinerConfig {
        sigma: 0.2,
        delta: 1.1,
        epsilon: 0.5,
        ..Default::default()
    };
    let first = mine(&net, &cfg).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap();
    let second = pool.install(|| mine(&net, &cfg)).unwrap();
    assert_eq!(first.results, second.results);
    assert_eq!(first.cliques, second.cliques);
    assert_eq!(first.stats, second.stats);
}

/// The half-threshold gate peels by static degree while the average runs
/// over the snapshots where the remaining edges are active. A subgraph that
/// is dense only in a snapshot the peel never isolates slips through.
#[test]
fn peeling_gate_misses_a_snapshot_local_subgraph() {
    let t = |on: &[usize]| corrdense::BitSeries::from_indices(3, on.iter().copied());
    let edges = vec![
        (0, 3, t(&[1])),
        (0, 4, t(&[1])),
        (0, 5, t(&[1])),
        (1, 2, t(&[0, 1])),
        (1, 3, t(&[1])),
        (1, 4, t(&[2])),
        (2, 3, t(&[0])),
        (2, 4, t(&[0])),
        (3, 5, t(&[1])),
        (4, 5, t(&[1])),
    ];
    let net = corrdense::DynamicNetwork::new(6, 3, edges).unwrap();
    let cfg = MinerConfig {
        delta: 2.5,
        density_kind: DensityKind::Avg,
        ..Default::default()
    };
    let tester = DensityTester::new(&net, &cfg);
    let all = EdgeSet::new(0..net.edge_count() as u32);
    let active = tester.active_snapshots(all.as_slice());
    assert!(!tester.contains_dense(&all, &active));

    // edges 0-3 0-4 0-5 3-5 4-5, all active only in snapshot 1
    let witness = EdgeSet::new([0, 1, 2, 8, 9]);
    assert!(connected_ref(&net, &witness));
    assert_eq!(density_ref(&net, &witness, 1, DensityKind::Avg), 2.5);
}
