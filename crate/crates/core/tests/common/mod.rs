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

//! Helpers shared by the integration tests: random instances and re-checks
//! written directly from the definitions.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use corrdense::{BitSeries, DensityKind, DynamicNetwork, EdgeSet, MinerConfig, MiningResult};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random network with `edges` distinct edges on `nodes` nodes; each series
/// has at least one active snapshot. Series are drawn from a few shared
/// templates with occasional flips so that correlated pairs are common.
pub fn random_network(
    rng: &mut ChaCha8Rng,
    nodes: usize,
    edges: usize,
    snapshots: usize,
) -> DynamicNetwork {
    let mut pairs: Vec<(u32, u32)> = (0..nodes as u32)
        .flat_map(|u| (u + 1..nodes as u32).map(move |v| (u, v)))
        .collect();
    pairs.shuffle(rng);
    pairs.truncate(edges);
    let templates: Vec<Vec<bool>> = (0..3)
        .map(|_| (0..snapshots).map(|_| rng.random_bool(0.5)).collect())
        .collect();
    let list = pairs.into_iter().map(|(u, v)| {
        let mut bits = templates[rng.random_range(0..templates.len())].clone();
        for b in bits.iter_mut() {
            if rng.random_bool(0.2) {
                *b = !*b;
            }
        }
        if !bits.iter().any(|&b| b) {
            let t = rng.random_range(0..snapshots);
            bits[t] = true;
        }
        (u, v, BitSeries::from_bools(&bits))
    });
    DynamicNetwork::new(nodes, snapshots, list).unwrap()
}

pub fn bits(network: &DynamicNetwork, id: u32) -> Vec<bool> {
    let s = network.activity(id);
    (0..s.len()).map(|t| s.get(t)).collect()
}

/// Two-pass Pearson correlation; constant series give 1 when identical and
/// 0 otherwise.
pub fn pearson_ref(x: &[bool], y: &[bool]) -> f64 {
    let n = x.len() as f64;
    let xs: Vec<f64> = x.iter().map(|&b| b as u8 as f64).collect();
    let ys: Vec<f64> = y.iter().map(|&b| b as u8 as f64).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = ys.iter().map(|b| (b - my) * (b - my)).sum();
    if sxx == 0.0 || syy == 0.0 {
        return if x == y { 1.0 } else { 0.0 };
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(a, b)| (a - mx) * (b - my)).sum();
    sxy / (sxx * syy).sqrt()
}

pub fn connected_ref(network: &DynamicNetwork, set: &EdgeSet) -> bool {
    let ids: Vec<u32> = set.iter().collect();
    if ids.is_empty() {
        return false;
    }
    let mut reached = vec![false; ids.len()];
    let mut nodes = BTreeSet::new();
    let first = network.edge(ids[0]);
    nodes.insert(first.u);
    nodes.insert(first.v);
    reached[0] = true;
    loop {
        let mut grew = false;
        for (i, &id) in ids.iter().enumerate() {
            let e = network.edge(id);
            if !reached[i] && (nodes.contains(&e.u) || nodes.contains(&e.v)) {
                reached[i] = true;
                nodes.insert(e.u);
                nodes.insert(e.v);
                grew = true;
            }
        }
        if !grew {
            return reached.iter().all(|&r| r);
        }
    }
}

/// Active edge counts of the snapshots with at least `k` active edges, and
/// the node count of `set`.
pub fn counts_ref(network: &DynamicNetwork, set: &EdgeSet, k: usize) -> (Vec<usize>, usize) {
    let mut nodes = BTreeSet::new();
    for id in set.iter() {
        nodes.insert(network.edge(id).u);
        nodes.insert(network.edge(id).v);
    }
    let counts = (0..network.snapshot_count())
        .map(|t| set.iter().filter(|&id| network.activity(id).get(t)).count())
        .filter(|&c| c >= k && c > 0)
        .collect();
    (counts, nodes.len())
}

/// Per-snapshot densities over the snapshots with at least `k` active edges.
pub fn densities_ref(network: &DynamicNetwork, set: &EdgeSet, k: usize) -> Vec<f64> {
    let (counts, nodes) = counts_ref(network, set, k);
    counts
        .iter()
        .map(|&c| 2.0 * c as f64 / nodes as f64)
        .collect()
}

/// Density with exact rational arithmetic up to one final division.
pub fn density_ref(network: &DynamicNetwork, set: &EdgeSet, k: usize, kind: DensityKind) -> f64 {
    let (counts, nodes) = counts_ref(network, set, k);
    if counts.is_empty() {
        return 0.0;
    }
    match kind {
        DensityKind::Min => 2.0 * *counts.iter().min().unwrap() as f64 / nodes as f64,
        DensityKind::Avg => {
            2.0 * counts.iter().sum::<usize>() as f64 / (counts.len() * nodes) as f64
        }
    }
}

pub fn jaccard_ref(a: &EdgeSet, b: &EdgeSet) -> f64 {
    let a: BTreeSet<u32> = a.iter().collect();
    let b: BTreeSet<u32> = b.iter().collect();
    a.intersection(&b).count() as f64 / a.union(&b).count() as f64
}

/// Re-checks every output property; returns a description of each failure.
pub fn check_results(
    network: &DynamicNetwork,
    cfg: &MinerConfig,
    results: &[MiningResult],
) -> Vec<String> {
    let mut bad = Vec::new();
    let mut series: HashMap<u32, Vec<bool>> = HashMap::new();
    for (i, r) in results.iter().enumerate() {
        let set = &r.edges;
        if set.is_empty() {
            bad.push(format!("result {i} is empty"));
            continue;
        }
        if !connected_ref(network, set) {
            bad.push(format!("result {i} is not connected"));
        }
        if cfg.max_size.is_some_and(|m| set.len() > m) {
            bad.push(format!("result {i} has {} edges", set.len()));
        }
        let ids: Vec<u32> = set.iter().collect();
        for &id in &ids {
            series.entry(id).or_insert_with(|| bits(network, id));
        }
        let mut floor = 1.0f64;
        for (x, &a) in ids.iter().enumerate() {
            for &b in &ids[x + 1..] {
                floor = floor.min(pearson_ref(&series[&a], &series[&b]));
            }
        }
        if floor < cfg.sigma - 1e-12 {
            bad.push(format!("result {i} has correlation floor {floor}"));
        }
        let rho = density_ref(network, set, cfg.k, cfg.density_kind);
        if rho < cfg.delta - 1e-12 {
            bad.push(format!("result {i} has density {rho}"));
        }
        for (j, other) in results.iter().enumerate().skip(i + 1) {
            let jac = jaccard_ref(set, &other.edges);
            if jac > cfg.epsilon {
                bad.push(format!("results {i} and {j} have Jaccard {jac}"));
            }
            if set.is_subset_of(&other.edges) || other.edges.is_subset_of(set) {
                bad.push(format!("results {i} and {j} are nested"));
            }
        }
    }
    bad
}

pub fn result_keys(network: &DynamicNetwork, results: &[MiningResult]) -> Vec<Vec<(u32, u32)>> {
    results
        .iter()
        .map(|r| r.edges.iter().map(|id| network.edge(id).key()).collect())
        .collect()
}
