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

//! Exhaustive reference answers for small networks.
//!
//! Every nonempty edge subset is checked directly against the definitions.
//! Meant for tests; the cost is exponential in the edge count.

use crate::correlation::pearson;
use crate::error::{Error, Result};
use crate::miner::DensityKind;
use crate::network::{DynamicNetwork, EdgeId, EdgeSet};

/// Largest edge count accepted by [`brute_force`].
pub const MAX_EDGES: usize = 16;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleAnswer {
    /// Connected, correlated and dense edge sets, larger first then
    /// lexicographic.
    pub all_valid: Vec<EdgeSet>,
    /// Members of `all_valid` not contained in another member.
    pub maximal: Vec<EdgeSet>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn connected(network: &DynamicNetwork, ids: &[EdgeId]) -> bool {
    let mut parent: Vec<usize> = (0..network.node_count()).collect();
    for &id in ids {
        let e = network.edge(id);
        let (a, b) = (
            find(&mut parent, e.u as usize),
            find(&mut parent, e.v as usize),
        );
        parent[a] = b;
    }
    let root = find(&mut parent, network.edge(ids[0]).u as usize);
    ids.iter()
        .all(|&id| find(&mut parent, network.edge(id).u as usize) == root)
}

/// Density of `ids` under `kind`, 0 when no snapshot has `k` active edges.
/// The average is formed from integer totals with a single division.
pub fn density(network: &DynamicNetwork, ids: &[EdgeId], k: usize, kind: DensityKind) -> f64 {
    let mut nodes: Vec<u32> = ids
        .iter()
        .flat_map(|&id| [network.edge(id).u, network.edge(id).v])
        .collect();
    nodes.sort_unstable();
    nodes.dedup();
    let counts: Vec<usize> = (0..network.snapshot_count())
        .map(|t| {
            ids.iter()
                .filter(|&&id| network.activity(id).get(t))
                .count()
        })
        .filter(|&c| c >= k)
        .collect();
    if counts.is_empty() {
        return 0.0;
    }
    match kind {
        DensityKind::Min => 2.0 * *counts.iter().min().unwrap() as f64 / nodes.len() as f64,
        DensityKind::Avg => {
            2.0 * counts.iter().sum::<usize>() as f64 / (counts.len() * nodes.len()) as f64
        }
    }
}

pub fn brute_force(
    network: &DynamicNetwork,
    sigma: f64,
    delta: f64,
    k: usize,
    density_kind: DensityKind,
    max_edges: usize,
) -> Result<OracleAnswer> {
    let m = network.edge_count();
    if max_edges > MAX_EDGES || m > max_edges {
        return Err(Error::ResourceLimit(format!(
            "exhaustive search over {m} edges refused (limit {})",
            max_edges.min(MAX_EDGES)
        )));
    }
    // correlated[i]: mask of edges whose correlation with i reaches sigma
    let mut correlated = vec![0u32; m];
    for (i, row) in correlated.iter_mut().enumerate() {
        for j in 0..m {
            if i == j
                || pearson(network.activity(i as EdgeId), network.activity(j as EdgeId)) >= sigma
            {
                *row |= 1 << j;
            }
        }
    }
    let full = if m == 0 { 0 } else { (1u32 << m) - 1 };
    let mut valid = vec![false; full as usize + 1];
    for mask in 1..=full {
        let ids: Vec<EdgeId> = (0..m as u32).filter(|&i| mask >> i & 1 == 1).collect();
        if ids.iter().any(|&i| correlated[i as usize] & mask != mask) {
            continue;
        }
        if !connected(network, &ids) {
            continue;
        }
        valid[mask as usize] = density(network, &ids, k, density_kind) >= delta;
    }
    // above[mask]: some strict superset of mask is valid
    let mut above = vec![false; full as usize + 1];
    for mask in (1..=full).rev() {
        for i in 0..m {
            let sup = mask | 1 << i;
            if sup != mask && (valid[sup as usize] || above[sup as usize]) {
                above[mask as usize] = true;
                break;
            }
        }
    }
    let to_set = |mask: u32| EdgeSet::new((0..m as u32).filter(|&i| mask >> i & 1 == 1));
    let mut answer = OracleAnswer::default();
    for mask in 1..=full {
        if valid[mask as usize] {
            answer.all_valid.push(to_set(mask));
            if !above[mask as usize] {
                answer.maximal.push(to_set(mask));
            }
        }
    }
    let canonical = |a: &EdgeSet, b: &EdgeSet| b.len().cmp(&a.len()).then_with(|| a.cmp(b));
    answer.all_valid.sort_by(canonical);
    answer.maximal.sort_by(canonical);
    Ok(answer)
}

/// Maximal cliques of a graph on `adjacency.len()` vertices by checking
/// every vertex subset. At most 20 vertices.
pub fn brute_force_cliques(adjacency: &[Vec<bool>]) -> Result<Vec<Vec<usize>>> {
    let n = adjacency.len();
    if n > 20 {
        return Err(Error::ResourceLimit(format!(
            "{n} vertices exceed the limit of 20"
        )));
    }
    let neighbors: Vec<u32> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && adjacency[i][j])
                .fold(0, |m, j| m | 1 << j)
        })
        .collect();
    let is_clique =
        |mask: u32| (0..n).all(|i| mask >> i & 1 == 0 || (neighbors[i] | 1 << i) & mask == mask);
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        if !is_clique(mask) {
            continue;
        }
        let maximal = (0..n).all(|i| mask >> i & 1 == 1 || !is_clique(mask | 1 << i));
        if maximal {
            out.push((0..n).filter(|&i| mask >> i & 1 == 1).collect());
        }
    }
    Ok(out)
}
