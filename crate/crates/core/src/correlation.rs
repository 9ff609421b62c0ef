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

//! Pearson correlation of activity series and the correlation graph.

use std::io::Write;

use rayon::prelude::*;

use crate::bits::BitSeries;
use crate::error::Result;
use crate::network::{DynamicNetwork, EdgeId, EdgeSet};

/// Pearson correlation of two equal-length binary series.
///
/// For 0/1 vectors with `a` and `b` ones out of `n` and `c` common ones this
/// is `(n c - a b) / sqrt(a (n - a) b (n - b))`. A constant series has no
/// variance; the pair then scores 1 when the series are identical and 0
/// otherwise.
pub fn pearson(x: &BitSeries, y: &BitSeries) -> f64 {
    assert_eq!(x.len(), y.len(), "series lengths differ");
    let n = x.len() as i64;
    let a = x.count_ones() as i64;
    let b = y.count_ones() as i64;
    let constant = |ones: i64| ones == 0 || ones == n;
    if constant(a) || constant(b) {
        return if x == y { 1.0 } else { 0.0 };
    }
    let c = x.and_count(y) as i64;
    let num = (n * c - a * b) as f64;
    let den = ((a * (n - a)) as f64).sqrt() * ((b * (n - b)) as f64).sqrt();
    (num / den).clamp(-1.0, 1.0)
}

/// Minimum pairwise correlation over the edges of `candidate`; 1 for sets
/// with fewer than two edges.
pub fn subgraph_correlation(network: &DynamicNetwork, candidate: &EdgeSet) -> f64 {
    let ids = candidate.as_slice();
    let mut floor = 1.0f64;
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            floor = floor.min(pearson(network.activity(a), network.activity(b)));
        }
    }
    floor
}

/// Graph over the edges of a network, joining pairs whose activity series
/// correlate at or above `sigma`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationGraph {
    sigma: f64,
    adjacency: Vec<Vec<EdgeId>>,
}

impl CorrelationGraph {
    /// Builds the graph from unordered pairs. Self pairs are dropped and
    /// duplicates collapse.
    pub fn from_pairs(
        vertex_count: usize,
        sigma: f64,
        pairs: impl IntoIterator<Item = (EdgeId, EdgeId)>,
    ) -> Self {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (a, b) in pairs {
            if a != b {
                adjacency[a as usize].push(b);
                adjacency[b as usize].push(a);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        CorrelationGraph { sigma, adjacency }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn meta_edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: EdgeId) -> &[EdgeId] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: EdgeId) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn is_adjacent(&self, a: EdgeId, b: EdgeId) -> bool {
        self.adjacency[a as usize].binary_search(&b).is_ok()
    }

    /// Meta-edges as `(a, b)` with `a < b`, ascending.
    pub fn meta_edges(&self) -> impl Iterator<Item = (EdgeId, EdgeId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(a, list)| {
            let a = a as EdgeId;
            list.iter()
                .copied()
                .filter(move |&b| b > a)
                .map(move |b| (a, b))
        })
    }

    /// Whether every meta-edge of `self` is also one of `other`.
    pub fn is_subgraph_of(&self, other: &CorrelationGraph) -> bool {
        self.vertex_count() == other.vertex_count()
            && self.meta_edges().all(|(a, b)| other.is_adjacent(a, b))
    }

    /// Writes `e1 e2 corr` per meta-edge, correlation to 6 decimals.
    pub fn write_dump<W: Write>(&self, network: &DynamicNetwork, mut sink: W) -> Result<()> {
        for (a, b) in self.meta_edges() {
            let c = pearson(network.activity(a), network.activity(b));
            writeln!(sink, "{a} {b} {c:.6}")?;
        }
        sink.flush()?;
        Ok(())
    }
}

/// Correlation graph from all edge pairs.
pub fn build_correlation_graph_exact(network: &DynamicNetwork, sigma: f64) -> CorrelationGraph {
    let n = network.edge_count();
    let rows: Vec<Vec<(EdgeId, EdgeId)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let a = network.activity(i as EdgeId);
            ((i + 1)..n)
                .filter(|&j| pearson(a, network.activity(j as EdgeId)) >= sigma)
                .map(|j| (i as EdgeId, j as EdgeId))
                .collect()
        })
        .collect();
    CorrelationGraph::from_pairs(n, sigma, rows.into_iter().flatten())
}
