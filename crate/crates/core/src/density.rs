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

//! Degree-density of edge sets across snapshots.
//!
//! The density of an edge set `H` in snapshot `t` is `2 |E_H ∩ E_t| / |V_H|`
//! where `V_H` is the full endpoint set of `H`, whether or not a node is
//! touched at `t`. Aggregates are taken over the snapshots where at least
//! `k` edges of `H` are active and are 0 when there are none.

use crate::bits::BitSeries;
use crate::error::{Error, Result};
use crate::network::{DynamicNetwork, EdgeId, EdgeSet};

/// Per-snapshot active-edge counts of one edge set.
#[derive(Clone, Debug)]
pub struct Profile {
    counts: Vec<u32>,
    nodes: usize,
}

impl Profile {
    pub fn of(network: &DynamicNetwork, edges: &[EdgeId]) -> Self {
        let mut counts = vec![0u32; network.snapshot_count()];
        for &id in edges {
            for t in network.activity(id).iter_ones() {
                counts[t] += 1;
            }
        }
        Profile {
            counts,
            nodes: network.induced_node_count(edges),
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn count(&self, t: usize) -> u32 {
        self.counts[t]
    }

    /// Snapshots with at least `k` active edges.
    pub fn active(&self, k: usize) -> BitSeries {
        let mut mask = BitSeries::zeros(self.counts.len());
        for (t, &c) in self.counts.iter().enumerate() {
            if c as usize >= k {
                mask.set(t);
            }
        }
        mask
    }

    pub fn snapshot_density(&self, t: usize) -> f64 {
        2.0 * self.counts[t] as f64 / self.nodes as f64
    }

    /// Minimum density over the snapshots in `mask`; 0 for an empty mask.
    pub fn min_over(&self, mask: &BitSeries) -> f64 {
        mask.iter_ones()
            .map(|t| self.counts[t])
            .min()
            .map_or(0.0, |c| 2.0 * c as f64 / self.nodes as f64)
    }

    /// Mean density over the snapshots in `mask`; 0 for an empty mask.
    pub fn avg_over(&self, mask: &BitSeries) -> f64 {
        let size = mask.count_ones();
        if size == 0 {
            return 0.0;
        }
        let total: u64 = mask.iter_ones().map(|t| self.counts[t] as u64).sum();
        2.0 * total as f64 / (size * self.nodes) as f64
    }
}

fn nonempty(candidate: &EdgeSet) -> Result<()> {
    if candidate.is_empty() {
        Err(Error::Domain(
            "density of an empty edge set is undefined".into(),
        ))
    } else {
        Ok(())
    }
}

/// Density of `candidate` in snapshot `t`.
pub fn snapshot_density(network: &DynamicNetwork, candidate: &EdgeSet, t: usize) -> Result<f64> {
    nonempty(candidate)?;
    if t >= network.snapshot_count() {
        return Err(Error::Domain(format!(
            "snapshot {t} out of range for {} snapshots",
            network.snapshot_count()
        )));
    }
    let active = candidate
        .iter()
        .filter(|&id| network.activity(id).get(t))
        .count();
    Ok(2.0 * active as f64 / network.induced_nodes(candidate).len() as f64)
}

/// Snapshots where at least `k` edges of `candidate` are active, ascending.
pub fn active_snapshots(network: &DynamicNetwork, candidate: &EdgeSet, k: usize) -> Vec<usize> {
    Profile::of(network, candidate.as_slice())
        .active(k)
        .iter_ones()
        .collect()
}

/// Minimum density over the `k`-active snapshots.
pub fn density_min_k(network: &DynamicNetwork, candidate: &EdgeSet, k: usize) -> Result<f64> {
    nonempty(candidate)?;
    let p = Profile::of(network, candidate.as_slice());
    Ok(p.min_over(&p.active(k)))
}

/// Average density over the `k`-active snapshots.
pub fn density_avg_k(network: &DynamicNetwork, candidate: &EdgeSet, k: usize) -> Result<f64> {
    nonempty(candidate)?;
    let p = Profile::of(network, candidate.as_slice());
    Ok(p.avg_over(&p.active(k)))
}

/// Static graph weighting each edge by its fraction of active snapshots.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryGraph {
    weights: Vec<f64>,
    appearances: Vec<u32>,
    snapshot_count: usize,
}

impl SummaryGraph {
    /// Number of snapshots in which edge `id` is active.
    pub fn appearances(&self, id: EdgeId) -> u32 {
        self.appearances[id as usize]
    }

    pub fn snapshot_count(&self) -> usize {
        self.snapshot_count
    }

    pub fn weight(&self, id: EdgeId) -> f64 {
        self.weights[id as usize]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

pub fn build_summary_graph(network: &DynamicNetwork) -> SummaryGraph {
    let t = network.snapshot_count();
    let appearances: Vec<u32> = network
        .edges()
        .iter()
        .map(|e| e.activity.count_ones() as u32)
        .collect();
    SummaryGraph {
        weights: appearances.iter().map(|&c| c as f64 / t as f64).collect(),
        appearances,
        snapshot_count: t,
    }
}

/// `2 Σ weight(e) / |V_H|`, which equals the mean density of `candidate`
/// over all snapshots.
pub fn weighted_density(
    network: &DynamicNetwork,
    summary: &SummaryGraph,
    candidate: &EdgeSet,
) -> Result<f64> {
    nonempty(candidate)?;
    let sum: f64 = candidate.iter().map(|id| summary.weight(id)).sum();
    Ok(2.0 * sum / network.induced_nodes(candidate).len() as f64)
}
