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

//! Random partition networks with planted, temporally correlated clusters.
//!
//! Nodes are split into consecutive clusters whose sizes follow a normal
//! law with mean `cluster_mean` and variance `cluster_mean / cluster_shape`.
//! Node pairs inside a cluster are joined with probability `p_in`, pairs
//! across clusters with `p_out`. In correlated mode every cluster owns a
//! timeline and its edges copy it, each bit flipped with probability
//! `noise_flip`; all other series are independent draws.

use std::io::{BufRead, Write};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::bits::BitSeries;
use crate::error::{Error, Result};
use crate::eval::read_groups;
use crate::network::{DynamicNetwork, NodeId};
use crate::seed::stage_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TemporalMode {
    Correlated,
    Independent,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub nodes: usize,
    pub snapshots: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub cluster_mean: f64,
    pub cluster_shape: f64,
    pub base_activity: f64,
    pub noise_flip: f64,
    pub mode: TemporalMode,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            nodes: 100,
            snapshots: 100,
            p_in: 0.7,
            p_out: 0.1,
            cluster_mean: 20.0,
            cluster_shape: 10.0,
            base_activity: 0.5,
            noise_flip: 0.0,
            mode: TemporalMode::Correlated,
            seed: 0,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0 || self.snapshots == 0 {
            return Err(Error::Config("nodes and snapshots must be positive".into()));
        }
        for (name, p) in [
            ("p_in", self.p_in),
            ("p_out", self.p_out),
            ("base_activity", self.base_activity),
            ("noise_flip", self.noise_flip),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} {p} outside [0, 1]")));
            }
        }
        if !(self.cluster_mean > 0.0 && self.cluster_mean <= self.nodes as f64) {
            return Err(Error::Config(format!(
                "cluster mean {} outside (0, {}]",
                self.cluster_mean, self.nodes
            )));
        }
        if !(self.cluster_shape > 0.0 && self.cluster_shape.is_finite()) {
            return Err(Error::Config("cluster shape must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlantedGroup {
    /// Intra-cluster edges, sorted.
    pub edges: Vec<(NodeId, NodeId)>,
    /// Shared cluster timeline; `None` in independent mode.
    pub timeline: Option<BitSeries>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GroundTruth {
    pub groups: Vec<PlantedGroup>,
}

impl GroundTruth {
    pub fn from_groups(groups: Vec<Vec<(NodeId, NodeId)>>) -> Self {
        GroundTruth {
            groups: groups
                .into_iter()
                .map(|mut edges| {
                    edges.sort_unstable();
                    edges.dedup();
                    PlantedGroup {
                        edges,
                        timeline: None,
                    }
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn edge_groups(&self) -> Vec<Vec<(NodeId, NodeId)>> {
        self.groups.iter().map(|g| g.edges.clone()).collect()
    }

    /// One group per line as sorted `u-v` tokens.
    pub fn write<W: Write>(&self, mut sink: W) -> Result<()> {
        for g in &self.groups {
            let tokens: Vec<String> = g.edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
            writeln!(sink, "{}", tokens.join(" "))?;
        }
        sink.flush()?;
        Ok(())
    }

    /// Reads groups written by [`GroundTruth::write`]. Timelines are not
    /// stored and come back as `None`.
    pub fn read<R: BufRead>(source: R) -> Result<Self> {
        Ok(Self::from_groups(read_groups(source)?))
    }
}

/// Cluster sizes summing to `cfg.nodes`.
///
/// A leftover smaller than half the mean (and at least two nodes) is merged
/// into the last cluster instead of forming its own.
pub fn cluster_sizes(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let normal = Normal::new(
        cfg.cluster_mean,
        (cfg.cluster_mean / cfg.cluster_shape).sqrt(),
    )
    .map_err(|e| Error::Config(e.to_string()))?;
    let min_tail = ((cfg.cluster_mean / 2.0).round() as usize).max(2);
    let mut sizes = Vec::new();
    let mut remaining = cfg.nodes;
    while remaining > 0 {
        let drawn = normal.sample(rng).round().max(2.0) as usize;
        if drawn >= remaining || remaining - drawn < min_tail {
            sizes.push(remaining);
            break;
        }
        sizes.push(drawn);
        remaining -= drawn;
    }
    Ok(sizes)
}

const REDRAWS: usize = 64;

/// Bernoulli(`p`) series with at least one active snapshot. After repeated
/// all-zero draws a single random snapshot is switched on.
fn nonzero_series(rng: &mut ChaCha8Rng, len: usize, p: f64) -> BitSeries {
    for _ in 0..REDRAWS {
        let bits: Vec<bool> = (0..len).map(|_| rng.random_bool(p)).collect();
        let s = BitSeries::from_bools(&bits);
        if !s.none() {
            return s;
        }
    }
    BitSeries::from_indices(len, [rng.random_range(0..len)])
}

fn noisy_copy(rng: &mut ChaCha8Rng, timeline: &BitSeries, flip: f64) -> BitSeries {
    for _ in 0..REDRAWS {
        let mut s = timeline.clone();
        if flip > 0.0 {
            for t in 0..s.len() {
                if rng.random_bool(flip) {
                    s.flip(t);
                }
            }
        }
        if !s.none() {
            return s;
        }
    }
    BitSeries::from_indices(timeline.len(), [rng.random_range(0..timeline.len())])
}

pub fn generate(cfg: &GenConfig) -> Result<(DynamicNetwork, GroundTruth)> {
    cfg.validate()?;
    let mut rng = stage_rng(cfg.seed, "partition");
    let sizes = cluster_sizes(cfg, &mut rng)?;
    let mut cluster_of = Vec::with_capacity(cfg.nodes);
    for (c, &size) in sizes.iter().enumerate() {
        cluster_of.extend(std::iter::repeat_n(c, size));
    }

    let mut rng = stage_rng(cfg.seed, "structure");
    let mut pairs = Vec::new();
    for u in 0..cfg.nodes {
        for v in u + 1..cfg.nodes {
            let p = if cluster_of[u] == cluster_of[v] {
                cfg.p_in
            } else {
                cfg.p_out
            };
            if rng.random_bool(p) {
                pairs.push((u as NodeId, v as NodeId));
            }
        }
    }

    let mut rng = stage_rng(cfg.seed, "temporal");
    let timelines: Vec<Option<BitSeries>> = match cfg.mode {
        TemporalMode::Correlated => sizes
            .iter()
            .map(|_| Some(nonzero_series(&mut rng, cfg.snapshots, cfg.base_activity)))
            .collect(),
        TemporalMode::Independent => vec![None; sizes.len()],
    };
    let mut groups: Vec<Vec<(NodeId, NodeId)>> = vec![Vec::new(); sizes.len()];
    let mut edges = Vec::with_capacity(pairs.len());
    for &(u, v) in &pairs {
        let (cu, cv) = (cluster_of[u as usize], cluster_of[v as usize]);
        let series = match (&timelines[cu], cu == cv) {
            (Some(timeline), true) => noisy_copy(&mut rng, timeline, cfg.noise_flip),
            _ => nonzero_series(&mut rng, cfg.snapshots, cfg.base_activity),
        };
        if cu == cv {
            groups[cu].push((u, v));
        }
        edges.push((u, v, series));
    }

    let network = DynamicNetwork::new(cfg.nodes, cfg.snapshots, edges)?;
    let truth = GroundTruth {
        groups: groups
            .into_iter()
            .zip(timelines)
            .filter(|(g, _)| !g.is_empty())
            .map(|(edges, timeline)| PlantedGroup { edges, timeline })
            .collect(),
    };
    Ok((network, truth))
}
