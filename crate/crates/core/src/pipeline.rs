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

//! The three mining stages in order: correlation graph, maximal cliques,
//! diverse dense selection.

use std::io::Write;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::clique::{find_maximal_cliques_with_limit, CliqueSet, DEFAULT_CLIQUE_LIMIT};
use crate::correlation::{build_correlation_graph_exact, CorrelationGraph};
use crate::error::Result;
pub use crate::miner::Mode;
use crate::miner::{find_diverse_dense_with_stats, MinerConfig, MiningResult};
use crate::minhash::{build_with_family, HashFamily};
use crate::network::DynamicNetwork;

/// Counts gathered along the way. Independent of thread count and timing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunStats {
    pub nodes: usize,
    pub edges: usize,
    pub snapshots: usize,
    pub meta_edges: usize,
    /// Verified candidate pairs; approximate mode only.
    pub candidate_pairs: Option<usize>,
    pub cliques: usize,
    pub components: usize,
    pub evaluated: usize,
    pub pooled: usize,
    pub results: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct StageTimings {
    pub correlation_secs: f64,
    pub cliques_secs: f64,
    pub mining_secs: f64,
}

impl StageTimings {
    pub fn total_secs(&self) -> f64 {
        self.correlation_secs + self.cliques_secs + self.mining_secs
    }
}

#[derive(Clone, Debug)]
pub struct MiningRun {
    pub correlation: CorrelationGraph,
    pub cliques: CliqueSet,
    pub results: Vec<MiningResult>,
    pub stats: RunStats,
    pub timings: StageTimings,
}

impl MiningRun {
    /// Results file: a comment header, one line per result, a comment footer
    /// with counts.
    pub fn write_results<W: Write>(
        &self,
        network: &DynamicNetwork,
        cfg: &MinerConfig,
        mut sink: W,
    ) -> Result<()> {
        writeln!(
            sink,
            "# edges\tkind\tdensity\tcorrelation\tactive_snapshots"
        )?;
        writeln!(
            sink,
            "# sigma={} delta={} k={} epsilon={} max_size={} density={} mode={}",
            cfg.sigma,
            cfg.delta,
            cfg.k,
            cfg.epsilon,
            cfg.max_size
                .map_or_else(|| "none".to_string(), |m| m.to_string()),
            cfg.density_kind,
            cfg.mode
        )?;
        for r in &self.results {
            writeln!(sink, "{}", r.format(network))?;
        }
        let s = &self.stats;
        writeln!(
            sink,
            "# results={} cliques={} components={} meta_edges={}",
            s.results, s.cliques, s.components, s.meta_edges
        )?;
        sink.flush()?;
        Ok(())
    }
}

pub fn mine(network: &DynamicNetwork, cfg: &MinerConfig) -> Result<MiningRun> {
    mine_with_limit(network, cfg, DEFAULT_CLIQUE_LIMIT)
}

pub fn mine_with_limit(
    network: &DynamicNetwork,
    cfg: &MinerConfig,
    clique_limit: usize,
) -> Result<MiningRun> {
    cfg.validate()?;
    let mut stats = RunStats {
        nodes: network.node_count(),
        edges: network.edge_count(),
        snapshots: network.snapshot_count(),
        ..Default::default()
    };

    let start = Instant::now();
    let correlation = match cfg.mode {
        Mode::Exact => build_correlation_graph_exact(network, cfg.sigma),
        Mode::Approx => {
            let family = HashFamily::universal(&cfg.minhash)?;
            let (graph, candidates) = build_with_family(network, cfg.sigma, &family);
            stats.candidate_pairs = Some(candidates);
            graph
        }
    };
    let correlation_time = start.elapsed();
    stats.meta_edges = correlation.meta_edge_count();

    let start = Instant::now();
    let cliques = find_maximal_cliques_with_limit(&correlation, clique_limit)?;
    let cliques_time = start.elapsed();
    stats.cliques = cliques.len();

    let start = Instant::now();
    let (results, selection) = find_diverse_dense_with_stats(network, &cliques, cfg)?;
    let mining_time = start.elapsed();
    stats.components = selection.components;
    stats.evaluated = selection.evaluated;
    stats.pooled = selection.pooled;
    stats.results = results.len();

    Ok(MiningRun {
        correlation,
        cliques,
        results,
        stats,
        timings: StageTimings {
            correlation_secs: secs(correlation_time),
            cliques_secs: secs(cliques_time),
            mining_secs: secs(mining_time),
        },
    })
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}
