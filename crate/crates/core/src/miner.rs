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

//! From maximal correlated cliques to dense, maximal, diverse edge sets.
//!
//! Every clique is split into the parts that are connected in the network.
//! Those components are visited largest first. A component that is already
//! covered by an earlier set, or too similar to an accepted one, is skipped.
//! Otherwise it is accepted when dense. When it is not dense, min-degree
//! peeling first checks whether a dense subset can exist at all (half the
//! threshold must be reached somewhere along the peel) and then searches the
//! peel tree for dense subsets, which are pooled and admitted at the end.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::BitSeries;
use crate::clique::CliqueSet;
use crate::correlation::subgraph_correlation;
use crate::density::{build_summary_graph, Profile, SummaryGraph};
use crate::error::{Error, Result};
use crate::minhash::MinHashConfig;
use crate::network::{DynamicNetwork, EdgeId, EdgeSet, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityKind {
    /// Minimum density over the active snapshots.
    Min,
    /// Average density over the active snapshots.
    Avg,
}

impl fmt::Display for DensityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DensityKind::Min => "min",
            DensityKind::Avg => "avg",
        })
    }
}

impl FromStr for DensityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(DensityKind::Min),
            "avg" => Ok(DensityKind::Avg),
            other => Err(Error::Config(format!("unknown density kind `{other}`"))),
        }
    }
}

/// How the correlation graph is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Approx,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Approx => "approx",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinerConfig {
    /// Correlation threshold.
    pub sigma: f64,
    /// Density threshold.
    pub delta: f64,
    /// A snapshot counts for an edge set when at least `k` of its edges are
    /// active there.
    pub k: usize,
    /// Largest Jaccard similarity allowed between two reported sets.
    pub epsilon: f64,
    /// Components with `max_size` or more edges are skipped. `None` is
    /// unbounded.
    pub max_size: Option<usize>,
    pub density_kind: DensityKind,
    pub mode: Mode,
    /// Used only in [`Mode::Approx`].
    pub minhash: MinHashConfig,
    /// Apply the half-threshold peeling gate under [`DensityKind::Min`].
    pub strict_min_gate: bool,
}

impl Default for MinerConfig {
    fn default() -> Self {
        MinerConfig {
            sigma: 0.8,
            delta: 2.0,
            k: 1,
            epsilon: 0.25,
            max_size: None,
            density_kind: DensityKind::Avg,
            mode: Mode::Exact,
            minhash: MinHashConfig::default(),
            strict_min_gate: true,
        }
    }
}

impl MinerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(-1.0..=1.0).contains(&self.sigma) {
            return Err(Error::Config(format!(
                "sigma {} outside [-1, 1]",
                self.sigma
            )));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::Config(format!(
                "delta {} must be positive",
                self.delta
            )));
        }
        if self.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::Config(format!(
                "epsilon {} outside [0, 1]",
                self.epsilon
            )));
        }
        if self.max_size == Some(0) {
            return Err(Error::Config("max size must be at least 1".into()));
        }
        if self.mode == Mode::Approx {
            self.minhash.validate()?;
        }
        Ok(())
    }
}

/// Outcome of a density test on one edge set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Dense,
    /// Not dense itself; carries the dense subsets found by peeling.
    ContainsDense(Vec<EdgeSet>),
    NotDense,
}

/// An accepted edge set.
#[derive(Clone, Debug, PartialEq)]
pub struct MiningResult {
    pub edges: EdgeSet,
    pub density_value: f64,
    pub density_kind: DensityKind,
    pub correlation_floor: f64,
    pub active_snapshots: Vec<usize>,
}

impl MiningResult {
    fn describe(network: &DynamicNetwork, edges: EdgeSet, cfg: &MinerConfig) -> Self {
        let profile = Profile::of(network, edges.as_slice());
        let active = profile.active(cfg.k);
        let density_value = match cfg.density_kind {
            DensityKind::Min => profile.min_over(&active),
            DensityKind::Avg => profile.avg_over(&active),
        };
        MiningResult {
            correlation_floor: subgraph_correlation(network, &edges),
            edges,
            density_value,
            density_kind: cfg.density_kind,
            active_snapshots: active.iter_ones().collect(),
        }
    }

    /// `u-v ...<TAB>kind<TAB>density<TAB>correlation<TAB>active`.
    pub fn format(&self, network: &DynamicNetwork) -> String {
        format!(
            "{}\t{}\t{:.6}\t{:.6}\t{}",
            network.format_edges(&self.edges),
            self.density_kind,
            self.density_value,
            self.correlation_floor,
            self.active_snapshots.len()
        )
    }
}

/// `|a ∩ b| / |a ∪ b|`.
pub fn jaccard(a: &EdgeSet, b: &EdgeSet) -> Result<f64> {
    if a.is_empty() && b.is_empty() {
        return Err(Error::Domain("Jaccard similarity of two empty sets".into()));
    }
    let inter = a.intersection_len(b);
    Ok(inter as f64 / (a.len() + b.len() - inter) as f64)
}

/// Connected parts of every clique, deduplicated, largest first with
/// lexicographic ties.
pub fn extract_components(network: &DynamicNetwork, cliques: &CliqueSet) -> Vec<EdgeSet> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for clique in cliques.iter() {
        for comp in network.connected_components(clique.as_slice()) {
            if seen.insert(comp.clone()) {
                out.push(comp);
            }
        }
    }
    out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    out
}

/// Density predicates bound to one network and configuration.
pub struct DensityTester<'a> {
    network: &'a DynamicNetwork,
    summary: SummaryGraph,
    cfg: MinerConfig,
}

impl<'a> DensityTester<'a> {
    pub fn new(network: &'a DynamicNetwork, cfg: &MinerConfig) -> Self {
        DensityTester {
            network,
            summary: build_summary_graph(network),
            cfg: *cfg,
        }
    }

    /// `K`: snapshots with at least `k` active edges of `edges`.
    pub fn active_snapshots(&self, edges: &[EdgeId]) -> BitSeries {
        if self.cfg.k == 1 {
            let mut mask = BitSeries::zeros(self.network.snapshot_count());
            for &id in edges {
                mask.or_assign(self.network.activity(id));
            }
            mask
        } else {
            Profile::of(self.network, edges).active(self.cfg.k)
        }
    }

    /// Average density over `active` compared against `threshold`.
    ///
    /// Over all snapshots this is the weighted density in the summary graph;
    /// over a subset it uses the summary weights restricted to `active`.
    pub fn is_avg_dense(&self, edges: &[EdgeId], active: &BitSeries, threshold: f64) -> bool {
        let size = active.count_ones();
        if size == 0 || edges.is_empty() {
            return false;
        }
        let total: u64 = if size == self.network.snapshot_count() {
            edges
                .iter()
                .map(|&id| self.summary.appearances(id) as u64)
                .sum()
        } else {
            edges
                .iter()
                .map(|&id| self.network.activity(id).and_count(active) as u64)
                .sum()
        };
        let nodes = self.network.induced_node_count(edges);
        2.0 * total as f64 / (size * nodes) as f64 >= threshold
    }

    /// True when every snapshot in `active` reaches `threshold`. Stops at the
    /// first snapshot that does not.
    pub fn is_min_dense(&self, edges: &[EdgeId], active: &BitSeries, threshold: f64) -> bool {
        if active.none() || edges.is_empty() {
            return false;
        }
        let nodes = self.network.induced_node_count(edges) as f64;
        for t in active.iter_ones() {
            let count = edges
                .iter()
                .filter(|&&id| self.network.activity(id).get(t))
                .count();
            if 2.0 * count as f64 / nodes < threshold {
                return false;
            }
        }
        true
    }

    /// The configured density predicate. Under `Min` the cheaper average
    /// test runs first, since the average bounds the minimum from above.
    pub fn is_dense_at(&self, edges: &[EdgeId], active: &BitSeries, threshold: f64) -> bool {
        match self.cfg.density_kind {
            DensityKind::Avg => self.is_avg_dense(edges, active, threshold),
            DensityKind::Min => {
                self.is_avg_dense(edges, active, threshold)
                    && self.is_min_dense(edges, active, threshold)
            }
        }
    }

    pub fn is_dense(&self, candidate: &EdgeSet) -> Result<Verdict> {
        if candidate.is_empty() {
            return Err(Error::Domain("density test on an empty edge set".into()));
        }
        let active = self.active_snapshots(candidate.as_slice());
        if self.is_dense_at(candidate.as_slice(), &active, self.cfg.delta) {
            return Ok(Verdict::Dense);
        }
        if !self.contains_dense(candidate, &active) {
            return Ok(Verdict::NotDense);
        }
        Ok(Verdict::ContainsDense(
            self.extract_dense(candidate, &active),
        ))
    }

    /// Peels minimum-degree nodes until half the threshold is reached.
    ///
    /// Returns false when the edges or the active snapshots run out first, or
    /// when the largest node degree drops below half the threshold.
    pub fn contains_dense(&self, candidate: &EdgeSet, active: &BitSeries) -> bool {
        if self.cfg.density_kind == DensityKind::Min && !self.cfg.strict_min_gate {
            return true;
        }
        let half = self.cfg.delta / 2.0;
        let mut edges = candidate.as_slice().to_vec();
        let mut active = active.clone();
        while !self.is_dense_at(&edges, &active, half) {
            if edges.is_empty() || active.none() {
                return false;
            }
            let degrees = degrees(self.network, &edges);
            let max = degrees.iter().map(|&(_, d)| d).max().unwrap_or(0);
            if (max as f64) < half {
                return false;
            }
            let (node, _) = degrees
                .iter()
                .copied()
                .min_by_key(|&(n, d)| (d, n))
                .expect("nonempty edge set");
            edges.retain(|&id| !touches(self.network, id, node));
            active = self.active_snapshots(&edges);
        }
        true
    }

    /// Dense subsets reachable by removing minimum-degree nodes.
    ///
    /// Each removal branches once per minimum-degree node; the remainder is
    /// split into connected parts and each part is explored once.
    pub fn extract_dense(&self, candidate: &EdgeSet, active: &BitSeries) -> Vec<EdgeSet> {
        let delta = self.cfg.delta;
        let mut found = Vec::new();
        let mut found_set = HashSet::new();
        let mut visited: HashSet<EdgeSet> = HashSet::new();
        let mut queue = VecDeque::new();
        visited.insert(candidate.clone());
        queue.push_back((candidate.clone(), active.clone()));
        while let Some((y, k_y)) = queue.pop_front() {
            if self.is_dense_at(y.as_slice(), &k_y, delta) {
                if found_set.insert(y.clone()) {
                    found.push(y);
                }
                continue;
            }
            if k_y.none() {
                continue;
            }
            let degrees = degrees(self.network, y.as_slice());
            let max = degrees.iter().map(|&(_, d)| d).max().unwrap_or(0);
            if (max as f64) < delta {
                continue;
            }
            let min = degrees.iter().map(|&(_, d)| d).min().unwrap_or(0);
            for &(node, d) in &degrees {
                if d != min {
                    continue;
                }
                let rest = y.retain(|id| !touches(self.network, id, node));
                for part in self.network.connected_components(rest.as_slice()) {
                    if visited.insert(part.clone()) {
                        let k_part = self.active_snapshots(part.as_slice());
                        queue.push_back((part, k_part));
                    }
                }
            }
        }
        found
    }
}

fn touches(network: &DynamicNetwork, id: EdgeId, node: NodeId) -> bool {
    let e = network.edge(id);
    e.u == node || e.v == node
}

/// `(node, degree)` in the static graph formed by `edges`, ascending by node.
fn degrees(network: &DynamicNetwork, edges: &[EdgeId]) -> Vec<(NodeId, usize)> {
    let mut ends: Vec<NodeId> = edges
        .iter()
        .flat_map(|&id| {
            let e = network.edge(id);
            [e.u, e.v]
        })
        .collect();
    ends.sort_unstable();
    let mut out: Vec<(NodeId, usize)> = Vec::new();
    for n in ends {
        match out.last_mut() {
            Some((last, d)) if *last == n => *d += 1,
            _ => out.push((n, 1)),
        }
    }
    out
}

/// Edge sets with a postings list per edge, for superset and overlap
/// queries.
#[derive(Default)]
struct SetIndex {
    sets: Vec<EdgeSet>,
    postings: HashMap<EdgeId, Vec<usize>>,
}

impl SetIndex {
    fn insert(&mut self, set: EdgeSet) {
        let idx = self.sets.len();
        for id in set.iter() {
            self.postings.entry(id).or_default().push(idx);
        }
        self.sets.push(set);
    }

    fn postings(&self, id: EdgeId) -> &[usize] {
        self.postings.get(&id).map_or(&[], Vec::as_slice)
    }

    /// Some indexed set contains `x` (equality included).
    fn covers(&self, x: &EdgeSet) -> bool {
        let Some(rarest) = x.iter().min_by_key(|&id| self.postings(id).len()) else {
            return false;
        };
        self.postings(rarest)
            .iter()
            .any(|&i| x.is_subset_of(&self.sets[i]))
    }

    /// No indexed set has Jaccard similarity above `epsilon` with `x`.
    fn diverse(&self, x: &EdgeSet, epsilon: f64) -> bool {
        let mut checked = HashSet::new();
        for id in x.iter() {
            for &i in self.postings(id) {
                if checked.insert(i) {
                    let s = &self.sets[i];
                    let inter = x.intersection_len(s);
                    let j = inter as f64 / (x.len() + s.len() - inter) as f64;
                    if j > epsilon {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Counters from one selection pass.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SelectionStats {
    pub components: usize,
    pub evaluated: usize,
    pub pooled: usize,
}

/// Selects the diverse dense maximal edge sets among the clique components.
pub fn find_diverse_dense(
    network: &DynamicNetwork,
    cliques: &CliqueSet,
    cfg: &MinerConfig,
) -> Result<Vec<MiningResult>> {
    Ok(find_diverse_dense_with_stats(network, cliques, cfg)?.0)
}

pub fn find_diverse_dense_with_stats(
    network: &DynamicNetwork,
    cliques: &CliqueSet,
    cfg: &MinerConfig,
) -> Result<(Vec<MiningResult>, SelectionStats)> {
    cfg.validate()?;
    let tester = DensityTester::new(network, cfg);
    let components = extract_components(network, cliques);
    let mut stats = SelectionStats {
        components: components.len(),
        ..Default::default()
    };

    let mut accepted = SetIndex::default();
    let mut covered = SetIndex::default();
    let mut pool: Vec<EdgeSet> = Vec::new();
    let mut pooled = HashSet::new();

    for x in components {
        if cfg.max_size.is_some_and(|m| x.len() >= m) {
            continue;
        }
        if covered.covers(&x) || !accepted.diverse(&x, cfg.epsilon) {
            continue;
        }
        stats.evaluated += 1;
        match tester.is_dense(&x)? {
            Verdict::Dense => {
                covered.insert(x.clone());
                accepted.insert(x);
            }
            Verdict::ContainsDense(found) => {
                for r in found {
                    if pooled.insert(r.clone()) {
                        covered.insert(r.clone());
                        pool.push(r);
                    }
                }
            }
            Verdict::NotDense => {}
        }
    }

    stats.pooled = pool.len();
    pool.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    for x in pool {
        if !accepted.covers(&x) && accepted.diverse(&x, cfg.epsilon) {
            accepted.insert(x);
        }
    }

    let results = accepted
        .sets
        .into_iter()
        .map(|edges| MiningResult::describe(network, edges, cfg))
        .collect();
    Ok((results, stats))
}
