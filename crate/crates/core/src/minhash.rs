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

//! Approximate correlation graph through min-wise hashing.
//!
//! Each edge is summarized by the minima of `runs * hashes_per_run` hash
//! functions over the snapshots where it is active. Within a run the
//! `hashes_per_run` minima form a code; edges sharing a code land in the
//! same bucket and every bucket pair becomes a candidate. Candidates are
//! verified with the exact Pearson correlation, so the result never holds a
//! pair the exact graph lacks. A pair whose active sets have Jaccard
//! similarity `J` is a candidate with probability `1 - (1 - J^h)^r`.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlation::{pearson, CorrelationGraph};
use crate::error::{Error, Result};
use crate::network::{DynamicNetwork, EdgeId};
use crate::seed::stage_rng;

/// Mersenne prime 2^61 - 1.
pub const PRIME: u64 = (1 << 61) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinHashConfig {
    pub runs: usize,
    pub hashes_per_run: usize,
    pub seed: u64,
}

impl Default for MinHashConfig {
    fn default() -> Self {
        MinHashConfig {
            runs: 3,
            hashes_per_run: 3,
            seed: 0,
        }
    }
}

impl MinHashConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 || self.hashes_per_run == 0 {
            return Err(Error::Config(
                "min-hash runs and hashes per run must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// A hash function over snapshot indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SnapshotHash {
    /// `(a (t + 1) + b) mod (2^61 - 1)`.
    Universal { a: u64, b: u64 },
    /// The universal value passed through a fixed 64-bit bijection. Affine
    /// maps keep the order structure of consecutive snapshots, which biases
    /// the minimum; the bijection removes that bias.
    Mixed { a: u64, b: u64 },
    /// Explicit value per snapshot.
    Table(Vec<u64>),
}

impl SnapshotHash {
    #[inline]
    pub fn apply(&self, t: usize) -> u64 {
        match self {
            SnapshotHash::Universal { a, b } => {
                let x = (*a as u128) * (t as u128 + 1) + *b as u128;
                (x % PRIME as u128) as u64
            }
            SnapshotHash::Mixed { a, b } => {
                fmix64(SnapshotHash::Universal { a: *a, b: *b }.apply(t))
            }
            SnapshotHash::Table(values) => values[t],
        }
    }
}

/// Finalizer of MurmurHash3, a bijection on `u64`.
#[inline]
fn fmix64(mut x: u64) -> u64 {
    x ^= x >> 33;
    x = x.wrapping_mul(0xff51_afd7_ed55_8ccd);
    x ^= x >> 33;
    x = x.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
    x ^ (x >> 33)
}

/// The `runs * hashes_per_run` functions used by one approximate build.
#[derive(Clone, Debug)]
pub struct HashFamily {
    runs: usize,
    hashes_per_run: usize,
    functions: Vec<SnapshotHash>,
}

impl HashFamily {
    /// Draws all functions up front from the `minhash` stage of `cfg.seed`.
    pub fn universal(cfg: &MinHashConfig) -> Result<Self> {
        cfg.validate()?;
        let mut rng = stage_rng(cfg.seed, "minhash");
        let functions = (0..cfg.runs * cfg.hashes_per_run)
            .map(|_| SnapshotHash::Mixed {
                a: rng.random_range(1..PRIME),
                b: rng.random_range(0..PRIME),
            })
            .collect();
        Ok(HashFamily {
            runs: cfg.runs,
            hashes_per_run: cfg.hashes_per_run,
            functions,
        })
    }

    /// Uses caller-supplied functions; run `i` owns functions
    /// `i * hashes_per_run .. (i + 1) * hashes_per_run`.
    pub fn from_functions(
        runs: usize,
        hashes_per_run: usize,
        functions: Vec<SnapshotHash>,
    ) -> Result<Self> {
        if runs == 0 || hashes_per_run == 0 || functions.len() != runs * hashes_per_run {
            return Err(Error::Config(format!(
                "expected {} hash functions for {runs} runs of {hashes_per_run}",
                runs * hashes_per_run
            )));
        }
        Ok(HashFamily {
            runs,
            hashes_per_run,
            functions,
        })
    }

    /// Min-hash signature of one edge: one minimum per function.
    fn signature(&self, network: &DynamicNetwork, id: EdgeId) -> Vec<u64> {
        let active: Vec<usize> = network.activity(id).iter_ones().collect();
        self.functions
            .iter()
            .map(|f| active.iter().map(|&t| f.apply(t)).min().unwrap_or(u64::MAX))
            .collect()
    }
}

/// Candidate pairs `(a, b)`, `a < b`, sharing a bucket in at least one run.
/// Sorted and deduplicated across runs.
pub fn candidate_pairs(network: &DynamicNetwork, family: &HashFamily) -> Vec<(EdgeId, EdgeId)> {
    let n = network.edge_count() as EdgeId;
    let signatures: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|id| family.signature(network, id))
        .collect();
    let h = family.hashes_per_run;
    let mut pairs = Vec::new();
    for run in 0..family.runs {
        let mut buckets: HashMap<&[u64], Vec<EdgeId>> = HashMap::new();
        for (id, sig) in signatures.iter().enumerate() {
            buckets
                .entry(&sig[run * h..(run + 1) * h])
                .or_default()
                .push(id as EdgeId);
        }
        for members in buckets.values() {
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    pairs.push((a, b));
                }
            }
        }
    }
    pairs.par_sort_unstable();
    pairs.dedup();
    pairs
}

/// Approximate build with an explicit hash family. Returns the graph and the
/// number of verified candidate pairs.
pub fn build_with_family(
    network: &DynamicNetwork,
    sigma: f64,
    family: &HashFamily,
) -> (CorrelationGraph, usize) {
    let candidates = candidate_pairs(network, family);
    let accepted: Vec<(EdgeId, EdgeId)> = candidates
        .par_iter()
        .copied()
        .filter(|&(a, b)| pearson(network.activity(a), network.activity(b)) >= sigma)
        .collect();
    (
        CorrelationGraph::from_pairs(network.edge_count(), sigma, accepted),
        candidates.len(),
    )
}

pub fn build_correlation_graph_approx(
    network: &DynamicNetwork,
    sigma: f64,
    cfg: &MinHashConfig,
) -> Result<CorrelationGraph> {
    let family = HashFamily::universal(cfg)?;
    Ok(build_with_family(network, sigma, &family).0)
}

/// `1 - (1 - J^h)^r`.
pub fn candidate_probability(jaccard: f64, hashes_per_run: usize, runs: usize) -> f64 {
    1.0 - (1.0 - jaccard.powi(hashes_per_run as i32)).powi(runs as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitSeries;
    use crate::correlation::build_correlation_graph_exact;

    fn two_edges(t: usize, a: &[usize], b: &[usize]) -> DynamicNetwork {
        DynamicNetwork::new(
            3,
            t,
            vec![
                (0, 1, BitSeries::from_indices(t, a.iter().copied())),
                (1, 2, BitSeries::from_indices(t, b.iter().copied())),
            ],
        )
        .unwrap()
    }

    #[test]
    fn identical_series_always_bucket_together() {
        let net = two_edges(6, &[0, 2, 3], &[0, 2, 3]);
        for seed in 0..20 {
            let cfg = MinHashConfig {
                runs: 2,
                hashes_per_run: 4,
                seed,
            };
            let fam = HashFamily::universal(&cfg).unwrap();
            assert_eq!(candidate_pairs(&net, &fam), vec![(0, 1)]);
            let g = build_correlation_graph_approx(&net, 0.9, &cfg).unwrap();
            assert_eq!(g.meta_edge_count(), 1);
        }
    }

    #[test]
    fn pinned_table_separates_disjoint_edges() {
        let net = two_edges(2, &[0], &[1]);
        let fam = HashFamily::from_functions(1, 1, vec![SnapshotHash::Table(vec![5, 7])]).unwrap();
        assert!(candidate_pairs(&net, &fam).is_empty());
    }

    #[test]
    fn universal_hash_matches_formula() {
        let f = SnapshotHash::Universal { a: PRIME - 1, b: 3 };
        // (p-1)*2 + 3 = 2p + 1 ≡ 1
        assert_eq!(f.apply(1), 1);
        let g = SnapshotHash::Mixed { a: PRIME - 1, b: 3 };
        assert_eq!(g.apply(1), fmix64(1));
        assert_eq!(fmix64(0), 0);
    }

    #[test]
    fn approx_is_subgraph_of_exact() {
        let t = 12;
        let edges: Vec<_> = (0..10u32)
            .map(|i| {
                let i = i as usize;
                let on =
                    (0..t).filter(move |&s| (s + i).is_multiple_of(3) || s.is_multiple_of(i + 2));
                (i as u32, i as u32 + 1, BitSeries::from_indices(t, on))
            })
            .collect();
        let net = DynamicNetwork::new(11, t, edges).unwrap();
        let exact = build_correlation_graph_exact(&net, 0.3);
        for seed in 0..10 {
            let cfg = MinHashConfig {
                runs: 3,
                hashes_per_run: 2,
                seed,
            };
            let g = build_correlation_graph_approx(&net, 0.3, &cfg).unwrap();
            assert!(g.is_subgraph_of(&exact));
        }
    }

    #[test]
    fn rejects_empty_config() {
        let cfg = MinHashConfig {
            runs: 0,
            hashes_per_run: 3,
            seed: 1,
        };
        assert!(matches!(HashFamily::universal(&cfg), Err(Error::Config(_))));
        assert!(HashFamily::from_functions(1, 2, vec![SnapshotHash::Table(vec![])]).is_err());
    }

    #[test]
    fn candidate_probability_values() {
        assert!((candidate_probability(0.5, 3, 3) - (1.0 - (7.0f64 / 8.0).powi(3))).abs() < 1e-15);
        assert_eq!(candidate_probability(1.0, 3, 3), 1.0);
    }
}
