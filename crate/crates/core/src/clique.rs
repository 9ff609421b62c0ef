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

//! Maximal clique enumeration by recursive partitioning.
//!
//! The search keeps three vertex sets: `anchor` (a clique being extended),
//! `cand` (vertices adjacent to all of `anchor` still usable for extension)
//! and `not` (vertices adjacent to all of `anchor` already explored). While
//! `cand` is not itself a clique, the vertex `v` of smallest degree inside
//! `cand` splits the work: one branch continues with `anchor + v` and the
//! neighbors of `v`, the other drops `v` into `not`. A branch is cut when a
//! vertex of `not` is adjacent to everything left in `cand`, since nothing
//! reachable from it would be maximal.

use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::bits::BitSeries;
use crate::correlation::CorrelationGraph;
use crate::error::{Error, Result};
use crate::network::{EdgeId, EdgeSet};

pub const DEFAULT_CLIQUE_LIMIT: usize = 10_000_000;

/// Maximal cliques in canonical order: larger first, then lexicographic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CliqueSet {
    cliques: Vec<EdgeSet>,
}

impl CliqueSet {
    pub fn new(mut cliques: Vec<EdgeSet>) -> Self {
        cliques.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        cliques.dedup();
        CliqueSet { cliques }
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &EdgeSet> {
        self.cliques.iter()
    }

    pub fn as_slice(&self) -> &[EdgeSet] {
        &self.cliques
    }

    /// One clique per line as sorted, space-separated vertex ids.
    pub fn write_dump<W: Write>(&self, mut sink: W) -> Result<()> {
        for c in &self.cliques {
            let line: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            writeln!(sink, "{}", line.join(" "))?;
        }
        sink.flush()?;
        Ok(())
    }
}

pub fn find_maximal_cliques(graph: &CorrelationGraph) -> Result<CliqueSet> {
    find_maximal_cliques_with_limit(graph, DEFAULT_CLIQUE_LIMIT)
}

/// Enumerates all maximal cliques, failing with [`Error::ResourceLimit`]
/// once more than `limit` have been found.
pub fn find_maximal_cliques_with_limit(
    graph: &CorrelationGraph,
    limit: usize,
) -> Result<CliqueSet> {
    let components = components(graph);
    let emitted = AtomicUsize::new(0);
    let per_component: Vec<Result<Vec<EdgeSet>>> = components
        .par_iter()
        .map(|members| {
            if members.len() == 1 {
                bump(&emitted, limit)?;
                return Ok(vec![EdgeSet::new([members[0]])]);
            }
            let local = LocalGraph::new(graph, members);
            let mut search = Search {
                graph: &local,
                emitted: &emitted,
                limit,
                out: Vec::new(),
            };
            let cand = BitSeries::ones(members.len());
            let not = BitSeries::zeros(members.len());
            search.enumerate(&mut Vec::new(), cand, not)?;
            Ok(search
                .out
                .into_iter()
                .map(|c| c.into_iter().map(|i| members[i]).collect())
                .collect())
        })
        .collect();
    let mut all = Vec::new();
    for r in per_component {
        all.extend(r?);
    }
    Ok(CliqueSet::new(all))
}

fn bump(emitted: &AtomicUsize, limit: usize) -> Result<()> {
    if emitted.fetch_add(1, Ordering::Relaxed) + 1 > limit {
        return Err(Error::ResourceLimit(format!(
            "more than {limit} maximal cliques in the correlation graph"
        )));
    }
    Ok(())
}

/// Connected components of the correlation graph, each sorted ascending.
fn components(graph: &CorrelationGraph) -> Vec<Vec<EdgeId>> {
    let n = graph.vertex_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start as EdgeId];
        let mut members = Vec::new();
        while let Some(v) = stack.pop() {
            members.push(v);
            for &w in graph.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// One component re-indexed to `0..m` with bitset adjacency.
struct LocalGraph {
    adj: Vec<BitSeries>,
}

impl LocalGraph {
    fn new(graph: &CorrelationGraph, members: &[EdgeId]) -> Self {
        let m = members.len();
        let adj = members
            .iter()
            .map(|&v| {
                let local = graph
                    .neighbors(v)
                    .iter()
                    .map(|w| members.binary_search(w).expect("neighbor in component"));
                BitSeries::from_indices(m, local)
            })
            .collect();
        LocalGraph { adj }
    }

    fn is_clique(&self, set: &BitSeries) -> bool {
        let size = set.count_ones();
        set.iter_ones()
            .all(|v| self.adj[v].and_count(set) + 1 == size)
    }

    /// Some vertex of `pool` is adjacent to every vertex of `set`.
    fn dominated(&self, pool: &BitSeries, set: &BitSeries) -> bool {
        pool.iter_ones().any(|u| set.is_subset_of(&self.adj[u]))
    }

    /// Vertex of `cand` with fewest neighbors inside `cand`; lowest id wins
    /// ties.
    fn min_degree(&self, cand: &BitSeries) -> usize {
        cand.iter_ones()
            .min_by_key(|&v| (self.adj[v].and_count(cand), v))
            .expect("nonempty candidate set")
    }
}

struct Search<'a> {
    graph: &'a LocalGraph,
    emitted: &'a AtomicUsize,
    limit: usize,
    out: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn emit(&mut self, anchor: &[usize], cand: &BitSeries) -> Result<()> {
        bump(self.emitted, self.limit)?;
        let mut clique: Vec<usize> = anchor.iter().copied().chain(cand.iter_ones()).collect();
        clique.sort_unstable();
        self.out.push(clique);
        Ok(())
    }

    fn enumerate(
        &mut self,
        anchor: &mut Vec<usize>,
        mut cand: BitSeries,
        mut not: BitSeries,
    ) -> Result<()> {
        let g = self.graph;
        if g.is_clique(&cand) {
            return self.emit(anchor, &cand);
        }
        loop {
            let v = g.min_degree(&cand);
            let next_cand = cand.and(&g.adj[v]);
            let next_not = not.and(&g.adj[v]);
            if !g.dominated(&next_not, &next_cand) {
                anchor.push(v);
                self.enumerate(anchor, next_cand, next_not)?;
                anchor.pop();
            }
            cand.clear(v);
            not.set(v);
            if g.is_clique(&cand) {
                break;
            }
        }
        if !g.dominated(&not, &cand) {
            self.emit(anchor, &cand)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, pairs: &[(EdgeId, EdgeId)]) -> CorrelationGraph {
        CorrelationGraph::from_pairs(n, 0.0, pairs.iter().copied())
    }

    fn sets(cliques: &CliqueSet) -> Vec<Vec<EdgeId>> {
        cliques.iter().map(|c| c.as_slice().to_vec()).collect()
    }

    #[test]
    fn triangle() {
        let c = find_maximal_cliques(&graph(3, &[(0, 1), (1, 2), (0, 2)])).unwrap();
        assert_eq!(sets(&c), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn path() {
        let c = find_maximal_cliques(&graph(3, &[(0, 1), (1, 2)])).unwrap();
        assert_eq!(sets(&c), vec![vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn four_cycle() {
        let c = find_maximal_cliques(&graph(4, &[(0, 1), (1, 2), (2, 3), (0, 3)])).unwrap();
        assert_eq!(
            sets(&c),
            vec![vec![0, 1], vec![0, 3], vec![1, 2], vec![2, 3]]
        );
    }

    #[test]
    fn isolated_vertices_and_empty_graph() {
        let c = find_maximal_cliques(&graph(3, &[(0, 2)])).unwrap();
        assert_eq!(sets(&c), vec![vec![0, 2], vec![1]]);
        assert!(find_maximal_cliques(&graph(0, &[])).unwrap().is_empty());
    }

    #[test]
    fn canonical_order_and_dump() {
        // K4 on 0..3 plus a pendant 3-4
        let g = graph(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)]);
        let c = find_maximal_cliques(&g).unwrap();
        assert_eq!(sets(&c), vec![vec![0, 1, 2, 3], vec![3, 4]]);
        let mut out = Vec::new();
        c.write_dump(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "0 1 2 3\n3 4\n");
    }

    #[test]
    fn limit_trips() {
        let g = graph(4, &[(0, 1), (2, 3)]);
        assert!(matches!(
            find_maximal_cliques_with_limit(&g, 1),
            Err(Error::ResourceLimit(_))
        ));
        assert_eq!(find_maximal_cliques_with_limit(&g, 2).unwrap().len(), 2);
    }
}
