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

//! Dynamic network data model.

use std::collections::HashMap;
use std::fmt;

use crate::bits::BitSeries;
use crate::error::{Error, Result};

pub type NodeId = u32;
pub type EdgeId = u32;

/// An undirected edge `(u, v)` with `u < v` and its activity over the
/// snapshots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub activity: BitSeries,
}

impl Edge {
    pub fn key(&self) -> (NodeId, NodeId) {
        (self.u, self.v)
    }
}

/// A sequence of snapshots over a shared node set.
///
/// Edges are stored once, sorted by `(u, v)`, so an edge id is its rank in
/// that order. `per_snapshot[t]` lists the ids of the edges active at `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicNetwork {
    node_count: usize,
    snapshot_count: usize,
    edges: Vec<Edge>,
    per_snapshot: Vec<Vec<EdgeId>>,
    incident: Vec<Vec<EdgeId>>,
    lookup: HashMap<(NodeId, NodeId), EdgeId>,
}

impl DynamicNetwork {
    /// Builds a network from `(u, v, activity)` triples.
    ///
    /// Endpoints are canonicalized to `u < v`. Duplicate pairs, self-loops,
    /// out-of-range nodes, wrong series lengths and all-zero series are
    /// rejected.
    pub fn new(
        node_count: usize,
        snapshot_count: usize,
        edges: impl IntoIterator<Item = (NodeId, NodeId, BitSeries)>,
    ) -> Result<Self> {
        if snapshot_count == 0 {
            return Err(Error::Validation("snapshot count must be positive".into()));
        }
        if node_count > NodeId::MAX as usize {
            return Err(Error::Validation(format!(
                "node count {node_count} too large"
            )));
        }
        let mut list = Vec::new();
        for (a, b, activity) in edges {
            if a == b {
                return Err(Error::Validation(format!("self-loop on node {a}")));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if v as usize >= node_count {
                return Err(Error::Validation(format!(
                    "node {v} out of range for {node_count} nodes"
                )));
            }
            if activity.len() != snapshot_count {
                return Err(Error::Validation(format!(
                    "edge ({u},{v}) has {} snapshots, expected {snapshot_count}",
                    activity.len()
                )));
            }
            if activity.none() {
                return Err(Error::Validation(format!("edge ({u},{v}) is never active")));
            }
            list.push(Edge { u, v, activity });
        }
        list.sort_by_key(Edge::key);
        if let Some(w) = list.windows(2).find(|w| w[0].key() == w[1].key()) {
            return Err(Error::Validation(format!(
                "duplicate edge ({},{})",
                w[0].u, w[0].v
            )));
        }
        if list.len() > EdgeId::MAX as usize {
            return Err(Error::Validation("too many edges".into()));
        }

        let mut per_snapshot = vec![Vec::new(); snapshot_count];
        let mut incident = vec![Vec::new(); node_count];
        let mut lookup = HashMap::with_capacity(list.len());
        for (id, e) in list.iter().enumerate() {
            let id = id as EdgeId;
            for t in e.activity.iter_ones() {
                per_snapshot[t].push(id);
            }
            incident[e.u as usize].push(id);
            incident[e.v as usize].push(id);
            lookup.insert(e.key(), id);
        }
        Ok(DynamicNetwork {
            node_count,
            snapshot_count,
            edges: list,
            per_snapshot,
            incident,
            lookup,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn snapshot_count(&self) -> usize {
        self.snapshot_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id as usize]
    }

    #[inline]
    pub fn activity(&self, id: EdgeId) -> &BitSeries {
        &self.edges[id as usize].activity
    }

    /// Edge ids active in snapshot `t`, ascending.
    pub fn snapshot_edges(&self, t: usize) -> &[EdgeId] {
        &self.per_snapshot[t]
    }

    /// Edge ids incident to `node`, ascending.
    pub fn incident_edges(&self, node: NodeId) -> &[EdgeId] {
        &self.incident[node as usize]
    }

    pub fn edge_id(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.lookup.get(&key).copied()
    }

    /// `V_H`: the sorted endpoints of the edges in `set`.
    pub fn induced_nodes(&self, set: &EdgeSet) -> Vec<NodeId> {
        let mut nodes: Vec<NodeId> = set
            .iter()
            .flat_map(|id| {
                let e = self.edge(id);
                [e.u, e.v]
            })
            .collect();
        nodes.sort_unstable();
        nodes.dedup();
        nodes
    }

    pub fn induced_node_count(&self, edges: &[EdgeId]) -> usize {
        let mut nodes: Vec<NodeId> = edges
            .iter()
            .flat_map(|&id| {
                let e = self.edge(id);
                [e.u, e.v]
            })
            .collect();
        nodes.sort_unstable();
        nodes.dedup();
        nodes.len()
    }

    /// Splits `edges` into maximal groups connected through shared endpoints.
    ///
    /// Groups come back sorted by their smallest edge id.
    pub fn connected_components(&self, edges: &[EdgeId]) -> Vec<EdgeSet> {
        let n = edges.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut owner: HashMap<NodeId, usize> = HashMap::with_capacity(2 * n);
        for (i, &id) in edges.iter().enumerate() {
            let e = self.edge(id);
            for node in [e.u, e.v] {
                match owner.get(&node) {
                    Some(&j) => {
                        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                        if ri != rj {
                            parent[ri.max(rj)] = ri.min(rj);
                        }
                    }
                    None => {
                        owner.insert(node, i);
                    }
                }
            }
        }
        let mut groups: HashMap<usize, Vec<EdgeId>> = HashMap::new();
        for (i, &id) in edges.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(id);
        }
        let mut out: Vec<EdgeSet> = groups.into_values().map(EdgeSet::new).collect();
        out.sort();
        out
    }

    pub fn is_connected(&self, set: &EdgeSet) -> bool {
        !set.is_empty() && self.connected_components(set.as_slice()).len() == 1
    }

    /// Renders `set` as space-separated `u-v` tokens.
    pub fn format_edges(&self, set: &EdgeSet) -> String {
        let mut out = String::new();
        for (i, id) in set.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let e = self.edge(id);
            out.push_str(&format!("{}-{}", e.u, e.v));
        }
        out
    }
}

/// A set of edge ids kept sorted and deduplicated.
///
/// Ordering is lexicographic over the sorted ids, which gives every set a
/// canonical position in sorted output.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet(Vec<EdgeId>);

impl EdgeSet {
    pub fn new(ids: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut v: Vec<EdgeId> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        EdgeSet(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[EdgeId] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    pub fn is_subset_of(&self, other: &EdgeSet) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut it = other.0.iter();
        'outer: for x in &self.0 {
            for y in it.by_ref() {
                if y == x {
                    continue 'outer;
                }
                if y > x {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn intersection_len(&self, other: &EdgeSet) -> usize {
        sorted_intersection_len(&self.0, &other.0)
    }

    /// Returns the subset of edges for which `keep` is true.
    pub fn retain(&self, mut keep: impl FnMut(EdgeId) -> bool) -> EdgeSet {
        EdgeSet(self.0.iter().copied().filter(|&id| keep(id)).collect())
    }

    pub fn into_vec(self) -> Vec<EdgeId> {
        self.0
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.0).finish()
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        EdgeSet::new(iter)
    }
}

/// Size of the intersection of two ascending slices.
pub(crate) fn sorted_intersection_len<T: Ord>(a: &[T], b: &[T]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}
