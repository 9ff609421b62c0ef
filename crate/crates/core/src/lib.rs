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

//! Discovery of dense groups of temporally correlated edges in dynamic
//! networks.
//!
//! A [`DynamicNetwork`] is a sequence of snapshots over a fixed node set.
//! Every edge carries a binary activity series. The mining pipeline
//!
//! 1. builds a correlation graph whose vertices are network edges, joined
//!    when their activity series have Pearson correlation at least `sigma`
//!    ([`correlation`], exactly or with min-wise hashing),
//! 2. enumerates the maximal cliques of that graph ([`clique`]),
//! 3. turns clique components into dense, maximal and pairwise-diverse edge
//!    sets ([`miner`]).
//!
//! [`synth`] plants correlated clusters in random partition graphs and
//! [`eval`] scores mined groups against the planted ones.

pub mod bits;
pub mod clique;
pub mod correlation;
pub mod density;
pub mod edgelist;
mod error;
pub mod eval;
pub mod manifest;
pub mod miner;
pub mod minhash;
pub mod network;
pub mod oracle;
pub mod pipeline;
pub mod seed;
pub mod synth;

pub use bits::BitSeries;
pub use clique::{find_maximal_cliques, CliqueSet};
pub use correlation::{pearson, CorrelationGraph};
pub use error::{Error, Result};
pub use miner::{DensityKind, MinerConfig, MiningResult};
pub use minhash::MinHashConfig;
pub use network::{DynamicNetwork, Edge, EdgeId, EdgeSet, NodeId};
pub use pipeline::{mine, MiningRun, Mode};
