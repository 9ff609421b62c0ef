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

//! Text edge-list format.
//!
//! ```text
//! # comment
//! <node_count> <snapshot_count>
//! <t> <u> <v>
//! ...
//! ```
//!
//! Each body line marks edge `(u, v)` active in snapshot `t`. Repeated lines
//! are idempotent and `(u, v)` / `(v, u)` name the same edge.

use std::collections::{BTreeMap, HashMap};
use std::io::{BufRead, Write};

use crate::bits::BitSeries;
use crate::error::{Error, Result};
use crate::network::{DynamicNetwork, NodeId};

struct Header {
    node_count: usize,
    snapshot_count: usize,
}

fn parse_header(line_no: usize, fields: &[&str]) -> Result<Header> {
    let parse = |s: &str, what: &str| {
        s.parse::<usize>().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("invalid {what} `{s}`"),
        })
    };
    if fields.len() != 2 {
        return Err(Error::Parse {
            line: line_no,
            message: "header must be `<node_count> <snapshot_count>`".into(),
        });
    }
    Ok(Header {
        node_count: parse(fields[0], "node count")?,
        snapshot_count: parse(fields[1], "snapshot count")?,
    })
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines<R: BufRead>(source: R) -> impl Iterator<Item = Result<(usize, String)>> {
    source
        .lines()
        .enumerate()
        .filter_map(|(i, line)| match line {
            Err(e) => Some(Err(Error::Io(e))),
            Ok(l) => {
                let trimmed = l.trim();
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    None
                } else {
                    Some(Ok((i + 1, trimmed.to_string())))
                }
            }
        })
}

/// Accumulates `(t, u, v)` observations into per-edge activity series.
struct Accumulator {
    header: Header,
    activity: BTreeMap<(NodeId, NodeId), BitSeries>,
}

impl Accumulator {
    fn new(header: Header) -> Self {
        Accumulator {
            header,
            activity: BTreeMap::new(),
        }
    }

    fn add(&mut self, line_no: usize, t: usize, a: NodeId, b: NodeId) -> Result<()> {
        let Header {
            node_count,
            snapshot_count,
        } = self.header;
        if a == b {
            return Err(Error::Validation(format!(
                "line {line_no}: self-loop on node {a}"
            )));
        }
        if t >= snapshot_count {
            return Err(Error::Validation(format!(
                "line {line_no}: snapshot {t} out of range for {snapshot_count} snapshots"
            )));
        }
        for n in [a, b] {
            if n as usize >= node_count {
                return Err(Error::Validation(format!(
                    "line {line_no}: node {n} out of range for {node_count} nodes"
                )));
            }
        }
        let key = (a.min(b), a.max(b));
        self.activity
            .entry(key)
            .or_insert_with(|| BitSeries::zeros(snapshot_count))
            .set(t);
        Ok(())
    }

    fn finish(self) -> Result<DynamicNetwork> {
        DynamicNetwork::new(
            self.header.node_count,
            self.header.snapshot_count,
            self.activity.into_iter().map(|((u, v), s)| (u, v, s)),
        )
    }
}

/// Reads a network in the edge-list format.
pub fn load_network<R: BufRead>(source: R) -> Result<DynamicNetwork> {
    let mut acc: Option<Accumulator> = None;
    for item in content_lines(source) {
        let (line_no, line) = item?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        match acc.as_mut() {
            None => acc = Some(Accumulator::new(parse_header(line_no, &fields)?)),
            Some(acc) => {
                if fields.len() != 3 {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected `<t> <u> <v>`, got {} fields", fields.len()),
                    });
                }
                let num = |s: &str| {
                    s.parse::<u64>().map_err(|_| Error::Parse {
                        line: line_no,
                        message: format!("invalid integer `{s}`"),
                    })
                };
                let t = num(fields[0])?;
                let (u, v) = (num(fields[1])?, num(fields[2])?);
                let to_node = |x: u64| {
                    NodeId::try_from(x).map_err(|_| {
                        Error::Validation(format!("line {line_no}: node {x} out of range"))
                    })
                };
                let t = usize::try_from(t).map_err(|_| {
                    Error::Validation(format!("line {line_no}: snapshot {t} out of range"))
                })?;
                acc.add(line_no, t, to_node(u)?, to_node(v)?)?;
            }
        }
    }
    match acc {
        Some(acc) => acc.finish(),
        None => Err(Error::Parse {
            line: 0,
            message: "missing header".into(),
        }),
    }
}

/// Writes `network` so that [`load_network`] reproduces it exactly.
///
/// Lines are ordered by snapshot, then by edge id.
pub fn write_network<W: Write>(network: &DynamicNetwork, mut sink: W) -> Result<()> {
    writeln!(
        sink,
        "{} {}",
        network.node_count(),
        network.snapshot_count()
    )?;
    for t in 0..network.snapshot_count() {
        for &id in network.snapshot_edges(t) {
            let e = network.edge(id);
            writeln!(sink, "{t} {} {}", e.u, e.v)?;
        }
    }
    sink.flush()?;
    Ok(())
}

/// Maps arbitrary string node labels onto dense node ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelDictionary {
    labels: Vec<String>,
    ids: HashMap<String, NodeId>,
}

impl LabelDictionary {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, id: NodeId) -> Option<&str> {
        self.labels.get(id as usize).map(String::as_str)
    }

    pub fn id(&self, label: &str) -> Option<NodeId> {
        self.ids.get(label).copied()
    }

    fn intern(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = self.labels.len() as NodeId;
        self.labels.push(label.to_string());
        self.ids.insert(label.to_string(), id);
        id
    }

    /// One `<id>\t<label>` line per node, in id order.
    pub fn write<W: Write>(&self, mut sink: W) -> Result<()> {
        for (id, label) in self.labels.iter().enumerate() {
            writeln!(sink, "{id}\t{label}")?;
        }
        sink.flush()?;
        Ok(())
    }

    pub fn read<R: BufRead>(source: R) -> Result<Self> {
        let mut dict = LabelDictionary::default();
        for item in content_lines(source) {
            let (line_no, line) = item?;
            let (id, label) = line.split_once('\t').ok_or_else(|| Error::Parse {
                line: line_no,
                message: "expected `<id>\\t<label>`".into(),
            })?;
            let id: usize = id.trim().parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid id `{id}`"),
            })?;
            if id != dict.len() || dict.ids.contains_key(label) {
                return Err(Error::Parse {
                    line: line_no,
                    message: "ids must be dense, ascending and uniquely labeled".into(),
                });
            }
            dict.intern(label);
        }
        Ok(dict)
    }
}

/// Reads an edge list whose node fields are arbitrary labels.
///
/// The header keeps the `<node_count> <snapshot_count>` shape; labels are
/// assigned ids in order of first appearance and must not exceed
/// `node_count` distinct values.
pub fn load_labeled_network<R: BufRead>(source: R) -> Result<(DynamicNetwork, LabelDictionary)> {
    let mut acc: Option<Accumulator> = None;
    let mut dict = LabelDictionary::default();
    for item in content_lines(source) {
        let (line_no, line) = item?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        match acc.as_mut() {
            None => acc = Some(Accumulator::new(parse_header(line_no, &fields)?)),
            Some(acc) => {
                if fields.len() != 3 {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected `<t> <u> <v>`, got {} fields", fields.len()),
                    });
                }
                let t: usize = fields[0].parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("invalid snapshot `{}`", fields[0]),
                })?;
                let u = dict.intern(fields[1]);
                let v = dict.intern(fields[2]);
                acc.add(line_no, t, u, v)?;
            }
        }
    }
    let acc = acc.ok_or(Error::Parse {
        line: 0,
        message: "missing header".into(),
    })?;
    Ok((acc.finish()?, dict))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(s: &str) -> Result<DynamicNetwork> {
        load_network(s.as_bytes())
    }

    #[test]
    fn loads_header_and_edges() {
        let net = load("3 2\n0 0 1\n1 1 2\n").unwrap();
        assert_eq!(net.node_count(), 3);
        assert_eq!(net.snapshot_count(), 2);
        assert_eq!(net.edge_count(), 2);
        assert_eq!(net.edge(0).key(), (0, 1));
        assert_eq!(net.activity(0).iter_ones().collect::<Vec<_>>(), vec![0]);
        assert_eq!(net.edge(1).key(), (1, 2));
        assert_eq!(net.activity(1).iter_ones().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn canonicalizes_and_deduplicates() {
        let net = load("2 1\n0 0 1\n0 1 0\n0 0 1\n").unwrap();
        assert_eq!(net.edge_count(), 1);
        assert_eq!(net.activity(0).count_ones(), 1);
    }

    #[test]
    fn empty_edge_section_is_valid() {
        let net = load("# isolated nodes only\n5 3\n").unwrap();
        assert_eq!(net.node_count(), 5);
        assert_eq!(net.edge_count(), 0);
    }

    #[test]
    fn malformed_line_names_line_number() {
        match load("3 2\n0 0 1\n\n0 x 2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            load("3 2\n0 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(load(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(load("3 2\n0 1 1\n"), Err(Error::Validation(_))));
        assert!(matches!(load("3 2\n2 0 1\n"), Err(Error::Validation(_))));
        assert!(matches!(load("3 2\n0 0 3\n"), Err(Error::Validation(_))));
    }

    #[test]
    fn round_trip_is_exact() {
        let text = "4 3\n0 0 1\n0 2 3\n1 1 2\n2 0 1\n2 1 2\n";
        let net = load(text).unwrap();
        let mut out = Vec::new();
        write_network(&net, &mut out).unwrap();
        assert_eq!(String::from_utf8(out.clone()).unwrap(), text);
        assert_eq!(load_network(out.as_slice()).unwrap(), net);
    }

    #[test]
    fn labeled_input_builds_dictionary() {
        let (net, dict) =
            load_labeled_network("3 2\n0 alice bob\n1 bob carol\n1 alice bob\n".as_bytes())
                .unwrap();
        assert_eq!(dict.len(), 3);
        assert_eq!(dict.id("carol"), Some(2));
        assert_eq!(
            net.edge_id(0, 1).map(|id| net.activity(id).count_ones()),
            Some(2)
        );
        let mut buf = Vec::new();
        dict.write(&mut buf).unwrap();
        assert_eq!(LabelDictionary::read(buf.as_slice()).unwrap(), dict);

        let too_many = load_labeled_network("2 1\n0 a b\n0 b c\n".as_bytes());
        assert!(matches!(too_many, Err(Error::Validation(_))));
    }
}
