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

//! Recovery scores of mined groups against planted ones.
//!
//! Each mined group is matched to its most similar planted group by Jaccard
//! similarity and vice versa. Precision averages (or minimizes) the first
//! matches, recall the second.

use std::fmt;
use std::io::BufRead;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::NodeId;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BestMatch {
    pub result: usize,
    /// Index of the closest truth group; lowest index on ties.
    pub truth: usize,
    pub jaccard: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreReport {
    pub p_avg: f64,
    pub p_min: f64,
    pub r_avg: f64,
    pub r_min: f64,
    pub f_avg: f64,
    pub f_min: f64,
    pub matches: Vec<BestMatch>,
}

impl ScoreReport {
    /// `p_avg=.. p_min=.. r_avg=.. r_min=.. f_avg=.. f_min=..` on one line.
    pub fn to_line(&self) -> String {
        format!(
            "p_avg={:.6} p_min={:.6} r_avg={:.6} r_min={:.6} f_avg={:.6} f_min={:.6}",
            self.p_avg, self.p_min, self.r_avg, self.r_min, self.f_avg, self.f_min
        )
    }
}

impl fmt::Display for ScoreReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "precision_avg: {:.6}", self.p_avg)?;
        writeln!(f, "precision_min: {:.6}", self.p_min)?;
        writeln!(f, "recall_avg:    {:.6}", self.r_avg)?;
        writeln!(f, "recall_min:    {:.6}", self.r_min)?;
        writeln!(f, "f_avg:         {:.6}", self.f_avg)?;
        writeln!(f, "f_min:         {:.6}", self.f_min)?;
        writeln!(f, "matches:")?;
        for m in &self.matches {
            writeln!(
                f,
                "  result {} -> truth {} ({:.6})",
                m.result, m.truth, m.jaccard
            )?;
        }
        Ok(())
    }
}

fn sorted<K: Ord + Clone>(groups: &[Vec<K>]) -> Vec<Vec<K>> {
    groups
        .iter()
        .map(|g| {
            let mut g = g.clone();
            g.sort();
            g.dedup();
            g
        })
        .collect()
}

/// Jaccard similarity of two sorted, duplicate-free slices; 0 when both are
/// empty.
fn jaccard_sorted<K: Ord>(a: &[K], b: &[K]) -> f64 {
    let (mut i, mut j, mut inter) = (0, 0, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                inter += 1;
                i += 1;
                j += 1;
            }
        }
    }
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

fn best<K: Ord>(x: &[K], pool: &[Vec<K>]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, g) in pool.iter().enumerate() {
        let j = jaccard_sorted(x, g);
        if j > best.1 {
            best = (i, j);
        }
    }
    best
}

fn f_score(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

fn mean_min(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    (mean, min)
}

/// Scores `results` against `truth`. An empty result list scores zero
/// precision.
pub fn score<K: Ord + Clone>(results: &[Vec<K>], truth: &[Vec<K>]) -> Result<ScoreReport> {
    if truth.is_empty() {
        return Err(Error::Domain("ground truth has no groups".into()));
    }
    let results = sorted(results);
    let truth = sorted(truth);
    let matches: Vec<BestMatch> = results
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let (t, jaccard) = best(r, &truth);
            BestMatch {
                result: i,
                truth: t,
                jaccard,
            }
        })
        .collect();
    let precision: Vec<f64> = matches.iter().map(|m| m.jaccard).collect();
    let recall: Vec<f64> = if results.is_empty() {
        vec![0.0; truth.len()]
    } else {
        truth.iter().map(|t| best(t, &results).1).collect()
    };
    let (p_avg, p_min) = mean_min(&precision);
    let (r_avg, r_min) = mean_min(&recall);
    Ok(ScoreReport {
        p_avg,
        p_min,
        r_avg,
        r_min,
        f_avg: f_score(p_avg, r_avg),
        f_min: f_score(p_min, r_min),
        matches,
    })
}

/// Reads edge groups, one per line as `u-v` tokens. Only the text before the
/// first tab is read, so results files are accepted too. Blank lines and
/// lines starting with `#` are skipped.
pub fn read_groups<R: BufRead>(source: R) -> Result<Vec<Vec<(NodeId, NodeId)>>> {
    let mut groups = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let body = line.split('\t').next().unwrap_or("").trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut group = Vec::new();
        for token in body.split_whitespace() {
            let parsed = token
                .split_once('-')
                .and_then(|(u, v)| Some((u.parse::<NodeId>().ok()?, v.parse::<NodeId>().ok()?)));
            let (u, v) = parsed.ok_or_else(|| Error::Parse {
                line: lineno,
                message: format!("expected `u-v`, found `{token}`"),
            })?;
            group.push((u.min(v), u.max(v)));
        }
        group.sort_unstable();
        group.dedup();
        groups.push(group);
    }
    Ok(groups)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_sets_score_one() {
        let x = vec![vec![1, 2, 3], vec![4, 5]];
        let r = score(&x, &x).unwrap();
        for v in [r.p_avg, r.p_min, r.r_avg, r.r_min, r.f_avg, r.f_min] {
            assert_eq!(v, 1.0);
        }
    }

    #[test]
    fn partial_recovery() {
        let r = score(&[vec![1, 2, 3]], &[vec![1, 2, 3], vec![7, 8, 9]]).unwrap();
        assert_eq!((r.p_avg, r.p_min), (1.0, 1.0));
        assert_eq!((r.r_avg, r.r_min), (0.5, 0.0));
        assert!((r.f_avg - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.f_min, 0.0);
    }

    #[test]
    fn empty_results_and_truth() {
        let r = score::<u32>(&[], &[vec![1]]).unwrap();
        assert_eq!((r.p_avg, r.f_avg, r.f_min), (0.0, 0.0, 0.0));
        assert!(matches!(score(&[vec![1]], &[]), Err(Error::Domain(_))));
    }

    #[test]
    fn order_does_not_matter() {
        let a = vec![vec![1, 2], vec![3, 4, 5], vec![9]];
        let t = vec![vec![2, 1], vec![5, 4], vec![9, 10]];
        let r1 = score(&a, &t).unwrap();
        let ra: Vec<_> = a.iter().rev().cloned().collect();
        let rt: Vec<_> = t.iter().rev().cloned().collect();
        let r2 = score(&ra, &rt).unwrap();
        assert_eq!(r1.to_line(), r2.to_line());
    }

    #[test]
    fn reads_results_and_truth_lines() {
        let text = "# header\n0-1 1-2\tavg\t2.000000\t1.000000\t3\n\n2-1 5-3\n";
        let g = read_groups(text.as_bytes()).unwrap();
        assert_eq!(g, vec![vec![(0, 1), (1, 2)], vec![(1, 2), (3, 5)]]);
        let err = read_groups("0-1 x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn report_formats() {
        let r = score(&[vec![1, 2]], &[vec![1, 2]]).unwrap();
        assert_eq!(
            r.to_line(),
            "p_avg=1.000000 p_min=1.000000 r_avg=1.000000 r_min=1.000000 f_avg=1.000000 f_min=1.000000"
        );
        assert!(r.to_string().contains("result 0 -> truth 0 (1.000000)"));
    }
}
