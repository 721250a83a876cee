//! Quadrangulations of the alternating 2m-gon and their diagonal-switch graph.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

pub const MAX_M: usize = 7;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("m = {0} is outside 2..={MAX_M}")]
pub struct QuadError(pub usize);

/// Polygon vertices are `0..2m`, even ones plus. Diagonals are stored as `(lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Rectangulation {
    pub m: usize,
    pub diagonals: BTreeSet<(usize, usize)>,
}

fn crosses(a: (usize, usize), b: (usize, usize)) -> bool {
    let inside = |x: usize| a.0 < x && x < a.1;
    a.0 != b.0 && a.0 != b.1 && a.1 != b.0 && a.1 != b.1 && inside(b.0) != inside(b.1)
}

fn admissible(m: usize, c: (usize, usize)) -> bool {
    let n = 2 * m;
    c.0 < c.1 && c.1 < n && (c.1 - c.0) % 2 == 1 && c.1 - c.0 > 1 && !(c.0 == 0 && c.1 == n - 1)
}

impl Rectangulation {
    /// Noncrossing, odd, and `m − 2` of them.
    pub fn is_valid(&self) -> bool {
        let d: Vec<_> = self.diagonals.iter().copied().collect();
        d.len() + 2 == self.m
            && d.iter().all(|&c| admissible(self.m, c))
            && d.iter().enumerate().all(|(i, &a)| d[i + 1..].iter().all(|&b| !crosses(a, b)))
    }
}

/// Quadrangulations of the polygon on `lo..=hi` that use the side `(lo, hi)`.
fn fill(lo: usize, hi: usize) -> Vec<Vec<(usize, usize)>> {
    if hi - lo == 1 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for a in (lo + 1..hi).step_by(2) {
        for b in (a + 1..hi).step_by(2) {
            if (hi - b).is_multiple_of(2) {
                continue;
            }
            for left in fill(lo, a) {
                for mid in fill(a, b) {
                    for right in fill(b, hi) {
                        let mut ds: Vec<(usize, usize)> = left.iter().chain(&mid).chain(&right).copied().collect();
                        for (x, y) in [(lo, a), (a, b), (b, hi)] {
                            if y - x > 1 {
                                ds.push((x, y));
                            }
                        }
                        out.push(ds);
                    }
                }
            }
        }
    }
    out
}

pub fn quad_dissections(m: usize) -> Result<Vec<Rectangulation>, QuadError> {
    if !(2..=MAX_M).contains(&m) {
        return Err(QuadError(m));
    }
    let mut out: Vec<Rectangulation> = fill(0, 2 * m - 1)
        .into_iter()
        .map(|ds| Rectangulation { m, diagonals: ds.into_iter().collect() })
        .collect();
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SwitchGraph {
    pub nodes: Vec<Rectangulation>,
    pub adjacency: Vec<Vec<usize>>,
    pub connected: bool,
}

impl SwitchGraph {
    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }
}

/// Two quadrangulations are adjacent when they differ in exactly one diagonal.
pub fn quad_switch_graph(m: usize) -> Result<SwitchGraph, QuadError> {
    let nodes = quad_dissections(m)?;
    let index: HashMap<&BTreeSet<(usize, usize)>, usize> =
        nodes.iter().enumerate().map(|(i, r)| (&r.diagonals, i)).collect();
    let n = 2 * m;
    let mut adjacency = vec![Vec::new(); nodes.len()];
    for (i, r) in nodes.iter().enumerate() {
        for &d in &r.diagonals {
            let mut rest = r.diagonals.clone();
            rest.remove(&d);
            for x in 0..n {
                for y in (x + 3..n).step_by(2) {
                    let c = (x, y);
                    if c == d || rest.contains(&c) || !admissible(m, c) || rest.iter().any(|&o| crosses(o, c)) {
                        continue;
                    }
                    let mut next = rest.clone();
                    next.insert(c);
                    if let Some(&j) = index.get(&next) {
                        adjacency[i].push(j);
                    }
                }
            }
        }
        adjacency[i].sort_unstable();
        adjacency[i].dedup();
    }
    let mut seen = vec![false; nodes.len()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        for &j in &adjacency[i] {
            if !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    let connected = seen.iter().all(|&s| s);
    Ok(SwitchGraph { nodes, adjacency, connected })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hexagon() {
        let q = quad_dissections(3).unwrap();
        assert_eq!(q.len(), 3);
        let g = quad_switch_graph(3).unwrap();
        assert!(g.connected);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn square_has_no_diagonals() {
        let q = quad_dissections(2).unwrap();
        assert_eq!(q.len(), 1);
        assert!(q[0].diagonals.is_empty());
        assert!(quad_switch_graph(2).unwrap().connected);
    }

    #[test]
    fn bounds() {
        assert_eq!(quad_dissections(1), Err(QuadError(1)));
        assert_eq!(quad_dissections(8), Err(QuadError(8)));
    }

    #[test]
    fn crossing() {
        assert!(crosses((0, 3), (1, 4)));
        assert!(!crosses((0, 3), (3, 6)));
        assert!(!crosses((0, 5), (1, 4)));
    }
}
