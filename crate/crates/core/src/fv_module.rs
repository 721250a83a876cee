//! Finitely generated graded modules over `F[v]`: direct sums of free and
//! `v`-torsion cyclic summands.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::homology::{HilbertTable, Window};
use crate::poly::{Bigrading, Flavor};

/// A cyclic summand generated in bidegree `position`: `F[v]` or `F[v]/v^order`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Summand {
    Free { position: Bigrading },
    Torsion { position: Bigrading, order: u32 },
}

impl Summand {
    pub fn position(&self) -> Bigrading {
        match *self {
            Summand::Free { position } | Summand::Torsion { position, .. } => position,
        }
    }

    /// `None` for free summands.
    pub fn order(&self) -> Option<u32> {
        match *self {
            Summand::Free { .. } => None,
            Summand::Torsion { order, .. } => Some(order),
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, Summand::Free { .. })
    }

    pub fn shifted(&self, s: Bigrading) -> Summand {
        match *self {
            Summand::Free { position } => Summand::Free { position: position + s },
            Summand::Torsion { position, order } => Summand::Torsion { position: position + s, order },
        }
    }

    fn same_kind(&self, o: &Summand) -> bool {
        self.order() == o.order()
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Summand::Free { position } => write!(f, "F[v]{position}"),
            Summand::Torsion { position, order: 1 } => write!(f, "F{position}"),
            Summand::Torsion { position, order } => write!(f, "F[v]/v^{order}{position}"),
        }
    }
}

/// A graded `F[v]`-module as a sorted list of cyclic summands.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDecomp {
    pub summands: Vec<Summand>,
}

impl ModuleDecomp {
    pub fn new(mut summands: Vec<Summand>) -> Self {
        summands.sort();
        ModuleDecomp { summands }
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn free_count(&self) -> usize {
        self.summands.iter().filter(|s| s.is_free()).count()
    }

    pub fn free_positions(&self) -> Vec<Bigrading> {
        self.summands.iter().filter(|s| s.is_free()).map(|s| s.position()).collect()
    }

    pub fn torsion(&self) -> Vec<(Bigrading, u32)> {
        self.summands.iter().filter_map(|s| s.order().map(|k| (s.position(), k))).collect()
    }

    pub fn shifted(&self, s: Bigrading) -> ModuleDecomp {
        ModuleDecomp::new(self.summands.iter().map(|x| x.shifted(s)).collect())
    }

    /// Dimensions in every bidegree of `w`.
    pub fn hilbert(&self, w: &Window) -> HilbertTable {
        let mut t = HilbertTable::default();
        for s in &self.summands {
            let p = s.position();
            let len = s.order().map_or(i64::MAX, i64::from);
            let mut k = 0i64;
            while k < len && p.z - 2 * k >= w.z_lo {
                let g = Bigrading::new(p.w, p.z - 2 * k);
                if w.contains(g) {
                    t.add(g, 1);
                }
                k += 1;
            }
        }
        t
    }

    /// Shift `s` with `self.shifted(s) == other`, if any. The smallest such shift
    /// is returned so the answer is deterministic.
    pub fn shift_to(&self, other: &ModuleDecomp) -> Option<Bigrading> {
        if self.summands.len() != other.summands.len() {
            return None;
        }
        let Some(anchor) = other.summands.first() else {
            return Some(Bigrading::ZERO);
        };
        self.summands
            .iter()
            .filter(|s| s.same_kind(anchor))
            .map(|s| anchor.position() - s.position())
            .filter(|&sh| self.shifted(sh) == *other)
            .min()
    }

    /// Multiset differences after applying `shift` to `self`: summands only in
    /// `self`, and summands only in `other`.
    pub fn difference(&self, other: &ModuleDecomp, shift: Bigrading) -> (Vec<Summand>, Vec<Summand>) {
        let mut count: BTreeMap<Summand, i64> = BTreeMap::new();
        for s in &self.shifted(shift).summands {
            *count.entry(*s).or_default() += 1;
        }
        for s in &other.summands {
            *count.entry(*s).or_default() -= 1;
        }
        let mut only_self = Vec::new();
        let mut only_other = Vec::new();
        for (s, c) in count {
            for _ in 0..c.max(0) {
                only_self.push(s);
            }
            for _ in 0..(-c).max(0) {
                only_other.push(s);
            }
        }
        (only_self, only_other)
    }
}

impl fmt::Display for ModuleDecomp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.summands.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join(" ⊕ "))
    }
}

/// Decomposes the homology of `C ⊗ F[v]` (with `u = 0`) by a graded Smith
/// reduction of the differential. The pivot is always an entry of least
/// `v`-exponent, ties going to the lowest row and then the lowest column.
pub fn circ_decompose(c: &Complex) -> ModuleDecomp {
    let n = c.len();
    // exps[y][x] = exponent of v in the coefficient of y in d(x)
    let mut exps: Vec<Vec<Option<u32>>> = vec![vec![None; n]; n];
    for (y, x, p) in c.diff().entries() {
        let p = p.specialize(Flavor::Circ);
        let mut terms = p.terms();
        if let Some(m) = terms.next() {
            assert!(terms.next().is_none(), "inhomogeneous differential entry");
            exps[y][x] = Some(m.v);
        }
    }
    let mut alive = vec![true; n];
    let mut summands = Vec::new();
    loop {
        let mut best: Option<(u32, usize, usize)> = None;
        for (r, row) in exps.iter().enumerate() {
            for (col, e) in row.iter().enumerate() {
                if let Some(e) = *e {
                    if best.is_none_or(|(b, _, _)| e < b) {
                        best = Some((e, r, col));
                    }
                }
            }
        }
        let Some((e, p, q)) = best else { break };
        // clear column q with row operations (basis change in the target line)
        for i in 0..n {
            if i == p {
                continue;
            }
            if let Some(ei) = exps[i][q] {
                let k = ei - e;
                for j in 0..n {
                    if let Some(ej) = exps[p][j] {
                        exps[i][j] = xor_exp(exps[i][j], ej + k);
                    }
                }
            }
        }
        // clear row p with column operations (basis change in the source line)
        for j in 0..n {
            exps[p][j] = None;
        }
        // row q and column p vanish in the new bases; their stale entries are dropped
        for row in exps.iter_mut() {
            row[p] = None;
        }
        exps[q].iter_mut().for_each(|e| *e = None);
        alive[p] = false;
        alive[q] = false;
        if e > 0 {
            summands.push(Summand::Torsion { position: c.grading(p), order: e });
        }
    }
    for (i, a) in alive.into_iter().enumerate() {
        if a {
            summands.push(Summand::Free { position: c.grading(i) });
        }
    }
    ModuleDecomp::new(summands)
}

fn xor_exp(cur: Option<u32>, e: u32) -> Option<u32> {
    match cur {
        None => Some(e),
        Some(c) if c == e => None,
        Some(c) => panic!("inhomogeneous sum of v^{c} and v^{e}"),
    }
}

/// Recovers a decomposition from the rank invariant
/// `rank(s, j) = rank(v^j : M_s → M_{s - (0,2j)})`.
///
/// Summands generated at `s` with length greater than `j` number
/// `rank(s, j) - rank(s + (0,2), j + 1)`. Lengths above `cap` count as free.
pub fn decompose_from_ranks(
    positions: impl IntoIterator<Item = Bigrading>,
    cap: u32,
    mut rank: impl FnMut(Bigrading, u32) -> usize,
) -> ModuleDecomp {
    let mut summands = Vec::new();
    for s in positions {
        let up = s - Bigrading::V;
        let mut longer = |j: u32| rank(s, j) - rank(up, j + 1);
        let mut prev = longer(0);
        if prev == 0 {
            continue;
        }
        for k in 1..=cap {
            let cur = longer(k);
            for _ in cur..prev {
                summands.push(Summand::Torsion { position: s, order: k });
            }
            prev = cur;
        }
        for _ in 0..prev {
            summands.push(Summand::Free { position: s });
        }
    }
    ModuleDecomp::new(summands)
}
