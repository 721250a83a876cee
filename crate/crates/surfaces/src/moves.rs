//! Perturbation, deperturbation and edge switches.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::cells::{Cell, CellDecomposition, CellError, Edge, Side};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("no cell named `{0}`")]
    UnknownCell(String),
    #[error("no edge named `{0}`")]
    UnknownEdge(String),
    #[error("corner {index} out of range for a {len}-gon")]
    CornerOutOfRange { index: usize, len: usize },
    #[error("corners {0} and {1} coincide")]
    SameCorner(usize, usize),
    #[error("corners {0} and {1} carry the same color")]
    SameColor(usize, usize),
    #[error("both sides of edge `{0}` lie on one cell")]
    BothSidesOneCell(String),
    #[error("new edge does not separate the two sides of `{0}`")]
    NotSeparating(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("move {index} (`{mv}`) failed: {source}")]
    Replay { index: usize, mv: String, source: Box<MoveError> },
    #[error(transparent)]
    Cells(#[from] CellError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "move", rename_all = "lowercase")]
pub enum Move {
    Perturb { cell: String, a: usize, b: usize },
    Deperturb { edge: String },
    Switch { edge: String, a: usize, b: usize },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Perturb { cell, a, b } => write!(f, "perturb {cell} {a} {b}"),
            Move::Deperturb { edge } => write!(f, "deperturb {edge}"),
            Move::Switch { edge, a, b } => write!(f, "switch {edge} {a} {b}"),
        }
    }
}

impl FromStr for Move {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let w: Vec<&str> = s.split_whitespace().collect();
        let num = |x: &str| x.parse::<usize>().map_err(|_| format!("`{x}` is not a corner index"));
        match w[..] {
            ["perturb", cell, a, b] => Ok(Move::Perturb { cell: cell.into(), a: num(a)?, b: num(b)? }),
            ["deperturb", edge] => Ok(Move::Deperturb { edge: edge.into() }),
            ["switch", edge, a, b] => Ok(Move::Switch { edge: edge.into(), a: num(a)?, b: num(b)? }),
            _ => Err(format!("cannot parse move `{s}`")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MoveSequence(pub Vec<Move>);

impl MoveSequence {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, d: &CellDecomposition) -> Result<CellDecomposition, MoveError> {
        Ok(self.replay(d)?.pop().unwrap_or_else(|| d.clone()))
    }

    /// Every intermediate state, the start excluded.
    pub fn replay(&self, d: &CellDecomposition) -> Result<Vec<CellDecomposition>, MoveError> {
        let mut cur = d.clone();
        let mut out = Vec::with_capacity(self.0.len());
        for (index, mv) in self.0.iter().enumerate() {
            cur = apply_move(&cur, mv)
                .map_err(|e| MoveError::Replay { index, mv: mv.to_string(), source: Box::new(e) })?;
            out.push(cur.clone());
        }
        Ok(out)
    }

    pub fn script(&self) -> String {
        self.0.iter().map(|m| format!("{m}\n")).collect()
    }
}

impl fmt::Display for MoveSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.script())
    }
}

pub fn parse_moves(text: &str) -> Result<MoveSequence, MoveError> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        out.push(body.parse().map_err(|msg| MoveError::Syntax { line: k + 1, msg })?);
    }
    Ok(MoveSequence(out))
}

pub fn apply_move(d: &CellDecomposition, mv: &Move) -> Result<CellDecomposition, MoveError> {
    match mv {
        Move::Perturb { cell, a, b } => perturb(d, cell, *a, *b),
        Move::Deperturb { edge } => deperturb(d, edge),
        Move::Switch { edge, a, b } => edge_switch(d, edge, *a, *b),
    }
}

fn fresh(prefix: &str, taken: impl Fn(&str) -> bool) -> String {
    (0..).map(|k| format!("{prefix}{k}")).find(|n| !taken(n)).expect("unbounded")
}

/// Splits `cell` by a new edge between corners `a` and `b`. The piece running
/// from `a` to `b` keeps the cell's name; the other piece gets a fresh `c<k>`.
pub fn perturb(d: &CellDecomposition, cell: &str, a: usize, b: usize) -> Result<CellDecomposition, MoveError> {
    let c = d.cell_index(cell).ok_or_else(|| MoveError::UnknownCell(cell.into()))?;
    let edge = fresh("e", |n| d.edge_index(n).is_some());
    let other = fresh("c", |n| d.cell_index(n).is_some());
    perturb_named(d, c, a, b, edge, other)
}

fn perturb_named(
    d: &CellDecomposition,
    c: usize,
    a: usize,
    b: usize,
    edge_name: String,
    cell_name: String,
) -> Result<CellDecomposition, MoveError> {
    let sides = &d.cells()[c].sides;
    let n = sides.len();
    for idx in [a, b] {
        if idx >= n {
            return Err(MoveError::CornerOutOfRange { index: idx, len: n });
        }
    }
    if a == b {
        return Err(MoveError::SameCorner(a, b));
    }
    let (va, vb) = (d.corner(c, a), d.corner(c, b));
    if d.color(va) == d.color(vb) {
        return Err(MoveError::SameColor(a, b));
    }
    let (plus, minus) = if d.color(va) == crate::cells::Color::Plus { (va, vb) } else { (vb, va) };
    let f = d.edges().len();
    let k = (b + n - a) % n;
    let mut first: Vec<Side> = (0..k).map(|t| sides[(a + t) % n]).collect();
    first.push(Side { edge: f, forward: vb == plus });
    let mut second: Vec<Side> = (0..n - k).map(|t| sides[(b + t) % n]).collect();
    second.push(Side { edge: f, forward: va == plus });

    let mut cells = d.cells().to_vec();
    cells[c].sides = first;
    cells.push(Cell { name: cell_name, sides: second });
    let mut edges = d.edges().to_vec();
    edges.push(Edge { name: edge_name, plus, minus });
    Ok(CellDecomposition::from_parts(d.vertices().to_vec(), edges, cells))
}

/// Removes an edge whose two sides lie on distinct cells, merging them. The
/// merged cell keeps the earlier cell's name and place; its boundary starts
/// right after the removed edge on that cell.
pub fn deperturb(d: &CellDecomposition, edge: &str) -> Result<CellDecomposition, MoveError> {
    let e = d.edge_index(edge).ok_or_else(|| MoveError::UnknownEdge(edge.into()))?;
    let mut at = d.sides_of(e);
    at.sort();
    let [(ca, ia), (cb, ib)] = at[..] else {
        unreachable!("valid decompositions have two sides per edge")
    };
    if ca == cb {
        return Err(MoveError::BothSidesOneCell(edge.into()));
    }
    let (sa, sb) = (&d.cells()[ca].sides, &d.cells()[cb].sides);
    let merged: Vec<Side> = (1..sa.len())
        .map(|t| sa[(ia + t) % sa.len()])
        .chain((1..sb.len()).map(|t| sb[(ib + t) % sb.len()]))
        .map(|s| Side { edge: if s.edge > e { s.edge - 1 } else { s.edge }, forward: s.forward })
        .collect();
    let mut cells = Vec::with_capacity(d.cells().len() - 1);
    for (k, cell) in d.cells().iter().enumerate() {
        if k == ca {
            cells.push(Cell { name: cell.name.clone(), sides: merged.clone() });
        } else if k != cb {
            let sides = cell
                .sides
                .iter()
                .map(|s| Side { edge: if s.edge > e { s.edge - 1 } else { s.edge }, forward: s.forward })
                .collect();
            cells.push(Cell { name: cell.name.clone(), sides });
        }
    }
    let mut edges = d.edges().to_vec();
    edges.remove(e);
    Ok(CellDecomposition::from_parts(d.vertices().to_vec(), edges, cells))
}

/// Corners `a`, `b` index the merged polygon: for an edge between two cells,
/// the cell produced by `deperturb`; for an edge glued to its own cell, that
/// cell itself, where the new edge must separate the two copies of `edge`.
/// The new edge inherits the old one's name.
pub fn edge_switch(d: &CellDecomposition, edge: &str, a: usize, b: usize) -> Result<CellDecomposition, MoveError> {
    let e = d.edge_index(edge).ok_or_else(|| MoveError::UnknownEdge(edge.into()))?;
    let at = d.sides_of(e);
    let (c0, c1) = (at[0].0, at[1].0);
    if c0 != c1 {
        let merged = deperturb(d, edge)?;
        let host = c0.min(c1);
        let other = fresh("c", |n| merged.cell_index(n).is_some());
        return perturb_named(&merged, host, a, b, edge.to_string(), other);
    }
    let tmp = fresh("e", |n| d.edge_index(n).is_some());
    let other = fresh("c", |n| d.cell_index(n).is_some());
    let split = perturb_named(d, c0, a, b, tmp.clone(), other)?;
    let now = split.sides_of(e);
    if now[0].0 == now[1].0 {
        return Err(MoveError::NotSeparating(edge.into()));
    }
    let mut out = deperturb(&split, edge)?;
    let t = out.edge_index(&tmp).expect("temporary edge survives");
    out.edges_mut()[t].name = edge.to_string();
    Ok(out)
}

/// The perturbation that undoes `deperturb(d, edge)`, phrased on the merged result.
pub fn inverse_of_deperturb(d: &CellDecomposition, edge: &str) -> Result<Move, MoveError> {
    let e = d.edge_index(edge).ok_or_else(|| MoveError::UnknownEdge(edge.into()))?;
    let mut at = d.sides_of(e);
    at.sort();
    let (ca, cb) = (at[0].0, at[1].0);
    if ca == cb {
        return Err(MoveError::BothSidesOneCell(edge.into()));
    }
    let na = d.cells()[ca].sides.len();
    Ok(Move::Perturb { cell: d.cells()[ca].name.clone(), a: 0, b: na - 1 })
}

/// Every single perturbation or deperturbation, paired with its result.
pub fn primitive_neighbors(d: &CellDecomposition) -> Vec<(Move, CellDecomposition)> {
    let mut out = Vec::new();
    for cell in d.cells() {
        let n = cell.sides.len();
        for a in 0..n {
            for b in (a + 1..n).step_by(2) {
                let mv = Move::Perturb { cell: cell.name.clone(), a, b };
                if let Ok(x) = apply_move(d, &mv) {
                    out.push((mv, x));
                }
            }
        }
    }
    for e in d.edges() {
        let mv = Move::Deperturb { edge: e.name.clone() };
        if let Ok(x) = apply_move(d, &mv) {
            out.push((mv, x));
        }
    }
    out
}

/// Every edge switch with its result.
pub fn switch_neighbors(d: &CellDecomposition) -> Vec<(Move, CellDecomposition)> {
    let mut out = Vec::new();
    for e in d.edges() {
        let at = d.sides_of(d.edge_index(&e.name).expect("present"));
        let n = if at[0].0 == at[1].0 {
            d.cells()[at[0].0].sides.len()
        } else {
            d.cells()[at[0].0].sides.len() + d.cells()[at[1].0].sides.len() - 2
        };
        for a in 0..n {
            for b in (a + 1..n).step_by(2) {
                let mv = Move::Switch { edge: e.name.clone(), a, b };
                if let Ok(x) = apply_move(d, &mv) {
                    out.push((mv, x));
                }
            }
        }
    }
    out
}
