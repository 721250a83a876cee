//! Bipartite polygonal cell decompositions of closed oriented surfaces.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Plus,
    Minus,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Plus => Color::Minus,
            Color::Minus => Color::Plus,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Plus => "plus",
            Color::Minus => "minus",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub color: Color,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub plus: usize,
    pub minus: usize,
}

/// One side of an edge as it appears on a cell boundary; `forward` runs plus to minus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Side {
    pub edge: usize,
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub name: String,
    pub sides: Vec<Side>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateName { kind: &'static str, name: String },
    NonBipartite { edge: String },
    BadReference { what: String },
    SideCount { edge: String, count: usize },
    NotOriented { edge: String },
    EmptyCell { cell: String },
    OddCell { cell: String, len: usize },
    Discontinuous { cell: String, index: usize },
    IsolatedVertex { vertex: String },
    PinchedVertex { vertex: String, links: usize },
    Disconnected { components: usize },
    OddEuler { chi: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateName { kind, name } => write!(f, "duplicate {kind} name `{name}`"),
            Violation::NonBipartite { edge } => write!(f, "edge `{edge}` does not join a plus vertex to a minus vertex"),
            Violation::BadReference { what } => write!(f, "dangling reference: {what}"),
            Violation::SideCount { edge, count } => write!(f, "edge `{edge}` has {count} sides, expected 2"),
            Violation::NotOriented { edge } => write!(f, "edge `{edge}` is traversed twice in the same direction"),
            Violation::EmptyCell { cell } => write!(f, "cell `{cell}` is empty"),
            Violation::OddCell { cell, len } => write!(f, "cell `{cell}` has odd length {len}"),
            Violation::Discontinuous { cell, index } => {
                write!(f, "cell `{cell}` boundary breaks after side {index}")
            }
            Violation::IsolatedVertex { vertex } => write!(f, "vertex `{vertex}` has no edges"),
            Violation::PinchedVertex { vertex, links } => {
                write!(f, "vertex `{vertex}` has {links} corner cycles; the link is not a circle")
            }
            Violation::Disconnected { components } => write!(f, "surface has {components} components"),
            Violation::OddEuler { chi } => write!(f, "Euler characteristic {chi} is not even"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport(pub Vec<Violation>);

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CellError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("invalid cell decomposition: {0}")]
    Invalid(ValidationReport),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Predicates {
    pub simple: bool,
    pub complete: bool,
    pub deperturbed: bool,
}

/// Darts are the sides, numbered cell by cell. `phi` steps along the cell,
/// `alpha` jumps to the other side of the same edge.
#[derive(Clone, Debug)]
pub struct Darts {
    pub offsets: Vec<usize>,
    pub phi: Vec<usize>,
    pub alpha: Vec<usize>,
    pub start: Vec<usize>,
}

impl Darts {
    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn locate(&self, d: usize) -> (usize, usize) {
        let c = self.offsets.partition_point(|&o| o <= d) - 1;
        (c, d - self.offsets[c])
    }

    /// Orbits of `phi ∘ alpha`, one per vertex of a valid surface.
    pub fn vertex_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for d0 in 0..self.len() {
            if seen[d0] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut d = d0;
            while !seen[d] {
                seen[d] = true;
                orbit.push(d);
                d = self.phi[self.alpha[d]];
            }
            out.push(orbit);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellDecomposition {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    cells: Vec<Cell>,
}

impl CellDecomposition {
    /// Checked constructor.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>, cells: Vec<Cell>) -> Result<Self, CellError> {
        let d = CellDecomposition { vertices, edges, cells };
        d.validate()?;
        Ok(d)
    }

    pub(crate) fn from_parts(vertices: Vec<Vertex>, edges: Vec<Edge>, cells: Vec<Cell>) -> Self {
        CellDecomposition { vertices, edges, cells }
    }

    /// Builds a decomposition from side pairings alone; vertices are read off
    /// the corner cycles and named `p0, p1, …` and `m0, m1, …`.
    pub fn from_gluing(cells: Vec<Cell>, edge_names: Vec<String>) -> Result<Self, CellError> {
        let n = edge_names.len();
        let mut seen: Vec<Vec<bool>> = vec![Vec::new(); n];
        for c in &cells {
            for s in &c.sides {
                if s.edge >= n {
                    return Err(CellError::Invalid(ValidationReport(vec![Violation::BadReference {
                        what: format!("edge index {} in cell `{}`", s.edge, c.name),
                    }])));
                }
                seen[s.edge].push(s.forward);
            }
        }
        let mut bad = Vec::new();
        for (e, dirs) in seen.iter().enumerate() {
            if dirs.len() != 2 {
                bad.push(Violation::SideCount { edge: edge_names[e].clone(), count: dirs.len() });
            } else if dirs[0] == dirs[1] {
                bad.push(Violation::NotOriented { edge: edge_names[e].clone() });
            }
        }
        if !bad.is_empty() {
            return Err(CellError::Invalid(ValidationReport(bad)));
        }
        let mut proto = CellDecomposition {
            vertices: Vec::new(),
            edges: edge_names.into_iter().map(|name| Edge { name, plus: 0, minus: 0 }).collect(),
            cells,
        };
        let darts = proto.darts_unchecked();
        let mut sides = Vec::with_capacity(darts.len());
        for c in &proto.cells {
            sides.extend(c.sides.iter().copied());
        }
        let (mut np, mut nm) = (0, 0);
        let mut ends: Vec<[Option<usize>; 2]> = vec![[None, None]; proto.edges.len()];
        for orbit in darts.vertex_orbits() {
            // a dart starts at the plus end exactly when it runs forward
            let color = if sides[orbit[0]].forward { Color::Plus } else { Color::Minus };
            let name = match color {
                Color::Plus => {
                    np += 1;
                    format!("p{}", np - 1)
                }
                Color::Minus => {
                    nm += 1;
                    format!("m{}", nm - 1)
                }
            };
            let v = proto.vertices.len();
            proto.vertices.push(Vertex { name, color });
            for &d in &orbit {
                let s = sides[d];
                let slot = if s.forward { 0 } else { 1 };
                if (color == Color::Plus) != s.forward {
                    return Err(CellError::Invalid(ValidationReport(vec![Violation::NonBipartite {
                        edge: proto.edges[s.edge].name.clone(),
                    }])));
                }
                ends[s.edge][slot] = Some(v);
            }
        }
        for (e, [p, m]) in ends.into_iter().enumerate() {
            proto.edges[e].plus = p.expect("every edge has a forward side");
            proto.edges[e].minus = m.expect("every edge has a backward side");
        }
        proto.validate()?;
        Ok(proto)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell_index(&self, name: &str) -> Option<usize> {
        self.cells.iter().position(|c| c.name == name)
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub(crate) fn edges_mut(&mut self) -> &mut Vec<Edge> {
        &mut self.edges
    }

    pub fn start(&self, s: Side) -> usize {
        let e = &self.edges[s.edge];
        if s.forward {
            e.plus
        } else {
            e.minus
        }
    }

    pub fn end(&self, s: Side) -> usize {
        let e = &self.edges[s.edge];
        if s.forward {
            e.minus
        } else {
            e.plus
        }
    }

    /// Vertex at corner `i` of `cell`: the start of side `i`.
    pub fn corner(&self, cell: usize, i: usize) -> usize {
        self.start(self.cells[cell].sides[i])
    }

    pub fn color(&self, v: usize) -> Color {
        self.vertices[v].color
    }

    /// Where the two sides of edge `e` sit, as (cell, index), forward side first.
    pub fn sides_of(&self, e: usize) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize, bool)> = Vec::new();
        for (c, cell) in self.cells.iter().enumerate() {
            for (i, s) in cell.sides.iter().enumerate() {
                if s.edge == e {
                    out.push((c, i, s.forward));
                }
            }
        }
        out.sort_by_key(|&(_, _, f)| !f);
        out.into_iter().map(|(c, i, _)| (c, i)).collect()
    }

    fn darts_unchecked(&self) -> Darts {
        let mut offsets = Vec::with_capacity(self.cells.len());
        let mut total = 0;
        for c in &self.cells {
            offsets.push(total);
            total += c.sides.len();
        }
        let mut phi = vec![0; total];
        let mut alpha = vec![usize::MAX; total];
        let mut start = vec![0; total];
        let mut first: HashMap<usize, usize> = HashMap::new();
        for (c, cell) in self.cells.iter().enumerate() {
            let n = cell.sides.len();
            for (i, s) in cell.sides.iter().enumerate() {
                let d = offsets[c] + i;
                phi[d] = offsets[c] + (i + 1) % n;
                if !self.edges.is_empty() && s.edge < self.edges.len() {
                    start[d] = self.start(*s);
                }
                match first.remove(&s.edge) {
                    Some(o) => {
                        alpha[o] = d;
                        alpha[d] = o;
                    }
                    None => {
                        first.insert(s.edge, d);
                    }
                }
            }
        }
        Darts { offsets, phi, alpha, start }
    }

    /// Dart structure of a valid decomposition.
    pub fn darts(&self) -> Darts {
        self.darts_unchecked()
    }

    /// Checks every invariant and returns the genus.
    pub fn validate(&self) -> Result<u32, CellError> {
        let mut bad = Vec::new();
        for (kind, names) in [
            ("vertex", self.vertices.iter().map(|v| v.name.as_str()).collect::<Vec<_>>()),
            ("edge", self.edges.iter().map(|e| e.name.as_str()).collect()),
            ("cell", self.cells.iter().map(|c| c.name.as_str()).collect()),
        ] {
            let mut seen = HashSet::new();
            for n in names {
                if !seen.insert(n) {
                    bad.push(Violation::DuplicateName { kind, name: n.to_string() });
                }
            }
        }
        let nv = self.vertices.len();
        for e in &self.edges {
            if e.plus >= nv || e.minus >= nv {
                bad.push(Violation::BadReference { what: format!("endpoint of edge `{}`", e.name) });
            } else if self.vertices[e.plus].color != Color::Plus || self.vertices[e.minus].color != Color::Minus {
                bad.push(Violation::NonBipartite { edge: e.name.clone() });
            }
        }
        let mut dirs: Vec<Vec<bool>> = vec![Vec::new(); self.edges.len()];
        for c in &self.cells {
            for s in &c.sides {
                match dirs.get_mut(s.edge) {
                    Some(d) => d.push(s.forward),
                    None => bad.push(Violation::BadReference {
                        what: format!("edge index {} in cell `{}`", s.edge, c.name),
                    }),
                }
            }
        }
        for (e, d) in dirs.iter().enumerate() {
            if d.len() != 2 {
                bad.push(Violation::SideCount { edge: self.edges[e].name.clone(), count: d.len() });
            } else if d[0] == d[1] {
                bad.push(Violation::NotOriented { edge: self.edges[e].name.clone() });
            }
        }
        if !bad.is_empty() {
            return Err(CellError::Invalid(ValidationReport(bad)));
        }
        for c in &self.cells {
            let n = c.sides.len();
            if n == 0 {
                bad.push(Violation::EmptyCell { cell: c.name.clone() });
                continue;
            }
            if n % 2 == 1 {
                bad.push(Violation::OddCell { cell: c.name.clone(), len: n });
            }
            for i in 0..n {
                if self.end(c.sides[i]) != self.start(c.sides[(i + 1) % n]) {
                    bad.push(Violation::Discontinuous { cell: c.name.clone(), index: i });
                }
            }
        }
        if !bad.is_empty() {
            return Err(CellError::Invalid(ValidationReport(bad)));
        }

        let darts = self.darts_unchecked();
        let mut links = vec![0usize; nv];
        for orbit in darts.vertex_orbits() {
            links[darts.start[orbit[0]]] += 1;
        }
        for (v, &k) in links.iter().enumerate() {
            match k {
                0 => bad.push(Violation::IsolatedVertex { vertex: self.vertices[v].name.clone() }),
                1 => {}
                _ => bad.push(Violation::PinchedVertex { vertex: self.vertices[v].name.clone(), links: k }),
            }
        }
        let components = self.components(&darts);
        if components != 1 {
            bad.push(Violation::Disconnected { components });
        }
        let chi = self.euler_characteristic();
        if chi % 2 != 0 || chi > 2 {
            bad.push(Violation::OddEuler { chi });
        }
        if !bad.is_empty() {
            return Err(CellError::Invalid(ValidationReport(bad)));
        }
        Ok(((2 - chi) / 2) as u32)
    }

    fn components(&self, darts: &Darts) -> usize {
        let n = darts.len();
        let mut seen = vec![false; n];
        let mut count = 0;
        for d0 in 0..n {
            if seen[d0] {
                continue;
            }
            count += 1;
            let mut stack = vec![d0];
            seen[d0] = true;
            while let Some(d) = stack.pop() {
                for x in [darts.phi[d], darts.alpha[d]] {
                    if !seen[x] {
                        seen[x] = true;
                        stack.push(x);
                    }
                }
            }
        }
        count
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.cells.len() as i64
    }

    /// Genus of a valid decomposition.
    pub fn genus(&self) -> u32 {
        ((2 - self.euler_characteristic()) / 2) as u32
    }

    pub fn color_counts(&self) -> (usize, usize) {
        let p = self.vertices.iter().filter(|v| v.color == Color::Plus).count();
        (p, self.vertices.len() - p)
    }

    pub fn predicates(&self) -> Predicates {
        Predicates {
            simple: self.cells.iter().all(|c| c.sides.len() != 2),
            complete: self.cells.iter().all(|c| c.sides.len() == 4),
            deperturbed: self.cells.len() == 1,
        }
    }

    /// Orientation reversal: every cell boundary is read backwards.
    pub fn mirror(&self) -> CellDecomposition {
        let cells = self
            .cells
            .iter()
            .map(|c| Cell {
                name: c.name.clone(),
                sides: c.sides.iter().rev().map(|s| Side { edge: s.edge, forward: !s.forward }).collect(),
            })
            .collect();
        CellDecomposition { vertices: self.vertices.clone(), edges: self.edges.clone(), cells }
    }

    pub fn side_label(&self, s: Side) -> String {
        format!("{}{}", if s.forward { '+' } else { '-' }, self.edges[s.edge].name)
    }
}

impl fmt::Display for CellDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_cells(self))
    }
}

pub fn serialize_cells(d: &CellDecomposition) -> String {
    let mut out = String::new();
    for v in &d.vertices {
        out.push_str(&format!("vertex {} {}\n", v.name, v.color));
    }
    for e in &d.edges {
        out.push_str(&format!("edge {} {} {}\n", e.name, d.vertices[e.plus].name, d.vertices[e.minus].name));
    }
    for c in &d.cells {
        let sides: Vec<String> = c.sides.iter().map(|&s| d.side_label(s)).collect();
        out.push_str(&format!("cell {} : {}\n", c.name, sides.join(" ")));
    }
    out
}

pub fn parse_cells(text: &str) -> Result<CellDecomposition, CellError> {
    let mut vertices = Vec::new();
    let mut vindex: BTreeMap<String, usize> = BTreeMap::new();
    let mut edges = Vec::new();
    let mut eindex: BTreeMap<String, usize> = BTreeMap::new();
    let mut raw_cells: Vec<(usize, String, Vec<String>)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let syntax = |msg: String| CellError::Syntax { line, msg };
        let words: Vec<&str> = body.split_whitespace().collect();
        match words[0] {
            "vertex" => {
                let [_, name, color] = words[..] else {
                    return Err(syntax("expected `vertex <name> <plus|minus>`".into()));
                };
                let color = match color {
                    "plus" => Color::Plus,
                    "minus" => Color::Minus,
                    other => return Err(syntax(format!("unknown color `{other}`"))),
                };
                vindex.entry(name.to_string()).or_insert(vertices.len());
                vertices.push(Vertex { name: name.to_string(), color });
            }
            "edge" => {
                let [_, name, p, m] = words[..] else {
                    return Err(syntax("expected `edge <name> <plus-vertex> <minus-vertex>`".into()));
                };
                let look = |v: &str| vindex.get(v).copied().ok_or_else(|| syntax(format!("unknown vertex `{v}`")));
                let (plus, minus) = (look(p)?, look(m)?);
                eindex.entry(name.to_string()).or_insert(edges.len());
                edges.push(Edge { name: name.to_string(), plus, minus });
            }
            "cell" => {
                let Some((head, tail)) = body.split_once(':') else {
                    return Err(syntax("expected `cell <name> : <signed edges>`".into()));
                };
                let head: Vec<&str> = head.split_whitespace().collect();
                let [_, name] = head[..] else {
                    return Err(syntax("expected a single cell name before `:`".into()));
                };
                raw_cells.push((line, name.to_string(), tail.split_whitespace().map(str::to_string).collect()));
            }
            other => return Err(syntax(format!("unknown keyword `{other}`"))),
        }
    }
    let mut cells = Vec::new();
    for (line, name, words) in raw_cells {
        let mut sides = Vec::new();
        for w in words {
            let (forward, e) = match w.split_at(1) {
                ("+", e) => (true, e),
                ("-", e) => (false, e),
                _ => return Err(CellError::Syntax { line, msg: format!("side `{w}` needs a + or - sign") }),
            };
            let edge = *eindex
                .get(e)
                .ok_or_else(|| CellError::Syntax { line, msg: format!("unknown edge `{e}`") })?;
            sides.push(Side { edge, forward });
        }
        cells.push(Cell { name, sides });
    }
    CellDecomposition::new(vertices, edges, cells)
}

/// Two vertices, one edge, one bigon.
pub fn sphere_bigon() -> CellDecomposition {
    parse_cells("vertex p plus\nvertex m minus\nedge a p m\ncell c : +a -a\n").expect("valid")
}

/// The hexagon with opposite sides glued.
pub fn torus_hexagon() -> CellDecomposition {
    parse_cells(
        "vertex p plus\nvertex m minus\nedge a p m\nedge b p m\nedge c p m\ncell c : +a -b +c -a +b -c\n",
    )
    .expect("valid")
}
