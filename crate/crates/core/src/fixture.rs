//! Line-oriented text format for complexes and maps between their generators.
//!
//! ```text
//! complex trefoil
//! gen x0 0 -2
//! gen x1 -2 0
//! gen z1 -1 -1
//! d z1 -> x0 : u
//! d z1 -> x1 : v
//! map f : z1 -> z1 + u x0
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::complex::{Complex, ComplexError, Generator, Morphism};
use crate::poly::{parse_factor, Bigrading, Monomial, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> FixtureError {
    FixtureError::Syntax { line, col, msg: msg.into() }
}

/// A parsed fixture: the complex plus any named maps declared alongside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub complex: Complex,
    pub maps: BTreeMap<String, Morphism>,
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (line[..s].chars().count() + 1, t)).collect()
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(a, _)| a)
}

fn column_of(line: &str, byte: usize) -> usize {
    line[..byte].chars().count() + 1
}

struct PendingMap {
    line: usize,
    name: String,
    source: String,
    terms: Vec<(usize, Monomial, String)>,
}

/// Parses a complex and any `map` lines. Structural validation is left to the caller.
pub fn parse_fixture(text: &str) -> Result<Fixture, FixtureError> {
    let mut name: Option<String> = None;
    let mut gens: Vec<Generator> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut entries: Vec<(usize, String, usize, String, usize, Poly)> = Vec::new();
    let mut maps: Vec<PendingMap> = Vec::new();
    let mut pairs = 1usize;

    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = strip_comment(raw);
        let toks = tokens(line);
        let Some(&(col0, kw)) = toks.first() else { continue };
        match kw {
            "complex" => {
                if name.is_some() {
                    return Err(syntax(ln, col0, "second `complex` header"));
                }
                if toks.len() != 2 {
                    return Err(syntax(ln, col0, "expected `complex <name>`"));
                }
                name = Some(toks[1].1.to_string());
            }
            "pairs" => {
                let (col, tok) = *toks.get(1).ok_or_else(|| syntax(ln, col0, "expected `pairs <count>`"))?;
                pairs = tok.parse().map_err(|_| syntax(ln, col, format!("bad pair count `{tok}`")))?;
                if pairs == 0 || toks.len() > 2 {
                    return Err(syntax(ln, col, "expected `pairs <count>` with count ≥ 1"));
                }
            }
            "gen" => {
                if toks.len() != 4 {
                    return Err(syntax(ln, col0, "expected `gen <name> <gr_w> <gr_z>`"));
                }
                let (ncol, gname) = toks[1];
                let mut g = [0i64; 2];
                for k in 0..2 {
                    let (c, t) = toks[2 + k];
                    g[k] = t.parse().map_err(|_| syntax(ln, c, format!("bad grading `{t}`")))?;
                }
                if index.contains_key(gname) {
                    return Err(syntax(ln, ncol, format!("duplicate generator name `{gname}`")));
                }
                if parse_factor(gname).is_some() || gname == "0" {
                    return Err(syntax(ln, ncol, format!("generator name `{gname}` collides with a coefficient literal")));
                }
                index.insert(gname.to_string(), gens.len());
                gens.push(Generator::new(gname, Bigrading::new(g[0], g[1])));
            }
            "d" => {
                let colon = line.find(':').ok_or_else(|| syntax(ln, col0, "expected `d <source> -> <target> : <poly>`"))?;
                let head = tokens(&line[..colon]);
                if head.len() != 4 || head[2].1 != "->" {
                    return Err(syntax(ln, col0, "expected `d <source> -> <target> : <poly>`"));
                }
                let poly_text = &line[colon + 1..];
                let poly: Poly = poly_text
                    .parse()
                    .map_err(|e| syntax(ln, column_of(line, colon + 1), format!("{e}")))?;
                entries.push((ln, head[1].1.to_string(), head[1].0, head[3].1.to_string(), head[3].0, poly));
            }
            "map" => maps.push(parse_map_line(ln, line)?),
            other => return Err(syntax(ln, col0, format!("unknown directive `{other}`"))),
        }
    }

    let name = name.ok_or_else(|| syntax(1, 1, "missing `complex <name>` header"))?;
    if gens.is_empty() {
        return Err(ComplexError::Empty.into());
    }
    let lookup = |ln: usize, col: usize, n: &str| {
        index.get(n).copied().ok_or_else(|| syntax(ln, col, format!("unknown generator `{n}`")))
    };
    let mut triples = Vec::new();
    for (ln, s, scol, t, tcol, p) in entries {
        triples.push((lookup(ln, scol, &s)?, lookup(ln, tcol, &t)?, p));
    }
    let mut complex = Complex::new(name, gens, triples)?;
    complex.basepoint_pairs = pairs;
    let maps = build_maps(&complex, maps)?;
    Ok(Fixture { complex, maps })
}

pub fn parse_complex(text: &str) -> Result<Complex, FixtureError> {
    parse_fixture(text).map(|f| f.complex)
}

/// Parses a file of `map` lines (and comments) against an existing complex.
pub fn parse_maps(text: &str, complex: &Complex) -> Result<BTreeMap<String, Morphism>, FixtureError> {
    let mut maps = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        let toks = tokens(line);
        let Some(&(col0, kw)) = toks.first() else { continue };
        if kw != "map" {
            return Err(syntax(ln + 1, col0, format!("expected a `map` line, found `{kw}`")));
        }
        maps.push(parse_map_line(ln + 1, line)?);
    }
    build_maps(complex, maps)
}

fn parse_map_line(ln: usize, line: &str) -> Result<PendingMap, FixtureError> {
    let usage = "expected `map <name> : <source> -> <terms>`";
    let colon = line.find(':').ok_or_else(|| syntax(ln, 1, usage))?;
    let head = tokens(&line[..colon]);
    if head.len() != 2 {
        return Err(syntax(ln, 1, usage));
    }
    let arrow = line[colon..].find("->").map(|i| i + colon).ok_or_else(|| syntax(ln, colon + 1, usage))?;
    let src = tokens(&line[colon + 1..arrow]);
    if src.len() != 1 {
        return Err(syntax(ln, column_of(line, colon + 1), "expected exactly one source generator"));
    }
    let mut terms = Vec::new();
    let rhs_start = arrow + 2;
    let rhs = &line[rhs_start..];
    if rhs.trim() == "0" {
        return Ok(PendingMap { line: ln, name: head[1].1.into(), source: src[0].1.into(), terms });
    }
    let mut offset = rhs_start;
    for term in rhs.split('+') {
        let toks = tokens(term);
        let Some((&(tcol, target), factors)) = toks.split_last() else {
            return Err(syntax(ln, column_of(line, offset), "empty term"));
        };
        let mut m = Monomial::ONE;
        for &(fcol, f) in factors {
            let fm = parse_factor(f)
                .ok_or_else(|| syntax(ln, column_of(line, offset) + fcol - 1, format!("bad factor `{f}`")))?;
            m = m * fm;
        }
        terms.push((column_of(line, offset) + tcol - 1, m, target.to_string()));
        offset += term.len() + 1;
    }
    Ok(PendingMap { line: ln, name: head[1].1.into(), source: src[0].1.into(), terms })
}

fn build_maps(c: &Complex, pending: Vec<PendingMap>) -> Result<BTreeMap<String, Morphism>, FixtureError> {
    let mut cols: BTreeMap<String, Vec<(usize, usize, usize, Monomial)>> = BTreeMap::new();
    for pm in pending {
        let s = c
            .index_of(&pm.source)
            .ok_or_else(|| syntax(pm.line, 1, format!("unknown generator `{}`", pm.source)))?;
        let entry = cols.entry(pm.name).or_default();
        for (col, m, t) in pm.terms {
            let ti = c.index_of(&t).ok_or_else(|| syntax(pm.line, col, format!("unknown generator `{t}`")))?;
            entry.push((pm.line, s, ti, m));
        }
    }
    let mut out = BTreeMap::new();
    for (name, terms) in cols {
        let degree = terms
            .first()
            .map(|&(_, s, t, m)| c.grading(t) + m.bidegree() - c.grading(s))
            .unwrap_or(Bigrading::ZERO);
        let mut f = Morphism::zero(c.len(), c.len(), degree);
        for (ln, s, t, m) in terms {
            if c.grading(t) + m.bidegree() - c.grading(s) != degree {
                return Err(syntax(ln, 1, format!("map `{name}` is not homogeneous of bidegree {degree}")));
            }
            f.add_to(t, s, &Poly::monomial(m));
        }
        out.insert(name, f);
    }
    Ok(out)
}

/// Canonical text: header, generators in order, then differential entries by
/// source and target index.
pub fn serialize_complex(c: &Complex) -> String {
    let name: String = c.name.chars().map(|ch| if ch.is_whitespace() { '_' } else { ch }).collect();
    let mut s = format!("complex {name}\n");
    if c.basepoint_pairs != 1 {
        writeln!(s, "pairs {}", c.basepoint_pairs).unwrap();
    }
    for g in c.gens() {
        writeln!(s, "gen {} {} {}", g.name, g.grading.w, g.grading.z).unwrap();
    }
    for (t, src, p) in sorted_entries(c.diff()) {
        writeln!(s, "d {} -> {} : {}", c.gens()[src].name, c.gens()[t].name, p).unwrap();
    }
    s
}

fn sorted_entries(f: &Morphism) -> Vec<(usize, usize, Poly)> {
    let mut e: Vec<(usize, usize, Poly)> = f.entries().map(|(t, s, p)| (t, s, p.clone())).collect();
    e.sort_by_key(|&(t, s, _)| (s, t));
    e
}

pub fn serialize_map(c: &Complex, name: &str, f: &Morphism) -> String {
    let mut s = String::new();
    for src in 0..f.n_source() {
        let col = f.column(src);
        if col.is_empty() {
            continue;
        }
        let mut terms = Vec::new();
        for (&t, p) in col {
            for m in p.terms().rev() {
                let tname = &c.gens()[t].name;
                terms.push(if m.is_one() { tname.clone() } else { format!("{m} {tname}") });
            }
        }
        writeln!(s, "map {name} : {} -> {}", c.gens()[src].name, terms.join(" + ")).unwrap();
    }
    s
}

pub fn serialize_fixture(fx: &Fixture) -> String {
    let mut s = serialize_complex(&fx.complex);
    for (name, f) in &fx.maps {
        s.push_str(&serialize_map(&fx.complex, name, f));
    }
    s
}
