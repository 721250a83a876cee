//! Coefficient rings `F[u,v]`, `F[v]` and `F` over the two-element field,
//! together with the bigrading bookkeeping for homogeneous elements.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A pair of homological gradings `(gr_w, gr_z)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bigrading {
    pub w: i64,
    pub z: i64,
}

impl Bigrading {
    pub const ZERO: Bigrading = Bigrading { w: 0, z: 0 };
    /// Degree of the differential.
    pub const DIFF: Bigrading = Bigrading { w: -1, z: -1 };
    /// Degree of the `Φ` (w-basepoint) action.
    pub const PHI: Bigrading = Bigrading { w: 1, z: -1 };
    /// Degree of the `Ψ` (z-basepoint) action.
    pub const PSI: Bigrading = Bigrading { w: -1, z: 1 };
    pub const U: Bigrading = Bigrading { w: -2, z: 0 };
    pub const V: Bigrading = Bigrading { w: 0, z: -2 };

    pub const fn new(w: i64, z: i64) -> Self {
        Bigrading { w, z }
    }
}

impl Add for Bigrading {
    type Output = Bigrading;
    fn add(self, o: Bigrading) -> Bigrading {
        Bigrading::new(self.w + o.w, self.z + o.z)
    }
}

impl Sub for Bigrading {
    type Output = Bigrading;
    fn sub(self, o: Bigrading) -> Bigrading {
        Bigrading::new(self.w - o.w, self.z - o.z)
    }
}

impl Neg for Bigrading {
    type Output = Bigrading;
    fn neg(self) -> Bigrading {
        Bigrading::new(-self.w, -self.z)
    }
}

impl AddAssign for Bigrading {
    fn add_assign(&mut self, o: Bigrading) {
        self.w += o.w;
        self.z += o.z;
    }
}

impl fmt::Display for Bigrading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.w, self.z)
    }
}

/// Which quotient of `F[u,v]` the coefficients live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// The full ring `F[u,v]`.
    Minus,
    /// `u = 0`, leaving `F[v]`.
    Circ,
    /// `u = v = 0`, leaving `F`.
    Hat,
}

impl Flavor {
    pub const ALL: [Flavor; 3] = [Flavor::Minus, Flavor::Circ, Flavor::Hat];

    pub fn name(self) -> &'static str {
        match self {
            Flavor::Minus => "minus",
            Flavor::Circ => "circ",
            Flavor::Hat => "hat",
        }
    }

    /// Whether the monomial survives in this flavor's coefficient ring.
    pub fn keeps(self, m: Monomial) -> bool {
        match self {
            Flavor::Minus => true,
            Flavor::Circ => m.u == 0,
            Flavor::Hat => m.u == 0 && m.v == 0,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Flavor {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "minus" | "-" => Ok(Flavor::Minus),
            "circ" | "o" => Ok(Flavor::Circ),
            "hat" | "^" => Ok(Flavor::Hat),
            _ => Err(format!("unknown flavor `{s}` (expected minus, circ or hat)")),
        }
    }
}

/// `u^u v^v`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub u: u32,
    pub v: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { u: 0, v: 0 };
    pub const U: Monomial = Monomial { u: 1, v: 0 };
    pub const V: Monomial = Monomial { u: 0, v: 1 };

    pub const fn new(u: u32, v: u32) -> Self {
        Monomial { u, v }
    }

    pub fn is_one(self) -> bool {
        self.u == 0 && self.v == 0
    }

    /// `u` contributes `(-2, 0)` and `v` contributes `(0, -2)`.
    pub fn bidegree(self) -> Bigrading {
        Bigrading::new(-2 * self.u as i64, -2 * self.v as i64)
    }

    /// The unique monomial of the given bidegree, if any.
    pub fn of_bidegree(g: Bigrading) -> Option<Monomial> {
        if g.w > 0 || g.z > 0 || g.w % 2 != 0 || g.z % 2 != 0 {
            return None;
        }
        let u = u32::try_from(-g.w / 2).ok()?;
        let v = u32::try_from(-g.z / 2).ok()?;
        Some(Monomial::new(u, v))
    }

    /// Exact division, if `other` divides `self`.
    pub fn checked_div(self, other: Monomial) -> Option<Monomial> {
        Some(Monomial::new(self.u.checked_sub(other.u)?, self.v.checked_sub(other.v)?))
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, o: Monomial) -> Monomial {
        Monomial::new(
            self.u.checked_add(o.u).expect("u exponent overflow"),
            self.v.checked_add(o.v).expect("v exponent overflow"),
        )
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.u {
            0 => {}
            1 => parts.push("u".to_string()),
            k => parts.push(format!("u^{k}")),
        }
        match self.v {
            0 => {}
            1 => parts.push("v".to_string()),
            k => parts.push(format!("v^{k}")),
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// A polynomial in `F[u,v]`: the set of monomials with coefficient one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Poly {
    terms: BTreeSet<Monomial>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::monomial(Monomial::ONE)
    }

    pub fn monomial(m: Monomial) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(m);
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = Monomial>>(it: I) -> Self {
        let mut p = Poly::zero();
        for m in it {
            p.toggle(m);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, m: Monomial) -> bool {
        self.terms.contains(&m)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = Monomial> + '_ {
        self.terms.iter().copied()
    }

    /// Adds a single monomial (mod 2).
    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign_ref(&mut self, other: &Poly) {
        for m in other.terms() {
            self.toggle(m);
        }
    }

    pub fn mul_monomial(&self, m: Monomial) -> Poly {
        Poly { terms: self.terms.iter().map(|&t| t * m).collect() }
    }

    /// Drops the terms that vanish in the given flavor.
    pub fn specialize(&self, f: Flavor) -> Poly {
        Poly { terms: self.terms.iter().copied().filter(|&m| f.keeps(m)).collect() }
    }

    /// Bidegree shared by all terms, if the polynomial is nonzero and homogeneous.
    pub fn homogeneous_degree(&self) -> Option<Bigrading> {
        let mut it = self.terms();
        let first = it.next()?.bidegree();
        it.all(|m| m.bidegree() == first).then_some(first)
    }

    /// Formal partial derivative in `u` (coefficients reduced mod 2).
    pub fn d_du(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|m| m.u % 2 == 1)
                .map(|m| Monomial::new(m.u - 1, m.v))
                .collect(),
        }
    }

    /// Formal partial derivative in `v` (coefficients reduced mod 2).
    pub fn d_dv(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|m| m.v % 2 == 1)
                .map(|m| Monomial::new(m.u, m.v - 1))
                .collect(),
        }
    }
}

impl From<Monomial> for Poly {
    fn from(m: Monomial) -> Poly {
        Poly::monomial(m)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        Poly { terms: self.terms.symmetric_difference(&o.terms).copied().collect() }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, o: &Poly) {
        self.add_assign_ref(o);
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for &a in &self.terms {
            for &b in &o.terms {
                out.toggle(a * b);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|m| m.to_string()).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyParseError {
    #[error("empty polynomial literal")]
    Empty,
    #[error("bad factor `{0}` in polynomial literal")]
    BadFactor(String),
    #[error("empty term in polynomial literal `{0}`")]
    EmptyTerm(String),
}

/// Parses one factor: `1`, `u`, `v`, `u^k`, `v^k`.
pub fn parse_factor(tok: &str) -> Option<Monomial> {
    if tok == "1" {
        return Some(Monomial::ONE);
    }
    let (var, exp) = match tok.split_once('^') {
        Some((var, e)) => (var, e.parse::<u32>().ok()?),
        None => (tok, 1),
    };
    match var {
        "u" => Some(Monomial::new(exp, 0)),
        "v" => Some(Monomial::new(0, exp)),
        _ => None,
    }
}

/// Parses a product of factors separated by whitespace or `*`.
pub fn parse_monomial(s: &str) -> Result<Monomial, PolyParseError> {
    let mut m = Monomial::ONE;
    let mut any = false;
    for tok in s.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
        m = m * parse_factor(tok).ok_or_else(|| PolyParseError::BadFactor(tok.to_string()))?;
        any = true;
    }
    if !any {
        return Err(PolyParseError::EmptyTerm(s.to_string()));
    }
    Ok(m)
}

impl FromStr for Poly {
    type Err = PolyParseError;
    /// Literals look like `u^2 + u v^3 + 1`; `0` is the zero polynomial.
    fn from_str(s: &str) -> Result<Poly, PolyParseError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(PolyParseError::Empty);
        }
        if s == "0" {
            return Ok(Poly::zero());
        }
        let mut p = Poly::zero();
        for term in s.split('+') {
            p.toggle(parse_monomial(term)?);
        }
        Ok(p)
    }
}
