//! Free bigraded chain complexes over `F[u,v]` and homogeneous maps between them.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::poly::{Bigrading, Flavor, Monomial, Poly};

/// A chain in a free complex: generator index to coefficient.
pub type Chain = BTreeMap<usize, Poly>;

pub(crate) fn chain_add_term(c: &mut Chain, idx: usize, p: &Poly) {
    if p.is_zero() {
        return;
    }
    let e = c.entry(idx).or_default();
    e.add_assign_ref(p);
    if e.is_zero() {
        c.remove(&idx);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub grading: Bigrading,
}

impl Generator {
    pub fn new(name: impl Into<String>, grading: Bigrading) -> Self {
        Generator { name: name.into(), grading }
    }
}

/// A map between free modules, stored by source column: `cols[x][y]` is the
/// coefficient of target generator `y` in the image of source generator `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub degree: Bigrading,
    n_target: usize,
    cols: Vec<Chain>,
}

impl Morphism {
    pub fn zero(n_source: usize, n_target: usize, degree: Bigrading) -> Self {
        Morphism { degree, n_target, cols: vec![Chain::new(); n_source] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Morphism::zero(n, n, Bigrading::ZERO);
        for i in 0..n {
            m.set(i, i, Poly::one());
        }
        m
    }

    /// Multiplication by a fixed monomial.
    pub fn scalar(n: usize, m: Monomial) -> Self {
        let mut out = Morphism::zero(n, n, m.bidegree());
        for i in 0..n {
            out.set(i, i, Poly::monomial(m));
        }
        out
    }

    pub fn n_source(&self) -> usize {
        self.cols.len()
    }

    pub fn n_target(&self) -> usize {
        self.n_target
    }

    pub fn entry(&self, target: usize, source: usize) -> Poly {
        self.cols[source].get(&target).cloned().unwrap_or_default()
    }

    pub fn column(&self, source: usize) -> &Chain {
        &self.cols[source]
    }

    pub fn set(&mut self, target: usize, source: usize, p: Poly) {
        assert!(target < self.n_target, "target index out of range");
        if p.is_zero() {
            self.cols[source].remove(&target);
        } else {
            self.cols[source].insert(target, p);
        }
    }

    pub fn add_to(&mut self, target: usize, source: usize, p: &Poly) {
        assert!(target < self.n_target, "target index out of range");
        chain_add_term(&mut self.cols[source], target, p);
    }

    /// Nonzero entries as `(target, source, coefficient)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Poly)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(x, col)| col.iter().map(move |(&y, p)| (y, x, p)))
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn apply(&self, c: &Chain) -> Chain {
        let mut out = Chain::new();
        for (&x, coef) in c {
            for (&y, p) in &self.cols[x] {
                chain_add_term(&mut out, y, &(coef * p));
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Morphism) -> Morphism {
        assert_eq!(other.n_target, self.n_source(), "composition size mismatch");
        Morphism {
            degree: self.degree + other.degree,
            n_target: self.n_target,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    /// Sum of two maps; the degree of `self` is kept.
    pub fn plus(&self, other: &Morphism) -> Morphism {
        assert_eq!(self.n_source(), other.n_source());
        assert_eq!(self.n_target, other.n_target);
        let mut out = self.clone();
        for (y, x, p) in other.entries() {
            out.add_to(y, x, p);
        }
        out
    }

    pub fn transpose(&self) -> Morphism {
        let mut out = Morphism::zero(self.n_target, self.n_source(), self.degree);
        for (y, x, p) in self.entries() {
            out.set(x, y, p.clone());
        }
        out
    }

    pub fn map_entries(&self, f: impl Fn(&Poly) -> Poly, degree: Bigrading) -> Morphism {
        let mut out = Morphism::zero(self.n_source(), self.n_target, degree);
        for (y, x, p) in self.entries() {
            out.set(y, x, f(p));
        }
        out
    }

    /// `self ⊕ other` with block-diagonal layout.
    pub fn direct_sum(&self, other: &Morphism) -> Morphism {
        let ns = self.n_source();
        let nt = self.n_target;
        let mut out = Morphism::zero(ns + other.n_source(), nt + other.n_target, self.degree);
        for (y, x, p) in self.entries() {
            out.set(y, x, p.clone());
        }
        for (y, x, p) in other.entries() {
            out.set(nt + y, ns + x, p.clone());
        }
        out
    }

    /// Entries `(target, source)` violating homogeneity of the declared degree.
    pub fn inhomogeneous_entries(&self, source: &[Generator], target: &[Generator]) -> Vec<(usize, usize)> {
        self.entries()
            .filter(|&(y, x, p)| {
                p.terms().any(|m| target[y].grading + m.bidegree() != source[x].grading + self.degree)
            })
            .map(|(y, x, _)| (y, x))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("empty complex")]
    Empty,
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("generator name `{0}` collides with a coefficient literal")]
    ReservedName(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed exponent list: {0}")]
    BadExponents(String),
    #[error("invalid torus knot parameters ({0}, {1}): need 0 < p < q with gcd 1")]
    BadTorusParameters(i64, i64),
    #[error("complex is not reduced: entry {target} <- {from} has a constant term")]
    NotReduced { from: String, target: String },
    #[error("invalid complex: {0}")]
    Invalid(ValidationReport),
}

/// Outcome of the structural checks on a complex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// `(source, target)` names where `d∘d` is nonzero.
    pub d_squared: Vec<(String, String, Poly)>,
    /// `(source, target)` names of entries not of bidegree `(-1,-1)`.
    pub inhomogeneous: Vec<(String, String)>,
    /// `(source, target)` names of entries with a constant term.
    pub unit_entries: Vec<(String, String)>,
}

impl ValidationReport {
    pub fn d_squared_ok(&self) -> bool {
        self.d_squared.is_empty()
    }

    pub fn homogeneous(&self) -> bool {
        self.inhomogeneous.is_empty()
    }

    pub fn reduced(&self) -> bool {
        self.unit_entries.is_empty()
    }

    /// `d² = 0` and homogeneity; reducedness is reported but optional.
    pub fn is_valid(&self) -> bool {
        self.d_squared_ok() && self.homogeneous()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (x, y, p) in &self.d_squared {
            parts.push(format!("d²({x}) has coefficient {p} on {y}"));
        }
        for (x, y) in &self.inhomogeneous {
            parts.push(format!("entry {x} -> {y} is not of bidegree (-1,-1)"));
        }
        if parts.is_empty() {
            f.write_str("ok")
        } else {
            f.write_str(&parts.join("; "))
        }
    }
}

/// A finitely generated free bigraded complex over `F[u,v]` with differential of
/// bidegree `(-1,-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub name: String,
    gens: Vec<Generator>,
    diff: Morphism,
    /// Number of `(w,z)` basepoint pairs carried by the model.
    pub basepoint_pairs: usize,
}

fn is_reserved_name(name: &str) -> bool {
    crate::poly::parse_factor(name).is_some() || name == "0"
}

impl Complex {
    /// Builds a complex from generators and `(source, target, coefficient)` triples.
    /// Structural checks (`d² = 0`, homogeneity) are left to [`Complex::validate`].
    pub fn new(
        name: impl Into<String>,
        gens: Vec<Generator>,
        entries: impl IntoIterator<Item = (usize, usize, Poly)>,
    ) -> Result<Self, ComplexError> {
        if gens.is_empty() {
            return Err(ComplexError::Empty);
        }
        let mut seen = HashSet::new();
        for g in &gens {
            if is_reserved_name(&g.name) || g.name.is_empty() || g.name.chars().any(char::is_whitespace) {
                return Err(ComplexError::ReservedName(g.name.clone()));
            }
            if !seen.insert(g.name.as_str()) {
                return Err(ComplexError::DuplicateGenerator(g.name.clone()));
            }
        }
        let n = gens.len();
        let mut diff = Morphism::zero(n, n, Bigrading::DIFF);
        for (x, y, p) in entries {
            diff.add_to(y, x, &p);
        }
        Ok(Complex { name: name.into(), gens, diff, basepoint_pairs: 1 })
    }

    /// As [`Complex::new`] but addressing generators by name; rejects invalid results.
    pub fn from_named(
        name: impl Into<String>,
        gens: &[(&str, i64, i64)],
        entries: &[(&str, &str, &str)],
    ) -> Result<Self, ComplexError> {
        let gens: Vec<Generator> =
            gens.iter().map(|&(n, w, z)| Generator::new(n, Bigrading::new(w, z))).collect();
        let index = |n: &str| {
            gens.iter().position(|g| g.name == n).ok_or_else(|| ComplexError::UnknownGenerator(n.to_string()))
        };
        let mut triples = Vec::new();
        for &(s, t, p) in entries {
            let poly: Poly = p.parse().map_err(|e| ComplexError::BadExponents(format!("{e}")))?;
            triples.push((index(s)?, index(t)?, poly));
        }
        let c = Complex::new(name, gens, triples)?;
        c.checked()
    }

    pub fn checked(self) -> Result<Self, ComplexError> {
        let report = self.validate();
        if report.is_valid() {
            Ok(self)
        } else {
            Err(ComplexError::Invalid(report))
        }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn grading(&self, i: usize) -> Bigrading {
        self.gens[i].grading
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn diff(&self) -> &Morphism {
        &self.diff
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn apply_d(&self, c: &Chain) -> Chain {
        self.diff.apply(c)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let name = |i: usize| self.gens[i].name.clone();
        let d2 = self.diff.compose(&self.diff);
        for (y, x, p) in d2.entries() {
            report.d_squared.push((name(x), name(y), p.clone()));
        }
        for (y, x) in self.diff.inhomogeneous_entries(&self.gens, &self.gens) {
            report.inhomogeneous.push((name(x), name(y)));
        }
        for (y, x, p) in self.diff.entries() {
            if p.contains(Monomial::ONE) {
                report.unit_entries.push((name(x), name(y)));
            }
        }
        report
    }

    pub fn is_reduced(&self) -> bool {
        self.diff.entries().all(|(_, _, p)| !p.contains(Monomial::ONE))
    }

    fn require_reduced(&self) -> Result<(), ComplexError> {
        match self.diff.entries().find(|(_, _, p)| p.contains(Monomial::ONE)) {
            None => Ok(()),
            Some((y, x, _)) => Err(ComplexError::NotReduced {
                from: self.gens[x].name.clone(),
                target: self.gens[y].name.clone(),
            }),
        }
    }

    /// `d∘f + f∘d = 0`.
    pub fn is_chain_map(&self, f: &Morphism) -> bool {
        self.diff.compose(f).plus(&f.compose(&self.diff)).is_zero()
    }

    /// The same complex with every grading translated by `s`.
    pub fn shift(&self, s: Bigrading) -> Complex {
        let mut out = self.clone();
        for g in &mut out.gens {
            g.grading += s;
        }
        out
    }

    /// Generators `x*` in grading `-gr(x)` with the transposed differential.
    pub fn dual(&self) -> Complex {
        let gens = self
            .gens
            .iter()
            .map(|g| Generator::new(dual_name(&g.name), -g.grading))
            .collect();
        Complex {
            name: format!("dual({})", self.name),
            gens,
            diff: self.diff.transpose(),
            basepoint_pairs: self.basepoint_pairs,
        }
    }

    /// Generators `x⊗y`, gradings added, `d(x⊗y) = dx⊗y + x⊗dy`.
    pub fn tensor(&self, other: &Complex) -> Complex {
        let n2 = other.len();
        let idx = |i: usize, j: usize| i * n2 + j;
        let mut gens = Vec::with_capacity(self.len() * n2);
        for a in &self.gens {
            for b in &other.gens {
                gens.push(Generator::new(format!("{}⊗{}", a.name, b.name), a.grading + b.grading));
            }
        }
        let mut diff = Morphism::zero(gens.len(), gens.len(), Bigrading::DIFF);
        for i in 0..self.len() {
            for j in 0..n2 {
                for (&k, p) in self.diff.column(i) {
                    diff.add_to(idx(k, j), idx(i, j), p);
                }
                for (&l, p) in other.diff.column(j) {
                    diff.add_to(idx(i, l), idx(i, j), p);
                }
            }
        }
        Complex {
            name: format!("{}⊗{}", self.name, other.name),
            gens,
            diff,
            basepoint_pairs: self.basepoint_pairs + other.basepoint_pairs,
        }
    }

    /// `C ⊕ C'` with block-diagonal differential.
    pub fn direct_sum(&self, other: &Complex) -> Complex {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Complex {
            name: format!("{}⊕{}", self.name, other.name),
            gens,
            diff: self.diff.direct_sum(&other.diff),
            basepoint_pairs: self.basepoint_pairs,
        }
    }

    /// `C ⊕ C⟦1,-1⟧`, i.e. a second copy with gradings translated by `(-1, 1)`,
    /// together with the new pair's basepoint maps: `Φ` sends the shifted copy
    /// identically onto the original one and `Ψ` is the transposed block.
    pub fn quasi_stabilize(&self) -> QuasiStabilization {
        let n = self.len();
        let tag = self.basepoint_pairs;
        let mut copy = self.shift(Bigrading::PSI);
        for g in &mut copy.gens {
            g.name = format!("{}~{}", g.name, tag);
        }
        let mut complex = self.direct_sum(&copy);
        complex.name = format!("qs({})", self.name);
        complex.basepoint_pairs = self.basepoint_pairs + 1;
        let mut phi = Morphism::zero(2 * n, 2 * n, Bigrading::PHI);
        let mut psi = Morphism::zero(2 * n, 2 * n, Bigrading::PSI);
        for i in 0..n {
            phi.set(i, n + i, Poly::one());
            psi.set(n + i, i, Poly::one());
        }
        QuasiStabilization { complex, phi, psi }
    }

    /// The `w`-basepoint action: every entry `Σ u^k v^l` becomes `Σ_{k odd} u^{k-1} v^l`.
    pub fn phi(&self) -> Result<Morphism, ComplexError> {
        self.require_reduced()?;
        Ok(self.diff.map_entries(Poly::d_du, Bigrading::PHI))
    }

    /// The `z`-basepoint action: every entry `Σ u^k v^l` becomes `Σ_{l odd} u^k v^{l-1}`.
    pub fn psi(&self) -> Result<Morphism, ComplexError> {
        self.require_reduced()?;
        Ok(self.diff.map_entries(Poly::d_dv, Bigrading::PSI))
    }

    /// Conjugates the differential by an invertible change of basis `p`
    /// (given together with its inverse). Gradings are unchanged.
    pub fn conjugate(&self, p: &Morphism, p_inv: &Morphism) -> Complex {
        let mut out = self.clone();
        let mut d = p.compose(&self.diff).compose(p_inv);
        d.degree = Bigrading::DIFF;
        out.diff = d;
        out
    }

    /// Conjugates by the unipotent change of basis `P = I + N`, where `N` has an
    /// entry at each listed `(target, source)` pair admitting a monomial of
    /// bidegree `gr(source) - gr(target)`, provided the monomial is not `1` or
    /// `target > source`. Other pairs are ignored, which keeps `N` nilpotent.
    /// Returns the new complex with `P` and `P⁻¹ = Σ N^k`.
    pub fn unipotent_base_change(&self, lower: &[(usize, usize)]) -> (Complex, Morphism, Morphism) {
        let n = self.len();
        let mut nil = Morphism::zero(n, n, Bigrading::ZERO);
        for &(t, s) in lower {
            if t == s || t >= n || s >= n {
                continue;
            }
            match Monomial::of_bidegree(self.grading(s) - self.grading(t)) {
                Some(m) if !m.is_one() || t > s => nil.add_to(t, s, &Poly::monomial(m)),
                _ => {}
            }
        }
        let p = Morphism::identity(n).plus(&nil);
        let mut p_inv = Morphism::identity(n);
        let mut power = nil.clone();
        while !power.is_zero() {
            p_inv = p_inv.plus(&power);
            power = power.compose(&nil);
        }
        (self.conjugate(&p, &p_inv), p, p_inv)
    }

    /// Basis of the flavor-specialized chain group in bidegree `g`: each generator
    /// contributes at most the one monomial that moves it to `g`.
    pub fn slice_basis(&self, g: Bigrading, f: Flavor) -> Vec<(usize, Monomial)> {
        self.gens
            .iter()
            .enumerate()
            .filter_map(|(i, gen)| {
                let m = Monomial::of_bidegree(g - gen.grading)?;
                f.keeps(m).then_some((i, m))
            })
            .collect()
    }

    /// Bounding box `(min, max)` of the generator gradings.
    pub fn grading_bounds(&self) -> (Bigrading, Bigrading) {
        let mut lo = self.gens[0].grading;
        let mut hi = lo;
        for g in &self.gens {
            lo.w = lo.w.min(g.grading.w);
            lo.z = lo.z.min(g.grading.z);
            hi.w = hi.w.max(g.grading.w);
            hi.z = hi.z.max(g.grading.z);
        }
        (lo, hi)
    }
}

fn dual_name(name: &str) -> String {
    match name.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => format!("{name}*"),
    }
}

/// Result of [`Complex::quasi_stabilize`].
#[derive(Clone, Debug)]
pub struct QuasiStabilization {
    pub complex: Complex,
    pub phi: Morphism,
    pub psi: Morphism,
}

/// The unknot: one generator in grading `(0,0)` and no differential.
pub fn unknot() -> Complex {
    Complex::new("unknot", vec![Generator::new("x", Bigrading::ZERO)], std::iter::empty())
        .expect("unknot is well formed")
}

/// The staircase complex attached to the exponents `a_0 > … > a_{2n}` of an
/// alternating-sign Alexander polynomial.
///
/// Generators `x_i` sit in grading `(-b_{2i}, -b_{2(n-i)})` and `z_i` in
/// `(-b_{2i}+1, -b_{2(n-i+1)}+1)`, where `b_0 = 0` and
/// `b_{2i} = -2 Σ_{j ≤ 2i} (-1)^j a_j`. Each `d(z_i)` is a `u`-power on `x_{i-1}`
/// plus a `v`-power on `x_i`, exponents forced by homogeneity.
pub fn staircase_from_exponents(a: &[i64]) -> Result<Complex, ComplexError> {
    if a.is_empty() || a.len().is_multiple_of(2) {
        return Err(ComplexError::BadExponents(format!("length {} is not odd", a.len())));
    }
    if a.windows(2).any(|w| w[0] <= w[1]) {
        return Err(ComplexError::BadExponents("exponents must strictly decrease".into()));
    }
    let len = a.len();
    if (0..len).any(|i| a[i] != -a[len - 1 - i]) {
        return Err(ComplexError::BadExponents("exponents must satisfy a_i = -a_{2n-i}".into()));
    }
    let n = (len - 1) / 2;
    let b = staircase_b_values(a);
    let mut gens = Vec::with_capacity(len);
    for i in 0..=n {
        gens.push(Generator::new(format!("x{i}"), Bigrading::new(-b[2 * i], -b[2 * (n - i)])));
    }
    for i in 1..=n {
        gens.push(Generator::new(
            format!("z{i}"),
            Bigrading::new(-b[2 * i] + 1, -b[2 * (n - i + 1)] + 1),
        ));
    }
    let mut entries = Vec::new();
    for i in 1..=n {
        let z = n + i;
        let zg = gens[z].grading + Bigrading::DIFF;
        for x in [i - 1, i] {
            let m = Monomial::of_bidegree(zg - gens[x].grading).ok_or_else(|| {
                ComplexError::BadExponents(format!("no homogeneous term from z{i} to x{x}"))
            })?;
            entries.push((z, x, Poly::monomial(m)));
        }
    }
    let name = format!("staircase({})", a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
    Complex::new(name, gens, entries)?.checked()
}

/// `b_i = -2 Σ_{j=1..i} (-1)^j a_j` for every `i`; only even indices place generators,
/// the `z_i` use `b_{2i} - 1` instead of the odd-index values.
pub fn staircase_b_values(a: &[i64]) -> Vec<i64> {
    let mut b = vec![0i64; a.len()];
    let mut acc = 0i64;
    for j in 1..a.len() {
        acc += if j % 2 == 0 { a[j] } else { -a[j] };
        b[j] = -2 * acc;
    }
    b
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Exponents `a_0 > … > a_{2n}` of the symmetrized Alexander polynomial of `T(p,q)`:
/// `t^{-(p-1)(q-1)/2} (t^{pq}-1)(t-1) / ((t^p-1)(t^q-1))`.
pub fn torus_knot_exponents(p: i64, q: i64) -> Result<Vec<i64>, ComplexError> {
    if !(0 < p && p < q) || gcd(p, q) != 1 || p * q > 10_000 {
        return Err(ComplexError::BadTorusParameters(p, q));
    }
    // integer coefficient vectors, index = exponent
    let mul = |a: &[i64], b: &[i64]| {
        let mut out = vec![0i64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    };
    let binom = |k: usize| {
        let mut v = vec![0i64; k + 1];
        v[0] = -1;
        v[k] = 1;
        v
    };
    let (p, q) = (p as usize, q as usize);
    let mut num = mul(&binom(p * q), &binom(1));
    let den = mul(&binom(p), &binom(q));
    let dd = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = num[k + dd];
        quot[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                num[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(num.iter().all(|&c| c == 0), "division must be exact");
    let shift = ((p - 1) * (q - 1) / 2) as i64;
    let exps: Vec<i64> = (0..quot.len())
        .rev()
        .filter(|&k| quot[k] != 0)
        .map(|k| k as i64 - shift)
        .collect();
    Ok(exps)
}

/// `staircase_from_exponents(torus_knot_exponents(p, q))`, named `T(p,q)`.
pub fn torus_knot(p: i64, q: i64) -> Result<Complex, ComplexError> {
    let a = torus_knot_exponents(p, q)?;
    Ok(staircase_from_exponents(&a)?.with_name(format!("T({p},{q})")))
}

/// The five-generator figure-eight complex:
/// `d(x1) = v x0`, `d(y0) = u x0`, `d(y1) = v y0 + u x1`.
pub fn figure_eight() -> Complex {
    Complex::from_named(
        "figure_eight",
        &[("x", 0, 0), ("x0", 0, 0), ("x1", 1, -1), ("y0", -1, 1), ("y1", 0, 0)],
        &[("x1", "x0", "v"), ("y0", "x0", "u"), ("y1", "y0", "v"), ("y1", "x1", "u")],
    )
    .expect("figure-eight complex is valid")
}

/// The roll-spin chain map on the figure-eight complex: identity except `y1 ↦ y1 + x0`.
pub fn figure_eight_rollspin(c: &Complex) -> Morphism {
    let mut f = Morphism::identity(c.len());
    let y1 = c.index_of("y1").expect("figure-eight has y1");
    let x0 = c.index_of("x0").expect("figure-eight has x0");
    f.set(x0, y1, Poly::one());
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d_of(c: &Complex, name: &str) -> Vec<(String, String)> {
        let i = c.index_of(name).unwrap();
        c.diff()
            .column(i)
            .iter()
            .map(|(&y, p)| (c.gens()[y].name.clone(), p.to_string()))
            .collect()
    }

    #[test]
    fn base_change_inverse() {
        let c = figure_eight();
        let pairs: Vec<(usize, usize)> = (0..c.len()).flat_map(|t| (0..c.len()).map(move |s| (t, s))).collect();
        let (d, p, p_inv) = c.unipotent_base_change(&pairs);
        assert!(!p.plus(&Morphism::identity(c.len())).is_zero());
        assert_eq!(p.compose(&p_inv), Morphism::identity(c.len()));
        assert!(d.validate().is_valid());
        // staircase gradings are pairwise incomparable, so only the identity is available
        let t = torus_knot(3, 4).unwrap();
        let (_, p, _) = t.unipotent_base_change(&[(0, 1), (1, 0), (3, 0), (0, 4)]);
        assert_eq!(p, Morphism::identity(t.len()));
    }

    #[test]
    fn figure_eight_validates() {
        let r = figure_eight().validate();
        assert!(r.is_valid() && r.reduced(), "{r}");
    }

    #[test]
    fn d_squared_failure_is_reported() {
        let c = Complex::from_named("bad", &[("x", 0, 0), ("y", 0, 0)], &[]).unwrap();
        let c = Complex::new(
            "swap",
            c.gens().to_vec(),
            [(0, 1, Poly::one()), (1, 0, Poly::one())],
        )
        .unwrap();
        let r = c.validate();
        assert!(!r.d_squared_ok());
        assert!(r.d_squared.iter().any(|(x, y, _)| x == "x" && y == "x"));
        assert!(!r.homogeneous());
        assert!(!r.reduced());
    }

    #[test]
    fn trefoil_staircase() {
        let c = staircase_from_exponents(&[1, 0, -1]).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.is_reduced());
        assert_eq!(d_of(&c, "z1"), vec![("x0".into(), "u".into()), ("x1".into(), "v".into())]);
        assert_eq!(c.grading(0), Bigrading::new(0, -2));
        assert_eq!(c.grading(1), Bigrading::new(-2, 0));
        assert_eq!(c.grading(2), Bigrading::new(-1, -1));
    }

    #[test]
    fn unknot_staircase() {
        let c = staircase_from_exponents(&[0]).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.grading(0), Bigrading::ZERO);
        assert!(c.diff().is_zero());
    }

    #[test]
    fn t34_b_values() {
        let a = [3, 2, 0, -2, -3];
        let b = staircase_b_values(&a);
        assert_eq!((b[0], b[2], b[4]), (0, 4, 6));
        let c = staircase_from_exponents(&a).unwrap();
        assert_eq!(c.len(), 5);
        assert!(c.validate().is_valid());
    }

    #[test]
    fn malformed_exponents() {
        assert!(staircase_from_exponents(&[]).is_err());
        assert!(staircase_from_exponents(&[1, -1]).is_err());
        assert!(staircase_from_exponents(&[1, 1, -1]).is_err());
        assert!(staircase_from_exponents(&[2, 0, -1]).is_err());
    }

    #[test]
    fn torus_parameters() {
        assert_eq!(torus_knot_exponents(2, 3).unwrap(), vec![1, 0, -1]);
        assert_eq!(torus_knot_exponents(3, 4).unwrap(), vec![3, 2, 0, -2, -3]);
        assert_eq!(torus_knot_exponents(2, 5).unwrap(), vec![2, 1, 0, -1, -2]);
        assert!(torus_knot_exponents(2, 4).is_err());
        assert!(torus_knot_exponents(3, 2).is_err());
        assert!(torus_knot_exponents(0, 3).is_err());
    }

    #[test]
    fn tensor_with_unknot_is_unit() {
        let c = figure_eight();
        let t = c.tensor(&unknot());
        assert_eq!(t.len(), c.len());
        for i in 0..c.len() {
            assert_eq!(t.grading(i), c.grading(i));
            for j in 0..c.len() {
                assert_eq!(t.diff().entry(j, i), c.diff().entry(j, i));
            }
        }
        let tref = torus_knot(2, 3).unwrap();
        let tt = tref.tensor(&tref);
        assert_eq!(tt.len(), 9);
        assert!(tt.validate().is_valid());
    }

    #[test]
    fn figure_eight_dual_matches_listing() {
        let d = figure_eight().dual();
        assert!(d.validate().is_valid());
        assert!(d_of(&d, "x*").is_empty());
        assert!(d_of(&d, "y1*").is_empty());
        assert_eq!(d_of(&d, "x1*"), vec![("y1*".into(), "u".into())]);
        assert_eq!(d_of(&d, "y0*"), vec![("y1*".into(), "v".into())]);
        let mut x0 = d_of(&d, "x0*");
        x0.sort();
        assert_eq!(x0, vec![("x1*".into(), "v".into()), ("y0*".into(), "u".into())]);
        for (g, h) in figure_eight().gens().iter().zip(d.gens()) {
            assert_eq!(h.grading, -g.grading);
        }
        let dd = d.dual();
        assert_eq!(dd.gens(), figure_eight().gens());
        assert_eq!(dd.diff(), figure_eight().diff());
        let u = unknot().dual();
        assert_eq!(u.grading(0), Bigrading::ZERO);
        assert!(u.diff().is_zero());
    }

    #[test]
    fn shifting() {
        let c = figure_eight();
        assert_eq!(c.shift(Bigrading::ZERO), c);
        assert_eq!(unknot().shift(Bigrading::new(1, -1)).grading(0), Bigrading::new(1, -1));
        let s = Bigrading::new(3, -5);
        assert_eq!(c.shift(s).shift(-s), c);
    }

    #[test]
    fn quasi_stabilized_unknot() {
        let qs = unknot().quasi_stabilize();
        let c = &qs.complex;
        assert_eq!(c.len(), 2);
        assert_eq!(c.basepoint_pairs, 2);
        assert_eq!(c.grading(0), Bigrading::ZERO);
        assert_eq!(c.grading(1), Bigrading::PSI);
        // shifted copy goes to the original, original is killed
        assert_eq!(qs.phi.entry(0, 1), Poly::one());
        assert!(qs.phi.column(0).is_empty());
        assert!(qs.phi.compose(&qs.phi).is_zero());
        assert!(qs.phi.inhomogeneous_entries(c.gens(), c.gens()).is_empty());
        assert!(qs.psi.inhomogeneous_entries(c.gens(), c.gens()).is_empty());
        assert!(c.is_chain_map(&qs.phi) && c.is_chain_map(&qs.psi));
    }

    #[test]
    fn basepoint_actions() {
        let c = figure_eight();
        let phi = c.phi().unwrap();
        let idx = |n: &str| c.index_of(n).unwrap();
        assert_eq!(phi.entry(idx("x0"), idx("y0")), Poly::one());
        assert_eq!(phi.entry(idx("x1"), idx("y1")), Poly::one());
        for n in ["x", "x0", "x1"] {
            assert!(phi.column(idx(n)).is_empty());
        }
        assert_eq!(phi.entries().count(), 2);
        assert!(c.is_chain_map(&phi));
        let psi = c.psi().unwrap();
        assert!(c.is_chain_map(&psi));
        assert!(phi.compose(&psi).plus(&psi.compose(&phi)).is_zero());

        let t = torus_knot(2, 3).unwrap();
        let (x0, x1, z1) = (t.index_of("x0").unwrap(), t.index_of("x1").unwrap(), t.index_of("z1").unwrap());
        assert_eq!(t.phi().unwrap().entry(x0, z1), Poly::one());
        assert_eq!(t.psi().unwrap().entry(x1, z1), Poly::one());
        assert!(unknot().phi().unwrap().is_zero());
        assert!(unknot().psi().unwrap().is_zero());
    }

    #[test]
    fn phi_requires_reduced() {
        let c = Complex::new(
            "acyclic",
            vec![Generator::new("a", Bigrading::new(1, 1)), Generator::new("b", Bigrading::ZERO)],
            [(0, 1, Poly::one())],
        )
        .unwrap();
        assert!(c.validate().is_valid());
        assert!(matches!(c.phi(), Err(ComplexError::NotReduced { .. })));
    }

    #[test]
    fn names_are_checked() {
        let dup = Complex::from_named("d", &[("a", 0, 0), ("a", 0, 0)], &[]);
        assert_eq!(dup.unwrap_err(), ComplexError::DuplicateGenerator("a".into()));
        assert!(matches!(Complex::from_named("r", &[("u", 0, 0)], &[]), Err(ComplexError::ReservedName(_))));
        assert_eq!(Complex::new("e", vec![], std::iter::empty()).unwrap_err(), ComplexError::Empty);
    }
}
