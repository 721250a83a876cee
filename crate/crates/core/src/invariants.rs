//! The Floer groups `HF` (common kernel of the `Φ` actions) and `HF_w`
//! (its intersection with the `v`-multiples), closed forms for torus knots,
//! and trace classes of chain maps.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{self, Chain, Complex, ComplexError, Morphism};
use crate::fv_module::{circ_decompose, decompose_from_ranks, ModuleDecomp, Summand};
use crate::gf2::{self, BitVec};
use crate::homology::{
    self, HilbertTable, HomologyEngine, HomologyError, Window, ACTION_MARGIN, HOMOLOGY_MARGIN,
};
use crate::poly::{Bigrading, Flavor, Monomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("invalid pointed model: {0}")]
    Model(String),
    #[error("map is not a chain map")]
    NotAChainMap,
    #[error("trace classes live in different complexes or bidegrees ({0} vs {1})")]
    Mismatch(Bigrading, Bigrading),
    #[error("the weak group is only defined for the minus and circ flavors")]
    HatWeakGroup,
}

/// A complex with one `(Φ, Ψ)` pair of basepoint actions per basepoint pair.
#[derive(Clone, Debug)]
pub struct PointedModel {
    pub complex: Complex,
    pub phis: Vec<Morphism>,
    pub psis: Vec<Morphism>,
}

impl PointedModel {
    /// A single-pointed model whose actions are the derivatives of the differential.
    pub fn knot(c: Complex) -> Result<Self, InvariantError> {
        if c.basepoint_pairs != 1 {
            return Err(InvariantError::Model(format!(
                "complex carries {} basepoint pairs but only one action pair is derived",
                c.basepoint_pairs
            )));
        }
        let phi = c.phi()?;
        let psi = c.psi()?;
        PointedModel::with_maps(c, vec![phi], vec![psi])
    }

    pub fn with_maps(c: Complex, phis: Vec<Morphism>, psis: Vec<Morphism>) -> Result<Self, InvariantError> {
        let report = c.validate();
        if !report.is_valid() {
            return Err(ComplexError::Invalid(report).into());
        }
        if phis.len() != c.basepoint_pairs || psis.len() != c.basepoint_pairs {
            return Err(InvariantError::Model(format!(
                "{} basepoint pairs but {} Φ and {} Ψ maps",
                c.basepoint_pairs,
                phis.len(),
                psis.len()
            )));
        }
        for (f, deg) in phis.iter().map(|f| (f, Bigrading::PHI)).chain(psis.iter().map(|f| (f, Bigrading::PSI))) {
            if f.degree != deg || f.n_source() != c.len() || f.n_target() != c.len() {
                return Err(InvariantError::Model(format!("action map of bidegree {} where {deg} was expected", f.degree)));
            }
            if !f.inhomogeneous_entries(c.gens(), c.gens()).is_empty() {
                return Err(InvariantError::Model("inhomogeneous action map".into()));
            }
            if !c.is_chain_map(f) {
                return Err(InvariantError::NotAChainMap);
            }
        }
        Ok(PointedModel { complex: c, phis, psis })
    }

    pub fn pairs(&self) -> usize {
        self.phis.len()
    }

    /// Adds a basepoint pair: the complex doubles and the existing actions act
    /// diagonally on both copies.
    pub fn quasi_stabilize(&self) -> PointedModel {
        let qs = self.complex.quasi_stabilize();
        let mut phis: Vec<Morphism> = self.phis.iter().map(|f| f.direct_sum(f)).collect();
        let mut psis: Vec<Morphism> = self.psis.iter().map(|f| f.direct_sum(f)).collect();
        phis.push(qs.phi);
        psis.push(qs.psi);
        PointedModel { complex: qs.complex, phis, psis }
    }

    pub fn quasi_stabilize_times(&self, k: usize) -> PointedModel {
        (0..k).fold(self.clone(), |m, _| m.quasi_stabilize())
    }
}

/// A Floer group: its dimensions on the trusted region and, for the circ flavor,
/// the exact decomposition into cyclic `F[v]`-modules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloerGroup {
    pub table: HilbertTable,
    pub decomp: Option<ModuleDecomp>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub fixture: String,
    pub flavor: Flavor,
    pub window: Window,
    pub hfl: FloerGroup,
    pub hf: FloerGroup,
    pub hf_w: Option<FloerGroup>,
}

/// Subspaces of homology attached to a pointed model, in the engine's bases.
pub struct FloerSpaces<'a> {
    model: &'a PointedModel,
    engine: HomologyEngine<'a>,
    mul_v: Morphism,
    v_maps: Mutex<HashMap<Bigrading, Vec<BitVec>>>,
}

impl<'a> FloerSpaces<'a> {
    pub fn new(model: &'a PointedModel, f: Flavor) -> Self {
        FloerSpaces {
            model,
            engine: HomologyEngine::new(&model.complex, f),
            mul_v: Morphism::scalar(model.complex.len(), Monomial::V),
            v_maps: Mutex::new(HashMap::new()),
        }
    }

    pub fn engine(&self) -> &HomologyEngine<'a> {
        &self.engine
    }

    pub fn dim(&self, g: Bigrading) -> usize {
        self.engine.homology(g).dim()
    }

    /// `v : H_g → H_{g-(0,2)}`.
    fn v_map(&self, g: Bigrading) -> Vec<BitVec> {
        if let Some(m) = self.v_maps.lock().unwrap().get(&g) {
            return m.clone();
        }
        let m = self.engine.induced(&self.mul_v, g);
        self.v_maps.lock().unwrap().insert(g, m.clone());
        m
    }

    /// Basis of `∩ ker Φ` in `H_g`.
    pub fn hf_basis(&self, g: Bigrading) -> Vec<BitVec> {
        let n = self.dim(g);
        if n == 0 {
            return Vec::new();
        }
        let images: Vec<Vec<BitVec>> = self.model.phis.iter().map(|phi| self.engine.induced(phi, g)).collect();
        let total: usize = self.model.phis.iter().map(|phi| self.dim(g + phi.degree)).sum();
        let stacked: Vec<BitVec> = (0..n)
            .map(|i| {
                let mut off = 0;
                let mut idx = Vec::new();
                for (phi, img) in self.model.phis.iter().zip(&images) {
                    idx.extend(img[i].ones().map(|k| k + off));
                    off += self.dim(g + phi.degree);
                }
                BitVec::from_indices(total, idx)
            })
            .collect();
        gf2::kernel(&stacked, total)
            .into_iter()
            .map(|k| BitVec::from_indices(n, k.ones()))
            .collect()
    }

    /// Basis of `HF ∩ v·H` in `H_g`.
    pub fn hf_w_basis(&self, g: Bigrading) -> Vec<BitVec> {
        let kernel = self.hf_basis(g);
        if kernel.is_empty() {
            return kernel;
        }
        let image = self.v_map(g - Bigrading::V);
        gf2::intersect(&kernel, &image, self.dim(g))
    }

    /// Rank of `v^j` on the subspace spanned by `basis ⊂ H_s`.
    fn power_rank(&self, s: Bigrading, basis: &[BitVec], j: u32) -> usize {
        let mut cur = basis.to_vec();
        let mut at = s;
        for _ in 0..j {
            if cur.is_empty() {
                return 0;
            }
            let m = self.v_map(at);
            cur = gf2::mul_columns(&m, self.dim(at + Bigrading::V), &cur);
            at += Bigrading::V;
        }
        gf2::rank(&cur, self.dim(at))
    }

    fn table(&self, w: &Window, basis: impl Fn(&Self, Bigrading) -> Vec<BitVec> + Sync) -> HilbertTable {
        let pts: Vec<Bigrading> = w.iter().collect();
        let dims: Vec<(Bigrading, usize)> = pts.into_par_iter().map(|g| (g, basis(self, g).len())).collect();
        let mut t = HilbertTable::default();
        for (g, d) in dims {
            t.insert(g, d);
        }
        t
    }

    /// Exact circ decomposition of a submodule given degreewise by `basis`.
    fn decompose(&self, basis: impl Fn(&Self, Bigrading) -> Vec<BitVec>) -> ModuleDecomp {
        let (lo, hi) = self.model.complex.grading_bounds();
        let depth = (hi.z - lo.z) / 2 + 1;
        let cap = (depth + 2) as u32;
        let z_lo = lo.z - 2 * (depth + 2) - 2;
        let mut bases: HashMap<Bigrading, Vec<BitVec>> = HashMap::new();
        let mut positions = Vec::new();
        for w in lo.w - 1..=hi.w + 1 {
            for z in z_lo..=hi.z + 2 {
                let g = Bigrading::new(w, z);
                let b = basis(self, g);
                if !b.is_empty() {
                    positions.push(g);
                }
                bases.insert(g, b);
            }
        }
        decompose_from_ranks(positions, cap, |s, j| match bases.get(&s) {
            Some(b) => self.power_rank(s, b, j),
            None => 0,
        })
    }
}

fn action_region(w: &Window) -> Result<Window, InvariantError> {
    Ok(w.shrink(ACTION_MARGIN).ok_or(HomologyError::EmptyTrustedRegion(*w))?)
}

/// `HFL` itself: homology on the trusted region, decomposed for the circ flavor.
pub fn hfl(c: &Complex, f: Flavor, w: &Window) -> Result<FloerGroup, InvariantError> {
    let table = homology::homology_table(c, f, w)?;
    let decomp = (f == Flavor::Circ).then(|| circ_decompose(c));
    Ok(FloerGroup { table, decomp })
}

/// `HF = ∩_w ker Φ_w` on the action-trusted region of `w`.
pub fn hf(m: &PointedModel, f: Flavor, w: &Window) -> Result<FloerGroup, InvariantError> {
    let region = action_region(w)?;
    let fl = FloerSpaces::new(m, f);
    let table = fl.table(&region, FloerSpaces::hf_basis);
    let decomp = (f == Flavor::Circ).then(|| fl.decompose(FloerSpaces::hf_basis));
    Ok(FloerGroup { table, decomp })
}

/// `HF_w = HF ∩ v·HFL` on the action-trusted region of `w`.
pub fn hf_w(m: &PointedModel, f: Flavor, w: &Window) -> Result<FloerGroup, InvariantError> {
    if f == Flavor::Hat {
        return Err(InvariantError::HatWeakGroup);
    }
    let region = action_region(w)?;
    let fl = FloerSpaces::new(m, f);
    let table = fl.table(&region, FloerSpaces::hf_w_basis);
    let decomp = (f == Flavor::Circ).then(|| fl.decompose(FloerSpaces::hf_w_basis));
    Ok(FloerGroup { table, decomp })
}

pub fn invariant_report(
    fixture: &str,
    m: &PointedModel,
    f: Flavor,
    w: &Window,
) -> Result<InvariantReport, InvariantError> {
    w.shrink(HOMOLOGY_MARGIN.max(ACTION_MARGIN)).ok_or(HomologyError::EmptyTrustedRegion(*w))?;
    Ok(InvariantReport {
        fixture: fixture.to_string(),
        flavor: f,
        window: *w,
        hfl: hfl(&m.complex, f, w)?,
        hf: hf(m, f, w)?,
        hf_w: if f == Flavor::Hat { None } else { Some(hf_w(m, f, w)?) },
    })
}

/// Which closed form of a torus knot to produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormKind {
    CircW,
    Hat,
    HatL,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expected {
    Decomp(ModuleDecomp),
    Dim(usize),
}

/// Closed forms for `T(p,q)` from its Alexander exponents `a_0 > … > a_{2n}`:
/// `HF°_w` is `F[v]` at `(0, -2a_0-2)` plus `F[v]/v^{a_{2i-2}-a_{2i-1}-1}` at
/// `(-b_{2i}, -b_{2(n-i)}-2)` for `1 ≤ i ≤ n` (zero orders dropped);
/// `dim HFL^ = 2n+1`; `dim HF^ = n+1 + #{1 ≤ j ≤ n : a_{j-1}-a_j > 1}`.
pub fn torus_closed_form(p: i64, q: i64, kind: ClosedFormKind) -> Result<Expected, InvariantError> {
    let a = complex::torus_knot_exponents(p, q)?;
    let n = (a.len() - 1) / 2;
    Ok(match kind {
        ClosedFormKind::HatL => Expected::Dim(2 * n + 1),
        ClosedFormKind::Hat => Expected::Dim(n + 1 + (1..=n).filter(|&j| a[j - 1] - a[j] > 1).count()),
        ClosedFormKind::CircW => {
            let b = complex::staircase_b_values(&a);
            let mut s = vec![Summand::Free { position: Bigrading::new(0, -2 * a[0] - 2) }];
            for i in 1..=n {
                let order = a[2 * i - 2] - a[2 * i - 1] - 1;
                if order > 0 {
                    s.push(Summand::Torsion {
                        position: Bigrading::new(-b[2 * i], -b[2 * (n - i)] - 2),
                        order: order as u32,
                    });
                }
            }
            Expected::Decomp(ModuleDecomp::new(s))
        }
    })
}

/// Outcome of comparing a computed invariant with an expected one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub matched: bool,
    /// Translation taking the computed module onto the expected one.
    pub shift: Option<Bigrading>,
    pub mismatches: Vec<String>,
}

impl Comparison {
    fn merge(mut self, o: Comparison) -> Comparison {
        self.matched &= o.matched;
        self.shift = self.shift.or(o.shift);
        self.mismatches.extend(o.mismatches);
        self
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.matched {
            match self.shift {
                Some(s) => write!(f, "match (shift {s})"),
                None => f.write_str("match"),
            }
        } else {
            write!(f, "mismatch: {}", self.mismatches.join("; "))
        }
    }
}

/// Equality up to one global translation of bidegrees.
pub fn compare(actual: &ModuleDecomp, expected: &ModuleDecomp) -> Comparison {
    if let Some(s) = actual.shift_to(expected) {
        return Comparison { matched: true, shift: Some(s), mismatches: Vec::new() };
    }
    let mut mismatches = Vec::new();
    if actual.free_count() != expected.free_count() {
        mismatches.push(format!("free summands: {} computed, {} expected", actual.free_count(), expected.free_count()));
    }
    let orders = |m: &ModuleDecomp| {
        let mut o: Vec<u32> = m.torsion().into_iter().map(|(_, k)| k).collect();
        o.sort_unstable();
        o
    };
    if orders(actual) != orders(expected) {
        mismatches.push(format!("torsion orders: {:?} computed, {:?} expected", orders(actual), orders(expected)));
    }
    if mismatches.is_empty() {
        let anchor = match (actual.summands.first(), expected.summands.first()) {
            (Some(a), Some(e)) => e.position() - a.position(),
            _ => Bigrading::ZERO,
        };
        let (extra, missing) = actual.difference(expected, anchor);
        mismatches.push(format!(
            "relative positions differ (after shift {anchor}: computed only {}, expected only {})",
            ModuleDecomp::new(extra),
            ModuleDecomp::new(missing)
        ));
    }
    Comparison { matched: false, shift: None, mismatches }
}

pub fn compare_dim(what: &str, actual: usize, expected: usize) -> Comparison {
    let matched = actual == expected;
    let mismatches = if matched { Vec::new() } else { vec![format!("{what}: {actual} computed, {expected} expected")] };
    Comparison { matched, shift: None, mismatches }
}

/// Runs the full pipeline on `c` and compares with the closed forms of `T(p,q)`:
/// circ `HF_w`, total hat `HF`, total hat `HFL`.
pub fn compare_with_torus(c: &Complex, p: i64, q: i64) -> Result<Comparison, InvariantError> {
    let model = PointedModel::knot(c.clone())?;
    let mut w = Window::around(c, 4);
    w = w.union(&Window::new(w.w_lo, w.w_hi, w.z_lo - 2, w.z_hi).expect("nonempty"));
    let circ_w = hf_w(&model, Flavor::Circ, &w)?.decomp.expect("circ flavor is decomposed");
    let hat = hf(&model, Flavor::Hat, &w)?.table.total();
    let hatl = hfl(c, Flavor::Hat, &w)?.table.total();
    let expect_decomp = |k| match torus_closed_form(p, q, k) {
        Ok(Expected::Decomp(d)) => Ok(d),
        Ok(Expected::Dim(_)) => unreachable!("circ_w closed form is a decomposition"),
        Err(e) => Err(e),
    };
    let expect_dim = |k| match torus_closed_form(p, q, k) {
        Ok(Expected::Dim(d)) => Ok(d),
        Ok(Expected::Decomp(_)) => unreachable!("hat closed forms are dimensions"),
        Err(e) => Err(e),
    };
    Ok(compare(&circ_w, &expect_decomp(ClosedFormKind::CircW)?)
        .merge(compare_dim("dim HF^", hat, expect_dim(ClosedFormKind::Hat)?))
        .merge(compare_dim("dim HFL^", hatl, expect_dim(ClosedFormKind::HatL)?)))
}

/// The cycle `Σ_g f(g) ⊗ g*` in `C ⊗ C*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceClass {
    pub ambient: Complex,
    pub chain: Chain,
    pub grading: Bigrading,
}

impl TraceClass {
    pub fn is_cycle(&self) -> bool {
        self.ambient.apply_d(&self.chain).is_empty()
    }

    /// `(source in C, target in C*, coefficient)` name triples of the nonzero terms.
    pub fn terms(&self) -> Vec<(String, String)> {
        self.chain
            .iter()
            .flat_map(|(&i, p)| p.terms().map(move |m| (i, m)))
            .map(|(i, m)| {
                let name = self.ambient.gens()[i].name.clone();
                (if m.is_one() { String::new() } else { m.to_string() }, name)
            })
            .collect()
    }
}

pub fn trace_class(c: &Complex, f: &Morphism) -> Result<TraceClass, InvariantError> {
    if f.n_source() != c.len() || f.n_target() != c.len() || !c.is_chain_map(f) {
        return Err(InvariantError::NotAChainMap);
    }
    let ambient = c.tensor(&c.dual());
    let n = c.len();
    let mut chain = Chain::new();
    for j in 0..n {
        for (&i, p) in f.column(j) {
            chain.insert(i * n + j, p.clone());
        }
    }
    let t = TraceClass { ambient, chain, grading: f.degree };
    debug_assert!(t.is_cycle());
    Ok(t)
}

/// Whether two trace classes differ in the homology of the given flavor.
pub fn distinguish(t1: &TraceClass, t2: &TraceClass, f: Flavor) -> Result<bool, InvariantError> {
    if t1.ambient != t2.ambient || t1.grading != t2.grading {
        return Err(InvariantError::Mismatch(t1.grading, t2.grading));
    }
    let mut sum = t1.chain.clone();
    for (&i, p) in &t2.chain {
        complex::chain_add_term(&mut sum, i, p);
    }
    Ok(!homology::is_boundary(&t1.ambient, f, &sum)?)
}
