//! Degreewise homology of specialized complexes over the two-element field.
//!
//! Every bidegree slice of `C ⊗ A^f` is finite dimensional: a generator `x`
//! contributes at most the single monomial moving `gr(x)` onto the slice.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Chain, Complex, ComplexError, Morphism};
use crate::gf2::{self, BitVec, Echelon};
use crate::poly::{Bigrading, Flavor, Monomial, Poly};

/// Rectangular range of bidegrees, bounds inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub w_lo: i64,
    pub w_hi: i64,
    pub z_lo: i64,
    pub z_hi: i64,
}

impl Window {
    pub fn new(w_lo: i64, w_hi: i64, z_lo: i64, z_hi: i64) -> Option<Self> {
        (w_lo <= w_hi && z_lo <= z_hi).then_some(Window { w_lo, w_hi, z_lo, z_hi })
    }

    /// Smallest window containing all generator gradings of `c` with `margin` around them.
    pub fn around(c: &Complex, margin: i64) -> Self {
        let (lo, hi) = c.grading_bounds();
        Window { w_lo: lo.w - margin, w_hi: hi.w + margin, z_lo: lo.z - margin, z_hi: hi.z + margin }
    }

    pub fn contains(&self, g: Bigrading) -> bool {
        (self.w_lo..=self.w_hi).contains(&g.w) && (self.z_lo..=self.z_hi).contains(&g.z)
    }

    pub fn contains_window(&self, o: &Window) -> bool {
        self.w_lo <= o.w_lo && o.w_hi <= self.w_hi && self.z_lo <= o.z_lo && o.z_hi <= self.z_hi
    }

    /// The interior left after removing a `margin`-cell border; `None` if empty.
    pub fn shrink(&self, margin: i64) -> Option<Window> {
        Window::new(self.w_lo + margin, self.w_hi - margin, self.z_lo + margin, self.z_hi - margin)
    }

    pub fn union(&self, o: &Window) -> Window {
        Window {
            w_lo: self.w_lo.min(o.w_lo),
            w_hi: self.w_hi.max(o.w_hi),
            z_lo: self.z_lo.min(o.z_lo),
            z_hi: self.z_hi.max(o.z_hi),
        }
    }

    pub fn cells(&self) -> usize {
        ((self.w_hi - self.w_lo + 1) * (self.z_hi - self.z_lo + 1)) as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = Bigrading> + '_ {
        (self.w_lo..=self.w_hi).flat_map(move |w| (self.z_lo..=self.z_hi).map(move |z| Bigrading::new(w, z)))
    }

    fn points(&self) -> Vec<Bigrading> {
        self.iter().collect()
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gr_w ∈ [{}, {}], gr_z ∈ [{}, {}]", self.w_lo, self.w_hi, self.z_lo, self.z_hi)
    }
}

/// Margin needed around a bidegree for homology alone.
pub const HOMOLOGY_MARGIN: i64 = 1;
/// Margin needed for `v`-images and induced actions.
pub const ACTION_MARGIN: i64 = 2;

/// Dimensions over the two-element field, indexed by bidegree. Zero entries are omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertTable(pub BTreeMap<Bigrading, usize>);

impl HilbertTable {
    pub fn get(&self, g: Bigrading) -> usize {
        self.0.get(&g).copied().unwrap_or(0)
    }

    pub fn insert(&mut self, g: Bigrading, d: usize) {
        if d > 0 {
            self.0.insert(g, d);
        } else {
            self.0.remove(&g);
        }
    }

    pub fn add(&mut self, g: Bigrading, d: usize) {
        let cur = self.get(g);
        self.insert(g, cur + d);
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Bigrading, usize)> + '_ {
        self.0.iter().map(|(&g, &d)| (g, d))
    }

    pub fn restrict(&self, w: &Window) -> HilbertTable {
        HilbertTable(self.0.iter().filter(|(g, _)| w.contains(**g)).map(|(&g, &d)| (g, d)).collect())
    }

    /// Pointwise `self ≤ other`.
    pub fn le(&self, other: &HilbertTable) -> bool {
        self.iter().all(|(g, d)| d <= other.get(g))
    }

    pub fn shifted(&self, s: Bigrading) -> HilbertTable {
        HilbertTable(self.0.iter().map(|(&g, &d)| (g + s, d)).collect())
    }

    /// `[gr_w, gr_z, dim]` triples.
    pub fn entries(&self) -> Vec<[i64; 3]> {
        self.iter().map(|(g, d)| [g.w, g.z, d as i64]).collect()
    }
}

/// Per-bidegree ranks of an induced map; keys are the bidegrees where the source
/// homology is nonzero.
pub type RankTable = BTreeMap<Bigrading, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("window {0} leaves no trusted interior")]
    EmptyTrustedRegion(Window),
    #[error("bidegree {0} lies outside the trusted region")]
    Untrusted(Bigrading),
    #[error("not a cycle: its differential is {0}")]
    NotACycle(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("{0}")]
    Unsupported(String),
}

/// Maps whose action on homology can be queried.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    MulU,
    MulV,
    Phi,
    Psi,
}

impl Action {
    pub fn morphism(self, c: &Complex) -> Result<Morphism, ComplexError> {
        match self {
            Action::MulU => Ok(Morphism::scalar(c.len(), Monomial::U)),
            Action::MulV => Ok(Morphism::scalar(c.len(), Monomial::V)),
            Action::Phi => c.phi(),
            Action::Psi => c.psi(),
        }
    }
}

/// Basis of one bidegree slice: `(generator, monomial)` pairs.
#[derive(Clone, Debug)]
pub struct Slice {
    pub grading: Bigrading,
    pub basis: Vec<(usize, Monomial)>,
    position: HashMap<usize, usize>,
}

impl Slice {
    fn new(c: &Complex, g: Bigrading, f: Flavor) -> Self {
        let basis = c.slice_basis(g, f);
        let position = basis.iter().enumerate().map(|(k, &(i, _))| (i, k)).collect();
        Slice { grading: g, basis, position }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of the part of `chain` lying in this slice (after specialization).
    pub fn vector(&self, c: &Complex, chain: &Chain, f: Flavor) -> BitVec {
        let mut out = BitVec::zeros(self.dim());
        for (&i, p) in chain {
            for m in p.terms() {
                if f.keeps(m) && c.grading(i) + m.bidegree() == self.grading {
                    if let Some(&k) = self.position.get(&i) {
                        out.flip(k);
                    }
                }
            }
        }
        out
    }

    pub fn chain(&self, v: &BitVec) -> Chain {
        v.ones().map(|k| (self.basis[k].0, Poly::monomial(self.basis[k].1))).collect()
    }
}

/// Homology in one bidegree, with a chosen basis of cycle representatives.
#[derive(Debug)]
pub struct SliceHomology {
    pub slice: Slice,
    pub cycles_dim: usize,
    boundaries: Echelon,
    /// Representatives reduced against the boundaries and against each other.
    reps: Echelon,
}

impl SliceHomology {
    pub fn grading(&self) -> Bigrading {
        self.slice.grading
    }

    pub fn dim(&self) -> usize {
        self.reps.rank()
    }

    pub fn boundary_rank(&self) -> usize {
        self.boundaries.rank()
    }

    pub fn rep(&self, i: usize) -> &BitVec {
        &self.reps.rows()[i]
    }

    pub fn is_boundary(&self, v: &BitVec) -> bool {
        self.boundaries.contains(v)
    }

    /// Class of a cycle in the chosen homology basis.
    pub fn coords(&self, cycle: &BitVec) -> BitVec {
        let r = self.boundaries.reduce(cycle);
        self.reps
            .coordinates(&r)
            .expect("vector is not a cycle of this slice")
    }
}

/// Lazily computed slices and homology of `C ⊗ A^f`.
pub struct HomologyEngine<'a> {
    complex: &'a Complex,
    flavor: Flavor,
    cache: RwLock<HashMap<Bigrading, Arc<SliceHomology>>>,
}

impl<'a> HomologyEngine<'a> {
    pub fn new(complex: &'a Complex, flavor: Flavor) -> Self {
        HomologyEngine { complex, flavor, cache: RwLock::new(HashMap::new()) }
    }

    pub fn complex(&self) -> &Complex {
        self.complex
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn slice(&self, g: Bigrading) -> Slice {
        Slice::new(self.complex, g, self.flavor)
    }

    /// Columns of `f` restricted to slice `g`, as vectors in slice `g + deg f`.
    pub fn map_matrix(&self, f: &Morphism, src: &Slice, tgt: &Slice) -> Vec<BitVec> {
        debug_assert_eq!(src.grading + f.degree, tgt.grading);
        src.basis
            .iter()
            .map(|&(i, m)| {
                let mut image = Chain::new();
                for (&y, p) in f.column(i) {
                    image.insert(y, p.mul_monomial(m));
                }
                tgt.vector(self.complex, &image, self.flavor)
            })
            .collect()
    }

    pub fn homology(&self, g: Bigrading) -> Arc<SliceHomology> {
        if let Some(h) = self.cache.read().unwrap().get(&g) {
            return Arc::clone(h);
        }
        let h = Arc::new(self.compute(g));
        self.cache.write().unwrap().entry(g).or_insert(h).clone()
    }

    fn compute(&self, g: Bigrading) -> SliceHomology {
        let d = self.complex.diff();
        let here = self.slice(g);
        let below = self.slice(g + Bigrading::DIFF);
        let above = self.slice(g - Bigrading::DIFF);
        let out = self.map_matrix(d, &here, &below);
        let inc = self.map_matrix(d, &above, &here);
        let boundaries = Echelon::spanned_by(here.dim(), &inc);
        let kernel = gf2::kernel(&out, below.dim());
        let cycles_dim = kernel.len();
        let mut all = boundaries.clone();
        let mut reps = Echelon::new(here.dim());
        for k in kernel {
            let mut z = BitVec::zeros(here.dim());
            for j in k.ones() {
                z.flip(j);
            }
            if all.insert(z.clone()) {
                reps.insert(boundaries.reduce(&z));
            }
        }
        debug_assert_eq!(reps.rank() + boundaries.rank(), cycles_dim);
        SliceHomology { slice: here, cycles_dim, boundaries, reps }
    }

    /// Matrix of the map induced on homology by a chain map, from `H_g` to
    /// `H_{g + deg f}`, in the chosen bases.
    pub fn induced(&self, f: &Morphism, g: Bigrading) -> Vec<BitVec> {
        let src = self.homology(g);
        let tgt = self.homology(g + f.degree);
        (0..src.dim())
            .map(|i| {
                let image = self.map_matrix_vec(f, &src.slice, &tgt.slice, src.rep(i));
                tgt.coords(&image)
            })
            .collect()
    }

    fn map_matrix_vec(&self, f: &Morphism, src: &Slice, tgt: &Slice, v: &BitVec) -> BitVec {
        let chain = src.chain(v);
        tgt.vector(self.complex, &f.apply(&chain), self.flavor)
    }

    pub fn induced_rank(&self, f: &Morphism, g: Bigrading) -> usize {
        let tgt_dim = self.homology(g + f.degree).dim();
        gf2::rank(&self.induced(f, g), tgt_dim)
    }
}

pub fn chain_dims(c: &Complex, f: Flavor, w: &Window) -> HilbertTable {
    let mut t = HilbertTable::default();
    for g in w.iter() {
        t.insert(g, c.slice_basis(g, f).len());
    }
    t
}

/// Homology dimensions on the trusted interior of `w`.
pub fn homology_table(c: &Complex, f: Flavor, w: &Window) -> Result<HilbertTable, HomologyError> {
    let trusted = w.shrink(HOMOLOGY_MARGIN).ok_or(HomologyError::EmptyTrustedRegion(*w))?;
    let engine = HomologyEngine::new(c, f);
    Ok(table_over(&engine, &trusted))
}

pub(crate) fn table_over(engine: &HomologyEngine<'_>, w: &Window) -> HilbertTable {
    let dims: Vec<(Bigrading, usize)> =
        w.points().into_par_iter().map(|g| (g, engine.homology(g).dim())).collect();
    let mut t = HilbertTable::default();
    for (g, d) in dims {
        t.insert(g, d);
    }
    t
}

/// Rank of the induced action at every bidegree of the action-trusted interior
/// where the homology is nonzero.
pub fn induced_action_rank(c: &Complex, f: Flavor, op: Action, w: &Window) -> Result<RankTable, HomologyError> {
    let trusted = w.shrink(ACTION_MARGIN).ok_or(HomologyError::EmptyTrustedRegion(*w))?;
    let map = op.morphism(c)?;
    let engine = HomologyEngine::new(c, f);
    Ok(rank_table(&engine, &map, &trusted))
}

/// Rank of the induced action at a single bidegree, refused outside the trusted region.
pub fn induced_action_rank_at(
    c: &Complex,
    f: Flavor,
    op: Action,
    w: &Window,
    g: Bigrading,
) -> Result<usize, HomologyError> {
    let trusted = w.shrink(ACTION_MARGIN).ok_or(HomologyError::EmptyTrustedRegion(*w))?;
    if !trusted.contains(g) {
        return Err(HomologyError::Untrusted(g));
    }
    let map = op.morphism(c)?;
    Ok(HomologyEngine::new(c, f).induced_rank(&map, g))
}

pub(crate) fn rank_table(engine: &HomologyEngine<'_>, map: &Morphism, w: &Window) -> RankTable {
    w.points()
        .into_par_iter()
        .filter(|&g| engine.homology(g).dim() > 0)
        .map(|g| (g, engine.induced_rank(map, g)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Splits a chain into its homogeneous parts (after specialization).
pub fn homogeneous_parts(c: &Complex, chain: &Chain, f: Flavor) -> BTreeMap<Bigrading, Chain> {
    let mut parts: BTreeMap<Bigrading, Chain> = BTreeMap::new();
    for (&i, p) in chain {
        for m in p.terms().filter(|&m| f.keeps(m)) {
            let g = c.grading(i) + m.bidegree();
            crate::complex::chain_add_term(parts.entry(g).or_default(), i, &Poly::monomial(m));
        }
    }
    parts.retain(|_, ch| !ch.is_empty());
    parts
}

fn format_chain(c: &Complex, chain: &Chain) -> String {
    if chain.is_empty() {
        return "0".into();
    }
    chain
        .iter()
        .map(|(&i, p)| {
            if *p == Poly::one() {
                c.gens()[i].name.clone()
            } else {
                format!("({p}) {}", c.gens()[i].name)
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Whether a cycle lies in the image of the specialized differential.
pub fn is_boundary(c: &Complex, f: Flavor, cycle: &Chain) -> Result<bool, HomologyError> {
    let dz: Chain = c
        .apply_d(cycle)
        .into_iter()
        .map(|(i, p)| (i, p.specialize(f)))
        .filter(|(_, p)| !p.is_zero())
        .collect();
    if !dz.is_empty() {
        return Err(HomologyError::NotACycle(format_chain(c, &dz)));
    }
    let engine = HomologyEngine::new(c, f);
    for (g, part) in homogeneous_parts(c, cycle, f) {
        let h = engine.homology(g);
        let v = h.slice.vector(c, &part, f);
        if !h.is_boundary(&v) {
            return Ok(false);
        }
    }
    Ok(true)
}
