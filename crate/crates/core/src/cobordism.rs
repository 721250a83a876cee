//! Scalar evaluation of words in elementary link cobordisms, the twist map,
//! and the bidegree of a cobordism map.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::Morphism;
use crate::fv_module::{ModuleDecomp, Summand};
use crate::gf2::BitVec;
use crate::homology::{HomologyError, Window, ACTION_MARGIN};
use crate::invariants::{FloerSpaces, InvariantError, PointedModel};
use crate::poly::{Bigrading, Flavor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CobordismError {
    #[error("line {line}: unknown token `{token}`")]
    UnknownToken { line: usize, token: String },
    #[error("line {line}: {msg}")]
    BadArgument { line: usize, msg: String },
    #[error("elementary cobordism `{0}` has no matching reverse")]
    Unpaired(String),
    #[error("elementary cobordism `{0}` is not well bracketed")]
    Crossed(String),
    #[error("words differ away from compression markers")]
    WordsDiffer,
    #[error("the compressed word has {0} fewer compressions than the uncompressed one")]
    NegativeCompression(usize),
    #[error("no action maps for basepoint pair {index} (model has {pairs})")]
    MissingActionMaps { index: usize, pairs: usize },
    #[error("degree ({0}) is not divisible by 4")]
    NonIntegerDegree(i64),
    #[error("unknown fixture shape `{0}`")]
    UnknownShape(String),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "token", content = "arg", rename_all = "snake_case")]
pub enum CobordismToken {
    Merge,
    Split,
    PointShift,
    Twist(u32),
    Perturbation,
    Deperturbation,
    Elementary(String),
    ReverseElementary(String),
    RibbonPair(String),
    Compression,
}

impl fmt::Display for CobordismToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CobordismToken::Merge => f.write_str("merge"),
            CobordismToken::Split => f.write_str("split"),
            CobordismToken::PointShift => f.write_str("point-shift"),
            CobordismToken::Twist(k) => write!(f, "twist {k}"),
            CobordismToken::Perturbation => f.write_str("perturbation"),
            CobordismToken::Deperturbation => f.write_str("deperturbation"),
            CobordismToken::Elementary(id) => write!(f, "elementary {id}"),
            CobordismToken::ReverseElementary(id) => write!(f, "reverse {id}"),
            CobordismToken::RibbonPair(id) => write!(f, "ribbon {id}"),
            CobordismToken::Compression => f.write_str("compression"),
        }
    }
}

fn parse_token(line: usize, text: &str) -> Result<CobordismToken, CobordismError> {
    let mut parts = text.split_whitespace();
    let head = parts.next().unwrap_or_default();
    let arg = parts.next();
    if parts.next().is_some() {
        return Err(CobordismError::BadArgument { line, msg: format!("too many arguments in `{text}`") });
    }
    let need = |name: &str| {
        arg.map(str::to_string)
            .ok_or_else(|| CobordismError::BadArgument { line, msg: format!("`{name}` needs an identifier") })
    };
    let none = |t: CobordismToken| match arg {
        None => Ok(t),
        Some(a) => Err(CobordismError::BadArgument { line, msg: format!("`{head}` takes no argument, got `{a}`") }),
    };
    match head {
        "merge" => none(CobordismToken::Merge),
        "split" => none(CobordismToken::Split),
        "point-shift" | "point_shift" | "pointshift" => none(CobordismToken::PointShift),
        "perturbation" => none(CobordismToken::Perturbation),
        "deperturbation" => none(CobordismToken::Deperturbation),
        "compression" => none(CobordismToken::Compression),
        "twist" => {
            let a = arg.ok_or_else(|| CobordismError::BadArgument { line, msg: "`twist` needs a pair count".into() })?;
            let k = a
                .parse()
                .map_err(|_| CobordismError::BadArgument { line, msg: format!("bad pair count `{a}`") })?;
            Ok(CobordismToken::Twist(k))
        }
        // A bare `elementary` / `reverse` pair uses the anonymous id `_`.
        "elementary" => Ok(CobordismToken::Elementary(arg.unwrap_or("_").to_string())),
        "reverse" => Ok(CobordismToken::ReverseElementary(arg.unwrap_or("_").to_string())),
        "ribbon" => Ok(CobordismToken::RibbonPair(need("ribbon")?)),
        other => Err(CobordismError::UnknownToken { line, token: other.to_string() }),
    }
}

/// Parses a word script: one token per line (`;` also separates tokens), `#` comments.
pub fn parse_word(text: &str) -> Result<Vec<CobordismToken>, CobordismError> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split_once('#').map_or(raw, |(a, _)| a);
        for piece in line.split(';') {
            if !piece.trim().is_empty() {
                out.push(parse_token(ln + 1, piece.trim())?);
            }
        }
    }
    Ok(out)
}

pub fn serialize_word(word: &[CobordismToken]) -> String {
    word.iter().map(|t| format!("{t}\n")).collect()
}

/// The evaluated map `v^power · Id` on the weak group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarResult {
    pub power: u32,
}

impl ScalarResult {
    /// Positive powers of `v` vanish once `v` is set to zero.
    pub fn vanishes_in(&self, f: Flavor) -> bool {
        f == Flavor::Hat && self.power > 0
    }

    pub fn hat_zero(&self) -> bool {
        self.vanishes_in(Flavor::Hat)
    }

    pub fn describe(&self, f: Flavor) -> String {
        if self.vanishes_in(f) {
            format!("v^{} (zero in the hat flavor)", self.power)
        } else {
            format!("v^{}", self.power)
        }
    }
}

impl fmt::Display for ScalarResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v^{}", self.power)
    }
}

/// Evaluates a word to `v^k · Id`: merges, twists, perturbations and ribbon
/// brackets contribute nothing; splits, point shifts, compressions and each
/// matched elementary/reverse pair contribute one `v`.
pub fn evaluate_word(word: &[CobordismToken]) -> Result<ScalarResult, CobordismError> {
    let mut power = 0u32;
    let mut open: Vec<(&str, bool)> = Vec::new();
    for t in word {
        match t {
            CobordismToken::Merge
            | CobordismToken::Twist(_)
            | CobordismToken::Perturbation
            | CobordismToken::Deperturbation
            | CobordismToken::RibbonPair(_) => {}
            CobordismToken::Split | CobordismToken::PointShift | CobordismToken::Compression => power += 1,
            CobordismToken::Elementary(id) | CobordismToken::ReverseElementary(id) => {
                let forward = matches!(t, CobordismToken::Elementary(_));
                match open.last() {
                    Some(&(top, dir)) if top == id && dir != forward => {
                        open.pop();
                        power += 1;
                    }
                    _ if open.iter().any(|&(o, _)| o == id) => return Err(CobordismError::Crossed(id.clone())),
                    _ => open.push((id, forward)),
                }
            }
        }
    }
    match open.first() {
        Some(&(id, _)) => Err(CobordismError::Unpaired(id.to_string())),
        None => Ok(ScalarResult { power }),
    }
}

/// Result of checking `g_S = v^k · g_{S_D}` for a word with `k` extra compressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompressionCheck {
    pub compressions: usize,
    pub with_s: ScalarResult,
    pub with_s_d: ScalarResult,
    pub holds: bool,
}

pub fn compression_compare(
    word_s: &[CobordismToken],
    word_s_d: &[CobordismToken],
) -> Result<CompressionCheck, CobordismError> {
    let strip = |w: &[CobordismToken]| -> Vec<CobordismToken> {
        w.iter().filter(|t| **t != CobordismToken::Compression).cloned().collect()
    };
    if strip(word_s) != strip(word_s_d) {
        return Err(CobordismError::WordsDiffer);
    }
    let count = |w: &[CobordismToken]| w.iter().filter(|t| **t == CobordismToken::Compression).count();
    let (cs, cd) = (count(word_s), count(word_s_d));
    if cs < cd {
        return Err(CobordismError::NegativeCompression(cd - cs));
    }
    let with_s = evaluate_word(word_s)?;
    let with_s_d = evaluate_word(word_s_d)?;
    let k = cs - cd;
    Ok(CompressionCheck { compressions: k, with_s, with_s_d, holds: with_s.power as usize == with_s_d.power as usize + k })
}

/// The chain-level twist map `Σ_I Ψ_{j_1}Φ_{j_1} ··· Ψ_{j_m}Φ_{j_m}` over subsets
/// `I = {j_1 < … < j_m}` of the selected pairs, empty subset included.
#[derive(Clone, Debug)]
pub struct Twist {
    pub selection: Vec<usize>,
    pub chain: Morphism,
}

pub fn twist_endomorphism(m: &PointedModel, selection: &[usize]) -> Result<Twist, CobordismError> {
    let n = m.complex.len();
    let mut total = Morphism::identity(n);
    // Σ over ordered subsets = (Id + P_{j_1}) ∘ (Id + P_{j_2}) ∘ …
    for &j in selection.iter().rev() {
        if j >= m.pairs() {
            return Err(CobordismError::MissingActionMaps { index: j, pairs: m.pairs() });
        }
        let mut p = m.psis[j].compose(&m.phis[j]);
        p.degree = Bigrading::ZERO;
        let factor = Morphism::identity(n).plus(&p);
        total = factor.compose(&total);
    }
    total.degree = Bigrading::ZERO;
    Ok(Twist { selection: selection.to_vec(), chain: total })
}

/// The twist map restricted to `HF` in one bidegree: a basis of `HF_g` (in
/// homology coordinates) and the images of its vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedTwist {
    pub basis: Vec<BitVec>,
    pub images: Vec<BitVec>,
}

impl RestrictedTwist {
    pub fn is_identity(&self) -> bool {
        self.basis == self.images
    }
}

impl Twist {
    /// The induced map on homology in every bidegree of the action-trusted region
    /// where homology is nonzero, in the engine's bases.
    pub fn on_homology(
        &self,
        m: &PointedModel,
        f: Flavor,
        w: &Window,
    ) -> Result<BTreeMap<Bigrading, Vec<BitVec>>, CobordismError> {
        let region = w.shrink(ACTION_MARGIN).ok_or(InvariantError::Homology(HomologyError::EmptyTrustedRegion(*w)))?;
        let spaces = FloerSpaces::new(m, f);
        Ok(region
            .iter()
            .filter(|&g| spaces.dim(g) > 0)
            .map(|g| (g, spaces.engine().induced(&self.chain, g)))
            .collect())
    }

    pub fn restricted_to_hf(
        &self,
        m: &PointedModel,
        f: Flavor,
        w: &Window,
    ) -> Result<BTreeMap<Bigrading, RestrictedTwist>, CobordismError> {
        let spaces = FloerSpaces::new(m, f);
        let full = self.on_homology(m, f, w)?;
        let mut out = BTreeMap::new();
        for (g, matrix) in full {
            let basis = spaces.hf_basis(g);
            let images = basis
                .iter()
                .map(|b| {
                    let mut v = BitVec::zeros(spaces.dim(g));
                    for i in b.ones() {
                        v.xor_assign(&matrix[i]);
                    }
                    v
                })
                .collect();
            out.insert(g, RestrictedTwist { basis, images });
        }
        Ok(out)
    }

    pub fn is_identity_on_hf(&self, m: &PointedModel, f: Flavor, w: &Window) -> Result<bool, CobordismError> {
        Ok(self.restricted_to_hf(m, f, w)?.values().all(RestrictedTwist::is_identity))
    }

    pub fn is_identity_on_homology(&self, m: &PointedModel, f: Flavor, w: &Window) -> Result<bool, CobordismError> {
        Ok(self.on_homology(m, f, w)?.values().all(|mat| {
            mat.iter().enumerate().all(|(i, col)| *col == BitVec::unit(mat.len(), i))
        }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeInput {
    pub c1_sq: i64,
    pub chi_x: i64,
    pub sigma_x: i64,
    pub c1_sq_shifted: i64,
    pub chi_s: i64,
}

fn degree(c1_sq: i64, chi: i64, sigma: i64) -> Result<i64, CobordismError> {
    let num = c1_sq - 2 * chi - 3 * sigma;
    if num % 4 != 0 {
        return Err(CobordismError::NonIntegerDegree(num));
    }
    Ok(num / 4)
}

/// `(d(c1²), d(c1_shifted²) - χ(S))` with `d(c) = (c - 2χ(X) - 3σ(X)) / 4`.
pub fn cobordism_bidegree(d: &DegreeInput) -> Result<Bigrading, CobordismError> {
    let w = degree(d.c1_sq, d.chi_x, d.sigma_x)?;
    let z = degree(d.c1_sq_shifted, d.chi_x, d.sigma_x)? - d.chi_s;
    Ok(Bigrading::new(w, z))
}

pub const SHAPE_NAMES: [&str; 5] = ["unknot", "hopf", "neg_hopf", "trefoil", "neg_trefoil"];

/// Circ-flavor module shapes of small links, positions as bidegrees.
pub fn fixture_shapes(name: &str) -> Result<ModuleDecomp, CobordismError> {
    let free = |w, z| Summand::Free { position: Bigrading::new(w, z) };
    let tors = |w, z| Summand::Torsion { position: Bigrading::new(w, z), order: 1 };
    let s = match name {
        "unknot" => vec![free(0, 0)],
        "hopf" | "trefoil" => vec![free(0, -2), tors(-2, 0)],
        "neg_hopf" => vec![free(0, 0), tors(0, 0)],
        "neg_trefoil" => vec![free(0, -2), tors(1, -1)],
        other => return Err(CobordismError::UnknownShape(other.to_string())),
    };
    Ok(ModuleDecomp::new(s))
}

impl FromStr for CobordismToken {
    type Err = CobordismError;
    fn from_str(s: &str) -> Result<Self, CobordismError> {
        parse_token(1, s.trim())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{figure_eight, unknot};

    fn w(s: &str) -> Vec<CobordismToken> {
        parse_word(s).unwrap()
    }

    #[test]
    fn scalar_rules() {
        assert_eq!(evaluate_word(&w("split\nmerge")).unwrap().power, 1);
        assert_eq!(evaluate_word(&w("elementary 1\nreverse 1")).unwrap().power, 1);
        assert_eq!(evaluate_word(&w("reverse a; elementary a")).unwrap().power, 1);
        assert_eq!(evaluate_word(&w("twist 3\nperturbation\ndeperturbation")).unwrap().power, 0);
        assert_eq!(evaluate_word(&[]).unwrap().power, 0);
        assert_eq!(evaluate_word(&w("elementary a; elementary b; reverse b; reverse a")).unwrap().power, 2);
        assert_eq!(evaluate_word(&w("ribbon r; point-shift")).unwrap().power, 1);
    }

    #[test]
    fn bracketing_errors() {
        assert_eq!(evaluate_word(&w("elementary a")), Err(CobordismError::Unpaired("a".into())));
        assert_eq!(
            evaluate_word(&w("elementary a; elementary b; reverse a; reverse b")),
            Err(CobordismError::Crossed("a".into()))
        );
        assert!(matches!(parse_word("split\nfold"), Err(CobordismError::UnknownToken { line: 2, .. })));
        assert!(parse_word("twist x").is_err());
        assert!(parse_word("merge 3").is_err());
        assert!(parse_word("ribbon").is_err());
        assert_eq!(evaluate_word(&w("elementary")), Err(CobordismError::Unpaired("_".into())));
        assert_eq!(evaluate_word(&w("elementary; reverse")).unwrap().power, 1);
    }

    #[test]
    fn script_round_trip() {
        let word = w("split\nmerge\npoint-shift\ntwist 2\nelementary e1\nreverse e1\nribbon r\ncompression\nperturbation\ndeperturbation");
        assert_eq!(parse_word(&serialize_word(&word)).unwrap(), word);
    }

    #[test]
    fn hat_vanishing() {
        let r = evaluate_word(&w("merge; split")).unwrap();
        assert!(r.hat_zero() && !r.vanishes_in(Flavor::Circ));
        assert!(!evaluate_word(&w("merge")).unwrap().hat_zero());
    }

    #[test]
    fn compressions() {
        let sd = w("split; merge");
        let c = compression_compare(&w("split; compression; merge"), &sd).unwrap();
        assert!(c.holds && c.compressions == 1);
        assert_eq!(compression_compare(&sd, &sd).unwrap().compressions, 0);
        let two = compression_compare(&w("compression; split; merge; compression"), &sd).unwrap();
        assert!(two.holds && two.with_s.power == two.with_s_d.power + 2);
        assert_eq!(compression_compare(&w("merge"), &sd), Err(CobordismError::WordsDiffer));
    }

    #[test]
    fn degrees() {
        let zero = DegreeInput { c1_sq: 0, chi_x: 0, sigma_x: 0, c1_sq_shifted: 0, chi_s: 0 };
        assert_eq!(cobordism_bidegree(&zero).unwrap(), Bigrading::ZERO);
        assert_eq!(cobordism_bidegree(&DegreeInput { chi_s: -1, ..zero }).unwrap(), Bigrading::new(0, 1));
        let d = DegreeInput { c1_sq: 4, c1_sq_shifted: 4, ..zero };
        assert_eq!(cobordism_bidegree(&d).unwrap(), Bigrading::new(1, 1));
        assert_eq!(cobordism_bidegree(&DegreeInput { c1_sq: 1, ..zero }), Err(CobordismError::NonIntegerDegree(1)));
    }

    #[test]
    fn twists() {
        let win = Window::new(-8, 6, -8, 6).unwrap();
        let m = PointedModel::knot(unknot()).unwrap().quasi_stabilize();
        let id = twist_endomorphism(&m, &[]).unwrap();
        assert!(id.is_identity_on_homology(&m, Flavor::Minus, &win).unwrap());
        let t = twist_endomorphism(&m, &[1]).unwrap();
        assert!(!t.is_identity_on_homology(&m, Flavor::Minus, &win).unwrap());
        assert!(t.is_identity_on_hf(&m, Flavor::Minus, &win).unwrap());
        let f8 = PointedModel::knot(figure_eight()).unwrap().quasi_stabilize_times(2);
        let t = twist_endomorphism(&f8, &[1, 2]).unwrap();
        for f in Flavor::ALL {
            assert!(t.is_identity_on_hf(&f8, f, &win).unwrap());
        }
        assert!(matches!(twist_endomorphism(&m, &[5]), Err(CobordismError::MissingActionMaps { index: 5, pairs: 2 })));
    }

    #[test]
    fn shapes() {
        assert_eq!(fixture_shapes("hopf").unwrap(), fixture_shapes("trefoil").unwrap());
        assert_eq!(fixture_shapes("neg_trefoil").unwrap().torsion(), vec![(Bigrading::new(1, -1), 1)]);
        assert!(fixture_shapes("cinquefoil").is_err());
    }
}
