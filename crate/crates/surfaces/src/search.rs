//! Enumeration of one-cell decompositions and move-sequence search.

use std::collections::{BTreeMap, HashMap, VecDeque};

use itertools::Itertools;
use thiserror::Error;

use crate::canon::{canonical_form, iso, isomorphism, CanonicalForm};
use crate::cells::{Cell, CellDecomposition, Side};
use crate::moves::{
    apply_move, deperturb, inverse_of_deperturb, primitive_neighbors, switch_neighbors, Move, MoveError,
    MoveSequence,
};

pub const MAX_ENUM_EDGES: usize = 8;
pub const DEFAULT_BOUND: usize = 100_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("{edges} edges exceeds the enumeration bound {max}")]
    ScaleBound { edges: usize, max: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search bound exhausted after {explored} states (bound {bound})")]
    Exhausted { explored: usize, bound: usize },
    #[error("replayed sequence does not reach the target")]
    ReplayFailed,
    #[error(transparent)]
    Move(#[from] MoveError),
}

/// All one-cell decompositions of the genus-`g` surface with the given vertex
/// counts, one per isomorphism class, ordered by canonical form.
pub fn enumerate_deperturbed(g: u32, n_plus: usize, n_minus: usize) -> Result<Vec<CellDecomposition>, SearchError> {
    if n_plus == 0 || n_minus == 0 {
        return Err(SearchError::Precondition("both colors need a vertex".into()));
    }
    let edges = n_plus + n_minus + 2 * g as usize - 1;
    if edges > MAX_ENUM_EDGES {
        return Err(SearchError::ScaleBound { edges, max: MAX_ENUM_EDGES });
    }
    let names: Vec<String> = (0..edges).map(|k| format!("e{k}")).collect();
    let mut classes: BTreeMap<CanonicalForm, CellDecomposition> = BTreeMap::new();
    // even positions run plus to minus; edge k sits at 2k and at 2·perm[k] + 1
    for perm in (0..edges).permutations(edges) {
        let mut sides = vec![Side { edge: 0, forward: true }; 2 * edges];
        for (k, &p) in perm.iter().enumerate() {
            sides[2 * k] = Side { edge: k, forward: true };
            sides[2 * p + 1] = Side { edge: k, forward: false };
        }
        let Ok(d) = CellDecomposition::from_gluing(vec![Cell { name: "c0".into(), sides }], names.clone()) else {
            continue;
        };
        if d.color_counts() != (n_plus, n_minus) {
            continue;
        }
        classes.entry(canonical_form(&d)).or_insert(d);
    }
    Ok(classes.into_values().collect())
}

fn same_shape(a: &CellDecomposition, b: &CellDecomposition) -> Result<(), SearchError> {
    if a.genus() != b.genus() {
        return Err(SearchError::Precondition(format!("genus {} vs {}", a.genus(), b.genus())));
    }
    if a.color_counts() != b.color_counts() {
        return Err(SearchError::Precondition(format!(
            "vertex colors {:?} vs {:?}",
            a.color_counts(),
            b.color_counts()
        )));
    }
    Ok(())
}

/// Breadth-first search over isomorphism classes of the edge-switch graph.
/// The returned switches replay from `d1` to a decomposition isomorphic to `d2`.
pub fn connect_by_switches(
    d1: &CellDecomposition,
    d2: &CellDecomposition,
    bound: usize,
) -> Result<MoveSequence, SearchError> {
    for d in [d1, d2] {
        d.validate().map_err(MoveError::from)?;
        if !d.predicates().deperturbed {
            return Err(SearchError::Precondition(format!("{} cells, expected one", d.cells().len())));
        }
    }
    same_shape(d1, d2)?;
    let target = canonical_form(d2);
    let start = canonical_form(d1);
    if start == target {
        return Ok(MoveSequence::default());
    }
    let mut states = vec![d1.clone()];
    let mut parent: Vec<Option<(usize, Move)>> = vec![None];
    let mut seen: HashMap<CanonicalForm, usize> = HashMap::from([(start, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for (mv, next) in switch_neighbors(&states[i]) {
            let key = canonical_form(&next);
            if seen.contains_key(&key) {
                continue;
            }
            if seen.len() >= bound {
                return Err(SearchError::Exhausted { explored: seen.len(), bound });
            }
            let j = states.len();
            seen.insert(key.clone(), j);
            states.push(next);
            parent.push(Some((i, mv)));
            if key == target {
                let mut moves = Vec::new();
                let mut at = j;
                while let Some((p, mv)) = &parent[at] {
                    moves.push(mv.clone());
                    at = *p;
                }
                moves.reverse();
                let seq = MoveSequence(moves);
                if !iso(&seq.apply(d1)?, d2) {
                    return Err(SearchError::ReplayFailed);
                }
                return Ok(seq);
            }
            queue.push_back(j);
        }
    }
    Err(SearchError::Exhausted { explored: seen.len(), bound })
}

/// Deperturbs until one cell remains, lowest-index removable edge first.
/// Returns the moves and every state along the way, the start included.
pub fn full_deperturbation(d: &CellDecomposition) -> (Vec<Move>, Vec<CellDecomposition>) {
    let mut states = vec![d.clone()];
    let mut moves = Vec::new();
    loop {
        let cur = states.last().expect("nonempty");
        let step = cur.edges().iter().find_map(|e| deperturb(cur, &e.name).ok().map(|x| (e.name.clone(), x)));
        match step {
            Some((name, next)) => {
                moves.push(Move::Deperturb { edge: name });
                states.push(next);
            }
            None => return (moves, states),
        }
    }
}

/// Rewrites a perturbation on `from` as the corresponding one on an isomorphic `to`.
fn transport(from: &CellDecomposition, to: &CellDecomposition, mv: &Move) -> Result<Move, SearchError> {
    let Move::Perturb { cell, a, b } = mv else {
        return Err(SearchError::Precondition("only perturbations are transported".into()));
    };
    let map = isomorphism(from, to).ok_or(SearchError::ReplayFailed)?;
    let c = from.cell_index(cell).ok_or_else(|| MoveError::UnknownCell(cell.clone()))?;
    let (df, dt) = (from.darts(), to.darts());
    let (ca, ia) = dt.locate(map[df.offsets[c] + a]);
    let (cb, ib) = dt.locate(map[df.offsets[c] + b]);
    if ca != cb {
        return Err(SearchError::ReplayFailed);
    }
    Ok(Move::Perturb { cell: to.cells()[ca].name.clone(), a: ia, b: ib })
}

/// A sequence of perturbations and deperturbations from `d1` to a
/// decomposition isomorphic to `d2`, checked by replay.
pub fn connect_decorations(
    d1: &CellDecomposition,
    d2: &CellDecomposition,
    bound: usize,
) -> Result<MoveSequence, SearchError> {
    d1.validate().map_err(MoveError::from)?;
    d2.validate().map_err(MoveError::from)?;
    same_shape(d1, d2)?;
    if iso(d1, d2) {
        return Ok(MoveSequence::default());
    }
    for (mv, x) in primitive_neighbors(d1) {
        if iso(&x, d2) {
            return Ok(MoveSequence(vec![mv]));
        }
    }

    let (mut moves, states1) = full_deperturbation(d1);
    let (down2, states2) = full_deperturbation(d2);
    let core1 = states1.last().expect("nonempty");
    let core2 = states2.last().expect("nonempty");
    let switches = connect_by_switches(core1, core2, bound)?;

    // expand each switch; edge names drift, so track them
    let mut cur = core1.clone();
    let mut names: HashMap<String, String> = HashMap::new();
    for sw in &switches.0 {
        let Move::Switch { edge, a, b } = sw else { unreachable!("switch search yields switches") };
        let actual = names.get(edge).cloned().unwrap_or_else(|| edge.clone());
        let e = cur.edge_index(&actual).ok_or_else(|| MoveError::UnknownEdge(actual.clone()))?;
        let at = cur.sides_of(e);
        let cell = cur.cells()[at[0].0].name.clone();
        let before: Vec<String> = cur.edges().iter().map(|x| x.name.clone()).collect();
        let p = Move::Perturb { cell, a: *a, b: *b };
        let split = apply_move(&cur, &p)?;
        let created = split
            .edges()
            .iter()
            .map(|x| x.name.clone())
            .find(|n| !before.contains(n))
            .expect("perturbation adds an edge");
        let dep = Move::Deperturb { edge: actual };
        cur = apply_move(&split, &dep)?;
        names.insert(edge.clone(), created);
        moves.push(p);
        moves.push(dep);
    }

    // climb back up d2's deperturbation chain
    for k in (0..down2.len()).rev() {
        let Move::Deperturb { edge } = &down2[k] else { unreachable!() };
        let inv = inverse_of_deperturb(&states2[k], edge)?;
        let mv = transport(&states2[k + 1], &cur, &inv)?;
        cur = apply_move(&cur, &mv)?;
        moves.push(mv);
    }

    let seq = MoveSequence(moves);
    if !iso(&seq.apply(d1)?, d2) {
        return Err(SearchError::ReplayFailed);
    }
    Ok(seq)
}
