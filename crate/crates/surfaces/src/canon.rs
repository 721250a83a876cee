//! Isomorphism invariants for oriented bicolored maps.

use std::fmt;

use crate::cells::{CellDecomposition, Color, Darts};

/// Minimal rooted traversal code over all starting darts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u32>);

impl CanonicalForm {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Breadth-first relabeling from `root`; each dart contributes the labels of
/// its `phi` and `alpha` images and the color at its start.
fn rooted(darts: &Darts, colors: &[Color], root: usize) -> (Vec<u32>, Vec<usize>) {
    let n = darts.len();
    let mut label = vec![u32::MAX; n];
    let mut order = Vec::with_capacity(n);
    label[root] = 0;
    order.push(root);
    let mut code = Vec::with_capacity(3 * n + 1);
    code.push(n as u32);
    let mut head = 0;
    while head < order.len() {
        let d = order[head];
        head += 1;
        for x in [darts.phi[d], darts.alpha[d]] {
            if label[x] == u32::MAX {
                label[x] = order.len() as u32;
                order.push(x);
            }
            code.push(label[x]);
        }
        code.push(match colors[darts.start[d]] {
            Color::Plus => 0,
            Color::Minus => 1,
        });
    }
    (code, order)
}

fn best_root(d: &CellDecomposition) -> (Vec<u32>, Vec<usize>) {
    let darts = d.darts();
    let colors: Vec<Color> = d.vertices().iter().map(|v| v.color).collect();
    (0..darts.len())
        .map(|r| rooted(&darts, &colors, r))
        .min_by(|a, b| a.0.cmp(&b.0))
        .unwrap_or_default()
}

pub fn canonical_form(d: &CellDecomposition) -> CanonicalForm {
    CanonicalForm(best_root(d).0)
}

pub fn iso(a: &CellDecomposition, b: &CellDecomposition) -> bool {
    canonical_form(a) == canonical_form(b)
}

/// A dart bijection `a → b` preserving cells, edges, orientation and colors.
pub fn isomorphism(a: &CellDecomposition, b: &CellDecomposition) -> Option<Vec<usize>> {
    let (ca, oa) = best_root(a);
    let (cb, ob) = best_root(b);
    if ca != cb {
        return None;
    }
    let mut map = vec![0; oa.len()];
    for (x, y) in oa.into_iter().zip(ob) {
        map[x] = y;
    }
    Some(map)
}

/// Whether the decomposition is not isomorphic to its orientation reversal.
pub fn is_chiral(d: &CellDecomposition) -> bool {
    !iso(d, &d.mirror())
}
