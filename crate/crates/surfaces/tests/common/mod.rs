#![allow(dead_code)]

use hfl_surfaces::moves::primitive_neighbors;
use hfl_surfaces::CellDecomposition;
use rand::seq::SliceRandom;
use rand::Rng;

/// Random perturbations and deperturbations, biased toward perturbing while
/// the decomposition is small.
pub fn random_walk<R: Rng>(d: &CellDecomposition, steps: usize, rng: &mut R) -> CellDecomposition {
    let mut cur = d.clone();
    for _ in 0..steps {
        let opts = primitive_neighbors(&cur);
        let grow = cur.edges().len() < 7 && rng.gen_bool(0.6);
        let pool: Vec<_> = opts
            .iter()
            .filter(|(m, _)| matches!(m, hfl_surfaces::Move::Perturb { .. }) == grow)
            .collect();
        let pick = if pool.is_empty() { opts.choose(rng) } else { pool.choose(rng).copied() };
        if let Some((_, next)) = pick {
            cur = next.clone();
        }
    }
    cur
}
