#![allow(dead_code)]

use hfl_core::complex::{figure_eight, torus_knot, unknot};
use hfl_core::{Complex, Window};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn knots() -> Vec<Complex> {
    vec![
        unknot(),
        torus_knot(2, 3).unwrap(),
        torus_knot(2, 5).unwrap(),
        torus_knot(3, 4).unwrap(),
        figure_eight(),
    ]
}

pub fn window_for(c: &Complex, margin: i64) -> Window {
    Window::around(c, margin)
}

/// Random symmetric strictly decreasing exponent list of length `2n+1`.
pub fn random_exponents(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    let mut gaps: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    let mut right = Vec::new();
    let mut acc = 0;
    for g in gaps.drain(..) {
        acc += g;
        right.push(acc);
    }
    let mut a: Vec<i64> = right.iter().rev().copied().collect();
    a.push(0);
    a.extend(right.iter().map(|x| -x));
    a
}

/// Random unipotent base change of `c`, retried until the result is reduced.
pub fn random_base_change(c: &Complex, rng: &mut ChaCha8Rng) -> Complex {
    for _ in 0..50 {
        let n = c.len();
        let pairs: Vec<(usize, usize)> =
            (0..rng.gen_range(1..=2 * n)).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
        let (d, _, _) = c.unipotent_base_change(&pairs);
        if d.is_reduced() {
            return d;
        }
    }
    c.clone()
}
