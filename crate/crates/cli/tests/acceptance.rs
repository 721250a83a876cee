//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use hfl_core::cobordism::{compression_compare, evaluate_word, parse_word, twist_endomorphism, CobordismToken as T};
use hfl_core::complex::{figure_eight, figure_eight_rollspin, staircase_from_exponents, torus_knot, unknot};
use hfl_core::fixture::parse_complex;
use hfl_core::homology::{homology_table, induced_action_rank, Action};
use hfl_core::invariants::{compare_with_torus, distinguish, hf, hf_w, trace_class, PointedModel};
use hfl_core::{Bigrading, Complex, Flavor, Morphism, Poly, Window};
use hfl_surfaces::moves::primitive_neighbors;
use hfl_surfaces::{
    connect_by_switches, connect_decorations, enumerate_deperturbed, iso, quad_dissections, quad_switch_graph,
    CellDecomposition, Move,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TORI: [(i64, i64); 5] = [(2, 3), (2, 5), (3, 4), (3, 5), (4, 5)];
const CRITERION_1_LIMIT: Duration = Duration::from_secs(5);
const CRITERION_9_LIMIT: Duration = Duration::from_secs(60);
const SWITCH_BOUND: usize = 100_000;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Alexander exponents of `T(p,q)` counted from the semigroup generated by `p` and `q`.
fn alexander_oracle(p: i64, q: i64) -> Vec<i64> {
    let top = (p - 1) * (q - 1);
    let in_semigroup = |e: i64| (0..=e / p).any(|i| (e - p * i) % q == 0);
    // Δ(t) = (1 - t) Σ_{s ∈ S, s ≤ top} t^s, truncated above `top`
    let coeff = |e: i64| i64::from(in_semigroup(e)) - if e > 0 { i64::from(in_semigroup(e - 1)) } else { 0 };
    (0..=top).rev().filter(|&e| coeff(e) != 0).map(|e| e - top / 2).collect()
}

fn window(c: &Complex) -> Window {
    let (lo, hi) = c.grading_bounds();
    Window::new(lo.w - 6, hi.w + 4, lo.z - 10, hi.z + 4).expect("nonempty")
}

fn fixtures() -> Vec<Complex> {
    let mut v = vec![unknot(), figure_eight(), figure_eight().dual().with_name("fig8_dual")];
    v.extend(TORI[..3].iter().map(|&(p, q)| torus_knot(p, q).expect("torus knot")));
    v
}

fn random_base_change(c: &Complex, rng: &mut ChaCha8Rng) -> Complex {
    let n = c.len();
    for _ in 0..50 {
        let pairs: Vec<(usize, usize)> =
            (0..rng.gen_range(1..=2 * n)).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
        let (d, _, _) = c.unipotent_base_change(&pairs);
        if d.is_reduced() {
            return d;
        }
    }
    c.clone()
}

fn random_exponents(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    let mut right = Vec::new();
    let mut acc = 0;
    for _ in 0..n {
        acc += rng.gen_range(1..=3);
        right.push(acc);
    }
    let mut a: Vec<i64> = right.iter().rev().copied().collect();
    a.push(0);
    a.extend(right.iter().map(|x| -x));
    a
}

fn random_walk(d: &CellDecomposition, steps: usize, rng: &mut ChaCha8Rng) -> Vec<CellDecomposition> {
    let mut path = vec![d.clone()];
    for _ in 0..steps {
        let cur = path.last().expect("nonempty");
        let opts = primitive_neighbors(cur);
        let grow = cur.edges().len() < 7 && rng.gen_bool(0.6);
        let pool: Vec<_> = opts.iter().filter(|(m, _)| matches!(m, Move::Perturb { .. }) == grow).collect();
        let pick = if pool.is_empty() { opts.choose(rng) } else { pool.choose(rng).copied() };
        if let Some((_, next)) = pick {
            path.push(next.clone());
        }
    }
    path
}

fn criterion_1() -> Check {
    let start = Instant::now();
    for (p, q) in TORI {
        let c = torus_knot(p, q).map_err(err)?;
        let cmp = compare_with_torus(&c, p, q).map_err(err)?;
        ensure(cmp.matched, || format!("T({p},{q}): {cmp}"))?;
        // independent dimension and torsion checks from the semigroup exponents
        let a = alexander_oracle(p, q);
        let n = (a.len() - 1) / 2;
        let m = PointedModel::knot(c.clone()).map_err(err)?;
        let w = window(&c);
        let hatl = homology_table(&c, Flavor::Hat, &w).map_err(err)?.total();
        ensure(hatl == 2 * n + 1, || format!("T({p},{q}): dim HFL^ {hatl}, want {}", 2 * n + 1))?;
        let want_hat = n + 1 + (1..=n).filter(|&j| a[j - 1] - a[j] > 1).count();
        let hat = hf(&m, Flavor::Hat, &w).map_err(err)?.table.total();
        ensure(hat == want_hat, || format!("T({p},{q}): dim HF^ {hat}, want {want_hat}"))?;
        let mut want_orders: Vec<u32> =
            (1..=n).map(|i| a[2 * i - 1] - a[2 * i] - 1).filter(|&o| o > 0).map(|o| o as u32).collect();
        want_orders.sort_unstable();
        let d = hf_w(&m, Flavor::Circ, &w).map_err(err)?.decomp.expect("circ");
        let mut orders: Vec<u32> = d.torsion().into_iter().map(|(_, o)| o).collect();
        orders.sort_unstable();
        ensure(d.free_count() == 1 && orders == want_orders, || format!("T({p},{q}): HF°_w = {d}"))?;
    }
    let t = start.elapsed();
    ensure(t < CRITERION_1_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("5 torus knots match, {:.2} s < 5 s", t.as_secs_f64()))
}

fn criterion_2() -> Check {
    let c = figure_eight();
    let m = PointedModel::knot(c.clone()).map_err(err)?;
    let w = window(&c);
    let h = hf(&m, Flavor::Circ, &w).map_err(err)?.decomp.expect("circ");
    let hw = hf_w(&m, Flavor::Circ, &w).map_err(err)?.decomp.expect("circ");
    let free = h.free_positions();
    let tors = h.torsion();
    ensure(free.len() == 1 && tors.len() == 1 && tors[0] == (free[0], 1), || format!("HF° = {h}"))?;
    ensure(hw.summands.len() == 1 && hw.free_positions() == vec![free[0] - Bigrading::new(0, 2)], || {
        format!("HF°_w = {hw}, HF° = {h}")
    })?;
    let minus = hf(&m, Flavor::Minus, &w).map_err(err)?.table;
    let full = homology_table(&c, Flavor::Minus, &w).map_err(err)?.restrict(&w.shrink(2).expect("trusted"));
    ensure(minus == full, || "minus HF differs from minus homology".into())?;
    Ok(format!("HF° = {h}, HF°_w = {hw}, minus HF = HFL ({} cells)", full.total()))
}

fn criterion_3() -> Check {
    let d = figure_eight().dual();
    let listed = parse_complex(include_str!("../../core/fixtures/fig8_dual.cx")).map_err(err)?;
    let mut a: Vec<_> = d.gens().iter().map(|g| (g.name.clone(), g.grading)).collect();
    let mut b: Vec<_> = listed.gens().iter().map(|g| (g.name.clone(), g.grading)).collect();
    ensure(a.len() == b.len(), || "generator counts differ".into())?;
    a.sort();
    b.sort();
    ensure(a == b, || format!("generators {a:?} vs {b:?}"))?;
    let mut entries = 0;
    for (i, g) in d.gens().iter().enumerate() {
        let li = listed.index_of(&g.name).expect("same names");
        for (j, h) in d.gens().iter().enumerate() {
            let lj = listed.index_of(&h.name).expect("same names");
            let (x, y) = (d.diff().entry(j, i), listed.diff().entry(lj, li));
            ensure(x == y, || format!("d*({}) coefficient on {}: {x} vs {y}", g.name, h.name))?;
            entries += usize::from(!x.is_zero());
        }
    }
    ensure(d.validate().is_valid(), || "dual is invalid".into())?;
    Ok(format!("{} generators, {entries} differential entries agree", a.len()))
}

fn criterion_4() -> Check {
    let c = figure_eight();
    let f = figure_eight_rollspin(&c);
    let t = trace_class(&c, &f).map_err(err)?;
    let id = trace_class(&c, &Morphism::identity(c.len())).map_err(err)?;
    let n = c.len();
    let mut diff = t.chain.clone();
    for (k, p) in &id.chain {
        let s = diff.get(k).cloned().unwrap_or_else(Poly::zero) + p.clone();
        if s.is_zero() {
            diff.remove(k);
        } else {
            diff.insert(*k, s);
        }
    }
    let x0 = c.index_of("x0").expect("x0");
    let y1 = c.index_of("y1").expect("y1");
    let expected: Vec<(usize, Poly)> = vec![(x0 * n + y1, Poly::one())];
    let got: Vec<(usize, Poly)> = diff.clone().into_iter().collect();
    ensure(got == expected, || format!("difference {got:?}"))?;
    ensure(t.ambient.apply_d(&diff).is_empty(), || "difference is not closed".into())?;
    for fl in Flavor::ALL {
        ensure(distinguish(&t, &id, fl).map_err(err)?, || format!("{fl}: difference is a boundary"))?;
    }
    Ok("t' - t = x0 ⊗ y1*, closed, not a boundary in minus, circ, hat".into())
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for c in fixtures() {
        let mut family = vec![c.clone()];
        family.extend((0..20).map(|_| random_base_change(&c, &mut rng)));
        for d in family {
            let r = induced_action_rank(&d, Flavor::Minus, Action::Phi, &Window::around(&d, 4)).map_err(err)?;
            ensure(!r.is_empty() && r.values().all(|&x| x == 0), || format!("{}: Φ acts nontrivially", c.name))?;
            checked += 1;
        }
    }
    Ok(format!("Φ rank 0 on {checked} complexes (6 fixtures + 20 base changes each)"))
}

fn criterion_6() -> Check {
    let mut n = 0;
    for c in fixtures() {
        let m = PointedModel::knot(c.clone()).map_err(err)?;
        let w = window(&c);
        for k in 1..=2 {
            let q = m.quasi_stabilize_times(k);
            for f in Flavor::ALL {
                ensure(hf(&q, f, &w).map_err(err)? == hf(&m, f, &w).map_err(err)?, || format!("{} k={k} {f} hf", c.name))?;
                if f != Flavor::Hat {
                    ensure(hf_w(&q, f, &w).map_err(err)? == hf_w(&m, f, &w).map_err(err)?, || {
                        format!("{} k={k} {f} hf_w", c.name)
                    })?;
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} fixture/stabilization/flavor cases unchanged"))
}

fn criterion_7() -> Check {
    let w = Window::new(-8, 6, -8, 6).expect("nonempty");
    let mut n = 0;
    for c in [unknot(), figure_eight()] {
        let m = PointedModel::knot(c).map_err(err)?.quasi_stabilize_times(2);
        for k in 0..=3 {
            let sel: Vec<usize> = (0..k).collect();
            let t = twist_endomorphism(&m, &sel).map_err(err)?;
            for f in Flavor::ALL {
                ensure(t.is_identity_on_hf(&m, f, &w).map_err(err)?, || format!("{} k={k} {f}", m.complex.name))?;
                n += 1;
            }
        }
    }
    Ok(format!("twist = Id on HF in {n} cases (k = 0..3)"))
}

fn criterion_8() -> Check {
    let t = staircase_from_exponents(&[1, 0, -1]).map_err(err)?;
    let tt = t.tensor(&t);
    let dim = homology_table(&tt, Flavor::Hat, &Window::around(&tt, 2)).map_err(err)?.total();
    ensure(dim == 9, || format!("dim = {dim}"))?;
    Ok("dim Ĥ(T(2,3) ⊗ T(2,3)) = 9".into())
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_9() -> Check {
    let start = Instant::now();
    let frozen = [1usize, 3, 12, 55, 273];
    for (m, &want) in (2..=6).zip(&frozen) {
        let k = (m - 1) as u64;
        let fuss = (binomial(3 * k, k) / (2 * k + 1)) as usize;
        let count = quad_dissections(m).map_err(err)?.len();
        ensure(count == want && count == fuss, || format!("m={m}: {count} vs frozen {want}, Fuss–Catalan {fuss}"))?;
        ensure(quad_switch_graph(m).map_err(err)?.connected, || format!("m={m}: switch graph disconnected"))?;
    }
    let mut pairs = 0;
    let mut ancestors = Vec::new();
    for g in 0..=1 {
        for (p, q) in [(1, 1), (1, 2), (2, 1)] {
            let classes = enumerate_deperturbed(g, p, q).map_err(err)?;
            for a in &classes {
                for b in &classes {
                    let seq = connect_by_switches(a, b, SWITCH_BOUND).map_err(err)?;
                    ensure(iso(&seq.apply(a).map_err(err)?, b), || format!("({g},{p},{q}): replay missed"))?;
                    pairs += 1;
                }
            }
            ancestors.extend(classes);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for trial in 0..50 {
        let a = &ancestors[trial % ancestors.len()];
        let d1 = random_walk(a, 4 + trial % 5, &mut rng).pop().expect("nonempty");
        let d2 = random_walk(a, 3 + trial % 4, &mut rng).pop().expect("nonempty");
        let seq = connect_decorations(&d1, &d2, SWITCH_BOUND).map_err(err)?;
        let states = seq.replay(&d1).map_err(err)?;
        ensure(iso(states.last().unwrap_or(&d1), &d2), || format!("trial {trial}: replay missed"))?;
    }
    let t = start.elapsed();
    ensure(t < CRITERION_9_LIMIT, || format!("took {t:?}"))?;
    Ok(format!(
        "counts 1, 3, 12, 55, 273 connected; {pairs} switch pairs; 50 replays; {:.2} s < 60 s",
        t.as_secs_f64()
    ))
}

/// Random bracketed word with its `v` power counted by hand.
fn random_word(rng: &mut ChaCha8Rng, depth: u32, next: &mut u32) -> (Vec<T>, u32) {
    let mut w = Vec::new();
    let mut k = 0;
    for _ in 0..rng.gen_range(0..5) {
        match rng.gen_range(0..8) {
            0 => w.push(T::Merge),
            1 => {
                w.push(T::Split);
                k += 1;
            }
            2 => {
                w.push(T::PointShift);
                k += 1;
            }
            3 => w.push(T::Twist(rng.gen_range(0..4))),
            4 => w.push(T::Perturbation),
            5 => w.push(T::Deperturbation),
            _ if depth > 0 => {
                let id = format!("s{next}");
                *next += 1;
                let (inner, ik) = random_word(rng, depth - 1, next);
                w.push(T::Elementary(id.clone()));
                w.extend(inner);
                w.push(T::ReverseElementary(id));
                k += ik + 1;
            }
            _ => w.push(T::Merge),
        }
    }
    (w, k)
}

fn criterion_10() -> Check {
    let power = |s: &str| -> Result<u32, String> { Ok(evaluate_word(&parse_word(s).map_err(err)?).map_err(err)?.power) };
    ensure(power("split;merge")? == 1, || "split;merge".into())?;
    ensure(power("elementary;reverse")? == 1, || "elementary;reverse".into())?;
    for k in 0..=4 {
        ensure(power(&format!("twist {k}"))? == 0, || format!("twist {k}"))?;
    }
    let base = parse_word("merge;split").map_err(err)?;
    let mut with = base.clone();
    with.push(T::Compression);
    let c = compression_compare(&with, &base).map_err(err)?;
    ensure(c.holds && c.with_s.power == c.with_s_d.power + 1, || format!("compression {c:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut id = 0;
    for _ in 0..50 {
        let (a, ka) = random_word(&mut rng, 2, &mut id);
        let (b, kb) = random_word(&mut rng, 2, &mut id);
        let ab: Vec<T> = a.iter().chain(&b).cloned().collect();
        let s = evaluate_word(&ab).map_err(err)?;
        ensure(s.power == ka + kb, || format!("{ab:?}: v^{} vs v^{}", s.power, ka + kb))?;
        ensure(s.hat_zero() == (s.power > 0), || format!("{ab:?}: hat note"))?;
    }
    Ok("split;merge = v, elementary;reverse = v, twist = v^0, compression adds v, 50 concatenations".into())
}

fn criterion_11() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let check = |c: &Complex| -> Result<(), String> {
        let r = c.validate();
        ensure(r.d_squared_ok() && r.homogeneous(), || format!("{}: {r:?}", c.name))
    };
    let mut built = fixtures();
    built.extend(TORI.iter().map(|&(p, q)| torus_knot(p, q).expect("torus knot")));
    for c in &built {
        check(c)?;
        check(&c.dual())?;
        check(&c.quasi_stabilize().complex)?;
    }
    for _ in 0..100 {
        let n = rng.gen_range(0..4);
        let c = staircase_from_exponents(&random_exponents(&mut rng, n)).map_err(err)?;
        check(&c)?;
        let other = built.choose(&mut rng).expect("fixtures");
        let t = c.tensor(other);
        check(&t)?;
        check(&random_base_change(&t, &mut rng))?;
        check(&t.dual().quasi_stabilize().complex)?;
    }
    let mut seeds = Vec::new();
    for (g, p, q) in [(0, 1, 1), (0, 2, 1), (1, 1, 1), (1, 1, 2), (1, 2, 2)] {
        seeds.extend(enumerate_deperturbed(g, p, q).map_err(err)?);
    }
    let mut states = 0;
    for trial in 0..100 {
        let start = &seeds[trial % seeds.len()];
        let genus = start.validate().map_err(err)?;
        for s in random_walk(start, 6, &mut rng) {
            let g = s.validate().map_err(err)?;
            ensure(g == genus, || format!("walk {trial}: genus {genus} became {g}"))?;
            states += 1;
        }
    }
    Ok(format!("{} fixture constructions, 400 random complexes, {states} move outputs valid", 3 * built.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("torus-knot closed forms", criterion_1),
        ("figure-eight groups", criterion_2),
        ("dual-complex listing", criterion_3),
        ("slice-disk distinction", criterion_4),
        ("Φ triviality", criterion_5),
        ("quasi-stabilization invariance", criterion_6),
        ("twist invariance", criterion_7),
        ("Künneth hat product", criterion_8),
        ("decoration moves", criterion_9),
        ("cobordism scalar rules", criterion_10),
        ("validation suite", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
