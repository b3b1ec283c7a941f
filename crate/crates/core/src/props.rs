//! Randomized and exhaustive checks of the rewriting engine: confluence of
//! the two reduction strategies, the involution laws, and y·z = q² z·y.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::Result;
use crate::ncpoly::{Algebra, Gen, GenClass, NCPoly, Strategy, Word, STEP_BOUND};
use crate::polmat::{pol_algebra, star, y_element};
use crate::qmatrix::matrix_algebra;
use crate::report::Report;
use crate::scalar::VScalar;

/// Fixed seed so that reports are reproducible.
pub const DEFAULT_SEED: u64 = 0x5eed_0ba1;

pub fn random_word(rng: &mut StdRng, alg: &Algebra, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let count = alg.generators().len() as Gen;
    (0..len).map(|_| rng.gen_range(0..count)).collect()
}

/// A small random polynomial: normalized random words with ±q^k coefficients.
pub fn random_poly(rng: &mut StdRng, alg: &Algebra, terms: usize, max_len: usize) -> NCPoly {
    let mut p = NCPoly::zero();
    for _ in 0..terms {
        let w = random_word(rng, alg, max_len);
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let c = &VScalar::from_int(sign) * &VScalar::q_pow(rng.gen_range(-2..=2));
        p += &alg.normalize(&w, c);
    }
    p
}

/// The algebras fuzzed for a given n: Pol(Mat_n)_q, C[Mat_n]_q,
/// C[Mat_{n,2n}]_q and C[Mat_{2n}]_q.
pub fn fuzz_algebras(n: u8) -> Vec<Algebra> {
    vec![
        pol_algebra(n, GenClass::Z),
        matrix_algebra(GenClass::Z, n, n),
        matrix_algebra(GenClass::T, n, 2 * n),
        matrix_algebra(GenClass::T, 2 * n, 2 * n),
    ]
}

/// Leftmost, rightmost and memoized normal forms agree on random words.
pub fn confluence_residuals(alg: &Algebra, words: usize, max_len: usize, seed: u64) -> Result<Vec<String>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut res = Vec::new();
    for _ in 0..words {
        let w = random_word(&mut rng, alg, max_len);
        let l = alg.normalize_with(&w, VScalar::one(), Strategy::Leftmost, STEP_BOUND)?;
        let r = alg.normalize_with(&w, VScalar::one(), Strategy::Rightmost, STEP_BOUND)?;
        let m = alg.normalize(&w, VScalar::one());
        if l != r || l != m {
            res.push(format!("{}: {} strategies disagree", alg.name(), alg.render_word(&w)));
        }
    }
    Ok(res)
}

pub fn confluence_check(n: u8, words: usize, seed: u64) -> Report {
    const SUITE: &str = "confluence";
    Report::timed(|| {
        let run = || -> Result<Vec<String>> {
            let mut res = Vec::new();
            for (k, alg) in fuzz_algebras(n).iter().enumerate() {
                res.extend(confluence_residuals(alg, words, 8, seed.wrapping_add(k as u64))?);
            }
            Ok(res)
        };
        match run() {
            Ok(res) => Report::from_residuals(SUITE, n as u32, 0, res, false)
                .with_note(format!("{words} words of length ≤ 8 per algebra, seed {seed:#x}")),
            Err(e) => Report::error(SUITE, n as u32, 0, e),
        }
    })
}

/// star(star(f)) = f and star(fg) = star(g)star(f) on random pairs in Pol(Mat_n)_q.
pub fn star_residuals(n: u8, pairs: usize, seed: u64) -> Vec<String> {
    let alg = pol_algebra(n, GenClass::Z);
    let mut rng = StdRng::seed_from_u64(seed);
    let mut res = Vec::new();
    for i in 0..pairs {
        let f = random_poly(&mut rng, &alg, 3, 3);
        let g = random_poly(&mut rng, &alg, 3, 3);
        if star(&alg, &star(&alg, &f)) != f {
            res.push(format!("pair {i}: star is not involutive on {}", alg.render(&f)));
        }
        let lhs = star(&alg, &alg.mul(&f, &g));
        let rhs = alg.mul(&star(&alg, &g), &star(&alg, &f));
        if lhs != rhs {
            res.push(format!("pair {i}: star(fg) != star(g)star(f) for f = {}, g = {}", alg.render(&f), alg.render(&g)));
        }
    }
    res
}

/// y·z = q² z·y and y·z* = q^{-2} z*·y for every generator.
pub fn y_commutation_residuals(n: u8) -> Vec<String> {
    let alg = pol_algebra(n, GenClass::Z);
    let y = y_element(&alg, GenClass::Z, n);
    let mut res = Vec::new();
    for &id in alg.generators() {
        let g = alg.generator(id).expect("own generator");
        let k = if id.class == GenClass::Z { 2 } else { -2 };
        let d = &alg.mul(&y, &g) - &alg.mul(&g, &y).scale(&VScalar::q_pow(k));
        if !d.is_zero() {
            res.push(format!("y·{id}: {}", alg.render(&d)));
        }
    }
    res
}

pub fn star_check(n: u8, pairs: usize, seed: u64) -> Report {
    Report::timed(|| {
        let mut res = star_residuals(n, pairs, seed);
        res.extend(y_commutation_residuals(n));
        Report::from_residuals("star", n as u32, 0, res, false).with_note(format!("{pairs} random pairs, seed {seed:#x}"))
    })
}
