//! The Shilov boundary algebra: linear reduction on the span {1, ζζ*}, the
//! one-variable Laurent model for n = 1 with its invariant integral, and the
//! Poisson integral for n = 1.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::kernel::{Kernel, KernelAlgebra};
use crate::linalg;
use crate::ncpoly::{Algebra, GenClass, GeneratorId, NCPoly, Word};
use crate::polmat::{GLn, TruncatedSeries};
use crate::report::Report;
use crate::scalar::VScalar;

/// Canonical elimination on the span {1} ∪ {ζ_a^α (ζ_b^β)*}: each rule
/// rewrites one pivot word through non-pivot words and constants.
pub struct ShilovReducer {
    pub n: u8,
    rules: BTreeMap<Word, NCPoly>,
}

fn zeta(a: u8, al: u8) -> GeneratorId {
    GeneratorId::new(GenClass::Zeta, a, al)
}
fn zetas(a: u8, al: u8) -> GeneratorId {
    GeneratorId::new(GenClass::ZetaStar, a, al)
}

impl ShilovReducer {
    /// The n² defining relations Σ_j q^{2n−α−β} ζ_j^α(ζ_j^β)* = δ^{αβ}, each
    /// solved for its j = n term.
    pub fn from_defining_relations(alg: &Algebra, n: u8) -> Result<Self> {
        let mut rules = BTreeMap::new();
        for al in 1..=n {
            for be in 1..=n {
                let pivot = alg.word(&[zeta(n, al), zetas(n, be)])?;
                let mut rhs = NCPoly::zero();
                if al == be {
                    rhs.add_term(Word::new(), VScalar::q_pow(al as i32 + be as i32 - 2 * n as i32));
                }
                for j in 1..n {
                    rhs.add_term(alg.word(&[zeta(j, al), zetas(j, be)])?, VScalar::from_int(-1));
                }
                rules.insert(pivot, rhs);
            }
        }
        Ok(ShilovReducer { n, rules })
    }

    /// Every linear relation among {1, ζ_a^α(ζ_b^β)*} that holds in the
    /// model C[GL_n]_q with ζ ↦ z and ζ* ↦ the involution of z. Pivots are
    /// chosen among ζ_n ζ_n* words first, so the defining eliminations are
    /// reproduced and extended.
    pub fn complete(alg: &Algebra, n: u8) -> Result<Self> {
        let gl = GLn::new(n)?;
        // columns: ζ_n ζ_n* words, the remaining ζζ* words in descending order, then 1
        let mut pairs: Vec<(u8, u8, u8, u8)> = Vec::new();
        for a in 1..=n {
            for al in 1..=n {
                for b in 1..=n {
                    for be in 1..=n {
                        pairs.push((a, al, b, be));
                    }
                }
            }
        }
        pairs.sort_by_key(|&(a, al, b, be)| (!(a == n && b == n), std::cmp::Reverse((a, al, b, be))));
        let mut images: Vec<NCPoly> = Vec::new();
        for &(a, al, b, be) in &pairs {
            let x = gl.mul(&gl.generator(a, al)?, &gl.star_generator(b, be)?);
            images.push(over_det(&gl, x)?);
        }
        images.push(gl.det.clone());
        let mut rows: BTreeMap<Word, usize> = BTreeMap::new();
        for p in &images {
            for (w, _) in p.terms() {
                let next = rows.len();
                rows.entry(w.clone()).or_insert(next);
            }
        }
        let cols = images.len();
        let mut m = vec![vec![VScalar::zero(); cols]; rows.len()];
        for (c, p) in images.iter().enumerate() {
            for (w, x) in p.terms() {
                m[rows[w]][c] = x.clone();
            }
        }
        let mut rel = linalg::nullspace(&m, cols);
        let pivots = linalg::rref(&mut rel);
        let mut rules = BTreeMap::new();
        for (r, &pc) in pivots.iter().enumerate() {
            if pc == cols - 1 {
                return Err(Error::UnsupportedSpan("relation forces 1 = 0".into()));
            }
            let (a, al, b, be) = pairs[pc];
            let pivot = alg.word(&[zeta(a, al), zetas(b, be)])?;
            let mut rhs = NCPoly::zero();
            for c in pc + 1..cols {
                let x = &rel[r][c];
                if x.is_zero() {
                    continue;
                }
                let w = if c == cols - 1 {
                    Word::new()
                } else {
                    let (a, al, b, be) = pairs[c];
                    alg.word(&[zeta(a, al), zetas(b, be)])?
                };
                rhs.add_term(w, -x);
            }
            rules.insert(pivot, rhs);
        }
        Ok(ShilovReducer { n, rules })
    }

    pub fn relation_count(&self) -> usize {
        self.rules.len()
    }

    /// Canonical representative; errors outside the supported span.
    pub fn reduce(&self, alg: &Algebra, p: &NCPoly) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            let supported = w.is_empty()
                || (w.len() == 2
                    && alg.id(w[0]).class == GenClass::Zeta
                    && alg.id(w[1]).class == GenClass::ZetaStar);
            if !supported {
                return Err(Error::UnsupportedSpan(alg.render_word(w)));
            }
            match self.rules.get(w) {
                Some(rhs) => out.add_assign_scaled(rhs, c),
                None => out.add_term(w.clone(), c.clone()),
            }
        }
        Ok(out)
    }
}

/// Numerator of x over a single power of d.
fn over_det(gl: &GLn, x: crate::polmat::GLnElement) -> Result<NCPoly> {
    match x.dinv {
        0 => Ok(gl.alg.mul(&x.poly, &gl.det)),
        1 => Ok(x.poly),
        _ => Err(Error::NotDivisible),
    }
}

/// Laurent polynomials in a unitary ζ (ζ* = ζ^{-1}), the n = 1 boundary.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct N1Boundary {
    coeffs: BTreeMap<i32, VScalar>,
}

impl N1Boundary {
    pub fn monomial(k: i32, c: VScalar) -> Self {
        let mut b = N1Boundary::default();
        b.add(k, c);
        b
    }

    pub fn one() -> Self {
        Self::monomial(0, VScalar::one())
    }

    pub fn add(&mut self, k: i32, c: VScalar) {
        let e = self.coeffs.entry(k).or_default();
        *e += &c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: i32) -> VScalar {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i32, &VScalar)> {
        self.coeffs.iter()
    }

    pub fn mul(&self, other: &N1Boundary) -> N1Boundary {
        let mut out = N1Boundary::default();
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                out.add(a + b, x * y);
            }
        }
        out
    }

    /// Image of a Wick polynomial in ζ, ζ* (n = 1): ζ^j ζ*^k ↦ ζ^{j−k}.
    pub fn from_pol(alg: &Algebra, p: &NCPoly) -> Result<Self> {
        let mut out = N1Boundary::default();
        for (w, c) in p.terms() {
            let mut e = 0;
            for &g in w.iter() {
                let id = alg.id(g);
                if (id.i, id.j) != (1, 1) {
                    return Err(Error::IndexOutOfRange(id.to_string()));
                }
                e += match id.class {
                    GenClass::Zeta => 1,
                    GenClass::ZetaStar => -1,
                    _ => return Err(Error::UnknownGenerator(id.to_string())),
                };
            }
            out.add(e, c.clone());
        }
        Ok(out)
    }
}

/// The invariant integral for n = 1: the constant term.
pub fn nu_n1(p: &N1Boundary) -> VScalar {
    p.coeff(0)
}

/// (id ⊗ ν)(P·(1 ⊗ f)) for n = 1, as a series in z, z*.
pub fn poisson_integral_n1(ka: &KernelAlgebra, p: &Kernel, f: &N1Boundary) -> Result<TruncatedSeries> {
    if ka.n != 1 {
        return Err(Error::IndexOutOfRange(format!("n = {} in the n = 1 model", ka.n)));
    }
    let shifted = ka.eta_shift(p)?;
    let mut u = NCPoly::zero();
    for (pw, fw, gw, c) in shifted.terms() {
        if pw[0] != 0 || pw[1] != 0 {
            return Err(Error::UnbalancedPowers(pw[0], pw[1]));
        }
        let g = N1Boundary::from_pol(&ka.second, &NCPoly::monomial(gw.clone(), VScalar::one()))?;
        let val = nu_n1(&g.mul(f));
        u.add_term(fw.clone(), c * &val);
    }
    let mut s = TruncatedSeries::from_poly(&ka.first, &u, p.cutoff);
    s.truncated |= p.truncated;
    Ok(s)
}

/// Σ_{k≤D} z^k (1 − z z*) z*^k in Pol(Mat_1)_q.
pub fn telescoping_sum(alg: &Algebra, cutoff: u32) -> Result<NCPoly> {
    let z = alg.generator(GeneratorId::new(GenClass::Z, 1, 1))?;
    let zs = alg.generator(GeneratorId::new(GenClass::ZStar, 1, 1))?;
    let y = &NCPoly::one() - &alg.mul(&z, &zs);
    let mut out = NCPoly::zero();
    for k in 0..=cutoff {
        out += &alg.mul_all([&alg.pow(&z, k), &y, &alg.pow(&zs, k)]);
    }
    Ok(out)
}

/// The n = 1 closed form (1 − z*⊗ζ)^{-1} · (1 − z z*) · (1 − z⊗ζ*)^{-1},
/// built from independent kernel products.
pub fn n1_closed_form(ka: &KernelAlgebra, cutoff: u32) -> Result<Kernel> {
    let g = |c, i| GeneratorId::new(c, 1, i);
    let one = NCPoly::one();
    let z = ka.first.generator(g(GenClass::Z, 1))?;
    let zs = ka.first.generator(g(GenClass::ZStar, 1))?;
    let ze = ka.second.generator(g(GenClass::Zeta, 1))?;
    let zes = ka.second.generator(g(GenClass::ZetaStar, 1))?;
    let unit = ka.unit(cutoff);
    let left = unit.sub(&ka.kernel(cutoff, [0; 4], &zs, &ze))?;
    let right = unit.sub(&ka.kernel(cutoff, [0; 4], &z, &zes))?;
    let zz = ka.kmul(&ka.kernel(cutoff, [0; 4], &zs, &one), &ka.kernel(cutoff, [0; 4], &z, &one))?;
    let mid = unit.sub(&zz)?;
    ka.kmul(&ka.kmul(&ka.kinverse(&left, 1)?, &mid)?, &ka.kinverse(&right, 1)?)
}

/// P(ζ^m) for n = 1 as a polynomial: z^m, or z*^{|m|} when m < 0.
fn n1_expected_integral(alg: &Algebra, m: i32) -> Result<NCPoly> {
    let class = if m >= 0 { GenClass::Z } else { GenClass::ZStar };
    Ok(alg.pow(&alg.generator(GeneratorId::new(class, 1, 1))?, m.unsigned_abs()))
}

/// The Poisson kernel suite. For n = 1: P against the closed form, the
/// integrals of ζ^m for |m| ≤ 2 (m = 0 is P(1) = 1), and the truncated
/// telescoping identity. For n ≥ 2: p_00 = 1⊗1 and balanced τ-powers.
pub fn poisson_check(n: u8, cutoff: u32) -> Report {
    const SUITE: &str = "poisson";
    if cutoff < 1 {
        return Report::skipped(SUITE, n as u32, cutoff, "cutoff too small");
    }
    Report::timed(|| {
        let run = || -> Result<Report> {
            let ka = KernelAlgebra::new(n);
            let p = ka.poisson_kernel(cutoff)?;
            let mut res = Vec::new();
            if !ka.p_component(&p, 0, 0)?.same_terms(&ka.unit(cutoff)) {
                res.push("p00 differs from 1⊗1".to_string());
            }
            ka.eta_shift(&p)?;
            if n == 1 {
                let closed = n1_closed_form(&ka, cutoff)?;
                let d = p.sub(&closed)?;
                if !d.is_zero() {
                    res.extend(ka.residual_lines(&d, 8).into_iter().map(|l| format!("P - closed form: {l}")));
                }
                for m in -2..=2 {
                    let u = poisson_integral_n1(&ka, &p, &N1Boundary::monomial(m, VScalar::one()))?;
                    let want = n1_expected_integral(&ka.first, m)?;
                    let d = &u.to_poly() - &want;
                    if !d.is_zero() {
                        res.push(format!("P(zeta^{m}) - expected = {}", ka.first.render(&d)));
                    }
                }
                let t = telescoping_sum(&ka.first, cutoff)?;
                let low = t.filter(|w| {
                    let (a, b) = ka.first.bidegree(w);
                    a <= cutoff || b <= cutoff
                });
                if low != NCPoly::one() {
                    res.push(format!("telescoping sum below cutoff = {}", ka.first.render(&low)));
                }
            }
            let r = Report::from_residuals(SUITE, n as u32, cutoff, res, p.truncated);
            Ok(if n == 1 { r } else { r.with_note("boundary integral checks are n = 1 only") })
        };
        run().unwrap_or_else(|e| Report::error(SUITE, n as u32, cutoff, e))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polmat::pol_algebra;

    #[test]
    fn defining_relation_reduces_to_delta() {
        let alg = pol_algebra(2, GenClass::Zeta);
        let r = ShilovReducer::from_defining_relations(&alg, 2).unwrap();
        for al in 1..=2u8 {
            for be in 1..=2u8 {
                let mut p = NCPoly::zero();
                for c in 1..=2 {
                    let w = alg.word(&[zeta(c, al), zetas(c, be)]).unwrap();
                    p.add_term(w, VScalar::q_pow(4 - al as i32 - be as i32));
                }
                let expect = if al == be { NCPoly::one() } else { NCPoly::zero() };
                assert_eq!(r.reduce(&alg, &p).unwrap(), expect);
            }
        }
        let w = alg.normalize_ids(&[zeta(1, 1), zetas(2, 2)], VScalar::one()).unwrap();
        assert_eq!(r.reduce(&alg, &w).unwrap(), w);
        let bad = alg.normalize_ids(&[zeta(1, 1)], VScalar::one()).unwrap();
        assert!(matches!(r.reduce(&alg, &bad), Err(Error::UnsupportedSpan(_))));
    }

    #[test]
    fn unitarity_n1() {
        let alg = pol_algebra(1, GenClass::Zeta);
        let r = ShilovReducer::from_defining_relations(&alg, 1).unwrap();
        let p = alg.normalize_ids(&[zeta(1, 1), zetas(1, 1)], VScalar::one()).unwrap();
        assert_eq!(r.reduce(&alg, &p).unwrap(), NCPoly::one());
        // the quotient and Laurent models agree on {1, ζζ*, ζ*ζ}
        let p2 = alg.normalize_ids(&[zetas(1, 1), zeta(1, 1)], VScalar::one()).unwrap();
        assert_eq!(r.reduce(&alg, &p2).unwrap(), NCPoly::one());
        assert_eq!(N1Boundary::from_pol(&alg, &p).unwrap(), N1Boundary::one());
    }

    #[test]
    fn complete_contains_defining_and_column_relations() {
        let alg = pol_algebra(2, GenClass::Zeta);
        let r = ShilovReducer::complete(&alg, 2).unwrap();
        assert_eq!(r.relation_count(), 7);
        let def = ShilovReducer::from_defining_relations(&alg, 2).unwrap();
        for (pivot, rhs) in &def.rules {
            let mut rel = NCPoly::monomial(pivot.clone(), VScalar::one());
            rel -= rhs;
            assert!(r.reduce(&alg, &rel).unwrap().is_zero());
        }
        // Σ_γ ζ_b^γ (ζ_a^γ)* = q^{2b−2n} δ_ab
        for a in 1..=2u8 {
            for b in 1..=2u8 {
                let mut p = NCPoly::zero();
                for g in 1..=2 {
                    p.add_term(alg.word(&[zeta(b, g), zetas(a, g)]).unwrap(), VScalar::one());
                }
                if a == b {
                    p.add_term(Word::new(), -VScalar::q_pow(2 * b as i32 - 4));
                }
                assert!(r.reduce(&alg, &p).unwrap().is_zero(), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn integral_n1() {
        assert_eq!(nu_n1(&N1Boundary::one()), VScalar::one());
        assert!(nu_n1(&N1Boundary::monomial(3, VScalar::one())).is_zero());
        let alg = pol_algebra(1, GenClass::Zeta);
        let p = alg.normalize_ids(&[zeta(1, 1), zeta(1, 1), zetas(1, 1), zetas(1, 1)], VScalar::one()).unwrap();
        assert_eq!(nu_n1(&N1Boundary::from_pol(&alg, &p).unwrap()), VScalar::one());
        let f = N1Boundary::monomial(2, VScalar::q_pow(1));
        assert_eq!(nu_n1(&f.mul(&N1Boundary::monomial(-2, VScalar::one()))), VScalar::q_pow(1));
    }

    #[test]
    fn telescoping_leaves_only_the_top_term() {
        let alg = pol_algebra(1, GenClass::Z);
        let t = telescoping_sum(&alg, 3).unwrap();
        let z = GeneratorId::new(GenClass::Z, 1, 1);
        let mut ids = vec![z; 4];
        ids.extend([z.star(); 4]);
        let top = alg.normalize_ids(&ids, VScalar::from_int(-1)).unwrap();
        assert_eq!(t, &NCPoly::one() + &top);
    }

    #[test]
    fn poisson_suite_n1() {
        let r = poisson_check(1, 3);
        assert!(r.passed(), "{:?}", r);
        assert!(r.truncated);
    }
}
