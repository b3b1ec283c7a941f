//! The *-algebra Pol(Mat_n)_q in Wick order, the element y, bigraded
//! truncated series, and the involution of C[GL_n]_q.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg;
use crate::ncpoly::{frt_rule, Algebra, GenClass, GeneratorId, NCPoly, Word};
use crate::qmatrix::{matrix_algebra, qdet, qminor, IndexSet};
use crate::report::Report;
use crate::scalar::VScalar;

/// R(b, a, b′, a′) of the cross relation.
fn r_coeff(b: u8, a: u8, b2: u8, a2: u8) -> VScalar {
    if a != b && b == b2 && a == a2 {
        VScalar::q_pow(-1)
    } else if a == b && a2 == b2 && a2 == a {
        VScalar::one()
    } else if a == b && a2 == b2 && a2 > a {
        &VScalar::one() - &VScalar::q_pow(-2)
    } else {
        VScalar::zero()
    }
}

/// Pol(Mat_n)_q on `holo` (Z or Zeta) and its starred class. All
/// holomorphic generators precede all starred ones, so canonical words are
/// Wick ordered.
pub fn pol_algebra(n: u8, holo: GenClass) -> Algebra {
    let star = holo.star();
    assert!(!holo.is_star() && star.is_star(), "pol_algebra takes a holomorphic class");
    let mut gens = Vec::new();
    for c in [holo, star] {
        for a in 1..=n {
            for al in 1..=n {
                gens.push(GeneratorId::new(c, a, al));
            }
        }
    }
    let q2 = VScalar::q_pow(2);
    let qq = &VScalar::q_pow(1) - &VScalar::q_pow(-1);
    Algebra::new(format!("Pol{}-{}", n, holo.prefix()), gens, move |g, h| {
        match (g.class.is_star(), h.class.is_star()) {
            (false, false) => frt_rule(holo, (g.i, g.j), (h.i, h.j)),
            (true, true) => {
                // star images of the holomorphic relations, solved for the descending pair
                let (b, beta, a, alpha) = (g.i, g.j, h.i, h.j);
                let sw = vec![h, g];
                if a == b || alpha == beta {
                    vec![(VScalar::q_pow(1), sw)]
                } else if alpha > beta {
                    vec![(VScalar::one(), sw)]
                } else {
                    let x = |i, j| GeneratorId::new(star, i, j);
                    vec![(VScalar::one(), sw), (qq.clone(), vec![x(b, alpha), x(a, beta)])]
                }
            }
            (true, false) => {
                // (z_b^β)* z_a^α
                let (b, beta, a, alpha) = (g.i, g.j, h.i, h.j);
                let mut rhs = Vec::new();
                for b2 in 1..=n {
                    for a2 in 1..=n {
                        let r1 = r_coeff(b, a, b2, a2);
                        if r1.is_zero() {
                            continue;
                        }
                        for be2 in 1..=n {
                            for al2 in 1..=n {
                                let r2 = r_coeff(beta, alpha, be2, al2);
                                if r2.is_zero() {
                                    continue;
                                }
                                rhs.push((
                                    &(&q2 * &r1) * &r2,
                                    vec![GeneratorId::new(holo, a2, al2), GeneratorId::new(star, b2, be2)],
                                ));
                            }
                        }
                    }
                }
                if a == b && alpha == beta {
                    rhs.push((&VScalar::one() - &q2, vec![]));
                }
                rhs
            }
            (false, true) => unreachable!("holomorphic generators precede starred ones"),
        }
    })
}

/// Wick normal form of a word in z and z*.
pub fn wick_normalize(alg: &Algebra, ids: &[GeneratorId]) -> Result<NCPoly> {
    alg.normalize_ids(ids, VScalar::one())
}

/// The antilinear antihomomorphism z ↦ z*. Scalars in ℚ(v) are fixed.
pub fn star(alg: &Algebra, p: &NCPoly) -> NCPoly {
    let mut out = NCPoly::zero();
    for (w, c) in p.terms() {
        let ids: Vec<GeneratorId> = w.iter().rev().map(|&g| alg.id(g).star()).collect();
        out += &alg.normalize_ids(&ids, c.clone()).expect("star of a generator lies in the same algebra");
    }
    out
}

/// Quantum minor of z with lower indices `lower` and upper indices `upper`.
pub fn zminor(alg: &Algebra, holo: GenClass, lower: &IndexSet, upper: &IndexSet) -> Result<NCPoly> {
    qminor(alg, holo, lower, upper)
}

/// y = 1 + Σ_k (−1)^k Σ_{J′,J″} z^{∧k}(z^{∧k})*, the image of x^{-1}.
pub fn y_element(alg: &Algebra, holo: GenClass, n: u8) -> NCPoly {
    let mut y = NCPoly::one();
    for k in 1..=n as usize {
        let sign = VScalar::from_int(if k % 2 == 1 { -1 } else { 1 });
        for lower in IndexSet::subsets(n, k) {
            for upper in IndexSet::subsets(n, k) {
                let m = zminor(alg, holo, &lower, &upper).expect("square minor");
                y.add_assign_scaled(&alg.mul(&m, &star(alg, &m)), &sign);
            }
        }
    }
    y
}

/// Bidegree (z-count, z*-count) of every term.
pub fn bigrade(alg: &Algebra, p: &NCPoly) -> BTreeMap<(u32, u32), NCPoly> {
    let mut out: BTreeMap<(u32, u32), NCPoly> = BTreeMap::new();
    for (w, c) in p.terms() {
        out.entry(alg.bidegree(w)).or_default().add_term(w.clone(), c.clone());
    }
    out
}

/// A bigraded element truncated at bidegree (D, D).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub cutoff: u32,
    components: BTreeMap<(u32, u32), NCPoly>,
    pub truncated: bool,
}

impl TruncatedSeries {
    pub fn zero(cutoff: u32) -> Self {
        TruncatedSeries { cutoff, components: BTreeMap::new(), truncated: false }
    }

    /// Splits `p` by bidegree, dropping (and flagging) terms beyond the cutoff.
    pub fn from_poly(alg: &Algebra, p: &NCPoly, cutoff: u32) -> Self {
        let mut s = TruncatedSeries::zero(cutoff);
        for ((j, k), c) in bigrade(alg, p) {
            if j > cutoff || k > cutoff {
                s.truncated = true;
            } else {
                s.components.insert((j, k), c);
            }
        }
        s
    }

    pub fn bicomponent(&self, j: u32, k: u32) -> Result<NCPoly> {
        if j > self.cutoff || k > self.cutoff {
            return Err(Error::BeyondCutoff(j, k, self.cutoff));
        }
        Ok(self.components.get(&(j, k)).cloned().unwrap_or_default())
    }

    pub fn components(&self) -> impl Iterator<Item = (&(u32, u32), &NCPoly)> {
        self.components.iter()
    }

    /// Sum of all retained components.
    pub fn to_poly(&self) -> NCPoly {
        let mut out = NCPoly::zero();
        for c in self.components.values() {
            out += c;
        }
        out
    }
}

/// An element d^{-k}·p of C[GL_n]_q with p a polynomial in z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GLnElement {
    pub poly: NCPoly,
    pub dinv: u32,
}

/// C[GL_n]_q = C[Mat_n]_q[d^{-1}], d = det_q z, with its involution.
pub struct GLn {
    pub n: u8,
    pub alg: Algebra,
    pub det: NCPoly,
    /// (d^{-1})* as an element of C[GL_n]_q.
    dinv_star: GLnElement,
}

impl GLn {
    pub fn new(n: u8) -> Result<Self> {
        let alg = matrix_algebra(GenClass::Z, n, n);
        let det = qdet(&alg, GenClass::Z, n)?;
        let mut g = GLn { n, alg, det, dinv_star: GLnElement { poly: NCPoly::one(), dinv: 0 } };
        // d* = c·d^{-1} is expected; then (d^{-1})* = c^{-1}·d
        let dstar = g.star_poly(&g.det.clone())?;
        if dstar.dinv != 1 || dstar.poly.len() != 1 || !dstar.poly.terms().next().unwrap().0.is_empty() {
            return Err(Error::NotDivisible);
        }
        let c = dstar.poly.constant();
        g.dinv_star = GLnElement { poly: g.det.scale(&c.inv()), dinv: 0 };
        Ok(g)
    }

    pub fn element(&self, poly: NCPoly) -> GLnElement {
        GLnElement { poly, dinv: 0 }
    }

    pub fn generator(&self, a: u8, alpha: u8) -> Result<GLnElement> {
        Ok(self.element(self.alg.generator(GeneratorId::new(GenClass::Z, a, alpha))?))
    }

    pub fn mul(&self, x: &GLnElement, y: &GLnElement) -> GLnElement {
        self.reduce(GLnElement { poly: self.alg.mul(&x.poly, &y.poly), dinv: x.dinv + y.dinv })
    }

    pub fn add(&self, x: &GLnElement, y: &GLnElement) -> GLnElement {
        let (lo, hi) = if x.dinv <= y.dinv { (x, y) } else { (y, x) };
        let lifted = self.alg.mul(&lo.poly, &self.alg.pow(&self.det, hi.dinv - lo.dinv));
        self.reduce(GLnElement { poly: &lifted + &hi.poly, dinv: hi.dinv })
    }

    pub fn scale(&self, x: &GLnElement, c: &VScalar) -> GLnElement {
        self.reduce(GLnElement { poly: x.poly.scale(c), dinv: x.dinv })
    }

    pub fn is_zero(&self, x: &GLnElement) -> bool {
        x.poly.is_zero()
    }

    /// Cancels powers of d while the polynomial part is divisible by d.
    pub fn reduce(&self, mut x: GLnElement) -> GLnElement {
        if x.poly.is_zero() {
            return GLnElement { poly: x.poly, dinv: 0 };
        }
        while x.dinv > 0 {
            match self.divide_by_det(&x.poly) {
                Some(p) => {
                    x.poly = p;
                    x.dinv -= 1;
                }
                None => break,
            }
        }
        x
    }

    /// Exact quotient p / d, found by a graded linear solve.
    pub fn divide_by_det(&self, p: &NCPoly) -> Option<NCPoly> {
        let n = self.n as usize;
        let mut by_degree: BTreeMap<usize, NCPoly> = BTreeMap::new();
        for (w, c) in p.terms() {
            by_degree.entry(w.len()).or_default().add_term(w.clone(), c.clone());
        }
        let mut quotient = NCPoly::zero();
        for (deg, part) in by_degree {
            if deg < n {
                return None;
            }
            let candidates = monomials(self.alg.generators().len(), deg - n);
            let products: Vec<NCPoly> = candidates
                .iter()
                .map(|w| self.alg.mul(&self.det, &NCPoly::monomial(w.clone(), VScalar::one())))
                .collect();
            let mut rows: BTreeMap<Word, usize> = BTreeMap::new();
            for w in products.iter().flat_map(|p| p.terms().map(|(w, _)| w.clone())).chain(part.terms().map(|(w, _)| w.clone())) {
                let next = rows.len();
                rows.entry(w).or_insert(next);
            }
            let mut a = vec![vec![VScalar::zero(); candidates.len()]; rows.len()];
            for (col, prod) in products.iter().enumerate() {
                for (w, c) in prod.terms() {
                    a[rows[w]][col] = c.clone();
                }
            }
            let mut b = vec![VScalar::zero(); rows.len()];
            for (w, c) in part.terms() {
                b[rows[w]] = c.clone();
            }
            let x = linalg::solve(&a, &b)?;
            for (w, c) in candidates.into_iter().zip(x) {
                quotient.add_term(w, c);
            }
        }
        Some(quotient)
    }

    /// (z_a^α)* = (−q)^{a+α−2n} d^{-1} · (minor with first index a and second index α removed).
    pub fn star_generator(&self, a: u8, alpha: u8) -> Result<GLnElement> {
        let n = self.n;
        let rows = IndexSet::range(1, n).without(a);
        let cols = IndexSet::range(1, n).without(alpha);
        let m = qminor(&self.alg, GenClass::Z, &rows, &cols)?;
        let c = VScalar::minus_q_pow(a as i32 + alpha as i32 - 2 * n as i32);
        Ok(self.reduce(GLnElement { poly: m.scale(&c), dinv: 1 }))
    }

    fn star_poly(&self, p: &NCPoly) -> Result<GLnElement> {
        let mut out = GLnElement { poly: NCPoly::zero(), dinv: 0 };
        for (w, c) in p.terms() {
            let mut acc = self.element(NCPoly::one());
            for &g in w.iter().rev() {
                let id = self.alg.id(g);
                acc = self.mul(&acc, &self.star_generator(id.i, id.j)?);
            }
            out = self.add(&out, &self.scale(&acc, c));
        }
        Ok(out)
    }

    /// The involution, extended antimultiplicatively (d^{-1} is central).
    pub fn gl_star(&self, x: &GLnElement) -> Result<GLnElement> {
        let mut out = self.star_poly(&x.poly)?;
        for _ in 0..x.dinv {
            out = self.mul(&out, &self.dinv_star);
        }
        Ok(out)
    }

    pub fn render(&self, x: &GLnElement) -> String {
        if x.dinv == 0 {
            self.alg.render(&x.poly)
        } else {
            format!("d^-{}*({})", x.dinv, self.alg.render(&x.poly))
        }
    }

    /// Residuals of Σ_j q^{2n−α−β} z_j^α (z_j^β)* − δ^{αβ} for all α, β.
    pub fn shilov_residuals(&self) -> Result<Vec<String>> {
        let n = self.n;
        let mut res = Vec::new();
        for alpha in 1..=n {
            for beta in 1..=n {
                let mut acc = self.element(NCPoly::zero());
                for j in 1..=n {
                    let term = self.mul(&self.generator(j, alpha)?, &self.star_generator(j, beta)?);
                    let w = VScalar::q_pow(2 * n as i32 - alpha as i32 - beta as i32);
                    acc = self.add(&acc, &self.scale(&term, &w));
                }
                if alpha == beta {
                    acc = self.add(&acc, &self.element(NCPoly::scalar(VScalar::from_int(-1))));
                }
                if !self.is_zero(&acc) {
                    res.push(format!("relation ({alpha},{beta}): {}", self.render(&acc)));
                }
            }
        }
        Ok(res)
    }
}

/// Canonical words of length `deg` over `gens` generators.
fn monomials(gens: usize, deg: usize) -> Vec<Word> {
    fn rec(start: usize, gens: usize, left: usize, cur: &mut Word, out: &mut Vec<Word>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for g in start..gens {
            cur.push(g as u16);
            rec(g, gens, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, gens, deg, &mut Word::new(), &mut out);
    out
}

/// The Shilov relations hold after the involution of C[GL_n]_q.
pub fn shilov_consistency_check(n: u8) -> Report {
    Report::timed(|| {
        let run = || -> Result<Vec<String>> {
            let gl = GLn::new(n)?;
            let mut res = gl.shilov_residuals()?;
            // involutivity on generators
            for a in 1..=n {
                for al in 1..=n {
                    let z = gl.generator(a, al)?;
                    let back = gl.gl_star(&gl.gl_star(&z)?)?;
                    if back != z {
                        res.push(format!("(z[{a},{al}]*)* = {}", gl.render(&back)));
                    }
                }
            }
            Ok(res)
        };
        match run() {
            Ok(res) => Report::from_residuals("shilov-consistency", n as u32, 0, res, false),
            Err(e) => Report::error("shilov-consistency", n as u32, 0, e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(a: u8, al: u8) -> GeneratorId {
        GeneratorId::new(GenClass::Z, a, al)
    }
    fn zs(a: u8, al: u8) -> GeneratorId {
        GeneratorId::new(GenClass::ZStar, a, al)
    }

    #[test]
    fn cross_relation_n1() {
        let alg = pol_algebra(1, GenClass::Z);
        let p = wick_normalize(&alg, &[zs(1, 1), z(1, 1)]).unwrap();
        let mut expect = alg.normalize_ids(&[z(1, 1), zs(1, 1)], VScalar::q_pow(2)).unwrap();
        expect.add_term(Word::new(), &VScalar::one() - &VScalar::q_pow(2));
        assert_eq!(p, expect);
    }

    #[test]
    fn cross_relation_n2_matches_double_sum() {
        let alg = pol_algebra(2, GenClass::Z);
        let p = wick_normalize(&alg, &[zs(1, 1), z(1, 1)]).unwrap();
        let q2 = VScalar::q_pow(2);
        let one = VScalar::one();
        let mut e = NCPoly::zero();
        e.add_assign_scaled(&wick_normalize(&alg, &[z(1, 1), zs(1, 1)]).unwrap(), &q2);
        e.add_assign_scaled(&wick_normalize(&alg, &[z(1, 2), zs(1, 2)]).unwrap(), &(&q2 - &one));
        e.add_assign_scaled(&wick_normalize(&alg, &[z(2, 1), zs(2, 1)]).unwrap(), &(&q2 - &one));
        let w = &one - &VScalar::q_pow(-2);
        e.add_assign_scaled(&wick_normalize(&alg, &[z(2, 2), zs(2, 2)]).unwrap(), &(&q2 * &(&w * &w)));
        e.add_term(Word::new(), &one - &q2);
        assert_eq!(p, e);
    }

    #[test]
    fn normal_word_unchanged_and_star() {
        let alg = pol_algebra(2, GenClass::Z);
        let p = wick_normalize(&alg, &[z(1, 1), zs(2, 2)]).unwrap();
        assert_eq!(p.len(), 1);
        let s = star(&alg, &alg.generator(z(1, 1)).unwrap());
        assert_eq!(s, alg.generator(zs(1, 1)).unwrap());
        let zz = wick_normalize(&alg, &[z(1, 1), z(2, 2)]).unwrap();
        assert_eq!(star(&alg, &zz), wick_normalize(&alg, &[zs(2, 2), zs(1, 1)]).unwrap());
    }

    #[test]
    fn y_low_degrees() {
        let alg = pol_algebra(1, GenClass::Z);
        let y = y_element(&alg, GenClass::Z, 1);
        let mut e = NCPoly::one();
        e -= &wick_normalize(&alg, &[z(1, 1), zs(1, 1)]).unwrap();
        assert_eq!(y, e);
        let alg = pol_algebra(2, GenClass::Z);
        let y = y_element(&alg, GenClass::Z, 2);
        let mut e = NCPoly::zero();
        for a in 1..=2 {
            for al in 1..=2 {
                e -= &wick_normalize(&alg, &[z(a, al), zs(a, al)]).unwrap();
            }
        }
        let s = TruncatedSeries::from_poly(&alg, &y, 2);
        assert_eq!(s.bicomponent(1, 1).unwrap(), e);
        assert_eq!(s.bicomponent(0, 0).unwrap(), NCPoly::one());
    }

    #[test]
    fn bicomponents() {
        let alg = pol_algebra(1, GenClass::Z);
        let s = TruncatedSeries::from_poly(&alg, &NCPoly::one(), 2);
        assert_eq!(s.bicomponent(0, 0).unwrap(), NCPoly::one());
        assert!(s.bicomponent(3, 0).is_err());
        let zz = wick_normalize(&alg, &[z(1, 1), z(1, 1)]).unwrap();
        let s = TruncatedSeries::from_poly(&alg, &zz, 2);
        assert_eq!(s.bicomponent(2, 0).unwrap(), zz);
        assert!(!s.truncated);
        assert!(TruncatedSeries::from_poly(&alg, &zz, 1).truncated);
    }

    #[test]
    fn gl_star_generators() {
        let gl = GLn::new(1).unwrap();
        let s = gl.star_generator(1, 1).unwrap();
        assert_eq!(s, GLnElement { poly: NCPoly::one(), dinv: 1 });
        let gl = GLn::new(2).unwrap();
        let s = gl.star_generator(1, 1).unwrap();
        let expect = gl.alg.generator(z(2, 2)).unwrap().scale(&VScalar::q_pow(-2));
        assert_eq!(s, GLnElement { poly: expect, dinv: 1 });
    }

    #[test]
    fn shilov_relations_in_gl_model() {
        assert!(shilov_consistency_check(1).passed());
        let r = shilov_consistency_check(2);
        assert!(r.passed(), "{:?}", r.residual_sample);
    }
}
