//! Invariant kernels: truncated elements of Pol(Mat_n)_q^op ⊗ C[Ξ]_q with
//! t, t*, τ, τ* power bookkeeping.
//!
//! A term is (t^i t*^j f) ⊗ (g τ^k τ*^l) with f a Wick word in z and g a Wick
//! word in ζ. The t-type letters quasi-commute with every generator:
//! t·w = q^{s(w)} w·t with s(w) = #starred − #unstarred, likewise for t*, τ, τ*.
//! The first leg is multiplied oppositely; [`KernelAlgebra::kmul`] is the only
//! place where this happens.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ncpoly::{Algebra, GenClass, GeneratorId, NCPoly, Word};
use crate::polmat::{pol_algebra, star, y_element, zminor};
use crate::qmatrix::IndexSet;
use crate::scalar::VScalar;

/// Exponents of (t, t*, τ, τ*).
pub type Powers = [i32; 4];

type Tensor = BTreeMap<(Word, Word), VScalar>;

/// A truncated kernel. Canonical: equal power quadruples are collected,
/// zero coefficients are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    pub cutoff: u32,
    terms: BTreeMap<Powers, Tensor>,
    /// Set once any term beyond the cutoff has been discarded.
    pub truncated: bool,
}

impl Kernel {
    pub fn zero(cutoff: u32) -> Self {
        Kernel { cutoff, terms: BTreeMap::new(), truncated: false }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn powers(&self) -> impl Iterator<Item = &Powers> {
        self.terms.keys()
    }

    /// (powers, first word, second word, coefficient) for every term.
    pub fn terms(&self) -> impl Iterator<Item = (&Powers, &Word, &Word, &VScalar)> {
        self.terms.iter().flat_map(|(p, t)| t.iter().map(move |((f, g), c)| (p, f, g, c)))
    }

    pub fn len(&self) -> usize {
        self.terms.values().map(|t| t.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_raw(&mut self, p: Powers, f: Word, g: Word, c: VScalar) {
        if c.is_zero() {
            return;
        }
        let t = self.terms.entry(p).or_default();
        let key = (f, g);
        let vanished = {
            let e = t.entry(key.clone()).or_default();
            *e += &c;
            e.is_zero()
        };
        if vanished {
            t.remove(&key);
            if t.is_empty() {
                self.terms.remove(&p);
            }
        }
    }

    pub fn scale(&self, c: &VScalar) -> Kernel {
        let mut out = Kernel { cutoff: self.cutoff, terms: BTreeMap::new(), truncated: self.truncated };
        for (p, f, g, a) in self.terms() {
            out.add_raw(*p, f.clone(), g.clone(), a * c);
        }
        out
    }

    pub fn add(&self, other: &Kernel) -> Result<Kernel> {
        if self.cutoff != other.cutoff {
            return Err(Error::CutoffMismatch(self.cutoff, other.cutoff));
        }
        let mut out = self.clone();
        out.truncated |= other.truncated;
        for (p, f, g, a) in other.terms() {
            out.add_raw(*p, f.clone(), g.clone(), a.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Kernel) -> Result<Kernel> {
        self.add(&other.scale(&VScalar::from_int(-1)))
    }

    /// Equality of the term maps, ignoring cutoff and truncation flags.
    pub fn same_terms(&self, other: &Kernel) -> bool {
        self.terms == other.terms
    }

    /// Coefficient of 1⊗1 with zero powers.
    pub fn unit_coefficient(&self) -> VScalar {
        self.terms
            .get(&[0; 4])
            .and_then(|t| t.get(&(Word::new(), Word::new())))
            .cloned()
            .unwrap_or_default()
    }

    /// The same kernel with a different cutoff; terms beyond it are dropped.
    pub fn with_cutoff(&self, ka: &KernelAlgebra, cutoff: u32) -> Kernel {
        let mut out = Kernel::zero(cutoff);
        out.truncated = self.truncated;
        for (p, f, g, c) in self.terms() {
            ka.push_truncated(&mut out, *p, f.clone(), g.clone(), c.clone());
        }
        out
    }
}

/// The two leg algebras of the kernel space for a fixed n, plus cached y.
pub struct KernelAlgebra {
    pub n: u8,
    /// Pol(Mat_n)_q in z, z*.
    pub first: Algebra,
    /// Pol(Mat_n)_q in ζ, ζ*; boundary relations are applied separately.
    pub second: Algebra,
    y: NCPoly,
}

/// s(w) = #starred − #unstarred letters.
fn star_balance(alg: &Algebra, w: &[u16]) -> i32 {
    let (h, s) = alg.bidegree(w);
    s as i32 - h as i32
}

impl KernelAlgebra {
    pub fn new(n: u8) -> Self {
        let first = pol_algebra(n, GenClass::Z);
        let second = pol_algebra(n, GenClass::Zeta);
        let y = y_element(&first, GenClass::Z, n);
        KernelAlgebra { n, first, second, y }
    }

    pub fn y(&self) -> &NCPoly {
        &self.y
    }

    fn within(&self, w: &[u16], alg: &Algebra, cutoff: u32) -> bool {
        let (a, b) = alg.bidegree(w);
        a <= cutoff && b <= cutoff
    }

    fn push_truncated(&self, k: &mut Kernel, p: Powers, f: Word, g: Word, c: VScalar) {
        if self.within(&f, &self.first, k.cutoff) && self.within(&g, &self.second, k.cutoff) {
            k.add_raw(p, f, g, c);
        } else if !c.is_zero() {
            k.truncated = true;
        }
    }

    /// Σ c·(powers, f ⊗ g) for normalized legs.
    pub fn kernel(&self, cutoff: u32, p: Powers, f: &NCPoly, g: &NCPoly) -> Kernel {
        let mut k = Kernel::zero(cutoff);
        for (fw, fc) in f.terms() {
            for (gw, gc) in g.terms() {
                self.push_truncated(&mut k, p, fw.clone(), gw.clone(), fc * gc);
            }
        }
        k
    }

    pub fn unit(&self, cutoff: u32) -> Kernel {
        self.kernel(cutoff, [0; 4], &NCPoly::one(), &NCPoly::one())
    }

    /// A pure power monomial c·(t^i t*^j ⊗ τ^k τ*^l).
    pub fn power_monomial(&self, cutoff: u32, p: Powers, c: VScalar) -> Kernel {
        self.kernel(cutoff, p, &NCPoly::scalar(c), &NCPoly::one())
    }

    /// Product in Pol^op ⊗ C[Ξ]: the first legs multiply as f2·f1.
    pub fn kmul(&self, k1: &Kernel, k2: &Kernel) -> Result<Kernel> {
        if k1.cutoff != k2.cutoff {
            return Err(Error::CutoffMismatch(k1.cutoff, k2.cutoff));
        }
        let mut out = Kernel::zero(k1.cutoff);
        out.truncated = k1.truncated || k2.truncated;
        for (p1, f1, g1, c1) in k1.terms() {
            for (p2, f2, g2, c2) in k2.terms() {
                // (t^{i2}t*^{j2} f2)(t^{i1}t*^{j1} f1) and (g1 τ^{k1}τ*^{l1})(g2 τ^{k2}τ*^{l2})
                let e = -star_balance(&self.first, f2) * (p1[0] + p1[1]) + star_balance(&self.second, g2) * (p1[2] + p1[3]);
                let c = &(c1 * c2) * &VScalar::q_pow(e);
                let ff = self.first.mul(
                    &NCPoly::monomial(f2.clone(), VScalar::one()),
                    &NCPoly::monomial(f1.clone(), VScalar::one()),
                );
                let gg = self.second.mul(
                    &NCPoly::monomial(g1.clone(), VScalar::one()),
                    &NCPoly::monomial(g2.clone(), VScalar::one()),
                );
                let p = [p1[0] + p2[0], p1[1] + p2[1], p1[2] + p2[2], p1[3] + p2[3]];
                for (fw, fc) in ff.terms() {
                    if !self.within(fw, &self.first, out.cutoff) {
                        out.truncated = true;
                        continue;
                    }
                    let cf = &c * fc;
                    for (gw, gc) in gg.terms() {
                        self.push_truncated(&mut out, p, fw.clone(), gw.clone(), &cf * gc);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn kpow(&self, k: &Kernel, e: u32) -> Result<Kernel> {
        let mut acc = self.unit(k.cutoff);
        for _ in 0..e {
            acc = self.kmul(&acc, k)?;
        }
        Ok(acc)
    }

    /// The z-minor attached to an n-subset J of {1..2n}: lower indices
    /// J ∩ {1..n}, upper indices n+1−α for the α with n+α ∉ J.
    fn minor_for(&self, alg: &Algebra, holo: GenClass, j: &IndexSet) -> NCPoly {
        let n = self.n;
        let lower = j.intersect(&IndexSet::range(1, n));
        let mut upper: Vec<u8> = (1..=n).filter(|al| !j.contains(n + al)).map(|al| n + 1 - al).collect();
        upper.sort_unstable();
        let upper = IndexSet::new(upper).expect("distinct indices");
        zminor(alg, holo, &lower, &upper).expect("square minor")
    }

    /// L = Σ_J (−q)^{l(J,J^c)} t_{{1..n}J} ⊗ t_{{n+1..2n}J^c}, rewritten through
    /// t·zm_J in the first leg and (t zm_J)* = zm_J* τ* in the second.
    pub fn build_l(&self, cutoff: u32) -> Kernel {
        let n = self.n;
        let mut k = Kernel::zero(cutoff);
        for j in IndexSet::subsets(2 * n, n as usize) {
            let kj = j.intersect(&IndexSet::range(1, n)).card();
            let sign = VScalar::from_int(if kj % 2 == 1 { -1 } else { 1 });
            let f = self.minor_for(&self.first, GenClass::Z, &j);
            let g = star(&self.second, &self.minor_for(&self.second, GenClass::Zeta, &j));
            let part = self.kernel(cutoff, [1, 0, 0, 1], &f.scale(&sign), &g);
            k = k.add(&part).expect("same cutoff");
        }
        k
    }

    /// L̄ = Σ_J (−q)^{−l(J,J^c)} t_{{n+1..2n}J^c} ⊗ t_{{1..n}J}, i.e.
    /// Σ_J (−1)^{k_J} q^{−2l(J,J^c)} (t*⊗τ)·(zm_J*⊗ζm_J).
    pub fn build_lbar(&self, cutoff: u32) -> Kernel {
        let n = self.n;
        let mut k = Kernel::zero(cutoff);
        let prefix = self.power_monomial(cutoff, [0, 1, 1, 0], VScalar::one());
        for j in IndexSet::subsets(2 * n, n as usize) {
            let jc = j.complement(2 * n);
            let kj = j.intersect(&IndexSet::range(1, n)).card();
            let l = j.inversions_with(&jc) as i32;
            let sign = VScalar::from_int(if kj % 2 == 1 { -1 } else { 1 });
            let f = star(&self.first, &self.minor_for(&self.first, GenClass::Z, &j));
            let g = self.minor_for(&self.second, GenClass::Zeta, &j);
            let c = &sign * &VScalar::q_pow(-2 * l);
            let body = self.kernel(cutoff, [0; 4], &f.scale(&c), &g);
            k = k.add(&self.kmul(&prefix, &body).expect("same cutoff")).expect("same cutoff");
        }
        k
    }

    /// The unique degree-zero power monomial U of k and its inverse.
    fn leading_unit(&self, k: &Kernel) -> Result<(Kernel, Kernel)> {
        let mut lead: Option<(Powers, VScalar)> = None;
        for (p, f, g, c) in k.terms() {
            if f.is_empty() && g.is_empty() {
                if lead.is_some() {
                    return Err(Error::NonUnitLeadingTerm);
                }
                lead = Some((*p, c.clone()));
            }
        }
        let (p, c) = lead.ok_or(Error::NonUnitLeadingTerm)?;
        let u = self.power_monomial(k.cutoff, p, c.clone());
        let uinv = self.power_monomial(k.cutoff, [-p[0], -p[1], -p[2], -p[3]], c.inv());
        Ok((u, uinv))
    }

    fn check_positive(n: &Kernel) -> Result<()> {
        if n.terms().any(|(_, f, g, _)| f.is_empty() && g.is_empty()) {
            return Err(Error::NonUnitLeadingTerm);
        }
        Ok(())
    }

    /// k = U·(1 + N) with U the unique invertible power monomial of degree
    /// zero. Returns (U, N).
    pub fn factor_left(&self, k: &Kernel) -> Result<(Kernel, Kernel)> {
        let (u, uinv) = self.leading_unit(k)?;
        let n = self.kmul(&uinv, k)?.sub(&self.unit(k.cutoff))?;
        Self::check_positive(&n)?;
        Ok((u, n))
    }

    /// k = (1 + N)·U. Returns (U, N).
    pub fn factor_right(&self, k: &Kernel) -> Result<(Kernel, Kernel)> {
        let (u, uinv) = self.leading_unit(k)?;
        let n = self.kmul(k, &uinv)?.sub(&self.unit(k.cutoff))?;
        Self::check_positive(&n)?;
        Ok((u, n))
    }

    /// k^{-power} as a truncated Neumann series: k = U(1+N) gives
    /// k^{-1} = (1+N)^{-1} U^{-1}.
    pub fn kinverse(&self, k: &Kernel, power: u32) -> Result<Kernel> {
        let (_, n) = self.factor_left(k)?;
        let (_, uinv) = self.leading_unit(k)?;
        let minus_n = n.scale(&VScalar::from_int(-1));
        let mut series = self.unit(k.cutoff);
        let mut term = self.unit(k.cutoff);
        // every N-term carries a letter, so the series stops within 4D+1 steps
        for _ in 0..=(4 * k.cutoff + 1) {
            term = self.kmul(&term, &minus_n)?;
            if term.is_zero() {
                break;
            }
            series = series.add(&term)?;
        }
        let inv = self.kmul(&series, &uinv)?;
        let mut out = self.kpow(&inv, power)?;
        out.truncated |= k.truncated || n.truncated || term.truncated;
        Ok(out)
    }

    /// Replaces each t^{-m}t*^{-m} f in the first leg by y^m f. For a Wick
    /// word f = u·w (u holomorphic, w antiholomorphic) this is
    /// q^{2m|u|} u·y^m·w, using y z = q² z y.
    pub fn substitute_x_inverse(&self, k: &Kernel) -> Result<Kernel> {
        let mut out = Kernel::zero(k.cutoff);
        out.truncated = k.truncated;
        let mut ypow: Vec<NCPoly> = vec![NCPoly::one()];
        for (p, f, g, c) in k.terms() {
            if p[0] != p[1] || p[0] > 0 {
                return Err(Error::UnbalancedPowers(p[0], p[1]));
            }
            let m = (-p[0]) as usize;
            // Truncating powers of y loses nothing: y is balanced, and reordering
            // never removes z's of the left factor, so a dropped (a,a) term only
            // feeds z-degrees ≥ a.
            while ypow.len() <= m {
                let next = self.truncate_poly(&self.first.mul(ypow.last().unwrap(), &self.y), k.cutoff);
                ypow.push(next);
            }
            let split = f.iter().position(|&x| self.first.id(x).class.is_star()).unwrap_or(f.len());
            let u = NCPoly::monomial(Word::from_slice(&f[..split]), VScalar::one());
            let w = NCPoly::monomial(Word::from_slice(&f[split..]), VScalar::one());
            let coef = c * &VScalar::q_pow(2 * m as i32 * split as i32);
            let body = self.first.mul(&self.first.mul(&u, &ypow[m]), &w);
            for (fw, fc) in body.terms() {
                self.push_truncated(&mut out, [0, 0, p[2], p[3]], fw.clone(), g.clone(), &coef * fc);
            }
        }
        Ok(out)
    }

    fn truncate_poly(&self, p: &NCPoly, cutoff: u32) -> NCPoly {
        p.filter(|w| self.within(w, &self.first, cutoff))
    }

    /// P = const · (1⊗ττ*)^n · L̄^{-n} · L^{-n} with x^{-1} ↦ y substituted and
    /// const fixed by p_00 = 1⊗1. Also returns the unnormalized p_00 scalar.
    pub fn poisson_kernel_with_constant(&self, cutoff: u32) -> Result<(Kernel, VScalar)> {
        let n = self.n as u32;
        let l_inv = self.kinverse(&self.build_l(cutoff), n)?;
        let lbar_inv = self.kinverse(&self.build_lbar(cutoff), n)?;
        let tau = self.power_monomial(cutoff, [0, 0, n as i32, n as i32], VScalar::one());
        let raw = self.kmul(&self.kmul(&tau, &lbar_inv)?, &l_inv)?;
        for p in raw.powers() {
            if p[2] != 0 || p[3] != 0 {
                return Err(Error::UnbalancedPowers(p[2], p[3]));
            }
        }
        let sub = self.substitute_x_inverse(&raw)?;
        let c0 = sub.unit_coefficient();
        let c0inv = c0.checked_inv()?;
        Ok((sub.scale(&c0inv), c0))
    }

    pub fn poisson_kernel(&self, cutoff: u32) -> Result<Kernel> {
        Ok(self.poisson_kernel_with_constant(cutoff)?.0)
    }

    /// First-leg bidegree-(j, k) part.
    pub fn p_component(&self, p: &Kernel, j: u32, k: u32) -> Result<Kernel> {
        if j > p.cutoff || k > p.cutoff {
            return Err(Error::BeyondCutoff(j, k, p.cutoff));
        }
        let mut out = Kernel::zero(p.cutoff);
        out.truncated = p.truncated;
        for (pw, f, g, c) in p.terms() {
            if self.first.bidegree(f) == (j, k) {
                out.add_raw(*pw, f.clone(), g.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Moves a τ^{-n}τ*^{-n} block out of the second leg, leaving a boundary
    /// element ready for integration. Terms without τ-powers pass unchanged.
    pub fn eta_shift(&self, k: &Kernel) -> Result<Kernel> {
        let n = self.n as i32;
        let mut out = Kernel::zero(k.cutoff);
        out.truncated = k.truncated;
        for (p, f, g, c) in k.terms() {
            let ok = (p[2] == -n && p[3] == -n) || (p[2] == 0 && p[3] == 0);
            if !ok {
                return Err(Error::UnbalancedPowers(p[2], p[3]));
            }
            out.add_raw([p[0], p[1], 0, 0], f.clone(), g.clone(), c.clone());
        }
        Ok(out)
    }

    /// Second-leg element multiplying a given first-leg word (powers must be
    /// zero); the kernel-valued coefficient extraction.
    pub fn second_leg_at(&self, k: &Kernel, first: &[GeneratorId]) -> Result<NCPoly> {
        let w = self.first.word(first)?;
        if !self.first.is_normal(&w) {
            return Err(Error::NonCanonicalWord(self.first.render_word(&w)));
        }
        let mut out = NCPoly::zero();
        if let Some(t) = k.terms.get(&[0; 4]) {
            for ((f, g), c) in t {
                if *f == w {
                    out.add_term(g.clone(), c.clone());
                }
            }
        }
        Ok(out)
    }

    /// Deterministic text form, one term per line in canonical order.
    pub fn render(&self, k: &Kernel) -> String {
        if k.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (p, f, g, c) in k.terms() {
            let pw = |name: &str, e: i32| if e == 0 { String::new() } else { format!("{name}^{e} ") };
            let _ = writeln!(
                s,
                "({c}) {}{}[{}] ⊗ [{}] {}{}",
                pw("t", p[0]),
                pw("ts", p[1]),
                if f.is_empty() { "1".into() } else { self.first.render_word(f) },
                if g.is_empty() { "1".into() } else { self.second.render_word(g) },
                pw("tau", p[2]),
                pw("taus", p[3]),
            );
        }
        s.trim_end().to_string()
    }

    /// Renders up to `limit` terms of a (residual) kernel.
    pub fn residual_lines(&self, k: &Kernel, limit: usize) -> Vec<String> {
        self.render(k).lines().take(limit).map(String::from).collect()
    }
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
    fn ze(a: u8, al: u8) -> GeneratorId {
        GeneratorId::new(GenClass::Zeta, a, al)
    }
    fn zes(a: u8, al: u8) -> GeneratorId {
        GeneratorId::new(GenClass::ZetaStar, a, al)
    }

    fn simple(ka: &KernelAlgebra, d: u32, p: Powers, f: &[GeneratorId], g: &[GeneratorId], c: VScalar) -> Kernel {
        let f = ka.first.normalize_ids(f, c).unwrap();
        let g = ka.second.normalize_ids(g, VScalar::one()).unwrap();
        ka.kernel(d, p, &f, &g)
    }

    #[test]
    fn commutation_displays() {
        let ka = KernelAlgebra::new(2);
        let d = 2;
        let tt = ka.power_monomial(d, [1, 0, 0, 1], VScalar::one());
        let mut sum = Kernel::zero(d);
        for a in 1..=2 {
            for al in 1..=2 {
                sum = sum.add(&simple(&ka, d, [0; 4], &[z(a, al)], &[zes(a, al)], VScalar::one())).unwrap();
            }
        }
        let lhs = ka.kmul(&tt, &sum).unwrap();
        let rhs = ka.kmul(&sum, &tt).unwrap().scale(&VScalar::q_pow(2));
        assert_eq!(lhs, rhs);

        let ts = ka.power_monomial(d, [0, 1, 1, 0], VScalar::one());
        let mut sum = Kernel::zero(d);
        for a in 1..=2u8 {
            for al in 1..=2u8 {
                let w = VScalar::q_pow(2 * (4 - a as i32 - al as i32));
                sum = sum.add(&simple(&ka, d, [0; 4], &[zs(a, al)], &[ze(a, al)], w)).unwrap();
            }
        }
        let lhs = ka.kmul(&ts, &sum).unwrap();
        let rhs = ka.kmul(&sum, &ts).unwrap().scale(&VScalar::q_pow(-2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn unit_is_neutral() {
        let ka = KernelAlgebra::new(1);
        let k = simple(&ka, 2, [1, 0, 0, 1], &[z(1, 1)], &[zes(1, 1)], VScalar::q_pow(1));
        assert_eq!(ka.kmul(&ka.unit(2), &k).unwrap(), k);
        assert_eq!(ka.kmul(&k, &ka.unit(2)).unwrap(), k);
        assert!(ka.kmul(&ka.unit(2), &ka.unit(3)).is_err());
    }

    #[test]
    fn geometric_series() {
        let ka = KernelAlgebra::new(1);
        let u = simple(&ka, 2, [0; 4], &[z(1, 1)], &[zes(1, 1)], VScalar::one());
        let k = ka.unit(2).sub(&u).unwrap();
        let inv = ka.kinverse(&k, 1).unwrap();
        let u2 = ka.kmul(&u, &u).unwrap();
        let expect = ka.unit(2).add(&u).unwrap().add(&u2).unwrap();
        assert_eq!(inv.terms().count(), expect.terms().count());
        assert!(inv.sub(&expect).unwrap().is_zero());
    }

    #[test]
    fn l_leading_terms() {
        let ka = KernelAlgebra::new(2);
        let l = ka.build_l(2);
        let (u, n) = ka.factor_right(&l).unwrap();
        assert_eq!(u, ka.power_monomial(2, [1, 0, 0, 1], VScalar::one()));
        // degree-one part of N is −Σ z ⊗ ζ*
        let mut expect = Kernel::zero(2);
        for a in 1..=2 {
            for al in 1..=2 {
                expect = expect.add(&simple(&ka, 2, [0; 4], &[z(a, al)], &[zes(a, al)], VScalar::from_int(-1))).unwrap();
            }
        }
        assert_eq!(ka.p_component(&n, 1, 0).unwrap(), expect);

        let lb = ka.build_lbar(2);
        let (u, nb) = ka.factor_left(&lb).unwrap();
        assert_eq!(u, ka.power_monomial(2, [0, 1, 1, 0], VScalar::q_pow(-8)));
        let mut expect = Kernel::zero(2);
        for a in 1..=2u8 {
            for al in 1..=2u8 {
                let w = -VScalar::q_pow(2 + 2 * (4 - a as i32 - al as i32));
                expect = expect.add(&simple(&ka, 2, [0; 4], &[zs(a, al)], &[ze(a, al)], w)).unwrap();
            }
        }
        assert_eq!(ka.p_component(&nb, 0, 1).unwrap(), expect);
    }

    #[test]
    fn inverse_is_two_sided() {
        for n in 1..=2u8 {
            let ka = KernelAlgebra::new(n);
            let l = ka.build_l(2);
            let inv = ka.kinverse(&l, 1).unwrap();
            assert!(ka.kmul(&l, &inv).unwrap().sub(&ka.unit(2)).unwrap().is_zero());
            assert!(ka.kmul(&inv, &l).unwrap().sub(&ka.unit(2)).unwrap().is_zero());
        }
    }

    #[test]
    fn substitute_y() {
        let ka = KernelAlgebra::new(1);
        let k = ka.power_monomial(2, [-1, -1, 0, 0], VScalar::one());
        let s = ka.substitute_x_inverse(&k).unwrap();
        let y = ka.kernel(2, [0; 4], ka.y(), &NCPoly::one());
        assert_eq!(s, y);
        let plain = simple(&ka, 2, [0; 4], &[z(1, 1)], &[], VScalar::one());
        assert_eq!(ka.substitute_x_inverse(&plain).unwrap(), plain);
        let bad = ka.power_monomial(2, [-1, 0, 0, 0], VScalar::one());
        assert!(ka.substitute_x_inverse(&bad).is_err());
    }

    #[test]
    fn eta_shift_cases() {
        let ka = KernelAlgebra::new(1);
        let k = ka.power_monomial(2, [-1, -1, -1, -1], VScalar::one());
        let zz = simple(&ka, 2, [0; 4], &[], &[ze(1, 1), zes(1, 1)], VScalar::one());
        let s = ka.eta_shift(&ka.kmul(&k, &zz).unwrap()).unwrap();
        let expect = ka.kernel(2, [-1, -1, 0, 0], &NCPoly::one(), &ka.second.normalize_ids(&[ze(1, 1), zes(1, 1)], VScalar::one()).unwrap());
        assert_eq!(s, expect);
        assert_eq!(ka.eta_shift(&zz).unwrap(), zz);
        assert!(ka.eta_shift(&ka.power_monomial(2, [0, 0, -1, 0], VScalar::one())).is_err());
    }

    #[test]
    fn p00_is_unit() {
        let ka = KernelAlgebra::new(1);
        let p = ka.poisson_kernel(2).unwrap();
        assert!(ka.p_component(&p, 0, 0).unwrap().same_terms(&ka.unit(2)));
        assert!(ka.p_component(&ka.unit(2), 1, 0).unwrap().is_zero());
        assert!(ka.p_component(&p, 3, 0).is_err());
    }
}
