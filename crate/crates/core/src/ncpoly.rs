//! Normal forms in quantized algebras presented by an ordered alphabet and a
//! quadratic rewrite table.
//!
//! Canonical words are non-decreasing in the generator order. Every
//! descending adjacent pair `g h` (g ≻ h) has a rule `g h → Σ c·u` with
//! `|u| ≤ 2`; right-hand sides may themselves need further rewriting.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::RwLock;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::VScalar;

/// Symbol class of a generator. The declaration order is the class rank used
/// by the monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenClass {
    /// z_a^α, indices (a, α)
    Z,
    /// (z_a^α)*
    ZStar,
    /// ζ_a^α on the Shilov boundary
    Zeta,
    /// (ζ_a^α)*
    ZetaStar,
    /// matrix entry t_{ij}
    T,
}

impl GenClass {
    pub fn prefix(self) -> &'static str {
        match self {
            GenClass::Z => "z",
            GenClass::ZStar => "zs",
            GenClass::Zeta => "zeta",
            GenClass::ZetaStar => "zetas",
            GenClass::T => "t",
        }
    }

    /// True for the antiholomorphic classes.
    pub fn is_star(self) -> bool {
        matches!(self, GenClass::ZStar | GenClass::ZetaStar)
    }

    pub fn star(self) -> GenClass {
        match self {
            GenClass::Z => GenClass::ZStar,
            GenClass::ZStar => GenClass::Z,
            GenClass::Zeta => GenClass::ZetaStar,
            GenClass::ZetaStar => GenClass::Zeta,
            GenClass::T => GenClass::T,
        }
    }
}

/// A generator: class plus two 1-based indices. For z-type classes `i` is the
/// lower index a and `j` the upper index α; for `T` they are row and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorId {
    pub class: GenClass,
    pub i: u8,
    pub j: u8,
}

impl GeneratorId {
    pub const fn new(class: GenClass, i: u8, j: u8) -> Self {
        GeneratorId { class, i, j }
    }

    pub fn star(self) -> Self {
        GeneratorId { class: self.class.star(), ..self }
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{},{}]", self.class.prefix(), self.i, self.j)
    }
}

/// Index of a generator inside one algebra; numeric order is the monomial order.
pub type Gen = u16;
pub type Word = SmallVec<[Gen; 8]>;

type Rhs = Vec<(VScalar, Word)>;
/// Normal form of a word times a generator, as (word, coefficient) pairs.
type Expansion = Vec<(Word, VScalar)>;

/// Reduction strategy for [`Algebra::normalize_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

/// Default bound on single rewrite steps per normalization.
pub const STEP_BOUND: usize = 5_000_000;

/// A finite linear combination of canonical words.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct NCPoly {
    terms: BTreeMap<Word, VScalar>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::scalar(VScalar::one())
    }

    pub fn scalar(c: VScalar) -> Self {
        Self::monomial(Word::new(), c)
    }

    /// Caller guarantees `word` is canonical in the algebra it will be used with.
    pub fn monomial(word: Word, c: VScalar) -> Self {
        let mut p = Self::zero();
        p.add_term(word, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &VScalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, VScalar)> {
        self.terms.into_iter()
    }

    /// Coefficient of a word, zero when absent. No canonicity check.
    pub fn get(&self, word: &[Gen]) -> VScalar {
        self.terms.get(word).cloned().unwrap_or_default()
    }

    /// The constant term.
    pub fn constant(&self) -> VScalar {
        self.get(&[])
    }

    pub fn add_term(&mut self, word: Word, c: VScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &NCPoly, c: &VScalar) {
        if c.is_zero() {
            return;
        }
        for (w, a) in &other.terms {
            self.add_term(w.clone(), a * c);
        }
    }

    pub fn scale(&self, c: &VScalar) -> NCPoly {
        let mut out = NCPoly::zero();
        out.add_assign_scaled(self, c);
        out
    }

    /// Keeps only the terms whose word satisfies the predicate.
    pub fn filter(&self, mut keep: impl FnMut(&Word) -> bool) -> NCPoly {
        NCPoly {
            terms: self.terms.iter().filter(|(w, _)| keep(w)).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    /// Applies a coefficient map, dropping zeros.
    pub fn map_coeffs(&self, mut f: impl FnMut(&Word, &VScalar) -> VScalar) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(w, c));
        }
        out
    }
}

impl std::ops::Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &VScalar::one());
        out
    }
}

impl std::ops::Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &VScalar::from_int(-1));
        out
    }
}

impl std::ops::Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        self.scale(&VScalar::from_int(-1))
    }
}

impl std::ops::AddAssign<&NCPoly> for NCPoly {
    fn add_assign(&mut self, rhs: &NCPoly) {
        self.add_assign_scaled(rhs, &VScalar::one());
    }
}

impl std::ops::SubAssign<&NCPoly> for NCPoly {
    fn sub_assign(&mut self, rhs: &NCPoly) {
        self.add_assign_scaled(rhs, &VScalar::from_int(-1));
    }
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(w, c)| (w.to_vec(), c.to_string()))).finish()
    }
}

/// A quantized algebra: ordered generators and a quadratic rewrite table.
pub struct Algebra {
    name: String,
    gens: Vec<GeneratorId>,
    lookup: HashMap<GeneratorId, Gen>,
    rules: HashMap<(Gen, Gen), Rhs>,
    cache: RwLock<HashMap<(Word, Gen), Expansion>>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra").field("name", &self.name).field("generators", &self.gens.len()).finish()
    }
}

impl Algebra {
    /// Builds an algebra. `rule(g, h)` is queried for every pair with g ≻ h and
    /// must return the right-hand side of `g h → Σ c·u`.
    pub fn new<F>(name: impl Into<String>, mut gens: Vec<GeneratorId>, mut rule: F) -> Self
    where
        F: FnMut(GeneratorId, GeneratorId) -> Vec<(VScalar, Vec<GeneratorId>)>,
    {
        gens.sort();
        gens.dedup();
        assert!(gens.len() < Gen::MAX as usize);
        let lookup: HashMap<GeneratorId, Gen> = gens.iter().enumerate().map(|(k, g)| (*g, k as Gen)).collect();
        let mut rules = HashMap::new();
        for (hi, g) in gens.iter().enumerate() {
            for (lo, h) in gens.iter().enumerate().take(hi) {
                let rhs = rule(*g, *h)
                    .into_iter()
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, w)| {
                        assert!(w.len() <= 2, "rewrite rule with right-hand side longer than 2");
                        let word: Word = w.iter().map(|x| lookup[x]).collect();
                        (c, word)
                    })
                    .collect();
                rules.insert((hi as Gen, lo as Gen), rhs);
            }
        }
        Algebra { name: name.into(), gens, lookup, rules, cache: RwLock::new(HashMap::new()) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[GeneratorId] {
        &self.gens
    }

    pub fn gen(&self, id: GeneratorId) -> Result<Gen> {
        self.lookup.get(&id).copied().ok_or_else(|| Error::UnknownGenerator(id.to_string()))
    }

    pub fn contains(&self, id: GeneratorId) -> bool {
        self.lookup.contains_key(&id)
    }

    pub fn id(&self, g: Gen) -> GeneratorId {
        self.gens[g as usize]
    }

    pub fn word(&self, ids: &[GeneratorId]) -> Result<Word> {
        ids.iter().map(|id| self.gen(*id)).collect()
    }

    /// Raw right-hand side for a descending pair.
    pub fn rule(&self, g: Gen, h: Gen) -> Option<&[(VScalar, Word)]> {
        self.rules.get(&(g, h)).map(|v| v.as_slice())
    }

    pub fn is_normal(&self, word: &[Gen]) -> bool {
        word.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn generator(&self, id: GeneratorId) -> Result<NCPoly> {
        Ok(NCPoly::monomial(Word::from_slice(&[self.gen(id)?]), VScalar::one()))
    }

    /// Normal form of `coeff · word` for an arbitrary (not necessarily canonical) word.
    pub fn normalize(&self, word: &[Gen], coeff: VScalar) -> NCPoly {
        let mut acc = NCPoly::monomial(Word::new(), coeff);
        for &g in word {
            acc = self.mul_gen(&acc, g);
        }
        acc
    }

    /// Same as [`normalize`](Self::normalize) for generator ids.
    pub fn normalize_ids(&self, ids: &[GeneratorId], coeff: VScalar) -> Result<NCPoly> {
        Ok(self.normalize(&self.word(ids)?, coeff))
    }

    fn mul_gen(&self, p: &NCPoly, g: Gen) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            for (u, d) in self.word_times_gen(w, g) {
                out.add_term(u, c * &d);
            }
        }
        out
    }

    /// Normal form of `w · g` for canonical `w`.
    fn word_times_gen(&self, w: &Word, g: Gen) -> Vec<(Word, VScalar)> {
        match w.last() {
            None => return vec![(Word::from_slice(&[g]), VScalar::one())],
            Some(&h) if h <= g => {
                let mut u = w.clone();
                u.push(g);
                return vec![(u, VScalar::one())];
            }
            _ => {}
        }
        let key = (w.clone(), g);
        if let Some(hit) = self.cache.read().unwrap().get(&key) {
            return hit.clone();
        }
        let h = *w.last().unwrap();
        let prefix: Word = Word::from_slice(&w[..w.len() - 1]);
        let mut out = NCPoly::zero();
        let rhs = &self.rules[&(h, g)];
        for (c, u) in rhs {
            let mut acc = NCPoly::monomial(prefix.clone(), c.clone());
            for &x in u {
                acc = self.mul_gen(&acc, x);
            }
            out += &acc;
        }
        let res: Vec<(Word, VScalar)> = out.into_terms().collect();
        self.cache.write().unwrap().insert(key, res.clone());
        res
    }

    /// Product of two normalized polynomials.
    pub fn mul(&self, a: &NCPoly, b: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (wb, cb) in b.terms() {
            let mut acc = a.clone();
            for &g in wb {
                acc = self.mul_gen(&acc, g);
            }
            out.add_assign_scaled(&acc, cb);
        }
        out
    }

    pub fn mul_all<'a>(&self, factors: impl IntoIterator<Item = &'a NCPoly>) -> NCPoly {
        factors.into_iter().fold(NCPoly::one(), |acc, f| self.mul(&acc, f))
    }

    pub fn pow(&self, p: &NCPoly, e: u32) -> NCPoly {
        (0..e).fold(NCPoly::one(), |acc, _| self.mul(&acc, p))
    }

    /// Commutator a·b − b·a.
    pub fn commutator(&self, a: &NCPoly, b: &NCPoly) -> NCPoly {
        &self.mul(a, b) - &self.mul(b, a)
    }

    /// Normalizes by repeated single rewrites with an explicit strategy; used to
    /// cross-check the memoized path and to fuzz confluence.
    pub fn normalize_with(&self, word: &[Gen], coeff: VScalar, strategy: Strategy, bound: usize) -> Result<NCPoly> {
        let mut pending: BTreeMap<Word, VScalar> = BTreeMap::new();
        pending.insert(Word::from_slice(word), coeff);
        let mut done = NCPoly::zero();
        let mut steps = 0usize;
        while let Some((w, c)) = pending.pop_first() {
            let pos = match strategy {
                Strategy::Leftmost => w.windows(2).position(|p| p[0] > p[1]),
                Strategy::Rightmost => w.windows(2).rposition(|p| p[0] > p[1]),
            };
            let Some(pos) = pos else {
                done.add_term(w, c);
                continue;
            };
            steps += 1;
            if steps > bound {
                return Err(Error::StepBound(bound));
            }
            for (d, u) in &self.rules[&(w[pos], w[pos + 1])] {
                let mut nw: Word = Word::from_slice(&w[..pos]);
                nw.extend_from_slice(u);
                nw.extend_from_slice(&w[pos + 2..]);
                let coef = &c * d;
                let e = pending.entry(nw).or_default();
                *e += &coef;
            }
            pending.retain(|_, v| !v.is_zero());
        }
        Ok(done)
    }

    /// Coefficient of a canonical word.
    pub fn coeff(&self, p: &NCPoly, word: &[Gen]) -> Result<VScalar> {
        if !self.is_normal(word) {
            return Err(Error::NonCanonicalWord(self.render_word(word)));
        }
        Ok(p.get(word))
    }

    /// Coefficient of a canonical word given by generator ids.
    pub fn coeff_ids(&self, p: &NCPoly, ids: &[GeneratorId]) -> Result<VScalar> {
        self.coeff(p, &self.word(ids)?)
    }

    /// Splits `p` by the degree vector assigned to each generator; the
    /// components sum back to `p`.
    pub fn grade<F>(&self, p: &NCPoly, degree: F) -> BTreeMap<Vec<i32>, NCPoly>
    where
        F: Fn(GeneratorId) -> Vec<i32>,
    {
        let dims = self.gens.first().map(|g| degree(*g).len()).unwrap_or(0);
        let mut out: BTreeMap<Vec<i32>, NCPoly> = BTreeMap::new();
        for (w, c) in p.terms() {
            let mut d = vec![0; dims];
            for &g in w {
                for (acc, x) in d.iter_mut().zip(degree(self.id(g))) {
                    *acc += x;
                }
            }
            out.entry(d).or_default().add_term(w.clone(), c.clone());
        }
        out
    }

    /// (holomorphic count, antiholomorphic count) of a word.
    pub fn bidegree(&self, word: &[Gen]) -> (u32, u32) {
        let mut d = (0, 0);
        for &g in word {
            if self.id(g).class.is_star() {
                d.1 += 1;
            } else {
                d.0 += 1;
            }
        }
        d
    }

    pub fn render_word(&self, word: &[Gen]) -> String {
        word.iter().map(|&g| self.id(g).to_string()).collect::<Vec<_>>().join("*")
    }

    /// Deterministic text form: terms by (degree, word), generators in
    /// canonical order, coefficients in canonical form.
    pub fn render(&self, p: &NCPoly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Word, &VScalar)> = p.terms().collect();
        terms.sort_by(|a, b| (a.0.len(), a.0).cmp(&(b.0.len(), b.0)));
        let mut out = String::new();
        for (k, (w, c)) in terms.into_iter().enumerate() {
            let (neg, body) = render_term(&self.render_word(w), c);
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

/// Splits a term rendering into (is_negative, body without the sign).
fn render_term(word: &str, c: &VScalar) -> (bool, String) {
    let minus_c = -c;
    let cs = c.to_string();
    // a single signed monomial, possibly over an integer, needs no parentheses
    let simple = |s: &str| !s.contains(' ') && !s.contains('(');
    let (neg, mag) = if cs.starts_with('-') && simple(&cs) { (true, minus_c.to_string()) } else { (false, cs) };
    if word.is_empty() {
        let body = if simple(&mag) { mag } else { format!("({mag})") };
        return (neg, body);
    }
    let body = if mag == "1" {
        word.to_string()
    } else if simple(&mag) {
        format!("{mag}*{word}")
    } else {
        format!("({mag})*{word}")
    };
    (neg, body)
}

/// The FRT-type relations shared by C[Mat]_q and the holomorphic part of
/// Pol(Mat_n)_q, written as rewrites of a descending pair. Generators are
/// identified with (first index, second index); the order is lexicographic.
///
/// Returns the right-hand side of `x_{(b,β)} x_{(a,α)}` for (b,β) ≻ (a,α).
pub fn frt_rule(class: GenClass, hi: (u8, u8), lo: (u8, u8)) -> Vec<(VScalar, Vec<GeneratorId>)> {
    let (b, beta) = hi;
    let (a, alpha) = lo;
    let g = |i, j| GeneratorId::new(class, i, j);
    let swapped = vec![g(a, alpha), g(b, beta)];
    if a == b || alpha == beta {
        // x_a^β x_a^α = q^{-1} x_a^α x_a^β (α<β); same for equal second index
        vec![(VScalar::q_pow(-1), swapped)]
    } else if alpha > beta {
        vec![(VScalar::one(), swapped)]
    } else {
        // a < b, α < β
        let qq = &VScalar::q_pow(1) - &VScalar::q_pow(-1);
        vec![(VScalar::one(), swapped), (-qq, vec![g(a, beta), g(b, alpha)])]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(n: u8) -> Algebra {
        let mut gens = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                gens.push(GeneratorId::new(GenClass::T, i, j));
            }
        }
        Algebra::new("mat", gens, |g, h| frt_rule(GenClass::T, (g.i, g.j), (h.i, h.j)))
    }

    fn t(i: u8, j: u8) -> GeneratorId {
        GeneratorId::new(GenClass::T, i, j)
    }

    #[test]
    fn empty_word_is_unit() {
        let a = mat(2);
        assert_eq!(a.normalize(&[], VScalar::one()), NCPoly::one());
    }

    #[test]
    fn off_diagonal_pair_commutes() {
        let a = mat(2);
        let p = a.normalize_ids(&[t(2, 1), t(1, 2)], VScalar::one()).unwrap();
        assert_eq!(p, NCPoly::monomial(a.word(&[t(1, 2), t(2, 1)]).unwrap(), VScalar::one()));
    }

    #[test]
    fn unknown_generator() {
        let a = mat(2);
        assert!(matches!(a.gen(t(3, 1)), Err(Error::UnknownGenerator(_))));
    }

    #[test]
    fn coefficient_requires_canonical_word() {
        let a = mat(2);
        let p = a.generator(t(1, 1)).unwrap().scale(&VScalar::q_pow(1));
        assert_eq!(a.coeff_ids(&p, &[t(1, 1)]).unwrap(), VScalar::q_pow(1));
        assert!(a.coeff_ids(&p, &[t(2, 1), t(1, 1)]).is_err());
    }

    #[test]
    fn strategies_agree_with_memoized_path() {
        let a = mat(2);
        let w = a.word(&[t(2, 2), t(2, 1), t(1, 2), t(1, 1), t(2, 2)]).unwrap();
        let fast = a.normalize(&w, VScalar::one());
        let l = a.normalize_with(&w, VScalar::one(), Strategy::Leftmost, STEP_BOUND).unwrap();
        let r = a.normalize_with(&w, VScalar::one(), Strategy::Rightmost, STEP_BOUND).unwrap();
        assert_eq!(fast, l);
        assert_eq!(fast, r);
    }

    #[test]
    fn rendering_is_deterministic() {
        let a = mat(2);
        let p = a.normalize_ids(&[t(2, 2), t(1, 1)], VScalar::one()).unwrap();
        assert_eq!(a.render(&p), "t[1,1]*t[2,2] + (-q + q^-1)*t[1,2]*t[2,1]");
    }
}
