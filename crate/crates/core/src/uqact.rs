//! U_q sl_2n acting on Pol(Mat_n)_q and C[Mat_{N,2n}]_q: generator tables,
//! the Leibniz extension through the coproduct, weights and the H_0 grading,
//! invariance of tensors, and the U_q su_{n,n} involution.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::ncpoly::{Algebra, Gen, GenClass, GeneratorId, NCPoly, Word};
use crate::polmat;
use crate::qmatrix::{matrix_algebra, qminor, IndexSet};
use crate::report::Report;
use crate::scalar::VScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UqKind {
    E,
    F,
    K,
    KInv,
}

/// A Chevalley generator E_i, F_i, K_i or K_i^{-1}, with 1 ≤ i ≤ 2n−1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UqGen {
    pub kind: UqKind,
    pub i: u8,
}

impl UqGen {
    pub const fn e(i: u8) -> Self {
        UqGen { kind: UqKind::E, i }
    }
    pub const fn f(i: u8) -> Self {
        UqGen { kind: UqKind::F, i }
    }
    pub const fn k(i: u8) -> Self {
        UqGen { kind: UqKind::K, i }
    }
    pub const fn kinv(i: u8) -> Self {
        UqGen { kind: UqKind::KInv, i }
    }

    /// All 4(2n−1) generators.
    pub fn all(n: u8) -> Vec<UqGen> {
        (1..2 * n).flat_map(|i| [UqGen::e(i), UqGen::f(i), UqGen::k(i), UqGen::kinv(i)]).collect()
    }

    pub fn counit(self) -> VScalar {
        match self.kind {
            UqKind::E | UqKind::F => VScalar::zero(),
            UqKind::K | UqKind::KInv => VScalar::one(),
        }
    }
}

impl fmt::Display for UqGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            UqKind::E => write!(f, "E{}", self.i),
            UqKind::F => write!(f, "F{}", self.i),
            UqKind::K => write!(f, "K{}", self.i),
            UqKind::KInv => write!(f, "K{}^-1", self.i),
        }
    }
}

/// A linear combination of words in the generators; a word [g1, g2] acts as
/// g1 after g2.
pub type UqExpr = Vec<(VScalar, Vec<UqGen>)>;

/// The sign ε_j of the real form: −1 at j = n, +1 elsewhere.
fn real_form_sign(n: u8, j: u8) -> VScalar {
    VScalar::from_int(if j == n { -1 } else { 1 })
}

/// K* = K, E_j* = ε_j K_j F_j, F_j* = ε_j E_j K_j^{-1}.
pub fn ustar(n: u8, g: UqGen) -> UqExpr {
    let s = real_form_sign(n, g.i);
    match g.kind {
        UqKind::K | UqKind::KInv => vec![(VScalar::one(), vec![g])],
        UqKind::E => vec![(s, vec![UqGen::k(g.i), UqGen::f(g.i)])],
        UqKind::F => vec![(s, vec![UqGen::e(g.i), UqGen::kinv(g.i)])],
    }
}

/// S(E) = −K^{-1}E, S(F) = −FK, S(K^{±1}) = K^{∓1}.
pub fn antipode(g: UqGen) -> UqExpr {
    let m = VScalar::from_int(-1);
    match g.kind {
        UqKind::E => vec![(m, vec![UqGen::kinv(g.i), g])],
        UqKind::F => vec![(m, vec![g, UqGen::k(g.i)])],
        UqKind::K => vec![(VScalar::one(), vec![UqGen::kinv(g.i)])],
        UqKind::KInv => vec![(VScalar::one(), vec![UqGen::k(g.i)])],
    }
}

/// The antilinear antihomomorphism * on formal expressions (coefficients are real).
pub fn ustar_expr(n: u8, x: &UqExpr) -> UqExpr {
    let mut out = Vec::new();
    for (c, word) in x {
        let mut acc: UqExpr = vec![(c.clone(), Vec::new())];
        for &g in word.iter().rev() {
            let sg = ustar(n, g);
            acc = acc
                .iter()
                .flat_map(|(a, w)| {
                    sg.iter().map(move |(b, v)| {
                        let mut w2 = w.clone();
                        w2.extend(v.iter().copied());
                        (a * b, w2)
                    })
                })
                .collect();
        }
        out.extend(acc);
    }
    out
}

/// Generator-level action data for one algebra.
pub struct ActionTable {
    pub n: u8,
    weights: HashMap<Gen, Vec<i32>>,
    raise: HashMap<(u8, Gen), NCPoly>,
    lower: HashMap<(u8, Gen), NCPoly>,
}

impl ActionTable {
    fn empty(n: u8) -> Self {
        ActionTable { n, weights: HashMap::new(), raise: HashMap::new(), lower: HashMap::new() }
    }

    /// Pol(Mat_n)_q on classes Z/ZStar or Zeta/ZetaStar. The holomorphic
    /// entries follow the standard table; starred ones come from
    /// (ξf)* = (S(ξ))*f*.
    pub fn pol(alg: &Algebra, n: u8) -> Result<Self> {
        let holo = alg.generators().first().map(|g| g.class).ok_or(Error::MissingAction("empty algebra".into()))?;
        if holo.is_star() || holo == GenClass::T {
            return Err(Error::MissingAction(format!("{} is not a Pol algebra", alg.name())));
        }
        let v = VScalar::v_pow(1);
        let vinv = VScalar::v_pow(-1);
        let ni = n as i32;
        let z = |a: u8, al: u8| GeneratorId::new(holo, a, al);
        let mut t = ActionTable::empty(n);
        for a in 1..=n {
            for al in 1..=n {
                let g = alg.gen(z(a, al))?;
                let gs = alg.gen(z(a, al).star())?;
                let mut lam = vec![0i32; 2 * n as usize - 1];
                for k in 1..2 * n {
                    let ki = k as i32;
                    let (w, e, f): (i32, NCPoly, NCPoly) = if k == n {
                        // one index equal to n gives weight +1: the only value
                        // making z_n^n z_a^α − z_a^α z_n^n ∝ z_a^n z_n^α homogeneous
                        let w = match (a == n, al == n) {
                            (true, true) => 2,
                            (true, false) | (false, true) => 1,
                            _ => 0,
                        };
                        let f = if a == n && al == n { NCPoly::scalar(v.clone()) } else { NCPoly::zero() };
                        let e = if a != n && al != n {
                            alg.normalize_ids(&[z(a, n), z(n, al)], -&(&v * &VScalar::q_pow(-1)))?
                        } else if a == n && al == n {
                            alg.normalize_ids(&[z(n, n), z(n, n)], -v.clone())?
                        } else {
                            alg.normalize_ids(&[z(n, n), z(a, al)], -v.clone())?
                        };
                        (w, e, f)
                    } else if k < n {
                        let w = (a as i32 == ki) as i32 - (a as i32 == ki + 1) as i32;
                        let f = if a == k { alg.normalize_ids(&[z(a + 1, al)], v.clone())? } else { NCPoly::zero() };
                        let e = if a == k + 1 { alg.normalize_ids(&[z(a - 1, al)], vinv.clone())? } else { NCPoly::zero() };
                        (w, e, f)
                    } else {
                        let m = 2 * ni - ki;
                        let w = (al as i32 == m) as i32 - (al as i32 == m + 1) as i32;
                        let f = if al as i32 == m { alg.normalize_ids(&[z(a, al + 1)], v.clone())? } else { NCPoly::zero() };
                        let e = if al as i32 == m + 1 { alg.normalize_ids(&[z(a, al - 1)], vinv.clone())? } else { NCPoly::zero() };
                        (w, e, f)
                    };
                    lam[k as usize - 1] = w;
                    // E_k z* = −ε q^{-2}(F_k z)*, F_k z* = −ε q²(E_k z)*
                    let eps = real_form_sign(n, k);
                    let es = polmat::star(alg, &f).scale(&-&(&eps * &VScalar::q_pow(-2)));
                    let fs = polmat::star(alg, &e).scale(&-&(&eps * &VScalar::q_pow(2)));
                    t.raise.insert((k, g), e);
                    t.lower.insert((k, g), f);
                    t.raise.insert((k, gs), es);
                    t.lower.insert((k, gs), fs);
                }
                t.weights.insert(gs, lam.iter().map(|x| -x).collect());
                t.weights.insert(g, lam);
            }
        }
        Ok(t)
    }

    /// C[Mat_{N,2n}]_q acted on through its column index.
    pub fn rect(alg: &Algebra, n: u8) -> Result<Self> {
        let mut t = ActionTable::empty(n);
        let v = VScalar::v_pow(1);
        let vinv = VScalar::v_pow(-1);
        for &id in alg.generators() {
            if id.class != GenClass::T || id.j > 2 * n {
                return Err(Error::MissingAction(format!("{id} in a 2n-column table, n = {n}")));
            }
            let g = alg.gen(id)?;
            let (i, j) = (id.i, id.j);
            let mut lam = Vec::new();
            for k in 1..2 * n {
                lam.push((j == k) as i32 - (j == k + 1) as i32);
                let e = if j == k + 1 { alg.normalize_ids(&[GeneratorId::new(GenClass::T, i, j - 1)], vinv.clone())? } else { NCPoly::zero() };
                let f = if j == k { alg.normalize_ids(&[GeneratorId::new(GenClass::T, i, j + 1)], v.clone())? } else { NCPoly::zero() };
                t.raise.insert((k, g), e);
                t.lower.insert((k, g), f);
            }
            t.weights.insert(g, lam);
        }
        Ok(t)
    }

    fn check(&self, g: UqGen) -> Result<()> {
        if g.i == 0 || g.i >= 2 * self.n {
            return Err(Error::IndexOutOfRange(format!("{g} for n = {}", self.n)));
        }
        Ok(())
    }

    fn gen_weight(&self, alg: &Algebra, g: Gen) -> Result<&Vec<i32>> {
        self.weights.get(&g).ok_or_else(|| Error::MissingAction(alg.id(g).to_string()))
    }

    /// Weight vector (λ_1, …, λ_{2n−1}) of a word: K_i w = q^{λ_i} w.
    pub fn word_weight(&self, alg: &Algebra, w: &[Gen]) -> Result<Vec<i32>> {
        let mut lam = vec![0; 2 * self.n as usize - 1];
        for &g in w {
            for (x, y) in lam.iter_mut().zip(self.gen_weight(alg, g)?) {
                *x += y;
            }
        }
        Ok(lam)
    }

    /// Common weight of every term; errors unless p is a weight vector.
    pub fn weight(&self, alg: &Algebra, p: &NCPoly) -> Result<Vec<i32>> {
        let mut out: Option<Vec<i32>> = None;
        for (w, _) in p.terms() {
            let lam = self.word_weight(alg, w)?;
            match &out {
                Some(o) if *o != lam => return Err(Error::NotWeightHomogeneous),
                _ => out = Some(lam),
            }
        }
        Ok(out.unwrap_or_else(|| vec![0; 2 * self.n as usize - 1]))
    }

    /// H_0 eigenvalue Σ_{j<n} j(λ_j + λ_{2n−j}) + nλ_n.
    pub fn h0(&self, lam: &[i32]) -> i32 {
        let n = self.n as usize;
        let mut h = n as i32 * lam[n - 1];
        for j in 1..n {
            h += j as i32 * (lam[j - 1] + lam[2 * n - j - 1]);
        }
        h
    }

    /// r with H_0 p = 2r p.
    pub fn h0_grade(&self, alg: &Algebra, p: &NCPoly) -> Result<i32> {
        let h = self.h0(&self.weight(alg, p)?);
        if h % 2 != 0 {
            return Err(Error::NotWeightHomogeneous);
        }
        Ok(h / 2)
    }

    fn k_scalar(&self, alg: &Algebra, i: u8, w: &[Gen], inverse: bool) -> Result<VScalar> {
        let mut e = 0;
        for &g in w {
            e += self.gen_weight(alg, g)?[i as usize - 1];
        }
        Ok(VScalar::q_pow(if inverse { -e } else { e }))
    }

    fn entry(&self, alg: &Algebra, g: UqGen, x: Gen) -> Result<&NCPoly> {
        let map = if g.kind == UqKind::E { &self.raise } else { &self.lower };
        map.get(&(g.i, x)).ok_or_else(|| Error::MissingAction(format!("{g} on {}", alg.id(x))))
    }

    /// ξ applied to c·w for any word w (not necessarily normal), by
    /// E(fg) = E(f)g + K(f)E(g) and F(fg) = F(f)K^{-1}(g) + fF(g).
    pub fn act_word(&self, alg: &Algebra, g: UqGen, w: &[Gen], c: &VScalar) -> Result<NCPoly> {
        self.check(g)?;
        match g.kind {
            UqKind::K | UqKind::KInv => {
                let s = self.k_scalar(alg, g.i, w, g.kind == UqKind::KInv)?;
                Ok(alg.normalize(w, c * &s))
            }
            UqKind::E | UqKind::F => {
                let mut out = NCPoly::zero();
                for pos in 0..w.len() {
                    let (pre, rest) = w.split_at(pos);
                    let (x, post) = (rest[0], &rest[1..]);
                    let s = match g.kind {
                        UqKind::E => self.k_scalar(alg, g.i, pre, false)?,
                        _ => self.k_scalar(alg, g.i, post, true)?,
                    };
                    for (mid, d) in self.entry(alg, g, x)?.terms() {
                        let mut word: Word = pre.iter().copied().collect();
                        word.extend(mid.iter().copied());
                        word.extend(post.iter().copied());
                        out += &alg.normalize(&word, &(c * &s) * d);
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn act(&self, alg: &Algebra, g: UqGen, p: &NCPoly) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            out += &self.act_word(alg, g, w, c)?;
        }
        Ok(out)
    }

    /// A formal expression applied to p, each word acting right to left.
    pub fn act_expr(&self, alg: &Algebra, x: &UqExpr, p: &NCPoly) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (c, word) in x {
            let mut acc = p.clone();
            for &g in word.iter().rev() {
                acc = self.act(alg, g, &acc)?;
            }
            out.add_assign_scaled(&acc, c);
        }
        Ok(out)
    }
}

/// Elements of A1 ⊗ A2 as coefficients on pairs of normal words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tensor {
    terms: BTreeMap<(Word, Word), VScalar>,
}

impl Tensor {
    pub fn add_term(&mut self, a: Word, b: Word, c: VScalar) {
        let e = self.terms.entry((a.clone(), b.clone())).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn add_product(&mut self, a: &NCPoly, b: &NCPoly, c: &VScalar) {
        for (wa, x) in a.terms() {
            for (wb, y) in b.terms() {
                self.add_term(wa.clone(), wb.clone(), &(c * x) * y);
            }
        }
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

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &VScalar)> {
        self.terms.iter()
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &VScalar) -> Tensor {
        let mut out = Tensor::default();
        for ((a, b), x) in &self.terms {
            out.add_term(a.clone(), b.clone(), x * c);
        }
        out
    }

    pub fn render(&self, a1: &Algebra, a2: &Algebra, limit: usize) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .take(limit)
            .map(|((a, b), c)| format!("({c}) {} ⊗ {}", a1.render_word(a), a2.render_word(b)))
            .collect();
        let more = if self.len() > limit { format!(" + … ({} terms)", self.len()) } else { String::new() };
        format!("{}{more}", parts.join(" + "))
    }
}

/// One leg of a tensor: an algebra with its action.
pub struct Leg<'a> {
    pub alg: &'a Algebra,
    pub table: &'a ActionTable,
}

/// Δ(E) = E⊗1 + K⊗E, Δ(F) = F⊗K^{-1} + 1⊗F, Δ(K^{±1}) = K^{±1}⊗K^{±1}.
pub fn act_tensor(g: UqGen, t: &Tensor, l1: &Leg, l2: &Leg) -> Result<Tensor> {
    let mut out = Tensor::default();
    let one = VScalar::one();
    for ((a, b), c) in t.terms() {
        let pa = NCPoly::monomial(a.clone(), VScalar::one());
        let pb = NCPoly::monomial(b.clone(), VScalar::one());
        match g.kind {
            UqKind::K | UqKind::KInv => {
                out.add_product(&l1.table.act_word(l1.alg, g, a, &one)?, &l2.table.act_word(l2.alg, g, b, &one)?, c);
            }
            UqKind::E => {
                out.add_product(&l1.table.act_word(l1.alg, g, a, &one)?, &pb, c);
                out.add_product(&l1.table.act_word(l1.alg, UqGen::k(g.i), a, &one)?, &l2.table.act_word(l2.alg, g, b, &one)?, c);
            }
            UqKind::F => {
                out.add_product(&l1.table.act_word(l1.alg, g, a, &one)?, &l2.table.act_word(l2.alg, UqGen::kinv(g.i), b, &one)?, c);
                out.add_product(&pa, &l2.table.act_word(l2.alg, g, b, &one)?, c);
            }
        }
    }
    Ok(out)
}

/// Residual lines of ξ·t − ε(ξ)t over all generators.
pub fn invariance_residuals(n: u8, t: &Tensor, l1: &Leg, l2: &Leg) -> Result<Vec<String>> {
    let mut res = Vec::new();
    for g in UqGen::all(n) {
        let d = act_tensor(g, t, l1, l2)?.sub(&t.scale(&g.counit()));
        if !d.is_zero() {
            res.push(format!("{g}: {}", d.render(l1.alg, l2.alg, 4)));
        }
    }
    Ok(res)
}

/// L = Σ_J (−q)^{l(J,J^c)} t_{[n],J} ⊗ t_{[n],J^c} and
/// L̄ = Σ_J (−q)^{−l(J,J^c)} t_{[n],J^c} ⊗ t_{[n],J} in C[Mat_{n,2n}]_q^{⊗2};
/// the second factor of each term carries the lower block of rows.
pub fn l_tensors(rect: &Algebra, n: u8) -> Result<(Tensor, Tensor)> {
    let rows = IndexSet::range(1, n);
    let mut l = Tensor::default();
    let mut lbar = Tensor::default();
    for j in IndexSet::subsets(2 * n, n as usize) {
        let jc = j.complement(2 * n);
        let s = j.inversions_with(&jc) as i32;
        let mj = qminor(rect, GenClass::T, &rows, &j)?;
        let mjc = qminor(rect, GenClass::T, &rows, &jc)?;
        l.add_product(&mj, &mjc, &VScalar::minus_q_pow(s));
        lbar.add_product(&mjc, &mj, &VScalar::minus_q_pow(-s));
    }
    Ok((l, lbar))
}

/// Invariance of L and L̄, plus two controls that must fail: t_{1,n}⊗1 in
/// the rectangular model and z_n^n⊗1 in Pol(Mat_n)_q ⊗ Pol(Mat_n)_q.
pub fn invariance_check(n: u8) -> Report {
    const SUITE: &str = "invariance";
    Report::timed(|| {
        let run = || -> Result<Vec<String>> {
            let rect = matrix_algebra(GenClass::T, n, 2 * n);
            let table = ActionTable::rect(&rect, n)?;
            let leg = Leg { alg: &rect, table: &table };
            let (l, lbar) = l_tensors(&rect, n)?;
            let mut res = Vec::new();
            for (name, t) in [("L", &l), ("Lbar", &lbar)] {
                res.extend(invariance_residuals(n, t, &leg, &leg)?.into_iter().map(|r| format!("{name} {r}")));
            }
            let mut control = Tensor::default();
            control.add_term(rect.word(&[GeneratorId::new(GenClass::T, 1, n)])?, Word::new(), VScalar::one());
            let fails = invariance_residuals(n, &control, &leg, &leg)?;
            if !fails.iter().any(|r| r.starts_with(&format!("F{n}:"))) {
                res.push(format!("control t[1,{n}]⊗1 is not moved by F{n}"));
            }
            let pol = polmat::pol_algebra(n, GenClass::Z);
            let pt = ActionTable::pol(&pol, n)?;
            let pleg = Leg { alg: &pol, table: &pt };
            let mut zc = Tensor::default();
            zc.add_term(pol.word(&[GeneratorId::new(GenClass::Z, n, n)])?, Word::new(), VScalar::one());
            let fails = invariance_residuals(n, &zc, &pleg, &pleg)?;
            if !fails.iter().any(|r| r.starts_with(&format!("F{n}:"))) {
                res.push(format!("control z[{n},{n}]⊗1 is not moved by F{n}"));
            }
            Ok(res)
        };
        match run() {
            Ok(res) => Report::from_residuals(SUITE, n as u32, 0, res, false),
            Err(e) => Report::error(SUITE, n as u32, 0, e),
        }
    })
}

/// Normal monomials of total degree ≤ `deg` in `gens`, which must be listed
/// in monomial order (all descending pairs rewrite, so normal words are the
/// non-decreasing ones).
pub fn sorted_monomials(alg: &Algebra, gens: &[GeneratorId], deg: usize) -> Result<Vec<Word>> {
    let ids: Vec<Gen> = gens.iter().map(|&g| alg.gen(g)).collect::<Result<_>>()?;
    let mut out = vec![Word::new()];
    let mut frontier = vec![Word::new()];
    for _ in 0..deg {
        let mut next = Vec::new();
        for w in &frontier {
            for &g in &ids {
                if w.last().is_none_or(|&l| l <= g) {
                    let mut w2 = w.clone();
                    w2.push(g);
                    next.push(w2);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out)
}

/// Normal monomials of Pol(Mat_n)_q of bidegree ≤ (d, d).
pub fn pol_domain(alg: &Algebra, n: u8, d: usize) -> Result<Vec<Word>> {
    let holo = alg.generators()[0].class;
    let hs: Vec<GeneratorId> = alg.generators().iter().copied().filter(|g| g.class == holo).collect();
    let ss: Vec<GeneratorId> = alg.generators().iter().copied().filter(|g| g.class == holo.star()).collect();
    debug_assert_eq!(hs.len(), (n as usize).pow(2));
    let a = sorted_monomials(alg, &hs, d)?;
    let b = sorted_monomials(alg, &ss, d)?;
    let mut out = Vec::new();
    for x in &a {
        for y in &b {
            let mut w = x.clone();
            w.extend(y.iter().copied());
            out.push(w);
        }
    }
    Ok(out)
}

/// Residuals of ξ(gh) = ξ(normal form of gh) over every rewrite rule.
pub fn relation_residuals(alg: &Algebra, table: &ActionTable) -> Result<Vec<String>> {
    let mut res = Vec::new();
    let count = alg.generators().len() as Gen;
    let one = VScalar::one();
    for g in 0..count {
        for h in 0..count {
            let Some(rhs) = alg.rule(g, h) else { continue };
            let mut nf = NCPoly::zero();
            for (c, w) in rhs {
                nf.add_term(w.clone(), c.clone());
            }
            for x in UqGen::all(table.n) {
                let lhs = table.act_word(alg, x, &[g, h], &one)?;
                let d = &lhs - &table.act(alg, x, &nf)?;
                if !d.is_zero() {
                    res.push(format!("{x} on {}·{}: {}", alg.id(g), alg.id(h), alg.render(&d)));
                }
            }
        }
    }
    Ok(res)
}

fn cartan(i: u8, j: u8) -> i32 {
    match i.abs_diff(j) {
        0 => 2,
        1 => -1,
        _ => 0,
    }
}

/// Defining relations of U_q sl_2n as operator identities X = 0.
pub fn uq_relations(n: u8) -> Vec<(String, UqExpr)> {
    let one = VScalar::one;
    let m1 = || VScalar::from_int(-1);
    let mut out = Vec::new();
    let r = 2 * n - 1;
    for i in 1..=r {
        out.push((format!("K{i}K{i}^-1 = 1"), vec![(one(), vec![UqGen::k(i), UqGen::kinv(i)]), (m1(), vec![])]));
        for j in 1..=r {
            let a = cartan(i, j);
            out.push((
                format!("K{i}E{j}K{i}^-1 = q^{a}E{j}"),
                vec![(one(), vec![UqGen::k(i), UqGen::e(j), UqGen::kinv(i)]), (-VScalar::q_pow(a), vec![UqGen::e(j)])],
            ));
            out.push((
                format!("K{i}F{j}K{i}^-1 = q^{}F{j}", -a),
                vec![(one(), vec![UqGen::k(i), UqGen::f(j), UqGen::kinv(i)]), (-VScalar::q_pow(-a), vec![UqGen::f(j)])],
            ));
            out.push((format!("K{i}K{j} = K{j}K{i}"), vec![(one(), vec![UqGen::k(i), UqGen::k(j)]), (m1(), vec![UqGen::k(j), UqGen::k(i)])]));
            let mut comm: UqExpr = vec![(one(), vec![UqGen::e(i), UqGen::f(j)]), (m1(), vec![UqGen::f(j), UqGen::e(i)])];
            if i == j {
                let d = (&VScalar::q_pow(1) - &VScalar::q_pow(-1)).inv();
                comm.push((-d.clone(), vec![UqGen::k(i)]));
                comm.push((d, vec![UqGen::kinv(i)]));
            }
            out.push((format!("[E{i},F{j}]"), comm));
            if i == j {
                continue;
            }
            for (name, mk) in [("E", UqGen::e as fn(u8) -> UqGen), ("F", UqGen::f as fn(u8) -> UqGen)] {
                let (x, y) = (mk(i), mk(j));
                if a == -1 {
                    let qq = -&(&VScalar::q_pow(1) + &VScalar::q_pow(-1));
                    out.push((
                        format!("Serre {name}{i}{name}{j}"),
                        vec![(one(), vec![x, x, y]), (qq, vec![x, y, x]), (one(), vec![y, x, x])],
                    ));
                } else if i < j {
                    out.push((format!("{name}{i}{name}{j} = {name}{j}{name}{i}"), vec![(one(), vec![x, y]), (m1(), vec![y, x])]));
                }
            }
        }
    }
    out
}

/// Each relation of U_q sl_2n applied to each word of `domain`.
pub fn operator_residuals(alg: &Algebra, table: &ActionTable, domain: &[Word]) -> Result<Vec<String>> {
    let mut res = Vec::new();
    let rels = uq_relations(table.n);
    for w in domain {
        let p = NCPoly::monomial(w.clone(), VScalar::one());
        for (name, x) in &rels {
            let d = table.act_expr(alg, x, &p)?;
            if !d.is_zero() {
                res.push(format!("{name} on {}: {}", alg.render_word(w), alg.render(&d)));
            }
        }
    }
    Ok(res)
}

/// (ξf)* = (S(ξ))* f* for every generator ξ and every f in `domain`.
pub fn star_compat_residuals(alg: &Algebra, table: &ActionTable, domain: &[Word]) -> Result<Vec<String>> {
    let n = table.n;
    let mut res = Vec::new();
    for g in UqGen::all(n) {
        let sx = ustar_expr(n, &antipode(g));
        for w in domain {
            let f = NCPoly::monomial(w.clone(), VScalar::one());
            let lhs = polmat::star(alg, &table.act(alg, g, &f)?);
            let rhs = table.act_expr(alg, &sx, &polmat::star(alg, &f))?;
            let d = &lhs - &rhs;
            if !d.is_zero() {
                res.push(format!("{g} on {}: {}", alg.render_word(w), alg.render(&d)));
            }
        }
    }
    Ok(res)
}

/// Module-algebra soundness: defining relations of Pol(Mat_n)_q and
/// C[Mat_{n,2n}]_q are respected; U_q sl_2n relations hold as operators on
/// Pol bidegree ≤ (2,2) and on rectangular degree ≤ 2; star compatibility
/// on Pol bidegree ≤ (1,1).
pub fn action_check(n: u8) -> Report {
    const SUITE: &str = "action";
    Report::timed(|| {
        let run = || -> Result<Vec<String>> {
            let pol = polmat::pol_algebra(n, GenClass::Z);
            let pt = ActionTable::pol(&pol, n)?;
            let rect = matrix_algebra(GenClass::T, n, 2 * n);
            let rt = ActionTable::rect(&rect, n)?;
            let mut res = Vec::new();
            res.extend(relation_residuals(&pol, &pt)?.into_iter().map(|r| format!("Pol relation: {r}")));
            res.extend(relation_residuals(&rect, &rt)?.into_iter().map(|r| format!("rect relation: {r}")));
            let dom = pol_domain(&pol, n, 2)?;
            res.extend(operator_residuals(&pol, &pt, &dom)?.into_iter().map(|r| format!("Pol operator: {r}")));
            let rdom = sorted_monomials(&rect, rect.generators(), 2)?;
            res.extend(operator_residuals(&rect, &rt, &rdom)?.into_iter().map(|r| format!("rect operator: {r}")));
            let sdom = pol_domain(&pol, n, 1)?;
            res.extend(star_compat_residuals(&pol, &pt, &sdom)?.into_iter().map(|r| format!("star: {r}")));
            Ok(res)
        };
        match run() {
            Ok(res) => Report::from_residuals(SUITE, n as u32, 2, res, false),
            Err(e) => Report::error(SUITE, n as u32, 2, e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(a: u8, al: u8) -> GeneratorId {
        GeneratorId::new(GenClass::Z, a, al)
    }

    #[test]
    fn table_examples_n1() {
        let alg = polmat::pol_algebra(1, GenClass::Z);
        let t = ActionTable::pol(&alg, 1).unwrap();
        let zz = alg.generator(z(1, 1)).unwrap();
        let v = VScalar::v_pow(1);
        assert_eq!(t.act(&alg, UqGen::f(1), &zz).unwrap(), NCPoly::scalar(v.clone()));
        let z2 = alg.mul(&zz, &zz);
        let z3 = alg.mul(&z2, &zz);
        assert_eq!(t.act(&alg, UqGen::e(1), &zz).unwrap(), z2.scale(&-v.clone()));
        assert_eq!(t.act(&alg, UqGen::k(1), &zz).unwrap(), zz.scale(&VScalar::q_pow(2)));
        let expect = z3.scale(&-&(&v * &(&VScalar::one() + &VScalar::q_pow(2))));
        assert_eq!(t.act(&alg, UqGen::e(1), &z2).unwrap(), expect);
        assert!(t.act(&alg, UqGen::e(1), &NCPoly::one()).unwrap().is_zero());
        assert_eq!(t.act(&alg, UqGen::k(1), &NCPoly::one()).unwrap(), NCPoly::one());
        assert!(matches!(t.act(&alg, UqGen::e(2), &zz), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn rect_example() {
        let rect = matrix_algebra(GenClass::T, 1, 2);
        let t = ActionTable::rect(&rect, 1).unwrap();
        let t11 = rect.generator(GeneratorId::new(GenClass::T, 1, 1)).unwrap();
        let t12 = rect.generator(GeneratorId::new(GenClass::T, 1, 2)).unwrap();
        assert_eq!(t.act(&rect, UqGen::f(1), &t11).unwrap(), t12.scale(&VScalar::v_pow(1)));
    }

    #[test]
    fn weights_and_grading() {
        let a1 = polmat::pol_algebra(1, GenClass::Z);
        let t1 = ActionTable::pol(&a1, 1).unwrap();
        let zz = a1.generator(z(1, 1)).unwrap();
        assert_eq!(t1.weight(&a1, &zz).unwrap(), vec![2]);
        assert_eq!(t1.h0_grade(&a1, &zz).unwrap(), 1);
        assert_eq!(t1.h0_grade(&a1, &NCPoly::one()).unwrap(), 0);
        let a2 = polmat::pol_algebra(2, GenClass::Z);
        let t2 = ActionTable::pol(&a2, 2).unwrap();
        let z11 = a2.generator(z(1, 1)).unwrap();
        assert_eq!(t2.weight(&a2, &z11).unwrap(), vec![1, 0, 1]);
        assert_eq!(t2.h0_grade(&a2, &z11).unwrap(), 1);
        let mixed = &z11 + &a2.generator(z(1, 2)).unwrap();
        assert_eq!(t2.weight(&a2, &mixed), Err(Error::NotWeightHomogeneous));
    }

    #[test]
    fn star_of_generators() {
        assert_eq!(ustar(2, UqGen::k(1)), vec![(VScalar::one(), vec![UqGen::k(1)])]);
        assert_eq!(ustar(2, UqGen::e(2)), vec![(VScalar::from_int(-1), vec![UqGen::k(2), UqGen::f(2)])]);
        // (K F)* = F* K* = E K^{-1} K
        let ee = ustar_expr(2, &ustar(2, UqGen::e(1)));
        assert_eq!(ee, vec![(VScalar::one(), vec![UqGen::e(1), UqGen::kinv(1), UqGen::k(1)])]);
        // ** = id as operators on Pol(Mat_2)
        let alg = polmat::pol_algebra(2, GenClass::Z);
        let t = ActionTable::pol(&alg, 2).unwrap();
        for g in UqGen::all(2) {
            let twice = ustar_expr(2, &ustar(2, g));
            for w in pol_domain(&alg, 2, 1).unwrap() {
                let p = NCPoly::monomial(w, VScalar::one());
                assert_eq!(t.act_expr(&alg, &twice, &p).unwrap(), t.act(&alg, g, &p).unwrap());
            }
        }
    }

    #[test]
    fn star_compatibility_example() {
        // (E_n z_n^n)* = (S(E_n))* (z_n^n)*
        let alg = polmat::pol_algebra(2, GenClass::Z);
        let t = ActionTable::pol(&alg, 2).unwrap();
        let f = alg.generator(z(2, 2)).unwrap();
        let lhs = polmat::star(&alg, &t.act(&alg, UqGen::e(2), &f).unwrap());
        let rhs = t.act_expr(&alg, &ustar_expr(2, &antipode(UqGen::e(2))), &polmat::star(&alg, &f)).unwrap();
        assert_eq!(lhs, rhs);
        assert!(!lhs.is_zero());
    }

    #[test]
    fn star_compatibility_n1() {
        let alg = polmat::pol_algebra(1, GenClass::Z);
        let t = ActionTable::pol(&alg, 1).unwrap();
        let dom = pol_domain(&alg, 1, 2).unwrap();
        assert_eq!(star_compat_residuals(&alg, &t, &dom).unwrap(), Vec::<String>::new());
    }

    #[test]
    fn soundness_n1() {
        let r = action_check(1);
        assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn invariance_n1() {
        let r = invariance_check(1);
        assert!(r.passed(), "{:?}", r);
    }
}
