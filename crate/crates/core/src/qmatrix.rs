//! Quantum matrix algebras C[Mat_{N,M}]_q, quantum minors and determinants,
//! the Laplace splitting of det_q and the row-block multiplication map.

use crate::error::{Error, Result};
use crate::ncpoly::{frt_rule, Algebra, GenClass, GeneratorId, NCPoly};
use crate::report::Report;
use crate::scalar::VScalar;

/// A strictly increasing list of 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(Vec<u8>);

impl IndexSet {
    pub fn new(mut idx: Vec<u8>) -> Result<Self> {
        let len = idx.len();
        idx.sort_unstable();
        idx.dedup();
        if idx.len() != len || idx.first() == Some(&0) {
            return Err(Error::IndexOutOfRange(format!("{idx:?}")));
        }
        Ok(IndexSet(idx))
    }

    /// {lo, lo+1, …, hi}; empty when lo > hi.
    pub fn range(lo: u8, hi: u8) -> Self {
        IndexSet((lo..=hi).collect())
    }

    pub fn card(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn contains(&self, i: u8) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// Complement inside {1, …, total}.
    pub fn complement(&self, total: u8) -> IndexSet {
        IndexSet((1..=total).filter(|i| !self.contains(*i)).collect())
    }

    /// The set with `i` removed.
    pub fn without(&self, i: u8) -> IndexSet {
        IndexSet(self.0.iter().copied().filter(|&x| x != i).collect())
    }

    pub fn intersect(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.0.iter().copied().filter(|i| other.contains(*i)).collect())
    }

    /// l(I, J) = card{(i, j) ∈ I×J : i > j}.
    pub fn inversions_with(&self, other: &IndexSet) -> u32 {
        let mut c = 0;
        for &i in &self.0 {
            for &j in &other.0 {
                if i > j {
                    c += 1;
                }
            }
        }
        c
    }

    /// All k-element subsets of {1, …, total} in lexicographic order.
    pub fn subsets(total: u8, k: usize) -> Vec<IndexSet> {
        fn rec(start: u8, total: u8, k: usize, cur: &mut Vec<u8>, out: &mut Vec<IndexSet>) {
            if cur.len() == k {
                out.push(IndexSet(cur.clone()));
                return;
            }
            for i in start..=total {
                cur.push(i);
                rec(i + 1, total, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(1, total, k, &mut Vec::new(), &mut out);
        out
    }
}

/// Permutations of 0..k with their inversion counts.
pub fn permutations(k: usize) -> Vec<(Vec<usize>, u32)> {
    fn rec(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for p in 0..rest.len() {
            let x = rest.remove(p);
            cur.push(x);
            rec(rest, cur, out);
            cur.pop();
            rest.insert(p, x);
        }
    }
    let mut perms = Vec::new();
    rec(&mut (0..k).collect(), &mut Vec::new(), &mut perms);
    perms
        .into_iter()
        .map(|s| {
            let inv = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).filter(|&(i, j)| s[i] > s[j]).count();
            (s, inv as u32)
        })
        .collect()
}

/// C[Mat_{rows,cols}]_q on generators of the given class, indexed (row, column).
pub fn matrix_algebra(class: GenClass, rows: u8, cols: u8) -> Algebra {
    let mut gens = Vec::new();
    for i in 1..=rows {
        for j in 1..=cols {
            gens.push(GeneratorId::new(class, i, j));
        }
    }
    Algebra::new(format!("{}-Mat{}x{}", class.prefix(), rows, cols), gens, move |g, h| {
        frt_rule(class, (g.i, g.j), (h.i, h.j))
    })
}

/// Row-permutation form Σ_s (−q)^{l(s)} x_{i_{s(1)} j_1} ⋯ x_{i_{s(k)} j_k}.
pub fn qminor(alg: &Algebra, class: GenClass, rows: &IndexSet, cols: &IndexSet) -> Result<NCPoly> {
    if rows.card() != cols.card() {
        return Err(Error::SizeMismatch(format!("{} rows, {} columns", rows.card(), cols.card())));
    }
    let (r, c) = (rows.as_slice(), cols.as_slice());
    let mut out = NCPoly::zero();
    for (s, inv) in permutations(r.len()) {
        let ids: Vec<GeneratorId> = (0..r.len()).map(|m| GeneratorId::new(class, r[s[m]], c[m])).collect();
        out += &alg.normalize_ids(&ids, VScalar::minus_q_pow(inv as i32))?;
    }
    Ok(out)
}

/// Column-permutation form Σ_s (−q)^{l(s)} x_{i_1 j_{s(1)}} ⋯ x_{i_k j_{s(k)}}.
pub fn qminor_columns(alg: &Algebra, class: GenClass, rows: &IndexSet, cols: &IndexSet) -> Result<NCPoly> {
    if rows.card() != cols.card() {
        return Err(Error::SizeMismatch(format!("{} rows, {} columns", rows.card(), cols.card())));
    }
    let (r, c) = (rows.as_slice(), cols.as_slice());
    let mut out = NCPoly::zero();
    for (s, inv) in permutations(r.len()) {
        let ids: Vec<GeneratorId> = (0..r.len()).map(|m| GeneratorId::new(class, r[m], c[s[m]])).collect();
        out += &alg.normalize_ids(&ids, VScalar::minus_q_pow(inv as i32))?;
    }
    Ok(out)
}

/// Quantum determinant of the N×N matrix of the given class.
pub fn qdet(alg: &Algebra, class: GenClass, n: u8) -> Result<NCPoly> {
    let all = IndexSet::range(1, n);
    qminor(alg, class, &all, &all)
}

/// Generators of `alg` whose product with det_q does not commute.
pub fn centrality_residuals(alg: &Algebra, det: &NCPoly) -> Vec<String> {
    let mut out = Vec::new();
    for &g in alg.generators() {
        let x = alg.generator(g).expect("generator of its own algebra");
        let c = alg.commutator(det, &x);
        if !c.is_zero() {
            out.push(format!("[det_q, {g}] = {}", alg.render(&c)));
        }
    }
    out
}

/// Verifies that det_q is central in C[Mat_N]_q.
pub fn centrality_check(n: u8) -> Report {
    Report::timed(|| {
        let alg = matrix_algebra(GenClass::T, n, n);
        match qdet(&alg, GenClass::T, n) {
            Ok(d) => Report::from_residuals("central", n as u32, 0, centrality_residuals(&alg, &d), false),
            Err(e) => Report::error("central", n as u32, 0, e),
        }
    })
}

/// Both orderings of the Laplace splitting of det_q along the upper n rows:
/// returns (Σ_J (−q)^{l} M_top M_bot, Σ_J (−q)^{sign·l} M_bot M_top).
/// The correct sign for the reversed order is −1.
pub fn laplace_sums(alg: &Algebra, n: u8, reversed_sign: i32) -> Result<(NCPoly, NCPoly)> {
    let top = IndexSet::range(1, n);
    let bot = IndexSet::range(n + 1, 2 * n);
    let mut forward = NCPoly::zero();
    let mut reversed = NCPoly::zero();
    for j in IndexSet::subsets(2 * n, n as usize) {
        let jc = j.complement(2 * n);
        let l = j.inversions_with(&jc) as i32;
        let mt = qminor(alg, GenClass::T, &top, &j)?;
        let mb = qminor(alg, GenClass::T, &bot, &jc)?;
        forward.add_assign_scaled(&alg.mul(&mt, &mb), &VScalar::minus_q_pow(l));
        reversed.add_assign_scaled(&alg.mul(&mb, &mt), &VScalar::minus_q_pow(reversed_sign * l));
    }
    Ok((forward, reversed))
}

/// Laplace identity check with an explicit sign for the reversed order; a
/// sign of +1 is the negative control.
pub fn laplace_check_with(n: u8, reversed_sign: i32) -> Report {
    Report::timed(|| {
        let alg = matrix_algebra(GenClass::T, 2 * n, 2 * n);
        let run = || -> Result<Vec<String>> {
            let det = qdet(&alg, GenClass::T, 2 * n)?;
            let (f, r) = laplace_sums(&alg, n, reversed_sign)?;
            let mut res = Vec::new();
            let df = &f - &det;
            if !df.is_zero() {
                res.push(format!("forward - det_q = {}", alg.render(&df)));
            }
            let dr = &r - &det;
            if !dr.is_zero() {
                res.push(format!("reversed - det_q = {}", alg.render(&dr)));
            }
            Ok(res)
        };
        match run() {
            Ok(res) => Report::from_residuals("laplace", n as u32, 0, res, false),
            Err(e) => Report::error("laplace", n as u32, 0, e),
        }
    })
}

pub fn laplace_check(n: u8) -> Report {
    laplace_check_with(n, -1)
}

/// The multiplication map C[Mat_{n,2n}]_q ⊗ C[Mat_{n,2n}]_q → C[Mat_{2n}]_q:
/// the second factor's rows are shifted to n+1..2n, then both are multiplied.
pub fn m_map(rect: &Algebra, square: &Algebra, n: u8, top: &NCPoly, bottom: &NCPoly) -> Result<NCPoly> {
    let lift = |p: &NCPoly, shift: u8| -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            let ids: Vec<GeneratorId> = w
                .iter()
                .map(|&g| {
                    let id = rect.id(g);
                    GeneratorId::new(id.class, id.i + shift, id.j)
                })
                .collect();
            out += &square.normalize_ids(&ids, c.clone())?;
        }
        Ok(out)
    };
    Ok(square.mul(&lift(top, 0)?, &lift(bottom, n)?))
}
