//! The classical limit v = 1: commutative images of computed elements checked
//! against closed forms built independently from ordinary determinants.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::hua::{hua_sum_kernel, p11_check, HuaSystem, Weights};
use crate::kernel::{Kernel, KernelAlgebra};
use crate::ncpoly::{Algebra, GenClass, GeneratorId, NCPoly};
use crate::polmat::y_element;
use crate::qmatrix::permutations;
use crate::report::Report;
use crate::scalar::VScalar;

/// Commutative polynomial over ℚ; a monomial is a sorted list of variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CPoly(BTreeMap<Vec<GeneratorId>, BigRational>);

impl CPoly {
    pub fn constant(c: BigRational) -> Self {
        let mut p = CPoly::default();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn var(id: GeneratorId) -> Self {
        let mut p = CPoly::default();
        p.add_term(vec![id], BigRational::one());
        p
    }

    pub fn add_term(&mut self, mut m: Vec<GeneratorId>, c: BigRational) {
        m.sort_unstable();
        let e = self.0.entry(m.clone()).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&m);
        }
    }

    pub fn add(&self, other: &CPoly) -> CPoly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> CPoly {
        let mut out = CPoly::default();
        for (m, x) in &self.0 {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &CPoly) -> CPoly {
        let mut out = CPoly::default();
        for (a, x) in &self.0 {
            for (b, y) in &other.0 {
                let mut m = a.clone();
                m.extend(b.iter().copied());
                out.add_term(m, x * y);
            }
        }
        out
    }

    /// Keeps monomials with at most `d` factors of class Z and at most `d` of ZStar.
    pub fn truncate(&self, d: usize) -> CPoly {
        let count = |m: &[GeneratorId], c| m.iter().filter(|g| g.class == c).count();
        CPoly(
            self.0
                .iter()
                .filter(|(m, _)| count(m, GenClass::Z) <= d && count(m, GenClass::ZStar) <= d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn render(&self, limit: usize) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .take(limit)
            .map(|(m, c)| {
                let w: Vec<String> = m.iter().map(|g| g.to_string()).collect();
                format!("({c}) {}", if w.is_empty() { "1".into() } else { w.join("*") })
            })
            .collect();
        parts.join(" + ")
    }
}

/// Image at v = 1, where every algebra in scope becomes commutative.
pub fn at_v1(alg: &Algebra, p: &NCPoly) -> Result<CPoly> {
    let one = BigRational::one();
    let mut out = CPoly::default();
    for (w, c) in p.terms() {
        out.add_term(w.iter().map(|&g| alg.id(g)).collect(), c.eval(&one)?);
    }
    Ok(out)
}

/// Both legs of a kernel with vanishing t- and τ-powers merged at v = 1.
pub fn kernel_at_v1(ka: &KernelAlgebra, k: &Kernel) -> Result<CPoly> {
    let one = BigRational::one();
    let mut out = CPoly::default();
    for (p, f, g, c) in k.terms() {
        if *p != [0; 4] {
            return Err(crate::error::Error::UnbalancedPowers(p[0], p[1]));
        }
        let mut m: Vec<GeneratorId> = f.iter().map(|&x| ka.first.id(x)).collect();
        m.extend(g.iter().map(|&x| ka.second.id(x)));
        out.add_term(m, c.eval(&one)?);
    }
    Ok(out)
}

/// det(1 − M) for a matrix of commutative polynomials.
pub fn det_one_minus(m: &[Vec<CPoly>]) -> CPoly {
    let k = m.len();
    let mut out = CPoly::default();
    for (perm, inv) in permutations(k) {
        let mut term = CPoly::constant(BigRational::from_integer(if inv % 2 == 0 { 1 } else { -1 }.into()));
        for (i, &j) in perm.iter().enumerate() {
            let mut entry = m[i][j].scale(&BigRational::from_integer((-1).into()));
            if i == j {
                entry = entry.add(&CPoly::one());
            }
            term = term.mul(&entry);
        }
        out = out.add(&term);
    }
    out
}

/// (X Y*)_{ab} = Σ_α x_a^α conj(y_b^α).
fn product_matrix(n: u8, x: GenClass, ystar: GenClass) -> Vec<Vec<CPoly>> {
    (1..=n)
        .map(|a| {
            (1..=n)
                .map(|b| {
                    (1..=n).fold(CPoly::default(), |acc, al| {
                        acc.add(&CPoly::var(GeneratorId::new(x, a, al)).mul(&CPoly::var(GeneratorId::new(ystar, b, al))))
                    })
                })
                .collect()
        })
        .collect()
}

/// det(1 − z z*) at q = 1.
pub fn classical_y(n: u8) -> CPoly {
    det_one_minus(&product_matrix(n, GenClass::Z, GenClass::ZStar))
}

/// (1 − X)^{-1} truncated, for X without constant term.
fn geometric_inverse(one_minus_x: &CPoly, d: usize) -> CPoly {
    let x = CPoly::one().add(&one_minus_x.scale(&BigRational::from_integer((-1).into())));
    let mut acc = CPoly::one();
    let mut pow = CPoly::one();
    for _ in 0..2 * d {
        pow = pow.mul(&x).truncate(d);
        acc = acc.add(&pow);
    }
    acc
}

fn power(p: &CPoly, e: u8, d: usize) -> CPoly {
    (0..e).fold(CPoly::one(), |acc, _| acc.mul(p).truncate(d))
}

/// det(1 − zz*)^n · det(1 − zζ*)^{-n} · det(1 − ζz*)^{-n}, truncated at
/// (d, d) in (z, z*).
pub fn classical_poisson(n: u8, d: usize) -> CPoly {
    let y = classical_y(n);
    let a = geometric_inverse(&det_one_minus(&product_matrix(n, GenClass::Z, GenClass::ZetaStar)), d);
    let b = geometric_inverse(&det_one_minus(&product_matrix(n, GenClass::Zeta, GenClass::ZStar)), d);
    power(&y, n, d).mul(&power(&a, n, d)).truncate(d).mul(&power(&b, n, d)).truncate(d)
}

/// Classical-limit oracles: scalar spot values, y against det(1 − zz*), the
/// full Poisson kernel against the classical closed form, the p11 pattern
/// n(n ζζ̄ − δδ), and the Hua intermediate n·(n Σ_c ζ_c^α ζ̄_c^β − n δ^{αβ}).
pub fn limits_check(n: u8, cutoff: u32) -> Report {
    const SUITE: &str = "limits";
    if cutoff < 1 {
        return Report::skipped(SUITE, n as u32, cutoff, "cutoff too small");
    }
    if crate::scalar::specialization().is_some() {
        return Report::skipped(SUITE, n as u32, cutoff, "classical limit needs symbolic coefficients");
    }
    Report::timed(|| {
        let run = || -> Result<Vec<String>> {
            let one = BigRational::one();
            let mut res = Vec::new();
            let qq = &VScalar::q_pow(1) - &VScalar::q_pow(-1);
            if !qq.eval(&one)?.is_zero() {
                res.push("q - q^-1 does not vanish at v = 1".into());
            }
            let ka = KernelAlgebra::new(n);
            let y = at_v1(&ka.first, &y_element(&ka.first, GenClass::Z, n))?;
            if y != classical_y(n) {
                res.push(format!("y at v=1 differs from det(1 - zz*): {}", y.add(&classical_y(n).scale(&-one.clone())).render(4)));
            }
            let p = ka.poisson_kernel(cutoff)?;
            let got = kernel_at_v1(&ka, &p)?;
            let want = classical_poisson(n, cutoff as usize);
            let diff = got.add(&want.scale(&-one.clone()));
            if !diff.is_zero() {
                res.push(format!("P at v=1 minus classical kernel ({} terms): {}", diff.len(), diff.render(4)));
            }
            let r = p11_check(n, cutoff);
            if !r.passed() {
                res.extend(r.residual_sample.into_iter().map(|x| format!("p11: {x}")));
            }
            let nn = BigRational::from_integer(n.into());
            for al in 1..=n {
                for be in 1..=n {
                    let s = hua_sum_kernel(&ka, &p, HuaSystem::A, Weights::Quantum, al, be)?;
                    let got = at_v1(&ka.second, &s)?;
                    let mut want = CPoly::default();
                    for c in 1..=n {
                        want.add_term(
                            vec![GeneratorId::new(GenClass::Zeta, c, al), GeneratorId::new(GenClass::ZetaStar, c, be)],
                            &nn * &nn,
                        );
                    }
                    if al == be {
                        want.add_term(Vec::new(), -(&nn * &nn));
                    }
                    if got != want {
                        res.push(format!("Hua sum ({al},{be}) at v=1: {}", got.render(4)));
                    }
                }
            }
            Ok(res)
        };
        match run() {
            Ok(res) => Report::from_residuals(SUITE, n as u32, cutoff, res, false),
            Err(e) => Report::error(SUITE, n as u32, cutoff, e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_of_one_by_one() {
        let z = GeneratorId::new(GenClass::Z, 1, 1);
        let y = classical_y(1);
        let mut want = CPoly::one();
        want.add_term(vec![z, z.star()], BigRational::from_integer((-1).into()));
        assert_eq!(y, want);
    }

    #[test]
    fn n1_kernel_matches_classical() {
        let r = limits_check(1, 3);
        assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn geometric_series_truncates() {
        let z = GeneratorId::new(GenClass::Z, 1, 1);
        let mut omx = CPoly::one();
        omx.add_term(vec![z], BigRational::from_integer((-1).into()));
        // (1 − z)^{-1} = 1 + z + z² up to z-degree 2
        assert_eq!(geometric_inverse(&omx, 2).len(), 3);
    }
}
