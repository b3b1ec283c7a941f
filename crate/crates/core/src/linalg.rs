//! Dense Gaussian elimination over ℚ(v).

use crate::scalar::VScalar;

/// Row-reduced echelon form, in place. Returns the pivot column of each
/// nonzero row.
pub fn rref(m: &mut Vec<Vec<VScalar>>) -> Vec<usize> {
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].inv();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (x, p) in other.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &(p * &f);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    m.truncate(row);
    pivots
}

/// A basis of {x : A x = 0}.
pub fn nullspace(a: &[Vec<VScalar>], cols: usize) -> Vec<Vec<VScalar>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![VScalar::zero(); cols];
        x[free] = VScalar::one();
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = -&m[r][free];
        }
        basis.push(x);
    }
    basis
}

/// Some solution of A x = b, or None when inconsistent.
pub fn solve(a: &[Vec<VScalar>], b: &[VScalar]) -> Option<Vec<VScalar>> {
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut m: Vec<Vec<VScalar>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![VScalar::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = m[r][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(k: i64) -> VScalar {
        VScalar::from_int(k)
    }

    #[test]
    fn solves_and_detects_inconsistency() {
        let q = VScalar::q_pow(1);
        let a = vec![vec![s(1), q.clone()], vec![s(0), s(1)]];
        let x = solve(&a, &[s(1), s(2)]).unwrap();
        assert_eq!(x[1], s(2));
        assert_eq!(&x[0] + &(&q * &s(2)), s(1));
        let a = vec![vec![s(1), s(1)], vec![s(2), s(2)]];
        assert!(solve(&a, &[s(1), s(3)]).is_none());
    }

    #[test]
    fn nullspace_dimension() {
        let a = vec![vec![s(1), s(2), s(3)]];
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot = &(&v[0] + &(&v[1] * &s(2))) + &(&v[2] * &s(3));
            assert!(dot.is_zero());
        }
    }
}
