//! Determinants of polynomial matrices and Sylvester resultants.

use super::monomial::Var;
use super::poly::MPoly;
use super::PolyError;

pub type Mat3 = [[MPoly; 3]; 3];

/// 3×3 determinant by cofactor expansion along the first row.
pub fn mat3_det(m: &Mat3) -> MPoly {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        &(&m[r1][c1] * &m[r2][c2]) - &(&m[r1][c2] * &m[r2][c1])
    };
    let a = &m[0][0] * &minor(1, 2, 1, 2);
    let b = &m[0][1] * &minor(1, 2, 0, 2);
    let c = &m[0][2] * &minor(1, 2, 0, 1);
    &(&a - &b) + &c
}

/// Determinant of a square polynomial matrix by Bareiss fraction-free
/// elimination.  Every division is exact.
pub fn bareiss_det(mut m: Vec<Vec<MPoly>>) -> MPoly {
    let n = m.len();
    if n == 0 {
        return MPoly::one();
    }
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    let mut negate = false;
    let mut prev = MPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            // Prefer the sparsest nonzero pivot below.
            let swap = (k + 1..n)
                .filter(|&r| !m[r][k].is_zero())
                .min_by_key(|&r| m[r][k].num_terms());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return MPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = MPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Sylvester matrix of `p` and `q` with respect to `v`: `deg_v q` rows of
/// `p`'s coefficients (leading first) followed by `deg_v p` rows of `q`'s.
pub fn sylvester_matrix(p: &MPoly, q: &MPoly, v: Var) -> Vec<Vec<MPoly>> {
    let pc = p.coefficients_in(v);
    let qc = q.coefficients_in(v);
    let m = pc.len() - 1;
    let n = qc.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![MPoly::zero(); size];
        for (k, c) in pc.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![MPoly::zero(); size];
        for (k, c) in qc.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Resultant of `p` and `q` in `v`: the Sylvester determinant with `p`'s
/// rows first, evaluated fraction-free.  Both inputs must have positive
/// degree in `v`.
pub fn resultant(p: &MPoly, q: &MPoly, v: Var) -> Result<MPoly, PolyError> {
    for (name, poly) in [("first", p), ("second", q)] {
        if poly.degree_in(v) == 0 {
            return Err(PolyError::DegreeZero { operand: name, var: v });
        }
    }
    Ok(bareiss_det(sylvester_matrix(p, q, v)))
}
