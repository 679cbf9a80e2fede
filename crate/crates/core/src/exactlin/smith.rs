use num::{BigInt, Integer, One, Signed, Zero};

use super::IntVector;
use crate::error::{Error, Result};

/// Smith normal form `left * A * right = diag(d_1, .., d_r, 0, ..)` with
/// `d_i | d_{i+1}` and unimodular `left`, `right`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    pub left: Vec<Vec<BigInt>>,
    pub right: Vec<Vec<BigInt>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn row_axpy(m: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src = m[source].clone();
    for (x, y) in m[target].iter_mut().zip(&src) {
        *x -= q * y;
    }
}

fn col_axpy(m: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let s = row[source].clone();
        row[target] -= q * s;
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn smith_normal_form(a: &[IntVector], ncols: usize) -> SmithForm {
    let m = a.len();
    let n = ncols;
    let mut mat: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut left = identity(m);
    let mut right = identity(n);
    let mut diagonal = Vec::new();
    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !mat[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| mat[i][j].abs() < mat[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            mat.swap(t, pi);
            left.swap(t, pi);
            swap_cols(&mut mat, t, pj);
            swap_cols(&mut right, t, pj);

            let mut clean = true;
            for i in t + 1..m {
                let q = mat[i][t].div_floor(&mat[t][t]);
                row_axpy(&mut mat, i, t, &q);
                row_axpy(&mut left, i, t, &q);
                clean &= mat[i][t].is_zero();
            }
            for j in t + 1..n {
                let q = mat[t][j].div_floor(&mat[t][t]);
                col_axpy(&mut mat, j, t, &q);
                col_axpy(&mut right, j, t, &q);
                clean &= mat[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !mat[i][j].is_multiple_of(&mat[t][t])));
            if let Some(i) = bad {
                let minus_one = -BigInt::one();
                row_axpy(&mut mat, t, i, &minus_one);
                row_axpy(&mut left, t, i, &minus_one);
                continue;
            }
            break;
        }
        if mat[t][t].is_zero() {
            break;
        }
        if mat[t][t].is_negative() {
            for x in mat[t].iter_mut() {
                *x = -x.clone();
            }
            for x in left[t].iter_mut() {
                *x = -x.clone();
            }
        }
        diagonal.push(mat[t][t].clone());
    }
    let rank = diagonal.len();
    SmithForm { diagonal, rank, left, right }
}

/// Lattice basis of `{x ∈ ℤⁿ : A x = 0}`, returned in Hermite normal form
/// (rows echelonized, positive pivots, entries above pivots reduced).
pub fn integer_kernel(a: &[IntVector], ncols: usize) -> Result<Vec<IntVector>> {
    if a.iter().any(|r| r.len() != ncols) {
        return Err(Error::Dimension(format!("kernel input rows must have length {ncols}")));
    }
    let snf = smith_normal_form(a, ncols);
    let basis: Vec<Vec<BigInt>> = (snf.rank..ncols)
        .map(|j| snf.right.iter().map(|row| row[j].clone()).collect())
        .collect();
    hermite_rows(basis, ncols)
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| i64::try_from(x).map_err(|_| Error::Malformed("kernel entry exceeds 64-bit range".into())))
                .collect()
        })
        .collect()
}

fn hermite_rows(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> Vec<Vec<BigInt>> {
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        // gcd-combine column c of rows r.. into row r
        loop {
            let nz: Vec<usize> = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if !rows[i][c].is_zero() {
                    let q = rows[i][c].div_floor(&rows[r][c]);
                    row_axpy(&mut rows, i, r, &q);
                    done &= rows[i][c].is_zero();
                }
            }
            if done {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = rows[i][c].div_floor(&rows[r][c]);
            row_axpy(&mut rows, i, r, &q);
        }
        r += 1;
    }
    rows
}

/// Index of the sublattice spanned by `vectors` inside its saturation.
pub fn lattice_index(vectors: &[IntVector], ncols: usize) -> BigInt {
    let snf = smith_normal_form(vectors, ncols);
    snf.diagonal.iter().fold(BigInt::one(), |acc, d| acc * d)
}
