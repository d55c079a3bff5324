use num_traits::{One, Zero};

use super::{integer_canonical, RatMatrix, Rational};
use crate::error::{Error, Result};

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: RatMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Gauss-Jordan elimination. Pivots are the first nonzero entry found scanning
/// down each column, so the result depends only on the input.
pub fn rref(m: &RatMatrix) -> Rref {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        let inv = a[(r, c)].recip();
        for j in c..cols {
            if !a[(r, j)].is_zero() {
                a[(r, j)] *= &inv;
            }
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let factor = a[(i, c)].clone();
            for j in c..cols {
                if !a[(r, j)].is_zero() {
                    let delta = &factor * &a[(r, j)];
                    a[(i, j)] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: a, pivots }
}

pub fn rank(m: &RatMatrix) -> usize {
    rref(m).rank()
}

/// Basis of `{v : m v = 0}`.
///
/// One vector per free column of the reduced echelon form, each rescaled to
/// coprime integers with a positive leading entry.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<Rational>> {
    let Rref { matrix: r, pivots } = rref(m);
    let cols = m.cols();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, free)].clone();
            }
            integer_canonical(&v)
        })
        .collect()
}

/// Factors `m = c * f` with `c` the pivot columns of `m` (full column rank)
/// and `f` the nonzero rows of its reduced echelon form (full row rank).
pub fn rank_factorization(m: &RatMatrix) -> (RatMatrix, RatMatrix) {
    let Rref { matrix: r, pivots } = rref(m);
    let c = m.select_columns(&pivots);
    let rows: Vec<usize> = (0..pivots.len()).collect();
    let f = r.select_rows(&rows);
    (c, f)
}

pub fn inverse(m: &RatMatrix) -> Result<RatMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut aug = RatMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = Rational::one();
    }
    let reduced = rref(&aug);
    if reduced.pivots.iter().take_while(|&&p| p < n).count() < n {
        return Err(Error::Singular);
    }
    let right: Vec<usize> = (n..2 * n).collect();
    Ok(reduced.matrix.select_columns(&right))
}

/// Moore-Penrose pseudo-inverse, `f^T (f f^T)^-1 (c^T c)^-1 c^T` over a rank
/// factorization `m = c f`. A rank-zero input yields the zero matrix of
/// transposed shape.
pub fn pseudo_inverse(m: &RatMatrix) -> RatMatrix {
    let (c, f) = rank_factorization(m);
    if c.cols() == 0 {
        return RatMatrix::zeros(m.cols(), m.rows());
    }
    let ft = f.transpose();
    let ct = c.transpose();
    // Both Gram matrices are r x r and nonsingular because c and f have full rank r.
    let ffi = inverse(&(&f * &ft)).expect("f f^T is nonsingular");
    let cci = inverse(&(&ct * &c)).expect("c^T c is nonsingular");
    &(&(&ft * &ffi) * &cci) * &ct
}
