//! Dense matrices over a finite field and Gaussian elimination.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        let n = rows.len();
        Ok(Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// `x · self` for a row vector `x`.
    pub fn left_mul(&self, f: &Field, x: &[Elem]) -> Vec<Elem> {
        let mut out = vec![Elem::ZERO; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            if xr.is_zero() {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(self.row(r)) {
                *o = f.add(*o, f.mul(xr, g));
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }
}

/// Brings `m` to reduced row echelon form, returning the pivot columns.
pub fn rref(f: &Field, m: &mut Matrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(pr) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
            continue;
        };
        m.swap_rows(row, pr);
        let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
        for c in col..m.cols {
            let v = m.get(row, c);
            m.set(row, c, f.mul(v, inv));
        }
        for r in 0..m.rows {
            if r == row {
                continue;
            }
            let factor = m.get(r, col);
            if factor.is_zero() {
                continue;
            }
            for c in col..m.cols {
                let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                m.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(f: &Field, m: &Matrix) -> usize {
    let mut work = m.clone();
    rref(f, &mut work).len()
}

/// A basis of the row space of `m`.
pub fn row_basis(f: &Field, m: &Matrix) -> Matrix {
    let mut work = m.clone();
    let r = rref(f, &mut work).len();
    let rows = (0..r).map(|i| work.row(i).to_vec()).collect();
    Matrix::from_rows(rows).unwrap_or_else(|_| Matrix::zeros(0, m.cols))
}

/// Solves `x · a = y`. Inconsistency is reported before rank deficiency.
pub fn solve_left(f: &Field, a: &Matrix, y: &[Elem]) -> Result<Vec<Elem>> {
    if y.len() != a.cols {
        return Err(Error::LengthMismatch {
            expected: a.cols,
            found: y.len(),
        });
    }
    let k = a.rows;
    let mut aug = Matrix::zeros(a.cols, k + 1);
    for c in 0..a.cols {
        for r in 0..k {
            aug.set(c, r, a.get(r, c));
        }
        aug.set(c, k, y[c]);
    }
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&k) {
        return Err(Error::NotACodeword);
    }
    if pivots.len() < k {
        return Err(Error::Unrecoverable);
    }
    Ok((0..k).map(|i| aug.get(i, k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_and_rank() {
        let f = Field::new(13, 1).unwrap();
        let e = |v: u32| Elem(v);
        let a = Matrix::from_rows(vec![vec![e(1), e(1), e(1)], vec![e(0), e(1), e(2)]]).unwrap();
        assert_eq!(rank(&f, &a), 2);
        let x = vec![e(4), e(7)];
        let y = a.left_mul(&f, &x);
        assert_eq!(solve_left(&f, &a, &y).unwrap(), x);
        let bad = vec![e(1), e(0), e(0)];
        assert_eq!(solve_left(&f, &a, &bad).unwrap_err(), Error::NotACodeword);
        let one_col = a.select_columns(&[0]);
        assert_eq!(
            solve_left(&f, &one_col, &[e(3)]).unwrap_err(),
            Error::Unrecoverable
        );
    }
}
