//! Dense matrices over the rationals with exact Gaussian elimination.

use std::fmt;

use crate::error::Error;
use crate::ratlin::Rational;

/// Row-major dense matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

/// Outcome of solving `m x = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Rational>),
    NoSolution,
    /// One particular solution together with a basis of the kernel.
    NonUnique {
        particular: Vec<Rational>,
        kernel: Vec<Vec<Rational>>,
    },
}

/// Reduced row echelon form plus the pivot column of each nonzero row.
struct Echelon {
    m: Matrix,
    pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, Error> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    /// Builds a matrix from integer rows; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
                .collect(),
        )
        .expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>, Error> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                m.swap_rows(p, r);
            }
            let inv = m[(r, c)].recip();
            let support: Vec<usize> = (c..m.cols).filter(|&j| !m[(r, j)].is_zero()).collect();
            for &j in &support {
                m[(r, j)] *= &inv;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for &j in &support {
                    let delta = &factor * &m[(r, j)];
                    m[(i, j)] -= &delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of `{x : m x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let Echelon { m, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -&m[(r, f)];
                }
                v
            })
            .collect()
    }

    pub fn solve(&self, rhs: &[Rational]) -> Result<Solution, Error> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} against {} rows",
                rhs.len(),
                self.rows
            )));
        }
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = rhs[i].clone();
        }
        let Echelon { m, pivots } = aug.echelon();
        if pivots.last() == Some(&self.cols) {
            return Ok(Solution::NoSolution);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = m[(r, self.cols)].clone();
        }
        if pivots.len() == self.cols {
            Ok(Solution::Unique(x))
        } else {
            Ok(Solution::NonUnique {
                particular: x,
                kernel: self.nullspace(),
            })
        }
    }

    pub fn determinant(&self) -> Result<Rational, Error> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        // Elimination without normalising rows keeps the product of pivots equal to det.
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = &m[(i, c)] / &pivot;
                for j in c..n {
                    let delta = &factor * &m[(c, j)];
                    m[(i, j)] -= &delta;
                }
            }
        }
        Ok(det)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i)))
            .finish()
    }
}
