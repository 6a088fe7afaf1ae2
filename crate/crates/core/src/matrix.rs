//! Dense matrices over the tower field.

use alloc::{format, vec, vec::Vec};

use crate::error::{Error, Result};
use crate::ff::{Fe, FieldTower};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Fe>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Fe>]) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::InvalidInput("ragged matrix".into()));
        }
        Matrix::new(r, c, rows.concat())
    }

    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn entries(&self) -> &[Fe] {
        &self.data
    }

    /// All entries lie in `F_q`.
    pub fn is_base(&self, t: &FieldTower) -> bool {
        self.data.iter().all(|&x| t.is_base(x))
    }

    pub fn mul(&self, t: &FieldTower, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = t.add(out.get(i, j), t.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `M · v`.
    pub fn apply(&self, t: &FieldTower, v: &[Fe]) -> Vec<Fe> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Fe::ZERO, |acc, (&a, &b)| t.add(acc, t.mul(a, b))))
            .collect()
    }

    /// Row echelon form in place; returns the pivot columns.
    fn echelon(&mut self, t: &FieldTower) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                let (a, b) = (self.get(r, j), self.get(piv, j));
                self.set(r, j, b);
                self.set(piv, j, a);
            }
            let inv = t.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in 0..self.cols {
                let v = t.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let v = t.sub(self.get(i, j), t.mul(f, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, t: &FieldTower) -> usize {
        self.clone().echelon(t).len()
    }

    pub fn inverse(&self, t: &FieldTower) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Fe::ONE);
        }
        let piv = aug.echelon(t);
        if piv.len() < n || piv[n - 1] >= n {
            return None;
        }
        let mut out = Matrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j));
            }
        }
        Some(out)
    }

    pub fn is_invertible(&self, t: &FieldTower) -> bool {
        self.rows == self.cols && self.rank(t) == self.rows
    }
}

/// An invertible square matrix with entries in `F_q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GlMatrix(Matrix);

impl GlMatrix {
    pub fn new(t: &FieldTower, m: Matrix) -> Result<GlMatrix> {
        if !m.is_base(t) || !m.is_invertible(t) {
            return Err(Error::NotLinear);
        }
        Ok(GlMatrix(m))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }
}

/// Every invertible `d × d` matrix over `F_q`, in row-major enumeration order.
pub fn enumerate_gl(t: &FieldTower, d: usize) -> Result<Vec<GlMatrix>> {
    let q = t.q();
    let total = crate::arith::checked_pow(q, (d * d) as u32)
        .filter(|&v| v <= 1 << 20)
        .ok_or_else(|| Error::TooLarge(format!("GL_{d}(F_{q}) enumeration")))?;
    let mut out = Vec::new();
    for idx in 0..total {
        let mut k = idx;
        let data = (0..d * d)
            .map(|_| {
                let v = Fe::raw((k % q) as u32);
                k /= q;
                v
            })
            .collect();
        let m = Matrix { rows: d, cols: d, data };
        if m.is_invertible(t) {
            out.push(GlMatrix(m));
        }
    }
    Ok(out)
}
