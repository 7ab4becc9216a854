use alloc::vec;
use alloc::vec::Vec;

use super::{FieldSpec, FpVector, Subspace};
use crate::{Error, Result};

/// A dense row-major matrix over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

/// Result of [`FpMatrix::solve`]: one solution (free variables set to zero)
/// if the system is consistent, and the null space of the coefficient matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolution {
    pub solution: Option<FpVector>,
    pub null_space: Subspace,
}

impl FpMatrix {
    pub fn new(spec: &FieldSpec, rows: usize, cols: usize, entries: &[u32]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: entries.len() });
        }
        let data = entries.iter().map(|&e| spec.check(e)).collect::<Result<Vec<_>>>()?;
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from reduced rows of equal length `cols`.
    pub fn from_rows<R: AsRef<[u8]>>(cols: usize, rows: &[R]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend_from_slice(r);
        }
        Self { rows: rows.len(), cols, data }
    }

    /// Builds a matrix whose columns are the given reduced vectors.
    pub fn from_columns<C: AsRef<[u8]>>(rows: usize, columns: &[C]) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, c) in columns.iter().enumerate() {
            let c = c.as_ref();
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, &e) in c.iter().enumerate() {
                m.data[i * cols + j] = e;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: u8) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u8]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    /// `c · self`.
    pub fn scale(&self, spec: &FieldSpec, c: u8) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&e| spec.mul(e, c)).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, spec: &FieldSpec, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let p = spec.p() as u64;
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let acc: u64 = (0..self.cols).map(|k| self.get(i, k) as u64 * other.get(k, j) as u64).sum();
                out.data[i * other.cols + j] = (acc % p) as u8;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, spec: &FieldSpec, x: &[u8]) -> Result<FpVector> {
        if self.cols != x.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: x.len() });
        }
        Ok(FpVector::from_residues(self.row_iter().map(|r| super::vector::dot(spec, r, x)).collect()))
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Places `self` to the left of `other`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(Self { rows: self.rows, cols, data })
    }

    /// Reduced row-echelon form and rank. Zero rows are kept at the bottom.
    pub fn rref(&self, spec: &FieldSpec) -> (Self, usize) {
        let (m, pivots) = self.rref_with_pivots(spec);
        let rank = pivots.len();
        (m, rank)
    }

    pub fn rank(&self, spec: &FieldSpec) -> usize {
        self.rref(spec).1
    }

    /// Gauss-Jordan elimination; returns the RREF and the pivot columns.
    pub(crate) fn rref_with_pivots(&self, spec: &FieldSpec) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = spec.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let e = m.get(r, j);
                m.set(r, j, spec.mul(e, inv));
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let e = spec.sub(m.get(i, j), spec.mul(factor, m.get(r, j)));
                    m.set(i, j, e);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Solves `A x = b`. Free variables are set to zero.
    pub fn solve(&self, spec: &FieldSpec, b: &[u8]) -> Result<LinearSolution> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        let rhs = Self::from_columns(self.rows, &[b]);
        let aug = self.hstack(&rhs)?;
        let (red, pivots) = aug.rref_with_pivots(spec);
        let n = self.cols;
        let solution = if pivots.last() == Some(&n) {
            None
        } else {
            let mut x = vec![0u8; n];
            for (r, &c) in pivots.iter().enumerate() {
                x[c] = red.get(r, n);
            }
            Some(FpVector::from_residues(x))
        };
        Ok(LinearSolution { solution, null_space: Subspace::null_space(spec, self) })
    }
}
