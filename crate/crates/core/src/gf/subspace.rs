use alloc::vec;
use alloc::vec::Vec;

use super::vector::{dot, symp};
use super::{FieldSpec, FpMatrix, SympVector};
use crate::{Error, Result};

/// A subspace of `F_p^d` in canonical form.
///
/// The basis is the nonzero part of the reduced row-echelon form of any
/// spanning set, one basis vector per row with strictly increasing pivots.
/// Two subspaces are equal exactly when their bases are identical.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: FpMatrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: FpMatrix::zeros(0, ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        Self { ambient, basis: FpMatrix::identity(ambient) }
    }

    /// Span of reduced vectors of length `ambient`.
    pub fn span<V: AsRef<[u8]>>(spec: &FieldSpec, ambient: usize, vectors: &[V]) -> Self {
        Self::row_space(spec, &FpMatrix::from_rows(ambient, vectors))
    }

    pub fn row_space(spec: &FieldSpec, m: &FpMatrix) -> Self {
        let (red, rank) = m.rref(spec);
        let rows: Vec<&[u8]> = red.row_iter().take(rank).collect();
        Self { ambient: m.cols(), basis: FpMatrix::from_rows(m.cols(), &rows) }
    }

    pub fn col_space(spec: &FieldSpec, m: &FpMatrix) -> Self {
        Self::row_space(spec, &m.transpose())
    }

    /// `{x : M x = 0}`.
    pub fn null_space(spec: &FieldSpec, m: &FpMatrix) -> Self {
        let (red, pivots) = m.rref_with_pivots(spec);
        let cols = m.cols();
        let mut is_pivot = vec![false; cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![0u8; cols];
            x[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                x[c] = spec.neg(red.get(r, free));
            }
            basis.push(x);
        }
        Self::span(spec, cols, &basis)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical basis, one vector per row.
    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<u8>> {
        self.basis.row_iter().map(<[u8]>::to_vec).collect()
    }

    /// `p^dim`.
    pub fn cardinality(&self, spec: &FieldSpec) -> u64 {
        spec.size_of(self.dim()).unwrap_or(u64::MAX)
    }

    fn check_ambient(&self, other: usize) -> Result<()> {
        if self.ambient == other {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.ambient, found: other })
        }
    }

    /// Reduces `x` against the canonical basis. The result is zero exactly
    /// when `x` lies in the subspace, and is a canonical coset representative.
    pub fn reduce(&self, spec: &FieldSpec, x: &[u8]) -> Vec<u8> {
        let mut r = x.to_vec();
        for row in self.basis.row_iter() {
            let pivot = row.iter().position(|&e| e != 0).expect("basis rows are nonzero");
            let c = r[pivot];
            if c != 0 {
                for (ri, &bi) in r.iter_mut().zip(row) {
                    *ri = spec.sub(*ri, spec.mul(c, bi));
                }
            }
        }
        r
    }

    pub fn contains_vector(&self, spec: &FieldSpec, x: &[u8]) -> bool {
        x.len() == self.ambient && self.reduce(spec, x).iter().all(|&e| e == 0)
    }

    pub fn member(&self, spec: &FieldSpec, x: &[u8]) -> Result<bool> {
        self.check_ambient(x.len())?;
        Ok(self.contains_vector(spec, x))
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, spec: &FieldSpec, other: &Self) -> bool {
        other.ambient == self.ambient && other.basis.row_iter().all(|r| self.contains_vector(spec, r))
    }

    pub fn sum(&self, spec: &FieldSpec, other: &Self) -> Result<Self> {
        self.check_ambient(other.ambient)?;
        Ok(Self::row_space(spec, &self.basis.vstack(&other.basis)?))
    }

    /// Intersection via `(V ∩ W)^⊥ = V^⊥ + W^⊥`.
    pub fn intersect(&self, spec: &FieldSpec, other: &Self) -> Result<Self> {
        self.check_ambient(other.ambient)?;
        Ok(self.perp(spec).sum(spec, &other.perp(spec))?.perp(spec))
    }

    /// Orthogonal complement with respect to the scalar product.
    pub fn perp(&self, spec: &FieldSpec) -> Self {
        if self.dim() == 0 {
            return Self::full(self.ambient);
        }
        Self::null_space(spec, &self.basis)
    }

    /// Symplectic complement `{y : [x, y] = 0 ∀x}` in `F_p^{2n}`.
    pub fn symp_complement(&self, spec: &FieldSpec) -> Result<Self> {
        if self.ambient % 2 != 0 {
            return Err(Error::DimensionMismatch { expected: self.ambient + 1, found: self.ambient });
        }
        if self.dim() == 0 {
            return Ok(Self::full(self.ambient));
        }
        // [x, y] = ⟨(-w, v), y⟩ for x = (v, w).
        let n = self.ambient / 2;
        let rows: Vec<Vec<u8>> = self
            .basis
            .row_iter()
            .map(|x| {
                let mut o = Vec::with_capacity(2 * n);
                o.extend(x[n..].iter().map(|&e| spec.neg(e)));
                o.extend_from_slice(&x[..n]);
                o
            })
            .collect();
        Ok(Self::null_space(spec, &FpMatrix::from_rows(self.ambient, &rows)))
    }

    /// Image under `J(v, w) = (-v, w)`.
    pub fn involute(&self, spec: &FieldSpec) -> Result<Self> {
        if self.ambient % 2 != 0 {
            return Err(Error::DimensionMismatch { expected: self.ambient + 1, found: self.ambient });
        }
        let rows: Vec<SympVector> =
            self.basis.row_iter().map(|x| SympVector::from_residues(x.to_vec()).involute(spec)).collect();
        Ok(Self::span(spec, self.ambient, &rows))
    }

    pub fn is_isotropic(&self, spec: &FieldSpec) -> bool {
        if self.ambient % 2 != 0 {
            return false;
        }
        let rows: Vec<&[u8]> = self.basis.row_iter().collect();
        rows.iter().enumerate().all(|(i, x)| rows[i + 1..].iter().all(|y| symp(spec, x, y) == 0))
    }

    pub fn is_lagrangian(&self, spec: &FieldSpec) -> bool {
        self.ambient % 2 == 0 && 2 * self.dim() == self.ambient && self.is_isotropic(spec)
    }

    /// Whether `⟨x, w⟩ = 0` for every basis vector `x` (i.e. `w ∈ self^⊥`).
    pub fn is_orthogonal_to(&self, spec: &FieldSpec, w: &[u8]) -> bool {
        self.basis.row_iter().all(|x| dot(spec, x, w) == 0)
    }

    /// Every element, enumerated by coefficient vectors in index order.
    pub fn elements(&self, spec: &FieldSpec) -> Vec<Vec<u8>> {
        let k = self.dim();
        let mut out = Vec::new();
        for coeffs in super::VectorIter::new(spec, k) {
            let mut x = vec![0u8; self.ambient];
            for (c, row) in coeffs.iter().zip(self.basis.row_iter()) {
                if *c == 0 {
                    continue;
                }
                for (xi, &bi) in x.iter_mut().zip(row) {
                    *xi = spec.add(*xi, spec.mul(*c, bi));
                }
            }
            out.push(x);
        }
        out
    }

    /// Cartesian product `self × other` inside `F_p^{a+b}`.
    pub fn product(&self, spec: &FieldSpec, other: &Self) -> Self {
        let amb = self.ambient + other.ambient;
        let mut rows = Vec::new();
        for r in self.basis.row_iter() {
            let mut x = r.to_vec();
            x.resize(amb, 0);
            rows.push(x);
        }
        for r in other.basis.row_iter() {
            let mut x = vec![0u8; self.ambient];
            x.extend_from_slice(r);
            rows.push(x);
        }
        Self::span(spec, amb, &rows)
    }
}
