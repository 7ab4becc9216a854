use alloc::vec;
use alloc::vec::Vec;
use core::ops::Deref;

use super::FieldSpec;
use crate::{Error, Result};

/// A vector over `F_p` with entries in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FpVector(Vec<u8>);

impl FpVector {
    pub fn new(spec: &FieldSpec, entries: &[u32]) -> Result<Self> {
        entries.iter().map(|&e| spec.check(e)).collect::<Result<Vec<_>>>().map(Self)
    }

    /// Wraps residues that are already reduced.
    pub fn from_residues(entries: Vec<u8>) -> Self {
        Self(entries)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    /// The `i`-th standard basis vector.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        Self(v)
    }

    pub fn ambient_dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    pub fn add(&self, spec: &FieldSpec, other: &[u8]) -> Self {
        Self(self.0.iter().zip(other).map(|(&a, &b)| spec.add(a, b)).collect())
    }

    pub fn sub(&self, spec: &FieldSpec, other: &[u8]) -> Self {
        Self(self.0.iter().zip(other).map(|(&a, &b)| spec.sub(a, b)).collect())
    }

    pub fn scale(&self, spec: &FieldSpec, c: u8) -> Self {
        Self(self.0.iter().map(|&a| spec.mul(a, c)).collect())
    }
}

impl Deref for FpVector {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl AsRef<[u8]> for FpVector {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

impl From<FpVector> for Vec<u8> {
    fn from(v: FpVector) -> Self {
        v.0
    }
}

/// A phase-space label `x = (v, w) ∈ F_p^{2n}`, stored as one length-`2n` vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SympVector(Vec<u8>);

impl SympVector {
    pub fn new(spec: &FieldSpec, entries: &[u32]) -> Result<Self> {
        if entries.len() % 2 != 0 {
            return Err(Error::DimensionMismatch { expected: entries.len() + 1, found: entries.len() });
        }
        FpVector::new(spec, entries).map(|v| Self(v.0))
    }

    /// Wraps reduced residues of even length.
    pub fn from_residues(entries: Vec<u8>) -> Self {
        debug_assert!(entries.len() % 2 == 0);
        Self(entries)
    }

    pub fn from_parts(v: &[u8], w: &[u8]) -> Self {
        debug_assert_eq!(v.len(), w.len());
        let mut x = Vec::with_capacity(2 * v.len());
        x.extend_from_slice(v);
        x.extend_from_slice(w);
        Self(x)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; 2 * n])
    }

    pub fn n(&self) -> usize {
        self.0.len() / 2
    }

    /// The `Z`-type half `v`.
    pub fn v(&self) -> &[u8] {
        &self.0[..self.n()]
    }

    /// The `X`-type (shift) half `w`.
    pub fn w(&self) -> &[u8] {
        &self.0[self.n()..]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `J(v, w) = (-v, w)`.
    pub fn involute(&self, spec: &FieldSpec) -> Self {
        let n = self.n();
        Self(self.0.iter().enumerate().map(|(i, &e)| if i < n { spec.neg(e) } else { e }).collect())
    }

    pub fn add(&self, spec: &FieldSpec, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(&a, &b)| spec.add(a, b)).collect())
    }

    pub fn neg(&self, spec: &FieldSpec) -> Self {
        Self(self.0.iter().map(|&a| spec.neg(a)).collect())
    }

    pub fn scale(&self, spec: &FieldSpec, c: u8) -> Self {
        Self(self.0.iter().map(|&a| spec.mul(a, c)).collect())
    }

    pub fn symplectic_product(&self, spec: &FieldSpec, other: &Self) -> Result<u8> {
        symplectic_product(spec, &self.0, &other.0)
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }
}

impl Deref for SympVector {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl AsRef<[u8]> for SympVector {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

/// `Σ a_i b_i mod p`.
pub fn scalar_product(spec: &FieldSpec, a: &[u8], b: &[u8]) -> Result<u8> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    Ok(dot(spec, a, b))
}

/// `Σ_{i<n} (x_i y_{n+i} - x_{n+i} y_i) mod p`.
pub fn symplectic_product(spec: &FieldSpec, x: &[u8], y: &[u8]) -> Result<u8> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    if x.len() % 2 != 0 {
        return Err(Error::DimensionMismatch { expected: x.len() + 1, found: x.len() });
    }
    Ok(symp(spec, x, y))
}

#[inline]
pub(crate) fn dot(spec: &FieldSpec, a: &[u8], b: &[u8]) -> u8 {
    let acc: u64 = a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum();
    (acc % spec.p() as u64) as u8
}

#[inline]
pub(crate) fn symp(spec: &FieldSpec, x: &[u8], y: &[u8]) -> u8 {
    let n = x.len() / 2;
    let p = spec.p() as u64;
    let mut plus = 0u64;
    let mut minus = 0u64;
    for i in 0..n {
        plus += x[i] as u64 * y[n + i] as u64;
        minus += x[n + i] as u64 * y[i] as u64;
    }
    ((plus % p + p - minus % p) % p) as u8
}

/// Big-endian index of `q`: `Σ_i q_i p^{len-1-i}`.
#[inline]
pub fn index_of(p: u32, q: &[u8]) -> usize {
    q.iter().fold(0usize, |acc, &d| acc * p as usize + d as usize)
}

/// Inverse of [`index_of`], writing the digits into `out`.
#[inline]
pub fn digits_of(p: u32, mut index: usize, out: &mut [u8]) {
    for d in out.iter_mut().rev() {
        *d = (index % p as usize) as u8;
        index /= p as usize;
    }
}

/// Iterates over every vector of `F_p^len` in index order.
pub struct VectorIter {
    p: u8,
    current: Vec<u8>,
    done: bool,
}

impl VectorIter {
    pub fn new(spec: &FieldSpec, len: usize) -> Self {
        Self { p: spec.p() as u8, current: vec![0; len], done: false }
    }
}

impl Iterator for VectorIter {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut i = self.current.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.current[i] += 1;
            if self.current[i] < self.p {
                break;
            }
            self.current[i] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn scalar_product_examples() {
        assert_eq!(scalar_product(&f(3), &[1, 2], &[2, 2]).unwrap(), 0);
        assert_eq!(scalar_product(&f(5), &[0, 0, 0], &[4, 3, 2]).unwrap(), 0);
        assert_eq!(scalar_product(&f(7), &[1, 1], &[3, 4]).unwrap(), 0);
        assert!(scalar_product(&f(7), &[1, 1], &[3]).is_err());
    }

    #[test]
    fn symplectic_product_examples() {
        let s = f(3);
        assert_eq!(symplectic_product(&s, &[1, 0], &[0, 1]).unwrap(), 1);
        assert_eq!(symplectic_product(&s, &[1, 2], &[2, 1]).unwrap(), 0);
        assert_eq!(symplectic_product(&s, &[0, 1], &[1, 0]).unwrap(), 2);
        for x in VectorIter::new(&s, 4) {
            assert_eq!(symplectic_product(&s, &x, &x).unwrap(), 0);
        }
        assert!(symplectic_product(&s, &[1, 0], &[0, 1, 0, 0]).is_err());
        assert!(symplectic_product(&s, &[1, 0, 1], &[0, 1, 0]).is_err());
    }

    #[test]
    fn involution_negates_the_form() {
        let s = f(5);
        let xs: Vec<Vec<u8>> = VectorIter::new(&s, 2).collect();
        for x in &xs {
            for y in &xs {
                let jx = SympVector::from_residues(x.clone()).involute(&s);
                let jy = SympVector::from_residues(y.clone()).involute(&s);
                assert_eq!(symp(&s, &jx, &jy), s.neg(symp(&s, x, y)));
            }
            let jj = SympVector::from_residues(x.clone()).involute(&s).involute(&s);
            assert_eq!(&*jj, x.as_slice());
        }
    }

    #[test]
    fn index_round_trip_and_order() {
        let s = f(3);
        for (i, q) in VectorIter::new(&s, 3).enumerate() {
            assert_eq!(index_of(3, &q), i);
            let mut back = [0u8; 3];
            digits_of(3, i, &mut back);
            assert_eq!(back.as_slice(), q.as_slice());
        }
        assert_eq!(index_of(3, &[1, 0]), 3);
        assert_eq!(VectorIter::new(&s, 0).count(), 1);
    }

    #[test]
    fn vector_validation() {
        let s = f(3);
        assert!(FpVector::new(&s, &[0, 1, 2]).is_ok());
        assert!(FpVector::new(&s, &[3]).is_err());
        assert!(SympVector::new(&s, &[0, 1, 2]).is_err());
    }
}
