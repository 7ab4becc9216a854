//! Arithmetic and linear algebra over the prime field `F_p`.
//!
//! Residues are stored as `u8` values in `[0, p)`; every public constructor
//! validates that range. Subspaces are kept in a canonical reduced
//! row-echelon form so that equality of subspaces is equality of bases.

mod lagrangian;
mod matrix;
mod subspace;
pub(crate) mod vector;

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

pub use lagrangian::{enumerate_lagrangians, find_zero_sum_of_three_squares, lagrangian_count, LAGRANGIAN_GUARD};
pub use matrix::{FpMatrix, LinearSolution};
pub use subspace::Subspace;
pub use vector::{digits_of, index_of, scalar_product, symplectic_product, FpVector, SympVector, VectorIter};

/// An odd prime modulus together with its precomputed inverse table.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct FieldSpec {
    p: u8,
    inv2: u8,
    inv: [u8; 128],
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec").field("p", &self.p).finish()
    }
}

impl FieldSpec {
    /// Largest supported modulus.
    pub const MAX_P: u32 = 127;

    pub fn new(p: u32) -> Result<Self> {
        if !(3..=Self::MAX_P).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        let mut inv = [0u8; 128];
        for a in 1..p {
            // Fermat: a^{p-2} = a^{-1}
            let mut acc = 1u32;
            for _ in 0..p - 2 {
                acc = acc * a % p;
            }
            inv[a as usize] = acc as u8;
        }
        Ok(Self { p: p as u8, inv2: ((p + 1) / 2) as u8, inv })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p as u32
    }

    /// The multiplicative inverse of 2, `(p + 1) / 2`.
    #[inline]
    pub fn inv2(&self) -> u8 {
        self.inv2
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        let s = a as u32 + b as u32;
        (if s >= self.p() { s - self.p() } else { s }) as u8
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        (a as u32 * b as u32 % self.p()) as u8
    }

    /// Inverse of a nonzero residue; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u8) -> Option<u8> {
        if a == 0 {
            None
        } else {
            Some(self.inv[a as usize])
        }
    }

    pub fn pow(&self, a: u8, mut e: u64) -> u8 {
        let mut base = a as u32 % self.p();
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p();
            }
            base = base * base % self.p();
            e >>= 1;
        }
        acc as u8
    }

    /// Reduces an arbitrary integer into `[0, p)`.
    #[inline]
    pub fn reduce(&self, a: i64) -> u8 {
        a.rem_euclid(self.p as i64) as u8
    }

    /// Checks that a residue is in range.
    pub fn check(&self, a: u32) -> Result<u8> {
        if a < self.p() {
            Ok(a as u8)
        } else {
            Err(Error::ResidueOutOfRange { value: a, p: self.p() })
        }
    }

    /// `p^k`, or `None` on overflow.
    pub fn size_of(&self, k: usize) -> Option<u64> {
        let mut acc: u64 = 1;
        for _ in 0..k {
            acc = acc.checked_mul(self.p as u64)?;
        }
        Some(acc)
    }

    /// `p^k` checked against an element-count limit.
    pub fn guarded_size(&self, what: &'static str, k: usize, limit: u64) -> Result<usize> {
        match self.size_of(k) {
            Some(size) if size <= limit => Ok(size as usize),
            Some(size) => Err(Error::SizeGuard { what, size, limit }),
            None => Err(Error::SizeGuard { what, size: u64::MAX, limit }),
        }
    }

    /// `ω^k = e^{2πik/p}` for `k` in `[0, p)`.
    pub fn omega_table(&self) -> Vec<Complex64> {
        let p = self.p() as f64;
        (0..self.p())
            .map(|k| {
                let theta = 2.0 * core::f64::consts::PI * k as f64 / p;
                Complex64::new(libm::cos(theta), libm::sin(theta))
            })
            .collect()
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
