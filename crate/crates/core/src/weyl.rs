//! Weyl operators `ω^s W_x` with exact phase arithmetic.
//!
//! Phase exponents are residues mod `p`; complex numbers only appear in
//! [`weyl_matrix`] and [`PauliElement::matrix`].

use alloc::vec;

use crate::cmat::CMatrix;
use crate::gf::{digits_of, index_of, vector::dot, FieldSpec, SympVector};
use crate::Result;

/// Largest `p^n` for which dense Weyl matrices are built.
pub const WEYL_MATRIX_GUARD: u64 = 1 << 14;

/// The operator `ω^phase · W_label` on `n = label.len() / 2` qudits.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliElement {
    pub phase: u8,
    pub label: SympVector,
}

impl PauliElement {
    pub fn new(spec: &FieldSpec, phase: u32, label: &[u32]) -> Result<Self> {
        Ok(Self { phase: spec.check(phase)?, label: SympVector::new(spec, label)? })
    }

    pub fn from_parts(phase: u8, label: SympVector) -> Self {
        Self { phase, label }
    }

    pub fn identity(n: usize) -> Self {
        Self { phase: 0, label: SympVector::zero(n) }
    }

    pub fn n(&self) -> usize {
        self.label.n()
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.label.is_zero()
    }

    /// Dense matrix of `ω^s W_x`.
    pub fn matrix(&self, spec: &FieldSpec) -> Result<CMatrix> {
        let omega = spec.omega_table();
        Ok(weyl_matrix(spec, &self.label)?.scale(omega[self.phase as usize]))
    }
}

/// `ω^{s_a} W_{x_a} · ω^{s_b} W_{x_b} = ω^{s_a + s_b + 2^{-1}[x_a, x_b]} W_{x_a + x_b}`.
pub fn pauli_mul(spec: &FieldSpec, a: &PauliElement, b: &PauliElement) -> Result<PauliElement> {
    let c = a.label.symplectic_product(spec, &b.label)?;
    let phase = spec.add(spec.add(a.phase, b.phase), spec.mul(spec.inv2(), c));
    Ok(PauliElement { phase, label: a.label.add(spec, &b.label) })
}

/// `(ω^s W_x)^m = ω^{ms} W_{mx}`.
pub fn pauli_pow(spec: &FieldSpec, a: &PauliElement, m: u64) -> PauliElement {
    let m = (m % spec.p() as u64) as u8;
    PauliElement { phase: spec.mul(a.phase, m), label: a.label.scale(spec, m) }
}

/// `(ω^s W_x)† = ω^{-s} W_{-x}`.
pub fn pauli_dagger(spec: &FieldSpec, a: &PauliElement) -> PauliElement {
    PauliElement { phase: spec.neg(a.phase), label: a.label.neg(spec) }
}

/// The exponent `c` in `W_x W_y = ω^c W_y W_x`, namely `[x, y]`.
pub fn commutation_phase(spec: &FieldSpec, x: &SympVector, y: &SympVector) -> Result<u8> {
    x.symplectic_product(spec, y)
}

/// Dense `p^n × p^n` matrix of `W_x`.
pub fn weyl_matrix(spec: &FieldSpec, x: &SympVector) -> Result<CMatrix> {
    let n = x.n();
    let dim = spec.guarded_size("Weyl matrix dimension", n, WEYL_MATRIX_GUARD)?;
    let omega = spec.omega_table();
    let (v, w) = (x.v(), x.w());
    let base = spec.mul(spec.inv2(), dot(spec, v, w));
    let mut m = CMatrix::zeros(dim, dim);
    let mut q = vec![0u8; n];
    let mut target = vec![0u8; n];
    let p = spec.p();
    for col in 0..dim {
        digits_of(p, col, &mut q);
        for i in 0..n {
            target[i] = spec.add(q[i], w[i]);
        }
        let e = spec.add(dot(spec, &q, v), base);
        m.set(index_of(p, &target), col, omega[e as usize]);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::VectorIter;
    use crate::Error;
    use alloc::vec::Vec;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn f(p: u32) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    fn el(s: &FieldSpec, phase: u32, label: &[u32]) -> PauliElement {
        PauliElement::new(s, phase, label).unwrap()
    }

    #[test]
    fn mul_examples() {
        let s = f(3);
        let z = el(&s, 0, &[1, 0]);
        let x = el(&s, 0, &[0, 1]);
        assert_eq!(pauli_mul(&s, &z, &x).unwrap(), el(&s, 2, &[1, 1]));
        let a = el(&s, 1, &[2, 1]);
        assert_eq!(pauli_mul(&s, &a, &PauliElement::identity(1)).unwrap(), a);
        let minus = PauliElement::from_parts(0, a.label.neg(&s));
        let prod = pauli_mul(&s, &PauliElement::from_parts(0, a.label.clone()), &minus).unwrap();
        assert!(prod.is_identity());
        assert!(pauli_mul(&s, &a, &PauliElement::identity(2)).is_err());
    }

    #[test]
    fn pow_and_dagger() {
        let s = f(3);
        let a = el(&s, 1, &[1, 1]);
        assert_eq!(pauli_pow(&s, &a, 2), el(&s, 2, &[2, 2]));
        assert!(pauli_pow(&s, &a, 3).is_identity());
        assert_eq!(pauli_dagger(&s, &pauli_dagger(&s, &a)), a);
        assert!(pauli_mul(&s, &a, &pauli_dagger(&s, &a)).unwrap().is_identity());
    }

    #[test]
    fn z_and_x_matrices() {
        let s = f(3);
        let w = s.omega_table();
        let z = weyl_matrix(&s, &SympVector::new(&s, &[1, 0]).unwrap()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { w[i] } else { Complex64::new(0.0, 0.0) };
                assert!((z.get(i, j) - want).norm() < 1e-12);
            }
        }
        let x = weyl_matrix(&s, &SympVector::new(&s, &[0, 1]).unwrap()).unwrap();
        for j in 0..3 {
            assert!((x.get((j + 1) % 3, j) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn trace_orthogonality() {
        let s = f(3);
        let labels: Vec<SympVector> = VectorIter::new(&s, 2).map(SympVector::from_residues).collect();
        for x in &labels {
            let mx = weyl_matrix(&s, x).unwrap();
            assert!(mx.unitarity_deviation() < 1e-12);
            for y in &labels {
                let my = weyl_matrix(&s, y).unwrap();
                let t = my.hs_inner(&mx);
                let want = if x == y { 3.0 } else { 0.0 };
                assert!((t - want).norm() < 1e-12);
            }
        }
    }

    fn check_product(s: &FieldSpec, x: &SympVector, y: &SympVector) {
        let a = PauliElement::from_parts(0, x.clone());
        let b = PauliElement::from_parts(0, y.clone());
        let lhs = a.matrix(s).unwrap().mul(&b.matrix(s).unwrap()).unwrap();
        let rhs = pauli_mul(s, &a, &b).unwrap().matrix(s).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        // W_x W_y = ω^{[x,y]} W_y W_x
        let c = commutation_phase(s, x, y).unwrap();
        let swapped = b.matrix(s).unwrap().mul(&a.matrix(s).unwrap()).unwrap();
        let omega = s.omega_table();
        assert!(lhs.max_abs_diff(&swapped.scale(omega[c as usize])) < 1e-12);
    }

    #[test]
    fn matrix_symbolic_consistency_exhaustive_n1() {
        let s = f(3);
        let labels: Vec<SympVector> = VectorIter::new(&s, 2).map(SympVector::from_residues).collect();
        for x in &labels {
            for y in &labels {
                check_product(&s, x, y);
            }
        }
    }

    #[test]
    fn periodic_in_labels() {
        // Build W from unreduced integer labels and compare with reduced ones.
        let s = f(3);
        let omega = s.omega_table();
        for x in VectorIter::new(&s, 4) {
            let shifted: Vec<i64> = x.iter().enumerate().map(|(i, &e)| e as i64 + 3 * (i as i64 + 1)).collect();
            let (v, w) = shifted.split_at(2);
            let reference = weyl_matrix(&s, &SympVector::from_residues(x.clone())).unwrap();
            for col in 0..9usize {
                let q = [(col / 3) as i64, (col % 3) as i64];
                let row = (((q[0] + w[0]) % 3) * 3 + (q[1] + w[1]) % 3) as usize;
                let e = q[0] * v[0] + q[1] * v[1] + 2 * (v[0] * w[0] + v[1] * w[1]);
                let z = omega[e.rem_euclid(3) as usize];
                assert!((reference.get(row, col) - z).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn size_guard() {
        let s = f(127);
        assert!(matches!(weyl_matrix(&s, &SympVector::zero(3)), Err(Error::SizeGuard { .. })));
    }

    proptest! {
        #[test]
        fn matrix_symbolic_consistency_n2(a in proptest::collection::vec(0u8..3, 4), b in proptest::collection::vec(0u8..3, 4)) {
            let s = f(3);
            check_product(&s, &SympVector::from_residues(a), &SympVector::from_residues(b));
        }

        #[test]
        fn multiplication_is_associative(
            a in proptest::collection::vec(0u8..5, 5),
            b in proptest::collection::vec(0u8..5, 5),
            c in proptest::collection::vec(0u8..5, 5),
        ) {
            let s = f(5);
            let mk = |v: &[u8]| PauliElement::from_parts(v[0], SympVector::from_residues(v[1..].to_vec()));
            let (a, b, c) = (mk(&a), mk(&b), mk(&c));
            let left = pauli_mul(&s, &pauli_mul(&s, &a, &b).unwrap(), &c).unwrap();
            let right = pauli_mul(&s, &a, &pauli_mul(&s, &b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
