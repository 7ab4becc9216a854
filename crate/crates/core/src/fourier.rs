//! Symplectic Fourier analysis on functions `F_p^{2n} → C`.
//!
//! Functions are dense arrays indexed by the big-endian label index. The
//! transform is `f̂(y) = p^{-2n} Σ_x ω^{[y,x]} f(x)` with inverse
//! `f(x) = Σ_y ω^{[x,y]} f̂(y)`; convolution is
//! `(f∗g)(x) = p^{-2n} Σ_y f(y) g(x − y)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::gf::vector::symp;
use crate::gf::{digits_of, index_of, FieldSpec, Subspace, SympVector};
use crate::stab::{characteristic_distribution, unsigned_stabilizer_group, StabilizerGroup, UNSIGNED_TOL};
use crate::state::StateVector;
use crate::{Error, Result, TOL_STATE};

/// Largest `p^{2n}` for a dense function on phase space.
pub const PHASE_SPACE_GUARD: u64 = 1 << 26;
/// Largest `p^{4n}` for the naive quadratic transforms.
pub const TRANSFORM_GUARD: u64 = 1 << 26;

fn check_len(spec: &FieldSpec, n: usize, len: usize) -> Result<()> {
    let size = spec.guarded_size("phase space", 2 * n, PHASE_SPACE_GUARD)?;
    if size != len {
        return Err(Error::DimensionMismatch { expected: size, found: len });
    }
    Ok(())
}

fn labels(spec: &FieldSpec, n: usize) -> Vec<Vec<u8>> {
    let size = spec.size_of(2 * n).expect("guarded") as usize;
    (0..size)
        .map(|i| {
            let mut x = vec![0u8; 2 * n];
            digits_of(spec.p(), i, &mut x);
            x
        })
        .collect()
}

/// Index of `J(x)` for every index `x`.
fn involution_table(spec: &FieldSpec, n: usize) -> Vec<usize> {
    labels(spec, n).into_iter().map(|x| index_of(spec.p(), &SympVector::from_residues(x).involute(spec))).collect()
}

/// Index of `x − y` given indices of `x` and `y`.
struct Differences {
    p: u32,
    labels: Vec<Vec<u8>>,
}

impl Differences {
    fn new(spec: &FieldSpec, n: usize) -> Self {
        Self { p: spec.p(), labels: labels(spec, n) }
    }

    fn sub(&self, spec: &FieldSpec, i: usize, j: usize, scratch: &mut [u8]) -> usize {
        for ((s, &a), &b) in scratch.iter_mut().zip(&self.labels[i]).zip(&self.labels[j]) {
            *s = spec.sub(a, b);
        }
        index_of(self.p, scratch)
    }
}

/// A complex-valued function on `F_p^{2n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFunction {
    spec: FieldSpec,
    n: usize,
    values: Vec<Complex64>,
}

impl PhaseFunction {
    pub fn new(spec: &FieldSpec, n: usize, values: Vec<Complex64>) -> Result<Self> {
        check_len(spec, n, values.len())?;
        Ok(Self { spec: *spec, n, values })
    }

    /// `scale` at `x = 0`, zero elsewhere.
    pub fn delta(spec: &FieldSpec, n: usize, scale: f64) -> Result<Self> {
        let size = spec.guarded_size("phase space", 2 * n, PHASE_SPACE_GUARD)?;
        let mut values = vec![Complex64::new(0.0, 0.0); size];
        values[0] = Complex64::new(scale, 0.0);
        Self::new(spec, n, values)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, x: &[u8]) -> Complex64 {
        self.values[index_of(self.spec.p(), x)]
    }

    /// `(label, value)` pairs in index order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<u8>, Complex64)> + '_ {
        let n = self.n;
        let p = self.spec.p();
        self.values.iter().enumerate().map(move |(i, &v)| {
            let mut x = vec![0u8; 2 * n];
            digits_of(p, i, &mut x);
            (x, v)
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.values.len() != other.values.len() {
            return f64::INFINITY;
        }
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { spec: self.spec, n: self.n, values: self.values.iter().map(|v| v * c).collect() }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            spec: self.spec,
            n: self.n,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    /// `x ↦ f(J(x))`.
    pub fn involute(&self) -> Self {
        let table = involution_table(&self.spec, self.n);
        Self { spec: self.spec, n: self.n, values: table.iter().map(|&j| self.values[j]).collect() }
    }

    /// Largest imaginary part.
    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// Real part, after checking every imaginary part is below `tol`.
    pub fn to_real(&self, tol: f64) -> Result<PhaseDistribution> {
        let im = self.max_imag();
        if im > tol {
            return Err(Error::InvariantViolation(format!("function is not real (max |Im| = {im:e})")));
        }
        PhaseDistribution::new(&self.spec, self.n, self.values.iter().map(|v| v.re).collect())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.spec.p() != other.spec.p() || self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.values.len(), found: other.values.len() });
        }
        Ok(())
    }
}

/// A real-valued function on `F_p^{2n}`, typically a probability distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDistribution {
    spec: FieldSpec,
    n: usize,
    values: Vec<f64>,
}

impl PhaseDistribution {
    pub fn new(spec: &FieldSpec, n: usize, values: Vec<f64>) -> Result<Self> {
        check_len(spec, n, values.len())?;
        Ok(Self { spec: *spec, n, values })
    }

    /// `value` on the elements of `x`, zero elsewhere.
    pub fn uniform_on(spec: &FieldSpec, n: usize, x: &Subspace, value: f64) -> Result<Self> {
        let size = spec.guarded_size("phase space", 2 * n, PHASE_SPACE_GUARD)?;
        let mut values = vec![0.0; size];
        for e in x.elements(spec) {
            values[index_of(spec.p(), &e)] = value;
        }
        Self::new(spec, n, values)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x: &[u8]) -> f64 {
        self.values[index_of(self.spec.p(), x)]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<u8>, f64)> + '_ {
        let n = self.n;
        let p = self.spec.p();
        self.values.iter().enumerate().map(move |(i, &v)| {
            let mut x = vec![0u8; 2 * n];
            digits_of(p, i, &mut x);
            (x, v)
        })
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `Σ_x f(x)²`.
    pub fn sum_of_squares(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.values.len() != other.values.len() {
            return f64::INFINITY;
        }
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// `Σ_{x∈X} f(x)`.
    pub fn mass_on(&self, x: &Subspace) -> Result<f64> {
        if x.ambient_dim() != 2 * self.n {
            return Err(Error::DimensionMismatch { expected: 2 * self.n, found: x.ambient_dim() });
        }
        Ok(x.elements(&self.spec).iter().map(|e| self.values[index_of(self.spec.p(), e)]).sum())
    }

    /// Labels with value above `tol`.
    pub fn support(&self, tol: f64) -> Vec<Vec<u8>> {
        self.iter().filter(|(_, v)| *v > tol).map(|(x, _)| x).collect()
    }

    pub fn to_function(&self) -> PhaseFunction {
        PhaseFunction {
            spec: self.spec,
            n: self.n,
            values: self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { spec: self.spec, n: self.n, values: self.values.iter().map(|v| v * c).collect() }
    }
}

/// `out(y) = scale · Σ_x ω^{[y,x]} f(x)`.
fn transform(f: &PhaseFunction, scale: f64) -> Result<PhaseFunction> {
    let spec = f.spec;
    spec.guarded_size("symplectic Fourier transform", 4 * f.n, TRANSFORM_GUARD)?;
    let omega = spec.omega_table();
    let labels = labels(&spec, f.n);
    let values = labels
        .iter()
        .map(|y| {
            let acc: Complex64 =
                labels.iter().zip(&f.values).map(|(x, &v)| omega[symp(&spec, y, x) as usize] * v).sum();
            acc * scale
        })
        .collect();
    PhaseFunction::new(&spec, f.n, values)
}

/// `f̂(y) = p^{-2n} Σ_x ω^{[y,x]} f(x)`.
pub fn sft(f: &PhaseFunction) -> Result<PhaseFunction> {
    let size = f.spec.size_of(2 * f.n).unwrap_or(u64::MAX) as f64;
    transform(f, 1.0 / size)
}

/// `f(x) = Σ_y ω^{[x,y]} f̂(y)`.
pub fn inverse_sft(fhat: &PhaseFunction) -> Result<PhaseFunction> {
    transform(fhat, 1.0)
}

/// `(f∗g)(x) = p^{-2n} Σ_y f(y) g(x − y)`.
pub fn convolve(f: &PhaseFunction, g: &PhaseFunction) -> Result<PhaseFunction> {
    f.check_same(g)?;
    let spec = f.spec;
    spec.guarded_size("convolution", 4 * f.n, TRANSFORM_GUARD)?;
    let diffs = Differences::new(&spec, f.n);
    let size = f.values.len();
    let scale = 1.0 / size as f64;
    let mut scratch = vec![0u8; 2 * f.n];
    let values = (0..size)
        .map(|x| {
            let acc: Complex64 = (0..size).map(|y| f.values[y] * g.values[diffs.sub(&spec, x, y, &mut scratch)]).sum();
            acc * scale
        })
        .collect();
    PhaseFunction::new(&spec, f.n, values)
}

/// `j(x) = p(J(x))`.
pub fn involute_distribution(p_psi: &PhaseDistribution) -> PhaseDistribution {
    let table = involution_table(&p_psi.spec, p_psi.n);
    PhaseDistribution { spec: p_psi.spec, n: p_psi.n, values: table.iter().map(|&j| p_psi.values[j]).collect() }
}

/// The involuted Weyl distribution `b_ψ = p^{2n} (p_ψ ∗ j_ψ)`.
pub fn weyl_distribution(psi: &StateVector) -> Result<PhaseDistribution> {
    let p_psi = characteristic_distribution(psi)?;
    weyl_distribution_from(&p_psi)
}

/// `p^{2n} (p ∗ (p∘J))` for a given characteristic distribution.
pub fn weyl_distribution_from(p_psi: &PhaseDistribution) -> Result<PhaseDistribution> {
    let j_psi = involute_distribution(p_psi);
    let size = p_psi.values.len() as f64;
    convolve(&p_psi.to_function(), &j_psi.to_function())?.scale(size).to_real(TOL_STATE)
}

/// `b_ψ(x) = Σ_y ω^{[x,y]} p_ψ(y) p_ψ(J(y))`.
pub fn weyl_distribution_via_characters(p_psi: &PhaseDistribution) -> Result<PhaseDistribution> {
    let j_psi = involute_distribution(p_psi);
    let prod = p_psi.to_function().mul(&j_psi.to_function())?;
    inverse_sft(&prod)?.to_real(TOL_STATE)
}

/// `b_S` for a stabiliser group, with `M ∩ J(M)` and `M + J(M)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormBS {
    pub distribution: PhaseDistribution,
    pub intersection: Subspace,
    pub sum: Subspace,
}

/// Uniform `1/(|col V|·|col W|)` on `col(V) × col(W)`.
#[allow(non_snake_case)]
pub fn closed_form_bS(group: &StabilizerGroup) -> Result<ClosedFormBS> {
    let spec = group.spec();
    let n = group.n();
    let col_v = Subspace::col_space(spec, group.v_matrix());
    let col_w = Subspace::col_space(spec, group.w_matrix());
    let support = col_v.product(spec, &col_w);
    let value = 1.0 / (col_v.cardinality(spec) as f64 * col_w.cardinality(spec) as f64);
    let distribution = PhaseDistribution::uniform_on(spec, n, &support, value)?;
    let m = group.lagrangian();
    let jm = m.involute(spec)?;
    let intersection = m.intersect(spec, &jm)?;
    let sum = m.sum(spec, &jm)?;
    let total = spec.size_of(2 * n).expect("guarded");
    if intersection.cardinality(spec) * sum.cardinality(spec) != total {
        return Err(Error::InvariantViolation("|M ∩ J(M)|·|M + J(M)| ≠ p^{2n}".into()));
    }
    if sum != support {
        return Err(Error::InvariantViolation("M + J(M) ≠ col(V) × col(W)".into()));
    }
    Ok(ClosedFormBS { distribution, intersection, sum })
}

/// Both sides of the two subspace mass identities for a subspace `X`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassIdentities {
    /// `Σ_{x∈X} p_ψ(x)`.
    pub p_mass: f64,
    /// `|X|/p^n · Σ_{y∈X^⊥s} p_ψ(y)`.
    pub p_mass_dual: f64,
    /// `|X|^{-1} Σ_{x∈X} b_ψ(x)`.
    pub b_mean: f64,
    /// `Σ_{y∈X^⊥s} p_ψ(y) j_ψ(y)`.
    pub pj_mass_dual: f64,
}

impl MassIdentities {
    pub fn max_error(&self) -> f64 {
        (self.p_mass - self.p_mass_dual).abs().max((self.b_mean - self.pj_mass_dual).abs())
    }
}

pub fn subspace_mass_identities(psi: &StateVector, x: &Subspace) -> Result<MassIdentities> {
    let p_psi = characteristic_distribution(psi)?;
    let b_psi = weyl_distribution_from(&p_psi)?;
    mass_identities_from(&p_psi, &b_psi, x)
}

/// As [`subspace_mass_identities`], from precomputed `p_ψ` and `b_ψ`.
pub fn mass_identities_from(
    p_psi: &PhaseDistribution,
    b_psi: &PhaseDistribution,
    x: &Subspace,
) -> Result<MassIdentities> {
    let spec = p_psi.spec;
    let n = p_psi.n;
    let dual = x.symp_complement(&spec)?;
    let j_psi = involute_distribution(p_psi);
    let card = x.cardinality(&spec) as f64;
    let p_n = spec.size_of(n).expect("small") as f64;
    let pj_mass_dual = dual
        .elements(&spec)
        .iter()
        .map(|e| {
            let i = index_of(spec.p(), e);
            p_psi.values[i] * j_psi.values[i]
        })
        .sum();
    Ok(MassIdentities {
        p_mass: p_psi.mass_on(x)?,
        p_mass_dual: card / p_n * p_psi.mass_on(&dual)?,
        b_mean: b_psi.mass_on(x)? / card,
        pj_mass_dual,
    })
}

/// Masses of `p_ψ` on `Weyl(ψ)^⊥s` and of `b_ψ` on `Weyl(ψ)^⊥s + J(Weyl(ψ)^⊥s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportReport {
    pub weyl: Subspace,
    pub p_mass: f64,
    pub b_mass: f64,
}

impl SupportReport {
    pub fn passes(&self, tol: f64) -> bool {
        (self.p_mass - 1.0).abs() <= tol && (self.b_mass - 1.0).abs() <= tol
    }
}

pub fn support_check(psi: &StateVector) -> Result<SupportReport> {
    let spec = *psi.spec();
    let weyl = unsigned_stabilizer_group(psi, UNSIGNED_TOL)?.subspace;
    let dual = weyl.symp_complement(&spec)?;
    let p_psi = characteristic_distribution(psi)?;
    let b_psi = weyl_distribution_from(&p_psi)?;
    let b_support = dual.sum(&spec, &dual.involute(&spec)?)?;
    Ok(SupportReport { p_mass: p_psi.mass_on(&dual)?, b_mass: b_psi.mass_on(&b_support)?, weyl })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::RngStream;
    use proptest::prelude::*;

    fn f(p: u32) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    fn random_function(spec: &FieldSpec, n: usize, seed: u64) -> PhaseFunction {
        let mut rng = RngStream::new(seed, 7);
        let size = spec.size_of(2 * n).unwrap() as usize;
        let values = (0..size).map(|_| Complex64::new(rng.unit() - 0.5, rng.unit() - 0.5)).collect();
        PhaseFunction::new(spec, n, values).unwrap()
    }

    fn haar(spec: &FieldSpec, n: usize, seed: u64) -> StateVector {
        StateVector::haar_random(spec, n, &mut RngStream::new(seed, 0)).unwrap()
    }

    #[test]
    fn delta_transforms_to_constant() {
        let s = f(3);
        let d = PhaseFunction::delta(&s, 1, 1.0).unwrap();
        for v in sft(&d).unwrap().values() {
            assert!((v - Complex64::new(1.0 / 9.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn round_trip() {
        let s = f(3);
        for n in 1..=2 {
            let g = random_function(&s, n, n as u64);
            let back = inverse_sft(&sft(&g).unwrap()).unwrap();
            assert!(back.max_abs_diff(&g) < 1e-9);
        }
    }

    #[test]
    fn characteristic_distribution_is_fourier_invariant() {
        let s = f(3);
        for seed in 0..5 {
            let psi = haar(&s, 2, seed);
            let p = characteristic_distribution(&psi).unwrap();
            let j = involute_distribution(&p);
            let ph = sft(&p.to_function()).unwrap();
            let jh = sft(&j.to_function()).unwrap();
            assert!(ph.max_abs_diff(&p.to_function().scale(1.0 / 9.0)) < 1e-9);
            assert!(jh.max_abs_diff(&j.to_function().scale(1.0 / 9.0)) < 1e-9);
            assert!(ph.involute().max_abs_diff(&jh) < 1e-9);
            assert!(ph.max_imag() < 1e-9);
        }
    }

    #[test]
    fn convolution_identities() {
        let s = f(3);
        let a = random_function(&s, 1, 1);
        let b = random_function(&s, 1, 2);
        let delta = PhaseFunction::delta(&s, 1, 9.0).unwrap();
        assert!(convolve(&a, &delta).unwrap().max_abs_diff(&a) < 1e-12);
        let lhs = sft(&convolve(&a, &b).unwrap()).unwrap();
        let rhs = sft(&a).unwrap().mul(&sft(&b).unwrap()).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-9);
    }

    #[test]
    fn generalized_parseval() {
        // p^{-2n} Σ_x ω^{[t,x]} f(x) g(x) = Σ_y f̂(y) ĝ(t − y)
        let s = f(3);
        let n = 2;
        let a = random_function(&s, n, 3);
        let b = random_function(&s, n, 4);
        let (ah, bh) = (sft(&a).unwrap(), sft(&b).unwrap());
        let omega = s.omega_table();
        let labels = labels(&s, n);
        let size = labels.len();
        for t in labels.iter().step_by(7) {
            let lhs: Complex64 = labels
                .iter()
                .enumerate()
                .map(|(i, x)| omega[symp(&s, t, x) as usize] * a.values()[i] * b.values()[i])
                .sum::<Complex64>()
                / size as f64;
            let rhs: Complex64 = labels
                .iter()
                .enumerate()
                .map(|(i, y)| {
                    let d: Vec<u8> = t.iter().zip(y).map(|(&u, &v)| s.sub(u, v)).collect();
                    ah.values()[i] * bh.get(&d)
                })
                .sum();
            assert!((lhs - rhs).norm() < 1e-9);
        }
    }

    #[test]
    fn involution_basics() {
        let s = f(5);
        let p = characteristic_distribution(&haar(&s, 1, 9)).unwrap();
        let j = involute_distribution(&p);
        assert!(involute_distribution(&j).max_abs_diff(&p) < 1e-15);
        assert!((j.total() - p.total()).abs() < 1e-12);
        let zero = StateVector::basis_state(&s, &[0, 0]).unwrap();
        let pz = characteristic_distribution(&zero).unwrap();
        assert!(involute_distribution(&pz).max_abs_diff(&pz) < 1e-15);
    }

    #[test]
    fn weyl_distribution_examples() {
        let s = f(3);
        let plus =
            crate::stab::StabilizerGroup::new(&s, vec![crate::PauliElement::new(&s, 0, &[0, 1]).unwrap()]).unwrap();
        let b = weyl_distribution(&plus.state_closed_form().unwrap()).unwrap();
        for (x, v) in b.iter() {
            let want = if x[0] == 0 { 1.0 / 3.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-12);
        }
        let diag =
            crate::stab::StabilizerGroup::new(&s, vec![crate::PauliElement::new(&s, 0, &[1, 1]).unwrap()]).unwrap();
        let b = weyl_distribution(&diag.state_closed_form().unwrap()).unwrap();
        for v in b.values() {
            assert!((v - 1.0 / 9.0).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_examples() {
        let s = f(3);
        let z = crate::stab::StabilizerGroup::new(&s, vec![crate::PauliElement::new(&s, 0, &[1, 0]).unwrap()]).unwrap();
        let c = closed_form_bS(&z).unwrap();
        for (x, v) in c.distribution.iter() {
            assert!((v - if x[1] == 0 { 1.0 / 3.0 } else { 0.0 }).abs() < 1e-15);
        }
        let x = crate::stab::StabilizerGroup::new(&s, vec![crate::PauliElement::new(&s, 0, &[0, 1]).unwrap()]).unwrap();
        let c = closed_form_bS(&x).unwrap();
        assert_eq!(c.sum, Subspace::span(&s, 2, &[[0u8, 1]]));
    }

    #[test]
    fn two_routes_to_b_agree() {
        let s = f(3);
        for seed in 0..5 {
            let p = characteristic_distribution(&haar(&s, 2, 100 + seed)).unwrap();
            let a = weyl_distribution_from(&p).unwrap();
            let b = weyl_distribution_via_characters(&p).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-9);
            assert!((a.total() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn mass_identity_extremes() {
        let s = f(3);
        let psi = haar(&s, 2, 5);
        let zero = subspace_mass_identities(&psi, &Subspace::zero(4)).unwrap();
        assert!((zero.p_mass - 1.0 / 9.0).abs() < 1e-12 && zero.max_error() < 1e-9);
        let full = subspace_mass_identities(&psi, &Subspace::full(4)).unwrap();
        assert!((full.p_mass - 1.0).abs() < 1e-9 && full.max_error() < 1e-9);
    }

    #[test]
    fn support_of_stabiliser_and_haar_states() {
        let s = f(3);
        let g = crate::stab::StabilizerGroup::random(&s, 2, &mut RngStream::new(3, 0)).unwrap();
        let r = support_check(&g.state_closed_form().unwrap()).unwrap();
        assert_eq!(r.weyl, g.lagrangian());
        assert!(r.passes(1e-9));
        let h = support_check(&haar(&s, 2, 8)).unwrap();
        assert_eq!(h.weyl.dim(), 0);
        assert!(h.passes(1e-9));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn mass_identities_random(seed in any::<u64>(), raw in proptest::collection::vec(0u8..3, 12), k in 0usize..=3) {
            let s = f(3);
            let psi = haar(&s, 2, seed);
            let vecs: Vec<Vec<u8>> = raw.chunks(4).take(k).map(<[u8]>::to_vec).collect();
            let x = Subspace::span(&s, 4, &vecs);
            prop_assert!(subspace_mass_identities(&psi, &x).unwrap().max_error() < 1e-9);
        }
    }
}
