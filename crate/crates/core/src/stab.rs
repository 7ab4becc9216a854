//! Stabiliser groups, their states, characteristic distributions and
//! stabiliser fidelity.
//!
//! A generator `(s, x)` stands for `ω^s W_x`; the group's state is the joint
//! `+1` eigenvector of every generator.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fourier::{PhaseDistribution, PhaseFunction, PHASE_SPACE_GUARD};
use crate::gf::vector::dot;
use crate::gf::{digits_of, enumerate_lagrangians, index_of, FieldSpec, FpMatrix, Subspace, SympVector, VectorIter};
use crate::state::{RngStream, StateVector};
use crate::weyl::{pauli_mul, pauli_pow, PauliElement, WEYL_MATRIX_GUARD};
use crate::{Error, Result, TOL_EIGEN, TOL_STATE};

/// `n` independent, pairwise commuting generators on `n` qudits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerGroup {
    spec: FieldSpec,
    n: usize,
    generators: Vec<PauliElement>,
    v: FpMatrix,
    w: FpMatrix,
    s: Vec<u8>,
}

impl StabilizerGroup {
    /// Validates independence, then commutation, then the generator count.
    pub fn new(spec: &FieldSpec, generators: Vec<PauliElement>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::InvalidParameter("a stabiliser group needs at least one generator".into()));
        };
        let n = first.n();
        if n == 0 {
            return Err(Error::InvalidParameter("labels must be nonempty".into()));
        }
        for g in &generators {
            if g.label.len() != 2 * n {
                return Err(Error::DimensionMismatch { expected: 2 * n, found: g.label.len() });
            }
            spec.check(g.phase as u32)?;
            for &e in g.label.iter() {
                spec.check(e as u32)?;
            }
        }
        let mut span = Subspace::zero(2 * n);
        for (index, g) in generators.iter().enumerate() {
            if span.contains_vector(spec, &g.label) {
                return Err(Error::DependentGenerators { index });
            }
            span = span.sum(spec, &Subspace::span(spec, 2 * n, &[&g.label[..]]))?;
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if generators[i].label.symplectic_product(spec, &generators[j].label)? != 0 {
                    return Err(Error::NonCommuting { first: i, second: j });
                }
            }
        }
        if generators.len() != n {
            return Err(Error::WrongGeneratorCount { n, found: generators.len() });
        }
        Ok(Self::from_valid(spec, generators))
    }

    fn from_valid(spec: &FieldSpec, generators: Vec<PauliElement>) -> Self {
        let n = generators[0].n();
        let v = FpMatrix::from_columns(n, &generators.iter().map(|g| g.label.v()).collect::<Vec<_>>());
        let w = FpMatrix::from_columns(n, &generators.iter().map(|g| g.label.w()).collect::<Vec<_>>());
        let s = generators.iter().map(|g| g.phase).collect();
        Self { spec: *spec, n, generators, v, w, s }
    }

    /// The group with generators `(phases_i, basis_i)` over the canonical basis of `m`.
    pub fn from_lagrangian(spec: &FieldSpec, m: &Subspace, phases: &[u8]) -> Result<Self> {
        if !m.is_lagrangian(spec) {
            return Err(Error::NotLagrangian);
        }
        if phases.len() != m.dim() {
            return Err(Error::DimensionMismatch { expected: m.dim(), found: phases.len() });
        }
        let gens = m
            .basis()
            .row_iter()
            .zip(phases)
            .map(|(x, &s)| Ok(PauliElement::from_parts(spec.check(s as u32)?, SympVector::from_residues(x.to_vec()))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, gens)
    }

    /// Uniformly random phases over a Lagrangian built by random isotropic
    /// extension. The chosen extension vectors are kept as generators.
    pub fn random(spec: &FieldSpec, n: usize, rng: &mut RngStream) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        let mut labels: Vec<Vec<u8>> = Vec::with_capacity(n);
        for _ in 0..n {
            let span = Subspace::span(spec, 2 * n, &labels);
            let comp = span.symp_complement(spec)?;
            let y = loop {
                let mut y = vec![0u8; 2 * n];
                for row in comp.basis().row_iter() {
                    let c = rng.residue(spec);
                    for (yi, &bi) in y.iter_mut().zip(row) {
                        *yi = spec.add(*yi, spec.mul(c, bi));
                    }
                }
                if !span.contains_vector(spec, &y) {
                    break y;
                }
            };
            labels.push(y);
        }
        let gens = labels
            .into_iter()
            .map(|x| PauliElement::from_parts(rng.residue(spec), SympVector::from_residues(x)))
            .collect();
        Self::new(spec, gens)
    }

    /// Every group on `n` qudits: each Lagrangian with each of `p^n` phase vectors.
    pub fn enumerate_all(spec: &FieldSpec, n: usize) -> Result<Vec<Self>> {
        let mut out = Vec::new();
        for m in enumerate_lagrangians(spec, n)? {
            for s in VectorIter::new(spec, n) {
                out.push(Self::from_lagrangian(spec, &m, &s)?);
            }
        }
        Ok(out)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliElement] {
        &self.generators
    }

    /// Columns are the `v` halves of the generator labels.
    pub fn v_matrix(&self) -> &FpMatrix {
        &self.v
    }

    /// Columns are the `w` halves of the generator labels.
    pub fn w_matrix(&self) -> &FpMatrix {
        &self.w
    }

    pub fn phases(&self) -> &[u8] {
        &self.s
    }

    /// `M = col([V; W])`.
    pub fn lagrangian(&self) -> Subspace {
        Subspace::span(&self.spec, 2 * self.n, &self.generators.iter().map(|g| &g.label[..]).collect::<Vec<_>>())
    }

    /// Generators whose labels form the canonical basis of `M`, with phases
    /// transported through the row operations.
    pub fn canonical(&self) -> Self {
        let spec = &self.spec;
        let p = spec.p() as u64;
        let mut rows = self.generators.clone();
        let mut r = 0;
        for col in 0..2 * self.n {
            if r == rows.len() {
                break;
            }
            let Some(pr) = (r..rows.len()).find(|&i| rows[i].label[col] != 0) else {
                continue;
            };
            rows.swap(r, pr);
            let inv = spec.inv(rows[r].label[col]).expect("nonzero pivot");
            rows[r] = pauli_pow(spec, &rows[r], inv as u64);
            for i in 0..rows.len() {
                let f = rows[i].label[col];
                if i == r || f == 0 {
                    continue;
                }
                let t = pauli_pow(spec, &rows[r], p - f as u64);
                rows[i] = pauli_mul(spec, &rows[i], &t).expect("same n");
            }
            r += 1;
        }
        Self::from_valid(spec, rows)
    }

    /// Whether `self` and `other` generate the same group.
    pub fn same_group(&self, other: &Self) -> bool {
        self.spec == other.spec && self.n == other.n && self.canonical().generators == other.canonical().generators
    }

    /// Whether `ω^s W_x` belongs to the group.
    pub fn contains(&self, element: &PauliElement) -> bool {
        if element.label.len() != 2 * self.n {
            return false;
        }
        let canon = self.canonical();
        let mut acc = PauliElement::identity(self.n);
        for g in &canon.generators {
            let pivot = g.label.iter().position(|&e| e != 0).expect("independent");
            let c = element.label[pivot];
            if c != 0 {
                acc = pauli_mul(&self.spec, &acc, &pauli_pow(&self.spec, g, c as u64)).expect("same n");
            }
        }
        acc == *element
    }

    /// All `p^n` group elements.
    pub fn elements(&self) -> Vec<PauliElement> {
        let mut out = vec![PauliElement::identity(self.n)];
        for g in &self.generators {
            let mut next = Vec::with_capacity(out.len() * self.spec.p() as usize);
            for e in &out {
                let mut cur = e.clone();
                for _ in 0..self.spec.p() {
                    next.push(cur.clone());
                    cur = pauli_mul(&self.spec, &cur, g).expect("same n");
                }
            }
            out = next;
        }
        out
    }

    /// The stabiliser state from its closed form: with `V^T u + W^T y = -s`,
    /// `|S⟩ = √|col W| / p^n · Σ_q ω^{s·q + u·Vq + 2^{-1} Vq·Wq} |u + Wq⟩`.
    pub fn state_closed_form(&self) -> Result<StateVector> {
        let spec = &self.spec;
        let n = self.n;
        let a = self.v.transpose().hstack(&self.w.transpose())?;
        let rhs: Vec<u8> = self.s.iter().map(|&e| spec.neg(e)).collect();
        let sol = a
            .solve(spec, &rhs)?
            .solution
            .ok_or_else(|| Error::InvariantViolation("no u with V^T u + s in row(W)".into()))?;
        let u = &sol[..n];
        let omega = spec.omega_table();
        let mut psi = StateVector::zeros(spec, n)?;
        let mut target = vec![0u8; n];
        for q in VectorIter::new(spec, n) {
            let vq = self.v.mul_vec(spec, &q)?;
            let wq = self.w.mul_vec(spec, &q)?;
            let e = spec
                .add(spec.add(dot(spec, &self.s, &q), dot(spec, u, &vq)), spec.mul(spec.inv2(), dot(spec, &vq, &wq)));
            for i in 0..n {
                target[i] = spec.add(u[i], wq[i]);
            }
            let idx = psi.index_of(&target);
            psi.amps_mut()[idx] += omega[e as usize];
        }
        let col_w = spec.size_of(self.w.rank(spec)).expect("small") as f64;
        let p_n = spec.size_of(n).expect("small") as f64;
        let scale = libm::sqrt(col_w) / p_n;
        for a in psi.amps_mut() {
            *a *= scale;
        }
        let norm = psi.norm();
        if (norm - 1.0).abs() > TOL_STATE {
            return Err(Error::InvariantViolation(format!("closed-form state has norm {norm}")));
        }
        Ok(psi)
    }

    /// `P|k⟩ / ‖P|k⟩‖` for the first basis state `k` not annihilated by
    /// `P = p^{-n} Σ_{g ∈ S} g`.
    pub fn state_projector_oracle(&self) -> Result<StateVector> {
        let spec = &self.spec;
        spec.guarded_size("projector oracle dimension", self.n, WEYL_MATRIX_GUARD)?;
        let elements = self.elements();
        let dim = spec.size_of(self.n).expect("guarded") as usize;
        for k in 0..dim {
            let mut psi = self.projector_column(&elements, k)?;
            if psi.norm() > 1e-6 {
                psi.normalize()?;
                return Ok(psi);
            }
        }
        Err(Error::InvariantViolation("projector annihilates every basis state".into()))
    }

    fn projector_column(&self, elements: &[PauliElement], k: usize) -> Result<StateVector> {
        let spec = &self.spec;
        let n = self.n;
        let omega = spec.omega_table();
        let mut q = vec![0u8; n];
        digits_of(spec.p(), k, &mut q);
        let mut psi = StateVector::zeros(spec, n)?;
        let scale = 1.0 / spec.size_of(n).expect("guarded") as f64;
        let mut target = vec![0u8; n];
        for g in elements {
            let (v, w) = (g.label.v(), g.label.w());
            let e = spec.add(g.phase, spec.add(dot(spec, &q, v), spec.mul(spec.inv2(), dot(spec, v, w))));
            for i in 0..n {
                target[i] = spec.add(q[i], w[i]);
            }
            let idx = index_of(spec.p(), &target);
            psi.amps_mut()[idx] += omega[e as usize] * scale;
        }
        Ok(psi)
    }

    /// Dense projector `p^{-n} Σ_{g ∈ S} g`.
    pub fn projector_matrix(&self) -> Result<crate::cmat::CMatrix> {
        self.spec.guarded_size("projector oracle dimension", self.n, WEYL_MATRIX_GUARD)?;
        let elements = self.elements();
        let dim = self.spec.size_of(self.n).expect("guarded") as usize;
        let mut m = crate::cmat::CMatrix::zeros(dim, dim);
        for k in 0..dim {
            let col = self.projector_column(&elements, k)?;
            for (i, &a) in col.amps().iter().enumerate() {
                m.set(i, k, a);
            }
        }
        Ok(m)
    }

    /// The matrix identities satisfied by the generator matrices of any group.
    pub fn matrix_identities(&self) -> Result<MatrixIdentities> {
        let spec = &self.spec;
        let n = self.n;
        let (v, w) = (&self.v, &self.w);
        let (vt, wt) = (v.transpose(), w.transpose());
        let vtw = vt.mul(spec, w)?;
        let wtv = wt.mul(spec, v)?;
        let stacked = v.vstack(w)?;
        let null_v = Subspace::null_space(spec, v);
        let null_w = Subspace::null_space(spec, w);
        let neg_v = v.scale(spec, spec.neg(1));
        Ok(MatrixIdentities {
            symmetric_product: vtw == wtv,
            full_rank: stacked.rank(spec) == n,
            rows_span: Subspace::row_space(spec, v).sum(spec, &Subspace::row_space(spec, w))? == Subspace::full(n),
            nulls_meet_trivially: null_v.intersect(spec, &null_w)?.dim() == 0,
            kernel_of_transpose: Subspace::null_space(spec, &vt.hstack(&wt)?)
                == Subspace::col_space(spec, &w.vstack(&neg_v)?),
            null_of_product: Subspace::null_space(spec, &vtw) == null_v.sum(spec, &null_w)?,
            null_wt_in_col_v: Subspace::col_space(spec, v).contains(spec, &Subspace::null_space(spec, &wt)),
            null_vt_in_col_w: Subspace::col_space(spec, w).contains(spec, &Subspace::null_space(spec, &vt)),
        })
    }
}

/// Outcome of [`StabilizerGroup::matrix_identities`], one flag per identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixIdentities {
    /// `V^T W = W^T V`.
    pub symmetric_product: bool,
    /// `rank([V; W]) = n`.
    pub full_rank: bool,
    /// `row(V) + row(W) = F_p^n`.
    pub rows_span: bool,
    /// `null(V) ∩ null(W) = {0}`.
    pub nulls_meet_trivially: bool,
    /// `null([V^T W^T]) = col([W; -V])`.
    pub kernel_of_transpose: bool,
    /// `null(V^T W) = null(V) + null(W)`.
    pub null_of_product: bool,
    /// `null(W^T) ⊆ col(V)`.
    pub null_wt_in_col_v: bool,
    /// `null(V^T) ⊆ col(W)`.
    pub null_vt_in_col_w: bool,
}

impl MatrixIdentities {
    pub fn all(&self) -> bool {
        self.symmetric_product
            && self.full_rank
            && self.rows_span
            && self.nulls_meet_trivially
            && self.kernel_of_transpose
            && self.null_of_product
            && self.null_wt_in_col_v
            && self.null_vt_in_col_w
    }
}

/// `⟨ψ|W_x|ψ⟩` for every `x ∈ F_p^{2n}`, indexed like [`PhaseFunction`].
pub fn weyl_expectations(psi: &StateVector) -> Result<PhaseFunction> {
    let spec = psi.spec();
    let n = psi.n();
    spec.guarded_size("phase space", 2 * n, PHASE_SPACE_GUARD)?;
    let p = spec.p() as usize;
    let dim = psi.dim();
    let omega = spec.omega_table();
    let amps = psi.amps();
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut wdig = vec![0u8; n];
    let mut qdig = vec![0u8; n];
    let mut shifted = vec![0u8; n];
    let mut vdig = vec![0u8; n];
    let mut buf = vec![Complex64::new(0.0, 0.0); dim];
    let mut tmp = vec![Complex64::new(0.0, 0.0); p];
    for iw in 0..dim {
        digits_of(spec.p(), iw, &mut wdig);
        for (iq, b) in buf.iter_mut().enumerate() {
            digits_of(spec.p(), iq, &mut qdig);
            for i in 0..n {
                shifted[i] = spec.add(qdig[i], wdig[i]);
            }
            *b = amps[index_of(spec.p(), &shifted)].conj() * amps[iq];
        }
        // Per-digit transform q_i -> v_i with kernel ω^{q_i v_i}.
        let mut stride = 1;
        for _ in 0..n {
            for base in 0..dim {
                if (base / stride) % p != 0 {
                    continue;
                }
                for (vi, t) in tmp.iter_mut().enumerate() {
                    *t = (0..p).map(|qi| omega[(qi * vi) % p] * buf[base + qi * stride]).sum();
                }
                for (vi, t) in tmp.iter().enumerate() {
                    buf[base + vi * stride] = *t;
                }
            }
            stride *= p;
        }
        for (iv, b) in buf.iter().enumerate() {
            digits_of(spec.p(), iv, &mut vdig);
            let e = spec.mul(spec.inv2(), dot(spec, &vdig, &wdig));
            out[iv * dim + iw] = omega[e as usize] * b;
        }
    }
    PhaseFunction::new(spec, n, out)
}

/// `p_ψ(x) = p^{-n} |⟨ψ|W_x|ψ⟩|²`.
pub fn characteristic_distribution(psi: &StateVector) -> Result<PhaseDistribution> {
    let e = weyl_expectations(psi)?;
    let scale = 1.0 / psi.dim() as f64;
    PhaseDistribution::new(psi.spec(), psi.n(), e.values().iter().map(|z| z.norm_sqr() * scale).collect())
}

/// The labels `x` with `W_x|ψ⟩ ∝ |ψ⟩`, as an isotropic subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnsignedStabilizer {
    pub subspace: Subspace,
}

impl UnsignedStabilizer {
    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }
}

/// `{x : |⟨ψ|W_x|ψ⟩| ≥ 1 − tol}`, checked to be an isotropic subspace.
pub fn unsigned_stabilizer_group(psi: &StateVector, tol: f64) -> Result<UnsignedStabilizer> {
    let spec = psi.spec();
    let n = psi.n();
    let e = weyl_expectations(psi)?;
    let labels: Vec<Vec<u8>> = e.iter().filter(|(_, z)| z.norm() >= 1.0 - tol).map(|(x, _)| x).collect();
    let subspace = Subspace::span(spec, 2 * n, &labels);
    if subspace.cardinality(spec) != labels.len() as u64 {
        return Err(Error::NotASubspace);
    }
    if !subspace.is_isotropic(spec) {
        return Err(Error::InvariantViolation("Weyl labels of a state are not isotropic".into()));
    }
    Ok(UnsignedStabilizer { subspace })
}

/// Default tolerance for [`unsigned_stabilizer_group`].
pub const UNSIGNED_TOL: f64 = TOL_EIGEN;

/// `max_S |⟨S|ψ⟩|²` over every stabiliser state, with a maximising group.
pub fn stabilizer_fidelity_bruteforce(psi: &StateVector) -> Result<(f64, StabilizerGroup)> {
    let mut best: Option<(f64, StabilizerGroup)> = None;
    for g in StabilizerGroup::enumerate_all(psi.spec(), psi.n())? {
        let f = g.state_closed_form()?.inner(psi)?.norm_sqr();
        if best.as_ref().map_or(true, |(b, _)| f > *b) {
            best = Some((f, g));
        }
    }
    best.ok_or_else(|| Error::InvariantViolation("no stabiliser groups".into()))
}

/// `(Σ_{x∈M} p_ψ(x), √Σ_{x∈M} p_ψ(x))` for a Lagrangian `M`.
pub fn fidelity_bounds(p_psi: &PhaseDistribution, m: &Subspace) -> Result<(f64, f64)> {
    if !m.is_lagrangian(p_psi.spec()) || m.ambient_dim() != 2 * p_psi.n() {
        return Err(Error::NotLagrangian);
    }
    let lower = p_psi.mass_on(m)?;
    Ok((lower, libm::sqrt(lower)))
}

/// `(p^n/|Y| Σ_Y p_ψ, √(p^n/|X| Σ_X p_ψ))` for subspaces `X ⊆ Y`.
pub fn generalized_fidelity_bounds(p_psi: &PhaseDistribution, x: &Subspace, y: &Subspace) -> Result<(f64, f64)> {
    let spec = p_psi.spec();
    if !y.contains(spec, x) {
        return Err(Error::InvalidParameter("X must be contained in Y".into()));
    }
    let p_n = spec.size_of(p_psi.n()).expect("small") as f64;
    let lower = p_n / y.cardinality(spec) as f64 * p_psi.mass_on(y)?;
    let upper = libm::sqrt(p_n / x.cardinality(spec) as f64 * p_psi.mass_on(x)?);
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    fn el(s: &FieldSpec, phase: u32, label: &[u32]) -> PauliElement {
        PauliElement::new(s, phase, label).unwrap()
    }

    fn group(s: &FieldSpec, gens: &[(u32, &[u32])]) -> StabilizerGroup {
        StabilizerGroup::new(s, gens.iter().map(|(p, x)| el(s, *p, x)).collect()).unwrap()
    }

    fn stabilises(g: &StabilizerGroup, psi: &StateVector) -> bool {
        let omega = g.spec().omega_table();
        g.generators().iter().all(|gen| {
            let out = psi.apply_weyl(&gen.label).unwrap();
            out.amps().iter().zip(psi.amps()).all(|(a, b)| (a * omega[gen.phase as usize] - b).norm() < 1e-9)
        })
    }

    #[test]
    fn validation() {
        let s = f(3);
        assert!(StabilizerGroup::new(&s, vec![el(&s, 0, &[1, 0])]).is_ok());
        assert_eq!(
            StabilizerGroup::new(&s, vec![el(&s, 0, &[1, 0]), el(&s, 0, &[2, 0])]),
            Err(Error::DependentGenerators { index: 1 })
        );
        assert!(StabilizerGroup::new(&s, vec![el(&s, 0, &[1, 0, 0, 0]), el(&s, 0, &[0, 1, 0, 0])]).is_ok());
        assert_eq!(
            StabilizerGroup::new(&s, vec![el(&s, 0, &[1, 0, 0, 0]), el(&s, 0, &[0, 0, 1, 0])]),
            Err(Error::NonCommuting { first: 0, second: 1 })
        );
        assert_eq!(
            StabilizerGroup::new(&s, vec![el(&s, 0, &[1, 0, 0, 0])]),
            Err(Error::WrongGeneratorCount { n: 2, found: 1 })
        );
    }

    #[test]
    fn closed_form_examples() {
        let s = f(3);
        let z = group(&s, &[(0, &[1, 0])]).state_closed_form().unwrap();
        assert!((z.amplitude(&[0]).re - 1.0).abs() < 1e-12);
        let x = group(&s, &[(0, &[0, 1])]).state_closed_form().unwrap();
        for a in x.amps() {
            assert!((a - Complex64::new(1.0 / 3f64.sqrt(), 0.0)).norm() < 1e-12);
        }
        let g = group(&s, &[(1, &[1, 1])]);
        let d = g.state_closed_form().unwrap().distance_up_to_phase(&g.state_projector_oracle().unwrap()).unwrap();
        assert!(d < 1e-9);
    }

    #[test]
    fn projector_oracle_examples() {
        let s = f(3);
        let z1 = group(&s, &[(1, &[1, 0])]);
        let psi = z1.state_projector_oracle().unwrap();
        assert!((psi.amplitude(&[2]).norm() - 1.0).abs() < 1e-12);
        let g = group(&s, &[(2, &[1, 2, 0, 1]), (1, &[0, 1, 1, 0])]);
        let pm = g.projector_matrix().unwrap();
        assert!(pm.mul(&pm).unwrap().max_abs_diff(&pm) < 1e-9);
        assert!((pm.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn canonical_form_and_membership() {
        let s = f(3);
        let a = group(&s, &[(1, &[1, 0, 0, 0]), (2, &[0, 1, 0, 0])]);
        // Same group, different generators: product and square.
        let g0 = a.generators()[0].clone();
        let g1 = a.generators()[1].clone();
        let b = StabilizerGroup::new(&s, vec![pauli_mul(&s, &g0, &g1).unwrap(), pauli_pow(&s, &g1, 2)]).unwrap();
        assert!(a.same_group(&b));
        let c = group(&s, &[(1, &[1, 0, 0, 0]), (1, &[0, 1, 0, 0])]);
        assert!(!a.same_group(&c));
        for e in a.elements() {
            assert!(a.contains(&e));
            assert!(b.contains(&e));
        }
        assert!(!a.contains(&el(&s, 0, &[1, 0, 0, 0])));
    }

    #[test]
    fn exhaustive_oracle_agreement_small() {
        let s = f(3);
        let all = StabilizerGroup::enumerate_all(&s, 2).unwrap();
        assert_eq!(all.len(), 360);
        for g in &all {
            let cf = g.state_closed_form().unwrap();
            let or = g.state_projector_oracle().unwrap();
            assert!(cf.distance_up_to_phase(&or).unwrap() < 1e-9);
            assert!(stabilises(g, &cf));
            assert!(g.matrix_identities().unwrap().all());
        }
    }

    #[test]
    fn characteristic_distribution_of_stabiliser_states() {
        let s = f(3);
        let mut rng = RngStream::new(5, 0);
        for _ in 0..10 {
            let g = StabilizerGroup::random(&s, 2, &mut rng).unwrap();
            let dist = characteristic_distribution(&g.state_closed_form().unwrap()).unwrap();
            let m = g.lagrangian();
            for (x, v) in dist.iter() {
                let want = if m.contains_vector(&s, &x) { 1.0 / 9.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn characteristic_distribution_basics() {
        let s = f(5);
        let psi = StateVector::haar_random(&s, 2, &mut RngStream::new(1, 0)).unwrap();
        let d = characteristic_distribution(&psi).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-9);
        assert!((d.get(&[0, 0, 0, 0]) - 1.0 / 25.0).abs() < 1e-12);
        for (x, v) in d.iter() {
            let neg: Vec<u8> = x.iter().map(|&e| s.neg(e)).collect();
            assert!((d.get(&neg) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn unsigned_group_examples() {
        let s = f(3);
        let mut rng = RngStream::new(8, 0);
        let g = StabilizerGroup::random(&s, 2, &mut rng).unwrap();
        let u = unsigned_stabilizer_group(&g.state_closed_form().unwrap(), UNSIGNED_TOL).unwrap();
        assert_eq!(u.subspace, g.lagrangian());
        let h = StateVector::haar_random(&s, 3, &mut rng).unwrap();
        assert_eq!(unsigned_stabilizer_group(&h, UNSIGNED_TOL).unwrap().dim(), 0);
    }

    #[test]
    fn fidelity_single_qutrit() {
        let s = f(3);
        let amp = 0.5f64.sqrt();
        let psi =
            StateVector::new(&s, 1, vec![Complex64::new(amp, 0.0), Complex64::new(amp, 0.0), Complex64::new(0.0, 0.0)])
                .unwrap();
        let (val, _) = stabilizer_fidelity_bruteforce(&psi).unwrap();
        // Independent enumeration of the 12 single-qutrit stabiliser states.
        let mut best: f64 = 0.0;
        for m in enumerate_lagrangians(&s, 1).unwrap() {
            for a in 0..3u8 {
                let g = StabilizerGroup::from_lagrangian(&s, &m, &[a]).unwrap();
                best = best.max(g.state_projector_oracle().unwrap().inner(&psi).unwrap().norm_sqr());
            }
        }
        assert!((val - best).abs() < 1e-12);
        let stab = group(&s, &[(2, &[1, 1])]).state_closed_form().unwrap();
        assert!((stabilizer_fidelity_bruteforce(&stab).unwrap().0 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn sandwich_bounds_on_random_states() {
        let s = f(3);
        let mut rng = RngStream::new(21, 0);
        for _ in 0..5 {
            let psi = StateVector::haar_random(&s, 2, &mut rng).unwrap();
            let (fid, g) = stabilizer_fidelity_bruteforce(&psi).unwrap();
            assert!(fid > 0.0 && fid < 1.0);
            let dist = characteristic_distribution(&psi).unwrap();
            let m = g.lagrangian();
            let (lo, hi) = fidelity_bounds(&dist, &m).unwrap();
            assert!(lo <= fid + 1e-12 && fid <= hi + 1e-12);
            let x = Subspace::span(&s, 4, &[m.basis().row(0)]);
            let (glo, ghi) = generalized_fidelity_bounds(&dist, &x, &Subspace::full(4)).unwrap();
            assert!(glo <= fid + 1e-12 && fid <= ghi + 1e-12);
        }
        let stab = group(&s, &[(0, &[1, 0, 0, 0]), (0, &[0, 1, 0, 0])]);
        let d = characteristic_distribution(&stab.state_closed_form().unwrap()).unwrap();
        let (lo, hi) = fidelity_bounds(&d, &stab.lagrangian()).unwrap();
        assert!((lo - 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
        assert_eq!(fidelity_bounds(&d, &Subspace::full(4)), Err(Error::NotLagrangian));
    }

    #[test]
    fn random_group_hits_all_lines() {
        let s = f(3);
        let lines = enumerate_lagrangians(&s, 1).unwrap();
        let mut counts = [0usize; 4];
        let mut rng = RngStream::new(99, 0);
        let draws = 10_000;
        for _ in 0..draws {
            let g = StabilizerGroup::random(&s, 1, &mut rng).unwrap();
            let m = g.lagrangian();
            counts[lines.iter().position(|l| *l == m).unwrap()] += 1;
        }
        for c in counts {
            assert!((c as f64 / draws as f64 - 0.25).abs() < 0.02);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn random_groups_are_valid(seed in any::<u64>(), n in 1usize..=3) {
            let s = f(5);
            let g = StabilizerGroup::random(&s, n, &mut RngStream::new(seed, 0)).unwrap();
            prop_assert_eq!(g.lagrangian().dim(), n);
            prop_assert!(g.lagrangian().is_lagrangian(&s));
            prop_assert!(g.matrix_identities().unwrap().all());
            let psi = g.state_closed_form().unwrap();
            prop_assert!(stabilises(&g, &psi));
            prop_assert!(g.same_group(&g.canonical()));
        }

        #[test]
        fn closed_form_matches_oracle_p5(seed in any::<u64>()) {
            let s = f(5);
            let g = StabilizerGroup::random(&s, 2, &mut RngStream::new(seed, 1)).unwrap();
            let d = g.state_closed_form().unwrap().distance_up_to_phase(&g.state_projector_oracle().unwrap()).unwrap();
            prop_assert!(d < 1e-9);
        }

        #[test]
        fn commutation_matches_matrix_symmetry(a in proptest::collection::vec(0u8..3, 8)) {
            // Two labels commute iff V^T W = W^T V for their generator matrices.
            let s = f(3);
            let x = SympVector::from_residues(a[..4].to_vec());
            let y = SympVector::from_residues(a[4..].to_vec());
            let v = FpMatrix::from_columns(2, &[x.v(), y.v()]);
            let w = FpMatrix::from_columns(2, &[x.w(), y.w()]);
            let sym = v.transpose().mul(&s, &w).unwrap() == w.transpose().mul(&s, &v).unwrap();
            prop_assert_eq!(x.symplectic_product(&s, &y).unwrap() == 0, sym);
        }
    }
}
