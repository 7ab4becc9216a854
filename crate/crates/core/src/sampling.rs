//! Bell and Bell-difference sampling on explicit multi-copy states.
//!
//! A `2n`-qudit state is split into subsystem A (qudits `0..n`) and
//! subsystem B (qudits `n..2n`); qudit `i` of A pairs with qudit `i` of B.
//! The Bell basis is `|W_x⟩ = (W_x ⊗ I)|Φ+⟩` with
//! `|Φ+⟩ = p^{-n/2} Σ_q |q⟩|q⟩`.

use alloc::vec;
use alloc::vec::Vec;

use crate::fourier::PhaseDistribution;
use crate::gf::vector::dot;
use crate::gf::{digits_of, index_of, FieldSpec, SympVector, VectorIter};
use crate::state::{sample_index, RngStream, StateVector};
use crate::{Error, Result, TOL_STATE};

/// Largest `p^{4n}` for which a full Bell-basis decomposition is computed.
pub const BELL_GUARD: u64 = 1 << 26;

fn pair_count(psi: &StateVector) -> Result<usize> {
    if psi.n() % 2 != 0 || psi.n() == 0 {
        return Err(Error::InvalidParameter("Bell measurement needs an even, positive number of qudits".into()));
    }
    let n = psi.n() / 2;
    psi.spec().guarded_size("Bell decomposition", 4 * n, BELL_GUARD)?;
    Ok(n)
}

/// The maximally entangled state `|Φ+⟩` on `2n` qudits.
pub fn phi_plus(spec: &FieldSpec, n: usize) -> Result<StateVector> {
    bell_state(spec, &SympVector::zero(n))
}

/// `|W_x⟩ = p^{-n/2} Σ_q ω^{⟨q,v⟩ + 2^{-1}⟨v,w⟩} |q + w⟩|q⟩`.
pub fn bell_state(spec: &FieldSpec, x: &SympVector) -> Result<StateVector> {
    let n = x.n();
    let mut psi = StateVector::zeros(spec, 2 * n)?;
    let omega = spec.omega_table();
    let (v, w) = (x.v(), x.w());
    let base = spec.mul(spec.inv2(), dot(spec, v, w));
    let scale = 1.0 / libm::sqrt(spec.size_of(n).expect("guarded") as f64);
    let mut label = vec![0u8; 2 * n];
    for q in VectorIter::new(spec, n) {
        for i in 0..n {
            label[i] = spec.add(q[i], w[i]);
            label[n + i] = q[i];
        }
        let e = spec.add(dot(spec, &q, v), base);
        let idx = psi.index_of(&label);
        psi.amps_mut()[idx] = omega[e as usize] * scale;
    }
    Ok(psi)
}

/// `q(x) = |⟨W_x|Ψ⟩|²` for every `x ∈ F_p^{2n}`.
pub fn bell_basis_overlaps(psi: &StateVector) -> Result<PhaseDistribution> {
    let n = pair_count(psi)?;
    let spec = *psi.spec();
    let mut values = Vec::with_capacity(spec.size_of(2 * n).expect("guarded") as usize);
    for x in VectorIter::new(&spec, 2 * n) {
        let b = bell_state(&spec, &SympVector::from_residues(x))?;
        values.push(b.inner(psi)?.norm_sqr());
    }
    let total: f64 = values.iter().sum();
    if (total - psi.norm() * psi.norm()).abs() > TOL_STATE {
        return Err(Error::InvariantViolation("Bell overlaps do not sum to the squared norm".into()));
    }
    PhaseDistribution::new(&spec, n, values)
}

/// One Bell-basis measurement outcome on a `2n`-qudit state.
pub fn bell_sample(psi: &StateVector, rng: &mut RngStream) -> Result<SympVector> {
    let q = bell_basis_overlaps(psi)?;
    sample_label(&q, rng)
}

pub(crate) fn sample_label(dist: &PhaseDistribution, rng: &mut RngStream) -> Result<SympVector> {
    let idx = sample_index(dist.values(), rng)?;
    let mut x = vec![0u8; 2 * dist.n()];
    digits_of(dist.spec().p(), idx, &mut x);
    Ok(SympVector::from_residues(x))
}

/// Bell samples two fresh copies of `ψ ⊗ ψ` and returns second minus first.
pub fn bell_difference_sample(psi: &StateVector, rng: &mut RngStream) -> Result<SympVector> {
    let spec = *psi.spec();
    let first = bell_sample(&psi.tensor(psi)?, rng)?;
    let second = bell_sample(&psi.tensor(psi)?, rng)?;
    Ok(second.add(&spec, &first.neg(&spec)))
}

/// `b(x) = Σ_y q(y) q(x + y)` with `q` the Bell overlaps of `ψ ⊗ ψ`.
pub fn exact_bell_difference_oracle(psi: &StateVector) -> Result<PhaseDistribution> {
    let spec = *psi.spec();
    let n = psi.n();
    spec.guarded_size("Bell difference oracle", 4 * n, BELL_GUARD)?;
    let q = bell_basis_overlaps(&psi.tensor(psi)?)?;
    let labels: Vec<Vec<u8>> = VectorIter::new(&spec, 2 * n).collect();
    let mut shifted = vec![0u8; 2 * n];
    let values = labels
        .iter()
        .map(|x| {
            labels
                .iter()
                .zip(q.values())
                .map(|(y, &qy)| {
                    for ((s, &a), &b) in shifted.iter_mut().zip(x).zip(y) {
                        *s = spec.add(a, b);
                    }
                    qy * q.values()[index_of(spec.p(), &shifted)]
                })
                .sum()
        })
        .collect();
    PhaseDistribution::new(&spec, n, values)
}

/// Empirical frequencies of `samples` as a distribution on `F_p^{2n}`.
pub fn empirical_distribution(spec: &FieldSpec, n: usize, samples: &[SympVector]) -> Result<PhaseDistribution> {
    let size = spec.size_of(2 * n).ok_or(Error::SizeGuard {
        what: "empirical distribution",
        size: u64::MAX,
        limit: crate::fourier::PHASE_SPACE_GUARD,
    })? as usize;
    let mut counts = vec![0.0; size];
    for x in samples {
        counts[index_of(spec.p(), x)] += 1.0;
    }
    let total = samples.len().max(1) as f64;
    PhaseDistribution::new(spec, n, counts.into_iter().map(|c| c / total).collect())
}

/// `½ Σ_x |a(x) − b(x)|`.
pub fn total_variation(a: &PhaseDistribution, b: &PhaseDistribution) -> f64 {
    0.5 * a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// `(W_x ⊗ W_{J(x)})|Φ+⟩`.
pub fn involuted_pair_on_phi_plus(spec: &FieldSpec, x: &SympVector) -> Result<StateVector> {
    let n = x.n();
    let a = phi_plus(spec, n)?;
    let label = SympVector::from_parts(&[x.v(), x.involute(spec).v()].concat(), &[x.w(), x.w()].concat());
    a.apply_weyl(&label)
}
