//! The stabiliserness POVM, the Haar-versus-high-fidelity distinguisher,
//! qudit Clifford gates and `t`-doped circuits.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};

use crate::cmat::CMatrix;
use crate::gf::{FieldSpec, SympVector, VectorIter};
use crate::stab::{characteristic_distribution, weyl_expectations};
use crate::state::{fourier_matrix, RngStream, StateVector};
use crate::weyl::weyl_matrix;
use crate::{Error, Result, TOL_STATE};

/// Largest `p^{4n}` for the dense four-copy operator.
pub const DENSE_V_GUARD: u64 = 1 << 10;

/// `P[accept] = 1/2 + (p^n/2) Σ_x p_ψ(x)²`.
pub fn acceptance_probability(psi: &StateVector) -> Result<f64> {
    let sigma = characteristic_distribution(psi)?.sum_of_squares();
    Ok(acceptance_from_sigma(psi.dim() as f64, sigma))
}

fn acceptance_from_sigma(p_n: f64, sigma: f64) -> f64 {
    (0.5 + 0.5 * p_n * sigma).clamp(0.0, 1.0)
}

/// The binary POVM `{Π_accept, I − Π_accept}` on `|ψ⟩^{⊗4}`, with the
/// acceptance probability computed once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilizernessPovm {
    sigma_p2: f64,
    accept: f64,
}

impl StabilizernessPovm {
    pub fn new(psi: &StateVector) -> Result<Self> {
        let sigma_p2 = characteristic_distribution(psi)?.sum_of_squares();
        Ok(Self { sigma_p2, accept: acceptance_from_sigma(psi.dim() as f64, sigma_p2) })
    }

    pub fn acceptance_probability(&self) -> f64 {
        self.accept
    }

    /// `Σ_x p_ψ(x)²`.
    pub fn sigma_p2(&self) -> f64 {
        self.sigma_p2
    }

    /// One measurement on four copies; `true` means accept.
    pub fn sample(&self, rng: &mut RngStream) -> bool {
        rng.random_bool(self.accept)
    }

    /// Number of accepts in `m` independent measurements.
    pub fn sample_accepts(&self, m: u64, rng: &mut RngStream) -> Result<u64> {
        let b = Binomial::new(m, self.accept).map_err(|e| Error::InvalidParameter(alloc::format!("{e}")))?;
        Ok(b.sample(rng))
    }
}

/// One POVM outcome on `|ψ⟩^{⊗4}`; `true` means accept.
pub fn povm_sample(psi: &StateVector, rng: &mut RngStream) -> Result<bool> {
    Ok(StabilizernessPovm::new(psi)?.sample(rng))
}

/// `V = p^{-n} Σ_x W_x ⊗ W_x† ⊗ W_x ⊗ W_x†` as a dense matrix on `4n` qudits.
pub fn dense_v(spec: &FieldSpec, n: usize) -> Result<CMatrix> {
    let dim = spec.guarded_size("dense four-copy operator", 4 * n, DENSE_V_GUARD)?;
    let mut v = CMatrix::zeros(dim, dim);
    for x in VectorIter::new(spec, 2 * n) {
        let w = weyl_matrix(spec, &SympVector::from_residues(x))?;
        let wd = w.adjoint();
        let term = w.kron(&wd).kron(&w).kron(&wd);
        v = v.add(&term)?;
    }
    let scale = 1.0 / spec.size_of(n).expect("guarded") as f64;
    Ok(v.scale(Complex64::new(scale, 0.0)))
}

/// `Tr[ψ^{⊗4} · ½(I + V)]` from the dense operator.
pub fn dense_acceptance_oracle(psi: &StateVector) -> Result<f64> {
    let v = dense_v(psi.spec(), psi.n())?;
    let four = psi.tensor(psi)?.tensor(psi)?.tensor(psi)?;
    let vpsi = v.mul_vec(four.amps())?;
    let ev: Complex64 = four.amps().iter().zip(&vpsi).map(|(a, b)| a.conj() * b).sum();
    Ok(0.5 * (1.0 + ev.re))
}

/// `m = ⌈¼ ⌈72 k⁸ ln(2/δ)⌉⌉`.
pub fn rounds_for(k: f64, delta: f64) -> Result<u64> {
    if !(k >= 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter("need k ≥ 1 and 0 < δ < 1".into()));
    }
    let copies = libm::ceil(72.0 * libm::pow(k, 8.0) * libm::log(2.0 / delta));
    if copies > 4.0e18 {
        return Err(Error::InvalidParameter("round count overflows".into()));
    }
    Ok(libm::ceil(copies / 4.0) as u64)
}

/// `2k^{-4}/3`.
pub fn threshold(k: f64) -> f64 {
    2.0 / (3.0 * libm::pow(k, 4.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Haar,
    HighFidelity,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Haar => "haar",
            Self::HighFidelity => "high_fidelity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistinguishResult {
    pub verdict: Verdict,
    /// `(accepts − rejects) / m`.
    pub statistic: f64,
    pub threshold: f64,
    pub m: u64,
    pub copies: u64,
    /// `Σ_x p_ψ(x)²` of the input.
    pub sigma_p2: f64,
}

/// Runs `m` POVM rounds on `|ψ⟩^{⊗4}` and thresholds the mean outcome.
///
/// The rounds are independent Bernoulli trials, so the accept count is drawn
/// from the matching binomial law in one step.
pub fn algorithm3(psi: &StateVector, k: f64, delta: f64, rng: &mut RngStream) -> Result<DistinguishResult> {
    let m = rounds_for(k, delta)?;
    let povm = StabilizernessPovm::new(psi)?;
    let accepts = povm.sample_accepts(m, rng)?;
    let statistic = (2.0 * accepts as f64 - m as f64) / m as f64;
    let threshold = threshold(k);
    Ok(DistinguishResult {
        verdict: if statistic < threshold { Verdict::Haar } else { Verdict::HighFidelity },
        statistic,
        threshold,
        m,
        copies: 4 * m,
        sigma_p2: povm.sigma_p2(),
    })
}

/// A generator of the qudit Clifford group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliffordGate {
    /// `|q⟩ ↦ p^{-1/2} Σ_c ω^{qc} |c⟩`.
    Fourier(usize),
    /// `|q⟩ ↦ ω^{2^{-1} q²} |q⟩`.
    Phase(usize),
    /// `|q⟩ ↦ |a q⟩` with `a ≠ 0`.
    Multiply(usize, u8),
    /// `|q, r⟩ ↦ |q, q + r⟩`.
    Sum(usize, usize),
}

impl CliffordGate {
    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Self::Fourier(q) | Self::Phase(q) | Self::Multiply(q, _) => vec![q],
            Self::Sum(c, t) => vec![c, t],
        }
    }

    pub fn matrix(&self, spec: &FieldSpec) -> Result<CMatrix> {
        let p = spec.p() as usize;
        let one = Complex64::new(1.0, 0.0);
        match *self {
            Self::Fourier(_) => Ok(fourier_matrix(spec, false)),
            Self::Phase(_) => {
                let omega = spec.omega_table();
                let mut m = CMatrix::zeros(p, p);
                for q in 0..p {
                    let e = spec.mul(spec.inv2(), spec.mul(q as u8, q as u8));
                    m.set(q, q, omega[e as usize]);
                }
                Ok(m)
            }
            Self::Multiply(_, a) => {
                if spec.check(a as u32)? == 0 {
                    return Err(Error::InvalidParameter("multiplier must be nonzero".into()));
                }
                let mut m = CMatrix::zeros(p, p);
                for q in 0..p {
                    m.set(spec.mul(a, q as u8) as usize, q, one);
                }
                Ok(m)
            }
            Self::Sum(..) => {
                let mut m = CMatrix::zeros(p * p, p * p);
                for q in 0..p {
                    for r in 0..p {
                        m.set(q * p + spec.add(q as u8, r as u8) as usize, q * p + r, one);
                    }
                }
                Ok(m)
            }
        }
    }

    pub fn apply(&self, psi: &mut StateVector) -> Result<()> {
        psi.apply_local_unitary(&self.matrix(psi.spec())?, &self.targets())
    }

    /// A uniformly chosen generator kind on uniformly chosen targets.
    pub fn random(spec: &FieldSpec, n: usize, rng: &mut RngStream) -> Self {
        let kinds = if n >= 2 { 4 } else { 3 };
        let q = rng.random_range(0..n);
        match rng.random_range(0..kinds) {
            0 => Self::Fourier(q),
            1 => Self::Phase(q),
            2 => Self::Multiply(q, rng.random_range(1..spec.p()) as u8),
            _ => {
                let t = (q + rng.random_range(1..n)) % n;
                Self::Sum(q, t)
            }
        }
    }
}

/// A single-qudit non-Clifford gate.
#[derive(Debug, Clone, PartialEq)]
pub enum DopedGate {
    /// `|q⟩ ↦ exp(2πi q³/p²) |q⟩`.
    CubicPhase(usize),
    /// A Haar-random single-qudit unitary.
    RandomHaar(usize, CMatrix),
}

impl DopedGate {
    pub fn target(&self) -> usize {
        match self {
            Self::CubicPhase(q) | Self::RandomHaar(q, _) => *q,
        }
    }

    pub fn matrix(&self, spec: &FieldSpec) -> CMatrix {
        match self {
            Self::CubicPhase(_) => cubic_phase_matrix(spec),
            Self::RandomHaar(_, u) => u.clone(),
        }
    }

    pub fn apply(&self, psi: &mut StateVector) -> Result<()> {
        psi.apply_local_unitary(&self.matrix(psi.spec()), &[self.target()])
    }
}

/// `diag(exp(2πi q³/p²))`.
pub fn cubic_phase_matrix(spec: &FieldSpec) -> CMatrix {
    let p = spec.p() as usize;
    let mut m = CMatrix::zeros(p, p);
    let p2 = (p * p) as f64;
    for q in 0..p {
        let angle = 2.0 * PI * ((q * q * q) % (p * p)) as f64 / p2;
        m.set(q, q, Complex64::new(libm::cos(angle), libm::sin(angle)));
    }
    m
}

/// A Haar-random `p × p` unitary by Gram–Schmidt on Gaussian columns.
pub fn haar_unitary(spec: &FieldSpec, rng: &mut RngStream) -> CMatrix {
    let p = spec.p() as usize;
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(p);
    while cols.len() < p {
        let mut c: Vec<Complex64> =
            (0..p).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        for b in &cols {
            let ip: Complex64 = b.iter().zip(&c).map(|(x, y)| x.conj() * y).sum();
            for (ci, bi) in c.iter_mut().zip(b) {
                *ci -= ip * bi;
            }
        }
        let norm = libm::sqrt(c.iter().map(|z| z.norm_sqr()).sum());
        if norm > 1e-6 {
            cols.push(c.into_iter().map(|z| z / norm).collect());
        }
    }
    let mut u = CMatrix::zeros(p, p);
    for (j, c) in cols.iter().enumerate() {
        for (i, &z) in c.iter().enumerate() {
            u.set(i, j, z);
        }
    }
    u
}

/// Whether `u` maps each generator `W_x` of the local Weyl group to some
/// `ω^c W_y` under conjugation.
pub fn is_clifford_gate(spec: &FieldSpec, u: &CMatrix) -> Result<bool> {
    let p = spec.p() as usize;
    let mut k = 0;
    let mut d = 1;
    while d < u.rows() {
        d *= p;
        k += 1;
    }
    if d != u.rows() || u.rows() != u.cols() || k == 0 {
        return Err(Error::InvalidParameter("matrix is not a local qudit operator".into()));
    }
    if u.unitarity_deviation() > TOL_STATE {
        return Ok(false);
    }
    let omega = spec.omega_table();
    let ud = u.adjoint();
    let labels: Vec<SympVector> = VectorIter::new(spec, 2 * k).map(SympVector::from_residues).collect();
    let weyls: Vec<CMatrix> = labels.iter().map(|y| weyl_matrix(spec, y)).collect::<Result<_>>()?;
    for i in 0..2 * k {
        let mut x = vec![0u8; 2 * k];
        x[i] = 1;
        let conj = u.mul(&weyl_matrix(spec, &SympVector::from_residues(x))?)?.mul(&ud)?;
        let found = weyls.iter().any(|w| {
            let t = w.hs_inner(&conj) / d as f64;
            (t.norm() - 1.0).abs() <= TOL_STATE
                && omega.iter().any(|o| (o - t).norm() <= TOL_STATE)
                && w.scale(t).max_abs_diff(&conj) <= TOL_STATE
        });
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DopedKind {
    CubicPhase,
    RandomHaar,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CircuitOp {
    Clifford(CliffordGate),
    Doped(DopedGate),
}

/// Clifford segments interleaved with at most `t` non-Clifford gates.
#[derive(Debug, Clone, PartialEq)]
pub struct DopedCircuit {
    spec: FieldSpec,
    n: usize,
    ops: Vec<CircuitOp>,
}

impl DopedCircuit {
    pub fn new(spec: &FieldSpec, n: usize, ops: Vec<CircuitOp>) -> Self {
        Self { spec: *spec, n, ops }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ops(&self) -> &[CircuitOp] {
        &self.ops
    }

    pub fn doped_count(&self) -> usize {
        self.ops.iter().filter(|o| matches!(o, CircuitOp::Doped(_))).count()
    }

    /// The output state on `|0…0⟩`.
    pub fn run(&self) -> Result<StateVector> {
        let mut psi = StateVector::basis_state(&self.spec, &vec![0; self.n])?;
        for op in &self.ops {
            match op {
                CircuitOp::Clifford(g) => g.apply(&mut psi)?,
                CircuitOp::Doped(g) => g.apply(&mut psi)?,
            }
        }
        Ok(psi)
    }
}

/// `t + 1` random Clifford segments of `clifford_depth` gates separated by
/// `t` doped gates on random qudits.
pub fn doped_circuit(
    spec: &FieldSpec,
    n: usize,
    t: usize,
    clifford_depth: usize,
    kind: DopedKind,
    rng: &mut RngStream,
) -> Result<DopedCircuit> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let mut ops = Vec::with_capacity((t + 1) * clifford_depth + t);
    for segment in 0..=t {
        if segment > 0 {
            let q = rng.random_range(0..n);
            let gate = match kind {
                DopedKind::CubicPhase => DopedGate::CubicPhase(q),
                DopedKind::RandomHaar => DopedGate::RandomHaar(q, haar_unitary(spec, rng)),
            };
            ops.push(CircuitOp::Doped(gate));
        }
        for _ in 0..clifford_depth {
            ops.push(CircuitOp::Clifford(CliffordGate::random(spec, n, rng)));
        }
    }
    Ok(DopedCircuit::new(spec, n, ops))
}

/// One Haar draw of [`haar_concentration_experiment`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaarDraw {
    /// `max_{x≠0} |⟨ψ|W_x|ψ⟩|`.
    pub max_nontrivial: f64,
    /// `Σ_x p_ψ(x)²`.
    pub sigma_p2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HaarReport {
    pub p: u32,
    pub n: usize,
    pub draws: Vec<HaarDraw>,
}

impl HaarReport {
    /// Empirical `q`-quantile (nearest rank) of `max_{x≠0}|⟨W_x⟩|`.
    pub fn max_nontrivial_quantile(&self, q: f64) -> f64 {
        quantile(self.draws.iter().map(|d| d.max_nontrivial).collect(), q)
    }

    /// Empirical `q`-quantile (nearest rank) of `Σ p²`.
    pub fn sigma_p2_quantile(&self, q: f64) -> f64 {
        quantile(self.draws.iter().map(|d| d.sigma_p2).collect(), q)
    }
}

fn quantile(mut v: Vec<f64>, q: f64) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let idx = libm::ceil(q.clamp(0.0, 1.0) * v.len() as f64) as usize;
    v[idx.saturating_sub(1).min(v.len() - 1)]
}

pub fn haar_concentration_experiment(
    spec: &FieldSpec,
    n: usize,
    trials: usize,
    rng: &mut RngStream,
) -> Result<HaarReport> {
    let mut draws = Vec::with_capacity(trials);
    for _ in 0..trials {
        let psi = StateVector::haar_random(spec, n, rng)?;
        draws.push(haar_draw(&psi)?);
    }
    Ok(HaarReport { p: spec.p(), n, draws })
}

pub fn haar_draw(psi: &StateVector) -> Result<HaarDraw> {
    let e = weyl_expectations(psi)?;
    let max_nontrivial = e.values()[1..].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = 1.0 / psi.dim() as f64;
    let sigma_p2 = e
        .values()
        .iter()
        .map(|z| {
            let q = z.norm_sqr() * scale;
            q * q
        })
        .sum();
    Ok(HaarDraw { max_nontrivial, sigma_p2 })
}
