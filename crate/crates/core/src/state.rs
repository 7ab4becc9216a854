//! Dense state vectors over `(C^p)^{⊗n}` and reproducible random streams.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::cmat::CMatrix;
use crate::gf::vector::dot;
use crate::gf::{FieldSpec, Subspace, SympVector};
use crate::{Error, Result, TOL_EIGEN, TOL_STATE};

/// Largest number of amplitudes a dense state may hold.
pub const STATE_GUARD: u64 = 1 << 26;

/// A deterministic random stream: ChaCha20 keyed by `master_seed`, with
/// `stream_id` selecting an independent stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
    rng: ChaCha20Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id);
        Self { master_seed, stream_id, rng }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Number of 32-bit words consumed so far.
    pub fn counter(&self) -> u128 {
        self.rng.get_word_pos()
    }

    /// Uniform residue in `[0, p)`.
    pub fn residue(&mut self, spec: &FieldSpec) -> u8 {
        self.rng.random_range(0..spec.p()) as u8
    }

    /// Uniform `f64` in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.rng.random()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Draws an index with probability proportional to `weights`.
pub(crate) fn sample_index(weights: &[f64], rng: &mut RngStream) -> Result<usize> {
    let dist = WeightedIndex::new(weights.iter().map(|&w| w.max(0.0)))
        .map_err(|e| Error::InvalidParameter(alloc::format!("sampling weights: {e}")))?;
    Ok(dist.sample(rng))
}

/// Dense amplitudes of an `n`-qudit state. Qudit 0 is the most significant digit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    spec: FieldSpec,
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(spec: &FieldSpec, n: usize, amps: Vec<Complex64>) -> Result<Self> {
        let dim = spec.guarded_size("state dimension", n, STATE_GUARD)?;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: amps.len() });
        }
        Ok(Self { spec: *spec, n, amps })
    }

    pub fn zeros(spec: &FieldSpec, n: usize) -> Result<Self> {
        let dim = spec.guarded_size("state dimension", n, STATE_GUARD)?;
        Ok(Self { spec: *spec, n, amps: vec![Complex64::new(0.0, 0.0); dim] })
    }

    pub fn basis_state(spec: &FieldSpec, q: &[u8]) -> Result<Self> {
        for &e in q {
            spec.check(e as u32)?;
        }
        let mut s = Self::zeros(spec, q.len())?;
        let idx = s.index_of(q);
        s.amps[idx] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Uniform superposition over the coset `offset + X`.
    pub fn uniform_superposition(spec: &FieldSpec, offset: &[u8], x: &Subspace) -> Result<Self> {
        if x.ambient_dim() != offset.len() {
            return Err(Error::DimensionMismatch { expected: x.ambient_dim(), found: offset.len() });
        }
        let mut s = Self::zeros(spec, offset.len())?;
        let elems = x.elements(spec);
        let a = Complex64::new(1.0 / libm::sqrt(elems.len() as f64), 0.0);
        for e in &elems {
            let q: Vec<u8> = e.iter().zip(offset).map(|(&a, &b)| spec.add(a, b)).collect();
            let idx = s.index_of(&q);
            s.amps[idx] = a;
        }
        Ok(s)
    }

    /// Haar-random state: i.i.d. complex Gaussian amplitudes, normalized.
    pub fn haar_random(spec: &FieldSpec, n: usize, rng: &mut RngStream) -> Result<Self> {
        let dim = spec.guarded_size("state dimension", n, STATE_GUARD)?;
        let amps = (0..dim)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im)
            })
            .collect();
        let mut s = Self { spec: *spec, n, amps };
        s.normalize()?;
        Ok(s)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn index_of(&self, q: &[u8]) -> usize {
        crate::gf::index_of(self.spec.p(), q)
    }

    pub fn amplitude(&self, q: &[u8]) -> Complex64 {
        self.amps[self.index_of(q)]
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amps.iter().map(|a| a.norm_sqr()).sum())
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        let inv = 1.0 / norm;
        for a in &mut self.amps {
            *a *= inv;
        }
        Ok(())
    }

    fn check_normalized(&self) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() <= TOL_STATE {
            Ok(())
        } else {
            Err(Error::NotNormalized { norm })
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.spec.p() != other.spec.p() || self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same_shape(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `self ⊗ other`, with `self` on the leading qudits.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.spec.p() != other.spec.p() {
            return Err(Error::InvalidParameter("tensor of states over different fields".into()));
        }
        let n = self.n + other.n;
        self.spec.guarded_size("state dimension", n, STATE_GUARD)?;
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(Self { spec: self.spec, n, amps })
    }

    /// Complex conjugate in the computational basis.
    pub fn conjugate(&self) -> Self {
        Self { spec: self.spec, n: self.n, amps: self.amps.iter().map(|a| a.conj()).collect() }
    }

    /// `|amp(q)|²` in index order.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `min_θ ‖e^{iθ} self − other‖∞`, aligning on the largest amplitude of `self`.
    pub fn distance_up_to_phase(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        let (k, _) = self.amps.iter().enumerate().fold((0, -1.0), |(bi, bv), (i, a)| {
            let m = a.norm_sqr();
            if m > bv {
                (i, m)
            } else {
                (bi, bv)
            }
        });
        let a = self.amps[k];
        let b = other.amps[k];
        let phase = if b.norm() > 0.0 && a.norm() > 0.0 { (b / a) / (b / a).norm() } else { Complex64::new(1.0, 0.0) };
        Ok(self.amps.iter().zip(&other.amps).map(|(x, y)| (x * phase - y).norm()).fold(0.0, f64::max))
    }

    fn check_label(&self, x: &SympVector) -> Result<()> {
        if x.len() != 2 * self.n {
            return Err(Error::DimensionMismatch { expected: 2 * self.n, found: x.len() });
        }
        Ok(())
    }

    /// `W_x |ψ⟩` with `W_{v,w}|q⟩ = ω^{⟨q,v⟩ + 2^{-1}⟨v,w⟩}|q + w⟩`.
    pub fn apply_weyl(&self, x: &SympVector) -> Result<Self> {
        self.check_label(x)?;
        let spec = &self.spec;
        let omega = spec.omega_table();
        let (v, w) = (x.v(), x.w());
        let base = spec.mul(spec.inv2(), dot(spec, v, w));
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        let mut q = vec![0u8; self.n];
        let p = spec.p();
        let mut target = vec![0u8; self.n];
        for (idx, &a) in self.amps.iter().enumerate() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            crate::gf::digits_of(p, idx, &mut q);
            for i in 0..self.n {
                target[i] = spec.add(q[i], w[i]);
            }
            let e = spec.add(dot(spec, &q, v), base);
            out[crate::gf::index_of(p, &target)] = omega[e as usize] * a;
        }
        Ok(Self { spec: self.spec, n: self.n, amps: out })
    }

    /// `⟨ψ|W_x|ψ⟩`.
    pub fn expectation_weyl(&self, x: &SympVector) -> Result<Complex64> {
        self.inner(&self.apply_weyl(x)?)
    }

    fn check_targets(&self, targets: &[usize]) -> Result<()> {
        let bad = targets.is_empty()
            || targets.iter().any(|&t| t >= self.n)
            || (1..targets.len()).any(|i| targets[..i].contains(&targets[i]));
        if bad {
            return Err(Error::InvalidTargets(targets.to_vec()));
        }
        Ok(())
    }

    fn stride(&self, qudit: usize) -> usize {
        (self.spec.p() as usize).pow((self.n - 1 - qudit) as u32)
    }

    /// Applies `u` to `targets`; the first target is the most significant
    /// digit of `u`'s index.
    pub fn apply_local_unitary(&mut self, u: &CMatrix, targets: &[usize]) -> Result<()> {
        self.check_targets(targets)?;
        let p = self.spec.p() as usize;
        let k = targets.len();
        let block = p.pow(k as u32);
        if u.rows() != block || u.cols() != block {
            return Err(Error::DimensionMismatch { expected: block, found: u.rows() });
        }
        u.check_unitary(TOL_STATE)?;
        let strides: Vec<usize> = targets.iter().map(|&t| self.stride(t)).collect();
        let offsets: Vec<usize> = (0..block)
            .map(|j| {
                let mut rem = j;
                let mut off = 0;
                for i in (0..k).rev() {
                    off += (rem % p) * strides[i];
                    rem /= p;
                }
                off
            })
            .collect();
        let mut gathered = vec![Complex64::new(0.0, 0.0); block];
        let mut apply = |amps: &mut [Complex64], base: usize| {
            for (g, &off) in gathered.iter_mut().zip(&offsets) {
                *g = amps[base + off];
            }
            for (i, &off) in offsets.iter().enumerate() {
                amps[base + off] = (0..block).map(|j| u.get(i, j) * gathered[j]).sum();
            }
        };
        if let [stride] = strides[..] {
            for outer in (0..self.dim()).step_by(stride * p) {
                for base in outer..outer + stride {
                    apply(&mut self.amps, base);
                }
            }
        } else {
            for base in 0..self.dim() {
                if strides.iter().all(|&s| (base / s) % p == 0) {
                    apply(&mut self.amps, base);
                }
            }
        }
        Ok(())
    }

    /// Fourier transform on one qudit: `|t⟩ ↦ p^{-1/2} Σ_c ω^{±tc}|c⟩`,
    /// with the minus sign when `inverse` is set.
    pub fn qft(&mut self, qudit: usize, inverse: bool) -> Result<()> {
        let u = fourier_matrix(&self.spec, inverse);
        self.apply_local_unitary(&u, &[qudit])
    }

    /// `|t, q⟩ ↦ |t, q − δ t⟩` for registers `control` and `target` of equal length.
    pub fn controlled_shift(&mut self, control: &[usize], target: &[usize], delta: u8) -> Result<()> {
        let mut all = control.to_vec();
        all.extend_from_slice(target);
        self.check_targets(&all)?;
        if control.len() != target.len() {
            return Err(Error::DimensionMismatch { expected: control.len(), found: target.len() });
        }
        self.spec.check(delta as u32)?;
        if delta == 0 {
            return Ok(());
        }
        let spec = self.spec;
        let p = spec.p() as u8;
        let pairs: Vec<(usize, usize, usize)> =
            control.iter().zip(target).map(|(&c, &t)| (c, t, self.stride(t))).collect();
        let mut q = vec![0u8; self.n];
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (idx, &a) in self.amps.iter().enumerate() {
            if a.re != 0.0 || a.im != 0.0 {
                let mut dest = idx;
                for &(c, t, stride) in &pairs {
                    let shifted = spec.sub(q[t], spec.mul(delta, q[c]));
                    dest = dest + shifted as usize * stride - q[t] as usize * stride;
                }
                out[dest] = a;
            }
            // Advance the digit counter to idx + 1.
            for d in q.iter_mut().rev() {
                *d += 1;
                if *d < p {
                    break;
                }
                *d = 0;
            }
        }
        self.amps = out;
        Ok(())
    }

    /// Samples a computational-basis outcome. The state is left untouched.
    pub fn measure_computational(&self, rng: &mut RngStream) -> Result<Vec<u8>> {
        self.check_normalized()?;
        let idx = sample_index(&self.probabilities(), rng)?;
        let mut q = vec![0u8; self.n];
        crate::gf::digits_of(self.spec.p(), idx, &mut q);
        Ok(q)
    }

    /// The residue `s` with `W_x|ψ⟩ = ω^{-s}|ψ⟩`, read from `⟨ψ|W_x|ψ⟩`.
    pub fn measure_weyl_eigenphase(&self, x: &SympVector) -> Result<u8> {
        self.check_normalized()?;
        let e = self.expectation_weyl(x)?;
        let magnitude = e.norm();
        if magnitude < 1.0 - TOL_EIGEN {
            return Err(Error::NotEigenstate { magnitude });
        }
        let p = self.spec.p() as f64;
        let k = libm::round(-e.arg() * p / (2.0 * core::f64::consts::PI)) as i64;
        Ok(self.spec.reduce(k))
    }
}

/// Single-qudit Fourier matrix `F_{ct} = p^{-1/2} ω^{±tc}`.
pub fn fourier_matrix(spec: &FieldSpec, inverse: bool) -> CMatrix {
    let p = spec.p() as usize;
    let omega = spec.omega_table();
    let scale = 1.0 / libm::sqrt(p as f64);
    let mut u = CMatrix::zeros(p, p);
    for c in 0..p {
        for t in 0..p {
            let e = spec.mul(c as u8, t as u8);
            let e = if inverse { spec.neg(e) } else { e };
            u.set(c, t, omega[e as usize] * scale);
        }
    }
    u
}
