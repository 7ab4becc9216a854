//! Stabiliser-state learners run against simulated copy oracles.
//!
//! [`algorithm1`] Bell samples `|S⟩|S*⟩` pairs and needs conjugate copies.
//! [`algorithm2`] learns the quadratic phase of `|S⟩` from copies of `|S⟩`
//! alone. Both take their copies from a [`CopyOracle`] in batches before
//! each stage, so the copy count is fixed by the stage structure.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use crate::gf::{FieldSpec, FpMatrix, Subspace, SympVector};
use crate::sampling::bell_sample;
use crate::stab::StabilizerGroup;
use crate::state::{RngStream, StateVector};
use crate::weyl::PauliElement;
use crate::{Error, Result};

/// Dispenses copies of a hidden stabiliser state and, optionally, of its
/// complex conjugate, counting every copy handed out.
#[derive(Debug, Clone)]
pub struct CopyOracle {
    hidden: StabilizerGroup,
    state: StateVector,
    conjugate: Option<StateVector>,
    copies_s: usize,
    copies_s_conj: usize,
}

impl CopyOracle {
    /// Oracle for `|S⟩` and `|S*⟩`.
    pub fn new(hidden: StabilizerGroup) -> Result<Self> {
        let state = hidden.state_closed_form()?;
        let conjugate = Some(state.conjugate());
        Ok(Self { hidden, state, conjugate, copies_s: 0, copies_s_conj: 0 })
    }

    /// Oracle for `|S⟩` only.
    pub fn without_conjugate(hidden: StabilizerGroup) -> Result<Self> {
        let mut oracle = Self::new(hidden)?;
        oracle.conjugate = None;
        Ok(oracle)
    }

    pub fn spec(&self) -> &FieldSpec {
        self.hidden.spec()
    }

    pub fn n(&self) -> usize {
        self.hidden.n()
    }

    /// `count` copies of `|S⟩`.
    pub fn copies(&mut self, count: usize) -> Vec<StateVector> {
        self.copies_s += count;
        vec![self.state.clone(); count]
    }

    /// `count` copies of `|S*⟩`.
    pub fn conjugate_copies(&mut self, count: usize) -> Result<Vec<StateVector>> {
        let conj = self
            .conjugate
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("oracle does not dispense conjugate copies".into()))?;
        self.copies_s_conj += count;
        Ok(vec![conj.clone(); count])
    }

    pub fn copies_s(&self) -> usize {
        self.copies_s
    }

    pub fn copies_s_conj(&self) -> usize {
        self.copies_s_conj
    }

    /// The hidden group. For validation harnesses only.
    pub fn hidden(&self) -> &StabilizerGroup {
        &self.hidden
    }
}

/// Why a learner gave up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LearnFailure {
    /// The Bell samples span fewer than `n` dimensions.
    RankDeficientSpan { dim: usize },
    /// A measured register left the learned `u + col(W)`.
    WSpanDeficient { learned: usize },
    /// The system for column `column` has no solution.
    LinearSystemInconsistent { column: usize },
    /// The rows of the systems span fewer than `r` dimensions.
    LinearSystemUnderdetermined { rank: usize, needed: usize },
    /// A learned generator does not stabilise the state up to a phase.
    PhaseReadout { index: usize },
    /// The learned generators do not form a stabiliser group.
    InvalidGroup,
}

impl fmt::Display for LearnFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::RankDeficientSpan { dim } => write!(f, "rank-deficient span (dim {dim})"),
            Self::WSpanDeficient { learned } => write!(f, "W-span deficient (learned dim {learned})"),
            Self::LinearSystemInconsistent { column } => write!(f, "linear system inconsistent (column {column})"),
            Self::LinearSystemUnderdetermined { rank, needed } => {
                write!(f, "linear system underdetermined (rank {rank} < {needed})")
            }
            Self::PhaseReadout { index } => write!(f, "phase readout not eigenstate (generator {index})"),
            Self::InvalidGroup => write!(f, "learned generators do not form a stabiliser group"),
        }
    }
}

/// Outcome of one learning run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearnResult {
    pub recovered: core::result::Result<StabilizerGroup, LearnFailure>,
    pub copies_s: usize,
    pub copies_s_conj: usize,
    /// Filled in by callers that have a clock.
    pub wall_time: Option<Duration>,
}

impl LearnResult {
    fn finish(oracle: &CopyOracle, recovered: core::result::Result<StabilizerGroup, LearnFailure>) -> Self {
        Self { recovered, copies_s: oracle.copies_s(), copies_s_conj: oracle.copies_s_conj(), wall_time: None }
    }

    pub fn is_success(&self) -> bool {
        self.recovered.is_ok()
    }
}

/// Reads `s` with `W_x |S⟩ = ω^{-s} |S⟩` on each copy and assembles the group.
fn read_phases(
    spec: &FieldSpec,
    labels: &[SympVector],
    copies: &[StateVector],
) -> Result<core::result::Result<StabilizerGroup, LearnFailure>> {
    let mut gens = Vec::with_capacity(labels.len());
    for (index, (x, copy)) in labels.iter().zip(copies).enumerate() {
        match copy.measure_weyl_eigenphase(x) {
            Ok(s) => gens.push(PauliElement::from_parts(s, x.clone())),
            Err(Error::NotEigenstate { .. }) => return Ok(Err(LearnFailure::PhaseReadout { index })),
            Err(e) => return Err(e),
        }
    }
    Ok(StabilizerGroup::new(spec, gens).map_err(|_| LearnFailure::InvalidGroup))
}

/// Learning by Bell sampling `|S⟩|S*⟩`: `3n` copies of `|S⟩`, `2n` of `|S*⟩`.
pub fn algorithm1(oracle: &mut CopyOracle, rng: &mut RngStream) -> Result<LearnResult> {
    let spec = *oracle.spec();
    let n = oracle.n();
    let pair_s = oracle.copies(2 * n);
    let pair_conj = oracle.conjugate_copies(2 * n)?;
    let phase_copies = oracle.copies(n);

    let mut samples = Vec::with_capacity(2 * n);
    for (a, b) in pair_s.iter().zip(&pair_conj) {
        samples.push(bell_sample(&a.tensor(b)?, rng)?);
    }
    let span = Subspace::span(&spec, 2 * n, &samples);
    if span.dim() < n {
        return Ok(LearnResult::finish(oracle, Err(LearnFailure::RankDeficientSpan { dim: span.dim() })));
    }
    let basis: Vec<SympVector> = span.basis_vectors().into_iter().map(SympVector::from_residues).collect();
    let recovered = read_phases(&spec, &basis, &phase_copies)?;
    Ok(LearnResult::finish(oracle, recovered))
}

/// `⌈log_p r⌉`, taken as `0` for `r ≤ 1`.
pub fn ceil_log(p: u32, r: usize) -> usize {
    let mut k = 0;
    let mut power = 1usize;
    while power < r {
        power = power.saturating_mul(p as usize);
        k += 1;
    }
    k
}

/// Number of measurement rounds beyond round 0: `m = 2n + ⌈log_p r⌉`.
pub fn rounds_for(p: u32, n: usize, r: usize) -> usize {
    2 * n + ceil_log(p, r)
}

/// Copies of `|S⟩` consumed by [`algorithm2`]: `3(m + n) + 4`.
pub fn algorithm2_copies(p: u32, n: usize, r: usize) -> usize {
    3 * (rounds_for(p, n, r) + n) + 4
}

/// One measured round `(c, y_1, y_2, y_3)`, before subtracting round 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTuple {
    pub c: Vec<u8>,
    pub y: [Vec<u8>; 3],
}

/// Intermediate data of an [`algorithm2`] run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Algorithm2Trace {
    /// Raw computational outcomes `b_0, …, b_{2n}`.
    pub b: Vec<Vec<u8>>,
    /// Basis of the learned `col(W)`.
    pub w_basis: Vec<Vec<u8>>,
    /// Basis of `col(W)^⊥`.
    pub v_perp: Vec<Vec<u8>>,
    pub deltas: [u8; 3],
    pub m: usize,
    pub rounds: Vec<RoundTuple>,
}

impl Algorithm2Trace {
    pub fn r(&self) -> usize {
        self.w_basis.len()
    }
}

/// Learning by quadratic phases, from `3(m + n) + 4` copies of `|S⟩`.
pub fn algorithm2(oracle: &mut CopyOracle, deltas: [u8; 3], rng: &mut RngStream) -> Result<LearnResult> {
    algorithm2_traced(oracle, deltas, rng).map(|(r, _)| r)
}

/// [`algorithm2`], also returning its intermediate data.
pub fn algorithm2_traced(
    oracle: &mut CopyOracle,
    deltas: [u8; 3],
    rng: &mut RngStream,
) -> Result<(LearnResult, Algorithm2Trace)> {
    let spec = *oracle.spec();
    let n = oracle.n();
    check_deltas(&spec, deltas)?;
    let mut trace = Algorithm2Trace { deltas, ..Algorithm2Trace::default() };

    // Computational samples of u + col(W).
    for copy in oracle.copies(2 * n + 1) {
        trace.b.push(copy.measure_computational(rng)?);
    }
    let b0 = trace.b[0].clone();
    let diffs: Vec<Vec<u8>> = trace.b[1..].iter().map(|b| sub(&spec, b, &b0)).collect();
    let col_w = Subspace::span(&spec, n, &diffs);
    let r = col_w.dim();
    trace.w_basis = col_w.basis_vectors();
    trace.v_perp = col_w.perp(&spec).basis_vectors();
    trace.m = rounds_for(spec.p(), n, r);

    let round_copies = oracle.copies(3 * (trace.m + 1));
    let phase_copies = oracle.copies(n);

    let control: Vec<usize> = (0..n).collect();
    let register = StateVector::uniform_superposition(&spec, &vec![0; n], &col_w)?;
    for chunk in round_copies.chunks(3) {
        let mut psi = register.tensor(&chunk[0])?.tensor(&chunk[1])?.tensor(&chunk[2])?;
        for (k, &d) in deltas.iter().enumerate() {
            let target: Vec<usize> = (n * (k + 1)..n * (k + 2)).collect();
            psi.controlled_shift(&control, &target, d)?;
        }
        for &q in &control {
            psi.qft(q, true)?;
        }
        let out = psi.measure_computational(rng)?;
        trace.rounds.push(RoundTuple {
            c: out[..n].to_vec(),
            y: [out[n..2 * n].to_vec(), out[2 * n..3 * n].to_vec(), out[3 * n..].to_vec()],
        });
    }

    let fail = |oracle: &CopyOracle, trace: Algorithm2Trace, why| Ok((LearnResult::finish(oracle, Err(why)), trace));

    // Every measured copy register is another sample of u + col(W).
    for round in &trace.rounds {
        if round.y.iter().any(|y| !col_w.contains_vector(&spec, &sub(&spec, y, &b0))) {
            return fail(oracle, trace, LearnFailure::WSpanDeficient { learned: r });
        }
    }

    let mut v_cols: Vec<Vec<u8>> = Vec::with_capacity(r);
    if r > 0 {
        let first = &trace.rounds[0];
        let mut rows = Vec::with_capacity(trace.m);
        let mut dcs = Vec::with_capacity(trace.m);
        for round in &trace.rounds[1..] {
            let mut row = vec![0u8; n];
            for (k, &d) in deltas.iter().enumerate() {
                let dy = sub(&spec, &round.y[k], &first.y[k]);
                for (acc, e) in row.iter_mut().zip(dy) {
                    *acc = spec.add(*acc, spec.mul(d, e));
                }
            }
            rows.push(row);
            dcs.push(sub(&spec, &round.c, &first.c));
        }
        let a = FpMatrix::from_rows(n, &rows);
        let rank = a.rank(&spec);
        if rank < r {
            return fail(oracle, trace, LearnFailure::LinearSystemUnderdetermined { rank, needed: r });
        }
        for (column, w) in trace.w_basis.iter().enumerate() {
            let rhs: Vec<u8> = dcs.iter().map(|dc| crate::gf::vector::dot(&spec, w, dc)).collect();
            match a.solve(&spec, &rhs)?.solution {
                Some(v) => v_cols.push(v.into_inner()),
                None => return fail(oracle, trace, LearnFailure::LinearSystemInconsistent { column }),
            }
        }
    }

    let zero = vec![0u8; n];
    let labels: Vec<SympVector> = v_cols
        .iter()
        .zip(&trace.w_basis)
        .map(|(v, w)| SympVector::from_parts(v, w))
        .chain(trace.v_perp.iter().map(|v| SympVector::from_parts(v, &zero)))
        .collect();
    let recovered = read_phases(&spec, &labels, &phase_copies)?;
    Ok((LearnResult::finish(oracle, recovered), trace))
}

fn check_deltas(spec: &FieldSpec, d: [u8; 3]) -> Result<()> {
    for &e in &d {
        spec.check(e as u32)?;
    }
    let sq = d.iter().fold(0u8, |acc, &e| spec.add(acc, spec.mul(e, e)));
    if d == [0, 0, 0] || sq != 0 {
        return Err(Error::InvalidParameter("deltas must be a nonzero solution of d1² + d2² + d3² = 0".into()));
    }
    Ok(())
}

fn sub(spec: &FieldSpec, a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(&x, &y)| spec.sub(x, y)).collect()
}

/// Whether both groups are the same set of operators.
pub fn validate_recovery(hidden: &StabilizerGroup, recovered: &StabilizerGroup) -> bool {
    hidden.same_group(recovered)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::find_zero_sum_of_three_squares;

    fn f(p: u32) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    fn group(s: &FieldSpec, gens: &[(u32, &[u32])]) -> StabilizerGroup {
        StabilizerGroup::new(s, gens.iter().map(|(ph, l)| PauliElement::new(s, *ph, l).unwrap()).collect()).unwrap()
    }

    /// `W^T c = Σ δ_i (s + V^T y_i)` for the hidden group's generators.
    fn round_constraint_holds(hidden: &StabilizerGroup, deltas: [u8; 3], round: &RoundTuple) -> bool {
        let s = hidden.spec();
        let vt = hidden.v_matrix().transpose();
        let lhs = hidden.w_matrix().transpose().mul_vec(s, &round.c).unwrap();
        let mut rhs = vec![0u8; hidden.n()];
        for (k, &d) in deltas.iter().enumerate() {
            let vy = vt.mul_vec(s, &round.y[k]).unwrap();
            for i in 0..hidden.n() {
                rhs[i] = s.add(rhs[i], s.mul(d, s.add(hidden.phases()[i], vy[i])));
            }
        }
        *lhs == rhs[..]
    }

    #[test]
    fn ceil_log_values() {
        assert_eq!(ceil_log(3, 0), 0);
        assert_eq!(ceil_log(3, 1), 0);
        assert_eq!(ceil_log(3, 2), 1);
        assert_eq!(ceil_log(3, 3), 1);
        assert_eq!(ceil_log(3, 4), 2);
        assert_eq!(algorithm2_copies(3, 2, 2), 9 * 2 + 3 + 4);
        assert_eq!(algorithm2_copies(3, 3, 0), 27 + 4);
    }

    #[test]
    fn algorithm1_recovers_computational_basis_group() {
        let s = f(3);
        let hidden = group(&s, &[(1, &[1, 0, 0, 0]), (2, &[0, 1, 0, 0])]);
        for seed in 0..10 {
            let mut oracle = CopyOracle::new(hidden.clone()).unwrap();
            let res = algorithm1(&mut oracle, &mut RngStream::new(seed, 0)).unwrap();
            assert!(validate_recovery(&hidden, res.recovered.as_ref().unwrap()));
            assert_eq!((res.copies_s, res.copies_s_conj), (6, 4));
        }
    }

    #[test]
    fn algorithm1_random_groups() {
        let s = f(3);
        let mut ok = 0;
        for seed in 0..20 {
            let mut rng = RngStream::new(seed, 0);
            let hidden = StabilizerGroup::random(&s, 2, &mut rng).unwrap();
            let mut oracle = CopyOracle::new(hidden.clone()).unwrap();
            let res = algorithm1(&mut oracle, &mut rng).unwrap();
            assert_eq!((res.copies_s, res.copies_s_conj), (6, 4));
            if let Ok(g) = &res.recovered {
                assert!(validate_recovery(&hidden, g));
                ok += 1;
            }
        }
        assert!(ok >= 16);
    }

    #[test]
    fn algorithm1_needs_conjugates() {
        let s = f(3);
        let hidden = group(&s, &[(0, &[1, 0])]);
        let mut oracle = CopyOracle::without_conjugate(hidden).unwrap();
        assert!(algorithm1(&mut oracle, &mut RngStream::new(0, 0)).is_err());
    }

    #[test]
    fn algorithm2_z_type_group() {
        let s = f(3);
        let d = find_zero_sum_of_three_squares(&s);
        let hidden = group(&s, &[(1, &[1, 0, 0, 0]), (0, &[0, 1, 0, 0])]);
        let mut oracle = CopyOracle::without_conjugate(hidden.clone()).unwrap();
        let (res, trace) = algorithm2_traced(&mut oracle, d, &mut RngStream::new(3, 0)).unwrap();
        assert_eq!(trace.r(), 0);
        assert!(validate_recovery(&hidden, res.recovered.as_ref().unwrap()));
        assert_eq!(res.copies_s, algorithm2_copies(3, 2, 0));
        assert_eq!(res.copies_s_conj, 0);
    }

    #[test]
    fn algorithm2_x_type_group() {
        let s = f(3);
        let d = find_zero_sum_of_three_squares(&s);
        let hidden = group(&s, &[(2, &[0, 0, 1, 0]), (1, &[0, 0, 0, 1])]);
        let mut oracle = CopyOracle::without_conjugate(hidden.clone()).unwrap();
        let (res, trace) = algorithm2_traced(&mut oracle, d, &mut RngStream::new(5, 0)).unwrap();
        let g = res.recovered.as_ref().unwrap();
        assert!(validate_recovery(&hidden, g));
        assert!(g.v_matrix().is_zero());
        let first = &trace.rounds[0];
        for round in &trace.rounds {
            let dc = sub(&s, &round.c, &first.c);
            assert!(hidden.w_matrix().transpose().mul_vec(&s, &dc).unwrap().is_zero());
        }
    }

    #[test]
    fn algorithm2_random_groups_satisfy_round_constraints() {
        let s = f(3);
        let d = find_zero_sum_of_three_squares(&s);
        let mut ok = 0;
        for seed in 0..20 {
            let mut rng = RngStream::new(seed, 1);
            let hidden = StabilizerGroup::random(&s, 2, &mut rng).unwrap();
            let mut oracle = CopyOracle::without_conjugate(hidden.clone()).unwrap();
            let (res, trace) = algorithm2_traced(&mut oracle, d, &mut rng).unwrap();
            assert_eq!(res.copies_s, algorithm2_copies(3, 2, trace.r()));
            assert_eq!(trace.rounds.len(), trace.m + 1);
            // The constraint needs the control register to range over the true col(W).
            if trace.r() == hidden.w_matrix().rank(&s) {
                for round in &trace.rounds {
                    assert!(round_constraint_holds(&hidden, d, round));
                }
            }
            let true_w = Subspace::col_space(&s, hidden.w_matrix());
            assert!(true_w.contains(&s, &Subspace::span(&s, 2, &trace.w_basis)));
            if let Ok(g) = &res.recovered {
                assert!(validate_recovery(&hidden, g));
                ok += 1;
            }
        }
        assert!(ok >= 16);
    }

    #[test]
    fn bad_deltas_are_rejected() {
        let s = f(3);
        let hidden = group(&s, &[(0, &[1, 0])]);
        let mut oracle = CopyOracle::without_conjugate(hidden).unwrap();
        assert!(algorithm2(&mut oracle, [1, 0, 0], &mut RngStream::new(0, 0)).is_err());
    }

    #[test]
    fn validation_examples() {
        let s = f(3);
        let a = group(&s, &[(1, &[1, 0, 0, 0]), (2, &[0, 1, 0, 0])]);
        assert!(validate_recovery(&a, &a));
        let b = group(&s, &[(0, &[1, 0, 0, 0]), (2, &[0, 1, 0, 0])]);
        assert!(!validate_recovery(&a, &b));
        // Same group from a different generating set: Z1·Z2 and Z2.
        let c = group(&s, &[(0, &[1, 1, 0, 0]), (2, &[0, 1, 0, 0])]);
        assert!(validate_recovery(&a, &c));
        let sa = a.state_closed_form().unwrap();
        let sc = c.state_closed_form().unwrap();
        assert!(sa.distance_up_to_phase(&sc).unwrap() < 1e-9);
    }
}
