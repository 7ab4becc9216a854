//! Reduced invariant suite run by `quditstab selftest`.

use quditstab::cmat::CMatrix;
use quditstab::distinguish::{
    acceptance_probability, cubic_phase_matrix, dense_acceptance_oracle, dense_v, is_clifford_gate,
};
use quditstab::fourier::{closed_form_bS, sft, weyl_distribution, weyl_distribution_via_characters};
use quditstab::gf::{enumerate_lagrangians, find_zero_sum_of_three_squares, VectorIter};
use quditstab::learn::{algorithm1, algorithm2_copies, algorithm2_traced, validate_recovery, CopyOracle};
use quditstab::sampling::{exact_bell_difference_oracle, involuted_pair_on_phi_plus, phi_plus};
use quditstab::stab::{characteristic_distribution, StabilizerGroup};
use quditstab::weyl::{commutation_phase, pauli_mul, weyl_matrix, PauliElement};
use quditstab::{Complex64, FieldSpec, Result, RngStream, StateVector, Subspace, SympVector};

/// Deliberate faults for exercising the suite itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Fault {
    /// Materialise `W_(v,w)` as `W_(w,v)`.
    SwapVw,
}

pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type CheckFn = fn(Option<Fault>) -> Result<(bool, String)>;

const CHECKS: &[(&str, &str, CheckFn)] = &[
    ("gf", "field and complement laws", gf_laws),
    ("gf", "Lagrangian counts", lagrangian_counts),
    ("weyl", "matrix products match symbols", weyl_products),
    ("weyl", "commutation phases", commutation),
    ("state", "gates preserve norm", norm_preservation),
    ("stab", "closed form matches projector", closed_form),
    ("fourier", "Fourier invariance of p", fourier_invariance),
    ("fourier", "Weyl distribution routes agree", weyl_routes),
    ("sampling", "Bell difference law", bell_difference),
    ("sampling", "involuted pairs fix Phi+", phi_plus_pairs),
    ("learn", "Bell-sampling learner", learner_bell),
    ("learn", "quadratic-phase learner", learner_quadratic),
    ("distinguish", "acceptance shortcut matches dense oracle", acceptance),
    ("distinguish", "cubic phase is non-Clifford", cubic_phase),
];

pub fn run(fault: Option<Fault>) -> Vec<Check> {
    CHECKS
        .iter()
        .map(|&(module, name, check)| {
            let (passed, detail) = check(fault).unwrap_or_else(|e| (false, format!("error: {e}")));
            Check { module, name, passed, detail }
        })
        .collect()
}

fn f(p: u32) -> FieldSpec {
    FieldSpec::new(p).expect("small prime")
}

fn materialise(spec: &FieldSpec, x: &SympVector, fault: Option<Fault>) -> Result<CMatrix> {
    match fault {
        Some(Fault::SwapVw) => weyl_matrix(spec, &SympVector::from_parts(x.w(), x.v())),
        None => weyl_matrix(spec, x),
    }
}

fn gf_laws(_: Option<Fault>) -> Result<(bool, String)> {
    let mut ok = true;
    for p in [3, 5, 7, 127] {
        let s = f(p);
        ok &= s.mul(2, s.inv2()) == 1;
    }
    let s = f(5);
    let mut rng = RngStream::new(0, 0);
    for _ in 0..20 {
        let vecs: Vec<Vec<u8>> = (0..2).map(|_| (0..4).map(|_| rng.residue(&s)).collect()).collect();
        let x = Subspace::span(&s, 4, &vecs);
        ok &= x.perp(&s).perp(&s) == x;
        ok &= x.symp_complement(&s)?.symp_complement(&s)? == x;
    }
    Ok((ok, "inv2, perp twice, symplectic complement twice".into()))
}

fn lagrangian_counts(_: Option<Fault>) -> Result<(bool, String)> {
    let counts = [
        enumerate_lagrangians(&f(3), 1)?.len(),
        enumerate_lagrangians(&f(3), 2)?.len(),
        enumerate_lagrangians(&f(5), 1)?.len(),
    ];
    Ok((counts == [4, 40, 6], format!("{counts:?}")))
}

fn weyl_products(fault: Option<Fault>) -> Result<(bool, String)> {
    let s = f(3);
    let mut worst: f64 = 0.0;
    for a in VectorIter::new(&s, 2) {
        for b in VectorIter::new(&s, 2) {
            let x = PauliElement::from_parts(0, SympVector::from_residues(a.clone()));
            let y = PauliElement::from_parts(0, SympVector::from_residues(b));
            let xy = pauli_mul(&s, &x, &y)?;
            let lhs = materialise(&s, &x.label, fault)?.mul(&materialise(&s, &y.label, fault)?)?;
            let phase = s.omega_table()[xy.phase as usize];
            let rhs = materialise(&s, &xy.label, fault)?.scale(phase);
            worst = worst.max(lhs.max_abs_diff(&rhs));
        }
    }
    Ok((worst <= 1e-12, format!("max deviation {worst:.1e}")))
}

fn commutation(fault: Option<Fault>) -> Result<(bool, String)> {
    let s = f(3);
    let omega = s.omega_table();
    let mut worst: f64 = 0.0;
    for a in VectorIter::new(&s, 2) {
        for b in VectorIter::new(&s, 2) {
            let x = SympVector::from_residues(a.clone());
            let y = SympVector::from_residues(b);
            let (wx, wy) = (materialise(&s, &x, fault)?, materialise(&s, &y, fault)?);
            let c = omega[commutation_phase(&s, &x, &y)? as usize];
            worst = worst.max(wx.mul(&wy)?.max_abs_diff(&wy.mul(&wx)?.scale(c)));
        }
    }
    Ok((worst <= 1e-12, format!("max deviation {worst:.1e}")))
}

fn norm_preservation(_: Option<Fault>) -> Result<(bool, String)> {
    let s = f(3);
    let mut rng = RngStream::new(0, 1);
    let mut psi = StateVector::haar_random(&s, 3, &mut rng)?;
    psi.qft(0, false)?;
    psi.controlled_shift(&[0], &[2], 1)?;
    psi.qft(2, true)?;
    let x = SympVector::from_residues(vec![1, 2, 0, 0, 1, 2]);
    let psi = psi.apply_weyl(&x)?;
    let norm = psi.inner(&psi)?.re;
    Ok(((norm - 1.0).abs() <= 1e-10, format!("norm {norm:.12}")))
}

fn closed_form(_: Option<Fault>) -> Result<(bool, String)> {
    let s = f(3);
    let mut worst: f64 = 0.0;
    let groups = StabilizerGroup::enumerate_all(&s, 2)?;
    for g in &groups {
        let a = g.state_closed_form()?;
        worst = worst.max(a.distance_up_to_phase(&g.state_projector_oracle()?)?);
    }
    Ok((groups.len() == 360 && worst <= 1e-9, format!("{} groups, max error {worst:.1e}", groups.len())))
}

fn fourier_invariance(_: Option<Fault>) -> Result<(bool, String)> {
    let s = f(3);
    let mut worst: f64 = 0.0;
    for seed in 0..5 {
        let psi = StateVector::haar_random(&s, 2, &mut RngStream::new(seed, 2))?;
        let p = characteristic_distribution(&psi)?.to_function();
        worst = worst.max(sft(&p)?.max_abs_diff(&p.scale(1.0 / 9.0)));
    }
    Ok((worst <= 1e-9, format!("max deviation {worst:.1e}")))
}

fn weyl_routes(_: Option<Fault>) -> Result<(bool, String)> {
    let s = f(3);
    let mut worst: f64 = 0.0;
    for seed in 0..5 {
        let psi = StateVector::haar_random(&s, 2, &mut RngStream::new(seed, 3))?;
        let p = characteristic_distribution(&psi)?;
        worst = worst.max(weyl_distribution(&psi)?.max_abs_diff(&weyl_distribution_via_characters(&p)?));
    }
    for g in StabilizerGroup::enumerate_all(&s, 1)? {
        let b = weyl_distribution(&g.state_closed_form()?)?;
        worst = worst.max(b.max_abs_diff(&closed_form_bS(&g)?.distribution));
    }
    Ok((worst <= 1e-9, format!("max deviation {worst:.1e}")))
}

fn bell_difference(_: Option<Fault>) -> Result<(bool, String)> {
    let s = f(3);
    let mut worst: f64 = 0.0;
    for seed in 0..5 {
        let psi = StateVector::haar_random(&s, 2, &mut RngStream::new(seed, 4))?;
        worst = worst.max(weyl_distribution(&psi)?.max_abs_diff(&exact_bell_difference_oracle(&psi)?));
    }
    Ok((worst <= 1e-9, format!("max deviation {worst:.1e}")))
}

fn phi_plus_pairs(_: Option<Fault>) -> Result<(bool, String)> {
    let s = f(3);
    let reference = phi_plus(&s, 1)?;
    let mut worst: f64 = 0.0;
    for a in VectorIter::new(&s, 2) {
        let out = involuted_pair_on_phi_plus(&s, &SympVector::from_residues(a))?;
        worst = worst.max((out.inner(&reference)? - Complex64::new(1.0, 0.0)).norm());
    }
    Ok((worst <= 1e-9, format!("max deviation {worst:.1e}")))
}

fn learner_bell(_: Option<Fault>) -> Result<(bool, String)> {
    let s = f(3);
    let mut successes = 0;
    let mut copies_ok = true;
    for seed in 0..20 {
        let mut rng = RngStream::new(seed, 5);
        let hidden = StabilizerGroup::random(&s, 2, &mut rng)?;
        let res = algorithm1(&mut CopyOracle::new(hidden.clone())?, &mut rng)?;
        copies_ok &= (res.copies_s, res.copies_s_conj) == (6, 4);
        successes += usize::from(res.recovered.is_ok_and(|g| validate_recovery(&hidden, &g)));
    }
    Ok((successes >= 15 && copies_ok, format!("{successes}/20 at p=3 n=2, copies (6, 4)")))
}

fn learner_quadratic(_: Option<Fault>) -> Result<(bool, String)> {
    let s = f(3);
    let d = find_zero_sum_of_three_squares(&s);
    let mut successes = 0;
    let mut copies_ok = true;
    for seed in 0..10 {
        let mut rng = RngStream::new(seed, 6);
        let hidden = StabilizerGroup::random(&s, 2, &mut rng)?;
        let (res, trace) = algorithm2_traced(&mut CopyOracle::without_conjugate(hidden.clone())?, d, &mut rng)?;
        copies_ok &= res.copies_s == algorithm2_copies(3, 2, trace.r());
        successes += usize::from(res.recovered.is_ok_and(|g| validate_recovery(&hidden, &g)));
    }
    Ok((successes >= 6 && copies_ok, format!("{successes}/10 at p=3 n=2")))
}

fn acceptance(_: Option<Fault>) -> Result<(bool, String)> {
    let s = f(3);
    let mut worst: f64 = 0.0;
    for seed in 0..3 {
        let psi = StateVector::haar_random(&s, 1, &mut RngStream::new(seed, 7))?;
        worst = worst.max((dense_acceptance_oracle(&psi)? - acceptance_probability(&psi)?).abs());
    }
    let v = dense_v(&s, 1)?;
    let involution = v.mul(&v)?.max_abs_diff(&CMatrix::identity(v.rows()));
    Ok((worst <= 1e-9 && involution <= 1e-12, format!("gap {worst:.1e}, |V^2 - I| {involution:.1e}")))
}

fn cubic_phase(_: Option<Fault>) -> Result<(bool, String)> {
    let mut ok = true;
    for p in [3, 5, 7] {
        ok &= !is_clifford_gate(&f(p), &cubic_phase_matrix(&f(p)))?;
    }
    Ok((ok, "p = 3, 5, 7".into()))
}
