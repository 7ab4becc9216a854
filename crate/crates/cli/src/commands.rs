use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;

use quditstab::distinguish::{algorithm3, doped_circuit, DopedKind, Verdict};
use quditstab::fourier::{involute_distribution, sft, weyl_distribution, PhaseDistribution};
use quditstab::gf::find_zero_sum_of_three_squares;
use quditstab::learn::{algorithm1, algorithm2, validate_recovery, CopyOracle, LearnResult};
use quditstab::stab::{characteristic_distribution, fidelity_bounds, stabilizer_fidelity_bruteforce, StabilizerGroup};
use quditstab::state::STATE_GUARD;
use quditstab::{RngStream, StateVector, TOL_STATE};

use crate::config::{ExperimentConfig, Format};
use crate::output::{distribution_csv, emit, fixed_vec, to_json, Fixed, GroupJson, SCHEMA};
use crate::states::{parse_state, DOPED_DEPTH};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LearnMode {
    Bell,
    Quadratic,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct LearnRecord {
    success: bool,
    copies_S: usize,
    copies_S_conj: usize,
    seed: u64,
    trial: usize,
    group: Option<GroupJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

#[derive(Serialize)]
struct LearnReport {
    schema: u32,
    command: &'static str,
    mode: LearnMode,
    p: u32,
    n: usize,
    trials: usize,
    seed: u64,
    successes: usize,
    success_rate: Fixed,
    bound: Fixed,
    results: Vec<LearnRecord>,
}

fn record(hidden: &StabilizerGroup, res: LearnResult, seed: u64, trial: usize) -> LearnRecord {
    let (success, group, reason) = match &res.recovered {
        Ok(g) if validate_recovery(hidden, g) => (true, Some(GroupJson::from_group(g)), None),
        Ok(g) => (false, Some(GroupJson::from_group(g)), Some("recovered group differs from hidden group".into())),
        Err(why) => (false, None, Some(why.to_string())),
    };
    LearnRecord { success, copies_S: res.copies_s, copies_S_conj: res.copies_s_conj, seed, trial, group, reason }
}

pub fn learn(cfg: &ExperimentConfig, mode: LearnMode) -> Result<(), CliError> {
    let spec = cfg.spec();
    let n = cfg.n;
    let register = match mode {
        LearnMode::Bell => 2 * n,
        LearnMode::Quadratic => 4 * n,
    };
    spec.guarded_size("learning register", register, STATE_GUARD)?;
    let deltas = find_zero_sum_of_three_squares(&spec);
    let results = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = RngStream::new(cfg.seed, trial as u64);
            let hidden = StabilizerGroup::random(&spec, n, &mut rng)?;
            let res = match mode {
                LearnMode::Bell => algorithm1(&mut CopyOracle::new(hidden.clone())?, &mut rng)?,
                LearnMode::Quadratic => {
                    algorithm2(&mut CopyOracle::without_conjugate(hidden.clone())?, deltas, &mut rng)?
                }
            };
            Ok(record(&hidden, res, cfg.seed, trial))
        })
        .collect::<Result<Vec<_>, quditstab::Error>>()?;
    let successes = results.iter().filter(|r| r.success).count();
    let p_n = (spec.p() as f64).powi(n as i32);
    let bound = match mode {
        LearnMode::Bell => 1.0 - 1.0 / p_n,
        LearnMode::Quadratic => 1.0 - 2.0 / p_n,
    };
    let report = LearnReport {
        schema: SCHEMA,
        command: "learn",
        mode,
        p: spec.p(),
        n,
        trials: cfg.trials,
        seed: cfg.seed,
        successes,
        success_rate: Fixed(if cfg.trials == 0 { 0.0 } else { successes as f64 / cfg.trials as f64 }),
        bound: Fixed(bound),
        results,
    };
    emit(cfg, &to_json(&report)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Stab,
    Haar,
    Doped,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct DistinguishRecord {
    source: Source,
    trial: usize,
    seed: u64,
    verdict: &'static str,
    X: Fixed,
    m: u64,
    sigma_p2: Fixed,
}

#[derive(Serialize)]
struct ConfusionRow {
    source: Source,
    haar: usize,
    high_fidelity: usize,
}

#[derive(Serialize)]
struct DistinguishReport {
    schema: u32,
    command: &'static str,
    p: u32,
    n: usize,
    t: usize,
    k: Fixed,
    delta: Fixed,
    m: u64,
    threshold: Fixed,
    copies_per_trial: u64,
    confusion: Vec<ConfusionRow>,
    results: Vec<DistinguishRecord>,
}

pub fn distinguish(cfg: &ExperimentConfig, sources: &[Source]) -> Result<(), CliError> {
    let spec = cfg.spec();
    spec.guarded_size("state dimension", cfg.n, STATE_GUARD)?;
    let m = quditstab::distinguish::rounds_for(cfg.k, cfg.delta)?;
    let jobs: Vec<(usize, Source, usize)> =
        sources.iter().enumerate().flat_map(|(si, &s)| (0..cfg.trials).map(move |t| (si, s, t))).collect();
    let results = jobs
        .par_iter()
        .map(|&(si, source, trial)| {
            let mut rng = RngStream::new(cfg.seed, (si * cfg.trials + trial) as u64);
            let psi = match source {
                Source::Stab => StabilizerGroup::random(&spec, cfg.n, &mut rng)?.state_closed_form()?,
                Source::Haar => StateVector::haar_random(&spec, cfg.n, &mut rng)?,
                Source::Doped => {
                    doped_circuit(&spec, cfg.n, cfg.t, DOPED_DEPTH, DopedKind::CubicPhase, &mut rng)?.run()?
                }
            };
            let r = algorithm3(&psi, cfg.k, cfg.delta, &mut rng)?;
            Ok(DistinguishRecord {
                source,
                trial,
                seed: cfg.seed,
                verdict: r.verdict.as_str(),
                X: Fixed(r.statistic),
                m: r.m,
                sigma_p2: Fixed(r.sigma_p2),
            })
        })
        .collect::<Result<Vec<_>, quditstab::Error>>()?;
    let confusion = sources
        .iter()
        .map(|&s| {
            let mut row = ConfusionRow { source: s, haar: 0, high_fidelity: 0 };
            for r in results.iter().filter(|r| r.source == s) {
                if r.verdict == Verdict::Haar.as_str() {
                    row.haar += 1;
                } else {
                    row.high_fidelity += 1;
                }
            }
            row
        })
        .collect();
    let report = DistinguishReport {
        schema: SCHEMA,
        command: "distinguish",
        p: spec.p(),
        n: cfg.n,
        t: cfg.t,
        k: Fixed(cfg.k),
        delta: Fixed(cfg.delta),
        m,
        threshold: Fixed(quditstab::distinguish::threshold(cfg.k)),
        copies_per_trial: 4 * m,
        confusion,
        results,
    };
    emit(cfg, &to_json(&report)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    P,
    J,
    B,
    SftP,
    SftJ,
}

#[derive(Serialize)]
struct DistributionsReport<'a> {
    schema: u32,
    command: &'static str,
    state: &'a str,
    p: u32,
    n: usize,
    p_psi: Vec<Fixed>,
    j_psi: Vec<Fixed>,
    b_psi: Vec<Fixed>,
    sft_p: Vec<Fixed>,
    sft_j: Vec<Fixed>,
}

pub fn distributions(cfg: &ExperimentConfig, state: &str, which: Which) -> Result<(), CliError> {
    let psi = parse_state(state, cfg)?;
    let p = characteristic_distribution(&psi)?;
    let j = involute_distribution(&p);
    let b = weyl_distribution(&psi)?;
    let sft_p = sft(&p.to_function())?.to_real(TOL_STATE)?;
    let sft_j = sft(&j.to_function())?.to_real(TOL_STATE)?;
    let text = match cfg.format {
        Format::Csv => {
            let pick: &PhaseDistribution = match which {
                Which::P => &p,
                Which::J => &j,
                Which::B => &b,
                Which::SftP => &sft_p,
                Which::SftJ => &sft_j,
            };
            distribution_csv(pick)
        }
        Format::Json => to_json(&DistributionsReport {
            schema: SCHEMA,
            command: "distributions",
            state,
            p: p.spec().p(),
            n: p.n(),
            p_psi: fixed_vec(p.values()),
            j_psi: fixed_vec(j.values()),
            b_psi: fixed_vec(b.values()),
            sft_p: fixed_vec(sft_p.values()),
            sft_j: fixed_vec(sft_j.values()),
        })?,
    };
    emit(cfg, &text)
}

#[derive(Serialize)]
struct FidelityReport<'a> {
    schema: u32,
    command: &'static str,
    state: &'a str,
    p: u32,
    n: usize,
    fidelity: Fixed,
    lower: Fixed,
    upper: Fixed,
    group: GroupJson,
}

pub fn fidelity(cfg: &ExperimentConfig, state: &str) -> Result<(), CliError> {
    let psi = parse_state(state, cfg)?;
    let (fid, group) = stabilizer_fidelity_bruteforce(&psi)?;
    let (lower, upper) = fidelity_bounds(&characteristic_distribution(&psi)?, &group.lagrangian())?;
    let report = FidelityReport {
        schema: SCHEMA,
        command: "fidelity",
        state,
        p: psi.spec().p(),
        n: psi.n(),
        fidelity: Fixed(fid),
        lower: Fixed(lower),
        upper: Fixed(upper),
        group: GroupJson::from_group(&group),
    };
    emit(cfg, &to_json(&report)?)
}
