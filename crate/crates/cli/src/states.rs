//! State specifications: `stab:<group.json>`, `haar:<seed>`,
//! `doped:p,n,t,seed` and `basis:<digits>` (one character per qudit, or
//! comma-separated).

use quditstab::distinguish::{doped_circuit, DopedKind};
use quditstab::{FieldSpec, RngStream, StateVector};

use crate::config::ExperimentConfig;
use crate::output::GroupJson;
use crate::CliError;

/// Clifford layers around each doped gate in generated circuits.
pub const DOPED_DEPTH: usize = 12;

/// Stream id reserved for states built from a spec string.
const SPEC_STREAM: u64 = 0x5eed;

pub fn parse_state(spec: &str, cfg: &ExperimentConfig) -> Result<StateVector, CliError> {
    let (kind, arg) =
        spec.split_once(':').ok_or_else(|| CliError::Config(format!("state spec '{spec}' needs a kind prefix")))?;
    match kind {
        "stab" => {
            let text = std::fs::read_to_string(arg).map_err(|e| CliError::Config(format!("cannot read {arg}: {e}")))?;
            let group: GroupJson =
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("bad group JSON in {arg}: {e}")))?;
            Ok(group.to_group()?.state_closed_form()?)
        }
        "haar" => {
            let seed: u64 = arg.parse().map_err(|_| CliError::Config(format!("bad seed '{arg}'")))?;
            Ok(StateVector::haar_random(&cfg.spec(), cfg.n, &mut RngStream::new(seed, SPEC_STREAM))?)
        }
        "doped" => {
            let parts: Vec<&str> = arg.split(',').map(str::trim).collect();
            let [p, n, t, seed] = parts[..] else {
                return Err(CliError::Config("doped spec is doped:p,n,t,seed".into()));
            };
            let bad = |what: &str| CliError::Config(format!("bad {what} in doped spec"));
            let spec = FieldSpec::new(p.parse().map_err(|_| bad("p"))?).map_err(|e| CliError::Config(e.to_string()))?;
            let n: usize = n.parse().map_err(|_| bad("n"))?;
            let t: usize = t.parse().map_err(|_| bad("t"))?;
            let seed: u64 = seed.parse().map_err(|_| bad("seed"))?;
            let mut rng = RngStream::new(seed, SPEC_STREAM);
            Ok(doped_circuit(&spec, n, t, DOPED_DEPTH, DopedKind::CubicPhase, &mut rng)?.run()?)
        }
        "basis" => {
            let spec = cfg.spec();
            let parsed: Option<Vec<u32>> = if arg.contains(',') {
                arg.split(',').map(|d| d.trim().parse().ok()).collect()
            } else {
                arg.chars().map(|c| c.to_digit(36)).collect()
            };
            let digits: Vec<u8> = parsed
                .filter(|d| !d.is_empty() && d.iter().all(|&e| e < spec.p()))
                .map(|d| d.into_iter().map(|e| e as u8).collect())
                .ok_or_else(|| CliError::Config(format!("'{arg}' is not a string of residues mod {}", spec.p())))?;
            Ok(StateVector::basis_state(&spec, &digits)?)
        }
        other => Err(CliError::Config(format!("unknown state kind '{other}'"))),
    }
}
