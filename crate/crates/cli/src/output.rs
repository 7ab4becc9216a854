//! Machine-readable output: versioned JSON with fixed float formatting, and CSV.

use std::fmt::Write as _;
use std::io::Write;

use quditstab::fourier::PhaseDistribution;
use quditstab::stab::StabilizerGroup;
use quditstab::{FieldSpec, PauliElement};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::config::ExperimentConfig;
use crate::CliError;

pub const SCHEMA: u32 = 1;

/// An `f64` serialised with 17 significant digits in exponent form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fixed(pub f64);

impl Serialize for Fixed {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

pub fn fixed_vec(values: &[f64]) -> Vec<Fixed> {
    values.iter().copied().map(Fixed).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub s: u32,
    pub x: Vec<u32>,
}

/// Interchange form of a stabiliser group.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupJson {
    pub p: u32,
    pub n: usize,
    pub generators: Vec<GeneratorJson>,
}

impl GroupJson {
    pub fn from_group(g: &StabilizerGroup) -> Self {
        Self {
            p: g.spec().p(),
            n: g.n(),
            generators: g
                .generators()
                .iter()
                .map(|e| GeneratorJson { s: e.phase as u32, x: e.label.iter().map(|&r| r as u32).collect() })
                .collect(),
        }
    }

    pub fn to_group(&self) -> Result<StabilizerGroup, CliError> {
        let spec = FieldSpec::new(self.p).map_err(CliError::Core)?;
        let gens = self
            .generators
            .iter()
            .map(|g| {
                if g.x.len() != 2 * self.n {
                    return Err(CliError::Config(format!("generator label needs {} entries", 2 * self.n)));
                }
                PauliElement::new(&spec, g.s, &g.x).map_err(CliError::Core)
            })
            .collect::<Result<Vec<_>, _>>()?;
        StabilizerGroup::new(&spec, gens).map_err(CliError::Core)
    }
}

/// `p,n` header, the values, then one `x_1,...,x_2n,value` row per label.
pub fn distribution_csv(d: &PhaseDistribution) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p,n");
    let _ = writeln!(out, "{},{}", d.spec().p(), d.n());
    for (x, v) in d.iter() {
        for e in &x {
            let _ = write!(out, "{e},");
        }
        let _ = writeln!(out, "{v:.16e}");
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Writes to `cfg.output` when set, else stdout.
pub fn emit(cfg: &ExperimentConfig, text: &str) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_has_seventeen_digits() {
        let s = serde_json::to_string(&[Fixed(0.1), Fixed(-2.5e-7), Fixed(f64::NAN)]).unwrap();
        assert_eq!(s, "[1.0000000000000001e-1,-2.4999999999999999e-7,null]");
        for x in [0.1, -2.5e-7, 1.0 / 3.0, 6.02e23] {
            let text = serde_json::to_string(&Fixed(x)).unwrap();
            assert_eq!(text.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn group_round_trip() {
        let spec = FieldSpec::new(5).unwrap();
        let g = StabilizerGroup::random(&spec, 2, &mut quditstab::RngStream::new(3, 0)).unwrap();
        let json = serde_json::to_string(&GroupJson::from_group(&g)).unwrap();
        let back: GroupJson = serde_json::from_str(&json).unwrap();
        assert!(back.to_group().unwrap().same_group(&g));
    }
}
