//! Parsing of `--state`, `--basis` and `--grid` values.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use sqdiscord::corr::OptimizationSettings;
use sqdiscord::states::{self, BlochNormalForm, DensityMatrix, SchmidtParams, WernerParams};

/// A `--state` argument: a named preset or a JSON state file.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Pure(f64),
    Werner(f64),
    Bloch(Vec<f64>),
    File(String),
}

impl StateSpec {
    pub fn parse(s: &str) -> anyhow::Result<Self> {
        if s == "maximally-entangled" {
            return Ok(StateSpec::Pure(0.5));
        }
        let Some((name, params)) = s.split_once(':') else {
            return Ok(StateSpec::File(s.to_owned()));
        };
        let spec = match name {
            "pure" => StateSpec::Pure(single(name, params)?),
            "werner" => StateSpec::Werner(single(name, params)?),
            "bloch" => StateSpec::Bloch(reals(params).with_context(|| format!("in preset `{s}`"))?),
            _ => StateSpec::File(s.to_owned()),
        };
        Ok(spec)
    }

    pub fn bloch_params(&self) -> anyhow::Result<BlochNormalForm> {
        match self {
            StateSpec::Bloch(v) => Ok(BlochNormalForm::from_slice(v)?),
            _ => bail!("expected a `bloch:a1,a2,a3,b1,b2,b3,c1,c2,c3` preset"),
        }
    }

    pub fn load(&self) -> anyhow::Result<DensityMatrix> {
        let rho = match self {
            StateSpec::Pure(l) => states::pure_schmidt(SchmidtParams::new(*l)?)?,
            StateSpec::Werner(z) => states::werner(WernerParams::new(*z)?)?,
            StateSpec::Bloch(_) => states::bloch_normal_form(&self.bloch_params()?)
                .context("Bloch parameters do not describe a physical state")?,
            StateSpec::File(path) => read_state_file(Path::new(path))?,
        };
        Ok(rho)
    }
}

fn read_state_file(path: &Path) -> anyhow::Result<DensityMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read state file {}", path.display()))?;
    states::parse_state_json(&text).with_context(|| format!("invalid state file {}", path.display()))
}

fn single(name: &str, params: &str) -> anyhow::Result<f64> {
    match reals(params)?.as_slice() {
        [v] => Ok(*v),
        other => bail!("preset `{name}` takes one value, got {}", other.len()),
    }
}

/// Comma-separated reals.
pub fn reals(s: &str) -> anyhow::Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .with_context(|| format!("`{t}` is not a number"))
        })
        .collect()
}

/// `θ,φ` in radians.
pub fn parse_basis(s: &str) -> Result<(f64, f64), String> {
    match reals(s).map_err(|e| e.to_string())?.as_slice() {
        [theta, phi] => Ok((*theta, *phi)),
        _ => Err("expected `theta,phi`".into()),
    }
}

/// `NTxNP` or `NT,NP`.
pub fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (t, p) = s
        .split_once(['x', ','])
        .ok_or_else(|| "expected `NTxNP`, e.g. 64x128".to_string())?;
    let n = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("`{v}`: {e}"));
    Ok((n(t)?, n(p)?))
}

pub fn settings(grid: (usize, usize), refine_tol: f64) -> anyhow::Result<OptimizationSettings> {
    let s = OptimizationSettings {
        n_theta: grid.0,
        n_phi: grid.1,
        refine_tolerance: refine_tol,
        ..Default::default()
    };
    s.validate()?;
    Ok(s)
}
