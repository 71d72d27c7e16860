//! Running a configured job and mapping failures to exit codes.

use std::path::Path;

use ifunc_core::ifunction::{Engine, IFunctionSeries};
use ifunc_core::Error;

use crate::config::{parse_config_with, ConfigError, JobConfig, Overrides};
use crate::render::render;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INTEGRITY: i32 = 3;
pub const EXIT_UNBOUNDED: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum JobError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Pipeline(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl JobError {
    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Config(_) | JobError::Io { .. } => EXIT_CONFIG,
            JobError::Pipeline(e) => match e {
                Error::UnboundedFiber { .. } => EXIT_UNBOUNDED,
                Error::Integrity(_) | Error::DivisionByZero(_) | Error::NonUnitInversion { .. } => EXIT_INTEGRITY,
                Error::Structure(_) | Error::Invalid(_) | Error::Weyl(_) | Error::Unsupported(_) => EXIT_CONFIG,
            },
        }
    }
}

pub fn run_job(cfg: &JobConfig) -> Result<IFunctionSeries, Error> {
    let engine = Engine::new(cfg.presentation.clone(), cfg.options.equivariant)?;
    let series = engine.series(&cfg.options)?;
    match &cfg.big_i {
        Some(spec) => engine.big_i_twist(&series, spec),
        None => Ok(series),
    }
}

pub fn read_config(path: &Path, overrides: &Overrides) -> Result<JobConfig, JobError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| JobError::Io { path: path.display().to_string(), source })?;
    Ok(parse_config_with(&text, overrides)?)
}

/// Parse, run and render; returns the rendered text and config warnings.
pub fn run_config_text(text: &str, overrides: &Overrides) -> Result<(String, JobConfig, Vec<String>), JobError> {
    let cfg = parse_config_with(text, overrides)?;
    let series = run_job(&cfg)?;
    let out = render(&series, cfg.format);
    let warnings = cfg.warnings.clone();
    Ok((out, cfg, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use ifunc_core::gitdata::CurveClass;

    #[test]
    fn quintic_has_two_terms() {
        let cfg = parse_config(
            "[presentation]\npreset = \"projective_space(4)\"\ncomplete_intersection = [[5]]\n[run]\nmax_degree = 1\n",
        )
        .unwrap();
        let s = run_job(&cfg).unwrap();
        let degrees: Vec<_> = s.terms.iter().map(|t| t.class.clone()).collect();
        assert_eq!(degrees, vec![CurveClass::from_ints(&[0]), CurveClass::from_ints(&[1])]);
    }

    #[test]
    fn unbounded_exit_code() {
        let mut p = ifunc_core::gitdata::presets::grassmannian(2, 2);
        p.weights.push(vec![1, 1]);
        let opts = ifunc_core::ifunction::Options::new(ifunc_core::ifunction::Mode::Nonabelian, ifunc_core::poly::q(1));
        let text = crate::config::reproduction_config(&p, &opts);
        let err = run_config_text(&text, &Overrides::default()).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_UNBOUNDED);
        assert!(err.to_string().contains("direction"), "{}", err);
    }
}
