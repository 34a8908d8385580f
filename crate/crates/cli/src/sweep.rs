//! Drives the library over a time grid.

use krylov_core::algebra::{build_liouvillian, LiouvillianSpec};
use krylov_core::bch::closed_form_params;
use krylov_core::coherent::{
    autocorrelator_printed, complexity_closed, interaction_term, phi_series_capped, schrodinger_complexity_t,
    suggested_dim, variance_printed,
};
use krylov_core::fock::{evolve_state, FockVector, Propagator, TruncationConfig};
use krylov_core::lanczos::{chain_complexity, lanczos_with_basis, propagate_chain};
use rayon::prelude::*;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::config::{Mode, SweepConfig, MAX_DIM};
use crate::error::{CliError, Result};

/// Sites kept by the Lanczos chain in `lanczos` mode.
pub const CHAIN_SITES: usize = 120;
/// Guard-band tolerance of the Fock evolution projected onto the Lanczos basis.
pub const CHAIN_ORACLE_TAIL: f64 = 1e-7;
/// Amplitude cap for direct sums.
pub const SERIES_CAP: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Oracle,
    LanczosChain,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Oracle => "oracle",
            Method::LanczosChain => "lanczos_chain",
        }
    }
}

/// Observables at one time by one method, in a fixed column order.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub t: f64,
    pub values: Vec<(String, f64)>,
    pub method: Method,
}

impl ResultRow {
    fn new(t: f64, method: Method, values: Vec<(String, f64)>) -> Result<Self> {
        if let Some((name, _)) = values.iter().find(|(_, v)| !v.is_finite()) {
            return Err(CliError::NonFinite { observable: name.clone(), t });
        }
        Ok(ResultRow { t, values, method })
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

struct ValueMap<'a>(&'a [(String, f64)]);

impl Serialize for ValueMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Serialize for ResultRow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ResultRow", 3)?;
        st.serialize_field("t", &self.t)?;
        st.serialize_field("values", &ValueMap(&self.values))?;
        st.serialize_field("method", &self.method)?;
        st.end()
    }
}

pub(crate) fn spec_of(cfg: &SweepConfig) -> Result<LiouvillianSpec> {
    LiouvillianSpec::new(cfg.alpha, cfg.beta).map_err(|e| CliError::Config(e.to_string()))
}

pub(crate) fn numerical(cfg: &SweepConfig, t: f64, dim: usize) -> impl Fn(krylov_core::Error) -> CliError + '_ {
    move |source| CliError::Numerical { alpha: cfg.alpha, beta: cfg.beta, t, dim, source }
}

/// `exp(i t L)|0>` in a truncation of at least `min_dim`, enlarged until the
/// closed-form amplitudes above 1e-20 sit below the guard band.
pub fn oracle_state(spec: &LiouvillianSpec, t: f64, min_dim: usize) -> krylov_core::Result<(FockVector, usize)> {
    let wanted = suggested_dim(&closed_form_params(spec, t))?;
    let dim = wanted.min(MAX_DIM).max(min_dim);
    let cfg = TruncationConfig::new(dim)?;
    let l = build_liouvillian(spec, &cfg)?;
    Ok((evolve_state(&l, t, &FockVector::vacuum(dim)?, &cfg)?, dim))
}

fn named(pairs: &[(&str, f64)]) -> Vec<(String, f64)> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn probabilities(name_len: usize, probs: impl Iterator<Item = f64>) -> Vec<(String, f64)> {
    let mut out: Vec<(String, f64)> = probs.take(name_len).enumerate().map(|(k, p)| (format!("p{k}"), p)).collect();
    while out.len() < name_len {
        out.push((format!("p{}", out.len()), 0.0));
    }
    out
}

fn rows_at(cfg: &SweepConfig, spec: &LiouvillianSpec, t: f64) -> Result<Vec<ResultRow>> {
    let p = closed_form_params(spec, t);
    let err = numerical(cfg, t, cfg.dim);
    match cfg.mode {
        Mode::Complexity => {
            let a2t2 = cfg.alpha * cfg.alpha * t * t;
            let sh = (cfg.beta * t).sinh();
            let values = named(&[
                ("K", complexity_closed(&p)),
                ("K_time", schrodinger_complexity_t(spec, t)),
                ("K_hw", a2t2),
                ("K_sl2r", sh * sh),
                ("interaction", cfg.alpha * cfg.alpha * interaction_term(spec, t)),
            ]);
            Ok(vec![ResultRow::new(t, Method::ClosedForm, values)?])
        }
        Mode::Variance => {
            let series = phi_series_capped(&p, cfg.tol, SERIES_CAP).map_err(err)?;
            let values = named(&[
                ("K", series.complexity()),
                ("sigma2", series.variance()),
                ("sigma2_printed", variance_printed(&p)),
            ]);
            Ok(vec![ResultRow::new(t, Method::ClosedForm, values)?])
        }
        Mode::Distribution => {
            let series = phi_series_capped(&p, cfg.tol, SERIES_CAP).map_err(&err)?;
            let closed = probabilities(cfg.dim, series.probabilities().into_iter());
            let (state, dim) = oracle_state(spec, t, cfg.dim).map_err(&err)?;
            let _ = dim;
            let oracle = probabilities(cfg.dim, state.probabilities().into_iter());
            Ok(vec![ResultRow::new(t, Method::ClosedForm, closed)?, ResultRow::new(t, Method::Oracle, oracle)?])
        }
        Mode::Autocorrelator => {
            let closed = krylov_core::coherent::phi_zero(&p).norm_sqr();
            let (state, _) = oracle_state(spec, t, cfg.dim).map_err(&err)?;
            Ok(vec![
                ResultRow::new(t, Method::ClosedForm, named(&[("return_probability", closed), ("printed", autocorrelator_printed(spec, t))]))?,
                ResultRow::new(t, Method::Oracle, named(&[("return_probability", state.amplitudes()[0].norm_sqr())]))?,
            ])
        }
        Mode::Lanczos | Mode::Verify => unreachable!("handled by the caller"),
    }
}

fn lanczos_rows(cfg: &SweepConfig, spec: &LiouvillianSpec) -> Result<Vec<ResultRow>> {
    let grid = cfg.grid();
    let t0 = grid[0];
    let tcfg = TruncationConfig::with_tolerances(cfg.dim, CHAIN_ORACLE_TAIL, 0.125).map_err(numerical(cfg, t0, cfg.dim))?;
    let l = build_liouvillian(spec, &tcfg).map_err(numerical(cfg, t0, cfg.dim))?;
    let vac = FockVector::vacuum(cfg.dim).map_err(numerical(cfg, t0, cfg.dim))?;
    let (chain, basis) = lanczos_with_basis(&l, &vac, CHAIN_SITES.min(cfg.dim), true).map_err(numerical(cfg, t0, cfg.dim))?;
    let prop = Propagator::new(&l, &tcfg).map_err(numerical(cfg, t0, cfg.dim))?;
    let per_t: Vec<Result<Vec<ResultRow>>> = grid
        .par_iter()
        .map(|&t| {
            let err = numerical(cfg, t, cfg.dim);
            let wf = propagate_chain(&chain, &[t]).map_err(&err)?.remove(0);
            let state = prop.evolve(t, &vac).map_err(&err)?;
            Ok(vec![
                ResultRow::new(t, Method::LanczosChain, named(&[("K", chain_complexity(&wf))]))?,
                ResultRow::new(t, Method::Oracle, named(&[("K", basis.position(state.amplitudes()))]))?,
            ])
        })
        .collect();
    flatten(per_t)
}

fn flatten(per_t: Vec<Result<Vec<ResultRow>>>) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    for r in per_t {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Rows in grid order, one per grid point and method.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let spec = spec_of(cfg)?;
    match cfg.mode {
        Mode::Verify => Err(CliError::Config("verify mode produces a report, not rows".into())),
        Mode::Lanczos => lanczos_rows(cfg, &spec),
        _ => flatten(cfg.grid().par_iter().map(|&t| rows_at(cfg, &spec, t)).collect()),
    }
}
