//! The `verify` report: cross-checks between closed forms and the Fock
//! oracle, limit recovery, and a table of printed formulas that disagree with
//! the exact values.

use std::io::Write;

use krylov_core::algebra::LiouvillianSpec;
use krylov_core::bch::{closed_form_params, decompose_exponential};
use krylov_core::coherent::{
    complexity_closed, discrepancy_probes, mehler_normalization_check, phi_series_capped, schrodinger_complexity_t,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::SweepConfig;
use crate::error::{CliError, Result};
use crate::output::format_sig12;
use crate::sweep::{numerical, oracle_state, spec_of, SERIES_CAP};

/// A residual with the bound it must meet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &str, residual: f64, tolerance: f64) -> Self {
        Check { name: name.to_owned(), residual, tolerance, passed: residual.is_finite() && residual <= tolerance }
    }
}

/// A printed formula beside the exact value. Never counts as a failure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discrepancy {
    pub name: String,
    pub printed: f64,
    pub reference: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub config: SweepConfig,
    pub checks: Vec<Check>,
    /// `K - alpha^2 t^2` at `beta = 0` and `K - sinh^2(beta t)` at `alpha = 0`.
    pub limits: Vec<Check>,
    pub discrepancies: Vec<Discrepancy>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().chain(&self.limits).all(|c| c.passed)
    }

    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "section,name,residual,tolerance,status")?;
        for (section, checks) in [("check", &self.checks), ("limit", &self.limits)] {
            for c in checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                writeln!(out, "{section},{},{},{},{status}", c.name, format_sig12(c.residual), format_sig12(c.tolerance))?;
            }
        }
        writeln!(out, "discrepancy,name,printed,reference,deviation")?;
        for d in &self.discrepancies {
            writeln!(
                out,
                "discrepancy,{},{},{},{}",
                d.name,
                format_sig12(d.printed),
                format_sig12(d.reference),
                format_sig12(d.deviation)
            )?;
        }
        Ok(())
    }
}

#[derive(Default, Clone, Copy)]
struct Residuals {
    oracle: f64,
    normalization: f64,
    mehler: f64,
    complexity: f64,
    time_form: f64,
    bch: f64,
    hw: f64,
    sl2r: f64,
}

impl Residuals {
    fn max(self, o: Residuals) -> Residuals {
        Residuals {
            oracle: self.oracle.max(o.oracle),
            normalization: self.normalization.max(o.normalization),
            mehler: self.mehler.max(o.mehler),
            complexity: self.complexity.max(o.complexity),
            time_form: self.time_form.max(o.time_form),
            bch: self.bch.max(o.bch),
            hw: self.hw.max(o.hw),
            sl2r: self.sl2r.max(o.sl2r),
        }
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

fn residuals_at(cfg: &SweepConfig, spec: &LiouvillianSpec, t: f64) -> Result<Residuals> {
    let err = numerical(cfg, t, cfg.dim);
    let p = closed_form_params(spec, t);
    let series = phi_series_capped(&p, cfg.tol, SERIES_CAP).map_err(&err)?;
    let (state, dim) = oracle_state(spec, t, cfg.dim).map_err(&err)?;
    let phi = series.phi();
    let oracle = (0..dim.min(phi.len())).map(|k| (phi[k] - state.amplitudes()[k]).norm()).fold(0.0, f64::max);

    let k = complexity_closed(&p);
    let scale = k.max(1.0);
    let decomposed = decompose_exponential(spec, t).map_err(numerical(cfg, t, cfg.dim))?;
    let bch = rel(decomposed.v(), p.v()).max(rel(decomposed.w(), p.w())).max(rel(decomposed.theta(), p.theta()));

    let hw_spec = LiouvillianSpec::new(cfg.alpha, 0.0).map_err(&err)?;
    let sl_spec = LiouvillianSpec::new(0.0, cfg.beta).map_err(&err)?;
    let sh = (cfg.beta * t).sinh();
    Ok(Residuals {
        oracle,
        normalization: (series.norm_sqr() - 1.0).abs(),
        mehler: (mehler_normalization_check(&p) - 1.0).abs(),
        complexity: (series.complexity() - k).abs() / scale,
        time_form: (schrodinger_complexity_t(spec, t) - k).abs() / scale,
        bch,
        hw: (complexity_closed(&closed_form_params(&hw_spec, t)) - (cfg.alpha * t) * (cfg.alpha * t)).abs(),
        sl2r: (complexity_closed(&closed_form_params(&sl_spec, t)) - sh * sh).abs(),
    })
}

/// Runs every check over the grid of `cfg`.
pub fn verify(cfg: &SweepConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    let spec = spec_of(cfg)?;
    let per_t: Vec<Result<Residuals>> = cfg.grid().par_iter().map(|&t| residuals_at(cfg, &spec, t)).collect();
    let mut r = Residuals::default();
    for x in per_t {
        r = r.max(x?);
    }
    let probes = discrepancy_probes(&spec).map_err(|source| CliError::Numerical {
        alpha: cfg.alpha,
        beta: cfg.beta,
        t: cfg.t_max,
        dim: cfg.dim,
        source,
    })?;
    Ok(VerifyReport {
        config: cfg.clone(),
        checks: vec![
            Check::new("oracle_vs_closed_form", r.oracle, 1e-8),
            Check::new("normalization", r.normalization, 1e-10),
            Check::new("mehler_normalization", r.mehler, 1e-10),
            Check::new("complexity_sum_vs_closed_form", r.complexity, 1e-8),
            Check::new("complexity_time_form", r.time_form, 1e-10),
            Check::new("bch_vs_closed_form", r.bch, 1e-10),
        ],
        limits: vec![Check::new("hw_limit", r.hw, 0.0), Check::new("sl2r_limit", r.sl2r, 0.0)],
        discrepancies: probes
            .into_iter()
            .map(|p| Discrepancy { name: p.name.to_owned(), printed: p.printed, reference: p.reference, deviation: p.deviation() })
            .collect(),
    })
}
