//! Data series behind the standard plots.

use std::io::Write;

use krylov_core::algebra::LiouvillianSpec;
use krylov_core::bch::closed_form_params;
use krylov_core::coherent::{autocorrelator_t, phi_series, schrodinger_complexity_t, sl2r_profile, SL2RWeight, DEFAULT_TOL};

use crate::error::{CliError, Result};
use crate::output::format_sig12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// `p_k` at `alpha = 0, beta = 1, t = 1` beside the SL(2,R) weight-1/4 profile.
    Distribution,
    /// Complexity for a weak and a strong squeezing coupling.
    Growth,
    /// Return probabilities for pure displacement, pure squeezing and both.
    Autocorrelators,
}

impl std::str::FromStr for Figure {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Figure::Distribution),
            "fig2" => Ok(Figure::Growth),
            "fig3" => Ok(Figure::Autocorrelators),
            other => Err(CliError::Config(format!("unknown figure `{other}` (fig1, fig2, fig3)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_sig12(x)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

fn spec(alpha: f64, beta: f64) -> LiouvillianSpec {
    LiouvillianSpec::new(alpha, beta).expect("finite couplings")
}

fn core(e: krylov_core::Error, alpha: f64, beta: f64, t: f64) -> CliError {
    CliError::Numerical { alpha, beta, t, dim: 0, source: e }
}

fn grid(t0: f64, t1: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| t0 + (t1 - t0) * i as f64 / (n - 1) as f64)
}

pub fn figure_data(fig: Figure) -> Result<Table> {
    match fig {
        Figure::Distribution => {
            let p = closed_form_params(&spec(0.0, 1.0), 1.0);
            let ours = phi_series(&p, DEFAULT_TOL).map_err(|e| core(e, 0.0, 1.0, 1.0))?.probabilities();
            let (sl, _) = sl2r_profile(SL2RWeight::OSCILLATOR, 1.0, 1.0).map_err(|e| core(e, 0.0, 1.0, 1.0))?;
            let sl = sl.probabilities();
            let rows = (0..=40)
                .map(|k| {
                    let reference = if k % 2 == 0 { sl.get(k / 2).copied().unwrap_or(0.0) } else { 0.0 };
                    vec![k as f64, ours.get(k).copied().unwrap_or(0.0), reference]
                })
                .collect();
            Ok(Table { name: "fig1", header: vec!["k", "schrodinger", "sl2r"], rows })
        }
        Figure::Growth => {
            let (red, black) = (spec(0.01, 1.0), spec(1.0, 0.01));
            let rows = grid(0.0, 5.0, 101)
                .map(|t| vec![t, schrodinger_complexity_t(&red, t), schrodinger_complexity_t(&black, t)])
                .collect();
            Ok(Table { name: "fig2", header: vec!["t", "alpha0.01_beta1", "alpha1_beta0.01"], rows })
        }
        Figure::Autocorrelators => {
            let specs = [spec(1.0, 0.0), spec(0.0, 1.0), spec(1.0, 1.0)];
            let rows = grid(0.0, 3.0, 61)
                .map(|t| {
                    let mut row = vec![t];
                    row.extend(specs.iter().map(|s| autocorrelator_t(s, t)));
                    row
                })
                .collect();
            Ok(Table { name: "fig3", header: vec!["t", "alpha1_beta0", "alpha0_beta1", "alpha1_beta1"], rows })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_names() {
        assert_eq!("fig2".parse::<Figure>().unwrap(), Figure::Growth);
        assert!("fig9".parse::<Figure>().is_err());
    }

    #[test]
    fn fig1_matches_reference() {
        let t = figure_data(Figure::Distribution).unwrap();
        let (ours, sl) = (t.column("schrodinger").unwrap(), t.column("sl2r").unwrap());
        for k in 0..ours.len() {
            assert!((ours[k] - sl[k]).abs() < 1e-10, "k={k}");
            if k % 2 == 1 {
                assert!(ours[k] < 1e-12);
            }
        }
    }

    #[test]
    fn fig3_starts_at_one() {
        let t = figure_data(Figure::Autocorrelators).unwrap();
        assert_eq!(t.rows[0][1..], [1.0, 1.0, 1.0]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 62);
    }
}
