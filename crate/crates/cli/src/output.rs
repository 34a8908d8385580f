//! CSV and JSON writers.
//!
//! CSV has one line per time. Columns are `t` followed by each observable in
//! the order the rows list them; when a sweep mixes methods the column is
//! named `<method>.<observable>`.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::SweepConfig;
use crate::error::{CliError, Result};
use crate::sweep::ResultRow;

/// Decimal rendering with 12 significant digits.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = mantissa.strip_prefix('-').map_or(("", mantissa), |m| ("-", m));
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let body = if exp >= 11 {
        format!("{digits}{}", "0".repeat((exp - 11) as usize))
    } else if exp >= 0 {
        let split = (exp + 1) as usize;
        format!("{}.{}", &digits[..split], &digits[split..])
    } else {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    };
    format!("{sign}{body}")
}

pub fn write_csv<W: Write>(rows: &[ResultRow], mut out: W) -> Result<()> {
    let mixed = rows.iter().any(|r| r.method != rows[0].method);
    let column = |r: &ResultRow, name: &str| {
        if mixed {
            format!("{}.{name}", r.method.as_str())
        } else {
            name.to_owned()
        }
    };
    let mut header: Vec<String> = Vec::new();
    let mut lines: Vec<(f64, Vec<Option<f64>>)> = Vec::new();
    for r in rows {
        if lines.last().is_none_or(|(t, _)| *t != r.t) {
            lines.push((r.t, vec![None; header.len()]));
        }
        for (name, v) in &r.values {
            let col = column(r, name);
            let idx = match header.iter().position(|h| *h == col) {
                Some(i) => i,
                None => {
                    header.push(col);
                    header.len() - 1
                }
            };
            let cells = &mut lines.last_mut().expect("line").1;
            if cells.len() <= idx {
                cells.resize(idx + 1, None);
            }
            cells[idx] = Some(*v);
        }
    }
    writeln!(out, "t,{}", header.join(","))?;
    for (t, cells) in lines {
        let mut line = format_sig12(t);
        for i in 0..header.len() {
            line.push(',');
            if let Some(v) = cells.get(i).copied().flatten() {
                line.push_str(&format_sig12(v));
            }
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn write_json<W: Write>(cfg: &SweepConfig, rows: &[ResultRow], out: W) -> Result<()> {
    #[derive(Serialize)]
    struct Doc<'a> {
        config: &'a SweepConfig,
        rows: &'a [ResultRow],
    }
    serde_json::to_writer_pretty(out, &Doc { config: cfg, rows })?;
    Ok(())
}

/// Amplitudes as an array of `[re, im]` pairs.
pub fn amplitudes_to_json(amplitudes: &[Complex64]) -> Value {
    Value::Array(amplitudes.iter().map(|z| json!([z.re, z.im])).collect())
}

pub fn amplitudes_from_json(v: &Value) -> Result<Vec<Complex64>> {
    let bad = || CliError::Config("expected an array of [re, im] pairs".into());
    v.as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|pair| match pair.as_array().map(|p| p.as_slice()) {
            Some([re, im]) => Ok(Complex64::new(re.as_f64().ok_or_else(bad)?, im.as_f64().ok_or_else(bad)?)),
            _ => Err(bad()),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::Method;
    use proptest::prelude::*;

    #[test]
    fn sig12_examples() {
        assert_eq!(format_sig12(0.0), "0");
        assert_eq!(format_sig12(0.25), "0.250000000000");
        assert_eq!(format_sig12(-1.5), "-1.50000000000");
        assert_eq!(format_sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig12(12345.678), "12345.6780000");
        assert_eq!(format_sig12(2.5e-5), "0.0000250000000000");
        assert_eq!(format_sig12(1.0e13), "10000000000000");
    }

    #[test]
    fn csv_pivots_methods() {
        let rows = vec![
            ResultRow { t: 0.0, values: vec![("K".into(), 0.0)], method: Method::LanczosChain },
            ResultRow { t: 0.0, values: vec![("K".into(), 0.0)], method: Method::Oracle },
            ResultRow { t: 0.5, values: vec![("K".into(), 0.25)], method: Method::LanczosChain },
            ResultRow { t: 0.5, values: vec![("K".into(), 0.25)], method: Method::Oracle },
        ];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "t,lanczos_chain.K,oracle.K\n0,0,0\n0.500000000000,0.250000000000,0.250000000000\n");
    }

    #[test]
    fn json_shape() {
        let cfg = SweepConfig::default();
        let rows = vec![ResultRow { t: 1.0, values: vec![("b".into(), 2.0), ("a".into(), 1.0)], method: Method::ClosedForm }];
        let mut buf = Vec::new();
        write_json(&cfg, &rows, &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["rows"][0]["method"], "closed_form");
        assert_eq!(v["config"]["mode"], "complexity");
        let keys: Vec<&String> = v["rows"][0]["values"].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["b", "a"]);
    }

    proptest! {
        #[test]
        fn sig12_round_trips(x in -1e6..1e6f64) {
            let back: f64 = format_sig12(x).parse().unwrap();
            prop_assert!((back - x).abs() <= 1e-11 * x.abs().max(1e-300));
        }

        #[test]
        fn amplitudes_round_trip(parts in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 0..20)) {
            let amps: Vec<Complex64> = parts.iter().map(|&(r, i)| Complex64::new(r, i)).collect();
            prop_assert_eq!(amplitudes_from_json(&amplitudes_to_json(&amps)).unwrap(), amps);
        }
    }
}
