use invgauss::weak::{growth_sweep, non_increasing_beyond, strictly_increasing, GrowthPoint, WeakTypeSetup};
use invgauss::Error;
use rayon::prelude::*;
use serde_json::json;

use crate::config::WeakConfig;
use crate::report::{fmt_f64, Check, Outcome, Table};
use crate::LabResult;

/// `ln 2`: allowed spread of the proxy beyond `bounded_from` for `|k| = 2`.
const FLAT_BAND: f64 = std::f64::consts::LN_2;

pub(super) fn run(c: &WeakConfig) -> LabResult<Outcome> {
    if c.n != 1 {
        return Err(Error::Capability(format!("the weak-type probe is implemented for n = 1, got n = {}", c.n)).into());
    }
    let sweeps: Vec<(usize, Vec<GrowthPoint>)> =
        c.ks.par_iter()
            .map(|&k| {
                let setup = WeakTypeSetup {
                    m: c.m,
                    k,
                    q: c.q,
                    axial_points: c.axial_points,
                    bump_points: c.bump_points,
                    t_min: c.t_min,
                    t_max: c.t_max,
                    t_points: c.t_points,
                };
                Ok((k, growth_sweep(&setup, &c.etas)?))
            })
            .collect::<LabResult<_>>()?;

    let mut table = Table::new("weak11.csv", &["k", "eta", "ln_proxy", "argmax_x", "ln_measure_j"]);
    let mut checks = Vec::new();
    let mut trends = serde_json::Map::new();
    for (k, rows) in &sweeps {
        for r in rows {
            table.push(vec![
                k.to_string(),
                fmt_f64(r.eta),
                fmt_f64(r.ln_proxy),
                fmt_f64(r.argmax_x),
                fmt_f64(r.ln_measure_j),
            ]);
        }
        let tail: Vec<f64> = rows.iter().filter(|r| r.eta >= c.bounded_from).map(|r| r.ln_proxy).collect();
        let spread =
            tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - tail.iter().cloned().fold(f64::INFINITY, f64::min);
        let trend = match k {
            0 | 1 => {
                let ok = non_increasing_beyond(rows, c.bounded_from);
                checks.push(Check::flag(format!("k={k} non-increasing beyond eta={}", c.bounded_from), ok));
                "non_increasing"
            }
            2 => {
                checks.push(Check::at_most(format!("k=2 bounded beyond eta={}", c.bounded_from), spread, FLAT_BAND));
                "bounded"
            }
            _ => {
                checks.push(Check::flag(format!("k={k} strictly increasing"), strictly_increasing(rows)));
                "increasing"
            }
        };
        trends.insert(
            k.to_string(),
            json!({ "expected": trend, "tail_spread": spread, "first": rows[0].ln_proxy, "last": rows[rows.len() - 1].ln_proxy }),
        );
    }
    Ok(Outcome { checks, tables: vec![table], summary: serde_json::Value::Object(trends) })
}
