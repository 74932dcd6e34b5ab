use invgauss::bounds::{sample_bound, Bound, BoundParams, BoundReport};
use invgauss::MultiIndex;
use rayon::prelude::*;
use serde_json::json;

use super::case_seed;
use crate::config::BoundsConfig;
use crate::report::{Check, Outcome, Table};
use crate::{LabError, LabResult};

fn params(c: &BoundsConfig, n: usize) -> LabResult<BoundParams> {
    let base = BoundParams::defaults(n, c.m)?;
    let mut k = vec![0usize; n];
    k[0] = c.k;
    let p =
        BoundParams::new(n, c.m, MultiIndex::from(k), c.q, c.eta.unwrap_or(base.eta), c.delta.unwrap_or(base.delta))
            .map_err(|e| LabError::Config(e.to_string()))?;
    p.check_exponent(c.p).map_err(|e| LabError::Config(e.to_string()))?;
    Ok(p)
}

pub(super) fn run(c: &BoundsConfig, seed: u64) -> LabResult<Outcome> {
    let mut selected = Vec::new();
    for id in &c.bounds {
        for b in Bound::parse(id).map_err(|e| LabError::Config(e.to_string()))? {
            if !selected.contains(&b) {
                selected.push(b);
            }
        }
    }
    let mut cases = Vec::new();
    for &n in &c.dims {
        let p = params(c, n)?;
        if selected.contains(&Bound::GlobalPositive) {
            p.check_global_positive().map_err(|e| LabError::Config(e.to_string()))?;
        }
        for &b in &selected {
            cases.push((n, b, p.clone()));
        }
    }
    let reports: Vec<BoundReport> = cases
        .par_iter()
        .enumerate()
        .map(|(i, (_, b, p))| Ok(sample_bound(*b, p, c.samples, case_seed(seed, i as u64))?))
        .collect::<LabResult<_>>()?;

    let header: Vec<&str> = std::iter::once("n").chain(BoundReport::CSV_HEADER.split(',')).collect();
    let mut table = Table::new("bounds.csv", &header);
    let mut checks = Vec::new();
    let mut worst: f64 = 0.0;
    for ((n, _, _), r) in cases.iter().zip(&reports) {
        let mut row = vec![n.to_string()];
        row.extend(r.csv_row().split(',').map(str::to_string));
        table.push(row);
        worst = worst.max(r.growth());
        checks.push(Check::at_most(format!("{} n={n} growth", r.bound_id), r.growth(), c.stability_tolerance));
        checks.push(Check::at_most(format!("{} n={n} violations", r.bound_id), r.violations_at_fitted as f64, 0.0));
    }
    Ok(Outcome { checks, tables: vec![table], summary: json!({ "cases": reports.len(), "max_growth": worst }) })
}
