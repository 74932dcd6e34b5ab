use invgauss::kernels::{dt_m_ou, mehler_ou, SignPattern};
use invgauss::oracles::{compare_with_symbolic, fd_time_derivative, FDScheme, SYMBOLIC_MAX_DIM, SYMBOLIC_MAX_ORDER};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::case_seed;
use crate::config::TeuwenConfig;
use crate::report::{fmt_f64, Check, Outcome, Table};
use crate::LabResult;

struct Row {
    m: usize,
    n: usize,
    worst_rel: f64,
    worst_abs: f64,
    failures: usize,
    /// `(oracle terms, corrected mismatches, uncorrected mismatches)` when inside the symbolic range.
    symbolic: Option<(usize, usize, usize)>,
}

fn case(c: &TeuwenConfig, seed: u64, m: usize, n: usize) -> LabResult<Row> {
    let mut rng = ChaCha8Rng::seed_from_u64(case_seed(seed, (m * 16 + n) as u64));
    let (lo, hi) = (c.t_range[0].ln(), c.t_range[1].ln());
    let mut worst_rel: f64 = 0.0;
    let mut worst_abs: f64 = 0.0;
    let mut failures = 0;
    for _ in 0..c.fd_points {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-c.x_range..c.x_range)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-c.x_range..c.x_range)).collect();
        let t = rng.gen_range(lo..hi).exp();
        let exact = dt_m_ou(&x, &y, t, m)?;
        // one Richardson step per order on top of the previous exact derivative
        let f = |s: f64| if m == 1 { mehler_ou(&x, &y, s) } else { dt_m_ou(&x, &y, s, m - 1) }.unwrap_or(f64::NAN);
        let fd = fd_time_derivative(&f, t, 1, &FDScheme::for_time(t, 1))?;
        let err = (exact - fd.value).abs();
        if !(err <= (c.fd_tolerance * exact.abs()).max(c.fd_floor)) {
            failures += 1;
        }
        if exact.abs() * c.fd_tolerance >= c.fd_floor {
            worst_rel = worst_rel.max(err / exact.abs());
        } else {
            worst_abs = worst_abs.max(err);
        }
    }
    let symbolic = if m <= SYMBOLIC_MAX_ORDER && n <= SYMBOLIC_MAX_DIM {
        let good = compare_with_symbolic(m, n, SignPattern::Corrected)?;
        let bad = compare_with_symbolic(m, n, SignPattern::Uncorrected)?;
        Some((good.oracle_terms, good.mismatched_terms, bad.mismatched_terms))
    } else {
        None
    };
    Ok(Row { m, n, worst_rel, worst_abs, failures, symbolic })
}

pub(super) fn run(c: &TeuwenConfig, seed: u64) -> LabResult<Outcome> {
    let cases: Vec<(usize, usize)> = c.orders.iter().flat_map(|&m| c.dims.iter().map(move |&n| (m, n))).collect();
    let rows: Vec<Row> = cases.par_iter().map(|&(m, n)| case(c, seed, m, n)).collect::<LabResult<_>>()?;

    let mut table = Table::new(
        "teuwen.csv",
        &[
            "m",
            "n",
            "fd_points",
            "max_rel_error",
            "max_abs_error_near_zero",
            "fd_failures",
            "symbolic_terms",
            "symbolic_mismatches",
            "uncorrected_mismatches",
        ],
    );
    let mut checks = Vec::new();
    for r in &rows {
        let sym = |f: fn(&(usize, usize, usize)) -> usize| {
            r.symbolic.as_ref().map(f).map(|v| v.to_string()).unwrap_or_else(|| "na".into())
        };
        table.push(vec![
            r.m.to_string(),
            r.n.to_string(),
            c.fd_points.to_string(),
            fmt_f64(r.worst_rel),
            fmt_f64(r.worst_abs),
            r.failures.to_string(),
            sym(|s| s.0),
            sym(|s| s.1),
            sym(|s| s.2),
        ]);
        let tag = format!("m={} n={}", r.m, r.n);
        checks.push(Check::at_most(format!("fd agreement {tag}"), r.failures as f64, 0.0));
        if let Some((_, good, bad)) = r.symbolic {
            checks.push(Check::at_most(format!("symbolic equality {tag}"), good as f64, 0.0));
            if r.m > 0 {
                checks.push(Check::at_least(format!("uncorrected pattern rejected {tag}"), bad as f64, 1.0));
            }
        }
    }
    let worst = rows.iter().map(|r| r.worst_rel).fold(0.0, f64::max);
    Ok(Outcome { checks, tables: vec![table], summary: json!({ "max_rel_error": worst, "cases": rows.len() }) })
}
