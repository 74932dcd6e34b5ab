use invgauss::corpus::{eigenfunctions, random_expansions, super_gaussians, vector_valued, Member};
use invgauss::gfunctions::{lp_grid, ratio_probe, GFunctionSpec, NormSpec, RatioReport, Region};
use invgauss::quadrature::TimeGrid;
use invgauss::spectral::Semigroup;
use invgauss::MultiIndex;
use rayon::prelude::*;
use serde_json::json;
use statrs::function::gamma::gamma;

use super::parse_semigroup;
use crate::config::GfunConfig;
use crate::report::{fmt_f64, Check, Outcome, Table};
use crate::LabResult;

fn corpus(c: &GfunConfig, seed: u64) -> LabResult<Vec<Member>> {
    let mut out = Vec::new();
    for name in &c.corpora {
        match name.as_str() {
            "eigen" => out.extend(eigenfunctions(c.n, c.eigen_degree)),
            "random" => out.extend(random_expansions(c.n, c.random_count, c.random_degree, 4, seed)),
            "super_gaussian" => out.extend(super_gaussians(c.n, c.random_degree)?),
            "vector" => out.extend(vector_valued(c.n, c.norm_m, c.random_count, seed)?),
            _ => unreachable!("validated"),
        }
    }
    Ok(out)
}

struct Case {
    semigroup: Semigroup,
    semigroup_id: String,
    q: f64,
    beta: f64,
    p: f64,
}

/// The largest `g/f` and `f/g` over the first `len` rows.
fn prefix_constants(r: &RatioReport, len: usize) -> (f64, f64) {
    r.rows
        .iter()
        .take(len)
        .fold((0.0, 0.0), |(u, l), row| (f64::max(u, row.g_norm / row.f_norm), f64::max(l, row.f_norm / row.g_norm)))
}

pub(super) fn run(c: &GfunConfig, seed: u64) -> LabResult<Outcome> {
    let members = corpus(c, seed)?;
    let mut cases = Vec::new();
    for s in &c.semigroups {
        for &q in &c.qs {
            for &beta in &c.betas {
                for &p in &c.ps {
                    cases.push(Case { semigroup: parse_semigroup(s)?, semigroup_id: s.clone(), q, beta, p });
                }
            }
        }
    }
    let tgrid = TimeGrid::new(c.t_min, c.t_max, c.t_points)?;
    let mut k = vec![0usize; c.n];
    k[0] = c.k;
    let k = MultiIndex::from(k);
    let reports: Vec<RatioReport> = cases
        .par_iter()
        .map(|cs| {
            let spec = GFunctionSpec {
                beta: cs.beta,
                k: k.clone(),
                q: cs.q,
                semigroup: cs.semigroup,
                norm: NormSpec::new(c.norm_r, c.norm_m)?,
                region: Region::Full,
            };
            let sgrid = lp_grid(c.n, cs.p, c.space_points)?;
            Ok(ratio_probe(&spec, &members, cs.p, &sgrid, &tgrid)?)
        })
        .collect::<LabResult<_>>()?;

    let head = ["semigroup", "q", "beta", "p", "norm_r", "norm_m"];
    let mut constants = Table::new(
        "gfun_constants.csv",
        &[&head[..], &["corpus_size", "direction", "fitted_constant", "half_corpus_constant", "worst_member"]].concat(),
    );
    let mut per_member =
        Table::new("gfun_members.csv", &[&head[..], &["member", "g_norm", "f_norm", "ratio"]].concat());
    let mut checks = Vec::new();
    let mut closed_form_worst: f64 = 0.0;
    for (cs, r) in cases.iter().zip(&reports) {
        let prefix = vec![
            cs.semigroup_id.clone(),
            fmt_f64(cs.q),
            fmt_f64(cs.beta),
            fmt_f64(cs.p),
            fmt_f64(c.norm_r),
            c.norm_m.to_string(),
        ];
        let (half_up, half_lo) = prefix_constants(r, r.rows.len().div_ceil(2));
        for (dir, val, half, worst) in
            [("upper", r.upper, half_up, &r.upper_member), ("lower", r.lower, half_lo, &r.lower_member)]
        {
            let mut row = prefix.clone();
            row.extend([r.rows.len().to_string(), dir.into(), fmt_f64(val), fmt_f64(half), worst.clone()]);
            constants.push(row);
        }
        for row in &r.rows {
            let mut out = prefix.clone();
            out.extend([row.id.clone(), fmt_f64(row.g_norm), fmt_f64(row.f_norm), fmt_f64(row.g_norm / row.f_norm)]);
            per_member.push(out);
        }
        let tag = format!("{} q={} beta={} p={}", cs.semigroup_id, cs.q, cs.beta, cs.p);
        checks.push(Check::flag(format!("finite constants {tag}"), r.upper.is_finite() && r.lower.is_finite()));
        let closed_form =
            matches!(cs.semigroup, Semigroup::HeatA | Semigroup::PoissonA) && k.is_zero() && c.norm_m == 1;
        if closed_form {
            let factor = gamma(cs.q * cs.beta).powf(1.0 / cs.q) * cs.q.powf(-cs.beta);
            let worst = r
                .rows
                .iter()
                .filter(|row| row.id.starts_with("eig"))
                .map(|row| (row.g_norm / row.f_norm / factor - 1.0).abs())
                .fold(None, |a: Option<f64>, e| Some(a.map_or(e, |a| a.max(e))));
            if let Some(w) = worst {
                closed_form_worst = closed_form_worst.max(w);
                checks.push(Check::at_most(format!("eigenfunction closed form {tag}"), w, c.closed_form_tolerance));
            }
        }
    }
    Ok(Outcome {
        checks,
        tables: vec![constants, per_member],
        summary: json!({
            "cases": cases.len(),
            "corpus_size": members.len(),
            "closed_form_max_rel_error": closed_form_worst,
        }),
    })
}
