use invgauss::corpus::random_expansions;
use invgauss::kernels::Operator;
use invgauss::quadrature::{SpaceGrid, TimeGrid};
use invgauss::special::multiindices_up_to_degree;
use invgauss::spectral::{
    generator, heat_square_function_l2, inverse_sqrt, poisson_action, polarization_rhs, riesz_transform,
    space_derivative, time_derivative, HermiteExpansion, Semigroup,
};
use invgauss::MultiIndex;
use rayon::prelude::*;
use serde_json::json;

use super::case_seed;
use crate::config::SpectralConfig;
use crate::report::{fmt_f64, Check, Outcome, Table};
use crate::LabResult;

struct Row {
    identity: &'static str,
    n: usize,
    cases: usize,
    max_error: f64,
    tolerance: f64,
}

fn algebraic(c: &SpectralConfig, n: usize, seed: u64) -> LabResult<Vec<Row>> {
    let mut fs: Vec<HermiteExpansion> =
        multiindices_up_to_degree(n, c.max_degree).into_iter().map(HermiteExpansion::eigenfunction).collect();
    fs.extend(random_expansions(n, c.random_count, c.max_degree, 6, seed).into_iter().map(|m| m.f));
    let (mut eig, mut riesz, mut inter) = (0.0f64, 0.0f64, 0.0f64);
    let (mut n_eig, mut n_riesz, mut n_inter) = (0, 0, 0);
    for f in &fs {
        let expected = f.map_coefficients(|k| (n + k.degree()) as f64);
        let scale = (n + f.max_degree()) as f64;
        eig = eig.max(generator(f)?.max_abs_difference(&expected) / scale);
        n_eig += 1;
        for i in 0..n {
            let unit = MultiIndex::unit(n, i);
            let rf = riesz_transform(f, i)?;
            riesz = riesz.max(rf.max_abs_difference(&space_derivative(&inverse_sqrt(f), &unit)?));
            n_riesz += 1;
            for &t in &c.times {
                let lhs = space_derivative(&poisson_action(f, t, Operator::A)?.expansion, &unit)?;
                let rhs = time_derivative(&rf, t, 1, Semigroup::PoissonAMinusI)?.scale(-1.0);
                inter = inter.max(lhs.max_abs_difference(&rhs));
                n_inter += 1;
            }
        }
    }
    let hs = random_expansions(n, c.random_count, c.max_degree, 6, seed ^ 1);
    let mut pol = 0.0f64;
    for (f, h) in fs.iter().rev().zip(&hs) {
        let lhs = f.inner_product(&h.f)?;
        let rhs = polarization_rhs(f, &h.f, Operator::A)?;
        pol = pol.max((lhs - rhs).abs() / (f.l2_norm() * h.f.l2_norm()));
    }
    let tol = c.algebraic_tolerance;
    Ok(vec![
        Row { identity: "eigenrelation", n, cases: n_eig, max_error: eig, tolerance: tol },
        Row { identity: "riesz_rule", n, cases: n_riesz, max_error: riesz, tolerance: tol },
        Row { identity: "intertwining", n, cases: n_inter, max_error: inter, tolerance: tol },
        Row { identity: "polarization_algebraic", n, cases: hs.len(), max_error: pol, tolerance: 10.0 * tol },
    ])
}

/// `int int F G d gamma_{-1} dt/t` with `F`, `G` built at each time node.
fn pairing(grid: &SpaceGrid, tgrid: &TimeGrid, at: impl Fn(f64) -> (HermiteExpansion, HermiteExpansion)) -> f64 {
    tgrid.integrate(|t| {
        let (a, b) = at(t);
        grid.integrate(|x| a.eval_scalar(x).unwrap_or(f64::NAN) * b.eval_scalar(x).unwrap_or(f64::NAN))
            .unwrap_or(f64::NAN)
    })
}

fn quadrature(c: &SpectralConfig, seed: u64) -> LabResult<Vec<Row>> {
    let grid = SpaceGrid::inverse_gauss(c.space_points, 1, 1.0)?;
    let tgrid = TimeGrid::new(1e-12, 80.0, c.t_points)?;
    let fs = random_expansions(1, c.random_count, c.max_degree, 5, seed ^ 2);
    let hs = random_expansions(1, c.random_count, c.max_degree, 5, seed ^ 3);
    let mut pol = 0.0f64;
    for (f, h) in fs.iter().zip(&hs) {
        let direct =
            grid.integrate(|x| f.f.eval_scalar(x).unwrap_or(f64::NAN) * h.f.eval_scalar(x).unwrap_or(f64::NAN))?;
        let time_side = 4.0
            * pairing(&grid, &tgrid, |t| {
                let d = |g: &HermiteExpansion| {
                    time_derivative(g, t, 1, Semigroup::PoissonA)
                        .map(|e| e.scale(t))
                        .unwrap_or_else(|_| g.scale(f64::NAN))
                };
                (d(&f.f), d(&h.f))
            });
        pol = pol.max((direct - time_side).abs() / (f.f.l2_norm() * h.f.l2_norm()));
    }
    let mut planch = 0.0f64;
    for f in &fs {
        for (m, k) in [(1usize, 0usize), (0, 1), (1, 1), (2, 0)] {
            let k = MultiIndex::from(vec![k]);
            let w = m as f64 + 0.5 * k.degree() as f64;
            let numeric = pairing(&grid, &tgrid, |t| {
                let d = time_derivative(&f.f, t, m, Semigroup::HeatA)
                    .and_then(|e| space_derivative(&e, &k))
                    .map(|e| e.scale(t.powf(w)))
                    .unwrap_or_else(|_| f.f.scale(f64::NAN));
                (d.clone(), d)
            });
            let exact = heat_square_function_l2(&f.f, m, &k)?;
            planch = planch.max((numeric / exact - 1.0).abs());
        }
    }
    let tol = c.quadrature_tolerance;
    Ok(vec![
        Row { identity: "polarization_quadrature", n: 1, cases: fs.len(), max_error: pol, tolerance: tol },
        Row { identity: "plancherel_quadrature", n: 1, cases: 4 * fs.len(), max_error: planch, tolerance: tol },
    ])
}

pub(super) fn run(c: &SpectralConfig, seed: u64) -> LabResult<Outcome> {
    let mut jobs: Vec<Option<usize>> = c.dims.iter().map(|&n| Some(n)).collect();
    if c.dims.contains(&1) {
        jobs.push(None);
    }
    let parts: Vec<Vec<Row>> = jobs
        .par_iter()
        .map(|job| match job {
            Some(n) => algebraic(c, *n, case_seed(seed, *n as u64)),
            None => quadrature(c, case_seed(seed, 0)),
        })
        .collect::<LabResult<_>>()?;
    let mut table =
        Table::new("spectral_identities.csv", &["identity", "n", "cases", "max_error", "tolerance", "passed"]);
    let mut checks = Vec::new();
    let mut summary = serde_json::Map::new();
    for r in parts.iter().flatten() {
        let check = Check::at_most(format!("{} n={}", r.identity, r.n), r.max_error, r.tolerance);
        table.push(vec![
            r.identity.into(),
            r.n.to_string(),
            r.cases.to_string(),
            fmt_f64(r.max_error),
            fmt_f64(r.tolerance),
            check.passed.to_string(),
        ]);
        summary.insert(format!("{}_n{}", r.identity, r.n), json!(r.max_error));
        checks.push(check);
    }
    Ok(Outcome { checks, tables: vec![table], summary: serde_json::Value::Object(summary) })
}
