//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero on any failure.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use invgauss::corpus::{eigenfunctions, random_expansions, super_gaussians, vector_valued, Member};
use invgauss::gfunctions::{g_value, GFunctionSpec};
use invgauss::kernels::{action_grid, composition_grid, dxk_dtm_invgauss, invgauss_heat, invgauss_heat_action};
use invgauss::oracles::{weyl_integral, weyl_sign};
use invgauss::quadrature::{SpaceGrid, TimeGrid};
use invgauss::special::{hermite_tilde, MultiIndex};
use invgauss::spectral::{space_derivative, time_derivative, HermiteExpansion, Semigroup};
use invgauss_lab::{experiments, Experiment, ExperimentConfig};
use rayon::prelude::*;
use statrs::function::gamma::gamma;

type Verdict = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Verdict>);

fn lab(experiment: Experiment, budget: Option<Duration>) -> Verdict {
    let start = Instant::now();
    let outcome = experiments::run(experiment, &ExperimentConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let failed: Vec<String> = outcome
        .failed_checks()
        .iter()
        .map(|c| format!("{} ({:.3e} vs {:.3e})", c.name, c.value, c.threshold))
        .collect();
    if !failed.is_empty() {
        return Err(failed.join("; "));
    }
    if let Some(b) = budget {
        if elapsed > b {
            return Err(format!("took {:.1}s, budget {}s", elapsed.as_secs_f64(), b.as_secs()));
        }
    }
    Ok(format!("{} checks", outcome.checks.len()))
}

fn norm_anchors() -> Verdict {
    let grid = SpaceGrid::inverse_gauss(60, 1, 1.0).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for j in 0..=20usize {
        let k = MultiIndex::from(vec![j]);
        let l2 = grid.lp_norm(|x| hermite_tilde(&k, x).unwrap_or(f64::NAN), 2.0).map_err(|e| e.to_string())?;
        let exact = (std::f64::consts::PI * 2f64.powi(j as i32) * (1..=j).map(|v| v as f64).product::<f64>()).sqrt();
        worst = worst.max((l2 / exact - 1.0).abs());
    }
    if worst <= 1e-10 {
        Ok(format!("max rel error {worst:.2e}"))
    } else {
        Err(format!("max rel error {worst:.2e} > 1e-10"))
    }
}

fn g_closed_form() -> Verdict {
    let tg = TimeGrid::default();
    let xs: [&[f64]; 4] = [&[0.35], &[-1.2], &[2.1], &[0.0]];
    let mut worst: f64 = 0.0;
    for sg in [Semigroup::HeatA, Semigroup::PoissonA] {
        for q in [1.5, 2.0, 3.0] {
            for beta in [0.5, 1.0, 2.0] {
                let spec = GFunctionSpec::scalar(beta, MultiIndex::zeros(1), q, sg).map_err(|e| e.to_string())?;
                let factor = gamma(q * beta).powf(1.0 / q) * q.powf(-beta);
                for k in 0..=8 {
                    let idx = MultiIndex::from(vec![k]);
                    let f = HermiteExpansion::eigenfunction(idx.clone());
                    for x in xs {
                        let h = hermite_tilde(&idx, x).map_err(|e| e.to_string())?.abs();
                        if h == 0.0 {
                            continue;
                        }
                        let g = g_value(&spec, &f, x, &tg).map_err(|e| e.to_string())?;
                        worst = worst.max((g / (h * factor) - 1.0).abs());
                    }
                }
            }
        }
    }
    if worst <= 1e-8 {
        Ok(format!("max rel error {worst:.2e}"))
    } else {
        Err(format!("max rel error {worst:.2e} > 1e-8"))
    }
}

fn corpus(n: usize) -> Vec<Member> {
    let mut all = eigenfunctions(n, if n == 1 { 12 } else { 6 });
    all.extend(random_expansions(n, 6, 12, 4, 17));
    all.extend(super_gaussians(n, if n == 1 { 24 } else { 12 }).expect("valid widths"));
    all.extend(vector_valued(n, 2, 2, 5).expect("valid corpus"));
    all
}

fn probe_points(n: usize) -> Vec<Vec<f64>> {
    if n == 1 {
        vec![vec![-1.7], vec![0.0], vec![0.45], vec![2.6]]
    } else {
        vec![vec![0.3, -0.8], vec![-1.9, 1.1]]
    }
}

/// Spectral value and termwise absolute sum at `x`.
fn spectral_value(d: &HermiteExpansion, x: &[f64], j: usize) -> (f64, f64) {
    d.terms().fold((0.0, 0.0), |(v, s), (l, c)| {
        let term = c[j] * hermite_tilde(l, x).unwrap_or(f64::NAN);
        (v + term, s + term.abs())
    })
}

/// Worst `|quad - spectral| / scale` for one member, where the scale is the
/// larger of the value, the termwise magnitude over the probe points, and
/// `1e-6 int |d K f| dy`.
fn member_error(member: &Member, n: usize) -> f64 {
    let orders = [MultiIndex::zeros(n), MultiIndex::unit(n, 0), MultiIndex::unit(n, n - 1).plus_unit(0)];
    let mut worst: f64 = 0.0;
    for j in 0..member.f.vector_dim() {
        let fj = member.f.component(j).expect("component in range");
        let f = |y: &[f64]| fj.eval_scalar(y).unwrap_or(f64::NAN);
        for &t in &[0.05, 0.6, 2.5] {
            for m in 0..=2 {
                for k in &orders {
                    let d = time_derivative(&member.f, t, m, Semigroup::HeatA)
                        .and_then(|e| space_derivative(&e, k))
                        .expect("spectral derivative");
                    let scale = probe_points(n).iter().map(|x| spectral_value(&d, x, j).1).fold(0.0, f64::max);
                    for x in probe_points(n) {
                        let quad = invgauss_heat_action(f, &x, t, m, k, 40).unwrap_or(f64::NAN);
                        let exact = spectral_value(&d, &x, j).0;
                        let absolute = action_grid(&x, t, 40)
                            .and_then(|g| {
                                g.integrate(|y| (dxk_dtm_invgauss(&x, y, t, m, k).unwrap_or(f64::NAN) * f(y)).abs())
                            })
                            .unwrap_or(f64::NAN);
                        let denom = exact.abs().max(scale).max(1e-6 * absolute);
                        let err = (quad - exact).abs() / denom;
                        worst = if err.is_nan() { f64::INFINITY } else { worst.max(err) };
                    }
                }
            }
        }
    }
    worst
}

fn semigroup_consistency() -> Verdict {
    let mut action: f64 = 0.0;
    let mut count = 0;
    for n in 1..=2 {
        let members = corpus(n);
        count += members.len();
        action = action.max(members.par_iter().map(|m| member_error(m, n)).reduce(|| 0.0, f64::max));
    }
    let cases: [(Vec<f64>, Vec<f64>, f64, f64); 5] = [
        (vec![0.2], vec![-0.5], 0.3, 0.7),
        (vec![1.5], vec![0.4], 0.05, 1.2),
        (vec![-2.0], vec![1.0], 2.0, 0.01),
        (vec![0.3, -0.4], vec![1.1, 0.2], 0.4, 0.9),
        (vec![-1.2, 0.8], vec![0.0, -0.6], 1.5, 0.2),
    ];
    let mut composition: f64 = 0.0;
    for (x, z, t, s) in cases {
        let grid = composition_grid(&x, &z, t, s, 30).map_err(|e| e.to_string())?;
        let lhs = grid
            .integrate(|y| invgauss_heat(&x, y, t).unwrap_or(f64::NAN) * invgauss_heat(y, &z, s).unwrap_or(f64::NAN))
            .map_err(|e| e.to_string())?;
        let rhs = invgauss_heat(&x, &z, t + s).map_err(|e| e.to_string())?;
        composition = composition.max((lhs / rhs - 1.0).abs());
    }
    let msg = format!("{count} members, action rel error {action:.2e}, composition rel error {composition:.2e}");
    if action <= 1e-7 && composition <= 1e-6 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn weyl() -> Verdict {
    let mut worst: f64 = 0.0;
    for lam in [0.1, 0.5, 1.0, 2.0f64.sqrt(), 3.0, 5.5, 8.0, 10.0] {
        for beta in [0.25, 0.5, 0.75, 1.5] {
            for t in [0.05, 0.5, 2.0] {
                let rule = lam.powf(beta) * (-lam * t).exp();
                let oracle =
                    weyl_sign(beta) * weyl_integral(&|u| (-lam * u).exp(), t, beta).map_err(|e| e.to_string())?;
                worst = worst.max((oracle / rule - 1.0).abs());
            }
        }
    }
    if worst <= 1e-5 {
        Ok(format!("max rel error {worst:.2e}"))
    } else {
        Err(format!("max rel error {worst:.2e} > 1e-5"))
    }
}

const SMALL_CONFIGS: [(&str, &str); 5] = [
    ("teuwen-verify", "[teuwen]\nfd_points = 20\n"),
    ("gfun-constants", "[gfun]\nps = [2.0]\nrandom_count = 3\neigen_degree = 4\n"),
    ("weak11-growth", "[weak]\nks = [3]\netas = [3.0, 4.0]\naxial_points = 24\nbump_points = 16\nt_points = 32\n"),
    ("bound-sample", "[bounds]\nbounds = [\"b\", \"A2\"]\ndims = [1]\nsamples = 40\nstability_tolerance = 10.0\n"),
    (
        "spectral-identities",
        "[spectral]\ndims = [1, 2]\nmax_degree = 6\nrandom_count = 2\nt_points = 256\nquadrature_tolerance = 1e-3\n",
    ),
];

fn csv_bodies(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        if path.extension().is_some_and(|e| e == "csv") {
            let name = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
            out.push((name, std::fs::read(&path).map_err(|e| e.to_string())?));
        }
    }
    out.sort();
    Ok(out)
}

fn determinism() -> Verdict {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = 0;
    for (verb, toml) in SMALL_CONFIGS {
        let config = tmp.path().join(format!("{verb}.toml"));
        std::fs::write(&config, format!("seed = 7\n{toml}")).map_err(|e| e.to_string())?;
        let mut runs = Vec::new();
        for rep in 0..2 {
            let out = tmp.path().join(format!("{verb}-{rep}"));
            let status = Command::new(env!("CARGO_BIN_EXE_invgauss-lab"))
                .arg(verb)
                .arg("--config")
                .arg(&config)
                .arg("--out")
                .arg(&out)
                .output()
                .map_err(|e| e.to_string())?;
            if !status.status.success() {
                return Err(format!(
                    "{verb} exited with {}: {}",
                    status.status,
                    String::from_utf8_lossy(&status.stderr)
                ));
            }
            runs.push(csv_bodies(&out)?);
        }
        if runs[0].is_empty() {
            return Err(format!("{verb} wrote no tables"));
        }
        if runs[0] != runs[1] {
            return Err(format!("{verb}: tables differ between runs"));
        }
        files += runs[0].len();
    }
    Ok(format!("{files} tables identical across two runs"))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (
            "1 corrected time-derivative formula",
            Box::new(|| lab(Experiment::TeuwenVerify, Some(Duration::from_secs(60)))),
        ),
        ("2 spectral identities", Box::new(|| lab(Experiment::SpectralIdentities, Some(Duration::from_secs(30))))),
        ("3 Hermite norm anchors", Box::new(norm_anchors)),
        ("4 g-function closed form", Box::new(g_closed_form)),
        ("5 kernel/spectral consistency and composition", Box::new(semigroup_consistency)),
        ("6 Weyl oracle", Box::new(weyl)),
        ("7 bound sampling stability", Box::new(|| lab(Experiment::BoundSample, Some(Duration::from_secs(300))))),
        ("8 weak-type trend", Box::new(|| lab(Experiment::Weak11Growth, None))),
        ("9 determinism", Box::new(determinism)),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS criterion {name} [{secs:.1}s]: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {name} [{secs:.1}s]: {detail}");
            }
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
