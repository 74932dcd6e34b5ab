use invgauss::corpus::{eigenfunctions, random_expansions, vector_valued, Member};
use invgauss::gfunctions::{g_lp_norm, g_value, lp_grid, maximal_value, ratio_probe, GFunctionSpec, NormSpec, Region};
use invgauss::kernels::invgauss_heat_action;
use invgauss::quadrature::{gauss_legendre_rule, SpaceGrid, TimeGrid};
use invgauss::special::{hermite_tilde, MultiIndex};
use invgauss::spectral::{HermiteExpansion, Semigroup};
use invgauss::Error;
use statrs::function::gamma::gamma;

fn mi(v: &[usize]) -> MultiIndex {
    MultiIndex::from(v.to_vec())
}

#[test]
fn eigenfunction_closed_form_across_parameters() {
    let tg = TimeGrid::default();
    let xs: [&[f64]; 3] = [&[0.35], &[-1.2], &[2.1]];
    for sg in [Semigroup::HeatA, Semigroup::PoissonA] {
        for q in [1.5, 2.0, 3.0] {
            for beta in [0.5, 1.0, 2.0] {
                let spec = GFunctionSpec::scalar(beta, mi(&[0]), q, sg).unwrap();
                let factor = gamma(q * beta).powf(1.0 / q) * q.powf(-beta);
                for k in 0..=8 {
                    let f = HermiteExpansion::eigenfunction(mi(&[k]));
                    for x in xs {
                        let g = g_value(&spec, &f, x, &tg).unwrap();
                        let h = hermite_tilde(&mi(&[k]), x).unwrap().abs();
                        assert!((g / (h * factor) - 1.0).abs() <= 1e-8, "{sg:?} q={q} beta={beta} k={k} x={x:?}");
                    }
                }
                let spec2 = GFunctionSpec::scalar(beta, mi(&[0, 0]), q, sg).unwrap();
                for k in [mi(&[2, 3]), mi(&[0, 0]), mi(&[4, 4])] {
                    let f = HermiteExpansion::eigenfunction(k.clone());
                    let x = [0.6, -0.25];
                    let g = g_value(&spec2, &f, &x, &tg).unwrap();
                    let h = hermite_tilde(&k, &x).unwrap().abs();
                    assert!((g / (h * factor) - 1.0).abs() <= 1e-8);
                }
            }
        }
    }
}

#[test]
fn two_mode_closed_form() {
    // t d_t T_t f for f = a H~_0 + b H~_1 has square integral sum_ij A_i A_j / (l_i + l_j)^2 over dt/t
    let tg = TimeGrid::default();
    let f = HermiteExpansion::from_terms(1, 1, [(mi(&[0]), vec![1.0]), (mi(&[1]), vec![-0.7])]).unwrap();
    let spec = GFunctionSpec::scalar(1.0, mi(&[0]), 2.0, Semigroup::HeatA).unwrap();
    for x in [-1.0, 0.2, 1.4] {
        let amps = [
            (1.0f64, hermite_tilde(&mi(&[0]), &[x]).unwrap()),
            (2.0, 2.0 * -0.7 * hermite_tilde(&mi(&[1]), &[x]).unwrap()),
        ];
        let exact: f64 =
            amps.iter().flat_map(|a| amps.iter().map(move |b| a.1 * b.1 / (a.0 + b.0).powi(2))).sum::<f64>().sqrt();
        let g = g_value(&spec, &f, &[x], &tg).unwrap();
        assert!((g / exact - 1.0).abs() < 1e-10, "x={x}: {g} vs {exact}");
    }
}

/// Composite Gauss-Legendre in `log t` over `[1e-10, 80]`.
fn log_time_rule() -> Vec<(f64, f64)> {
    let (xs, ws) = gauss_legendre_rule(12);
    let (a, b) = (1e-10f64.ln(), 80f64.ln());
    let panels = 48;
    let h = (b - a) / panels as f64;
    let mut out = Vec::new();
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (x, w) in xs.iter().zip(&ws) {
            out.push(((lo + 0.5 * h * (x + 1.0)).exp(), 0.5 * h * w));
        }
    }
    out
}

#[test]
fn lp_norm_matches_brute_force_double_quadrature() {
    let f = HermiteExpansion::from_terms(1, 1, [(mi(&[0]), vec![1.0]), (mi(&[1]), vec![1.0])]).unwrap();
    let spec = GFunctionSpec::scalar(1.0, mi(&[0]), 2.0, Semigroup::HeatA).unwrap();
    let sgrid = SpaceGrid::inverse_gauss(30, 1, 1.0).unwrap();
    let pipeline = g_lp_norm(&spec, &f, 2.0, &sgrid, &TimeGrid::default()).unwrap();
    let times = log_time_rule();
    let brute = sgrid
        .integrate(|x| {
            times
                .iter()
                .map(|&(t, w)| {
                    let v = invgauss_heat_action(|y| f.eval_scalar(y).unwrap(), x, t, 1, &mi(&[0]), 24).unwrap();
                    w * (t * v).powi(2)
                })
                .sum::<f64>()
        })
        .unwrap()
        .sqrt();
    assert!((pipeline / brute - 1.0).abs() < 1e-5, "{pipeline} vs {brute}");
}

#[test]
fn lp_norm_is_homogeneous() {
    let spec = GFunctionSpec::scalar(1.0, mi(&[1]), 2.0, Semigroup::PoissonA).unwrap();
    let sgrid = lp_grid(1, 3.0, 60).unwrap();
    let f = random_expansions(1, 1, 6, 3, 4).remove(0).f;
    let tg = TimeGrid::new(1e-10, 64.0, 512).unwrap();
    let a = g_lp_norm(&spec, &f, 3.0, &sgrid, &tg).unwrap();
    let b = g_lp_norm(&spec, &f.scale(2.0), 3.0, &sgrid, &tg).unwrap();
    assert!((b / a - 2.0).abs() < 1e-12);
}

#[test]
fn ratio_probe_examples() {
    let spec = GFunctionSpec::scalar(1.0, mi(&[0]), 2.0, Semigroup::HeatA).unwrap();
    let sgrid = lp_grid(1, 2.0, 40).unwrap();
    let tg = TimeGrid::default();
    let corpus = eigenfunctions(1, 6);
    let report = ratio_probe(&spec, &corpus, 2.0, &sgrid, &tg).unwrap();
    for row in &report.rows {
        assert!((row.g_norm / row.f_norm - 0.5).abs() < 1e-10, "{}", row.id);
    }
    assert!((report.upper - 0.5).abs() < 1e-10);
    let single = ratio_probe(&spec, &corpus[..1], 2.0, &sgrid, &tg).unwrap();
    assert!((single.lower - 2.0).abs() < 1e-10);
    let zeros = vec![Member { id: "zero".into(), f: HermiteExpansion::zero(1, 1) }];
    assert!(matches!(ratio_probe(&spec, &zeros, 2.0, &sgrid, &tg), Err(Error::Sampling(_))));
    assert!(ratio_probe(&spec, &[], 2.0, &sgrid, &tg).is_err());
}

#[test]
fn vector_valued_splits_when_r_equals_q() {
    let tg = TimeGrid::new(1e-12, 64.0, 1024).unwrap();
    for q in [2.0, 3.0] {
        for member in vector_valued(2, 3, 3, 19).unwrap() {
            let mut spec = GFunctionSpec::scalar(1.0, mi(&[1, 0]), q, Semigroup::HeatA).unwrap();
            spec.norm = NormSpec::new(q, 3).unwrap();
            let x = [0.4, -0.9];
            let whole = g_value(&spec, &member.f, &x, &tg).unwrap().powf(q);
            let scalar = GFunctionSpec::scalar(1.0, mi(&[1, 0]), q, Semigroup::HeatA).unwrap();
            let parts: f64 =
                (0..3).map(|j| g_value(&scalar, &member.f.component(j).unwrap(), &x, &tg).unwrap().powf(q)).sum();
            assert!((whole / parts - 1.0).abs() < 1e-10, "{} q={q}", member.id);
        }
    }
}

#[test]
fn maximal_value_examples_and_refinement() {
    let tg = TimeGrid::default();
    let h0 = HermiteExpansion::eigenfunction(mi(&[0]));
    assert_eq!(maximal_value(1, &mi(&[0]), &HermiteExpansion::zero(1, 1), &[0.5], &tg).unwrap(), 0.0);
    let x = [0.9];
    let v = maximal_value(1, &mi(&[0]), &h0, &x, &tg).unwrap();
    let expect = (-1f64).exp() * hermite_tilde(&mi(&[0]), &x).unwrap();
    assert!((v / expect - 1.0).abs() < 1e-5);
    let fine = tg.refined();
    for member in random_expansions(1, 5, 8, 4, 3) {
        for (m, k) in [(0, 1), (1, 0), (2, 1)] {
            let a = maximal_value(m, &mi(&[k]), &member.f, &x, &tg).unwrap();
            let b = maximal_value(m, &mi(&[k]), &member.f, &x, &fine).unwrap();
            assert!(b >= a * (1.0 - 1e-6), "{} m={m} k={k}: {a} -> {b}", member.id);
        }
    }
}

/// Largest ratio `lhs / rhs` over a corpus and points.
fn fitted(pairs: &[(f64, f64)]) -> f64 {
    pairs.iter().map(|(l, r)| l / r).fold(0.0, f64::max)
}

#[test]
fn subordination_transfer_constant_is_stable() {
    // g_{m,k,Poisson} <= C sum_{0 <= l <= m/2} g_{m-l,k,heat}
    let tg = TimeGrid::new(1e-12, 64.0, 1024).unwrap();
    let m = 2usize;
    let k = mi(&[1]);
    let corpus = random_expansions(1, 16, 8, 4, 31);
    let xs = [-1.3, -0.2, 0.5, 1.7];
    let mut pairs = Vec::new();
    for member in &corpus {
        for &x in &xs {
            let ps = GFunctionSpec::scalar(m as f64, k.clone(), 2.0, Semigroup::PoissonA).unwrap();
            let lhs = g_value(&ps, &member.f, &[x], &tg).unwrap();
            let rhs: f64 = (0..=m / 2)
                .map(|l| {
                    let hs = GFunctionSpec::scalar((m - l) as f64, k.clone(), 2.0, Semigroup::HeatA).unwrap();
                    g_value(&hs, &member.f, &[x], &tg).unwrap()
                })
                .sum();
            pairs.push((lhs, rhs));
        }
    }
    let half = fitted(&pairs[..pairs.len() / 2]);
    let full = fitted(&pairs);
    assert!(full.is_finite() && full > 0.0);
    assert!(full / half <= 1.5, "constant grew from {half} to {full}");
    assert_eq!(pairs.iter().filter(|(l, r)| *l > full * r * (1.0 + 1e-12)).count(), 0);
}

#[test]
fn poisson_beta_comparison_constant_is_stable() {
    let tg = TimeGrid::new(1e-12, 64.0, 1024).unwrap();
    let sgrid = lp_grid(1, 2.0, 60).unwrap();
    let corpus = random_expansions(1, 12, 8, 4, 55);
    let lo = GFunctionSpec::scalar(0.5, mi(&[0]), 2.0, Semigroup::PoissonA).unwrap();
    let hi = GFunctionSpec::scalar(1.5, mi(&[0]), 2.0, Semigroup::PoissonA).unwrap();
    let pairs: Vec<(f64, f64)> = corpus
        .iter()
        .map(|m| (g_lp_norm(&lo, &m.f, 2.0, &sgrid, &tg).unwrap(), g_lp_norm(&hi, &m.f, 2.0, &sgrid, &tg).unwrap()))
        .collect();
    let half = fitted(&pairs[..6]);
    let full = fitted(&pairs);
    assert!(full / half <= 1.5, "{half} -> {full}");
}

#[test]
fn local_split_reports_capability_limits() {
    let tg = TimeGrid::new(1e-4, 20.0, 64).unwrap();
    let f = HermiteExpansion::eigenfunction(mi(&[0]));
    let mut spec = GFunctionSpec::scalar(1.0, mi(&[0]), 2.0, Semigroup::PoissonAMinusI).unwrap();
    spec.region = Region::Local(1.0);
    assert!(matches!(g_value(&spec, &f, &[0.3], &tg), Err(Error::Capability(_))));
    let mut spec = GFunctionSpec::scalar(0.5, mi(&[0]), 2.0, Semigroup::HeatA).unwrap();
    spec.region = Region::Global(1.0);
    assert!(matches!(g_value(&spec, &f, &[0.3], &tg), Err(Error::Capability(_))));
}

#[test]
fn global_poisson_split_for_shifted_operator_is_finite() {
    let tg = TimeGrid::new(1e-3, 40.0, 48).unwrap();
    let f = HermiteExpansion::eigenfunction(mi(&[1, 0]));
    let mut spec = GFunctionSpec::scalar(1.0, mi(&[0, 0]), 2.0, Semigroup::PoissonAMinusI).unwrap();
    spec.region = Region::Global(1.0);
    let g = g_value(&spec, &f, &[0.4, 0.2], &tg).unwrap();
    assert!(g.is_finite());
}
