use invgauss::corpus::{eigenfunctions, random_expansions, super_gaussians, vector_valued, Member};
use invgauss::kernels::{
    action_grid, composition_grid, dxk_dtm_invgauss, invgauss_heat, invgauss_heat_action, poisson_action_quadrature,
    poisson_kernel, Operator,
};
use invgauss::special::{hermite_tilde, MultiIndex};
use invgauss::spectral::{space_derivative, time_derivative, HermiteExpansion, Semigroup};

const REL: f64 = 1e-7;

fn corpus(n: usize) -> Vec<Member> {
    let mut all = eigenfunctions(n, if n == 1 { 12 } else { 6 });
    all.extend(random_expansions(n, 6, 12, 4, 17));
    all.extend(super_gaussians(n, if n == 1 { 24 } else { 12 }).unwrap());
    all.extend(vector_valued(n, 2, 2, 5).unwrap());
    all
}

fn points(n: usize) -> Vec<Vec<f64>> {
    if n == 1 {
        vec![vec![-1.7], vec![0.0], vec![0.45], vec![2.6]]
    } else {
        vec![vec![0.3, -0.8], vec![-1.9, 1.1]]
    }
}

/// Spectral value and its termwise absolute sum.
fn spectral(f: &HermiteExpansion, x: &[f64], t: f64, m: usize, k: &MultiIndex, sg: Semigroup, j: usize) -> (f64, f64) {
    let d = space_derivative(&time_derivative(f, t, m, sg).unwrap(), k).unwrap();
    let mut v = 0.0;
    let mut scale = 0.0;
    for (l, c) in d.terms() {
        let term = c[j] * hermite_tilde(l, x).unwrap();
        v += term;
        scale += term.abs();
    }
    (v, scale)
}

/// Largest termwise magnitude over the probe points; relative errors are measured against it.
fn probe_scale(f: &HermiteExpansion, n: usize, t: f64, m: usize, k: &MultiIndex, sg: Semigroup, j: usize) -> f64 {
    points(n).iter().map(|x| spectral(f, x, t, m, k, sg, j).1).fold(0.0, f64::max)
}

/// `int |d_x^k d_t^m T_t(x, y) f(y)| dy`: the magnitude that roundoff in the quadrature scales with.
fn absolute_action(f: &HermiteExpansion, x: &[f64], t: f64, m: usize, k: &MultiIndex) -> f64 {
    let grid = action_grid(x, t, 40).unwrap();
    grid.integrate(|y| (dxk_dtm_invgauss(x, y, t, m, k).unwrap() * f.eval_scalar(y).unwrap()).abs()).unwrap()
}

fn component(f: &HermiteExpansion, j: usize) -> HermiteExpansion {
    f.component(j).unwrap()
}

#[test]
fn heat_kernel_quadrature_matches_spectral_action() {
    for n in 1..=2 {
        let orders = [MultiIndex::zeros(n), MultiIndex::unit(n, 0), MultiIndex::unit(n, n - 1).plus_unit(0)];
        for member in corpus(n) {
            for j in 0..member.f.vector_dim() {
                let fj = component(&member.f, j);
                for &t in &[0.05, 0.6, 2.5] {
                    for m in 0..=2 {
                        for k in &orders {
                            let scale = probe_scale(&member.f, n, t, m, k, Semigroup::HeatA, j);
                            for x in points(n) {
                                let quad =
                                    invgauss_heat_action(|y| fj.eval_scalar(y).unwrap(), &x, t, m, k, 40).unwrap();
                                let (exact, _) = spectral(&member.f, &x, t, m, k, Semigroup::HeatA, j);
                                let floor = 1e-6 * absolute_action(&fj, &x, t, m, k);
                                assert!(
                                    (quad - exact).abs() <= REL * exact.abs().max(scale).max(floor),
                                    "{} c{j} x={x:?} t={t} m={m} k={k}: {quad} vs {exact}",
                                    member.id
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn poisson_quadrature_matches_spectral_action() {
    let cases = [
        (1, Operator::A, Semigroup::PoissonA),
        (2, Operator::A, Semigroup::PoissonA),
        (2, Operator::AMinusI, Semigroup::PoissonAMinusI),
        (1, Operator::AMinusI, Semigroup::PoissonAMinusI),
    ];
    for (n, op, sg) in cases {
        let mut fixtures = eigenfunctions(n, 4);
        fixtures.extend(random_expansions(n, 3, 8, 4, 23));
        for member in fixtures {
            let zero = member.f.coefficient(&MultiIndex::zeros(n)).map(|c| c[0]).unwrap_or(0.0);
            for &t in &[0.1, 1.3] {
                for m in 0..=1 {
                    for k in [MultiIndex::zeros(n), MultiIndex::unit(n, 0)] {
                        let scale = probe_scale(&member.f, n, t, m, &k, sg, 0).max(probe_scale(
                            &member.f,
                            n,
                            t,
                            0,
                            &MultiIndex::zeros(n),
                            sg,
                            0,
                        ));
                        for x in points(n).into_iter().take(2) {
                            let quad = poisson_action_quadrature(
                                |y| member.f.eval_scalar(y).unwrap(),
                                &x,
                                t,
                                m,
                                &k,
                                op,
                                30,
                                zero,
                            )
                            .unwrap();
                            let (exact, _) = spectral(&member.f, &x, t, m, &k, sg, 0);
                            assert!(
                                (quad - exact).abs() <= REL * exact.abs().max(scale).max(f64::MIN_POSITIVE),
                                "{op:?} n={n} {} x={x:?} t={t} m={m} k={k}: {quad} vs {exact}",
                                member.id
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn heat_kernel_composes() {
    let cases: [(Vec<f64>, Vec<f64>, f64, f64); 5] = [
        (vec![0.2], vec![-0.5], 0.3, 0.7),
        (vec![1.5], vec![0.4], 0.05, 1.2),
        (vec![-2.0], vec![1.0], 2.0, 0.01),
        (vec![0.3, -0.4], vec![1.1, 0.2], 0.4, 0.9),
        (vec![-1.2, 0.8], vec![0.0, -0.6], 1.5, 0.2),
    ];
    for (x, z, t, s) in cases {
        let grid = composition_grid(&x, &z, t, s, 30).unwrap();
        let lhs = grid.integrate(|y| invgauss_heat(&x, y, t).unwrap() * invgauss_heat(y, &z, s).unwrap()).unwrap();
        let rhs = invgauss_heat(&x, &z, t + s).unwrap();
        assert!((lhs / rhs - 1.0).abs() <= 1e-6, "x={x:?} z={z:?} t={t} s={s}: {lhs} vs {rhs}");
    }
}

#[test]
fn poisson_kernel_composes() {
    // int P_t(x, y) P_s(y, z) dy = P_{t+s}(x, z); the heat factors are composed in closed form
    let (x, z, t, s) = ([0.4], [-0.3], 0.5, 0.8);
    let grid = composition_grid(&x, &z, 0.4, 0.4, 60).unwrap();
    let lhs = grid
        .integrate(|y| poisson_kernel(&x, y, t, Operator::A).unwrap() * poisson_kernel(y, &z, s, Operator::A).unwrap())
        .unwrap();
    let rhs = poisson_kernel(&x, &z, t + s, Operator::A).unwrap();
    assert!((lhs / rhs - 1.0).abs() <= 1e-4, "{lhs} vs {rhs}");
}

#[test]
fn heat_action_preserves_eigenfunctions() {
    let k = MultiIndex::from(vec![3]);
    let f = HermiteExpansion::eigenfunction(k.clone());
    for &t in &[0.01, 0.5, 3.0] {
        let x = [0.8];
        let v = invgauss_heat_action(|y| hermite_tilde(&k, y).unwrap(), &x, t, 0, &MultiIndex::zeros(1), 30).unwrap();
        let exact = (-4.0 * t).exp() * f.eval_scalar(&x).unwrap();
        assert!((v / exact - 1.0).abs() < 1e-10, "t={t}: {v} vs {exact}");
    }
}
