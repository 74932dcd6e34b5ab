use invgauss::quadrature::SpaceGrid;
use invgauss::special::{
    hermite, hermite_tilde, hermite_tilde_1d, hermite_tilde_l2_norm, multiindex_range, stirling2, MultiIndex,
};
use proptest::prelude::*;

#[test]
fn three_term_recurrence_holds() {
    for i in 0..=200 {
        let u = -10.0 + 0.1 * i as f64;
        for k in 1..40 {
            let (a, b, c) = (hermite(k + 1, u).unwrap(), hermite(k, u).unwrap(), hermite(k - 1, u).unwrap());
            let scale = a.abs().max((2.0 * u * b).abs()).max((2.0 * k as f64 * c).abs()).max(1.0);
            let res = a - 2.0 * u * b + 2.0 * k as f64 * c;
            assert!(res.abs() <= 1e-10 * scale, "k={k} u={u}: residual {res}");
        }
    }
}

#[test]
fn weighted_derivative_lowers_to_next_index() {
    let h = 1e-5;
    for l in 0..=20 {
        for &z in &[-2.3, -0.7, 0.0, 0.4, 1.9] {
            let fd = (hermite_tilde_1d(l, z + h) - hermite_tilde_1d(l, z - h)) / (2.0 * h);
            let exact = -hermite_tilde_1d(l + 1, z);
            let scale = 2f64.powf(0.5 * l as f64) * (1..=l).map(|v| v as f64).product::<f64>().sqrt();
            assert!((fd - exact).abs() <= 1e-6 * scale.max(1.0), "l={l} z={z}: {fd} vs {exact}");
        }
    }
}

#[test]
fn weighted_pointwise_bound() {
    for j in 0..=30 {
        let bound_factor = 2.0 * (2f64.powi(j as i32) * (1..=j).map(|v| v as f64).product::<f64>()).sqrt();
        for i in 0..=600 {
            let u = -15.0 + 0.05 * i as f64;
            let v = hermite_tilde_1d(j, u).abs();
            assert!(v <= bound_factor * (-u * u / 2.0).exp() * (1.0 + 1e-12), "j={j} u={u}");
        }
    }
}

#[test]
fn orthogonality_under_gauss_hermite() {
    // int H~_j H~_k d gamma_{-1} = sqrt(pi) int H_j H_k e^{-y^2} dy
    let grid = SpaceGrid::gauss_hermite(40, 1, &[0.0], 1.0).unwrap();
    for j in 0..=12 {
        for k in 0..=12 {
            let v = grid.integrate(|y| hermite(j, y[0]).unwrap() * hermite(k, y[0]).unwrap()).unwrap()
                * std::f64::consts::PI.sqrt();
            let nj = hermite_tilde_l2_norm(&MultiIndex::from(vec![j]));
            let nk = hermite_tilde_l2_norm(&MultiIndex::from(vec![k]));
            if j == k {
                assert!((v / (nj * nk) - 1.0).abs() < 1e-12);
            } else {
                assert!(v.abs() <= 1e-9 * nj * nk, "j={j} k={k}: {v}");
            }
        }
    }
}

#[test]
fn norm_anchors_to_degree_twenty() {
    let grid = SpaceGrid::inverse_gauss(60, 1, 1.0).unwrap();
    for j in 0..=20 {
        let k = MultiIndex::from(vec![j]);
        let l2 = grid.lp_norm(|x| hermite_tilde(&k, x).unwrap(), 2.0).unwrap();
        let exact = (std::f64::consts::PI * 2f64.powi(j as i32) * (1..=j).map(|v| v as f64).product::<f64>()).sqrt();
        assert!((l2 / exact - 1.0).abs() < 1e-10, "j={j}: {l2} vs {exact}");
        assert!((hermite_tilde_l2_norm(&k) / exact - 1.0).abs() < 1e-13);
    }
}

#[test]
fn stirling_matches_partition_enumeration() {
    // count set partitions of {0..N-1} into l blocks via restricted growth strings
    fn count(n: usize, l: usize) -> u64 {
        fn go(i: usize, n: usize, used: usize, l: usize) -> u64 {
            if i == n {
                return (used == l) as u64;
            }
            (0..=used.min(l - 1)).map(|b| go(i + 1, n, used.max(b + 1), l)).sum()
        }
        if l == 0 {
            return (n == 0) as u64;
        }
        go(0, n, 0, l)
    }
    for n in 0..=9 {
        for l in 0..=n {
            assert_eq!(stirling2(n, l).unwrap(), count(n, l), "S({n},{l})");
        }
    }
}

fn small_index(n: usize) -> impl Strategy<Value = MultiIndex> {
    prop::collection::vec(0usize..4, n).prop_map(MultiIndex::from)
}

proptest! {
    #[test]
    fn partial_order_is_a_partial_order(a in small_index(3), b in small_index(3), c in small_index(3)) {
        prop_assert!(a.is_dominated_by(&a));
        if a.is_dominated_by(&b) && b.is_dominated_by(&a) {
            prop_assert_eq!(&a, &b);
        }
        if a.is_dominated_by(&b) && b.is_dominated_by(&c) {
            prop_assert!(a.is_dominated_by(&c));
        }
    }

    #[test]
    fn range_enumerates_dominated_indices(b in small_index(2)) {
        let r = multiindex_range(&b);
        let expect: usize = b.entries().iter().map(|e| e + 1).product();
        prop_assert_eq!(r.len(), expect);
        prop_assert!(r.iter().all(|s| s.is_dominated_by(&b)));
        prop_assert!(r.windows(2).all(|w| w[0] < w[1]));
    }
}
