//! Fixture families of Hermite expansions used by experiments and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{ln_factorial, multiindices_up_to_degree, MultiIndex};
use crate::spectral::{HermiteExpansion, DEFAULT_DEGREE_CAP};

/// A corpus entry with a stable identifier.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Member {
    pub id: String,
    pub f: HermiteExpansion,
}

/// Every `H~_k` with `|k| <= max_degree`.
pub fn eigenfunctions(n: usize, max_degree: usize) -> Vec<Member> {
    multiindices_up_to_degree(n, max_degree)
        .into_iter()
        .map(|k| Member { id: format!("eig{k}"), f: HermiteExpansion::eigenfunction(k) })
        .collect()
}

/// Seeded random expansions of degree at most `max_degree` with up to
/// `max_terms` coefficients drawn from `[-1, 1]`.
pub fn random_expansions(n: usize, count: usize, max_degree: usize, max_terms: usize, seed: u64) -> Vec<Member> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = multiindices_up_to_degree(n, max_degree);
    (0..count)
        .map(|j| {
            let terms = rng.gen_range(1..=max_terms.max(1));
            let mut f = HermiteExpansion::zero(n, 1);
            for _ in 0..terms {
                let k = pool[rng.gen_range(0..pool.len())].clone();
                let c: f64 = rng.gen_range(-1.0..1.0);
                f.add_term(k, vec![c]).expect("pool matches dimension");
            }
            Member { id: format!("rand{j}"), f }
        })
        .collect()
}

/// One-dimensional coefficients of `e^{-a x^2}`:
/// `c_{2j} = a^{-1/2} (1/a - 1)^j / (j! 4^j)`, truncated at degree `cap`.
pub fn super_gaussian_coefficients(a: f64, cap: usize) -> Result<Vec<(usize, f64)>> {
    if !(a > 0.5) {
        return Err(Error::Argument(format!("need a > 1/2 for a convergent expansion, got {a}")));
    }
    let ratio = 1.0 / a - 1.0;
    Ok((0..=cap / 2)
        .map(|j| {
            let mag = -0.5 * a.ln() + j as f64 * (ratio.abs().ln() - 4f64.ln()) - ln_factorial(j);
            let sign = if ratio < 0.0 && j % 2 == 1 { -1.0 } else { 1.0 };
            let c = if j == 0 { a.powf(-0.5) } else { sign * mag.exp() };
            (2 * j, c)
        })
        .collect())
}

/// Truncated expansion of `e^{-a |x|^2}` in dimension `n` (tensor product).
pub fn super_gaussian(n: usize, a: f64, cap: usize) -> Result<HermiteExpansion> {
    let one = super_gaussian_coefficients(a, cap.min(DEFAULT_DEGREE_CAP))?;
    let mut f = HermiteExpansion::zero(n, 1);
    let mut idx = vec![0usize; n];
    loop {
        let mut c = 1.0;
        let mut k = Vec::with_capacity(n);
        for &i in &idx {
            c *= one[i].1;
            k.push(one[i].0);
        }
        f.add_term(MultiIndex::from(k), vec![c])?;
        let mut d = n;
        loop {
            if d == 0 {
                return Ok(f);
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < one.len() {
                break;
            }
            idx[d] = 0;
        }
    }
}

pub fn super_gaussians(n: usize, cap: usize) -> Result<Vec<Member>> {
    [1.5, 2.0, 3.0].iter().map(|&a| Ok(Member { id: format!("sg{a}"), f: super_gaussian(n, a, cap)? })).collect()
}

/// Vector-valued members pairing eigenfunctions and random expansions across `m` coordinates.
pub fn vector_valued(n: usize, m: usize, count: usize, seed: u64) -> Result<Vec<Member>> {
    let eig = eigenfunctions(n, 8);
    let rnd = random_expansions(n, count * m, 12, 4, seed);
    (0..count)
        .map(|j| {
            let parts: Vec<HermiteExpansion> = (0..m)
                .map(|c| if c % 2 == 0 { eig[(j * m + c) % eig.len()].f.clone() } else { rnd[j * m + c].f.clone() })
                .collect();
            Ok(Member { id: format!("vec{m}_{j}"), f: HermiteExpansion::stack(&parts)? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn super_gaussian_coefficients_match_quadrature() {
        use crate::quadrature::SpaceGrid;
        use crate::spectral::expand;
        for a in [1.5f64, 2.0, 3.0] {
            let grid = SpaceGrid::inverse_gauss(80, 1, a.sqrt().recip()).unwrap();
            let numeric = expand(|x| (-a * x[0] * x[0]).exp(), 1, 12, &grid).unwrap();
            let exact = super_gaussian(1, a, 12).unwrap();
            assert!(numeric.max_abs_difference(&exact) < 1e-10, "a = {a}");
        }
    }

    #[test]
    fn super_gaussian_truncation_converges() {
        let x = [0.6];
        let err = |cap| (super_gaussian(1, 2.0, cap).unwrap().eval_scalar(&x).unwrap() - (-0.72f64).exp()).abs();
        assert!(err(24) < err(12) && err(24) < 1e-4);
    }

    #[test]
    fn random_corpus_is_seeded() {
        assert_eq!(random_expansions(2, 5, 12, 4, 9), random_expansions(2, 5, 12, 4, 9));
        assert_ne!(random_expansions(2, 5, 12, 4, 9), random_expansions(2, 5, 12, 4, 10));
    }

    #[test]
    fn eigenfunction_count() {
        assert_eq!(eigenfunctions(1, 8).len(), 9);
        assert_eq!(eigenfunctions(2, 8).len(), 45);
    }
}
