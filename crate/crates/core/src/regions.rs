//! The admissibility function `m(x)`, local regions `N_nu`, and the slab
//! `J(z)` along the diagonal direction.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_rule;

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `m(x) = min{1, |x|^{-2}}`, `m(0) = 1`.
pub fn m_admissibility(x: &[f64]) -> f64 {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    if r2 <= 1.0 {
        1.0
    } else {
        1.0 / r2
    }
}

/// Radius `nu n sqrt(m(x))` of the local ball around `x`.
pub fn local_radius(x: &[f64], nu: f64) -> f64 {
    nu * x.len() as f64 * m_admissibility(x).sqrt()
}

/// `(x, y)` lies in `N_nu`: `|x - y| < nu n sqrt(m(x))`.
pub fn in_local_region(x: &[f64], y: &[f64], nu: f64) -> bool {
    let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum();
    d2.sqrt() < local_radius(x, nu)
}

/// Local region parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub nu: f64,
    pub dimension: usize,
}

impl RegionSpec {
    pub fn new(nu: f64, dimension: usize) -> Result<Self> {
        if !(nu > 0.0) || dimension == 0 {
            return Err(Error::Argument(format!("invalid region nu = {nu}, n = {dimension}")));
        }
        Ok(Self { nu, dimension })
    }

    pub fn contains(&self, x: &[f64], y: &[f64]) -> bool {
        in_local_region(x, y, self.nu)
    }

    /// Uniform sample of `y` in the local ball around `x`.
    pub fn sample_local<R: Rng>(&self, x: &[f64], rng: &mut R) -> Vec<f64> {
        let rad = local_radius(x, self.nu);
        let dir = random_direction(self.dimension, rng);
        let r = rad * rng.gen::<f64>().powf(1.0 / self.dimension as f64);
        x.iter().zip(&dir).map(|(a, d)| a + r * d).collect()
    }
}

pub(crate) fn random_direction<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = norm(&v);
        if r > 1e-3 && r <= 1.0 {
            return v.into_iter().map(|c| c / r).collect();
        }
    }
}

/// `J(z) = { |x_perp| < 1, 4|z|/3 < x . z/|z| < 3|z|/2 }` with `z = (eta, ..., eta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JRegion {
    pub eta: f64,
    pub dimension: usize,
}

impl JRegion {
    pub fn new(eta: f64, dimension: usize) -> Result<Self> {
        if !(eta > 0.0) || dimension == 0 {
            return Err(Error::Argument(format!("invalid slab eta = {eta}, n = {dimension}")));
        }
        Ok(Self { eta, dimension })
    }

    pub fn z(&self) -> Vec<f64> {
        vec![self.eta; self.dimension]
    }

    pub fn z_norm(&self) -> f64 {
        self.eta * (self.dimension as f64).sqrt()
    }

    /// `(x_z, |x_perp|)`: signed coordinate along `z/|z|` and distance from that axis.
    pub fn split(&self, x: &[f64]) -> (f64, f64) {
        let unit = 1.0 / (self.dimension as f64).sqrt();
        let along: f64 = x.iter().map(|v| v * unit).sum();
        let perp2: f64 = x.iter().map(|v| (v - along * unit).powi(2)).sum();
        (along, perp2.max(0.0).sqrt())
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let (along, perp) = self.split(x);
        let zn = self.z_norm();
        perp < 1.0 && along > 4.0 * zn / 3.0 && along < 1.5 * zn
    }

    /// Uniform sample of the slab.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let zn = self.z_norm();
        let along = rng.gen_range(4.0 * zn / 3.0..1.5 * zn);
        let n = self.dimension;
        let unit = 1.0 / (n as f64).sqrt();
        let mut x = vec![along * unit; n];
        if n > 1 {
            // uniform point of the unit (n-1)-ball orthogonal to z
            let r = rng.gen::<f64>().powf(1.0 / (n - 1) as f64);
            let mut v = random_direction(n, rng);
            let proj: f64 = v.iter().map(|c| c * unit).sum();
            for c in v.iter_mut() {
                *c -= proj * unit;
            }
            let len = norm(&v);
            if len > 0.0 {
                for (xi, c) in x.iter_mut().zip(&v) {
                    *xi += r * c / len;
                }
            }
        }
        x
    }

    /// `ln gamma_{-1}(J(z))` by Gauss-Legendre in the axial coordinate; the
    /// transverse factor is integrated in polar form.
    pub fn ln_measure(&self) -> f64 {
        let n = self.dimension;
        let zn = self.z_norm();
        let (a, b) = (4.0 * zn / 3.0, 1.5 * zn);
        // axial: int_a^b e^{s^2} ds = e^{b^2} int_0^{b-a} e^{-(2b u - u^2)} du
        let (xs, ws) = gauss_legendre_rule(64);
        let len = b - a;
        let axial: f64 = xs
            .iter()
            .zip(&ws)
            .map(|(x, w)| {
                let u = 0.5 * len * (x + 1.0);
                0.5 * len * w * (-(2.0 * b * u - u * u)).exp()
            })
            .sum();
        // transverse: int_{|w|<1, w in R^{n-1}} e^{|w|^2} dw
        let transverse = if n == 1 {
            1.0
        } else {
            let d = (n - 1) as f64;
            let sphere = 2.0 * PI.powf(d / 2.0) / statrs::function::gamma::gamma(d / 2.0);
            let radial: f64 = xs
                .iter()
                .zip(&ws)
                .map(|(x, w)| {
                    let r = 0.5 * (x + 1.0);
                    0.5 * w * r.powf(d - 1.0) * (r * r).exp()
                })
                .sum();
            sphere * radial
        };
        0.5 * n as f64 * PI.ln() + b * b + axial.ln() + transverse.ln()
    }

    /// `ln( e^{(3|z|/2)^2} / |z| )`.
    pub fn ln_lower_bound(&self) -> f64 {
        let zn = self.z_norm();
        (1.5 * zn).powi(2) - zn.ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn admissibility_examples() {
        assert_eq!(m_admissibility(&[0.0]), 1.0);
        assert_eq!(m_admissibility(&[2.0]), 0.25);
        assert_eq!(m_admissibility(&[0.5]), 1.0);
    }

    #[test]
    fn local_region_examples() {
        assert!(in_local_region(&[3.0, -1.0], &[3.0, -1.0], 0.1));
        assert!(!in_local_region(&[0.0], &[1.5], 1.0));
        assert!(in_local_region(&[10.0], &[10.05], 1.0));
    }

    #[test]
    fn slab_membership() {
        let j = JRegion::new(4.0, 2).unwrap();
        let zn = j.z_norm();
        let unit = 1.0 / 2f64.sqrt();
        let x = vec![1.45 * zn * unit; 2];
        assert!(j.contains(&x));
        let y = vec![x[0] + 2.0 * unit, x[1] - 2.0 * unit];
        assert!(!j.contains(&y));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            assert!(j.contains(&j.sample(&mut rng)));
        }
    }

    #[test]
    fn slab_measure_dominates_lower_bound_trend() {
        for n in 1..=2 {
            let mut ratios = Vec::new();
            for eta in [3.0, 4.0, 5.0, 6.0, 7.0, 8.0] {
                let j = JRegion::new(eta, n).unwrap();
                ratios.push(j.ln_measure() - j.ln_lower_bound());
            }
            let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(lo > -3.0, "n={n}: {ratios:?}");
        }
    }
}
