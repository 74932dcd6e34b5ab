//! Weak-type growth probe for Poisson g-functions on the line: a unit-mass
//! bump at `z = eta` and the quantity `sup_s s gamma_{-1}({x in J(z): g(f)(x) > s})`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gfunctions::{shared_heat_times, subordinate_on_shared};
use crate::kernels::{dxk_dtm_invgauss, MAX_SPACE_ORDER, MAX_TIME_ORDER};
use crate::quadrature::{abs_pow, gauss_legendre_rule, TimeGrid};
use crate::regions::JRegion;
use crate::special::MultiIndex;

/// Parameters of the probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakTypeSetup {
    /// Time-derivative order `m`.
    pub m: usize,
    /// Space-derivative order `|k|`.
    pub k: usize,
    pub q: f64,
    /// Cells across the axial extent of `J(z)`.
    pub axial_points: usize,
    /// Gauss-Legendre nodes across the bump support.
    pub bump_points: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_points: usize,
}

impl Default for WeakTypeSetup {
    fn default() -> Self {
        Self { m: 1, k: 0, q: 2.0, axial_points: 160, bump_points: 64, t_min: 1e-3, t_max: 40.0, t_points: 96 }
    }
}

impl WeakTypeSetup {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.m > MAX_TIME_ORDER {
            return Err(Error::Capability(format!("time order must lie in 1..={MAX_TIME_ORDER}, got {}", self.m)));
        }
        if self.k > MAX_SPACE_ORDER {
            return Err(Error::Capability(format!("space order {} exceeds {MAX_SPACE_ORDER}", self.k)));
        }
        if !(self.q > 1.0) {
            return Err(Error::Argument(format!("q must exceed 1, got {}", self.q)));
        }
        if self.axial_points < 2 || self.bump_points < 2 {
            return Err(Error::Argument("need at least 2 axial and bump points".into()));
        }
        Ok(())
    }
}

/// One row of the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub eta: f64,
    /// `ln sup_s s gamma_{-1}({g > s} cap J)`.
    pub ln_proxy: f64,
    /// Level `x` at which the supremum is attained.
    pub argmax_x: f64,
    pub ln_measure_j: f64,
}

/// `e^{-1/(1-w^2)}` on `(-1, 1)`, in log form.
fn ln_bump(w: f64) -> f64 {
    if w.abs() >= 1.0 {
        f64::NEG_INFINITY
    } else {
        -1.0 / (1.0 - w * w)
    }
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let mx = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if mx == f64::NEG_INFINITY {
        return mx;
    }
    mx + v.iter().map(|a| (a - mx).exp()).sum::<f64>().ln()
}

/// `ln int_a^b e^{x^2} dx` by Gauss-Legendre.
fn ln_exp_square_integral(a: f64, b: f64) -> f64 {
    let (xs, ws) = gauss_legendre_rule(8);
    let half = 0.5 * (b - a);
    let c = a.abs().max(b.abs());
    let s: f64 = xs
        .iter()
        .zip(&ws)
        .map(|(x, w)| {
            let u = a + half * (x + 1.0);
            half * w * (u * u - c * c).exp()
        })
        .sum();
    c * c + s.ln()
}

/// Nodes `y` and values `f(y) w` of the bump at `z` normalized to unit `L^1(gamma_{-1})` mass.
fn bump_rule(z: f64, points: usize) -> Vec<(f64, f64)> {
    let (xs, ws) = gauss_legendre_rule(points);
    let ln_terms: Vec<f64> = xs.iter().zip(&ws).map(|(w, wt)| ln_bump(*w) + wt.ln()).collect();
    // ln || bump ||_{L^1(gamma_{-1})}
    let ln_mass =
        0.5 * PI.ln() + log_sum_exp(&xs.iter().zip(&ln_terms).map(|(w, l)| l + (z + w).powi(2)).collect::<Vec<_>>());
    xs.iter().zip(&ln_terms).map(|(w, l)| (z + w, (l - ln_mass).exp())).collect()
}

/// `g^q_{m,k}` of the Poisson semigroup for `A` applied to the bump rule, at `x`.
fn poisson_g(setup: &WeakTypeSetup, rule: &[(f64, f64)], x: f64, us: &[f64], tgrid: &TimeGrid) -> Result<f64> {
    let k = MultiIndex::from(vec![setup.k]);
    let heat: Vec<Vec<f64>> = us
        .iter()
        .map(|&u| {
            let mut acc = 0.0;
            for &(y, w) in rule {
                if w != 0.0 {
                    acc += w * dxk_dtm_invgauss(&[x], &[y], u, 0, &k)?;
                }
            }
            Ok(vec![acc])
        })
        .collect::<Result<_>>()?;
    let w = (setup.m + setup.k) as f64;
    let vals = subordinate_on_shared(us, &heat, tgrid.nodes(), setup.m, w, 1);
    let integrand: Vec<f64> = vals.iter().map(|v| abs_pow(v[0], setup.q)).collect();
    Ok(tgrid.integrate_values(&integrand).max(0.0).powf(1.0 / setup.q))
}

/// The proxy at one `eta`.
pub fn weak_type_proxy(setup: &WeakTypeSetup, eta: f64) -> Result<GrowthPoint> {
    setup.validate()?;
    let j = JRegion::new(eta, 1)?;
    if eta < 3.0 {
        return Err(Error::Argument(format!("the bump must sit outside J(z); need eta >= 3, got {eta}")));
    }
    let tgrid = TimeGrid::new(setup.t_min, setup.t_max, setup.t_points)?;
    let us = shared_heat_times(tgrid.nodes());
    let rule = bump_rule(eta, setup.bump_points);
    let (a, b) = (4.0 * eta / 3.0, 1.5 * eta);
    let h = (b - a) / setup.axial_points as f64;
    let mut cells = Vec::with_capacity(setup.axial_points);
    for i in 0..setup.axial_points {
        let lo = a + i as f64 * h;
        let x = lo + 0.5 * h;
        let g = poisson_g(setup, &rule, x, &us, &tgrid)?;
        if !g.is_finite() {
            return Err(Error::Evaluation { node: vec![x], value: g });
        }
        cells.push((x, g.ln(), 0.5 * PI.ln() + ln_exp_square_integral(lo, lo + h)));
    }
    // descending in g: superlevel measure accumulates strictly larger cells
    cells.sort_by(|p, q| q.1.partial_cmp(&p.1).unwrap_or(std::cmp::Ordering::Equal));
    let mut best = (f64::NEG_INFINITY, a);
    let mut acc: Vec<f64> = Vec::new();
    for (x, lg, lw) in &cells {
        if !acc.is_empty() {
            let cand = lg + log_sum_exp(&acc);
            if cand > best.0 {
                best = (cand, *x);
            }
        }
        acc.push(*lw);
    }
    Ok(GrowthPoint { eta, ln_proxy: best.0, argmax_x: best.1, ln_measure_j: j.ln_measure() })
}

/// The proxy over an `eta` sweep.
pub fn growth_sweep(setup: &WeakTypeSetup, etas: &[f64]) -> Result<Vec<GrowthPoint>> {
    if etas.is_empty() {
        return Err(Error::Argument("empty eta sweep".into()));
    }
    etas.iter().map(|&e| weak_type_proxy(setup, e)).collect()
}

/// Strictly increasing proxy across the sweep.
pub fn strictly_increasing(rows: &[GrowthPoint]) -> bool {
    rows.windows(2).all(|w| w[1].ln_proxy > w[0].ln_proxy)
}

/// Non-increasing proxy for `eta >= from`.
pub fn non_increasing_beyond(rows: &[GrowthPoint], from: f64) -> bool {
    let tail: Vec<&GrowthPoint> = rows.iter().filter(|r| r.eta >= from).collect();
    tail.windows(2).all(|w| w[1].ln_proxy <= w[0].ln_proxy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_has_unit_mass() {
        for z in [3.0, 6.0] {
            let rule = bump_rule(z, 128);
            let mass: f64 = rule.iter().map(|(y, w)| w * PI.sqrt() * (y * y).exp()).sum();
            assert!((mass - 1.0).abs() < 1e-12, "{mass}");
        }
    }

    #[test]
    fn exp_square_integral() {
        let exact = 1.462_651_745_907_181_6f64;
        assert!((ln_exp_square_integral(0.0, 1.0) - exact.ln()).abs() < 1e-12);
    }

    #[test]
    fn empty_sweep_rejected() {
        assert!(growth_sweep(&WeakTypeSetup::default(), &[]).is_err());
    }
}
