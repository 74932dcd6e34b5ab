//! Gauss-Hermite spatial grids (Lebesgue, Gaussian and inverse Gaussian
//! measures) and logarithmic time grids for integrals against `dt/t`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub const MIN_POINTS: usize = 2;
pub const MAX_POINTS: usize = 200;
pub const MAX_GRID_NODES: usize = 10_000_000;

/// Default number of Gauss-Hermite points per dimension.
pub const DEFAULT_SPACE_POINTS: usize = 80;

/// Fraction of the largest abscissa beyond which a node counts as "outer"
/// for the tail-decay check.
const SHELL_FRACTION: f64 = 0.75;
const TAIL_TOLERANCE: f64 = 1e-8;

/// One-dimensional Gauss-Hermite rule for the weight `e^{-y^2}` on the line.
#[derive(Debug, Clone)]
pub struct GaussHermiteRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub ln_weights: Vec<f64>,
}

impl GaussHermiteRule {
    fn compute(points: usize) -> Self {
        // Golub-Welsch: eigenvalues of the Jacobi matrix give the abscissae.
        let mut jacobi = DMatrix::<f64>::zeros(points, points);
        for i in 1..points {
            let b = (i as f64 / 2.0).sqrt();
            jacobi[(i, i - 1)] = b;
            jacobi[(i - 1, i)] = b;
        }
        let eig = jacobi.symmetric_eigen();
        let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());

        // Newton polish on the orthonormal recurrence; weights from its derivative.
        let mut ln_weights = Vec::with_capacity(points);
        for x in nodes.iter_mut() {
            let mut ln_w = 0.0;
            for _ in 0..100 {
                let (p, dp) = orthonormal_hermite_with_derivative(points, *x);
                let dx = p / dp;
                *x -= dx;
                ln_w = std::f64::consts::LN_2 - 2.0 * dp.abs().ln();
                if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                    let (_, dp) = orthonormal_hermite_with_derivative(points, *x);
                    ln_w = std::f64::consts::LN_2 - 2.0 * dp.abs().ln();
                    break;
                }
            }
            ln_weights.push(ln_w);
        }
        // enforce exact symmetry of the rule
        let n = points;
        for i in 0..n / 2 {
            let x = 0.5 * (nodes[n - 1 - i] - nodes[i]);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 0.5 * (ln_weights[i] + ln_weights[n - 1 - i]);
            ln_weights[i] = w;
            ln_weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        let weights = ln_weights.iter().map(|w| w.exp()).collect();
        Self { nodes, weights, ln_weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Orthonormal Hermite polynomial `p_n(x)` (weight `e^{-x^2}`) and `p_n'(x)`.
fn orthonormal_hermite_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 0.0;
    let mut p = PI.powf(-0.25);
    for j in 1..=n {
        let jf = j as f64;
        let next = x * (2.0 / jf).sqrt() * p - ((jf - 1.0) / jf).sqrt() * p_prev;
        p_prev = p;
        p = next;
    }
    (p, (2.0 * n as f64).sqrt() * p_prev)
}

fn rule_cache() -> &'static Mutex<HashMap<usize, Arc<GaussHermiteRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussHermiteRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cached Gauss-Hermite rule with `points` abscissae.
pub fn gauss_hermite_rule(points: usize) -> Result<Arc<GaussHermiteRule>> {
    if !(MIN_POINTS..=MAX_POINTS).contains(&points) {
        return Err(Error::Argument(format!(
            "points per dimension must lie in [{MIN_POINTS}, {MAX_POINTS}], got {points}"
        )));
    }
    let mut cache = rule_cache().lock().expect("rule cache poisoned");
    Ok(cache.entry(points).or_insert_with(|| Arc::new(GaussHermiteRule::compute(points))).clone())
}

/// Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre_rule(points: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; points];
    let mut weights = vec![0.0; points];
    let m = points.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (points as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..points {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            pp = points as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[points - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[i] = w;
        weights[points - 1 - i] = w;
    }
    (nodes, weights)
}

/// Which measure the grid weights integrate against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Lebesgue,
    /// `e^{-|(y - shift)/scale|^2} dy`
    Gauss,
    /// `pi^{n/2} e^{|y|^2} dy`
    InverseGauss,
}

/// Tensor-product quadrature grid on `R^n` with weights folded for its measure.
#[derive(Debug, Clone)]
pub struct SpaceGrid {
    dimension: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    outer: Vec<bool>,
    measure: Measure,
}

impl SpaceGrid {
    /// Gauss-Hermite grid after `y -> shift + scale * y`; integrates
    /// `f(y) e^{-|(y - shift)/scale|^2} dy`.
    pub fn gauss_hermite(points: usize, dimension: usize, shift: &[f64], scale: f64) -> Result<Self> {
        Self::affine(points, dimension, shift, scale, Measure::Gauss)
    }

    /// Integrates `f(y) dy` for integrands with Gaussian decay of width
    /// `scale` around `shift`.
    pub fn lebesgue(points: usize, dimension: usize, shift: &[f64], scale: f64) -> Result<Self> {
        Self::affine(points, dimension, shift, scale, Measure::Lebesgue)
    }

    /// Integrates `f d gamma_{-1}`; `scale` is the decay width of `f * e^{|y|^2}`.
    pub fn inverse_gauss(points: usize, dimension: usize, scale: f64) -> Result<Self> {
        Self::affine(points, dimension, &vec![0.0; dimension], scale, Measure::InverseGauss)
    }

    fn affine(points: usize, dimension: usize, shift: &[f64], scale: f64, measure: Measure) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Argument("grid dimension must be positive".into()));
        }
        if shift.len() != dimension {
            return Err(Error::Argument(format!(
                "shift has dimension {} but grid has dimension {dimension}",
                shift.len()
            )));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Argument(format!("scale must be positive, got {scale}")));
        }
        let total = (points as f64).powi(dimension as i32);
        if total > MAX_GRID_NODES as f64 {
            return Err(Error::Capability(format!("{points}^{dimension} nodes exceeds the limit of {MAX_GRID_NODES}")));
        }
        let rule = gauss_hermite_rule(points)?;
        let total = total as usize;
        let xi_max = rule.nodes[points - 1];
        let ln_jacobian = dimension as f64 * scale.ln();
        let ln_pi_half = 0.5 * dimension as f64 * PI.ln();

        let mut nodes = Vec::with_capacity(total * dimension);
        let mut weights = Vec::with_capacity(total);
        let mut outer = Vec::with_capacity(total);
        let mut idx = vec![0usize; dimension];
        for _ in 0..total {
            let mut ln_w = ln_jacobian;
            let mut xi2 = 0.0;
            let mut y2 = 0.0;
            let mut xi_inf: f64 = 0.0;
            for d in 0..dimension {
                let xi = rule.nodes[idx[d]];
                let y = shift[d] + scale * xi;
                nodes.push(y);
                ln_w += rule.ln_weights[idx[d]];
                xi2 += xi * xi;
                y2 += y * y;
                xi_inf = xi_inf.max(xi.abs());
            }
            match measure {
                Measure::Gauss => {}
                Measure::Lebesgue => ln_w += xi2,
                Measure::InverseGauss => ln_w += xi2 + y2 + ln_pi_half,
            }
            weights.push(ln_w.exp());
            outer.push(xi_inf >= SHELL_FRACTION * xi_max);
            for d in (0..dimension).rev() {
                idx[d] += 1;
                if idx[d] < points {
                    break;
                }
                idx[d] = 0;
            }
        }
        Ok(Self { dimension, nodes, weights, outer, measure })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.nodes.chunks_exact(self.dimension).zip(self.weights.iter().copied())
    }

    /// `sum_i w_i f(x_i)`, pairwise-summed.
    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, f: F) -> Result<f64> {
        let terms = self.weighted_values(&|_, x| f(x))?;
        Ok(pairwise_sum(&terms))
    }

    /// Like [`SpaceGrid::integrate`] but rejects integrands whose outer-shell
    /// contributions are not negligible, i.e. that do not decay on this grid.
    pub fn integrate_checked<F: Fn(&[f64]) -> f64>(&self, f: F) -> Result<f64> {
        self.integrate_checked_indexed(|_, x| f(x))
    }

    /// [`SpaceGrid::integrate_checked`] with the node index passed to the integrand.
    pub fn integrate_checked_indexed<F: Fn(usize, &[f64]) -> f64>(&self, f: F) -> Result<f64> {
        let terms = self.weighted_values(&f)?;
        let total_abs: f64 = terms.iter().map(|v| v.abs()).sum();
        let shell_abs: f64 = terms.iter().zip(&self.outer).filter(|(_, &o)| o).map(|(v, _)| v.abs()).sum();
        if total_abs > 0.0 && shell_abs > TAIL_TOLERANCE * total_abs {
            return Err(Error::Integrability(format!(
                "outer nodes carry {:.3e} of the absolute mass",
                shell_abs / total_abs
            )));
        }
        Ok(pairwise_sum(&terms))
    }

    fn weighted_values<F: Fn(usize, &[f64]) -> f64>(&self, f: &F) -> Result<Vec<f64>> {
        self.iter()
            .enumerate()
            .map(|(i, (x, w))| {
                let v = f(i, x);
                if !v.is_finite() {
                    return Err(Error::Evaluation { node: x.to_vec(), value: v });
                }
                Ok(if v == 0.0 { 0.0 } else { w * v })
            })
            .collect()
    }

    /// `(integral |f|^p)^{1/p}` over the grid measure.
    pub fn lp_norm<F: Fn(&[f64]) -> f64>(&self, f: F, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::Argument(format!("p must be >= 1, got {p}")));
        }
        let s = self.integrate(|x| abs_pow(f(x), p))?;
        Ok(s.max(0.0).powf(1.0 / p))
    }
}

/// `|v|^p` with `-0` normalized and the common exponents done exactly.
pub fn abs_pow(v: f64, p: f64) -> f64 {
    let a = v.abs();
    if a == 0.0 {
        0.0
    } else if p == 1.0 {
        a
    } else if p == 2.0 {
        a * a
    } else {
        (p * a.ln()).exp()
    }
}

/// Pairwise (cascade) summation; result depends only on the input order.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 16 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// Trapezoid rule in `u = log t` for integrals `int_{t_min}^{t_max} F(t) dt/t`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    t_min: f64,
    t_max: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl TimeGrid {
    pub const DEFAULT_T_MIN: f64 = 1e-20;
    pub const DEFAULT_T_MAX: f64 = 64.0;
    pub const DEFAULT_POINTS: usize = 4096;
    pub const MIN_POINTS: usize = 16;

    pub fn new(t_min: f64, t_max: f64, points: usize) -> Result<Self> {
        if !(t_min > 0.0 && t_min < t_max && t_max.is_finite()) {
            return Err(Error::Argument(format!("time grid needs 0 < t_min < t_max, got [{t_min}, {t_max}]")));
        }
        if points < Self::MIN_POINTS {
            return Err(Error::Argument(format!("time grid needs at least {} points, got {points}", Self::MIN_POINTS)));
        }
        let (a, b) = (t_min.ln(), t_max.ln());
        let h = (b - a) / (points - 1) as f64;
        let nodes = (0..points).map(|i| (a + i as f64 * h).exp()).collect();
        let weights = (0..points).map(|i| if i == 0 || i == points - 1 { 0.5 * h } else { h }).collect();
        Ok(Self { t_min, t_max, nodes, weights })
    }

    /// Same range, twice the resolution.
    pub fn refined(&self) -> Self {
        Self::new(self.t_min, self.t_max, 2 * self.nodes.len() - 1).expect("valid refinement")
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn points(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `int F(t) dt/t` over the grid range.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| {
                let v = f(t);
                if v == 0.0 {
                    0.0
                } else {
                    w * v
                }
            })
            .collect();
        pairwise_sum(&terms)
    }

    /// `int F dt/t` from precomputed integrand values at the grid nodes.
    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.nodes.len());
        let terms: Vec<f64> =
            values.iter().zip(&self.weights).map(|(&v, &w)| if v == 0.0 { 0.0 } else { w * v }).collect();
        pairwise_sum(&terms)
    }
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self::new(Self::DEFAULT_T_MIN, Self::DEFAULT_T_MAX, Self::DEFAULT_POINTS).expect("default time grid")
    }
}

/// `(int |F(t)|^q dt/t)^{1/q}`.
pub fn time_lq_norm<F: Fn(f64) -> f64>(grid: &TimeGrid, f: F, q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::Argument(format!("q must be >= 1, got {q}")));
    }
    Ok(grid.integrate(|t| abs_pow(f(t), q)).max(0.0).powf(1.0 / q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::hermite;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_grid_examples() {
        let g = SpaceGrid::gauss_hermite(80, 1, &[0.0], 1.0).unwrap();
        assert_relative_eq!(g.integrate(|_| 1.0).unwrap(), PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(g.integrate(|y| y[0] * y[0]).unwrap(), PI.sqrt() / 2.0, max_relative = 1e-13);
        assert_relative_eq!(
            g.integrate(|y| hermite(2, y[0]).unwrap().powi(2)).unwrap(),
            8.0 * PI.sqrt(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn total_gaussian_mass_in_several_dimensions() {
        for n in 1..=3 {
            let pts = if n == 3 { 20 } else { 40 };
            let g = SpaceGrid::gauss_hermite(pts, n, &vec![0.0; n], 1.0).unwrap();
            let mass: f64 = g.weights().iter().sum();
            assert_relative_eq!(mass, PI.powf(n as f64 / 2.0), max_relative = 1e-12);
        }
    }

    #[test]
    fn lebesgue_grid_with_shift_and_scale() {
        // int exp(-(y-1)^2/0.5) dy = sqrt(pi * 0.5)
        let g = SpaceGrid::lebesgue(60, 1, &[1.0], 0.5f64.sqrt()).unwrap();
        assert_relative_eq!(
            g.integrate(|y| (-(y[0] - 1.0).powi(2) / 0.5).exp()).unwrap(),
            (PI * 0.5).sqrt(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn grid_preconditions() {
        assert!(matches!(SpaceGrid::gauss_hermite(1, 1, &[0.0], 1.0), Err(Error::Argument(_))));
        assert!(matches!(SpaceGrid::gauss_hermite(201, 1, &[0.0], 1.0), Err(Error::Argument(_))));
        assert!(matches!(SpaceGrid::gauss_hermite(200, 4, &[0.0; 4], 1.0), Err(Error::Capability(_))));
        assert!(matches!(SpaceGrid::gauss_hermite(10, 2, &[0.0], 1.0), Err(Error::Argument(_))));
    }

    #[test]
    fn non_finite_integrand_reports_node() {
        let g = SpaceGrid::gauss_hermite(10, 1, &[0.0], 1.0).unwrap();
        let err = g.integrate(|y| if y[0] > 2.0 { f64::NAN } else { 1.0 }).unwrap_err();
        match err {
            Error::Evaluation { node, .. } => assert!(node[0] > 2.0),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn time_grid_log_measure() {
        let g = TimeGrid::default();
        assert_relative_eq!(g.integrate(|_| 1.0), (g.t_max() / g.t_min()).ln(), max_relative = 1e-12);
        assert!(TimeGrid::new(1.0, 0.5, 100).is_err());
        assert!(TimeGrid::new(1e-3, 1.0, 15).is_err());
    }

    #[test]
    fn time_lq_examples() {
        let g = TimeGrid::default();
        let v = time_lq_norm(&g, |t| t * (-t).exp(), 2.0).unwrap();
        assert_relative_eq!(v, 0.5, max_relative = 1e-10);
        assert_eq!(time_lq_norm(&g, |_| 0.0, 2.0).unwrap(), 0.0);
        let v = time_lq_norm(&g, |t| t.sqrt() * (-t).exp(), 2.0).unwrap();
        assert_relative_eq!(v, 0.5f64.sqrt(), max_relative = 1e-9);
        assert!(time_lq_norm(&g, |t| t, 0.5).is_err());
    }

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre_rule(12);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert_relative_eq!(s, 2.0 / 11.0, max_relative = 1e-13);
    }
}
