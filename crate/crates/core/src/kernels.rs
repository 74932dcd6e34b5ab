//! Pointwise kernels: Euclidean heat, Ornstein-Uhlenbeck (Mehler), the
//! inverse Gaussian heat kernel with its mixed derivatives, Poisson
//! subordination, and the Euclidean Poisson-gradient kernel.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::quadrature::{pairwise_sum, SpaceGrid};
use crate::special::{
    binomial, hermite_table, hermite_tilde_1d, hermite_unchecked, multiindices_of_degree, multinomial, stirling2,
    MultiIndex,
};

/// Largest time-derivative order handled by the closed forms.
pub const MAX_TIME_ORDER: usize = 8;
/// Largest total space-derivative order handled by the closed forms.
pub const MAX_SPACE_ORDER: usize = 6;

/// `1 - e^{-2t}` without cancellation at small `t`.
pub fn one_minus_e2t(t: f64) -> f64 {
    -(-2.0 * t).exp_m1()
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Argument(format!("time must be positive and finite, got {t}")))
    }
}

fn check_dims(x: &[f64], y: &[f64]) -> Result<()> {
    if x.is_empty() || x.len() != y.len() {
        return Err(Error::Argument(format!("point dimensions differ or vanish: {} vs {}", x.len(), y.len())));
    }
    Ok(())
}

fn check_orders(m: usize, k: Option<&MultiIndex>) -> Result<()> {
    if m > MAX_TIME_ORDER {
        return Err(Error::Capability(format!("time-derivative order {m} exceeds {MAX_TIME_ORDER}")));
    }
    if let Some(k) = k {
        if k.degree() > MAX_SPACE_ORDER {
            return Err(Error::Capability(format!("space-derivative order {} exceeds {MAX_SPACE_ORDER}", k.degree())));
        }
    }
    Ok(())
}

/// Which semigroup generator a Poisson kernel subordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Operator {
    #[serde(rename = "A")]
    A,
    #[serde(rename = "A_minus_I")]
    AMinusI,
}

impl Operator {
    /// Heat decay rate of the mode `H~_k` in dimension `n`.
    pub fn heat_rate(self, n: usize, degree: usize) -> f64 {
        match self {
            Operator::A => (n + degree) as f64,
            Operator::AMinusI => (n + degree) as f64 - 1.0,
        }
    }

    /// Poisson decay rate `sqrt(lambda)`.
    pub fn poisson_rate(self, n: usize, degree: usize) -> f64 {
        self.heat_rate(n, degree).sqrt()
    }
}

// ---------------------------------------------------------------- Euclidean heat

/// `W_t(z) = (2 pi t)^{-n/2} e^{-|z|^2 / 2t}`.
pub fn heat_euclid(z: &[f64], t: f64) -> Result<f64> {
    check_time(t)?;
    let n = z.len() as f64;
    let z2: f64 = z.iter().map(|v| v * v).sum();
    Ok((-(z2 / (2.0 * t)) - 0.5 * n * (2.0 * PI * t).ln()).exp())
}

/// `d^l/du^l W_u(z)`; in one dimension `(4u)^{-l} H_{2l}(z / sqrt(2u)) W_u(z)`,
/// tensorized by the multinomial rule.
pub fn dt_heat_euclid(z: &[f64], u: f64, l: usize) -> Result<f64> {
    check_time(u)?;
    if z.is_empty() {
        return Err(Error::Argument("empty point".into()));
    }
    let w = heat_euclid(z, u)?;
    if l == 0 {
        return Ok(w);
    }
    let scale = (2.0 * u).sqrt();
    let tables: Vec<Vec<f64>> = z.iter().map(|&zi| hermite_table(2 * l, zi / scale)).collect();
    let mut terms = Vec::new();
    for r in multiindices_of_degree(z.len(), l) {
        let mut p = multinomial(r.entries()) as f64;
        for (i, &ri) in r.entries().iter().enumerate() {
            p *= tables[i][2 * ri];
        }
        terms.push(p);
    }
    Ok(pairwise_sum(&terms) * (4.0 * u).powi(-(l as i32)) * w)
}

// ---------------------------------------------------------------- Mehler kernels

/// `T^L_t(x, y) = e^{-|y - e^{-t} x|^2 / (1 - e^{-2t})} (1 - e^{-2t})^{-n/2}`.
pub fn mehler_ou(x: &[f64], y: &[f64], t: f64) -> Result<f64> {
    check_dims(x, y)?;
    check_time(t)?;
    let r = (-t).exp();
    let s = one_minus_e2t(t);
    let q: f64 = x.iter().zip(y).map(|(a, b)| (b - r * a).powi(2)).sum();
    Ok((-q / s - 0.5 * x.len() as f64 * s.ln()).exp())
}

/// `T^A_t(x, y) = pi^{-n/2} e^{-nt} e^{-|x - e^{-t} y|^2 / (1 - e^{-2t})} (1 - e^{-2t})^{-n/2}`.
pub fn invgauss_heat(x: &[f64], y: &[f64], t: f64) -> Result<f64> {
    check_dims(x, y)?;
    check_time(t)?;
    let n = x.len() as f64;
    let r = (-t).exp();
    let s = one_minus_e2t(t);
    let q: f64 = x.iter().zip(y).map(|(a, b)| (a - r * b).powi(2)).sum();
    Ok((-q / s - 0.5 * n * s.ln() - n * t - 0.5 * n * PI.ln()).exp())
}

/// Sign convention for the inner coefficients of the time-derivative formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignPattern {
    /// `(-1)^{s_i + l_i}`.
    Corrected,
    /// `(-1)^{l_i}`, the plausible misprint kept as a negative control.
    Uncorrected,
}

/// One inner term: `coef * rho^{2s-l} H_l(.) H_{2s-l}(.)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerTerm {
    pub s: usize,
    pub l: usize,
    pub coef: f64,
}

type InnerCache = Mutex<HashMap<(usize, SignPattern), Arc<Vec<InnerTerm>>>>;

fn inner_cache() -> &'static InnerCache {
    static CACHE: OnceLock<InnerCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients `(-1)^{s+l} 2^{-s} S(r, s) C(s, l)` for one coordinate of order `r`.
pub fn inner_terms(r: usize, pattern: SignPattern) -> Result<Arc<Vec<InnerTerm>>> {
    check_orders(r, None)?;
    let mut cache = inner_cache().lock().expect("coefficient cache poisoned");
    if let Some(v) = cache.get(&(r, pattern)) {
        return Ok(v.clone());
    }
    let mut out = Vec::new();
    for s in 0..=r {
        let st = stirling2(r, s)?;
        if st == 0 {
            continue;
        }
        for l in 0..=s {
            let exponent = match pattern {
                SignPattern::Corrected => s + l,
                SignPattern::Uncorrected => l,
            };
            let sign = if exponent % 2 == 0 { 1.0 } else { -1.0 };
            let coef = sign * st as f64 * binomial(s, l) as f64 * 0.5f64.powi(s as i32);
            out.push(InnerTerm { s, l, coef });
        }
    }
    let out = Arc::new(out);
    cache.insert((r, pattern), out.clone());
    Ok(out)
}

/// `d^m/dt^m T^L_t(x, y)` by the closed Stirling-number formula.
pub fn dt_m_ou(x: &[f64], y: &[f64], t: f64, m: usize) -> Result<f64> {
    dt_m_ou_with(x, y, t, m, SignPattern::Corrected)
}

/// As [`dt_m_ou`] with a selectable sign pattern.
pub fn dt_m_ou_with(x: &[f64], y: &[f64], t: f64, m: usize, pattern: SignPattern) -> Result<f64> {
    check_orders(m, None)?;
    let base = mehler_ou(x, y, t)?;
    if m == 0 {
        return Ok(base);
    }
    let n = x.len();
    let e = (-t).exp();
    let s = one_minus_e2t(t);
    let rho = e / s.sqrt();
    let hx: Vec<Vec<f64>> = x.iter().map(|&xi| hermite_table(m, xi)).collect();
    let hw: Vec<Vec<f64>> = x.iter().zip(y).map(|(&xi, &yi)| hermite_table(2 * m, (yi - e * xi) / s.sqrt())).collect();
    let tables: Vec<Arc<Vec<InnerTerm>>> = (0..=m).map(|r| inner_terms(r, pattern)).collect::<Result<_>>()?;
    let mut outer = Vec::new();
    for r in multiindices_of_degree(n, m) {
        let mut prod = multinomial(r.entries()) as f64;
        for (i, &ri) in r.entries().iter().enumerate() {
            let mut acc = 0.0;
            for term in tables[ri].iter() {
                let a = 2 * term.s - term.l;
                acc += term.coef * rho.powi(a as i32) * hx[i][term.l] * hw[i][a];
            }
            prod *= acc;
        }
        outer.push(prod);
    }
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * base * pairwise_sum(&outer))
}

/// `d_x^k d_t^m T^A_t(x, y)` by the closed mixed-derivative formula.
pub fn dxk_dtm_invgauss(x: &[f64], y: &[f64], t: f64, m: usize, k: &MultiIndex) -> Result<f64> {
    dxk_dtm_invgauss_scaled(x, y, t, m, k, 0.0)
}

/// `e^{ln_scale} d_x^k d_t^m T^A_t(x, y)`, with the factor folded into the exponent.
pub(crate) fn dxk_dtm_invgauss_scaled(
    x: &[f64],
    y: &[f64],
    t: f64,
    m: usize,
    k: &MultiIndex,
    ln_scale: f64,
) -> Result<f64> {
    check_dims(x, y)?;
    check_time(t)?;
    check_orders(m, Some(k))?;
    let n = x.len();
    if k.dim() != n {
        return Err(Error::Argument(format!(
            "derivative multi-index has dimension {} but points have dimension {n}",
            k.dim()
        )));
    }
    let e = (-t).exp();
    let s = one_minus_e2t(t);
    let sq = s.sqrt();
    let rho = e / sq;
    let v: Vec<f64> = x.iter().zip(y).map(|(&xi, &yi)| (xi - e * yi) / sq).collect();
    let hy: Vec<Vec<f64>> = y.iter().map(|&yi| hermite_table(m, yi)).collect();
    let tables: Vec<Arc<Vec<InnerTerm>>> =
        (0..=m).map(|r| inner_terms(r, SignPattern::Corrected)).collect::<Result<_>>()?;
    let nf = n as f64;

    let mut outer = Vec::new();
    for j in 0..=m {
        let cj = binomial(m, j) as f64 * nf.powi((m - j) as i32);
        for r in multiindices_of_degree(n, j) {
            let mut prod = cj * multinomial(r.entries()) as f64;
            for (i, &ri) in r.entries().iter().enumerate() {
                let ki = k[i];
                let mut acc = 0.0;
                for term in tables[ri].iter() {
                    let a = 2 * term.s - term.l;
                    let h = hermite_tilde_1d(a + ki, v[i]);
                    if h == 0.0 {
                        continue;
                    }
                    acc += term.coef * rho.powi(a as i32) * hy[i][term.l] * h;
                }
                let sign = if ki.is_multiple_of(2) { 1.0 } else { -1.0 };
                prod *= sign * acc * sq.powi(-(ki as i32));
            }
            outer.push(prod);
        }
    }
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let prefactor = (ln_scale - nf * t - 0.5 * nf * PI.ln() - 0.5 * nf * s.ln()).exp();
    Ok(sign * prefactor * pairwise_sum(&outer))
}

// ---------------------------------------------------------------- kernel actions

/// Shifted Gauss-Hermite grid matched to `T^A_t(x, .) e^{-|.|^2}`: centre
/// `e^{-t} x`, width `sqrt(1 - e^{-2t})`. Exact for Gaussian-times-polynomial
/// operands with envelope `e^{-|y|^2}`.
pub fn action_grid(x: &[f64], t: f64, points: usize) -> Result<SpaceGrid> {
    check_time(t)?;
    let r = (-t).exp();
    let centre: Vec<f64> = x.iter().map(|v| r * v).collect();
    SpaceGrid::lebesgue(points, x.len(), &centre, one_minus_e2t(t).sqrt())
}

/// `int d_x^k d_t^m T^A_t(x, y) f(y) dy` for operands with envelope `e^{-|y|^2}`.
pub fn invgauss_heat_action<F: Fn(&[f64]) -> f64>(
    f: F,
    x: &[f64],
    t: f64,
    m: usize,
    k: &MultiIndex,
    points: usize,
) -> Result<f64> {
    scaled_heat_action(f, x, t, m, k, points, 0.0)
}

fn scaled_heat_action<F: Fn(&[f64]) -> f64>(
    f: F,
    x: &[f64],
    t: f64,
    m: usize,
    k: &MultiIndex,
    points: usize,
    ln_scale: f64,
) -> Result<f64> {
    let grid = action_grid(x, t, points)?;
    let err = std::cell::RefCell::new(None);
    let v = grid.integrate(|y| match dxk_dtm_invgauss_scaled(x, y, t, m, k, ln_scale) {
        Ok(0.0) => 0.0,
        Ok(kv) => kv * f(y),
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            0.0
        }
    })?;
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// Lebesgue grid for `int T_s(y, z) T_t(x, y) dy`-type products, centred on
/// the product of the two Gaussians in `y`.
pub fn composition_grid(x: &[f64], z: &[f64], t: f64, s: f64, points: usize) -> Result<SpaceGrid> {
    check_dims(x, z)?;
    check_time(t)?;
    check_time(s)?;
    // T_t(x, y): exp(-|x - r_t y|^2 / s_t) has precision r_t^2 / s_t about x / r_t.
    // T_s(y, z): exp(-|y - r_s z|^2 / s_s) has precision 1 / s_s about r_s z.
    let (rt, st) = ((-t).exp(), one_minus_e2t(t));
    let (rs, ss) = ((-s).exp(), one_minus_e2t(s));
    let precision = rt * rt / st + 1.0 / ss;
    let centre: Vec<f64> = x.iter().zip(z).map(|(&xi, &zi)| (rt * xi / st + rs * zi / ss) / precision).collect();
    SpaceGrid::lebesgue(points, x.len(), &centre, precision.sqrt().recip())
}

// ---------------------------------------------------------------- Poisson subordination

/// Log-spaced trapezoid nodes for the subordination integral
/// `(1 / 2 sqrt(pi)) int_0^inf d_t^m [t e^{-t^2/4u}] u^{-3/2} G(u) du`.
#[derive(Debug, Clone)]
pub struct SubordinationRule {
    pub t: f64,
    pub m: usize,
    /// Heat times `u_j`.
    pub nodes: Vec<f64>,
    /// Combined weights: trapezoid step, Jacobian and the subordinator factor.
    pub weights: Vec<f64>,
    /// Upper cutoff `U`; used by the tail term when `G` has a non-zero limit.
    pub u_max: f64,
}

/// Step in `log u`; the integrand is analytic in a strip of half-width `pi/2`.
const SUBORDINATION_STEP: f64 = 1.0 / 8.0;
/// The factor `e^{-t^2/4u}` is below `e^{-LEFT_EXPONENT}` to the left of the grid.
const LEFT_EXPONENT: f64 = 700.0;
const NON_DECAYING_U_MAX: f64 = 1e13;

impl SubordinationRule {
    /// `decay_rate` is the slowest exponential decay of `G`; zero selects a long
    /// range with an analytic tail.
    pub fn new(t: f64, m: usize, decay_rate: f64) -> Result<Self> {
        check_time(t)?;
        check_orders(m, None)?;
        let u_min = t * t / (4.0 * LEFT_EXPONENT);
        let u_max = if decay_rate > 0.0 { 60.0 / decay_rate + t * t + t } else { NON_DECAYING_U_MAX };
        let (a, b) = (u_min.ln(), u_max.ln());
        let count = ((b - a) / SUBORDINATION_STEP).ceil() as usize + 1;
        let h = (b - a) / (count - 1) as f64;
        let mut nodes = Vec::with_capacity(count);
        let mut weights = Vec::with_capacity(count);
        for j in 0..count {
            let u = (a + j as f64 * h).exp();
            let trap = if j == 0 || j == count - 1 { 0.5 * h } else { h };
            // du = u dv
            let w = trap * u * subordinator_derivative(t, u, m) * u.powf(-1.5) / (2.0 * PI.sqrt());
            nodes.push(u);
            weights.push(w);
        }
        Ok(Self { t, m, nodes, weights, u_max })
    }

    /// Quadrature of `G` plus, for non-decaying `G`, the analytic tail with
    /// `G(u) ~ limit` beyond the last node.
    pub fn apply(&self, values: &[f64], limit: f64) -> f64 {
        assert_eq!(values.len(), self.nodes.len());
        let terms: Vec<f64> =
            values.iter().zip(&self.weights).map(|(&g, &w)| if g == 0.0 || w == 0.0 { 0.0 } else { g * w }).collect();
        let mut total = pairwise_sum(&terms);
        if limit != 0.0 {
            total += limit * self.tail_factor();
        }
        total
    }

    /// `d_t^m erf(t / 2 sqrt(U))`: the subordination integral of a constant over `[U, inf)`.
    fn tail_factor(&self) -> f64 {
        let scale = 2.0 * self.u_max.sqrt();
        let tau = self.t / scale;
        if self.m == 0 {
            return erf(tau);
        }
        let sign = if (self.m - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * 2.0 / PI.sqrt() * scale.powi(-(self.m as i32)) * hermite_unchecked(self.m - 1, tau) * (-tau * tau).exp()
    }

    /// Evaluate `G` at every node and apply the rule.
    pub fn integrate<G: Fn(f64) -> Result<f64>>(&self, g: G, limit: f64) -> Result<f64> {
        let values: Vec<f64> = self.nodes.iter().map(|&u| g(u)).collect::<Result<_>>()?;
        Ok(self.apply(&values, limit))
    }
}

/// `d_t^m [t e^{-t^2/4u}] = 2u (-1)^m (4u)^{-(m+1)/2} H_{m+1}(t / 2 sqrt(u)) e^{-t^2/4u}`.
pub fn subordinator_derivative(t: f64, u: f64, m: usize) -> f64 {
    let tau = t / (2.0 * u.sqrt());
    let g = (-tau * tau).exp();
    if g == 0.0 {
        return 0.0;
    }
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * 2.0 * u * (4.0 * u).powf(-0.5 * (m + 1) as f64) * hermite_unchecked(m + 1, tau) * g
}

fn erf(x: f64) -> f64 {
    statrs::function::erf::erf(x)
}

/// Heat decay rate used to size the subordination range.
fn slowest_rate(op: Operator, n: usize) -> f64 {
    op.heat_rate(n, 0)
}

/// `d_x^k d_t^m P_t(x, y)` for the Poisson semigroup subordinated to `A` or `A - I`.
pub fn poisson_kernel_derivative(x: &[f64], y: &[f64], t: f64, m: usize, k: &MultiIndex, op: Operator) -> Result<f64> {
    check_dims(x, y)?;
    check_orders(m, Some(k))?;
    let n = x.len();
    let rate = slowest_rate(op, n);
    let rule = SubordinationRule::new(t, m, rate)?;
    let shift = matches!(op, Operator::AMinusI);
    // n = 1, A - I: e^u T^A_u(x, y) tends to pi^{-1/2} d_x^k e^{-x^2}.
    let limit = if rate == 0.0 {
        let sign = if k.degree().is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * PI.powf(-0.5 * n as f64) * crate::special::hermite_tilde(k, x)?
    } else {
        0.0
    };
    rule.integrate(|u| dxk_dtm_invgauss_scaled(x, y, u, 0, k, if shift { u } else { 0.0 }), limit)
}

/// `P_t(x, y)` for the Poisson semigroup subordinated to `A` or `A - I`.
pub fn poisson_kernel(x: &[f64], y: &[f64], t: f64, op: Operator) -> Result<f64> {
    poisson_kernel_derivative(x, y, t, 0, &MultiIndex::zeros(x.len()), op)
}

/// `d_x^k d_t^m P_t f(x)` by subordination of the Gauss-Hermite heat action,
/// for operands with envelope `e^{-|y|^2}`. `zero_mode` is the `H~_0`
/// coefficient of `f`, used only for the non-decaying `A - I`, `n = 1` case.
#[allow(clippy::too_many_arguments)]
pub fn poisson_action_quadrature<F: Fn(&[f64]) -> f64>(
    f: F,
    x: &[f64],
    t: f64,
    m: usize,
    k: &MultiIndex,
    op: Operator,
    points: usize,
    zero_mode: f64,
) -> Result<f64> {
    let n = x.len();
    let rate = slowest_rate(op, n);
    let rule = SubordinationRule::new(t, m, rate)?;
    let shift = matches!(op, Operator::AMinusI);
    let limit = if rate == 0.0 {
        zero_mode
            * crate::special::hermite_tilde(&k.clone(), x).map(|h| {
                let sign = if k.degree().is_multiple_of(2) { 1.0 } else { -1.0 };
                sign * h
            })?
    } else {
        0.0
    };
    rule.integrate(|u| scaled_heat_action(&f, x, u, 0, k, points, if shift { u } else { 0.0 }), limit)
}

// ---------------------------------------------------------------- Euclidean Poisson gradient

/// `c_n = -2^{n/2+1} (n+1) pi^{-(n+1)/2} Gamma((n+1)/2)`.
pub fn poisson_grad_constant(n: usize) -> f64 {
    let nf = n as f64;
    -(2f64.powf(nf / 2.0 + 1.0))
        * (nf + 1.0)
        * PI.powf(-(nf + 1.0) / 2.0)
        * statrs::function::gamma::gamma((nf + 1.0) / 2.0)
}

/// `K^i_t(x) = c_n x_i t^2 (t^2 + 2|x|^2)^{-(n+3)/2}`.
pub fn euclid_poisson_grad_kernel(x: &[f64], t: f64, i: usize) -> Result<f64> {
    check_time(t)?;
    if i >= x.len() {
        return Err(Error::Argument(format!("coordinate {i} out of range for dimension {}", x.len())));
    }
    let n = x.len();
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let base = t * t + 2.0 * r2;
    Ok(poisson_grad_constant(n) * x[i] * t * t * base.powf(-(n as f64 + 3.0) / 2.0))
}

/// Result of fitting `|K^_t(y)| = C |y| e^{-c t |y|}` to a discrete transform.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FourierProfileFit {
    pub amplitude: f64,
    pub rate: f64,
    /// Largest relative deviation of the modulus from the fitted profile.
    pub max_deviation: f64,
    pub frequencies: Vec<f64>,
    pub modulus: Vec<f64>,
}

/// Discrete Fourier transform of the one-dimensional kernel on `[-L, L]`
/// with `2N+1` points, evaluated at `frequencies` (all non-zero).
pub fn poisson_grad_transform_1d(t: f64, half_width: f64, half_points: usize, frequencies: &[f64]) -> Result<Vec<f64>> {
    check_time(t)?;
    if half_points == 0 || !(half_width > 0.0) {
        return Err(Error::Argument("transform grid must be non-empty".into()));
    }
    let h = half_width / half_points as f64;
    // Odd kernel: K^(y) = -2i sum_{x>0} K(x) sin(xy) h.
    let values: Vec<f64> = (1..=half_points)
        .map(|j| {
            let x = j as f64 * h;
            let w = if j == half_points { 0.5 * h } else { h };
            w * euclid_poisson_grad_kernel(&[x], t, 0).expect("valid input")
        })
        .collect();
    Ok(frequencies
        .iter()
        .map(|&y| {
            let terms: Vec<f64> = values.iter().enumerate().map(|(j, &v)| v * ((j + 1) as f64 * h * y).sin()).collect();
            (2.0 * pairwise_sum(&terms)).abs()
        })
        .collect())
}

/// Least-squares fit of `log(|K^| / |y|) = log C - c t |y|`.
pub fn fit_fourier_profile(t: f64, frequencies: &[f64], modulus: &[f64]) -> Result<FourierProfileFit> {
    if frequencies.len() < 2 || frequencies.len() != modulus.len() {
        return Err(Error::Argument("need at least two matching samples".into()));
    }
    let xs: Vec<f64> = frequencies.iter().map(|y| t * y.abs()).collect();
    let ys: Vec<f64> = frequencies.iter().zip(modulus).map(|(y, m)| (m / y.abs()).ln()).collect();
    let len = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let amplitude = intercept.exp();
    let rate = -slope;
    let max_deviation = frequencies
        .iter()
        .zip(modulus)
        .map(|(y, m)| {
            let model = amplitude * y.abs() * (-rate * t * y.abs()).exp();
            ((m - model) / model).abs()
        })
        .fold(0.0, f64::max);
    Ok(FourierProfileFit {
        amplitude,
        rate,
        max_deviation,
        frequencies: frequencies.to_vec(),
        modulus: modulus.to_vec(),
    })
}

// ---------------------------------------------------------------- queries

/// Time-derivative order of a kernel request.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeOrder {
    Integer(usize),
    Fractional(f64),
}

/// A pointwise kernel request `d_x^k d_t^m K_t(x, y)`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct KernelQuery {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub t: f64,
    pub time_order: TimeOrder,
    pub space_order: MultiIndex,
}

impl KernelQuery {
    pub fn new(x: Vec<f64>, y: Vec<f64>, t: f64, m: usize, k: MultiIndex) -> Result<Self> {
        let q = Self { x, y, t, time_order: TimeOrder::Integer(m), space_order: k };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        check_dims(&self.x, &self.y)?;
        check_time(self.t)?;
        if self.space_order.dim() != self.x.len() {
            return Err(Error::Argument("space order dimension mismatch".into()));
        }
        Ok(())
    }

    fn integer_order(&self) -> Result<usize> {
        match self.time_order {
            TimeOrder::Integer(m) => Ok(m),
            TimeOrder::Fractional(b) => Err(Error::Capability(format!(
                "fractional order {b} has no pointwise kernel; use the spectral calculus"
            ))),
        }
    }

    /// Evaluate against the inverse Gaussian heat kernel.
    pub fn invgauss_heat(&self) -> Result<f64> {
        self.validate()?;
        dxk_dtm_invgauss(&self.x, &self.y, self.t, self.integer_order()?, &self.space_order)
    }

    /// Evaluate against a subordinated Poisson kernel.
    pub fn poisson(&self, op: Operator) -> Result<f64> {
        self.validate()?;
        poisson_kernel_derivative(&self.x, &self.y, self.t, self.integer_order()?, &self.space_order, op)
    }
}
