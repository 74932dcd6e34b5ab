//! Sampled verification of kernel estimates whose constants are only known to
//! exist. The constant is fitted as the largest sampled ratio `lhs / rhs`, and
//! its growth from the first half of the samples to the full set is reported.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::kernels::{dt_heat_euclid, dxk_dtm_invgauss, one_minus_e2t, MAX_SPACE_ORDER};
use crate::quadrature::{abs_pow, TimeGrid};
use crate::regions::{in_local_region, local_radius};
use crate::special::MultiIndex;

/// Consecutive rejected draws tolerated before a sampler is declared degenerate.
pub const MAX_REJECTIONS: usize = 100_000;

/// The sampled estimates. Serialized identifiers follow the labels used by
/// the CLI: `AcotDeriv`, `A2_neg`, `A2_pos`, `b`, `c`, `diferencia`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Bound {
    /// `|t^{m+|k|/2} d_x^k d_t^m T_t(x,y)| <= C e^{-t/2} s^{-n/2} e^{(eta-delta)(|y|^2-|x|^2)/2} e^{-delta |x-e^{-t}y|^2/s}`.
    #[serde(rename = "AcotDeriv")]
    Pointwise,
    /// Global region, `<x,y> <= 0`: `R_{m,k} <= C e^{-(eta+delta)|x|^2/2 + (eta-delta)|y|^2/2}`.
    #[serde(rename = "A2_neg")]
    GlobalNonPositive,
    /// Global region, `<x,y> > 0`: `R_{m,k} <= C |x+y|^n e^{eta(|y|^2-|x|^2)/2 - delta|x+y||x-y|/2}`.
    #[serde(rename = "A2_pos")]
    GlobalPositive,
    /// `R_{m,k} <= C |x-y|^{-n}` on `N_2`.
    #[serde(rename = "b")]
    LocalSize,
    /// `max_i || t^{m+|k|/2} d_t^m d_{x_i} d_x^k T_t(x,y) ||_{L^q(dt/t)} <= C |x-y|^{-n-1}` on `N_2`.
    #[serde(rename = "c")]
    LocalGradient,
    /// `|| t d_t (W_t(x-y) - T_t(x,y)) ||_{L^q(dt/t)} <= C sqrt(1+|x|) |x-y|^{1/2-n}` on `N_1`.
    #[serde(rename = "diferencia")]
    HeatDifference,
}

impl Bound {
    pub const ALL: [Bound; 6] = [
        Bound::Pointwise,
        Bound::GlobalNonPositive,
        Bound::GlobalPositive,
        Bound::LocalSize,
        Bound::LocalGradient,
        Bound::HeatDifference,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Bound::Pointwise => "AcotDeriv",
            Bound::GlobalNonPositive => "A2_neg",
            Bound::GlobalPositive => "A2_pos",
            Bound::LocalSize => "b",
            Bound::LocalGradient => "c",
            Bound::HeatDifference => "diferencia",
        }
    }

    /// Resolve an identifier; `A2` expands to both branches.
    pub fn parse(id: &str) -> Result<Vec<Bound>> {
        if id == "A2" {
            return Ok(vec![Bound::GlobalNonPositive, Bound::GlobalPositive]);
        }
        Bound::ALL
            .iter()
            .find(|b| b.id() == id)
            .map(|b| vec![*b])
            .ok_or_else(|| Error::Argument(format!("unknown bound id {id:?}")))
    }

    /// Branch of the global estimate selected by the sign of `<x,y>`.
    pub fn global_branch(x: &[f64], y: &[f64]) -> Bound {
        if dot(x, y) <= 0.0 {
            Bound::GlobalNonPositive
        } else {
            Bound::GlobalPositive
        }
    }
}

/// Parameters shared by the estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub n: usize,
    pub m: usize,
    pub k: MultiIndex,
    pub q: f64,
    pub eta: f64,
    pub delta: f64,
    /// Spatial sampling radius.
    pub radius: f64,
}

impl BoundParams {
    pub fn new(n: usize, m: usize, k: MultiIndex, q: f64, eta: f64, delta: f64) -> Result<Self> {
        let p = Self { n, m, k, q, eta, delta, radius: 4.0 };
        p.validate()?;
        Ok(p)
    }

    /// `n = 1, k = 0, q = 2`, `eta = 0.9`, `delta = 0.6` for `n = 1` and `0.8` otherwise.
    pub fn defaults(n: usize, m: usize) -> Result<Self> {
        let delta = if n == 1 { 0.6 } else { 0.8 };
        Self::new(n, m, MultiIndex::zeros(n), 2.0, 0.9, delta)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.k.dim() != self.n {
            return Err(Error::Argument(format!("derivative index {} does not match dimension {}", self.k, self.n)));
        }
        if !(0.0 < self.delta && self.delta < self.eta && self.eta < 1.0) {
            return Err(Error::Argument(format!(
                "need 0 < delta < eta < 1, got delta = {}, eta = {}",
                self.delta, self.eta
            )));
        }
        if !(self.q > 1.0) {
            return Err(Error::Argument(format!("q must exceed 1, got {}", self.q)));
        }
        if !(self.radius > 0.0) {
            return Err(Error::Argument(format!("sampling radius must be positive, got {}", self.radius)));
        }
        Ok(())
    }

    /// `eta - delta < 2/p < eta + delta`.
    pub fn check_exponent(&self, p: f64) -> Result<()> {
        let r = 2.0 / p;
        if self.eta - self.delta < r && r < self.eta + self.delta {
            Ok(())
        } else {
            Err(Error::Argument(format!(
                "need eta - delta < 2/p < eta + delta, got eta = {}, delta = {}, p = {p}",
                self.eta, self.delta
            )))
        }
    }

    /// `1/n > q (1 - delta)`, required by the positive global branch.
    pub fn check_global_positive(&self) -> Result<()> {
        if 1.0 / self.n as f64 > self.q * (1.0 - self.delta) {
            Ok(())
        } else {
            Err(Error::Argument(format!(
                "need 1/n > q(1 - delta), got n = {}, q = {}, delta = {}",
                self.n, self.q, self.delta
            )))
        }
    }
}

/// One sampled point; `t` is present for pointwise estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub t: Option<f64>,
}

impl Sample {
    fn coordinates(&self) -> Vec<f64> {
        let mut v = self.x.clone();
        v.extend(&self.y);
        v.extend(self.t);
        v
    }
}

/// Sample attaining the fitted constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub sample: Sample,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_id: String,
    pub samples: usize,
    pub fitted_constant: f64,
    /// Constant fitted on the first half of the samples.
    pub half_sample_constant: f64,
    pub max_ratio_location: SampleRecord,
    pub violations_at_fitted: usize,
}

impl BoundReport {
    /// Relative growth of the fitted constant under sample doubling.
    pub fn growth(&self) -> f64 {
        if self.half_sample_constant == 0.0 {
            return if self.fitted_constant == 0.0 { 0.0 } else { f64::INFINITY };
        }
        self.fitted_constant / self.half_sample_constant - 1.0
    }

    pub fn is_stable(&self, tolerance: f64) -> bool {
        self.fitted_constant.is_finite() && self.growth() <= tolerance
    }

    pub const CSV_HEADER: &'static str =
        "bound_id,samples,fitted_constant,half_sample_constant,growth,violations_at_fitted,max_x,max_y,max_t";

    pub fn csv_row(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|c| format!("{c:.17e}")).collect::<Vec<_>>().join(" ");
        let loc = &self.max_ratio_location.sample;
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{:.17e},{:.17e},{:.6e},{},{},{},{}",
            self.bound_id,
            self.samples,
            self.fitted_constant,
            self.half_sample_constant,
            self.growth(),
            self.violations_at_fitted,
            join(&loc.x),
            join(&loc.y),
            loc.t.map(|t| format!("{t:.17e}")).unwrap_or_default()
        );
        s
    }
}

/// Best points kept as starting points for refinement.
pub const POLISH_STARTS: usize = 4;
/// Proposals spent refining each starting point at each checkpoint.
pub const POLISH_STEPS: usize = 96;

struct Evaluated {
    u: Vec<f64>,
    record: SampleRecord,
}

/// Fit `C = max lhs/rhs`. Points come from `sampler`, a map from the unit cube
/// `[0, 1)^dim` that may reject a coordinate vector by returning `None`;
/// `ln_rhs` returns the logarithm of the right-hand shape. After the first
/// `samples / 2` uniform draws and again after all `samples`, the best few
/// points are refined by a random local search in cube coordinates.
pub fn verify_bound<R, S, L, H>(
    bound_id: &str,
    samples: usize,
    dim: usize,
    rng: &mut R,
    sampler: S,
    lhs: L,
    ln_rhs: H,
) -> Result<BoundReport>
where
    R: Rng,
    S: Fn(&[f64]) -> Option<Sample>,
    L: Fn(&Sample) -> Result<f64>,
    H: Fn(&Sample) -> f64,
{
    if samples < 2 {
        return Err(Error::Sampling(format!("{bound_id}: need at least 2 samples, got {samples}")));
    }
    let ratio_of = |s: &Sample| -> Result<f64> {
        let v = lhs(s)?;
        let lr = ln_rhs(s);
        if !v.is_finite() || lr.is_nan() {
            return Err(Error::Evaluation { node: s.coordinates(), value: if v.is_finite() { lr } else { v } });
        }
        let ratio = if v == 0.0 { 0.0 } else { (v.abs().ln() - lr).exp() };
        if !ratio.is_finite() {
            return Err(Error::Evaluation { node: s.coordinates(), value: ratio });
        }
        Ok(ratio)
    };
    let mut ratios = Vec::with_capacity(samples + 2 * POLISH_STARTS * POLISH_STEPS);
    // descending by ratio
    let mut top: Vec<Evaluated> = Vec::with_capacity(POLISH_STARTS + 1);
    let mut half = 0.0;
    let mut drawn = 0;
    while drawn < samples {
        let mut rejected = 0;
        let (u, s) = loop {
            let u: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
            if let Some(s) = sampler(&u) {
                break (u, s);
            }
            rejected += 1;
            if rejected >= MAX_REJECTIONS {
                return Err(Error::Sampling(format!(
                    "{bound_id}: sampler produced no admissible point in {MAX_REJECTIONS} draws"
                )));
            }
        };
        let ratio = ratio_of(&s)?;
        ratios.push(ratio);
        let at = top.iter().position(|e| ratio > e.record.ratio).unwrap_or(top.len());
        if at < POLISH_STARTS {
            top.insert(at, Evaluated { u, record: SampleRecord { sample: s, ratio } });
            top.truncate(POLISH_STARTS);
        }
        drawn += 1;
        if drawn == samples / 2 || drawn == samples {
            top = top.into_iter().map(|e| polish(e, rng, &sampler, &ratio_of, &mut ratios)).collect::<Result<_>>()?;
            top.sort_by(|a, b| b.record.ratio.total_cmp(&a.record.ratio));
            if drawn == samples / 2 {
                half = top[0].record.ratio;
            }
        }
    }
    let best = top.into_iter().next();
    let best = best.expect("at least one sample").record;
    let fitted = best.ratio;
    let violations = ratios.iter().filter(|&&r| r > fitted).count();
    Ok(BoundReport {
        bound_id: bound_id.to_string(),
        samples,
        fitted_constant: fitted,
        half_sample_constant: half,
        max_ratio_location: best,
        violations_at_fitted: violations,
    })
}

/// Box-proposal hill climb; the step halves after eight straight failures.
fn polish<R, S, F>(
    mut cur: Evaluated,
    rng: &mut R,
    sampler: &S,
    ratio_of: &F,
    ratios: &mut Vec<f64>,
) -> Result<Evaluated>
where
    R: Rng,
    S: Fn(&[f64]) -> Option<Sample>,
    F: Fn(&Sample) -> Result<f64>,
{
    let mut step = 0.05;
    let mut misses = 0;
    for _ in 0..POLISH_STEPS {
        let u: Vec<f64> = cur.u.iter().map(|&c| reflect(c + step * rng.gen_range(-1.0..1.0))).collect();
        let improved = match sampler(&u) {
            Some(s) => {
                let ratio = ratio_of(&s)?;
                ratios.push(ratio);
                if ratio > cur.record.ratio {
                    cur = Evaluated { u, record: SampleRecord { sample: s, ratio } };
                    true
                } else {
                    false
                }
            }
            None => false,
        };
        if improved {
            misses = 0;
        } else {
            misses += 1;
            if misses == 8 {
                step *= 0.5;
                misses = 0;
            }
        }
    }
    Ok(cur)
}

/// Folds a coordinate back into `[0, 1)`.
fn reflect(v: f64) -> f64 {
    let r = if v < 0.0 {
        -v
    } else if v >= 1.0 {
        2.0 - v
    } else {
        v
    };
    r.clamp(0.0, 1.0 - f64::EPSILON)
}

/// Run one of the built-in estimates with a seeded sampler.
pub fn sample_bound(bound: Bound, params: &BoundParams, samples: usize, seed: u64) -> Result<BoundReport> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = params;
    let id = bound.id();
    match bound {
        Bound::Pointwise => {
            check_space_order(p.k.degree())?;
            verify_bound(
                id,
                samples,
                2 * p.n + 2,
                &mut rng,
                |u| Some(pointwise_sample(p, u)),
                |s| pointwise_lhs(p, s),
                |s| pointwise_ln_rhs(p, s),
            )
        }
        Bound::GlobalNonPositive | Bound::GlobalPositive => {
            check_space_order(p.k.degree())?;
            if bound == Bound::GlobalPositive {
                p.check_global_positive()?;
            }
            let grid = kernel_time_grid()?;
            verify_bound(
                id,
                samples,
                2 * p.n + 2,
                &mut rng,
                |u| global_sample(p, bound, u),
                |s| kernel_lq_norm(p, &p.k, &s.x, &s.y, &grid),
                |s| global_ln_rhs(p, bound, s),
            )
        }
        Bound::LocalSize => {
            check_space_order(p.k.degree())?;
            let grid = kernel_time_grid()?;
            verify_bound(
                id,
                samples,
                2 * p.n + 2,
                &mut rng,
                |u| Some(local_sample(p, 2.0, u)),
                |s| kernel_lq_norm(p, &p.k, &s.x, &s.y, &grid),
                |s| -(p.n as f64) * distance(&s.x, &s.y).ln(),
            )
        }
        Bound::LocalGradient => {
            check_space_order(p.k.degree() + 1)?;
            let grid = kernel_time_grid()?;
            verify_bound(
                id,
                samples,
                2 * p.n + 2,
                &mut rng,
                |u| Some(local_sample(p, 2.0, u)),
                |s| {
                    let mut worst = 0.0f64;
                    for i in 0..p.n {
                        worst = worst.max(kernel_lq_norm(p, &p.k.plus_unit(i), &s.x, &s.y, &grid)?);
                    }
                    Ok(worst)
                },
                |s| -(p.n as f64 + 1.0) * distance(&s.x, &s.y).ln(),
            )
        }
        Bound::HeatDifference => {
            let grid = difference_time_grid()?;
            verify_bound(
                id,
                samples,
                2 * p.n + 2,
                &mut rng,
                |u| Some(local_sample(p, 1.0, u)),
                |s| heat_difference_lq_norm(p.q, &s.x, &s.y, &grid),
                |s| 0.5 * (1.0 + norm(&s.x)).ln() - (p.n as f64 - 0.5) * distance(&s.x, &s.y).ln(),
            )
        }
    }
}

fn check_space_order(order: usize) -> Result<()> {
    if order > MAX_SPACE_ORDER {
        return Err(Error::Capability(format!("space order {order} exceeds {MAX_SPACE_ORDER}")));
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt()
}

/// `lo (hi/lo)^u`.
fn log_uniform(lo: f64, hi: f64, u: f64) -> f64 {
    lo * (hi / lo).powf(u)
}

/// Uniform direction from `n` cube coordinates through the normal quantile.
fn unit_direction(u: &[f64]) -> Vec<f64> {
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let v: Vec<f64> = u.iter().map(|&c| normal.inverse_cdf(c.clamp(1e-12, 1.0 - 1e-12))).collect();
    let r = norm(&v);
    if r > 0.0 {
        v.into_iter().map(|c| c / r).collect()
    } else {
        let mut e = vec![0.0; u.len()];
        e[0] = 1.0;
        e
    }
}

/// Log-radial point from `n + 1` coordinates: `|x|` log-uniform in `[radius/100, radius]`.
fn log_radial(n: usize, radius: f64, u: &[f64]) -> Vec<f64> {
    let r = log_uniform(radius / 100.0, radius, u[0]);
    unit_direction(&u[1..=n]).into_iter().map(|d| r * d).collect()
}

/// `(x, y, t)` with `t` log-uniform in `[1e-3, 8]` and `y` placed through the
/// normalized offset `w = (x - e^{-t} y)/sqrt(s)`, `w` uniform in `[-3, 3]^n`.
fn pointwise_sample(p: &BoundParams, u: &[f64]) -> Sample {
    let n = p.n;
    let x = log_radial(n, p.radius, u);
    let t = log_uniform(1e-3, 8.0, u[n + 1]);
    let sq = one_minus_e2t(t).sqrt();
    let et = t.exp();
    let y = x.iter().zip(&u[n + 2..]).map(|(&xi, &c)| et * (xi - sq * (6.0 * c - 3.0))).collect();
    Sample { x, y, t: Some(t) }
}

fn pointwise_lhs(p: &BoundParams, s: &Sample) -> Result<f64> {
    let t = s.t.expect("pointwise sample carries t");
    let w = p.m as f64 + 0.5 * p.k.degree() as f64;
    Ok(t.powf(w) * dxk_dtm_invgauss(&s.x, &s.y, t, p.m, &p.k)?.abs())
}

fn pointwise_ln_rhs(p: &BoundParams, s: &Sample) -> f64 {
    let t = s.t.expect("pointwise sample carries t");
    let e = (-t).exp();
    let sv = one_minus_e2t(t);
    let off: f64 = s.x.iter().zip(&s.y).map(|(a, b)| (a - e * b).powi(2)).sum();
    -0.5 * t - 0.5 * p.n as f64 * sv.ln() + 0.5 * (p.eta - p.delta) * (dot(&s.y, &s.y) - dot(&s.x, &s.x))
        - p.delta * off / sv
}

/// Log-radial `x` and `y` in the global region `N_1^c` on the requested branch.
fn global_sample(p: &BoundParams, bound: Bound, u: &[f64]) -> Option<Sample> {
    let n = p.n;
    let x = log_radial(n, p.radius, u);
    let y = log_radial(n, p.radius, &u[n + 1..]);
    if in_local_region(&x, &y, 1.0) || Bound::global_branch(&x, &y) != bound {
        return None;
    }
    Some(Sample { x, y, t: None })
}

fn global_ln_rhs(p: &BoundParams, bound: Bound, s: &Sample) -> f64 {
    let (x2, y2) = (dot(&s.x, &s.x), dot(&s.y, &s.y));
    if bound == Bound::GlobalNonPositive {
        -0.5 * (p.eta + p.delta) * x2 + 0.5 * (p.eta - p.delta) * y2
    } else {
        let plus: Vec<f64> = s.x.iter().zip(&s.y).map(|(a, b)| a + b).collect();
        let sum = norm(&plus);
        p.n as f64 * sum.ln() + 0.5 * p.eta * (y2 - x2) - 0.5 * p.delta * sum * distance(&s.x, &s.y)
    }
}

/// `x` log-radial, `y = x + rho d` with `d` a uniform direction. For the local
/// radius `R = nu n sqrt(m(x))`, the lower half of the `rho` coordinate is
/// log-uniform on `[1e-3 R, R)` (near-diagonal singularity) and the upper half
/// uniform in the ball (the outer shell, where the ratios peak).
fn local_sample(p: &BoundParams, nu: f64, u: &[f64]) -> Sample {
    let n = p.n;
    let x = log_radial(n, p.radius, u);
    let rad = local_radius(&x, nu);
    let c = u[n + 1];
    let rho = if c < 0.5 { log_uniform(1e-3 * rad, rad, 2.0 * c) } else { rad * (2.0 * c - 1.0).powf(1.0 / n as f64) };
    let y = x.iter().zip(unit_direction(&u[n + 2..])).map(|(a, d)| a + rho * d).collect();
    Sample { x, y, t: None }
}

fn kernel_time_grid() -> Result<TimeGrid> {
    TimeGrid::new(1e-14, 60.0, 1536)
}

fn difference_time_grid() -> Result<TimeGrid> {
    TimeGrid::new(1e-14, 1e10, 2048)
}

/// `R(x,y) = || t^{m+|k_0|/2} d_t^m d_x^k T_t(x,y) ||_{L^q(dt/t)}` where the
/// weight uses the base index `k_0 = params.k`.
fn kernel_lq_norm(p: &BoundParams, k: &MultiIndex, x: &[f64], y: &[f64], grid: &TimeGrid) -> Result<f64> {
    let w = p.m as f64 + 0.5 * p.k.degree() as f64;
    let mut vals = Vec::with_capacity(grid.points());
    for &t in grid.nodes() {
        let d = dxk_dtm_invgauss(x, y, t, p.m, k)?;
        vals.push(abs_pow(t.powf(w) * d, p.q));
    }
    Ok(grid.integrate_values(&vals).max(0.0).powf(1.0 / p.q))
}

fn heat_difference_lq_norm(q: f64, x: &[f64], y: &[f64], grid: &TimeGrid) -> Result<f64> {
    let z: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let zero = MultiIndex::zeros(x.len());
    let mut vals = Vec::with_capacity(grid.points());
    for &t in grid.nodes() {
        let d = dt_heat_euclid(&z, t, 1)? - dxk_dtm_invgauss(x, y, t, 1, &zero)?;
        vals.push(abs_pow(t * d, q));
    }
    Ok(grid.integrate_values(&vals).max(0.0).powf(1.0 / q))
}
