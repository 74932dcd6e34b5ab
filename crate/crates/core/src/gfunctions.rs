//! Littlewood-Paley g-functions: scalar and `l^r`-valued, heat and Poisson,
//! full or split into local and global parts, plus the maximal operator.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::corpus::Member;
use crate::error::{Error, Result};
use crate::kernels::{
    dt_heat_euclid, dxk_dtm_invgauss_scaled, one_minus_e2t, subordinator_derivative, Operator, SubordinationRule,
};
use crate::quadrature::{abs_pow, gauss_legendre_rule, pairwise_sum, SpaceGrid, TimeGrid};
use crate::regions::local_radius;
use crate::special::{hermite_tilde, MultiIndex};
use crate::spectral::{HermiteExpansion, Semigroup};

/// `l^r` norm on `R^m`; `r = inf` allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    pub r: f64,
    pub m: usize,
}

impl NormSpec {
    pub fn new(r: f64, m: usize) -> Result<Self> {
        if !(r >= 1.0) || m == 0 {
            return Err(Error::Argument(format!("need r >= 1 and m >= 1, got ({r}, {m})")));
        }
        Ok(Self { r, m })
    }

    pub fn scalar() -> Self {
        Self { r: 2.0, m: 1 }
    }

    pub fn norm(&self, v: &[f64]) -> f64 {
        if v.len() == 1 {
            return v[0].abs();
        }
        if self.r.is_infinite() {
            return v.iter().fold(0.0, |a, x| a.max(x.abs()));
        }
        if self.r == 2.0 {
            return v.iter().map(|x| x * x).sum::<f64>().sqrt();
        }
        let mx = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if mx == 0.0 {
            return 0.0;
        }
        mx * v.iter().map(|x| abs_pow(x / mx, self.r)).sum::<f64>().powf(1.0 / self.r)
    }
}

/// Where the kernel is allowed to see the operand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "nu")]
pub enum Region {
    Full,
    Local(f64),
    Global(f64),
}

/// Parameters of `g^{q,X}_{beta,k}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GFunctionSpec {
    pub beta: f64,
    pub k: MultiIndex,
    pub q: f64,
    pub semigroup: Semigroup,
    pub norm: NormSpec,
    pub region: Region,
}

impl GFunctionSpec {
    pub fn scalar(beta: f64, k: MultiIndex, q: f64, semigroup: Semigroup) -> Result<Self> {
        let s = Self { beta, k, q, semigroup, norm: NormSpec::scalar(), region: Region::Full };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q > 1.0) {
            return Err(Error::Argument(format!("q must exceed 1, got {}", self.q)));
        }
        if !(self.beta > 0.0) {
            return Err(Error::Argument(format!("beta must be positive, got {}", self.beta)));
        }
        match self.region {
            Region::Local(nu) | Region::Global(nu) if !(nu > 0.0) => {
                Err(Error::Argument(format!("region parameter must be positive, got {nu}")))
            }
            _ => Ok(()),
        }
    }

    /// Exponent `w` of the time weight `t^w`: `beta + |k|/2` for heat, `beta + |k|` for Poisson.
    pub fn time_weight(&self) -> f64 {
        let kd = self.k.degree() as f64;
        if self.semigroup.is_poisson() {
            self.beta + kd
        } else {
            self.beta + 0.5 * kd
        }
    }

    fn integer_beta(&self) -> Result<usize> {
        let b = self.beta.round();
        if (self.beta - b).abs() > 1e-12 || b < 1.0 {
            return Err(Error::Capability(format!(
                "kernel-path evaluation needs an integer order, got beta = {}",
                self.beta
            )));
        }
        Ok(b as usize)
    }
}

fn check_compat(spec: &GFunctionSpec, f: &HermiteExpansion, x: &[f64]) -> Result<()> {
    spec.validate()?;
    if f.vector_dim() != spec.norm.m {
        return Err(Error::Argument(format!(
            "operand has {} components but the norm expects {}",
            f.vector_dim(),
            spec.norm.m
        )));
    }
    if f.dimension() != x.len() || spec.k.dim() != x.len() {
        return Err(Error::Argument("operand, point and derivative dimensions differ".into()));
    }
    Ok(())
}

/// Values of `t^w d_x^k d_t^beta S_t f(x)` (vector of length `m`) at every time node,
/// from the spectral multipliers.
fn spectral_integrand(spec: &GFunctionSpec, f: &HermiteExpansion, x: &[f64], times: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = f.dimension();
    let m = f.vector_dim();
    let sign = if spec.k.degree().is_multiple_of(2) { 1.0 } else { -1.0 };
    // group modes by rate; each carries the vector sum_l c_l d^k H~_l(x)
    let mut groups: Vec<(f64, Vec<f64>)> = Vec::new();
    for (l, c) in f.terms() {
        let lam =
            spec.semigroup.rate(n, l.degree()).ok_or_else(|| Error::Capability("semigroup is not spectral".into()))?;
        if lam == 0.0 {
            continue;
        }
        let h = sign * hermite_tilde(&l.checked_add(&spec.k)?, x)?;
        let amp: Vec<f64> = c.iter().map(|ci| ci * h).collect();
        match groups.iter_mut().find(|(r, _)| *r == lam) {
            Some((_, acc)) => acc.iter_mut().zip(&amp).for_each(|(a, b)| *a += b),
            None => groups.push((lam, amp)),
        }
    }
    let w = spec.time_weight();
    let beta = spec.beta;
    Ok(times
        .iter()
        .map(|&t| {
            let mut v = vec![0.0; m];
            let lt = t.ln();
            for (lam, amp) in &groups {
                let mult = (beta * lam.ln() - lam * t + w * lt).exp();
                if mult == 0.0 {
                    continue;
                }
                for (vi, a) in v.iter_mut().zip(amp) {
                    *vi += mult * a;
                }
            }
            v
        })
        .collect())
}

fn lq_from_vectors(spec: &GFunctionSpec, grid: &TimeGrid, values: &[Vec<f64>]) -> f64 {
    let q = spec.q;
    let pts: Vec<f64> = values.iter().map(|v| abs_pow(spec.norm.norm(v), q)).collect();
    grid.integrate_values(&pts).max(0.0).powf(1.0 / q)
}

/// `g^{q,X}_{beta,k}(f)(x) = ( int || t^w d_x^k d_t^beta S_t f(x) ||_X^q dt/t )^{1/q}`.
pub fn g_value(spec: &GFunctionSpec, f: &HermiteExpansion, x: &[f64], tgrid: &TimeGrid) -> Result<f64> {
    check_compat(spec, f, x)?;
    let values = integrand_values(spec, f, x, tgrid)?;
    Ok(lq_from_vectors(spec, tgrid, &values))
}

/// The vector integrand at every node of `tgrid`.
pub fn integrand_values(
    spec: &GFunctionSpec,
    f: &HermiteExpansion,
    x: &[f64],
    tgrid: &TimeGrid,
) -> Result<Vec<Vec<f64>>> {
    check_compat(spec, f, x)?;
    match (spec.semigroup.is_spectral(), spec.region) {
        (true, Region::Full) => spectral_integrand(spec, f, x, tgrid.nodes()),
        (true, Region::Local(nu)) => local_integrand(spec, f, x, tgrid.nodes(), nu),
        (true, Region::Global(nu)) => {
            let full = spectral_integrand(spec, f, x, tgrid.nodes())?;
            let local = local_integrand(spec, f, x, tgrid.nodes(), nu)?;
            Ok(full.into_iter().zip(local).map(|(a, b)| a.iter().zip(&b).map(|(u, v)| u - v).collect()).collect())
        }
        (false, Region::Full) => euclid_integrand(spec, f, x, tgrid.nodes()),
        (false, _) => {
            Err(Error::Capability("local/global splits are defined for the inverse Gaussian semigroups only".into()))
        }
    }
}

// ---------------------------------------------------------------- Euclidean semigroups

const EUCLID_POINTS: usize = 48;

/// `int d_t^l W_u(x - y) f(y) dy` for operands with envelope `e^{-|y|^2}`.
fn euclid_heat_action(f: &HermiteExpansion, x: &[f64], u: f64, l: usize) -> Result<Vec<f64>> {
    // W_u(x - y) e^{-|y|^2}: precision 1/(2u) + 1 about x / (1 + 2u)
    let precision = 1.0 / (2.0 * u) + 1.0;
    let centre: Vec<f64> = x.iter().map(|v| v / (1.0 + 2.0 * u)).collect();
    let grid = SpaceGrid::lebesgue(EUCLID_POINTS, x.len(), &centre, precision.sqrt().recip())?;
    let mut out = vec![0.0; f.vector_dim()];
    for (j, o) in out.iter_mut().enumerate() {
        let fj = f.component(j)?;
        *o = grid.integrate(|y| {
            let z: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
            dt_heat_euclid(&z, u, l).unwrap_or(f64::NAN) * fj.eval_scalar(y).unwrap_or(f64::NAN)
        })?;
    }
    Ok(out)
}

fn euclid_integrand(spec: &GFunctionSpec, f: &HermiteExpansion, x: &[f64], times: &[f64]) -> Result<Vec<Vec<f64>>> {
    if !spec.k.is_zero() {
        return Err(Error::Capability("Euclidean g-functions are implemented for k = 0 only".into()));
    }
    let beta = spec.integer_beta()?;
    let w = spec.time_weight();
    match spec.semigroup {
        Semigroup::HeatEuclid => times
            .iter()
            .map(|&t| {
                let v = euclid_heat_action(f, x, t, beta)?;
                Ok(v.into_iter().map(|c| c * t.powf(w)).collect())
            })
            .collect(),
        Semigroup::PoissonEuclid => times
            .iter()
            .map(|&t| {
                let rule = SubordinationRule::new(t, beta, 0.0)?;
                let heat: Vec<Vec<f64>> =
                    rule.nodes.iter().map(|&u| euclid_heat_action(f, x, u, 0)).collect::<Result<_>>()?;
                let mut v = vec![0.0; f.vector_dim()];
                for (j, vj) in v.iter_mut().enumerate() {
                    let col: Vec<f64> = heat.iter().map(|h| h[j]).collect();
                    *vj = rule.apply(&col, 0.0) * t.powf(w);
                }
                Ok(v)
            })
            .collect(),
        _ => unreachable!("spectral semigroups take the spectral path"),
    }
}

// ---------------------------------------------------------------- kernel path over a ball

/// Nodes and weights of a rule on the ball `B(centre, radius)` that resolves a
/// Gaussian feature of width `width` centred at `peak`.
pub fn ball_rule(centre: &[f64], radius: f64, peak: &[f64], width: f64) -> Result<Vec<(Vec<f64>, f64)>> {
    match centre.len() {
        1 => {
            let (a, b) = (centre[0] - radius, centre[0] + radius);
            Ok(interval_rule(a, b, peak[0], width).into_iter().map(|(y, w)| (vec![y], w)).collect())
        }
        2 => Ok(disc_rule(centre, radius, peak, width)),
        n => Err(Error::Capability(format!("ball quadrature supports n <= 2, got {n}"))),
    }
}

const PANEL_POINTS: usize = 16;

/// Composite Gauss-Legendre on `[a, b]` with breakpoints at `peak +- width * 2^j`.
fn interval_rule(a: f64, b: f64, peak: f64, width: f64) -> Vec<(f64, f64)> {
    let mut cuts = vec![a, b];
    let w = width.max(1e-300);
    for j in -2..40 {
        let d = w * 2f64.powi(j);
        for c in [peak - d, peak + d] {
            if c > a && c < b {
                cuts.push(c);
            }
        }
        if d > b - a {
            break;
        }
    }
    if peak > a && peak < b {
        cuts.push(peak);
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let (xs, ws) = gauss_legendre_rule(PANEL_POINTS);
    let mut out = Vec::new();
    for pair in cuts.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let half = 0.5 * (hi - lo);
        if half <= 0.0 {
            continue;
        }
        for (x, wt) in xs.iter().zip(&ws) {
            out.push((lo + half * (x + 1.0), half * wt));
        }
    }
    out
}

const ANGLE_POINTS: usize = 64;

/// Polar rule on a disc, centred at `peak` when it lies inside, else at `centre`.
fn disc_rule(centre: &[f64], radius: f64, peak: &[f64], width: f64) -> Vec<(Vec<f64>, f64)> {
    let dp = ((peak[0] - centre[0]).powi(2) + (peak[1] - centre[1]).powi(2)).sqrt();
    let origin: Vec<f64> = if dp < radius { peak.to_vec() } else { centre.to_vec() };
    let off = [origin[0] - centre[0], origin[1] - centre[1]];
    let off2 = off[0] * off[0] + off[1] * off[1];
    let mut out = Vec::new();
    for j in 0..ANGLE_POINTS {
        let th = 2.0 * PI * j as f64 / ANGLE_POINTS as f64;
        let u = [th.cos(), th.sin()];
        let b = off[0] * u[0] + off[1] * u[1];
        let reach = -b + (b * b - off2 + radius * radius).max(0.0).sqrt();
        for (r, w) in interval_rule(0.0, reach, 0.0, width) {
            out.push((vec![origin[0] + r * u[0], origin[1] + r * u[1]], w * r * 2.0 * PI / ANGLE_POINTS as f64));
        }
    }
    out
}

/// `e^{ln_scale} int_{B(x, rho)} d_x^k d_t^m T^A_t(x, y) f(y) dy`.
fn local_heat_value(
    f: &HermiteExpansion,
    x: &[f64],
    t: f64,
    m: usize,
    k: &MultiIndex,
    radius: f64,
    ln_scale: f64,
) -> Result<Vec<f64>> {
    // kernel times the e^{-|y|^2} envelope is a Gaussian about e^{-t} x of width sqrt(1 - e^{-2t})
    let r = (-t).exp();
    let peak: Vec<f64> = x.iter().map(|v| v * r).collect();
    let width = one_minus_e2t(t).sqrt();
    let rule = ball_rule(x, radius, &peak, width)?;
    let mut out = vec![0.0; f.vector_dim()];
    for (y, w) in rule {
        let kv = dxk_dtm_invgauss_scaled(x, &y, t, m, k, ln_scale)?;
        if kv == 0.0 {
            continue;
        }
        let fv = f.eval(&y)?;
        for (o, c) in out.iter_mut().zip(&fv) {
            *o += w * kv * c;
        }
    }
    Ok(out)
}

/// Fixed log-spaced `u` nodes spanning every subordination window of `times`.
pub fn shared_heat_times(times: &[f64]) -> Vec<f64> {
    let t_lo = times.iter().cloned().fold(f64::INFINITY, f64::min);
    let t_hi = times.iter().cloned().fold(0.0, f64::max);
    let a = (t_lo * t_lo / 2800.0).ln();
    let b = (60.0 + t_hi * t_hi + t_hi).ln();
    let h = 1.0 / 8.0;
    let count = ((b - a) / h).ceil() as usize + 1;
    (0..count).map(|j| (a + j as f64 * h).exp()).collect()
}

fn local_integrand(
    spec: &GFunctionSpec,
    f: &HermiteExpansion,
    x: &[f64],
    times: &[f64],
    nu: f64,
) -> Result<Vec<Vec<f64>>> {
    let m_order = spec.integer_beta()?;
    let radius = local_radius(x, nu);
    // kernel derivatives carry (-1)^m relative to the unsigned spectral multiplier
    let w = spec.time_weight();
    let sw = if m_order % 2 == 0 { 1.0 } else { -1.0 };
    match spec.semigroup {
        Semigroup::HeatA => times
            .iter()
            .map(|&t| {
                let v = local_heat_value(f, x, t, m_order, &spec.k, radius, 0.0)?;
                Ok(v.into_iter().map(|c| sw * c * t.powf(w)).collect())
            })
            .collect(),
        Semigroup::PoissonA | Semigroup::PoissonAMinusI => {
            let shift = spec.semigroup == Semigroup::PoissonAMinusI;
            if shift && x.len() == 1 {
                return Err(Error::Capability(
                    "local Poisson split for A - I needs n >= 2 (non-decaying zero mode)".into(),
                ));
            }
            let us = shared_heat_times(times);
            let heat: Vec<Vec<f64>> = us
                .iter()
                .map(|&u| local_heat_value(f, x, u, 0, &spec.k, radius, if shift { u } else { 0.0 }))
                .collect::<Result<_>>()?;
            Ok(subordinate_on_shared(&us, &heat, times, m_order, w, f.vector_dim())
                .into_iter()
                .map(|v| v.into_iter().map(|c| sw * c).collect())
                .collect())
        }
        _ => unreachable!("Euclidean semigroups are rejected earlier"),
    }
}

/// `t^w d_t^m P_t` from heat values on a shared log-spaced `u` grid.
pub fn subordinate_on_shared(
    us: &[f64],
    heat: &[Vec<f64>],
    times: &[f64],
    m: usize,
    w: f64,
    dim: usize,
) -> Vec<Vec<f64>> {
    let h = if us.len() > 1 { (us[1] / us[0]).ln() } else { 1.0 };
    times
        .iter()
        .map(|&t| {
            let mut v = vec![0.0; dim];
            let mut terms: Vec<Vec<f64>> = vec![Vec::with_capacity(us.len()); dim];
            for (j, (&u, hv)) in us.iter().zip(heat).enumerate() {
                let trap = if j == 0 || j == us.len() - 1 { 0.5 * h } else { h };
                let s = trap * u * subordinator_derivative(t, u, m) * u.powf(-1.5) / (2.0 * PI.sqrt());
                if s == 0.0 {
                    continue;
                }
                for (c, val) in hv.iter().enumerate() {
                    terms[c].push(s * val);
                }
            }
            for (c, vc) in v.iter_mut().enumerate() {
                *vc = pairwise_sum(&terms[c]) * t.powf(w);
            }
            v
        })
        .collect()
}

// ---------------------------------------------------------------- norms and probes

/// `|| g(f) ||_{L^p(mu)}` over the measure of `sgrid`.
pub fn g_lp_norm(
    spec: &GFunctionSpec,
    f: &HermiteExpansion,
    p: f64,
    sgrid: &SpaceGrid,
    tgrid: &TimeGrid,
) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Argument(format!("p must be >= 1, got {p}")));
    }
    let values: Vec<f64> = (0..sgrid.len()).map(|i| g_value(spec, f, sgrid.node(i), tgrid)).collect::<Result<_>>()?;
    let s = sgrid.integrate_checked_indexed(|i, _| abs_pow(values[i], p))?;
    Ok(s.max(0.0).powf(1.0 / p))
}

/// `|| ||f||_X ||_{L^p(mu)}`.
pub fn operand_lp_norm(f: &HermiteExpansion, norm: &NormSpec, p: f64, sgrid: &SpaceGrid) -> Result<f64> {
    let values: Vec<f64> = (0..sgrid.len()).map(|i| Ok(norm.norm(&f.eval(sgrid.node(i))?))).collect::<Result<_>>()?;
    let s = sgrid.integrate_checked_indexed(|i, _| abs_pow(values[i], p))?;
    Ok(s.max(0.0).powf(1.0 / p))
}

/// Inverse Gaussian grid suited to `L^p` norms of Gaussian-decaying operands.
pub fn lp_grid(n: usize, p: f64, points: usize) -> Result<SpaceGrid> {
    let scale = if p > 1.0 { (1.0 / (p - 1.0)).sqrt().min(2.0) } else { 2.0 };
    SpaceGrid::inverse_gauss(points, n, scale)
}

/// Per-member norms behind a ratio probe.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub id: String,
    pub g_norm: f64,
    pub f_norm: f64,
}

/// Two-direction ratio summary over a corpus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub p: f64,
    /// `max ||g(f)||_p / ||f||_p`.
    pub upper: f64,
    pub upper_member: String,
    /// `max ||f||_p / ||g(f)||_p`.
    pub lower: f64,
    pub lower_member: String,
    pub rows: Vec<RatioRow>,
    pub skipped: Vec<String>,
}

/// Ratios `||g(f)||_p / ||f||_p` and their reciprocals over `corpus`.
pub fn ratio_probe(
    spec: &GFunctionSpec,
    corpus: &[Member],
    p: f64,
    sgrid: &SpaceGrid,
    tgrid: &TimeGrid,
) -> Result<RatioReport> {
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for m in corpus {
        let f_norm = operand_lp_norm(&m.f, &spec.norm, p, sgrid)?;
        let g_norm = g_lp_norm(spec, &m.f, p, sgrid, tgrid)?;
        if f_norm == 0.0 || g_norm == 0.0 {
            skipped.push(m.id.clone());
            continue;
        }
        rows.push(RatioRow { id: m.id.clone(), g_norm, f_norm });
    }
    if rows.is_empty() {
        return Err(Error::Sampling("every corpus member has zero norm".into()));
    }
    let (mut upper, mut lower) = (0.0, 0.0);
    let (mut up_id, mut lo_id) = (String::new(), String::new());
    for r in &rows {
        if r.g_norm / r.f_norm > upper {
            upper = r.g_norm / r.f_norm;
            up_id = r.id.clone();
        }
        if r.f_norm / r.g_norm > lower {
            lower = r.f_norm / r.g_norm;
            lo_id = r.id.clone();
        }
    }
    Ok(RatioReport { p, upper, upper_member: up_id, lower, lower_member: lo_id, rows, skipped })
}

/// `sup_t | t^{m+|k|/2} d_t^m d_x^k T_t f(x) |` over the grid nodes.
pub fn maximal_value(m: usize, k: &MultiIndex, f: &HermiteExpansion, x: &[f64], tgrid: &TimeGrid) -> Result<f64> {
    let spec = GFunctionSpec {
        beta: m as f64,
        k: k.clone(),
        q: 2.0,
        semigroup: Semigroup::HeatA,
        norm: NormSpec::new(2.0, f.vector_dim())?,
        region: Region::Full,
    };
    if m == 0 {
        // beta = 0 is outside the g-function range but meaningful here
        let n = f.dimension();
        let sign = if k.degree().is_multiple_of(2) { 1.0 } else { -1.0 };
        let w = 0.5 * k.degree() as f64;
        let mut best: f64 = 0.0;
        for &t in tgrid.nodes() {
            let mut v = vec![0.0; f.vector_dim()];
            for (l, c) in f.terms() {
                let lam = Operator::A.heat_rate(n, l.degree());
                let h = sign * hermite_tilde(&l.checked_add(k)?, x)? * (-lam * t).exp() * t.powf(w);
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi += ci * h;
                }
            }
            best = best.max(spec.norm.norm(&v));
        }
        return Ok(best);
    }
    check_compat(&spec, f, x)?;
    let values = spectral_integrand(&spec, f, x, tgrid.nodes())?;
    Ok(values.iter().map(|v| spec.norm.norm(v)).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::from(v.to_vec())
    }

    #[test]
    fn eigenfunction_closed_form() {
        let tg = TimeGrid::default();
        for (q, beta) in [(2.0, 1.0), (1.5, 0.5), (3.0, 2.0)] {
            let spec = GFunctionSpec::scalar(beta, mi(&[0]), q, Semigroup::HeatA).unwrap();
            let f = HermiteExpansion::eigenfunction(mi(&[3]));
            let x = [0.4];
            let g = g_value(&spec, &f, &x, &tg).unwrap();
            let h = hermite_tilde(&mi(&[3]), &x).unwrap().abs();
            let expect = h * statrs::function::gamma::gamma(q * beta).powf(1.0 / q) * q.powf(-beta);
            assert_relative_eq!(g, expect, max_relative = 1e-10);
        }
    }

    #[test]
    fn zero_operand() {
        let spec = GFunctionSpec::scalar(1.0, mi(&[0]), 2.0, Semigroup::HeatA).unwrap();
        let g = g_value(&spec, &HermiteExpansion::zero(1, 1), &[0.3], &TimeGrid::default()).unwrap();
        assert_eq!(g, 0.0);
    }

    #[test]
    fn q_must_exceed_one() {
        assert!(GFunctionSpec::scalar(1.0, mi(&[0]), 1.0, Semigroup::HeatA).is_err());
    }

    #[test]
    fn lp_norm_of_ground_state() {
        let spec = GFunctionSpec::scalar(1.0, mi(&[0]), 2.0, Semigroup::HeatA).unwrap();
        let grid = lp_grid(1, 2.0, 40).unwrap();
        let v = g_lp_norm(&spec, &HermiteExpansion::eigenfunction(mi(&[0])), 2.0, &grid, &TimeGrid::default()).unwrap();
        assert_relative_eq!(v, PI.sqrt() / 2.0, max_relative = 1e-10);
    }

    #[test]
    fn maximal_ground_state() {
        let f = HermiteExpansion::eigenfunction(mi(&[0]));
        let x = [0.2];
        let v = maximal_value(1, &mi(&[0]), &f, &x, &TimeGrid::default()).unwrap();
        let expect = (-1f64).exp() * hermite_tilde(&mi(&[0]), &x).unwrap();
        assert_relative_eq!(v, expect, max_relative = 1e-5);
    }

    #[test]
    fn norm_spec_axioms() {
        let n = NormSpec::new(3.0, 3).unwrap();
        let (a, b) = ([1.0, -2.0, 0.5], [0.3, 0.1, -4.0]);
        let s: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        assert!(n.norm(&s) <= n.norm(&a) + n.norm(&b) + 1e-15);
        let twice: Vec<f64> = a.iter().map(|x| 2.0 * x).collect();
        assert_relative_eq!(n.norm(&twice), 2.0 * n.norm(&a));
        assert_eq!(NormSpec::new(f64::INFINITY, 3).unwrap().norm(&a), 2.0);
    }

    #[test]
    fn local_plus_global_is_full() {
        let tg = TimeGrid::new(1e-4, 20.0, 64).unwrap();
        let f = HermiteExpansion::from_terms(1, 1, [(mi(&[0]), vec![1.0]), (mi(&[2]), vec![0.3])]).unwrap();
        let x = [0.7];
        let mut spec = GFunctionSpec::scalar(1.0, mi(&[0]), 2.0, Semigroup::HeatA).unwrap();
        let full = integrand_values(&spec, &f, &x, &tg).unwrap();
        spec.region = Region::Local(1e3);
        let local = integrand_values(&spec, &f, &x, &tg).unwrap();
        for (a, b) in full.iter().zip(&local) {
            assert!((a[0] - b[0]).abs() <= 1e-8 * a[0].abs().max(1e-12), "{a:?} vs {b:?}");
        }
    }
}
