//! Finite-rank calculus on `span{H~_k}`: coefficients, semigroup and
//! Poisson multipliers, Weyl derivatives, Riesz transforms, projections.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::Operator;
use crate::quadrature::{Measure, SpaceGrid};
use crate::special::{hermite_tilde, hermite_tilde_norm_sq, multiindices_up_to_degree, MultiIndex};

/// Default per-coordinate degree cap of an expansion.
pub const DEFAULT_DEGREE_CAP: usize = 24;

/// Semigroup families that g-functions and time derivatives refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Semigroup {
    #[serde(rename = "heat_A")]
    HeatA,
    #[serde(rename = "poisson_A")]
    PoissonA,
    #[serde(rename = "poisson_A_minus_I")]
    PoissonAMinusI,
    HeatEuclid,
    PoissonEuclid,
}

impl Semigroup {
    /// Decay rate of `H~_k` under the semigroup, or `None` for the Euclidean families.
    pub fn rate(self, n: usize, degree: usize) -> Option<f64> {
        match self {
            Semigroup::HeatA => Some(Operator::A.heat_rate(n, degree)),
            Semigroup::PoissonA => Some(Operator::A.poisson_rate(n, degree)),
            Semigroup::PoissonAMinusI => Some(Operator::AMinusI.poisson_rate(n, degree)),
            Semigroup::HeatEuclid | Semigroup::PoissonEuclid => None,
        }
    }

    pub fn is_poisson(self) -> bool {
        matches!(self, Semigroup::PoissonA | Semigroup::PoissonAMinusI | Semigroup::PoissonEuclid)
    }

    pub fn is_spectral(self) -> bool {
        matches!(self, Semigroup::HeatA | Semigroup::PoissonA | Semigroup::PoissonAMinusI)
    }
}

/// `sum_k c_k H~_k` with `c_k` in `R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteExpansion {
    n: usize,
    m: usize,
    terms: BTreeMap<MultiIndex, Vec<f64>>,
}

impl HermiteExpansion {
    pub fn zero(n: usize, m: usize) -> Self {
        assert!(n >= 1 && m >= 1, "dimensions must be positive");
        Self { n, m, terms: BTreeMap::new() }
    }

    /// Scalar `c H~_k`.
    pub fn single(k: MultiIndex, c: f64) -> Self {
        let mut e = Self::zero(k.dim(), 1);
        e.add_term(k, vec![c]).expect("matching dimensions");
        e
    }

    pub fn eigenfunction(k: MultiIndex) -> Self {
        Self::single(k, 1.0)
    }

    pub fn from_terms(n: usize, m: usize, terms: impl IntoIterator<Item = (MultiIndex, Vec<f64>)>) -> Result<Self> {
        let mut e = Self::zero(n, m);
        for (k, c) in terms {
            e.add_term(k, c)?;
        }
        Ok(e)
    }

    /// Adds `c H~_k` to the expansion; exact zeros are dropped.
    pub fn add_term(&mut self, k: MultiIndex, c: Vec<f64>) -> Result<()> {
        if k.dim() != self.n {
            return Err(Error::Argument(format!(
                "multi-index dimension {} differs from expansion dimension {}",
                k.dim(),
                self.n
            )));
        }
        if c.len() != self.m {
            return Err(Error::Argument(format!(
                "coefficient length {} differs from vector dimension {}",
                c.len(),
                self.m
            )));
        }
        let entry = self.terms.entry(k.clone()).or_insert_with(|| vec![0.0; c.len()]);
        for (a, b) in entry.iter_mut().zip(&c) {
            *a += b;
        }
        if entry.iter().all(|v| *v == 0.0) {
            self.terms.remove(&k);
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn vector_dim(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Vec<f64>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, k: &MultiIndex) -> Option<&Vec<f64>> {
        self.terms.get(k)
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|k| k.degree()).max().unwrap_or(0)
    }

    /// Largest single coordinate of any index.
    pub fn max_entry(&self) -> usize {
        self.terms.keys().flat_map(|k| k.entries().iter().copied()).max().unwrap_or(0)
    }

    /// Componentwise value at `x`.
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::Argument(format!(
                "point dimension {} differs from expansion dimension {}",
                x.len(),
                self.n
            )));
        }
        let mut out = vec![0.0; self.m];
        for (k, c) in &self.terms {
            let h = hermite_tilde(k, x)?;
            for (o, ci) in out.iter_mut().zip(c) {
                *o += ci * h;
            }
        }
        Ok(out)
    }

    /// First component at `x`.
    pub fn eval_scalar(&self, x: &[f64]) -> Result<f64> {
        Ok(self.eval(x)?[0])
    }

    /// Component `j` as a scalar expansion.
    pub fn component(&self, j: usize) -> Result<Self> {
        if j >= self.m {
            return Err(Error::Argument(format!("component {j} out of range {}", self.m)));
        }
        let mut out = Self::zero(self.n, 1);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), vec![c[j]])?;
        }
        Ok(out)
    }

    /// Stack scalar expansions into a vector-valued one.
    pub fn stack(parts: &[Self]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::Argument("nothing to stack".into()))?;
        let m = parts.len();
        let mut out = Self::zero(first.n, m);
        for (j, p) in parts.iter().enumerate() {
            if p.n != first.n || p.m != 1 {
                return Err(Error::Argument("stacked parts must be scalar and share n".into()));
            }
            for (k, c) in &p.terms {
                let mut v = vec![0.0; m];
                v[j] = c[0];
                out.add_term(k.clone(), v)?;
            }
        }
        Ok(out)
    }

    /// Multiply every coefficient of `H~_k` by `mult(k)`.
    pub fn map_coefficients<F: Fn(&MultiIndex) -> f64>(&self, mult: F) -> Self {
        let mut out = Self::zero(self.n, self.m);
        for (k, c) in &self.terms {
            let s = mult(k);
            if s != 0.0 {
                out.terms.insert(k.clone(), c.iter().map(|v| v * s).collect());
            }
        }
        out.terms.retain(|_, c| c.iter().any(|v| *v != 0.0));
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_coefficients(|_| s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone())?;
        }
        Ok(out)
    }

    /// Largest coefficient difference against `other`.
    pub fn max_abs_difference(&self, other: &Self) -> f64 {
        let diff = self.add(&other.scale(-1.0)).expect("compatible expansions");
        diff.terms.values().flatten().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// `int <f, h> d gamma_{-1}`, summed over components.
    pub fn inner_product(&self, other: &Self) -> Result<f64> {
        if self.n != other.n || self.m != other.m {
            return Err(Error::Argument("inner product of incompatible expansions".into()));
        }
        let mut acc = 0.0;
        for (k, c) in &self.terms {
            if let Some(d) = other.terms.get(k) {
                let dot: f64 = c.iter().zip(d).map(|(a, b)| a * b).sum();
                acc += dot * hermite_tilde_norm_sq(k);
            }
        }
        Ok(acc)
    }

    pub fn l2_norm(&self) -> f64 {
        self.inner_product(self).expect("self-compatible").sqrt()
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    k: Vec<usize>,
    c: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ExpansionRecord {
    n: usize,
    m: usize,
    terms: Vec<TermRecord>,
}

impl Serialize for HermiteExpansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExpansionRecord {
            n: self.n,
            m: self.m,
            terms: self.terms.iter().map(|(k, c)| TermRecord { k: k.entries().to_vec(), c: c.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermiteExpansion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = ExpansionRecord::deserialize(d)?;
        if rec.n == 0 || rec.m == 0 {
            return Err(serde::de::Error::custom("n and m must be positive"));
        }
        let mut out = HermiteExpansion::zero(rec.n, rec.m);
        for t in rec.terms {
            let k = MultiIndex::new(t.k).map_err(serde::de::Error::custom)?;
            out.add_term(k, t.c).map_err(serde::de::Error::custom)?;
        }
        Ok(out)
    }
}

/// `c_k = ||H~_k||^{-2} int f H~_k d gamma_{-1}` for `|k| <= max_degree`.
pub fn expand<F: Fn(&[f64]) -> f64>(f: F, n: usize, max_degree: usize, grid: &SpaceGrid) -> Result<HermiteExpansion> {
    if grid.measure() != Measure::InverseGauss {
        return Err(Error::Argument("expansion needs an inverse Gaussian grid".into()));
    }
    if grid.dimension() != n {
        return Err(Error::Argument(format!("grid dimension {} differs from {n}", grid.dimension())));
    }
    let values: Vec<f64> = (0..grid.len()).map(|i| f(grid.node(i))).collect();
    let mut out = HermiteExpansion::zero(n, 1);
    for k in multiindices_up_to_degree(n, max_degree) {
        let c = grid.integrate_checked_indexed(|i, y| values[i] * hermite_tilde(&k, y).unwrap_or(f64::NAN))?
            / hermite_tilde_norm_sq(&k);
        out.add_term(k, vec![c])?;
    }
    Ok(out)
}

/// `T_t f` for the heat semigroup of `A`: `c_k -> e^{-(n+|k|)t} c_k`.
pub fn heat_action(f: &HermiteExpansion, t: f64) -> Result<HermiteExpansion> {
    if !(t >= 0.0) {
        return Err(Error::Argument(format!("time must be non-negative, got {t}")));
    }
    let n = f.n;
    Ok(f.map_coefficients(|k| (-(Operator::A.heat_rate(n, k.degree())) * t).exp()))
}

/// Poisson action with the zero-mode flag for `A - I` in one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonAction {
    pub expansion: HermiteExpansion,
    /// Set when a mode with eigenvalue zero was present and kept with multiplier 1.
    pub degenerate_zero_mode: bool,
}

/// `P_t f`: `c_k -> e^{-t sqrt(lambda_k)} c_k`.
pub fn poisson_action(f: &HermiteExpansion, t: f64, op: Operator) -> Result<PoissonAction> {
    if !(t >= 0.0) {
        return Err(Error::Argument(format!("time must be non-negative, got {t}")));
    }
    let n = f.n;
    let degenerate = f.terms.keys().any(|k| op.heat_rate(n, k.degree()) == 0.0);
    Ok(PoissonAction {
        expansion: f.map_coefficients(|k| (-t * op.poisson_rate(n, k.degree())).exp()),
        degenerate_zero_mode: degenerate,
    })
}

fn spectral_rate(semigroup: Semigroup, n: usize, degree: usize) -> Result<f64> {
    semigroup
        .rate(n, degree)
        .ok_or_else(|| Error::Capability(format!("{semigroup:?} has no Hermite-diagonal spectral form")))
}

/// Weyl derivative `d_t^beta S_t f` with the unsigned multiplier `lambda^beta e^{-lambda t}`.
pub fn weyl_time_derivative(f: &HermiteExpansion, t: f64, beta: f64, semigroup: Semigroup) -> Result<HermiteExpansion> {
    if !(beta > 0.0) || !(t > 0.0) {
        return Err(Error::Argument(format!("need beta > 0 and t > 0, got ({beta}, {t})")));
    }
    let n = f.n;
    let rates: BTreeMap<usize, f64> =
        f.terms.keys().map(|k| Ok((k.degree(), spectral_rate(semigroup, n, k.degree())?))).collect::<Result<_>>()?;
    Ok(f.map_coefficients(|k| {
        let lam = rates[&k.degree()];
        if lam == 0.0 {
            0.0
        } else {
            (beta * lam.ln() - lam * t).exp()
        }
    }))
}

/// Ordinary `d_t^m S_t f`: multiplier `(-lambda)^m e^{-lambda t}`.
pub fn time_derivative(f: &HermiteExpansion, t: f64, m: usize, semigroup: Semigroup) -> Result<HermiteExpansion> {
    let n = f.n;
    let rates: BTreeMap<usize, f64> =
        f.terms.keys().map(|k| Ok((k.degree(), spectral_rate(semigroup, n, k.degree())?))).collect::<Result<_>>()?;
    Ok(f.map_coefficients(|k| {
        let lam = rates[&k.degree()];
        (-lam).powi(m as i32) * (-lam * t).exp()
    }))
}

/// `d_x^k f` using `d/dz H~_l = -H~_{l+1}`.
pub fn space_derivative(f: &HermiteExpansion, k: &MultiIndex) -> Result<HermiteExpansion> {
    if k.dim() != f.n {
        return Err(Error::Argument("derivative order dimension mismatch".into()));
    }
    let sign = if k.degree().is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut out = HermiteExpansion::zero(f.n, f.m);
    for (l, c) in &f.terms {
        out.add_term(l.checked_add(k)?, c.iter().map(|v| sign * v).collect())?;
    }
    Ok(out)
}

/// `R_i H~_k = -(n + |k|)^{-1/2} H~_{k + e_i}`, respecting the per-coordinate cap.
pub fn riesz_transform_capped(f: &HermiteExpansion, i: usize, cap: usize) -> Result<HermiteExpansion> {
    if i >= f.n {
        return Err(Error::Argument(format!("direction {i} out of range for n = {}", f.n)));
    }
    let mut out = HermiteExpansion::zero(f.n, f.m);
    for (k, c) in &f.terms {
        let shifted = k.plus_unit(i);
        if shifted[i] > cap {
            return Err(Error::Capability(format!("Riesz transform raises coordinate {i} of {k} beyond cap {cap}")));
        }
        let s = -1.0 / ((f.n + k.degree()) as f64).sqrt();
        out.add_term(shifted, c.iter().map(|v| s * v).collect())?;
    }
    Ok(out)
}

pub fn riesz_transform(f: &HermiteExpansion, i: usize) -> Result<HermiteExpansion> {
    riesz_transform_capped(f, i, DEFAULT_DEGREE_CAP)
}

/// `A^{-1/2} f`.
pub fn inverse_sqrt(f: &HermiteExpansion) -> HermiteExpansion {
    let n = f.n;
    f.map_coefficients(|k| 1.0 / ((n + k.degree()) as f64).sqrt())
}

/// `x_i f` using `z H~_l = H~_{l+1} / 2 + l H~_{l-1}`.
pub fn coordinate_multiply(f: &HermiteExpansion, i: usize) -> Result<HermiteExpansion> {
    if i >= f.n {
        return Err(Error::Argument(format!("direction {i} out of range for n = {}", f.n)));
    }
    let mut out = HermiteExpansion::zero(f.n, f.m);
    for (k, c) in &f.terms {
        out.add_term(k.plus_unit(i), c.iter().map(|v| 0.5 * v).collect())?;
        if let Some(lower) = k.minus_unit(i) {
            let s = k[i] as f64;
            out.add_term(lower, c.iter().map(|v| s * v).collect())?;
        }
    }
    Ok(out)
}

/// `A f = -Delta f / 2 - x . grad f`, assembled from derivative and multiplication rules.
pub fn generator(f: &HermiteExpansion) -> Result<HermiteExpansion> {
    let mut out = HermiteExpansion::zero(f.n, f.m);
    for i in 0..f.n {
        let d1 = space_derivative(f, &MultiIndex::unit(f.n, i))?;
        let d2 = space_derivative(&d1, &MultiIndex::unit(f.n, i))?;
        out = out.add(&d2.scale(-0.5))?;
        out = out.add(&coordinate_multiply(&d1, i)?.scale(-1.0))?;
    }
    Ok(out)
}

/// Keeps only the `H~_0` term.
pub fn e0_projection(f: &HermiteExpansion) -> HermiteExpansion {
    let zero = MultiIndex::zeros(f.n);
    f.map_coefficients(|k| if *k == zero { 1.0 } else { 0.0 })
}

/// `|| t^{m+|k|/2} d_t^m d_x^k T_t f ||^2` over `L^2(gamma_{-1}) x L^2(dt/t)` in closed form.
pub fn heat_square_function_l2(f: &HermiteExpansion, m: usize, k: &MultiIndex) -> Result<f64> {
    if k.dim() != f.n {
        return Err(Error::Argument("derivative order dimension mismatch".into()));
    }
    let a = (2 * m + k.degree()) as f64;
    if a == 0.0 {
        return Err(Error::Argument("square function needs m + |k| > 0".into()));
    }
    let lg = statrs::function::gamma::ln_gamma(a);
    let mut acc = 0.0;
    for (l, c) in &f.terms {
        let lam = (f.n + l.degree()) as f64;
        let c2: f64 = c.iter().map(|v| v * v).sum();
        let shifted = l.checked_add(k)?;
        acc += c2 * hermite_tilde_norm_sq(&shifted) * (2.0 * m as f64 * lam.ln() + lg - a * (2.0 * lam).ln()).exp();
    }
    Ok(acc)
}

/// `4 int_0^inf < t d_t P_t f, t d_t P_t h > dt/t` in closed form (per mode `4 lambda / (2 sqrt(lambda))^2`).
pub fn polarization_rhs(f: &HermiteExpansion, h: &HermiteExpansion, op: Operator) -> Result<f64> {
    if f.n != h.n || f.m != h.m {
        return Err(Error::Argument("polarization of incompatible expansions".into()));
    }
    let mut acc = 0.0;
    for (k, c) in &f.terms {
        if let Some(d) = h.terms.get(k) {
            let lam = op.heat_rate(f.n, k.degree());
            if lam == 0.0 {
                continue;
            }
            let mu = lam.sqrt();
            let per_mode = 4.0 * mu * mu * statrs::function::gamma::gamma(2.0) / (2.0 * mu).powi(2);
            let dot: f64 = c.iter().zip(d).map(|(a, b)| a * b).sum();
            acc += per_mode * dot * hermite_tilde_norm_sq(k);
        }
    }
    Ok(acc)
}
