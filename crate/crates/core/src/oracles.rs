//! Independent reference computations: Richardson-extrapolated finite
//! differences, the Weyl fractional integral, exact symbolic differentiation
//! of the Mehler kernel over `Q`, and closed-form Gamma integrals.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::SignPattern;
use crate::special::{binomial, multiindices_of_degree, multinomial, stirling2};

// ---------------------------------------------------------------- finite differences

/// Central finite differences with a Richardson tableau in `h^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct FDScheme {
    pub order: usize,
    pub base_step: f64,
    pub richardson_levels: usize,
}

/// Extrapolated value with the tableau's own error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FDEstimate {
    pub value: f64,
    pub error: f64,
}

const MIN_STEP: f64 = 1e-12;

impl FDScheme {
    pub fn new(order: usize, base_step: f64, richardson_levels: usize) -> Self {
        Self { order, base_step, richardson_levels }
    }

    /// A scheme whose stencil stays inside `(0, inf)` at time `t`.
    pub fn for_time(t: f64, order: usize) -> Self {
        let base = (0.25 * t / order.max(1) as f64).min(0.1);
        Self::new(order, base, 10)
    }

    fn stencil(&self, f: &dyn Fn(f64) -> f64, t: f64, h: f64) -> f64 {
        let m = self.order;
        let mut acc = 0.0;
        for j in 0..=m {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * binomial(m, j) as f64 * f(t + (0.5 * m as f64 - j as f64) * h);
        }
        acc / h.powi(m as i32)
    }

    /// `d^m F / dt^m` at `t`.
    pub fn derivative(&self, f: &dyn Fn(f64) -> f64, t: f64) -> Result<FDEstimate> {
        if self.order == 0 {
            return Ok(FDEstimate { value: f(t), error: 0.0 });
        }
        if !(self.base_step > 0.0) {
            return Err(Error::Argument("finite-difference step must be positive".into()));
        }
        let levels = self.richardson_levels.max(1);
        if self.base_step / 2f64.powi(levels as i32 - 1) < MIN_STEP {
            return Err(Error::Capability(format!("step {} underflows after {levels} halvings", self.base_step)));
        }
        let mut prev: Vec<f64> = Vec::new();
        let mut best = FDEstimate { value: f64::NAN, error: f64::INFINITY };
        let mut h = self.base_step;
        for i in 0..levels {
            let mut row = vec![self.stencil(f, t, h)];
            let mut fac = 1.0;
            for j in 1..=i {
                fac *= 4.0;
                let v = (fac * row[j - 1] - prev[j - 1]) / (fac - 1.0);
                let err = (v - row[j - 1]).abs().max((v - prev[j - 1]).abs());
                if err <= best.error {
                    best = FDEstimate { value: v, error: err };
                }
                row.push(v);
            }
            if i > 3 && (row[i] - prev[i - 1]).abs() >= 2.0 * best.error {
                break;
            }
            prev = row;
            h *= 0.5;
        }
        if !best.value.is_finite() {
            best = FDEstimate { value: prev[0], error: f64::INFINITY };
        }
        Ok(best)
    }
}

/// `d^m F(t) / dt^m` by [`FDScheme`]; the stencil must stay right of zero.
pub fn fd_time_derivative(f: &dyn Fn(f64) -> f64, t: f64, m: usize, scheme: &FDScheme) -> Result<FDEstimate> {
    if t - m as f64 * scheme.base_step <= 0.0 {
        return Err(Error::Argument(format!(
            "stencil of order {m} with step {} leaves (0, inf) at t = {t}",
            scheme.base_step
        )));
    }
    FDScheme { order: m, ..*scheme }.derivative(f, t)
}

// ---------------------------------------------------------------- Weyl integral

/// `m = floor(alpha) + 1`.
pub fn weyl_order(alpha: f64) -> usize {
    alpha.floor() as usize + 1
}

/// The sign `(-1)^m` carried by the Weyl derivative of `e^{-lambda t}`.
pub fn weyl_sign(alpha: f64) -> f64 {
    if weyl_order(alpha).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

const WEYL_STEP: f64 = 1.0 / 16.0;
const WEYL_LEFT: f64 = -40.0;
const WEYL_RIGHT_LIMIT: f64 = 14.0;
const WEYL_TAIL: f64 = 1e-14;

/// `Gamma(m - alpha)^{-1} int_t^inf F^{(m)}(u) (u - t)^{m - alpha - 1} du` with
/// `F^{(m)}` supplied by the caller.
///
/// Substitutes `u = t + e^v`. Below `v = -40` the derivative is frozen at its
/// value at `t` and integrated exactly.
pub fn weyl_integral_with(derivative: &dyn Fn(f64) -> Result<f64>, t: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Argument(format!("order must be positive, got {alpha}")));
    }
    let m = weyl_order(alpha);
    let p = m as f64 - alpha;
    let at_t = derivative(t)?;
    let mut total = at_t * (p * WEYL_LEFT).exp() / p;
    let mut v = WEYL_LEFT;
    let mut first = true;
    let mut quiet = 0;
    loop {
        let g = derivative(t + v.exp())? * (p * v).exp();
        if !g.is_finite() {
            return Err(Error::Integrability(format!("Weyl integrand is {g} at u = {:.6e}", t + v.exp())));
        }
        let w = if first { 0.5 * WEYL_STEP } else { WEYL_STEP };
        first = false;
        total += w * g;
        if v > 0.0 && (g * v.exp()).abs() <= WEYL_TAIL * total.abs().max(1e-300) {
            quiet += 1;
            if quiet >= 32 {
                break;
            }
        } else {
            quiet = 0;
        }
        v += WEYL_STEP;
        if v > WEYL_RIGHT_LIMIT {
            return Err(Error::Integrability(format!(
                "Weyl integrand has not decayed by u - t = {:.3e}",
                WEYL_RIGHT_LIMIT.exp()
            )));
        }
    }
    Ok(total / statrs::function::gamma::gamma(p))
}

/// Weyl fractional derivative of `F` at `t` with finite-difference `F^{(m)}`.
pub fn weyl_integral(f: &dyn Fn(f64) -> f64, t: f64, alpha: f64) -> Result<f64> {
    let m = weyl_order(alpha);
    weyl_integral_with(
        &|u| {
            let scheme = FDScheme::new(m, (0.9 * u / m as f64).min(0.05), 8);
            Ok(scheme.derivative(f, u)?.value)
        },
        t,
        alpha,
    )
}

// ---------------------------------------------------------------- Gamma integrals

/// `int_0^inf t^a e^{-lam t} dt / t = Gamma(a) lam^{-a}`.
pub fn gamma_integral(a: f64, lam: f64) -> Result<f64> {
    if !(a > 0.0 && lam > 0.0) {
        return Err(Error::Argument(format!("need a, lam > 0, got ({a}, {lam})")));
    }
    Ok((statrs::function::gamma::ln_gamma(a) - a * lam.ln()).exp())
}

// ---------------------------------------------------------------- symbolic ring

pub type Rational = Ratio<i128>;

/// Polynomial over `Q` in `x_1..x_n, y_1..y_n, E = e^{-t}, R = (1 - E^2)^{-1/2}`,
/// kept in the normal form that has no monomial divisible by `E^2 R^2`.
#[derive(Clone, PartialEq, Eq)]
pub struct RingPoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl RingPoly {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; 2 * n + 2], c);
        p
    }

    fn var(n: usize, slot: usize) -> Self {
        let mut e = vec![0; 2 * n + 2];
        e[slot] = 1;
        let mut p = Self::zero(n);
        p.add_term(e, Rational::from_integer(1));
        p
    }

    pub fn x(n: usize, i: usize) -> Self {
        Self::var(n, i)
    }

    pub fn y(n: usize, i: usize) -> Self {
        Self::var(n, n + i)
    }

    pub fn e(n: usize) -> Self {
        Self::var(n, 2 * n)
    }

    pub fn r(n: usize) -> Self {
        Self::var(n, 2 * n + 1)
    }

    fn e_slot(&self) -> usize {
        2 * self.n
    }

    fn r_slot(&self) -> usize {
        2 * self.n + 1
    }

    /// Adds `c * monomial`, reducing `E^2 R^2 -> R^2 - 1` until canonical.
    fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c == Rational::from_integer(0) {
            return;
        }
        let (es, rs) = (2 * self.n, 2 * self.n + 1);
        if exps[es] >= 2 && exps[rs] >= 2 {
            let mut a = exps.clone();
            a[es] -= 2;
            self.add_term(a.clone(), c);
            a[rs] -= 2;
            self.add_term(a, -c);
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == Rational::from_integer(0) {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn scale(&self, c: Rational) -> Self {
        let mut out = Self::zero(self.n);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), *v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, *ca * *cb);
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::constant(self.n, Rational::from_integer(1));
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Total `t`-derivative using `dE/dt = -E`, `dR/dt = -E^2 R^3`; `x, y` are constant.
    pub fn dt(&self) -> Self {
        let (es, rs) = (self.e_slot(), self.r_slot());
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            let (a, b) = (e[es], e[rs]);
            if a > 0 {
                out.add_term(e.clone(), -*c * Rational::from_integer(a as i128));
            }
            if b > 0 {
                let mut f = e.clone();
                f[es] += 2;
                f[rs] += 2;
                out.add_term(f, -*c * Rational::from_integer(b as i128));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    /// Number of monomials whose coefficients differ.
    pub fn mismatches(&self, other: &Self) -> usize {
        self.add(&other.scale(Rational::from_integer(-1))).len()
    }

    /// Numeric value at `(x, y, t)`.
    pub fn eval(&self, x: &[f64], y: &[f64], t: f64) -> f64 {
        let e = (-t).exp();
        let r = crate::kernels::one_minus_e2t(t).powf(-0.5);
        let mut vals: Vec<f64> = x.to_vec();
        vals.extend_from_slice(y);
        vals.push(e);
        vals.push(r);
        self.terms
            .iter()
            .map(|(ex, c)| {
                let coef = *c.numer() as f64 / *c.denom() as f64;
                ex.iter().zip(&vals).fold(coef, |acc, (&k, &v)| acc * v.powi(k as i32))
            })
            .sum()
    }
}

impl fmt::Debug for RingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names: Vec<String> = (0..self.n)
            .map(|i| format!("x{}", i + 1))
            .chain((0..self.n).map(|i| format!("y{}", i + 1)))
            .chain(["E".to_string(), "R".to_string()])
            .collect();
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (k, name) in e.iter().zip(&names) {
                if *k == 1 {
                    write!(f, "*{name}")?;
                } else if *k > 1 {
                    write!(f, "*{name}^{k}")?;
                }
            }
        }
        Ok(())
    }
}

pub const SYMBOLIC_MAX_ORDER: usize = 3;
pub const SYMBOLIC_MAX_DIM: usize = 2;

fn check_symbolic(m: usize, n: usize) -> Result<()> {
    if m > SYMBOLIC_MAX_ORDER || n == 0 || n > SYMBOLIC_MAX_DIM {
        return Err(Error::Capability(format!(
            "symbolic oracle supports m <= {SYMBOLIC_MAX_ORDER}, 1 <= n <= {SYMBOLIC_MAX_DIM}; got m = {m}, n = {n}"
        )));
    }
    Ok(())
}

/// `d_t log T^L_t(x, y)` in the ring.
fn log_derivative(n: usize) -> RingPoly {
    let e = RingPoly::e(n);
    let r = RingPoly::r(n);
    let q = |c: i128| Rational::from_integer(c);
    let mut cross = RingPoly::zero(n);
    let mut square = RingPoly::zero(n);
    for i in 0..n {
        let d = RingPoly::y(n, i).add(&e.mul(&RingPoly::x(n, i)).scale(q(-1)));
        cross = cross.add(&d.mul(&RingPoly::x(n, i)));
        square = square.add(&d.mul(&d));
    }
    let er2 = e.mul(&r.pow(2));
    let e2r2 = e.pow(2).mul(&r.pow(2));
    er2.mul(&cross).scale(q(-2)).add(&e2r2.mul(&r.pow(2)).mul(&square).scale(q(2))).add(&e2r2.scale(q(-(n as i128))))
}

/// `d_t^m T^L_t(x, y) / T^L_t(x, y)` by repeated product-rule differentiation.
pub fn symbolic_kernel_derivative(m: usize, n: usize) -> Result<RingPoly> {
    check_symbolic(m, n)?;
    let l = log_derivative(n);
    let mut p = RingPoly::constant(n, Rational::from_integer(1));
    for _ in 0..m {
        p = p.dt().add(&p.mul(&l));
    }
    Ok(p)
}

/// Integer coefficients of `H_k`, lowest degree first.
fn hermite_coefficients(k: usize) -> Vec<i128> {
    let mut prev = vec![1i128];
    if k == 0 {
        return prev;
    }
    let mut cur = vec![0i128, 2];
    for j in 1..k {
        let mut next = vec![0i128; j + 2];
        for (d, c) in cur.iter().enumerate() {
            next[d + 1] += 2 * c;
        }
        for (d, c) in prev.iter().enumerate() {
            next[d] -= 2 * j as i128 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

fn hermite_of(arg: &RingPoly, k: usize) -> RingPoly {
    let mut out = RingPoly::zero(arg.n);
    let mut power = RingPoly::constant(arg.n, Rational::from_integer(1));
    for c in hermite_coefficients(k) {
        out = out.add(&power.scale(Rational::from_integer(c)));
        power = power.mul(arg);
    }
    out
}

/// The closed Stirling-number expression for `d_t^m T^L / T^L`, expanded into the ring.
pub fn teuwen_expansion(m: usize, n: usize, pattern: SignPattern) -> Result<RingPoly> {
    check_symbolic(m, n)?;
    let e = RingPoly::e(n);
    let r = RingPoly::r(n);
    let rho = e.mul(&r);
    let w: Vec<RingPoly> = (0..n)
        .map(|i| RingPoly::y(n, i).add(&e.mul(&RingPoly::x(n, i)).scale(Rational::from_integer(-1))).mul(&r))
        .collect();
    let mut total = RingPoly::zero(n);
    for multi in multiindices_of_degree(n, m) {
        let mut prod = RingPoly::constant(n, Rational::from_integer(multinomial(multi.entries()) as i128));
        for (i, &ri) in multi.entries().iter().enumerate() {
            let mut acc = RingPoly::zero(n);
            for s in 0..=ri {
                let st = stirling2(ri, s)? as i128;
                if st == 0 {
                    continue;
                }
                for l in 0..=s {
                    let exponent = match pattern {
                        SignPattern::Corrected => s + l,
                        SignPattern::Uncorrected => l,
                    };
                    let sign: i128 = if exponent % 2 == 0 { 1 } else { -1 };
                    let coef = Rational::new(sign * st * binomial(s, l) as i128, 1i128 << s);
                    let term = rho
                        .pow(2 * s - l)
                        .mul(&hermite_of(&RingPoly::x(n, i), l))
                        .mul(&hermite_of(&w[i], 2 * s - l))
                        .scale(coef);
                    acc = acc.add(&term);
                }
            }
            prod = prod.mul(&acc);
        }
        total = total.add(&prod);
    }
    if m % 2 == 1 {
        total = total.scale(Rational::from_integer(-1));
    }
    Ok(total)
}

/// Exact comparison of the closed formula against the symbolic derivative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolicComparison {
    pub m: usize,
    pub n: usize,
    pub oracle_terms: usize,
    pub mismatched_terms: usize,
}

pub fn compare_with_symbolic(m: usize, n: usize, pattern: SignPattern) -> Result<SymbolicComparison> {
    let oracle = symbolic_kernel_derivative(m, n)?;
    let formula = teuwen_expansion(m, n, pattern)?;
    Ok(SymbolicComparison { m, n, oracle_terms: oracle.len(), mismatched_terms: oracle.mismatches(&formula) })
}

// ---------------------------------------------------------------- fixtures

/// One pinned oracle value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fixture {
    pub operation: String,
    pub inputs: serde_json::Value,
    pub value: f64,
}

/// Oracle pins for the derived examples, computed independently of the kernels.
pub fn oracle_fixtures() -> Result<Vec<Fixture>> {
    use serde_json::json;
    let mut out = Vec::new();
    let mut push = |op: &str, inputs: serde_json::Value, value: f64| {
        out.push(Fixture { operation: op.to_string(), inputs, value });
    };
    push("gamma_integral", json!({"a": 2.0, "lam": 2.0}), gamma_integral(2.0, 2.0)?);
    push("gamma_integral", json!({"a": 1.0, "lam": 1.0}), gamma_integral(1.0, 1.0)?);
    push("gamma_integral", json!({"a": 0.5, "lam": 3.0}), gamma_integral(0.5, 3.0)?);

    let exp1 = |t: f64| (-t).exp();
    let d = fd_time_derivative(&exp1, 1.0, 1, &FDScheme::for_time(1.0, 1))?;
    push("fd_time_derivative", json!({"F": "exp(-t)", "t": 1.0, "m": 1}), d.value);
    let cube = |t: f64| t * t * t;
    let d = fd_time_derivative(&cube, 2.0, 2, &FDScheme::for_time(2.0, 2))?;
    push("fd_time_derivative", json!({"F": "t^3", "t": 2.0, "m": 2}), d.value);

    // symbolic oracle evaluated numerically: d_t^m T^L at sample points
    for (m, x, y, t) in [(1usize, 0.3, -0.2, 0.7), (2, 0.3, -0.2, 0.7), (3, -0.5, 0.9, 1.3)] {
        let poly = symbolic_kernel_derivative(m, 1)?;
        let s = crate::kernels::one_minus_e2t(t);
        let base = (-(y - (-t).exp() * x).powi(2) / s).exp() / s.sqrt();
        push("dt_m_ou", json!({"x": [x], "y": [y], "t": t, "m": m}), base * poly.eval(&[x], &[y], t));
    }

    for (lam, alpha, t) in [(1.0, 0.5, 1.0), (2.0, 0.5, 0.5), (3.0, 1.5, 0.4)] {
        let f = move |u: f64| (-lam * u).exp();
        push(
            "weyl_integral",
            json!({"F": format!("exp(-{lam} u)"), "t": t, "alpha": alpha}),
            weyl_integral(&f, t, alpha)?,
        );
    }
    push("hermite_tilde_norm", json!({"k": [0]}), PI.sqrt());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fd_examples() {
        let f = |t: f64| (-t).exp();
        let d = fd_time_derivative(&f, 1.0, 1, &FDScheme::for_time(1.0, 1)).unwrap();
        assert!((d.value + (-1f64).exp()).abs() < 1e-10, "{d:?}");
        let g = |t: f64| t * t * t;
        let d = fd_time_derivative(&g, 2.0, 2, &FDScheme::for_time(2.0, 2)).unwrap();
        assert!((d.value - 12.0).abs() < 1e-9, "{d:?}");
    }

    #[test]
    fn fd_preconditions() {
        let f = |t: f64| t;
        assert!(fd_time_derivative(&f, 0.1, 2, &FDScheme::new(2, 0.1, 4)).is_err());
        let tiny = FDScheme::new(1, 1e-11, 20);
        assert!(matches!(tiny.derivative(&f, 1.0), Err(Error::Capability(_))));
    }

    #[test]
    fn gamma_examples() {
        assert_relative_eq!(gamma_integral(2.0, 2.0).unwrap(), 0.25, max_relative = 1e-14);
        assert_relative_eq!(gamma_integral(1.0, 1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma_integral(0.5, 3.0).unwrap(), 1.023_326_7, max_relative = 1e-7);
    }

    #[test]
    fn weyl_examples_up_to_sign() {
        let f = |u: f64| (-u).exp();
        let v = weyl_integral(&f, 1.0, 0.5).unwrap();
        assert_relative_eq!(weyl_sign(0.5) * v, (-1f64).exp(), max_relative = 1e-6);
        let g = |u: f64| (-2.0 * u).exp();
        let v = weyl_integral(&g, 0.5, 0.5).unwrap();
        assert_relative_eq!(weyl_sign(0.5) * v, 2f64.sqrt() * (-1f64).exp(), max_relative = 1e-6);
        let v = weyl_integral(&f, 0.7, 0.999).unwrap();
        assert_relative_eq!(v.abs(), (-0.7f64).exp(), max_relative = 1e-5);
    }

    #[test]
    fn weyl_rejects_growth() {
        let f = |u: f64| u.exp();
        assert!(matches!(weyl_integral(&f, 1.0, 0.5), Err(Error::Integrability(_))));
    }

    #[test]
    fn ring_relation_is_canonical() {
        let n = 1;
        let e = RingPoly::e(n);
        let r = RingPoly::r(n);
        let lhs = e.pow(2).mul(&r.pow(2));
        let rhs = r.pow(2).add(&RingPoly::constant(n, Rational::from_integer(-1)));
        assert_eq!(lhs, rhs);
        // d/dt R^2 = -2 E^2 R^4 = 2 R^2 - 2 R^4 after reduction
        let d = r.pow(2).dt();
        let expect = r.pow(2).scale(Rational::from_integer(2)).add(&r.pow(4).scale(Rational::from_integer(-2)));
        assert_eq!(d, expect);
    }

    #[test]
    fn symbolic_zero_order_is_identity() {
        let p = symbolic_kernel_derivative(0, 2).unwrap();
        assert_eq!(p, RingPoly::constant(2, Rational::from_integer(1)));
        assert_eq!(compare_with_symbolic(0, 1, SignPattern::Corrected).unwrap().mismatched_terms, 0);
    }

    #[test]
    fn corrected_formula_matches_symbolic_first_order() {
        let c = compare_with_symbolic(1, 1, SignPattern::Corrected).unwrap();
        assert_eq!(c.mismatched_terms, 0);
        let u = compare_with_symbolic(1, 1, SignPattern::Uncorrected).unwrap();
        assert!(u.mismatched_terms >= 1);
    }

    #[test]
    fn symbolic_capability() {
        assert!(matches!(symbolic_kernel_derivative(4, 1), Err(Error::Capability(_))));
        assert!(matches!(symbolic_kernel_derivative(1, 3), Err(Error::Capability(_))));
    }

    #[test]
    fn hermite_coefficient_rows() {
        assert_eq!(hermite_coefficients(3), vec![0, -12, 0, 8]);
        assert_eq!(hermite_coefficients(4), vec![12, 0, -48, 0, 16]);
    }
}
