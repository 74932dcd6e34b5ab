//! Hermite polynomials, their Gaussian-weighted variants and the combinatorics
//! (multi-indices, binomials, Stirling numbers) shared by the kernel formulas.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest Hermite degree accepted by [`hermite`].
pub const DEFAULT_MAX_DEGREE: usize = 64;

/// Largest `N` for which [`stirling2`] is computed in exact integer arithmetic.
pub const STIRLING_MAX: usize = 20;

/// Degrees above this use the rescaled recurrence in [`hermite_tilde`].
const SPLIT_DEGREE: usize = 30;

const RESCALE: f64 = 1e150;

/// A multi-index `k = (k_1, ..., k_n)` of non-negative integers, `n >= 1`.
///
/// The derived ordering is lexicographic and is only used for deterministic
/// storage; the component-wise partial order is [`MultiIndex::is_dominated_by`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Argument("multi-index must have at least one entry".into()));
        }
        Ok(Self(entries))
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "dimension must be positive");
        Self(vec![0; n])
    }

    /// The unit multi-index `e_i` in dimension `n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut k = Self::zeros(n);
        k.0[i] = 1;
        k
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|k| = k_1 + ... + k_n`.
    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Component-wise order: `self_i <= other_i` for every `i`.
    pub fn is_dominated_by(&self, other: &MultiIndex) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        if self.dim() != other.dim() {
            return Err(Error::Argument(format!("multi-index dimensions differ: {} vs {}", self.dim(), other.dim())));
        }
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    /// `k + e_i`.
    pub fn plus_unit(&self, i: usize) -> MultiIndex {
        let mut k = self.clone();
        k.0[i] += 1;
        k
    }

    /// `k - e_i`, or `None` when `k_i = 0`.
    pub fn minus_unit(&self, i: usize) -> Option<MultiIndex> {
        let mut k = self.clone();
        k.0[i] = k.0[i].checked_sub(1)?;
        Some(k)
    }
}

impl From<Vec<usize>> for MultiIndex {
    /// Panics on an empty vector; use [`MultiIndex::new`] for fallible construction.
    fn from(entries: Vec<usize>) -> Self {
        Self::new(entries).expect("non-empty multi-index")
    }
}

impl std::ops::Index<usize> for MultiIndex {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// All `s` with `0 <= s_i <= bound_i`, in lexicographic order.
pub fn multiindex_range(bound: &MultiIndex) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(bound.0.iter().map(|b| b + 1).product());
    let mut cur = vec![0usize; bound.dim()];
    loop {
        out.push(MultiIndex(cur.clone()));
        // odometer increment, last coordinate fastest
        let mut i = bound.dim();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < bound.0[i] {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = 0;
                }
                break;
            }
        }
    }
}

/// All multi-indices in dimension `n` with `|r| = degree`, lexicographic.
pub fn multiindices_of_degree(n: usize, degree: usize) -> Vec<MultiIndex> {
    multiindex_range(&MultiIndex(vec![degree; n])).into_iter().filter(|r| r.degree() == degree).collect()
}

/// All multi-indices in dimension `n` with `|r| <= max_degree`, lexicographic.
pub fn multiindices_up_to_degree(n: usize, max_degree: usize) -> Vec<MultiIndex> {
    multiindex_range(&MultiIndex(vec![max_degree; n])).into_iter().filter(|r| r.degree() <= max_degree).collect()
}

/// Physicists' Hermite polynomial `H_k(u)` by the three-term recurrence.
pub fn hermite(k: usize, u: f64) -> Result<f64> {
    hermite_capped(k, u, DEFAULT_MAX_DEGREE)
}

pub fn hermite_capped(k: usize, u: f64, max_degree: usize) -> Result<f64> {
    if k > max_degree {
        return Err(Error::Capability(format!("Hermite degree {k} exceeds cap {max_degree}")));
    }
    Ok(hermite_unchecked(k, u))
}

pub(crate) fn hermite_unchecked(k: usize, u: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 2.0 * u;
    for j in 1..k {
        let next = 2.0 * u * cur - 2.0 * j as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_0(u), ..., H_kmax(u)`.
pub fn hermite_table(kmax: usize, u: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(1.0);
    if kmax >= 1 {
        out.push(2.0 * u);
    }
    for j in 1..kmax {
        let next = 2.0 * u * out[j] - 2.0 * j as f64 * out[j - 1];
        out.push(next);
    }
    out
}

/// `value * exp(log_scale)`, used where `H_k` alone would overflow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermiteValue {
    pub value: f64,
    pub log_scale: f64,
}

impl HermiteValue {
    pub fn to_f64(self) -> f64 {
        if self.value == 0.0 {
            return 0.0;
        }
        self.value * self.log_scale.exp()
    }

    pub fn ln_abs(self) -> f64 {
        self.value.abs().ln() + self.log_scale
    }

    pub fn signum(self) -> f64 {
        if self.value == 0.0 {
            0.0
        } else {
            self.value.signum()
        }
    }
}

/// `H_k(u)` with periodic rescaling so that any degree stays finite.
pub fn hermite_split(k: usize, u: f64) -> HermiteValue {
    let mut log_scale = 0.0;
    let mut prev = 1.0;
    if k == 0 {
        return HermiteValue { value: 1.0, log_scale };
    }
    let mut cur = 2.0 * u;
    for j in 1..k {
        let next = 2.0 * u * cur - 2.0 * j as f64 * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += RESCALE.ln();
        }
    }
    HermiteValue { value: cur, log_scale }
}

/// One-dimensional `H~_k(u) = e^{-u^2} H_k(u)`.
pub fn hermite_tilde_1d(k: usize, u: f64) -> f64 {
    if k <= SPLIT_DEGREE {
        (-u * u).exp() * hermite_unchecked(k, u)
    } else {
        let h = hermite_split(k, u);
        if h.value == 0.0 {
            return 0.0;
        }
        h.signum() * (h.ln_abs() - u * u).exp()
    }
}

/// `H~_k(x) = e^{-|x|^2} prod_i H_{k_i}(x_i)`.
///
/// The tensor product carries no global sign; every downstream quantity is
/// sign-insensitive.
pub fn hermite_tilde(k: &MultiIndex, x: &[f64]) -> Result<f64> {
    if k.dim() != x.len() {
        return Err(Error::Argument(format!(
            "multi-index has dimension {} but point has dimension {}",
            k.dim(),
            x.len()
        )));
    }
    if k.degree() <= SPLIT_DEGREE {
        let mut p = 1.0;
        let mut r2 = 0.0;
        for (&ki, &xi) in k.entries().iter().zip(x) {
            p *= hermite_unchecked(ki, xi);
            r2 += xi * xi;
        }
        return Ok(p * (-r2).exp());
    }
    let mut sign = 1.0;
    let mut log_abs = 0.0;
    for (&ki, &xi) in k.entries().iter().zip(x) {
        let h = hermite_split(ki, xi);
        if h.value == 0.0 {
            return Ok(0.0);
        }
        sign *= h.signum();
        log_abs += h.ln_abs() - xi * xi;
    }
    Ok(sign * log_abs.exp())
}

/// `ln k!`, exact summation below 171 and log-Gamma above.
pub fn ln_factorial(k: usize) -> f64 {
    if k < 171 {
        (2..=k).map(|j| (j as f64).ln()).sum()
    } else {
        statrs::function::gamma::ln_gamma(k as f64 + 1.0)
    }
}

/// `ln ||H~_k||^2` in `L^2(gamma_{-1})`: `sum_i ln(pi 2^{k_i} k_i!)`.
pub fn ln_hermite_tilde_norm_sq(k: &MultiIndex) -> f64 {
    k.entries().iter().map(|&ki| PI.ln() + ki as f64 * std::f64::consts::LN_2 + ln_factorial(ki)).sum()
}

/// `||H~_k||_{L^2(gamma_{-1})} = prod_i sqrt(pi 2^{k_i} k_i!)`.
pub fn hermite_tilde_l2_norm(k: &MultiIndex) -> f64 {
    (0.5 * ln_hermite_tilde_norm_sq(k)).exp()
}

pub fn hermite_tilde_norm_sq(k: &MultiIndex) -> f64 {
    ln_hermite_tilde_norm_sq(k).exp()
}

/// Binomial coefficient `C(n, k)` (zero when `k > n`).
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc as u64
}

/// Multinomial coefficient `(|r|)! / (r_1! ... r_n!)`.
pub fn multinomial(r: &[usize]) -> u64 {
    let mut total = 0usize;
    let mut acc: u64 = 1;
    for &ri in r {
        total += ri;
        acc *= binomial(total, ri);
    }
    acc
}

/// Stirling number of the second kind `S(N, l)`: partitions of an `N`-set into
/// `l` non-empty blocks. Zero when `l > N`.
pub fn stirling2(big_n: usize, l: usize) -> Result<u64> {
    if big_n > STIRLING_MAX {
        return Err(Error::Capability(format!("Stirling numbers are tabulated up to N = {STIRLING_MAX}, got {big_n}")));
    }
    if l > big_n {
        return Ok(0);
    }
    // row-by-row recurrence S(N,l) = l S(N-1,l) + S(N-1,l-1)
    let mut row = vec![0u64; big_n + 1];
    row[0] = 1;
    for nn in 1..=big_n {
        for ll in (1..=nn).rev() {
            row[ll] = ll as u64 * row[ll] + row[ll - 1];
        }
        row[0] = 0;
    }
    Ok(row[l])
}
