//! Coefficient rings: the Cohen ring `O = Z_p` (residue degree 1), the power
//! series ring `O[[S]]` and the overconvergent rings `O((S))^{†,r}`.
//!
//! Elements are finite Laurent polynomials in `S` with exact rational
//! coefficients. Valuations are computed exactly.

mod eisenstein;
mod fp;
mod lift;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Q};
use crate::ring::Ring;

pub use eisenstein::{
    fiber_valuation, fiber_valuation_transfer, reduce_mod_eisenstein, EisensteinPrime, FiberElem,
    FiberImage, KappaField, TransferReport,
};
pub use fp::{FpLaurent, FpLaurentRing};
pub use lift::{lift_extension, LiftedExtension};

/// Ring configuration: prime, residue degree and precision windows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingConfig {
    pub p: u64,
    #[serde(default = "one_u32")]
    pub f: u32,
    #[serde(rename = "Np")]
    pub np: i64,
    #[serde(rename = "Ns")]
    pub ns: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conway_lift: Option<Vec<i64>>,
}

fn one_u32() -> u32 {
    1
}

impl RingConfig {
    pub fn new(p: u64, np: i64, ns: i64) -> Result<Self> {
        let c = RingConfig { p, f: 1, np, ns, conway_lift: None };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !rational::is_prime(self.p) {
            return Err(Error::domain(format!("{} is not prime", self.p)));
        }
        if self.f != 1 {
            return Err(Error::domain("only residue degree f = 1 is supported"));
        }
        if self.np < 1 || self.ns < 1 {
            return Err(Error::domain("Np and Ns must be at least 1"));
        }
        Ok(())
    }

    /// Check that every exponent of `f` lies in `[-Ns, Ns]`.
    pub fn check_window(&self, f: &Laurent) -> Result<()> {
        match (f.min_exp(), f.max_exp()) {
            (Some(lo), Some(hi)) if lo < -self.ns || hi > self.ns => Err(Error::domain(format!(
                "exponent outside the window [-{}, {}]",
                self.ns, self.ns
            ))),
            _ => Ok(()),
        }
    }
}

/// A finite Laurent polynomial `Σ a_n S^n` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Laurent {
    terms: BTreeMap<i64, Q>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Laurent::constant(rational::q(1))
    }

    pub fn constant(c: Q) -> Self {
        Laurent::monomial(c, 0)
    }

    pub fn monomial(c: Q, n: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(n, c);
        }
        Laurent { terms }
    }

    /// `S^n`.
    pub fn s_pow(n: i64) -> Self {
        Laurent::monomial(rational::q(1), n)
    }

    pub fn from_terms(it: impl IntoIterator<Item = (i64, Q)>) -> Self {
        let mut out = Laurent::zero();
        for (n, c) in it {
            out.add_term(n, c);
        }
        out
    }

    /// Coefficients as a dense vector starting at `S^0` (for polynomials).
    pub fn from_coeffs(coeffs: &[Q]) -> Self {
        Laurent::from_terms(coeffs.iter().cloned().enumerate().map(|(i, c)| (i as i64, c)))
    }

    pub fn add_term(&mut self, n: i64, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(n).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&n);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Q)> + '_ {
        self.terms.iter().map(|(n, c)| (*n, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, n: i64) -> Q {
        self.terms.get(&n).cloned().unwrap_or_else(Q::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Dense coefficient vector `[a_0, …, a_d]`; requires no negative exponents.
    pub fn to_coeffs(&self) -> Vec<Q> {
        let Some(hi) = self.max_exp() else { return Vec::new() };
        assert!(self.min_exp().unwrap() >= 0, "negative exponent in to_coeffs");
        (0..=hi).map(|n| self.coeff(n)).collect()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Laurent::zero();
        }
        Laurent { terms: self.terms.iter().map(|(n, a)| (*n, a * c)).collect() }
    }

    /// Multiply by `S^k`.
    pub fn shift(&self, k: i64) -> Self {
        Laurent { terms: self.terms.iter().map(|(n, a)| (n + k, a.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Laurent::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Smallest p-adic valuation of a coefficient.
    pub fn min_vp(&self, p: u64) -> Option<i64> {
        self.terms.values().filter_map(|c| rational::vp(c, p)).min()
    }

    /// Whether the element lies in `O[[S]]`: no negative exponents and
    /// p-integral coefficients.
    pub fn is_integral_series(&self, p: u64) -> bool {
        self.min_exp().is_none_or(|n| n >= 0) && self.min_vp(p).is_none_or(|v| v >= 0)
    }

    /// Drop every term whose Gauss weight `v_p(a_n) + r·n` is at least
    /// `cutoff` and truncate the remaining coefficients p-adically so that
    /// the discarded part also has weight at least `cutoff`.
    pub fn truncate_weight(&self, p: u64, r: &Q, cutoff: &Q) -> Self {
        let mut out = Laurent::zero();
        for (n, c) in self.terms() {
            let room = cutoff - r * rational::q(n);
            let digits = rational::ceil_q(&room);
            let t = rational::trunc(c, p, rational::to_i64(&digits));
            out.add_term(n, t);
        }
        out
    }

    /// Keep only exponents in `[lo, hi)`.
    pub fn window(&self, lo: i64, hi: i64) -> Self {
        Laurent { terms: self.terms.range(lo..hi).map(|(n, c)| (*n, c.clone())).collect() }
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::grammar::render_laurent(self))
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (n, c) in rhs.terms() {
            out.add_term(n, c.clone());
        }
        out
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (n, c) in rhs.terms() {
            out.add_term(n, -c);
        }
        out
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(n, c)| (*n, -c)).collect() }
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (n, a) in self.terms() {
            for (m, b) in rhs.terms() {
                out.add_term(n + m, a * b);
            }
        }
        out
    }
}

/// Gauss valuation `w_r(f) = min_n (v_p(a_n) + r·n)`; `None` stands for `∞`.
pub fn gauss_valuation(f: &Laurent, p: u64, r: &Q) -> Result<Option<Q>> {
    if !r.is_positive() {
        return Err(Error::domain("Gauss valuation needs r > 0"));
    }
    Ok(gauss_valuation_unchecked(f, p, r))
}

pub(crate) fn gauss_valuation_unchecked(f: &Laurent, p: u64, r: &Q) -> Option<Q> {
    f.terms().map(|(n, c)| rational::q(rational::vp(c, p).unwrap()) + r * rational::q(n)).min()
}

/// Partial valuation `v^{≤n}(f)`: the S-adic valuation of `f mod p^{n+1}`,
/// i.e. the least exponent whose coefficient has `v_p ≤ n`.
pub fn partial_valuation(f: &Laurent, p: u64, n: i64) -> Option<i64> {
    f.terms().find(|(_, c)| rational::vp(c, p).unwrap() <= n).map(|(m, _)| m)
}

/// `min_n (r·v^{≤n}(f) + n)` over the integers `n` where `v^{≤n}` changes.
/// Agrees with [`gauss_valuation`] on every finite Laurent polynomial.
pub fn gauss_valuation_via_partial(f: &Laurent, p: u64, r: &Q) -> Option<Q> {
    let lo = f.min_vp(p)?;
    let hi = f.terms().map(|(_, c)| rational::vp(c, p).unwrap()).max().unwrap();
    (lo..=hi)
        .filter_map(|n| partial_valuation(f, p, n).map(|m| r * rational::q(m) + rational::q(n)))
        .min()
}

/// `O((S))` as a ring of finite Laurent polynomials, optionally truncated at
/// Gauss weight `cutoff` for the parameter `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentRing {
    pub p: u64,
    pub r: Q,
    pub cutoff: Option<Q>,
}

impl LaurentRing {
    pub fn exact(p: u64) -> Self {
        LaurentRing { p, r: rational::q(1), cutoff: None }
    }

    pub fn truncated(p: u64, r: Q, cutoff: Q) -> Self {
        LaurentRing { p, r, cutoff: Some(cutoff) }
    }

    pub fn reduce(&self, a: Laurent) -> Laurent {
        match &self.cutoff {
            Some(c) => a.truncate_weight(self.p, &self.r, c),
            None => a,
        }
    }

    pub fn weight(&self, a: &Laurent) -> Option<Q> {
        gauss_valuation_unchecked(a, self.p, &self.r)
    }
}

impl Ring for LaurentRing {
    type Elem = Laurent;
    fn zero(&self) -> Laurent {
        Laurent::zero()
    }
    fn one(&self) -> Laurent {
        self.reduce(Laurent::one())
    }
    fn from_i64(&self, n: i64) -> Laurent {
        self.reduce(Laurent::constant(rational::q(n)))
    }
    fn add(&self, a: &Laurent, b: &Laurent) -> Laurent {
        a + b
    }
    fn neg(&self, a: &Laurent) -> Laurent {
        -a
    }
    fn mul(&self, a: &Laurent, b: &Laurent) -> Laurent {
        self.reduce(a * b)
    }
    fn is_zero(&self, a: &Laurent) -> bool {
        a.is_zero()
    }
}
