//! Base rings for Tate algebras, each with a regular system of parameters.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::coeff_series::{FpLaurent, FpLaurentRing, KappaField, Laurent};
use crate::error::{Error, Result};
use crate::rational::{self, Q};
use crate::ring::{Fp, Ring};

/// A coefficient ring `R` with a fixed regular system of parameters
/// `(s_1, …, s_d)`, supporting the iterated valuation `v̲_R`.
pub trait BaseRing: Ring {
    /// Names of the parameters, e.g. `["p", "S"]`.
    fn params(&self) -> Vec<&'static str>;
    /// The iterated valuation vector; `None` for zero.
    fn ext_val(&self, a: &Self::Elem) -> Option<Vec<i64>>;
    /// Inverse of a unit.
    fn unit_inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn to_laurent(&self, a: &Self::Elem) -> Laurent;
    fn from_laurent(&self, a: &Laurent) -> Result<Self::Elem>;
}

/// An element of `O[[S]]/(p^Np, S^Ns)`: coefficients in `[0, p^Np)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Series {
    terms: BTreeMap<u32, BigInt>,
}

impl Series {
    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigInt)> + '_ {
        self.terms.iter().map(|(n, c)| (*n, c))
    }

    pub fn coeff(&self, n: u32) -> BigInt {
        self.terms.get(&n).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `O[[S]]` truncated modulo `(p^Np, S^Ns)`, parameters `(p, S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesRing {
    pub p: u64,
    pub np: u32,
    pub ns: u32,
    modulus: BigInt,
}

impl SeriesRing {
    pub fn new(p: u64, np: u32, ns: u32) -> Self {
        SeriesRing { p, np, ns, modulus: rational::pow_p(p, np) }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    fn insert(&self, terms: &mut BTreeMap<u32, BigInt>, n: u32, c: BigInt) {
        if n >= self.ns {
            return;
        }
        let slot = terms.entry(n).or_default();
        *slot = (&*slot + c).mod_floor(&self.modulus);
        if slot.is_zero() {
            terms.remove(&n);
        }
    }

    pub fn from_terms(&self, it: impl IntoIterator<Item = (u32, BigInt)>) -> Series {
        let mut terms = BTreeMap::new();
        for (n, c) in it {
            self.insert(&mut terms, n, c);
        }
        Series { terms }
    }

    pub fn constant(&self, c: BigInt) -> Series {
        self.from_terms([(0, c)])
    }

    pub fn s_pow(&self, n: u32) -> Series {
        self.from_terms([(n, BigInt::one())])
    }

    /// Gauss valuation `min (v_p(a_j) + ρ·j)`, capped at the truncation
    /// frontier `min(Np, ρ·Ns)`; `None` if the element is zero.
    pub fn weight(&self, a: &Series, rho: &Q) -> Option<Q> {
        a.terms()
            .map(|(n, c)| rational::q(rational::vp_int(c, self.p).unwrap()) + rho * rational::q(n as i64))
            .min()
    }

    /// The truncation frontier `min(Np, ρ·Ns)` for the weight `ρ`.
    pub fn frontier(&self, rho: &Q) -> Q {
        let a = rational::q(self.np as i64);
        let b = rho * rational::q(self.ns as i64);
        a.min(b)
    }

    /// Reduce modulo `p`, as an element of `F_p[[S]]`.
    pub fn mod_p(&self, a: &Series) -> FpLaurent {
        let pb = BigInt::from(self.p);
        FpLaurent::from_terms(
            a.terms().map(|(n, c)| (n as i64, rational::to_i64(&c.mod_floor(&pb)) as u64)),
            self.p,
        )
    }
}

impl Ring for SeriesRing {
    type Elem = Series;
    fn zero(&self) -> Series {
        Series::default()
    }
    fn one(&self) -> Series {
        self.constant(BigInt::one())
    }
    fn from_i64(&self, n: i64) -> Series {
        self.constant(BigInt::from(n))
    }
    fn add(&self, a: &Series, b: &Series) -> Series {
        let mut terms = a.terms.clone();
        for (n, c) in b.terms() {
            self.insert(&mut terms, n, c.clone());
        }
        Series { terms }
    }
    fn neg(&self, a: &Series) -> Series {
        self.from_terms(a.terms().map(|(n, c)| (n, -c)))
    }
    fn mul(&self, a: &Series, b: &Series) -> Series {
        let mut acc: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (n, x) in a.terms() {
            for (m, y) in b.terms() {
                if n + m >= self.ns {
                    break;
                }
                *acc.entry(n + m).or_default() += x * y;
            }
        }
        let terms = acc
            .into_iter()
            .map(|(n, c)| (n, c.mod_floor(&self.modulus)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Series { terms }
    }
    fn is_zero(&self, a: &Series) -> bool {
        a.terms.is_empty()
    }
}

impl BaseRing for SeriesRing {
    fn params(&self) -> Vec<&'static str> {
        vec!["p", "S"]
    }

    fn ext_val(&self, a: &Series) -> Option<Vec<i64>> {
        let v1 = a.terms().map(|(_, c)| rational::vp_int(c, self.p).unwrap()).min()?;
        let v2 = a.terms().find(|(_, c)| rational::vp_int(c, self.p).unwrap() == v1).map(|(n, _)| n)?;
        Some(vec![v1, v2 as i64])
    }

    fn unit_inv(&self, a: &Series) -> Option<Series> {
        let a0 = a.coeff(0);
        if rational::vp_int(&a0, self.p) != Some(0) {
            return None;
        }
        let inv0 = rational::inv_mod(&a0, &self.modulus);
        let mut b: Vec<BigInt> = vec![BigInt::zero(); self.ns as usize];
        b[0] = inv0.clone();
        for k in 1..self.ns as usize {
            let mut s = BigInt::zero();
            for (j, aj) in a.terms().filter(|(j, _)| *j >= 1 && (*j as usize) <= k) {
                s += aj * &b[k - j as usize];
            }
            b[k] = (-(s * &inv0)).mod_floor(&self.modulus);
        }
        Some(self.from_terms(b.into_iter().enumerate().map(|(i, c)| (i as u32, c))))
    }

    /// Coefficients are lifted to the residues of least absolute value, so
    /// that `-1` reads as `-1` rather than `p^Np - 1`.
    fn to_laurent(&self, a: &Series) -> Laurent {
        Laurent::from_terms(a.terms().map(|(n, c)| {
            let c = if c + c > self.modulus { c - &self.modulus } else { c.clone() };
            (n as i64, Q::from_integer(c))
        }))
    }

    fn from_laurent(&self, a: &Laurent) -> Result<Series> {
        if !a.is_integral_series(self.p) {
            return Err(Error::domain("coefficient is not in O[[S]]"));
        }
        let mut out = Vec::new();
        for (n, c) in a.terms() {
            // c is p-integral: reduce numerator * denominator^{-1} mod p^Np.
            let den_inv = rational::inv_mod(c.denom(), &self.modulus);
            out.push((n as u32, c.numer() * den_inv));
        }
        Ok(self.from_terms(out))
    }
}

impl BaseRing for KappaField {
    fn params(&self) -> Vec<&'static str> {
        vec!["π"]
    }

    fn ext_val(&self, a: &Vec<Q>) -> Option<Vec<i64>> {
        self.valuation(a).map(|v| vec![v])
    }

    fn unit_inv(&self, a: &Vec<Q>) -> Option<Vec<Q>> {
        if self.valuation(a) != Some(0) {
            return None;
        }
        self.inv(a)
    }

    fn to_laurent(&self, a: &Vec<Q>) -> Laurent {
        Laurent::from_coeffs(a)
    }

    fn from_laurent(&self, a: &Laurent) -> Result<Vec<Q>> {
        Ok(self.eval_laurent(a))
    }
}

impl BaseRing for FpLaurentRing {
    fn params(&self) -> Vec<&'static str> {
        vec!["S"]
    }

    fn ext_val(&self, a: &FpLaurent) -> Option<Vec<i64>> {
        a.valuation().map(|v| vec![v])
    }

    fn unit_inv(&self, a: &FpLaurent) -> Option<FpLaurent> {
        if a.valuation() != Some(0) {
            return None;
        }
        self.inv_series(a, self.prec.unwrap_or(64)).ok()
    }

    fn to_laurent(&self, a: &FpLaurent) -> Laurent {
        Laurent::from_terms(a.terms().map(|(n, c)| (n, rational::q(c as i64))))
    }

    fn from_laurent(&self, a: &Laurent) -> Result<FpLaurent> {
        let mut out = FpLaurent::zero();
        for (n, c) in a.terms() {
            out.add_term(n, rational::to_fp(c, self.p)?, self.p);
        }
        Ok(match self.prec {
            Some(h) => out.below(h),
            None => out,
        })
    }
}

impl BaseRing for Fp {
    fn params(&self) -> Vec<&'static str> {
        Vec::new()
    }

    fn ext_val(&self, a: &u64) -> Option<Vec<i64>> {
        (a % self.p != 0).then(Vec::new)
    }

    fn unit_inv(&self, a: &u64) -> Option<u64> {
        self.inv(*a)
    }

    fn to_laurent(&self, a: &u64) -> Laurent {
        Laurent::constant(rational::q(*a as i64))
    }

    fn from_laurent(&self, a: &Laurent) -> Result<u64> {
        if a.min_exp().is_some_and(|n| n != 0) || a.max_exp().is_some_and(|n| n != 0) {
            return Err(Error::domain("expected a constant"));
        }
        rational::to_fp(&a.coeff(0), self.p)
    }
}
