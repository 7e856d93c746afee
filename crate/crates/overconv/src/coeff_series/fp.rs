use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ring::{Fp, Ring};

/// A finite Laurent polynomial over `F_p`, used for the fiber `F_p((S))`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FpLaurent {
    terms: BTreeMap<i64, u64>,
}

impl FpLaurent {
    pub fn zero() -> Self {
        FpLaurent::default()
    }

    pub fn monomial(c: u64, n: i64, p: u64) -> Self {
        let mut out = FpLaurent::zero();
        out.add_term(n, c, p);
        out
    }

    pub fn from_terms(it: impl IntoIterator<Item = (i64, u64)>, p: u64) -> Self {
        let mut out = FpLaurent::zero();
        for (n, c) in it {
            out.add_term(n, c, p);
        }
        out
    }

    pub fn add_term(&mut self, n: i64, c: u64, p: u64) {
        let c = c % p;
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(n).or_insert(0);
        *slot = (*slot + c) % p;
        if *slot == 0 {
            self.terms.remove(&n);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, u64)> + '_ {
        self.terms.iter().map(|(n, c)| (*n, *c))
    }

    pub fn coeff(&self, n: i64) -> u64 {
        self.terms.get(&n).copied().unwrap_or(0)
    }

    /// S-adic valuation; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn shift(&self, k: i64) -> Self {
        FpLaurent { terms: self.terms.iter().map(|(n, c)| (n + k, *c)).collect() }
    }

    /// Keep exponents `< hi`.
    pub fn below(&self, hi: i64) -> Self {
        FpLaurent { terms: self.terms.range(..hi).map(|(n, c)| (*n, *c)).collect() }
    }
}

/// `F_p((S))` realized as finite Laurent polynomials; with `prec` set,
/// exponents `≥ prec` are discarded after every product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpLaurentRing {
    pub p: u64,
    pub prec: Option<i64>,
}

impl FpLaurentRing {
    pub fn new(p: u64, prec: Option<i64>) -> Self {
        FpLaurentRing { p, prec }
    }

    fn cut(&self, a: FpLaurent) -> FpLaurent {
        match self.prec {
            Some(h) => a.below(h),
            None => a,
        }
    }

    /// Inverse of a nonzero series modulo `S^prec` (relative to the result's
    /// own valuation, the answer is exact through exponent `prec - 1`).
    pub fn inv_series(&self, a: &FpLaurent, prec: i64) -> Result<FpLaurent> {
        let v = a.valuation().ok_or_else(|| Error::domain("inverse of zero"))?;
        let f = Fp::new(self.p);
        let u = a.shift(-v);
        let u0inv = f.inv(u.coeff(0)).unwrap();
        // b_k = -u0^{-1} Σ_{j≥1} u_j b_{k-j}
        let n = (prec + v).max(1) as usize;
        let mut b = vec![0u64; n];
        b[0] = u0inv;
        for k in 1..n {
            let mut s = 0u64;
            for (j, uj) in u.terms().filter(|(j, _)| *j >= 1 && (*j as usize) <= k) {
                s = f.add(&s, &f.mul(&uj, &b[k - j as usize]));
            }
            b[k] = f.neg(&f.mul(&s, &u0inv));
        }
        let out = FpLaurent::from_terms(b.into_iter().enumerate().map(|(i, c)| (i as i64 - v, c)), self.p);
        Ok(out.below(prec))
    }

    /// A square root of a series `1 + …` (or of any unit with square leading
    /// coefficient) modulo `S^prec`; `p` must be odd.
    pub fn sqrt_series(&self, a: &FpLaurent, prec: i64) -> Result<FpLaurent> {
        let f = Fp::new(self.p);
        if self.p == 2 {
            return Err(Error::domain("square roots need p odd"));
        }
        if a.valuation() != Some(0) {
            return Err(Error::domain("square root needs a unit series"));
        }
        let a0 = a.coeff(0);
        let r0 = (1..self.p)
            .find(|x| f.mul(x, x) == a0)
            .ok_or_else(|| Error::domain("leading coefficient is not a square"))?;
        // r_k = (a_k - Σ_{0<j<k} r_j r_{k-j}) / (2 r_0)
        let n = prec.max(1) as usize;
        let mut r = vec![0u64; n];
        r[0] = r0;
        let inv2r0 = f.inv(f.mul(&2, &r0)).unwrap();
        for k in 1..n {
            let mut s = a.coeff(k as i64);
            for j in 1..k {
                s = f.sub(&s, &f.mul(&r[j], &r[k - j]));
            }
            r[k] = f.mul(&s, &inv2r0);
        }
        Ok(FpLaurent::from_terms(r.into_iter().enumerate().map(|(i, c)| (i as i64, c)), self.p))
    }
}

impl Ring for FpLaurentRing {
    type Elem = FpLaurent;
    fn zero(&self) -> FpLaurent {
        FpLaurent::zero()
    }
    fn one(&self) -> FpLaurent {
        self.cut(FpLaurent::monomial(1, 0, self.p))
    }
    fn from_i64(&self, n: i64) -> FpLaurent {
        self.cut(FpLaurent::monomial(n.rem_euclid(self.p as i64) as u64, 0, self.p))
    }
    fn add(&self, a: &FpLaurent, b: &FpLaurent) -> FpLaurent {
        let mut out = a.clone();
        for (n, c) in b.terms() {
            out.add_term(n, c, self.p);
        }
        out
    }
    fn neg(&self, a: &FpLaurent) -> FpLaurent {
        FpLaurent { terms: a.terms.iter().map(|(n, c)| (*n, self.p - c)).collect() }
    }
    fn mul(&self, a: &FpLaurent, b: &FpLaurent) -> FpLaurent {
        let mut acc: BTreeMap<i64, u64> = BTreeMap::new();
        let lim = self.prec.unwrap_or(i64::MAX);
        for (n, x) in a.terms() {
            for (m, y) in b.terms() {
                if n + m >= lim {
                    break;
                }
                let slot = acc.entry(n + m).or_insert(0);
                *slot = (*slot + x * y) % self.p;
            }
        }
        acc.retain(|_, c| *c != 0);
        FpLaurent { terms: acc }
    }
    fn is_zero(&self, a: &FpLaurent) -> bool {
        a.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_sqrt() {
        let r = FpLaurentRing::new(3, Some(20));
        let a = FpLaurent::from_terms([(0, 1), (1, 1)], 3);
        let b = r.inv_series(&a, 20).unwrap();
        assert_eq!(r.mul(&a, &b), r.one());
        let sq = r.sqrt_series(&a, 20).unwrap();
        assert_eq!(r.mul(&sq, &sq), a);
        let c = FpLaurent::from_terms([(-2, 2), (0, 1)], 3);
        let d = r.inv_series(&c, 20).unwrap();
        assert_eq!(r.mul(&c, &d).below(18), r.one());
    }
}
