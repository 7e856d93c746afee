use num_traits::{One, Zero};

use super::fp::FpLaurent;
use super::Laurent;
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{self, Q};
use crate::ring::{poly, Rationals, Ring};

/// An Eisenstein prime `𝔭` of `O[[S]]`: either generated by an Eisenstein
/// polynomial `P(S)`, or the characteristic-p prime `(p)` of degree `∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinPrime {
    p: u64,
    poly: Option<Vec<Q>>,
}

impl EisensteinPrime {
    /// Build from the coefficients `[a_0, …, a_{e-1}, 1]` of a monic
    /// Eisenstein polynomial.
    pub fn new(p: u64, coeffs: Vec<Q>) -> Result<Self> {
        let coeffs = poly::normalize(&Rationals, coeffs);
        if coeffs.len() < 2 {
            return Err(Error::domain("an Eisenstein polynomial has degree at least 1"));
        }
        if !coeffs.last().unwrap().is_one() {
            return Err(Error::domain("an Eisenstein polynomial must be monic"));
        }
        for (i, a) in coeffs[..coeffs.len() - 1].iter().enumerate() {
            let v = rational::vp(a, p);
            let ok = match (i, v) {
                (0, Some(1)) => true,
                (0, _) => false,
                (_, None) => true,
                (_, Some(v)) => v >= 1,
            };
            if !ok {
                return Err(Error::domain(format!(
                    "not Eisenstein at p = {p}: coefficient of S^{i} is {}",
                    rational::fmt_q(a)
                )));
            }
        }
        Ok(EisensteinPrime { p, poly: Some(coeffs) })
    }

    pub fn from_laurent(p: u64, f: &Laurent) -> Result<Self> {
        if f.min_exp().is_some_and(|n| n < 0) {
            return Err(Error::domain("an Eisenstein polynomial has no negative exponents"));
        }
        EisensteinPrime::new(p, f.to_coeffs())
    }

    /// The prime `(p)`, whose fiber is `F_p((S))`.
    pub fn char_p(p: u64) -> Self {
        EisensteinPrime { p, poly: None }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_char_p(&self) -> bool {
        self.poly.is_none()
    }

    /// `deg 𝔭`; `None` stands for `∞`.
    pub fn degree(&self) -> Option<usize> {
        self.poly.as_ref().map(|c| c.len() - 1)
    }

    pub fn poly(&self) -> Option<&[Q]> {
        self.poly.as_deref()
    }

    pub fn as_laurent(&self) -> Option<Laurent> {
        self.poly.as_ref().map(|c| Laurent::from_coeffs(c))
    }

    /// The residue field `κ(𝔭) = Q_p[S]/P` for a finite-degree prime.
    pub fn kappa(&self) -> Option<KappaField> {
        self.poly.as_ref().map(|c| KappaField::new(self.p, c.clone()))
    }
}

/// The field `Q_p[π]/P(π)` for an Eisenstein polynomial `P`, with exact
/// rational coordinates in the basis `1, π, …, π^{e-1}` and valuation
/// normalized by `v(π) = 1`.
///
/// With `prec` set, results are truncated modulo `π^prec`, which turns the
/// ring into the Artinian quotient `O_κ/π^prec` used by truncated Gröbner
/// computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaField {
    pub p: u64,
    modulus: Vec<Q>,
    pub prec: Option<i64>,
}

impl KappaField {
    pub fn new(p: u64, modulus: Vec<Q>) -> Self {
        KappaField { p, modulus, prec: None }
    }

    pub fn with_prec(&self, prec: i64) -> Self {
        KappaField { prec: Some(prec), ..self.clone() }
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[Q] {
        &self.modulus
    }

    pub fn from_q(&self, c: Q) -> Vec<Q> {
        self.reduce_poly(&[c])
    }

    /// Reduce an arbitrary polynomial in `π` modulo `P`.
    pub fn reduce_poly(&self, a: &[Q]) -> Vec<Q> {
        let (_, r) = poly::divrem_monic(&Rationals, a, &self.modulus);
        self.truncate(r)
    }

    pub fn pi(&self) -> Vec<Q> {
        self.reduce_poly(&[Q::zero(), Q::one()])
    }

    /// `π^{-1} = -(π^{e-1} + a_{e-1}π^{e-2} + … + a_1)/a_0`.
    pub fn pi_inv(&self) -> Vec<Q> {
        let a0 = &self.modulus[0];
        let out: Vec<Q> = self.modulus[1..].iter().map(|c| -c / a0).collect();
        poly::normalize(&Rationals, out)
    }

    pub fn pi_pow(&self, n: i64) -> Vec<Q> {
        if n >= 0 {
            self.pow(&self.pi(), n as u64)
        } else {
            self.pow(&self.pi_inv(), (-n) as u64)
        }
    }

    /// Valuation normalized by `v(π) = 1`; `None` for zero.
    pub fn valuation(&self, x: &[Q]) -> Option<i64> {
        let e = self.degree() as i64;
        x.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| e * rational::vp(c, self.p).unwrap() + i as i64)
            .min()
    }

    /// Drop the part of `x` of valuation at least `prec` (no-op when exact).
    pub fn truncate(&self, x: Vec<Q>) -> Vec<Q> {
        match self.prec {
            None => x,
            Some(prec) => self.truncate_at(&x, prec),
        }
    }

    pub fn truncate_at(&self, x: &[Q], prec: i64) -> Vec<Q> {
        let e = self.degree() as i64;
        let out = x
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let digits = (prec - i as i64 + e - 1).div_euclid(e);
                rational::trunc_balanced(c, self.p, digits)
            })
            .collect();
        poly::normalize(&Rationals, out)
    }

    /// Matrix of multiplication by `x` in the basis `1, π, …, π^{e-1}`
    /// (column `j` holds `x·π^j`).
    pub fn mul_matrix(&self, x: &[Q]) -> Vec<Vec<Q>> {
        let e = self.degree();
        let exact = KappaField { prec: None, ..self.clone() };
        let cols: Vec<Vec<Q>> = (0..e)
            .map(|j| {
                let mut basis = vec![Q::zero(); j + 1];
                basis[j] = Q::one();
                exact.mul(&x.to_vec(), &basis)
            })
            .collect();
        (0..e).map(|i| (0..e).map(|j| cols[j].get(i).cloned().unwrap_or_default()).collect()).collect()
    }

    /// Multiplicative inverse, exact; `None` for zero.
    pub fn inv(&self, x: &[Q]) -> Option<Vec<Q>> {
        if x.iter().all(|c| c.is_zero()) {
            return None;
        }
        let e = self.degree();
        let m = self.mul_matrix(x);
        let mut rhs = vec![Q::zero(); e];
        rhs[0] = Q::one();
        let y = linalg::solve(&m, &rhs)?;
        Some(self.truncate(poly::normalize(&Rationals, y)))
    }

    /// Evaluate a Laurent polynomial at `S = π`.
    pub fn eval_laurent(&self, f: &Laurent) -> Vec<Q> {
        let exact = KappaField { prec: None, ..self.clone() };
        let mut acc = Vec::new();
        let (Some(lo), Some(hi)) = (f.min_exp(), f.max_exp()) else { return acc };
        // Horner over the exponent range, then multiply by π^lo.
        let pi = exact.pi();
        for n in (lo..=hi).rev() {
            acc = exact.mul(&acc, &pi);
            acc = exact.add(&acc, &exact.from_q(f.coeff(n)));
        }
        let acc = exact.mul(&acc, &exact.pi_pow(lo));
        self.truncate(acc)
    }
}

impl Ring for KappaField {
    type Elem = Vec<Q>;
    fn zero(&self) -> Vec<Q> {
        Vec::new()
    }
    fn one(&self) -> Vec<Q> {
        self.from_q(Q::one())
    }
    fn from_i64(&self, n: i64) -> Vec<Q> {
        self.from_q(rational::q(n))
    }
    fn add(&self, a: &Vec<Q>, b: &Vec<Q>) -> Vec<Q> {
        poly::add(&Rationals, a, b)
    }
    fn neg(&self, a: &Vec<Q>) -> Vec<Q> {
        a.iter().map(|c| -c).collect()
    }
    fn mul(&self, a: &Vec<Q>, b: &Vec<Q>) -> Vec<Q> {
        self.reduce_poly(&poly::mul(&Rationals, a, b))
    }
    fn is_zero(&self, a: &Vec<Q>) -> bool {
        a.iter().all(|c| c.is_zero())
    }
}

/// An element of a fiber `κ(𝔭)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberElem {
    /// Coordinates in `1, π, …, π^{e-1}`.
    Kappa(Vec<Q>),
    /// Element of `F_p((S))`.
    Fp(FpLaurent),
}

/// Image of a reduction together with its precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberImage {
    pub value: FiberElem,
    /// `None` when the image is exact.
    pub precision: Option<i64>,
}

/// Reduce `f` modulo `𝔭`: `S ↦ π_𝔭`, or coefficients mod p for `(p)`.
pub fn reduce_mod_eisenstein(f: &Laurent, prime: &EisensteinPrime) -> Result<FiberImage> {
    let value = match prime.kappa() {
        Some(k) => FiberElem::Kappa(k.eval_laurent(f)),
        None => {
            let mut out = FpLaurent::zero();
            for (n, c) in f.terms() {
                out.add_term(n, rational::to_fp(c, prime.p())?, prime.p());
            }
            FiberElem::Fp(out)
        }
    };
    Ok(FiberImage { value, precision: None })
}

/// Valuation of a fiber element, normalized by `v(π_𝔭) = 1`.
pub fn fiber_valuation(prime: &EisensteinPrime, x: &FiberElem) -> Option<i64> {
    match (prime.kappa(), x) {
        (Some(k), FiberElem::Kappa(c)) => k.valuation(c),
        (None, FiberElem::Fp(f)) => f.valuation(),
        _ => panic!("fiber element does not belong to this prime"),
    }
}

/// Comparison of the valuations of one element of `O[[S]]` at two fibers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferReport {
    pub v_p: Option<i64>,
    pub v_q: Option<i64>,
    /// Whether `min(v_𝔭, v_𝔮) < min(deg 𝔭, deg 𝔮)`.
    pub hypothesis: bool,
    pub equal: bool,
}

/// Valuations of `x ∈ O[[S]]` at two Eisenstein primes. When the smaller
/// valuation is below both degrees the two valuations coincide.
pub fn fiber_valuation_transfer(
    x: &Laurent,
    p1: &EisensteinPrime,
    p2: &EisensteinPrime,
) -> Result<TransferReport> {
    if p1.p() != p2.p() {
        return Err(Error::Usage("primes over different p".into()));
    }
    if !x.is_integral_series(p1.p()) {
        return Err(Error::domain("element must lie in O[[S]]"));
    }
    let v_p = fiber_valuation(p1, &reduce_mod_eisenstein(x, p1)?.value);
    let v_q = fiber_valuation(p2, &reduce_mod_eisenstein(x, p2)?.value);
    let bound = match (p1.degree(), p2.degree()) {
        (Some(a), Some(b)) => Some(a.min(b) as i64),
        (Some(a), None) | (None, Some(a)) => Some(a as i64),
        (None, None) => None,
    };
    let lo = match (v_p, v_q) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (Some(a), None) | (None, Some(a)) => Some(a),
        (None, None) => None,
    };
    let hypothesis = match (lo, bound) {
        (Some(v), Some(d)) => v < d,
        (Some(_), None) => true,
        (None, _) => false,
    };
    Ok(TransferReport { v_p, v_q, hypothesis, equal: v_p == v_q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn lp(terms: &[(i64, i64)]) -> Laurent {
        Laurent::from_terms(terms.iter().map(|&(n, c)| (n, q(c))))
    }

    #[test]
    fn eisenstein_check() {
        assert!(EisensteinPrime::new(3, vec![q(-3), q(1)]).is_ok());
        assert!(EisensteinPrime::new(3, vec![q(9), q(1)]).is_err());
        assert!(EisensteinPrime::new(3, vec![q(3), q(1), q(1)]).is_err());
        assert!(EisensteinPrime::new(3, vec![q(3), q(0), q(2)]).is_err());
    }

    #[test]
    fn substitution_at_linear_prime() {
        let pr = EisensteinPrime::new(3, vec![q(-3), q(1)]).unwrap();
        let img = reduce_mod_eisenstein(&lp(&[(2, 1), (0, 1)]), &pr).unwrap();
        assert_eq!(img.value, FiberElem::Kappa(vec![q(10)]));
        let inv = reduce_mod_eisenstein(&lp(&[(-1, 1)]), &pr).unwrap();
        assert_eq!(inv.value, FiberElem::Kappa(vec![rational::qf(1, 3)]));
    }

    #[test]
    fn pi_inverse_is_inverse() {
        let pr = EisensteinPrime::new(3, vec![q(3), q(6), q(0), q(1)]).unwrap();
        let k = pr.kappa().unwrap();
        assert_eq!(k.mul(&k.pi(), &k.pi_inv()), k.one());
        let x = vec![q(2), q(3), q(1)];
        let y = k.inv(&x).unwrap();
        assert_eq!(k.mul(&x, &y), k.one());
        assert_eq!(k.valuation(&k.from_q(q(3))), Some(3));
    }

    #[test]
    fn transfer_example() {
        let x = lp(&[(0, 3), (3, 1)]);
        let q5 = EisensteinPrime::new(3, vec![q(3), q(0), q(0), q(0), q(0), q(1)]).unwrap();
        let r = fiber_valuation_transfer(&x, &EisensteinPrime::char_p(3), &q5).unwrap();
        assert_eq!((r.v_p, r.v_q, r.hypothesis, r.equal), (Some(3), Some(3), true, true));
        let y = lp(&[(5, 1)]);
        let r = fiber_valuation_transfer(&y, &EisensteinPrime::char_p(3), &q5).unwrap();
        assert!(!r.hypothesis);
    }
}
