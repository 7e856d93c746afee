//! Complete discretely valued base fields and simple extensions `K[θ]/(g)`.

use num_integer::Integer;

use crate::coeff_series::{FpLaurent, FpLaurentRing, KappaField};
use crate::error::{Error, Result};
use crate::rational::{self, Q};
use crate::ring::{charpoly, poly, Fp, Ring};
use crate::tate::BaseRing;

/// A complete discretely valued field with residue field `F_p`, normalized by
/// `v(π_K) = 1`.
pub trait DvField: BaseRing {
    fn prime(&self) -> u64;
    fn val(&self, a: &Self::Elem) -> Option<i64>;
    fn pi_power(&self, k: i64) -> Self::Elem;
    /// Residue class of an integral element.
    fn residue(&self, a: &Self::Elem) -> Result<u64>;
}

impl DvField for KappaField {
    fn prime(&self) -> u64 {
        self.p
    }

    fn val(&self, a: &Vec<Q>) -> Option<i64> {
        self.valuation(a)
    }

    fn pi_power(&self, k: i64) -> Vec<Q> {
        self.pi_pow(k)
    }

    fn residue(&self, a: &Vec<Q>) -> Result<u64> {
        match self.valuation(a) {
            None => Ok(0),
            Some(v) if v < 0 => Err(Error::domain("residue of a non-integral element")),
            Some(_) => rational::to_fp(&a[0], self.p),
        }
    }
}

impl DvField for FpLaurentRing {
    fn prime(&self) -> u64 {
        self.p
    }

    fn val(&self, a: &FpLaurent) -> Option<i64> {
        a.valuation()
    }

    fn pi_power(&self, k: i64) -> FpLaurent {
        FpLaurent::monomial(1, k, self.p)
    }

    fn residue(&self, a: &FpLaurent) -> Result<u64> {
        match a.valuation() {
            Some(v) if v < 0 => Err(Error::domain("residue of a non-integral element")),
            _ => Ok(a.coeff(0)),
        }
    }
}

/// `Q_p`, as the degree-one field `Q_p[π]/(π - p)`.
pub fn qp(p: u64) -> KappaField {
    KappaField::new(p, vec![-rational::q(p as i64), rational::q(1)])
}

/// `F_p((S))` with exact Laurent polynomial arithmetic.
pub fn laurent_field(p: u64) -> FpLaurentRing {
    FpLaurentRing::new(p, None)
}

/// `L = K[θ]/(g)` for monic `g`, with `v_L(Σ c_i θ^i) = min(e·v_K(c_i) + w_i)`.
///
/// The weights `w_i = v_L(θ^i)` must be pairwise distinct modulo `e`, so that
/// no cancellation can occur between the terms.
#[derive(Clone, Debug)]
pub struct SimpleExtension<F: DvField> {
    pub base: F,
    /// Coefficients of `g`, lowest first.
    pub minpoly: Vec<F::Elem>,
    /// Ramification index `e_{L/K}`.
    pub e: i64,
    pub weights: Vec<i64>,
    /// An element of valuation one.
    pub uniformizer: Vec<F::Elem>,
}

impl<F: DvField> Ring for SimpleExtension<F> {
    type Elem = Vec<F::Elem>;

    fn zero(&self) -> Self::Elem {
        Vec::new()
    }
    fn one(&self) -> Self::Elem {
        self.embed(self.base.one())
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.embed(self.base.from_i64(n))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        poly::add(&self.base, a, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|c| self.base.neg(c)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        poly::divrem_monic(&self.base, &poly::mul(&self.base, a, b), &self.minpoly).1
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|c| self.base.is_zero(c))
    }
}

impl<F: DvField> SimpleExtension<F> {
    fn bare(base: F, minpoly: Vec<F::Elem>) -> Result<Self> {
        let minpoly = poly::normalize(&base, minpoly);
        if minpoly.len() < 2 {
            return Err(Error::domain("a defining polynomial has degree at least 1"));
        }
        if minpoly.last() != Some(&base.one()) {
            return Err(Error::domain("the defining polynomial must be monic"));
        }
        let d = minpoly.len() - 1;
        Ok(SimpleExtension { base, minpoly, e: 1, weights: vec![0; d], uniformizer: Vec::new() })
    }

    /// The extension generated by a root of an Eisenstein polynomial.
    pub fn eisenstein(base: F, minpoly: Vec<F::Elem>) -> Result<Self> {
        let mut ext = Self::bare(base, minpoly)?;
        let d = ext.degree();
        for (i, a) in ext.minpoly[..d].iter().enumerate() {
            let ok = match ext.base.val(a) {
                None => i > 0,
                Some(v) => if i == 0 { v == 1 } else { v >= 1 },
            };
            if !ok {
                return Err(Error::domain(format!("not Eisenstein: coefficient of X^{i} has the wrong valuation")));
            }
        }
        ext.e = d as i64;
        ext.weights = (0..d as i64).collect();
        ext.uniformizer = ext.theta();
        Ok(ext)
    }

    /// `y^p - y = π^{-m}` with `m ≥ 1` prime to `p`, presented on the
    /// generator `y`; the uniformizer is `π^a y^{-b}` with `a p + b m = 1`,
    /// `0 < b < p`, using `y^{-1} = π^m (y^{p-1} - 1)`.
    pub fn artin_schreier(base: F, m: i64) -> Result<Self> {
        let p = base.prime() as i64;
        if m < 1 || m % p == 0 {
            return Err(Error::domain("the conductor exponent m must be positive and prime to p"));
        }
        let mut g = vec![base.zero(); p as usize + 1];
        g[0] = base.neg(&base.pi_power(-m));
        g[1] = base.from_i64(-1);
        g[p as usize] = base.one();
        let mut ext = Self::bare(base, g)?;
        ext.e = p;
        ext.weights = (0..p).map(|i| -m * i).collect();
        let b = (1..p).find(|b| (b * m) % p == 1).expect("m is prime to p");
        let a = (1 - b * m) / p;
        let y = ext.theta();
        let y_inv = ext.mul(&ext.embed(ext.base.pi_power(m)), &ext.sub(&ext.pow(&y, (p - 1) as u64), &ext.one()));
        ext.uniformizer = ext.mul(&ext.embed(ext.base.pi_power(a)), &ext.pow(&y_inv, b as u64));
        debug_assert_eq!(ext.val(&ext.uniformizer), Some(1));
        Ok(ext)
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn embed(&self, c: F::Elem) -> Vec<F::Elem> {
        poly::normalize(&self.base, vec![c])
    }

    pub fn theta(&self) -> Vec<F::Elem> {
        poly::divrem_monic(&self.base, &[self.base.zero(), self.base.one()], &self.minpoly).1
    }

    /// `v_L`, normalized by `v_L(π_L) = 1`; `None` for zero.
    pub fn val(&self, x: &[F::Elem]) -> Option<i64> {
        x.iter()
            .zip(&self.weights)
            .filter_map(|(c, w)| self.base.val(c).map(|v| self.e * v + w))
            .min()
    }

    /// Matrix of multiplication by `x` in the basis `1, θ, …, θ^{d-1}`.
    pub fn mult_matrix(&self, x: &[F::Elem]) -> Vec<Vec<F::Elem>> {
        let d = self.degree();
        let cols: Vec<Vec<F::Elem>> = (0..d).map(|j| self.mul(&x.to_vec(), &self.pow(&self.theta(), j as u64))).collect();
        (0..d)
            .map(|i| (0..d).map(|j| cols[j].get(i).cloned().unwrap_or_else(|| self.base.zero())).collect())
            .collect()
    }

    /// Characteristic polynomial of `x` over `K`, monic, lowest first.
    pub fn charpoly_of(&self, x: &[F::Elem]) -> Vec<F::Elem> {
        charpoly(&self.base, &self.mult_matrix(x))
    }

    /// The image of `x` under the `K`-algebra map sending `θ` to `image`.
    pub fn apply(&self, x: &[F::Elem], image: &[F::Elem]) -> Vec<F::Elem> {
        let coeffs: Vec<Vec<F::Elem>> = x.iter().map(|c| self.embed(c.clone())).collect();
        poly::eval(self, &coeffs, &image.to_vec())
    }

    /// Whether `x` is a root of the defining polynomial.
    pub fn is_root(&self, x: &[F::Elem]) -> bool {
        self.is_zero(&self.apply(&self.minpoly, x))
    }

    fn is_eisenstein_form(&self) -> bool {
        self.e == self.degree() as i64
            && self.weights.iter().enumerate().all(|(i, &w)| w == i as i64)
            && self.uniformizer == self.theta()
    }

    /// The same field presented by the minimal polynomial of the uniformizer.
    pub fn to_eisenstein(&self) -> Result<Self> {
        if self.is_eisenstein_form() {
            return Ok(self.clone());
        }
        if self.e != self.degree() as i64 {
            return Err(Error::domain("the extension is not totally ramified"));
        }
        SimpleExtension::eisenstein(self.base.clone(), self.charpoly_of(&self.uniformizer))
    }
}

/// Outcome of [`classify`].
#[derive(Clone, Debug)]
pub enum Classified<F: DvField> {
    /// `g` has degree one.
    Trivial,
    /// Totally ramified, presented by the minimal polynomial of a uniformizer.
    Totally(SimpleExtension<F>),
    /// Unramified of degree `f`: `minpoly` is the minimal polynomial of a unit
    /// generator and `residue` its irreducible reduction.
    Unramified { minpoly: Vec<F::Elem>, residue: Vec<u64> },
}

const CLASSIFY_STEPS: usize = 64;

/// Decide whether `K[X]/(g)` is a totally ramified or an unramified field
/// extension, by a bounded search among elements `π^a θ^b` and unit
/// translates. Mixed cases and reducible `g` are rejected.
pub fn classify<F: DvField>(base: &F, g: Vec<F::Elem>) -> Result<Classified<F>> {
    let l = SimpleExtension::bare(base.clone(), g)?;
    let d = l.degree();
    if d == 1 {
        return Ok(Classified::Trivial);
    }
    let p = base.prime();
    let mut theta = l.theta();
    for _ in 0..CLASSIFY_STEPS {
        let cp = l.charpoly_of(&theta);
        let Some(v0) = base.val(&cp[0]) else {
            return Err(Error::domain("the polynomial is reducible"));
        };
        // Pure Newton polygon: every point lies on or above the segment from
        // (0, v0) to (d, 0).
        for (i, c) in cp.iter().enumerate() {
            if let Some(v) = base.val(c) {
                if v * (d as i64) < v0 * ((d - i) as i64) {
                    return Err(Error::domain("the polynomial is reducible: its Newton polygon has several slopes"));
                }
            }
        }
        let s = Q::new(v0.into(), (d as i64).into());
        let den = rational::to_i64(s.denom());
        if den == d as i64 {
            let n = rational::to_i64(s.numer());
            let b = (1..d as i64).find(|b| (b * n).rem_euclid(d as i64) == 1).unwrap_or(1);
            let a = Integer::div_floor(&(1 - b * n), &(d as i64));
            let z = l.mul(&l.embed(base.pi_power(a)), &l.pow(&theta, b as u64));
            return Ok(Classified::Totally(SimpleExtension::eisenstein(base.clone(), l.charpoly_of(&z))?));
        }
        if den != 1 {
            return Err(Error::domain("partially ramified extensions are not supported"));
        }
        let u = l.mul(&l.embed(base.pi_power(-rational::to_i64(s.numer()))), &theta);
        let cpu = l.charpoly_of(&u);
        let residue: Vec<u64> = cpu.iter().map(|c| base.residue(c)).collect::<Result<_>>()?;
        if fp_irreducible(p, &residue) {
            return Ok(Classified::Unramified { minpoly: cpu, residue });
        }
        let Some(c) = single_root(p, &residue) else {
            return Err(Error::domain("the polynomial is reducible or the extension is not of a supported form"));
        };
        theta = l.sub(&u, &l.from_i64(c as i64));
    }
    Err(Error::precision("uniformizer search did not terminate", CLASSIFY_STEPS))
}

fn fp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_rem(f: &Fp, a: &[u64], m: &[u64]) -> Vec<u64> {
    let mut r = fp_trim(a.to_vec());
    let m = fp_trim(m.to_vec());
    let lead_inv = f.inv(*m.last().unwrap()).unwrap();
    while r.len() >= m.len() {
        let c = f.mul(r.last().unwrap(), &lead_inv);
        let shift = r.len() - m.len();
        for (i, mi) in m.iter().enumerate() {
            r[shift + i] = f.sub(&r[shift + i], &f.mul(&c, mi));
        }
        r = fp_trim(r);
    }
    r
}

fn fp_gcd(f: &Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut a, mut b) = (fp_trim(a.to_vec()), fp_trim(b.to_vec()));
    while !b.is_empty() {
        let r = fp_rem(f, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn fp_mulmod(f: &Fp, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    fp_rem(f, &poly::mul(f, a, b), m)
}

/// Rabin's test without the final divisibility step: `r` of degree `d` is
/// irreducible iff `gcd(r, X^{p^i} - X) = 1` for `i ≤ d/2`.
fn fp_irreducible(p: u64, r: &[u64]) -> bool {
    let f = Fp::new(p);
    let r = fp_trim(r.to_vec());
    let d = r.len() - 1;
    if d <= 1 {
        return d == 1;
    }
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 1..=d / 2 {
        let mut acc = vec![1];
        let mut base = xp.clone();
        let mut k = p;
        while k > 0 {
            if k & 1 == 1 {
                acc = fp_mulmod(&f, &acc, &base, &r);
            }
            base = fp_mulmod(&f, &base, &base, &r);
            k >>= 1;
        }
        xp = acc;
        let diff = poly::sub(&f, &xp, &x);
        if fp_gcd(&f, &r, &diff).len() > 1 {
            return false;
        }
    }
    true
}

/// The root `c` when `r = (X - c)^d`.
fn single_root(p: u64, r: &[u64]) -> Option<u64> {
    let f = Fp::new(p);
    let d = r.len() - 1;
    (0..p).find(|&c| {
        let lin = vec![f.neg(&c), 1];
        let mut acc = vec![1];
        for _ in 0..d {
            acc = poly::mul(&f, &acc, &lin);
        }
        fp_trim(acc) == fp_trim(r.to_vec())
    })
}
