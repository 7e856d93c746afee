//! Slope factorization by quadratic Hensel lifting along hull vertices.

use num_traits::{One, Zero};

use super::{classical_edges, newton_polygon};
use crate::coeff_series::Laurent;
use crate::error::{Error, Result};
use crate::rational::{self, Q};
use crate::ring::{poly, Rationals};

/// `f = unit · Π factors` to the reported p-adic precision; each factor is
/// monic and pure of the attached slope, slopes strictly decreasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeFactorization {
    pub factors: Vec<(Laurent, Q)>,
    pub unit: Laurent,
    pub precision: i64,
}

impl SlopeFactorization {
    pub fn product(&self) -> Laurent {
        self.factors.iter().fold(self.unit.clone(), |acc, (g, _)| &acc * g)
    }
}

fn min_vp(a: &[Q], p: u64) -> Option<i64> {
    a.iter().filter_map(|c| rational::vp(c, p)).min()
}

fn trunc_all(a: &[Q], p: u64, digits: i64) -> Vec<Q> {
    poly::normalize(&Rationals, a.iter().map(|c| rational::trunc(c, p, digits)).collect())
}

/// Extended gcd over `Q[S]`: `(s, t)` with `s·a + t·b = 1`, or `None` when
/// `a` and `b` share a factor.
fn xgcd(a: &[Q], b: &[Q]) -> Option<(Vec<Q>, Vec<Q>)> {
    let r = Rationals;
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![Q::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![Q::one()]);
    while !r1.is_empty() {
        let lc = r1.last().unwrap().clone();
        let monic = poly::scale(&r, &r1, &(Q::one() / &lc));
        let (quo, rem) = poly::divrem_monic(&r, &r0, &monic);
        let quo = poly::scale(&r, &quo, &(Q::one() / &lc));
        let s2 = poly::sub(&r, &s0, &poly::mul(&r, &quo, &s1));
        let t2 = poly::sub(&r, &t0, &poly::mul(&r, &quo, &t1));
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.len() != 1 {
        return None;
    }
    let inv = Q::one() / &r0[0];
    Some((poly::scale(&r, &s0, &inv), poly::scale(&r, &t0, &inv)))
}

/// Split the polynomial `g` (coefficients low to high) at the hull vertex
/// `d1` as `G·H`, with `G` monic of degree `d1` carrying the roots of larger
/// valuation, to absolute p-adic precision `prec`.
///
/// The start is `G₀ = (low part)/a_{d1}`, `H₀ = (high part)/S^{d1}`; the
/// iteration is quadratic with at most `⌈log₂ prec⌉ + 4` steps.
pub fn hensel_split(g: &[Q], d1: usize, p: u64, prec: i64) -> Result<(Vec<Q>, Vec<Q>)> {
    let r = Rationals;
    let lead = g[d1].clone();
    if lead.is_zero() {
        return Err(Error::domain("split point is not a hull vertex"));
    }
    let mut big_g = poly::scale(&r, &g[..=d1], &(Q::one() / &lead));
    let mut big_h = g[d1..].to_vec();
    let floor = [min_vp(g, p), min_vp(&big_g, p), min_vp(&big_h, p)]
        .into_iter()
        .flatten()
        .min()
        .unwrap_or(0)
        .min(0);
    let digits = prec - 2 * floor + 4;
    let cap = (prec.max(1) as f64).log2().ceil() as usize + 4;
    for _ in 0..=cap {
        let err = poly::sub(&r, g, &poly::mul(&r, &big_g, &big_h));
        if min_vp(&err, p).is_none_or(|v| v >= prec) {
            return Ok((big_g, big_h));
        }
        let (_, t) = xgcd(&big_g, &big_h)
            .ok_or_else(|| Error::precision("factors are not coprime", "0"))?;
        let (_, dg) = poly::divrem_monic(&r, &poly::mul(&r, &t, &err), &big_g);
        let (dh, rest) = poly::divrem_monic(&r, &poly::sub(&r, &err, &poly::mul(&r, &dg, &big_h)), &big_g);
        debug_assert!(rest.is_empty());
        big_g = trunc_all(&poly::add(&r, &big_g, &dg), p, digits);
        big_h = trunc_all(&poly::add(&r, &big_h, &dh), p, digits);
    }
    let err = poly::sub(&r, g, &poly::mul(&r, &big_g, &big_h));
    Err(Error::precision(
        "Hensel splitting did not converge",
        min_vp(&err, p).map_or("inf".to_string(), |v| v.to_string()),
    ))
}

/// Factor `f` into pure factors of slopes in `(0, r]` and a unit, to p-adic
/// precision `target`.
pub fn slope_factor(f: &Laurent, p: u64, r: &Q, target: i64) -> Result<SlopeFactorization> {
    newton_polygon(f, p, r)?;
    let k = f.min_exp().unwrap();
    let g = f.shift(-k);
    let edges = classical_edges(&g, p);
    let coeffs = g.to_coeffs();
    let zero = Q::zero();
    // Block label per edge: None for the unit part, Some(slope) for kept edges.
    let label = |lam: &Q| if lam > &zero && lam <= r { Some(lam.clone()) } else { None };
    let mut cuts: Vec<usize> = Vec::new();
    for w in edges.windows(2) {
        let (l, rr) = (label(&w[0].2), label(&w[1].2));
        let both_unit_same_side = l.is_none() && rr.is_none() && ((w[0].2 > zero) == (w[1].2 > zero));
        if !both_unit_same_side {
            cuts.push(w[0].1 as usize);
        }
    }
    let mut pieces: Vec<(Vec<Q>, Option<Q>)> = Vec::new();
    let mut rest = coeffs;
    let mut offset = 0usize;
    let mut edge_iter = edges.iter().peekable();
    for &cut in &cuts {
        let d1 = cut - offset;
        let (big_g, big_h) = hensel_split(&rest, d1, p, target + 4)?;
        // The edge ending at this cut labels the left piece.
        let mut lab = None;
        while let Some(e) = edge_iter.peek() {
            if (e.1 as usize) <= cut {
                lab = label(&e.2);
                edge_iter.next();
            } else {
                break;
            }
        }
        pieces.push((big_g, lab));
        rest = big_h;
        offset = cut;
    }
    let last_label = edges.last().and_then(|e| label(&e.2));
    let mut unit = Laurent::s_pow(k);
    let mut factors = Vec::new();
    // The last piece carries the leading coefficient; make kept factors monic.
    let lc = rest.last().cloned().unwrap_or_else(Q::one);
    match last_label {
        Some(s) if rest.len() > 1 => {
            let monic = poly::scale(&Rationals, &rest, &(Q::one() / &lc));
            unit = unit.scale(&lc);
            pieces.push((monic, Some(s)));
        }
        _ => {
            unit = &unit * &Laurent::from_coeffs(&rest);
        }
    }
    for (piece, lab) in pieces {
        match lab {
            Some(s) => factors.push((Laurent::from_coeffs(&piece), s)),
            None => unit = &unit * &Laurent::from_coeffs(&piece),
        }
    }
    factors.sort_by(|a, b| b.1.cmp(&a.1));
    let out = SlopeFactorization { factors, unit, precision: target };
    let diff = &out.product() - f;
    let achieved = diff.min_vp(p);
    if achieved.is_some_and(|v| v < target) {
        return Err(Error::precision("slope factorization below target", achieved.unwrap()));
    }
    Ok(out)
}

/// Whether `a = b·u` with `u` a unit of `O((S))^{†,r}`, up to p-adic
/// precision `prec` on the remainder of the division.
pub fn same_up_to_unit(a: &Laurent, b: &Laurent, p: u64, r: &Q, prec: i64) -> Result<bool> {
    if b.is_zero() {
        return Err(Error::domain("division by zero"));
    }
    let ka = a.min_exp().unwrap_or(0);
    let kb = b.min_exp().unwrap();
    let ap = a.shift(-ka).to_coeffs();
    let bp = b.shift(-kb).to_coeffs();
    let lc = bp.last().unwrap().clone();
    let monic = poly::scale(&Rationals, &bp, &(Q::one() / &lc));
    let (quo, rem) = poly::divrem_monic(&Rationals, &ap, &monic);
    if min_vp(&rem, p).is_some_and(|v| v < prec) {
        return Ok(false);
    }
    if quo.is_empty() {
        return Ok(false);
    }
    super::is_unit(&Laurent::from_coeffs(&quo), p, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::is_pure;
    use crate::rational::q;

    fn lp(terms: &[(i64, i64)]) -> Laurent {
        Laurent::from_terms(terms.iter().map(|&(n, c)| (n, q(c))))
    }

    #[test]
    fn two_slopes() {
        let f = &lp(&[(0, 3), (1, 1)]) * &lp(&[(0, 9), (1, 1)]);
        let sf = slope_factor(&f, 3, &q(2), 30).unwrap();
        let slopes: Vec<Q> = sf.factors.iter().map(|x| x.1.clone()).collect();
        assert_eq!(slopes, vec![q(2), q(1)]);
        for (g, s) in &sf.factors {
            assert_eq!(is_pure(g, 3, &q(2)).unwrap(), Some(s.clone()));
        }
        assert!((&sf.product() - &f).min_vp(3).is_none_or(|v| v >= 30));
    }

    #[test]
    fn unit_extraction() {
        let f = lp(&[(-1, 3), (0, 1)]);
        let sf = slope_factor(&f, 3, &q(1), 20).unwrap();
        assert_eq!(sf.unit, lp(&[(-1, 1)]));
        assert_eq!(sf.factors, vec![(lp(&[(0, 3), (1, 1)]), q(1))]);
    }

    #[test]
    fn pure_input() {
        let f = lp(&[(0, 3), (1, 1)]);
        let sf = slope_factor(&f, 3, &q(1), 20).unwrap();
        assert_eq!(sf.unit, Laurent::one());
        assert_eq!(sf.factors.len(), 1);
    }
}
