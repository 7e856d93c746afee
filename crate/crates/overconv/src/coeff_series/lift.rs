//! Lifting a totally ramified extension of a fiber `κ(𝔭)` to a finite flat
//! extension `O[[S]] → O[[T]]`.

use num_traits::{One, Zero};

use super::{EisensteinPrime, KappaField, Laurent};
use crate::error::{Error, Result};
use crate::linalg;
use crate::newton::hensel_split;
use crate::rational::{self, Q};
use crate::ring::{charpoly, poly, Rationals, Ring};

/// The map `S ↦ α(T) = T^e·u(T)` together with the field `L = Q_p[T]/M(T)`.
#[derive(Clone, Debug)]
pub struct LiftedExtension {
    pub base: EisensteinPrime,
    /// Relative ramification index `e_{L/κ(𝔭)}`.
    pub e_rel: usize,
    /// The unit `u(T)` with `π_𝔭 = π_L^e·u(π_L)`.
    pub unit: Laurent,
    /// `α(T) = T^e·u(T)`.
    pub alpha: Laurent,
    /// `L` with uniformizer `T`; its modulus is the absolute minimal
    /// polynomial of `π_L`, an Eisenstein polynomial of degree `e·deg 𝔭`.
    pub field: KappaField,
}

impl LiftedExtension {
    /// Push an Eisenstein prime `𝔮` of `O[[S]]` forward along `S ↦ α(T)`:
    /// the Weierstrass factor of `Q(α(T))`, certified Eisenstein of degree
    /// `e·deg 𝔮`. The prime `(p)` pushes to `(p)`.
    pub fn push_prime(&self, q: &EisensteinPrime, prec: i64) -> Result<EisensteinPrime> {
        let p = self.base.p();
        let Some(qs) = q.as_laurent() else { return Ok(EisensteinPrime::char_p(p)) };
        // Q(α(T)) by Horner.
        let mut acc = Laurent::zero();
        for n in (0..=qs.max_exp().unwrap()).rev() {
            acc = &(&acc * &self.alpha) + &Laurent::constant(qs.coeff(n));
        }
        let coeffs = acc.to_coeffs();
        let d = self.e_rel * q.degree().unwrap();
        let weierstrass = coeffs.iter().position(|c| rational::vp(c, p) == Some(0));
        if weierstrass != Some(d) {
            return Err(Error::domain("pushed-forward series has the wrong Weierstrass degree"));
        }
        let (dist, _) = hensel_split(&coeffs, d, p, prec)?;
        let trimmed: Vec<Q> = dist
            .iter()
            .enumerate()
            .map(|(i, c)| if i == d { c.clone() } else { rational::trunc_balanced(c, p, prec) })
            .collect();
        EisensteinPrime::new(p, trimmed)
    }
}

/// Lift the extension `L/κ(𝔭)` given by an Eisenstein polynomial `g(T)` with
/// coefficients in `O_{κ(𝔭)}` (each in the basis `1, π_𝔭, …`), low to high and
/// monic.
pub fn lift_extension(prime: &EisensteinPrime, g: &[Vec<Q>]) -> Result<LiftedExtension> {
    let kappa = prime
        .kappa()
        .ok_or_else(|| Error::domain("extension lifting needs a prime of finite degree"))?;
    let p = prime.p();
    let e_rel = g.len().checked_sub(1).filter(|&d| d >= 1).ok_or_else(|| {
        Error::domain("the extension polynomial must have degree at least 1")
    })?;
    if !kappa.is_zero(&kappa.sub(&g[e_rel], &kappa.one())) {
        return Err(Error::domain("the extension polynomial must be monic"));
    }
    for (i, b) in g[..e_rel].iter().enumerate() {
        let v = kappa.valuation(b);
        let ok = if i == 0 { v == Some(1) } else { v.is_none_or(|v| v >= 1) };
        if !ok {
            return Err(Error::domain("the extension polynomial is not Eisenstein over κ(𝔭)"));
        }
    }
    let e = kappa.degree();
    let dim = e * e_rel;
    let idx = |i: usize, j: usize| i + e * j;
    // Multiplication by T in the Q-basis π^i T^j.
    let mut m = vec![vec![Q::zero(); dim]; dim];
    for j in 0..e_rel {
        for i in 0..e {
            let col = idx(i, j);
            if j + 1 < e_rel {
                m[idx(i, j + 1)][col] = Q::one();
            } else {
                let mut pi_i = vec![Q::zero(); i + 1];
                pi_i[i] = Q::one();
                for (k, b) in g[..e_rel].iter().enumerate() {
                    let c = kappa.mul(&pi_i, b);
                    for (l, cl) in c.iter().enumerate() {
                        m[idx(l, k)][col] -= cl;
                    }
                }
            }
        }
    }
    let min_poly = charpoly(&Rationals, &m);
    let field = KappaField::new(p, min_poly.clone());
    EisensteinPrime::new(p, min_poly.clone())?;
    // Express π_𝔭 as a polynomial h(T) by solving Σ h_k T^k = π_𝔭.
    let mut powers: Vec<Vec<Q>> = Vec::with_capacity(dim);
    let mut v = vec![Q::zero(); dim];
    v[0] = Q::one();
    for _ in 0..dim {
        let next: Vec<Q> = (0..dim).map(|r| (0..dim).fold(Q::zero(), |acc, c| acc + &m[r][c] * &v[c])).collect();
        powers.push(std::mem::replace(&mut v, next));
    }
    let a: Vec<Vec<Q>> = (0..dim).map(|r| (0..dim).map(|k| powers[k][r].clone()).collect()).collect();
    let pi_vec = kappa.pi();
    let mut rhs = vec![Q::zero(); dim];
    for (i, c) in pi_vec.iter().enumerate() {
        rhs[idx(i, 0)] = c.clone();
    }
    let h = linalg::solve(&a, &rhs).ok_or_else(|| Error::domain("T does not generate L"))?;
    let h = poly::normalize(&Rationals, h);
    let u = field.mul(&h, &field.pi_pow(-(e_rel as i64)));
    if field.valuation(&u) != Some(0) || u.iter().any(|c| rational::vp(c, p).is_some_and(|v| v < 0)) {
        return Err(Error::domain("π_𝔭 / π_L^e is not an integral unit"));
    }
    let unit = Laurent::from_coeffs(&u);
    let alpha = unit.shift(e_rel as i64);
    Ok(LiftedExtension { base: prime.clone(), e_rel, unit, alpha, field })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn trivial_extension_is_identity() {
        let pr = EisensteinPrime::new(3, vec![q(-3), q(1)]).unwrap();
        let k = pr.kappa().unwrap();
        let g = vec![k.neg(&k.pi()), k.one()];
        let lift = lift_extension(&pr, &g).unwrap();
        assert_eq!(lift.e_rel, 1);
        assert_eq!(lift.alpha, Laurent::s_pow(1));
    }

    #[test]
    fn sqrt_p_lifts_to_degree_two() {
        let pr = EisensteinPrime::new(3, vec![q(-3), q(1)]).unwrap();
        let k = pr.kappa().unwrap();
        let g = vec![k.neg(&k.pi()), Vec::new(), k.one()];
        let lift = lift_extension(&pr, &g).unwrap();
        assert_eq!(lift.alpha, Laurent::s_pow(2));
        let pushed = lift.push_prime(&pr, 20).unwrap();
        assert_eq!(pushed.degree(), Some(2));
        assert_eq!(pushed.poly().unwrap(), &[q(-3), q(0), q(1)]);
        let fib = lift.push_prime(&EisensteinPrime::char_p(3), 20).unwrap();
        assert!(fib.is_char_p());
    }
}
