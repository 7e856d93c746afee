//! Ring contexts, dense univariate polynomials over them and a division-free
//! characteristic polynomial.
//!
//! Rings are context objects: the element type carries data only, and the
//! context carries the prime, the modulus and the working precision. All
//! operations are pure.

use std::fmt::Debug;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Q;

/// A commutative ring with identity.
pub trait Ring: Clone + Debug {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn scale_i64(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        self.mul(a, &self.from_i64(n))
    }
}

/// The field of rationals, exact.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = Q;
    fn zero(&self) -> Q {
        Q::zero()
    }
    fn one(&self) -> Q {
        Q::one()
    }
    fn from_i64(&self, n: i64) -> Q {
        crate::rational::q(n)
    }
    fn add(&self, a: &Q, b: &Q) -> Q {
        a + b
    }
    fn neg(&self, a: &Q) -> Q {
        -a
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a * b
    }
    fn is_zero(&self, a: &Q) -> bool {
        a.is_zero()
    }
}

/// The prime field `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        Fp { p }
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a % self.p == 0 {
            return None;
        }
        let e = (a as i64).extended_gcd(&(self.p as i64));
        Some(e.x.rem_euclid(self.p as i64) as u64)
    }

    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn is_square(&self, a: u64) -> bool {
        let a = a % self.p;
        if a == 0 || self.p == 2 {
            return true;
        }
        (0..self.p).any(|x| x * x % self.p == a)
    }
}

impl Ring for Fp {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        a % self.p == 0
    }
}

/// Dense univariate polynomials over a ring, lowest degree first, no trailing
/// zeros.
pub mod poly {
    use super::Ring;

    pub fn normalize<R: Ring>(r: &R, mut a: Vec<R::Elem>) -> Vec<R::Elem> {
        while a.last().is_some_and(|c| r.is_zero(c)) {
            a.pop();
        }
        a
    }

    pub fn degree<R: Ring>(r: &R, a: &[R::Elem]) -> Option<usize> {
        a.iter().rposition(|c| !r.is_zero(c))
    }

    pub fn add<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
        let n = a.len().max(b.len());
        let z = r.zero();
        let out = (0..n)
            .map(|i| r.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        normalize(r, out)
    }

    pub fn sub<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
        let n = a.len().max(b.len());
        let z = r.zero();
        let out = (0..n)
            .map(|i| r.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        normalize(r, out)
    }

    pub fn scale<R: Ring>(r: &R, a: &[R::Elem], c: &R::Elem) -> Vec<R::Elem> {
        normalize(r, a.iter().map(|x| r.mul(x, c)).collect())
    }

    pub fn mul<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![r.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if r.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if r.is_zero(y) {
                    continue;
                }
                out[i + j] = r.add(&out[i + j], &r.mul(x, y));
            }
        }
        normalize(r, out)
    }

    /// Remainder and quotient of `a` by a monic polynomial `m`.
    pub fn divrem_monic<R: Ring>(
        r: &R,
        a: &[R::Elem],
        m: &[R::Elem],
    ) -> (Vec<R::Elem>, Vec<R::Elem>) {
        let dm = m.len() - 1;
        let mut rem = a.to_vec();
        if rem.len() <= dm {
            return (Vec::new(), normalize(r, rem));
        }
        let mut quo = vec![r.zero(); rem.len() - dm];
        for k in (dm..rem.len()).rev() {
            let c = rem[k].clone();
            if r.is_zero(&c) {
                continue;
            }
            quo[k - dm] = c.clone();
            for (i, mi) in m.iter().enumerate() {
                let idx = k - dm + i;
                rem[idx] = r.sub(&rem[idx], &r.mul(&c, mi));
            }
        }
        rem.truncate(dm);
        (normalize(r, quo), normalize(r, rem))
    }

    pub fn eval<R: Ring>(r: &R, a: &[R::Elem], x: &R::Elem) -> R::Elem {
        let mut acc = r.zero();
        for c in a.iter().rev() {
            acc = r.add(&r.mul(&acc, x), c);
        }
        acc
    }

    /// Coefficients of `a(X + x)`.
    pub fn taylor_shift<R: Ring>(r: &R, a: &[R::Elem], x: &R::Elem) -> Vec<R::Elem> {
        // Horner in the polynomial ring: acc = acc * (X + x) + c.
        let mut acc: Vec<R::Elem> = Vec::new();
        for c in a.iter().rev() {
            let mut next = vec![r.zero(); acc.len() + 1];
            for (i, v) in acc.iter().enumerate() {
                next[i + 1] = r.add(&next[i + 1], v);
                next[i] = r.add(&next[i], &r.mul(v, x));
            }
            next[0] = r.add(&next[0], c);
            acc = next;
        }
        normalize(r, acc)
    }

    pub fn derivative<R: Ring>(r: &R, a: &[R::Elem]) -> Vec<R::Elem> {
        let out = a.iter().enumerate().skip(1).map(|(i, c)| r.scale_i64(c, i as i64)).collect();
        normalize(r, out)
    }
}

/// Characteristic polynomial `det(X - M)` by Berkowitz' division-free
/// algorithm. Returned monic, lowest degree first.
pub fn charpoly<R: Ring>(r: &R, m: &[Vec<R::Elem>]) -> Vec<R::Elem> {
    let n = m.len();
    // Berkowitz: build the Toeplitz vectors for the leading principal
    // submatrices and multiply them together.
    let mut cur: Vec<R::Elem> = vec![r.one(), r.neg(&m[0][0])];
    for k in 1..n {
        // Partition the (k+1)x(k+1) leading submatrix as [[A, R],[C, a]] with
        // the new row/column last.
        let a = &m[k][k];
        let row: Vec<R::Elem> = (0..k).map(|j| m[k][j].clone()).collect();
        let col: Vec<R::Elem> = (0..k).map(|i| m[i][k].clone()).collect();
        // t = [1, -a, -R C, -R A C, ..., -R A^{k-1} C]
        let mut t = Vec::with_capacity(k + 2);
        t.push(r.one());
        t.push(r.neg(a));
        let mut v = col.clone();
        for _ in 0..k {
            let rc = row.iter().zip(&v).fold(r.zero(), |acc, (x, y)| r.add(&acc, &r.mul(x, y)));
            t.push(r.neg(&rc));
            let nv: Vec<R::Elem> = (0..k)
                .map(|i| (0..k).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(&m[i][j], &v[j]))))
                .collect();
            v = nv;
        }
        // new = T * cur where T is (k+2)x(k+1) lower-triangular Toeplitz.
        let mut next = vec![r.zero(); k + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, c) in cur.iter().enumerate() {
                if i >= j {
                    *slot = r.add(slot, &r.mul(&t[i - j], c));
                }
            }
        }
        cur = next;
    }
    // `cur` holds coefficients from X^n down to X^0.
    cur.reverse();
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn charpoly_matches_determinant_expansion() {
        let r = Rationals;
        let m = vec![
            vec![q(2), q(1), q(0)],
            vec![q(0), q(3), q(1)],
            vec![q(1), q(0), q(1)],
        ];
        let cp = charpoly(&r, &m);
        // det(X - M) = X^3 - 6X^2 + 11X - 7
        assert_eq!(cp, vec![q(-7), q(11), q(-6), q(1)]);
    }

    #[test]
    fn taylor_shift_and_division() {
        let r = Rationals;
        let a = vec![q(1), q(0), q(1)]; // 1 + X^2
        let s = poly::taylor_shift(&r, &a, &q(2));
        assert_eq!(s, vec![q(5), q(4), q(1)]);
        let m = vec![q(-2), q(1)];
        let (quo, rem) = poly::divrem_monic(&r, &a, &m);
        assert_eq!(rem, vec![q(5)]);
        assert_eq!(quo, vec![q(2), q(1)]);
    }

    #[test]
    fn fp_inverse() {
        let f = Fp::new(7);
        for a in 1..7 {
            assert_eq!(f.mul(&a, &f.inv(a).unwrap()), 1);
        }
        assert!(!f.is_square(3));
        assert!(f.is_square(2));
    }
}
