//! Remainders over the annulus ring `A^{†,r} = O((S))^{†,r}⟨X⟩ / I^{†,r}`.
//!
//! A Laurent-coefficient element `f = Σ c_m X^m` has remainder
//! `Σ c_m · rem(X^m)`, where `rem(X^m)` is the remainder of the monomial over
//! `O[[S]]`.

use std::collections::BTreeMap;

use num_traits::Signed;

use super::{divide, GroebnerBasis};
use crate::coeff_series::{gauss_valuation_unchecked, Laurent, LaurentRing};
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::ring::Ring;
use crate::tate::{BaseRing, Monomial, SeriesRing, TateElem, TateRing};

/// Tate elements with Laurent coefficients.
pub type LaurentTate = TateRing<LaurentRing>;

#[derive(Clone, Debug)]
pub struct AnnulusRemainder {
    pub remainder: TateElem<Laurent>,
    /// Gauss weight `w_r` below which the remainder is exact.
    pub precision: Q,
}

/// The remainder `𝔯` of `f` at the parameter `r`, exact below the reported
/// weight; fails with a precision error when that weight is below `target`.
pub fn remainder_annulus(
    f: &TateElem<Laurent>,
    gb: &GroebnerBasis<SeriesRing>,
    r: &Q,
    target: Option<&Q>,
) -> Result<AnnulusRemainder> {
    if !r.is_positive() {
        return Err(Error::domain("the annulus parameter must be positive"));
    }
    let base = &gb.ring.base;
    let p = base.p;
    let frontier = base.frontier(r);
    let lt = TateRing::new(LaurentRing::exact(p), gb.ring.ctx.clone());
    let mut cache: BTreeMap<Monomial, TateElem<Laurent>> = BTreeMap::new();
    let mut out = lt.zero();
    let mut precision: Option<Q> = None;
    for (m, c) in &f.terms {
        let w = gauss_valuation_unchecked(c, p, r).expect("stored coefficients are nonzero");
        let bound = w + &frontier;
        precision = Some(precision.map_or(bound.clone(), |x: Q| x.min(bound)));
        if !cache.contains_key(m) {
            let mono = gb.ring.term(base.one(), m.clone());
            let rem = divide(&mono, gb, None)?.remainder;
            let rem = TateElem { terms: rem.terms.iter().map(|(n, x)| (n.clone(), base.to_laurent(x))).collect() };
            cache.insert(m.clone(), rem);
        }
        out = lt.add(&out, &lt.scale(&cache[m], c));
    }
    let precision = precision.unwrap_or(frontier);
    if let Some(t) = target {
        if &precision < t {
            return Err(Error::precision("annulus remainder below target", crate::rational::fmt_q(&precision)));
        }
    }
    let mut trimmed = lt.zero();
    for (m, c) in out.terms {
        lt.add_term(&mut trimmed, m, c.truncate_weight(p, r, &precision));
    }
    Ok(AnnulusRemainder { remainder: trimmed, precision })
}

/// `w_{r'}(𝔯)`, the quotient valuation of the class of `f`; `None` for
/// `f ∈ I^{†,r}` at the achieved precision.
pub fn quotient_valuation_annulus(
    f: &TateElem<Laurent>,
    gb: &GroebnerBasis<SeriesRing>,
    r: &Q,
    r_prime: &Q,
) -> Result<Option<Q>> {
    if !r_prime.is_positive() {
        return Err(Error::domain("the weight must be positive"));
    }
    let rem = remainder_annulus(f, gb, r, None)?;
    Ok(rem
        .remainder
        .terms
        .values()
        .filter_map(|c| gauss_valuation_unchecked(c, gb.ring.base.p, r_prime))
        .min())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff_series::RingConfig;
    use crate::grammar::parse_tate;
    use crate::groebner::BasisSpec;
    use crate::rational::{q, qf};

    fn setup() -> (GroebnerBasis<SeriesRing>, LaurentTate) {
        let gb = BasisSpec {
            config: RingConfig::new(3, 20, 20).unwrap(),
            order: "lex:X>Y".into(),
            generators: vec!["X^2 - S".into(), "Y^3 - p".into()],
        }
        .build()
        .unwrap();
        let lt = TateRing::new(LaurentRing::exact(3), gb.ring.ctx.clone());
        (gb, lt)
    }

    fn elem(lt: &LaurentTate, s: &str) -> TateElem<Laurent> {
        lt.from_map(parse_tate(s, 3, &lt.ctx).unwrap())
    }

    #[test]
    fn annulus_examples() {
        let (gb, lt) = setup();
        let r = qf(1, 2);
        let rem = remainder_annulus(&elem(&lt, "S^-1*X^2*Y^3"), &gb, &r, None).unwrap();
        assert_eq!(rem.remainder, elem(&lt, "p"));
        let rem = remainder_annulus(&elem(&lt, "S^-4"), &gb, &r, None).unwrap();
        assert_eq!(rem.remainder, elem(&lt, "S^-4"));
        let member = elem(&lt, "S^-2*X^3 - S^-1*X + 1/p*Y^3 - 1");
        assert!(remainder_annulus(&member, &gb, &r, None).unwrap().remainder.is_zero());
        assert_eq!(quotient_valuation_annulus(&elem(&lt, "X^2*Y^3"), &gb, &r, &r).unwrap(), Some(qf(3, 2)));
        assert!(remainder_annulus(&elem(&lt, "S^-40"), &gb, &r, Some(&q(1))).is_err());
    }
}
