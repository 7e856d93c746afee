//! Division by certified Gröbner bases in `R⟨X⟩`, remainders and quotient
//! norms.
//!
//! Only bases whose leading terms are units times pairwise coprime monic
//! monomials are accepted. For such a basis the remainder of the division is
//! canonical, so tests compare remainders only; the quotients depend on the
//! processing order (generators in input order, terms in decreasing order).

mod annulus;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::coeff_series::RingConfig;
use crate::error::{Error, Result};
use crate::rational::{self, Q};
use crate::tate::{
    coprime, divides, mono_div, BaseRing, ExtendedLT, Monomial, OrderContext, SeriesRing, TateElem,
    TateRing,
};

pub use annulus::{quotient_valuation_annulus, remainder_annulus, AnnulusRemainder, LaurentTate};

/// Generators together with their cached leading terms.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<R: BaseRing> {
    pub ring: TateRing<R>,
    pub generators: Vec<TateElem<R::Elem>>,
    pub certified: bool,
    pub lt_table: Vec<Option<ExtendedLT>>,
    /// Inverse of the leading coefficient of each generator, when a unit.
    unit_inv: Vec<Option<R::Elem>>,
}

/// Check the concrete criterion: every leading term is a unit times a monic
/// monomial and the monomials are pairwise coprime.
pub fn certify_concrete<R: BaseRing>(ring: &TateRing<R>, gens: Vec<TateElem<R::Elem>>) -> GroebnerBasis<R> {
    let lt_table: Vec<Option<ExtendedLT>> = gens.iter().map(|g| ring.leading_term(g)).collect();
    let unit_inv: Vec<Option<R::Elem>> = gens
        .iter()
        .zip(&lt_table)
        .map(|(g, lt)| {
            let lt = lt.as_ref()?;
            if lt.v.iter().any(|&x| x != 0) {
                return None;
            }
            ring.base.unit_inv(&g.terms[&lt.deg])
        })
        .collect();
    let units = unit_inv.iter().all(Option::is_some);
    let pairwise = lt_table.iter().enumerate().all(|(i, a)| {
        lt_table[i + 1..].iter().all(|b| match (a, b) {
            (Some(a), Some(b)) => coprime(&a.deg, &b.deg),
            _ => false,
        })
    });
    GroebnerBasis { ring: ring.clone(), generators: gens, certified: units && pairwise, lt_table, unit_inv }
}

impl<R: BaseRing> GroebnerBasis<R> {
    /// Leading monomials `deg̲(f_i)`.
    pub fn lead_monomials(&self) -> Vec<Monomial> {
        self.lt_table.iter().map(|t| t.as_ref().map(|t| t.deg.clone()).unwrap_or_default()).collect()
    }

    /// Whether some leading monomial divides `m`.
    pub fn reducible(&self, m: &Monomial) -> bool {
        self.lt_table.iter().flatten().any(|t| divides(&t.deg, m))
    }

    /// Reduce every generator along a coefficient map into another base
    /// ring and certify the result.
    pub fn map_base<S: BaseRing>(&self, target: S, f: impl Fn(&R::Elem) -> Result<S::Elem>) -> Result<GroebnerBasis<S>> {
        let ring = TateRing::new(target, self.ring.ctx.clone());
        let mut gens = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let mut out = ring.zero();
            for (m, c) in &g.terms {
                ring.add_term(&mut out, m.clone(), f(c)?);
            }
            gens.push(out);
        }
        Ok(certify_concrete(&ring, gens))
    }
}

/// One entry of the dominance log: `LT(f) ⪰ LT(a_i f_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dominance {
    pub index: usize,
    pub lt_f: Option<ExtendedLT>,
    pub lt_term: Option<ExtendedLT>,
    pub holds: bool,
}

/// `f = Σ a_i f_i + r + residual`, where the residual collects the terms
/// dropped at the precision bound.
#[derive(Clone, Debug)]
pub struct StandardExpression<E> {
    pub quotients: Vec<TateElem<E>>,
    pub remainder: TateElem<E>,
    pub residual: TateElem<E>,
    pub dominance: Vec<Dominance>,
}

/// Divide `f` by a certified basis. Terms whose first parameter valuation
/// reaches `prec` are moved to the residual instead of being processed.
pub fn divide<R: BaseRing>(
    f: &TateElem<R::Elem>,
    gb: &GroebnerBasis<R>,
    prec: Option<i64>,
) -> Result<StandardExpression<R::Elem>> {
    if !gb.certified {
        return Err(Error::domain("division needs a certified basis"));
    }
    let t = &gb.ring;
    let mut work = f.clone();
    let mut quotients = vec![t.zero(); gb.generators.len()];
    let mut remainder = t.zero();
    let mut residual = t.zero();
    loop {
        // The greatest term of the working element.
        let mut best: Option<(Vec<i64>, &Monomial)> = None;
        for (m, c) in &work.terms {
            let v = t.base.ext_val(c).expect("stored coefficients are nonzero");
            let better = match &best {
                None => true,
                Some((bv, bm)) => bv.cmp(&v).then_with(|| t.ctx.cmp_monomials(m, bm)) == Ordering::Greater,
            };
            if better {
                best = Some((v, m));
            }
        }
        let Some((v, m)) = best else { break };
        let m = m.clone();
        let c = work.terms.remove(&m).unwrap();
        if prec.is_some_and(|n| v.first().is_some_and(|&x| x >= n)) {
            t.add_term(&mut residual, m, c);
            continue;
        }
        let hit = gb.lt_table.iter().position(|lt| lt.as_ref().is_some_and(|lt| divides(&lt.deg, &m)));
        match hit {
            Some(i) => {
                let lt = gb.lt_table[i].as_ref().unwrap();
                let q = t.base.mul(&c, gb.unit_inv[i].as_ref().unwrap());
                let shift = mono_div(&m, &lt.deg);
                let prod = t.mul_term(&gb.generators[i], &q, &shift);
                // The leading term of prod cancels `c·X^m` exactly.
                for (n, x) in prod.terms {
                    if n != m {
                        t.add_term(&mut work, n, t.base.neg(&x));
                    }
                }
                t.add_term(&mut quotients[i], shift, q);
            }
            None => t.add_term(&mut remainder, m, c),
        }
    }
    let lt_f = t.leading_term(f);
    let dominance = quotients
        .iter()
        .enumerate()
        .filter_map(|(i, a)| {
            let prod = t.mul(a, &gb.generators[i]);
            if prod.is_zero() {
                return None;
            }
            let lt_term = t.leading_term(&prod);
            let holds = t.lt_compare(&lt_f, &lt_term) != Ordering::Less;
            Some(Dominance { index: i, lt_f: lt_f.clone(), lt_term, holds })
        })
        .collect();
    Ok(StandardExpression { quotients, remainder, residual, dominance })
}

impl<E> StandardExpression<E> {
    /// `Σ a_i f_i + r + residual`.
    pub fn reconstruct<R: BaseRing<Elem = E>>(&self, gb: &GroebnerBasis<R>) -> TateElem<E> {
        let t = &gb.ring;
        let mut acc = t.add(&self.remainder, &self.residual);
        for (a, g) in self.quotients.iter().zip(&gb.generators) {
            acc = t.add(&acc, &t.mul(a, g));
        }
        acc
    }

    /// No term of the remainder is divisible by a leading monomial.
    pub fn remainder_irreducible<R: BaseRing<Elem = E>>(&self, gb: &GroebnerBasis<R>) -> bool {
        self.remainder.terms.keys().all(|m| !gb.reducible(m))
    }
}

/// Mixed Gauss valuation `min (v_p(a) + ρ·j)` over all coefficients of a
/// Tate element over `O[[S]]`; `None` for zero.
pub fn mixed_valuation(t: &TateRing<SeriesRing>, f: &TateElem<crate::tate::Series>, rho: &Q) -> Option<Q> {
    f.terms.values().filter_map(|c| t.base.weight(c, rho)).min()
}

/// The mixed valuation capped at the truncation frontier, beyond which the
/// truncated ring cannot distinguish elements.
pub fn capped_valuation(t: &TateRing<SeriesRing>, f: &TateElem<crate::tate::Series>, rho: &Q) -> Q {
    let frontier = t.base.frontier(rho);
    mixed_valuation(t, f, rho).map_or(frontier.clone(), |w| w.min(frontier))
}

/// Valuation of the remainder of `f`, i.e. the quotient valuation of the
/// class of `f`; `None` for `f ∈ I`.
pub fn quotient_valuation(
    f: &TateElem<crate::tate::Series>,
    gb: &GroebnerBasis<SeriesRing>,
    rho: &Q,
) -> Result<Option<Q>> {
    if rho <= &rational::q(0) {
        return Err(Error::domain("the weight must be positive"));
    }
    let se = divide(f, gb, None)?;
    Ok(mixed_valuation(&gb.ring, &se.remainder, rho))
}

/// A basis over `O[[S]]` as stored in JSON files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub config: RingConfig,
    pub order: String,
    pub generators: Vec<String>,
}

impl BasisSpec {
    pub fn ring(&self) -> Result<TateRing<SeriesRing>> {
        self.config.validate()?;
        let ctx = OrderContext::parse(&self.order)?;
        let np = u32::try_from(self.config.np).map_err(|_| Error::domain("Np too large"))?;
        let ns = u32::try_from(self.config.ns).map_err(|_| Error::domain("Ns too large"))?;
        Ok(TateRing::new(SeriesRing::new(self.config.p, np, ns), ctx))
    }

    pub fn build(&self) -> Result<GroebnerBasis<SeriesRing>> {
        let t = self.ring()?;
        let gens = self
            .generators
            .iter()
            .map(|g| t.parse(g, self.config.p))
            .collect::<Result<Vec<_>>>()?;
        Ok(certify_concrete(&t, gens))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff_series::FpLaurentRing;
    use crate::rational::{q, qf};

    fn basis(gens: &[&str]) -> GroebnerBasis<SeriesRing> {
        BasisSpec {
            config: RingConfig::new(3, 20, 20).unwrap(),
            order: "lex:X>Y".into(),
            generators: gens.iter().map(|s| s.to_string()).collect(),
        }
        .build()
        .unwrap()
    }

    #[test]
    fn certification_examples() {
        assert!(basis(&["X^2 - S", "Y^3 - p"]).certified);
        assert!(!basis(&["X^2 - S", "X^3 - p"]).certified);
        assert!(basis(&["1"]).certified);
        // LT(pX - 1) is the constant: the unit ideal.
        assert_eq!(basis(&["p*X - 1"]).lt_table[0].as_ref().unwrap().deg, vec![0, 0]);
    }

    #[test]
    fn division_examples() {
        let gb = basis(&["X^2 - S", "Y^3 - p"]);
        let t = &gb.ring;
        let f = t.parse("X^2*Y^3", 3).unwrap();
        let se = divide(&f, &gb, None).unwrap();
        assert_eq!(t.render(&se.remainder), "3*S");
        assert_eq!(se.reconstruct(&gb), f);
        assert!(se.dominance.iter().all(|d| d.holds));
        assert!(se.remainder_irreducible(&gb));
        assert_eq!(quotient_valuation(&f, &gb, &qf(1, 2)).unwrap(), Some(qf(3, 2)));

        let member = t.add(&t.mul(&t.var(0), &gb.generators[0]), &t.scale(&gb.generators[1], &t.base.s_pow(1)));
        assert!(divide(&member, &gb, None).unwrap().remainder.is_zero());
        assert_eq!(quotient_valuation(&member, &gb, &qf(1, 2)).unwrap(), None);
        let one = t.one();
        assert_eq!(divide(&one, &gb, None).unwrap().remainder, one);
        assert_eq!(quotient_valuation(&one, &gb, &qf(1, 2)).unwrap(), Some(q(0)));
    }

    #[test]
    fn uncertified_basis_is_rejected() {
        let gb = basis(&["X^2 - S", "X^3 - p"]);
        assert!(divide(&gb.ring.one(), &gb, None).is_err());
    }

    #[test]
    fn reduction_mod_p_commutes_with_division() {
        let gb = basis(&["X^2 - S*Y - 1", "Y^3 - p*X"]);
        assert!(gb.certified);
        let t = &gb.ring;
        let fp = FpLaurentRing::new(3, Some(20));
        let gb_p = gb.map_base(fp.clone(), |c| Ok(t.base.mod_p(c))).unwrap();
        assert!(gb_p.certified);
        let f = t.parse("X^5*Y^4 + 2*S*X^3 + Y^7", 3).unwrap();
        let r = divide(&f, &gb, None).unwrap().remainder;
        let r_mod = t.map(&gb_p.ring, &r, |c| t.base.mod_p(c));
        let f_mod = t.map(&gb_p.ring, &f, |c| t.base.mod_p(c));
        let r_p = divide(&f_mod, &gb_p, None).unwrap().remainder;
        assert_eq!(r_p, r_mod);
    }
}
