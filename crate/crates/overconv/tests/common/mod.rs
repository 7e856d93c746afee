//! Random instances shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use overconv::coeff_series::{Laurent, RingConfig};
use overconv::groebner::{certify_concrete, GroebnerBasis};
use overconv::rational::q;
use overconv::tate::{OrderContext, Series, SeriesRing, TateElem, TateRing};
use overconv::Q;
use num_bigint::BigInt;
use rand::Rng;

pub fn ring_xy(p: u64, np: u32, ns: u32) -> TateRing<SeriesRing> {
    TateRing::new(SeriesRing::new(p, np, ns), OrderContext::lex(&["X", "Y"]))
}

pub fn config(p: u64, np: i64, ns: i64) -> RingConfig {
    RingConfig::new(p, np, ns).unwrap()
}

/// A series `Σ c_n p^{k_n} S^n` with a handful of small terms.
pub fn series(rng: &mut impl Rng, t: &TateRing<SeriesRing>, max_terms: usize, unit: bool) -> Series {
    let p = t.base.p as i64;
    let mut terms: Vec<(u32, BigInt)> = (0..rng.gen_range(0..=max_terms))
        .map(|_| {
            let c = rng.gen_range(-4i64..=4) * p.pow(rng.gen_range(0..3));
            (rng.gen_range(0..6), BigInt::from(c))
        })
        .collect();
    if unit {
        let mut c = rng.gen_range(1..p);
        if rng.gen_bool(0.5) {
            c = -c;
        }
        terms.retain(|(n, _)| *n != 0);
        terms.push((0, BigInt::from(c)));
    }
    t.base.from_terms(terms)
}

pub fn element(rng: &mut impl Rng, t: &TateRing<SeriesRing>, terms: usize, max_deg: u32) -> TateElem<Series> {
    let mut f = t.zero();
    for _ in 0..rng.gen_range(1..=terms) {
        let m = vec![rng.gen_range(0..=max_deg), rng.gen_range(0..=max_deg)];
        let c = series(rng, t, 3, false);
        t.add_term(&mut f, m, c);
    }
    f
}

/// A certified basis with leading monomials `X^a` and, optionally, `Y^b`
/// (lex `X > Y`). Lower terms of the `Y` generator avoid `X` unless their
/// coefficient has positive valuation. Lower terms never exceed the total
/// degree of the leading monomial, which keeps the set of monomials met
/// during division finite.
pub fn basis(rng: &mut impl Rng, t: &TateRing<SeriesRing>) -> GroebnerBasis<SeriesRing> {
    loop {
        let a = rng.gen_range(1..=3);
        let mut g1 = t.term(series(rng, t, 2, true), vec![a, 0]);
        for _ in 0..rng.gen_range(0..=3) {
            let i = rng.gen_range(0..a);
            let m = vec![i, rng.gen_range(0..=a - i)];
            let c = series(rng, t, 2, false);
            t.add_term(&mut g1, m, c);
        }
        let mut gens = vec![g1];
        if rng.gen_bool(0.7) {
            let b = rng.gen_range(1..=3);
            let mut g2 = t.term(series(rng, t, 2, true), vec![0, b]);
            for _ in 0..rng.gen_range(0..=3) {
                let (m, small) = if rng.gen_bool(0.5) {
                    (vec![0, rng.gen_range(0..b)], false)
                } else {
                    let i = rng.gen_range(1..=b);
                    (vec![i, rng.gen_range(0..=b - i)], true)
                };
                let mut c = series(rng, t, 2, false);
                if small {
                    let shift = if rng.gen_bool(0.5) { t.base.constant(BigInt::from(t.base.p)) } else { t.base.s_pow(1) };
                    c = overconv::ring::Ring::mul(&t.base, &c, &shift);
                }
                t.add_term(&mut g2, m, c);
            }
            gens.push(g2);
        }
        let gb = certify_concrete(t, gens);
        if gb.certified {
            return gb;
        }
    }
}

/// A random element of the ideal, `Σ c_i g_i`.
pub fn ideal_element(rng: &mut impl Rng, gb: &GroebnerBasis<SeriesRing>) -> TateElem<Series> {
    let t = &gb.ring;
    gb.generators.iter().fold(t.zero(), |acc, g| {
        let c = element(rng, t, 2, 2);
        t.add(&acc, &t.mul(&c, g))
    })
}

/// A Laurent polynomial over `Q_p` with exponents spanning at most `span`.
pub fn laurent_poly(rng: &mut impl Rng, p: u64, span: i64) -> Laurent {
    let lo = rng.gen_range(-3..=3);
    let hi = lo + rng.gen_range(0..=span);
    let mut f = Laurent::zero();
    for n in lo..=hi {
        if n != lo && n != hi && rng.gen_bool(0.4) {
            continue;
        }
        let mut c = rng.gen_range(1..=8i64);
        if rng.gen_bool(0.5) {
            c = -c;
        }
        let k = rng.gen_range(-1..=4);
        let pk = if k >= 0 { q((p as i64).pow(k as u32)) } else { Q::new(1.into(), (p as i64).pow((-k) as u32).into()) };
        f.add_term(n, q(c) * pk);
    }
    f
}
