//! The flat family `A_{α,β} = O[[S]]⟨X,Y⟩/(S^{α_j} Y_j - P_j^{β_j})` lifting
//! Abbes–Saito spaces of a characteristic-p extension.
//!
//! The relations are rewritten as `Q_0 = S^{α_0} Y_0 - P_0^{β_0}` and
//! `Q_j = S^{α_j} Y_j - P_j^{β_j} - Q_0 P_0^{⌊β_j/e⌋ - β_0} Θ_j` with
//! `Θ_j = X_0^{β_j - e⌊β_j/e⌋} δ_j^{β_j}`, whose leading terms are pairwise
//! coprime monic monomials in the lex order `X_m ≻ … ≻ X_0 ≻ Y_m ≻ … ≻ Y_0`.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::field::{DvField, SimpleExtension};
use crate::coeff_series::{EisensteinPrime, FpLaurentRing, KappaField, Laurent, RingConfig};
use crate::components::{fiber, FiberAlgebra, Family};
use crate::error::{Error, Result};
use crate::grammar::{parse_tate, render_laurent, render_tate};
use crate::groebner::{certify_concrete, BasisSpec};
use crate::rational::{self, Q};
use crate::tate::{OrderContext, TateElem, TateRing};

/// Generators of `O_F` over `O_E` in the normal form
/// `p_0 = X_0^e + π_E η_0`, `p_j = X_j^{f_j} - ε_j + X_0 δ_j + π_E η_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalForm {
    pub p: u64,
    pub e: u32,
    /// `p_0, …, p_m` in the variables `X0, …, Xm` with `S` for `π_E`.
    pub relations: Vec<String>,
    /// `δ_1, …, δ_m`.
    #[serde(default)]
    pub deltas: Vec<String>,
}

impl NormalForm {
    /// The single relation of a monogenic totally ramified extension: the
    /// minimal polynomial of its uniformizer, with coefficients lifted to the
    /// balanced residues.
    pub fn monogenic(ext: &SimpleExtension<FpLaurentRing>) -> Result<Self> {
        let eis = ext.to_eisenstein()?;
        let p = eis.base.p;
        let ctx = OrderContext::lex(&["X0"]);
        let mut terms = Vec::new();
        for (i, c) in eis.minpoly.iter().enumerate() {
            let lifted = Laurent::from_terms(c.terms().map(|(n, a)| {
                let a = a as i64;
                (n, rational::q(if 2 * a > p as i64 { a - p as i64 } else { a }))
            }));
            if !lifted.is_zero() {
                terms.push((vec![i as u32], lifted));
            }
        }
        let relation = render_tate(&ctx, terms.iter().map(|(m, c)| (m, c)));
        Ok(NormalForm { p, e: eis.degree() as u32, relations: vec![relation], deltas: Vec::new() })
    }

    fn order(&self) -> OrderContext {
        let k = self.relations.len();
        let names: Vec<String> =
            (0..k).rev().map(|j| format!("X{j}")).chain((0..k).rev().map(|j| format!("Y{j}"))).collect();
        OrderContext::lex(&names)
    }
}

/// Exponents `(α_0, β_0)` of the monogenic family at threshold `a = α/β`;
/// the log variant uses `α_0 = a β_0 + β_0`.
pub fn monogenic_exponents(a: &Q, log: bool) -> Result<(u32, u32)> {
    if a.is_negative() {
        return Err(Error::domain("the threshold a must be non-negative"));
    }
    let num = rational::to_i64(a.numer());
    let den = rational::to_i64(a.denom());
    let alpha = if log { num + den } else { num };
    let cvt = |x: i64| u32::try_from(x).map_err(|_| Error::domain("exponent too large"));
    Ok((cvt(alpha)?, cvt(den)?))
}

/// A certified family together with its exponents.
#[derive(Clone, Debug)]
pub struct AsFamily {
    pub family: Family,
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub e: u32,
}

impl AsFamily {
    /// The basis as a JSON-ready spec.
    pub fn spec(&self) -> BasisSpec {
        let gb = &self.family.gb;
        let base = &gb.ring.base;
        let config = RingConfig { p: base.p, f: 1, np: base.np as i64, ns: base.ns as i64, conway_lift: None };
        BasisSpec { config, order: gb.ring.ctx.spec(), generators: gb.generators.iter().map(|g| gb.ring.render(g)).collect() }
    }
}

/// Build and certify the family `A_{α,β}`. Fails when the exponent
/// hypotheses `⌊β_j/e⌋ ≥ β_0` and `p^l | β_j` (`j ≥ 1`, some `l > 0`) fail.
pub fn build_as_family(nf: &NormalForm, alpha: &[u32], beta: &[u32], config: &RingConfig) -> Result<AsFamily> {
    let k = nf.relations.len();
    if k == 0 || alpha.len() != k || beta.len() != k || nf.deltas.len() + 1 != k {
        return Err(Error::Usage("one (α, β) pair per relation and one δ per relation after the first".into()));
    }
    if config.p != nf.p {
        return Err(Error::Usage("normal form and ring live over different p".into()));
    }
    if nf.e == 0 || beta.iter().any(|&b| b == 0) {
        return Err(Error::domain("e and every β_j must be positive"));
    }
    for j in 1..k {
        if beta[j] / nf.e < beta[0] {
            return Err(Error::domain(format!("exponent hypothesis ⌊β_{j}/e⌋ ≥ β_0 fails")));
        }
        if beta[j] % nf.p as u32 != 0 {
            return Err(Error::domain(format!("exponent hypothesis p | β_{j} fails")));
        }
    }
    let ctx = nf.order();
    let ring = BasisSpec { config: config.clone(), order: ctx.spec(), generators: Vec::new() }.ring()?;
    let p = nf.p;
    let parse = |s: &str| -> Result<TateElem<_>> { ring.from_laurent_map(&parse_tate(s, p, &ctx)?) };
    let rels: Vec<_> = nf.relations.iter().map(|s| parse(s)).collect::<Result<_>>()?;
    let deltas: Vec<_> = nf.deltas.iter().map(|s| parse(s)).collect::<Result<_>>()?;
    let x = |j: usize| ring.var(k - 1 - j);
    let y = |j: usize| ring.var(2 * k - 1 - j);
    let s_pow = |a: u32| ring.constant(ring.base.s_pow(a));
    let q0 = ring.sub(&ring.mul(&s_pow(alpha[0]), &y(0)), &ring.pow(&rels[0], beta[0]));
    let mut gens = vec![q0.clone()];
    for j in 1..k {
        let fl = beta[j] / nf.e;
        let theta = ring.mul(&ring.pow(&x(0), beta[j] - nf.e * fl), &ring.pow(&deltas[j - 1], beta[j]));
        let correction = ring.mul(&ring.mul(&q0, &ring.pow(&rels[0], fl - beta[0])), &theta);
        let qj = ring.sub(&ring.mul(&s_pow(alpha[j]), &y(j)), &ring.pow(&rels[j], beta[j]));
        gens.push(ring.sub(&qj, &correction));
    }
    let gb = certify_concrete(&ring, gens);
    if !gb.certified {
        return Err(Error::domain("the rewritten relations are not a certified basis; exponent hypotheses violated"));
    }
    let label = format!("AS(alpha={alpha:?}, beta={beta:?})");
    Ok(AsFamily { family: Family::new(label, gb)?, alpha: alpha.to_vec(), beta: beta.to_vec(), e: nf.e })
}

/// The monogenic family of a characteristic-p extension at threshold `a`.
pub fn as_family_monogenic(
    ext: &SimpleExtension<FpLaurentRing>,
    a: &Q,
    log: bool,
    config: &RingConfig,
) -> Result<AsFamily> {
    let nf = NormalForm::monogenic(ext)?;
    let (alpha, beta) = monogenic_exponents(a, log)?;
    build_as_family(&nf, &[alpha], &[beta], config)
}

/// `π^α Y0 - g(X0)^β` for an Eisenstein presentation, in a ring whose
/// context contains `X0` and `Y0`.
pub fn as_space_generator<F: DvField>(
    ring: &TateRing<F>,
    ext: &SimpleExtension<F>,
    alpha: u32,
    beta: u32,
) -> Result<TateElem<F::Elem>> {
    let eis = ext.to_eisenstein()?;
    let (Some(xi), Some(yi)) = (ring.ctx.var_index("X0"), ring.ctx.var_index("Y0")) else {
        return Err(Error::Usage("the context needs variables X0 and Y0".into()));
    };
    let n = ring.ctx.nvars();
    let mut g = ring.zero();
    for (i, c) in eis.minpoly.iter().enumerate() {
        let mut m = vec![0u32; n];
        m[xi] = i as u32;
        ring.add_term(&mut g, m, c.clone());
    }
    let mut ym = vec![0u32; n];
    ym[yi] = 1;
    let lhs = ring.term(ring.base.pi_power(alpha as i64), ym);
    Ok(ring.sub(&lhs, &ring.pow(&g, beta)))
}

/// Comparison of a fiber of the family with directly built generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberComparison {
    pub prime: String,
    /// Truncation `π^k` of the comparison, `None` at `(p)` (then `S^Ns`).
    pub modulus_valuation: Option<i64>,
    pub fiber: Vec<String>,
    pub direct: Vec<String>,
    pub matches: bool,
}

fn monogenic_only(asf: &AsFamily) -> Result<()> {
    if asf.alpha.len() != 1 {
        return Err(Error::Usage("fiber comparison is implemented for monogenic families".into()));
    }
    Ok(())
}

/// Fiber at `(p)` against `S^α Y0 - p_0(X0)^β` built over `F_p((S))`.
pub fn compare_charp_fiber(asf: &AsFamily, ext: &SimpleExtension<FpLaurentRing>) -> Result<FiberComparison> {
    monogenic_only(asf)?;
    let p = asf.family.p();
    let ns = asf.family.gb.ring.base.ns as i64;
    let FiberAlgebra::CharP(gb) = fiber(&asf.family, &EisensteinPrime::char_p(p), ns)? else {
        unreachable!("the prime (p) has a characteristic-p fiber")
    };
    let ring = TateRing::new(FpLaurentRing::new(p, Some(ns)), gb.ring.ctx.clone());
    let direct = as_space_generator(&ring, ext, asf.alpha[0], asf.beta[0])?;
    let fiber_gen = &gb.generators[0];
    Ok(FiberComparison {
        prime: "(p)".into(),
        modulus_valuation: None,
        fiber: vec![gb.ring.render(fiber_gen)],
        direct: vec![ring.render(&direct)],
        matches: *fiber_gen == direct,
    })
}

/// Fiber at an Eisenstein prime `𝔭`, reduced modulo `π^k`, against the
/// generators built from a characteristic-zero extension of `κ(𝔭)`.
pub fn compare_char0_fiber(
    asf: &AsFamily,
    prime: &EisensteinPrime,
    ext: &SimpleExtension<KappaField>,
    k: i64,
) -> Result<FiberComparison> {
    monogenic_only(asf)?;
    let kappa = prime.kappa().ok_or_else(|| Error::Usage("expected a prime of finite degree".into()))?;
    if kappa.modulus() != ext.base.modulus() {
        return Err(Error::Usage("the extension does not live over the residue field of the prime".into()));
    }
    let FiberAlgebra::Finite(_, gb) = fiber(&asf.family, prime, k)? else {
        unreachable!("an Eisenstein polynomial has a finite fiber")
    };
    let ring = TateRing::new(kappa.with_prec(k), gb.ring.ctx.clone());
    let exact = TateRing::new(kappa.clone(), gb.ring.ctx.clone());
    let direct = as_space_generator(&exact, ext, asf.alpha[0], asf.beta[0])?;
    let direct = exact.map(&ring, &direct, |c| kappa.truncate_at(c, k));
    let fiber_gen = &gb.generators[0];
    let name = prime.as_laurent().map(|f| render_laurent(&f)).unwrap_or_default();
    Ok(FiberComparison {
        prime: name,
        modulus_valuation: Some(k),
        fiber: vec![gb.ring.render(fiber_gen)],
        direct: vec![ring.render(&direct)],
        matches: *fiber_gen == direct,
    })
}
