//! Fibers of flat families `A = O[[S]]⟨X⟩/I`, quotient and spectral norm
//! estimates, and lifting of idempotents from a fiber to `A^{†,r}`.
//!
//! Elements of `A^{†,r}` are kept in normal form: remainders with Laurent
//! coefficients, truncated at a Gauss weight below which all arithmetic is
//! exact.

use num_traits::{Signed, Zero};
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coeff_series::{gauss_valuation_unchecked, EisensteinPrime, FpLaurentRing, KappaField, Laurent, LaurentRing};
use crate::error::{Error, Result};
use crate::groebner::{divide, remainder_annulus, BasisSpec, GroebnerBasis, LaurentTate};
use crate::rational::{self, Q};
use crate::tate::{BaseRing, SeriesRing, TateElem, TateRing};

/// A flat family given by a certified basis over `O[[S]]`.
#[derive(Clone, Debug)]
pub struct Family {
    pub label: String,
    pub gb: GroebnerBasis<SeriesRing>,
}

/// A family as stored in JSON files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    #[serde(default)]
    pub label: String,
    #[serde(flatten)]
    pub basis: BasisSpec,
}

impl FamilySpec {
    pub fn build(&self) -> Result<Family> {
        Family::new(self.label.clone(), self.basis.build()?)
    }
}

impl Family {
    pub fn new(label: impl Into<String>, gb: GroebnerBasis<SeriesRing>) -> Result<Self> {
        if !gb.certified {
            return Err(Error::domain("the basis of a family must be certified"));
        }
        Ok(Family { label: label.into(), gb })
    }

    pub fn p(&self) -> u64 {
        self.gb.ring.base.p
    }

    /// Tate elements with Laurent coefficients in the family's variables.
    pub fn laurent_tate(&self) -> LaurentTate {
        TateRing::new(LaurentRing::exact(self.p()), self.gb.ring.ctx.clone())
    }

    /// The frontier `min(Np, r·Ns)` below which remainders are exact.
    pub fn frontier(&self, r: &Q) -> Q {
        self.gb.ring.base.frontier(r)
    }
}

/// The fiber `A ⊗ κ(𝔭)` with its reduced basis.
#[derive(Clone, Debug)]
pub enum FiberAlgebra {
    /// Fiber at `(p)`, over `F_p((S))` truncated at `S^Ns`.
    CharP(GroebnerBasis<FpLaurentRing>),
    /// Fiber at a prime of finite degree, over `κ(𝔭)` truncated at `π^prec`.
    Finite(EisensteinPrime, GroebnerBasis<KappaField>),
}

/// Reduce the family modulo `𝔭`. The `prec` bounds the fiber's working
/// precision (`S`-adic at `(p)`, `π`-adic otherwise).
pub fn fiber(family: &Family, prime: &EisensteinPrime, prec: i64) -> Result<FiberAlgebra> {
    if prime.p() != family.p() {
        return Err(Error::Usage("prime and family live over different p".into()));
    }
    let base = &family.gb.ring.base;
    match prime.kappa() {
        None => {
            let fp = FpLaurentRing::new(family.p(), Some(prec));
            let gb = family.gb.map_base(fp.clone(), |c| fp.from_laurent(&base.to_laurent(c)))?;
            Ok(FiberAlgebra::CharP(gb))
        }
        Some(k) => {
            let k = k.with_prec(prec);
            let gb = family.gb.map_base(k.clone(), |c| k.from_laurent(&base.to_laurent(c)))?;
            Ok(FiberAlgebra::Finite(prime.clone(), gb))
        }
    }
}

fn reduce_into<R: BaseRing>(gb: &GroebnerBasis<R>, f: &TateElem<Laurent>) -> Result<TateElem<R::Elem>> {
    let t = &gb.ring;
    let mut out = t.zero();
    for (m, c) in &f.terms {
        t.add_term(&mut out, m.clone(), t.base.from_laurent(c)?);
    }
    Ok(divide(&out, gb, None)?.remainder)
}

fn qt_val<R: BaseRing>(gb: &GroebnerBasis<R>, f: &TateElem<R::Elem>) -> Option<i64> {
    f.terms.values().filter_map(|c| gb.ring.base.ext_val(c)).map(|v| v[0]).min()
}

fn power_rem<R: BaseRing>(gb: &GroebnerBasis<R>, f: &TateElem<R::Elem>, n: u32) -> Result<TateElem<R::Elem>> {
    let mut acc = gb.ring.one();
    for _ in 0..n {
        acc = divide(&gb.ring.mul(&acc, f), gb, None)?.remainder;
    }
    Ok(acc)
}

fn spectral<R: BaseRing>(gb: &GroebnerBasis<R>, f: &TateElem<R::Elem>, n: u32, i_max: u32) -> Result<Vec<Option<Q>>> {
    let mut g = divide(f, gb, None)?.remainder;
    let mut scale = 1i64;
    let mut out = Vec::new();
    for i in 0..=i_max {
        out.push(qt_val(gb, &g).map(|v| rational::qf(v, scale)));
        if i < i_max {
            g = power_rem(gb, &g, n)?;
            scale = scale.checked_mul(n as i64).ok_or_else(|| Error::Usage("power too large".into()))?;
        }
    }
    Ok(out)
}

impl FiberAlgebra {
    pub fn certified(&self) -> bool {
        match self {
            FiberAlgebra::CharP(gb) => gb.certified,
            FiberAlgebra::Finite(_, gb) => gb.certified,
        }
    }

    /// `deg 𝔭`, `None` for `(p)`.
    pub fn degree(&self) -> Option<usize> {
        match self {
            FiberAlgebra::CharP(_) => None,
            FiberAlgebra::Finite(pr, _) => pr.degree(),
        }
    }

    /// Render the reduced generators in the element grammar.
    pub fn render_generators(&self) -> Vec<String> {
        match self {
            FiberAlgebra::CharP(gb) => gb.generators.iter().map(|g| gb.ring.render(g)).collect(),
            FiberAlgebra::Finite(_, gb) => gb.generators.iter().map(|g| gb.ring.render(g)).collect(),
        }
    }

    /// Quotient valuation `v_{𝔭,qt}` of the image of `f`; `None` when the
    /// image vanishes at the fiber's precision.
    pub fn qt_valuation(&self, f: &TateElem<Laurent>) -> Result<Option<i64>> {
        Ok(match self {
            FiberAlgebra::CharP(gb) => qt_val(gb, &reduce_into(gb, f)?),
            FiberAlgebra::Finite(_, gb) => qt_val(gb, &reduce_into(gb, f)?),
        })
    }

    /// `w_qt(f^{n^i}) / n^i` for `i = 0, …, i_max`; the supremum estimates the
    /// spectral valuation.
    pub fn spectral_sequence(&self, f: &TateElem<Laurent>, n: u32, i_max: u32) -> Result<Vec<Option<Q>>> {
        if n < 2 {
            return Err(Error::domain("the power must be at least 2"));
        }
        match self {
            FiberAlgebra::CharP(gb) => spectral(gb, &reduce_into(gb, f)?, n, i_max),
            FiberAlgebra::Finite(_, gb) => spectral(gb, &reduce_into(gb, f)?, n, i_max),
        }
    }

    /// Whether `w_qt(f^n) ≤ n·w_qt(f) + c` for the image of `f`.
    pub fn power_inequality(&self, f: &TateElem<Laurent>, n: u32, c: i64) -> Result<bool> {
        let (a, b) = match self {
            FiberAlgebra::CharP(gb) => {
                let g = reduce_into(gb, f)?;
                (qt_val(gb, &power_rem(gb, &g, n)?), qt_val(gb, &g))
            }
            FiberAlgebra::Finite(_, gb) => {
                let g = reduce_into(gb, f)?;
                (qt_val(gb, &power_rem(gb, &g, n)?), qt_val(gb, &g))
            }
        };
        Ok(match (a, b) {
            (_, None) => true,
            // f^n vanished at precision while f did not: only a nilpotent
            // or a precision artefact can do that.
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a <= n as i64 * b + c,
        })
    }
}

/// Outcome of sampling the power inequality at two fibers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferCheck {
    /// Whether `c < min(deg 𝔭, deg 𝔮)`, the range in which the inequality
    /// transfers between the fibers.
    pub transferable: bool,
    pub samples: usize,
    pub violations_p: usize,
    pub violations_q: usize,
}

/// Random normal-form elements of the family with small integral coefficients.
pub fn sample_elements(family: &Family, count: usize, seed: u64) -> Vec<TateElem<Laurent>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lt = family.laurent_tate();
    let nv = lt.ctx.nvars();
    let p = family.p() as i64;
    (0..count)
        .map(|_| {
            let mut f = lt.zero();
            for _ in 0..rng.gen_range(1..=4) {
                let m: Vec<u32> = (0..nv).map(|_| rng.gen_range(0..3)).collect();
                let c = Laurent::from_terms((0..3).map(|n| {
                    let k = rng.gen_range(0..3u32);
                    (n, rational::q(rng.gen_range(-4..=4) * p.pow(k)))
                }));
                lt.add_term(&mut f, m, c);
            }
            f
        })
        .collect()
}

/// Sample the inequality `w_qt(f^n) ≤ n·w_qt(f) + c` at the fibers over `𝔭`
/// and `𝔮`.
pub fn transfer_inequality_check(
    family: &Family,
    p1: &EisensteinPrime,
    p2: &EisensteinPrime,
    c: i64,
    n: u32,
    samples: usize,
    seed: u64,
    prec: i64,
) -> Result<TransferCheck> {
    let bound = match (p1.degree(), p2.degree()) {
        (Some(a), Some(b)) => Some(a.min(b) as i64),
        (Some(a), None) | (None, Some(a)) => Some(a as i64),
        (None, None) => None,
    };
    let transferable = c >= 0 && bound.is_none_or(|d| c < d);
    let f1 = fiber(family, p1, prec)?;
    let f2 = fiber(family, p2, prec)?;
    let mut out = TransferCheck { transferable, samples, violations_p: 0, violations_q: 0 };
    for f in sample_elements(family, samples, seed) {
        if !f1.power_inequality(&f, n, c)? {
            out.violations_p += 1;
        }
        if !f2.power_inequality(&f, n, c)? {
            out.violations_q += 1;
        }
    }
    Ok(out)
}

/// Arithmetic in `A^{†,r}` on normal forms truncated at weight `cutoff`.
#[derive(Clone, Debug)]
pub struct AnnulusAlgebra<'a> {
    pub family: &'a Family,
    pub r: Q,
    pub cutoff: Q,
    pub lt: LaurentTate,
}

impl<'a> AnnulusAlgebra<'a> {
    pub fn new(family: &'a Family, r: Q, cutoff: Q) -> Self {
        let lt = family.laurent_tate();
        AnnulusAlgebra { family, r, cutoff, lt }
    }

    pub fn truncate(&self, f: TateElem<Laurent>) -> TateElem<Laurent> {
        let p = self.family.p();
        let mut out = self.lt.zero();
        for (m, c) in f.terms {
            self.lt.add_term(&mut out, m, c.truncate_weight(p, &self.r, &self.cutoff));
        }
        out
    }

    /// Normal form, exact below the cutoff.
    pub fn reduce(&self, f: &TateElem<Laurent>) -> Result<TateElem<Laurent>> {
        let rem = remainder_annulus(f, &self.family.gb, &self.r, Some(&self.cutoff))?;
        Ok(self.truncate(rem.remainder))
    }

    pub fn mul(&self, a: &TateElem<Laurent>, b: &TateElem<Laurent>) -> Result<TateElem<Laurent>> {
        self.reduce(&self.lt.mul(a, b))
    }

    /// `w_r` of a normal form capped at the cutoff.
    pub fn weight(&self, f: &TateElem<Laurent>) -> Q {
        let p = self.family.p();
        f.terms
            .values()
            .filter_map(|c| gauss_valuation_unchecked(c, p, &self.r))
            .min()
            .map_or(self.cutoff.clone(), |w| w.min(self.cutoff.clone()))
    }
}

/// One step of the idempotent iteration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionStep {
    #[serde(serialize_with = "crate::grammar::ser_q")]
    pub w_before: Q,
    #[serde(serialize_with = "crate::grammar::ser_q")]
    pub w_after: Q,
    /// `w_after` reached the cutoff and is only a lower bound.
    pub capped: bool,
    /// Whether `w_after ≥ 3·w_before`; `None` when the cap hides the answer.
    pub cubic: Option<bool>,
}

/// Result of lifting one idempotent.
#[derive(Clone, Debug)]
pub struct LiftReport {
    pub f: TateElem<Laurent>,
    pub iterations: usize,
    pub steps: Vec<ContractionStep>,
    /// `w_r(f² − f)`, capped at the cutoff.
    pub precision: Q,
    pub cutoff: Q,
    /// Fiber valuation of `e² − e` (`None`: zero at the fiber's precision).
    pub fiber_defect: Option<i64>,
    /// Fiber valuation of `f − e` (`None`: zero at the fiber's precision).
    pub congruence: Option<i64>,
}

impl LiftReport {
    pub fn contraction_holds(&self) -> bool {
        self.steps.iter().all(|s| s.cubic != Some(false))
    }
}

/// Maximal number of iterations before giving up.
const MAX_ITER: usize = 64;

/// Lift an idempotent of the fiber at `𝔭`, given by a Laurent-coefficient
/// representative `e`, to an idempotent `f` of `A^{†,r}` with
/// `w_r(f² − f) ≥ target`, via `f ← f + h − 2hf`, `h = f² − f`.
pub fn lift_idempotent(
    family: &Family,
    prime: &EisensteinPrime,
    e: &TateElem<Laurent>,
    c: u32,
    r: &Q,
    target: &Q,
) -> Result<LiftReport> {
    if !r.is_positive() {
        return Err(Error::domain("r must be positive"));
    }
    if let Some(d) = prime.degree() {
        if r < &rational::qf(1, d as i64) {
            return Err(Error::domain("r must be at least 1/deg 𝔭"));
        }
    }
    if c > 0 && r >= &rational::qf(1, 2 * c as i64) {
        return Err(Error::domain("r must be below 1/(2c)"));
    }
    let p = family.p();
    let lt = family.laurent_tate();
    let min_w = e
        .terms
        .values()
        .filter_map(|x| gauss_valuation_unchecked(x, p, r))
        .min()
        .unwrap_or_else(Q::zero)
        .min(Q::zero());
    let cutoff = family.frontier(r) + min_w * rational::q(2);
    if &cutoff < target {
        return Err(Error::precision(
            "the ring window cannot reach the target weight",
            rational::fmt_q(&cutoff),
        ));
    }
    let alg = AnnulusAlgebra::new(family, r.clone(), cutoff.clone());
    let fiber_prec = family.gb.ring.base.ns as i64;
    let fib = fiber(family, prime, fiber_prec)?;
    let e0 = alg.reduce(e)?;
    let square = alg.mul(&e0, &e0)?;
    let mut h = lt.sub(&square, &e0);
    let fiber_defect = fib.qt_valuation(&h)?;
    let mut f = e0.clone();
    let mut w = alg.weight(&h);
    if !w.is_positive() {
        return Err(Error::Convergence(format!(
            "w_r(e² − e) = {} is not positive",
            rational::fmt_q(&w)
        )));
    }
    let mut steps = Vec::new();
    let mut iterations = 0;
    while &w < target && w < cutoff {
        if iterations == MAX_ITER {
            return Err(Error::Convergence("idempotent iteration did not reach the target".into()));
        }
        let hf = alg.mul(&h, &f)?;
        f = alg.truncate(lt.sub(&lt.add(&f, &h), &lt.add(&hf, &hf)));
        let sq = alg.mul(&f, &f)?;
        h = lt.sub(&sq, &f);
        let w_next = alg.weight(&h);
        if w_next <= w {
            return Err(Error::Convergence(format!(
                "w_r(h) did not increase: {} -> {}",
                rational::fmt_q(&w),
                rational::fmt_q(&w_next)
            )));
        }
        let capped = w_next >= cutoff;
        let three_w = &w * rational::q(3);
        let cubic = if !capped || cutoff >= three_w { Some(w_next >= three_w) } else { None };
        steps.push(ContractionStep { w_before: w.clone(), w_after: w_next.clone(), capped, cubic });
        w = w_next;
        iterations += 1;
    }
    let congruence = fib.qt_valuation(&lt.sub(&f, &e0))?;
    Ok(LiftReport { f, iterations, steps, precision: w, cutoff, fiber_defect, congruence })
}

/// Report on matching component counts across two fibers.
#[derive(Clone, Debug, Serialize)]
pub struct BijectionReport {
    pub count_p: usize,
    pub count_q: usize,
    /// Lifted idempotents are idempotent, pairwise orthogonal and sum to 1
    /// up to the cutoff, on both sides.
    pub complete_p: bool,
    pub complete_q: bool,
    /// Every lift from one fiber equals a lift from the other up to the
    /// cutoff.
    pub matched: bool,
    /// No lifted idempotent reduces to zero at its fiber.
    pub kernel_trivial: bool,
    #[serde(serialize_with = "crate::grammar::ser_q")]
    pub precision: Q,
}

fn check_system(alg: &AnnulusAlgebra, lifts: &[TateElem<Laurent>], target: &Q) -> Result<bool> {
    let lt = &alg.lt;
    let mut sum = lt.zero();
    for (i, f) in lifts.iter().enumerate() {
        sum = lt.add(&sum, f);
        for g in &lifts[i + 1..] {
            if &alg.weight(&alg.mul(f, g)?) < target {
                return Ok(false);
            }
        }
    }
    // In the zero ring the empty sum equals 1.
    let defect = alg.reduce(&lt.sub(&lt.one(), &sum))?;
    Ok(&alg.weight(&defect) >= target)
}

/// Lift complete systems of orthogonal idempotents at two fibers and compare.
#[allow(clippy::too_many_arguments)]
pub fn component_bijection_report(
    family: &Family,
    p1: &EisensteinPrime,
    e1: &[TateElem<Laurent>],
    p2: &EisensteinPrime,
    e2: &[TateElem<Laurent>],
    c: u32,
    r: &Q,
    target: &Q,
) -> Result<BijectionReport> {
    let lift_all = |prime: &EisensteinPrime, es: &[TateElem<Laurent>]| -> Result<Vec<LiftReport>> {
        es.iter().map(|e| lift_idempotent(family, prime, e, c, r, target)).collect()
    };
    let l1 = lift_all(p1, e1)?;
    let l2 = lift_all(p2, e2)?;
    let cutoff = l1.iter().chain(&l2).map(|l| l.cutoff.clone()).min().unwrap_or_else(|| family.frontier(r));
    let alg = AnnulusAlgebra::new(family, r.clone(), cutoff);
    let f1: Vec<_> = l1.iter().map(|l| l.f.clone()).collect();
    let f2: Vec<_> = l2.iter().map(|l| l.f.clone()).collect();
    let complete_p = check_system(&alg, &f1, target)?;
    let complete_q = check_system(&alg, &f2, target)?;
    let close = |a: &TateElem<Laurent>, b: &TateElem<Laurent>| &alg.weight(&alg.lt.sub(a, b)) >= target;
    let matched = f1.len() == f2.len()
        && f1.iter().all(|a| f2.iter().any(|b| close(a, b)))
        && f2.iter().all(|b| f1.iter().any(|a| close(a, b)));
    let fib1 = fiber(family, p1, family.gb.ring.base.ns as i64)?;
    let fib2 = fiber(family, p2, family.gb.ring.base.ns as i64)?;
    let mut kernel_trivial = true;
    for f in &f1 {
        kernel_trivial &= fib1.qt_valuation(f)?.is_some();
    }
    for f in &f2 {
        kernel_trivial &= fib2.qt_valuation(f)?.is_some();
    }
    let precision = l1.iter().chain(&l2).map(|l| l.precision.clone()).min().unwrap_or_else(|| target.clone());
    Ok(BijectionReport {
        count_p: f1.len(),
        count_q: f2.len(),
        complete_p,
        complete_q,
        matched,
        kernel_trivial,
        precision,
    })
}

/// The Lagrange idempotents `Π_{j≠i} (X − x_j)/(x_i − x_j)` of a split
/// separable polynomial with the given roots, as coefficient vectors in `X`
/// (low to high). Root differences must be units.
pub fn lagrange_idempotents<R: BaseRing>(ring: &R, roots: &[R::Elem]) -> Result<Vec<Vec<R::Elem>>> {
    let mut out = Vec::with_capacity(roots.len());
    for (i, xi) in roots.iter().enumerate() {
        let mut num = vec![ring.one()];
        let mut den = ring.one();
        for (j, xj) in roots.iter().enumerate() {
            if i == j {
                continue;
            }
            num = crate::ring::poly::mul(ring, &num, &[ring.neg(xj), ring.one()]);
            den = ring.mul(&den, &ring.sub(xi, xj));
        }
        let inv = ring.unit_inv(&den).ok_or_else(|| Error::domain("root differences must be units"))?;
        out.push(crate::ring::poly::scale(ring, &num, &inv));
    }
    Ok(out)
}

/// Lift a univariate coefficient vector over a fiber ring to a Tate element
/// in the single variable of the family.
pub fn univariate_lift<R: BaseRing>(ring: &R, lt: &LaurentTate, coeffs: &[R::Elem]) -> TateElem<Laurent> {
    let mut out = lt.zero();
    for (k, c) in coeffs.iter().enumerate() {
        let mut m = lt.ctx.one_monomial();
        m[0] = k as u32;
        lt.add_term(&mut out, m, ring.to_laurent(c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff_series::{FpLaurent, RingConfig};
    use crate::rational::{q, qf};
    use crate::ring::Ring;

    fn family(gens: &[&str], order: &str, np: i64, ns: i64) -> Family {
        FamilySpec {
            label: String::new(),
            basis: BasisSpec {
                config: RingConfig::new(3, np, ns).unwrap(),
                order: order.into(),
                generators: gens.iter().map(|s| s.to_string()).collect(),
            },
        }
        .build()
        .unwrap()
    }

    #[test]
    fn fiber_examples() {
        let fam = family(&["X^2 - S", "Y^3 - p"], "lex:X>Y", 20, 20);
        let at_s_minus_p = EisensteinPrime::new(3, vec![q(-3), q(1)]).unwrap();
        let fib = fiber(&fam, &at_s_minus_p, 40).unwrap();
        assert!(fib.certified());
        assert_eq!(fib.render_generators(), vec!["X^2 - 3", "Y^3 - 3"]);
        let fib = fiber(&fam, &EisensteinPrime::char_p(3), 20).unwrap();
        assert_eq!(fib.render_generators(), vec!["X^2 + 2*S", "Y^3"]);
        let unit = family(&["1"], "lex:X", 20, 20);
        assert!(fiber(&unit, &EisensteinPrime::char_p(3), 20).unwrap().certified());
    }

    #[test]
    fn scalar_spectral_sequences() {
        let fam = family(&["X^2 - X - S"], "lex:X", 20, 40);
        let pr = EisensteinPrime::new(3, vec![q(3), q(0), q(1)]).unwrap();
        let fib = fiber(&fam, &pr, 40).unwrap();
        let lt = fam.laurent_tate();
        let pi = lt.constant(Laurent::s_pow(1));
        assert_eq!(fib.spectral_sequence(&pi, 2, 3).unwrap(), vec![Some(q(1)); 4]);
        let one = lt.one();
        assert_eq!(fib.spectral_sequence(&one, 2, 3).unwrap(), vec![Some(q(0)); 4]);
    }

    fn split_roots(p: u64, prec: i64) -> (FpLaurentRing, Vec<FpLaurent>) {
        // Roots (1 ± √(1 + 4S))/2 of X² − X − S over F_p((S)).
        let ring = FpLaurentRing::new(p, Some(prec));
        let disc = FpLaurent::from_terms([(0, 1), (1, 4 % p)], p);
        let sq = ring.sqrt_series(&disc, prec).unwrap();
        let half = Fp::new(p).inv(2).unwrap();
        let h = FpLaurent::monomial(half, 0, p);
        let one = ring.one();
        let x1 = ring.mul(&ring.add(&one, &sq), &h);
        let x2 = ring.mul(&ring.sub(&one, &sq), &h);
        (ring, vec![x1, x2])
    }

    use crate::ring::Fp;

    #[test]
    fn quadratic_split_lift() {
        let fam = family(&["X^2 - X - S"], "lex:X", 64, 128);
        let (ring, roots) = split_roots(3, 128);
        let es = lagrange_idempotents(&ring, &roots).unwrap();
        let lt = fam.laurent_tate();
        let e = univariate_lift(&ring, &lt, &es[0]);
        let rep = lift_idempotent(&fam, &EisensteinPrime::char_p(3), &e, 0, &qf(1, 2), &q(40)).unwrap();
        assert!(rep.precision >= q(40));
        assert!(rep.iterations <= 8);
        // For p = 3 the factor 4h − 3 has valuation exactly 1 once w(h) > 1,
        // so the weights follow w ↦ 2w + 1 rather than tripling.
        for s in rep.steps.iter().filter(|s| !s.capped) {
            assert_eq!(s.w_after, &s.w_before * q(2) + q(1));
        }
        assert!(!rep.contraction_holds());
        assert!(rep.congruence.is_none_or(|v| v >= 64));
        assert!(lift_idempotent(&fam, &EisensteinPrime::char_p(3), &lt.zero(), 0, &qf(1, 2), &q(40)).unwrap().f.is_zero());
        let one = lift_idempotent(&fam, &EisensteinPrime::char_p(3), &lt.one(), 0, &qf(1, 2), &q(40)).unwrap();
        assert_eq!(one.f, lt.one());
    }

    #[test]
    fn bad_parameters_are_rejected() {
        let fam = family(&["X^2 - X - S"], "lex:X", 20, 40);
        let lt = fam.laurent_tate();
        let x = lt.var(0);
        // X itself is not an idempotent: w(X² − X) = w(S) = r.
        let deg5 = EisensteinPrime::new(3, vec![q(3), q(0), q(0), q(0), q(0), q(1)]).unwrap();
        assert!(lift_idempotent(&fam, &deg5, &x, 0, &qf(1, 10), &q(5)).is_err());
        assert!(lift_idempotent(&fam, &EisensteinPrime::char_p(3), &x, 1, &qf(1, 2), &q(5)).is_err());
        let big = lt.constant(Laurent::constant(qf(1, 3)));
        assert!(lift_idempotent(&fam, &EisensteinPrime::char_p(3), &big, 0, &qf(1, 2), &q(5)).is_err());
    }
}
