//! Strictly deeply ramified towers `K_n` over `Q_p` at finite level, the
//! finite-level approximation of the field of norms, and the
//! break-convergence experiment.
//!
//! At level `N` the ring `O_{K_N}/ξ'` is identified with `F_p[Π]/(Π^k)` via
//! `π_N ↦ Π`, where `ξ' = π_N^k` and `k = v_N(ξ) - 1`. Minimal polynomials over
//! `K_N` are transported along this identification.
//!
//! ```
//! use overconv::norms::{check_sdr, TowerRule, TowerSpec};
//!
//! let tower = TowerSpec { p: 3, rule: TowerRule::Cyclotomic, xi: "zeta_p - 1".into(), n0: 1 };
//! assert!(check_sdr(&tower, 3).unwrap().verdict);
//! ```

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coeff_series::{FpLaurent, KappaField, Laurent};
use crate::error::{Error, Result};
use crate::grammar::{parse_laurent, parse_tate, render_tate};
use crate::rational::{self, Q};
use crate::ramify::{
    as_breaks, classify, herbrand_oracle, laurent_field, qp, root_distances, Classified, DvField, SimpleExtension,
};
use crate::ring::{poly, Ring};
use crate::tate::OrderContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TowerRule {
    /// `K_n = Q_p(ζ_{p^n})`, `π_n = ζ_{p^n} - 1`.
    Cyclotomic,
    /// `K_n = Q_p(p^{1/p^n})`, `π_n = p^{1/p^n}`.
    Kummer,
    /// `K_n = Q_p` for all `n`.
    Constant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub p: u64,
    pub rule: TowerRule,
    /// `"zeta_p - 1"`, or a rational in the element grammar such as `"p"`.
    pub xi: String,
    #[serde(default = "one_u32")]
    pub n0: u32,
}

fn one_u32() -> u32 {
    1
}

impl TowerSpec {
    /// The field `K_n`.
    pub fn field(&self, n: u32) -> KappaField {
        let p = self.p;
        match (self.rule, n) {
            (TowerRule::Constant, _) | (_, 0) => qp(p),
            (TowerRule::Cyclotomic, n) => KappaField::new(p, crate::ramify::cyclotomic_shifted(p, n)),
            (TowerRule::Kummer, n) => {
                let d = p.pow(n) as usize;
                let mut m = vec![Q::zero(); d + 1];
                m[0] = -rational::q(p as i64);
                m[d] = Q::one();
                KappaField::new(p, m)
            }
        }
    }

    /// The image of `π_n` in `K_{n+1}`.
    fn pi_image(&self, n: u32) -> Vec<Q> {
        let up = self.field(n + 1);
        let pi = up.pi();
        match (self.rule, n) {
            (TowerRule::Constant, _) => pi,
            (_, 0) => up.from_i64(self.p as i64),
            (TowerRule::Cyclotomic, _) => up.sub(&up.pow(&up.add(&pi, &up.one()), self.p), &up.one()),
            (TowerRule::Kummer, _) => up.pow(&pi, self.p),
        }
    }

    /// Embed an element of `K_n` into `K_m` for `m ≥ n`.
    pub fn embed(&self, n: u32, m: u32, x: &[Q]) -> Vec<Q> {
        let mut x = x.to_vec();
        for k in n..m {
            let up = self.field(k + 1);
            let img = self.pi_image(k);
            let coeffs: Vec<Vec<Q>> = x.iter().map(|c| up.from_q(c.clone())).collect();
            x = poly::eval(&up, &coeffs, &img);
        }
        x
    }

    /// `ξ` as an element of `K_n`.
    pub fn xi_at(&self, n: u32) -> Result<Vec<Q>> {
        let text = self.xi.trim();
        if text.replace(' ', "") == "zeta_p-1" {
            if self.rule != TowerRule::Cyclotomic || n < 1 {
                return Err(Error::domain("ζ_p - 1 lives in the cyclotomic tower from level 1"));
            }
            return Ok(self.embed(1, n, &self.field(1).pi()));
        }
        let c = parse_laurent(text, self.p)?;
        if c.min_exp().is_some_and(|e| e != 0) || c.max_exp().is_some_and(|e| e != 0) {
            return Err(Error::domain("ξ must be a constant or ζ_p - 1"));
        }
        Ok(self.field(n).from_q(c.coeff(0)))
    }

    /// `v_n(ξ)` in the normalization `v_n(π_n) = 1`.
    pub fn xi_valuation(&self, n: u32) -> Result<i64> {
        self.field(n).valuation(&self.xi_at(n)?).ok_or_else(|| Error::domain("ξ must be nonzero"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SdrLevel {
    pub n: u32,
    pub degree_step: usize,
    pub degree_ok: bool,
    /// `v_{n+1}(π_{n+1}^p - π_n)`.
    pub congruence_valuation: Option<i64>,
    pub congruence_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SdrReport {
    #[serde(serialize_with = "crate::grammar::ser_q")]
    pub xi_vp: Q,
    pub xi_ok: bool,
    pub levels: Vec<SdrLevel>,
    pub verdict: bool,
}

/// Check the finite-level conditions for levels `n0 ≤ n < n_max`: degree `p`
/// per step, `0 < v_p(ξ) ≤ 1`, and `π_{n+1}^p ≡ π_n mod ξ`.
pub fn check_sdr(tower: &TowerSpec, n_max: u32) -> Result<SdrReport> {
    let n0 = tower.n0;
    let e0 = tower.field(n0).degree() as i64;
    let xi_vp = Q::new(tower.xi_valuation(n0)?.into(), e0.into());
    let xi_ok = xi_vp.is_positive() && xi_vp <= Q::one();
    let mut levels = Vec::new();
    for n in n0..n_max {
        let lo = tower.field(n);
        let hi = tower.field(n + 1);
        let degree_step = hi.degree() / lo.degree();
        let diff = hi.sub(&hi.pow(&hi.pi(), tower.p), &tower.pi_image(n));
        let v = hi.valuation(&diff);
        let bound = tower.xi_valuation(n + 1)?;
        levels.push(SdrLevel {
            n,
            degree_step,
            degree_ok: degree_step as u64 == tower.p,
            congruence_valuation: v,
            congruence_ok: v.is_none_or(|v| v >= bound),
        });
    }
    let verdict = xi_ok && levels.iter().all(|l| l.degree_ok && l.congruence_ok);
    Ok(SdrReport { xi_vp, xi_ok, levels, verdict })
}

/// Ramification data of `L_n = K_n(θ)` over `K_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelBreaks {
    pub n: u32,
    pub degree: usize,
    pub e: usize,
    pub f: usize,
    #[serde(serialize_with = "crate::grammar::ser_q")]
    pub b: Q,
    #[serde(serialize_with = "crate::grammar::ser_q")]
    pub b_log: Q,
    /// `"clusters"` for ramified levels, `"herbrand"` when inertia is trivial.
    pub method: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormFieldApprox {
    pub level: u32,
    pub p: u64,
    /// The polynomial is known modulo `Π^pi_precision`.
    pub pi_precision: i64,
    /// Polynomial in `T` with `S` standing for `Π`.
    pub polynomial: String,
    pub degree: usize,
    pub e: usize,
    pub f: usize,
    #[serde(serialize_with = "crate::grammar::ser_q")]
    pub b: Q,
    #[serde(serialize_with = "crate::grammar::ser_q")]
    pub b_log: Q,
    /// Degree and ramification index agree with level `N + 1`.
    pub stationary: bool,
}

fn breaks_of<F: DvField>(n: u32, d: usize, c: &Classified<F>, trivial_base: F) -> Result<LevelBreaks> {
    match c {
        Classified::Totally(ext) => {
            let br = as_breaks(&root_distances(ext)?);
            Ok(LevelBreaks { n, degree: d, e: d, f: 1, b: br.b, b_log: br.b_log, method: "clusters".into() })
        }
        Classified::Unramified { .. } | Classified::Trivial => {
            // Inertia is trivial: the oracle runs on the degree-one extension.
            let one = SimpleExtension::eisenstein(trivial_base.clone(), vec![trivial_base.pi_power(1), trivial_base.one()])?;
            let hb = herbrand_oracle(&one, &[one.theta()])?;
            Ok(LevelBreaks { n, degree: d, e: 1, f: d, b: hb.b, b_log: hb.b_log, method: "herbrand".into() })
        }
    }
}

fn parse_rational_poly(p: u64, text: &str) -> Result<Vec<Q>> {
    let ctx = OrderContext::lex(&["X"]);
    let map = parse_tate(text, p, &ctx)?;
    let deg = map.keys().map(|m| m[0] as usize).max().unwrap_or(0);
    let mut out = vec![Q::zero(); deg + 1];
    for (m, c) in &map {
        if c.min_exp().is_some_and(|e| e != 0) || c.max_exp().is_some_and(|e| e != 0) {
            return Err(Error::domain("the extension of Q_p must have rational coefficients"));
        }
        out[m[0] as usize] = c.coeff(0);
    }
    if out.last() != Some(&Q::one()) {
        return Err(Error::domain("the defining polynomial must be monic"));
    }
    Ok(out)
}

fn classify_at(tower: &TowerSpec, g: &[Q], n: u32) -> Result<Classified<KappaField>> {
    let k = tower.field(n);
    classify(&k, g.iter().map(|c| k.from_q(c.clone())).collect())
}

/// Breaks of `L_n/K_n` for `L = Q_p[X]/(g)`.
pub fn level_breaks(tower: &TowerSpec, minpoly: &str, n: u32) -> Result<LevelBreaks> {
    let g = parse_rational_poly(tower.p, minpoly)?;
    let c = classify_at(tower, &g, n)?;
    breaks_of(n, g.len() - 1, &c, tower.field(n))
}

/// `O_{K_N}/π_N^k → F_p[Π]/(Π^k)`.
fn transport(k: &KappaField, x: &[Q], prec: i64) -> Result<FpLaurent> {
    if k.valuation(x).is_some_and(|v| v < 0) {
        return Err(Error::domain("coefficient is not integral"));
    }
    let e = k.degree() as i64;
    let p = k.p;
    let mut out = FpLaurent::zero();
    for (j, c) in x.iter().enumerate() {
        // c π^j = Σ_t c_t p^t π^j and p ≡ 0 modulo π^e.
        if (j as i64) < prec.min(e) {
            out.add_term(j as i64, rational::to_fp(c, p)?, p);
        }
    }
    Ok(out)
}

fn approx_at(tower: &TowerSpec, g: &[Q], n: u32) -> Result<(NormFieldApprox, Vec<FpLaurent>)> {
    let k = tower.field(n);
    let prec = tower.xi_valuation(n)? - 1;
    if prec < 1 {
        return Err(Error::precision("level too low: ξ' has no room below ξ", prec));
    }
    let minpoly = match classify_at(tower, g, n)? {
        Classified::Trivial => vec![k.neg(&k.from_q(g[0].clone())), k.one()],
        Classified::Totally(ext) => ext.minpoly,
        Classified::Unramified { minpoly, .. } => minpoly,
    };
    let charp: Vec<FpLaurent> = minpoly.iter().map(|c| transport(&k, c, prec)).collect::<Result<_>>()?;
    let kp = laurent_field(tower.p);
    let d = charp.len() - 1;
    let c = if d == 1 { Classified::Trivial } else { classify(&kp, charp.clone())? };
    let lb = breaks_of(n, d, &c, kp)?;
    let ctx = OrderContext::lex(&["T"]);
    let terms: Vec<(Vec<u32>, Laurent)> = charp
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (vec![i as u32], Laurent::from_terms(c.terms().map(|(e, a)| (e, rational::q(a as i64))))))
        .collect();
    let approx = NormFieldApprox {
        level: n,
        p: tower.p,
        pi_precision: prec,
        polynomial: render_tate(&ctx, terms.iter().map(|(m, c)| (m, c))),
        degree: d,
        e: lb.e,
        f: lb.f,
        b: lb.b,
        b_log: lb.b_log,
        stationary: false,
    };
    Ok((approx, charp))
}

/// The norm-field polynomial of `L = Q_p[X]/(g)` at level `N`, with the
/// degree and ramification index checked against level `N + 1`.
pub fn norm_field_min_poly(tower: &TowerSpec, minpoly: &str, level: u32) -> Result<NormFieldApprox> {
    let g = parse_rational_poly(tower.p, minpoly)?;
    let (mut a, _) = approx_at(tower, &g, level)?;
    let next = classify_at(tower, &g, level + 1)?;
    let next_e = match &next {
        Classified::Totally(ext) => ext.degree(),
        _ => 1,
    };
    if next_e != a.e {
        return Err(Error::precision("level too low: ramification index not yet stationary", level));
    }
    a.stationary = true;
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<LevelBreaks>,
    pub norm_field: NormFieldApprox,
    /// The last two levels have equal `(b, b_log)`.
    pub stationary: bool,
    /// Stationary and equal to the norm-field breaks.
    pub converged: bool,
}

/// Char-0 breaks at each level in `levels`, and the norm-field breaks at the
/// last level.
pub fn break_convergence_experiment(tower: &TowerSpec, minpoly: &str, levels: &[u32]) -> Result<ConvergenceTable> {
    let Some(&last) = levels.last() else {
        return Err(Error::Usage("at least one level is needed".into()));
    };
    let rows = levels.iter().map(|&n| level_breaks(tower, minpoly, n)).collect::<Result<Vec<_>>>()?;
    let norm_field = norm_field_min_poly(tower, minpoly, last)?;
    let stationary = rows.len() >= 2 && {
        let (a, b) = (&rows[rows.len() - 2], &rows[rows.len() - 1]);
        a.b == b.b && a.b_log == b.b_log
    };
    let tail = rows.last().unwrap();
    let converged = stationary && tail.b == norm_field.b && tail.b_log == norm_field.b_log;
    Ok(ConvergenceTable { rows, norm_field, stationary, converged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn cyclotomic() -> TowerSpec {
        TowerSpec { p: 3, rule: TowerRule::Cyclotomic, xi: "zeta_p - 1".into(), n0: 1 }
    }

    #[test]
    fn sdr_examples() {
        assert!(check_sdr(&cyclotomic(), 4).unwrap().verdict);
        let bad = TowerSpec { xi: "p^2".into(), ..cyclotomic() };
        assert!(!check_sdr(&bad, 3).unwrap().xi_ok);
        let constant = TowerSpec { p: 3, rule: TowerRule::Constant, xi: "p".into(), n0: 1 };
        assert!(!check_sdr(&constant, 3).unwrap().verdict);
        let kummer = TowerSpec { p: 3, rule: TowerRule::Kummer, xi: "p".into(), n0: 1 };
        assert!(check_sdr(&kummer, 3).unwrap().verdict);
    }

    #[test]
    fn embedding_is_compatible() {
        let t = cyclotomic();
        let k3 = t.field(3);
        // ζ_3 - 1 has valuation 9 in K_3.
        assert_eq!(k3.valuation(&t.xi_at(3).unwrap()), Some(9));
        assert_eq!(t.xi_valuation(2).unwrap(), 3);
    }

    #[test]
    fn trivial_extension() {
        let t = cyclotomic();
        let table = break_convergence_experiment(&t, "X - 2", &[2, 3]).unwrap();
        assert!(table.rows.iter().all(|r| r.b == q(0) && r.b_log == q(0)));
        assert!(table.converged);
        assert_eq!(table.norm_field.degree, 1);
    }

    #[test]
    fn kummer_tower_sqrt3_is_tame() {
        let t = TowerSpec { p: 3, rule: TowerRule::Kummer, xi: "p".into(), n0: 1 };
        let table = break_convergence_experiment(&t, "X^2 - 3", &[1, 2]).unwrap();
        assert!(table.converged, "{table:?}");
        assert_eq!((table.norm_field.b.clone(), table.norm_field.b_log.clone()), (q(1), q(0)));
        assert_eq!(table.norm_field.polynomial, "T^2 + 2*S");
    }

    #[test]
    fn cyclotomic_tower_sqrt3_is_unramified() {
        let table = break_convergence_experiment(&cyclotomic(), "X^2 - 3", &[2, 3]).unwrap();
        assert!(table.rows.iter().all(|r| r.e == 1 && r.f == 2));
        assert!(table.converged, "{table:?}");
        assert_eq!(table.norm_field.f, 2);
    }
}
