//! Multivariate elements of `R⟨X⟩`, monomial orders and extended leading
//! terms.
//!
//! The leading term of `f` combines the iterated parameter valuation
//! `v̲_R(f)` (lex-minimal over the coefficients) with the order-greatest
//! monomial among the coefficients attaining it. Terms compare first by
//! valuation, smaller valuation being greater, then by the monomial order.

mod rings;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::coeff_series::Laurent;
use crate::error::{Error, Result};
use crate::ring::Ring;

pub use rings::{BaseRing, Series, SeriesRing};

/// Exponent vector, indexed like [`OrderContext::vars`].
pub type Monomial = Vec<u32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    Lex,
    GrLex,
}

/// Variables (most significant first) and a monomial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderContext {
    pub vars: Vec<String>,
    pub order: MonomialOrder,
}

impl OrderContext {
    /// Lex order with `vars[0] ≻ vars[1] ≻ …`.
    pub fn lex<S: AsRef<str>>(vars: &[S]) -> Self {
        OrderContext { vars: vars.iter().map(|v| v.as_ref().to_string()).collect(), order: MonomialOrder::Lex }
    }

    pub fn grlex<S: AsRef<str>>(vars: &[S]) -> Self {
        OrderContext { order: MonomialOrder::GrLex, ..OrderContext::lex(vars) }
    }

    /// Parse `lex:X1>X0` or `grlex:X>Y>Z`.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse { pos: 0, msg: format!("{msg}: {spec:?}") };
        let (kind, vars) = spec.split_once(':').ok_or_else(|| bad("order spec needs `kind:vars`"))?;
        let vars: Vec<&str> = vars.split('>').map(str::trim).collect();
        if vars.iter().any(|v| v.is_empty() || !crate::grammar::is_variable_name(v)) {
            return Err(bad("bad variable list"));
        }
        let mut seen = vars.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != vars.len() {
            return Err(bad("repeated variable"));
        }
        match kind.trim() {
            "lex" => Ok(OrderContext::lex(&vars)),
            "grlex" => Ok(OrderContext::grlex(&vars)),
            _ => Err(bad("unknown monomial order")),
        }
    }

    pub fn spec(&self) -> String {
        let kind = match self.order {
            MonomialOrder::Lex => "lex",
            MonomialOrder::GrLex => "grlex",
        };
        format!("{kind}:{}", self.vars.join(">"))
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn one_monomial(&self) -> Monomial {
        vec![0; self.nvars()]
    }

    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.order {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::GrLex => {
                let da: u64 = a.iter().map(|&x| x as u64).sum();
                let db: u64 = b.iter().map(|&x| x as u64).sum();
                da.cmp(&db).then_with(|| a.cmp(b))
            }
        }
    }
}

pub fn divides(a: &Monomial, b: &Monomial) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn coprime(a: &Monomial, b: &Monomial) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

pub fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn mono_div(a: &Monomial, b: &Monomial) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// An element of `R⟨X⟩` with finitely many terms; zero coefficients are never
/// stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TateElem<E> {
    pub terms: BTreeMap<Monomial, E>,
}

impl<E> Default for TateElem<E> {
    fn default() -> Self {
        TateElem { terms: BTreeMap::new() }
    }
}

impl<E> TateElem<E> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Extended leading term `s̲^{v̲} X^{deg̲}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedLT {
    pub v: Vec<i64>,
    pub deg: Monomial,
}

/// `R⟨X⟩` over a base ring with an order context.
#[derive(Clone, Debug)]
pub struct TateRing<R> {
    pub base: R,
    pub ctx: OrderContext,
}

impl<R: Ring> TateRing<R> {
    pub fn new(base: R, ctx: OrderContext) -> Self {
        TateRing { base, ctx }
    }

    pub fn zero(&self) -> TateElem<R::Elem> {
        TateElem::default()
    }

    pub fn term(&self, c: R::Elem, m: Monomial) -> TateElem<R::Elem> {
        let mut out = self.zero();
        self.add_term(&mut out, m, c);
        out
    }

    pub fn constant(&self, c: R::Elem) -> TateElem<R::Elem> {
        self.term(c, self.ctx.one_monomial())
    }

    pub fn one(&self) -> TateElem<R::Elem> {
        self.constant(self.base.one())
    }

    /// The variable with index `i`.
    pub fn var(&self, i: usize) -> TateElem<R::Elem> {
        let mut m = self.ctx.one_monomial();
        m[i] = 1;
        self.term(self.base.one(), m)
    }

    pub fn add_term(&self, f: &mut TateElem<R::Elem>, m: Monomial, c: R::Elem) {
        if self.base.is_zero(&c) {
            return;
        }
        match f.terms.get_mut(&m) {
            Some(slot) => {
                let s = self.base.add(slot, &c);
                if self.base.is_zero(&s) {
                    f.terms.remove(&m);
                } else {
                    *slot = s;
                }
            }
            None => {
                f.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, a: &TateElem<R::Elem>, b: &TateElem<R::Elem>) -> TateElem<R::Elem> {
        let mut out = a.clone();
        for (m, c) in &b.terms {
            self.add_term(&mut out, m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self, a: &TateElem<R::Elem>) -> TateElem<R::Elem> {
        TateElem { terms: a.terms.iter().map(|(m, c)| (m.clone(), self.base.neg(c))).collect() }
    }

    pub fn sub(&self, a: &TateElem<R::Elem>, b: &TateElem<R::Elem>) -> TateElem<R::Elem> {
        let mut out = a.clone();
        for (m, c) in &b.terms {
            self.add_term(&mut out, m.clone(), self.base.neg(c));
        }
        out
    }

    /// `c·X^m·a`.
    pub fn mul_term(&self, a: &TateElem<R::Elem>, c: &R::Elem, m: &Monomial) -> TateElem<R::Elem> {
        let mut out = self.zero();
        for (n, x) in &a.terms {
            self.add_term(&mut out, mono_mul(n, m), self.base.mul(x, c));
        }
        out
    }

    pub fn scale(&self, a: &TateElem<R::Elem>, c: &R::Elem) -> TateElem<R::Elem> {
        self.mul_term(a, c, &self.ctx.one_monomial())
    }

    pub fn mul(&self, a: &TateElem<R::Elem>, b: &TateElem<R::Elem>) -> TateElem<R::Elem> {
        let mut out = self.zero();
        for (m, c) in &b.terms {
            for (n, x) in &a.terms {
                self.add_term(&mut out, mono_mul(n, m), self.base.mul(x, c));
            }
        }
        out
    }

    pub fn pow(&self, a: &TateElem<R::Elem>, k: u32) -> TateElem<R::Elem> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Apply a coefficient map into another ring.
    pub fn map<S: Ring>(
        &self,
        target: &TateRing<S>,
        a: &TateElem<R::Elem>,
        mut f: impl FnMut(&R::Elem) -> S::Elem,
    ) -> TateElem<S::Elem> {
        let mut out = target.zero();
        for (m, c) in &a.terms {
            target.add_term(&mut out, m.clone(), f(c));
        }
        out
    }

    pub fn from_map(&self, map: BTreeMap<Monomial, R::Elem>) -> TateElem<R::Elem> {
        let mut out = self.zero();
        for (m, c) in map {
            self.add_term(&mut out, m, c);
        }
        out
    }

    /// Terms sorted by decreasing monomial order.
    pub fn sorted_terms<'a>(&self, a: &'a TateElem<R::Elem>) -> Vec<(&'a Monomial, &'a R::Elem)> {
        let mut v: Vec<_> = a.terms.iter().collect();
        v.sort_by(|x, y| self.ctx.cmp_monomials(y.0, x.0));
        v
    }
}

impl<R: BaseRing> TateRing<R> {
    /// `v̲_R(f)`: lex-minimal valuation vector of the coefficients; `None`
    /// stands for `∞`.
    pub fn extended_valuation(&self, f: &TateElem<R::Elem>) -> Option<Vec<i64>> {
        f.terms.values().filter_map(|c| self.base.ext_val(c)).min()
    }

    /// `LT_R(f)`; `None` for `f = 0` (the bottom element).
    pub fn leading_term(&self, f: &TateElem<R::Elem>) -> Option<ExtendedLT> {
        let v = self.extended_valuation(f)?;
        let deg = f
            .terms
            .iter()
            .filter(|(_, c)| self.base.ext_val(c).as_ref() == Some(&v))
            .map(|(m, _)| m)
            .max_by(|a, b| self.ctx.cmp_monomials(a, b))?
            .clone();
        Some(ExtendedLT { v, deg })
    }

    /// The leading term of a single term `c·X^m`.
    pub fn term_lt(&self, c: &R::Elem, m: &Monomial) -> Option<ExtendedLT> {
        Some(ExtendedLT { v: self.base.ext_val(c)?, deg: m.clone() })
    }

    /// Compare extended leading terms; `None` (zero) is the least.
    pub fn lt_compare(&self, a: &Option<ExtendedLT>, b: &Option<ExtendedLT>) -> Ordering {
        match (a, b) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(x), Some(y)) => {
                y.v.cmp(&x.v).then_with(|| self.ctx.cmp_monomials(&x.deg, &y.deg))
            }
        }
    }

    /// Like [`TateRing::lt_compare`], but rejecting terms from another context.
    pub fn lt_compare_checked(
        &self,
        a: &Option<ExtendedLT>,
        b: &Option<ExtendedLT>,
    ) -> Result<Ordering> {
        let n = self.ctx.nvars();
        let d = self.base.params().len();
        for t in [a, b].into_iter().flatten() {
            if t.deg.len() != n || t.v.len() != d {
                return Err(Error::Usage("leading term from a different context".into()));
            }
        }
        Ok(self.lt_compare(a, b))
    }

    /// Build an element from Laurent coefficients, as produced by
    /// [`crate::grammar::parse_tate`].
    pub fn from_laurent_map(&self, map: &BTreeMap<Monomial, Laurent>) -> Result<TateElem<R::Elem>> {
        let mut out = self.zero();
        for (m, c) in map {
            if m.len() != self.ctx.nvars() {
                return Err(Error::Usage("monomial from a different context".into()));
            }
            self.add_term(&mut out, m.clone(), self.base.from_laurent(c)?);
        }
        Ok(out)
    }

    pub fn to_laurent_map(&self, f: &TateElem<R::Elem>) -> BTreeMap<Monomial, Laurent> {
        f.terms.iter().map(|(m, c)| (m.clone(), self.base.to_laurent(c))).collect()
    }

    /// Parse an element in the grammar of [`crate::grammar`].
    pub fn parse(&self, text: &str, p: u64) -> Result<TateElem<R::Elem>> {
        self.from_laurent_map(&crate::grammar::parse_tate(text, p, &self.ctx)?)
    }

    pub fn render(&self, f: &TateElem<R::Elem>) -> String {
        crate::grammar::render_tate(&self.ctx, &self.to_laurent_map(f))
    }

    /// Render an extended leading term as `p^a*S^b*X^m`.
    pub fn render_lt(&self, t: &Option<ExtendedLT>) -> String {
        let Some(t) = t else { return "0".into() };
        let mut parts = Vec::new();
        for (name, &e) in self.base.params().iter().zip(&t.v) {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        let mono = crate::grammar::render_monomial(&self.ctx, &t.deg);
        if !mono.is_empty() {
            parts.push(mono);
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use num_bigint::BigInt;

    fn ring() -> TateRing<SeriesRing> {
        TateRing::new(SeriesRing::new(3, 20, 20), OrderContext::lex(&["X0"]))
    }

    #[test]
    fn extended_valuation_example() {
        let t = ring();
        let b = &t.base;
        // p*S*X0 + p^3
        let f = t.add(
            &t.term(b.from_terms([(1, BigInt::from(3))]), vec![1]),
            &t.constant(b.constant(BigInt::from(27))),
        );
        assert_eq!(t.extended_valuation(&f), Some(vec![1, 1]));
        assert_eq!(t.extended_valuation(&t.zero()), None);
        assert_eq!(t.leading_term(&t.one()), Some(ExtendedLT { v: vec![0, 0], deg: vec![0] }));
    }

    #[test]
    fn lt_order() {
        let t = TateRing::new(SeriesRing::new(3, 20, 20), OrderContext::lex(&["X"]));
        let a = Some(ExtendedLT { v: vec![0, 0], deg: vec![2] });
        let b = Some(ExtendedLT { v: vec![1, 0], deg: vec![5] });
        assert_eq!(t.lt_compare(&a, &b), Ordering::Greater);
        assert_eq!(t.lt_compare(&None, &b), Ordering::Less);
        let c = Some(ExtendedLT { v: vec![0], deg: vec![5] });
        assert!(t.lt_compare_checked(&a, &c).is_err());
    }

    #[test]
    fn leading_term_prefers_largest_minimizer() {
        // X1^2 - (1 + X0) with lex X1 > X0: LT = X1^2 even though X0 has a unit
        // coefficient too.
        let t = TateRing::new(SeriesRing::new(3, 20, 20), OrderContext::lex(&["X1", "X0"]));
        let f = t.sub(&t.pow(&t.var(0), 2), &t.add(&t.one(), &t.var(1)));
        assert_eq!(t.leading_term(&f).unwrap().deg, vec![2, 0]);
        let _ = q(0);
    }

    #[test]
    fn order_spec_parsing() {
        let c = OrderContext::parse("lex:X1>X0").unwrap();
        assert_eq!(c.vars, vec!["X1", "X0"]);
        assert_eq!(c.spec(), "lex:X1>X0");
        assert!(OrderContext::parse("foo:X").is_err());
        assert!(OrderContext::parse("lex:X>X").is_err());
    }
}
