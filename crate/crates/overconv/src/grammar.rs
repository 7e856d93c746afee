//! Text form of Laurent and Tate elements.
//!
//! An element is a sum of terms joined by `+` or `-`. A term is a product of
//! factors separated by `*`:
//!
//! * an integer `m`, optionally followed by `/n` or `/p^k`;
//! * `p` or `p^k` (the prime; `k` may be negative);
//! * `S` or `S^k` (`k` may be negative);
//! * a variable `X0`, `Y^3`, … (non-negative exponents only).
//!
//! ```
//! use overconv::grammar::parse_laurent;
//! let f = parse_laurent("p^2*S^-3 + 3 + S^5", 3).unwrap();
//! assert_eq!(f.to_string(), "9*S^-3 + 3 + S^5");
//! ```

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serializer;

use crate::coeff_series::Laurent;
use crate::error::{Error, Result};
use crate::rational::{self, Q};
use crate::tate::{Monomial, OrderContext};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let end = chars.get(j).map_or(s.len(), |x| x.0);
            out.push((pos, Tok::Num(s[pos..end].parse().unwrap())));
            i = j;
        } else if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].1.is_alphanumeric() || chars[j].1 == '_') {
                j += 1;
            }
            let end = chars.get(j).map_or(s.len(), |x| x.0);
            out.push((pos, Tok::Ident(s[pos..end].to_string())));
            i = j;
        } else if "+-*/^".contains(c) {
            out.push((pos, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse { pos, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

/// Whether `name` may be used as a Tate variable.
pub fn is_variable_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
        && name != "p"
        && name != "S"
}

/// One parsed term: coefficient, `S`-exponent and variable exponents.
type RawTerm = (Q, i64, BTreeMap<String, u32>);

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
    p: u64,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn eat_op(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<BigInt> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.i += 1;
                Ok(n)
            }
            _ => self.err("expected a number"),
        }
    }

    /// Optional `^k`, `k` a possibly negative integer.
    fn exponent(&mut self) -> Result<i64> {
        if !self.eat_op('^') {
            return Ok(1);
        }
        let neg = self.eat_op('-');
        let at = self.pos();
        let n = self.number()?;
        let n: i64 = i64::try_from(n)
            .map_err(|_| Error::Parse { pos: at, msg: "exponent too large".into() })?;
        Ok(if neg { -n } else { n })
    }

    fn term(&mut self) -> Result<RawTerm> {
        let mut coeff = Q::one();
        let mut s_exp = 0i64;
        let mut vars: BTreeMap<String, u32> = BTreeMap::new();
        loop {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.i += 1;
                    coeff *= Q::from_integer(n);
                }
                Some(Tok::Ident(name)) => {
                    let at = self.pos();
                    self.i += 1;
                    let k = self.exponent()?;
                    match name.as_str() {
                        "p" => coeff *= rational::pow_p_q(self.p, k),
                        "S" => s_exp += k,
                        _ if is_variable_name(&name) => {
                            if k < 0 || k > u32::MAX as i64 {
                                return Err(Error::Parse { pos: at, msg: format!("bad exponent on {name}") });
                            }
                            *vars.entry(name).or_default() += k as u32;
                        }
                        _ => return Err(Error::Parse { pos: at, msg: format!("unknown symbol {name}") }),
                    }
                }
                _ => return self.err("expected a factor"),
            }
            if self.eat_op('*') {
                continue;
            }
            if self.eat_op('/') {
                match self.peek().cloned() {
                    Some(Tok::Num(n)) if !n.is_zero() => {
                        self.i += 1;
                        coeff /= Q::from_integer(n);
                    }
                    Some(Tok::Ident(name)) if name == "p" => {
                        self.i += 1;
                        let k = self.exponent()?;
                        coeff *= rational::pow_p_q(self.p, -k);
                    }
                    _ => return self.err("expected a nonzero integer or a power of p after '/'"),
                }
                if self.eat_op('*') {
                    continue;
                }
            }
            return Ok((coeff, s_exp, vars));
        }
    }

    fn sum(&mut self) -> Result<Vec<RawTerm>> {
        let mut out = Vec::new();
        let mut neg = self.eat_op('-');
        if !neg {
            self.eat_op('+');
        }
        loop {
            let (c, n, v) = self.term()?;
            out.push((if neg { -c } else { c }, n, v));
            if self.eat_op('+') {
                neg = false;
            } else if self.eat_op('-') {
                neg = true;
            } else if self.peek().is_none() {
                return Ok(out);
            } else {
                return self.err("expected '+', '-' or '*'");
            }
        }
    }
}

fn parse_raw(text: &str, p: u64) -> Result<Vec<RawTerm>> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty input".into() });
    }
    let mut parser = Parser { toks, i: 0, end: text.len(), p };
    parser.sum()
}

/// Parse a Laurent element in `S` over `Q` (`p` names the prime).
pub fn parse_laurent(text: &str, p: u64) -> Result<Laurent> {
    let mut out = Laurent::zero();
    for (c, n, vars) in parse_raw(text, p)? {
        if let Some(name) = vars.keys().next() {
            return Err(Error::Parse { pos: 0, msg: format!("unexpected variable {name}") });
        }
        out.add_term(n, c);
    }
    Ok(out)
}

/// Parse a Tate element with Laurent coefficients; every variable must belong
/// to `ctx`.
pub fn parse_tate(text: &str, p: u64, ctx: &OrderContext) -> Result<BTreeMap<Monomial, Laurent>> {
    let mut out: BTreeMap<Monomial, Laurent> = BTreeMap::new();
    for (c, n, vars) in parse_raw(text, p)? {
        let mut m = ctx.one_monomial();
        for (name, k) in vars {
            let i = ctx
                .var_index(&name)
                .ok_or_else(|| Error::Parse { pos: 0, msg: format!("variable {name} not in {}", ctx.spec()) })?;
            m[i] += k;
        }
        let slot = out.entry(m.clone()).or_default();
        slot.add_term(n, c);
        if slot.is_zero() {
            out.remove(&m);
        }
    }
    Ok(out)
}

fn push_term(out: &mut String, c: &Q, factors: &str) {
    let neg = c.is_negative();
    let a = c.abs();
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if factors.is_empty() {
        out.push_str(&rational::fmt_q(&a));
    } else if a.is_one() {
        out.push_str(factors);
    } else {
        out.push_str(&rational::fmt_q(&a));
        out.push('*');
        out.push_str(factors);
    }
}

fn s_factor(n: i64) -> String {
    match n {
        0 => String::new(),
        1 => "S".into(),
        _ => format!("S^{n}"),
    }
}

/// Render a monomial as `X0^2*X1`; the empty string for `1`.
pub fn render_monomial(ctx: &OrderContext, m: &Monomial) -> String {
    ctx.vars
        .iter()
        .zip(m)
        .filter(|(_, &k)| k > 0)
        .map(|(v, &k)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// Render a Laurent element, exponents increasing.
pub fn render_laurent(f: &Laurent) -> String {
    let mut out = String::new();
    for (n, c) in f.terms() {
        push_term(&mut out, c, &s_factor(n));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Render a Tate element with Laurent coefficients: monomials in decreasing
/// order, each coefficient expanded term by term.
pub fn render_tate<'a>(ctx: &OrderContext, terms: impl IntoIterator<Item = (&'a Monomial, &'a Laurent)>) -> String {
    let mut v: Vec<_> = terms.into_iter().collect();
    v.sort_by(|a, b| ctx.cmp_monomials(b.0, a.0));
    let mut out = String::new();
    for (m, c) in v {
        let mono = render_monomial(ctx, m);
        for (n, a) in c.terms() {
            let f = [s_factor(n), mono.clone()].into_iter().filter(|x| !x.is_empty()).collect::<Vec<_>>().join("*");
            push_term(&mut out, a, &f);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Serialize a rational as the string `a/b`.
pub fn ser_q<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::fmt_q(x))
}

/// Serialize an optional rational; `None` (infinity) becomes `"inf"`.
pub fn ser_q_opt<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_str(&rational::fmt_q(x)),
        None => s.serialize_str("inf"),
    }
}

/// Serialize a list of rationals as strings.
pub fn ser_q_vec<S: Serializer>(x: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(rational::fmt_q))
}

/// Serialize a Laurent element in the element grammar.
pub fn ser_laurent<S: Serializer>(x: &Laurent, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&render_laurent(x))
}
