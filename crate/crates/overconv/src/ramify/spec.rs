//! Extension files and the fixture extensions.
//!
//! Element strings use the element grammar with `S` standing for the
//! uniformizer of the base and `X` for the generator. Over `Q_p` the base
//! uniformizer is `p` itself.

use serde::{Deserialize, Serialize};

use super::breaks::{breaks, BreakReport, RootDistanceData};
use super::field::{laurent_field, qp, DvField, SimpleExtension};
use super::herbrand::{herbrand_oracle, HerbrandReport};
use crate::coeff_series::{EisensteinPrime, FpLaurentRing, KappaField, Laurent};
use crate::error::{Error, Result};
use crate::grammar::{parse_laurent, parse_tate, render_laurent};
use crate::rational::{self, Q};
use crate::ring::{poly, Rationals, Ring};
use crate::tate::OrderContext;

/// The Galois action on the generator `θ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaloisSpec {
    /// Explicit images, polynomials in `X`.
    Images(Vec<String>),
    /// `θ ↦ (θ + 1)^k - 1` for each listed `k`.
    CyclotomicPowers(Vec<u64>),
    /// `θ ↦ θ + k` for each listed `k`.
    Translations(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExtSpec {
    /// An Eisenstein extension of `Q_p`, or of `Q_p[S]/(base)` for an
    /// Eisenstein polynomial `base`.
    Mixed {
        p: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<String>,
        minpoly: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        galois: Option<GaloisSpec>,
    },
    /// An Eisenstein extension of `F_p((S))`.
    Equal {
        p: u64,
        minpoly: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        galois: Option<GaloisSpec>,
    },
    /// `y^p - y = S^{-m}` over `F_p((S))`, with its translation action.
    ArtinSchreier { p: u64, m: i64 },
}

/// An extension with optional Galois data.
#[derive(Clone, Debug)]
pub struct ExtensionPresentation<F: DvField> {
    pub ext: SimpleExtension<F>,
    pub galois: Option<Vec<Vec<F::Elem>>>,
}

impl<F: DvField> ExtensionPresentation<F> {
    pub fn breaks(&self) -> Result<(RootDistanceData, BreakReport)> {
        breaks(&self.ext)
    }

    pub fn herbrand(&self) -> Result<HerbrandReport> {
        let images = self.galois.as_ref().ok_or_else(|| Error::Usage("the extension carries no Galois action".into()))?;
        herbrand_oracle(&self.ext, images)
    }
}

/// A presentation over either kind of base field.
#[derive(Clone, Debug)]
pub enum AnyExtension {
    Mixed(ExtensionPresentation<KappaField>),
    Equal(ExtensionPresentation<FpLaurentRing>),
}

impl AnyExtension {
    pub fn breaks(&self) -> Result<(RootDistanceData, BreakReport)> {
        match self {
            AnyExtension::Mixed(x) => x.breaks(),
            AnyExtension::Equal(x) => x.breaks(),
        }
    }

    pub fn herbrand(&self) -> Result<HerbrandReport> {
        match self {
            AnyExtension::Mixed(x) => x.herbrand(),
            AnyExtension::Equal(x) => x.herbrand(),
        }
    }

    pub fn has_galois(&self) -> bool {
        match self {
            AnyExtension::Mixed(x) => x.galois.is_some(),
            AnyExtension::Equal(x) => x.galois.is_some(),
        }
    }
}

fn parse_poly<F: DvField>(base: &F, text: &str) -> Result<Vec<F::Elem>> {
    let ctx = OrderContext::lex(&["X"]);
    let map = parse_tate(text, base.prime(), &ctx)?;
    let deg = map.keys().map(|m| m[0] as usize).max().unwrap_or(0);
    let mut out = vec![base.zero(); deg + 1];
    for (m, c) in &map {
        out[m[0] as usize] = base.from_laurent(c)?;
    }
    Ok(poly::normalize(base, out))
}

fn galois_images<F: DvField>(ext: &SimpleExtension<F>, spec: &GaloisSpec) -> Result<Vec<Vec<F::Elem>>> {
    let theta = ext.theta();
    Ok(match spec {
        GaloisSpec::Images(v) => {
            let mut out = Vec::new();
            for s in v {
                let coeffs = parse_poly(&ext.base, s)?;
                out.push(ext.apply(&coeffs, &theta));
            }
            out
        }
        GaloisSpec::CyclotomicPowers(ks) => {
            let shifted = ext.add(&theta, &ext.one());
            ks.iter().map(|&k| ext.sub(&ext.pow(&shifted, k), &ext.one())).collect()
        }
        GaloisSpec::Translations(ks) => ks.iter().map(|&k| ext.add(&theta, &ext.from_i64(k))).collect(),
    })
}

fn present<F: DvField>(ext: SimpleExtension<F>, galois: &Option<GaloisSpec>) -> Result<ExtensionPresentation<F>> {
    let galois = galois.as_ref().map(|g| galois_images(&ext, g)).transpose()?;
    Ok(ExtensionPresentation { ext, galois })
}

impl ExtSpec {
    pub fn p(&self) -> u64 {
        match self {
            ExtSpec::Mixed { p, .. } | ExtSpec::Equal { p, .. } | ExtSpec::ArtinSchreier { p, .. } => *p,
        }
    }

    pub fn build(&self) -> Result<AnyExtension> {
        if !rational::is_prime(self.p()) {
            return Err(Error::domain(format!("{} is not prime", self.p())));
        }
        match self {
            ExtSpec::Mixed { p, base, minpoly, galois } => {
                let k = match base {
                    None => qp(*p),
                    Some(b) => EisensteinPrime::from_laurent(*p, &parse_laurent(b, *p)?)?
                        .kappa()
                        .expect("a polynomial prime has a residue field"),
                };
                let g = parse_poly(&k, minpoly)?;
                Ok(AnyExtension::Mixed(present(SimpleExtension::eisenstein(k, g)?, galois)?))
            }
            ExtSpec::Equal { p, minpoly, galois } => {
                let k = laurent_field(*p);
                let g = parse_poly(&k, minpoly)?;
                Ok(AnyExtension::Equal(present(SimpleExtension::eisenstein(k, g)?, galois)?))
            }
            ExtSpec::ArtinSchreier { p, m } => {
                let ext = SimpleExtension::artin_schreier(laurent_field(*p), *m)?;
                let shifts = GaloisSpec::Translations((0..*p as i64).collect());
                Ok(AnyExtension::Equal(present(ext, &Some(shifts))?))
            }
        }
    }
}

fn render_x_poly(coeffs: &[Q]) -> String {
    let ctx = OrderContext::lex(&["X"]);
    let terms: Vec<(Vec<u32>, Laurent)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| *c != &Q::default())
        .map(|(i, c)| (vec![i as u32], Laurent::constant(c.clone())))
        .collect();
    crate::grammar::render_tate(&ctx, terms.iter().map(|(m, c)| (m, c)))
}

/// `Φ_{p^n}(X + 1)`, the minimal polynomial of `ζ_{p^n} - 1`.
pub fn cyclotomic_shifted(p: u64, n: u32) -> Vec<Q> {
    let step = (p as usize).pow(n - 1);
    let mut phi = vec![Q::default(); step * (p as usize - 1) + 1];
    for i in 0..p as usize {
        phi[i * step] = rational::q(1);
    }
    poly::taylor_shift(&Rationals, &phi, &rational::q(1))
}

/// `Q_p(√p)/Q_p` with its two automorphisms.
pub fn sqrt_p(p: u64) -> ExtSpec {
    ExtSpec::Mixed {
        p,
        base: None,
        minpoly: "X^2 - p".into(),
        galois: Some(GaloisSpec::Images(vec!["X".into(), "-X".into()])),
    }
}

/// `Q_p(ζ_p)/Q_p`, generated by `ζ_p - 1`.
pub fn cyclotomic(p: u64) -> ExtSpec {
    ExtSpec::Mixed {
        p,
        base: None,
        minpoly: render_x_poly(&cyclotomic_shifted(p, 1)),
        galois: Some(GaloisSpec::CyclotomicPowers((1..p).collect())),
    }
}

/// `Q_p(ζ_{p^{n+1}})/Q_p(ζ_{p^n})` for `n ≥ 1`, generated by `ζ_{p^{n+1}} - 1`
/// over the base uniformizer `ζ_{p^n} - 1`.
pub fn cyclotomic_step(p: u64, n: u32) -> ExtSpec {
    let base = render_laurent(&Laurent::from_coeffs(&cyclotomic_shifted(p, n)));
    // (X + 1)^p - 1 - S
    let mut g: Vec<Q> = (0..=p).map(|k| Q::from_integer(rational::binomial(p, k))).collect();
    g[0] = Q::default();
    let minpoly = format!("{} - S", render_x_poly(&g));
    let pn = p.pow(n);
    let powers = (0..p).map(|j| 1 + j * pn).collect();
    ExtSpec::Mixed { p, base: Some(base), minpoly, galois: Some(GaloisSpec::CyclotomicPowers(powers)) }
}

pub fn artin_schreier(p: u64, m: i64) -> ExtSpec {
    ExtSpec::ArtinSchreier { p, m }
}

/// The oracle-agreement fixture set.
pub fn fixture_set() -> Vec<(String, ExtSpec)> {
    let mut out = vec![
        ("Q_3(sqrt 3)/Q_3".to_string(), sqrt_p(3)),
        ("Q_5(sqrt 5)/Q_5".to_string(), sqrt_p(5)),
        ("Q_3(zeta_3)/Q_3".to_string(), cyclotomic(3)),
        ("Q_5(zeta_5)/Q_5".to_string(), cyclotomic(5)),
        ("Q_3(zeta_9)/Q_3(zeta_3)".to_string(), cyclotomic_step(3, 1)),
    ];
    for m in [1, 2, 4, 5] {
        out.push((format!("F_3((S)): y^3 - y = S^-{m}"), artin_schreier(3, m)));
    }
    out
}
