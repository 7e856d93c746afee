//! Root distances and the non-log and log breaks of a monogenic extension.
//!
//! For a threshold `a`, the space `as^a` of the one-variable presentation is
//! the disc `{x : v(g(x)) ≥ a}`, which splits into the discs of radius
//! `ρ(a)` around the roots, where `ρ + Σ_j min(ρ, d_j) = a`. Two roots share a
//! component iff their distance is at least `ρ(a)`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::field::{DvField, SimpleExtension};
use crate::error::{Error, Result};
use crate::newton::lower_hull;
use crate::rational::{self, Q};
use crate::ring::{poly, Ring};

/// Valuations `v_K(x - x_j)` from the generator `x` to its conjugates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootDistanceData {
    pub degree: usize,
    /// Ascending, with multiplicity.
    #[serde(serialize_with = "crate::grammar::ser_q_vec")]
    pub distances: Vec<Q>,
    /// `v_K(g'(x))`.
    #[serde(serialize_with = "crate::grammar::ser_q")]
    pub different: Q,
}

/// Number of components of `as^a` for `a` above a threshold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentStep {
    #[serde(serialize_with = "crate::grammar::ser_q")]
    pub above: Q,
    pub components: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BreakReport {
    pub degree: usize,
    #[serde(serialize_with = "crate::grammar::ser_q")]
    pub b: Q,
    #[serde(serialize_with = "crate::grammar::ser_q")]
    pub b_log: Q,
    /// Step function `a ↦ #components`, constant on `(above_k, above_{k+1}]`.
    pub steps: Vec<ComponentStep>,
}

/// Distances from the generator of an Eisenstein presentation to its
/// conjugates, read off the Newton polygon of `g(X + x)/X` over `L`.
pub fn root_distances<F: DvField>(ext: &SimpleExtension<F>) -> Result<RootDistanceData> {
    let ext = ext.to_eisenstein()?;
    let d = ext.degree();
    if d == 1 {
        return Ok(RootDistanceData { degree: 1, distances: Vec::new(), different: Q::zero() });
    }
    let coeffs: Vec<Vec<F::Elem>> = ext.minpoly.iter().map(|c| ext.embed(c.clone())).collect();
    let shifted = poly::taylor_shift(&ext, &coeffs, &ext.theta());
    if !ext.is_zero(&shifted[0]) {
        return Err(Error::domain("the generator is not a root of its minimal polynomial"));
    }
    let g = &shifted[1..];
    let Some(v0) = ext.val(&g[0]) else {
        return Err(Error::precision("the minimal polynomial is inseparable", "inf"));
    };
    let pts: Vec<(i64, i64)> = g.iter().enumerate().filter_map(|(k, c)| ext.val(c).map(|v| (k as i64, v))).collect();
    let hull = lower_hull(pts);
    let e = ext.e;
    let mut distances = Vec::with_capacity(d - 1);
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let len = b.0 - a.0;
        let dist = Q::new((a.1 - b.1).into(), (len * e).into());
        if !dist.is_positive() {
            return Err(Error::domain("a conjugate is not closer than the unit disc"));
        }
        distances.extend(std::iter::repeat_n(dist, len as usize));
    }
    distances.sort();
    let different = Q::new(v0.into(), e.into());
    let sum = distances.iter().fold(Q::zero(), |a, b| a + b);
    if sum != different {
        return Err(Error::domain("root distances do not sum to the different"));
    }
    Ok(RootDistanceData { degree: d, distances, different })
}

fn clipped(ds: &[Q], rho: &Q) -> Q {
    ds.iter().map(|d| d.clone().min(rho.clone())).fold(rho.clone(), |a, b| a + b)
}

/// The radius `ρ(a)` solving `ρ + Σ_j min(ρ, d_j) = a`.
pub fn radius(rd: &RootDistanceData, a: &Q) -> Q {
    // The left side is piecewise linear with slope 1 + #{d_j ≥ ρ}.
    let mut lo = Q::zero();
    let mut below = Q::zero();
    for (k, d) in rd.distances.iter().enumerate() {
        let at_d = clipped(&rd.distances, d);
        if a <= &at_d {
            let slope = Q::from_integer((rd.distances.len() - k + 1).into());
            let base = clipped(&rd.distances, &lo);
            return &lo + (a - base) / slope;
        }
        lo = d.clone();
        below += d;
    }
    a - below
}

/// Components of `as^a`: `e` divided by the size of the cluster of roots
/// within distance `ρ(a)` of the generator. For Galois extensions every root
/// sees the same cluster sizes, so this is the exact count.
pub fn components(rd: &RootDistanceData, a: &Q) -> usize {
    if !a.is_positive() {
        return 1;
    }
    let rho = radius(rd, a);
    let cluster = 1 + rd.distances.iter().filter(|d| **d >= rho).count();
    rd.degree / cluster
}

/// Breaks from root distances: `b = max_d (d + Σ_j min(d, d_j))` and
/// `b_log = b - 1`, the log break using threshold `a + 1` on `p_0`.
pub fn as_breaks(rd: &RootDistanceData) -> BreakReport {
    let mut steps = vec![ComponentStep { above: Q::zero(), components: 1 }];
    let mut distinct = rd.distances.clone();
    distinct.dedup();
    for d in &distinct {
        let t = clipped(&rd.distances, d);
        let cluster = 1 + rd.distances.iter().filter(|x| *x > d).count();
        steps.push(ComponentStep { above: t, components: rd.degree / cluster });
    }
    let b = steps.last().map(|s| s.above.clone()).unwrap_or_default();
    let b_log = if rd.degree == 1 { Q::zero() } else { &b - Q::from_integer(1.into()) };
    BreakReport { degree: rd.degree, b, b_log, steps }
}

/// [`root_distances`] followed by [`as_breaks`].
pub fn breaks<F: DvField>(ext: &SimpleExtension<F>) -> Result<(RootDistanceData, BreakReport)> {
    let rd = root_distances(ext)?;
    let br = as_breaks(&rd);
    Ok((rd, br))
}

impl BreakReport {
    /// `(b, b_log)` as strings.
    pub fn pair(&self) -> (String, String) {
        (rational::fmt_q(&self.b), rational::fmt_q(&self.b_log))
    }
}
