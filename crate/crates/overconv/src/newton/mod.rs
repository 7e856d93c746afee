//! Newton polygons of Laurent elements, slopes, multiplicities and purity.
//!
//! The polygon of `f` on the window `r` is the lower convex hull of the
//! points `(v^{≤n}(f), n)`, with segments of slope below `-r` removed on the
//! left and segments of non-negative slope removed on the right. A segment of
//! hull slope `σ` is reported as the slope `s = -σ ∈ (0, r]`, together with its
//! multiplicity, the drop in the `y` coordinate along the segment.

mod factor;

use num_traits::Signed;
use serde::Serialize;

use crate::coeff_series::{partial_valuation, Laurent};
use crate::error::{Error, Result};
use crate::rational::{self, Q};

pub use factor::{hensel_split, same_up_to_unit, slope_factor, SlopeFactorization};

/// One segment of a Newton polygon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    #[serde(serialize_with = "crate::grammar::ser_q")]
    pub slope: Q,
    pub mult: i64,
}

/// Newton polygon of an element on the window `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    /// Endpoints of the retained segments, left to right.
    pub vertices: Vec<(i64, i64)>,
    #[serde(serialize_with = "crate::grammar::ser_q")]
    pub r: Q,
    /// Retained segments, slopes strictly decreasing.
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// Multiplicity of the slope `s` (zero if `s` is not a slope).
    pub fn mult(&self, s: &Q) -> i64 {
        self.segments.iter().find(|g| &g.slope == s).map_or(0, |g| g.mult)
    }
}

/// Lower convex hull of points sorted by `x` (ties broken by smaller `y`).
/// Collinear interior points are dropped.
pub(crate) fn lower_hull(mut pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    pts.sort();
    pts.dedup_by_key(|p| p.0);
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // Remove b unless it lies strictly below the segment a-p.
            let cross = (b.0 - a.0) as i128 * (p.1 - a.1) as i128 - (b.1 - a.1) as i128 * (p.0 - a.0) as i128;
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// Keep hull edges whose slope `σ` satisfies `-r ≤ σ < 0` and turn them into
/// segments `(s = -σ, Δy)`.
fn retained(hull: &[(i64, i64)], r: &Q) -> (Vec<(i64, i64)>, Vec<Segment>) {
    let mut verts: Vec<(i64, i64)> = Vec::new();
    let mut segs = Vec::new();
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let dy = a.1 - b.1;
        let sigma = Q::new((b.1 - a.1).into(), (b.0 - a.0).into());
        let s = -sigma;
        if s.is_positive() && &s <= r {
            if verts.last() != Some(&a) {
                verts.push(a);
            }
            verts.push(b);
            segs.push(Segment { slope: s, mult: dy });
        }
    }
    (verts, segs)
}

/// Points `(v^{≤n}(f), n)` for every `n` at which the partial valuation can
/// change.
fn partial_points(f: &Laurent, p: u64) -> Vec<(i64, i64)> {
    let vals: Vec<i64> = f.terms().map(|(_, c)| rational::vp(c, p).unwrap()).collect();
    let lo = *vals.iter().min().unwrap();
    let hi = *vals.iter().max().unwrap();
    (lo..=hi).filter_map(|n| partial_valuation(f, p, n).map(|x| (x, n))).collect()
}

/// Classical points `(n, v_p(a_n))`.
fn classical_points(f: &Laurent, p: u64) -> Vec<(i64, i64)> {
    f.terms().map(|(n, c)| (n, rational::vp(c, p).unwrap())).collect()
}

/// Newton polygon of `f` on the window `r`, cross-checked against the
/// classical recipe on the points `(n, v_p(a_n))`.
pub fn newton_polygon(f: &Laurent, p: u64, r: &Q) -> Result<NewtonPolygon> {
    if f.is_zero() {
        return Err(Error::domain("Newton polygon of zero"));
    }
    if !r.is_positive() {
        return Err(Error::domain("Newton polygon needs r > 0"));
    }
    let (vertices, segments) = retained(&lower_hull(partial_points(f, p)), r);
    let (_, classical) = retained(&lower_hull(classical_points(f, p)), r);
    if classical != segments {
        return Err(Error::domain("Newton polygon recipes disagree"));
    }
    Ok(NewtonPolygon { vertices, r: r.clone(), segments })
}

/// The slope of `f` when `f` is pure (exactly one slope).
pub fn is_pure(f: &Laurent, p: u64, r: &Q) -> Result<Option<Q>> {
    let np = newton_polygon(f, p, r)?;
    Ok(match np.segments.as_slice() {
        [only] => Some(only.slope.clone()),
        _ => None,
    })
}

/// Whether `f` is a unit of `O((S))^{†,r}`, i.e. has no slopes.
pub fn is_unit(f: &Laurent, p: u64, r: &Q) -> Result<bool> {
    Ok(newton_polygon(f, p, r)?.segments.is_empty())
}

/// All hull edges of the classical polygon of a polynomial, as
/// `(left x, right x, root valuation)`, left to right.
pub(crate) fn classical_edges(f: &Laurent, p: u64) -> Vec<(i64, i64, Q)> {
    let hull = lower_hull(classical_points(f, p));
    hull.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            (a.0, b.0, Q::new((a.1 - b.1).into(), (b.0 - a.0).into()))
        })
        .collect()
}
