//! Classical lower and upper ramification numbering of a totally ramified
//! Galois extension, from explicit images of the generator.

use num_traits::{One, Zero};
use serde::Serialize;

use super::field::{DvField, SimpleExtension};
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HerbrandReport {
    pub order: usize,
    /// `i_G(σ) = v_L(σπ_L - π_L)` for each non-identity element.
    pub i_values: Vec<i64>,
    pub lower_breaks: Vec<i64>,
    #[serde(serialize_with = "crate::grammar::ser_q_vec")]
    pub upper_breaks: Vec<Q>,
    #[serde(serialize_with = "crate::grammar::ser_q")]
    pub b: Q,
    #[serde(serialize_with = "crate::grammar::ser_q")]
    pub b_log: Q,
    /// Every upper break is an integer.
    pub integral: bool,
}

/// Herbrand's `φ(u) = (1/|G|) Σ_σ min(i_G(σ), u + 1) - 1`, with `i_G(1) = ∞`.
pub fn herbrand_phi(order: usize, i_values: &[i64], u: &Q) -> Q {
    let u1 = u + Q::one();
    let sum = i_values.iter().map(|&i| Q::from_integer(i.into()).min(u1.clone())).fold(u1.clone(), |a, b| a + b);
    sum / Q::from_integer((order as i64).into()) - Q::one()
}

/// Ramification filtration of `L/K` from the images `σ(θ)` of the generator.
/// Every image is checked to be a root of the defining polynomial, the images
/// must be distinct and one of them must be `θ` itself.
pub fn herbrand_oracle<F: DvField>(ext: &SimpleExtension<F>, images: &[Vec<F::Elem>]) -> Result<HerbrandReport> {
    let d = ext.degree();
    if ext.e != d as i64 {
        return Err(Error::domain("the oracle needs a totally ramified extension"));
    }
    if images.len() != d {
        return Err(Error::domain(format!("a Galois action lists {d} images, got {}", images.len())));
    }
    let theta = ext.theta();
    for (k, img) in images.iter().enumerate() {
        if !ext.is_root(img) {
            return Err(Error::domain(format!("image {k} is not a root of the minimal polynomial")));
        }
        if images[..k].contains(img) {
            return Err(Error::domain(format!("image {k} repeats an earlier image")));
        }
    }
    if !images.contains(&theta) {
        return Err(Error::domain("the action must contain the identity"));
    }
    let pi = &ext.uniformizer;
    let mut i_values = Vec::new();
    for img in images.iter().filter(|img| **img != theta) {
        let diff = ext.sub(&ext.apply(pi, img), pi);
        let i = ext.val(&diff).ok_or_else(|| Error::domain("an automorphism fixes the uniformizer"))?;
        i_values.push(i);
    }
    let mut lower: Vec<i64> = i_values.iter().map(|i| i - 1).collect();
    lower.sort();
    lower.dedup();
    let upper: Vec<Q> = lower.iter().map(|&u| herbrand_phi(d, &i_values, &Q::from_integer(u.into()))).collect();
    let (b, b_log) = match upper.last() {
        Some(u) => (u + Q::one(), u.clone()),
        None => (Q::zero(), Q::zero()),
    };
    let integral = upper.iter().all(|u| u.is_integer());
    Ok(HerbrandReport { order: d, i_values, lower_breaks: lower, upper_breaks: upper, b, b_log, integral })
}
