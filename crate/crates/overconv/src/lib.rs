//! Exact computation on overconvergent power-series rings.
//!
//! The crate covers Gauss and partial valuations on `O((S))^{†,r}`, Newton
//! polygons and slope factorization, extended leading terms and division in
//! Tate algebras `R⟨X⟩`, idempotent lifting across the fibers of a flat family,
//! ramification breaks of monogenic extensions and a finite-level field of
//! norms experiment.
//!
//! All coefficients are exact rationals; precision appears only as explicit
//! targets of iterative algorithms, which report what they achieved.

pub mod coeff_series;
pub mod components;
pub mod error;
pub mod groebner;
pub mod grammar;
pub mod linalg;
pub mod newton;
pub mod norms;
pub mod ramify;
pub mod rational;
pub mod ring;
pub mod tate;

pub use error::{Error, Result};
pub use rational::Q;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/valuations.md")]
    mod valuations {}
    #[doc = include_str!("../../../book/src/newton.md")]
    mod newton {}
    #[doc = include_str!("../../../book/src/division.md")]
    mod division {}
    #[doc = include_str!("../../../book/src/components.md")]
    mod components {}
    #[doc = include_str!("../../../book/src/ramification.md")]
    mod ramification {}
    #[doc = include_str!("../../../book/src/norms.md")]
    mod norms {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
