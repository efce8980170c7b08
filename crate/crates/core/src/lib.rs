//! Exact computer algebra for enumerative geometry over finite fields.
//!
//! The crate builds zero-dimensional schemes attached to plane curves
//! (inflection flags, tangency loci, theta-hyperplane images), measures them
//! exactly (degree, geometric points, local multiplicities), and compares the
//! outcome against closed-form predictions.  Everything is computed over
//! `GF(p^k)` with exact arithmetic; there is no floating point anywhere.
//!
//! Layering, from the bottom up:
//!
//! * [`ff`] — prime fields and their extensions, Frobenius, embeddings.
//! * [`unipoly`] — dense univariate polynomials: gcd, squarefree
//!   decomposition, distinct/equal-degree factorization, roots.
//! * [`poly`] — sparse multivariate polynomials, monomial orders, Hasse
//!   derivatives, substitution, (de)homogenization.
//! * [`groebner`] — Buchberger engine: reduction, elimination, quotient,
//!   saturation, staircases.
//! * [`zerodim`] — zero-dimensional ideals: radicals, point solving over
//!   splitting extensions, local multiplicities, scheme reports.
//! * [`enumgeo`] — the geometric constructions (inflection flags, Gauss
//!   images, tangency and theta schemes) as ideal builders.
//! * [`formulas`] — exact big-integer formulas and congruences.
//! * [`cli`] — experiment drivers shared by the command-line binary.

pub mod cli;
pub mod enumgeo;
mod error;
pub mod ff;
pub mod formulas;
pub mod groebner;
pub mod linalg;
pub mod poly;
pub mod unipoly;
pub mod zerodim;

pub use error::{Error, Result};
