//! Fiber-level calculus for Gieseker degenerations of vector-bundle moduli
//! on a nodal curve: admissible bundles on chains of rational curves,
//! bf-morphisms, generalized isomorphisms (points of the compactified
//! general linear group), and the contraction/insertion correspondence
//! between the two sides, all over exact rational arithmetic.
//!
//! The crate is organized in the order the mathematics builds up:
//!
//! * [`exactlin`] — exact dense linear algebra with deterministic
//!   echelon-normalized bases, plus a small feasibility solver for linear
//!   matrix equations with invertibility side conditions.
//! * [`chainbundle`] — strictly standard bundles on chains of rational
//!   curves, their section spaces and the admissibility criteria.
//! * [`gvbd`] — Gieseker vector bundle data over a field: two chains
//!   attached at the two marked points plus an endpoint isomorphism.
//! * [`geniso`] — bf-morphisms and generalized isomorphisms, their
//!   validation, equivalence, and the associated Grassmannian quotient.
//! * [`correspondence`] — contraction and insertion steps and the full
//!   round trip between Gieseker data and generalized isomorphisms.

pub mod chainbundle;
pub mod correspondence;
pub mod error;
pub mod exactlin;
pub mod geniso;
pub mod gvbd;

pub use error::{Error, Result};
