//! Exact computations on the PGL(2)-orbit closures X(p₁,…,p_r) ⊂ (ℙ¹)^r.
//!
//! * [`projline`]: points, Möbius maps and cross-ratios over ℚ and F_q.
//! * [`torus`]: limits under `λ(t) = diag(t, t⁻¹)`, fixed points and strata.
//! * [`embedding`]: membership, the determinantal equations of the affine
//!   slice, point counts over F_q, isomorphism search and binary forms.
//! * [`cycles`]: divisor and curve classes, the pairing, boundary and
//!   canonical classes, and simplicial cones.

pub mod cycles;
pub mod embedding;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod projline;
pub mod torus;

pub use error::{Error, Result};
