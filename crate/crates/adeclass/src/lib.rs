//! Exact ADE classification of hypersurface singularities.
//!
//! Given f in a truncated power-series ring κ[[x₁..xₙ]]/m^{N+1} over ℚ or
//! 𝔽ₚ (p odd), [`classify::classify`] decides which generalized ADE normal
//! form f can be written as, and returns a certificate: a coordinate change
//! φ and a unit u with `u · H(φ) ≡ f mod m^{N+1}`, where H is the normal
//! form. Certificates are checked by plain substitution, independently of
//! how they were found.
//!
//! The [`mfact`] module builds and verifies matrix factorizations of the
//! same normal forms, including the Knörrer ♯/♭ block constructions and
//! rootable factorizations (b𝟙 − φ, b𝟙 + φ).
//!
//! Layout:
//!
//! - [`field`]: ℚ and 𝔽ₚ arithmetic, modular roots.
//! - [`series`]: truncated multivariate series.
//! - [`chart`]: coordinate changes (apply, compose, inverse).
//! - [`split`]: Gram matrices, diagonalization, the splitting lemma.
//! - [`classify`]: the classifier and certificates.
//! - [`mfact`]: matrix factorizations.
//! - [`cli`]: polynomial parsing/rendering and the JSON front end.

pub mod chart;
pub mod classify;
pub mod cli;
pub mod field;
pub mod linalg;
pub mod mfact;
pub mod series;
pub mod split;

pub use chart::CoordinateChange;
pub use classify::{classify, classify_over, verify_certificate, Certificate, Classification, Verdict};
pub use field::{Elem, FieldSpec};
pub use series::{Monomial, Order, Series};
