//! Exact arithmetic for counting reductive representations of surface-like
//! groups into `GL_n(F_q)` and `SL_n(F_q)` (n = 2, 3), and the E-polynomials
//! of the corresponding complex character varieties.
//!
//! The same count is produced by three independent routes:
//!
//! - [`qpoly::closed_form_epoly`]: transcribed closed-form polynomials,
//! - [`strata`]: the counting pipeline (Frobenius character sums for
//!   `|Hom(Γ, G)|` plus a stratum-by-stratum excision of the non-irreducible
//!   locus via the orbit-stabiliser theorem),
//! - [`repclassify`]: a brute-force oracle that enumerates every solution of
//!   the defining relator, classifies each representation, and counts
//!   conjugation orbits of the reductive ones.
//!
//! Supporting layers: [`finitefield`] (exact `F_{q^d}` arithmetic, d ≤ 3),
//! [`matgroup`] (enumeration and conjugacy structure of small matrix groups),
//! [`chartables`] (GL2/SL2 character tables, Frobenius-Schur indicators, and
//! the GL3/SL3 degree catalogs via hook polynomials), [`homcount`]
//! (homomorphism counts), and [`qpoly`] (exact rational polynomial
//! arithmetic in q).

pub mod chartables;
pub mod error;
pub mod finitefield;
pub mod homcount;
pub mod matgroup;
pub mod qpoly;
pub mod repclassify;
pub mod strata;

pub use error::{Error, Result};
pub use homcount::GroupFamily;
pub use matgroup::{GroupSpec, Series};
pub use qpoly::QPoly;
