//! Exact algebra of stable 3-forms in dimensions 6 and 7.
//!
//! The crate covers the pointwise theory of G₂, split-G₂, SL(3,ℂ) and
//! SL(3,ℝ)² 3-forms (orbit classification, induced bilinear forms, hyperplane
//! splittings and their extension criteria, calibrated 3-planes), a mod-2
//! characteristic-class calculus for flat bundles over tori together with
//! finite-field Grassmannian counts, and trigonometric-polynomial forms on tori.
//!
//! All arithmetic is exact: rationals, optionally adjoined with a single
//! square root (see [`Scalar`]).

pub mod error;
pub mod f2;
pub mod form;
pub mod linalg;
pub mod scalar;
pub mod stable;
pub mod torus;

pub use error::{Error, Result};
pub use form::{basis_vector, int_vector, Blade, KForm};
pub use linalg::{Endo, Matrix, Signature, SymBilinear};
pub use scalar::Scalar;
