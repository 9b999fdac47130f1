//! Stable 3-forms in dimensions 6 and 7.
//!
//! * [`seven`]: the induced bilinear form of a 3-form on ℝ⁷, the G₂ / split-G₂
//!   classification, cross products, calibrated planes and the G₂ ↔ G̃₂ swap.
//! * [`six`]: the Hitchin endomorphism and invariant of a 3-form on ℝ⁶, the
//!   SL(3,ℂ) / SL(3,ℝ)² dichotomy, the induced (para-)complex structures and the
//!   signature criteria for extending a 6-dimensional form to a G̃₂ form.
//! * [`split`]: decomposition of a G̃₂ form along a hyperplane as `θ∧ω + ρ`.
//!
//! The metric a G₂-type form induces is only used through scale-invariant
//! predicates, so the unnormalized bilinear form `B_φ` stands in for it.

pub mod seven;
pub mod six;
pub mod split;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::KForm;
use crate::linalg::{Endo, Matrix, SymBilinear};
use crate::scalar::Scalar;

pub use seven::{
    classify7, cross, induced_bilinear7, is_calibrated, is_positively_calibrated, swap, OrientedPlane, Orbit7,
    Orbit7Kind,
};
pub use six::{
    cal_i, cal_j, check_extension, classify6, complex_structure, extension_admissible, hitchin_dual,
    hitchin_endo6, hitchin_lambda, para_complex_structure, para_eigenspaces, ExtensionCheck, Orbit6,
};
pub use split::{hyperplane_split, hyperplane_type, HyperplaneSplit, HyperplaneType};

/// `φ₀ = θ¹²³ + θ¹⁴⁵ + θ¹⁶⁷ + θ²⁴⁶ − θ²⁵⁷ − θ³⁴⁷ − θ³⁵⁶`
pub fn phi0() -> KForm {
    KForm::from_digits(
        7,
        &[("123", 1), ("145", 1), ("167", 1), ("246", 1), ("257", -1), ("347", -1), ("356", -1)],
    )
    .expect("valid form")
}

/// `φ̃₀ = θ¹²³ − θ¹⁴⁵ − θ¹⁶⁷ + θ²⁴⁶ − θ²⁵⁷ − θ³⁴⁷ − θ³⁵⁶`
pub fn phi0_tilde() -> KForm {
    KForm::from_digits(
        7,
        &[("123", 1), ("145", -1), ("167", -1), ("246", 1), ("257", -1), ("347", -1), ("356", -1)],
    )
    .expect("valid form")
}

/// `ψ̃₀ = θ⁴⁵⁶⁷ − θ²³⁶⁷ − θ²³⁴⁵ + θ¹³⁵⁷ − θ¹³⁴⁶ − θ¹²⁵⁶ − θ¹²⁴⁷`
pub fn psi0_tilde() -> KForm {
    KForm::from_digits(
        7,
        &[
            ("4567", 1),
            ("2367", -1),
            ("2345", -1),
            ("1357", 1),
            ("1346", -1),
            ("1256", -1),
            ("1247", -1),
        ],
    )
    .expect("valid form")
}

/// `ρ₋ = θ¹³⁵ − θ¹⁴⁶ − θ²³⁶ − θ²⁴⁵`, the real part of `(θ¹+iθ²)∧(θ³+iθ⁴)∧(θ⁵+iθ⁶)`.
pub fn rho_minus() -> KForm {
    KForm::from_digits(6, &[("135", 1), ("146", -1), ("236", -1), ("245", -1)]).expect("valid form")
}

/// `ρ₊ = θ¹²³ + θ⁴⁵⁶`
pub fn rho_plus() -> KForm {
    KForm::from_digits(6, &[("123", 1), ("456", 1)]).expect("valid form")
}

/// `g̃₀ = diag(1, 1, 1, −1, −1, −1, −1)`
pub fn g0_tilde() -> SymBilinear {
    SymBilinear::diagonal(&[1, 1, 1, -1, -1, -1, -1])
}

/// The para-complex structure `I₀ = diag(1, 1, 1, −1, −1, −1)`.
pub fn i0() -> Endo {
    Endo::new(Matrix::diagonal(&[1, 1, 1, -1, -1, -1].map(Scalar::from))).expect("square")
}

/// The standard volume form `θ^{1…n}`.
pub fn standard_volume(n: usize) -> KForm {
    KForm::from_terms(n, n, [((1..=n).collect::<Vec<_>>(), Scalar::one())]).expect("valid form")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StandardName {
    Phi0,
    Phi0Tilde,
    Psi0Tilde,
    RhoMinus,
    RhoPlus,
    G0Tilde,
    I0,
}

impl StandardName {
    pub const ALL: [StandardName; 7] = [
        StandardName::Phi0,
        StandardName::Phi0Tilde,
        StandardName::Psi0Tilde,
        StandardName::RhoMinus,
        StandardName::RhoPlus,
        StandardName::G0Tilde,
        StandardName::I0,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StandardName::Phi0 => "phi0",
            StandardName::Phi0Tilde => "phi0_tilde",
            StandardName::Psi0Tilde => "psi0_tilde",
            StandardName::RhoMinus => "rho_minus",
            StandardName::RhoPlus => "rho_plus",
            StandardName::G0Tilde => "g0_tilde",
            StandardName::I0 => "i0",
        }
    }
}

impl fmt::Display for StandardName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StandardName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StandardName::ALL
            .into_iter()
            .find(|n| n.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// One of the displayed standard objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardObject {
    Form(KForm),
    Bilinear(SymBilinear),
    Endo(Endo),
}

pub fn standard_form(name: StandardName) -> StandardObject {
    match name {
        StandardName::Phi0 => StandardObject::Form(phi0()),
        StandardName::Phi0Tilde => StandardObject::Form(phi0_tilde()),
        StandardName::Psi0Tilde => StandardObject::Form(psi0_tilde()),
        StandardName::RhoMinus => StandardObject::Form(rho_minus()),
        StandardName::RhoPlus => StandardObject::Form(rho_plus()),
        StandardName::G0Tilde => StandardObject::Bilinear(g0_tilde()),
        StandardName::I0 => StandardObject::Endo(i0()),
    }
}

pub(crate) fn require_shape(form: &KForm, dim: usize, degree: usize) -> Result<()> {
    if form.dim() != dim || form.degree() != degree {
        return Err(Error::UnsupportedShape(format!(
            "expected a {degree}-form on R^{dim}, got a {}-form on R^{}",
            form.degree(),
            form.dim()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi0_tilde_display() {
        let coeffs: Vec<(Vec<usize>, i64)> = phi0_tilde()
            .terms()
            .map(|(b, c)| (b.indices().collect(), c.to_f64() as i64))
            .collect();
        let expected = [
            (vec![1, 2, 3], 1),
            (vec![1, 4, 5], -1),
            (vec![1, 6, 7], -1),
            (vec![2, 4, 6], 1),
            (vec![2, 5, 7], -1),
            (vec![3, 4, 7], -1),
            (vec![3, 5, 6], -1),
        ];
        assert_eq!(coeffs, expected);
    }

    #[test]
    fn standard_names_parse() {
        for n in StandardName::ALL {
            assert_eq!(n.as_str().parse::<StandardName>().unwrap(), n);
        }
        assert_eq!("phi1".parse::<StandardName>(), Err(Error::UnknownName("phi1".into())));
        assert_eq!(standard_form(StandardName::I0), StandardObject::Endo(i0()));
        assert_eq!(
            standard_form(StandardName::G0Tilde),
            StandardObject::Bilinear(SymBilinear::diagonal(&[1, 1, 1, -1, -1, -1, -1]))
        );
    }
}
