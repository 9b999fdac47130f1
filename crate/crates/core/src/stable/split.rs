use std::fmt;

use serde::{Deserialize, Serialize};

use super::seven::{require_orbit, Orbit7Kind};
use crate::error::{Error, Result};
use crate::form::KForm;
use crate::linalg::{Matrix, SymBilinear};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HyperplaneType {
    Spacelike,
    Timelike,
    Null,
}

impl fmt::Display for HyperplaneType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HyperplaneType::Spacelike => "Spacelike",
            HyperplaneType::Timelike => "Timelike",
            HyperplaneType::Null => "Null",
        })
    }
}

/// `θ∧ω + ρ` decomposition of a G̃₂ form along `ker θ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperplaneSplit {
    /// The covector, rescaled so that `θ(u₀) = 1`.
    pub theta: Vec<Scalar>,
    pub kind: HyperplaneType,
    /// `u₀`, spanning the `B_φ`-orthogonal complement of `ker θ`.
    pub normal: Vec<Scalar>,
    /// Columns form an oriented basis of `ker θ`; `[u₀ | basis]` is positive.
    pub basis: Matrix,
    /// `u₀⌟φ` pulled back to `ker θ`.
    pub omega: KForm,
    /// `φ` pulled back to `ker θ`.
    pub rho: KForm,
}

impl HyperplaneSplit {
    /// Re-embeds `(ω, ρ)` along the splitting `ℝ⁷ = ⟨u₀⟩ ⊕ ker θ` and returns `θ∧ω + ρ`.
    pub fn reconstruct(&self) -> Result<KForm> {
        let mut cols = vec![self.normal.clone()];
        cols.extend((0..6).map(|j| self.basis.column(j)));
        let inv = Matrix::from_columns(&cols)?.inverse()?;
        let r = inv.select(&(1..7).collect::<Vec<_>>(), &(0..7).collect::<Vec<_>>());
        let theta = KForm::covector(&self.theta)?;
        theta.wedge(&self.omega.pullback_by(&r)?)?.add(&self.rho.pullback_by(&r)?)
    }
}

fn dual_data(b: &SymBilinear, theta: &[Scalar]) -> Result<(Vec<Scalar>, Scalar)> {
    if theta.len() != 7 {
        return Err(Error::DimensionMismatch { expected: 7, found: theta.len() });
    }
    if theta.iter().all(Scalar::is_zero) {
        return Err(Error::InvalidParameter("zero covector".into()));
    }
    // B(u, ·) = θ for u = B⁻¹θ, and B(u, u) = θ(u)
    let u = b.matrix().solve(theta)?;
    let norm = theta.iter().zip(&u).fold(Scalar::zero(), |acc, (t, x)| acc + t * x);
    Ok((u, norm))
}

fn kind_of(norm: &Scalar) -> HyperplaneType {
    match norm.signum() {
        1 => HyperplaneType::Spacelike,
        -1 => HyperplaneType::Timelike,
        _ => HyperplaneType::Null,
    }
}

/// Type of `ker θ` from the sign of `B_φ` on its orthogonal complement.
pub fn hyperplane_type(phi: &KForm, theta: &[Scalar]) -> Result<HyperplaneType> {
    let (_, b) = require_orbit(phi, Orbit7Kind::G2Tilde, false)?;
    let (_, norm) = dual_data(&b, theta)?;
    Ok(kind_of(&norm))
}

pub fn hyperplane_split(phi: &KForm, theta: &[Scalar]) -> Result<HyperplaneSplit> {
    let (_, b) = require_orbit(phi, Orbit7Kind::G2Tilde, false)?;
    let (u, norm) = dual_data(&b, theta)?;
    let kind = kind_of(&norm);
    if kind == HyperplaneType::Null {
        return Err(Error::NullHyperplane);
    }
    let inv_norm = norm.checked_inv()?;
    let u0: Vec<Scalar> = u.iter().map(|x| x * &inv_norm).collect();
    let theta: Vec<Scalar> = theta.to_vec();
    let theta_u0 = theta.iter().zip(&u0).fold(Scalar::zero(), |acc, (t, x)| acc + t * x);
    debug_assert_eq!(theta_u0, Scalar::one());

    // b_j = e_j − θ_j·u₀ for every j except one pivot where u₀ is nonzero
    let pivot = u0.iter().position(|x| !x.is_zero()).expect("nonzero normal");
    let mut cols: Vec<Vec<Scalar>> = (0..7)
        .filter(|&j| j != pivot)
        .map(|j| {
            (0..7)
                .map(|i| {
                    let e = if i == j { Scalar::one() } else { Scalar::zero() };
                    e - &u0[i] * &theta[j]
                })
                .collect()
        })
        .collect();
    let mut frame = vec![u0.clone()];
    frame.extend(cols.iter().cloned());
    if Matrix::from_columns(&frame)?.det()?.is_negative() {
        cols[0] = cols[0].iter().map(|x| -x).collect();
    }
    let basis = Matrix::from_columns(&cols)?;
    let omega = phi.contract(&u0)?.pullback_by(&basis)?;
    let rho = phi.pullback_by(&basis)?;
    Ok(HyperplaneSplit { theta, kind, normal: u0, basis, omega, rho })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{basis_vector, int_vector};
    use crate::stable::{check_extension, classify6, phi0, phi0_tilde, Orbit6};

    #[test]
    fn timelike_split_of_phi0_tilde() {
        let s = hyperplane_split(&phi0_tilde(), &basis_vector(7, 7)).unwrap();
        assert_eq!(s.kind, HyperplaneType::Timelike);
        assert_eq!(s.omega, KForm::from_digits(6, &[("16", -1), ("25", -1), ("34", -1)]).unwrap());
        assert_eq!(
            s.rho,
            KForm::from_digits(6, &[("123", 1), ("145", -1), ("246", 1), ("356", -1)]).unwrap()
        );
        assert_eq!(classify6(&s.rho).unwrap(), Orbit6::SL3R2);
        assert!(check_extension(&s.rho, &s.omega).unwrap().admissible);
        assert_eq!(s.reconstruct().unwrap(), phi0_tilde());
    }

    #[test]
    fn spacelike_split_of_phi0_tilde() {
        let s = hyperplane_split(&phi0_tilde(), &basis_vector(7, 1)).unwrap();
        assert_eq!(s.kind, HyperplaneType::Spacelike);
        assert_eq!(classify6(&s.rho).unwrap(), Orbit6::SL3C);
        assert!(check_extension(&s.rho, &s.omega).unwrap().admissible);
        assert_eq!(s.reconstruct().unwrap(), phi0_tilde());
    }

    #[test]
    fn null_hyperplane() {
        let theta = int_vector(&[1, 0, 0, 1, 0, 0, 0]);
        assert_eq!(hyperplane_type(&phi0_tilde(), &theta).unwrap(), HyperplaneType::Null);
        assert_eq!(hyperplane_split(&phi0_tilde(), &theta), Err(Error::NullHyperplane));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            hyperplane_split(&phi0_tilde(), &int_vector(&[0; 7])),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(hyperplane_split(&phi0(), &basis_vector(7, 1)), Err(Error::WrongOrbit { .. })));
    }

    #[test]
    fn rescaling_theta_rescales_omega_inversely() {
        let s1 = hyperplane_split(&phi0_tilde(), &basis_vector(7, 7)).unwrap();
        let s3 = hyperplane_split(&phi0_tilde(), &int_vector(&[0, 0, 0, 0, 0, 0, 3])).unwrap();
        assert_eq!(s3.omega, s1.omega.scale(&Scalar::from_ratio(1, 3)));
        assert_eq!(s3.reconstruct().unwrap(), phi0_tilde());
    }

    #[test]
    fn oblique_covector_round_trip() {
        let theta = int_vector(&[2, -1, 0, 3, 0, 1, 5]);
        let s = hyperplane_split(&phi0_tilde(), &theta).unwrap();
        assert_eq!(s.reconstruct().unwrap(), phi0_tilde());
    }
}
