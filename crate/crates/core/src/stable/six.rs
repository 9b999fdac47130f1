use std::fmt;

use serde::{Deserialize, Serialize};

use super::require_shape;
use super::seven::OrientedPlane;
use crate::error::{Error, Result};
use crate::form::{basis_vector, Blade, KForm};
use crate::linalg::{Endo, Matrix, Signature, SymBilinear};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orbit6 {
    SL3C,
    SL3R2,
    Degenerate,
}

impl fmt::Display for Orbit6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orbit6::SL3C => "SL3C",
            Orbit6::SL3R2 => "SL3R2",
            Orbit6::Degenerate => "Degenerate",
        })
    }
}

/// Hitchin endomorphism: `K(u)⌟θ^{1…6} = (u⌟ρ)∧ρ`.
///
/// With this identification `K_{ρ₊} = I₀` and `K² = λ·Id`.
pub fn hitchin_endo6(rho: &KForm) -> Result<Endo> {
    require_shape(rho, 6, 3)?;
    let top = Blade::top(6);
    let mut m = Matrix::zeros(6, 6);
    for i in 1..=6 {
        let five = rho.contract(&basis_vector(6, i))?.wedge(rho)?;
        // e_j⌟θ^{1…6} = (−1)^{j−1} θ^{1…ĵ…6}
        for j in 1..=6 {
            let c = five.coeff(top.remove(j));
            m[(j - 1, i - 1)] = if j % 2 == 0 { -c } else { c };
        }
    }
    Endo::new(m)
}

/// `λ(ρ) = tr(K_ρ²) / 6`.
pub fn hitchin_lambda(rho: &KForm) -> Result<Scalar> {
    let k = hitchin_endo6(rho)?;
    Ok(&k.compose(&k)?.trace() * &Scalar::from_ratio(1, 6))
}

pub fn classify6(rho: &KForm) -> Result<Orbit6> {
    Ok(match hitchin_lambda(rho)?.signum() {
        -1 => Orbit6::SL3C,
        1 => Orbit6::SL3R2,
        _ => Orbit6::Degenerate,
    })
}

fn wrong_orbit(expected: &'static str, found: Orbit6) -> Error {
    Error::WrongOrbit { expected, found: found.to_string() }
}

/// `(K_ρ, λ)` for an SL(3,ℂ) form.
fn complex_data(rho: &KForm) -> Result<(Endo, Scalar)> {
    let k = hitchin_endo6(rho)?;
    let lambda = &k.compose(&k)?.trace() * &Scalar::from_ratio(1, 6);
    if !lambda.is_negative() {
        return Err(wrong_orbit("SL3C", orbit_of(&lambda)));
    }
    Ok((k, lambda))
}

fn para_data(rho: &KForm) -> Result<(Endo, Scalar)> {
    let k = hitchin_endo6(rho)?;
    let lambda = &k.compose(&k)?.trace() * &Scalar::from_ratio(1, 6);
    if !lambda.is_positive() {
        return Err(wrong_orbit("SL3R2", orbit_of(&lambda)));
    }
    Ok((k, lambda))
}

fn orbit_of(lambda: &Scalar) -> Orbit6 {
    match lambda.signum() {
        -1 => Orbit6::SL3C,
        1 => Orbit6::SL3R2,
        _ => Orbit6::Degenerate,
    }
}

/// `J_ρ = −K_ρ/√(−λ)`; for `ρ₋` this is the structure with `J e₁ = e₂`,
/// `J e₃ = e₄`, `J e₅ = e₆`, whose (1,0)-forms are `θ¹+iθ²`, `θ³+iθ⁴`, `θ⁵+iθ⁶`.
pub fn complex_structure(rho: &KForm) -> Result<Endo> {
    let (k, lambda) = complex_data(rho)?;
    let root = Scalar::sqrt(&-lambda)?;
    Ok(k.scale(&(-Scalar::one() / root)))
}

/// `I_ρ = K_ρ/√λ`; `I_{ρ₊} = I₀`.
pub fn para_complex_structure(rho: &KForm) -> Result<Endo> {
    let (k, lambda) = para_data(rho)?;
    let root = lambda.sqrt()?;
    Ok(k.scale(&root.checked_inv()?))
}

/// The ±1 eigenspaces `E_±` of `I_ρ`, each oriented so that `ρ` is positive on
/// its ordered basis.
pub fn para_eigenspaces(rho: &KForm) -> Result<(OrientedPlane, OrientedPlane)> {
    let (k, lambda) = para_data(rho)?;
    let root = lambda.sqrt()?;
    let eigenspace = |shift: Scalar| -> Result<OrientedPlane> {
        let m = k.matrix().sub(&Matrix::identity(6).scale(&shift))?;
        let mut basis = m.kernel();
        if basis.len() != 3 {
            return Err(Error::InvalidParameter(format!("eigenspace of dimension {}", basis.len())));
        }
        if rho.eval(&basis)?.is_negative() {
            basis[0] = basis[0].iter().map(|x| -x).collect();
        }
        OrientedPlane::new(basis)
    };
    Ok((eigenspace(root.clone())?, eigenspace(-root)?))
}

/// The partner `ρ̂` with `ρ + iρ̂` of type (3,0) for `J_ρ`:
/// `ρ̂(u, v, w) = ρ(Ĵu, v, w)` where `Ĵ = K_ρ/√(−λ) = −J_ρ`.
///
/// `hitchin_dual(ρ₋) = θ¹³⁶ + θ¹⁴⁵ + θ²³⁵ − θ²⁴⁶`, the imaginary part of
/// `(θ¹+iθ²)∧(θ³+iθ⁴)∧(θ⁵+iθ⁶)`.
pub fn hitchin_dual(rho: &KForm) -> Result<KForm> {
    let (k, lambda) = complex_data(rho)?;
    let inv_root = Scalar::sqrt(&-lambda)?.checked_inv()?;
    let images: Vec<KForm> = (0..6)
        .map(|i| {
            let col = k.matrix().column(i);
            let col: Vec<Scalar> = col.iter().map(|x| x * &inv_root).collect();
            rho.contract(&col)
        })
        .collect::<Result<_>>()?;
    KForm::from_fn(6, 3, |b| {
        let idx: Vec<usize> = b.indices().collect();
        images[idx[0] - 1].coeff_of(&idx[1..])
    })
}

/// `sign · ½[ω(E a, b) + ω(E b, a)]` on basis vectors.
fn symmetrize(e: &Endo, omega: &KForm, sign: &Scalar) -> Result<SymBilinear> {
    require_shape(omega, 6, 2)?;
    // row a: (E e_a)⌟ω evaluated on e_b
    let rows: Vec<KForm> =
        (0..6).map(|a| omega.contract(&e.matrix().column(a))).collect::<Result<_>>()?;
    let half = sign * &Scalar::from_ratio(1, 2);
    let m = Matrix::from_fn(6, 6, |a, b| {
        let s = rows[a].coeff_of(&[b + 1]) + rows[b].coeff_of(&[a + 1]);
        &s * &half
    });
    SymBilinear::new(m)
}

/// `𝒥_ρω(a, b) = −½[ω(J_ρa, b) + ω(J_ρb, a)]` for an SL(3,ℂ) form `ρ`.
pub fn cal_j(rho: &KForm, omega: &KForm) -> Result<SymBilinear> {
    symmetrize(&complex_structure(rho)?, omega, &-Scalar::one())
}

/// `ℐ_ρω(a, b) = ½[ω(I_ρa, b) + ω(I_ρb, a)]` for an SL(3,ℝ)² form `ρ`.
pub fn cal_i(rho: &KForm, omega: &KForm) -> Result<SymBilinear> {
    symmetrize(&para_complex_structure(rho)?, omega, &Scalar::one())
}

/// Outcome of the pointwise extension test for a pair `(ρ, ω)` on ℝ⁶.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionCheck {
    pub orbit: Orbit6,
    /// Signature of `𝒥_ρω` (SL(3,ℂ)) or `ℐ_ρω` (SL(3,ℝ)²).
    pub signature: Signature,
    /// Coefficient of `θ^{1…6}` in `ω³`.
    pub omega_cubed: Scalar,
    /// Coefficient of `θ^{1…6}` in `ω₁₁³`, where `ω₁₁ = ½(ω − I_ρ*ω)` is the
    /// part of `ω` pairing `E₊` with `E₋`. Only present for SL(3,ℝ)² forms.
    pub mixed_part_cubed: Option<Scalar>,
    pub admissible: bool,
}

/// Decides whether `θ∧ω + ρ` is a G̃₂ form.
///
/// SL(3,ℂ): `𝒥_ρω` has signature (2,4). SL(3,ℝ)²: `ℐ_ρω` has signature (3,3)
/// and the top coefficient of `ω³` is negative. In the second case the cube is
/// taken of the `E₊ ⊗ E₋` component of `ω`: adding `v⌟ρ` to `ω` (a shear of the
/// splitting) never changes the G̃₂ type, and those terms are exactly the
/// `Λ²E₊* ⊕ Λ²E₋*` components, which would otherwise flip the sign of `ω³`.
pub fn check_extension(rho: &KForm, omega: &KForm) -> Result<ExtensionCheck> {
    require_shape(rho, 6, 3)?;
    require_shape(omega, 6, 2)?;
    let omega_cubed = omega.wedge(omega)?.wedge(omega)?.top_coeff();
    let orbit = classify6(rho)?;
    match orbit {
        Orbit6::SL3C => {
            let signature = cal_j(rho, omega)?.signature();
            Ok(ExtensionCheck {
                orbit,
                signature,
                omega_cubed,
                mixed_part_cubed: None,
                admissible: signature == Signature::new(2, 4, 0),
            })
        }
        Orbit6::SL3R2 => {
            let signature = cal_i(rho, omega)?.signature();
            let (k, lambda) = para_data(rho)?;
            // I*ω = K*ω / λ stays rational
            let pulled = omega.pullback(&k)?.scale(&lambda.checked_inv()?);
            let mixed = omega.sub(&pulled)?.scale(&Scalar::from_ratio(1, 2));
            let mixed_cubed = mixed.wedge(&mixed)?.wedge(&mixed)?.top_coeff();
            let admissible = signature == Signature::new(3, 3, 0) && mixed_cubed.is_negative();
            Ok(ExtensionCheck { orbit, signature, omega_cubed, mixed_part_cubed: Some(mixed_cubed), admissible })
        }
        Orbit6::Degenerate => Err(wrong_orbit("SL3C or SL3R2", orbit)),
    }
}

pub fn extension_admissible(rho: &KForm, omega: &KForm) -> Result<bool> {
    Ok(check_extension(rho, omega)?.admissible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::int_vector;
    use crate::stable::{i0, rho_minus, rho_plus};

    fn f(terms: &[(&str, i64)]) -> KForm {
        KForm::from_digits(6, terms).unwrap()
    }

    #[test]
    fn hitchin_endo_of_rho_plus_is_i0() {
        assert_eq!(hitchin_endo6(&rho_plus()).unwrap(), i0());
        assert_eq!(hitchin_lambda(&rho_plus()).unwrap(), Scalar::one());
    }

    #[test]
    fn hitchin_endo_of_rho_minus() {
        // expanding (e₁⌟ρ₋)∧ρ₋ gives 2θ¹³⁴⁵⁶ = −2·(e₂⌟θ¹²³⁴⁵⁶), so K e₁ = −2e₂
        let k = hitchin_endo6(&rho_minus()).unwrap();
        assert_eq!(k.apply(&basis_vector(6, 1)).unwrap(), int_vector(&[0, -2, 0, 0, 0, 0]));
        assert_eq!(k.apply(&basis_vector(6, 2)).unwrap(), int_vector(&[2, 0, 0, 0, 0, 0]));
        assert_eq!(hitchin_lambda(&rho_minus()).unwrap(), Scalar::from(-4));
        let j = complex_structure(&rho_minus()).unwrap();
        assert_eq!(j.apply(&basis_vector(6, 1)).unwrap(), basis_vector(6, 2));
        assert_eq!(j.apply(&basis_vector(6, 3)).unwrap(), basis_vector(6, 4));
        assert_eq!(j.apply(&basis_vector(6, 5)).unwrap(), basis_vector(6, 6));
    }

    #[test]
    fn degenerate_form() {
        let t = f(&[("123", 1)]);
        assert!(hitchin_endo6(&t).unwrap().matrix().is_zero());
        assert_eq!(hitchin_lambda(&t).unwrap(), Scalar::zero());
        assert_eq!(classify6(&t).unwrap(), Orbit6::Degenerate);
        assert!(matches!(check_extension(&t, &f(&[("12", 1)])), Err(Error::WrongOrbit { .. })));
    }

    #[test]
    fn scaling_laws() {
        let rho = rho_plus().scale(&Scalar::from(8));
        assert_eq!(hitchin_lambda(&rho).unwrap(), Scalar::from(4096));
        assert_eq!(hitchin_endo6(&rho).unwrap(), i0().scale(&Scalar::from(64)));
        let (p, m) = para_eigenspaces(&rho).unwrap();
        assert!(p.same_oriented(&OrientedPlane::coordinate(6, [1, 2, 3]).unwrap()));
        assert!(m.same_oriented(&OrientedPlane::coordinate(6, [4, 5, 6]).unwrap()));
    }

    #[test]
    fn classification() {
        assert_eq!(classify6(&rho_minus()).unwrap(), Orbit6::SL3C);
        assert_eq!(classify6(&rho_plus()).unwrap(), Orbit6::SL3R2);
        assert!(classify6(&KForm::from_digits(7, &[("123", 1)]).unwrap()).is_err());
    }

    #[test]
    fn eigenspaces_of_rho_plus() {
        let (p, m) = para_eigenspaces(&rho_plus()).unwrap();
        assert!(p.same_oriented(&OrientedPlane::coordinate(6, [1, 2, 3]).unwrap()));
        assert!(m.same_oriented(&OrientedPlane::coordinate(6, [4, 5, 6]).unwrap()));
        assert!(para_eigenspaces(&rho_minus()).is_err());
    }

    #[test]
    fn dual_of_rho_minus() {
        let dual = hitchin_dual(&rho_minus()).unwrap();
        assert_eq!(dual, f(&[("136", 1), ("145", 1), ("235", 1), ("246", -1)]));
        assert_eq!(hitchin_dual(&dual).unwrap(), rho_minus().neg());
        let scaled = rho_minus().scale(&Scalar::from_ratio(3, 2));
        assert_eq!(hitchin_dual(&scaled).unwrap(), dual.scale(&Scalar::from_ratio(3, 2)));
        assert!(hitchin_dual(&rho_plus()).is_err());
    }

    #[test]
    fn cal_j_examples() {
        let id = cal_j(&rho_minus(), &f(&[("12", 1), ("34", 1), ("56", 1)])).unwrap();
        assert_eq!(id.matrix(), &Matrix::identity(6));
        let split = cal_j(&rho_minus(), &f(&[("12", 1), ("34", -1), ("56", -1)])).unwrap();
        assert_eq!(split, SymBilinear::diagonal(&[1, 1, -1, -1, -1, -1]));
        assert_eq!(split.signature(), Signature::new(2, 4, 0));
        assert!(cal_j(&rho_minus(), &KForm::zero(6, 2).unwrap()).unwrap().matrix().is_zero());
        assert!(cal_j(&rho_plus(), &f(&[("12", 1)])).is_err());
    }

    #[test]
    fn cal_i_examples() {
        let h = cal_i(&rho_plus(), &f(&[("14", 1), ("25", 1), ("36", 1)])).unwrap();
        let expected = Matrix::from_fn(6, 6, |a, b| {
            if a + 3 == b || b + 3 == a {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        assert_eq!(h.matrix(), &expected);
        assert_eq!(h.signature(), Signature::new(3, 3, 0));
        // I₀ = +1 on ⟨e₁, e₂⟩: ℐω(a,b) = ½[ω(a,b) + ω(b,a)] = 0 there
        let block = cal_i(&rho_plus(), &f(&[("12", 1)])).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                if a >= 2 || b >= 2 {
                    assert!(block.matrix()[(a, b)].is_zero());
                }
            }
        }
        assert!(cal_i(&rho_plus(), &KForm::zero(6, 2).unwrap()).unwrap().matrix().is_zero());
        assert!(cal_i(&rho_minus(), &f(&[("12", 1)])).is_err());
    }

    #[test]
    fn admissibility_examples() {
        assert!(extension_admissible(&rho_minus(), &f(&[("12", 1), ("34", -1), ("56", -1)])).unwrap());
        assert!(!extension_admissible(&rho_minus(), &f(&[("12", 1), ("34", 1), ("56", 1)])).unwrap());
        let omega = f(&[("14", 1), ("25", 1), ("36", 1)]);
        let check = check_extension(&rho_plus(), &omega).unwrap();
        assert_eq!(check.omega_cubed, Scalar::from(-6));
        assert!(check.admissible);
        assert!(!extension_admissible(&rho_plus(), &omega.neg()).unwrap());
    }

    #[test]
    fn admissibility_ignores_unmixed_components() {
        // θ¹²∧(..) is a Λ²E₊* term for ρ₊: it changes ω³ but not the G̃₂ type
        let omega = f(&[("14", 1), ("25", 1), ("36", 1), ("12", 5), ("56", 7)]);
        let check = check_extension(&rho_plus(), &omega).unwrap();
        assert_eq!(check.mixed_part_cubed, Some(Scalar::from(-6)));
        assert!(check.admissible);
    }
}
