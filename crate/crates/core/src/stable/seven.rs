use std::fmt;

use serde::{Deserialize, Serialize};

use super::require_shape;
use crate::error::{Error, Result};
use crate::form::{basis_vector, KForm};
use crate::linalg::{Matrix, Signature, SymBilinear};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orbit7Kind {
    G2,
    G2Tilde,
    NonStable,
}

/// GL₊(7)-orbit of a 3-form. `reversed` marks the open orbits reached with the
/// opposite orientation (`B_φ` of signature (0,7) or (4,3)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orbit7 {
    pub kind: Orbit7Kind,
    pub reversed: bool,
}

impl Orbit7 {
    pub fn name(&self) -> &'static str {
        match self.kind {
            Orbit7Kind::G2 => "G2",
            Orbit7Kind::G2Tilde => "G2Tilde",
            Orbit7Kind::NonStable => "NonStable",
        }
    }
}

impl fmt::Display for Orbit7 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        if self.reversed {
            f.write_str(" (reversed orientation)")?;
        }
        Ok(())
    }
}

/// `B_φ(u, v)·θ^{1…7} = (1/6)(u⌟φ)∧(v⌟φ)∧φ`.
///
/// Equivariance: `B_{A*φ} = det(A)·AᵀB_φA`. For `φ₀` this is the identity.
pub fn induced_bilinear7(phi: &KForm) -> Result<SymBilinear> {
    require_shape(phi, 7, 3)?;
    let contractions: Vec<KForm> =
        (1..=7).map(|i| phi.contract(&basis_vector(7, i))).collect::<Result<_>>()?;
    let with_phi: Vec<KForm> = contractions.iter().map(|c| c.wedge(phi)).collect::<Result<_>>()?;
    let sixth = Scalar::from_ratio(1, 6);
    let mut m = Matrix::zeros(7, 7);
    for i in 0..7 {
        for j in i..7 {
            let v = &contractions[i].wedge(&with_phi[j])?.top_coeff() * &sixth;
            m[(i, j)] = v.clone();
            m[(j, i)] = v;
        }
    }
    SymBilinear::new(m)
}

fn orbit_from_signature(sig: Signature) -> Orbit7 {
    let (kind, reversed) = match sig.as_array() {
        [7, 0, 0] => (Orbit7Kind::G2, false),
        [0, 7, 0] => (Orbit7Kind::G2, true),
        [3, 4, 0] => (Orbit7Kind::G2Tilde, false),
        [4, 3, 0] => (Orbit7Kind::G2Tilde, true),
        _ => (Orbit7Kind::NonStable, false),
    };
    Orbit7 { kind, reversed }
}

pub fn classify7(phi: &KForm) -> Result<Orbit7> {
    Ok(orbit_from_signature(induced_bilinear7(phi)?.signature()))
}

pub(crate) fn require_orbit(phi: &KForm, kind: Orbit7Kind, allow_reversed: bool) -> Result<(Orbit7, SymBilinear)> {
    let b = induced_bilinear7(phi)?;
    let orbit = orbit_from_signature(b.signature());
    if orbit.kind != kind || (orbit.reversed && !allow_reversed) {
        let expected = match kind {
            Orbit7Kind::G2 => "G2",
            Orbit7Kind::G2Tilde => "G2Tilde",
            Orbit7Kind::NonStable => "NonStable",
        };
        return Err(Error::WrongOrbit { expected, found: orbit.to_string() });
    }
    Ok((orbit, b))
}

/// Ordered basis of a 3-plane; the order fixes the orientation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Scalar>>", into = "Vec<Vec<Scalar>>")]
pub struct OrientedPlane {
    vectors: Vec<Vec<Scalar>>,
}

impl OrientedPlane {
    pub fn new(vectors: Vec<Vec<Scalar>>) -> Result<Self> {
        if vectors.len() != 3 {
            return Err(Error::InvalidParameter(format!("a 3-plane needs 3 vectors, got {}", vectors.len())));
        }
        let n = vectors[0].len();
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        if Matrix::from_columns(&vectors)?.rank() != 3 {
            return Err(Error::LinearlyDependent);
        }
        Ok(OrientedPlane { vectors })
    }

    /// Plane spanned by coordinate vectors `e_i, e_j, e_k` (1-based) in that order.
    pub fn coordinate(n: usize, idx: [usize; 3]) -> Result<Self> {
        OrientedPlane::new(idx.iter().map(|&i| basis_vector(n, i)).collect())
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn vectors(&self) -> &[Vec<Scalar>] {
        &self.vectors
    }

    /// `n × 3` matrix with the basis as columns.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(&self.vectors).expect("validated")
    }

    /// Same underlying subspace and same orientation.
    pub fn same_oriented(&self, other: &OrientedPlane) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let mut cols = self.vectors.clone();
        cols.extend(other.vectors.iter().cloned());
        let Ok(joint) = Matrix::from_columns(&cols) else { return false };
        if joint.rank() != 3 {
            return false;
        }
        // express other's basis in self's: pick 3 independent rows
        let a = self.basis_matrix();
        let rows = independent_rows(&a);
        let sa = a.select(&rows, &[0, 1, 2]);
        let sb = other.basis_matrix().select(&rows, &[0, 1, 2]);
        match (sa.det(), sb.det()) {
            (Ok(x), Ok(y)) => (&x * &y).is_positive(),
            _ => false,
        }
    }
}

fn independent_rows(a: &Matrix) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for r in 0..a.rows() {
        let mut trial = chosen.clone();
        trial.push(r);
        if a.select(&trial, &(0..a.cols()).collect::<Vec<_>>()).rank() == trial.len() {
            chosen = trial;
        }
        if chosen.len() == a.cols() {
            break;
        }
    }
    chosen
}

impl TryFrom<Vec<Vec<Scalar>>> for OrientedPlane {
    type Error = Error;
    fn try_from(v: Vec<Vec<Scalar>>) -> Result<Self> {
        OrientedPlane::new(v)
    }
}

impl From<OrientedPlane> for Vec<Vec<Scalar>> {
    fn from(p: OrientedPlane) -> Self {
        p.vectors
    }
}

/// Cross product defined by `B_φ(u × v, w) = φ(u, v, w)` for all `w`.
pub fn cross(phi: &KForm, u: &[Scalar], v: &[Scalar]) -> Result<Vec<Scalar>> {
    let (_, b) = require_orbit(phi, Orbit7Kind::G2, true)?;
    let uv = phi.contract(u)?.contract(v)?;
    let rhs: Vec<Scalar> = (1..=7).map(|k| uv.coeff_of(&[k])).collect();
    b.matrix().solve(&rhs)
}

/// `φ(b₁,b₂,b₃) > 0` and `φ(b)⁶·det B = det(B|_C)³`, equivalent to `φ|_C = vol_C`
/// for the metric `det(B)^{-1/9}·B`.
fn calibration_identity(phi: &KForm, b: &SymBilinear, plane: &OrientedPlane) -> Result<bool> {
    if plane.dim() != 7 {
        return Err(Error::DimensionMismatch { expected: 7, found: plane.dim() });
    }
    let value = phi.eval(plane.vectors())?;
    if !value.is_positive() {
        return Ok(false);
    }
    let restricted = b.congruent(&plane.basis_matrix())?;
    let lhs = &value.pow(6) * &b.matrix().det()?;
    let rhs = restricted.matrix().det()?.pow(3);
    Ok(lhs == rhs)
}

pub fn is_calibrated(phi: &KForm, plane: &OrientedPlane) -> Result<bool> {
    let (_, b) = require_orbit(phi, Orbit7Kind::G2, false)?;
    calibration_identity(phi, &b, plane)
}

pub fn is_positively_calibrated(phi: &KForm, plane: &OrientedPlane) -> Result<bool> {
    let (_, b) = require_orbit(phi, Orbit7Kind::G2Tilde, false)?;
    let restricted = b.congruent(&plane.basis_matrix())?;
    if restricted.signature() != Signature::new(3, 0, 0) {
        return Ok(false);
    }
    calibration_identity(phi, &b, plane)
}

/// `2·φ∘(P,P,P) − φ` with `P` the `B_φ`-orthogonal projection onto `C`.
///
/// Takes a G₂ form with a calibrated plane to a G̃₂ form with that plane
/// positively calibrated, and vice versa.
pub fn swap(phi: &KForm, plane: &OrientedPlane) -> Result<KForm> {
    let orbit = classify7(phi)?;
    let ok = match orbit.kind {
        Orbit7Kind::G2 if !orbit.reversed => is_calibrated(phi, plane)?,
        Orbit7Kind::G2Tilde if !orbit.reversed => is_positively_calibrated(phi, plane)?,
        _ => {
            return Err(Error::WrongOrbit { expected: "G2 or G2Tilde", found: orbit.to_string() });
        }
    };
    if !ok {
        return Err(Error::NotCalibrated);
    }
    let b = induced_bilinear7(phi)?;
    let c = plane.basis_matrix();
    let gram_inv = b.congruent(&c)?.matrix().inverse()?;
    let proj = c.mul(&gram_inv)?.mul(&c.transpose())?.mul(b.matrix())?;
    let restricted = phi.pullback_by(&proj)?;
    restricted.scale(&Scalar::from(2)).sub(phi)
}
