//! Dense matrices over [`Scalar`], plus the symmetric-bilinear and endomorphism
//! wrappers used throughout the crate.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        let mut m = Matrix::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: bad.len() });
        }
        let n = rows.len();
        Ok(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from(x)).collect()).collect())
            .expect("ragged integer matrix")
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Scalar>]) -> Result<Self> {
        let rows = cols.first().map_or(0, Vec::len);
        if let Some(bad) = cols.iter().find(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch { expected: rows, found: bad.len() });
        }
        Ok(Matrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Scalar::zero();
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if !a.is_zero() {
                    acc += &(a * &other[(k, j)]);
                }
            }
            acc
        }))
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += &(&self[(i, j)] * x);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Row echelon reduction in place; returns pivot columns and the determinant
    /// factor picked up from swaps and scalings (only meaningful for square input).
    fn reduce(&mut self, full: bool) -> (Vec<usize>, Scalar) {
        let mut pivots = Vec::new();
        let mut factor = Scalar::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                self.swap_rows(p, r);
                factor = -factor;
            }
            let pv = self[(r, c)].clone();
            factor = &factor * &pv;
            let inv = pv.checked_inv().expect("nonzero pivot");
            for j in c..self.cols {
                self[(r, j)] = &self[(r, j)] * &inv;
            }
            let start = if full { 0 } else { r + 1 };
            for i in start..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    let t = &f * &self[(r, j)];
                    self[(i, j)] -= &t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (pivots, factor)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce(false).0.len()
    }

    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::UnsupportedShape(format!("det of {}x{} matrix", self.rows, self.cols)));
        }
        let mut m = self.clone();
        let (pivots, factor) = m.reduce(false);
        Ok(if pivots.len() == self.rows { factor } else { Scalar::zero() })
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::UnsupportedShape(format!("inverse of {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let (pivots, _) = aug.reduce(true);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Degenerate);
        }
        Ok(Matrix::from_fn(n, n, |i, j| aug[(i, j + n)].clone()))
    }

    /// Solves `self · x = b` for square invertible `self`.
    pub fn solve(&self, b: &[Scalar]) -> Result<Vec<Scalar>> {
        self.inverse()?.apply(b)
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let (pivots, _) = m.reduce(true);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -&m[(r, f)];
                }
                v
            })
            .collect()
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(Scalar::to_f64).collect()).collect()
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Scalar>> = (0..self.rows).map(|i| self.row(i)).collect();
        rows.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Scalar>>::deserialize(de)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Inertia `(p, q, r)` of a symmetric bilinear form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "[usize; 3]", from = "[usize; 3]")]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub null: usize,
}

impl Signature {
    pub const fn new(positive: usize, negative: usize, null: usize) -> Self {
        Signature { positive, negative, null }
    }

    pub fn dim(&self) -> usize {
        self.positive + self.negative + self.null
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.positive, self.negative, self.null]
    }
}

impl From<Signature> for [usize; 3] {
    fn from(s: Signature) -> Self {
        s.as_array()
    }
}

impl From<[usize; 3]> for Signature {
    fn from([p, q, r]: [usize; 3]) -> Self {
        Signature::new(p, q, r)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.positive, self.negative, self.null)
    }
}

/// Symmetric bilinear form on ℝⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SymBilinear(Matrix);

impl SymBilinear {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::UnsupportedShape("bilinear form must be square".into()));
        }
        if !m.is_symmetric() {
            return Err(Error::InvalidParameter("matrix is not symmetric".into()));
        }
        Ok(SymBilinear(m))
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        SymBilinear(Matrix::diagonal(&entries.iter().map(|&x| Scalar::from(x)).collect::<Vec<_>>()))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn eval(&self, u: &[Scalar], v: &[Scalar]) -> Result<Scalar> {
        let bv = self.0.apply(v)?;
        Ok(u.iter().zip(&bv).fold(Scalar::zero(), |acc, (a, b)| acc + a * b))
    }

    /// `Aᵀ B A`; for rectangular `A` this is the restriction to the column span.
    pub fn congruent(&self, a: &Matrix) -> Result<SymBilinear> {
        Ok(SymBilinear(a.transpose().mul(&self.0)?.mul(a)?))
    }

    pub fn scale(&self, c: &Scalar) -> SymBilinear {
        SymBilinear(self.0.scale(c))
    }

    /// Sylvester inertia by exact symmetric elimination.
    ///
    /// Nonzero diagonal pivots are eliminated one at a time. When every remaining
    /// diagonal entry vanishes but some `b_ij` does not, the 2×2 hyperbolic block
    /// on `{i, j}` is split off, contributing one positive and one negative square.
    pub fn signature(&self) -> Signature {
        let mut m = self.0.clone();
        let mut active: Vec<usize> = (0..m.rows()).collect();
        let (mut pos, mut neg) = (0, 0);
        while !active.is_empty() {
            if let Some(k) = active.iter().position(|&i| !m[(i, i)].is_zero()) {
                let p = active.swap_remove(k);
                let piv = m[(p, p)].clone();
                if piv.is_positive() {
                    pos += 1;
                } else {
                    neg += 1;
                }
                let inv = piv.checked_inv().expect("nonzero pivot");
                for &r in &active {
                    if m[(r, p)].is_zero() {
                        continue;
                    }
                    let f = &m[(r, p)] * &inv;
                    for &s in &active {
                        let t = &f * &m[(p, s)];
                        m[(r, s)] -= &t;
                    }
                }
                continue;
            }
            let pair = active.iter().enumerate().find_map(|(a, &i)| {
                active[a + 1..].iter().find(|&&j| !m[(i, j)].is_zero()).map(|&j| (i, j))
            });
            let Some((i, j)) = pair else { break };
            pos += 1;
            neg += 1;
            active.retain(|&x| x != i && x != j);
            // Schur complement of [[0, c], [c, 0]]
            let inv_c = m[(i, j)].checked_inv().expect("nonzero off-diagonal");
            let snapshot = m.clone();
            for &r in &active {
                for &s in &active {
                    let cross = &snapshot[(r, i)] * &snapshot[(j, s)] + &snapshot[(r, j)] * &snapshot[(i, s)];
                    if !cross.is_zero() {
                        m[(r, s)] -= &(&cross * &inv_c);
                    }
                }
            }
        }
        let n = self.dim();
        Signature::new(pos, neg, n - pos - neg)
    }
}

impl<'de> Deserialize<'de> for SymBilinear {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        SymBilinear::new(Matrix::deserialize(de)?).map_err(serde::de::Error::custom)
    }
}

/// Endomorphism of ℝⁿ; column `j` is the image of `e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Endo(Matrix);

impl Endo {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::UnsupportedShape("endomorphism must be square".into()));
        }
        Ok(Endo(m))
    }

    pub fn identity(n: usize) -> Self {
        Endo(Matrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        self.0.apply(v)
    }

    pub fn compose(&self, other: &Endo) -> Result<Endo> {
        Ok(Endo(self.0.mul(&other.0)?))
    }

    pub fn scale(&self, c: &Scalar) -> Endo {
        Endo(self.0.scale(c))
    }

    pub fn trace(&self) -> Scalar {
        (0..self.dim()).fold(Scalar::zero(), |acc, i| acc + &self.0[(i, i)])
    }

    pub fn det(&self) -> Scalar {
        self.0.det().expect("square")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Matrix {
        Matrix::from_int_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn signature_examples() {
        assert_eq!(SymBilinear::diagonal(&[2, -3, 0]).signature(), Signature::new(1, 1, 1));
        assert_eq!(SymBilinear::diagonal(&[0; 6]).signature(), Signature::new(0, 0, 6));
        assert_eq!(SymBilinear::diagonal(&[1, 1, 1, -1, -1, -1, -1]).signature(), Signature::new(3, 4, 0));
    }

    #[test]
    fn signature_hyperbolic_block() {
        let b = SymBilinear::new(ints(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]])).unwrap();
        assert_eq!(b.signature(), Signature::new(1, 1, 1));
        // off-diagonal only, coupled through the remaining block
        let b = SymBilinear::new(ints(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]])).unwrap();
        assert_eq!(b.signature(), Signature::new(1, 2, 0));
    }

    #[test]
    fn det_inverse_kernel() {
        let m = ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det().unwrap(), Scalar::from(18));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(3));
        let s = ints(&[&[1, 2, 3], &[2, 4, 6]]);
        let ker = s.kernel();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(s.apply(v).unwrap().iter().all(Scalar::is_zero));
        }
        assert_eq!(s.rank(), 1);
        assert!(ints(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn symmetric_check() {
        assert!(SymBilinear::new(ints(&[&[1, 2], &[3, 4]])).is_err());
    }
}
