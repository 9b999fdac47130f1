//! Alternating forms on ℝⁿ (n ≤ 8) with exact coefficients.
//!
//! A basis element `θ^{i₁…i_k}` is stored as a bitmask [`Blade`]; bit `i-1`
//! stands for the 1-based index `i`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Endo, Matrix, SymBilinear};
use crate::scalar::Scalar;

pub const MAX_DIM: usize = 8;

/// Strictly increasing index tuple, packed as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Blade(u16);

impl Blade {
    pub const EMPTY: Blade = Blade(0);

    pub fn from_bits(bits: u16) -> Self {
        Blade(bits)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    /// Full index set `{1, …, n}`.
    pub fn top(n: usize) -> Self {
        Blade(((1u32 << n) - 1) as u16)
    }

    pub fn single(i: usize) -> Self {
        Blade(1 << (i - 1))
    }

    /// Sorts `idx` and returns the blade together with the permutation sign,
    /// or `None` when an index repeats.
    pub fn from_indices(idx: &[usize]) -> Option<(Blade, i32)> {
        let mut bits = 0u16;
        let mut sign = 1;
        for (pos, &i) in idx.iter().enumerate() {
            if i == 0 || i > 16 {
                return None;
            }
            let b = 1u16 << (i - 1);
            if bits & b != 0 {
                return None;
            }
            // earlier entries larger than i each contribute one inversion
            if (idx[..pos].iter().filter(|&&j| j > i).count()) % 2 == 1 {
                sign = -sign;
            }
            bits |= b;
        }
        Some((Blade(bits), sign))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << (i - 1)) != 0
    }

    pub fn max_index(self) -> usize {
        16 - self.0.leading_zeros() as usize
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (1..=16).filter(move |&i| self.0 & (1 << (i - 1)) != 0)
    }

    pub fn complement(self, n: usize) -> Blade {
        Blade(Blade::top(n).0 & !self.0)
    }

    pub fn remove(self, i: usize) -> Blade {
        Blade(self.0 & !(1 << (i - 1)))
    }

    /// Sign of `θ^self ∧ θ^other`, or `None` when they share an index.
    pub fn wedge_sign(self, other: Blade) -> Option<i32> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // count pairs (a in self, b in other) with a > b
        let mut swaps = 0;
        for b in other.indices() {
            swaps += (self.0 >> b).count_ones();
        }
        Some(if swaps % 2 == 0 { 1 } else { -1 })
    }

    /// Number of indices in `self` below `i`.
    pub fn rank_of(self, i: usize) -> usize {
        (self.0 & ((1u16 << (i - 1)) - 1)).count_ones() as usize
    }

    /// All blades of degree `k` in dimension `n`, lexicographically ordered.
    pub fn all(n: usize, k: usize) -> Vec<Blade> {
        let mut out: Vec<Blade> =
            (0u32..(1 << n)).filter(|b| b.count_ones() as usize == k).map(|b| Blade(b as u16)).collect();
        out.sort();
        out
    }
}

impl Ord for Blade {
    /// Lexicographic on the index tuples (shorter tuples first).
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.indices().cmp(other.indices()))
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.indices().map(|i| i.to_string()).collect();
        write!(f, "θ^{{{}}}", s.join(","))
    }
}

/// Alternating `k`-form on ℝⁿ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KForm {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Blade, Scalar>,
}

impl KForm {
    pub fn zero(dim: usize, degree: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::UnsupportedShape(format!("dimension {dim} outside 1..={MAX_DIM}")));
        }
        if degree > dim {
            return Err(Error::DegreeOverflow { degree, dim });
        }
        Ok(KForm { dim, degree, terms: BTreeMap::new() })
    }

    /// The constant 0-form `c`.
    pub fn constant(dim: usize, c: Scalar) -> Result<Self> {
        let mut f = KForm::zero(dim, 0)?;
        f.add_term(Blade::EMPTY, c);
        Ok(f)
    }

    /// Builds a form from index tuples in any order; each tuple is sorted with
    /// sign tracking and tuples with repeated indices contribute nothing.
    pub fn from_terms<I, T>(dim: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, Scalar)>,
        T: AsRef<[usize]>,
    {
        let mut f = KForm::zero(dim, degree)?;
        for (idx, c) in terms {
            let idx = idx.as_ref();
            if idx.len() != degree {
                return Err(Error::InvalidParameter(format!(
                    "index tuple {idx:?} has length {} but degree is {degree}",
                    idx.len()
                )));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > dim) {
                return Err(Error::InvalidParameter(format!("index {bad} outside 1..={dim}")));
            }
            if let Some((blade, sign)) = Blade::from_indices(idx) {
                let c = if sign < 0 { -c } else { c };
                f.add_term(blade, c);
            }
        }
        Ok(f)
    }

    /// Shorthand for integer coefficients on index strings: `[("123", 1), ("145", -1)]`.
    /// Digits are indices, so this only covers dimensions up to 8.
    pub fn from_digits(dim: usize, terms: &[(&str, i64)]) -> Result<Self> {
        let degree = terms.first().map_or(0, |(s, _)| s.len());
        KForm::from_terms(
            dim,
            degree,
            terms.iter().map(|(s, c)| {
                let idx: Vec<usize> = s.chars().map(|ch| ch.to_digit(10).unwrap_or(0) as usize).collect();
                (idx, Scalar::from(*c))
            }),
        )
    }

    /// Basis covector `θ^i`.
    pub fn basis1(dim: usize, i: usize) -> Result<Self> {
        KForm::from_terms(dim, 1, [([i], Scalar::one())])
    }

    /// Covector `Σ cᵢ θ^i`.
    pub fn covector(coeffs: &[Scalar]) -> Result<Self> {
        KForm::from_terms(coeffs.len(), 1, coeffs.iter().enumerate().map(|(i, c)| ([i + 1], c.clone())))
    }

    /// Evaluates `f` on every basis tuple `(e_{i₁}, …, e_{i_k})` to build a form.
    pub fn from_fn(dim: usize, degree: usize, mut f: impl FnMut(Blade) -> Scalar) -> Result<Self> {
        let mut out = KForm::zero(dim, degree)?;
        for b in Blade::all(dim, degree) {
            out.add_term(b, f(b));
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &Scalar)> {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    pub fn coeff(&self, b: Blade) -> Scalar {
        self.terms.get(&b).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Coefficient of `θ^{idx}` for an increasing tuple.
    pub fn coeff_of(&self, idx: &[usize]) -> Scalar {
        match Blade::from_indices(idx) {
            Some((b, s)) if s > 0 => self.coeff(b),
            Some((b, _)) => -self.coeff(b),
            None => Scalar::zero(),
        }
    }

    /// Coefficient of the top form `θ^{1…n}`.
    pub fn top_coeff(&self) -> Scalar {
        self.coeff(Blade::top(self.dim))
    }

    fn add_term(&mut self, b: Blade, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_same_shape(&self, other: &KForm) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        if self.degree != other.degree {
            return Err(Error::InvalidParameter(format!(
                "degree mismatch: {} vs {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &KForm) -> Result<KForm> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &KForm) -> Result<KForm> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> KForm {
        let mut out = KForm { dim: self.dim, degree: self.degree, terms: BTreeMap::new() };
        if c.is_zero() {
            return out;
        }
        for (b, x) in &self.terms {
            out.add_term(*b, x * c);
        }
        out
    }

    pub fn neg(&self) -> KForm {
        self.scale(&-Scalar::one())
    }

    /// Exterior product.
    pub fn wedge(&self, other: &KForm) -> Result<KForm> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let degree = self.degree + other.degree;
        if degree > self.dim {
            return Err(Error::DegreeOverflow { degree, dim: self.dim });
        }
        let mut out = KForm { dim: self.dim, degree, terms: BTreeMap::new() };
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some(sign) = a.wedge_sign(*b) {
                    let c = x * y;
                    out.add_term(Blade(a.0 | b.0), if sign < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Interior product `u ⌟ α`.
    pub fn contract(&self, u: &[Scalar]) -> Result<KForm> {
        if u.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: u.len() });
        }
        if self.degree == 0 {
            return Err(Error::InvalidParameter("cannot contract a 0-form".into()));
        }
        let mut out = KForm { dim: self.dim, degree: self.degree - 1, terms: BTreeMap::new() };
        for (b, c) in &self.terms {
            for i in b.indices() {
                let ui = &u[i - 1];
                if ui.is_zero() {
                    continue;
                }
                let v = c * ui;
                out.add_term(b.remove(i), if b.rank_of(i) % 2 == 1 { -v } else { v });
            }
        }
        Ok(out)
    }

    /// `α(v₁, …, v_k)`.
    pub fn eval(&self, vectors: &[Vec<Scalar>]) -> Result<Scalar> {
        if vectors.len() != self.degree {
            return Err(Error::InvalidParameter(format!(
                "expected {} vectors, got {}",
                self.degree,
                vectors.len()
            )));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != self.dim) {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        let mut total = Scalar::zero();
        for (b, c) in &self.terms {
            let idx: Vec<usize> = b.indices().map(|i| i - 1).collect();
            let minor = Matrix::from_fn(self.degree, self.degree, |r, s| vectors[r][idx[s]].clone());
            let d = minor.det()?;
            if !d.is_zero() {
                total += &(c * &d);
            }
        }
        Ok(total)
    }

    /// Pullback along a linear map `A: ℝᵐ → ℝⁿ` given as an `n × m` matrix:
    /// `(A*α)(v₁,…) = α(Av₁,…)`. The result lives on ℝᵐ.
    pub fn pullback_by(&self, a: &Matrix) -> Result<KForm> {
        if a.rows() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: a.rows() });
        }
        let m = a.cols();
        // A*θ^i = Σ_j A_ij θ^j
        let pulled: Vec<KForm> = (0..self.dim)
            .map(|i| KForm::covector(&a.row(i)))
            .collect::<Result<_>>()?;
        let mut out = KForm::zero(m, self.degree)?;
        for (b, c) in &self.terms {
            let mut acc = KForm::constant(m, c.clone())?;
            for i in b.indices() {
                acc = acc.wedge(&pulled[i - 1])?;
                if acc.is_zero() {
                    break;
                }
            }
            if !acc.is_zero() {
                out = out.add(&acc)?;
            }
        }
        Ok(out)
    }

    pub fn pullback(&self, a: &Endo) -> Result<KForm> {
        self.pullback_by(a.matrix())
    }

    /// Hodge star with respect to `g`, normalized by `β ∧ ⋆α = ⟨β, α⟩_g · vol`,
    /// where `⟨θ^I, θ^J⟩ = det(g⁻¹[I, J])`.
    pub fn hodge_star(&self, g: &SymBilinear, vol: &KForm) -> Result<KForm> {
        if g.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: g.dim() });
        }
        if vol.dim != self.dim || vol.degree != self.dim || vol.is_zero() {
            return Err(Error::InvalidParameter("vol must be a nonzero top form".into()));
        }
        let ginv = g.matrix().inverse().map_err(|_| Error::Degenerate)?;
        let v = vol.top_coeff();
        let n = self.dim;
        let k = self.degree;
        let mut out = KForm::zero(n, n - k)?;
        for j in Blade::all(n, k) {
            let jdx: Vec<usize> = j.indices().map(|i| i - 1).collect();
            let mut inner = Scalar::zero();
            for (i, c) in &self.terms {
                let idx: Vec<usize> = i.indices().map(|x| x - 1).collect();
                let gram = ginv.select(&jdx, &idx).det()?;
                if !gram.is_zero() {
                    inner += &(c * &gram);
                }
            }
            if inner.is_zero() {
                continue;
            }
            let comp = j.complement(n);
            let eps = j.wedge_sign(comp).expect("disjoint");
            let c = &inner * &v;
            out.add_term(comp, if eps < 0 { -c } else { c });
        }
        Ok(out)
    }

    /// Numerical value of each coefficient.
    pub fn to_f64_terms(&self) -> Vec<(Vec<usize>, f64)> {
        self.terms.iter().map(|(b, c)| (b.indices().collect(), c.to_f64())).collect()
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| {
                let idx: String = b.indices().map(|i| i.to_string()).collect::<Vec<_>>().join("");
                format!("({c})θ{idx}")
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Standard basis vector `e_i` (1-based) in ℝⁿ.
pub fn basis_vector(n: usize, i: usize) -> Vec<Scalar> {
    (1..=n).map(|j| if j == i { Scalar::one() } else { Scalar::zero() }).collect()
}

pub fn int_vector(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Scalar::from(x)).collect()
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    idx: Vec<usize>,
    c: Scalar,
}

#[derive(Serialize, Deserialize)]
struct KFormRepr {
    dim: usize,
    degree: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for KForm {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        KFormRepr {
            dim: self.dim,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(b, c)| TermRepr { idx: b.indices().collect(), c: c.clone() })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for KForm {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = KFormRepr::deserialize(de)?;
        for t in &repr.terms {
            if t.idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(D::Error::custom(format!("indices {:?} not strictly increasing", t.idx)));
            }
        }
        KForm::from_terms(repr.dim, repr.degree, repr.terms.into_iter().map(|t| (t.idx, t.c)))
            .map_err(D::Error::custom)
    }
}

impl KForm {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<KForm> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}
