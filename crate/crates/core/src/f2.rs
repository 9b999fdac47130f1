//! Linear algebra over the two-element field, subspace counting over finite
//! fields, and the exterior-algebra model of `H*(Tⁿ; ℤ/2)`.
//!
//! Vectors of length `n ≤ 24` are packed in a `u32`; bit `j` is coordinate `j + 1`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_BITS: usize = 24;
/// Largest ambient dimension accepted by [`grassmann_enumerate`].
pub const MAX_ENUM_DIM: usize = 14;
/// Default cap on the number of subspaces [`grassmann_enumerate`] will list.
pub const DEFAULT_ENUM_CAP: u64 = 1 << 22;

fn check_bits(n: usize) -> Result<()> {
    if n > MAX_BITS {
        return Err(Error::SizeLimit(format!("ambient dimension {n} exceeds {MAX_BITS}")));
    }
    Ok(())
}

fn mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Matrix {
    cols: usize,
    rows: Vec<u32>,
}

impl F2Matrix {
    pub fn new(cols: usize, rows: Vec<u32>) -> Result<Self> {
        check_bits(cols)?;
        if rows.iter().any(|r| r & !mask(cols) != 0) {
            return Err(Error::InvalidParameter(format!("row has bits beyond column {cols}")));
        }
        Ok(F2Matrix { cols, rows })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix { cols, rows: vec![0; rows] }
    }

    pub fn identity(n: usize) -> Self {
        F2Matrix { cols: n, rows: (0..n).map(|i| 1 << i).collect() }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.cols != other.nrows() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.nrows() });
        }
        let rows = self
            .rows
            .iter()
            .map(|&r| (0..self.cols).filter(|&j| r >> j & 1 == 1).fold(0, |acc, j| acc ^ other.rows[j]))
            .collect();
        Ok(F2Matrix { cols: other.cols, rows })
    }

    pub fn add(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.cols != other.cols || self.nrows() != other.nrows() {
            return Err(Error::DimensionMismatch { expected: self.nrows(), found: other.nrows() });
        }
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a ^ b).collect();
        Ok(F2Matrix { cols: self.cols, rows })
    }

    /// Canonical reduced row echelon form with zero rows dropped. Pivots are the
    /// lowest set bit of each row, increasing down the rows.
    pub fn rref(&self) -> F2Matrix {
        let mut rows = self.rows.clone();
        let mut out: Vec<u32> = Vec::new();
        for col in 0..self.cols {
            let bit = 1u32 << col;
            let Some(p) = rows.iter().position(|r| r & bit != 0 && r & (bit - 1) == 0) else {
                continue;
            };
            let pivot = rows.swap_remove(p);
            for r in rows.iter_mut() {
                if *r & bit != 0 {
                    *r ^= pivot;
                }
            }
            for r in out.iter_mut() {
                if *r & bit != 0 {
                    *r ^= pivot;
                }
            }
            out.push(pivot);
        }
        F2Matrix { cols: self.cols, rows: out }
    }

    pub fn rank(&self) -> usize {
        self.rref().nrows()
    }

    pub fn inverse(&self) -> Result<F2Matrix> {
        let n = self.nrows();
        if n != self.cols {
            return Err(Error::DimensionMismatch { expected: n, found: self.cols });
        }
        if 2 * n > 32 {
            return Err(Error::SizeLimit(format!("inverse of a {n}x{n} matrix")));
        }
        // augment [A | I] in one word per row
        let aug: Vec<u32> = self.rows.iter().enumerate().map(|(i, &r)| r | 1 << (n + i)).collect();
        let reduced = F2Matrix { cols: 2 * n, rows: aug }.rref();
        if reduced.nrows() < n || reduced.rows[n - 1] & mask(n) == 0 {
            return Err(Error::Degenerate);
        }
        Ok(F2Matrix { cols: n, rows: reduced.rows.iter().map(|r| r >> n).collect() })
    }

    pub fn is_invertible(&self) -> bool {
        self.nrows() == self.cols && self.rank() == self.cols
    }
}

impl fmt::Display for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            for j in 0..self.cols {
                f.write_str(if r >> j & 1 == 1 { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

/// Element `(A, B; C)` of `[GL(k) × GL(n−k)] ⋉ End(F^{n−k}, F^k)` over `F₂`,
/// with product `(A,B;C)·(A′,B′;C′) = (AA′, BB′, AC′B⁻¹ + C)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockAffine {
    pub a: F2Matrix,
    pub b: F2Matrix,
    pub c: F2Matrix,
}

impl BlockAffine {
    pub fn new(a: F2Matrix, b: F2Matrix, c: F2Matrix) -> Result<Self> {
        let (k, m) = (a.nrows(), b.nrows());
        if !a.is_invertible() || !b.is_invertible() {
            return Err(Error::Degenerate);
        }
        if c.nrows() != k || c.ncols() != m {
            return Err(Error::DimensionMismatch { expected: m, found: c.ncols() });
        }
        Ok(BlockAffine { a, b, c })
    }

    pub fn identity(k: usize, m: usize) -> Self {
        BlockAffine { a: F2Matrix::identity(k), b: F2Matrix::identity(m), c: F2Matrix::zeros(k, m) }
    }

    pub fn mul(&self, other: &BlockAffine) -> Result<BlockAffine> {
        let c = self.a.mul(&other.c)?.mul(&self.b.inverse()?)?.add(&self.c)?;
        Ok(BlockAffine { a: self.a.mul(&other.a)?, b: self.b.mul(&other.b)?, c })
    }

    /// The stabilizer element `[[A, CB], [0, B]]` of `F^k ⊕ 0`.
    pub fn to_matrix(&self) -> Result<F2Matrix> {
        let (k, m) = (self.a.nrows(), self.b.nrows());
        let d = self.c.mul(&self.b)?;
        let mut rows: Vec<u32> = (0..k).map(|i| self.a.rows[i] | d.rows[i] << k).collect();
        rows.extend(self.b.rows.iter().map(|r| r << k));
        F2Matrix::new(k + m, rows)
    }
}

fn is_prime_power(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let p = (2..).take_while(|&d| d <= n / d).find(|d| n.is_multiple_of(*d)).unwrap_or(n);
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

fn check_field(q: u64) -> Result<()> {
    if !is_prime_power(q) {
        return Err(Error::InvalidParameter(format!("field size {q} is not a prime power")));
    }
    Ok(())
}

/// `(1/N; 1/N)_n = ∏_{i=1}^{n} (1 − N^{−i})`.
pub fn q_pochhammer(q: u64, n: u32) -> BigRational {
    let base = BigRational::new(BigUint::one().into(), BigUint::from(q).into());
    let mut power = BigRational::one();
    let mut acc = BigRational::one();
    for _ in 0..n {
        power *= &base;
        acc *= BigRational::one() - &power;
    }
    acc
}

fn to_natural(r: BigRational) -> Result<BigUint> {
    if !r.is_integer() {
        return Err(Error::InvalidParameter(format!("count {r} is not an integer")));
    }
    r.to_integer().to_biguint().ok_or_else(|| Error::InvalidParameter("negative count".into()))
}

fn pow_big(q: u64, e: u64) -> BigUint {
    num_traits::pow(BigUint::from(q), e as usize)
}

/// `|FP^{n−1}| = (Nⁿ − 1)/(N − 1)`.
pub fn proj_count(q: u64, n: u32) -> Result<BigUint> {
    check_field(q)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    Ok((pow_big(q, n as u64) - 1u32) / BigUint::from(q - 1))
}

/// `|GL(n, F)| = N^{n²}(1/N; 1/N)_n`.
pub fn gl_count(q: u64, n: u32) -> Result<BigUint> {
    check_field(q)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let lead = BigRational::from_integer(pow_big(q, (n as u64).pow(2)).into());
    to_natural(lead * q_pochhammer(q, n))
}

/// `|Gr_k(Fⁿ)| = N^{k(n−k)}(1/N;1/N)_n / ((1/N;1/N)_k (1/N;1/N)_{n−k})`.
pub fn grassmann_count(q: u64, n: u32, k: u32) -> Result<BigUint> {
    check_field(q)?;
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds n = {n}")));
    }
    let lead = BigRational::from_integer(pow_big(q, k as u64 * (n - k) as u64).into());
    let ratio = q_pochhammer(q, n) / (q_pochhammer(q, k) * q_pochhammer(q, n - k));
    to_natural(lead * ratio)
}

/// Every `k`-dimensional subspace of `F₂ⁿ` as its canonical RREF basis.
pub fn grassmann_enumerate(n: usize, k: usize) -> Result<Vec<F2Matrix>> {
    grassmann_enumerate_capped(n, k, DEFAULT_ENUM_CAP)
}

pub fn grassmann_enumerate_capped(n: usize, k: usize, cap: u64) -> Result<Vec<F2Matrix>> {
    if n > MAX_ENUM_DIM {
        return Err(Error::SizeLimit(format!("enumeration needs n <= {MAX_ENUM_DIM}, got {n}")));
    }
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds n = {n}")));
    }
    let expected = grassmann_count(2, n as u32, k as u32)?;
    if expected > BigUint::from(cap) {
        return Err(Error::SizeLimit(format!("{expected} subspaces exceed the cap {cap}")));
    }
    let mut out = Vec::with_capacity(expected.to_usize().unwrap_or(0));
    let mut pivots = Vec::with_capacity(k);
    pivot_patterns(n, k, 0, &mut pivots, &mut |p| fill_free(n, p, &mut out));
    Ok(out)
}

fn pivot_patterns(n: usize, k: usize, start: usize, acc: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if acc.len() == k {
        f(acc);
        return;
    }
    for c in start..=n - (k - acc.len()) {
        acc.push(c);
        pivot_patterns(n, k, c + 1, acc, f);
        acc.pop();
    }
}

fn fill_free(n: usize, pivots: &[usize], out: &mut Vec<F2Matrix>) {
    let pivot_mask: u32 = pivots.iter().fold(0, |m, &p| m | 1 << p);
    // free slots: columns to the right of a row's pivot that are not pivots
    let slots: Vec<(usize, usize)> = pivots
        .iter()
        .enumerate()
        .flat_map(|(r, &p)| (p + 1..n).filter(move |&c| pivot_mask >> c & 1 == 0).map(move |c| (r, c)))
        .collect();
    for bits in 0u64..1 << slots.len() {
        let mut rows: Vec<u32> = pivots.iter().map(|&p| 1 << p).collect();
        for (s, &(r, c)) in slots.iter().enumerate() {
            if bits >> s & 1 == 1 {
                rows[r] |= 1 << c;
            }
        }
        out.push(F2Matrix { cols: n, rows });
    }
}

/// Homogeneous element of `Λ^k(F₂ⁿ)`, stored as the set of monomials
/// `θ_{i₁}∪…∪θ_{i_k}` with nonzero coefficient (each a bitmask of indices).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2ExtClass {
    n: usize,
    degree: usize,
    terms: BTreeSet<u32>,
}

impl F2ExtClass {
    pub fn zero(n: usize, degree: usize) -> Result<Self> {
        // degrees above n are allowed and hold only the zero class
        check_bits(n)?;
        Ok(F2ExtClass { n, degree, terms: BTreeSet::new() })
    }

    /// Sum of the monomials given as 1-based index lists; repeated monomials cancel
    /// and monomials with a repeated index vanish.
    pub fn from_monomials(n: usize, degree: usize, monomials: &[&[usize]]) -> Result<Self> {
        let mut out = F2ExtClass::zero(n, degree)?;
        for m in monomials {
            if m.len() != degree {
                return Err(Error::InvalidParameter(format!("monomial {m:?} is not of degree {degree}")));
            }
            let mut bits = 0u32;
            let mut repeated = false;
            for &i in m.iter() {
                if i == 0 || i > n {
                    return Err(Error::InvalidParameter(format!("index {i} outside 1..={n}")));
                }
                repeated |= bits >> (i - 1) & 1 == 1;
                bits |= 1 << (i - 1);
            }
            if !repeated {
                out.toggle(bits);
            }
        }
        Ok(out)
    }

    /// The degree-1 class `Σ vᵢθᵢ` for a packed vector `v`.
    pub fn from_vector(n: usize, v: u32) -> Result<Self> {
        let mut out = F2ExtClass::zero(n, 1)?;
        if v & !mask(n) != 0 {
            return Err(Error::InvalidParameter(format!("vector has bits beyond {n}")));
        }
        out.terms = (0..n).filter(|i| v >> i & 1 == 1).map(|i| 1 << i).collect();
        Ok(out)
    }

    pub fn basis(n: usize, i: usize) -> Result<Self> {
        F2ExtClass::from_monomials(n, 1, &[&[i]])
    }

    fn toggle(&mut self, bits: u32) {
        if !self.terms.remove(&bits) {
            self.terms.insert(bits);
        }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomials(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.terms.iter().map(|&b| (0..32).filter(|i| b >> i & 1 == 1).map(|i| i + 1).collect())
    }

    /// Packed coefficient vector of a degree-1 class.
    pub fn as_vector(&self) -> Result<u32> {
        if self.degree != 1 {
            return Err(Error::InvalidParameter(format!("degree {} class is not a vector", self.degree)));
        }
        Ok(self.terms.iter().fold(0, |acc, b| acc | b))
    }

    pub fn add(&self, other: &F2ExtClass) -> Result<F2ExtClass> {
        if self.n != other.n || self.degree != other.degree {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let terms = self.terms.symmetric_difference(&other.terms).copied().collect();
        Ok(F2ExtClass { n: self.n, degree: self.degree, terms })
    }

    /// Alternating matrix `M_{ij}` = coefficient of `θ_i∪θ_j`, as packed rows.
    pub fn alternating_matrix(&self) -> Result<F2Matrix> {
        if self.degree != 2 {
            return Err(Error::InvalidParameter(format!("expected degree 2, got {}", self.degree)));
        }
        let mut rows = vec![0u32; self.n];
        for &b in &self.terms {
            let i = b.trailing_zeros() as usize;
            let j = (b & (b - 1)).trailing_zeros() as usize;
            rows[i] |= 1 << j;
            rows[j] |= 1 << i;
        }
        F2Matrix::new(self.n, rows)
    }
}

impl fmt::Display for F2ExtClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, m) in self.monomials().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let idx: Vec<String> = m.iter().map(usize::to_string).collect();
            write!(f, "{{{}}}", idx.join(","))?;
        }
        Ok(())
    }
}

impl Serialize for F2ExtClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("F2ExtClass", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("terms", &self.monomials().collect::<Vec<_>>())?;
        st.end()
    }
}

/// Cup product; on the exterior model it is the wedge product mod 2.
pub fn cup(x: &F2ExtClass, y: &F2ExtClass) -> Result<F2ExtClass> {
    if x.n != y.n {
        return Err(Error::DimensionMismatch { expected: x.n, found: y.n });
    }
    let mut out = F2ExtClass::zero(x.n, x.degree + y.degree)?;
    for &a in &x.terms {
        for &b in &y.terms {
            if a & b == 0 {
                out.toggle(a | b);
            }
        }
    }
    Ok(out)
}

/// Whether `w = a∪b` for degree-1 classes `a, b`, with such a pair.
///
/// Decided by `rank M(w) ≤ 2`. If `M = xyᵀ + yxᵀ` and `M_{ij} = 1`, rows `i` and
/// `j` of `M` are a unimodular recombination of `x, y`, so they are a witness.
pub fn is_decomposable(w: &F2ExtClass) -> Result<Option<(F2ExtClass, F2ExtClass)>> {
    let m = w.alternating_matrix()?;
    if w.is_zero() {
        let z = F2ExtClass::zero(w.n, 1)?;
        return Ok(Some((z.clone(), z)));
    }
    if m.rank() > 2 {
        return Ok(None);
    }
    let b = *w.terms.iter().next().expect("nonzero class");
    let i = b.trailing_zeros() as usize;
    let j = (b & (b - 1)).trailing_zeros() as usize;
    Ok(Some((F2ExtClass::from_vector(w.n, m.rows[i])?, F2ExtClass::from_vector(w.n, m.rows[j])?)))
}

/// Whitney sum of flat line bundles, recorded by their first Stiefel–Whitney classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineBundleSum {
    classes: Vec<F2ExtClass>,
}

impl LineBundleSum {
    pub fn new(classes: Vec<F2ExtClass>) -> Result<Self> {
        if let Some(first) = classes.first() {
            for c in &classes {
                if c.degree != 1 {
                    return Err(Error::InvalidParameter("line bundle classes have degree 1".into()));
                }
                if c.n != first.n {
                    return Err(Error::DimensionMismatch { expected: first.n, found: c.n });
                }
            }
        }
        Ok(LineBundleSum { classes })
    }

    pub fn classes(&self) -> &[F2ExtClass] {
        &self.classes
    }

    pub fn is_orientable(&self) -> Result<bool> {
        Ok(self.classes.is_empty() || sw_classes(self)?.0.is_zero())
    }
}

/// `(w₁, w₂)` read off the total class `∏(1 + aᵢ)`.
pub fn sw_classes(s: &LineBundleSum) -> Result<(F2ExtClass, F2ExtClass)> {
    let n = s.classes.first().map_or(0, |c| c.n);
    let mut w1 = F2ExtClass::zero(n, 1)?;
    let mut w2 = F2ExtClass::zero(n, 2)?;
    for (i, a) in s.classes.iter().enumerate() {
        w1 = w1.add(a)?;
        for b in &s.classes[i + 1..] {
            w2 = w2.add(&cup(a, b)?)?;
        }
    }
    Ok((w1, w2))
}

/// `w₂` over all orientable sums `ℓ₁ ⊕ ℓ₂ ⊕ ℓ₃` of flat line bundles on `Tⁿ`,
/// i.e. triples `(a, b, a + b)`.
pub fn achievable_w2_set(n: usize) -> Result<BTreeSet<F2ExtClass>> {
    if n > 10 {
        return Err(Error::SizeLimit(format!("achievable w2 scan needs n <= 10, got {n}")));
    }
    let mut out = BTreeSet::new();
    for a in 0u32..1 << n {
        for b in 0u32..1 << n {
            let ls = [a, b, a ^ b].map(|v| F2ExtClass::from_vector(n, v)).into_iter().collect::<Result<Vec<_>>>()?;
            let (w1, w2) = sw_classes(&LineBundleSum::new(ls)?)?;
            debug_assert!(w1.is_zero());
            out.insert(w2);
        }
    }
    Ok(out)
}

/// `Π ↦ Λ²Π` for a 2-plane given by two basis rows.
pub fn plucker(n: usize, plane: &F2Matrix) -> Result<F2ExtClass> {
    if plane.nrows() != 2 || plane.ncols() != n {
        return Err(Error::InvalidParameter("expected a 2-row basis".into()));
    }
    cup(&F2ExtClass::from_vector(n, plane.rows[0])?, &F2ExtClass::from_vector(n, plane.rows[1])?)
}

/// Image of `Gr₂(F₂ⁿ)` under the Plücker map.
pub fn plucker_image(n: usize) -> Result<BTreeSet<F2ExtClass>> {
    grassmann_enumerate(n, 2)?.iter().map(|p| plucker(n, p)).collect()
}

/// Every element of `Λ²(F₂ⁿ)` in coordinate order of the pairs `(i < j)`.
pub fn all_degree2(n: usize) -> Result<impl Iterator<Item = F2ExtClass>> {
    if n > 7 {
        return Err(Error::SizeLimit(format!("Λ² scan needs n <= 7, got {n}")));
    }
    let pairs: Vec<u32> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (1u32 << i) | (1u32 << j))).collect();
    let count = 1u64 << pairs.len();
    Ok((0..count).map(move |bits| {
        let terms = pairs.iter().enumerate().filter(|(s, _)| bits >> s & 1 == 1).map(|(_, &p)| p).collect();
        F2ExtClass { n, degree: 2, terms }
    }))
}

/// Nonzero decomposable classes in `Λ²(F₂ⁿ)` by the rank criterion.
pub fn decomposable_scan(n: usize) -> Result<usize> {
    let mut count = 0;
    for w in all_degree2(n)? {
        if !w.is_zero() && is_decomposable(&w)?.is_some() {
            count += 1;
        }
    }
    Ok(count)
}

/// Number of `w₂` classes of orientable rank-3 flat bundles on `Tⁿ`: the
/// Plücker image of `Gr₂` together with `0`.
pub fn count_extendible_slr_classes(n: usize) -> Result<u64> {
    if n < 2 {
        return Ok(1);
    }
    Ok(plucker_image(n)?.len() as u64 + 1)
}

/// `|H¹(Tⁿ; ℤ/2)| = 2ⁿ`.
pub fn count_slc_classes(n: u32) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    Ok(BigUint::one() << n as usize)
}
