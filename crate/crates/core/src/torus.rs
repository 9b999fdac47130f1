//! Differential forms on `Tⁿ` and on `(interval) × Tⁿ` with trigonometric
//! polynomial coefficients.
//!
//! A coefficient is `Σ c_{k,p} e^{ik·x} tᵖ` with Gaussian-rational `c` and the
//! reality condition `c_{−k,p} = conj(c_{k,p})`. Index `n + 1` is the `dt` slot.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::{Blade, KForm, MAX_DIM};
use crate::scalar::{parse_rational, Scalar};
use crate::stable::{hitchin_dual, rho_minus};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }

    pub fn zero() -> Self {
        GaussRational::new(BigRational::zero(), BigRational::zero())
    }

    pub fn real(re: BigRational) -> Self {
        GaussRational::new(re, BigRational::zero())
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRational::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational::new(self.re.clone(), -&self.im)
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussRational::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn mul(&self, o: &Self) -> Self {
        GaussRational::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        GaussRational::new(&self.re * r, &self.im * r)
    }

    /// `iᵐ`
    pub fn i_pow(m: i64) -> Self {
        match m.rem_euclid(4) {
            0 => GaussRational::from_ints(1, 0),
            1 => GaussRational::from_ints(0, 1),
            2 => GaussRational::from_ints(-1, 0),
            _ => GaussRational::from_ints(0, -1),
        }
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "i*{}", self.im),
            (false, false) if self.im.is_negative() => write!(f, "{}-i*{}", self.re, -&self.im),
            (false, false) => write!(f, "{}+i*{}", self.re, self.im),
        }
    }
}

impl FromStr for GaussRational {
    type Err = Error;

    /// Accepts `a`, `i*b`, `a+i*b` and `a-i*b` with rational `a`, `b`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid complex coefficient {s:?}"));
        if let Some(rest) = s.strip_prefix("i*").or_else(|| s.strip_prefix("+i*")) {
            return Ok(GaussRational::new(BigRational::zero(), parse_rational(rest)?));
        }
        if let Some(rest) = s.strip_prefix("-i*") {
            return Ok(GaussRational::new(BigRational::zero(), -parse_rational(rest)?));
        }
        // split at the sign introducing the imaginary part
        if let Some(pos) = s.find("+i*").or_else(|| s.find("-i*")) {
            if pos == 0 {
                return Err(bad());
            }
            let re = parse_rational(&s[..pos])?;
            let im = parse_rational(&s[pos + 3..])?;
            let im = if s[pos..].starts_with('-') { -im } else { im };
            return Ok(GaussRational::new(re, im));
        }
        if s.contains('i') {
            return Err(bad());
        }
        Ok(GaussRational::real(parse_rational(s)?))
    }
}

type Mode = (Vec<i64>, u32);

/// Real trigonometric polynomial in `x ∈ Tⁿ`, polynomial in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrigScalar {
    n: usize,
    coeffs: BTreeMap<Mode, GaussRational>,
}

fn neg_freq(k: &[i64]) -> Vec<i64> {
    k.iter().map(|x| -x).collect()
}

impl TrigScalar {
    pub fn zero(n: usize) -> Self {
        TrigScalar { n, coeffs: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        let mut out = TrigScalar::zero(n);
        out.insert((vec![0; n], 0), GaussRational::real(c));
        out
    }

    pub fn from_int(n: usize, c: i64) -> Self {
        TrigScalar::constant(n, BigRational::from_integer(c.into()))
    }

    /// `c·e^{ik·x}tᵖ + conj(c)·e^{−ik·x}tᵖ`
    pub fn mode(k: &[i64], p: u32, c: GaussRational) -> Self {
        let n = k.len();
        let mut out = TrigScalar::zero(n);
        out.insert((neg_freq(k), p), c.conj());
        out.insert((k.to_vec(), p), c);
        // for k = 0 both inserts hit the same key and leave 2·Re(c)
        out
    }

    /// `cos(k·x)`
    pub fn cos(k: &[i64]) -> Self {
        TrigScalar::mode(k, 0, GaussRational::real(BigRational::new(1.into(), 2.into())))
    }

    /// `sin(k·x) = (e^{ik·x} − e^{−ik·x}) / 2i`
    pub fn sin(k: &[i64]) -> Self {
        TrigScalar::mode(k, 0, GaussRational::new(BigRational::zero(), BigRational::new((-1).into(), 2.into())))
    }

    /// `tᵖ`
    pub fn t_pow(n: usize, p: u32) -> Self {
        let mut out = TrigScalar::zero(n);
        out.insert((vec![0; n], p), GaussRational::real(BigRational::one()));
        out
    }

    /// Builds from explicit `(k, p, c_{k,p})` triples, rejecting input that
    /// violates the reality condition.
    pub fn from_modes(n: usize, modes: Vec<(Vec<i64>, u32, GaussRational)>) -> Result<Self> {
        let mut out = TrigScalar::zero(n);
        for (k, p, c) in modes {
            if k.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: k.len() });
            }
            out.insert((k, p), c);
        }
        for ((k, p), c) in &out.coeffs {
            let partner = out.coeffs.get(&(neg_freq(k), *p));
            if partner != Some(&c.conj()) {
                return Err(Error::InvalidParameter(format!(
                    "coefficients at frequencies {k:?} and its negative are not conjugate"
                )));
            }
        }
        Ok(out)
    }

    fn insert(&mut self, key: Mode, c: GaussRational) {
        let entry = self.coeffs.entry(key.clone()).or_insert_with(GaussRational::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn modes(&self) -> impl Iterator<Item = (&[i64], u32, &GaussRational)> {
        self.coeffs.iter().map(|((k, p), c)| (k.as_slice(), *p, c))
    }

    pub fn t_degree(&self) -> u32 {
        self.coeffs.keys().map(|(_, p)| *p).max().unwrap_or(0)
    }

    pub fn add(&self, o: &TrigScalar) -> TrigScalar {
        let mut out = self.clone();
        for (key, c) in &o.coeffs {
            out.insert(key.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> TrigScalar {
        self.scale(&-BigRational::one())
    }

    pub fn sub(&self, o: &TrigScalar) -> TrigScalar {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &BigRational) -> TrigScalar {
        let mut out = TrigScalar::zero(self.n);
        for (key, c) in &self.coeffs {
            out.insert(key.clone(), c.scale(r));
        }
        out
    }

    pub fn mul(&self, o: &TrigScalar) -> TrigScalar {
        let mut out = TrigScalar::zero(self.n);
        for ((k1, p1), c1) in &self.coeffs {
            for ((k2, p2), c2) in &o.coeffs {
                let k: Vec<i64> = k1.iter().zip(k2).map(|(a, b)| a + b).collect();
                out.insert((k, p1 + p2), c1.mul(c2));
            }
        }
        out
    }

    /// `∂/∂xʲ`, 1-based.
    pub fn partial_x(&self, j: usize) -> TrigScalar {
        let mut out = TrigScalar::zero(self.n);
        for ((k, p), c) in &self.coeffs {
            let f = GaussRational::from_ints(0, k[j - 1]);
            out.insert((k.clone(), *p), c.mul(&f));
        }
        out
    }

    pub fn partial_t(&self) -> TrigScalar {
        let mut out = TrigScalar::zero(self.n);
        for ((k, p), c) in &self.coeffs {
            if *p > 0 {
                out.insert((k.clone(), p - 1), c.scale(&BigRational::from_integer((*p).into())));
            }
        }
        out
    }

    /// Value at `x = (π/2)·r`, `t = t₀`; needs `k·r ∈ ℤ` for every frequency present.
    pub fn eval_exact(&self, r: &[BigRational], t: &BigRational) -> Result<BigRational> {
        if r.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: r.len() });
        }
        let mut acc = GaussRational::zero();
        for ((k, p), c) in &self.coeffs {
            let phase: BigRational = k.iter().zip(r).map(|(a, b)| b * BigRational::from_integer((*a).into())).sum();
            if !phase.is_integer() {
                return Err(Error::InvalidParameter(format!("frequency {k:?} is not exactly evaluable here")));
            }
            let m = (phase.to_integer() % 4i64).to_i64().expect("reduced mod 4");
            let tp = num_traits::pow(t.clone(), *p as usize);
            acc = acc.add(&c.mul(&GaussRational::i_pow(m)).scale(&tp));
        }
        debug_assert!(acc.im.is_zero(), "reality condition");
        Ok(acc.re)
    }

    pub fn eval_f64(&self, x: &[f64], t: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|((k, p), c)| {
                let phase: f64 = k.iter().zip(x).map(|(a, b)| *a as f64 * b).sum();
                let (re, im) = (c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN));
                (re * phase.cos() - im * phase.sin()) * t.powi(*p as i32)
            })
            .sum()
    }
}

/// `k`-form on `Tⁿ` (or on `(interval) × Tⁿ` when `cylinder` is set) with
/// [`TrigScalar`] coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrigForm {
    n: usize,
    cylinder: bool,
    degree: usize,
    terms: BTreeMap<Blade, TrigScalar>,
}

impl TrigForm {
    pub fn zero(n: usize, cylinder: bool, degree: usize) -> Result<Self> {
        let total = n + cylinder as usize;
        if total > MAX_DIM {
            return Err(Error::SizeLimit(format!("{total} directions exceed {MAX_DIM}")));
        }
        if degree > total {
            return Err(Error::DegreeOverflow { degree, dim: total });
        }
        Ok(TrigForm { n, cylinder, degree, terms: BTreeMap::new() })
    }

    /// Constant-coefficient form. On a cylinder, index `n + 1` of `f` is `dt`.
    pub fn from_kform(f: &KForm, n: usize, cylinder: bool) -> Result<Self> {
        let mut out = TrigForm::zero(n, cylinder, f.degree())?;
        if f.dim() != out.total_dim() {
            return Err(Error::DimensionMismatch { expected: out.total_dim(), found: f.dim() });
        }
        for (b, c) in f.terms() {
            let c = c.as_rational().ok_or_else(|| Error::InvalidParameter("irrational coefficient".into()))?;
            out.add_term(b, TrigScalar::constant(n, c.clone()));
        }
        Ok(out)
    }

    /// `f·θ^I` from 1-based indices, sorted with sign.
    pub fn monomial(n: usize, cylinder: bool, idx: &[usize], f: TrigScalar) -> Result<Self> {
        let mut out = TrigForm::zero(n, cylinder, idx.len())?;
        if f.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: f.n() });
        }
        if idx.iter().any(|&i| i == 0 || i > out.total_dim()) {
            return Err(Error::InvalidParameter(format!("index outside 1..={}", out.total_dim())));
        }
        if let Some((b, sign)) = Blade::from_indices(idx) {
            let f = if sign < 0 { f.neg() } else { f };
            out.add_term(b, f);
        }
        Ok(out)
    }

    fn add_term(&mut self, b: Blade, f: TrigScalar) {
        let sum = match self.terms.remove(&b) {
            Some(g) => g.add(&f),
            None => f,
        };
        if !sum.is_zero() {
            self.terms.insert(b, sum);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_cylinder(&self) -> bool {
        self.cylinder
    }

    pub fn total_dim(&self) -> usize {
        self.n + self.cylinder as usize
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &TrigScalar)> {
        self.terms.iter().map(|(b, f)| (*b, f))
    }

    fn same_space(&self, o: &TrigForm) -> Result<()> {
        if self.n != o.n || self.cylinder != o.cylinder {
            return Err(Error::DimensionMismatch { expected: self.total_dim(), found: o.total_dim() });
        }
        Ok(())
    }

    pub fn add(&self, o: &TrigForm) -> Result<TrigForm> {
        self.same_space(o)?;
        if self.degree != o.degree {
            return Err(Error::InvalidParameter(format!("degree mismatch: {} vs {}", self.degree, o.degree)));
        }
        let mut out = self.clone();
        for (b, f) in &o.terms {
            out.add_term(*b, f.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &TrigForm) -> Result<TrigForm> {
        self.add(&o.scale_fn(&TrigScalar::from_int(self.n, -1)))
    }

    pub fn scale_fn(&self, f: &TrigScalar) -> TrigForm {
        let mut out = TrigForm { terms: BTreeMap::new(), ..self.clone() };
        for (b, g) in &self.terms {
            out.add_term(*b, g.mul(f));
        }
        out
    }

    pub fn wedge(&self, o: &TrigForm) -> Result<TrigForm> {
        self.same_space(o)?;
        let mut out = TrigForm::zero(self.n, self.cylinder, self.degree + o.degree)?;
        for (a, f) in &self.terms {
            for (b, g) in &o.terms {
                if let Some(sign) = a.wedge_sign(*b) {
                    let prod = f.mul(g);
                    out.add_term(Blade::from_bits(a.bits() | b.bits()), if sign < 0 { prod.neg() } else { prod });
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative, including `dt∧∂_t` on a cylinder.
    pub fn d(&self) -> Result<TrigForm> {
        let mut out = TrigForm::zero(self.n, self.cylinder, self.degree + 1)?;
        for (b, f) in &self.terms {
            let mut push = |slot: usize, g: TrigScalar| {
                if g.is_zero() {
                    return;
                }
                // dxʲ∧θ^I
                if let Some(sign) = Blade::single(slot).wedge_sign(*b) {
                    let g = if sign < 0 { g.neg() } else { g };
                    out.add_term(Blade::from_bits(b.bits() | Blade::single(slot).bits()), g);
                }
            };
            for j in 1..=self.n {
                push(j, f.partial_x(j));
            }
            if self.cylinder {
                push(self.n + 1, f.partial_t());
            } else if f.t_degree() > 0 {
                return Err(Error::InvalidParameter("t-dependent coefficient on a torus form".into()));
            }
        }
        Ok(out)
    }

    /// `π*` along the projection `(t, x) ↦ x`.
    pub fn lift(&self) -> Result<TrigForm> {
        if self.cylinder {
            return Ok(self.clone());
        }
        let mut out = TrigForm::zero(self.n, true, self.degree)?;
        out.terms = self.terms.clone();
        Ok(out)
    }

    /// Exact value at `x = (π/2)·r`, `t = t₀`, as a constant form on `ℝ^{total_dim}`.
    pub fn eval_exact(&self, r: &[BigRational], t: &BigRational) -> Result<KForm> {
        let mut terms = Vec::new();
        for (b, f) in &self.terms {
            let v = f.eval_exact(r, t)?;
            terms.push((b.indices().collect::<Vec<_>>(), Scalar::from_rational(v)));
        }
        KForm::from_terms(self.total_dim(), self.degree, terms)
    }

    pub fn eval_f64(&self, x: &[f64], t: f64) -> Vec<(Vec<usize>, f64)> {
        self.terms.iter().map(|(b, f)| (b.indices().collect(), f.eval_f64(x, t))).collect()
    }
}

impl fmt::Display for TrigForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (b, g)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let modes: Vec<String> = g
                .modes()
                .map(|(k, p, c)| {
                    let tp = if p > 0 { format!("t^{p}") } else { String::new() };
                    format!("({c})e{k:?}{tp}")
                })
                .collect();
            write!(f, "[{}]θ^{b}", modes.join(" + "))?;
        }
        Ok(())
    }
}

/// `ρ_a = cos(a·x)ρ₋ + sin(a·x)ρ̂₋` on `T⁶`, with `ρ̂₋` the Hitchin dual of `ρ₋`.
pub fn build_rho_a(a: &[i64]) -> Result<TrigForm> {
    if a.len() != 6 {
        return Err(Error::DimensionMismatch { expected: 6, found: a.len() });
    }
    let re = TrigForm::from_kform(&rho_minus(), 6, false)?.scale_fn(&TrigScalar::cos(a));
    let im = TrigForm::from_kform(&hitchin_dual(&rho_minus())?, 6, false)?.scale_fn(&TrigScalar::sin(a));
    re.add(&im)
}

/// `dt∧π*ω + π*ρ + t·π*dω` on `(interval) × Tⁿ`; its derivative is `π*dρ`.
pub fn cylinder_extend(rho: &TrigForm, omega: &TrigForm) -> Result<TrigForm> {
    if rho.is_cylinder() || omega.is_cylinder() || rho.degree() != 3 || omega.degree() != 2 {
        return Err(Error::UnsupportedShape("expected a 3-form and a 2-form on the torus".into()));
    }
    rho.same_space(omega)?;
    let n = rho.n();
    let dt = TrigForm::monomial(n, true, &[n + 1], TrigScalar::from_int(n, 1))?;
    let t = TrigScalar::t_pow(n, 1);
    dt.wedge(&omega.lift()?)?.add(&rho.lift()?)?.add(&omega.d()?.lift()?.scale_fn(&t))
}

type ModeTerm = (Vec<i64>, u32, GaussRational);

#[derive(Serialize, Deserialize)]
struct TermJson {
    idx: Vec<usize>,
    freq: Vec<i64>,
    #[serde(default, skip_serializing_if = "is_zero_u32")]
    tdeg: u32,
    c: String,
}

fn is_zero_u32(p: &u32) -> bool {
    *p == 0
}

#[derive(Serialize, Deserialize)]
struct FormJson {
    dim: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    t: bool,
    degree: usize,
    terms: Vec<TermJson>,
}

impl Serialize for TrigForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .flat_map(|(b, f)| {
                f.modes().map(move |(k, p, c)| TermJson {
                    idx: b.indices().collect(),
                    freq: k.to_vec(),
                    tdeg: p,
                    c: c.to_string(),
                })
            })
            .collect();
        FormJson { dim: self.n, t: self.cylinder, degree: self.degree, terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TrigForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FormJson::deserialize(d)?;
        TrigForm::from_json_repr(raw).map_err(serde::de::Error::custom)
    }
}

impl TrigForm {
    fn from_json_repr(raw: FormJson) -> Result<TrigForm> {
        let mut out = TrigForm::zero(raw.dim, raw.t, raw.degree)?;
        let mut grouped: BTreeMap<Vec<usize>, Vec<ModeTerm>> = BTreeMap::new();
        for term in raw.terms {
            if term.idx.len() != raw.degree || term.idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parse(format!("index tuple {:?} is not strictly increasing", term.idx)));
            }
            grouped.entry(term.idx).or_default().push((term.freq, term.tdeg, term.c.parse()?));
        }
        for (idx, modes) in grouped {
            let f = TrigScalar::from_modes(raw.dim, modes)?;
            out = out.add(&TrigForm::monomial(raw.dim, raw.t, &idx, f)?)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<TrigForm> {
        let raw: FormJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        TrigForm::from_json_repr(raw)
    }
}
