#![allow(dead_code)]

use g2forms::torus::{GaussRational, TrigForm, TrigScalar};
use g2forms::{Blade, KForm, Matrix, Scalar, SymBilinear};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int(rng: &mut impl Rng, lo: i64, hi: i64) -> Scalar {
    Scalar::from(rng.gen_range(lo..=hi))
}

pub fn vector(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> Vec<Scalar> {
    (0..n).map(|_| int(rng, lo, hi)).collect()
}

pub fn nonzero_vector(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> Vec<Scalar> {
    loop {
        let v = vector(rng, n, lo, hi);
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// Integer matrix with positive determinant.
pub fn det_positive(rng: &mut impl Rng, n: usize) -> Matrix {
    loop {
        let mut m = Matrix::from_fn(n, n, |_, _| int(rng, -2, 2));
        let d = m.det().unwrap();
        if d.is_zero() {
            continue;
        }
        if d.is_negative() {
            for j in 0..n {
                m[(0, j)] = -&m[(0, j)];
            }
        }
        return m;
    }
}

pub fn invertible(rng: &mut impl Rng, n: usize) -> Matrix {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| int(rng, -3, 3));
        if !m.det().unwrap().is_zero() {
            return m;
        }
    }
}

/// Random form with each basis coefficient nonzero with probability `density`.
pub fn form(rng: &mut impl Rng, n: usize, k: usize, density: f64, range: i64) -> KForm {
    KForm::from_fn(n, k, |_| {
        if rng.gen_bool(density) {
            int(rng, -range, range)
        } else {
            Scalar::zero()
        }
    })
    .unwrap()
}

pub fn symmetric(rng: &mut impl Rng, n: usize) -> SymBilinear {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = int(rng, -3, 3);
            m[(i, j)] = v.clone();
            m[(j, i)] = v;
        }
    }
    SymBilinear::new(m).unwrap()
}

pub fn trig_scalar(rng: &mut impl Rng, n: usize, modes: usize, max_freq: i64, max_tdeg: u32) -> TrigScalar {
    let mut out = TrigScalar::zero(n);
    for _ in 0..modes {
        let k: Vec<i64> = (0..n).map(|_| rng.gen_range(-max_freq..=max_freq)).collect();
        let c = GaussRational::from_ints(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        let p = rng.gen_range(0..=max_tdeg);
        out = out.add(&TrigScalar::mode(&k, p, c));
    }
    out
}

pub fn trig_form(rng: &mut impl Rng, n: usize, cylinder: bool, k: usize, terms: usize, max_freq: i64) -> TrigForm {
    let total = n + cylinder as usize;
    let blades = Blade::all(total, k);
    let mut out = TrigForm::zero(n, cylinder, k).unwrap();
    for _ in 0..terms {
        let b = *blades.choose(rng).unwrap();
        let idx: Vec<usize> = b.indices().collect();
        let f = trig_scalar(rng, n, 2, max_freq, if cylinder { 2 } else { 0 });
        out = out.add(&TrigForm::monomial(n, cylinder, &idx, f).unwrap()).unwrap();
    }
    out
}
