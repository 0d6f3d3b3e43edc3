#![allow(dead_code)]

use dstnet::reference::DenseMatrix;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    // Box-Muller
    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

/// Haar-ish random real orthogonal matrix from the QR factor of a Gaussian
/// matrix.
pub fn random_orthogonal(n: usize, rng: &mut impl Rng) -> DenseMatrix {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| gaussian(rng));
    let q = g.qr().q();
    DenseMatrix::from_fn(n, n, |r, c| Complex64::new(q[(r, c)], 0.0))
}

pub fn random_complex_vec(n: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(gaussian(rng), gaussian(rng))).collect()
}

pub fn random_real_vec(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| gaussian(rng)).collect()
}

pub fn normalized(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = norm(&v);
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Real symmetric eigenvalues by nalgebra, ascending.
pub fn symmetric_eigenvalues(m: &DenseMatrix) -> Vec<f64> {
    let n = m.rows();
    let a = DMatrix::<f64>::from_fn(n, n, |r, c| m[(r, c)].re);
    let mut ev: Vec<f64> = a.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Element counts from the gate-count recursions, evaluated independently of
/// any plan: returns (C_I(2^k − 1), C_III(2^k)) for k = 1..=max_level.
pub fn recursive_counts(max_level: u32) -> Vec<(u64, u64)> {
    let mut out = vec![(0u64, 1u64)];
    for k in 1..max_level {
        let m = 1u64 << k;
        let (c1, c3) = out[k as usize - 1];
        // rotations, butterflies, Ĝ per DST-III step
        let next_c3 = 2 * c3 + (m - 1) + m + (m / 2 - 1);
        let next_c1 = c1 + c3 + (m - 1);
        out.push((next_c1, next_c3));
    }
    out
}
