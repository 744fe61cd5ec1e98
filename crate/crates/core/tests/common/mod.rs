//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resilience::numerics::{Matrix, Vector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn vec(x: &[f64]) -> Vector {
    Vector::from_column_slice(x)
}

pub fn uniform(rng: &mut ChaCha8Rng, r: usize, c: usize, scale: f64) -> Matrix {
    Matrix::from_fn(r, c, |_, _| rng.random_range(-scale..=scale))
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vector {
    Vector::from_fn(n, |_, _| rng.random_range(-scale..=scale))
}

pub fn robot_b() -> Matrix {
    Matrix::from_row_slice(2, 3, &[2.0, 1.0, 1.0, 0.2, -1.0, 1.0])
}

/// `(B, B_c, B_uc)` for the robot with its third thruster lost.
pub fn robot_split() -> (Matrix, Matrix, Matrix) {
    let b = robot_b();
    (
        b.clone(),
        b.columns(0, 2).into_owned(),
        b.columns(2, 1).into_owned(),
    )
}

/// Right inverse `Mᵀ (M Mᵀ)⁻¹` of a full-row-rank matrix.
pub fn normal_equation_pinv(m: &Matrix) -> Matrix {
    let gram = m * m.transpose();
    m.transpose() * gram.try_inverse().expect("full row rank")
}

/// Random `n×m` matrix whose smallest singular value is at least 0.2.
pub fn well_conditioned(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Matrix {
    loop {
        let b = uniform(rng, n, m, 2.0);
        let gram = &b * b.transpose();
        let eig = gram.symmetric_eigen();
        if eig.eigenvalues.min() > 0.04 {
            return b;
        }
    }
}

/// `(B, B_c, B_uc)` with well-conditioned `B_c`.
pub fn random_split(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    p: usize,
) -> (Matrix, Matrix, Matrix) {
    let b_c = well_conditioned(rng, n, m);
    let b_uc = uniform(rng, n, p, 2.0);
    let mut b = Matrix::zeros(n, m + p);
    b.columns_mut(0, m).copy_from(&b_c);
    b.columns_mut(m, p).copy_from(&b_uc);
    (b, b_c, b_uc)
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn expm(a: &Matrix) -> Matrix {
    let n = a.nrows();
    let norm = a.abs().row_sum().max();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a / 2f64.powi(squarings as i32);
    let mut term = Matrix::identity(n, n);
    let mut sum = Matrix::identity(n, n);
    for k in 1..=30 {
        term = &term * &scaled / k as f64;
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Vertices of `[-h, h]ⁿ`.
pub fn vertices(n: usize, h: f64) -> Vec<Vector> {
    (0..1usize << n)
        .map(|mask| Vector::from_fn(n, |i, _| if mask >> i & 1 == 1 { h } else { -h }))
        .collect()
}

/// Composite Simpson rule with `intervals` (even) sub-intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let mut acc = f(a) + f(b);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}
