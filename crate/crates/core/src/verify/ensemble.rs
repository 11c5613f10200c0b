//! Random test inputs.

use rand::Rng;

use crate::linalg::{gaussian_vector, inner, norm, ComplexMatrix, C64, ZERO};

/// Haar-distributed unitary: Gram-Schmidt on the columns of a complex
/// Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v = gaussian_vector(rng, dim);
        // two passes keep the columns orthogonal to rounding level
        for _ in 0..2 {
            for c in &cols {
                let k = inner(&v, c);
                v.iter_mut().zip(c).for_each(|(vi, ci)| *vi -= ci * k);
            }
        }
        let n = norm(&v);
        if n > 1e-6 {
            v.iter_mut().for_each(|z| *z /= n);
            cols.push(v);
        }
    }
    ComplexMatrix::from_fn(dim, |r, c| cols[c][r])
}

/// Complex Gaussian matrix scaled to unit operator norm.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    loop {
        let a = ComplexMatrix::gaussian(rng, dim);
        let n = a.operator_norm();
        if n > 1e-8 {
            return a.scale(C64::new(1.0 / n, 0.0));
        }
    }
}

/// Uniform point on the unit circle.
pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    let mut v = gaussian_vector(rng, dim);
    let n = norm(&v);
    if n == 0.0 {
        v[0] = C64::new(1.0, 0.0);
        return v;
    }
    v.iter_mut().for_each(|z| *z /= n);
    debug_assert!(v.iter().all(|z| *z != ZERO || dim > 0));
    v
}
