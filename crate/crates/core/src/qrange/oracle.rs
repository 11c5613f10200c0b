use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::linalg::{gaussian_vector, inner, norm, ComplexMatrix, C64};

use super::objective::{check_dims, orthogonal_unit};
use super::param::QParameter;

/// Monte-Carlo lower estimate of `w_q(a)` straight from the definition:
/// the largest `|<Ax, y>|` over `samples` random admissible pairs.
pub fn sample_oracle(a: &ComplexMatrix, qp: &QParameter, samples: usize, seed: u64) -> Result<f64> {
    check_dims(a, qp)?;
    let dim = a.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let qbar = qp.q().conj();
    let mut best = 0.0_f64;
    for _ in 0..samples {
        let x = unit_gaussian(&mut rng, dim);
        let y: Vec<C64> = if dim == 1 {
            x.iter().map(|v| v * qbar).collect()
        } else {
            let mut z = gaussian_vector(&mut rng, dim);
            let c = inner(&z, &x);
            z.iter_mut().zip(&x).for_each(|(zi, xi)| *zi -= xi * c);
            let zn = norm(&z);
            if zn > 1e-10 {
                z.iter_mut().for_each(|v| *v /= zn);
            } else {
                z = orthogonal_unit(&x);
            }
            let phase = C64::from_polar(qp.p(), rng.gen_range(0.0..std::f64::consts::TAU));
            x.iter().zip(&z).map(|(xi, zi)| xi * qbar + zi * phase).collect()
        };
        let ax = a.apply(&x)?;
        best = best.max(inner(&ax, &y).norm());
    }
    Ok(best)
}

fn unit_gaussian(rng: &mut ChaCha8Rng, dim: usize) -> Vec<C64> {
    loop {
        let mut v = gaussian_vector(rng, dim);
        let n = norm(&v);
        if n > 1e-8 {
            v.iter_mut().for_each(|z| *z /= n);
            return v;
        }
    }
}
