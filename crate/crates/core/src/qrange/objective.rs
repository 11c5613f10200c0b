//! The reduced objective on the unit sphere.
//!
//! Fix a unit `x` and write `mu = <Ax, x>` and `r = ||Ax - mu x||`. Every
//! admissible `y` (unit, `<x, y> = q`) has the form
//! `y = conj(q) x + p v` with `v` a unit vector orthogonal to `x` and
//! `p = sqrt(1 - |q|^2)`. Then
//!
//! ```text
//! <Ax, y> = q mu + p <Ax, v> = q mu + p <Ax - mu x, v>,
//! ```
//!
//! and `<Ax - mu x, v>` ranges over the disk of radius `r` (its boundary
//! circle when the dimension is 2). So for fixed `x` the attainable values
//! fill a disk centred at `q mu` with radius `p r`, and
//!
//! ```text
//! sup_y |<Ax, y>| = |q| |mu| + p r,           r^2 = ||Ax||^2 - |mu|^2,
//! sup_y Re(e^{-i theta} <Ax, y>) = Re(e^{-i theta} q mu) + p r.
//! ```
//!
//! The first is maximized for the radius, the second for the support
//! function. The witness `y` points the disk term along `q mu` (resp.
//! along `e^{i theta}`).
//!
//! Gradients are taken in the real inner product `Re <u, v>` on `C^n`:
//! `grad |mu| = (conj(mu) Ax + mu A*x) / |mu|`,
//! `grad Re(w mu) = w Ax + conj(w) A*x`,
//! `grad r = (A*Ax - conj(mu) Ax - mu A*x) / r`.

use crate::error::{Error, Result};
use crate::linalg::{inner, norm, ComplexMatrix, UnitVector, C64, ONE, ZERO};

use super::param::QParameter;

/// Below this, `|mu|` and `r` are treated as zero and their terms
/// contribute a fixed subgradient.
const KINK: f64 = 1e-300;

/// `|q| |<Ax, x>| + p sqrt(||Ax||^2 - |<Ax, x>|^2)`: the largest `|<Ax, y>|`
/// over admissible `y` for this `x`.
pub fn q_objective(a: &ComplexMatrix, x: &UnitVector, qp: &QParameter) -> Result<f64> {
    check_dims(a, qp)?;
    if x.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: x.dim(),
        });
    }
    let obj = QObjective::radius(a, qp);
    let mut scratch = Scratch::new(a.dim());
    Ok(obj.value(x.as_slice(), &mut scratch))
}

pub(crate) fn check_dims(a: &ComplexMatrix, qp: &QParameter) -> Result<()> {
    if a.dim() == 1 && !qp.is_classical() {
        return Err(Error::EmptyRange(qp.modulus()));
    }
    if !a.is_finite() {
        return Err(Error::InvalidMatrix("non-finite entries".into()));
    }
    Ok(())
}

/// The part of the objective that depends on `mu`.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Linear {
    /// `m |mu|`
    Modulus(f64),
    /// `Re(w mu)`; `direction` is the unit vector `e^{i theta}`.
    Directed { w: C64, direction: C64 },
}

pub(crate) struct Scratch {
    ax: Vec<C64>,
    ahx: Vec<C64>,
    ahax: Vec<C64>,
}

impl Scratch {
    pub(crate) fn new(dim: usize) -> Self {
        Self {
            ax: vec![ZERO; dim],
            ahx: vec![ZERO; dim],
            ahax: vec![ZERO; dim],
        }
    }
}

/// Quantities of `x` the objective and the witness are built from.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Moments {
    pub mu: C64,
    /// `||Ax - mu x||`
    pub r: f64,
}

pub(crate) struct QObjective<'a> {
    a: &'a ComplexMatrix,
    linear: Linear,
    p: f64,
}

impl<'a> QObjective<'a> {
    pub(crate) fn radius(a: &'a ComplexMatrix, qp: &QParameter) -> Self {
        Self {
            a,
            linear: Linear::Modulus(qp.modulus()),
            p: qp.p(),
        }
    }

    /// Support function in direction `theta`: `w = e^{-i theta} q`.
    pub(crate) fn support(a: &'a ComplexMatrix, qp: &QParameter, theta: f64) -> Self {
        Self {
            a,
            linear: Linear::Directed {
                w: C64::from_polar(1.0, -theta) * qp.q(),
                direction: C64::from_polar(1.0, theta),
            },
            p: qp.p(),
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.a.dim()
    }

    /// Largest entry modulus; a size reference for stopping rules.
    pub(crate) fn scale(&self) -> f64 {
        self.a.max_abs()
    }

    fn moments(&self, x: &[C64], ax: &mut [C64]) -> Moments {
        self.a.apply_into(x, ax);
        let mu = inner(ax, x);
        // ||Ax - mu x|| directly; the difference ||Ax||^2 - |mu|^2 cancels badly
        let r2: f64 = ax.iter().zip(x).map(|(a, xi)| (a - xi * mu).norm_sqr()).sum();
        Moments { mu, r: r2.sqrt() }
    }

    fn combine(&self, m: Moments) -> f64 {
        let lin = match self.linear {
            Linear::Modulus(q) => q * m.mu.norm(),
            Linear::Directed { w, .. } => (w * m.mu).re,
        };
        lin + self.p * m.r
    }

    pub(crate) fn value(&self, x: &[C64], s: &mut Scratch) -> f64 {
        let m = self.moments(x, &mut s.ax);
        self.combine(m)
    }

    /// Value and the tangential (Riemannian) gradient at unit `x`.
    pub(crate) fn value_and_gradient(&self, x: &[C64], s: &mut Scratch, grad: &mut [C64]) -> f64 {
        let m = self.moments(x, &mut s.ax);
        self.a.apply_adjoint_into(x, &mut s.ahx);

        // coefficients of Ax and A*x contributed by the linear term
        let (mut c_ax, mut c_ahx) = match self.linear {
            Linear::Modulus(q) => {
                let nm = m.mu.norm();
                if nm > KINK {
                    (m.mu.conj() * (q / nm), m.mu * (q / nm))
                } else {
                    // any unit phase is a subgradient at mu = 0
                    (ONE * q, ONE * q)
                }
            }
            Linear::Directed { w, .. } => (w, w.conj()),
        };
        let use_r = self.p > 0.0 && m.r > KINK;
        if use_r {
            let k = self.p / m.r;
            c_ax -= m.mu.conj() * k;
            c_ahx -= m.mu * k;
            self.a.apply_adjoint_into(&s.ax, &mut s.ahax);
            for (i, g) in grad.iter_mut().enumerate() {
                *g = c_ax * s.ax[i] + c_ahx * s.ahx[i] + s.ahax[i] * k;
            }
        } else {
            for (i, g) in grad.iter_mut().enumerate() {
                *g = c_ax * s.ax[i] + c_ahx * s.ahx[i];
            }
        }
        // project onto the tangent space {v : Re<v, x> = 0}
        let radial = inner(grad, x).re;
        for (g, xi) in grad.iter_mut().zip(x) {
            *g -= xi * radial;
        }
        self.combine(m)
    }

    /// An admissible `y` attaining the objective at `x`, for constraint
    /// value `q` (`<x, y> = q`).
    pub(crate) fn partner(&self, x: &[C64], q: C64) -> Vec<C64> {
        let n = self.dim();
        let mut ax = vec![ZERO; n];
        let m = self.moments(x, &mut ax);
        let qbar = q.conj();
        if self.p == 0.0 {
            return x.iter().map(|xi| xi * qbar).collect();
        }
        // unit z orthogonal to x along Ax - mu x
        let mut z: Vec<C64> = ax.iter().zip(x).map(|(a, xi)| a - xi * m.mu).collect();
        let zn = norm(&z);
        if zn > 1e-12 * (1.0 + m.mu.norm()) {
            z.iter_mut().for_each(|v| *v /= zn);
        } else {
            z = orthogonal_unit(x);
        }
        // <Ax, y> = q mu + p e^{-i phi} <Ax, z>; choose phi so that the
        // disk term lines up with the linear term.
        let target = match self.linear {
            Linear::Modulus(_) => q * m.mu,
            Linear::Directed { direction, .. } => direction,
        };
        let along = inner(&ax, &z);
        let phase = if target.norm() > KINK && along.norm() > KINK {
            // want e^{-i phi} along parallel to target
            let e = target / target.norm() * (along.conj() / along.norm());
            e.conj()
        } else if along.norm() > KINK {
            (along.conj() / along.norm()).conj()
        } else {
            ONE
        };
        x.iter()
            .zip(&z)
            .map(|(xi, zi)| xi * qbar + zi * phase * self.p)
            .collect()
    }
}

/// Some unit vector orthogonal to the unit vector `x` (`dim >= 2`).
pub(crate) fn orthogonal_unit(x: &[C64]) -> Vec<C64> {
    let n = x.len();
    // Gram-Schmidt against the basis vector where x is smallest
    let j = (0..n)
        .min_by(|&a, &b| x[a].norm().total_cmp(&x[b].norm()))
        .expect("non-empty");
    let mut z: Vec<C64> = x.iter().map(|xi| -xi * x[j].conj()).collect();
    z[j] += ONE;
    let zn = norm(&z);
    z.iter_mut().for_each(|v| *v /= zn);
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gaussian_vector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit(v: Vec<C64>) -> UnitVector {
        UnitVector::normalize(v).unwrap()
    }

    #[test]
    fn identity_gives_q() {
        let qp = QParameter::real(0.7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for dim in 2..5 {
            let x = unit(gaussian_vector(&mut rng, dim));
            let v = q_objective(&ComplexMatrix::identity(dim), &x, &qp).unwrap();
            assert!((v - 0.7).abs() < 1e-14);
        }
    }

    #[test]
    fn shift_orthogonal_image() {
        let qp = QParameter::real(0.6).unwrap();
        let x = UnitVector::basis(2, 1);
        let v = q_objective(&ComplexMatrix::jordan(2), &x, &qp).unwrap();
        assert!((v - 0.8).abs() < 1e-15);
    }

    #[test]
    fn zero_matrix_and_dim_one() {
        let qp = QParameter::real(0.5).unwrap();
        let x = UnitVector::basis(3, 0);
        assert_eq!(q_objective(&ComplexMatrix::zeros(3), &x, &qp).unwrap(), 0.0);
        let one = ComplexMatrix::scalar(ONE);
        assert!(matches!(q_objective(&one, &UnitVector::basis(1, 0), &qp), Err(Error::EmptyRange(_))));
        let classical = QParameter::real(1.0).unwrap();
        assert_eq!(q_objective(&one, &UnitVector::basis(1, 0), &classical).unwrap(), 1.0);
    }

    fn tangent_fd_check(obj: &QObjective, x: &[C64], seed: u64) {
        let n = x.len();
        let mut s = Scratch::new(n);
        let mut g = vec![ZERO; n];
        obj.value_and_gradient(x, &mut s, &mut g);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut dir = gaussian_vector(&mut rng, n);
        let radial = inner(&dir, x).re;
        dir.iter_mut().zip(x).for_each(|(d, xi)| *d -= xi * radial);
        let h = 1e-6;
        let step = |t: f64| -> f64 {
            let y: Vec<C64> = x.iter().zip(&dir).map(|(a, b)| a + b * t).collect();
            let yn = norm(&y);
            let y: Vec<C64> = y.iter().map(|v| v / yn).collect();
            obj.value(&y, &mut Scratch::new(n))
        };
        let fd = (step(h) - step(-h)) / (2.0 * h);
        let analytic = inner(&g, &dir).re;
        assert!((fd - analytic).abs() < 1e-6 * (1.0 + analytic.abs()), "fd {fd} vs {analytic}");
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..20 {
            let dim = 2 + trial % 4;
            let a = ComplexMatrix::gaussian(&mut rng, dim);
            let x = unit(gaussian_vector(&mut rng, dim)).into_inner();
            for q in [0.2, 0.5, 0.9, 1.0] {
                let qp = QParameter::new(C64::from_polar(q, 0.3 * trial as f64)).unwrap();
                tangent_fd_check(&QObjective::radius(&a, &qp), &x, trial as u64);
                tangent_fd_check(&QObjective::support(&a, &qp, 1.1 * trial as f64), &x, trial as u64 + 99);
            }
        }
    }

    #[test]
    fn partner_is_admissible_and_attains() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..30 {
            let dim = 2 + trial % 3;
            let a = ComplexMatrix::gaussian(&mut rng, dim);
            let x = unit(gaussian_vector(&mut rng, dim)).into_inner();
            let qp = QParameter::new(C64::from_polar(0.1 + 0.03 * trial as f64, trial as f64)).unwrap();
            let obj = QObjective::radius(&a, &qp);
            let y = obj.partner(&x, qp.q());
            assert!((norm(&y) - 1.0).abs() < 1e-12);
            assert!((inner(&x, &y) - qp.q()).norm() < 1e-12);
            let ax = a.apply(&x).unwrap();
            let v = obj.value(&x, &mut Scratch::new(dim));
            assert!((inner(&ax, &y).norm() - v).abs() < 1e-12);

            let theta = 0.7 * trial as f64;
            let sup = QObjective::support(&a, &qp, theta);
            let y = sup.partner(&x, qp.q());
            let h = (C64::from_polar(1.0, -theta) * inner(&ax, &y)).re;
            assert!((h - sup.value(&x, &mut Scratch::new(dim))).abs() < 1e-12);
        }
    }
}
