//! Closed form for 2x2 matrices.
//!
//! Every 2x2 matrix is unitarily similar to `e^{it} [[g, a], [b, g]]` with
//! `a >= b >= 0`. With `c = (a + b)/2`, `d = (a - b)/2` and real `q`, its
//! q-numerical range is `e^{it}` times the filled ellipse
//! `g q + r ((c + p d) cos s + i (d + p c) sin s)`, `0 <= r <= 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, I, ONE, ZERO};

use super::param::QParameter;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ellipse2x2 {
    pub t: f64,
    pub gamma: C64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub p: f64,
    /// `|q|`
    pub q: f64,
}

impl Ellipse2x2 {
    pub fn center(&self) -> C64 {
        C64::from_polar(1.0, self.t) * self.gamma * self.q
    }

    /// Semi-axes along the rotated real and imaginary directions.
    pub fn semi_axes(&self) -> (f64, f64) {
        (self.c + self.p * self.d, self.d + self.p * self.c)
    }

    /// Boundary point at parameter `s` (for real `q = |q|`).
    pub fn point(&self, s: f64) -> C64 {
        let (u, v) = self.semi_axes();
        C64::from_polar(1.0, self.t) * (self.gamma * self.q + C64::new(u * s.cos(), v * s.sin()))
    }

    fn modulus_at(&self, s: f64) -> f64 {
        let (u, v) = self.semi_axes();
        (self.gamma * self.q + C64::new(u * s.cos(), v * s.sin())).norm()
    }

    /// Largest boundary modulus: dense grid, then golden-section refinement.
    pub fn radius(&self) -> f64 {
        const GRID: usize = 4096;
        let h = std::f64::consts::TAU / GRID as f64;
        let (mut best_s, mut best) = (0.0, f64::NEG_INFINITY);
        for k in 0..GRID {
            let s = k as f64 * h;
            let v = self.modulus_at(s);
            if v > best {
                best = v;
                best_s = s;
            }
        }
        let (mut lo, mut hi) = (best_s - h, best_s + h);
        let g = (5.0_f64.sqrt() - 1.0) / 2.0;
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let (mut f1, mut f2) = (self.modulus_at(x1), self.modulus_at(x2));
        while hi - lo > 1e-12 {
            if f1 < f2 {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = self.modulus_at(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = self.modulus_at(x1);
            }
        }
        // near a grid maximum the refined evaluations differ from it only by
        // rounding; keep the grid value unless the gain is real
        let refined = f1.max(f2);
        if refined > best * (1.0 + 4.0 * f64::EPSILON) {
            refined
        } else {
            best
        }
    }
}

fn arg_or_zero(z: C64) -> f64 {
    if z == ZERO {
        0.0
    } else {
        z.arg()
    }
}

/// Unit `x` with `<Ax, x> = tr(A)/2`, plus its orthogonal complement, as
/// the columns of a unitary.
fn constant_diagonal_basis(a: &ComplexMatrix) -> ComplexMatrix {
    if a.get(0, 0) == a.get(1, 1) {
        return ComplexMatrix::identity(2);
    }
    let half = a.trace() * 0.5;
    let a0 = a - &ComplexMatrix::diagonal(&[half, half]);
    let ah = a0.adjoint();
    let h = &(&a0 + &ah) * C64::new(0.5, 0.0);
    let k = &(&a0 - &ah) * (-I * 0.5);

    // h is traceless Hermitian: [[h1, h2], [conj h2, -h1]], eigenvalues +-lam
    let h1 = h.get(0, 0).re;
    let h2 = h.get(0, 1);
    let lam = (h1 * h1 + h2.norm_sqr()).sqrt();
    let u1 = if lam == 0.0 {
        [ONE, ZERO]
    } else if h1 >= 0.0 {
        let v = [C64::new(lam + h1, 0.0), h2.conj()];
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        [v[0] / n, v[1] / n]
    } else {
        let v = [h2, C64::new(lam - h1, 0.0)];
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        [v[0] / n, v[1] / n]
    };
    let u2 = [-u1[1].conj(), u1[0].conj()];
    // kappa = u1^H K u2
    let ku2 = [k.get(0, 0) * u2[0] + k.get(0, 1) * u2[1], k.get(1, 0) * u2[0] + k.get(1, 1) * u2[1]];
    let kappa = u1[0].conj() * ku2[0] + u1[1].conj() * ku2[1];
    let psi = if kappa == ZERO {
        0.0
    } else {
        std::f64::consts::FRAC_PI_2 - kappa.arg()
    };
    let e = C64::from_polar(1.0, psi);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let x = [(u1[0] + e * u2[0]) * s, (u1[1] + e * u2[1]) * s];
    let xp = [-x[1].conj(), x[0].conj()];
    ComplexMatrix::from_fn(2, |r, c| if c == 0 { x[r] } else { xp[r] })
}

/// The canonical form of a 2x2 `a` and its exact `w_q`.
///
/// Complex `q` is replaced by `|q|` (the radius only depends on `|q|`).
pub fn exact_2x2(a: &ComplexMatrix, qp: &QParameter) -> Result<(Ellipse2x2, f64)> {
    if a.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: a.dim(),
        });
    }
    if !a.is_finite() {
        return Err(Error::InvalidMatrix("non-finite entries".into()));
    }
    let v = constant_diagonal_basis(a);
    let m = &(&v.adjoint() * a) * &v;
    let g = (m.get(0, 0) + m.get(1, 1)) * 0.5;
    let (a1, b1) = (m.get(0, 1), m.get(1, 0));
    let t = (arg_or_zero(a1) + arg_or_zero(b1)) / 2.0;
    let (mut a, mut b) = (a1.norm(), b1.norm());
    if b > a {
        std::mem::swap(&mut a, &mut b);
    }
    let e = Ellipse2x2 {
        t,
        gamma: g * C64::from_polar(1.0, -t),
        a,
        b,
        c: (a + b) / 2.0,
        d: (a - b) / 2.0,
        p: qp.p(),
        q: qp.modulus(),
    };
    let r = e.radius();
    Ok((e, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(v: f64) -> QParameter {
        QParameter::real(v).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let ex1 = ComplexMatrix::from_real_rows(&[&[0.1, 1.0 / 24.0], &[1.0 / 24.0, 0.1]]);
        for k in 1..=10 {
            let qv = k as f64 / 10.0;
            let (e, r) = exact_2x2(&ex1, &q(qv)).unwrap();
            assert!((e.gamma - C64::new(0.1, 0.0)).norm() < 1e-15);
            assert!((e.c - 1.0 / 24.0).abs() < 1e-15 && e.d.abs() < 1e-15);
            assert!((r - (1.0 / 24.0 + qv / 10.0)).abs() < 1e-12, "{r}");
        }
        let (e, r) = exact_2x2(&ComplexMatrix::jordan(2), &q(0.6)).unwrap();
        assert_eq!((e.a, e.b), (1.0, 0.0));
        assert!((r - 0.9).abs() < 1e-12);
        let ones = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let (_, r) = exact_2x2(&ones, &q(0.5)).unwrap();
        assert!((r - 1.5).abs() < 1e-12);
    }

    #[test]
    fn canonical_form_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let a = ComplexMatrix::gaussian(&mut rng, 2);
            let v = constant_diagonal_basis(&a);
            assert!(v.unitarity_defect() < 1e-13);
            let m = &(&v.adjoint() * &a) * &v;
            assert!((m.get(0, 0) - m.get(1, 1)).norm() < 1e-12);
            let (e, _) = exact_2x2(&a, &q(0.5)).unwrap();
            assert!(0.0 <= e.b && e.b <= e.a);
            assert!(e.c >= e.d && e.d >= 0.0);
            assert!((e.c * e.c - e.d * e.d - e.a * e.b).abs() < 1e-12 * (1.0 + e.a * e.a));
            // Frobenius norm is preserved by the similarity
            let fro: f64 = a.entries().iter().map(|z| z.norm_sqr()).sum();
            let canon = 2.0 * e.gamma.norm_sqr() + e.a * e.a + e.b * e.b;
            assert!((fro - canon).abs() < 1e-12 * fro);
        }
    }

    #[test]
    fn classical_limit_is_numerical_range() {
        // Hermitian: w = spectral radius
        let h = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -2.0]]);
        assert!((exact_2x2(&h, &q(1.0)).unwrap().1 - 2.0).abs() < 1e-12);
        let (_, r) = exact_2x2(&ComplexMatrix::jordan(2), &q(1.0)).unwrap();
        assert!((r - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_wrong_size() {
        assert!(exact_2x2(&ComplexMatrix::identity(3), &q(0.5)).is_err());
    }
}
