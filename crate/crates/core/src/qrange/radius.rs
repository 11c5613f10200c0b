use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{ComplexMatrix, UnitVector, C64};

use super::ascent::{multi_start, AscentConfig};
use super::objective::{check_dims, QObjective};
use super::param::QParameter;

/// A lower estimate of `w_q(A)` with the `(x, y)` pair that attains it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    pub value: f64,
    pub witness_x: UnitVector,
    pub witness_y: UnitVector,
    pub restarts_used: usize,
    pub converged: bool,
    pub max_gap: f64,
}

impl RadiusEstimate {
    /// `|<x, y> - q|` for the witness pair.
    pub fn constraint_residual(&self, qp: &QParameter) -> f64 {
        (crate::linalg::inner(self.witness_x.as_slice(), self.witness_y.as_slice()) - qp.q()).norm()
    }
}

/// Maximizes the reduced objective over the unit sphere.
///
/// The value is attained by the returned witness pair, so it never exceeds
/// the true `w_q(A)`.
pub fn estimate_radius(a: &ComplexMatrix, qp: &QParameter, cfg: &AscentConfig) -> Result<RadiusEstimate> {
    estimate_radius_with_starts(a, qp, cfg, &[])
}

/// [`estimate_radius`] with additional caller-supplied start vectors run
/// after the seeded ones.
pub fn estimate_radius_with_starts(
    a: &ComplexMatrix,
    qp: &QParameter,
    cfg: &AscentConfig,
    starts: &[UnitVector],
) -> Result<RadiusEstimate> {
    check_dims(a, qp)?;
    let obj = QObjective::radius(a, qp);
    let extra: Vec<Vec<C64>> = starts.iter().map(|s| s.as_slice().to_vec()).collect();
    let found = multi_start(&obj, cfg, &extra);
    let y = obj.partner(&found.best.x, qp.q());
    Ok(RadiusEstimate {
        value: found.best.value,
        witness_x: UnitVector::normalize(found.best.x)?,
        witness_y: UnitVector::normalize(y)?,
        restarts_used: found.restarts_used,
        converged: found.best.converged,
        max_gap: found.max_gap,
    })
}

/// `w_q` of a 1x1 block `[t]`, taken as `|t| |q|`.
///
/// The q-numerical range of a scalar is empty unless `|q| = 1`; this is the
/// convention that makes scalar blocks of structured matrices comparable
/// (a block `t` contributes `|t| |q|` to the lower bound).
pub fn scalar_radius(t: C64, qp: &QParameter) -> f64 {
    t.norm() * qp.modulus()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inner;

    fn cfg() -> AscentConfig {
        AscentConfig::default().with_seed(17)
    }

    fn ex1() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.1, 1.0 / 24.0], &[1.0 / 24.0, 0.1]])
    }

    #[test]
    fn closed_form_examples() {
        let q = QParameter::real(0.5).unwrap();
        let est = estimate_radius(&ex1(), &q, &cfg()).unwrap();
        assert!((est.value - (1.0 / 24.0 + 0.05)).abs() < 1e-8, "{}", est.value);

        let ones = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let est = estimate_radius(&ones, &q, &cfg()).unwrap();
        assert!((est.value - 1.5).abs() < 1e-8);

        let q7 = QParameter::real(0.7).unwrap();
        let est = estimate_radius(&ComplexMatrix::identity(3), &q7, &cfg()).unwrap();
        assert!((est.value - 0.7).abs() < 1e-12);

        let q6 = QParameter::real(0.6).unwrap();
        let est = estimate_radius(&ComplexMatrix::jordan(2), &q6, &cfg()).unwrap();
        assert!((est.value - 0.9).abs() < 1e-8, "{}", est.value);
    }

    #[test]
    fn witness_invariants() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0, 0.0], &[0.0, -1.0, 0.5], &[0.3, 0.0, 0.2]]);
        for q in [0.0, 0.3, 0.8, 1.0] {
            let qp = QParameter::new(C64::from_polar(q, 0.4)).unwrap();
            let est = estimate_radius(&a, &qp, &cfg()).unwrap();
            assert!(est.constraint_residual(&qp) < 1e-9);
            let ax = a.apply(est.witness_x.as_slice()).unwrap();
            let attained = inner(&ax, est.witness_y.as_slice()).norm();
            assert!((attained - est.value).abs() < 1e-9);
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 2.0, 1.0], &[0.0, 0.0, 3.0], &[1.0, 0.0, 0.0]]);
        let qp = QParameter::real(0.35).unwrap();
        let a1 = estimate_radius(&a, &qp, &cfg()).unwrap();
        let a2 = estimate_radius(&a, &qp, &cfg()).unwrap();
        assert_eq!(a1, a2);
    }

    #[test]
    fn dim_one_rules() {
        let one = ComplexMatrix::scalar(C64::new(0.0, 2.0));
        assert!(estimate_radius(&one, &QParameter::real(0.5).unwrap(), &cfg()).is_err());
        let est = estimate_radius(&one, &QParameter::real(1.0).unwrap(), &cfg()).unwrap();
        assert!((est.value - 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_matrix() {
        let est = estimate_radius(&ComplexMatrix::zeros(3), &QParameter::real(0.5).unwrap(), &cfg()).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn scalar_convention() {
        let r2 = 2.0_f64.sqrt();
        let qp = QParameter::real(0.3).unwrap();
        assert!((scalar_radius(C64::new(2.0 + r2, 0.0), &qp) - (2.0 + r2) * 0.3).abs() < 1e-15);
        assert_eq!(scalar_radius(C64::new(0.0, 0.0), &qp), 0.0);
        assert!((scalar_radius(C64::new(0.0, 1.0), &qp) - 0.3).abs() < 1e-16);
    }
}
