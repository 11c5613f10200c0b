use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inner, ComplexMatrix, C64};

use super::ascent::{multi_start, AscentConfig};
use super::objective::{check_dims, QObjective};
use super::param::QParameter;

/// Support-function evaluations need a tighter stop than radius estimates:
/// vertex errors are amplified by `1/sin(dtheta)`.
const SUPPORT_TOL: f64 = 1e-13;

/// `h(theta) = max Re(e^{-i theta} z)` over `z` in the q-numerical range.
pub fn support_function(a: &ComplexMatrix, qp: &QParameter, theta: f64, cfg: &AscentConfig) -> Result<f64> {
    check_dims(a, qp)?;
    let cfg = AscentConfig {
        tol: cfg.tol.min(SUPPORT_TOL),
        ..*cfg
    };
    Ok(support_contact(a, qp, theta, &cfg).0)
}

/// `h(theta)` and the point `<Ax, y>` of the range where the support line
/// touches. `cfg` is used as given.
fn support_contact(a: &ComplexMatrix, qp: &QParameter, theta: f64, cfg: &AscentConfig) -> (f64, C64) {
    let obj = QObjective::support(a, qp, theta);
    let best = multi_start(&obj, cfg, &[]).best;
    let y = obj.partner(&best.x, qp.q());
    let ax = a.apply(&best.x).expect("dimensions checked");
    (best.value, inner(&ax, &y))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTrace {
    pub thetas: Vec<f64>,
    pub support_values: Vec<f64>,
    /// Contact point of each support line: a point of the range, so the
    /// polygon through them lies inside it.
    pub points: Vec<C64>,
    /// Vertex `j` is where the support lines of `thetas[j]` and
    /// `thetas[j + 1]` meet (cyclically); this polygon encloses the range.
    pub outer: Vec<C64>,
}

impl BoundaryTrace {
    /// Worst `Re(e^{-i theta} z) - h(theta)` over all contact points and
    /// angles; at most a rounding-level positive number for a valid trace.
    pub fn half_plane_violation(&self) -> f64 {
        self.violation_of(&self.points)
    }

    /// As [`half_plane_violation`](Self::half_plane_violation), for the
    /// outer vertices.
    pub fn outer_violation(&self) -> f64 {
        self.violation_of(&self.outer)
    }

    fn violation_of(&self, pts: &[C64]) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for (&t, &h) in self.thetas.iter().zip(&self.support_values) {
            let e = C64::from_polar(1.0, -t);
            for z in pts {
                worst = worst.max((e * z).re - h);
            }
        }
        worst
    }

    pub fn max_modulus(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Support function on `grid_size` uniform angles and the polygon cut out by
/// the corresponding support lines.
pub fn trace_boundary(a: &ComplexMatrix, qp: &QParameter, grid_size: usize, cfg: &AscentConfig) -> Result<BoundaryTrace> {
    if grid_size < 8 {
        return Err(Error::InvalidArgument(format!("grid size {grid_size} < 8")));
    }
    check_dims(a, qp)?;
    let thetas: Vec<f64> = (0..grid_size)
        .map(|j| std::f64::consts::TAU * j as f64 / grid_size as f64)
        .collect();
    let tight = AscentConfig {
        tol: cfg.tol.min(SUPPORT_TOL),
        ..*cfg
    };
    let (support_values, points): (Vec<f64>, Vec<C64>) =
        thetas.par_iter().map(|&t| support_contact(a, qp, t, &tight)).unzip();
    let outer = (0..grid_size)
        .map(|j| {
            let k = (j + 1) % grid_size;
            intersect(thetas[j], support_values[j], thetas[k], support_values[k])
        })
        .collect();
    Ok(BoundaryTrace {
        thetas,
        support_values,
        points,
        outer,
    })
}

/// Meeting point of `Re(e^{-i t1} z) = h1` and `Re(e^{-i t2} z) = h2`.
fn intersect(t1: f64, h1: f64, t2: f64, h2: f64) -> C64 {
    let (s1, c1) = t1.sin_cos();
    let (s2, c2) = t2.sin_cos();
    let det = c1 * s2 - s1 * c2;
    C64::new((h1 * s2 - h2 * s1) / det, (c1 * h2 - c2 * h1) / det)
}
