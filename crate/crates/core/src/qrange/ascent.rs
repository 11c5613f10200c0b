//! Multi-start ascent on the complex unit sphere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{gaussian_vector, norm, C64, ZERO};

use super::objective::{QObjective, Scratch};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AscentConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Stop a run once three consecutive steps each improve the value by
    /// less than `tol` relative to `max(|value|, 1e-3 max|a_ij|)`.
    pub tol: f64,
    pub seed: u64,
}

impl Default for AscentConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iters: 2000,
            tol: 1e-10,
            seed: 0,
        }
    }
}

impl AscentConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn with_restarts(self, restarts: usize) -> Self {
        Self { restarts, ..self }
    }

    /// Same seed, `factor` times the restarts; the original restarts are a
    /// prefix of the escalated ones.
    pub fn escalated(self, factor: usize) -> Self {
        Self {
            restarts: self.restarts.saturating_mul(factor),
            ..self
        }
    }
}

/// Start vector of restart `index`: a normalized complex Gaussian drawn from
/// its own ChaCha stream, so results do not depend on scheduling.
pub(crate) fn start_vector(seed: u64, index: usize, dim: usize) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    loop {
        let mut v = gaussian_vector(&mut rng, dim);
        let n = norm(&v);
        if n > 1e-8 {
            v.iter_mut().for_each(|z| *z /= n);
            return v;
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Run {
    pub x: Vec<C64>,
    pub value: f64,
    pub converged: bool,
}

const STEP_SHRINK: f64 = 0.5;
const INITIAL_STEP: f64 = 1.0;
const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-18;
/// Curvature pairs kept for the quasi-Newton direction.
const MEMORY: usize = 8;

fn dot(u: &[C64], v: &[C64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a.re * b.re + a.im * b.im).sum()
}

/// Removes the component along `x` (real inner product) in place.
fn project(v: &mut [C64], x: &[C64]) {
    let k = dot(v, x);
    v.iter_mut().zip(x).for_each(|(vi, xi)| *vi -= xi * k);
}

/// Two-loop recursion: an ascent direction from the gradient and the stored
/// `(s, y)` pairs (for the maximization, `y` is the gradient decrease).
fn lbfgs_direction(grad: &[C64], pairs: &[(Vec<C64>, Vec<C64>, f64)], out: &mut Vec<C64>) {
    out.clear();
    out.extend_from_slice(grad);
    let mut alphas = [0.0; MEMORY];
    for (i, (s, y, rho)) in pairs.iter().enumerate().rev() {
        let a = rho * dot(s, out);
        alphas[i] = a;
        out.iter_mut().zip(y).for_each(|(d, yi)| *d -= yi * a);
    }
    if let Some((s, y, _)) = pairs.last() {
        let gamma = dot(s, y) / dot(y, y);
        out.iter_mut().for_each(|d| *d *= gamma);
    }
    for (i, (s, y, rho)) in pairs.iter().enumerate() {
        let b = rho * dot(y, out);
        out.iter_mut().zip(s).for_each(|(d, si)| *d += si * (alphas[i] - b));
    }
}

/// One ascent run from unit `x`: quasi-Newton directions on the sphere with
/// Armijo backtracking, retraction by normalization, and the projected
/// gradient as fallback.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub(crate) fn ascend(obj: &QObjective, mut x: Vec<C64>, cfg: &AscentConfig) -> Run {
    let n = obj.dim();
    let mut s = Scratch::new(n);
    let mut grad = vec![ZERO; n];
    let mut new_grad = vec![ZERO; n];
    let mut trial = vec![ZERO; n];
    let mut dir = Vec::with_capacity(n);
    let mut pairs: Vec<(Vec<C64>, Vec<C64>, f64)> = Vec::with_capacity(MEMORY);
    let mut value = obj.value_and_gradient(&x, &mut s, &mut grad);
    let floor = 1e-3 * obj.scale();
    let mut small_gains = 0;

    for _ in 0..cfg.max_iters {
        let g2 = dot(&grad, &grad);
        if g2 == 0.0 || g2.sqrt() <= 1e-15 * value.abs().max(floor) {
            return Run { x, value, converged: true };
        }
        lbfgs_direction(&grad, &pairs, &mut dir);
        project(&mut dir, &x);
        let mut slope = dot(&dir, &grad);
        // negated so a NaN slope also falls back to the gradient
        if !(slope > 1e-12 * g2.sqrt() * dot(&dir, &dir).sqrt()) {
            pairs.clear();
            dir.clear();
            dir.extend_from_slice(&grad);
            slope = g2;
        }
        let mut step = INITIAL_STEP;
        let accepted = loop {
            for i in 0..n {
                trial[i] = x[i] + dir[i] * step;
            }
            let tn = norm(&trial);
            trial.iter_mut().for_each(|z| *z /= tn);
            let v = obj.value(&trial, &mut s);
            if v >= value + ARMIJO * step * slope {
                break Some(v);
            }
            step *= STEP_SHRINK;
            if step < MIN_STEP {
                break None;
            }
        };
        let Some(new_value) = accepted else {
            if pairs.is_empty() {
                return Run { x, value, converged: true };
            }
            // retry from the plain gradient
            pairs.clear();
            continue;
        };
        let gain = new_value - value;
        value = obj.value_and_gradient(&trial, &mut s, &mut new_grad);

        // curvature pair, transported to the new tangent space by projection
        let mut sv: Vec<C64> = trial.iter().zip(&x).map(|(a, b)| a - b).collect();
        project(&mut sv, &trial);
        let mut old = grad.clone();
        project(&mut old, &trial);
        let yv: Vec<C64> = old.iter().zip(&new_grad).map(|(a, b)| a - b).collect();
        let sy = dot(&sv, &yv);
        for (ps, py, _) in pairs.iter_mut() {
            project(ps, &trial);
            project(py, &trial);
        }
        if sy > 1e-12 * dot(&sv, &sv).sqrt() * dot(&yv, &yv).sqrt() {
            if pairs.len() == MEMORY {
                pairs.remove(0);
            }
            pairs.push((sv, yv, 1.0 / sy));
        }

        std::mem::swap(&mut x, &mut trial);
        std::mem::swap(&mut grad, &mut new_grad);
        if gain <= cfg.tol * value.abs().max(floor) {
            small_gains += 1;
            if small_gains == 3 {
                return Run { x, value, converged: true };
            }
        } else {
            small_gains = 0;
        }
    }
    Run {
        x,
        value,
        converged: false,
    }
}

#[derive(Clone, Debug)]
pub(crate) struct MultiStart {
    pub best: Run,
    pub restarts_used: usize,
    /// Largest improvement of the running best over the final three restarts.
    pub max_gap: f64,
}

/// Runs `cfg.restarts` seeded ascents (in parallel) and merges by maximum;
/// ties go to the lower restart index.
pub(crate) fn multi_start(obj: &QObjective, cfg: &AscentConfig, extra_starts: &[Vec<C64>]) -> MultiStart {
    let dim = obj.dim();
    let restarts = cfg.restarts.max(1);
    let mut runs: Vec<Run> = (0..restarts)
        .into_par_iter()
        .map(|i| ascend(obj, start_vector(cfg.seed, i, dim), cfg))
        .collect();
    runs.extend(extra_starts.iter().map(|x| ascend(obj, x.clone(), cfg)));

    let total = runs.len();
    let mut best_idx = 0;
    let mut best_val = f64::NEG_INFINITY;
    let mut max_gap = 0.0_f64;
    for (i, r) in runs.iter().enumerate() {
        if r.value > best_val {
            if i > 0 && i + 3 >= total {
                max_gap = max_gap.max(r.value - best_val);
            }
            best_val = r.value;
            best_idx = i;
        }
    }
    MultiStart {
        best: runs.swap_remove(best_idx),
        restarts_used: total,
        max_gap,
    }
}
