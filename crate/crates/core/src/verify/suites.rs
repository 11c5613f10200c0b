use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::{direct_sum_bounds, k_factor, special_case_bounds, theorem_bounds, block_radius, BoundsConfig, BoundsReport, SpecialCase};
use crate::error::Result;
use crate::linalg::{assemble_blocks, ComplexMatrix, C64, ONE};
use crate::qrange::{estimate_radius, exact_2x2, sample_oracle, support_function, AscentConfig, QParameter};
use crate::structured::{block_diagonalize, reduce_to_blocks, reducing_unitary, Family, FamilyConstants, StructuredSpec};

use super::ensemble::{random_matrix, random_phase, random_unitary};
use super::{Property, Suite, SuiteConfig, Trial};

fn pick<T: Copy>(v: &[T], i: usize) -> T {
    v[i % v.len()]
}

fn qp(q: f64) -> Result<QParameter> {
    QParameter::real(q)
}

fn seeded(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> AscentConfig {
    cfg.ascent.with_seed(rng.gen())
}

fn w(a: &ComplexMatrix, q: &QParameter, acfg: &AscentConfig) -> Result<f64> {
    Ok(estimate_radius(a, q, acfg)?.value)
}

fn two_by_two(tl: Option<&ComplexMatrix>, tr: Option<&ComplexMatrix>, bl: Option<&ComplexMatrix>, br: Option<&ComplexMatrix>, d: usize) -> Result<ComplexMatrix> {
    assemble_blocks(&[vec![tl.cloned(), tr.cloned()], vec![bl.cloned(), br.cloned()]], d)
}

/// Slack of a bounds report: both sides, plus the collapse at `|q| = 1`.
fn report_slack(r: &BoundsReport) -> f64 {
    let mut s = r.verdict.lower_slack.min(r.verdict.upper_slack);
    if r.q.is_classical() {
        s = s.min(-(r.whole_estimate - r.lower).abs());
    }
    s
}

/// Claims served by a property besides its own.
pub(super) fn extra_claims(name: &str) -> Vec<&'static str> {
    let mut out = Vec::new();
    if name.starts_with("sandwich/") {
        out.push("remark: classical equality");
    }
    if Family::ALL.iter().any(|f| name == format!("reduction/{f}")) {
        out.push("reduction: unitarity");
    }
    match name {
        "sandwich/tridiagonal" => out.extend(["remark: tridiagonal n = 3", "remark: two-block tridiagonal"]),
        "sandwich/circulant" => out.push("corollary: circulant n = 2"),
        "sandwich/skew_circulant" => out.push("corollary: skew circulant n = 2"),
        "sandwich/imaginary_circulant" => out.push("corollary: imaginary circulant n = 2"),
        "sandwich/imaginary_skew_circulant" => out.push("corollary: imaginary skew circulant n = 2"),
        "blocks/direct_sum" => out.push("direct sum: two blocks"),
        "examples/ones" => out.push("remark: symmetric two-block"),
        _ => {}
    }
    out
}

pub fn properties() -> Vec<Property> {
    let mut v = Vec::new();
    axioms(&mut v);
    blocks(&mut v);
    classical(&mut v);
    sandwich(&mut v);
    reduction(&mut v);
    v
}

fn axioms(v: &mut Vec<Property>) {
    let trials = |c: &SuiteConfig| c.trials;
    v.push(Property::new("axioms/homogeneity", "axiom: homogeneity", Suite::Axioms, 1e-6, trials, |cfg, rng, i| {
        let (dim, q) = (pick(&cfg.dims, i), qp(pick(&cfg.q_grid, i))?);
        let a = random_matrix(rng, dim);
        let lam = if i == 0 { C64::new(0.0, 0.0) } else { random_phase(rng) * rng.gen_range(0.1..3.0) };
        let acfg = seeded(cfg, rng);
        let lhs = w(&a.scale(lam), &q, &acfg)?;
        let rhs = lam.norm() * w(&a, &q, &acfg)?;
        Ok(Trial::new(-(lhs - rhs).abs()).q(q.modulus()).params(vec![lam.re, lam.im]).matrices(vec![a]))
    }));
    v.push(Property::new("axioms/subadditivity", "axiom: subadditivity", Suite::Axioms, 1e-6, trials, |cfg, rng, i| {
        let (dim, q) = (pick(&cfg.dims, i), qp(pick(&cfg.q_grid, i))?);
        let a = random_matrix(rng, dim);
        let b = random_matrix(rng, dim);
        let acfg = seeded(cfg, rng);
        let slack = w(&a, &q, &acfg)? + w(&b, &q, &acfg)? - w(&(&a + &b), &q, &acfg)?;
        Ok(Trial::new(slack).q(q.modulus()).matrices(vec![a, b]))
    }));
    v.push(Property::new("axioms/unitary_invariance", "axiom: unitary invariance", Suite::Axioms, 1e-6, trials, |cfg, rng, i| {
        let (dim, q) = (pick(&cfg.dims, i), qp(pick(&cfg.q_grid, i))?);
        let a = random_matrix(rng, dim);
        let u = if i == 0 { ComplexMatrix::identity(dim) } else { random_unitary(rng, dim) };
        let acfg = seeded(cfg, rng);
        let b = &(&u.adjoint() * &a) * &u;
        let slack = -(w(&b, &q, &acfg)? - w(&a, &q, &acfg)?).abs();
        Ok(Trial::new(slack).q(q.modulus()).matrices(vec![a, u]))
    }));
    v.push(Property::new("axioms/q_phase", "axiom: phase of q", Suite::Axioms, 1e-6, trials, |cfg, rng, i| {
        let (dim, q) = (pick(&cfg.dims, i), pick(&cfg.q_grid, i));
        let a = random_matrix(rng, dim);
        let lam = if i == 0 { ONE } else { random_phase(rng) };
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let acfg = seeded(cfg, rng);
        let (q0, q1) = (qp(q)?, QParameter::new(lam * q)?);
        let radius = -(w(&a, &q1, &acfg)? - w(&a, &q0, &acfg)?).abs();
        // the whole range rotates with q: h_{lam q}(theta + arg lam) = h_q(theta)
        let h0 = support_function(&a, &q0, theta, &acfg)?;
        let h1 = support_function(&a, &q1, theta + lam.arg(), &acfg)?;
        Ok(Trial::new(radius.min(-(h1 - h0).abs()))
            .q(q)
            .params(vec![lam.re, lam.im, theta])
            .matrices(vec![a]))
    }));
    v.push(Property::new("axioms/sampling_oracle", "definition: sampled pairs stay below the optimum", Suite::Axioms, 1e-9, trials, |cfg, rng, i| {
        let (dim, q) = (pick(&cfg.dims, i), qp(pick(&cfg.q_grid, i))?);
        let a = random_matrix(rng, dim);
        let seed = rng.gen();
        let acfg = seeded(cfg, rng);
        let slack = w(&a, &q, &acfg)? - sample_oracle(&a, &q, 10_000, seed)?;
        Ok(Trial::new(slack).q(q.modulus()).matrices(vec![a]))
    }));
}

fn blocks(v: &mut Vec<Property>) {
    let trials = |c: &SuiteConfig| c.trials;
    // block size so that the 2x2 block matrices have dimension 2..=8
    let block_dim = |cfg: &SuiteConfig, i: usize| (pick(&cfg.dims, i) - 1).max(1);

    v.push(Property::new("blocks/off_diagonal_swap", "block lemma: off-diagonal swap", Suite::Blocks, 1e-6, trials, move |cfg, rng, i| {
        let (d, q) = (block_dim(cfg, i), qp(pick(&cfg.q_grid, i))?);
        let t = random_matrix(rng, d);
        let s = if i == 0 { t.clone() } else { random_matrix(rng, d) };
        let acfg = seeded(cfg, rng);
        let m1 = two_by_two(None, Some(&t), Some(&s), None, d)?;
        let m2 = two_by_two(None, Some(&s), Some(&t), None, d)?;
        let slack = -(w(&m1, &q, &acfg)? - w(&m2, &q, &acfg)?).abs();
        Ok(Trial::new(slack).q(q.modulus()).matrices(vec![t, s]))
    }));
    v.push(Property::new("blocks/off_diagonal_phase", "block lemma: off-diagonal phase", Suite::Blocks, 1e-6, trials, move |cfg, rng, i| {
        let (d, q) = (block_dim(cfg, i), qp(pick(&cfg.q_grid, i))?);
        let t = random_matrix(rng, d);
        let s = random_matrix(rng, d);
        let theta = if i == 0 { 0.0 } else { rng.gen_range(0.0..std::f64::consts::TAU) };
        let acfg = seeded(cfg, rng);
        let m1 = two_by_two(None, Some(&t), Some(&s.scale(C64::from_polar(1.0, theta))), None, d)?;
        let m2 = two_by_two(None, Some(&t), Some(&s), None, d)?;
        let slack = -(w(&m1, &q, &acfg)? - w(&m2, &q, &acfg)?).abs();
        Ok(Trial::new(slack).q(q.modulus()).params(vec![theta]).matrices(vec![t, s]))
    }));
    v.push(Property::new("blocks/diagonal_swap", "block lemma: diagonal swap", Suite::Blocks, 1e-6, trials, move |cfg, rng, i| {
        let (d, q) = (block_dim(cfg, i), qp(pick(&cfg.q_grid, i))?);
        let t = random_matrix(rng, d);
        let s = random_matrix(rng, d);
        let acfg = seeded(cfg, rng);
        let m1 = two_by_two(Some(&t), None, None, Some(&s), d)?;
        let m2 = two_by_two(Some(&s), None, None, Some(&t), d)?;
        let slack = -(w(&m1, &q, &acfg)? - w(&m2, &q, &acfg)?).abs();
        Ok(Trial::new(slack).q(q.modulus()).matrices(vec![t, s]))
    }));
    v.push(Property::new("blocks/two_by_two_closed_form", "two-by-two: canonical ellipse", Suite::Blocks, 1e-6, trials, |cfg, rng, _| {
        let a = random_matrix(rng, 2);
        let acfg = seeded(cfg, rng);
        let mut slack = f64::INFINITY;
        for q in [0.1, 0.3, 0.5, 0.7, 0.9, 1.0] {
            let q = qp(q)?;
            slack = slack.min(-(w(&a, &q, &acfg)? - exact_2x2(&a, &q)?.1).abs());
        }
        Ok(Trial::new(slack).matrices(vec![a]))
    }));
    v.push(Property::new("blocks/direct_sum", "direct sum: sandwich", Suite::Blocks, 1e-6, trials, |cfg, rng, i| {
        let (d, q) = (pick(&cfg.dims, i), qp(pick(&cfg.q_grid, i))?);
        let m = 2 + i % 2;
        let blocks: Vec<ComplexMatrix> = (0..m).map(|_| random_matrix(rng, d)).collect();
        let bcfg = BoundsConfig {
            ascent: seeded(cfg, rng),
            tolerance: cfg.tolerance,
            ..Default::default()
        };
        let r = direct_sum_bounds(&blocks, &q, &bcfg)?;
        Ok(Trial::new(report_slack(&r)).q(q.modulus()).matrices(blocks))
    }));
}

fn classical(v: &mut Vec<Property>) {
    let trials = |c: &SuiteConfig| c.trials;
    v.push(Property::new("classical/norm_bounds", "classical: norm equivalence", Suite::Classical, 1e-6, trials, |cfg, rng, i| {
        let a = random_matrix(rng, pick(&cfg.dims, i));
        let wa = w(&a, &qp(1.0)?, &seeded(cfg, rng))?;
        let norm = a.operator_norm();
        Ok(Trial::new((wa - norm / 2.0).min(norm - wa)).q(1.0).matrices(vec![a]))
    }));
    v.push(Property::new("classical/normal_equality", "classical: normal equality", Suite::Classical, 1e-6, trials, |cfg, rng, i| {
        let dim = pick(&cfg.dims, i);
        let a = if i == 0 {
            ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), C64::new(-2.0, 0.0)])
        } else {
            let u = random_unitary(rng, dim);
            let diag: Vec<C64> = (0..dim).map(|_| random_phase(rng) * rng.gen_range(0.0..1.0)).collect();
            ComplexMatrix::diagonal(&diag).conjugate_by(&u)?
        };
        let wa = w(&a, &qp(1.0)?, &seeded(cfg, rng))?;
        Ok(Trial::new(-(wa - a.operator_norm()).abs()).q(1.0).matrices(vec![a]))
    }));
    v.push(Property::new("classical/power_inequality", "classical: power inequality", Suite::Classical, 1e-6, trials, |cfg, rng, i| {
        let a = random_matrix(rng, pick(&cfg.dims, i));
        let acfg = seeded(cfg, rng);
        let one = qp(1.0)?;
        let wa = w(&a, &one, &acfg)?;
        let mut slack = f64::INFINITY;
        for k in [2, 3] {
            slack = slack.min(wa.powi(k as i32) - w(&a.pow(k), &one, &acfg)?);
        }
        Ok(Trial::new(slack).q(1.0).matrices(vec![a]))
    }));
    v.push(Property::new("classical/nilpotent", "classical: nilpotent bound", Suite::Classical, 0.0, |_| 5, |cfg, rng, i| {
        let n = 2 + i;
        let bound = (std::f64::consts::PI / (n as f64 + 1.0)).cos();
        let wj = w(&ComplexMatrix::jordan(n), &qp(1.0)?, &seeded(cfg, rng))?;
        Ok(Trial::new((bound + 1e-6 - wj).min(wj - (bound - 1e-4))).q(1.0).params(vec![n as f64, wj]))
    }));
}

fn random_blocks(rng: &mut ChaCha8Rng, count: usize, d: usize) -> Vec<ComplexMatrix> {
    (0..count).map(|_| random_matrix(rng, d)).collect()
}

fn sandwich_cell(cfg: &SuiteConfig, i: usize) -> (usize, usize, f64) {
    let nn = cfg.n_values.len();
    let nd = cfg.block_dims.len();
    let nq = cfg.q_grid.len();
    let cell = i / cfg.sandwich_trials;
    (cfg.n_values[cell % nn], cfg.block_dims[(cell / nn) % nd], cfg.q_grid[(cell / (nn * nd)) % nq])
}

fn sandwich(v: &mut Vec<Property>) {
    for family in Family::ALL {
        let claim = match family {
            Family::Tridiagonal => "theorem: tridiagonal",
            Family::AlphaTridiagonal => "theorem: alpha tridiagonal",
            Family::OmegaTridiagonal => "theorem: omega tridiagonal",
            Family::AntiTridiagonal => "theorem: anti-tridiagonal",
            Family::Circulant => "theorem: circulant",
            Family::SkewCirculant => "theorem: skew circulant",
            Family::ImaginaryCirculant => "theorem: imaginary circulant",
            Family::ImaginarySkewCirculant => "theorem: imaginary skew circulant",
        };
        v.push(Property::new(
            format!("sandwich/{family}"),
            claim,
            Suite::Sandwich,
            1e-5,
            |c: &SuiteConfig| c.n_values.len() * c.block_dims.len() * c.q_grid.len() * c.sandwich_trials,
            move |cfg, rng, i| {
                let (n, d, q) = sandwich_cell(cfg, i);
                let blocks = random_blocks(rng, family.arity(n), d);
                let spec = StructuredSpec::new(family, n, blocks.clone())?;
                let bcfg = BoundsConfig {
                    ascent: seeded(cfg, rng),
                    tolerance: cfg.sandwich_tolerance,
                    ..Default::default()
                };
                let r = theorem_bounds(&spec, &qp(q)?, &bcfg)?;
                Ok(Trial::new(report_slack(&r)).q(q).params(vec![n as f64, d as f64]).matrices(blocks).detail(family.name()))
            },
        ));
    }

    for family in [Family::Tridiagonal, Family::AntiTridiagonal] {
        let special_trials = |c: &SuiteConfig| SpecialCase::ALL.len() * c.n_values.len() * c.q_grid.len() * c.special_trials;
        let cell = |cfg: &SuiteConfig, i: usize| {
            let c = i / cfg.special_trials;
            let nn = cfg.n_values.len();
            let tag = SpecialCase::ALL[c % 4];
            (tag, cfg.n_values[(c / 4) % nn], cfg.q_grid[(c / (4 * nn)) % cfg.q_grid.len()], pick(&cfg.block_dims, i))
        };
        let (claim, coef_claim) = match family {
            Family::Tridiagonal => ("remark: tridiagonal special cases", "remark: tridiagonal special-case coefficients"),
            _ => ("remark: anti-tridiagonal special cases", "remark: anti-tridiagonal special-case coefficients"),
        };
        v.push(Property::new(format!("special/{family}"), claim, Suite::Sandwich, 1e-5, special_trials, move |cfg, rng, i| {
            let (tag, n, q, d) = cell(cfg, i);
            let base = random_matrix(rng, d);
            let bcfg = BoundsConfig {
                ascent: seeded(cfg, rng),
                tolerance: cfg.sandwich_tolerance,
                ..Default::default()
            };
            let r = special_case_bounds(tag, family, &base, n, &qp(q)?, &bcfg)?;
            Ok(Trial::new(report_slack(&r)).q(q).params(vec![n as f64]).matrices(vec![base]).detail(format!("{tag:?}")))
        }));
        v.push(Property::new(format!("special/{family}_coefficients"), coef_claim, Suite::Sandwich, 1e-6, special_trials, move |cfg, rng, i| {
            let (tag, n, q, d) = cell(cfg, i);
            let base = random_matrix(rng, d);
            let acfg = seeded(cfg, rng);
            let q = qp(q)?;
            let (t, s) = tag.pair(&base);
            let blocks = reduce_to_blocks(&StructuredSpec::tridiagonal(family, n, t, s)?);
            let base_radius = block_radius(&base, &q, &acfg)?;
            let mut slack = f64::INFINITY;
            for (k, b) in blocks.iter().enumerate() {
                let want = tag.coefficient(k + 1, n) * base_radius;
                slack = slack.min(-(block_radius(b, &q, &acfg)? - want).abs());
            }
            Ok(Trial::new(slack).q(q.modulus()).params(vec![n as f64]).matrices(vec![base]).detail(format!("{tag:?}")))
        }));
    }

    let fixed_q = |i: usize| (i + 1) as f64 / 10.0;
    v.push(Property::new("examples/tridiag_2_1", "example: tridiag(2,1)", Suite::Sandwich, 1e-5, |_| 10, move |cfg, rng, i| {
        let q = fixed_q(i);
        let spec = StructuredSpec::tridiagonal(Family::Tridiagonal, 3, ComplexMatrix::scalar(C64::new(2.0, 0.0)), ComplexMatrix::scalar(ONE))?;
        let bcfg = BoundsConfig {
            ascent: seeded(cfg, rng),
            tolerance: cfg.sandwich_tolerance,
            ..Default::default()
        };
        let r = theorem_bounds(&spec, &qp(q)?, &bcfg)?;
        let top = 2.0 + 2f64.sqrt();
        let p = (1.0 - q * q).sqrt();
        let closed = -((r.lower - top * q).abs() + (r.upper - top * (q + 2.0 * p)).abs());
        Ok(Trial::new(report_slack(&r).min(closed)).q(q).params(vec![r.lower, r.whole_estimate, r.upper]))
    }));
    v.push(Property::new("examples/ex1", "example: symmetric 2x2", Suite::Sandwich, 1e-6, |_| 10, move |cfg, rng, i| {
        let q = fixed_q(i);
        let spec = StructuredSpec::new(Family::Circulant, 2, vec![ComplexMatrix::scalar(C64::new(0.1, 0.0)), ComplexMatrix::scalar(C64::new(1.0 / 24.0, 0.0))])?;
        let bcfg = BoundsConfig {
            ascent: seeded(cfg, rng),
            tolerance: cfg.tolerance,
            ..Default::default()
        };
        let r = theorem_bounds(&spec, &qp(q)?, &bcfg)?;
        let exact = -(r.whole_estimate - (1.0 / 24.0 + q / 10.0)).abs();
        Ok(Trial::new(r.verdict.lower_slack.min(r.verdict.upper_slack).min(exact)).q(q).params(vec![r.lower, r.whole_estimate, r.upper]))
    }));
    v.push(Property::new("examples/ones", "example: ones matrix", Suite::Sandwich, 1e-6, |_| 10, move |cfg, rng, i| {
        let q = fixed_q(i);
        let spec = StructuredSpec::new(Family::Circulant, 2, vec![ComplexMatrix::scalar(ONE), ComplexMatrix::scalar(ONE)])?;
        let qv = qp(q)?;
        let bcfg = BoundsConfig {
            ascent: seeded(cfg, rng),
            tolerance: cfg.tolerance,
            ..Default::default()
        };
        let r = theorem_bounds(&spec, &qv, &bcfg)?;
        let exact = -(r.whole_estimate - (1.0 + q)).abs() - (r.lower - 2.0 * q).abs() - (r.upper - 2.0 * q * k_factor(&qv)?).abs();
        Ok(Trial::new(report_slack(&r).min(exact)).q(q).params(vec![r.lower, r.whole_estimate, r.upper]))
    }));
}

fn reduction(v: &mut Vec<Property>) {
    const NS: [usize; 5] = [2, 3, 4, 5, 6];
    const DS: [usize; 3] = [1, 2, 3];
    let grid = |c: &SuiteConfig| NS.len() * DS.len() * c.reduction_trials;
    let cell = |cfg: &SuiteConfig, i: usize| {
        let c = i / cfg.reduction_trials;
        (NS[c % NS.len()], DS[(c / NS.len()) % DS.len()])
    };
    for family in Family::ALL {
        v.push(Property::new(format!("reduction/{family}"), "reduction: conjugation identity", Suite::Reduction, 0.0, grid, move |cfg, rng, i| {
            let (n, d) = cell(cfg, i);
            // first trial of each cell uses identity blocks
            let blocks = if i % cfg.reduction_trials == 0 {
                vec![ComplexMatrix::identity(d); family.arity(n)]
            } else {
                random_blocks(rng, family.arity(n), d)
            };
            let spec = StructuredSpec::new(family, n, blocks.clone())?;
            let defect = reducing_unitary(family, n, d)?.unitarity_defect();
            let red = block_diagonalize(&spec);
            let slack = (1e-10 - defect).min(1e-9 - red.residual);
            Ok(Trial::new(slack).params(vec![n as f64, d as f64, defect, red.residual]).matrices(blocks).detail(family.name()))
        }));
    }
    v.push(Property::new("reduction/equal_circulant_inputs", "structure: equal circulant inputs", Suite::Reduction, 1e-12, grid, move |cfg, rng, i| {
        let (n, d) = cell(cfg, i);
        let s = random_matrix(rng, d);
        let blocks = reduce_to_blocks(&StructuredSpec::new(Family::Circulant, n, vec![s.clone(); n])?);
        let mut err = blocks[0].max_abs_diff(&s.scale(C64::new(n as f64, 0.0)))?;
        for b in &blocks[1..] {
            err = err.max(b.max_abs());
        }
        Ok(Trial::new(-err).params(vec![n as f64]).matrices(vec![s]))
    }));
    v.push(Property::new("reduction/skew_equivalence", "structure: skew circulant equivalence", Suite::Reduction, 1e-12, grid, move |cfg, rng, i| {
        let (n, d) = cell(cfg, i);
        let inputs = random_blocks(rng, n, d);
        let skew = reduce_to_blocks(&StructuredSpec::new(Family::SkewCirculant, n, inputs.clone())?);
        let sigma = FamilyConstants::new(n).sigma;
        let scaled: Vec<ComplexMatrix> = inputs.iter().enumerate().map(|(k, b)| b.scale(sigma.powi(-(k as i32)))).collect();
        let circ = reduce_to_blocks(&StructuredSpec::new(Family::Circulant, n, scaled)?);
        let mut err: f64 = 0.0;
        for (a, b) in skew.iter().zip(&circ) {
            err = err.max(a.max_abs_diff(b)?);
        }
        Ok(Trial::new(-err).params(vec![n as f64]).matrices(inputs))
    }));
    v.push(Property::new("reduction/anti_sign", "structure: anti-tridiagonal sign", Suite::Reduction, 1e-12, grid, move |cfg, rng, i| {
        let (n, d) = cell(cfg, i);
        let t = random_matrix(rng, d);
        let s = random_matrix(rng, d);
        let tri = reduce_to_blocks(&StructuredSpec::tridiagonal(Family::Tridiagonal, n, t.clone(), s.clone())?);
        let anti = reduce_to_blocks(&StructuredSpec::tridiagonal(Family::AntiTridiagonal, n, t.clone(), s.clone())?);
        let mut err: f64 = 0.0;
        for (k, (a, b)) in anti.iter().zip(&tri).enumerate() {
            let sign = if k % 2 == 0 { ONE } else { -ONE };
            err = err.max(a.max_abs_diff(&b.scale(sign))?);
        }
        Ok(Trial::new(-err).params(vec![n as f64]).matrices(vec![t, s]))
    }));
}
