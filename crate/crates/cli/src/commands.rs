use std::path::{Path, PathBuf};

use qradius_core::bounds::{direct_sum_bounds, special_case_bounds, theorem_bounds, BoundsConfig, SpecialCase};
use qradius_core::qrange::{estimate_radius, exact_2x2, trace_boundary, BoundaryTrace};
use qradius_core::structured::{block_diagonalize, build_structured};
use qradius_core::verify::{run_suite, Suite, SuiteConfig};
use qradius_core::{AscentConfig, BoundsReport, ComplexMatrix, Family, QParameter, RadiusEstimate, StructuredSpec};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::io::{check_output, csv, parse_grid, parse_q, read_matrix, read_spec, to_json, write_atomic, QInput};
use crate::plot::{Plot, Series};

#[derive(Serialize)]
struct RadiusOutput<'a> {
    q: &'a QInput,
    #[serde(flatten)]
    estimate: &'a RadiusEstimate,
    constraint_residual: f64,
}

pub fn radius(matrix: &Path, q: &str, cfg: &AscentConfig, json: bool) -> CliResult<()> {
    let q = parse_q(q)?;
    let a = read_matrix(matrix)?;
    let est = estimate_radius(&a, &q.param, cfg)?;
    let residual = est.constraint_residual(&q.param);
    if json {
        print!(
            "{}",
            to_json(&RadiusOutput {
                q: &q,
                estimate: &est,
                constraint_residual: residual,
            })
        );
    } else {
        println!("q          {}", q.describe());
        println!("value      {}", est.value);
        println!("residual   {residual:e}");
        println!("converged  {}", est.converged);
        println!("restarts   {}", est.restarts_used);
        println!("max_gap    {:e}", est.max_gap);
    }
    Ok(())
}

fn boundary_csv(trace: &BoundaryTrace) -> String {
    let rows = trace
        .thetas
        .iter()
        .zip(&trace.support_values)
        .zip(&trace.points)
        .map(|((&t, &h), z)| vec![t, h, z.re, z.im]);
    csv(&["theta", "support", "re", "im"], rows)
}

fn boundary_svg(trace: &BoundaryTrace, title: String) -> String {
    Plot {
        title,
        x_label: "Re".into(),
        y_label: "Im".into(),
        equal_aspect: true,
        series: vec![Series {
            label: "boundary".into(),
            color: "#1f4e9c",
            points: trace.points.iter().map(|z| (z.re, z.im)).collect(),
            closed: true,
        }],
    }
    .render()
}

pub fn range(matrix: &Path, q: &str, thetas: usize, out: &Path, svg: Option<&Path>, cfg: &AscentConfig) -> CliResult<()> {
    let q = parse_q(q)?;
    if thetas < 8 {
        return Err(CliError::Usage(format!("--thetas must be at least 8, got {thetas}")));
    }
    check_output(out)?;
    if let Some(p) = svg {
        check_output(p)?;
    }
    let a = read_matrix(matrix)?;
    let trace = trace_boundary(&a, &q.param, thetas, cfg)?;
    write_atomic(out, &boundary_csv(&trace))?;
    if let Some(p) = svg {
        write_atomic(p, &boundary_svg(&trace, format!("boundary of W_q, q = {}", q.describe())))?;
    }
    println!("q                    {}", q.describe());
    println!("angles               {thetas}");
    println!("max |point|          {}", trace.max_modulus());
    println!("half-plane violation {:e}", trace.half_plane_violation().max(0.0));
    Ok(())
}

#[derive(Serialize)]
struct LabelledBlock<'a> {
    k: usize,
    matrix: &'a ComplexMatrix,
}

pub fn build(spec: &Path, out: Option<&Path>, unitary: Option<&Path>, blocks: Option<&Path>) -> CliResult<()> {
    for p in [out, unitary, blocks].into_iter().flatten() {
        check_output(p)?;
    }
    let spec = read_spec(spec)?;
    let m = build_structured(&spec);
    let red = block_diagonalize(&spec);
    match out {
        Some(p) => write_atomic(p, &to_json(&m))?,
        None => print!("{}", to_json(&m)),
    }
    if let Some(p) = unitary {
        write_atomic(p, &to_json(&red.unitary))?;
    }
    if let Some(p) = blocks {
        let labelled: Vec<LabelledBlock> = red
            .labels
            .iter()
            .zip(&red.blocks)
            .map(|(&k, b)| LabelledBlock { k, matrix: b })
            .collect();
        write_atomic(p, &to_json(&labelled))?;
    }
    // keep stdout pure JSON when the matrix goes there
    let report = |line: String| if out.is_some() { println!("{line}") } else { eprintln!("{line}") };
    report(format!("family             {}", spec.family()));
    report(format!("size               {}", m.dim()));
    report(format!("unitarity defect   {:e}", red.unitary.unitarity_defect()));
    report(format!("reduction residual {:e}", red.residual));
    Ok(())
}

fn print_bounds(r: &BoundsReport, q: &QInput) {
    match r.family {
        Some(f) => println!("family     {f} (n = {})", r.n),
        None => println!("family     direct sum ({} blocks)", r.n),
    }
    println!("q          {}", q.describe());
    println!("K(q)       {}", r.k_factor);
    for (k, w) in r.block_labels.iter().zip(&r.block_radii) {
        println!("  w_q(B_{k}) {w}");
    }
    println!("lower      {}", r.lower);
    println!("whole      {}", r.whole_estimate);
    println!("upper      {}", r.upper);
    if let Some(s) = &r.special {
        let coeffs: Vec<String> = s.coefficients.iter().map(f64::to_string).collect();
        println!("special    {:?}: w_q(base) = {}, |c_k| = [{}]", s.tag, s.base_radius, coeffs.join(", "));
    }
    let v = &r.verdict;
    let ok = |b: bool| if b { "ok" } else { "VIOLATED" };
    println!("lower      {} (slack {:e})", ok(v.lower_ok), v.lower_slack);
    println!("upper      {} (slack {:e})", ok(v.upper_ok), v.upper_slack);
    if let Some(c) = v.collapse_ok {
        println!("q = 1      {}", ok(c));
    }
    if v.escalated {
        println!("note       whole-matrix estimate retried with more restarts");
    }
}

#[derive(Serialize)]
struct BoundsOutput<'a> {
    q: &'a QInput,
    #[serde(flatten)]
    report: &'a BoundsReport,
}

#[allow(clippy::too_many_arguments)]
pub fn bounds(
    family: &str,
    n: usize,
    q: &str,
    special: Option<&str>,
    block_files: &[PathBuf],
    ascent: &AscentConfig,
    json: bool,
) -> CliResult<()> {
    let q = parse_q(q)?;
    let direct = matches!(family.to_ascii_lowercase().replace('-', "_").as_str(), "direct_sum");
    let fam = if direct {
        None
    } else {
        Some(family.parse::<Family>().map_err(|e| CliError::Usage(e.to_string()))?)
    };
    let special = special
        .map(|s| s.parse::<SpecialCase>().map_err(|e| CliError::Usage(e.to_string())))
        .transpose()?;
    if n < 1 || (fam.is_some() && n < 2) {
        return Err(CliError::Usage(format!("--n must be at least 2, got {n}")));
    }
    let expected = match (fam, special) {
        (_, Some(_)) => 1,
        (Some(f), None) => f.arity(n),
        (None, None) => n,
    };
    if block_files.len() != expected {
        return Err(CliError::Usage(format!(
            "{family} with n = {n} takes {expected} block file(s), got {}",
            block_files.len()
        )));
    }
    let blocks = block_files.iter().map(|p| read_matrix(p)).collect::<CliResult<Vec<_>>>()?;
    let cfg = BoundsConfig {
        ascent: *ascent,
        ..Default::default()
    };
    let report = match (fam, special) {
        (None, Some(_)) => return Err(CliError::Usage("--special needs a tridiagonal family".into())),
        (Some(f), Some(tag)) => special_case_bounds(tag, f, &blocks[0], n, &q.param, &cfg),
        (Some(f), None) => StructuredSpec::new(f, n, blocks).and_then(|spec| theorem_bounds(&spec, &q.param, &cfg)),
        (None, None) => direct_sum_bounds(&blocks, &q.param, &cfg),
    }
    .map_err(|e| match e {
        qradius_core::Error::InvalidSpec(_) | qradius_core::Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
        other => other.into(),
    })?;
    if json {
        print!("{}", to_json(&BoundsOutput { q: &q, report: &report }));
    } else {
        print_bounds(&report, &q);
    }
    Ok(())
}

pub fn verify(suite: &str, seed: u64, trials: Option<usize>, report: Option<&Path>) -> CliResult<()> {
    let suite: Suite = suite.parse().map_err(|e: qradius_core::Error| CliError::Usage(e.to_string()))?;
    if let Some(p) = report {
        check_output(p)?;
    }
    let mut cfg = SuiteConfig::default().with_seed(seed);
    if let Some(t) = trials {
        if t == 0 {
            return Err(CliError::Usage("--trials must be positive".into()));
        }
        cfg = cfg.with_trials(t);
    }
    let result = run_suite(suite, &cfg)?;
    let json = result.to_json();
    let summary = |line: String| if report.is_some() { println!("{line}") } else { eprintln!("{line}") };
    for r in &result.records {
        summary(format!(
            "{} {:<40} {:>6} trials  worst slack {:e}",
            if r.passed() { "PASS" } else { "FAIL" },
            r.name,
            r.trials,
            r.worst_slack
        ));
    }
    match report {
        Some(p) => write_atomic(p, &json)?,
        None => print!("{json}"),
    }
    if result.passed {
        Ok(())
    } else {
        Err(CliError::PropertyFailure(result.records.iter().filter(|r| !r.passed()).count()))
    }
}

struct Example {
    name: &'static str,
    spec: StructuredSpec,
}

fn example(name: &str) -> CliResult<Example> {
    let scalar = |v: f64| ComplexMatrix::from_real_rows(&[&[v]]);
    let (name, spec) = match name {
        "ex0" => ("ex0", StructuredSpec::tridiagonal(Family::Tridiagonal, 3, scalar(2.0), scalar(1.0))),
        "ex1" => ("ex1", StructuredSpec::new(Family::Circulant, 2, vec![scalar(0.1), scalar(1.0 / 24.0)])),
        "ex2" => ("ex2", StructuredSpec::new(Family::Circulant, 2, vec![scalar(1.0), scalar(1.0)])),
        other => return Err(CliError::Usage(format!("unknown example `{other}`: expected ex0, ex1 or ex2"))),
    };
    Ok(Example {
        name,
        spec: spec.expect("valid example"),
    })
}

/// Lower/upper bounds and `w_q` for one example at one `q`. For `2x2`
/// matrices `w_q` comes from the closed form.
fn example_row(ex: &Example, m: &ComplexMatrix, q: f64, cfg: &BoundsConfig) -> CliResult<[f64; 4]> {
    let qp = QParameter::real(q)?;
    let r = theorem_bounds(&ex.spec, &qp, cfg)?;
    let wq = if m.dim() == 2 { exact_2x2(m, &qp)?.1 } else { r.whole_estimate };
    Ok([q, r.lower, wq, r.upper])
}

fn suffixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn reproduce(name: &str, grid: &str, prefix: &Path, thetas: usize, ascent: &AscentConfig) -> CliResult<()> {
    let ex = example(name)?;
    let grid = parse_grid(grid)?;
    if thetas < 8 {
        return Err(CliError::Usage(format!("--thetas must be at least 8, got {thetas}")));
    }
    let paths = ["_bounds.csv", "_bounds.svg", "_boundary.csv", "_boundary.svg"].map(|s| suffixed(prefix, s));
    for p in &paths {
        check_output(p)?;
    }
    let m = build_structured(&ex.spec);
    let cfg = BoundsConfig {
        ascent: *ascent,
        ..Default::default()
    };
    let rows = grid.iter().map(|&q| example_row(&ex, &m, q, &cfg)).collect::<CliResult<Vec<_>>>()?;
    let half = QParameter::real(0.5)?;
    let trace = trace_boundary(&m, &half, thetas, ascent)?;

    write_atomic(&paths[0], &csv(&["q", "lower", "wq", "upper"], rows.iter().map(|r| r.to_vec())))?;
    let column = |j: usize| rows.iter().map(|r| (r[0], r[j])).collect::<Vec<_>>();
    let comparison = Plot {
        title: format!("{}: w_q against its bounds", ex.name),
        x_label: "q".into(),
        y_label: "value".into(),
        equal_aspect: false,
        series: vec![
            Series {
                label: "upper".into(),
                color: "#c0392b",
                points: column(3),
                closed: false,
            },
            Series {
                label: "w_q".into(),
                color: "#1f4e9c",
                points: column(2),
                closed: false,
            },
            Series {
                label: "lower".into(),
                color: "#27894a",
                points: column(1),
                closed: false,
            },
        ],
    };
    write_atomic(&paths[1], &comparison.render())?;
    write_atomic(&paths[2], &boundary_csv(&trace))?;
    write_atomic(&paths[3], &boundary_svg(&trace, format!("{}: boundary of W_q, q = 0.5", ex.name)))?;

    const SLACK: f64 = 1e-5;
    let violations = rows.iter().filter(|r| !(r[1] - SLACK <= r[2] && r[2] <= r[3] + SLACK)).count();
    println!("example     {}", ex.name);
    println!("grid        {} points in [{}, {}]", rows.len(), grid[0], grid[grid.len() - 1]);
    println!("max |point| {} at q = 0.5", trace.max_modulus());
    for p in &paths {
        println!("wrote       {}", p.display());
    }
    if violations > 0 {
        eprintln!("lower <= w_q <= upper fails at {violations} grid point(s)");
        return Err(CliError::PropertyFailure(1));
    }
    Ok(())
}
