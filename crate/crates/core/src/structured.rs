//! Structured block operator matrices: builders, the unitaries that
//! block-diagonalize them, and the closed-form diagonal blocks.
//!
//! Circulant-type families carry blocks `S_1..S_n` and label their diagonal
//! blocks `k = 0..n-1`; tridiagonal-type families carry a pair `(T, S)` and
//! label theirs `k = 1..n`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{assemble_blocks, ComplexMatrix, C64, I, ONE, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Tridiagonal,
    AlphaTridiagonal,
    OmegaTridiagonal,
    AntiTridiagonal,
    Circulant,
    SkewCirculant,
    ImaginaryCirculant,
    ImaginarySkewCirculant,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Tridiagonal,
        Family::AlphaTridiagonal,
        Family::OmegaTridiagonal,
        Family::AntiTridiagonal,
        Family::Circulant,
        Family::SkewCirculant,
        Family::ImaginaryCirculant,
        Family::ImaginarySkewCirculant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Tridiagonal => "tridiagonal",
            Family::AlphaTridiagonal => "alpha_tridiagonal",
            Family::OmegaTridiagonal => "omega_tridiagonal",
            Family::AntiTridiagonal => "anti_tridiagonal",
            Family::Circulant => "circulant",
            Family::SkewCirculant => "skew_circulant",
            Family::ImaginaryCirculant => "imaginary_circulant",
            Family::ImaginarySkewCirculant => "imaginary_skew_circulant",
        }
    }

    pub fn is_circulant(self) -> bool {
        matches!(
            self,
            Family::Circulant | Family::SkewCirculant | Family::ImaginaryCirculant | Family::ImaginarySkewCirculant
        )
    }

    /// Number of input blocks the family takes for block count `n`.
    pub fn arity(self, n: usize) -> usize {
        if self.is_circulant() {
            n
        } else {
            2
        }
    }

    /// Which side the reducing unitary conjugates from.
    pub fn orientation(self) -> Orientation {
        match self {
            Family::ImaginaryCirculant | Family::ImaginarySkewCirculant => Orientation::AdjointFirst,
            _ => Orientation::UnitaryFirst,
        }
    }

    /// Labels `k` attached to the diagonal blocks, in order.
    pub fn block_labels(self, n: usize) -> Vec<usize> {
        if self.is_circulant() {
            (0..n).collect()
        } else {
            (1..=n).collect()
        }
    }

    /// Multiplier applied to the strictly lower cyclic part of a
    /// circulant-type matrix.
    fn lower_multiplier(self) -> C64 {
        match self {
            Family::SkewCirculant => -ONE,
            Family::ImaginaryCirculant => I,
            Family::ImaginarySkewCirculant => -I,
            _ => ONE,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == key)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown family `{s}`")))
    }
}

/// `UnitaryFirst` means the reduction is `U M U*`; `AdjointFirst` means `U* M U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    UnitaryFirst,
    AdjointFirst,
}

/// Roots of unity and cosine coefficients shared by the families.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyConstants {
    pub n: usize,
    /// `e^{2 pi i / n}`
    pub omega: C64,
    /// `e^{pi i / n}`, an n-th root of -1
    pub sigma: C64,
    /// `e^{pi i / 2n}`, an n-th root of i
    pub alpha_circ: C64,
    /// `e^{-pi i / 2n}`, an n-th root of -i
    pub beta: C64,
    /// Same value as `alpha_circ`; used by the alpha-tridiagonal family.
    pub alpha_tri: C64,
    /// `2 cos(k pi / (n + 1))` for `k = 1..n`
    pub cosines: Vec<f64>,
}

impl FamilyConstants {
    pub fn new(n: usize) -> Self {
        let nf = n as f64;
        let alpha = C64::from_polar(1.0, PI / (2.0 * nf));
        Self {
            n,
            omega: C64::from_polar(1.0, 2.0 * PI / nf),
            sigma: C64::from_polar(1.0, PI / nf),
            alpha_circ: alpha,
            beta: C64::from_polar(1.0, -PI / (2.0 * nf)),
            alpha_tri: alpha,
            cosines: (1..=n).map(|k| tridiagonal_coefficient(k, n)).collect(),
        }
    }
}

/// `2 cos(k pi / (n + 1))`.
pub fn tridiagonal_coefficient(k: usize, n: usize) -> f64 {
    2.0 * (k as f64 * PI / (n as f64 + 1.0)).cos()
}

/// `e^{i pi num / den}` with `num` reduced modulo `2 den` first, so large
/// exponents do not lose accuracy.
fn unit_root(num: i64, den: i64) -> C64 {
    let r = num.rem_euclid(2 * den);
    C64::from_polar(1.0, PI * r as f64 / den as f64)
}

/// A structured operator matrix description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecJson", into = "SpecJson")]
pub struct StructuredSpec {
    family: Family,
    n: usize,
    blocks: Vec<ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    family: Family,
    n: usize,
    blocks: Vec<ComplexMatrix>,
}

impl TryFrom<SpecJson> for StructuredSpec {
    type Error = Error;
    fn try_from(raw: SpecJson) -> Result<Self> {
        StructuredSpec::new(raw.family, raw.n, raw.blocks)
    }
}

impl From<StructuredSpec> for SpecJson {
    fn from(s: StructuredSpec) -> Self {
        SpecJson {
            family: s.family,
            n: s.n,
            blocks: s.blocks,
        }
    }
}

impl StructuredSpec {
    pub fn new(family: Family, n: usize, blocks: Vec<ComplexMatrix>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpec(format!("block count n = {n}, need n >= 2")));
        }
        let want = family.arity(n);
        if blocks.len() != want {
            return Err(Error::InvalidSpec(format!(
                "{family} with n = {n} takes {want} blocks, got {}",
                blocks.len()
            )));
        }
        let d = blocks[0].dim();
        if let Some(bad) = blocks.iter().find(|b| b.dim() != d) {
            return Err(Error::InvalidSpec(format!(
                "blocks must share one dimension: found {d} and {}",
                bad.dim()
            )));
        }
        Ok(Self { family, n, blocks })
    }

    /// Tridiagonal-type spec from the pair `(T, S)`.
    pub fn tridiagonal(family: Family, n: usize, t: ComplexMatrix, s: ComplexMatrix) -> Result<Self> {
        if family.is_circulant() {
            return Err(Error::InvalidSpec(format!("{family} is not a tridiagonal family")));
        }
        Self::new(family, n, vec![t, s])
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    pub fn block_dim(&self) -> usize {
        self.blocks[0].dim()
    }

    pub fn labels(&self) -> Vec<usize> {
        self.family.block_labels(self.n)
    }
}

/// Lays out the `(n d) x (n d)` matrix of the spec.
///
/// * tridiagonal: `T` on the diagonal, `S` on both neighbours.
/// * alpha_tridiagonal: `T` on the diagonal, `alpha^{n-2} S` above and
///   `alpha^n S = i S` below, `alpha = e^{pi i / 2n}`.
/// * omega_tridiagonal: `omega^{n-1} S` above, `omega S` below.
/// * anti_tridiagonal: `T` on the anti-diagonal, `S` on its two neighbours.
/// * circulant types: row `r` is the `r`-fold cyclic shift of `(S_1..S_n)`
///   with the wrapped (below-diagonal) entries multiplied by `1, -1, i, -i`.
pub fn build_structured(spec: &StructuredSpec) -> ComplexMatrix {
    let n = spec.n;
    let d = spec.block_dim();
    let c = FamilyConstants::new(n);
    let blocks = &spec.blocks;
    let cell = |m: &ComplexMatrix, z: C64| Some(if z == ONE { m.clone() } else { m.scale(z) });

    let layout: Vec<Vec<Option<ComplexMatrix>>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|col| match spec.family {
                    f if f.is_circulant() => {
                        let m = (col + n - r) % n;
                        let z = if col >= r { ONE } else { f.lower_multiplier() };
                        cell(&blocks[m], z)
                    }
                    Family::AntiTridiagonal => {
                        let s = r + col;
                        if s + 1 == n {
                            cell(&blocks[0], ONE)
                        } else if s + 2 == n || s == n {
                            cell(&blocks[1], ONE)
                        } else {
                            None
                        }
                    }
                    family => {
                        let (above, below) = match family {
                            Family::AlphaTridiagonal => (c.alpha_tri.powu(n as u32 - 2), unit_root(1, 2)),
                            Family::OmegaTridiagonal => (unit_root(2 * (n as i64 - 1), n as i64), c.omega),
                            _ => (ONE, ONE),
                        };
                        if col == r {
                            cell(&blocks[0], ONE)
                        } else if col == r + 1 {
                            cell(&blocks[1], above)
                        } else if r == col + 1 {
                            cell(&blocks[1], below)
                        } else {
                            None
                        }
                    }
                })
                .collect()
        })
        .collect();
    assemble_blocks(&layout, d).expect("spec blocks share one dimension")
}

/// Orthogonal sine transform `sqrt(2/(n+1)) sin(i j pi / (n+1))`, `i, j = 1..n`.
pub fn sine_transform(n: usize) -> ComplexMatrix {
    let scale = (2.0 / (n as f64 + 1.0)).sqrt();
    ComplexMatrix::from_fn(n, |r, c| {
        let arg = ((r + 1) * (c + 1)) as f64 * PI / (n as f64 + 1.0);
        C64::new(scale * arg.sin(), 0.0)
    })
}

/// Unitary Fourier matrix `omega^{jk} / sqrt(n)`, `j, k = 0..n-1`.
pub fn fourier(n: usize) -> ComplexMatrix {
    let scale = 1.0 / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, |r, c| unit_root(2 * ((r * c) % n) as i64, n as i64) * scale)
}

/// `diag(z^0, z^1, ..., z^{n-1})` with `z = e^{i pi num / den}`.
fn phase_diagonal(n: usize, num: i64, den: i64) -> ComplexMatrix {
    let diag: Vec<C64> = (0..n as i64).map(|r| unit_root(r * num, den)).collect();
    ComplexMatrix::diagonal(&diag)
}

/// The scalar `n x n` factor of the reducing unitary; the full unitary is
/// this tensored with `I_d`.
fn scalar_reducing_unitary(family: Family, n: usize) -> ComplexMatrix {
    let ni = n as i64;
    match family {
        Family::Tridiagonal | Family::AntiTridiagonal => sine_transform(n),
        // conj(alpha)^r, alpha = e^{pi i / 2n}
        Family::AlphaTridiagonal => &sine_transform(n) * &phase_diagonal(n, -1, 2 * ni),
        // conj(omega)^r
        Family::OmegaTridiagonal => &sine_transform(n) * &phase_diagonal(n, -2, ni),
        Family::Circulant => fourier(n),
        // F diag(sigma^r): row k of the product is (sigma omega^k)^r
        Family::SkewCirculant => &fourier(n) * &phase_diagonal(n, 1, ni),
        // diag(alpha^r) F: column k is (alpha omega^k)^r
        Family::ImaginaryCirculant => &phase_diagonal(n, 1, 2 * ni) * &fourier(n),
        Family::ImaginarySkewCirculant => &phase_diagonal(n, -1, 2 * ni) * &fourier(n),
    }
}

/// Unitary `U` with `U M U*` (or `U* M U`, see [`Family::orientation`])
/// block diagonal for every matrix `M` of the family.
pub fn reducing_unitary(family: Family, n: usize, d: usize) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::InvalidSpec(format!("block count n = {n}, need n >= 2")));
    }
    if d == 0 {
        return Err(Error::InvalidSpec("block dimension must be positive".into()));
    }
    Ok(scalar_reducing_unitary(family, n).kron_identity(d))
}

/// Closed-form diagonal blocks, ordered by [`Family::block_labels`].
///
/// * circulant: `sum_i omega^{k(1-i)} S_i`
/// * skew_circulant: `sum_i (sigma omega^k)^{1-i} S_i`
/// * imaginary_circulant: `sum_i (alpha omega^k)^{i-1} S_i`
/// * imaginary_skew_circulant: `sum_i (beta omega^k)^{i-1} S_i`
/// * tridiagonal, omega_tridiagonal: `T + 2cos(k pi/(n+1)) S`
/// * alpha_tridiagonal: `T + 2 alpha^{n-1} cos(k pi/(n+1)) S`
/// * anti_tridiagonal: `(-1)^{k+1} (T + 2cos(k pi/(n+1)) S)`
pub fn reduce_to_blocks(spec: &StructuredSpec) -> Vec<ComplexMatrix> {
    let n = spec.n;
    let ni = n as i64;
    let blocks = &spec.blocks;
    if spec.family.is_circulant() {
        return (0..ni)
            .map(|k| {
                // coefficient of S_{m+1} as e^{i pi num / den}
                let coefficient = |m: i64| match spec.family {
                    Family::Circulant => unit_root(-2 * k * m, ni),
                    Family::SkewCirculant => unit_root(-m * (1 + 2 * k), ni),
                    Family::ImaginaryCirculant => unit_root(m * (1 + 4 * k), 2 * ni),
                    Family::ImaginarySkewCirculant => unit_root(m * (4 * k - 1), 2 * ni),
                    _ => unreachable!(),
                };
                linear_combination(blocks, (0..ni).map(coefficient))
            })
            .collect();
    }

    let (t, s) = (&blocks[0], &blocks[1]);
    let twist = match spec.family {
        Family::AlphaTridiagonal => unit_root(ni - 1, 2 * ni),
        _ => ONE,
    };
    (1..=n)
        .map(|k| {
            let b = t + &s.scale(twist * tridiagonal_coefficient(k, n));
            if spec.family == Family::AntiTridiagonal && k % 2 == 0 {
                -&b
            } else {
                b
            }
        })
        .collect()
}

fn linear_combination(blocks: &[ComplexMatrix], coeffs: impl Iterator<Item = C64>) -> ComplexMatrix {
    let d = blocks[0].dim();
    let mut data = vec![ZERO; d * d];
    for (b, z) in blocks.iter().zip(coeffs) {
        for (acc, e) in data.iter_mut().zip(b.entries()) {
            *acc += z * e;
        }
    }
    ComplexMatrix::new(d, data).expect("finite combination of finite blocks")
}

/// A conjugation of a structured matrix to block-diagonal form.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub unitary: ComplexMatrix,
    pub orientation: Orientation,
    pub labels: Vec<usize>,
    pub blocks: Vec<ComplexMatrix>,
    /// Largest entry of `U M U* - (B_1 ⊕ ... ⊕ B_n)` (or with `U* M U`).
    pub residual: f64,
}

pub fn block_diagonalize(spec: &StructuredSpec) -> Reduction {
    let unitary = reducing_unitary(spec.family, spec.n, spec.block_dim()).expect("validated spec");
    let m = build_structured(spec);
    let blocks = reduce_to_blocks(spec);
    let orientation = spec.family.orientation();
    let conjugated = match orientation {
        Orientation::UnitaryFirst => &(&unitary * &m) * &unitary.adjoint(),
        Orientation::AdjointFirst => &(&unitary.adjoint() * &m) * &unitary,
    };
    let diag = ComplexMatrix::direct_sum(&blocks).expect("non-empty");
    let residual = conjugated.max_abs_diff(&diag).expect("same dimension");
    Reduction {
        unitary,
        orientation,
        labels: spec.labels(),
        blocks,
        residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s(x: f64) -> ComplexMatrix {
        ComplexMatrix::scalar(C64::new(x, 0.0))
    }

    fn random_blocks(seed: u64, count: usize, d: usize) -> Vec<ComplexMatrix> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| ComplexMatrix::gaussian(&mut rng, d)).collect()
    }

    #[test]
    fn constants_are_roots() {
        for n in 2..=9 {
            let c = FamilyConstants::new(n);
            let k = n as u32;
            assert!((c.omega.powu(k) - ONE).norm() < 1e-12);
            assert!((c.sigma.powu(k) + ONE).norm() < 1e-12);
            assert!((c.alpha_circ.powu(k) - I).norm() < 1e-12);
            assert!((c.beta.powu(k) + I).norm() < 1e-12);
            assert_eq!(c.cosines.len(), n);
        }
    }

    #[test]
    fn two_block_layouts() {
        let t = random_blocks(1, 1, 2).remove(0);
        let sm = random_blocks(2, 1, 2).remove(0);
        let circ = build_structured(&StructuredSpec::new(Family::Circulant, 2, vec![t.clone(), sm.clone()]).unwrap());
        let expect = assemble_blocks(&[vec![Some(t.clone()), Some(sm.clone())], vec![Some(sm.clone()), Some(t.clone())]], 2).unwrap();
        assert_eq!(circ, expect);
        let skew = build_structured(&StructuredSpec::new(Family::SkewCirculant, 2, vec![t.clone(), sm.clone()]).unwrap());
        let expect = assemble_blocks(&[vec![Some(t.clone()), Some(sm.clone())], vec![Some(-&sm), Some(t)]], 2).unwrap();
        assert_eq!(skew, expect);
    }

    #[test]
    fn three_by_three_tridiagonal_example() {
        let spec = StructuredSpec::tridiagonal(Family::Tridiagonal, 3, s(2.0), s(1.0)).unwrap();
        let m = build_structured(&spec);
        assert_eq!(m, ComplexMatrix::from_real_rows(&[&[2.0, 1.0, 0.0], &[1.0, 2.0, 1.0], &[0.0, 1.0, 2.0]]));
    }

    #[test]
    fn anti_tridiagonal_layout() {
        let spec = StructuredSpec::tridiagonal(Family::AntiTridiagonal, 4, s(7.0), s(1.0)).unwrap();
        let m = build_structured(&spec);
        let expect = ComplexMatrix::from_real_rows(&[
            &[0.0, 0.0, 1.0, 7.0],
            &[0.0, 1.0, 7.0, 1.0],
            &[1.0, 7.0, 1.0, 0.0],
            &[7.0, 1.0, 0.0, 0.0],
        ]);
        assert_eq!(m, expect);
    }

    #[test]
    fn circulant_rows_are_cyclic_shifts() {
        let blocks: Vec<_> = (1..=4).map(|v| s(v as f64)).collect();
        let m = build_structured(&StructuredSpec::new(Family::ImaginaryCirculant, 4, blocks).unwrap());
        // second row: i S_4, S_1, S_2, S_3
        assert_eq!(m.get(1, 0), C64::new(0.0, 4.0));
        assert_eq!(m.get(1, 1), ONE);
        assert_eq!(m.get(3, 2), C64::new(0.0, 4.0));
        assert_eq!(m.get(3, 0), C64::new(0.0, 2.0));
    }

    #[test]
    fn spec_validation() {
        assert!(StructuredSpec::new(Family::Circulant, 3, vec![s(1.0), s(2.0)]).is_err());
        assert!(StructuredSpec::new(Family::Tridiagonal, 3, vec![s(1.0), s(2.0), s(3.0)]).is_err());
        assert!(StructuredSpec::new(Family::Tridiagonal, 1, vec![s(1.0), s(2.0)]).is_err());
        let mixed = vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)];
        assert!(StructuredSpec::new(Family::Tridiagonal, 3, mixed).is_err());
        assert!("imaginary-skew-circulant".parse::<Family>().is_ok());
        assert!("hankel".parse::<Family>().is_err());
    }

    #[test]
    fn spec_json_shape() {
        let spec = StructuredSpec::tridiagonal(Family::AntiTridiagonal, 3, s(2.0), s(1.0)).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.starts_with(r#"{"family":"anti_tridiagonal","n":3,"blocks":[{"dim":1"#));
        let back: StructuredSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        let bad = r#"{"family":"circulant","n":3,"blocks":[{"dim":1,"entries":[[1,0]]}]}"#;
        assert!(serde_json::from_str::<StructuredSpec>(bad).is_err());
    }

    #[test]
    fn two_point_sine_transform_is_hadamard() {
        let u = reducing_unitary(Family::Tridiagonal, 2, 1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expect = ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]);
        assert!(u.max_abs_diff(&expect).unwrap() < 1e-15);
    }

    #[test]
    fn unitaries_are_unitary() {
        assert!(reducing_unitary(Family::Circulant, 4, 1).unwrap().unitarity_defect() < 1e-12);
        let skew = reducing_unitary(Family::SkewCirculant, 2, 1).unwrap();
        assert!(skew.unitarity_defect() < 1e-12);
        // F_2 diag(1, i)
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expect = ComplexMatrix::from_rows(vec![vec![C64::new(h, 0.0), C64::new(0.0, h)], vec![C64::new(h, 0.0), C64::new(0.0, -h)]]).unwrap();
        assert!(skew.max_abs_diff(&expect).unwrap() < 1e-15);
        for family in Family::ALL {
            for n in 2..=6 {
                for d in 1..=3 {
                    let u = reducing_unitary(family, n, d).unwrap();
                    assert!(u.unitarity_defect() < 1e-10, "{family} n={n} d={d}");
                }
            }
        }
    }

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        a.max_abs_diff(b).unwrap() < tol
    }

    #[test]
    fn two_block_closed_forms() {
        let [t, sm]: [ComplexMatrix; 2] = random_blocks(3, 2, 2).try_into().unwrap();
        let pair = vec![t.clone(), sm.clone()];
        let b = reduce_to_blocks(&StructuredSpec::new(Family::Circulant, 2, pair.clone()).unwrap());
        assert!(close(&b[0], &(&t + &sm), 1e-14) && close(&b[1], &(&t - &sm), 1e-14));

        let b = reduce_to_blocks(&StructuredSpec::new(Family::SkewCirculant, 2, pair.clone()).unwrap());
        assert!(close(&b[0], &(&t - &sm.scale(I)), 1e-14) && close(&b[1], &(&t + &sm.scale(I)), 1e-14));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let b = reduce_to_blocks(&StructuredSpec::new(Family::ImaginaryCirculant, 2, pair.clone()).unwrap());
        let z = C64::new(h, h);
        assert!(close(&b[0], &(&t + &sm.scale(z)), 1e-14) && close(&b[1], &(&t - &sm.scale(z)), 1e-14));

        let b = reduce_to_blocks(&StructuredSpec::new(Family::ImaginarySkewCirculant, 2, pair.clone()).unwrap());
        let z = C64::new(h, -h);
        assert!(close(&b[0], &(&t + &sm.scale(z)), 1e-14) && close(&b[1], &(&t - &sm.scale(z)), 1e-14));

        let b = reduce_to_blocks(&StructuredSpec::tridiagonal(Family::Tridiagonal, 3, t.clone(), sm.clone()).unwrap());
        let r2 = C64::new(2.0_f64.sqrt(), 0.0);
        assert!(close(&b[0], &(&t + &sm.scale(r2)), 1e-14));
        assert!(close(&b[1], &t, 1e-14));
        assert!(close(&b[2], &(&t - &sm.scale(r2)), 1e-14));
    }

    #[test]
    fn scalar_anti_tridiagonal_reduction() {
        let (t, sv) = (0.7, -1.3);
        let spec = StructuredSpec::tridiagonal(Family::AntiTridiagonal, 2, s(t), s(sv)).unwrap();
        let red = block_diagonalize(&spec);
        assert!((red.blocks[0].get(0, 0) - C64::new(t + sv, 0.0)).norm() < 1e-15);
        assert!((red.blocks[1].get(0, 0) - C64::new(sv - t, 0.0)).norm() < 1e-15);
        assert!(red.residual < 1e-12);
    }

    #[test]
    fn scalar_tridiagonal_reduction() {
        let spec = StructuredSpec::tridiagonal(Family::Tridiagonal, 3, s(2.0), s(1.0)).unwrap();
        let red = block_diagonalize(&spec);
        let r2 = 2.0_f64.sqrt();
        for (b, want) in red.blocks.iter().zip([2.0 + r2, 2.0, 2.0 - r2]) {
            assert!((b.get(0, 0).re - want).abs() < 1e-14);
        }
        assert!(red.residual < 1e-12);
        assert_eq!(red.labels, vec![1, 2, 3]);
    }

    #[test]
    fn random_circulant_reduction() {
        let spec = StructuredSpec::new(Family::Circulant, 3, random_blocks(4, 3, 2)).unwrap();
        assert!(block_diagonalize(&spec).residual < 1e-10);
    }

    #[test]
    fn every_family_reduces() {
        let mut seed = 100;
        for family in Family::ALL {
            for n in 2..=6 {
                for d in 1..=3 {
                    seed += 1;
                    let spec = StructuredSpec::new(family, n, random_blocks(seed, family.arity(n), d)).unwrap();
                    let red = block_diagonalize(&spec);
                    assert!(red.residual < 1e-9, "{family} n={n} d={d}: residual {}", red.residual);
                    assert!(red.unitary.unitarity_defect() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn equal_circulant_inputs_collapse() {
        let sm = random_blocks(7, 1, 2).remove(0);
        for n in 2..=6 {
            let spec = StructuredSpec::new(Family::Circulant, n, vec![sm.clone(); n]).unwrap();
            let b = reduce_to_blocks(&spec);
            assert!(close(&b[0], &sm.scale(C64::new(n as f64, 0.0)), 1e-12));
            for blk in &b[1..] {
                assert!(blk.max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn skew_matches_phase_scaled_circulant() {
        for n in 2..=6 {
            let inputs = random_blocks(20 + n as u64, n, 2);
            let skew = reduce_to_blocks(&StructuredSpec::new(Family::SkewCirculant, n, inputs.clone()).unwrap());
            let sigma = FamilyConstants::new(n).sigma;
            let scaled: Vec<_> = inputs.iter().enumerate().map(|(i, b)| b.scale(sigma.powi(-(i as i32)))).collect();
            let circ = reduce_to_blocks(&StructuredSpec::new(Family::Circulant, n, scaled).unwrap());
            for (a, b) in skew.iter().zip(&circ) {
                assert!(close(a, b, 1e-12));
            }
        }
    }

    #[test]
    fn anti_blocks_alternate_sign_of_tridiagonal_blocks() {
        let [t, sm]: [ComplexMatrix; 2] = random_blocks(8, 2, 3).try_into().unwrap();
        for n in 2..=6 {
            let tri = reduce_to_blocks(&StructuredSpec::tridiagonal(Family::Tridiagonal, n, t.clone(), sm.clone()).unwrap());
            let anti = reduce_to_blocks(&StructuredSpec::tridiagonal(Family::AntiTridiagonal, n, t.clone(), sm.clone()).unwrap());
            for (k, (a, b)) in anti.iter().zip(&tri).enumerate() {
                let sign = if k % 2 == 0 { ONE } else { -ONE };
                assert!(close(a, &b.scale(sign), 1e-14));
            }
        }
    }

    /// With a plain `S` below the diagonal and `alpha^{n-2} S` above, the
    /// alpha-tridiagonal matrix is *not* unitarily reduced to the
    /// `T + 2 alpha^{n-1} cos S` blocks; its true blocks carry the phase
    /// `alpha^{(n-2)/2}` instead. This measures the gap.
    #[test]
    fn unit_subdiagonal_alpha_layout_needs_other_phase() {
        let [t, sm]: [ComplexMatrix; 2] = random_blocks(9, 2, 2).try_into().unwrap();
        for n in 3..=6 {
            let spec = StructuredSpec::tridiagonal(Family::AlphaTridiagonal, n, t.clone(), sm.clone()).unwrap();
            let mut m = build_structured(&spec);
            let alpha = FamilyConstants::new(n).alpha_tri;
            let d = 2;
            for r in 1..n {
                for i in 0..d {
                    for j in 0..d {
                        m.set(r * d + i, (r - 1) * d + j, sm.get(i, j));
                    }
                }
            }
            let u = reducing_unitary(Family::AlphaTridiagonal, n, d).unwrap();
            let conj = m.conjugate_by(&u).unwrap();
            let stated = ComplexMatrix::direct_sum(&reduce_to_blocks(&spec)).unwrap();
            assert!(conj.max_abs_diff(&stated).unwrap() > 1e-2, "n={n}");

            // Symmetrize the phases: super = sub = alpha^{(n-2)/2} S.
            let half = alpha.powf((n as f64 - 2.0) / 2.0);
            let phase = ComplexMatrix::diagonal(
                &(0..n).map(|r| (half / alpha.powu(n as u32 - 2)).powu(r as u32)).collect::<Vec<_>>(),
            )
            .kron_identity(d);
            let sym = m.conjugate_by(&phase.adjoint()).unwrap();
            let v = sine_transform(n).kron_identity(d);
            let true_blocks: Vec<_> = (1..=n).map(|k| &t + &sm.scale(half * tridiagonal_coefficient(k, n))).collect();
            let diag = ComplexMatrix::direct_sum(&true_blocks).unwrap();
            assert!(sym.conjugate_by(&v).unwrap().max_abs_diff(&diag).unwrap() < 1e-12, "n={n}");
        }
    }
}
