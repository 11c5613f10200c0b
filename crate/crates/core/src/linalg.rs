//! Dense square complex matrices and the handful of metric primitives the
//! rest of the crate is built on.
//!
//! Inner products are linear in the first argument:
//! `<u, v> = sum_i u_i * conj(v_i)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Tolerance on `| ||x|| - 1 |` accepted by [`UnitVector::new`].
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// Iteration cap for the power iteration behind [`ComplexMatrix::operator_norm`].
pub const POWER_ITERATION_CAP: usize = 10_000;

/// `<u, v>`, linear in `u`.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    norm_sqr(v).sqrt()
}

/// Complex vector of standard Gaussian entries (real and imaginary parts
/// independent `N(0, 1)`).
pub fn gaussian_vector<R: rand::Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect()
}

/// Dense square matrix, row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

/// Wire form: `{"dim": n, "entries": [[re, im], ...]}`, row-major.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(raw: MatrixJson) -> Result<Self> {
        let data = raw.entries.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        ComplexMatrix::new(raw.dim, data)
    }
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(m: ComplexMatrix) -> Self {
        MatrixJson {
            dim: m.dim,
            entries: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  [")?;
            for c in 0..self.dim {
                let z = self.get(r, c);
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Result of the power iteration on `A* A`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl ComplexMatrix {
    /// Validates shape and finiteness.
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMatrix("dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for dimension {dim}, found {}",
                dim * dim,
                entries.len()
            )));
        }
        if let Some(index) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { dim, data: entries })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(dim > 0, "dimension must be positive");
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { dim, data }
    }

    /// Square matrix from real rows. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "rows must form a square");
        Self::from_fn(dim, |r, c| C64::new(rows[r][c], 0.0))
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        Self::new(dim, rows.into_iter().flatten().collect())
    }

    pub fn scalar(z: C64) -> Self {
        Self { dim: 1, data: vec![z] }
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        Self::from_fn(diag.len(), |r, c| if r == c { diag[r] } else { ZERO })
    }

    /// Upper shift with ones on the super-diagonal (nilpotent Jordan block).
    pub fn jordan(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| if c == r + 1 { ONE } else { ZERO })
    }

    /// Random matrix with i.i.d. complex Gaussian entries.
    pub fn gaussian<R: rand::Rng + ?Sized>(rng: &mut R, dim: usize) -> Self {
        Self {
            dim,
            data: gaussian_vector(rng, dim * dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub(crate) fn set(&mut self, r: usize, c: usize, z: C64) {
        self.data[r * self.dim + c] = z;
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `A x`.
    pub fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        self.check_len(x.len())?;
        let mut out = vec![ZERO; self.dim];
        self.apply_into(x, &mut out);
        Ok(out)
    }

    /// `A* x`.
    pub fn apply_adjoint(&self, x: &[C64]) -> Result<Vec<C64>> {
        self.check_len(x.len())?;
        let mut out = vec![ZERO; self.dim];
        self.apply_adjoint_into(x, &mut out);
        Ok(out)
    }

    #[inline]
    pub(crate) fn apply_into(&self, x: &[C64], out: &mut [C64]) {
        for (row, o) in self.data.chunks_exact(self.dim).zip(out.iter_mut()) {
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    #[inline]
    pub(crate) fn apply_adjoint_into(&self, x: &[C64], out: &mut [C64]) {
        out.iter_mut().for_each(|o| *o = ZERO);
        for (row, xr) in self.data.chunks_exact(self.dim).zip(x) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a.conj() * xr;
            }
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: len,
            });
        }
        Ok(())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn scale(&self, z: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a * z).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for r in 0..n {
            let out = &mut data[r * n..(r + 1) * n];
            for k in 0..n {
                let a = self.get(r, k);
                if a == ZERO {
                    continue;
                }
                for (o, b) in out.iter_mut().zip(&other.data[k * n..(k + 1) * n]) {
                    *o += a * b;
                }
            }
        }
        Ok(Self { dim: n, data })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.dim);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `U A U*`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.checked_mul(self)?.checked_mul(&u.adjoint())
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.dim).all(|r| (0..=r).all(|c| (self.get(r, c) - self.get(c, r).conj()).norm() <= tol))
    }

    /// Largest singular value by power iteration on `A* A`.
    pub fn operator_norm(&self) -> f64 {
        self.operator_norm_estimate().value
    }

    /// Power iteration on `A* A` from a fixed pseudo-random start. Stops when
    /// the eigen-residual `||A*A v - rho v||` drops below `1e-10 rho` or the
    /// Rayleigh quotient stops moving; on hitting the cap the best Rayleigh
    /// value is returned with `converged = false`.
    pub fn operator_norm_estimate(&self) -> NormEstimate {
        let n = self.dim;
        if self.data.iter().all(|z| *z == ZERO) {
            return NormEstimate {
                value: 0.0,
                iterations: 0,
                converged: true,
            };
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f9a_7e00);
        let mut v = gaussian_vector(&mut rng, n);
        let s = norm(&v);
        v.iter_mut().for_each(|z| *z /= s);

        let mut av = vec![ZERO; n];
        let mut w = vec![ZERO; n];
        let mut best = 0.0_f64;
        let mut prev = 0.0_f64;
        let mut flat_steps = 0;
        for it in 1..=POWER_ITERATION_CAP {
            self.apply_into(&v, &mut av);
            self.apply_adjoint_into(&av, &mut w);
            // v is unit, so rho = <A*A v, v> = ||A v||^2
            let rho = norm_sqr(&av);
            best = best.max(rho);
            let resid: f64 = w
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b * rho).norm_sqr())
                .sum::<f64>()
                .sqrt();
            let wn = norm(&w);
            if resid <= 1e-10 * rho || wn == 0.0 {
                return NormEstimate {
                    value: best.sqrt(),
                    iterations: it,
                    converged: true,
                };
            }
            if (rho - prev).abs() <= 1e-15 * rho {
                flat_steps += 1;
                if flat_steps >= 20 {
                    return NormEstimate {
                        value: best.sqrt(),
                        iterations: it,
                        converged: true,
                    };
                }
            } else {
                flat_steps = 0;
            }
            prev = rho;
            v.iter_mut().zip(&w).for_each(|(a, b)| *a = b / wn);
        }
        NormEstimate {
            value: best.sqrt(),
            iterations: POWER_ITERATION_CAP,
            converged: false,
        }
    }

    /// `max |(U* U - I)_{ij}|`.
    pub fn unitarity_defect(&self) -> f64 {
        let g = &self.adjoint() * self;
        g.max_abs_diff(&Self::identity(self.dim))
            .expect("same dimension")
    }

    /// Block `(row, col)` of size `d` (zero-based block indices).
    pub fn block(&self, row: usize, col: usize, d: usize) -> Result<Self> {
        if d == 0 || !self.dim.is_multiple_of(d) {
            return Err(Error::InvalidArgument(format!(
                "block size {d} does not divide dimension {}",
                self.dim
            )));
        }
        let n = self.dim / d;
        if row >= n || col >= n {
            return Err(Error::InvalidArgument(format!(
                "block ({row}, {col}) outside a {n}x{n} grid"
            )));
        }
        Ok(Self::from_fn(d, |r, c| self.get(row * d + r, col * d + c)))
    }

    /// All `n x n` blocks of size `d`.
    pub fn extract_blocks(&self, d: usize) -> Result<Vec<Vec<Self>>> {
        if d == 0 || !self.dim.is_multiple_of(d) {
            return Err(Error::InvalidArgument(format!(
                "block size {d} does not divide dimension {}",
                self.dim
            )));
        }
        let n = self.dim / d;
        (0..n)
            .map(|r| (0..n).map(|c| self.block(r, c, d)).collect())
            .collect()
    }

    /// `self ⊗ I_d`.
    pub fn kron_identity(&self, d: usize) -> Self {
        let n = self.dim;
        Self::from_fn(n * d, |r, c| {
            if r % d == c % d {
                self.get(r / d, c / d)
            } else {
                ZERO
            }
        })
    }

    /// Block-diagonal matrix `B_1 ⊕ ... ⊕ B_n`.
    pub fn direct_sum(blocks: &[Self]) -> Result<Self> {
        let first = blocks.first().ok_or(Error::EmptyBlocks)?;
        let d = first.dim;
        let n = blocks.len();
        let layout: Vec<Vec<Option<Self>>> = (0..n)
            .map(|r| (0..n).map(|c| (r == c).then(|| blocks[r].clone())).collect())
            .collect();
        assemble_blocks(&layout, d)
    }
}

/// Assembles an `(n d) x (n d)` matrix from an `n x n` grid of optional
/// `d x d` blocks; `None` cells are zero.
pub fn assemble_blocks(layout: &[Vec<Option<ComplexMatrix>>], d: usize) -> Result<ComplexMatrix> {
    let n = layout.len();
    if n == 0 {
        return Err(Error::EmptyBlocks);
    }
    if d == 0 {
        return Err(Error::InvalidArgument("block dimension must be positive".into()));
    }
    for (r, row) in layout.iter().enumerate() {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        for (c, cell) in row.iter().enumerate() {
            if let Some(b) = cell {
                if b.dim != d {
                    return Err(Error::RaggedBlock {
                        row: r,
                        col: c,
                        expected: d,
                        found: b.dim,
                    });
                }
            }
        }
    }
    let mut out = ComplexMatrix::zeros(n * d);
    for (br, row) in layout.iter().enumerate() {
        for (bc, cell) in row.iter().enumerate() {
            if let Some(b) = cell {
                for r in 0..d {
                    for c in 0..d {
                        out.set(br * d + r, bc * d + c, b.get(r, c));
                    }
                }
            }
        }
    }
    Ok(out)
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        self.checked_add(rhs).expect("matrix dimensions must agree")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.checked_sub(rhs).expect("matrix dimensions must agree")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl Mul<C64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: C64) -> ComplexMatrix {
        self.scale(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(-ONE)
    }
}

/// A vector of Euclidean norm one (within [`UNIT_TOLERANCE`]).
#[derive(Clone, Debug, PartialEq)]
pub struct UnitVector(Vec<C64>);

impl UnitVector {
    pub fn new(components: Vec<C64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("empty vector".into()));
        }
        let n = norm(&components);
        if (n - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NotUnit(n));
        }
        Ok(Self(components))
    }

    /// Rescales a nonzero vector to unit length.
    pub fn normalize(mut components: Vec<C64>) -> Result<Self> {
        let n = norm(&components);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotUnit(n));
        }
        components.iter_mut().for_each(|z| *z /= n);
        Ok(Self(components))
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = vec![ZERO; dim];
        v[index] = ONE;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<C64> {
        self.0
    }
}

impl Serialize for UnitVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.0.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UnitVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        UnitVector::new(pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect())
            .map_err(serde::de::Error::custom)
    }
}
