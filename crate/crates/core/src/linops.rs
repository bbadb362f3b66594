//! Dense complex linear algebra for small bipartite systems.
//!
//! Bipartite vectors use the row-major correspondence
//! `|A>> = sum_ij A_ij |i>|j>`, so the flat index of `|i>|j>` is `i * d + j`
//! and the first tensor factor is the one unitaries act on.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest row or column count `kron` will build unless told otherwise.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Tolerance for unitarity, hermiticity and trace checks.
pub const EXACT_TOL: f64 = 1e-10;

/// Relative singular-value cutoff used for every rank decision.
pub const RANK_TOL: f64 = 1e-10;

pub const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("empty matrix {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Parses nested rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(n, m, rows.iter().flatten().copied().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| C64::new(0.0, 0.0))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { c(0.0, 0.0) })
    }

    /// Diagonal unitary `diag(e^{i theta_k})`.
    pub fn diag_phases(phases: &[f64]) -> Self {
        let d: Vec<C64> = phases.iter().map(|&t| C64::from_polar(1.0, t)).collect();
        Self::from_diag(&d)
    }

    /// Outer product `|a><b|`.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        Self::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(c(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.diagonal().into_iter().sum()
    }

    /// Matrix product; panics on inner-dimension mismatch (see `try_matmul`).
    pub fn matmul(&self, rhs: &Self) -> Self {
        self.try_matmul(rhs).expect("matmul dimension mismatch")
    }

    pub fn try_matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = vec![c(0.0, 0.0); self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == c(0.0, 0.0) {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out[i * rhs.cols..(i + 1) * rhs.cols].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self { rows: self.rows, cols: rhs.cols, data: out })
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// `<u|M|v>`.
    pub fn sandwich(&self, u: &[C64], v: &[C64]) -> Result<C64> {
        let mv = self.mul_vec(v)?;
        if u.len() != mv.len() {
            return Err(Error::Shape("bra length mismatch".into()));
        }
        Ok(inner(u, &mv))
    }

    /// Largest element-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square()
            && self
                .adjoint()
                .matmul(self)
                .max_abs_diff(&Self::identity(self.rows))
                <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_re(0.5)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    /// Eigendecomposition of the Hermitian part, eigenvalues ascending,
    /// eigenvectors as columns of the returned matrix.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        if !self.is_square() {
            return Err(Error::Shape(format!("{}x{} is not square", self.rows, self.cols)));
        }
        let h = self.hermitian_part().to_nalgebra();
        let eig = SymmetricEigen::try_new(h, f64::EPSILON, 0)
            .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
        let mut order: Vec<usize> = (0..self.rows).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = Self::from_fn(self.rows, self.rows, |i, j| eig.eigenvectors[(i, order[j])]);
        Ok((values, vectors))
    }

    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.hermitian_eigen()?.0)
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.to_nalgebra().singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// Number of singular values above `RANK_TOL` times the largest one.
    pub fn rank(&self) -> usize {
        count_above_relative(&self.singular_values())
    }
}

pub(crate) fn count_above_relative(descending: &[f64]) -> usize {
    let top = descending.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return 0;
    }
    descending.iter().filter(|&&s| s > RANK_TOL * top).count()
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// `<a|b>` with the first argument conjugated.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalized(v: &[C64]) -> Result<Vec<C64>> {
    let n = norm(v);
    if n == 0.0 || !n.is_finite() {
        return Err(Error::Domain("cannot normalize a zero vector".into()));
    }
    Ok(v.iter().map(|z| z / n).collect())
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron_with_cap(a, b, DEFAULT_DIM_CAP)
}

/// Kronecker product `(a (x) b)_{(ik)(jl)} = a_ij b_kl`, refusing results
/// with more than `cap` rows or columns.
pub fn kron_with_cap(a: &ComplexMatrix, b: &ComplexMatrix, cap: usize) -> Result<ComplexMatrix> {
    let rows = a.rows.saturating_mul(b.rows);
    let cols = a.cols.saturating_mul(b.cols);
    let requested = rows.max(cols);
    if requested > cap {
        return Err(Error::Size { requested, cap });
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |r, s| {
        a[(r / b.rows, s / b.cols)] * b[(r % b.rows, s % b.cols)]
    }))
}

/// `|A>>` for a square `A`.
pub fn vectorize(a: &ComplexMatrix) -> Result<Vec<C64>> {
    if !a.is_square() {
        return Err(Error::Shape(format!("vectorize needs a square matrix, got {}x{}", a.rows, a.cols)));
    }
    Ok(a.data.clone())
}

pub fn devectorize(v: &[C64], d: usize) -> Result<ComplexMatrix> {
    if d == 0 || v.len() != d * d {
        return Err(Error::Shape(format!("vector of length {} is not {d}^2", v.len())));
    }
    ComplexMatrix::new(d, d, v.to_vec())
}

/// `<<A|B>> = Tr[A^dagger B]`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    inner(&a.data, &b.data)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Trace out the first factor, keeping a `d2 x d2` matrix.
    First,
    /// Trace out the second factor, keeping a `d1 x d1` matrix.
    Second,
}

pub fn partial_trace(m: &ComplexMatrix, d1: usize, d2: usize, side: Side) -> Result<ComplexMatrix> {
    let n = d1 * d2;
    if m.rows != n || m.cols != n {
        return Err(Error::Shape(format!(
            "{}x{} is not ({d1}*{d2})x({d1}*{d2})",
            m.rows, m.cols
        )));
    }
    Ok(match side {
        Side::First => ComplexMatrix::from_fn(d2, d2, |k, l| {
            (0..d1).map(|i| m[(i * d2 + k, i * d2 + l)]).sum()
        }),
        Side::Second => ComplexMatrix::from_fn(d1, d1, |i, j| {
            (0..d2).map(|k| m[(i * d2 + k, j * d2 + k)]).sum()
        }),
    })
}

/// Checks the density-matrix invariants: Hermitian, unit trace, PSD.
pub fn validate_density(rho: &ComplexMatrix) -> Result<Vec<f64>> {
    if !rho.is_square() {
        return Err(Error::Domain(format!("{}x{} density matrix", rho.rows, rho.cols)));
    }
    if !rho.is_hermitian(EXACT_TOL) {
        return Err(Error::Domain("density matrix is not Hermitian".into()));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > EXACT_TOL || tr.im.abs() > EXACT_TOL {
        return Err(Error::Domain(format!("density matrix trace {} != 1", tr.re)));
    }
    let eigs = rho.hermitian_eigenvalues()?;
    if let Some(&min) = eigs.first() {
        if min < -EXACT_TOL {
            return Err(Error::Domain(format!("density matrix eigenvalue {min} < 0")));
        }
    }
    Ok(eigs)
}

/// Shannon entropy in bits of a probability vector, with `0 log 0 = 0`.
pub fn shannon_bits(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum::<f64>()
        .max(0.0)
}

pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let eigs = validate_density(rho)?;
    Ok(shannon_bits(&eigs))
}

/// Unit-norm bipartite pure state held as its operator representative `E`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeState {
    e_op: ComplexMatrix,
}

impl ProbeState {
    pub fn new(e_op: ComplexMatrix) -> Result<Self> {
        if !e_op.is_square() {
            return Err(Error::Shape(format!("probe operator {}x{} is not square", e_op.rows, e_op.cols)));
        }
        let n = hs_inner(&e_op, &e_op).re;
        if (n - 1.0).abs() > EXACT_TOL {
            return Err(Error::Domain(format!("Tr[E^dagger E] = {n}, expected 1")));
        }
        Ok(Self { e_op })
    }

    /// Rescales `e_op` to unit Hilbert-Schmidt norm.
    pub fn normalize(e_op: ComplexMatrix) -> Result<Self> {
        let n = e_op.frobenius_norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Domain("zero probe operator".into()));
        }
        Self::new(e_op.scale_re(1.0 / n))
    }

    /// `|I>>/sqrt(d)`.
    pub fn maximally_entangled(d: usize) -> Self {
        Self { e_op: ComplexMatrix::identity(d).scale_re(1.0 / (d as f64).sqrt()) }
    }

    /// The product state `|0>|0>`.
    pub fn product(d: usize) -> Self {
        Self::from_fn_unchecked(d, |i, j| if i == 0 && j == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    /// Diagonal probe with the given Schmidt weights (squared coefficients),
    /// normalized to sum one.
    pub fn from_schmidt_weights(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(Error::Domain("Schmidt weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::Domain("Schmidt weights sum to zero".into()));
        }
        let diag: Vec<C64> = weights.iter().map(|w| c((w / total).sqrt(), 0.0)).collect();
        Self::new(ComplexMatrix::from_diag(&diag))
    }

    /// Product state `|psi>|0>` for a local vector.
    pub fn from_local(psi: &[C64]) -> Result<Self> {
        let psi = normalized(psi)?;
        let d = psi.len();
        Ok(Self::from_fn_unchecked(d, |i, j| if j == 0 { psi[i] } else { c(0.0, 0.0) }))
    }

    fn from_fn_unchecked(d: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self { e_op: ComplexMatrix::from_fn(d, d, f) }
    }

    pub fn dim(&self) -> usize {
        self.e_op.rows
    }

    pub fn operator(&self) -> &ComplexMatrix {
        &self.e_op
    }

    pub fn vector(&self) -> Vec<C64> {
        self.e_op.data.clone()
    }

    /// `E^dagger E`, whose transpose is the reduced state of the second factor.
    pub fn reduced(&self) -> ComplexMatrix {
        self.e_op.adjoint().matmul(&self.e_op)
    }

    pub fn schmidt_coefficients(&self) -> Vec<f64> {
        self.e_op.singular_values()
    }

    pub fn schmidt_weights(&self) -> Vec<f64> {
        self.schmidt_coefficients().iter().map(|s| s * s).collect()
    }

    pub fn schmidt_rank(&self) -> usize {
        self.e_op.rank()
    }

    /// Entanglement entropy `S(E^dagger E)` in bits.
    pub fn entanglement_bits(&self) -> f64 {
        shannon_bits(&self.schmidt_weights())
    }
}

pub fn schmidt_coefficients(p: &ProbeState) -> Vec<f64> {
    p.schmidt_coefficients()
}

/// Spectral data of a unitary: phases in `(-pi, pi]` and eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct UnitaryEigen {
    pub phases: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Relative A-eigenvalue gap below which eigenvectors are re-split by B.
const COMMUTING_CLUSTER_TOL: f64 = 1e-7;

/// Diagonalizes a unitary through the commuting Hermitian pair
/// `A = (U + U^dagger)/2`, `B = (U - U^dagger)/2i`: eigenvectors of `A`
/// within each near-degenerate cluster are rotated to diagonalize `B`.
pub fn eig_unitary(u: &ComplexMatrix) -> Result<UnitaryEigen> {
    if !u.is_unitary(EXACT_TOL) {
        return Err(Error::Domain("eig_unitary needs a unitary matrix".into()));
    }
    let n = u.rows;
    let ud = u.adjoint();
    let a = (u + &ud).scale_re(0.5);
    let b = (u - &ud).scale(c(0.0, -0.5));
    let (avals, avecs) = a.hermitian_eigen()?;

    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && avals[end] - avals[end - 1] <= COMMUTING_CLUSTER_TOL {
            end += 1;
        }
        let block: Vec<Vec<C64>> = (start..end).map(|j| avecs.column(j)).collect();
        if block.len() == 1 {
            columns.push(block[0].clone());
        } else {
            let m = block.len();
            let bv: Vec<Vec<C64>> = block.iter().map(|v| b.mul_vec(v)).collect::<Result<_>>()?;
            let restricted = ComplexMatrix::from_fn(m, m, |i, j| inner(&block[i], &bv[j]));
            let (_, w) = restricted.hermitian_eigen()?;
            for k in 0..m {
                let mut v = vec![c(0.0, 0.0); n];
                for (i, bi) in block.iter().enumerate() {
                    let coef = w[(i, k)];
                    for (vr, x) in v.iter_mut().zip(bi) {
                        *vr += coef * x;
                    }
                }
                columns.push(v);
            }
        }
        start = end;
    }

    let mut phases = Vec::with_capacity(n);
    for v in &columns {
        let lambda = inner(v, &u.mul_vec(v)?);
        phases.push(wrap_phase(lambda.arg()));
    }
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| columns[j][i]);
    Ok(UnitaryEigen { phases, vectors })
}

/// Maps an angle into `(-pi, pi]`.
pub fn wrap_phase(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

pub mod paulis {
    use super::{c, ComplexMatrix};

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_fn(2, 2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c(0.0, -1.0),
            (1, 0) => c(0.0, 1.0),
            _ => c(0.0, 0.0),
        })
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_diag(&[c(1.0, 0.0), c(-1.0, 0.0)])
    }
}
