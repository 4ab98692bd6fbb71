//! Fixed-shape complex linear algebra for 2×2 and 4×4 operators.
//!
//! Everything here works on value types ([`Matrix`], [`Vector`]) backed by
//! inline arrays, so products and adjoints never allocate. Basis ordering is
//! the computational one, `(|00⟩, |01⟩, |10⟩, |11⟩)`.
//!
//! Two spectral routines carry the numerical weight:
//!
//! - [`op_norm`] / [`op_norm_dist`]: largest singular value, computed as the
//!   square root of the top eigenvalue of `D†D` from a Hermitian Jacobi solve.
//! - [`eig_unitary`]: eigenpairs of a unitary through joint Jacobi
//!   diagonalization of its commuting Hermitian parts `(M+M†)/2` and
//!   `(M−M†)/2i`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Unitarity tolerance required by [`eig_unitary`].
pub const UNITARY_TOL: f64 = 1e-10;

const MAX_DIM: usize = 4;
const JACOBI_MAX_SWEEPS: usize = 100;
/// Off-diagonal mass (relative to the Frobenius scale) below which a sweep
/// loop stops early.
const JACOBI_STOP: f64 = 1e-15;
/// Off-diagonal mass accepted when the sweep cap is reached.
const JACOBI_ACCEPT: f64 = 1e-13;

/// `e^{iθ}`.
#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::new(theta.cos(), theta.sin())
}

/// Reduce an angle to `(−π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut r = theta.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    // rem_euclid can return TAU itself for tiny negative inputs
    if r <= -PI {
        r += TAU;
    }
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 => Ok(()),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

// ---------------------------------------------------------------------------
// Vector
// ---------------------------------------------------------------------------

/// Complex column vector of length 2 or 4.
#[derive(Clone, Copy, PartialEq)]
pub struct Vector {
    dim: usize,
    data: [C64; MAX_DIM],
}

impl Vector {
    pub fn new(entries: &[C64]) -> Result<Self> {
        check_dim(entries.len())?;
        let mut data = [ZERO; MAX_DIM];
        data[..entries.len()].copy_from_slice(entries);
        Ok(Self { dim: entries.len(), data })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 4, "unsupported dimension {dim}");
        Self { dim, data: [ZERO; MAX_DIM] }
    }

    /// Standard basis vector `e_k` (0-based).
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[k] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data[..self.dim]
    }

    /// `⟨self, other⟩ = Σ selfᵢ·conj(otherᵢ)`.
    pub fn inner(&self, other: &Vector) -> C64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.as_slice().iter().zip(other.as_slice()).map(|(a, b)| a * b.conj()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.as_slice().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = *self;
        for x in &mut out.data[..self.dim] {
            *x *= c;
        }
        out
    }

    /// Unit vector in the same direction; `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            None
        } else {
            Some(self.scale(C64::new(1.0 / n, 0.0)))
        }
    }

    /// Fails unless `| ‖v‖ − 1 | ≤ tol`.
    pub fn check_unit(&self, tol: f64) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() <= tol {
            Ok(())
        } else {
            Err(Error::NotUnitVector { norm: n })
        }
    }

    pub fn distance(&self, other: &Vector) -> f64 {
        (*self - *other).norm()
    }
}

impl Index<usize> for Vector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.as_slice()[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        let dim = self.dim;
        &mut self.data[..dim][i]
    }
}

impl Sub for Vector {
    type Output = Vector;
    fn sub(self, rhs: Vector) -> Vector {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self;
        for i in 0..self.dim {
            out.data[i] -= rhs.data[i];
        }
        out
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.as_slice()).finish()
    }
}

// ---------------------------------------------------------------------------
// Matrix
// ---------------------------------------------------------------------------

/// Dense row-major complex square matrix of dimension 2 or 4.
#[derive(Clone, Copy, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: [C64; MAX_DIM * MAX_DIM],
}

/// Which tensor factor a 2×2 operator occupies in [`tensor_id`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `A ⊗ I`: acts on the first (most significant) qubit.
    Left,
    /// `I ⊗ A`: acts on the second qubit.
    Right,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 4, "unsupported dimension {dim}");
        Self { dim, data: [ZERO; MAX_DIM * MAX_DIM] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Build from row-major entries; `entries.len()` must be 4 or 16.
    pub fn new(entries: &[C64]) -> Result<Self> {
        let dim = match entries.len() {
            4 => 2,
            16 => 4,
            n => return Err(Error::UnsupportedDimension(n)),
        };
        let mut m = Self::zeros(dim);
        m.data[..entries.len()].copy_from_slice(entries);
        Ok(m)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Real matrix from row-major `f64` entries.
    pub fn from_real(entries: &[f64]) -> Result<Self> {
        let cs: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::new(&cs)
    }

    pub fn diag(entries: &[C64]) -> Result<Self> {
        check_dim(entries.len())?;
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        Ok(m)
    }

    /// `blockdiag(upper, lower)` from two 2×2 blocks.
    pub fn block_diag(upper: &Matrix, lower: &Matrix) -> Result<Self> {
        for b in [upper, lower] {
            if b.dim != 2 {
                return Err(Error::DimensionMismatch { left: b.dim, right: 2 });
            }
        }
        let mut m = Self::zeros(4);
        for r in 0..2 {
            for c in 0..2 {
                m[(r, c)] = upper[(r, c)];
                m[(r + 2, c + 2)] = lower[(r, c)];
            }
        }
        Ok(m)
    }

    /// 2×2 diagonal block `k` (0 = upper-left, 1 = lower-right) of a 4×4.
    pub fn block(&self, k: usize) -> Matrix {
        assert_eq!(self.dim, 4, "block() needs a 4×4 matrix");
        let o = 2 * k;
        Matrix::from_fn(2, |r, c| self[(r + o, c + o)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, c: C64) -> Matrix {
        let mut out = *self;
        for x in &mut out.data[..self.dim * self.dim] {
            *x *= c;
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn det(&self) -> C64 {
        match self.dim {
            2 => self[(0, 0)] * self[(1, 1)] - self[(0, 1)] * self[(1, 0)],
            _ => {
                // Laplace expansion along the first row is plenty for 4×4.
                let mut total = ZERO;
                for c in 0..4 {
                    let minor = |r: usize, k: usize| {
                        let cols: Vec<usize> = (0..4).filter(|&j| j != c).collect();
                        self[(r, cols[k])]
                    };
                    let m3 = minor(1, 0) * (minor(2, 1) * minor(3, 2) - minor(2, 2) * minor(3, 1))
                        - minor(1, 1) * (minor(2, 0) * minor(3, 2) - minor(2, 2) * minor(3, 0))
                        + minor(1, 2) * (minor(2, 0) * minor(3, 1) - minor(2, 1) * minor(3, 0));
                    let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                    total += self[(0, c)] * m3 * sign;
                }
                total
            }
        }
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: v.dim() });
        }
        let mut out = Vector::zeros(self.dim);
        for r in 0..self.dim {
            out[r] = (0..self.dim).map(|c| self[(r, c)] * v[c]).sum();
        }
        Ok(out)
    }

    pub fn column(&self, c: usize) -> Vector {
        let mut v = Vector::zeros(self.dim);
        for r in 0..self.dim {
            v[r] = self[(r, c)];
        }
        v
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data[..self.dim * self.dim].iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data[..self.dim * self.dim].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖M·M† − I‖_op`.
    pub fn unitarity_residual(&self) -> f64 {
        op_norm(&(*self * self.adjoint() - Matrix::identity(self.dim)))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }

    pub fn check_unitary(&self, tol: f64) -> Result<()> {
        let residual = self.unitarity_residual();
        if residual <= tol {
            Ok(())
        } else {
            Err(Error::NotUnitary { residual })
        }
    }

    /// Rank-one outer product `v·w†`.
    pub fn outer(v: &Vector, w: &Vector) -> Matrix {
        assert_eq!(v.dim(), w.dim(), "dimension mismatch");
        Matrix::from_fn(v.dim(), |r, c| v[r] * w[c].conj())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        assert!(r < self.dim && c < self.dim, "index ({r}, {c}) out of range");
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        assert!(r < self.dim && c < self.dim, "index ({r}, {c}) out of range");
        &mut self.data[r * self.dim + c]
    }
}

/// Panics on dimension mismatch; use [`mat_mul`] for the checked form.
impl Mul for Matrix {
    type Output = Matrix;
    fn mul(self, rhs: Matrix) -> Matrix {
        mat_mul(&self, &rhs).expect("matrix dimension mismatch")
    }
}

impl Add for Matrix {
    type Output = Matrix;
    fn add(self, rhs: Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let mut out = self;
        for i in 0..self.dim * self.dim {
            out.data[i] += rhs.data[i];
        }
        out
    }
}

impl Sub for Matrix {
    type Output = Matrix;
    fn sub(self, rhs: Matrix) -> Matrix {
        self + (-rhs)
    }
}

impl Neg for Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self[(r, c)];
                write!(f, "{:>10.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { left: a.dim, right: b.dim });
    }
    let n = a.dim;
    let mut out = Matrix::zeros(n);
    for r in 0..n {
        for c in 0..n {
            let mut acc = ZERO;
            for k in 0..n {
                acc += a.data[r * n + k] * b.data[k * n + c];
            }
            out.data[r * n + c] = acc;
        }
    }
    Ok(out)
}

pub fn adjoint(a: &Matrix) -> Matrix {
    a.adjoint()
}

/// Embed a 2×2 operator into the two-qubit space: `A⊗I` or `I⊗A`.
pub fn tensor_id(a: &Matrix, side: Side) -> Result<Matrix> {
    if a.dim != 2 {
        return Err(Error::DimensionMismatch { left: a.dim, right: 2 });
    }
    Ok(Matrix::from_fn(4, |r, c| {
        let (r_hi, r_lo, c_hi, c_lo) = (r / 2, r % 2, c / 2, c % 2);
        match side {
            Side::Left if r_lo == c_lo => a[(r_hi, c_hi)],
            Side::Right if r_hi == c_hi => a[(r_lo, c_lo)],
            _ => ZERO,
        }
    }))
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

/// Operator (spectral) norm: the largest singular value.
pub fn op_norm(a: &Matrix) -> f64 {
    let gram = a.adjoint() * *a;
    let (values, _) = match eigh(&gram) {
        Ok(r) => r,
        // Jacobi on a Hermitian matrix always reaches the acceptance level;
        // fall back to the Frobenius bound if it somehow does not.
        Err(_) => return a.frobenius(),
    };
    values.iter().copied().fold(0.0, f64::max).max(0.0).sqrt()
}

/// `‖A − B‖_op`.
pub fn op_norm_dist(a: &Matrix, b: &Matrix) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { left: a.dim, right: b.dim });
    }
    Ok(op_norm(&(*a - *b)))
}

/// Result of aligning the global phase of one operator to another.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseAlignment {
    /// `min_δ ‖e^{iδ}A − B‖_op`.
    pub distance: f64,
    /// The minimizing `δ`, in `(−π, π]`.
    pub phase: f64,
}

/// `min over δ of ‖e^{iδ}·A − B‖_op`, with the minimizing phase.
///
/// For unitary `A` the objective is `max_k |e^{iδ} − λ_k|` over the
/// eigenvalues `λ_k` of `B·A†`, minimized at the centre of the shortest arc
/// covering all eigen-angles. That candidate and the trace-alignment
/// candidate `arg tr(A†B)` are both evaluated directly and refined with a
/// golden-section scan, so the returned distance is always a measured norm.
pub fn phase_align(a: &Matrix, b: &Matrix) -> Result<PhaseAlignment> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { left: a.dim, right: b.dim });
    }
    let objective = |delta: f64| op_norm(&(a.scale(cis(delta)) - *b));

    let mut candidates = Vec::with_capacity(2);
    let overlap = (a.adjoint() * *b).trace();
    if overlap.norm() > 0.0 {
        candidates.push(overlap.arg());
    }
    if let Ok(angles) = normal_eigen_angles(&(*b * a.adjoint())) {
        candidates.push(covering_arc_center(&angles));
    }
    if candidates.is_empty() {
        candidates.push(0.0);
    }

    let mut best = PhaseAlignment { distance: f64::INFINITY, phase: 0.0 };
    for &delta in &candidates {
        let d = objective(delta);
        if d < best.distance {
            best = PhaseAlignment { distance: d, phase: delta };
        }
    }

    // golden-section refinement in a small window around the best candidate
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best.phase - 1e-2, best.phase + 1e-2);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (objective(x1), objective(x2));
    for _ in 0..60 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2);
        }
        for (x, f) in [(x1, f1), (x2, f2)] {
            if f < best.distance {
                best = PhaseAlignment { distance: f, phase: x };
            }
        }
    }
    best.phase = wrap_angle(best.phase);
    Ok(best)
}

/// `min over δ of ‖e^{iδ}·A − B‖_op`.
pub fn phase_aligned_dist(a: &Matrix, b: &Matrix) -> Result<f64> {
    phase_align(a, b).map(|p| p.distance)
}

/// Centre of the shortest arc of the circle that contains every angle.
fn covering_arc_center(angles: &[f64]) -> f64 {
    let mut sorted: Vec<f64> = angles.iter().map(|a| a.rem_euclid(TAU)).collect();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let (mut gap, mut start) = (sorted[0] + TAU - sorted[n - 1], sorted[0]);
    for i in 0..n - 1 {
        let g = sorted[i + 1] - sorted[i];
        if g > gap {
            gap = g;
            start = sorted[i + 1];
        }
    }
    wrap_angle(start + (TAU - gap) / 2.0)
}

// ---------------------------------------------------------------------------
// Eigen-decomposition
// ---------------------------------------------------------------------------

/// One eigenpair of a unitary: eigenvalue `e^{iη}` and unit eigenvector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    /// `η ∈ (−π, π]`.
    pub value_angle: f64,
    pub vector: Vector,
}

impl EigenPair {
    pub fn eigenvalue(&self) -> C64 {
        cis(self.value_angle)
    }
}

/// Orthonormal eigenpairs of a unitary matrix, ordered by ascending angle.
///
/// Eigenvectors are phase-normalized so that their first non-negligible
/// entry is real and positive. Eigenvalues whose angles agree within 1e-10
/// form a tie group ordered by descending lexicographic comparison of the
/// vector entries, so the standard basis keeps its natural order.
pub fn eig_unitary(m: &Matrix) -> Result<Vec<EigenPair>> {
    check_dim(m.dim)?;
    m.check_unitary(UNITARY_TOL)?;
    let v = normal_eigenvectors(m)?;
    let n = m.dim;

    let mut pairs: Vec<EigenPair> = (0..n)
        .map(|k| {
            let mut vec = v.column(k);
            // re-normalize against accumulated rounding
            vec = vec.normalized().unwrap_or(vec);
            if let Some(pivot) = vec.as_slice().iter().find(|x| x.norm() > 1e-9).copied() {
                vec = vec.scale(pivot.conj() / pivot.norm());
            }
            let lambda = m.apply(&vec).expect("same dim").inner(&vec);
            EigenPair { value_angle: wrap_angle(lambda.arg()), vector: vec }
        })
        .collect();

    pairs.sort_by(|a, b| a.value_angle.total_cmp(&b.value_angle));
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && pairs[end].value_angle - pairs[start].value_angle <= 1e-10 {
            end += 1;
        }
        pairs[start..end].sort_by(|a, b| lexicographic_desc(&a.vector, &b.vector));
        start = end;
    }
    Ok(pairs)
}

fn lexicographic_desc(a: &Vector, b: &Vector) -> std::cmp::Ordering {
    for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
        let ord = y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im));
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}

/// Unitary whose columns jointly diagonalize the Hermitian parts of a normal
/// matrix.
fn normal_eigenvectors(m: &Matrix) -> Result<Matrix> {
    let adj = m.adjoint();
    let half = C64::new(0.5, 0.0);
    let h1 = (*m + adj).scale(half);
    let h2 = (*m - adj).scale(C64::new(0.0, -0.5));
    let mut mats = [h1, h2];
    joint_diagonalize(&mut mats)
}

/// Eigen-angles of a (nearly) normal matrix, without the unitarity check.
fn normal_eigen_angles(m: &Matrix) -> Result<Vec<f64>> {
    let v = normal_eigenvectors(m)?;
    Ok((0..m.dim)
        .map(|k| {
            let col = v.column(k);
            m.apply(&col).expect("same dim").inner(&col).arg()
        })
        .collect())
}

/// Eigenvalues (ascending) and eigenvector columns of a Hermitian matrix.
pub fn eigh(h: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let mut mats = [*h];
    let v = joint_diagonalize(&mut mats)?;
    let d = mats[0];
    let mut order: Vec<usize> = (0..h.dim).collect();
    order.sort_by(|&i, &j| d[(i, i)].re.total_cmp(&d[(j, j)].re));
    let values = order.iter().map(|&i| d[(i, i)].re).collect();
    let vectors = Matrix::from_fn(h.dim, |r, c| v[(r, order[c])]);
    Ok((values, vectors))
}

/// Cyclic Jacobi sweeps that simultaneously diagonalize one or two commuting
/// Hermitian matrices in place, returning the accumulated unitary `V` with
/// `Aₖ(original) = V·Aₖ·V†`.
///
/// Each 2×2 plane `(p, q)` is written as `t·I + h·σ⃗`; conjugation by SU(2)
/// rotates `h`. The rotation maximizing the summed squared diagonal splits
/// sends the top eigenvector of `Σ hₖhₖᵀ` onto the z axis.
fn joint_diagonalize(mats: &mut [Matrix]) -> Result<Matrix> {
    debug_assert!(!mats.is_empty() && mats.len() <= 2);
    let n = mats[0].dim;
    let mut v = Matrix::identity(n);
    let scale = mats.iter().map(|m| m.frobenius().powi(2)).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Ok(v);
    }
    let off_diagonal = |mats: &[Matrix]| -> f64 {
        let mut s = 0.0;
        for m in mats {
            for r in 0..n {
                for c in 0..n {
                    if r != c {
                        s += m[(r, c)].norm_sqr();
                    }
                }
            }
        }
        s.sqrt()
    };

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal(mats) <= JACOBI_STOP * scale {
            return Ok(v);
        }
        for p in 0..n {
            for q in p + 1..n {
                let mut hs = [[0.0f64; 3]; 2];
                let mut weight = 0.0;
                for (k, m) in mats.iter().enumerate() {
                    let b = m[(p, q)];
                    hs[k] = [b.re, -b.im, 0.5 * (m[(p, p)].re - m[(q, q)].re)];
                    weight += b.norm_sqr();
                }
                if weight <= (1e-18 * scale).powi(2) {
                    continue;
                }
                let Some(axis) = dominant_axis(&hs[..mats.len()]) else {
                    continue;
                };
                let (c, s) = {
                    let [nx, ny, nz] = axis;
                    let c = ((1.0 + nz) / 2.0).sqrt();
                    (c, C64::new(nx, ny) / (2.0 * c))
                };
                let u = [[C64::new(c, 0.0), -s.conj()], [s, C64::new(c, 0.0)]];
                for m in mats.iter_mut() {
                    rotate_plane(m, p, q, &u);
                }
                // V ← V·G
                for r in 0..n {
                    let (a, b) = (v[(r, p)], v[(r, q)]);
                    v[(r, p)] = a * u[0][0] + b * u[1][0];
                    v[(r, q)] = a * u[0][1] + b * u[1][1];
                }
            }
        }
    }
    let off = off_diagonal(mats);
    if off <= JACOBI_ACCEPT * scale {
        Ok(v)
    } else {
        Err(Error::NoConvergence { sweeps: JACOBI_MAX_SWEEPS, off_diagonal: off })
    }
}

/// Unit vector maximizing `Σ (hₖ·n)²`, oriented with `n_z ≥ 0`.
fn dominant_axis(hs: &[[f64; 3]]) -> Option<[f64; 3]> {
    let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let n = match hs {
        [h] => *h,
        [h1, h2] => {
            // top eigenvector of the 2×2 Gram matrix gives the mixing weights
            let (g11, g12, g22) = (dot(h1, h1), dot(h1, h2), dot(h2, h2));
            let t = 0.5 * (2.0 * g12).atan2(g11 - g22);
            let (ct, st) = (t.cos(), t.sin());
            [ct * h1[0] + st * h2[0], ct * h1[1] + st * h2[1], ct * h1[2] + st * h2[2]]
        }
        _ => unreachable!("joint diagonalization supports one or two matrices"),
    };
    let len = dot(&n, &n).sqrt();
    if len == 0.0 || !len.is_finite() {
        return None;
    }
    let sign = if n[2] < 0.0 { -1.0 } else { 1.0 };
    Some([sign * n[0] / len, sign * n[1] / len, sign * n[2] / len])
}

/// `A ← G†·A·G` where `G` is the identity except for the `(p, q)` block `u`.
fn rotate_plane(a: &mut Matrix, p: usize, q: usize, u: &[[C64; 2]; 2]) {
    let n = a.dim;
    for r in 0..n {
        let (x, y) = (a[(r, p)], a[(r, q)]);
        a[(r, p)] = x * u[0][0] + y * u[1][0];
        a[(r, q)] = x * u[0][1] + y * u[1][1];
    }
    for c in 0..n {
        let (x, y) = (a[(p, c)], a[(q, c)]);
        a[(p, c)] = u[0][0].conj() * x + u[1][0].conj() * y;
        a[(q, c)] = u[0][1].conj() * x + u[1][1].conj() * y;
    }
}

/// Closest unitary in Frobenius norm (polar factor `M·(M†M)^{-1/2}`).
pub fn nearest_unitary(m: &Matrix) -> Result<Matrix> {
    let (values, w) = eigh(&(m.adjoint() * *m))?;
    if values.iter().any(|&x| x <= 0.0) {
        return Err(Error::NotUnitary { residual: m.unitarity_residual() });
    }
    let inv_sqrt = Matrix::diag(
        &values.iter().map(|&x| C64::new(1.0 / x.sqrt(), 0.0)).collect::<Vec<_>>(),
    )?;
    Ok(*m * (w * inv_sqrt * w.adjoint()))
}

// ---------------------------------------------------------------------------
// Random sampling
// ---------------------------------------------------------------------------

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// triangular factor's diagonal made positive (Gram–Schmidt does this
/// implicitly).
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Matrix {
    let g = Matrix::from_fn(dim, |_, _| gaussian_complex(rng));
    let mut cols: Vec<Vector> = (0..dim).map(|c| g.column(c)).collect();
    for k in 0..dim {
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for j in 0..k {
                let proj = cols[k].inner(&cols[j]);
                cols[k] = cols[k] - cols[j].scale(proj);
            }
        }
        cols[k] = cols[k].normalized().expect("gaussian column is nonzero a.s.");
    }
    Matrix::from_fn(dim, |r, c| cols[c][r])
}

/// Uniformly random unit vector in `C^dim`.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vector {
    let mut v = Vector::zeros(dim);
    for i in 0..dim {
        v[i] = gaussian_complex(rng);
    }
    v.normalized().expect("gaussian vector is nonzero a.s.")
}
