//! Concrete gates: single-qubit rotations, the universal gate `J(α, β)` and
//! its powers, the approximation primitives built on the Kronecker search,
//! and signed permutations.
//!
//! Angle conventions follow the matrices literally:
//!
//! ```text
//! rz(φ) = diag(e^{−iφ}, e^{iφ})        ry(θ) = [[cos θ, −sin θ], [sin θ, cos θ]]
//! J(α, β) = blockdiag(ry(α), rz(β))    J^m = blockdiag(ry(mα), rz(mβ))
//! ```
//!
//! so `rz(φ)` is a Bloch rotation by `2φ` about Z.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::kronecker::{self, KroneckerQuery};
use crate::numerics::{cis, op_norm_dist, wrap_angle, Matrix, C64, ONE, UNITARY_TOL, ZERO};

pub fn rz(phi: f64) -> Matrix {
    Matrix::diag(&[cis(-phi), cis(phi)]).expect("2×2")
}

pub fn ry(theta: f64) -> Matrix {
    let (s, c) = theta.sin_cos();
    Matrix::from_real(&[c, -s, s, c]).expect("2×2")
}

/// Pauli matrices.
fn pauli() -> [Matrix; 3] {
    let x = Matrix::from_real(&[0.0, 1.0, 1.0, 0.0]).unwrap();
    let y = Matrix::new(&[ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO]).unwrap();
    let z = Matrix::from_real(&[1.0, 0.0, 0.0, -1.0]).unwrap();
    [x, y, z]
}

fn check_2x2_unitary(u: &Matrix) -> Result<()> {
    if u.dim() != 2 {
        return Err(Error::DimensionMismatch { left: u.dim(), right: 2 });
    }
    u.check_unitary(UNITARY_TOL)
}

/// `u / e^{iγ}` with `γ = arg(det u)/2`, so the result has unit determinant.
fn special_part(u: &Matrix) -> (Matrix, f64) {
    let g = 0.5 * u.det().arg();
    (u.scale(cis(-g)), g)
}

// ---------------------------------------------------------------------------
// Axis-angle form
// ---------------------------------------------------------------------------

/// `u = e^{i·global_phase} · (cos(ψ/2)·I − i·sin(ψ/2)·n̂·σ⃗)` with
/// `n̂ = (sin θ cos φ, sin θ sin φ, cos θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAxisAngle {
    pub theta: f64,
    pub phi: f64,
    pub psi: f64,
    pub global_phase: f64,
}

impl BlochAxisAngle {
    pub fn axis(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn matrix(&self) -> Matrix {
        let n = self.axis();
        let [sx, sy, sz] = pauli();
        let (s, c) = (0.5 * self.psi).sin_cos();
        let ns = sx.scale(n[0].into()) + sy.scale(n[1].into()) + sz.scale(n[2].into());
        let r = Matrix::identity(2).scale(c.into()) + ns.scale(C64::new(0.0, -s));
        r.scale(cis(self.global_phase))
    }
}

/// Axis-angle form of a 2×2 unitary. The rotation angle is kept in `[0, π]`
/// by moving a sign into the global phase; the identity gets the Z axis.
pub fn axis_angle_of(u: &Matrix) -> Result<BlochAxisAngle> {
    check_2x2_unitary(u)?;
    let (mut w, mut g) = special_part(u);
    if w.trace().re < 0.0 {
        w = -w;
        g += PI;
    }
    let a = w[(0, 0)];
    let b = w[(1, 0)];
    let s = (a.im * a.im + b.norm_sqr()).sqrt();
    let psi = 2.0 * s.atan2(a.re);
    let (theta, phi) = if s < 1e-15 {
        (0.0, 0.0)
    } else {
        let n = [-b.im / s, b.re / s, -a.im / s];
        let theta = n[2].clamp(-1.0, 1.0).acos();
        let phi = if n[0].hypot(n[1]) < 1e-15 { 0.0 } else { n[1].atan2(n[0]).rem_euclid(TAU) };
        (theta, phi)
    };
    Ok(BlochAxisAngle { theta, phi, psi, global_phase: wrap_angle(g) })
}

/// `u = e^{i·global_phase} · rz(φ)·ry(θ)·rz(ψ)·ry(−θ)·rz(−φ)`: a Z rotation
/// by `ψ` conjugated onto the axis of `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZyDecomposition {
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
    pub global_phase: f64,
}

impl ZyDecomposition {
    /// The five factors in application order (first acts first).
    pub fn factors(&self) -> [Matrix; 5] {
        [rz(-self.phi), ry(-self.theta), rz(self.psi), ry(self.theta), rz(self.phi)]
    }

    pub fn matrix(&self) -> Matrix {
        self.factors()
            .iter()
            .fold(Matrix::identity(2), |acc, f| *f * acc)
            .scale(cis(self.global_phase))
    }
}

pub fn decompose_zy(u: &Matrix) -> Result<ZyDecomposition> {
    let aa = axis_angle_of(u)?;
    // rz(φ/2)·ry(θ/2) carries the Z axis onto n̂
    Ok(ZyDecomposition {
        phi: 0.5 * aa.phi,
        theta: 0.5 * aa.theta,
        psi: 0.5 * aa.psi,
        global_phase: aa.global_phase,
    })
}

/// Three-angle Euler form `e^{iγ}·F(a)·G(b)·F(c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Euler {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub global_phase: f64,
}

/// `u = e^{iγ}·rz(a)·ry(b)·rz(c)`, `b ∈ [0, π/2]`.
pub fn euler_zyz(u: &Matrix) -> Result<Euler> {
    check_2x2_unitary(u)?;
    let (w, g) = special_part(u);
    // w = [[x, −ȳ], [y, x̄]] with x = cos b·e^{−i(a+c)}, y = sin b·e^{i(a−c)}
    let x = w[(0, 0)];
    let y = w[(1, 0)];
    let b = y.norm().atan2(x.norm());
    let (a, c) = if y.norm() < 1e-14 {
        (-x.arg(), 0.0)
    } else if x.norm() < 1e-14 {
        (y.arg(), 0.0)
    } else {
        (0.5 * (y.arg() - x.arg()), -0.5 * (x.arg() + y.arg()))
    };
    Ok(Euler { a, b, c, global_phase: g })
}

/// `u = e^{iγ}·ry(a)·rz(b)·ry(c)`.
pub fn euler_yzy(u: &Matrix) -> Result<Euler> {
    check_2x2_unitary(u)?;
    // Q = (σy + σz)/√2 swaps σy and σz under conjugation, so Q·rz(t)·Q = ry(t)
    let [_, sy, sz] = pauli();
    let q = (sy + sz).scale(std::f64::consts::FRAC_1_SQRT_2.into());
    euler_zyz(&(q * *u * q))
}

// ---------------------------------------------------------------------------
// The universal gate
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JGate {
    pub alpha: f64,
    pub beta: f64,
}

impl JGate {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    pub fn default_gate() -> Self {
        let (alpha, beta) = kronecker::default_constants();
        Self { alpha, beta }
    }
}

impl Default for JGate {
    fn default() -> Self {
        Self::default_gate()
    }
}

pub fn make_j(g: &JGate) -> Matrix {
    Matrix::block_diag(&ry(g.alpha), &rz(g.beta)).expect("2×2 blocks")
}

/// `J^m` in closed form; negative `m` gives adjoint powers.
pub fn j_power(g: &JGate, m: i64) -> Matrix {
    if m == 1 {
        return make_j(g);
    }
    let a = kronecker::phase_of_multiple(m, g.alpha);
    let b = kronecker::phase_of_multiple(m, g.beta);
    Matrix::block_diag(&ry(a), &rz(b)).expect("2×2 blocks")
}

/// The two controlled targets whose product is `J`: `u₀` acts on the second
/// qubit when the first is `|0⟩`, `u₁` when it is `|1⟩`.
pub fn as_controlled_pair(g: &JGate) -> (Matrix, Matrix) {
    (ry(g.alpha), rz(g.beta))
}

/// `|0⟩⟨0|⊗u₀ + |1⟩⟨1|⊗I`.
pub fn controlled_on_zero(u0: &Matrix) -> Result<Matrix> {
    Matrix::block_diag(u0, &Matrix::identity(2))
}

/// `|0⟩⟨0|⊗I + |1⟩⟨1|⊗u₁`.
pub fn controlled_on_one(u1: &Matrix) -> Result<Matrix> {
    Matrix::block_diag(&Matrix::identity(2), u1)
}

/// `σ·diag(a, b)·σ⁻¹ = diag(b, a)`.
pub fn exchange_conjugate(d: &Matrix) -> Result<Matrix> {
    if d.dim() != 2 {
        return Err(Error::DimensionMismatch { left: d.dim(), right: 2 });
    }
    let off = d[(0, 1)].norm().max(d[(1, 0)].norm());
    if off > 0.0 {
        return Err(Error::NotDiagonal(off));
    }
    Matrix::diag(&[d[(1, 1)], d[(0, 0)]])
}

// ---------------------------------------------------------------------------
// Approximation primitives
// ---------------------------------------------------------------------------

/// A power `J^m` standing in for a continuous target.
#[derive(Debug, Clone, PartialEq)]
pub struct Approximation {
    pub m: i64,
    /// The continuous gate being approximated.
    pub ideal: Matrix,
    /// Measured `‖J^m − ideal‖_op`.
    pub error: f64,
    pub exhausted: bool,
}

/// `J^m ≈ blockdiag(ry(θ), rz(φ))`: both blocks are steered at once by a
/// two-coordinate Kronecker search on `(α, β)`.
///
/// Each block distance equals the corresponding chord, so the measured
/// error is below `eps` whenever the search succeeds.
pub fn approx_pair(g: &JGate, theta: f64, phi: f64, eps: f64, m_max: u64) -> Result<Approximation> {
    let q = KroneckerQuery::new(vec![g.alpha, g.beta], vec![theta, phi], eps).with_m_max(m_max);
    let r = kronecker::find_power(&q)?;
    let ideal = Matrix::block_diag(&ry(theta), &rz(phi))?;
    let m = r.m as i64;
    let error = op_norm_dist(&j_power(g, m), &ideal)?;
    Ok(Approximation { m, ideal, error, exhausted: r.exhausted })
}

/// `J^{m₁} ≈ blockdiag(I, rz(φ))`.
pub fn approx_phase_gate(g: &JGate, phi: f64, eps: f64, m_max: u64) -> Result<Approximation> {
    approx_pair(g, 0.0, phi, eps, m_max)
}

/// `J^{m₂} ≈ blockdiag(ry(θ), I)`.
pub fn approx_rotation_gate(g: &JGate, theta: f64, eps: f64, m_max: u64) -> Result<Approximation> {
    approx_pair(g, theta, 0.0, eps, m_max)
}

type SigmaKey = (u64, u64, u64, u64);

fn sigma_cache() -> &'static RwLock<HashMap<SigmaKey, Approximation>> {
    static CACHE: OnceLock<RwLock<HashMap<SigmaKey, Approximation>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `J^{m₃} ≈ blockdiag(σ, I)` with `σ = ry(π/2)`. Cached per
/// `(α, β, eps, m_max)`.
pub fn approx_block_sigma(g: &JGate, eps: f64, m_max: u64) -> Result<Approximation> {
    let key = (g.alpha.to_bits(), g.beta.to_bits(), eps.to_bits(), m_max);
    if let Some(hit) = sigma_cache().read().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(hit.clone());
    }
    let fresh = approx_rotation_gate(g, PI / 2.0, eps, m_max)?;
    let mut cache = sigma_cache().write().unwrap_or_else(|e| e.into_inner());
    Ok(cache.entry(key).or_insert(fresh).clone())
}

// ---------------------------------------------------------------------------
// Signed permutations
// ---------------------------------------------------------------------------

/// Signed permutation `P·e_i = signs[i]·e_{perm[i]}` (0-based).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PermGate {
    perm: [usize; 4],
    signs: [i8; 4],
}

impl PermGate {
    pub fn new(perm: [usize; 4], signs: [i8; 4]) -> Result<Self> {
        let mut seen = [false; 4];
        for &p in &perm {
            if p >= 4 || seen[p] {
                return Err(Error::InvalidPermutation(format!("{perm:?} is not a permutation of 0..4")));
            }
            seen[p] = true;
        }
        if let Some(s) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidPermutation(format!("sign {s} is not ±1")));
        }
        Ok(Self { perm, signs })
    }

    /// Same as [`PermGate::new`] with 1-based images.
    pub fn from_one_based(perm: [usize; 4], signs: [i8; 4]) -> Result<Self> {
        if perm.contains(&0) {
            return Err(Error::InvalidPermutation(format!("{perm:?} is not a permutation of 1..=4")));
        }
        Self::new(perm.map(|p| p - 1), signs)
    }

    pub fn unsigned(perm: [usize; 4]) -> Result<Self> {
        Self::new(perm, [1; 4])
    }

    pub fn identity() -> Self {
        Self { perm: [0, 1, 2, 3], signs: [1; 4] }
    }

    /// `σ ⊗ I` with `σ = [[0, −1], [1, 0]]`.
    pub fn block_swap() -> Self {
        Self { perm: [2, 3, 0, 1], signs: [1, 1, -1, -1] }
    }

    pub fn perm(&self) -> [usize; 4] {
        self.perm
    }

    pub fn signs(&self) -> [i8; 4] {
        self.signs
    }

    pub fn one_based(&self) -> [usize; 4] {
        self.perm.map(|p| p + 1)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn inverse(&self) -> Self {
        let mut perm = [0; 4];
        let mut signs = [1; 4];
        for i in 0..4 {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        Self { perm, signs }
    }

    /// Matrix product `self · rhs` (`rhs` acts first).
    pub fn compose(&self, rhs: &PermGate) -> Self {
        let mut perm = [0; 4];
        let mut signs = [1; 4];
        for i in 0..4 {
            let j = rhs.perm[i];
            perm[i] = self.perm[j];
            signs[i] = rhs.signs[i] * self.signs[j];
        }
        Self { perm, signs }
    }

    /// Recognize a signed permutation matrix (entries exactly 0 or ±1).
    pub fn from_matrix(m: &Matrix) -> Option<Self> {
        if m.dim() != 4 {
            return None;
        }
        let mut perm = [0; 4];
        let mut signs = [1; 4];
        for c in 0..4 {
            let mut found = None;
            for r in 0..4 {
                let z = m[(r, c)];
                if z == ZERO {
                    continue;
                }
                if found.is_some() || z.im != 0.0 || z.re.abs() != 1.0 {
                    return None;
                }
                found = Some((r, z.re.signum() as i8));
            }
            let (r, s) = found?;
            perm[c] = r;
            signs[c] = s;
        }
        Self::new(perm, signs).ok()
    }
}

impl fmt::Debug for PermGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm(")?;
        for i in 0..4 {
            let s = if self.signs[i] < 0 { "-" } else { "+" };
            write!(f, "{}{}", s, self.perm[i] + 1)?;
            if i < 3 {
                write!(f, " ")?;
            }
        }
        write!(f, ")")
    }
}

pub fn perm_matrix(p: &PermGate) -> Matrix {
    let mut m = Matrix::zeros(4);
    for i in 0..4 {
        m[(p.perm[i], i)] = if p.signs[i] < 0 { -ONE } else { ONE };
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{haar_unitary, tensor_id, Side};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    fn close(a: &Matrix, b: &Matrix) -> f64 {
        op_norm_dist(a, b).unwrap()
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(rz(0.0), Matrix::identity(2));
        let quarter = ry(FRAC_PI_2);
        let expect = Matrix::from_real(&[0.0, -1.0, 1.0, 0.0]).unwrap();
        assert!(close(&quarter, &expect) < 1e-16);
        assert!(close(&(rz(SQRT_2) * rz(-SQRT_2)), &Matrix::identity(2)) < 1e-15);
    }

    #[test]
    fn axis_angle_of_identity() {
        let aa = axis_angle_of(&Matrix::identity(2)).unwrap();
        assert_eq!((aa.theta, aa.phi, aa.psi, aa.global_phase), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn axis_angle_of_rz_is_z_axis_double_angle() {
        let aa = axis_angle_of(&rz(0.37)).unwrap();
        assert!(aa.theta.abs() < 1e-15);
        assert!((aa.psi - 0.74).abs() < 1e-15);
        assert!(aa.global_phase.abs() < 1e-15);
    }

    #[test]
    fn axis_angle_reconstructs_random_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let u = haar_unitary(&mut rng, 2);
            let aa = axis_angle_of(&u).unwrap();
            assert!(close(&aa.matrix(), &u) < 1e-12);
            assert!((0.0..=PI).contains(&aa.theta));
            assert!((0.0..TAU).contains(&aa.phi));
            assert!(aa.psi > -PI && aa.psi <= PI);
        }
    }

    #[test]
    fn axis_angle_rejects_non_unitary() {
        let m = Matrix::from_real(&[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(axis_angle_of(&m), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn decompose_zy_examples() {
        let d = decompose_zy(&rz(0.4)).unwrap();
        assert_eq!((d.phi, d.theta), (0.0, 0.0));
        assert!((d.psi - 0.4).abs() < 1e-15);

        let y = ry(0.7);
        let d = decompose_zy(&y).unwrap();
        assert!(close(&d.matrix(), &y) < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..1000 {
            let u = haar_unitary(&mut rng, 2);
            assert!(close(&decompose_zy(&u).unwrap().matrix(), &u) < 1e-12);
        }
    }

    #[test]
    fn euler_forms_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut samples: Vec<Matrix> = (0..500).map(|_| haar_unitary(&mut rng, 2)).collect();
        samples.extend([Matrix::identity(2), rz(0.3), ry(0.9), ry(FRAC_PI_2), -Matrix::identity(2)]);
        for u in samples {
            let e = euler_zyz(&u).unwrap();
            let zyz = (rz(e.a) * ry(e.b) * rz(e.c)).scale(cis(e.global_phase));
            assert!(close(&zyz, &u) < 1e-12);
            let e = euler_yzy(&u).unwrap();
            let yzy = (ry(e.a) * rz(e.b) * ry(e.c)).scale(cis(e.global_phase));
            assert!(close(&yzy, &u) < 1e-12);
        }
    }

    #[test]
    fn j_power_closed_form() {
        let g = JGate::default();
        assert_eq!(j_power(&g, 0), Matrix::identity(4));
        assert_eq!(j_power(&g, 1), make_j(&g));
        let j = make_j(&g);
        let five = (0..5).fold(Matrix::identity(4), |acc, _| j * acc);
        assert!(close(&j_power(&g, 5), &five) < 1e-13);
        assert!(close(&j_power(&g, -3), &j_power(&g, 3).adjoint()) < 1e-15);
    }

    #[test]
    fn j_powers_add() {
        let g = JGate::default();
        for (m, k) in [(999_999, -1_000_000), (123_457, 876_543), (-5, 17)] {
            let lhs = j_power(&g, m) * j_power(&g, k);
            assert!(close(&lhs, &j_power(&g, m + k)) < 1e-12);
        }
    }

    #[test]
    fn controlled_pair_reassembles_j() {
        let g = JGate::new(0.3, 1.1);
        let (u0, u1) = as_controlled_pair(&g);
        let j = make_j(&g);
        assert_eq!(u0, j.block(0));
        assert_eq!(u1, j.block(1));
        let product = controlled_on_zero(&u0).unwrap() * controlled_on_one(&u1).unwrap();
        assert!(close(&product, &j) < 1e-15);
    }

    #[test]
    fn exchange_identity() {
        let sigma = ry(FRAC_PI_2);
        let d = Matrix::diag(&[ONE, cis(3f64.sqrt())]).unwrap();
        let swapped = exchange_conjugate(&d).unwrap();
        assert_eq!(swapped, Matrix::diag(&[cis(3f64.sqrt()), ONE]).unwrap());
        assert!(close(&(sigma * d * sigma.adjoint()), &swapped) < 1e-15);
        assert_eq!(exchange_conjugate(&swapped).unwrap(), d);

        let c = Matrix::diag(&[cis(0.2), cis(0.2)]).unwrap();
        assert_eq!(exchange_conjugate(&c).unwrap(), c);
        assert!(matches!(exchange_conjugate(&ry(0.1)), Err(Error::NotDiagonal(_))));
    }

    #[test]
    fn phase_gate_recovers_forward_generated_power() {
        // a power whose rotation block is near I: its lower-block phase is
        // a target the search must land on at or before that power
        let g = JGate::default();
        let m0 = 36_987i64;
        let phi = kronecker::phase_of_multiple(m0, g.beta);
        let residual = op_norm_dist(&j_power(&g, m0).block(0), &Matrix::identity(2)).unwrap();
        let eps = residual * 1.000_001;
        let a = approx_phase_gate(&g, phi, eps, 1_000_000).unwrap();
        assert!(!a.exhausted);
        assert!(a.m <= m0);
        assert!(a.error < eps);
    }

    #[test]
    fn approximations_meet_their_bound() {
        let g = JGate::default();
        for (theta, phi) in [(0.0, 0.0), (FRAC_PI_2, 0.0), (1.234, 0.0), (0.0, 2.5), (0.8, -1.9)] {
            let a = approx_pair(&g, theta, phi, 0.01, kronecker::DEFAULT_M_MAX).unwrap();
            assert!(!a.exhausted);
            assert!(a.error < 0.01);
            assert!((close(&j_power(&g, a.m), &a.ideal) - a.error).abs() < 1e-15);
        }
    }

    #[test]
    fn block_sigma_powers() {
        let g = JGate::default();
        let a = approx_block_sigma(&g, 0.01, kronecker::DEFAULT_M_MAX).unwrap();
        let sigma = Matrix::block_diag(&ry(FRAC_PI_2), &Matrix::identity(2)).unwrap();
        assert!(close(&j_power(&g, a.m), &sigma) < 0.02);
        assert!(close(&j_power(&g, 4 * a.m), &Matrix::identity(4)) < 0.08);
        let minus = Matrix::block_diag(&-Matrix::identity(2), &Matrix::identity(2)).unwrap();
        assert!(close(&j_power(&g, 2 * a.m), &minus) < 0.04);
        let again = approx_block_sigma(&g, 0.01, kronecker::DEFAULT_M_MAX).unwrap();
        assert_eq!(again, a);
    }

    #[test]
    fn perm_examples() {
        assert_eq!(perm_matrix(&PermGate::identity()), Matrix::identity(4));
        let sigma = Matrix::from_real(&[0.0, -1.0, 1.0, 0.0]).unwrap();
        let swap = perm_matrix(&PermGate::block_swap());
        assert_eq!(swap, tensor_id(&sigma, Side::Left).unwrap());
        let p = PermGate::new([3, 0, 2, 1], [1, -1, -1, 1]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        assert_eq!(perm_matrix(&p) * perm_matrix(&p.inverse()), Matrix::identity(4));
        let q = PermGate::new([1, 2, 3, 0], [-1, 1, 1, 1]).unwrap();
        assert_eq!(perm_matrix(&p.compose(&q)), perm_matrix(&p) * perm_matrix(&q));
        assert_eq!(PermGate::from_matrix(&perm_matrix(&p)), Some(p));
    }

    #[test]
    fn invalid_perms_are_rejected() {
        assert!(PermGate::new([0, 0, 1, 2], [1; 4]).is_err());
        assert!(PermGate::new([0, 1, 2, 4], [1; 4]).is_err());
        assert!(PermGate::new([0, 1, 2, 3], [1, 2, 1, 1]).is_err());
        assert!(PermGate::from_one_based([0, 1, 2, 3], [1; 4]).is_err());
        assert_eq!(PermGate::from_one_based([3, 4, 1, 2], [1, 1, -1, -1]).unwrap(), PermGate::block_swap());
    }
}
