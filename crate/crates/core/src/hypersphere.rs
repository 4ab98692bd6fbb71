//! Hyperspherical coordinates on the unit sphere of C⁴ and the rotation that
//! carries any unit vector to the pole `(0, 0, 0, 1)`.
//!
//! ```text
//! (w, x, y, z) = (sin ψ·e^{iφ₁}, cos ψ·sin θ·e^{iφ₂}, cos ψ·cos θ·sin φ, cos ψ·cos θ·cos φ·e^{iφ₃})
//! ```
//!
//! The pole map is `R = R3·R2·R1`, where each factor is a real planar
//! rotation preceded by a two-entry phase:
//!
//! ```text
//! R1 = rot(y,z; φ)·Z(y,z; −φ₃/2)
//! R2 = rot(x,z; θ)·Z(x,z; (φ₂ − φ₃/2)/2)
//! R3 = rot(w,z; ψ)·Z(w,z; (φ₁ − φ₂/2 − φ₃/4)/2)
//! ```
//!
//! with `Z(p,q; t)` putting `e^{−it}` on `p` and `e^{it}` on `q`. Each phase
//! equalizes the two entries of its plane, so the rotation that follows sees
//! a real pair and folds it into `z`. The pole image is
//! `e^{i(γ + (φ₁ + φ₂/2 + φ₃/4)/2)}` where `γ` is the gauge phase.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::numerics::{cis, wrap_angle, Matrix, Vector, C64, ONE, ZERO};
use crate::synthesis::{GateSequence, SequenceBuilder, SynthesisConfig};

/// Tolerance on `‖v‖ − 1` for inputs.
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HypersphericalCoords {
    pub psi: f64,
    pub theta: f64,
    pub phi: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: f64,
}

pub fn from_coords(c: &HypersphericalCoords) -> Vector {
    let (sp, cp) = c.psi.sin_cos();
    let (st, ct) = c.theta.sin_cos();
    let (sf, cf) = c.phi.sin_cos();
    Vector::new(&[
        cis(c.phi1) * sp,
        cis(c.phi2) * (cp * st),
        C64::new(cp * ct * sf, 0.0),
        cis(c.phi3) * (cp * ct * cf),
    ])
    .expect("length 4")
}

/// Phase in `[0, 2π)`; 0 for an exact zero.
fn phase_of(z: C64) -> f64 {
    if z == ZERO {
        return 0.0;
    }
    let a = z.arg().rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Inverse of [`from_coords`]: returns `(c, γ)` with
/// `from_coords(c) = e^{−iγ}·v`.
///
/// The gauge `γ` makes the third component real and non-negative. When that
/// component vanishes the fourth is used instead, then the second, then the
/// first. Angles that the vector leaves undetermined are set to 0.
pub fn to_coords(v: &Vector) -> Result<(HypersphericalCoords, f64)> {
    if v.dim() != 4 {
        return Err(Error::DimensionMismatch { left: v.dim(), right: 4 });
    }
    v.check_unit(UNIT_TOL)?;
    let gauge_index = [2, 3, 1, 0].into_iter().find(|&k| v[k] != ZERO).unwrap_or(2);
    let gauge = phase_of(v[gauge_index]);
    let relative = |k: usize| {
        if k == gauge_index || v[k] == ZERO {
            0.0
        } else {
            let a = (v[k].arg() - gauge).rem_euclid(TAU);
            if a >= TAU {
                0.0
            } else {
                a
            }
        }
    };
    let [w, x, y, z] = [0, 1, 2, 3].map(|k| v[k].norm());
    let yz = y.hypot(z);
    let coords = HypersphericalCoords {
        psi: w.atan2(x.hypot(yz)),
        theta: x.atan2(yz),
        phi: y.atan2(z),
        phi1: relative(0),
        phi2: relative(1),
        phi3: relative(3),
    };
    Ok((coords, wrap_angle(gauge)))
}

/// Real rotation by `t` in the `(p, q)` coordinate plane:
/// `e_p ↦ cos t·e_p + sin t·e_q`, `e_q ↦ −sin t·e_p + cos t·e_q`.
pub fn plane_rotation(p: usize, q: usize, t: f64) -> Matrix {
    let (s, c) = t.sin_cos();
    let mut m = Matrix::identity(4);
    m[(p, p)] = c.into();
    m[(p, q)] = (-s).into();
    m[(q, p)] = s.into();
    m[(q, q)] = c.into();
    m
}

/// `e^{−it}` on coordinate `p`, `e^{it}` on `q`.
pub fn plane_phase(p: usize, q: usize, t: f64) -> Matrix {
    let mut m = Matrix::identity(4);
    m[(p, p)] = cis(-t);
    m[(q, q)] = cis(t);
    m
}

/// One pole-map factor: the phase `Z(p, q; chi)` followed by the rotation
/// `rot(p, q; angle)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelFactor {
    pub plane: (usize, usize),
    pub chi: f64,
    pub angle: f64,
}

impl TwoLevelFactor {
    pub fn matrix(&self) -> Matrix {
        let (p, q) = self.plane;
        plane_rotation(p, q, self.angle) * plane_phase(p, q, self.chi)
    }
}

pub fn r1_factor(c: &HypersphericalCoords) -> TwoLevelFactor {
    TwoLevelFactor { plane: (2, 3), chi: -0.5 * c.phi3, angle: c.phi }
}

pub fn r2_factor(c: &HypersphericalCoords) -> TwoLevelFactor {
    TwoLevelFactor { plane: (1, 3), chi: 0.5 * (c.phi2 - 0.5 * c.phi3), angle: c.theta }
}

pub fn r3_factor(c: &HypersphericalCoords) -> TwoLevelFactor {
    TwoLevelFactor { plane: (0, 3), chi: 0.5 * (c.phi1 - 0.5 * c.phi2 - 0.25 * c.phi3), angle: c.psi }
}

pub fn build_r1(c: &HypersphericalCoords) -> Matrix {
    r1_factor(c).matrix()
}

pub fn build_r2(c: &HypersphericalCoords) -> Matrix {
    r2_factor(c).matrix()
}

pub fn build_r3(c: &HypersphericalCoords) -> Matrix {
    r3_factor(c).matrix()
}

/// Phase of the pole image `R·v` predicted from the coordinates and gauge.
pub fn pole_phase(c: &HypersphericalCoords, gauge: f64) -> f64 {
    wrap_angle(gauge + 0.5 * (c.phi1 + 0.5 * c.phi2 + 0.25 * c.phi3))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleMap {
    pub coords: HypersphericalCoords,
    pub gauge_phase: f64,
    /// `[R1, R2, R3]` in application order.
    pub factors: [TwoLevelFactor; 3],
    /// `R = R3·R2·R1`.
    pub r: Matrix,
    /// Measured phase of the fourth component of `R·v`.
    pub residual_phase: f64,
}

pub fn build_pole_map(v: &Vector) -> Result<PoleMap> {
    let (coords, gauge_phase) = to_coords(v)?;
    let factors = [r1_factor(&coords), r2_factor(&coords), r3_factor(&coords)];
    let r = factors[2].matrix() * factors[1].matrix() * factors[0].matrix();
    let image = r.apply(v)?;
    Ok(PoleMap { coords, gauge_phase, factors, r, residual_phase: image[3].arg() })
}

/// A prepared state: `sequence` applied to `(0, 0, 0, 1)` approximates
/// `target` up to global phase.
#[derive(Debug, Clone)]
pub struct StatePreparation {
    pub target: Vector,
    pub sequence: GateSequence,
    pub achieved: Vector,
    /// `|⟨target, achieved⟩|`.
    pub fidelity: f64,
}

/// Emit `R⁻¹ = R1⁻¹·R2⁻¹·R3⁻¹` for the pole map of `v`, so that the
/// sequence takes the pole to `v` up to phase.
pub fn prepare_state(v: &Vector, config: &SynthesisConfig) -> Result<StatePreparation> {
    let map = build_pole_map(v)?;
    let mut b = SequenceBuilder::new(*config)?;
    for f in map.factors.iter().rev() {
        let (p, q) = f.plane;
        b.rotation(p, q, -f.angle)?;
        b.phase(p, q, -f.chi)?;
    }
    let sequence = b.finish().peephole();
    let pole = Vector::basis(4, 3);
    let achieved = sequence.evaluate().apply(&pole)?;
    let fidelity = v.inner(&achieved).norm();
    Ok(StatePreparation { target: *v, sequence, achieved, fidelity })
}

/// The pole `(0, 0, 0, 1)`.
pub fn pole() -> Vector {
    Vector::new(&[ZERO, ZERO, ZERO, ONE]).expect("length 4")
}
