//! The compiler: a gate IR of `J` powers and signed permutations, builders
//! for block-diagonal and general two-qubit targets, and error accounting.
//!
//! Every emitted `J^m` stands in for a continuous gate (its `ideal`), and its
//! `step_error` is the measured distance `‖J^m − ideal‖_op`. The ideals
//! multiply out to the target up to global phase, so by telescoping
//!
//! ```text
//! ‖g_n⋯g_1 − t_n⋯t_1‖ ≤ Σ ‖g_k − t_k‖
//! ```
//!
//! the sum of step errors (the budget) bounds the error of the whole
//! sequence.
//!
//! The one primitive is `J^m ≈ blockdiag(ry(θ), rz(φ))`. Conjugating it by a
//! permutation frame moves the rotation and the phase onto any pair of
//! coordinate planes.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::gates::{
    approx_block_sigma, approx_pair, euler_yzy, euler_zyz, j_power, perm_matrix, JGate, PermGate,
};
use crate::hypersphere::build_pole_map;
use crate::kronecker::DEFAULT_M_MAX;
use crate::numerics::{
    cis, eig_unitary, op_norm_dist, phase_align, wrap_angle, Matrix, Vector, ONE, UNITARY_TOL,
};

/// Angles below this (after wrapping) produce no gate.
const TRIVIAL_ANGLE: f64 = 1e-14;

/// Per-step search settings shared by all builders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisConfig {
    pub gate: JGate,
    /// Kronecker tolerance for each emitted power.
    pub eps_step: f64,
    pub m_max: u64,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        Self { gate: JGate::default(), eps_step: 5e-3, m_max: DEFAULT_M_MAX }
    }
}

impl SynthesisConfig {
    pub fn new(gate: JGate, eps_step: f64) -> Self {
        Self { gate, eps_step, ..Self::default() }
    }

    pub fn with_eps_step(mut self, eps_step: f64) -> Self {
        self.eps_step = eps_step;
        self
    }

    pub fn with_m_max(mut self, m_max: u64) -> Self {
        self.m_max = m_max;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.eps_step <= 0.0 || !self.eps_step.is_finite() {
            return Err(Error::InvalidEpsilon(self.eps_step));
        }
        if self.m_max == 0 {
            return Err(Error::InvalidSearchCap);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    JPower {
        m: i64,
        /// Continuous gate this power approximates.
        ideal: Matrix,
        step_error: f64,
    },
    Perm(PermGate),
}

impl Gate {
    pub fn step_error(&self) -> f64 {
        match self {
            Gate::JPower { step_error, .. } => *step_error,
            Gate::Perm(_) => 0.0,
        }
    }

    pub fn matrix(&self, j: &JGate) -> Matrix {
        match self {
            Gate::JPower { m, .. } => j_power(j, *m),
            Gate::Perm(p) => perm_matrix(p),
        }
    }

    pub fn ideal(&self) -> Matrix {
        match self {
            Gate::JPower { ideal, .. } => *ideal,
            Gate::Perm(p) => perm_matrix(p),
        }
    }
}

/// Gates in time order: `gates[0]` acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSequence {
    pub gate: JGate,
    pub gates: Vec<Gate>,
    /// Searches that hit the cap and returned a best-effort power.
    pub exhausted_steps: usize,
}

impl GateSequence {
    pub fn new(gate: JGate) -> Self {
        Self { gate, gates: Vec::new(), exhausted_steps: 0 }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn jpower_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::JPower { .. })).count()
    }

    /// Sum of step errors.
    pub fn total_budget(&self) -> f64 {
        self.gates.iter().map(Gate::step_error).sum()
    }

    pub fn evaluate(&self) -> Matrix {
        self.gates.iter().fold(Matrix::identity(4), |acc, g| g.matrix(&self.gate) * acc)
    }

    /// Product of the continuous ideals.
    pub fn ideal(&self) -> Matrix {
        self.gates.iter().fold(Matrix::identity(4), |acc, g| g.ideal() * acc)
    }

    pub fn append(&mut self, other: GateSequence) {
        assert_eq!(self.gate, other.gate, "sequences over different J gates");
        self.gates.extend(other.gates);
        self.exhausted_steps += other.exhausted_steps;
    }

    pub fn peephole(&self) -> GateSequence {
        peephole(self)
    }
}

pub fn evaluate(seq: &GateSequence) -> Matrix {
    seq.evaluate()
}

/// Permutation sending `rot` to `(0, 1)` and `phase` to `(2, 3)`; the other
/// coordinates fill the free slots in ascending order.
fn frame(rot: Option<(usize, usize)>, phase: Option<(usize, usize)>) -> Result<PermGate> {
    let mut perm = [usize::MAX; 4];
    let mut used = [false; 4];
    for (plane, slots) in [(rot, (0, 1)), (phase, (2, 3))] {
        if let Some((p, q)) = plane {
            if p >= 4 || q >= 4 || p == q || perm[p] != usize::MAX || perm[q] != usize::MAX {
                return Err(Error::InvalidPermutation(format!("bad coordinate plane ({p}, {q})")));
            }
            perm[p] = slots.0;
            perm[q] = slots.1;
            used[slots.0] = true;
            used[slots.1] = true;
        }
    }
    let mut free = (0..4).filter(|&s| !used[s]);
    for p in perm.iter_mut().filter(|p| **p == usize::MAX) {
        *p = free.next().expect("slot count matches");
    }
    PermGate::unsigned(perm)
}

fn trivial(angle: f64) -> bool {
    wrap_angle(angle).abs() < TRIVIAL_ANGLE
}

/// Accumulates primitive steps into a sequence.
#[derive(Debug, Clone)]
pub struct SequenceBuilder {
    config: SynthesisConfig,
    seq: GateSequence,
}

impl SequenceBuilder {
    pub fn new(config: SynthesisConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { config, seq: GateSequence::new(config.gate) })
    }

    /// Emit `F⁻¹·J^m·F ≈ F⁻¹·blockdiag(ry(θ), rz(φ))·F`.
    pub fn pair(&mut self, frame: &PermGate, theta: f64, phi: f64) -> Result<()> {
        if trivial(theta) && trivial(phi) {
            return Ok(());
        }
        let c = &self.config;
        let a = approx_pair(&c.gate, theta, phi, c.eps_step, c.m_max)?;
        if a.exhausted {
            self.seq.exhausted_steps += 1;
        }
        let conjugate = !frame.is_identity();
        if conjugate {
            self.seq.gates.push(Gate::Perm(*frame));
        }
        self.seq.gates.push(Gate::JPower { m: a.m, ideal: a.ideal, step_error: a.error });
        if conjugate {
            self.seq.gates.push(Gate::Perm(frame.inverse()));
        }
        Ok(())
    }

    /// Real rotation by `t` in the `(p, q)` plane.
    pub fn rotation(&mut self, p: usize, q: usize, t: f64) -> Result<()> {
        let f = frame(Some((p, q)), None)?;
        self.pair(&f, t, 0.0)
    }

    /// `e^{−iχ}` on `p`, `e^{iχ}` on `q`.
    pub fn phase(&mut self, p: usize, q: usize, chi: f64) -> Result<()> {
        let f = frame(None, Some((p, q)))?;
        self.pair(&f, 0.0, chi)
    }

    pub fn push(&mut self, gate: Gate) {
        self.seq.gates.push(gate);
    }

    pub fn finish(self) -> GateSequence {
        self.seq
    }
}

/// `blockdiag(u, v)` up to global phase.
///
/// `u = e^{iγ₁}·ry(a₁)·rz(b₁)·ry(c₁)` and `v = e^{iγ₂}·rz(a₂)·ry(b₂)·rz(c₂)`
/// are built three layers at a time: `blockdiag(ry, rz)` directly and
/// `blockdiag(rz, ry)` under the block swap. The relative phase `γ₂ − γ₁`
/// goes on last as two phase steps.
pub fn synth_blockdiag(u: &Matrix, v: &Matrix, config: &SynthesisConfig) -> Result<GateSequence> {
    let eu = euler_yzy(u)?;
    let ev = euler_zyz(v)?;
    let mut delta = wrap_angle(ev.global_phase - eu.global_phase);
    let mut a2 = ev.a;
    // rz(π) = −I absorbs a half turn of relative phase
    if delta.abs() > FRAC_PI_2 {
        delta -= PI.copysign(delta);
        a2 += PI;
    }
    let id = PermGate::identity();
    let swap = PermGate::unsigned([2, 3, 0, 1])?;
    let mut b = SequenceBuilder::new(*config)?;
    b.pair(&id, eu.c, ev.c)?;
    b.pair(&swap, ev.b, eu.b)?;
    b.pair(&id, eu.a, a2)?;
    b.phase(0, 2, 0.5 * delta)?;
    b.phase(1, 3, 0.5 * delta)?;
    Ok(b.finish().peephole())
}

/// Rank-one factor `I + (e^{iη} − 1)·v·v†`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenFactor {
    pub vector: Vector,
    pub eta: f64,
}

impl EigenFactor {
    pub fn matrix(&self) -> Matrix {
        Matrix::identity(4) + Matrix::outer(&self.vector, &self.vector).scale(cis(self.eta) - ONE)
    }
}

/// `g = Π_k (I + (e^{iη_k} − 1)·v_k·v_k†)` over an orthonormal eigenbasis.
/// The factors commute; they come back in ascending `η`.
pub fn factor_eigen(g: &Matrix) -> Result<Vec<EigenFactor>> {
    if g.dim() != 4 {
        return Err(Error::DimensionMismatch { left: g.dim(), right: 4 });
    }
    Ok(eig_unitary(g)?
        .into_iter()
        .map(|p| EigenFactor { vector: p.vector, eta: p.value_angle })
        .collect())
}

pub fn reconstruct(factors: &[EigenFactor]) -> Matrix {
    factors.iter().fold(Matrix::identity(4), |acc, f| f.matrix() * acc)
}

/// One eigenfactor as `R⁻¹·D·R` with `R` the pole map of its vector and
/// `D = diag(1, 1, 1, e^{iη})` up to phase. Not peepholed.
pub fn synth_eigenfactor(f: &EigenFactor, config: &SynthesisConfig) -> Result<GateSequence> {
    let mut b = SequenceBuilder::new(*config)?;
    if trivial(f.eta) {
        return Ok(b.finish());
    }
    let map = build_pole_map(&f.vector)?;
    for k in &map.factors {
        b.phase(k.plane.0, k.plane.1, k.chi)?;
        b.rotation(k.plane.0, k.plane.1, k.angle)?;
    }
    // e^{−iη/4}·diag(1, 1, 1, e^{iη})
    b.phase(2, 3, 0.5 * f.eta)?;
    b.phase(0, 2, 0.25 * f.eta)?;
    b.phase(1, 3, 0.25 * f.eta)?;
    for k in map.factors.iter().rev() {
        b.rotation(k.plane.0, k.plane.1, -k.angle)?;
        b.phase(k.plane.0, k.plane.1, -k.chi)?;
    }
    Ok(b.finish())
}

/// Concatenate eigenfactor sequences in the given order, dividing out the
/// factor with the largest `η` as a global phase. Not peepholed.
pub fn synth_factors(factors: &[EigenFactor], config: &SynthesisConfig) -> Result<GateSequence> {
    let mut seq = GateSequence::new(config.gate);
    let Some(reference) = (0..factors.len()).max_by(|&a, &b| factors[a].eta.total_cmp(&factors[b].eta)) else {
        return Ok(seq);
    };
    for (k, f) in factors.iter().enumerate() {
        if k == reference {
            continue;
        }
        let relative = EigenFactor { vector: f.vector, eta: wrap_angle(f.eta - factors[reference].eta) };
        seq.append(synth_eigenfactor(&relative, config)?);
    }
    Ok(seq)
}

#[derive(Debug, Clone)]
pub struct SynthesisReport {
    pub target: Matrix,
    pub sequence: GateSequence,
    /// `min_δ ‖e^{iδ}·evaluate(sequence) − target‖_op`.
    pub measured_error: f64,
    /// The minimizing `δ`.
    pub global_phase: f64,
    pub eigen_angles: Vec<f64>,
    pub wall_time: Duration,
    pub exhausted_steps: usize,
}

impl SynthesisReport {
    pub fn total_budget(&self) -> f64 {
        self.sequence.total_budget()
    }
}

fn off_block_magnitude(g: &Matrix) -> f64 {
    let mut m = 0.0f64;
    for r in 0..2 {
        for c in 2..4 {
            m = m.max(g[(r, c)].norm()).max(g[(c, r)].norm());
        }
    }
    m
}

/// Approximate a two-qubit unitary up to global phase.
///
/// Block-diagonal targets go straight to [`synth_blockdiag`]. Otherwise the
/// eigenfactor with the largest `η` is divided out as a global phase and the
/// other three are emitted in ascending `η`.
pub fn synth_unitary(g: &Matrix, config: &SynthesisConfig) -> Result<SynthesisReport> {
    let start = Instant::now();
    config.validate()?;
    if g.dim() != 4 {
        return Err(Error::DimensionMismatch { left: g.dim(), right: 4 });
    }
    g.check_unitary(UNITARY_TOL)?;
    let factors = factor_eigen(g)?;
    let eigen_angles: Vec<f64> = factors.iter().map(|f| f.eta).collect();

    let sequence = if off_block_magnitude(g) <= 1e-12 {
        synth_blockdiag(&g.block(0), &g.block(1), config)?
    } else {
        synth_factors(&factors, config)?.peephole()
    };
    let align = phase_align(&sequence.evaluate(), g)?;
    Ok(SynthesisReport {
        target: *g,
        exhausted_steps: sequence.exhausted_steps,
        sequence,
        measured_error: align.distance,
        global_phase: align.phase,
        eigen_angles,
        wall_time: start.elapsed(),
    })
}

/// Result of [`expand_perms`].
#[derive(Debug, Clone)]
pub struct PermExpansion {
    pub sequence: GateSequence,
    /// Permutations left in place because no power of `J` approaches them.
    pub unreachable: usize,
}

/// `σ^k` for `σ = [[0, −1], [1, 0]]`, recognized exactly.
fn sigma_power(block: &Matrix) -> Option<i64> {
    let one = |r: usize, c: usize| block[(r, c)].re;
    match (one(0, 0), one(0, 1), one(1, 0), one(1, 1)) {
        (a, 0.0, 0.0, d) if a == 1.0 && d == 1.0 => Some(0),
        (0.0, b, c, 0.0) if b == -1.0 && c == 1.0 => Some(1),
        (a, 0.0, 0.0, d) if a == -1.0 && d == -1.0 => Some(2),
        (0.0, b, c, 0.0) if b == 1.0 && c == -1.0 => Some(3),
        _ => None,
    }
}

/// Replace permutations by powers of `J` where possible.
///
/// Powers of `J` form a commutative family `blockdiag(ry(·), rz(·))`, so the
/// only signed permutations they approach are `blockdiag(σ^k, ±I)`. Those
/// become `J^{k·m₃}` (lower block `+I`, with `J^{m₃} ≈ blockdiag(σ, I)`) or a
/// direct search for `blockdiag(ry(kπ/2), rz(π))` (lower block `−I`). Any
/// other permutation is kept and counted in `unreachable`.
pub fn expand_perms(seq: &GateSequence, config: &SynthesisConfig) -> Result<PermExpansion> {
    config.validate()?;
    let j = config.gate;
    let mut out = GateSequence::new(j);
    out.exhausted_steps = seq.exhausted_steps;
    let mut unreachable = 0;
    for gate in &seq.gates {
        let Gate::Perm(p) = gate else {
            out.gates.push(gate.clone());
            continue;
        };
        let target = perm_matrix(p);
        let lower = target.block(1);
        let shape = if off_block_magnitude(&target) == 0.0 {
            sigma_power(&target.block(0)).zip(match sigma_power(&lower) {
                Some(0) => Some(false),
                Some(2) => Some(true),
                _ => None,
            })
        } else {
            None
        };
        let Some((k, lower_negated)) = shape else {
            out.gates.push(gate.clone());
            unreachable += 1;
            continue;
        };
        if k == 0 && !lower_negated {
            continue;
        }
        let (m, exhausted) = if lower_negated {
            let a = approx_pair(&j, k as f64 * FRAC_PI_2, PI, config.eps_step, config.m_max)?;
            (a.m, a.exhausted)
        } else {
            let s = approx_block_sigma(&j, config.eps_step, config.m_max)?;
            (k * s.m, s.exhausted)
        };
        if exhausted {
            out.exhausted_steps += 1;
        }
        let step_error = op_norm_dist(&j_power(&j, m), &target)?;
        out.gates.push(Gate::JPower { m, ideal: target, step_error });
    }
    Ok(PermExpansion { sequence: out, unreachable })
}

fn is_identity_within(m: &Matrix, tol: f64) -> bool {
    (*m - Matrix::identity(m.dim())).max_abs() <= tol
}

/// Local simplification: merge adjacent powers (`J^{m₁}` then `J^{m₂}` is
/// `J^{m₁+m₂}`, error re-measured against the product of ideals), compose
/// adjacent permutations, and drop identities.
pub fn peephole(seq: &GateSequence) -> GateSequence {
    let j = seq.gate;
    let mut out: Vec<Gate> = Vec::with_capacity(seq.gates.len());
    for gate in &seq.gates {
        let merged = match (out.last(), gate) {
            (Some(Gate::Perm(first)), Gate::Perm(second)) => Some(Gate::Perm(second.compose(first))),
            (
                Some(Gate::JPower { m: m1, ideal: i1, .. }),
                Gate::JPower { m: m2, ideal: i2, .. },
            ) => {
                let m = m1 + m2;
                let ideal = *i2 * *i1;
                let step_error = op_norm_dist(&j_power(&j, m), &ideal).expect("4×4");
                Some(Gate::JPower { m, ideal, step_error })
            }
            _ => None,
        };
        let next = match merged {
            Some(g) => {
                out.pop();
                g
            }
            None => gate.clone(),
        };
        let droppable = match &next {
            Gate::Perm(p) => p.is_identity(),
            Gate::JPower { m, ideal, .. } => *m == 0 && is_identity_within(ideal, 1e-15),
        };
        if !droppable {
            out.push(next);
        }
    }
    GateSequence { gate: j, gates: out, exhausted_steps: seq.exhausted_steps }
}
