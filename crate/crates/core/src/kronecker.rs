//! Simultaneous approximation of phases by integer multiples.
//!
//! Given phase constants `α₁..αₙ` that are rationally independent together
//! with `π`, the multiples `(mα₁, …, mαₙ)` are dense on the torus, so for any
//! targets `x₁..xₙ` and `ε > 0` some `m` puts every `e^{imαⱼ}` within `ε` of
//! `e^{ixⱼ}`. The density argument is not constructive; [`find_power`]
//! realizes it as an exhaustive scan over `m = 1, 2, 3, …` with running phase
//! accumulators, re-anchored periodically from an exact reduction.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Default search cap.
pub const DEFAULT_M_MAX: u64 = 100_000_000;

/// Low part of `2π` (`2π − TAU` as an `f64`).
const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

/// Accumulators are recomputed exactly every this many steps.
const ANCHOR_INTERVAL: u64 = 1 << 20;

/// Angular slack for the fast screen; candidates are re-checked exactly.
const SCREEN_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct KroneckerQuery {
    /// Phase constants, in radians.
    pub alphas: Vec<f64>,
    /// Target phases, in radians.
    pub targets: Vec<f64>,
    /// Bound on every chord `|e^{imαⱼ} − e^{ixⱼ}|`.
    pub epsilon: f64,
    /// Largest exponent tried.
    pub m_max: u64,
}

impl KroneckerQuery {
    pub fn new(alphas: Vec<f64>, targets: Vec<f64>, epsilon: f64) -> Self {
        Self { alphas, targets, epsilon, m_max: DEFAULT_M_MAX }
    }

    pub fn with_m_max(mut self, m_max: u64) -> Self {
        self.m_max = m_max;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() {
            return Err(Error::EmptyQuery);
        }
        if self.alphas.len() != self.targets.len() {
            return Err(Error::LengthMismatch {
                alphas: self.alphas.len(),
                targets: self.targets.len(),
            });
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::InvalidEpsilon(self.epsilon));
        }
        if self.m_max == 0 {
            return Err(Error::InvalidSearchCap);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KroneckerResult {
    pub m: u64,
    /// `|e^{imαⱼ} − e^{ixⱼ}|` for each coordinate.
    pub achieved_errors: Vec<f64>,
    /// The cap was hit; `m` is the best exponent seen, not a qualifying one.
    pub exhausted: bool,
}

impl KroneckerResult {
    pub fn max_error(&self) -> f64 {
        self.achieved_errors.iter().copied().fold(0.0, f64::max)
    }
}

/// `(√2, √3)`: together with `π` these are linearly independent over the
/// rationals (a relation involving `π` would make `π` algebraic; one without
/// it contradicts the independence of `1, √2, √3`).
pub fn default_constants() -> (f64, f64) {
    (std::f64::consts::SQRT_2, 3f64.sqrt())
}

/// Chord length `|e^{ia} − e^{ib}| = 2|sin((a−b)/2)|`.
pub fn circle_dist(a: f64, b: f64) -> f64 {
    2.0 * (0.5 * reduce(a - b)).sin().abs()
}

/// `m·α` reduced to `[0, 2π)` with compensated arithmetic: the product is
/// split exactly with an FMA and `2π` is subtracted in two parts, so the
/// result stays accurate to a few ulps for `|m|` up to well beyond `10⁹`.
pub fn phase_of_multiple(m: i64, alpha: f64) -> f64 {
    let mf = m as f64;
    let hi = mf * alpha;
    let lo = mf.mul_add(alpha, -hi);
    let k = (hi / TAU).round();
    let r = (-k).mul_add(TAU, hi);
    let r = (-k).mul_add(TAU_LO, r) + lo;
    reduce(r)
}

/// Reduce to `[0, 2π)`.
fn reduce(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Smallest `m ∈ [1, m_max]` with `maxⱼ |e^{imαⱼ} − e^{ixⱼ}| < ε`.
///
/// If no exponent below the cap qualifies, returns the exponent with the
/// smallest worst-coordinate error (earliest on ties) and sets `exhausted`.
/// The result depends only on the query.
pub fn find_power(query: &KroneckerQuery) -> Result<KroneckerResult> {
    query.validate()?;
    let n = query.alphas.len();
    let alphas: Vec<f64> = query.alphas.iter().map(|&a| reduce(a)).collect();
    let targets: Vec<f64> = query.targets.iter().map(|&x| reduce(x)).collect();

    let exact_errors = |m: u64| -> Vec<f64> {
        query
            .alphas
            .iter()
            .zip(&targets)
            .map(|(&a, &x)| circle_dist(phase_of_multiple(m as i64, a), x))
            .collect()
    };

    // chord < ε  ⇔  angular distance < 2·asin(ε/2)
    let gate = if query.epsilon > 2.0 {
        f64::INFINITY
    } else {
        2.0 * (query.epsilon / 2.0).asin() + SCREEN_SLACK
    };

    let mut phase: Vec<f64> = query.alphas.iter().map(|&a| phase_of_multiple(1, a)).collect();
    let mut best_angle = f64::INFINITY;
    let mut best_m = 1u64;
    let mut m = 1u64;
    loop {
        let mut worst = 0.0f64;
        let mut pass = true;
        for j in 0..n {
            let mut d = phase[j] - targets[j];
            if d > PI {
                d -= TAU;
            } else if d < -PI {
                d += TAU;
            }
            let ad = d.abs();
            worst = worst.max(ad);
            if ad >= gate {
                pass = false;
                if worst >= best_angle {
                    break;
                }
            }
        }
        if pass {
            let errors = exact_errors(m);
            if errors.iter().all(|&e| e < query.epsilon) {
                return Ok(KroneckerResult { m, achieved_errors: errors, exhausted: false });
            }
        }
        if worst < best_angle {
            best_angle = worst;
            best_m = m;
        }
        if m == query.m_max {
            break;
        }
        m += 1;
        if m.is_multiple_of(ANCHOR_INTERVAL) {
            for (p, &a) in phase.iter_mut().zip(&query.alphas) {
                *p = phase_of_multiple(m as i64, a);
            }
        } else {
            for (p, &a) in phase.iter_mut().zip(&alphas) {
                *p += a;
                if *p >= TAU {
                    *p -= TAU;
                }
            }
        }
    }
    Ok(KroneckerResult { m: best_m, achieved_errors: exact_errors(best_m), exhausted: true })
}

/// An integer relation `Σ cᵢ·vᵢ + s ≈ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerRelation {
    pub coefficients: Vec<i64>,
    pub constant: i64,
    pub residual: f64,
}

/// Search for small integer relations among `values` and `1`: integers
/// `|cᵢ| ≤ bound`, not all zero, with `|Σ cᵢvᵢ + s| < tol` for some integer
/// `s`. Among all such relations the one with the smallest largest
/// coefficient is returned.
///
/// This is a heuristic rejection test only. By Dirichlet's approximation
/// theorem any three reals admit relations with residual around `bound⁻³`,
/// so `tol` must sit well below that for a miss to mean anything.
pub fn find_integer_relation(values: &[f64], bound: i64, tol: f64) -> Option<IntegerRelation> {
    let k = values.len();
    if k == 0 || bound <= 0 {
        return None;
    }
    let height = |c: &[i64]| c.iter().map(|x| x.abs()).max().unwrap_or(0);
    let mut best: Option<IntegerRelation> = None;
    let mut coeffs = vec![-bound; k];
    loop {
        // a relation and its negation are the same; keep the one whose first nonzero entry is positive
        let leading = coeffs.iter().find(|&&c| c != 0).copied().unwrap_or(0);
        if leading > 0 {
            let sum: f64 = coeffs.iter().zip(values).map(|(&c, &v)| c as f64 * v).sum();
            let s = -sum.round();
            let residual = (sum + s).abs();
            let better = best.as_ref().is_none_or(|b| height(&coeffs) < height(&b.coefficients));
            if residual < tol && better {
                best = Some(IntegerRelation { coefficients: coeffs.clone(), constant: s as i64, residual });
            }
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == k {
                return best;
            }
            coeffs[i] += 1;
            if coeffs[i] > bound {
                coeffs[i] = -bound;
                i += 1;
            } else {
                break;
            }
        }
    }
}

/// Heuristic check that `α, β, π` admit no small rational relation.
///
/// Returns the offending relation when one with coefficients up to 100 holds
/// within `1e-9`.
pub fn check_independence(alpha: f64, beta: f64) -> Option<IntegerRelation> {
    find_integer_relation(&[alpha, beta, PI], 100, 1e-9)
}
