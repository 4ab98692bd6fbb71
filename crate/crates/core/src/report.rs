//! File formats: plain-text matrices and states, JSON reports.
//!
//! A matrix file holds the dimension on its first line followed by one row
//! per line. Entries are complex literals `a+bi` / `a-bi` (no inner spaces);
//! a bare real `a` or imaginary `bi` is accepted too.
//!
//! ```text
//! 2
//! 0+0i 1+0i
//! 1+0i 0+0i
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{j_power, perm_matrix, JGate, PermGate};
use crate::numerics::{Matrix, C64};
use crate::synthesis::{Gate, GateSequence};

fn parse_real(s: &str, whole: &str) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::Parse(format!("bad complex literal `{whole}`")))
}

pub fn parse_complex(token: &str) -> Result<C64> {
    let Some(body) = token.strip_suffix('i') else {
        return Ok(C64::new(parse_real(token, token)?, 0.0));
    };
    // the imaginary part starts at the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k], token)?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => parse_real(s, token)?,
    };
    Ok(C64::new(re, im))
}

/// Shortest round-trip rendering in the same grammar.
pub fn format_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (n, first) = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let dim: usize = first
        .parse()
        .map_err(|_| Error::Parse(format!("line {n}: expected the dimension, got `{first}`")))?;
    if dim != 2 && dim != 4 {
        return Err(Error::UnsupportedDimension(dim));
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for row in 0..dim {
        let (n, line) = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {dim} rows, found {row}")))?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != dim {
            return Err(Error::Parse(format!("line {n}: expected {dim} entries, found {}", tokens.len())));
        }
        for t in tokens {
            entries.push(parse_complex(t).map_err(|e| Error::Parse(format!("line {n}: {e}")))?);
        }
    }
    if let Some((n, _)) = lines.next() {
        return Err(Error::Parse(format!("line {n}: trailing content after {dim} rows")));
    }
    Matrix::new(&entries)
}

pub fn format_matrix(m: &Matrix) -> String {
    let mut out = format!("{}\n", m.dim());
    for r in 0..m.dim() {
        let row: Vec<String> = (0..m.dim()).map(|c| format_complex(m[(r, c)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Four whitespace-separated amplitudes, in any line layout.
pub fn parse_state(text: &str) -> Result<[C64; 4]> {
    let tokens: Vec<&str> = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(str::split_whitespace)
        .collect();
    if tokens.len() != 4 {
        return Err(Error::Parse(format!("expected 4 amplitudes, found {}", tokens.len())));
    }
    let mut out = [C64::new(0.0, 0.0); 4];
    for (slot, t) in out.iter_mut().zip(tokens) {
        *slot = parse_complex(t)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum StepRecord {
    #[serde(rename = "jpow")]
    JPow { m: i64, step_error: f64 },
    #[serde(rename = "perm")]
    Perm {
        /// 1-based images.
        perm: [usize; 4],
        signs: [i8; 4],
        step_error: f64,
    },
}

impl StepRecord {
    pub fn from_gate(g: &Gate) -> Self {
        match g {
            Gate::JPower { m, step_error, .. } => StepRecord::JPow { m: *m, step_error: *step_error },
            Gate::Perm(p) => StepRecord::Perm { perm: p.one_based(), signs: p.signs(), step_error: 0.0 },
        }
    }

    pub fn matrix(&self, j: &JGate) -> Result<Matrix> {
        match self {
            StepRecord::JPow { m, .. } => Ok(j_power(j, *m)),
            StepRecord::Perm { perm, signs, .. } => Ok(perm_matrix(&PermGate::from_one_based(*perm, *signs)?)),
        }
    }

    pub fn step_error(&self) -> f64 {
        match self {
            StepRecord::JPow { step_error, .. } | StepRecord::Perm { step_error, .. } => *step_error,
        }
    }
}

pub fn records(seq: &GateSequence) -> Vec<StepRecord> {
    seq.gates.iter().map(StepRecord::from_gate).collect()
}

/// Product of the recorded steps in time order.
pub fn evaluate_records(steps: &[StepRecord], j: &JGate) -> Result<Matrix> {
    steps.iter().try_fold(Matrix::identity(4), |acc, s| Ok(s.matrix(j)? * acc))
}

/// Output of `jsynth synth`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub target_path: String,
    pub alpha: f64,
    pub beta: f64,
    pub eps_step: f64,
    pub sequence: Vec<StepRecord>,
    pub total_budget: f64,
    pub measured_error: f64,
    pub global_phase: f64,
    pub eigen_angles: Vec<f64>,
    pub wall_time_ms: f64,
    pub exhausted_steps: usize,
    /// Permutations that could not be expanded (with `--expand-perms`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unreachable_perms: Option<usize>,
}

impl ReportFile {
    pub fn gate(&self) -> JGate {
        JGate::new(self.alpha, self.beta)
    }

    pub fn evaluate(&self) -> Result<Matrix> {
        evaluate_records(&self.sequence, &self.gate())
    }
}

/// Output of `jsynth prepare`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrepareReportFile {
    pub state_path: String,
    pub alpha: f64,
    pub beta: f64,
    pub eps_step: f64,
    /// Normalized target amplitudes as `[re, im]` pairs.
    pub state: Vec<[f64; 2]>,
    pub sequence: Vec<StepRecord>,
    pub total_budget: f64,
    /// `|⟨target, sequence·(0,0,0,1)⟩|`.
    pub fidelity: f64,
    pub wall_time_ms: f64,
    pub exhausted_steps: usize,
}

impl PrepareReportFile {
    pub fn gate(&self) -> JGate {
        JGate::new(self.alpha, self.beta)
    }

    pub fn evaluate(&self) -> Result<Matrix> {
        evaluate_records(&self.sequence, &self.gate())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::haar_unitary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn complex_literals() {
        let cases = [
            ("1+2i", C64::new(1.0, 2.0)),
            ("-0.5-0.25i", C64::new(-0.5, -0.25)),
            ("1e-3+2.5E+2i", C64::new(1e-3, 250.0)),
            ("-1e-3-1e-3i", C64::new(-1e-3, -1e-3)),
            ("3", C64::new(3.0, 0.0)),
            ("-2i", C64::new(0.0, -2.0)),
            ("i", C64::new(0.0, 1.0)),
            ("1-i", C64::new(1.0, -1.0)),
        ];
        for (s, z) in cases {
            assert_eq!(parse_complex(s).unwrap(), z, "{s}");
        }
        for bad in ["", "1+", "a+bi", "1+2j", "1 + 2i", "nan", "1+infi"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn complex_round_trip() {
        for z in [C64::new(0.1, -0.0), C64::new(-1.0 / 3.0, 2e-300), C64::new(1e20, -7.5)] {
            let back = parse_complex(&format_complex(z)).unwrap();
            assert_eq!(back, z);
        }
    }

    #[test]
    fn matrix_file_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let m = haar_unitary(&mut rng, 4);
        assert_eq!(parse_matrix(&format_matrix(&m)).unwrap(), m);
        let text = "# swap\n2\n0+0i 1+0i\n\n1+0i 0+0i\n";
        let s = parse_matrix(text).unwrap();
        assert_eq!(s[(0, 1)], C64::new(1.0, 0.0));
    }

    #[test]
    fn matrix_file_errors() {
        assert!(parse_matrix("").is_err());
        assert!(parse_matrix("3\n1 0 0\n0 1 0\n0 0 1\n").is_err());
        assert!(parse_matrix("2\n1 0\n").is_err());
        assert!(parse_matrix("2\n1 0 0\n0 1\n").is_err());
        assert!(parse_matrix("2\n1 0\n0 1\n5 5\n").is_err());
    }

    #[test]
    fn state_file() {
        let s = parse_state("0 0\n0 1+0i\n").unwrap();
        assert_eq!(s[3], C64::new(1.0, 0.0));
        assert!(parse_state("0 0 1").is_err());
    }

    #[test]
    fn step_records_are_tagged() {
        let j = serde_json::to_string(&StepRecord::JPow { m: 7, step_error: 0.5 }).unwrap();
        assert_eq!(j, r#"{"type":"jpow","m":7,"step_error":0.5}"#);
        let p = StepRecord::from_gate(&Gate::Perm(PermGate::block_swap()));
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(j, r#"{"type":"perm","perm":[3,4,1,2],"signs":[1,1,-1,-1],"step_error":0.0}"#);
        assert_eq!(serde_json::from_str::<StepRecord>(&j).unwrap(), p);
    }
}
