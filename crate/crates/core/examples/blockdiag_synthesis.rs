//! Block-diagonal targets blockdiag(U, V) from J powers and frame permutations.

use jsynth::gates::{ry, rz};
use jsynth::numerics::{phase_aligned_dist, Matrix};
use jsynth::synthesis::{synth_blockdiag, SynthesisConfig};

fn main() -> jsynth::Result<()> {
    let u = ry(0.7) * rz(-1.1);
    let v = rz(0.3) * ry(2.0) * rz(0.4);
    let target = Matrix::block_diag(&u, &v)?;
    for eps in [2e-2, 5e-3, 1e-3] {
        let config = SynthesisConfig::default().with_eps_step(eps);
        let s = synth_blockdiag(&u, &v, &config)?;
        let err = phase_aligned_dist(&s.evaluate(), &target)?;
        println!(
            "eps {eps:>6}: {:>2} gates ({} powers), budget {:.3e}, measured {:.3e}",
            s.len(),
            s.jpower_count(),
            s.total_budget(),
            err
        );
    }
    Ok(())
}
