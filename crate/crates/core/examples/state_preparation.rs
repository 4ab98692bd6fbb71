//! Prepare a state from e4 and compare against the budget.

use jsynth::hypersphere::prepare_state;
use jsynth::numerics::{Vector, C64};
use jsynth::synthesis::SynthesisConfig;

fn main() -> jsynth::Result<()> {
    let v = Vector::new(&[
        C64::new(0.5, 0.0),
        C64::new(0.0, 0.5),
        C64::new(-0.5, 0.0),
        C64::new(0.0, -0.5),
    ])?;
    for eps in [1e-2, 5e-3, 1e-3] {
        let p = prepare_state(&v, &SynthesisConfig::default().with_eps_step(eps))?;
        println!(
            "eps {eps:>6}: {:>2} gates, fidelity {:.9}, budget {:.3e}",
            p.sequence.len(),
            p.fidelity,
            p.sequence.total_budget()
        );
    }
    Ok(())
}
