//! Full U(4) synthesis through the eigenfactor route.

use jsynth::numerics::haar_unitary;
use jsynth::synthesis::{synth_unitary, Gate, SynthesisConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> jsynth::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let target = haar_unitary(&mut rng, 4);
    let r = synth_unitary(&target, &SynthesisConfig::default())?;
    println!("eigen angles: {:?}", r.eigen_angles);
    println!("{} gates, {} J powers", r.sequence.len(), r.sequence.jpower_count());
    println!("budget {:.4e}, measured {:.4e}", r.total_budget(), r.measured_error);
    println!("global phase {:.6}, {:?}", r.global_phase, r.wall_time);
    let largest = r
        .sequence
        .gates
        .iter()
        .filter_map(|g| match g {
            Gate::JPower { m, .. } => Some(*m),
            Gate::Perm(_) => None,
        })
        .max();
    println!("largest exponent: {largest:?}");
    Ok(())
}
