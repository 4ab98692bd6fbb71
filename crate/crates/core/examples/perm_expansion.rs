//! Replace reachable signed permutations with J powers.

use jsynth::gates::PermGate;
use jsynth::numerics::haar_unitary;
use jsynth::synthesis::{expand_perms, synth_unitary, SynthesisConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> jsynth::Result<()> {
    let config = SynthesisConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let r = synth_unitary(&haar_unitary(&mut rng, 4), &config)?;
    let e = expand_perms(&r.sequence, &config)?;
    println!(
        "before: {} gates, budget {:.3e}\nafter:  {} gates, budget {:.3e}, {} left as permutations",
        r.sequence.len(),
        r.sequence.total_budget(),
        e.sequence.len(),
        e.sequence.total_budget(),
        e.unreachable
    );

    // blockdiag(σ, −I) is reachable, the block swap is not
    let reachable = PermGate::from_one_based([2, 1, 3, 4], [1, -1, -1, -1])?;
    for p in [reachable, PermGate::block_swap()] {
        let mut seq = jsynth::synthesis::GateSequence::new(config.gate);
        seq.gates.push(jsynth::synthesis::Gate::Perm(p));
        let e = expand_perms(&seq, &config)?;
        println!("{p:?}: unreachable = {}, budget {:.3e}", e.unreachable, e.sequence.total_budget());
    }
    Ok(())
}
