//! Hyperspherical coordinates of a state and the unitary that sends it to e4.

use jsynth::hypersphere::{build_pole_map, from_coords, to_coords};
use jsynth::numerics::{cis, random_unit_vector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> jsynth::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let v = random_unit_vector(&mut rng, 4);
    let (c, gauge) = to_coords(&v)?;
    println!("coords: {c:?}\ngauge phase: {gauge:.6}");
    println!("round trip: {:.3e}", from_coords(&c).distance(&v.scale(cis(-gauge))));

    let map = build_pole_map(&v)?;
    for f in &map.factors {
        println!("factor on plane {:?}: chi {:.6}, angle {:.6}", f.plane, f.chi, f.angle);
    }
    let image = map.r.apply(&v)?;
    println!("R·v = {:?}", image.as_slice());
    println!("residual phase on e4: {:.6}", map.residual_phase);
    Ok(())
}
