//! Powers of J, its controlled form, and signed permutations.

use jsynth::gates::{
    approx_block_sigma, as_controlled_pair, axis_angle_of, j_power, make_j, perm_matrix, JGate, PermGate,
};
use jsynth::numerics::op_norm_dist;

fn main() -> jsynth::Result<()> {
    let g = JGate::default();
    let j = make_j(&g);
    let (u0, u1) = as_controlled_pair(&g);
    let upper = axis_angle_of(&u0)?;
    let lower = axis_angle_of(&u1)?;
    println!("upper block: axis {:?}, angle {:.6}", upper.axis(), upper.psi);
    println!("lower block: axis {:?}, angle {:.6}", lower.axis(), lower.psi);

    let big = j_power(&g, 1_000_000);
    let stepped = (0..1000).fold(j_power(&g, 0), |acc, _| j_power(&g, 1000) * acc);
    println!("J^1e6 closed form vs 1000 products: {:.3e}", op_norm_dist(&big, &stepped)?);
    println!("J^-1 · J distance to I: {:.3e}", op_norm_dist(&(j_power(&g, -1) * j), &j_power(&g, 0))?);

    let sigma = approx_block_sigma(&g, 5e-3, 100_000_000)?;
    println!("blockdiag(σ, I) ≈ J^{} with error {:.3e}", sigma.m, sigma.error);

    let p = PermGate::from_one_based([2, 1, 3, 4], [1, -1, 1, 1])?;
    let q = PermGate::block_swap();
    println!("p = {p:?}\nq = {q:?}\np·q = {:?}", p.compose(&q));
    println!("p·p⁻¹ is identity: {}", p.compose(&p.inverse()).is_identity());
    print!("{}", jsynth::report::format_matrix(&perm_matrix(&p)));
    Ok(())
}
