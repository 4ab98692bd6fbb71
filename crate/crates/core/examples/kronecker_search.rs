//! Smallest m with every m·α_k within ε of its target on the circle.

use std::f64::consts::FRAC_PI_2;

use jsynth::kronecker::{check_independence, default_constants, find_power, KroneckerQuery};

fn main() -> jsynth::Result<()> {
    let (a, b) = default_constants();
    for eps in [0.1, 0.05, 0.01, 1e-3] {
        let r = find_power(&KroneckerQuery::new(vec![a, b], vec![FRAC_PI_2, 0.0], eps))?;
        println!("eps {eps:>6}: m = {:>9}  errors = {:.3e}, {:.3e}", r.m, r.achieved_errors[0], r.achieved_errors[1]);
    }

    // a tiny budget runs out
    let q = KroneckerQuery::new(vec![a, b], vec![1.0, 2.0], 1e-6).with_m_max(1000);
    let r = find_power(&q)?;
    println!("m_max 1000, eps 1e-6: exhausted = {}, best m = {}", r.exhausted, r.m);

    match check_independence(a, b) {
        None => println!("no small integer relation between sqrt2 and sqrt3"),
        Some(rel) => println!("relation found: {rel:?}"),
    }
    if let Some(rel) = check_independence(std::f64::consts::FRAC_PI_4, a) {
        println!("pi/4 and sqrt2: {:?}·(α, β, π) + {} ≈ 0", rel.coefficients, rel.constant);
    }
    Ok(())
}
