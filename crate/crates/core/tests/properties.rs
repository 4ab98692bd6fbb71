use std::f64::consts::{PI, TAU};

use jsynth::gates::{
    as_controlled_pair, axis_angle_of, controlled_on_one, controlled_on_zero, decompose_zy,
    exchange_conjugate, j_power, make_j, perm_matrix, JGate, PermGate,
};
use jsynth::hypersphere::{build_pole_map, from_coords, prepare_state, to_coords};
use jsynth::kronecker::{circle_dist, default_constants, find_power, phase_of_multiple, KroneckerQuery};
use jsynth::numerics::{
    cis, eig_unitary, haar_unitary, op_norm_dist, phase_aligned_dist, random_unit_vector, Matrix, Vector, C64,
    ZERO,
};
use jsynth::report::{evaluate_records, format_complex, parse_complex, records, StepRecord};
use jsynth::synthesis::{
    expand_perms, factor_eigen, peephole, reconstruct, synth_blockdiag, synth_factors, synth_unitary,
    EigenFactor, Gate, GateSequence, SynthesisConfig,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dist(a: &Matrix, b: &Matrix) -> f64 {
    op_norm_dist(a, b).unwrap()
}

fn perm_strategy() -> impl Strategy<Value = PermGate> {
    (Just([0usize, 1, 2, 3]).prop_shuffle(), prop::array::uniform4(prop::bool::ANY))
        .prop_map(|(p, s)| {
            let perm = [p[0], p[1], p[2], p[3]];
            PermGate::new(perm, s.map(|neg| if neg { -1 } else { 1 })).unwrap()
        })
}

fn cheap() -> ProptestConfig {
    ProptestConfig::with_cases(16)
}

// numerics

proptest! {
    #[test]
    fn op_norm_is_right_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c) = (haar_unitary(&mut r, 4), haar_unitary(&mut r, 4), haar_unitary(&mut r, 4));
        prop_assert!((dist(&(a * c), &(b * c)) - dist(&a, &b)).abs() <= 1e-10);
        prop_assert!((dist(&(c * a), &(c * b)) - dist(&a, &b)).abs() <= 1e-10);
    }

    #[test]
    fn op_norm_is_subadditive_over_products(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a: Vec<Matrix> = (0..5).map(|_| haar_unitary(&mut r, 4)).collect();
        // b is a perturbation of a so the bound is not vacuous
        let b: Vec<Matrix> = a.iter().map(|x| {
            let d = Matrix::diag(&[cis(r.random_range(-0.1..0.1)), C64::new(1.0, 0.0), C64::new(1.0, 0.0), cis(0.05)]).unwrap();
            d * *x
        }).collect();
        let pa = a.iter().fold(Matrix::identity(4), |acc, x| *x * acc);
        let pb = b.iter().fold(Matrix::identity(4), |acc, x| *x * acc);
        let sum: f64 = a.iter().zip(&b).map(|(x, y)| dist(x, y)).sum();
        prop_assert!(dist(&pa, &pb) <= sum + 1e-12);
    }

    #[test]
    fn op_norm_is_a_metric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c) = (haar_unitary(&mut r, 4), haar_unitary(&mut r, 4), haar_unitary(&mut r, 4));
        prop_assert!((dist(&a, &b) - dist(&b, &a)).abs() <= 1e-12);
        prop_assert!(dist(&a, &c) <= dist(&a, &b) + dist(&b, &c) + 1e-12);
    }

    #[test]
    fn phase_alignment_ignores_global_phase(seed in any::<u64>(), delta in -PI..PI) {
        let mut r = rng(seed);
        let (a, b) = (haar_unitary(&mut r, 4), haar_unitary(&mut r, 4));
        let aligned = phase_aligned_dist(&a, &b).unwrap();
        prop_assert!(aligned <= dist(&a, &b) + 1e-12);
        prop_assert!((phase_aligned_dist(&a.scale(cis(delta)), &b).unwrap() - aligned).abs() <= 1e-9);
        prop_assert!(phase_aligned_dist(&a.scale(cis(delta)), &a).unwrap() <= 1e-9);
    }

    #[test]
    fn eigenpairs_reconstruct(seed in any::<u64>()) {
        let g = haar_unitary(&mut rng(seed), 4);
        let pairs = eig_unitary(&g).unwrap();
        let mut sum = Matrix::zeros(4);
        for p in &pairs {
            prop_assert!((p.eigenvalue().norm() - 1.0).abs() <= 1e-10);
            let residual = g.apply(&p.vector).unwrap().distance(&p.vector.scale(p.eigenvalue()));
            prop_assert!(residual <= 1e-10);
            sum = sum + Matrix::outer(&p.vector, &p.vector).scale(p.eigenvalue());
        }
        prop_assert!(dist(&sum, &g) <= 1e-9);
        for w in pairs.windows(2) {
            prop_assert!(w[0].value_angle <= w[1].value_angle);
        }
    }
}

// kronecker

fn brute_force(alphas: &[f64], targets: &[f64], eps: f64, m_max: u64) -> Option<u64> {
    (1..=m_max).find(|&m| {
        alphas.iter().zip(targets).all(|(&a, &x)| circle_dist(phase_of_multiple(m as i64, a), x) < eps)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kronecker_is_minimal(x in 0.0..TAU, y in 0.0..TAU, eps in 0.05..0.5) {
        let (a, b) = default_constants();
        let r = find_power(&KroneckerQuery::new(vec![a, b], vec![x, y], eps)).unwrap();
        prop_assert!(!r.exhausted);
        prop_assert!(r.max_error() < eps);
        prop_assert_eq!(Some(r.m), brute_force(&[a, b], &[x, y], eps, r.m));
    }

    #[test]
    fn kronecker_is_monotone_in_eps(x in 0.0..TAU, y in 0.0..TAU, eps in 0.01..0.5, shrink in 0.1..1.0) {
        let (a, b) = default_constants();
        let loose = find_power(&KroneckerQuery::new(vec![a, b], vec![x, y], eps)).unwrap();
        let tight = find_power(&KroneckerQuery::new(vec![a, b], vec![x, y], eps * shrink)).unwrap();
        prop_assert!(tight.m >= loose.m);
    }

    #[test]
    fn kronecker_targets_are_periodic(x in -10.0..10.0f64, y in -10.0..10.0f64, k in -3i32..3) {
        let (a, b) = default_constants();
        let base = find_power(&KroneckerQuery::new(vec![a, b], vec![x, y], 0.05)).unwrap();
        let shifted = find_power(&KroneckerQuery::new(vec![a, b], vec![x + k as f64 * TAU, y], 0.05)).unwrap();
        prop_assert_eq!(base.m, shifted.m);
    }
}

#[test]
fn kronecker_hits_every_target() {
    let (a, b) = default_constants();
    let mut r = rng(51);
    for _ in 0..1000 {
        let t = vec![r.random_range(0.0..TAU), r.random_range(0.0..TAU)];
        let q = KroneckerQuery::new(vec![a, b], t, 0.05).with_m_max(10_000_000);
        assert!(!find_power(&q).unwrap().exhausted);
    }
}

// gates

proptest! {
    #[test]
    fn j_powers_add(m in -1_000_000i64..1_000_000, k in -1_000_000i64..1_000_000) {
        let g = JGate::default();
        prop_assert!(dist(&(j_power(&g, m) * j_power(&g, k)), &j_power(&g, m + k)) <= 1e-12);
    }

    #[test]
    fn single_qubit_forms_reconstruct(seed in any::<u64>()) {
        let u = haar_unitary(&mut rng(seed), 2);
        prop_assert!(dist(&decompose_zy(&u).unwrap().matrix(), &u) <= 1e-12);
        prop_assert!(dist(&axis_angle_of(&u).unwrap().matrix(), &u) <= 1e-12);
    }

    #[test]
    fn exchange_is_an_involution(a in -PI..PI, b in -PI..PI) {
        let d = Matrix::diag(&[cis(a), cis(b)]).unwrap();
        let once = exchange_conjugate(&d).unwrap();
        prop_assert_eq!(once, Matrix::diag(&[cis(b), cis(a)]).unwrap());
        prop_assert_eq!(exchange_conjugate(&once).unwrap(), d);
    }

    #[test]
    fn controlled_pair_reassembles(alpha in -10.0..10.0f64, beta in -10.0..10.0f64) {
        let g = JGate::new(alpha, beta);
        let (u0, u1) = as_controlled_pair(&g);
        let product = controlled_on_zero(&u0).unwrap() * controlled_on_one(&u1).unwrap();
        prop_assert!((product - make_j(&g)).max_abs() <= 1e-15);
    }

    #[test]
    fn perm_algebra_matches_matrices(p in perm_strategy(), q in perm_strategy()) {
        prop_assert_eq!(perm_matrix(&p.compose(&q)), perm_matrix(&p) * perm_matrix(&q));
        prop_assert!(p.compose(&p.inverse()).is_identity());
        prop_assert_eq!(perm_matrix(&p.inverse()), perm_matrix(&p).adjoint());
        prop_assert_eq!(perm_matrix(&p).unitarity_residual(), 0.0);
    }
}

// hypersphere

/// Random unit vector with a random subset of components forced to zero.
fn sparse_unit_vector(seed: u64, mask: u8) -> Vector {
    let mut r = rng(seed);
    let v = random_unit_vector(&mut r, 4);
    let mut e = [v[0], v[1], v[2], v[3]];
    for (i, z) in e.iter_mut().enumerate() {
        if mask & (1 << i) != 0 {
            *z = ZERO;
        }
    }
    Vector::new(&e).unwrap().normalized().unwrap_or_else(|| Vector::basis(4, 3))
}

proptest! {
    #[test]
    fn coords_round_trip(seed in any::<u64>(), mask in 0u8..15) {
        let v = sparse_unit_vector(seed, mask);
        let (c, g) = to_coords(&v).unwrap();
        prop_assert!(from_coords(&c).distance(&v.scale(cis(-g))) <= 1e-12);
    }

    #[test]
    fn pole_map_zeroes_and_is_unitary(seed in any::<u64>(), mask in 0u8..15) {
        let v = sparse_unit_vector(seed, mask);
        let map = build_pole_map(&v).unwrap();
        let image = map.r.apply(&v).unwrap();
        for j in 0..3 {
            prop_assert!(image[j].norm() <= 1e-10);
        }
        prop_assert!((image[3].norm() - 1.0).abs() <= 1e-10);
        prop_assert!(map.r.unitarity_residual() <= 1e-13);
        for f in &map.factors {
            prop_assert!(f.matrix().unitarity_residual() <= 1e-13);
        }
    }
}

proptest! {
    #![proptest_config(cheap())]

    #[test]
    fn prepared_states_are_within_budget(seed in any::<u64>()) {
        let v = random_unit_vector(&mut rng(seed), 4);
        let p = prepare_state(&v, &SynthesisConfig::default()).unwrap();
        let budget = p.sequence.total_budget();
        // min over δ of ‖achieved − e^{iδ}·v‖
        let deviation = (2.0 - 2.0 * p.fidelity).max(0.0).sqrt();
        prop_assert!(deviation <= budget + 1e-12);
        prop_assert!(p.fidelity >= 1.0 - budget);
    }
}

// synthesis

fn random_sequence(seed: u64, len: usize) -> GateSequence {
    let mut r = rng(seed);
    let j = JGate::default();
    let mut seq = GateSequence::new(j);
    for _ in 0..len {
        if r.random_bool(0.5) {
            let m = r.random_range(-3i64..4) * r.random_range(1i64..1_000_000);
            seq.gates.push(Gate::JPower { m, ideal: j_power(&j, m), step_error: 0.0 });
        } else {
            let mut perm = [0usize, 1, 2, 3];
            for i in (1..4).rev() {
                perm.swap(i, r.random_range(0..=i));
            }
            let signs = [0; 4].map(|_: i8| if r.random_bool(0.3) { -1 } else { 1 });
            seq.gates.push(Gate::Perm(PermGate::new(perm, signs).unwrap()));
        }
    }
    seq
}

proptest! {
    #[test]
    fn peephole_preserves_evaluation(seed in any::<u64>(), len in 0usize..20) {
        let seq = random_sequence(seed, len);
        let out = peephole(&seq);
        prop_assert!(out.len() <= seq.len());
        prop_assert!(dist(&out.evaluate(), &seq.evaluate()) <= 1e-12);
        prop_assert!(dist(&out.ideal(), &seq.ideal()) <= 1e-12);
        prop_assert_eq!(peephole(&out), out);
    }

    #[test]
    fn report_records_round_trip(seed in any::<u64>(), len in 0usize..20) {
        let seq = random_sequence(seed, len);
        let text = serde_json::to_string(&records(&seq)).unwrap();
        let back: Vec<StepRecord> = serde_json::from_str(&text).unwrap();
        prop_assert!(dist(&evaluate_records(&back, &seq.gate).unwrap(), &seq.evaluate()) <= 1e-12);
    }

    #[test]
    fn complex_literals_round_trip(re in any::<f64>(), im in any::<f64>()) {
        prop_assume!(re.is_finite() && im.is_finite());
        let z = C64::new(re, im);
        prop_assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
    }
}

proptest! {
    #![proptest_config(cheap())]

    #[test]
    fn blockdiag_budget_is_sound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (u, v) = (haar_unitary(&mut r, 2), haar_unitary(&mut r, 2));
        let s = synth_blockdiag(&u, &v, &SynthesisConfig::default()).unwrap();
        let target = Matrix::block_diag(&u, &v).unwrap();
        prop_assert!(phase_aligned_dist(&s.evaluate(), &target).unwrap() <= s.total_budget() + 1e-9);
    }

    #[test]
    fn unitary_budget_is_sound_and_deterministic(seed in any::<u64>()) {
        let g = haar_unitary(&mut rng(seed), 4);
        let config = SynthesisConfig::default().with_eps_step(1e-2);
        let a = synth_unitary(&g, &config).unwrap();
        prop_assert!(a.measured_error <= a.total_budget() + 1e-9);
        let b = synth_unitary(&g, &config).unwrap();
        prop_assert_eq!(a.sequence, b.sequence);
    }

    #[test]
    fn factor_order_does_not_matter(seed in any::<u64>()) {
        let g = haar_unitary(&mut rng(seed), 4);
        let config = SynthesisConfig::default().with_eps_step(1e-2);
        let factors = factor_eigen(&g).unwrap();
        let mut reversed = factors.clone();
        reversed.reverse();
        prop_assert!(dist(&reconstruct(&factors), &g) <= 1e-9);
        prop_assert!(dist(&reconstruct(&reversed), &g) <= 1e-9);
        let a = synth_factors(&factors, &config).unwrap();
        let b = synth_factors(&reversed, &config).unwrap();
        prop_assert!((a.total_budget() - b.total_budget()).abs() <= 1e-12);
        prop_assert!(phase_aligned_dist(&a.evaluate(), &g).unwrap() <= a.total_budget() + 1e-9);
        prop_assert!(phase_aligned_dist(&b.evaluate(), &g).unwrap() <= b.total_budget() + 1e-9);
    }

    #[test]
    fn degenerate_spectrum_is_basis_independent(seed in any::<u64>(), a in -PI..PI, b in -PI..PI) {
        let mut r = rng(seed);
        let w = haar_unitary(&mut r, 4);
        let d = Matrix::diag(&[cis(a), cis(a), cis(b), cis(-b)]).unwrap();
        let g = w * d * w.adjoint();
        // two orthonormal bases of the doubly degenerate eigenspace
        let (v0, v1) = (w.column(0), w.column(1));
        let mix = haar_unitary(&mut r, 2);
        let combo = |c0: C64, c1: C64| {
            Vector::new(&(0..4).map(|i| c0 * v0[i] + c1 * v1[i]).collect::<Vec<_>>()).unwrap()
        };
        let u0 = combo(mix[(0, 0)], mix[(1, 0)]);
        let u1 = combo(mix[(0, 1)], mix[(1, 1)]);
        let rest = [EigenFactor { vector: w.column(2), eta: b }, EigenFactor { vector: w.column(3), eta: -b }];
        let first = [&[EigenFactor { vector: v0, eta: a }, EigenFactor { vector: v1, eta: a }][..], &rest].concat();
        let second = [&[EigenFactor { vector: u0, eta: a }, EigenFactor { vector: u1, eta: a }][..], &rest].concat();
        let config = SynthesisConfig::default().with_eps_step(1e-2);
        for factors in [first, second] {
            prop_assert!(dist(&reconstruct(&factors), &g) <= 1e-9);
            let s = synth_factors(&factors, &config).unwrap();
            prop_assert!(phase_aligned_dist(&s.evaluate(), &g).unwrap() <= s.total_budget() + 1e-9);
        }
    }

    #[test]
    fn expansion_stays_within_budget(ks in prop::collection::vec((0i64..4, prop::bool::ANY), 1..4)) {
        let j = JGate::default();
        let mut seq = GateSequence::new(j);
        for (k, negate) in ks {
            let upper: [([usize; 2], [i8; 2]); 4] =
                [([0, 1], [1, 1]), ([1, 0], [1, -1]), ([0, 1], [-1, -1]), ([1, 0], [-1, 1])];
            let (pu, su) = upper[k as usize];
            let sl = if negate { -1 } else { 1 };
            seq.gates.push(Gate::Perm(PermGate::new([pu[0], pu[1], 2, 3], [su[0], su[1], sl, sl]).unwrap()));
        }
        let e = expand_perms(&seq, &SynthesisConfig::default()).unwrap();
        prop_assert_eq!(e.unreachable, 0);
        let all_powers = e.sequence.gates.iter().all(|g| matches!(g, Gate::JPower { .. }));
        prop_assert!(all_powers);
        prop_assert!(dist(&e.sequence.evaluate(), &seq.evaluate()) <= e.sequence.total_budget() + 1e-12);
    }
}
