//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured quantities (visible with `--nocapture`).
//!
//! Run with `cargo test -p qcap-core --test acceptance -- --nocapture`.

use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;

use qcap_core::capacity::{
    ea_capacity_depolarizing, inequality_margin, maximize_mutual_info,
    one_shot_capacity_depolarizing, one_shot_capacity_unital_qubit, ratio_extreme,
    strong_noise_ratio, OptimizerConfig,
};
use qcap_core::channel::QuantumChannel;
use qcap_core::densecoding::{densecoding_rate, WeylFamily};
use qcap_core::encoding::construct_encodings;
use qcap_core::entropy::{
    conditional_entropy, entropy_exchange, relative_entropy, von_neumann, ExchangeMethod,
};
use qcap_core::linalg::{ComplexMatrix, Subsystem};
use qcap_core::random;
use qcap_core::state::{BipartiteState, DensityMatrix};
use qcap_core::typicality::{
    check_empirical_mean_bound, convergence_demo, second_term_diagnostic, sequence_surprisal,
    strongly_typical_set, SpectralState, Spectrum,
};

fn default_cfg(seed: u64) -> OptimizerConfig<f64> {
    OptimizerConfig {
        seed,
        ..OptimizerConfig::default()
    }
}

#[test]
fn c01_extreme_ratio_reference_value() {
    let start = Instant::now();
    let ext = ratio_extreme(2);
    let elapsed = start.elapsed();
    assert!(
        (ext.ratio - 5.0798).abs() <= 5e-4,
        "ratio(2) = {} is not within 5e-4 of 5.0798",
        ext.ratio
    );
    assert!(
        elapsed.as_secs_f64() < 1e-3,
        "ratio_extreme(2) took {elapsed:?}, budget 1 ms"
    );
    println!(
        "ACCEPTANCE 1: PASS — ratio_extreme(2) = {:.6} (|Δ| = {:.2e}), {:?}",
        ext.ratio,
        (ext.ratio - 5.0798).abs(),
        elapsed
    );
}

#[test]
fn c02_extreme_ratio_asymptote() {
    let ratios: Vec<f64> = (2..=32).map(|d| ratio_extreme(d).ratio).collect();
    for w in ratios.windows(2) {
        assert!(w[1] > w[0], "ratio not strictly increasing: {w:?}");
    }
    let r32 = ratio_extreme(32);
    let rel = (r32.ratio - 66.0).abs() / 66.0;
    assert!(rel <= 0.02, "ratio(32) = {} deviates {rel:.4} from 66", r32.ratio);
    println!(
        "ACCEPTANCE 2: PASS — strictly increasing over d=2..32; ratio(32) = {:.4} ({:.2}% from 66)",
        r32.ratio,
        rel * 100.0
    );
}

#[test]
fn c03_strong_noise_limit() {
    for d in [2usize, 3] {
        let target = (d + 1) as f64;
        let devs: Vec<f64> = [0.9, 0.99, 0.999]
            .iter()
            .map(|&p| (strong_noise_ratio(d, p).unwrap() - target).abs())
            .collect();
        assert!(
            devs[0] > devs[1] && devs[1] > devs[2],
            "d={d}: |ratio - {target}| not decreasing: {devs:?}"
        );
        println!(
            "ACCEPTANCE 3 (d={d}): PASS — |ratio - {target}| decreases {:.4} -> {:.4} -> {:.4}",
            devs[0], devs[1], devs[2]
        );
    }
}

#[test]
fn c04_optimizer_matches_closed_forms() {
    let start = Instant::now();
    for d in [2usize, 3] {
        for p in [0.3, 0.7, 1.0] {
            let channel = QuantumChannel::<f64>::depolarizing(d, p).unwrap();
            let report = maximize_mutual_info(&channel, &default_cfg(4)).unwrap();
            let closed = ea_capacity_depolarizing(d, p).unwrap();
            assert!(
                (report.value - closed).abs() <= 1e-6,
                "d={d}, p={p}: optimizer {} vs closed {}",
                report.value,
                closed
            );
            let chaotic = DensityMatrix::<f64>::maximally_mixed(d);
            let dev = report.maximizer.matrix().max_abs_diff(chaotic.matrix());
            assert!(dev <= 1e-4, "d={d}, p={p}: maximizer deviates {dev:e} from I/d");
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "optimizer grid took {elapsed:?}, budget 30 s"
    );
    println!(
        "ACCEPTANCE 4: PASS — optimizer matches closed forms on d ∈ {{2,3}} × p ∈ {{0.3,0.7,1.0}} within 1e-6, maximizers at I/d within 1e-4, total {elapsed:?}"
    );
}

#[test]
fn c05_identity_channel_capacity() {
    for d in [2usize, 3] {
        let channel = QuantumChannel::<f64>::identity(d);
        let report = maximize_mutual_info(&channel, &default_cfg(5)).unwrap();
        let expected = 2.0 * (d as f64).log2();
        assert!(
            (report.value - expected).abs() <= 1e-9,
            "d={d}: C_ea = {} vs 2 log₂ d = {expected}",
            report.value
        );
        println!(
            "ACCEPTANCE 5 (d={d}): PASS — C_ea(Id) = {:.12} vs {expected}",
            report.value
        );
    }
}

#[test]
fn c06_entropy_exchange_cross_method() {
    let mut rng = random::rng(6);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let d = rng.gen_range(2usize..=4);
        let k = rng.gen_range(1usize..=8);
        let channel = random::channel::<f64>(d, d, k, &mut rng);
        let state = random::density::<f64>(d, &mut rng);
        let gram = entropy_exchange(&state, &channel, ExchangeMethod::Gram).unwrap();
        let purification = entropy_exchange(&state, &channel, ExchangeMethod::Purification).unwrap();
        let diff = (gram - purification).abs();
        worst = worst.max(diff);
        assert!(diff <= 1e-9, "methods disagree by {diff:e} (d={d}, k={k})");
    }
    println!("ACCEPTANCE 6: PASS — 100 random channels, worst cross-method deviation {worst:.3e}");
}

#[test]
fn c07_dense_coding_properties_and_rate() {
    for (d, m) in [(2usize, 2usize), (3, 2), (3, 3)] {
        let weyl = WeylFamily::<f64>::computational(m, d).unwrap();
        let p1 = weyl.property1_deviation();
        let p2 = weyl.property2_deviation();
        assert!(p1 <= 1e-12, "(d={d}, m={m}): property 1 deviation {p1:e}");
        assert!(p2 <= 1e-12, "(d={d}, m={m}): property 2 deviation {p2:e}");
    }

    let mut rng = random::rng(7);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let d = rng.gen_range(2usize..=3);
        let m = rng.gen_range(1usize..=d);
        let k = rng.gen_range(1usize..=4);
        let channel = random::channel::<f64>(d, d, k, &mut rng);
        let weyl = WeylFamily::<f64>::computational(m, d).unwrap();
        let rate = densecoding_rate(&channel, &weyl).unwrap();
        let diff = (rate.chi - rate.mi).abs();
        worst = worst.max(diff);
        assert!(diff <= 1e-9, "rate equality broken by {diff:e} (d={d}, m={m})");
    }
    println!(
        "ACCEPTANCE 7: PASS — properties ≤ 1e-12 on (2,2),(3,2),(3,3); rate equality over 50 random channels, worst {worst:.3e}"
    );
}

#[test]
fn c08_encoding_construction() {
    let mut rng = random::rng(8);
    let mut worst_err = 0.0f64;
    let mut worst_choi = f64::INFINITY;
    let mut degenerate_seen = 0usize;
    for i in 0..20 {
        // 5 of the 20 families have a rank-deficient common marginal.
        let rank_deficient = i % 4 == 3;
        let d = if i % 2 == 0 { 2 } else { 3 };
        let rank = if rank_deficient { d - 1 } else { d };
        let members = rng.gen_range(2usize..=4);
        let family = random::equal_marginal_family::<f64>(d, members, rank, 2, &mut rng);
        let constructed = construct_encodings(&family).unwrap();
        if rank_deficient {
            assert!(constructed.degenerate, "family {i}: degeneracy undetected");
            degenerate_seen += 1;
        }
        let err = constructed.verify_reconstruction();
        worst_err = worst_err.max(err);
        worst_choi = worst_choi.min(constructed.choi_min_eigenvalue);
        assert!(err <= 1e-9, "family {i}: reconstruction error {err:e}");
        assert!(
            constructed.choi_min_eigenvalue >= -1e-10,
            "family {i}: Choi minimum eigenvalue {:e}",
            constructed.choi_min_eigenvalue
        );
    }
    assert_eq!(degenerate_seen, 5);
    println!(
        "ACCEPTANCE 8: PASS — 20 families (5 rank-deficient): worst reconstruction {worst_err:.3e}, min Choi eigenvalue {worst_choi:.3e}"
    );
}

#[test]
fn c09_typicality_suite() {
    let start = Instant::now();

    // Exact counts against the combinatorial oracle.
    let sp_uniform = Spectrum::new(vec![0.5, 0.5]).unwrap();
    let set_uniform = strongly_typical_set(&sp_uniform, 10, 0.1).unwrap();
    assert_eq!(set_uniform.d_n_delta, 252, "expected C(10,5) = 252");
    let sp_skew = Spectrum::new(vec![0.9, 0.1]).unwrap();
    let set_skew = strongly_typical_set(&sp_skew, 20, 0.05).unwrap();
    assert_eq!(set_skew.d_n_delta, 190, "expected C(20,2) = 190");

    // Empirical-mean and entropy-typicality bounds hold exhaustively
    // (per sequence; the 252-member set is materialized in full).
    for seq in set_uniform.materialize_sequences(1000).unwrap() {
        let f = [0.37, -1.2];
        let mean: f64 = seq.iter().map(|&j| f[j]).sum::<f64>() / 10.0;
        let expectation = 0.5 * f[0] + 0.5 * f[1];
        assert!((mean - expectation).abs() < 0.1 * 1.2);
    }
    let mean_report = check_empirical_mean_bound(
        &set_skew,
        &[-(0.9f64.log2()), -(0.1f64.log2())],
        &sp_skew,
    );
    assert!(mean_report.pass, "empirical-mean bound violated");
    let h = sp_skew.entropy();
    for class in &set_skew.classes {
        let surprisal = sequence_surprisal(&class.counts, &sp_skew);
        assert!(20.0 * (h - set_skew.delta1) < surprisal);
        assert!(surprisal < 20.0 * (h + set_skew.delta1));
    }

    // Convergence gap trend for the depolarizing channel.
    let state = SpectralState::from_probs(vec![0.9, 0.1]).unwrap();
    let depol = QuantumChannel::<f64>::depolarizing(2, 0.5).unwrap();
    let rows = convergence_demo(&state, &depol, &[4, 8, 12], 0.05).unwrap();
    assert!(
        rows[2].gap < rows[0].gap,
        "gap(12) = {} not below gap(4) = {}",
        rows[2].gap,
        rows[0].gap
    );

    // Decomposition identity at n = 8, qubit channel.
    let report = second_term_diagnostic(&state, &depol, 8, 0.05).unwrap();
    assert!(
        (report.lhs - report.rhs).abs() <= 1e-9,
        "qubit identity: lhs {} vs rhs {}",
        report.lhs,
        report.rhs
    );

    // Decomposition identity at n = 8 with a rank-deficient-output
    // channel (qutrit projector with a folded letter).
    let mut a1 = ComplexMatrix::<f64>::zeros(3, 3);
    a1[(0, 0)] = Complex64::new(1.0, 0.0);
    a1[(1, 1)] = Complex64::new(1.0, 0.0);
    let mut a2 = ComplexMatrix::<f64>::zeros(3, 3);
    a2[(0, 2)] = Complex64::new(1.0, 0.0);
    let projector_channel = QuantumChannel::new(vec![a1, a2], 3, 3).unwrap();
    let qutrit_state = SpectralState::from_probs(vec![0.6, 0.3, 0.1]).unwrap();
    let report_rd = second_term_diagnostic(&qutrit_state, &projector_channel, 8, 0.2).unwrap();
    assert!(
        (report_rd.lhs - report_rd.rhs).abs() <= 1e-9,
        "rank-deficient identity: lhs {} vs rhs {}",
        report_rd.lhs,
        report_rd.rhs
    );

    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 120.0,
        "typicality suite took {elapsed:?}, budget 2 min"
    );
    println!(
        "ACCEPTANCE 9: PASS — counts 252/190 exact; bounds exhaustive; gap(12) = {:.4} < gap(4) = {:.4}; identities |lhs-rhs| = {:.2e} (qubit), {:.2e} (rank-deficient qutrit); total {elapsed:?}",
        rows[2].gap,
        rows[0].gap,
        (report.lhs - report.rhs).abs(),
        (report_rd.lhs - report_rd.rhs).abs()
    );
}

#[test]
fn c10_capacity_inequality() {
    // Depolarizing grid, closed forms.
    let mut min_margin = f64::INFINITY;
    for d in [2usize, 3] {
        let p_max = (d * d) as f64 / ((d * d) as f64 - 1.0);
        let mut p = 0.0;
        while p <= p_max.min(1.3) + 1e-12 {
            let c_ea = ea_capacity_depolarizing(d, p).unwrap();
            let c1 = one_shot_capacity_depolarizing(d, p).unwrap();
            let margin = inequality_margin(c_ea, c1, d);
            min_margin = min_margin.min(margin);
            assert!(margin >= -1e-9, "d={d}, p={p}: margin {margin:e}");
            p += 0.1;
        }
    }

    // 100 seeded random unital qubit channels; the objective is concave,
    // so a few restarts suffice for the optimizer side.
    let mut rng = random::rng(10);
    let cfg = OptimizerConfig::<f64> {
        restarts: 3,
        seed: 10,
        ..OptimizerConfig::default()
    };
    for i in 0..100 {
        let probs = random::probability_vector::<f64>(4, &mut rng);
        let channel =
            QuantumChannel::<f64>::unital_qubit(probs[0], probs[1], probs[2], probs[3]).unwrap();
        let c_ea = maximize_mutual_info(&channel, &cfg).unwrap().value;
        let c1 = one_shot_capacity_unital_qubit(&channel, 96).unwrap();
        let margin = inequality_margin(c_ea, c1, 2);
        min_margin = min_margin.min(margin);
        assert!(margin >= -1e-9, "unital channel {i}: margin {margin:e}");
    }
    println!("ACCEPTANCE 10: PASS — min margin {min_margin:.6e} over depolarizing grids and 100 unital qubit channels");
}

#[test]
fn c11_two_copy_additivity() {
    let start = Instant::now();
    let single = QuantumChannel::<f64>::depolarizing(2, 0.5).unwrap();
    let double = single.tensor_power(2).unwrap();
    let report = maximize_mutual_info(&double, &default_cfg(11)).unwrap();
    let expected = 2.0 * ea_capacity_depolarizing(2, 0.5).unwrap();
    let diff = (report.value - expected).abs();
    assert!(diff <= 1e-5, "two-copy value {} vs 2x single {expected}", report.value);
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 300.0,
        "two-copy optimization took {elapsed:?}, budget 5 min"
    );
    println!(
        "ACCEPTANCE 11: PASS — two-copy value {:.9} vs 2x single {:.9} (|Δ| = {diff:.2e}), {elapsed:?}",
        report.value, expected
    );
}

#[test]
fn c12_entropy_property_suite() {
    let mut rng = random::rng(12);

    // Subadditivity H(AB) ≤ H(A) + H(B).
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..200 {
        let d_a = rng.gen_range(2usize..=4);
        let d_b = rng.gen_range(2usize..=4);
        let joint = random::density::<f64>(d_a * d_b, &mut rng);
        let bip = BipartiteState::new(d_a, d_b, joint.clone()).unwrap();
        let violation = von_neumann(&joint)
            - von_neumann(&bip.marginal(Subsystem::A))
            - von_neumann(&bip.marginal(Subsystem::B));
        worst = worst.max(violation);
        assert!(violation <= 1e-9, "subadditivity violated by {violation:e}");
    }
    println!("ACCEPTANCE 12a: PASS — subadditivity, worst violation {worst:.3e}");

    // Monotonicity of relative entropy under channels.
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..200 {
        let d = rng.gen_range(2usize..=4);
        let s = random::density::<f64>(d, &mut rng);
        let t = random::density::<f64>(d, &mut rng);
        let channel = random::channel::<f64>(d, d, rng.gen_range(2usize..=4), &mut rng);
        let violation = relative_entropy(&channel.apply(&s).unwrap(), &channel.apply(&t).unwrap())
            - relative_entropy(&s, &t);
        worst = worst.max(violation);
        assert!(violation <= 1e-9, "relative entropy grew by {violation:e}");
    }
    println!("ACCEPTANCE 12b: PASS — relative-entropy monotonicity, worst violation {worst:.3e}");

    // Conditional-entropy monotonicity H(A|BE) ≤ H(A|B).
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..200 {
        let joint = random::density::<f64>(8, &mut rng);
        let abe = BipartiteState::new(2, 4, joint.clone()).unwrap();
        let h_a_be = conditional_entropy(&abe);
        let ab = DensityMatrix::from_matrix_unchecked(
            joint.matrix().partial_trace(4, 2, Subsystem::A).unwrap(),
        );
        let h_a_b = conditional_entropy(&BipartiteState::new(2, 2, ab).unwrap());
        let violation = h_a_be - h_a_b;
        worst = worst.max(violation);
        assert!(violation <= 1e-9, "conditional entropy grew by {violation:e}");
    }
    println!("ACCEPTANCE 12c: PASS — conditional-entropy monotonicity, worst violation {worst:.3e}");

    // Concavity of S ↦ H(S) - H((Φ ⊗ Id)[purification of S]).
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..200 {
        let d = rng.gen_range(2usize..=4);
        let channel = random::channel::<f64>(d, d, rng.gen_range(2usize..=4), &mut rng);
        let g = |s: &DensityMatrix<f64>| -> f64 {
            von_neumann(s) - entropy_exchange(s, &channel, ExchangeMethod::Purification).unwrap()
        };
        let s1 = random::density::<f64>(d, &mut rng);
        let s2 = random::density::<f64>(d, &mut rng);
        let t: f64 = rng.gen_range(0.0..1.0);
        let mix = DensityMatrix::from_matrix_unchecked(
            s1.matrix().scale_re(t).add(&s2.matrix().scale_re(1.0 - t)),
        );
        let violation = t * g(&s1) + (1.0 - t) * g(&s2) - g(&mix);
        worst = worst.max(violation);
        assert!(violation <= 1e-9, "concavity violated by {violation:e}");
    }
    println!("ACCEPTANCE 12d: PASS — converse-step concavity, worst violation {worst:.3e}");
}
