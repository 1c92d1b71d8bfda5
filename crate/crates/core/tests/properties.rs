//! Property tests for the structural invariants of the kernel types.

use num_complex::Complex64;
use proptest::prelude::*;

use qcap_core::entropy::von_neumann;
use qcap_core::linalg::{herm_eig, ComplexMatrix, Subsystem};
use qcap_core::state::{BipartiteState, DensityMatrix};

fn complex_entries(len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), len)
}

/// Hermitian matrix of the given dimension from arbitrary entries.
fn hermitian(dim: usize) -> impl Strategy<Value = ComplexMatrix<f64>> {
    complex_entries(dim * dim).prop_map(move |entries| {
        let raw = ComplexMatrix::from_pairs(dim, dim, &entries).unwrap();
        raw.add(&raw.adjoint()).scale_re(0.5)
    })
}

/// Density matrix of the given dimension from arbitrary entries.
fn density(dim: usize) -> impl Strategy<Value = DensityMatrix<f64>> {
    complex_entries(dim * dim).prop_map(move |entries| {
        let g = ComplexMatrix::from_pairs(dim, dim, &entries).unwrap();
        let psd = g
            .matmul(&g.adjoint())
            .add(&ComplexMatrix::identity(dim).scale_re(1e-6));
        let tr = psd.trace().re;
        DensityMatrix::new(psd.scale_re(1.0 / tr)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigendecomposition_reconstructs_and_is_unitary(
        m in (1usize..=10).prop_flat_map(hermitian)
    ) {
        let n = m.rows();
        let eig = herm_eig(&m).unwrap();
        let scale = m.max_abs_entry().max(1.0);
        prop_assert!(eig.reconstruct().max_abs_diff(&m) < 1e-12 * scale);
        let vtv = eig.eigenvectors.adjoint().matmul(&eig.eigenvectors);
        prop_assert!(vtv.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-12);
        for w in eig.eigenvalues.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn kron_mixed_product(
        a in complex_entries(4),
        b in complex_entries(9),
        c in complex_entries(4),
        d in complex_entries(9),
    ) {
        let a = ComplexMatrix::from_pairs(2, 2, &a).unwrap();
        let b = ComplexMatrix::from_pairs(3, 3, &b).unwrap();
        let c = ComplexMatrix::from_pairs(2, 2, &c).unwrap();
        let d = ComplexMatrix::from_pairs(3, 3, &d).unwrap();
        let lhs = a.kron(&b).matmul(&c.kron(&d));
        let rhs = a.matmul(&c).kron(&b.matmul(&d));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }

    #[test]
    fn partial_trace_preserves_trace_and_composes(m in hermitian(6)) {
        let full = m.trace();
        for keep in [Subsystem::A, Subsystem::B] {
            let pt = m.partial_trace(2, 3, keep).unwrap();
            prop_assert!((pt.trace() - full).norm() < 1e-12);
        }
    }

    #[test]
    fn entropy_within_bounds_and_purification_round_trips(
        s in (2usize..=5).prop_flat_map(density)
    ) {
        let d = s.dim();
        let h = von_neumann(&s);
        prop_assert!(h >= -1e-12);
        prop_assert!(h <= (d as f64).log2() + 1e-12);

        let joint = BipartiteState::new(d, d, s.purify().density()).unwrap();
        let marginal = joint.marginal(Subsystem::A);
        prop_assert!(marginal.matrix().max_abs_diff(s.matrix()) < 1e-10);
    }

    #[test]
    fn typical_set_size_equals_brute_force(
        l1 in 0.05f64..0.95,
        n in 4usize..=9,
        delta in 0.02f64..0.4,
    ) {
        use qcap_core::typicality::{strongly_typical_set, Spectrum, BOUNDARY_GUARD};
        let probs = vec![l1, 1.0 - l1];
        let sp = Spectrum::new(probs.clone()).unwrap();
        let set = strongly_typical_set(&sp, n, delta).unwrap();
        let mut count = 0u128;
        for code in 0..(1u64 << n) {
            let ones = (code & ((1 << n) - 1)).count_ones() as usize;
            let zeros = n - ones;
            let ok = (zeros as f64 / n as f64 - probs[0]).abs() < delta - BOUNDARY_GUARD
                && (ones as f64 / n as f64 - probs[1]).abs() < delta - BOUNDARY_GUARD;
            if ok {
                count += 1;
            }
        }
        prop_assert_eq!(set.d_n_delta, count);
    }
}
