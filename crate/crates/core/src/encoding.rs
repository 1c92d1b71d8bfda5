//! Construction of encodings that reproduce a family of bipartite states
//! with equal B-marginals from a single shared pure state.
//!
//! Given states `S_AB^i` with `Tr_A S_AB^i = S_B` independent of `i`,
//! there is one pure state `|ψ_AB⟩ = Σ_k √λ_k |e_k^A⟩ ⊗ |e_k^B⟩` (built
//! on the eigendecomposition of `S_B`) and channels `E_A^i` acting on A
//! alone with `(E_A^i ⊗ Id)[ψψ†] = S_AB^i`. The channel matrix elements
//! come from the sandwich `⟨ψ̄^B| S_B^{-1/2} S_AB^i S_B^{-1/2} |φ̄^B⟩`
//! through the antilinear pairing of the `A` basis with the `S_B`
//! eigenbasis; when `S_B` is rank-deficient the inverse square root is
//! generalized and the null sector is routed to the chaotic state, which
//! keeps the map trace-preserving without touching the support.
//!
//! Each encoding is assembled as a Choi matrix and converted to Kraus
//! form by eigendecomposition, so complete positivity is verified for
//! free.

use num_complex::Complex;
use serde::Serialize;

use crate::channel::QuantumChannel;
use crate::entropy::holevo_chi;
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, ComplexMatrix, Subsystem};
use crate::scalar::Real;
use crate::state::{BipartiteState, DensityMatrix, Ensemble, PureState};

/// Marginals must agree entry-wise within this tolerance.
pub const MARGINAL_TOL: f64 = 1e-10;

/// Eigenvalues of `S_B` below `DEGENERACY_THRESHOLD * lambda_max` are
/// treated as exact zeros, activating the generalized-inverse branch.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// A shared pure state with one encoding channel per family member.
#[derive(Debug, Clone)]
pub struct EncodingFamily<T> {
    pub shared: PureState<T>,
    pub encodings: Vec<QuantumChannel<T>>,
    pub source_family: Vec<BipartiteState<T>>,
    /// Smallest Choi eigenvalue over all constructed encodings.
    pub choi_min_eigenvalue: T,
    /// Largest deviation of `Σ A† A` from the identity over the members.
    pub tp_deviation: T,
    /// Whether the generalized-inverse branch was taken.
    pub degenerate: bool,
}

/// Builds the shared state and the encodings for an equal-marginal family.
pub fn construct_encodings<T: Real>(family: &[BipartiteState<T>]) -> Result<EncodingFamily<T>> {
    assert!(!family.is_empty(), "empty family");
    let d = family[0].dim_a();
    if family[0].dim_b() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: family[0].dim_b(),
        });
    }
    for s in family {
        if s.dim_a() != d || s.dim_b() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: s.dim_a(),
            });
        }
    }

    // Common B-marginal.
    let s_b = family[0].marginal(Subsystem::B);
    let mut marginal_dev = T::zero();
    for s in &family[1..] {
        let dev = s.marginal(Subsystem::B).matrix().max_abs_diff(s_b.matrix());
        if dev > marginal_dev {
            marginal_dev = dev;
        }
    }
    if marginal_dev > T::of(MARGINAL_TOL) {
        return Err(Error::UnequalMarginals {
            deviation: marginal_dev.to_f64().unwrap_or(f64::NAN),
        });
    }

    let eig = herm_eig(s_b.matrix())?;
    let lambda_max = eig.eigenvalues.last().copied().unwrap_or(T::zero());
    let threshold = T::of(DEGENERACY_THRESHOLD) * lambda_max;

    // Generalized inverse square root of S_B and the null projector.
    let mut g = ComplexMatrix::zeros(d, d);
    let mut null_proj = ComplexMatrix::zeros(d, d);
    let mut degenerate = false;
    for k in 0..d {
        let lambda = eig.eigenvalues[k];
        let v = eig.eigenvector(k);
        let outer = ComplexMatrix::outer(&v, &v);
        if lambda > threshold {
            g = g.add(&outer.scale_re(T::one() / lambda.sqrt()));
        } else {
            degenerate = true;
            null_proj = null_proj.add(&outer);
        }
    }

    // Shared state: Σ √λ_k |k⟩_A ⊗ |e_k^B⟩, A side in the computational
    // basis paired to the S_B eigenbasis index.
    let mut amps = vec![Complex::new(T::zero(), T::zero()); d * d];
    for k in 0..d {
        let lambda = eig.eigenvalues[k].max(T::zero());
        if lambda == T::zero() {
            continue;
        }
        let c = Complex::new(lambda.sqrt(), T::zero());
        for j in 0..d {
            amps[k * d + j] += c * eig.eigenvectors[(j, k)];
        }
    }
    let norm = crate::linalg::vec_norm(&amps);
    for a in amps.iter_mut() {
        *a /= Complex::new(norm, T::zero());
    }
    let shared = PureState::new(amps)?;

    // Rotation mapping the input-copy factor to the S_B eigenbasis.
    let id_a = ComplexMatrix::<T>::identity(d);
    let basis_rotation = id_a.kron(&eig.eigenvectors);
    let g_ext = id_a.kron(&g);
    let chaotic = ComplexMatrix::identity(d).scale_re(T::one() / T::of_usize(d));
    let null_block = chaotic.kron(&null_proj);

    let mut encodings = Vec::with_capacity(family.len());
    let mut choi_min = T::infinity();
    let mut tp_dev = T::zero();
    for member in family {
        // X = (I ⊗ G) S^i (I ⊗ G) + (I/d) ⊗ P⁰.
        let x = g_ext
            .matmul(member.joint().matrix())
            .matmul(&g_ext)
            .add(&null_block);
        let choi = basis_rotation.adjoint().matmul(&x).matmul(&basis_rotation);
        let choi_eig = herm_eig(&choi)?;
        if choi_eig.eigenvalues[0] < choi_min {
            choi_min = choi_eig.eigenvalues[0];
        }

        // Kraus extraction from the Choi spectrum.
        let gamma_max = choi_eig.eigenvalues.last().copied().unwrap_or(T::zero());
        let kraus_threshold = T::of(DEGENERACY_THRESHOLD) * gamma_max;
        let mut kraus = Vec::new();
        for mu in 0..d * d {
            let gamma = choi_eig.eigenvalues[mu];
            if gamma <= kraus_threshold {
                continue;
            }
            let chi = choi_eig.eigenvector(mu);
            let w = gamma.sqrt();
            kraus.push(ComplexMatrix::from_fn(d, d, |o, i| {
                chi[o * d + i] * Complex::new(w, T::zero())
            }));
        }
        let mut completeness = ComplexMatrix::zeros(d, d);
        for a in &kraus {
            completeness = completeness.add(&a.adjoint().matmul(a));
        }
        let dev = completeness.max_abs_diff(&ComplexMatrix::identity(d));
        if dev > tp_dev {
            tp_dev = dev;
        }
        encodings.push(QuantumChannel::new(kraus, d, d)?);
    }

    Ok(EncodingFamily {
        shared,
        encodings,
        source_family: family.to_vec(),
        choi_min_eigenvalue: choi_min,
        tp_deviation: tp_dev,
        degenerate,
    })
}

impl<T: Real> EncodingFamily<T> {
    /// Largest entry-wise deviation of `(E^i ⊗ Id)[ψψ†]` from the source
    /// member, over all members.
    pub fn verify_reconstruction(&self) -> T {
        let d = self.source_family[0].dim_a();
        let shared_op = self.shared.density().into_matrix();
        let mut worst = T::zero();
        for (enc, member) in self.encodings.iter().zip(&self.source_family) {
            let out = enc.extend_with_identity(d).apply_op(&shared_op);
            let dev = out.max_abs_diff(member.joint().matrix());
            if dev > worst {
                worst = dev;
            }
        }
        worst
    }

    /// Per-member reconstruction errors.
    pub fn reconstruction_errors(&self) -> Vec<T> {
        let d = self.source_family[0].dim_a();
        let shared_op = self.shared.density().into_matrix();
        self.encodings
            .iter()
            .zip(&self.source_family)
            .map(|(enc, member)| {
                enc.extend_with_identity(d)
                    .apply_op(&shared_op)
                    .max_abs_diff(member.joint().matrix())
            })
            .collect()
    }
}

/// Holevo quantity of `{(Φ ⊗ Id)[S^i]}` under `probs` for an
/// equal-marginal family; by the construction above this rate is
/// attainable in the shared-state-plus-encodings formulation.
pub fn reformulated_capacity_bound<T: Real>(
    family: &[BipartiteState<T>],
    probs: &[T],
    channel: &QuantumChannel<T>,
) -> Result<T> {
    assert!(!family.is_empty(), "empty family");
    let d_b = family[0].dim_b();
    let s_b = family[0].marginal(Subsystem::B);
    for s in &family[1..] {
        let dev = s.marginal(Subsystem::B).matrix().max_abs_diff(s_b.matrix());
        if dev > T::of(MARGINAL_TOL) {
            return Err(Error::UnequalMarginals {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let states: Vec<DensityMatrix<T>> = family.iter().map(|s| s.joint().clone()).collect();
    let ensemble = Ensemble::new(probs.to_vec(), states)?;
    holevo_chi(&ensemble, &channel.extend_with_identity(d_b))
}

/// JSON report of the construction diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct EncodingReport {
    pub dim: usize,
    pub members: usize,
    pub degenerate_marginal: bool,
    pub reconstruction_errors: Vec<f64>,
    pub max_reconstruction_error: f64,
    pub choi_min_eigenvalue: f64,
    pub tp_deviation: f64,
    pub reconstruction_tolerance: f64,
    pub pass: bool,
}

/// Tolerance used for the pass/fail verdict on reconstruction.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

/// Tolerance on the smallest admissible Choi eigenvalue.
pub const CHOI_EIGENVALUE_TOL: f64 = -1e-10;

pub fn report<T: Real>(family: &EncodingFamily<T>) -> EncodingReport {
    let errors: Vec<f64> = family
        .reconstruction_errors()
        .into_iter()
        .map(|x| x.to_f64().unwrap_or(f64::NAN))
        .collect();
    let max_err = errors.iter().copied().fold(0.0f64, f64::max);
    let choi_min = family.choi_min_eigenvalue.to_f64().unwrap_or(f64::NAN);
    let tp = family.tp_deviation.to_f64().unwrap_or(f64::NAN);
    EncodingReport {
        dim: family.source_family[0].dim_a(),
        members: family.source_family.len(),
        degenerate_marginal: family.degenerate,
        reconstruction_errors: errors,
        max_reconstruction_error: max_err,
        choi_min_eigenvalue: choi_min,
        tp_deviation: tp,
        reconstruction_tolerance: RECONSTRUCTION_TOL,
        pass: max_err <= RECONSTRUCTION_TOL && choi_min >= CHOI_EIGENVALUE_TOL && tp <= 1e-9,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densecoding::WeylFamily;
    use crate::random;
    use crate::state::max_entangled;
    use num_complex::Complex64;

    fn standard_basis(d: usize) -> Vec<Vec<Complex64>> {
        (0..d)
            .map(|k| {
                let mut v = vec![Complex64::new(0.0, 0.0); d];
                v[k] = Complex64::new(1.0, 0.0);
                v
            })
            .collect()
    }

    #[test]
    fn single_maximally_entangled_member_gives_identity_encoding() {
        let psi = max_entangled(&standard_basis(2)).unwrap();
        let family = vec![BipartiteState::new(2, 2, psi.density()).unwrap()];
        let enc = construct_encodings(&family).unwrap();
        assert!(enc.verify_reconstruction() < 1e-12);
        assert!(!enc.degenerate);
        // The constructed encoding acts as the identity channel.
        let mut rng = random::rng(3);
        let s = random::density::<f64>(2, &mut rng);
        let out = enc.encodings[0].apply(&s).unwrap();
        assert!(out.matrix().max_abs_diff(s.matrix()) < 1e-10);
    }

    #[test]
    fn weyl_signal_family_reconstructs_exactly() {
        let weyl = WeylFamily::<f64>::computational(2, 2).unwrap();
        let family = weyl.signal_states();
        let enc = construct_encodings(&family).unwrap();
        assert!(enc.verify_reconstruction() < 1e-10);
        assert!(enc.choi_min_eigenvalue > -1e-10);
        assert!(enc.tp_deviation < 1e-10);
    }

    #[test]
    fn random_family_round_trip() {
        let mut rng = random::rng(101);
        let family = random::equal_marginal_family::<f64>(2, 5, 2, 2, &mut rng);
        let enc = construct_encodings(&family).unwrap();
        assert!(
            enc.verify_reconstruction() <= 1e-9,
            "reconstruction error {}",
            enc.verify_reconstruction()
        );
        assert!(enc.choi_min_eigenvalue >= -1e-10);
    }

    #[test]
    fn degenerate_marginal_branch() {
        // States supported on a 2-dimensional B-subspace of d = 3.
        let mut rng = random::rng(103);
        let family = random::equal_marginal_family::<f64>(3, 4, 2, 2, &mut rng);
        let enc = construct_encodings(&family).unwrap();
        assert!(enc.degenerate, "rank-deficient marginal must be detected");
        assert!(
            enc.verify_reconstruction() <= 1e-9,
            "reconstruction error {}",
            enc.verify_reconstruction()
        );
        assert!(enc.choi_min_eigenvalue >= -1e-10);
        assert!(enc.tp_deviation <= 1e-9);
    }

    #[test]
    fn unequal_marginals_rejected() {
        let mut rng = random::rng(107);
        let a = random::density::<f64>(4, &mut rng);
        let b = random::density::<f64>(4, &mut rng);
        let family = vec![
            BipartiteState::new(2, 2, a).unwrap(),
            BipartiteState::new(2, 2, b).unwrap(),
        ];
        assert!(matches!(
            construct_encodings(&family),
            Err(Error::UnequalMarginals { .. })
        ));
    }

    #[test]
    fn b_marginal_preserved_through_encoding_and_channel() {
        let mut rng = random::rng(109);
        let family = random::equal_marginal_family::<f64>(2, 3, 2, 2, &mut rng);
        let enc = construct_encodings(&family).unwrap();
        let phi = QuantumChannel::<f64>::depolarizing(2, 0.5).unwrap();
        let shared_op = enc.shared.density().into_matrix();
        let reference = shared_op.partial_trace(2, 2, Subsystem::B).unwrap();
        for e in &enc.encodings {
            let after_enc = e.extend_with_identity(2).apply_op(&shared_op);
            let after_phi = phi.extend_with_identity(2).apply_op(&after_enc);
            let marg = after_phi.partial_trace(2, 2, Subsystem::B).unwrap();
            assert!(marg.max_abs_diff(&reference) < 1e-10);
        }
    }

    #[test]
    fn reformulated_bound_dense_coding_identity() {
        let weyl = WeylFamily::<f64>::computational(2, 2).unwrap();
        let family = weyl.signal_states();
        let probs = vec![0.25f64; 4];
        let ch = QuantumChannel::<f64>::identity(2);
        let chi = reformulated_capacity_bound(&family, &probs, &ch).unwrap();
        assert!((chi - 2.0).abs() < 1e-10);
    }

    #[test]
    fn reformulated_bound_depolarizing_matches_mutual_information() {
        let weyl = WeylFamily::<f64>::computational(2, 2).unwrap();
        let family = weyl.signal_states();
        let probs = vec![0.25f64; 4];
        let ch = QuantumChannel::<f64>::depolarizing(2, 0.5).unwrap();
        let chi = reformulated_capacity_bound(&family, &probs, &ch).unwrap();
        let s = DensityMatrix::<f64>::maximally_mixed(2);
        let mi = crate::entropy::mutual_information(&s, &ch).unwrap();
        assert!((chi - mi).abs() < 1e-9);
    }

    #[test]
    fn reformulated_bound_single_member_is_zero() {
        let mut rng = random::rng(113);
        let family = random::equal_marginal_family::<f64>(2, 1, 2, 2, &mut rng);
        let ch = QuantumChannel::<f64>::depolarizing(2, 0.3).unwrap();
        let chi = reformulated_capacity_bound(&family, &[1.0], &ch).unwrap();
        assert!(chi.abs() < 1e-12);
    }
}
