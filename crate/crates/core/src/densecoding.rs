//! Discrete Weyl operators on a projection subspace and verification of
//! the dense-coding achievability rate.
//!
//! On an orthonormal system `e_1..e_m` inside dimension `d`, the cyclic
//! shift `U` and the phase operator `V` generate `m²` unitaries
//! `W_αβ = U^α V^β` acting as the identity on the orthogonal complement
//! of the span. Conjugating one maximally entangled state by `W_αβ ⊗ I`
//! yields an orthonormal signal family whose uniform mixture is
//! `P/m ⊗ P/m`; transmitting it through a channel achieves the quantum
//! mutual information of the chaotic subspace state.

use num_complex::Complex;
use serde::Serialize;

use crate::channel::QuantumChannel;
use crate::entropy::{holevo_chi, mutual_information};
use crate::error::{Error, Result};
use crate::linalg::{projector_from_columns, ComplexMatrix};
use crate::scalar::Real;
use crate::state::{max_entangled, orthonormality_deviation, BipartiteState, DensityMatrix, Ensemble, PureState};

/// Deviation tolerance for the two structural properties.
pub const PROPERTY_TOL: f64 = 1e-12;

/// Tolerance for the Holevo-vs-mutual-information rate equality.
pub const RATE_TOL: f64 = 1e-9;

/// The `m²` discrete Weyl operators built on an orthonormal system.
#[derive(Debug, Clone)]
pub struct WeylFamily<T> {
    dim: usize,
    m: usize,
    basis: Vec<Vec<Complex<T>>>,
    /// Row-major by (α-1, β-1), α, β ∈ 1..m.
    operators: Vec<ComplexMatrix<T>>,
}

impl<T: Real> WeylFamily<T> {
    /// Builds the family on the given orthonormal system.
    ///
    /// `V e_k = exp(2πik/m) e_k` and `U e_k = e_{k+1 (mod m)}` with the
    /// index wrapping m → 1; both act as the identity on the orthogonal
    /// complement of the span.
    pub fn new(basis: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let m = basis.len();
        assert!(m > 0, "empty basis");
        let dim = basis[0].len();
        let dev = orthonormality_deviation(&basis);
        if dev > T::of(1e-10) {
            return Err(Error::NotOrthonormal {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
            });
        }

        let projector = projector_from_columns(dim, &basis);
        let complement = ComplexMatrix::identity(dim).sub(&projector);

        // U = Σ_k |e_{k+1}⟩⟨e_k| + (I - P)
        let mut shift = complement.clone();
        for k in 0..m {
            let next = (k + 1) % m;
            let outer = ComplexMatrix::outer(&basis[next], &basis[k]);
            shift = shift.add(&outer);
        }
        // V = Σ_k exp(2πik/m) |e_k⟩⟨e_k| + (I - P), k = 1..m as printed.
        let mut phase = complement;
        for k in 0..m {
            let angle = T::of(2.0) * T::PI() * T::of_usize(k + 1) / T::of_usize(m);
            let factor = Complex::from_polar(T::one(), angle);
            let outer = ComplexMatrix::outer(&basis[k], &basis[k]).scale(factor);
            phase = phase.add(&outer);
        }

        let shift_powers = powers(&shift, m);
        let phase_powers = powers(&phase, m);
        let mut operators = Vec::with_capacity(m * m);
        for alpha in 1..=m {
            for beta in 1..=m {
                operators.push(shift_powers[alpha].matmul(&phase_powers[beta]));
            }
        }

        Ok(Self {
            dim,
            m,
            basis,
            operators,
        })
    }

    /// Family on the first `m` computational basis vectors of dimension `d`.
    pub fn computational(m: usize, d: usize) -> Result<Self> {
        assert!(m >= 1 && m <= d, "need 1 <= m <= d");
        let basis = (0..m)
            .map(|k| {
                let mut v = vec![Complex::new(T::zero(), T::zero()); d];
                v[k] = Complex::new(T::one(), T::zero());
                v
            })
            .collect();
        Self::new(basis)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<Complex<T>>] {
        &self.basis
    }

    /// `W_αβ`, 1-based indices as printed.
    pub fn op(&self, alpha: usize, beta: usize) -> &ComplexMatrix<T> {
        &self.operators[(alpha - 1) * self.m + (beta - 1)]
    }

    pub fn operators(&self) -> &[ComplexMatrix<T>] {
        &self.operators
    }

    /// Projector onto the span of the basis.
    pub fn projector(&self) -> ComplexMatrix<T> {
        projector_from_columns(self.dim, &self.basis)
    }

    /// The shared state `(1/√m) Σ e_k ⊗ e_k`.
    pub fn shared_state(&self) -> PureState<T> {
        max_entangled(&self.basis).expect("basis already validated")
    }

    /// Signal states `(W_αβ ⊗ I) |ψ⟩⟨ψ| (W_αβ ⊗ I)†` in row-major (α, β) order.
    pub fn signal_states(&self) -> Vec<BipartiteState<T>> {
        let psi = self.shared_state();
        let rho = psi.density().into_matrix();
        let id = ComplexMatrix::identity(self.dim);
        self.operators
            .iter()
            .map(|w| {
                let wi = w.kron(&id);
                let out = wi.matmul(&rho).matmul(&wi.adjoint());
                BipartiteState::new(self.dim, self.dim, DensityMatrix::from_matrix_unchecked(out))
                    .expect("square of matching dimension")
            })
            .collect()
    }

    /// Max deviation of each `W_αβ` from unitarity.
    pub fn unitarity_deviation(&self) -> T {
        let id = ComplexMatrix::identity(self.dim);
        self.operators
            .iter()
            .map(|w| w.adjoint().matmul(w).max_abs_diff(&id))
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Property 1: the m² vectors `(W_αβ ⊗ I)|ψ⟩` are orthonormal.
    /// Returns the largest Gram-matrix deviation from the identity.
    pub fn property1_deviation(&self) -> T {
        let psi = self.shared_state();
        let id = ComplexMatrix::identity(self.dim);
        let vectors: Vec<Vec<Complex<T>>> = self
            .operators
            .iter()
            .map(|w| w.kron(&id).matvec(psi.amplitudes()))
            .collect();
        orthonormality_deviation(&vectors)
    }

    /// Property 2: `Σ_αβ (W ⊗ I)|ψ⟩⟨ψ|(W ⊗ I)† = P ⊗ P`.
    /// Returns the largest entry-wise deviation.
    pub fn property2_deviation(&self) -> T {
        let d2 = self.dim * self.dim;
        let mut sum = ComplexMatrix::zeros(d2, d2);
        for s in self.signal_states() {
            sum = sum.add(s.joint().matrix());
        }
        let p = self.projector();
        sum.max_abs_diff(&p.kron(&p))
    }
}

fn powers<T: Real>(m: &ComplexMatrix<T>, up_to: usize) -> Vec<ComplexMatrix<T>> {
    let mut out = Vec::with_capacity(up_to + 1);
    out.push(ComplexMatrix::identity(m.rows()));
    for k in 1..=up_to {
        let next = out[k - 1].matmul(m);
        out.push(next);
    }
    out
}

/// Achievable rate of the subspace dense-coding protocol through `Φ`.
///
/// `chi` is the Holevo quantity of the uniform signal ensemble pushed
/// through `Φ ⊗ Id`; `mi` is `I(P/m; Φ)`. The two are equal: the average
/// signal state is `P/m ⊗ P/m` and every signal purifies `P/m`, so the
/// output entropies in the Holevo functional collapse to the mutual
/// information of the chaotic subspace state.
#[derive(Debug, Clone, Copy)]
pub struct DenseCodingRate<T> {
    pub chi: T,
    pub mi: T,
}

pub fn densecoding_rate<T: Real>(
    channel: &QuantumChannel<T>,
    weyl: &WeylFamily<T>,
) -> Result<DenseCodingRate<T>> {
    if channel.dim_in() != weyl.dim() {
        return Err(Error::DimensionMismatch {
            expected: weyl.dim(),
            got: channel.dim_in(),
        });
    }
    let signals = weyl.signal_states();
    let states: Vec<DensityMatrix<T>> = signals.into_iter().map(|s| s.joint().clone()).collect();
    let ensemble = Ensemble::uniform(states)?;
    let extended = channel.extend_with_identity(weyl.dim());
    let chi = holevo_chi(&ensemble, &extended)?;

    let m = T::of_usize(weyl.m());
    let subspace_state =
        DensityMatrix::from_matrix_unchecked(weyl.projector().scale_re(T::one() / m));
    let mi = mutual_information(&subspace_state, channel)?;
    Ok(DenseCodingRate { chi, mi })
}

/// JSON verification report: per-property max deviation and pass/fail.
#[derive(Debug, Clone, Serialize)]
pub struct DenseCodingReport {
    pub d: usize,
    pub m: usize,
    pub unitarity_deviation: f64,
    pub property1_deviation: f64,
    pub property2_deviation: f64,
    pub property_tolerance: f64,
    pub chi_bits: f64,
    pub mi_bits: f64,
    pub rate_equality_deviation: f64,
    pub rate_tolerance: f64,
    pub pass: bool,
}

/// Runs every check of the family against `channel` and assembles the report.
pub fn verify<T: Real>(
    channel: &QuantumChannel<T>,
    weyl: &WeylFamily<T>,
) -> Result<DenseCodingReport> {
    let unit = weyl.unitarity_deviation();
    let p1 = weyl.property1_deviation();
    let p2 = weyl.property2_deviation();
    let rate = densecoding_rate(channel, weyl)?;
    let rate_dev = (rate.chi - rate.mi).abs();
    let pass = unit <= T::of(PROPERTY_TOL)
        && p1 <= T::of(PROPERTY_TOL)
        && p2 <= T::of(PROPERTY_TOL)
        && rate_dev <= T::of(RATE_TOL);
    Ok(DenseCodingReport {
        d: weyl.dim(),
        m: weyl.m(),
        unitarity_deviation: unit.to_f64().unwrap_or(f64::NAN),
        property1_deviation: p1.to_f64().unwrap_or(f64::NAN),
        property2_deviation: p2.to_f64().unwrap_or(f64::NAN),
        property_tolerance: PROPERTY_TOL,
        chi_bits: rate.chi.to_f64().unwrap_or(f64::NAN),
        mi_bits: rate.mi.to_f64().unwrap_or(f64::NAN),
        rate_equality_deviation: rate_dev.to_f64().unwrap_or(f64::NAN),
        rate_tolerance: RATE_TOL,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    #[test]
    fn qubit_family_matches_shift_and_phase_matrices() {
        let w = WeylFamily::<f64>::computational(2, 2).unwrap();
        // U: |e_1⟩ → |e_2⟩, |e_2⟩ → |e_1⟩ is the Pauli X; V has phases
        // exp(2πik/2) = (-1)^k: diag(-1, 1).
        let u = w.op(1, 2); // U^1 V^2 = U (V² = I on the subspace)
        let x = ComplexMatrix::from_pairs(2, 2, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)])
            .unwrap();
        assert!(u.max_abs_diff(&x) < 1e-14);
        let v = w.op(2, 1); // U² V = V
        let z = ComplexMatrix::from_pairs(2, 2, &[(-1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)])
            .unwrap();
        assert!(v.max_abs_diff(&z) < 1e-12);
        // Hilbert-Schmidt orthogonality of distinct operators.
        let hs = w.op(1, 1).adjoint().matmul(w.op(1, 2)).trace();
        assert!(hs.norm() < 1e-12);
    }

    #[test]
    fn w_mm_is_identity() {
        for (m, d) in [(2usize, 2usize), (2, 3), (3, 3)] {
            let w = WeylFamily::<f64>::computational(m, d).unwrap();
            assert!(w.op(m, m).max_abs_diff(&ComplexMatrix::identity(d)) < 1e-12);
        }
    }

    #[test]
    fn operators_fix_orthogonal_complement() {
        let w = WeylFamily::<f64>::computational(2, 3).unwrap();
        let e3 = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        for op in w.operators() {
            let out = op.matvec(&e3);
            for (a, b) in out.iter().zip(&e3) {
                assert!((a - b).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn hilbert_schmidt_orthogonality_table() {
        // Brute force over all pairs at m = 3: Tr(P W†_i W_j P) = m δ_ij.
        let w = WeylFamily::<f64>::computational(3, 3).unwrap();
        let p = w.projector();
        for (i, wi) in w.operators().iter().enumerate() {
            for (j, wj) in w.operators().iter().enumerate() {
                let t = p.matmul(&wi.adjoint()).matmul(wj).matmul(&p).trace();
                let expected = if i == j { 3.0 } else { 0.0 };
                assert!(
                    (t - Complex64::new(expected, 0.0)).norm() < 1e-12,
                    "pair ({i},{j}): {t}"
                );
            }
        }
    }

    #[test]
    fn unitarity_of_every_operator() {
        for (m, d) in [(2usize, 2usize), (2, 3), (3, 3), (3, 4)] {
            let w = WeylFamily::<f64>::computational(m, d).unwrap();
            assert!(w.unitarity_deviation() < 1e-12, "(m,d)=({m},{d})");
        }
    }

    #[test]
    fn property_1_gram_identity() {
        for (m, d) in [(2usize, 2usize), (2, 3), (3, 3)] {
            let w = WeylFamily::<f64>::computational(m, d).unwrap();
            assert!(w.property1_deviation() <= 1e-12, "(m,d)=({m},{d})");
        }
    }

    #[test]
    fn property_2_sum_is_projector_product() {
        for (m, d) in [(2usize, 2usize), (2, 3), (3, 3)] {
            let w = WeylFamily::<f64>::computational(m, d).unwrap();
            assert!(w.property2_deviation() <= 1e-12, "(m,d)=({m},{d})");
        }
        // m = 1: the single signal is |e₁e₁⟩⟨e₁e₁| = P ⊗ P itself.
        let w1 = WeylFamily::<f64>::computational(1, 2).unwrap();
        assert!(w1.property2_deviation() <= 1e-14);
    }

    #[test]
    fn property_2_rank_on_subspace() {
        let w = WeylFamily::<f64>::computational(2, 3).unwrap();
        let p = w.projector();
        let pp = p.kron(&p);
        // Rank of P⊗P is m² = 4.
        assert_relative_eq!(pp.trace().re, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn signal_states_share_the_subspace_marginal() {
        let w = WeylFamily::<f64>::computational(2, 3).unwrap();
        let target = w.projector().scale_re(0.5);
        for s in w.signal_states() {
            let marg = s.marginal(crate::linalg::Subsystem::B);
            assert!(marg.matrix().max_abs_diff(&target) < 1e-12);
        }
    }

    #[test]
    fn rate_identity_channel_standard_dense_coding() {
        let w = WeylFamily::<f64>::computational(2, 2).unwrap();
        let ch = QuantumChannel::<f64>::identity(2);
        let r = densecoding_rate(&ch, &w).unwrap();
        assert_relative_eq!(r.chi, 2.0, epsilon = 1e-10);
        assert_relative_eq!(r.mi, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn rate_depolarizing_matches_chaotic_mutual_information() {
        let w = WeylFamily::<f64>::computational(2, 2).unwrap();
        let ch = QuantumChannel::<f64>::depolarizing(2, 0.5).unwrap();
        let r = densecoding_rate(&ch, &w).unwrap();
        let s = DensityMatrix::<f64>::maximally_mixed(2);
        let mi = mutual_information(&s, &ch).unwrap();
        assert_relative_eq!(r.chi, mi, epsilon = 1e-9);
        assert_relative_eq!(r.mi, mi, epsilon = 1e-12);
    }

    #[test]
    fn rate_equality_on_random_channels_with_subspace() {
        let mut rng = random::rng(61);
        for _ in 0..10 {
            let ch = random::channel::<f64>(3, 3, 3, &mut rng);
            let w = WeylFamily::<f64>::computational(2, 3).unwrap();
            let r = densecoding_rate(&ch, &w).unwrap();
            assert!((r.chi - r.mi).abs() <= 1e-9, "chi={}, mi={}", r.chi, r.mi);
        }
    }

    #[test]
    fn rejects_non_orthonormal_basis() {
        let basis = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ];
        assert!(matches!(
            WeylFamily::new(basis),
            Err(crate::error::Error::NotOrthonormal { .. })
        ));
    }
}
