//! The entropy calculus, all base-2 (bits): von Neumann entropy,
//! relative entropy, conditional entropy, entropy exchange (two
//! independent methods), quantum mutual information, Holevo quantity.


use crate::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, ComplexMatrix, Subsystem};
use crate::scalar::Real;
use crate::state::{BipartiteState, DensityMatrix, Ensemble};

/// Eigenvalues in `[-CLIP_TOL, 0]` are clipped to zero before entropy;
/// PSD noise must not produce NaN.
pub const CLIP_TOL: f64 = 1e-10;

/// An S-eigenvector with eigenvalue above this counts toward the support
/// in the relative-entropy domain test.
pub const SUPPORT_EIGENVALUE_TOL: f64 = 1e-10;

/// T-expectations below this declare an S-eigenvector outside supp(T).
pub const SUPPORT_EXPECTATION_TOL: f64 = 1e-12;

/// How the entropy exchange is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExchangeMethod {
    /// Entropy of the Kraus Gram matrix `W_ij = Tr(S A_j† A_i)`.
    Gram,
    /// Output entropy of `(Φ ⊗ Id_R)` on a purification of `S`.
    Purification,
}

/// Shannon entropy of a nonnegative vector (bits). Entries in
/// `[-CLIP_TOL, 0]` are treated as exact zeros.
pub fn shannon<T: Real>(probs: &[T]) -> T {
    let mut h = T::zero();
    for &p in probs {
        if p > T::zero() {
            h -= p * p.log2();
        }
    }
    h
}

/// Von Neumann entropy `H(S) = -Σ λ_j log₂ λ_j`, in `[0, log₂ d]`.
pub fn von_neumann<T: Real>(s: &DensityMatrix<T>) -> T {
    shannon(&s.spectrum()).max(T::zero())
}

/// Entropy of a Hermitian PSD unit-trace operator given as a raw matrix.
pub fn matrix_entropy<T: Real>(m: &ComplexMatrix<T>) -> T {
    let eig = herm_eig(&m.symmetrize()).expect("entropy of Hermitian operator");
    let clipped: Vec<T> = eig
        .eigenvalues
        .iter()
        .map(|&x| if x < T::zero() { T::zero() } else { x })
        .collect();
    shannon(&clipped).max(T::zero())
}

/// Relative entropy `H(S|T) = Tr S (log₂ S - log₂ T)`, `+∞` when
/// `supp(S) ⊄ supp(T)`. Always ≥ 0; infinity is a value, not an error.
pub fn relative_entropy<T: Real>(s: &DensityMatrix<T>, t: &DensityMatrix<T>) -> T {
    assert_eq!(s.dim(), t.dim(), "relative entropy needs equal dimensions");
    let eig_s = herm_eig(s.matrix()).expect("state is Hermitian");
    let eig_t = herm_eig(t.matrix()).expect("state is Hermitian");
    let n = s.dim();

    let mut result = T::zero();
    // Tr S log S on the support of S.
    for &lambda in &eig_s.eigenvalues {
        if lambda > T::zero() {
            result += lambda * lambda.log2();
        }
    }
    // -Tr S log T via overlaps; support test per eigenvector of S.
    for i in 0..n {
        let lambda = eig_s.eigenvalues[i];
        if lambda <= T::of(SUPPORT_EIGENVALUE_TOL) {
            continue;
        }
        let u = eig_s.eigenvector(i);
        let mut t_expectation = T::zero();
        let mut cross = T::zero();
        for j in 0..n {
            let mu = eig_t.eigenvalues[j].max(T::zero());
            let v = eig_t.eigenvector(j);
            let overlap = crate::linalg::inner(&v, &u).norm_sqr();
            t_expectation += mu * overlap;
            if mu > T::zero() {
                cross += overlap * mu.log2();
            }
        }
        if t_expectation < T::of(SUPPORT_EXPECTATION_TOL) {
            return T::infinity();
        }
        result -= lambda * cross;
    }
    result.max(T::zero())
}

/// Conditional entropy `H(A|B) = H(AB) - H(B)`; negative for
/// sufficiently entangled states.
pub fn conditional_entropy<T: Real>(s_ab: &BipartiteState<T>) -> T {
    let h_ab = von_neumann(s_ab.joint());
    let h_b = von_neumann(&s_ab.marginal(Subsystem::B));
    h_ab - h_b
}

/// Entropy exchange `H(S; Φ)`: entropy acquired by the environment.
///
/// `Gram` builds the k×k matrix `W_ij = Tr(S A_j† A_i)` over the Kraus
/// operators (PSD with unit trace for any Kraus representation);
/// `Purification` applies `Φ ⊗ Id_R` to a purification of `S`. The two
/// agree for every channel and state.
pub fn entropy_exchange<T: Real>(
    s: &DensityMatrix<T>,
    channel: &QuantumChannel<T>,
    method: ExchangeMethod,
) -> Result<T> {
    if s.dim() != channel.dim_in() {
        return Err(Error::DimensionMismatch {
            expected: channel.dim_in(),
            got: s.dim(),
        });
    }
    match method {
        ExchangeMethod::Gram => {
            let k = channel.kraus().len();
            let mut w = ComplexMatrix::zeros(k, k);
            for i in 0..k {
                for j in 0..k {
                    let prod = channel.kraus()[j].adjoint().matmul(&channel.kraus()[i]);
                    w[(i, j)] = s.matrix().trace_product(&prod);
                }
            }
            Ok(matrix_entropy(&w))
        }
        ExchangeMethod::Purification => {
            let d = s.dim();
            let psi = s.purify();
            let extended = channel.extend_with_identity(d);
            let out = extended.apply_op(psi.density().matrix());
            Ok(matrix_entropy(&out))
        }
    }
}

/// Quantum mutual information `I(S; Φ) = H(S) + H(Φ(S)) - H(S; Φ)` ≥ 0.
pub fn mutual_information<T: Real>(s: &DensityMatrix<T>, channel: &QuantumChannel<T>) -> Result<T> {
    let out = channel.apply(s)?;
    let exchange = entropy_exchange(s, channel, ExchangeMethod::Gram)?;
    Ok(von_neumann(s) + von_neumann(&out) - exchange)
}

/// Holevo quantity of the ensemble pushed through the channel:
/// `χ = H(Φ[Σ π_i S_i]) - Σ π_i H(Φ[S_i])` ≥ 0 by concavity.
pub fn holevo_chi<T: Real>(ensemble: &Ensemble<T>, channel: &QuantumChannel<T>) -> Result<T> {
    let avg_out = channel.apply(&ensemble.average())?;
    let mut mean_h = T::zero();
    for (p, s) in ensemble.probs().iter().zip(ensemble.states()) {
        mean_h += *p * von_neumann(&channel.apply(s)?);
    }
    Ok(von_neumann(&avg_out) - mean_h)
}
