//! Density matrices, pure states, bipartite structure, purification.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, vec_kron, vec_norm, ComplexMatrix, Subsystem};
use crate::scalar::Real;

/// Tolerance for the density-matrix invariants (Hermiticity, positivity,
/// unit trace).
pub const STATE_TOL: f64 = 1e-10;

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone)]
pub struct DensityMatrix<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates all three state invariants, reporting the first failure.
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let tol = T::of(STATE_TOL);
        let dev = matrix.hermiticity_deviation();
        if dev > tol {
            return Err(Error::NotHermitian {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
            });
        }
        let trace = matrix.trace().re;
        if (trace - T::one()).abs() > tol {
            return Err(Error::TraceNotOne {
                trace: trace.to_f64().unwrap_or(f64::NAN),
            });
        }
        let eig = herm_eig(&matrix)?;
        let min = eig.eigenvalues[0];
        if min < -tol {
            return Err(Error::NotPositive {
                min_eigenvalue: min.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix that is a valid state by construction (e.g. the
    /// output of a trace-preserving channel on a valid state). The full
    /// invariants are exercised by the test suite instead.
    pub fn from_matrix_unchecked(matrix: ComplexMatrix<T>) -> Self {
        debug_assert!(matrix.is_square());
        Self { matrix }
    }

    /// Chaotic state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_re(T::one() / T::of_usize(dim)),
        }
    }

    /// Computational basis state `|k⟩⟨k|`.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(k, k)] = Complex::new(T::one(), T::zero());
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    /// Eigenvalues clipped to `[0, 1]` against PSD noise, ascending.
    pub fn spectrum(&self) -> Vec<T> {
        let eig = herm_eig(&self.matrix).expect("density matrix is Hermitian");
        eig.eigenvalues
            .into_iter()
            .map(|x| if x < T::zero() { T::zero() } else { x })
            .collect()
    }

    /// Purification `|ψ⟩ = Σ_k √λ_k |v_k⟩ ⊗ |k⟩` on `dim²`, with the
    /// reference factor in the computational basis. Tracing out the
    /// reference (B) factor returns the state.
    pub fn purify(&self) -> PureState<T> {
        let d = self.dim();
        let eig = herm_eig(&self.matrix).expect("density matrix is Hermitian");
        let mut amps = vec![Complex::new(T::zero(), T::zero()); d * d];
        for k in 0..d {
            let lambda = eig.eigenvalues[k].max(T::zero());
            if lambda == T::zero() {
                continue;
            }
            let c = Complex::new(lambda.sqrt(), T::zero());
            for i in 0..d {
                amps[i * d + k] = c * eig.eigenvectors[(i, k)];
            }
        }
        PureState { amplitudes: amps }
    }
}

/// Unit vector in a finite-dimensional Hilbert space.
#[derive(Debug, Clone)]
pub struct PureState<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> PureState<T> {
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if (norm - T::one()).abs() > T::of(1e-12) {
            return Err(Error::NotUnitNorm {
                norm: norm.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { amplitudes })
    }

    pub fn basis_vector(dim: usize, k: usize) -> Self {
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
        amplitudes[k] = Complex::new(T::one(), T::zero());
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    /// `|ψ⟩⟨ψ|` as a density matrix.
    pub fn density(&self) -> DensityMatrix<T> {
        DensityMatrix {
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
        }
    }
}

/// State on a two-factor Hilbert space, A-first index convention.
#[derive(Debug, Clone)]
pub struct BipartiteState<T> {
    dim_a: usize,
    dim_b: usize,
    joint: DensityMatrix<T>,
}

impl<T: Real> BipartiteState<T> {
    pub fn new(dim_a: usize, dim_b: usize, joint: DensityMatrix<T>) -> Result<Self> {
        if joint.dim() != dim_a * dim_b {
            return Err(Error::DimensionMismatch {
                expected: dim_a * dim_b,
                got: joint.dim(),
            });
        }
        Ok(Self { dim_a, dim_b, joint })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn joint(&self) -> &DensityMatrix<T> {
        &self.joint
    }

    /// Reduced state of the kept subsystem.
    pub fn marginal(&self, keep: Subsystem) -> DensityMatrix<T> {
        let m = self
            .joint
            .matrix()
            .partial_trace(self.dim_a, self.dim_b, keep)
            .expect("joint dimensions are consistent");
        DensityMatrix::from_matrix_unchecked(m)
    }
}

/// Probability vector paired with a list of states.
#[derive(Debug, Clone)]
pub struct Ensemble<T> {
    probs: Vec<T>,
    states: Vec<DensityMatrix<T>>,
}

impl<T: Real> Ensemble<T> {
    pub fn new(probs: Vec<T>, states: Vec<DensityMatrix<T>>) -> Result<Self> {
        if probs.len() != states.len() {
            return Err(Error::InvalidProbabilities {
                reason: format!("{} probabilities for {} states", probs.len(), states.len()),
            });
        }
        if probs.iter().any(|&p| p < -T::of(1e-12)) {
            return Err(Error::InvalidProbabilities {
                reason: "negative probability".into(),
            });
        }
        let total: T = probs.iter().copied().fold(T::zero(), |a, b| a + b);
        if (total - T::one()).abs() > T::of(1e-10) {
            return Err(Error::InvalidProbabilities {
                reason: format!("probabilities sum to {total}"),
            });
        }
        if let Some(first) = states.first() {
            let d = first.dim();
            if states.iter().any(|s| s.dim() != d) {
                return Err(Error::DimensionMismatch { expected: d, got: 0 });
            }
        }
        Ok(Self { probs, states })
    }

    /// Uniform ensemble over the given states.
    pub fn uniform(states: Vec<DensityMatrix<T>>) -> Result<Self> {
        let p = T::one() / T::of_usize(states.len());
        Self::new(vec![p; states.len()], states)
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn states(&self) -> &[DensityMatrix<T>] {
        &self.states
    }

    /// Ensemble average `Σ π_i S_i`.
    pub fn average(&self) -> DensityMatrix<T> {
        let d = self.states[0].dim();
        let mut acc = ComplexMatrix::zeros(d, d);
        for (p, s) in self.probs.iter().zip(&self.states) {
            acc = acc.add(&s.matrix().scale_re(*p));
        }
        DensityMatrix::from_matrix_unchecked(acc)
    }
}

/// Maximally entangled state `(1/√m) Σ_k e_k ⊗ e_k` built on an
/// orthonormal system `e_1..e_m` in dimension `d`, living on `d²`.
///
/// Each marginal equals `P/m`, where `P` projects onto the span.
pub fn max_entangled<T: Real>(basis: &[Vec<Complex<T>>]) -> Result<PureState<T>> {
    let m = basis.len();
    assert!(m > 0, "empty basis");
    let d = basis[0].len();
    let dev = orthonormality_deviation(basis);
    if dev > T::of(1e-10) {
        return Err(Error::NotOrthonormal {
            deviation: dev.to_f64().unwrap_or(f64::NAN),
        });
    }
    let mut amps = vec![Complex::new(T::zero(), T::zero()); d * d];
    let c = Complex::new(T::one() / T::of_usize(m).sqrt(), T::zero());
    for e in basis {
        let term = vec_kron(e, e);
        for (a, t) in amps.iter_mut().zip(term) {
            *a += c * t;
        }
    }
    Ok(PureState { amplitudes: amps })
}

/// Largest deviation of the Gram matrix of `vectors` from the identity.
pub fn orthonormality_deviation<T: Real>(vectors: &[Vec<Complex<T>>]) -> T {
    let mut dev = T::zero();
    for (i, u) in vectors.iter().enumerate() {
        for (j, v) in vectors.iter().enumerate() {
            let g = crate::linalg::inner(u, v);
            let target = if i == j { T::one() } else { T::zero() };
            let d = (g - Complex::new(target, T::zero())).norm();
            if d > dev {
                dev = d;
            }
        }
    }
    dev
}
