//! Quantum channels in Kraus form: construction, validation, application,
//! tensoring, duals, and the named channels (identity, depolarizing,
//! unital qubit).


use crate::densecoding::WeylFamily;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;
use crate::state::DensityMatrix;

/// Tolerance for the Kraus completeness sum `Σ A_i† A_i = I`.
pub const CHANNEL_TOL: f64 = 1e-10;

/// Largest output dimension for which `tensor_power` materializes the
/// full Kraus family.
pub const TENSOR_POWER_DIM_LIMIT: usize = 4096;

/// Validated depolarizing-channel parameters: complete positivity
/// requires `0 ≤ p ≤ d²/(d²-1)`.
#[derive(Debug, Clone, Copy)]
pub struct DepolarizingParams<T> {
    pub d: usize,
    pub p: T,
}

impl<T: Real> DepolarizingParams<T> {
    pub fn new(d: usize, p: T) -> Result<Self> {
        assert!(d >= 2, "depolarizing channel needs d >= 2");
        let p_max = Self::p_max(d);
        if p < T::zero() || p > p_max + T::of(1e-15) {
            return Err(Error::ParamOutOfRange {
                name: "p",
                value: p.to_f64().unwrap_or(f64::NAN),
                min: 0.0,
                max: p_max.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { d, p })
    }

    /// Largest admissible parameter, `d²/(d²-1)`.
    pub fn p_max(d: usize) -> T {
        let dd = T::of_usize(d * d);
        dd / (dd - T::one())
    }
}

/// Completely positive trace-preserving map given by Kraus operators.
#[derive(Debug, Clone)]
pub struct QuantumChannel<T> {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix<T>>,
}

impl<T: Real> QuantumChannel<T> {
    /// Validates operator shapes and trace preservation.
    pub fn new(kraus: Vec<ComplexMatrix<T>>, dim_in: usize, dim_out: usize) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::NotTracePreserving { deviation: 1.0 });
        }
        for a in &kraus {
            if a.rows() != dim_out || a.cols() != dim_in {
                return Err(Error::DimensionMismatch {
                    expected: dim_out * dim_in,
                    got: a.rows() * a.cols(),
                });
            }
        }
        let mut sum = ComplexMatrix::zeros(dim_in, dim_in);
        for a in &kraus {
            sum = sum.add(&a.adjoint().matmul(a));
        }
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(dim_in));
        if dev > T::of(CHANNEL_TOL) {
            return Err(Error::NotTracePreserving {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self {
            dim_in,
            dim_out,
            kraus,
        })
    }

    /// Identity channel on dimension `d`.
    pub fn identity(d: usize) -> Self {
        Self {
            dim_in: d,
            dim_out: d,
            kraus: vec![ComplexMatrix::identity(d)],
        }
    }

    /// Unitary conjugation channel `S ↦ U S U†`.
    pub fn from_unitary(u: ComplexMatrix<T>) -> Self {
        let d = u.rows();
        Self {
            dim_in: d,
            dim_out: d,
            kraus: vec![u],
        }
    }

    /// d-dimensional depolarizing channel `S ↦ (1-p) S + p (I/d) Tr S`.
    ///
    /// Kraus form: `A_dd = √(1 - p(d²-1)/d²) I` plus the d²-1
    /// non-identity Weyl operators on the computational basis with weight
    /// `√p / d`. Complete positivity requires `0 ≤ p ≤ d²/(d²-1)`.
    pub fn depolarizing(d: usize, p: T) -> Result<Self> {
        let DepolarizingParams { d, p } = DepolarizingParams::new(d, p)?;
        let dd = T::of_usize(d * d);
        let weyl = WeylFamily::<T>::computational(d, d)?;
        let identity_weight = (T::one() - p * (dd - T::one()) / dd).max(T::zero());
        let weyl_weight = p.sqrt() / T::of_usize(d);

        let mut kraus = Vec::with_capacity(d * d);
        kraus.push(ComplexMatrix::identity(d).scale_re(identity_weight.sqrt()));
        for alpha in 1..=d {
            for beta in 1..=d {
                // W_dd = I is the identity component above, not a Weyl term.
                if alpha == d && beta == d {
                    continue;
                }
                kraus.push(weyl.op(alpha, beta).scale_re(weyl_weight));
            }
        }
        Self::new(kraus, d, d)
    }

    /// Unital qubit channel `√p0 I, √px σx, √py σy, √pz σz`.
    pub fn unital_qubit(p0: T, px: T, py: T, pz: T) -> Result<Self> {
        let probs = [p0, px, py, pz];
        if probs.iter().any(|&p| p < -T::of(1e-12)) {
            return Err(Error::InvalidProbabilities {
                reason: "negative Pauli weight".into(),
            });
        }
        let total: T = probs.iter().copied().fold(T::zero(), |a, b| a + b);
        if (total - T::one()).abs() > T::of(1e-10) {
            return Err(Error::InvalidProbabilities {
                reason: format!("Pauli weights sum to {total}"),
            });
        }
        let o = T::zero();
        let l = T::one();
        let paulis = [
            ComplexMatrix::from_pairs(2, 2, &[(l, o), (o, o), (o, o), (l, o)]).unwrap(),
            ComplexMatrix::from_pairs(2, 2, &[(o, o), (l, o), (l, o), (o, o)]).unwrap(),
            ComplexMatrix::from_pairs(2, 2, &[(o, o), (o, -l), (o, l), (o, o)]).unwrap(),
            ComplexMatrix::from_pairs(2, 2, &[(l, o), (o, o), (o, o), (-l, o)]).unwrap(),
        ];
        let kraus = probs
            .iter()
            .zip(paulis)
            .filter(|(&p, _)| p > T::zero())
            .map(|(&p, sigma)| sigma.scale_re(p.sqrt()))
            .collect();
        Self::new(kraus, 2, 2)
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix<T>] {
        &self.kraus
    }

    /// `Σ A_i X A_i†` on a raw operator.
    pub fn apply_op(&self, x: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for a in &self.kraus {
            out = out.add(&a.matmul(x).matmul(&a.adjoint()));
        }
        out
    }

    /// Channel action on a state.
    pub fn apply(&self, s: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        if s.dim() != self.dim_in {
            return Err(Error::DimensionMismatch {
                expected: self.dim_in,
                got: s.dim(),
            });
        }
        Ok(DensityMatrix::from_matrix_unchecked(self.apply_op(s.matrix())))
    }

    /// `Φ ⊗ Id_{d_b}`, acting on the A factor of a bipartite system.
    pub fn extend_with_identity(&self, d_b: usize) -> Self {
        let id = ComplexMatrix::identity(d_b);
        Self {
            dim_in: self.dim_in * d_b,
            dim_out: self.dim_out * d_b,
            kraus: self.kraus.iter().map(|a| a.kron(&id)).collect(),
        }
    }

    /// Tensor product of two channels (all Kraus pair products).
    pub fn tensor(&self, other: &Self) -> Self {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(a.kron(b));
            }
        }
        Self {
            dim_in: self.dim_in * other.dim_in,
            dim_out: self.dim_out * other.dim_out,
            kraus,
        }
    }

    /// n-fold tensor power with the full Kraus family materialized.
    ///
    /// Refused when `dim_out^n` exceeds [`TENSOR_POWER_DIM_LIMIT`]; at
    /// those sizes only factor-wise application on mixtures of product
    /// states is viable (the typicality module works that way).
    pub fn tensor_power(&self, n: usize) -> Result<Self> {
        assert!(n >= 1, "tensor power needs n >= 1");
        let mut dim = 1usize;
        for _ in 0..n {
            dim = dim.saturating_mul(self.dim_out);
            if dim > TENSOR_POWER_DIM_LIMIT {
                return Err(Error::BudgetExceeded {
                    what: format!(
                        "tensor_power: output dimension {}^{n} exceeds {}",
                        self.dim_out, TENSOR_POWER_DIM_LIMIT
                    ),
                });
            }
        }
        let mut out = self.clone();
        for _ in 1..n {
            out = out.tensor(self);
        }
        Ok(out)
    }

    /// Dual (adjoint) map `X ↦ Σ A_i† X A_i`: positive and unital.
    pub fn dual(&self) -> DualChannel<T> {
        DualChannel { channel: self.clone() }
    }
}

/// Dual of a channel in the Heisenberg picture.
#[derive(Debug, Clone)]
pub struct DualChannel<T> {
    channel: QuantumChannel<T>,
}

impl<T: Real> DualChannel<T> {
    /// `Σ A_i† X A_i`.
    pub fn apply_op(&self, x: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let d = self.channel.dim_in;
        let mut out = ComplexMatrix::zeros(d, d);
        for a in &self.channel.kraus {
            out = out.add(&a.adjoint().matmul(x).matmul(a));
        }
        out
    }
}
