//! JSON wire representations for matrices and channels.
//!
//! A matrix is a list of rows; each row is a list of `[re, im]` pairs.
//! Channel files carry `dim_in`, `dim_out`, and the Kraus list in that
//! format; readers reject files that fail channel validation.

use serde::{Deserialize, Serialize};

use crate::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

/// Row-major `[re, im]` pairs.
pub type MatrixWire = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_wire<T: Real>(m: &ComplexMatrix<T>) -> MatrixWire {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let z = m[(i, j)];
                    [
                        z.re.to_f64().unwrap_or(f64::NAN),
                        z.im.to_f64().unwrap_or(f64::NAN),
                    ]
                })
                .collect()
        })
        .collect()
}

pub fn matrix_from_wire<T: Real>(wire: &MatrixWire) -> Result<ComplexMatrix<T>> {
    let rows = wire.len();
    if rows == 0 {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    let cols = wire[0].len();
    if wire.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch {
            expected: cols,
            got: 0,
        });
    }
    let mut pairs = Vec::with_capacity(rows * cols);
    for row in wire {
        for &[re, im] in row {
            pairs.push((T::of(re), T::of(im)));
        }
    }
    ComplexMatrix::from_pairs(rows, cols, &pairs)
}

/// Channel file schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelFile {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<MatrixWire>,
}

/// Bipartite-family file schema: a list of joint states sharing the same
/// B-marginal, each a `(dim_a * dim_b)`-dimensional density matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyFile {
    pub dim_a: usize,
    pub dim_b: usize,
    pub members: Vec<MatrixWire>,
}

impl FamilyFile {
    pub fn into_family<T: Real>(&self) -> Result<Vec<crate::state::BipartiteState<T>>> {
        self.members
            .iter()
            .map(|wire| {
                let m = matrix_from_wire::<T>(wire)?;
                let dm = crate::state::DensityMatrix::new(m)?;
                crate::state::BipartiteState::new(self.dim_a, self.dim_b, dm)
            })
            .collect()
    }
}

impl ChannelFile {
    pub fn from_channel<T: Real>(channel: &QuantumChannel<T>) -> Self {
        Self {
            dim_in: channel.dim_in(),
            dim_out: channel.dim_out(),
            kraus: channel.kraus().iter().map(matrix_to_wire).collect(),
        }
    }

    /// Decodes and validates; invalid Kraus families are rejected.
    pub fn into_channel<T: Real>(&self) -> Result<QuantumChannel<T>> {
        let kraus = self
            .kraus
            .iter()
            .map(matrix_from_wire)
            .collect::<Result<Vec<_>>>()?;
        QuantumChannel::new(kraus, self.dim_in, self.dim_out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    #[test]
    fn channel_round_trip() {
        let mut rng = random::rng(71);
        let ch = random::channel::<f64>(2, 3, 2, &mut rng);
        let file = ChannelFile::from_channel(&ch);
        let json = serde_json::to_string(&file).unwrap();
        let parsed: ChannelFile = serde_json::from_str(&json).unwrap();
        let back = parsed.into_channel::<f64>().unwrap();
        for (a, b) in ch.kraus().iter().zip(back.kraus()) {
            assert!(a.max_abs_diff(b) < 1e-15);
        }
    }

    #[test]
    fn invalid_channel_file_rejected() {
        let half = ComplexMatrix::<f64>::identity(2).scale_re(0.5);
        let file = ChannelFile {
            dim_in: 2,
            dim_out: 2,
            kraus: vec![matrix_to_wire(&half)],
        };
        assert!(file.into_channel::<f64>().is_err());
    }
}
