//! Seeded random samplers for states, channels, and families.
//!
//! All stochastic entry points in the crate take an explicit RNG so runs
//! are reproducible from a single `u64` seed.

use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::channel::QuantumChannel;
use crate::linalg::{inner, vec_norm, ComplexMatrix};
use crate::scalar::Real;
use crate::state::{BipartiteState, DensityMatrix, PureState};

/// Deterministic RNG from a seed.
pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn normal<T: Real>(rng: &mut impl Rng) -> T {
    T::of(rng.sample::<f64, _>(StandardNormal))
}

/// Matrix with iid standard complex Gaussian entries.
pub fn gaussian_matrix<T: Real>(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(rows, cols, |_, _| Complex::new(normal(rng), normal(rng)))
}

/// Haar-ish random unitary via modified Gram-Schmidt on a Gaussian matrix.
pub fn unitary<T: Real>(n: usize, rng: &mut impl Rng) -> ComplexMatrix<T> {
    let g = gaussian_matrix::<T>(n, n, rng);
    let mut cols: Vec<Vec<Complex<T>>> = (0..n).map(|j| (0..n).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..n {
        for k in 0..j {
            let proj = inner(&cols[k], &cols[j]);
            for i in 0..n {
                let corr = cols[k][i] * proj;
                cols[j][i] -= corr;
            }
        }
        let nrm = vec_norm(&cols[j]);
        for z in cols[j].iter_mut() {
            *z /= Complex::new(nrm, T::zero());
        }
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Random full-rank density matrix `G G† / Tr(G G†)`.
pub fn density<T: Real>(dim: usize, rng: &mut impl Rng) -> DensityMatrix<T> {
    let g = gaussian_matrix::<T>(dim, dim, rng);
    let psd = g.matmul(&g.adjoint());
    let tr = psd.trace().re;
    DensityMatrix::new(psd.scale_re(T::one() / tr)).expect("Gaussian construction is valid")
}

/// Random pure state (normalized Gaussian vector).
pub fn pure_state<T: Real>(dim: usize, rng: &mut impl Rng) -> PureState<T> {
    let mut v: Vec<Complex<T>> = (0..dim).map(|_| Complex::new(normal(rng), normal(rng))).collect();
    let nrm = vec_norm(&v);
    for z in v.iter_mut() {
        *z /= Complex::new(nrm, T::zero());
    }
    PureState::new(v).expect("normalized Gaussian vector")
}

/// Random channel with `kraus_count` operators, trace-preserving by
/// construction (`A_i = G_i K^{-1/2}`, `K = Σ G_i† G_i`).
pub fn channel<T: Real>(
    dim_in: usize,
    dim_out: usize,
    kraus_count: usize,
    rng: &mut impl Rng,
) -> QuantumChannel<T> {
    let gs: Vec<ComplexMatrix<T>> = (0..kraus_count)
        .map(|_| gaussian_matrix::<T>(dim_out, dim_in, rng))
        .collect();
    let mut k = ComplexMatrix::zeros(dim_in, dim_in);
    for g in &gs {
        k = k.add(&g.adjoint().matmul(g));
    }
    let k_inv_sqrt = crate::linalg::spectral_apply(
        &k,
        |x| T::one() / x.sqrt(),
        T::of(crate::linalg::SUPPORT_THRESHOLD),
    );
    let kraus: Vec<ComplexMatrix<T>> = gs.iter().map(|g| g.matmul(&k_inv_sqrt)).collect();
    QuantumChannel::new(kraus, dim_in, dim_out).expect("normalized Kraus family")
}

/// Random probability vector of the given length (uniform on the simplex).
pub fn probability_vector<T: Real>(len: usize, rng: &mut impl Rng) -> Vec<T> {
    // Normalized Exp(1) variates sample the flat Dirichlet.
    let raw: Vec<T> = (0..len)
        .map(|_| {
            let u: f64 = rng.gen_range(1e-16..1.0);
            T::of(-u.ln())
        })
        .collect();
    let total: T = raw.iter().copied().fold(T::zero(), |a, b| a + b);
    raw.into_iter().map(|x| x / total).collect()
}

/// Random unital qubit channel (random Pauli mixture).
pub fn unital_qubit_channel<T: Real>(rng: &mut impl Rng) -> QuantumChannel<T> {
    let p = probability_vector::<T>(4, rng);
    QuantumChannel::unital_qubit(p[0], p[1], p[2], p[3]).expect("simplex point")
}

/// Random bipartite pure state of Schmidt rank `rank` on `d x d`.
pub fn pure_bipartite_with_rank<T: Real>(d: usize, rank: usize, rng: &mut impl Rng) -> PureState<T> {
    assert!(rank >= 1 && rank <= d);
    let ua = unitary::<T>(d, rng);
    let ub = unitary::<T>(d, rng);
    let weights = probability_vector::<T>(rank, rng);
    let mut amps = vec![Complex::new(T::zero(), T::zero()); d * d];
    for (k, &w) in weights.iter().enumerate() {
        let c = Complex::new(w.sqrt(), T::zero());
        for i in 0..d {
            for j in 0..d {
                amps[i * d + j] += c * ua[(i, k)] * ub[(j, k)];
            }
        }
    }
    PureState::new(amps).expect("Schmidt form is normalized")
}

/// Family of bipartite states with a common B-marginal, produced by
/// applying independent random encodings on A to one shared pure state.
pub fn equal_marginal_family<T: Real>(
    d: usize,
    members: usize,
    schmidt_rank: usize,
    kraus_per_encoding: usize,
    rng: &mut impl Rng,
) -> Vec<BipartiteState<T>> {
    let shared = pure_bipartite_with_rank::<T>(d, schmidt_rank, rng);
    let shared_op = shared.density().into_matrix();
    (0..members)
        .map(|_| {
            let enc = channel::<T>(d, d, kraus_per_encoding, rng);
            let ext = enc.extend_with_identity(d);
            let out = ext.apply_op(&shared_op);
            BipartiteState::new(d, d, DensityMatrix::new(out).expect("channel output"))
                .expect("dimensions match")
        })
        .collect()
}
