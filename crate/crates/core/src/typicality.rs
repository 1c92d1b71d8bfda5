//! Strongly typical sequences and projectors for a state's spectrum, and
//! finite-n diagnostics of the entropy-convergence bounds they satisfy.
//!
//! Enumeration works at the level of type classes (composition vectors
//! with multinomial multiplicities), never raw `d^n` sequence lists, so
//! counts stay exact while the sequence space grows exponentially.
//!
//! The n-fold output state `Ψ^{⊗n}(S̄^{n,δ})` is a uniform mixture of
//! product states drawn from `B_j = Ψ(|e_j⟩⟨e_j|)`. Two evaluation
//! routes cover it:
//!
//! - when the `B_j` commute, a common eigenbasis reduces everything to
//!   diagonal bookkeeping over output type classes, with the per-class
//!   sequence sums extracted from a product of linear generating
//!   polynomials (works up to the full `d_out^n ≤ 4096` budget);
//! - otherwise the full matrix is materialized and eigendecomposed,
//!   which is allowed only up to dimension 256.
//!
//! A strongly typical set can be empty at small `n` (no integer counts
//! satisfy the strict window). Convergence rows then report zero
//! entropy and mass, so the gap column equals the single-copy output
//! entropy; the identity diagnostics refuse the empty set instead.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::Serialize;

use crate::channel::QuantumChannel;
use crate::entropy::matrix_entropy;
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, spectral_apply, ComplexMatrix, SUPPORT_THRESHOLD};
use crate::scalar::Real;
use crate::state::DensityMatrix;

/// Float guard at the strict membership boundary `|N/n - λ| < δ`:
/// deviations within this distance of δ count as boundary and are
/// excluded, as roundoff otherwise flips exact-boundary cases.
pub const BOUNDARY_GUARD: f64 = 1e-12;

/// Spectrum entries at or below this are zero-probability letters.
pub const ZERO_PROB_TOL: f64 = 1e-14;

/// Cap on the number of enumerated type classes.
pub const CLASS_BUDGET: usize = 2_000_000;

/// Largest matrix dimension the dense route will materialize.
pub const DENSE_DIM_LIMIT: usize = 256;

/// Max-entry tolerance for pairwise commutators on the diagonal route.
pub const COMMUTATION_TOL: f64 = 1e-11;

// ---------------------------------------------------------------------------
// Spectra and type classes
// ---------------------------------------------------------------------------

/// Probability spectrum `λ_1..λ_d` (sums to 1).
#[derive(Debug, Clone)]
pub struct Spectrum<T> {
    probs: Vec<T>,
}

impl<T: Real> Spectrum<T> {
    pub fn new(probs: Vec<T>) -> Result<Self> {
        if probs.iter().any(|&p| p < -T::of(ZERO_PROB_TOL)) {
            return Err(Error::InvalidProbabilities {
                reason: "negative spectrum entry".into(),
            });
        }
        let total: T = probs.iter().copied().fold(T::zero(), |a, b| a + b);
        if (total - T::one()).abs() > T::of(1e-12) {
            return Err(Error::InvalidProbabilities {
                reason: format!("spectrum sums to {total}"),
            });
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> T {
        crate::entropy::shannon(&self.probs)
    }

    /// `δ₁ = δ · max_{λ_j > 0}(-log₂ λ_j)`.
    pub fn delta1(&self, delta: T) -> T {
        let max_surprise = self
            .probs
            .iter()
            .filter(|&&p| p > T::of(ZERO_PROB_TOL))
            .map(|&p| -p.log2())
            .fold(T::zero(), |a, b| if b > a { b } else { a });
        delta * max_surprise
    }
}

/// A composition of n with its multinomial multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeClass {
    pub counts: Vec<usize>,
    pub multiplicity: u128,
}

/// Exact binomial coefficient; `None` on overflow.
fn binomial_u128(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 1..=k {
        r = r.checked_mul((n - k + i) as u128)?;
        r /= i as u128; // exact: partial products are binomials
    }
    Some(r)
}

/// Exact multinomial coefficient `n! / Π counts_j!`.
pub fn multinomial_u128(n: usize, counts: &[usize]) -> Option<u128> {
    debug_assert_eq!(counts.iter().sum::<usize>(), n);
    let mut rem = n;
    let mut r: u128 = 1;
    for &c in counts {
        r = r.checked_mul(binomial_u128(rem, c)?)?;
        rem -= c;
    }
    Some(r)
}

/// Enumerated strongly typical set of index sequences, held as type
/// classes with exact multiplicities.
#[derive(Debug, Clone)]
pub struct StronglyTypicalSet<T> {
    pub n: usize,
    pub delta: T,
    pub classes: Vec<TypeClass>,
    /// `|B^{n,δ}|` — the number of strongly typical sequences.
    pub d_n_delta: u128,
    /// `δ₁ = δ · max(-log₂ λ_j)` over the support.
    pub delta1: T,
}

impl<T: Real> StronglyTypicalSet<T> {
    pub fn is_empty(&self) -> bool {
        self.d_n_delta == 0
    }

    /// Total probability `P^n(B^{n,δ}) = Σ_J λ_J` over the set.
    pub fn probability_mass(&self, spectrum: &Spectrum<T>) -> T {
        let mut mass = T::zero();
        for class in &self.classes {
            let mut log_term = T::zero();
            for (j, &c) in class.counts.iter().enumerate() {
                if c > 0 {
                    log_term += T::of_usize(c) * spectrum.probs()[j].ln();
                }
            }
            mass += T::of(class.multiplicity as f64) * log_term.exp();
        }
        mass
    }

    /// Materializes the index sequences (0-based letters); intended for
    /// small sets in tests and exhaustive checks.
    pub fn materialize_sequences(&self, limit: usize) -> Result<Vec<Vec<usize>>> {
        if self.d_n_delta > limit as u128 {
            return Err(Error::BudgetExceeded {
                what: format!("{} sequences exceed the limit {limit}", self.d_n_delta),
            });
        }
        let mut out = Vec::with_capacity(self.d_n_delta as usize);
        for class in &self.classes {
            let mut seq: Vec<usize> = Vec::with_capacity(self.n);
            for (j, &c) in class.counts.iter().enumerate() {
                seq.extend(std::iter::repeat_n(j, c));
            }
            permute_into(&mut seq, 0, &mut out);
        }
        Ok(out)
    }
}

/// Lexicographic distinct permutations of `seq[from..]` appended to `out`.
fn permute_into(seq: &mut Vec<usize>, from: usize, out: &mut Vec<Vec<usize>>) {
    if from == seq.len() {
        out.push(seq.clone());
        return;
    }
    let mut seen = Vec::new();
    for i in from..seq.len() {
        if seen.contains(&seq[i]) {
            continue;
        }
        seen.push(seq[i]);
        seq.swap(from, i);
        permute_into(seq, from + 1, out);
        seq.swap(from, i);
    }
}

/// Enumerates the strongly typical set: compositions `N(1..d)` of `n`
/// with `|N_j/n - λ_j| < δ` for every letter (strict, with a float
/// boundary guard) and `N_j = 0` wherever `λ_j = 0`.
pub fn strongly_typical_set<T: Real>(
    spectrum: &Spectrum<T>,
    n: usize,
    delta: T,
) -> Result<StronglyTypicalSet<T>> {
    assert!(n >= 1, "need n >= 1");
    assert!(delta > T::zero(), "need delta > 0");
    let d = spectrum.len();
    let nf = T::of_usize(n);
    let guard = T::of(BOUNDARY_GUARD);

    // Admissible counts per letter.
    let admissible: Vec<Vec<usize>> = spectrum
        .probs()
        .iter()
        .map(|&lambda| {
            if lambda <= T::of(ZERO_PROB_TOL) {
                vec![0]
            } else {
                (0..=n)
                    .filter(|&c| (T::of_usize(c) / nf - lambda).abs() < delta - guard)
                    .collect()
            }
        })
        .collect();

    let mut classes = Vec::new();
    let mut counts = vec![0usize; d];
    enumerate_classes(&admissible, 0, n, &mut counts, &mut classes)?;

    let mut total: u128 = 0;
    for class in &classes {
        total = total
            .checked_add(class.multiplicity)
            .ok_or_else(|| Error::BudgetExceeded {
                what: "typical-set size overflows u128".into(),
            })?;
    }

    Ok(StronglyTypicalSet {
        n,
        delta,
        classes,
        d_n_delta: total,
        delta1: spectrum.delta1(delta),
    })
}

fn enumerate_classes(
    admissible: &[Vec<usize>],
    letter: usize,
    remaining: usize,
    counts: &mut Vec<usize>,
    out: &mut Vec<TypeClass>,
) -> Result<()> {
    if letter == admissible.len() {
        if remaining == 0 {
            let n: usize = counts.iter().sum();
            let multiplicity =
                multinomial_u128(n, counts).ok_or_else(|| Error::BudgetExceeded {
                    what: "multinomial coefficient overflows u128".into(),
                })?;
            out.push(TypeClass {
                counts: counts.clone(),
                multiplicity,
            });
            if out.len() > CLASS_BUDGET {
                return Err(Error::BudgetExceeded {
                    what: format!("more than {CLASS_BUDGET} type classes"),
                });
            }
        }
        return Ok(());
    }
    // Letters after this one can absorb at most the sum of their maxima.
    let max_rest: usize = admissible[letter + 1..]
        .iter()
        .map(|a| a.last().copied().unwrap_or(0))
        .sum();
    for &c in &admissible[letter] {
        if c > remaining || remaining - c > max_rest {
            continue;
        }
        counts[letter] = c;
        enumerate_classes(admissible, letter + 1, remaining - c, counts, out)?;
    }
    counts[letter] = 0;
    Ok(())
}

// ---------------------------------------------------------------------------
// Size and empirical-mean bounds
// ---------------------------------------------------------------------------

/// Size-bound diagnostics for one `(n, δ)` point.
#[derive(Debug, Clone, Serialize)]
pub struct SizeBoundsReport {
    pub n: usize,
    pub delta: f64,
    pub d_n_delta_log2: f64,
    pub entropy: f64,
    /// Signed `(1/n) log₂ |B| - H(S)`.
    pub empirical_delta: f64,
    pub delta1: f64,
    /// Implementer-chosen envelope `δ₁ + d log₂(n+1)/n`, not a reference
    /// value: the source size bound leaves its rate implicit.
    pub envelope: f64,
    pub within_envelope: bool,
}

/// Reports `(1/n) log₂ |B^{n,δ}|` against `H(S)`.
pub fn check_size_bounds<T: Real>(
    set: &StronglyTypicalSet<T>,
    spectrum: &Spectrum<T>,
) -> SizeBoundsReport {
    let n = set.n;
    let log2_size = if set.d_n_delta == 0 {
        f64::NEG_INFINITY
    } else {
        (set.d_n_delta as f64).log2()
    };
    let h = spectrum.entropy().to_f64().unwrap_or(f64::NAN);
    let empirical = log2_size / n as f64 - h;
    let delta1 = set.delta1.to_f64().unwrap_or(f64::NAN);
    let envelope = delta1 + spectrum.len() as f64 * ((n + 1) as f64).log2() / n as f64;
    SizeBoundsReport {
        n,
        delta: set.delta.to_f64().unwrap_or(f64::NAN),
        d_n_delta_log2: log2_size,
        entropy: h,
        empirical_delta: empirical,
        delta1,
        envelope,
        within_envelope: empirical.abs() <= envelope,
    }
}

/// Empirical-mean bound report: the largest deviation of
/// `(1/n) Σ_t f(j_t)` from `Σ_j λ_j f(j)` over the set, against the
/// strict bound `δ · max|f|`.
#[derive(Debug, Clone)]
pub struct EmpiricalMeanReport<T> {
    pub max_deviation: T,
    pub bound: T,
    pub pass: bool,
    pub worst_counts: Vec<usize>,
}

/// Checks `|mean_t f(j_t) - Σ λ_j f(j)| < δ max|f|` for every sequence.
/// The empirical mean depends on a sequence only through its type class.
pub fn check_empirical_mean_bound<T: Real>(
    set: &StronglyTypicalSet<T>,
    f: &[T],
    spectrum: &Spectrum<T>,
) -> EmpiricalMeanReport<T> {
    let nf = T::of_usize(set.n);
    let expectation: T = spectrum
        .probs()
        .iter()
        .zip(f)
        .map(|(&l, &fx)| l * fx)
        .fold(T::zero(), |a, b| a + b);
    let max_abs_f = f
        .iter()
        .map(|x| x.abs())
        .fold(T::zero(), |a, b| if b > a { b } else { a });

    let mut worst = T::zero();
    let mut worst_counts = Vec::new();
    for class in &set.classes {
        let mean: T = class
            .counts
            .iter()
            .zip(f)
            .map(|(&c, &fx)| T::of_usize(c) / nf * fx)
            .fold(T::zero(), |a, b| a + b);
        let dev = (mean - expectation).abs();
        if dev > worst {
            worst = dev;
            worst_counts = class.counts.clone();
        }
    }
    let bound = set.delta * max_abs_f;
    EmpiricalMeanReport {
        max_deviation: worst,
        bound,
        pass: set.classes.is_empty() || worst < bound,
        worst_counts,
    }
}

/// `-log₂ λ_J` for any sequence in the given type class.
pub fn sequence_surprisal<T: Real>(counts: &[usize], spectrum: &Spectrum<T>) -> T {
    counts
        .iter()
        .zip(spectrum.probs())
        .map(|(&c, &l)| {
            if c == 0 {
                T::zero()
            } else {
                -T::of_usize(c) * l.log2()
            }
        })
        .fold(T::zero(), |a, b| a + b)
}

// ---------------------------------------------------------------------------
// Typical projector state
// ---------------------------------------------------------------------------

/// Spectrum plus eigenvectors fixing which letter is which.
#[derive(Debug, Clone)]
pub struct SpectralState<T> {
    pub spectrum: Spectrum<T>,
    /// Eigenvector for each letter, in the same order as the spectrum.
    pub vectors: Vec<Vec<Complex<T>>>,
}

impl<T: Real> SpectralState<T> {
    /// Eigendecomposition of a density matrix (ascending eigenvalues).
    pub fn from_density(s: &DensityMatrix<T>) -> Result<Self> {
        let eig = herm_eig(s.matrix())?;
        let probs: Vec<T> = eig
            .eigenvalues
            .iter()
            .map(|&x| if x < T::zero() { T::zero() } else { x })
            .collect();
        let vectors = (0..s.dim()).map(|k| eig.eigenvector(k)).collect();
        Ok(Self {
            spectrum: Spectrum::new(probs)?,
            vectors,
        })
    }

    /// Diagonal state in the computational basis with the given
    /// probabilities, letter order preserved as given.
    pub fn from_probs(probs: Vec<T>) -> Result<Self> {
        let d = probs.len();
        let vectors = (0..d)
            .map(|k| {
                let mut v = vec![Complex::new(T::zero(), T::zero()); d];
                v[k] = Complex::new(T::one(), T::zero());
                v
            })
            .collect();
        Ok(Self {
            spectrum: Spectrum::new(probs)?,
            vectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// The density matrix `Σ λ_j |e_j⟩⟨e_j|`.
    pub fn density(&self) -> DensityMatrix<T> {
        let d = self.dim();
        let mut m = ComplexMatrix::zeros(d, d);
        for (lambda, v) in self.spectrum.probs().iter().zip(&self.vectors) {
            m = m.add(&ComplexMatrix::outer(v, v).scale_re(*lambda));
        }
        DensityMatrix::from_matrix_unchecked(m)
    }
}

/// `S̄^{n,δ} = P^{n,δ}/d_{n,δ}` as a uniform mixture over the product
/// eigenvectors indexed by strongly typical sequences, grouped by type
/// class; the `d^n`-dimensional matrix is never materialized.
#[derive(Debug, Clone)]
pub struct TypicalMixture<T> {
    pub state: SpectralState<T>,
    pub set: StronglyTypicalSet<T>,
}

impl<T: Real> TypicalMixture<T> {
    /// Trace of the represented state (1 for a nonempty set).
    pub fn trace(&self) -> T {
        if self.set.d_n_delta == 0 {
            T::zero()
        } else {
            // Uniform weights 1/d over d sequences.
            T::one()
        }
    }
}

pub fn typical_projector_state<T: Real>(
    s: &DensityMatrix<T>,
    n: usize,
    delta: T,
) -> Result<TypicalMixture<T>> {
    let state = SpectralState::from_density(s)?;
    let set = strongly_typical_set(&state.spectrum, n, delta)?;
    Ok(TypicalMixture { state, set })
}

// ---------------------------------------------------------------------------
// Output-side machinery shared by the convergence diagnostics
// ---------------------------------------------------------------------------

/// Per-letter channel outputs `B_j = Ψ(|e_j⟩⟨e_j|)` with, when
/// available, a common eigenbasis making all of them diagonal.
struct OutputFactors<T> {
    /// `b_j(k)`: diagonal of `B_j` in the common basis (diagonal route).
    diag: Option<Vec<Vec<T>>>,
    /// Eigenvalues of `Ψ(S)` in the same basis (diagonal route).
    g: Option<Vec<T>>,
    /// Raw factors, for the dense route.
    factors: Vec<ComplexMatrix<T>>,
    /// `Ψ(S)`.
    output_state: ComplexMatrix<T>,
    dim_out: usize,
}

fn output_factors<T: Real>(state: &SpectralState<T>, channel: &QuantumChannel<T>) -> Result<OutputFactors<T>> {
    if channel.dim_in() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            got: channel.dim_in(),
        });
    }
    let factors: Vec<ComplexMatrix<T>> = state
        .vectors
        .iter()
        .map(|v| channel.apply_op(&ComplexMatrix::outer(v, v)))
        .collect();
    let mut output_state = ComplexMatrix::zeros(channel.dim_out(), channel.dim_out());
    for (lambda, b) in state.spectrum.probs().iter().zip(&factors) {
        output_state = output_state.add(&b.scale_re(*lambda));
    }

    let (diag, g) = match common_eigenbasis(&factors) {
        Some((basis, diag)) => {
            let rotated = basis.adjoint().matmul(&output_state).matmul(&basis);
            let g = (0..channel.dim_out()).map(|k| rotated[(k, k)].re).collect();
            (Some(diag), Some(g))
        }
        None => (None, None),
    };

    Ok(OutputFactors {
        diag,
        g,
        factors,
        output_state,
        dim_out: channel.dim_out(),
    })
}

/// Finds a unitary diagonalizing every factor at once, when they
/// commute. Probes a generic linear combination and verifies; a second
/// probe covers accidental degeneracy collisions.
fn common_eigenbasis<T: Real>(factors: &[ComplexMatrix<T>]) -> Option<(ComplexMatrix<T>, Vec<Vec<T>>)> {
    let q = factors[0].rows();
    let tol = T::of(COMMUTATION_TOL);
    for (i, a) in factors.iter().enumerate() {
        for b in &factors[i + 1..] {
            let comm = a.matmul(b).sub(&b.matmul(a));
            if comm.max_abs_entry() > tol {
                return None;
            }
        }
    }
    // Two probe weight families with irrational spacings.
    let probes: [fn(usize) -> f64; 2] = [
        |j| ((2 * j + 3) as f64).sqrt(),
        |j| ((j + 2) as f64).powf(1.0 / 3.0) + (j as f64) * std::f64::consts::SQRT_2,
    ];
    'probe: for weight in probes {
        let mut h = ComplexMatrix::zeros(q, q);
        for (j, b) in factors.iter().enumerate() {
            h = h.add(&b.scale_re(T::of(weight(j))));
        }
        let eig = match herm_eig(&h.symmetrize()) {
            Ok(e) => e,
            Err(_) => continue,
        };
        let basis = eig.eigenvectors;
        let mut diag = Vec::with_capacity(factors.len());
        for b in factors {
            let rotated = basis.adjoint().matmul(b).matmul(&basis);
            for i in 0..q {
                for j in 0..q {
                    if i != j && rotated[(i, j)].norm() > T::of(1e-10) {
                        continue 'probe;
                    }
                }
            }
            diag.push((0..q).map(|k| rotated[(k, k)].re).collect::<Vec<T>>());
        }
        return Some((basis, diag));
    }
    None
}

/// All compositions of `n` into `q` parts.
fn output_compositions(n: usize, q: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; q];
    fn rec(pos: usize, remaining: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos + 1 == current.len() {
            current[pos] = remaining;
            out.push(current.clone());
            return;
        }
        for c in 0..=remaining {
            current[pos] = c;
            rec(pos + 1, remaining - c, current, out);
        }
    }
    rec(0, n, &mut current, &mut out);
    out
}

/// Mixture eigenvalue for every output type class on the diagonal route.
///
/// For output sequence `K` of type `m`,
/// `μ_K = (1/|B|) Σ_{J ∈ B} Π_t b_{j_t}(k_t)`
/// depends on `K` only through `m`; the inner sums per input type class
/// `τ` are the coefficients `[x^τ] Π_k (Σ_j b_j(k) x_j)^{m_k}` of a
/// product of linear generating polynomials.
fn mixture_diagonal<T: Real>(
    set: &StronglyTypicalSet<T>,
    diag: &[Vec<T>],
    q: usize,
) -> Vec<(Vec<usize>, u128, T)> {
    let d = diag.len();
    let n = set.n;
    let size = set.d_n_delta as f64;
    let mut rows = Vec::new();
    for m in output_compositions(n, q) {
        // Build Π_k L_k^{m_k} as a sparse polynomial over exponent vectors.
        let mut poly: BTreeMap<Vec<u16>, T> = BTreeMap::new();
        poly.insert(vec![0u16; d], T::one());
        for (k, &mk) in m.iter().enumerate() {
            for _ in 0..mk {
                let mut next: BTreeMap<Vec<u16>, T> = BTreeMap::new();
                for (expo, coef) in &poly {
                    for j in 0..d {
                        let b = diag[j][k];
                        if b == T::zero() {
                            continue;
                        }
                        let mut e2 = expo.clone();
                        e2[j] += 1;
                        *next.entry(e2).or_insert(T::zero()) += *coef * b;
                    }
                }
                poly = next;
            }
        }
        let mut total = T::zero();
        for class in &set.classes {
            let key: Vec<u16> = class.counts.iter().map(|&c| c as u16).collect();
            if let Some(&coef) = poly.get(&key) {
                total += coef;
            }
        }
        let multiplicity = multinomial_u128(n, &m).expect("output multinomial fits u128");
        let mu = (total / T::of(size)).max(T::zero());
        rows.push((m, multiplicity, mu));
    }
    rows
}

/// Dense `q^n`-dimensional mixture matrix `Σ_J (1/|B|) ⊗_t B_{j_t}`.
fn mixture_dense<T: Real>(
    set: &StronglyTypicalSet<T>,
    factors: &[ComplexMatrix<T>],
    q: usize,
) -> Result<ComplexMatrix<T>> {
    let dim = q.checked_pow(set.n as u32).filter(|&x| x <= DENSE_DIM_LIMIT);
    let dim = dim.ok_or_else(|| Error::BudgetExceeded {
        what: format!(
            "dense route needs d_out^n <= {DENSE_DIM_LIMIT}; factors do not commute"
        ),
    })?;
    let sequences = set.materialize_sequences(200_000)?;
    let weight = T::one() / T::of(set.d_n_delta as f64);
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for seq in &sequences {
        let mut term = factors[seq[0]].clone();
        for &j in &seq[1..] {
            term = term.kron(&factors[j]);
        }
        acc = acc.add(&term.scale_re(weight));
    }
    Ok(acc)
}

fn kron_power<T: Real>(m: &ComplexMatrix<T>, n: usize) -> ComplexMatrix<T> {
    let mut out = m.clone();
    for _ in 1..n {
        out = out.kron(m);
    }
    out
}

/// Route-aware resource check. The diagonal route only enumerates
/// output type classes, so it admits any `d_out^n` with an affordable
/// class count; the dense route is capped at [`DENSE_DIM_LIMIT`].
fn budget_check<T: Real>(out: &OutputFactors<T>, n: usize) -> Result<()> {
    if out.diag.is_some() {
        let classes = binomial_u128(n + out.dim_out - 1, out.dim_out - 1)
            .filter(|&c| c <= CLASS_BUDGET as u128);
        if classes.is_none() {
            return Err(Error::BudgetExceeded {
                what: format!("more than {CLASS_BUDGET} output type classes at n = {n}"),
            });
        }
        return Ok(());
    }
    let mut dim = 1usize;
    for _ in 0..n {
        dim = dim.saturating_mul(out.dim_out);
        if dim > DENSE_DIM_LIMIT {
            return Err(Error::BudgetExceeded {
                what: format!(
                    "non-commuting output factors: d_out^n = {}^{n} exceeds the dense limit {DENSE_DIM_LIMIT}",
                    out.dim_out
                ),
            });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Convergence diagnostics
// ---------------------------------------------------------------------------

/// One row of the finite-n convergence table.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub delta: f64,
    pub d_n_delta: u128,
    /// `(1/n) H(Ψ^{⊗n}(S̄^{n,δ}))`, bits.
    pub per_copy_entropy: f64,
    /// `H(Ψ(S)) - per_copy_entropy`, bits.
    pub gap: f64,
    /// `H(Ψ^{⊗n}(S̄) | Ψ(S)^{⊗n})`, bits (total, not per copy).
    pub rel_entropy_term: f64,
    /// Trace correction term of the entropy decomposition, bits.
    pub second_term: f64,
    /// `P^n(B^{n,δ})`.
    pub prob_mass: f64,
}

/// Computes the convergence table for the given copy counts.
///
/// An empty typical set yields a zero-entropy row: `per_copy_entropy`,
/// both decomposition terms, and the mass are 0 and the gap equals
/// `H(Ψ(S))`.
pub fn convergence_demo<T: Real>(
    state: &SpectralState<T>,
    channel: &QuantumChannel<T>,
    n_list: &[usize],
    delta: T,
) -> Result<Vec<ConvergenceRow>> {
    let out = output_factors(state, channel)?;
    let h_single = matrix_entropy(&out.output_state).to_f64().unwrap_or(f64::NAN);
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        budget_check(&out, n)?;
        let set = strongly_typical_set(&state.spectrum, n, delta)?;
        let mass = set.probability_mass(&state.spectrum).to_f64().unwrap_or(f64::NAN);
        if set.is_empty() {
            rows.push(ConvergenceRow {
                n,
                delta: delta.to_f64().unwrap_or(f64::NAN),
                d_n_delta: 0,
                per_copy_entropy: 0.0,
                gap: h_single,
                rel_entropy_term: 0.0,
                second_term: 0.0,
                prob_mass: 0.0,
            });
            continue;
        }
        let (entropy_total, rel, second) = decomposition_terms(&set, &out)?;
        rows.push(ConvergenceRow {
            n,
            delta: delta.to_f64().unwrap_or(f64::NAN),
            d_n_delta: set.d_n_delta,
            per_copy_entropy: entropy_total / n as f64,
            gap: h_single - entropy_total / n as f64,
            rel_entropy_term: rel,
            second_term: second,
            prob_mass: mass,
        });
    }
    Ok(rows)
}

/// `(H(M̄), H(M̄|M^{⊗n}), Tr log M^{⊗n} (M̄ - M^{⊗n}))` in bits, where
/// `M̄ = Ψ^{⊗n}(S̄)` and `M = Ψ(S)`.
fn decomposition_terms<T: Real>(
    set: &StronglyTypicalSet<T>,
    out: &OutputFactors<T>,
) -> Result<(f64, f64, f64)> {
    let q = out.dim_out;
    let n = set.n;
    if let (Some(diag), Some(g)) = (&out.diag, &out.g) {
        // Diagonal route: everything reduces to type-class sums.
        let g_max = g.iter().fold(T::zero(), |a, &b| if b > a { b } else { a });
        let g_threshold = T::of(SUPPORT_THRESHOLD) * g_max;
        let rows = mixture_diagonal(set, diag, q);
        let mut entropy = T::zero();
        let mut rel = T::zero();
        let mut second = T::zero();
        for (m, mult, mu) in &rows {
            let w = T::of(*mult as f64);
            let support_ok = m
                .iter()
                .enumerate()
                .all(|(k, &mk)| mk == 0 || g[k] > g_threshold);
            // log₂ of the product eigenvalue of Ψ(S)^{⊗n} on this type.
            let log_g: T = m
                .iter()
                .enumerate()
                .filter(|&(_, &mk)| mk > 0)
                .map(|(k, &mk)| T::of_usize(mk) * g[k].max(g_threshold).log2())
                .fold(T::zero(), |a, b| a + b);
            if *mu > T::zero() {
                entropy -= w * *mu * mu.log2();
                if support_ok {
                    rel += w * *mu * (mu.log2() - log_g);
                }
            }
            if support_ok {
                let g_prod = log_g.exp2();
                second += w * log_g * (*mu - g_prod);
            }
        }
        Ok((
            entropy.to_f64().unwrap_or(f64::NAN),
            rel.to_f64().unwrap_or(f64::NAN),
            second.to_f64().unwrap_or(f64::NAN),
        ))
    } else {
        // Dense route.
        let mixture = mixture_dense(set, &out.factors, q)?;
        let entropy = matrix_entropy(&mixture);
        let product = kron_power(&out.output_state, n);
        let rel = crate::entropy::relative_entropy(
            &DensityMatrix::from_matrix_unchecked(mixture.clone()),
            &DensityMatrix::from_matrix_unchecked(product.clone()),
        );
        let log_product = spectral_apply(&product, |x| x.log2(), T::of(SUPPORT_THRESHOLD));
        let diff = mixture.sub(&product);
        let second = log_product.trace_product(&diff).re;
        Ok((
            entropy.to_f64().unwrap_or(f64::NAN),
            rel.to_f64().unwrap_or(f64::NAN),
            second.to_f64().unwrap_or(f64::NAN),
        ))
    }
}

/// Both sides of the relative-entropy estimate: the upstream term
/// `H(S̄^{n,δ} | S^{⊗n}) = -log₂ d_{n,δ} - Σ_J (1/d_{n,δ}) log₂ λ_J`
/// in closed form, and the downstream term
/// `H(Ψ^{⊗n}(S̄) | Ψ(S)^{⊗n})` computed spectrally. Monotonicity gives
/// `downstream ≤ upstream`, and the upstream term is at most
/// `n(δ₁ + |empirical Δ|)`.
pub fn relative_entropy_term<T: Real>(
    state: &SpectralState<T>,
    channel: &QuantumChannel<T>,
    n: usize,
    delta: T,
) -> Result<(T, T)> {
    let set = strongly_typical_set(&state.spectrum, n, delta)?;
    if set.is_empty() {
        return Err(Error::EmptyTypicalSet);
    }
    let upstream = upstream_relative_entropy(&set, &state.spectrum);
    let out = output_factors(state, channel)?;
    budget_check(&out, n)?;
    let (_, rel, _) = decomposition_terms(&set, &out)?;
    Ok((upstream, T::of(rel)))
}

/// Closed-form `H(S̄^{n,δ} | S^{⊗n})`.
pub fn upstream_relative_entropy<T: Real>(set: &StronglyTypicalSet<T>, spectrum: &Spectrum<T>) -> T {
    let size = T::of(set.d_n_delta as f64);
    let mut mean_surprisal = T::zero();
    for class in &set.classes {
        let w = T::of(class.multiplicity as f64) / size;
        mean_surprisal += w * sequence_surprisal(&class.counts, spectrum);
    }
    mean_surprisal - size.log2()
}

/// Diagnostics for the trace-correction term of the decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct SecondTermReport {
    /// `Tr log Ψ(S)^{⊗n} (Ψ^{⊗n}(S̄) - Ψ(S)^{⊗n})` on the support.
    pub lhs: f64,
    /// `(n/d_{n,δ}) Σ_J [mean_t f(j_t) - Σ_j λ_j f(j)]` with
    /// `f(j) = ⟨e_j| Ψ*(log-on-support Ψ(S)) |e_j⟩`.
    pub rhs: f64,
    /// `n δ max|f|`.
    pub bound: f64,
    pub f_values: Vec<f64>,
}

/// Evaluates both routes to the second term of the decomposition; they
/// agree identically, and both are bounded by `n δ max|f|` thanks to the
/// empirical-mean bound on strongly typical sequences.
pub fn second_term_diagnostic<T: Real>(
    state: &SpectralState<T>,
    channel: &QuantumChannel<T>,
    n: usize,
    delta: T,
) -> Result<SecondTermReport> {
    let set = strongly_typical_set(&state.spectrum, n, delta)?;
    if set.is_empty() {
        return Err(Error::EmptyTypicalSet);
    }
    let out = output_factors(state, channel)?;
    budget_check(&out, n)?;

    // F = Ψ*(P log₂(P Ψ(S) P) P) with P the support projector of Ψ(S).
    let log_output = spectral_apply(&out.output_state, |x| x.log2(), T::of(SUPPORT_THRESHOLD));
    let f_op = channel.dual().apply_op(&log_output);
    let f_values: Vec<T> = state
        .vectors
        .iter()
        .map(|v| {
            let fv = f_op.matvec(v);
            crate::linalg::inner(v, &fv).re
        })
        .collect();

    // rhs over type classes.
    let nf = T::of_usize(n);
    let expectation: T = state
        .spectrum
        .probs()
        .iter()
        .zip(&f_values)
        .map(|(&l, &fx)| l * fx)
        .fold(T::zero(), |a, b| a + b);
    let size = T::of(set.d_n_delta as f64);
    let mut rhs = T::zero();
    for class in &set.classes {
        let mean: T = class
            .counts
            .iter()
            .zip(&f_values)
            .map(|(&c, &fx)| T::of_usize(c) / nf * fx)
            .fold(T::zero(), |a, b| a + b);
        rhs += T::of(class.multiplicity as f64) * (mean - expectation);
    }
    rhs = rhs * nf / size;

    let (_, _, lhs) = decomposition_terms(&set, &out)?;

    let max_abs_f = f_values
        .iter()
        .map(|x| x.abs())
        .fold(T::zero(), |a, b| if b > a { b } else { a });
    let bound = nf * delta * max_abs_f;

    Ok(SecondTermReport {
        lhs,
        rhs: rhs.to_f64().unwrap_or(f64::NAN),
        bound: bound.to_f64().unwrap_or(f64::NAN),
        f_values: f_values
            .into_iter()
            .map(|x| x.to_f64().unwrap_or(f64::NAN))
            .collect(),
    })
}
