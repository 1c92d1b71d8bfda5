//! Dense complex matrix kernel: Hermitian eigendecomposition, tensor
//! products, partial traces, and spectral function calculus.
//!
//! Matrices are stored row-major. Bipartite indices follow the A-first
//! Kronecker convention throughout the crate: the joint index of
//! `(a, b)` with dimensions `(d_a, d_b)` is `a * d_b + b`.

mod eig;

pub use eig::{herm_eig, HermitianEigenSystem};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default relative support threshold separating numerical zeros from
/// genuine spectrum (relative to the largest eigenvalue).
pub const SUPPORT_THRESHOLD: f64 = 1e-12;

/// Tolerance for Hermiticity checks.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Which tensor factor of a bipartite operator to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Builds a matrix from a row-major entry generator.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a square diagonal matrix from real entries.
    pub fn from_real_diag(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(x, T::zero());
        }
        m
    }

    /// Builds a matrix from row-major `(re, im)` pairs.
    pub fn from_pairs(rows: usize, cols: usize, entries: &[(T, T)]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            data: entries.iter().map(|&(re, im)| Complex::new(re, im)).collect(),
        })
    }

    /// Outer product `u v†` of two vectors.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conjugate(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_re(&self, c: T) -> Self {
        self.scale(Complex::new(c, T::zero()))
    }

    /// Matrix product.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul: inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re.is_zero() && a.im.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Complex::new(T::zero(), T::zero());
                for j in 0..self.cols {
                    acc += self[(i, j)] * v[j];
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..self.rows.min(self.cols) {
            acc += self[(i, i)];
        }
        acc
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += self[(i, j)] * other[(j, i)];
            }
        }
        acc
    }

    pub fn max_abs_entry(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Largest entry-wise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Max-abs deviation from the conjugate transpose.
    pub fn hermiticity_deviation(&self) -> T {
        let mut dev = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                if d > dev {
                    dev = d;
                }
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.is_square() && self.hermiticity_deviation() <= tol
    }

    /// Hermitian part `(M + M†)/2`.
    pub fn symmetrize(&self) -> Self {
        let half = T::of(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()).scale(half)
        })
    }

    /// Kronecker product, A-first convention.
    pub fn kron(&self, other: &Self) -> Self {
        let (ra, ca) = (self.rows, self.cols);
        let (rb, cb) = (other.rows, other.cols);
        let mut out = Self::zeros(ra * rb, ca * cb);
        for i1 in 0..ra {
            for j1 in 0..ca {
                let a = self[(i1, j1)];
                if a.re.is_zero() && a.im.is_zero() {
                    continue;
                }
                for i2 in 0..rb {
                    for j2 in 0..cb {
                        out[(i1 * rb + i2, j1 * cb + j2)] = a * other[(i2, j2)];
                    }
                }
            }
        }
        out
    }

    /// Partial trace of a `(d_a * d_b)`-dimensional square operator.
    pub fn partial_trace(&self, d_a: usize, d_b: usize, keep: Subsystem) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows != d_a * d_b {
            return Err(Error::DimensionMismatch {
                expected: d_a * d_b,
                got: self.rows,
            });
        }
        let out = match keep {
            Subsystem::A => Self::from_fn(d_a, d_a, |i, j| {
                let mut acc = Complex::new(T::zero(), T::zero());
                for b in 0..d_b {
                    acc += self[(i * d_b + b, j * d_b + b)];
                }
                acc
            }),
            Subsystem::B => Self::from_fn(d_b, d_b, |a, b| {
                let mut acc = Complex::new(T::zero(), T::zero());
                for i in 0..d_a {
                    acc += self[(i * d_b + a, i * d_b + b)];
                }
                acc
            }),
        };
        Ok(out)
    }
}

impl<T: Real> std::ops::Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> std::ops::IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// Applies `f` to the spectrum of a Hermitian PSD operator.
///
/// Eigenvalues above `support_threshold * lambda_max` are mapped through
/// `f`; the rest of the spectrum (numerical zeros and PSD noise) maps to
/// zero. With `f = log` this is the logarithm restricted to the support;
/// with `f = x^{-1/2}` it is the generalized inverse square root.
pub fn spectral_apply<T: Real>(
    m: &ComplexMatrix<T>,
    f: impl Fn(T) -> T,
    support_threshold: T,
) -> ComplexMatrix<T> {
    let eig = herm_eig(&m.symmetrize()).expect("spectral_apply: Hermitian input");
    let lambda_max = eig
        .eigenvalues
        .iter()
        .fold(T::zero(), |a, &b| if b > a { b } else { a });
    let threshold = support_threshold * lambda_max;
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda <= threshold {
            continue;
        }
        let fl = f(lambda);
        let col: Vec<Complex<T>> = (0..n).map(|i| eig.eigenvectors[(i, k)]).collect();
        for i in 0..n {
            let ci = col[i] * Complex::new(fl, T::zero());
            for j in 0..n {
                out[(i, j)] += ci * col[j].conj();
            }
        }
    }
    out
}

/// Projector onto the span of the given orthonormal columns.
pub fn projector_from_columns<T: Real>(dim: usize, columns: &[Vec<Complex<T>>]) -> ComplexMatrix<T> {
    let mut p = ComplexMatrix::zeros(dim, dim);
    for c in columns {
        assert_eq!(c.len(), dim);
        for i in 0..dim {
            for j in 0..dim {
                p[(i, j)] += c[i] * c[j].conj();
            }
        }
    }
    p
}

/// Complex inner product `⟨u|v⟩` (conjugate-linear in the first slot).
pub fn inner<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
    assert_eq!(u.len(), v.len());
    let mut acc = Complex::new(T::zero(), T::zero());
    for (a, b) in u.iter().zip(v) {
        acc += a.conj() * b;
    }
    acc
}

/// Euclidean norm of a complex vector.
pub fn vec_norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter()
        .map(|z| z.norm_sqr())
        .fold(T::zero(), |a, b| a + b)
        .sqrt()
}

/// Kronecker product of two vectors, A-first convention.
pub fn vec_kron<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(u.len() * v.len());
    for a in u {
        for b in v {
            out.push(a * b);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_identity_dims_multiply() {
        let i2 = ComplexMatrix::<f64>::identity(2);
        let i3 = ComplexMatrix::<f64>::identity(3);
        let i6 = i2.kron(&i3);
        assert_eq!(i6.rows(), 6);
        assert_eq!(i6.max_abs_diff(&ComplexMatrix::identity(6)), 0.0);
    }

    #[test]
    fn kron_diagonal_product() {
        let a = ComplexMatrix::from_real_diag(&[1.0, 2.0]);
        let b = ComplexMatrix::from_real_diag(&[3.0, 4.0]);
        let ab = a.kron(&b);
        let expected = ComplexMatrix::from_real_diag(&[3.0, 4.0, 6.0, 8.0]);
        assert_eq!(ab.max_abs_diff(&expected), 0.0);
    }

    #[test]
    fn kron_mixed_product_property() {
        // (A⊗B)(C⊗D) = AC ⊗ BD on random pairs.
        let mut rng = random::rng(7);
        let a = random::gaussian_matrix::<f64>(2, 3, &mut rng);
        let b = random::gaussian_matrix::<f64>(2, 2, &mut rng);
        let cm = random::gaussian_matrix::<f64>(3, 2, &mut rng);
        let d = random::gaussian_matrix::<f64>(2, 4, &mut rng);
        let lhs = a.kron(&b).matmul(&cm.kron(&d));
        let rhs = a.matmul(&cm).kron(&b.matmul(&d));
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn partial_trace_product_state() {
        // Tr_B(S_A ⊗ S_B) = S_A for unit-trace S_B.
        let s_a = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                c(0.5, 0.0)
            } else {
                c(0.1, if i < j { 0.2 } else { -0.2 })
            }
        });
        let s_b = ComplexMatrix::from_real_diag(&[0.25, 0.75]);
        let joint = s_a.kron(&s_b);
        let back = joint.partial_trace(2, 2, Subsystem::A).unwrap();
        assert!(back.max_abs_diff(&s_a) < 1e-15);
    }

    #[test]
    fn partial_trace_bell_state() {
        // Marginal of the maximally entangled two-qubit state is I/2.
        let amp = 1.0 / 2f64.sqrt();
        let psi = vec![c(amp, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(amp, 0.0)];
        let rho = ComplexMatrix::outer(&psi, &psi);
        let marg = rho.partial_trace(2, 2, Subsystem::B).unwrap();
        let half = ComplexMatrix::identity(2).scale_re(0.5);
        assert!(marg.max_abs_diff(&half) < 1e-15);
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let mut rng = random::rng(11);
        let g = random::gaussian_matrix::<f64>(4, 4, &mut rng);
        let herm = g.add(&g.adjoint()).scale_re(0.5);
        let full = herm.trace();
        for keep in [Subsystem::A, Subsystem::B] {
            let pt = herm.partial_trace(2, 2, keep).unwrap();
            assert!((pt.trace() - full).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_composes_to_full_trace() {
        let mut rng = random::rng(13);
        let g = random::gaussian_matrix::<f64>(6, 6, &mut rng);
        let m = g.add(&g.adjoint()).scale_re(0.5);
        let a_then_trace = m.partial_trace(2, 3, Subsystem::A).unwrap().trace();
        assert!((a_then_trace - m.trace()).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let m = ComplexMatrix::<f64>::identity(5);
        assert!(matches!(
            m.partial_trace(2, 2, Subsystem::A),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn spectral_apply_log_of_identity_is_zero() {
        let i3 = ComplexMatrix::<f64>::identity(3);
        let log = spectral_apply(&i3, |x| x.log2(), SUPPORT_THRESHOLD);
        assert!(log.max_abs_entry() < 1e-14);
    }

    #[test]
    fn spectral_apply_sqrt_diagonal() {
        let m = ComplexMatrix::from_real_diag(&[4.0, 9.0]);
        let s = spectral_apply(&m, |x| x.sqrt(), SUPPORT_THRESHOLD);
        assert!(s.max_abs_diff(&ComplexMatrix::from_real_diag(&[2.0, 3.0])) < 1e-14);
    }

    #[test]
    fn spectral_apply_generalized_inverse_sqrt_fixes_null_space() {
        let m = ComplexMatrix::from_real_diag(&[4.0, 0.0]);
        let s = spectral_apply(&m, |x| x.powf(-0.5), SUPPORT_THRESHOLD);
        assert!(s.max_abs_diff(&ComplexMatrix::from_real_diag(&[0.5, 0.0])) < 1e-14);
    }

    #[test]
    fn spectral_apply_identity_reproduces_support() {
        let mut rng = random::rng(3);
        let g = random::gaussian_matrix::<f64>(4, 4, &mut rng);
        let psd = g.matmul(&g.adjoint());
        let back = spectral_apply(&psd, |x| x, SUPPORT_THRESHOLD);
        assert!(back.max_abs_diff(&psd) < 1e-10 * psd.max_abs_entry());
    }

    #[test]
    fn trace_product_matches_matmul_trace() {
        let mut rng = random::rng(5);
        let a = random::gaussian_matrix::<f64>(3, 3, &mut rng);
        let b = random::gaussian_matrix::<f64>(3, 3, &mut rng);
        let direct = a.trace_product(&b);
        let via_mul = a.matmul(&b).trace();
        assert_relative_eq!(direct.re, via_mul.re, epsilon = 1e-12);
        assert_relative_eq!(direct.im, via_mul.im, epsilon = 1e-12);
    }
}
