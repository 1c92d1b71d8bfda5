//! Hermitian eigendecomposition.
//!
//! Complex Householder reduction to real symmetric tridiagonal form,
//! followed by the implicit-shift QL iteration with eigenvector
//! accumulation (the classic tql2 scheme). Suited to the dense sizes
//! this crate works with (up to a few thousand).

use num_complex::Complex;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Spectral decomposition of a Hermitian matrix: `V Λ V† = M`.
#[derive(Debug, Clone)]
pub struct HermitianEigenSystem<T> {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<T>,
    /// Unitary matrix whose k-th column is the k-th eigenvector.
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigenSystem<T> {
    /// k-th eigenvector as an owned column.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex<T>> {
        (0..self.eigenvectors.rows())
            .map(|i| self.eigenvectors[(i, k)])
            .collect()
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in 0..n {
                acc += v[(i, k)] * Complex::new(self.eigenvalues[k], T::zero()) * v[(j, k)].conj();
            }
            acc
        })
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is checked against [`super::HERMITICITY_TOL`] (scaled by the
/// matrix magnitude) and symmetrized before the reduction, so the result
/// is exactly the decomposition of `(M + M†)/2`.
pub fn herm_eig<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEigenSystem<T>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let scale = m.max_abs_entry().max(T::one());
    let dev = m.hermiticity_deviation();
    if dev > T::of(super::HERMITICITY_TOL) * scale {
        return Err(Error::NotHermitian {
            deviation: dev.to_f64().unwrap_or(f64::NAN),
        });
    }

    let n = m.rows();
    if n == 0 {
        return Ok(HermitianEigenSystem {
            eigenvalues: vec![],
            eigenvectors: ComplexMatrix::zeros(0, 0),
        });
    }

    let mut a = m.symmetrize();
    let mut q = ComplexMatrix::<T>::identity(n);

    // Householder reduction to complex tridiagonal form.
    for k in 0..n.saturating_sub(2) {
        let mut xnorm2 = T::zero();
        for i in k + 1..n {
            xnorm2 += a[(i, k)].norm_sqr();
        }
        let xnorm = xnorm2.sqrt();
        if xnorm <= T::zero() {
            continue;
        }
        let a0 = a[(k + 1, k)];
        let a0n = a0.norm();
        let phase = if a0n > T::zero() {
            a0 / Complex::new(a0n, T::zero())
        } else {
            Complex::new(T::one(), T::zero())
        };

        // v = x + phase * ||x|| * e1, normalized.
        let mut v: Vec<Complex<T>> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] += phase * Complex::new(xnorm, T::zero());
        let vnorm = super::vec_norm(&v);
        if vnorm <= T::zero() {
            continue;
        }
        for z in v.iter_mut() {
            *z /= Complex::new(vnorm, T::zero());
        }

        // Column k collapses to a single subdiagonal entry.
        let beta = -phase * Complex::new(xnorm, T::zero());
        a[(k + 1, k)] = beta;
        a[(k, k + 1)] = beta.conj();
        for i in k + 2..n {
            a[(i, k)] = Complex::new(T::zero(), T::zero());
            a[(k, i)] = Complex::new(T::zero(), T::zero());
        }

        // Trailing block: B <- (I - 2vv†) B (I - 2vv†)
        //              = B - 2 v u† - 2 u v†, u = Bv - (v†Bv) v.
        let nb = n - (k + 1);
        let mut w = vec![Complex::new(T::zero(), T::zero()); nb];
        for (i, wi) in w.iter_mut().enumerate() {
            let mut acc = Complex::new(T::zero(), T::zero());
            for j in 0..nb {
                acc += a[(k + 1 + i, k + 1 + j)] * v[j];
            }
            *wi = acc;
        }
        let kappa = super::inner(&v, &w).re;
        let u: Vec<Complex<T>> = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| wi - vi * Complex::new(kappa, T::zero()))
            .collect();
        let two = Complex::new(T::of(2.0), T::zero());
        for i in 0..nb {
            for j in 0..nb {
                let delta = v[i] * u[j].conj() + u[i] * v[j].conj();
                a[(k + 1 + i, k + 1 + j)] -= two * delta;
            }
        }

        // Accumulate Q <- Q (I - 2vv†) on columns k+1..n.
        for r in 0..n {
            let mut t = Complex::new(T::zero(), T::zero());
            for (j, vj) in v.iter().enumerate() {
                t += q[(r, k + 1 + j)] * vj;
            }
            for (j, vj) in v.iter().enumerate() {
                q[(r, k + 1 + j)] -= two * t * vj.conj();
            }
        }
    }

    // Phase similarity making the subdiagonal real non-negative.
    let mut d: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut e = vec![T::zero(); n]; // e[l] couples l and l+1
    let mut delta = Complex::new(T::one(), T::zero());
    for i in 1..n {
        let sub = a[(i, i - 1)];
        let subn = sub.norm();
        let new_delta = if subn > T::zero() {
            (sub / Complex::new(subn, T::zero())) * delta
        } else {
            delta
        };
        e[i - 1] = subn;
        for r in 0..n {
            q[(r, i)] *= new_delta;
        }
        delta = new_delta;
    }

    tql2(&mut d, &mut e, &mut q)?;

    // Ascending sort with eigenvector columns.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("finite eigenvalues"));
    let eigenvalues: Vec<T> = order.iter().map(|&i| d[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| q[(i, order[j])]);

    Ok(HermitianEigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Implicit-shift QL iteration on a real symmetric tridiagonal matrix,
/// accumulating the rotations into the complex columns of `q`.
fn tql2<T: Real>(d: &mut [T], e: &mut [T], q: &mut ComplexMatrix<T>) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    e[n - 1] = T::zero();

    let eps = T::epsilon();
    let mut f = T::zero();
    let mut tst1 = T::zero();

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0usize;
            loop {
                iter += 1;
                if iter > 64 {
                    return Err(Error::EigNoConvergence);
                }

                let g = d[l];
                let two = T::of(2.0);
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for i in l + 2..n {
                    d[i] -= h;
                }
                f += h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let gg = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * gg;
                    d[i + 1] = h + s * (c * gg + s * d[i]);

                    let (cs, ss) = (
                        Complex::new(c, T::zero()),
                        Complex::new(s, T::zero()),
                    );
                    for k in 0..q.rows() {
                        let hq = q[(k, i + 1)];
                        q[(k, i + 1)] = ss * q[(k, i)] + cs * hq;
                        q[(k, i)] = cs * q[(k, i)] - ss * hq;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
    Ok(())
}
