//! Capacity computations: numerical maximization of the quantum mutual
//! information over input states, closed forms for the depolarizing
//! channel, one-shot capacity of unital qubit channels, and the
//! inequality / ratio analyses relating the assisted and unassisted
//! capacities.

use num_complex::Complex;
use serde::Serialize;

use crate::channel::QuantumChannel;
use crate::entropy::von_neumann;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::random;
use crate::scalar::Real;
use crate::state::DensityMatrix;
use crate::wire::{matrix_to_wire, MatrixWire};

/// Optimizer settings. `seed` fully determines the random restarts.
#[derive(Debug, Clone)]
pub struct OptimizerConfig<T> {
    pub restarts: usize,
    pub tol: T,
    pub max_iters: usize,
    pub seed: u64,
}

impl<T: Real> Default for OptimizerConfig<T> {
    fn default() -> Self {
        Self {
            restarts: 8,
            tol: T::of(1e-10),
            max_iters: 5000,
            seed: 0,
        }
    }
}

/// Result of a capacity computation.
#[derive(Debug, Clone)]
pub struct CapacityReport<T> {
    /// Best value found, in bits.
    pub value: T,
    /// Input state achieving the best value.
    pub maximizer: DensityMatrix<T>,
    /// Total ascent iterations across restarts.
    pub iterations: usize,
    /// Euclidean norm of the last numeric gradient at the best point.
    pub gradient_norm: T,
    /// Closed-form cross-check, when one exists for the channel.
    pub closed_form: Option<T>,
    /// Whether every restart met the convergence rule before the cap.
    pub converged: bool,
}

/// Serializable form of [`CapacityReport`].
#[derive(Debug, Clone, Serialize)]
pub struct CapacityReportWire {
    pub value_bits: f64,
    pub maximizer: MatrixWire,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub closed_form_bits: Option<f64>,
    pub converged: bool,
    pub assumptions: Vec<String>,
}

impl<T: Real> CapacityReport<T> {
    pub fn to_wire(&self, assumptions: Vec<String>) -> CapacityReportWire {
        CapacityReportWire {
            value_bits: self.value.to_f64().unwrap_or(f64::NAN),
            maximizer: matrix_to_wire(self.maximizer.matrix()),
            iterations: self.iterations,
            gradient_norm: self.gradient_norm.to_f64().unwrap_or(f64::NAN),
            closed_form_bits: self.closed_form.map(|x| x.to_f64().unwrap_or(f64::NAN)),
            converged: self.converged,
            assumptions,
        }
    }
}

// ---------------------------------------------------------------------------
// Mutual-information maximization
// ---------------------------------------------------------------------------

/// Evaluates `I(S(X); Φ)` with `S = X X† / Tr(X X†)` and channel data
/// precomputed for the Gram-matrix entropy exchange.
struct Objective<'a, T> {
    channel: &'a QuantumChannel<T>,
    /// `A_j† A_i` in row-major (i, j) order.
    gram_basis: Vec<ComplexMatrix<T>>,
}

impl<'a, T: Real> Objective<'a, T> {
    fn new(channel: &'a QuantumChannel<T>) -> Self {
        let k = channel.kraus().len();
        let mut gram_basis = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                gram_basis.push(channel.kraus()[j].adjoint().matmul(&channel.kraus()[i]));
            }
        }
        Self { channel, gram_basis }
    }

    fn state_from_params(&self, params: &[T]) -> DensityMatrix<T> {
        let d = self.channel.dim_in();
        let x = ComplexMatrix::from_fn(d, d, |i, j| {
            let idx = 2 * (i * d + j);
            Complex::new(params[idx], params[idx + 1])
        });
        let psd = x.matmul(&x.adjoint());
        let tr = psd.trace().re;
        DensityMatrix::from_matrix_unchecked(psd.scale_re(T::one() / tr))
    }

    fn eval_state(&self, s: &DensityMatrix<T>) -> T {
        let k = self.channel.kraus().len();
        let mut w = ComplexMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                w[(i, j)] = s.matrix().trace_product(&self.gram_basis[i * k + j]);
            }
        }
        let exchange = crate::entropy::matrix_entropy(&w);
        let out = DensityMatrix::from_matrix_unchecked(self.channel.apply_op(s.matrix()));
        von_neumann(s) + von_neumann(&out) - exchange
    }

    fn eval(&self, params: &[T]) -> T {
        self.eval_state(&self.state_from_params(params))
    }
}

/// One gradient-ascent run from a fixed starting factor.
struct RestartOutcome<T> {
    value: T,
    params: Vec<T>,
    iterations: usize,
    gradient_norm: T,
    converged: bool,
}

fn ascend<T: Real>(
    objective: &Objective<'_, T>,
    mut params: Vec<T>,
    cfg: &OptimizerConfig<T>,
) -> RestartOutcome<T> {
    let grad_step = T::of(1e-5);
    let mut value = objective.eval(&params);
    let mut step = T::of(0.1);
    let mut stable = 0usize;
    let mut iterations = 0usize;
    let mut grad_norm = T::zero();
    let mut converged = false;

    while iterations < cfg.max_iters {
        iterations += 1;

        // Central-difference gradient.
        let mut grad = vec![T::zero(); params.len()];
        for i in 0..params.len() {
            let saved = params[i];
            params[i] = saved + grad_step;
            let up = objective.eval(&params);
            params[i] = saved - grad_step;
            let down = objective.eval(&params);
            params[i] = saved;
            grad[i] = (up - down) / (T::of(2.0) * grad_step);
        }
        grad_norm = grad
            .iter()
            .map(|&g| g * g)
            .fold(T::zero(), |a, b| a + b)
            .sqrt();

        // Backtracking step: accept only strict improvement.
        let mut accepted = false;
        let mut trial_value = value;
        let mut trial: Vec<T> = params.clone();
        while step > T::of(1e-16) {
            for (t, (p, g)) in trial.iter_mut().zip(params.iter().zip(&grad)) {
                *t = *p + step * *g;
            }
            trial_value = objective.eval(&trial);
            if trial_value > value {
                accepted = true;
                break;
            }
            step *= T::of(0.5);
        }

        if accepted {
            let rel = (trial_value - value) / value.abs().max(T::of(1e-12));
            params.copy_from_slice(&trial);
            value = trial_value;
            step *= T::of(1.3);
            if rel < cfg.tol {
                stable += 1;
            } else {
                stable = 0;
            }
        } else {
            // No ascent direction at this resolution.
            stable += 1;
            step = T::of(1e-3);
        }

        if stable >= 20 {
            converged = true;
            break;
        }
    }

    RestartOutcome {
        value,
        params,
        iterations,
        gradient_norm: grad_norm,
        converged,
    }
}

/// Maximizes `I(S; Φ)` over the density-matrix simplex.
///
/// States are parameterized as `S = X X† / Tr(X X†)` over complex d×d
/// factors, keeping iterates feasible; the functional is concave in `S`,
/// so gradient ascent with restarts reaches the global maximum. The
/// first restart starts at the chaotic state; a later restart replaces
/// the incumbent only when it improves the value beyond 1e-9, so exact
/// ties (flat objectives) keep the symmetric maximizer.
pub fn maximize_mutual_info<T: Real>(
    channel: &QuantumChannel<T>,
    cfg: &OptimizerConfig<T>,
) -> Result<CapacityReport<T>> {
    let d = channel.dim_in();
    if d > 8 {
        return Err(Error::BudgetExceeded {
            what: format!("mutual-information optimizer supports dim_in <= 8, got {d}"),
        });
    }
    let objective = Objective::new(channel);
    let mut rng = random::rng(cfg.seed);

    let mut best: Option<RestartOutcome<T>> = None;
    let mut total_iterations = 0usize;
    let mut all_converged = true;

    for restart in 0..cfg.restarts.max(1) {
        let start: Vec<T> = if restart == 0 {
            // X = I gives the chaotic state.
            let mut p = vec![T::zero(); 2 * d * d];
            for i in 0..d {
                p[2 * (i * d + i)] = T::one();
            }
            p
        } else {
            let g = random::gaussian_matrix::<T>(d, d, &mut rng);
            let mut p = Vec::with_capacity(2 * d * d);
            for i in 0..d {
                for j in 0..d {
                    p.push(g[(i, j)].re);
                    p.push(g[(i, j)].im);
                }
            }
            p
        };
        let outcome = ascend(&objective, start, cfg);
        total_iterations += outcome.iterations;
        all_converged &= outcome.converged;
        let improves = match &best {
            None => true,
            Some(b) => outcome.value > b.value + T::of(1e-9),
        };
        if improves {
            best = Some(outcome);
        }
    }

    let best = best.expect("at least one restart");
    Ok(CapacityReport {
        value: best.value,
        maximizer: objective.state_from_params(&best.params),
        iterations: total_iterations,
        gradient_norm: best.gradient_norm,
        closed_form: None,
        converged: all_converged,
    })
}

// ---------------------------------------------------------------------------
// Depolarizing closed forms
// ---------------------------------------------------------------------------

fn depolarizing_range_check<T: Real>(d: usize, p: T) -> Result<()> {
    crate::channel::DepolarizingParams::new(d, p).map(|_| ())
}

/// Entanglement-assisted capacity of the d-depolarizing channel:
/// `log₂ d² + (1 - p(d²-1)/d²) log₂(1 - p(d²-1)/d²) + p(d²-1)/d² · log₂(p/d²)`.
pub fn ea_capacity_depolarizing<T: Real>(d: usize, p: T) -> Result<T> {
    depolarizing_range_check(d, p)?;
    let dd = T::of_usize(d * d);
    let a = (T::one() - p * (dd - T::one()) / dd).max(T::zero());
    let b = p * (dd - T::one()) / dd;
    let mut value = dd.log2();
    if a > T::zero() {
        value += a * a.log2();
    }
    if b > T::zero() {
        value += b * (p / dd).log2();
    }
    Ok(value)
}

/// One-shot unassisted capacity of the d-depolarizing channel:
/// `log₂ d + (1 - p(d-1)/d) log₂(1 - p(d-1)/d) + p(d-1)/d · log₂(p/d)`,
/// achieved by an equiprobable orthonormal-basis ensemble.
pub fn one_shot_capacity_depolarizing<T: Real>(d: usize, p: T) -> Result<T> {
    depolarizing_range_check(d, p)?;
    let df = T::of_usize(d);
    let a = T::one() - p * (df - T::one()) / df;
    let b = p * (df - T::one()) / df;
    let mut value = df.log2();
    if a > T::zero() {
        value += a * a.log2();
    }
    if b > T::zero() {
        value += b * (p / df).log2();
    }
    Ok(value)
}

// ---------------------------------------------------------------------------
// Unital qubit one-shot capacity
// ---------------------------------------------------------------------------

/// One-shot capacity of a unital qubit channel:
/// `1 - min_ψ H(Φ[ψ])` over pure inputs, located by a Bloch-sphere grid
/// refined with local descent (value tolerance 1e-8).
///
/// Relies on the standard structure of unital qubit channels: the
/// optimal ensemble is a pair of orthogonal minimal-output-entropy pure
/// states. Reports carry this as an explicit assumption.
pub fn one_shot_capacity_unital_qubit<T: Real>(
    channel: &QuantumChannel<T>,
    grid: usize,
) -> Result<T> {
    let half = DensityMatrix::<T>::maximally_mixed(2);
    let fixed = channel.apply(&half)?;
    if fixed.matrix().max_abs_diff(half.matrix()) > T::of(1e-10) {
        return Err(Error::InvalidProbabilities {
            reason: "channel does not fix the chaotic state".into(),
        });
    }

    let output_entropy = |theta: T, phi: T| -> T {
        let amps = vec![
            Complex::new((theta * T::of(0.5)).cos(), T::zero()),
            Complex::from_polar((theta * T::of(0.5)).sin(), phi),
        ];
        let rho = ComplexMatrix::outer(&amps, &amps);
        crate::entropy::matrix_entropy(&channel.apply_op(&rho))
    };

    // Fibonacci-lattice grid over the sphere.
    let n = grid.max(8);
    let golden = (T::one() + T::of(5.0).sqrt()) * T::of(0.5);
    let mut best = (T::zero(), T::zero(), T::infinity());
    for k in 0..n {
        let frac = (T::of_usize(k) + T::of(0.5)) / T::of_usize(n);
        let theta = (T::one() - T::of(2.0) * frac).acos();
        let phi = T::of(2.0) * T::PI() * (T::of_usize(k) / golden).fract();
        let h = output_entropy(theta, phi);
        if h < best.2 {
            best = (theta, phi, h);
        }
    }

    // Local descent on (theta, phi) with shrinking steps.
    let (mut theta, mut phi, mut h) = best;
    let mut step = T::PI() / T::of_usize(n.min(64));
    while step > T::of(1e-9) {
        let mut improved = false;
        for (dt, dp) in [
            (step, T::zero()),
            (-step, T::zero()),
            (T::zero(), step),
            (T::zero(), -step),
        ] {
            let cand = output_entropy(theta + dt, phi + dp);
            if cand + T::of(1e-14) < h {
                theta += dt;
                phi += dp;
                h = cand;
                improved = true;
            }
        }
        if !improved {
            step *= T::of(0.5);
        }
    }
    Ok(T::one() - h)
}

// ---------------------------------------------------------------------------
// Inequality and ratio analyses
// ---------------------------------------------------------------------------

/// Margin of the additivity-probing inequality: `C^(1) + log₂ d - C_ea`.
/// Nonnegative margins uphold the conjectured bound.
pub fn inequality_margin<T: Real>(c_ea: T, c1: T, d: usize) -> T {
    c1 + T::of_usize(d).log2() - c_ea
}

/// Checks the inequality for a channel with the given one-shot capacity,
/// computing `C_ea` with the optimizer.
pub fn check_inequality<T: Real>(
    channel: &QuantumChannel<T>,
    c1: T,
    cfg: &OptimizerConfig<T>,
) -> Result<T> {
    let report = maximize_mutual_info(channel, cfg)?;
    Ok(inequality_margin(report.value, c1, channel.dim_in()))
}

/// Capacities and their ratio at the extreme depolarizing parameter
/// `p = d²/(d²-1)`:
/// `C_ea = log₂(d²/(d²-1))`,
/// `C^(1) = (1/(d+1)) log₂(d/(d+1)) + (d/(d+1)) log₂(d²/(d²-1))`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExtremeRatio {
    pub d: usize,
    pub p: f64,
    pub c_ea: f64,
    pub c1: f64,
    pub ratio: f64,
    /// Asymptotic line 2(d+1).
    pub bound_2d2: f64,
}

pub fn ratio_extreme(d: usize) -> ExtremeRatio {
    assert!(d >= 2, "extreme ratio needs d >= 2");
    let df = d as f64;
    let dd = df * df;
    let c_ea = (dd / (dd - 1.0)).log2();
    let c1 = (df / (df + 1.0)).log2() / (df + 1.0) + df / (df + 1.0) * (dd / (dd - 1.0)).log2();
    ExtremeRatio {
        d,
        p: dd / (dd - 1.0),
        c_ea,
        c1,
        ratio: c_ea / c1,
        bound_2d2: 2.0 * (df + 1.0),
    }
}

/// `C_ea/C^(1)` for the depolarizing channel near strong noise; the
/// ratio approaches `d+1` as `p → 1` while both capacities vanish.
pub fn strong_noise_ratio<T: Real>(d: usize, p: T) -> Result<T> {
    let c_ea = ea_capacity_depolarizing(d, p)?;
    let c1 = one_shot_capacity_depolarizing(d, p)?;
    if c1.abs() < T::of(1e-300) {
        return Err(Error::UndefinedRatio);
    }
    Ok(c_ea / c1)
}

/// One row of the depolarizing sweep table.
#[derive(Debug, Clone, Serialize)]
pub struct DepolRow {
    pub d: usize,
    pub p: f64,
    pub c_ea: f64,
    pub c1: f64,
    /// Undefined where both capacities vanish (p = 1).
    pub ratio: Option<f64>,
    pub margin: f64,
}

/// Closed-form sweep over a parameter grid.
pub fn depolarizing_table(d: usize, p_grid: &[f64]) -> Result<Vec<DepolRow>> {
    p_grid
        .iter()
        .map(|&p| {
            let c_ea = ea_capacity_depolarizing(d, p)?;
            let c1 = one_shot_capacity_depolarizing(d, p)?;
            let ratio = if c1.abs() < 1e-300 { None } else { Some(c_ea / c1) };
            Ok(DepolRow {
                d,
                p,
                c_ea,
                c1,
                ratio,
                margin: inequality_margin(c_ea, c1, d),
            })
        })
        .collect()
}
