//! Exact O(n²) t-SNE.
//!
//! Input affinities are Gaussian conditionals calibrated per point to a
//! target perplexity by bisection on the precision `β = 1/(2σ²)`, then
//! symmetrized into joint probabilities. The embedding uses the Student-t
//! (one degree of freedom) kernel and is optimized by momentum gradient
//! descent on KL(P‖Q) with early exaggeration of P.

use crate::error::{Error, Result};
use crate::numerics::{pairwise_sq_dists, sq_dist, Matrix, RandomStream};
use crate::DrMethod;

/// Floor applied to affinities that end up inside a logarithm or a division.
pub const AFFINITY_FLOOR: f64 = 1e-12;

const PERPLEXITY_REL_TOL: f64 = 1e-5;
const MAX_BRACKET_STEPS: usize = 50;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct TsneParams {
    pub target_dim: usize,
    /// Requested perplexity; capped at `(n − 1)/3` for small inputs.
    pub perplexity: f64,
    pub iterations: usize,
    pub learning_rate: f64,
    pub initial_momentum: f64,
    pub final_momentum: f64,
    /// First iteration (0-based) that uses `final_momentum`.
    pub momentum_switch_iter: usize,
    pub exaggeration: f64,
    /// P is multiplied by `exaggeration` for iterations `0..exaggeration_iters`.
    pub exaggeration_iters: usize,
    /// Standard deviation of the gaussian initial layout.
    pub init_scale: f64,
    pub seed: u64,
}

impl Default for TsneParams {
    fn default() -> Self {
        Self {
            target_dim: 2,
            perplexity: 30.0,
            iterations: 1000,
            learning_rate: 200.0,
            initial_momentum: 0.5,
            final_momentum: 0.8,
            momentum_switch_iter: 250,
            exaggeration: 4.0,
            exaggeration_iters: 100,
            init_scale: 1e-4,
            seed: 0,
        }
    }
}

impl TsneParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.target_dim < 1 {
            return bad("t-SNE target dimension must be at least 1".into());
        }
        if !self.perplexity.is_finite() || self.perplexity < 2.0 {
            return bad(format!("perplexity must be >= 2, got {}", self.perplexity));
        }
        if self.iterations < 1 {
            return bad("t-SNE needs at least one iteration".into());
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            ));
        }
        for (name, m) in [
            ("initial_momentum", self.initial_momentum),
            ("final_momentum", self.final_momentum),
        ] {
            if !(0.0..1.0).contains(&m) {
                return bad(format!("{name} must lie in [0, 1), got {m}"));
            }
        }
        if !(self.exaggeration >= 1.0 && self.exaggeration.is_finite()) {
            return bad(format!("exaggeration must be >= 1, got {}", self.exaggeration));
        }
        if !(self.init_scale > 0.0 && self.init_scale.is_finite()) {
            return bad(format!("init scale must be positive, got {}", self.init_scale));
        }
        Ok(())
    }

    /// Perplexity actually used for `n` points.
    pub fn effective_perplexity(&self, n: usize) -> f64 {
        self.perplexity.min((n as f64 - 1.0) / 3.0)
    }
}

/// Affinities of one optimizer state.
#[derive(Debug, Clone)]
pub struct AffinityState {
    pub p: Matrix,
    pub sigmas: Vec<f64>,
    pub q: Matrix,
    pub z: f64,
}

#[derive(Debug, Clone)]
pub struct Embedding {
    pub y: Matrix,
    pub method: DrMethod,
    pub final_cost: f64,
    pub cost_history: Vec<f64>,
}

/// Finds `σ_i` so the conditional distribution `p_{·|i}` has perplexity
/// `2^H = perplexity`, and returns it with the row (`p_{i|i} = 0`).
pub fn calibrate_row(sq_dists_row: &[f64], i: usize, perplexity: f64) -> Result<(f64, Vec<f64>)> {
    let n = sq_dists_row.len();
    let fail = |message: String| Error::Calibration { point: i, message };
    if i >= n || n < 2 {
        return Err(fail(format!("row of length {n} has no neighbours for point {i}")));
    }
    if !(perplexity > 1.0 && perplexity <= (n - 1) as f64) {
        return Err(fail(format!("perplexity {perplexity} outside (1, {}]", n - 1)));
    }
    if sq_dists_row.iter().any(|d| !d.is_finite() || *d < 0.0) {
        return Err(fail("distances must be finite and non-negative".into()));
    }

    let target = perplexity.ln();
    let tol = PERPLEXITY_REL_TOL.ln_1p() * 0.5;
    let mut row = vec![0.0; n];

    let d_min = sq_dists_row
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &d)| d)
        .fold(f64::INFINITY, f64::min);
    let mean_gap = sq_dists_row
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &d)| d - d_min)
        .sum::<f64>()
        / (n - 1) as f64;

    // entropy in nats of the row at precision beta; fills `row`
    let entropy = |beta: f64, row: &mut [f64]| -> f64 {
        let mut sum = 0.0;
        let mut weighted = 0.0;
        for (j, (&d, p)) in sq_dists_row.iter().zip(row.iter_mut()).enumerate() {
            if j == i {
                *p = 0.0;
                continue;
            }
            let gap = d - d_min;
            let w = (-beta * gap).exp();
            *p = w;
            sum += w;
            weighted += w * gap;
        }
        for p in row.iter_mut() {
            *p /= sum;
        }
        sum.ln() + beta * weighted / sum
    };

    let mut beta = if mean_gap > 0.0 { 1.0 / mean_gap } else { 1.0 };
    let mut h = entropy(beta, &mut row);
    if (h - target).abs() <= tol {
        return Ok((sigma_from_beta(beta), row));
    }

    // H decreases as beta grows; bracket the target first.
    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    let mut steps = 0;
    loop {
        if h > target {
            lo = beta;
        } else {
            hi = beta;
        }
        if lo > 0.0 && hi.is_finite() {
            break;
        }
        if steps == MAX_BRACKET_STEPS {
            return Err(fail(format!(
                "could not bracket perplexity {perplexity} in {MAX_BRACKET_STEPS} doublings (entropy {:.6} vs target {:.6})",
                h, target
            )));
        }
        beta = if h > target { beta * 2.0 } else { beta / 2.0 };
        h = entropy(beta, &mut row);
        if (h - target).abs() <= tol {
            return Ok((sigma_from_beta(beta), row));
        }
        steps += 1;
    }

    for _ in 0..MAX_BISECTIONS {
        beta = 0.5 * (lo + hi);
        h = entropy(beta, &mut row);
        if (h - target).abs() <= tol {
            return Ok((sigma_from_beta(beta), row));
        }
        if h > target {
            lo = beta;
        } else {
            hi = beta;
        }
    }
    Err(fail(format!(
        "bisection stalled at entropy {h:.9} vs target {target:.9}"
    )))
}

fn sigma_from_beta(beta: f64) -> f64 {
    (0.5 / beta).sqrt()
}

/// Calibrated conditional affinities `p_{j|i}` (row `i`) and bandwidths.
pub fn conditional_affinities(sq_dists: &Matrix, perplexity: f64) -> Result<(Matrix, Vec<f64>)> {
    let n = sq_dists.rows();
    let mut cond = Matrix::zeros(n, n);
    let mut sigmas = Vec::with_capacity(n);
    for i in 0..n {
        let (sigma, row) = calibrate_row(sq_dists.row(i), i, perplexity)?;
        cond.row_mut(i).copy_from_slice(&row);
        sigmas.push(sigma);
    }
    Ok((cond, sigmas))
}

/// `p_ij = (p_{j|i} + p_{i|j}) / 2n`, floored at [`AFFINITY_FLOOR`] off the
/// diagonal and renormalized to sum to one.
pub fn joint_affinities(conditional: &Matrix) -> Matrix {
    let n = conditional.rows();
    let denom = 2.0 * n as f64;
    let mut p = Matrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = ((conditional[(i, j)] + conditional[(j, i)]) / denom).max(AFFINITY_FLOOR);
            p[(i, j)] = v;
            p[(j, i)] = v;
        }
    }
    let total = p.sum();
    if total > 0.0 {
        p.scale(1.0 / total);
    }
    p
}

/// Joint input affinities of `x` together with the bandwidths.
pub fn input_affinities(x: &Matrix, perplexity: f64) -> Result<(Matrix, Vec<f64>)> {
    let d = pairwise_sq_dists(x)?;
    let (cond, sigmas) = conditional_affinities(&d, perplexity)?;
    Ok((joint_affinities(&cond), sigmas))
}

/// Student-t kernel matrix `w_ij = 1/(1 + ‖y_i − y_j‖²)` (zero diagonal) and its sum `Z`.
fn kernel(y: &Matrix, w: &mut Matrix) -> f64 {
    let n = y.rows();
    let mut z = 0.0;
    for i in 0..n {
        w[(i, i)] = 0.0;
        let yi = y.row(i);
        for j in (i + 1)..n {
            let v = 1.0 / (1.0 + sq_dist(yi, y.row(j)));
            w[(i, j)] = v;
            w[(j, i)] = v;
        }
    }
    for i in 0..n {
        z += w.row(i).iter().sum::<f64>();
    }
    z
}

/// Normalized low-dimensional affinities `Q` and the normalizer `Z`.
pub fn low_dim_affinities(y: &Matrix) -> (Matrix, f64) {
    let n = y.rows();
    let mut q = Matrix::zeros(n, n);
    let z = kernel(y, &mut q);
    if z > 0.0 {
        q.scale(1.0 / z);
    }
    (q, z)
}

/// `KL(P‖Q) = Σ_{i≠j} p_ij ln(p_ij / q_ij)`, with `0·ln 0 = 0` and `q` floored.
pub fn kl_cost(p: &Matrix, q: &Matrix) -> f64 {
    let mut cost = 0.0;
    for (&pv, &qv) in p.as_slice().iter().zip(q.as_slice()) {
        if pv > 0.0 {
            cost += pv * (pv / qv.max(AFFINITY_FLOOR)).ln();
        }
    }
    cost
}

/// Row `i` is `4 Σ_{j≠i} (p_ij − q_ij)·q_ij·Z·(y_i − y_j)`.
pub fn kl_gradient(p: &Matrix, q: &Matrix, z: f64, y: &Matrix) -> Matrix {
    let mut grad = Matrix::zeros(y.rows(), y.cols());
    accumulate_gradient(p, 1.0, q, z, y, &mut grad);
    grad
}

/// Shared gradient kernel. `q` may be either the normalized `Q` (with its
/// `Z`) or the raw kernel `W = Q·Z` (pass `z` and set `q_is_raw`): the
/// optimizer uses the latter to avoid a rescale per iteration.
fn accumulate_gradient_impl(
    p: &Matrix,
    p_scale: f64,
    kernel_or_q: &Matrix,
    z: f64,
    q_is_raw: bool,
    y: &Matrix,
    grad: &mut Matrix,
) {
    let (n, d) = y.shape();
    let inv_z = 1.0 / z;
    let mut coeff = vec![0.0; n];
    for i in 0..n {
        let p_row = p.row(i);
        let k_row = kernel_or_q.row(i);
        let mut coeff_sum = 0.0;
        for j in 0..n {
            if j == i {
                coeff[j] = 0.0;
                continue;
            }
            let (qv, w) = if q_is_raw {
                (k_row[j] * inv_z, k_row[j])
            } else {
                (k_row[j], k_row[j] * z)
            };
            let c = (p_scale * p_row[j] - qv) * w;
            coeff[j] = c;
            coeff_sum += c;
        }
        let g = grad.row_mut(i);
        let yi = y.row(i);
        for k in 0..d {
            g[k] = coeff_sum * yi[k];
        }
        for (j, &c) in coeff.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let yj = y.row(j);
            for k in 0..d {
                g[k] -= c * yj[k];
            }
        }
        for v in g.iter_mut() {
            *v *= 4.0;
        }
    }
}

fn accumulate_gradient(p: &Matrix, p_scale: f64, q: &Matrix, z: f64, y: &Matrix, grad: &mut Matrix) {
    accumulate_gradient_impl(p, p_scale, q, z, false, y, grad);
}

/// Cost of the current raw kernel `w` against `p`, using a precomputed
/// `Σ p ln p`.
fn cost_from_kernel(p: &Matrix, p_log_p: f64, w: &Matrix, z: f64) -> f64 {
    let ln_z = z.ln();
    let mut cross = 0.0;
    for (&pv, &wv) in p.as_slice().iter().zip(w.as_slice()) {
        if pv > 0.0 {
            let q = wv / z;
            cross += pv
                * if q > AFFINITY_FLOOR {
                    wv.ln() - ln_z
                } else {
                    AFFINITY_FLOOR.ln()
                };
        }
    }
    p_log_p - cross
}

fn check_affinity_invariants(m: &Matrix, what: &str) {
    let n = m.rows();
    debug_assert!((m.sum() - 1.0).abs() <= 1e-8, "{what} does not sum to 1");
    debug_assert!(m.asymmetry() <= 1e-12, "{what} is not symmetric");
    debug_assert!((0..n).all(|i| m[(i, i)] == 0.0), "{what} has a nonzero diagonal");
}

/// Embeds the rows of `x` into `params.target_dim` dimensions.
pub fn tsne_embed(x: &Matrix, params: &TsneParams) -> Result<Embedding> {
    params.validate()?;
    let (n, _) = x.shape();
    if n < 5 {
        return Err(Error::InvalidInput(format!(
            "t-SNE needs at least 5 points, got {n}"
        )));
    }
    let (p, _sigmas) = input_affinities(x, params.effective_perplexity(n))?;
    optimize(&p, params)
}

/// Runs the gradient descent from a seeded gaussian layout for the given joint `P`.
pub fn optimize(p: &Matrix, params: &TsneParams) -> Result<Embedding> {
    params.validate()?;
    let n = p.rows();
    let d = params.target_dim;
    check_affinity_invariants(p, "P");

    let mut rng = RandomStream::new(params.seed);
    let init: Vec<f64> = (0..n * d).map(|_| params.init_scale * rng.gaussian()).collect();
    let mut y = Matrix::from_vec(n, d, init)?;

    let p_log_p: f64 = p
        .as_slice()
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v * v.ln())
        .sum();

    let mut w = Matrix::zeros(n, n);
    let mut z = kernel(&y, &mut w);
    let mut grad = Matrix::zeros(n, d);
    let mut velocity = Matrix::zeros(n, d);
    let mut history = Vec::with_capacity(params.iterations);

    for iter in 0..params.iterations {
        let p_scale = if iter < params.exaggeration_iters {
            params.exaggeration
        } else {
            1.0
        };
        accumulate_gradient_impl(p, p_scale, &w, z, true, &y, &mut grad);

        let momentum = if iter < params.momentum_switch_iter {
            params.initial_momentum
        } else {
            params.final_momentum
        };
        for ((v, g), yv) in velocity
            .as_mut_slice()
            .iter_mut()
            .zip(grad.as_slice())
            .zip(y.as_mut_slice())
        {
            *v = momentum * *v - params.learning_rate * g;
            *yv += *v;
        }
        center_columns(&mut y);

        z = kernel(&y, &mut w);
        let cost = cost_from_kernel(p, p_log_p, &w, z);
        if !cost.is_finite() || !(z.is_finite() && z > 0.0) {
            return Err(Error::Divergence {
                iteration: iter,
                learning_rate: params.learning_rate,
            });
        }
        history.push(cost);

        if cfg!(debug_assertions) && iter % 100 == 0 {
            let mut q = w.clone();
            q.scale(1.0 / z);
            check_affinity_invariants(&q, "Q");
        }
    }

    Ok(Embedding {
        y,
        method: DrMethod::Tsne,
        final_cost: *history.last().expect("iterations >= 1"),
        cost_history: history,
    })
}

fn center_columns(y: &mut Matrix) {
    let (n, d) = y.shape();
    let mut mean = vec![0.0; d];
    for row in y.row_iter() {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    for i in 0..n {
        for (v, m) in y.row_mut(i).iter_mut().zip(&mean) {
            *v -= m;
        }
    }
}

/// Affinity state of a finished embedding, for diagnostics.
pub fn affinity_state(x: &Matrix, y: &Matrix, perplexity: f64) -> Result<AffinityState> {
    let (p, sigmas) = input_affinities(x, perplexity)?;
    let (q, z) = low_dim_affinities(y);
    Ok(AffinityState { p, sigmas, q, z })
}
