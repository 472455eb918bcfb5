//! Gradient-descent energy minimization on the torus.
//!
//! An independent numeric oracle for the linear-programming bounds: minimize
//! the periodic Gaussian pair energy `E(ω) = Σ_{i≠j} F_{a,Φ}(x_i − x_j)` over
//! `n`-point configurations `ω ⊂ ℝ^d/Φ` by random-restart gradient descent
//! with backtracking line search.  One point is pinned at the origin to
//! quotient translations; no further symmetry reduction is attempted, since
//! only the minimal energy value matters.
//!
//! The gradient is the term-by-term derivative of the truncated lattice sum,
//! using the same truncation window as the energy itself, so the pair
//! `(energy, gradient)` is consistent to the summation tail (`< 1e−16`).

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::energy::{EnergyError, GaussianPotential};
use crate::lattice::{Configuration, Lattice};

#[derive(Debug, Error)]
pub enum OptimizerError {
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error("optimization requires at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("restarts must be ≥ 1")]
    NoRestarts,
}

/// Configuration of a minimization run; deterministic given `seed`.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct OptimizerConfig {
    pub n: usize,
    #[serde(skip, default = "Lattice::rect_l")]
    pub lattice: Lattice,
    pub a: f64,
    pub restarts: usize,
    pub max_iters: usize,
    /// Initial line-search step, reused across iterations with growth on
    /// success and halving on failure.
    pub initial_step: f64,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    /// Gradient-norm stopping threshold.
    pub grad_tol: f64,
    pub seed: u64,
}

impl OptimizerConfig {
    pub fn new(n: usize, lattice: Lattice, a: f64, seed: u64) -> Self {
        OptimizerConfig {
            n,
            lattice,
            a,
            restarts: 50,
            max_iters: 2000,
            initial_step: 0.1,
            armijo: 1e-4,
            grad_tol: 1e-12,
            seed,
        }
    }
}

/// Outcome of a minimization run; `best_energy` is the minimum over the
/// restart energies.
#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub best_energy: f64,
    pub best_config: Configuration,
    pub restart_energies: Vec<f64>,
    pub converged: Vec<bool>,
}

/// Maximum lattice dimension handled by the flat hot-path buffers.
const MAX_DIM: usize = 4;

/// Cached truncation window: the energy reduces every difference vector into
/// the fundamental parallelepiped, whose diameter bounds the extra radius
/// needed beyond the potential's own truncation radius.  Window points and
/// the generator/inverse pair are stored flat so the inner loops allocate
/// nothing.
struct Workspace {
    a: f64,
    dim: usize,
    /// Column-major generator and its inverse, as `dim × dim` flats.
    gen: Vec<f64>,
    inv_gen: Vec<f64>,
    /// Window points flattened, `dim` floats per point.
    window: Vec<f64>,
}

impl Workspace {
    fn new(a: f64, lattice: Lattice) -> Self {
        let pot = GaussianPotential::new(a, lattice);
        let dim = pot.lattice.dim();
        assert!(dim <= MAX_DIM, "optimizer supports dimension ≤ {MAX_DIM}");
        let diam: f64 = (0..dim)
            .map(|j| pot.lattice.generator().column(j).norm())
            .sum();
        let mut window = Vec::new();
        for v in pot.lattice.points_within(pot.truncation_radius + diam) {
            window.extend(v.iter().copied());
        }
        let inv = pot
            .lattice
            .generator()
            .clone()
            .try_inverse()
            .expect("lattice generator is invertible");
        Workspace {
            a,
            dim,
            gen: pot.lattice.generator().as_slice().to_vec(),
            inv_gen: inv.as_slice().to_vec(),
            window,
        }
    }

    /// Reduce `x` into the fundamental parallelepiped.
    fn reduce(&self, x: &[f64], out: &mut [f64]) {
        let d = self.dim;
        let mut frac = [0.0_f64; MAX_DIM];
        for i in 0..d {
            let mut c = 0.0;
            // Column-major: inv[i + j*d] is entry (i, j).
            for j in 0..d {
                c += self.inv_gen[i + j * d] * x[j];
            }
            frac[i] = c - c.floor();
        }
        for i in 0..d {
            let mut y = 0.0;
            for j in 0..d {
                y += self.gen[i + j * d] * frac[j];
            }
            out[i] = y;
        }
    }

    /// Periodized pair potential at `x`, optionally accumulating the
    /// gradient into `grad`.
    fn pair(&self, x: &[f64], mut grad: Option<&mut [f64]>) -> f64 {
        let d = self.dim;
        let mut xr = [0.0_f64; MAX_DIM];
        self.reduce(x, &mut xr[..d]);
        let mut e = 0.0;
        for v in self.window.chunks_exact(d) {
            let mut s = 0.0;
            let mut y = [0.0_f64; MAX_DIM];
            for i in 0..d {
                y[i] = xr[i] + v[i];
                s += y[i] * y[i];
            }
            let w = (-self.a * s).exp();
            e += w;
            if let Some(g) = grad.as_deref_mut() {
                for i in 0..d {
                    g[i] -= 2.0 * self.a * w * y[i];
                }
            }
        }
        e
    }

    /// Total ordered-pair energy over the pinned-origin configuration given
    /// by the free points (flattened, `dim` floats each), optionally with
    /// the gradient with respect to the free points.
    fn energy_grad(&self, free: &[f64], mut grads: Option<&mut [f64]>) -> f64 {
        let d = self.dim;
        let m = free.len() / d;
        let n = m + 1;
        if let Some(g) = grads.as_deref_mut() {
            g.fill(0.0);
        }
        let point = |i: usize| -> [f64; MAX_DIM] {
            let mut p = [0.0_f64; MAX_DIM];
            if i > 0 {
                p[..d].copy_from_slice(&free[(i - 1) * d..i * d]);
            }
            p
        };
        let mut energy = 0.0;
        let mut diff = [0.0_f64; MAX_DIM];
        for i in 0..n {
            let pi = point(i);
            for j in 0..n {
                if i == j {
                    continue;
                }
                let pj = point(j);
                for k in 0..d {
                    diff[k] = pi[k] - pj[k];
                }
                // The ordered sum counts each unordered pair twice; the
                // gradient contribution of the (i,j) summand lands on the
                // i-th point, its mirror on the j-th.
                let slot = if i > 0 {
                    grads
                        .as_deref_mut()
                        .map(|g| &mut g[(i - 1) * d..i * d])
                } else {
                    None
                };
                energy += self.pair(&diff[..d], slot);
            }
        }
        energy
    }

    fn energy(&self, free: &[f64]) -> f64 {
        self.energy_grad(free, None)
    }
}

/// Gradient descent with backtracking line search from a fixed start.
/// Returns the final energy, the free points, and the convergence flag
/// (gradient norm below tolerance).
fn descend_free(
    ws: &Workspace,
    cfg: &OptimizerConfig,
    mut free: Vec<f64>,
) -> (f64, Vec<f64>, bool) {
    let mut energy = ws.energy(&free);
    let mut step = cfg.initial_step;
    let mut converged = false;
    let mut grads = vec![0.0; free.len()];
    let mut trial = vec![0.0; free.len()];
    for _ in 0..cfg.max_iters {
        energy = ws.energy_grad(&free, Some(&mut grads));
        let grad_sq: f64 = grads.iter().map(|g| g * g).sum();
        if grad_sq.sqrt() < cfg.grad_tol {
            converged = true;
            break;
        }
        let mut accepted = false;
        while step > 1e-18 {
            for (t, (x, g)) in trial.iter_mut().zip(free.iter().zip(&grads)) {
                *t = x - step * g;
            }
            let e_trial = ws.energy(&trial);
            if e_trial <= energy - cfg.armijo * step * grad_sq {
                std::mem::swap(&mut free, &mut trial);
                energy = e_trial;
                step = (step * 1.5).min(1.0);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // The line search bottomed out at floating-point resolution:
            // treat as a stationary point.
            converged = grad_sq.sqrt() < 1e-7;
            break;
        }
    }
    (energy, free, converged)
}

/// Assemble a pinned-origin configuration from flat free coordinates.
fn to_configuration(free: &[f64], lattice: &Lattice) -> Configuration {
    let dim = lattice.dim();
    let mut points = vec![DVector::zeros(dim)];
    for chunk in free.chunks_exact(dim) {
        points.push(DVector::from_column_slice(chunk));
    }
    Configuration::new(points, lattice.clone())
}

/// Descend from a caller-supplied full configuration (first point is
/// translated to the origin first).
pub fn descend(
    cfg: &OptimizerConfig,
    start: &Configuration,
) -> Result<(f64, Configuration, bool), OptimizerError> {
    if start.len() < 2 {
        return Err(OptimizerError::TooFewPoints(start.len()));
    }
    let ws = Workspace::new(cfg.a, cfg.lattice.clone());
    let base = start.points[0].clone();
    let mut free = Vec::with_capacity((start.len() - 1) * cfg.lattice.dim());
    for p in &start.points[1..] {
        free.extend((p - &base).iter().copied());
    }
    let (energy, free, converged) = descend_free(&ws, cfg, free);
    Ok((energy, to_configuration(&free, &cfg.lattice), converged))
}

/// Random-restart minimization.  Restart `k` draws its initial free points
/// uniformly from the fundamental parallelepiped using an independent
/// ChaCha stream derived from `(seed, k)`, so the result is deterministic
/// regardless of scheduling.
pub fn minimize(cfg: &OptimizerConfig) -> Result<OptimizationResult, OptimizerError> {
    if cfg.n < 2 {
        return Err(OptimizerError::TooFewPoints(cfg.n));
    }
    if cfg.restarts == 0 {
        return Err(OptimizerError::NoRestarts);
    }
    let ws = Workspace::new(cfg.a, cfg.lattice.clone());
    let dim = cfg.lattice.dim();
    let results: Vec<(f64, Vec<f64>, bool)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            let mut free = Vec::with_capacity((cfg.n - 1) * dim);
            for _ in 1..cfg.n {
                let coords =
                    DVector::from_iterator(dim, (0..dim).map(|_| rng.gen::<f64>()));
                free.extend((cfg.lattice.generator() * coords).iter().copied());
            }
            descend_free(&ws, cfg, free)
        })
        .collect();
    let restart_energies: Vec<f64> = results.iter().map(|r| r.0).collect();
    let converged: Vec<bool> = results.iter().map(|r| r.2).collect();
    let best_idx = restart_energies
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap().then(a.0.cmp(&b.0)))
        .map(|(i, _)| i)
        .unwrap();
    Ok(OptimizationResult {
        best_energy: restart_energies[best_idx],
        best_config: to_configuration(&results[best_idx].1, &cfg.lattice),
        restart_energies,
        converged,
    })
}

/// One row of a candidate-comparison table.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CandidateRow {
    pub label: String,
    pub energy: f64,
}

/// Energies of the supplied candidate configurations together with the
/// minimizer's best output, sorted ascending.
pub fn compare_candidates(
    n: usize,
    lattice: Lattice,
    a: f64,
    candidates: &[(String, Configuration)],
    seed: u64,
) -> Result<Vec<CandidateRow>, OptimizerError> {
    let pot = GaussianPotential::new(a, lattice.clone());
    let mut rows: Vec<CandidateRow> = Vec::new();
    for (label, omega) in candidates {
        rows.push(CandidateRow {
            label: label.clone(),
            energy: crate::energy::periodic_energy(omega, &pot)?,
        });
    }
    if n >= 2 {
        let cfg = OptimizerConfig::new(n, lattice, a, seed);
        let result = minimize(&cfg)?;
        rows.push(CandidateRow {
            label: "minimize".to_string(),
            energy: result.best_energy,
        });
    }
    rows.sort_by(|x, y| {
        x.energy
            .partial_cmp(&y.energy)
            .unwrap()
            .then_with(|| x.label.cmp(&y.label))
    });
    Ok(rows)
}
