use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::objective::SurrogateObjective;
use super::param::parameterize_isometry;
use crate::error::{Error, Result};
use crate::masklib::{masking_defect, Masker, Mode};
use crate::qcore::PureState;

/// Central-difference step for the gradient.
pub const FD_STEP: f64 = 1e-6;
/// Armijo sufficient-decrease constant.
const ARMIJO: f64 = 1e-4;
/// Below this step length a line search is abandoned.
const MIN_STEP: f64 = 1e-18;
/// An objective this small is an exact zero for our purposes.
const OBJECTIVE_ZERO: f64 = 1e-32;
/// A run whose objective improves by less than `STALL_REL` (relative) over
/// `STALL_WINDOW` accepted steps has settled on a plateau and is stopped.
const STALL_WINDOW: usize = 50;
const STALL_REL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    /// Ancilla dimension; `None` uses the input dimension.
    #[serde(rename = "dB")]
    pub d_b: Option<usize>,
    pub restarts: usize,
    pub max_iters: usize,
    pub step_init: f64,
    pub grad_tol: f64,
    pub seed: u64,
    pub mode: Mode,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            d_b: None,
            restarts: 8,
            max_iters: 3000,
            step_init: 0.1,
            grad_tol: 1e-10,
            seed: 0,
            mode: Mode::Span,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidArgument("restarts must be at least 1".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be at least 1".into()));
        }
        if !(self.grad_tol > 0.0) {
            return Err(Error::InvalidArgument("grad_tol must be positive".into()));
        }
        if !(self.step_init > 0.0) || !self.step_init.is_finite() {
            return Err(Error::InvalidArgument("step_init must be positive".into()));
        }
        if self.d_b == Some(0) {
            return Err(Error::InvalidArgument("dB must be positive".into()));
        }
        Ok(())
    }
}

/// One restart of the descent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartTrace {
    pub restart: usize,
    pub seed: u64,
    pub iterations: usize,
    pub converged: bool,
    /// Masking defect of the final iterate (canonical metric).
    pub defect: f64,
    /// Surrogate objective after every accepted step, starting point first.
    pub objective: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub best_masker: Masker,
    pub best_restart: usize,
    pub best_defect: f64,
    pub per_restart_defects: Vec<f64>,
    pub iterations_used: Vec<usize>,
    /// Whether the best restart met the gradient tolerance.
    pub converged: bool,
    pub mode: Mode,
    #[serde(rename = "dB")]
    pub d_b: usize,
    pub restarts: Vec<RestartTrace>,
}

struct Descent {
    params: Vec<f64>,
    iterations: usize,
    converged: bool,
    trace: Vec<f64>,
}

fn descend(obj: &SurrogateObjective, start: Vec<f64>, cfg: &OptimizerConfig) -> Descent {
    let mut x = start;
    let mut f = obj.value(&x);
    let mut trace = vec![f];
    let mut converged = false;
    let mut iterations = 0;
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut alpha_prev = cfg.step_init;

    while iterations < cfg.max_iters {
        if f <= OBJECTIVE_ZERO {
            converged = true;
            break;
        }
        let g = obj.gradient(&x, FD_STEP);
        let gn2: f64 = g.iter().map(|v| v * v).sum();
        if gn2.sqrt() < cfg.grad_tol {
            converged = true;
            break;
        }
        // Barzilai–Borwein trial step, then backtrack
        let mut alpha = match &prev {
            Some((xp, gp)) => {
                let (mut ss, mut sy) = (0.0, 0.0);
                for i in 0..x.len() {
                    let s = x[i] - xp[i];
                    let y = g[i] - gp[i];
                    ss += s * s;
                    sy += s * y;
                }
                let bb = ss / sy;
                if bb.is_finite() && bb > 0.0 {
                    bb
                } else {
                    alpha_prev * 2.0
                }
            }
            None => cfg.step_init,
        };
        let accepted = loop {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - alpha * gi).collect();
            let ft = obj.value(&trial);
            if ft <= f - ARMIJO * alpha * gn2 {
                break Some((trial, ft));
            }
            alpha *= 0.5;
            if alpha < MIN_STEP {
                break None;
            }
        };
        let Some((trial, ft)) = accepted else { break };
        debug_assert!(ft <= f);
        prev = Some((std::mem::replace(&mut x, trial), g));
        f = ft;
        alpha_prev = alpha;
        trace.push(f);
        iterations += 1;
        if trace.len() > STALL_WINDOW {
            let old = trace[trace.len() - 1 - STALL_WINDOW];
            if old - f <= STALL_REL * old {
                break;
            }
        }
    }
    Descent {
        params: x,
        iterations,
        converged,
        trace,
    }
}

fn restart_seed(seed: u64, restart: usize) -> u64 {
    seed.wrapping_add(restart as u64)
}

/// Multi-start descent on the surrogate objective over the isometry
/// manifold. Each restart draws its starting generator from an RNG seeded
/// with `seed + restart`; restarts run in parallel and the reported defect of
/// each final iterate is re-evaluated with [`masking_defect`].
pub fn optimize_masker(states: &[PureState], cfg: &OptimizerConfig) -> Result<OptimizationResult> {
    cfg.validate()?;
    let d_a = states.first().ok_or(Error::EmptyStateList)?.dim();
    let d_b = cfg.d_b.unwrap_or(d_a);
    let obj = SurrogateObjective::new(states, d_b, cfg.mode)?;
    let n = obj.n_params();

    let runs: Vec<(RestartTrace, Masker)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| -> Result<(RestartTrace, Masker)> {
            let seed = restart_seed(cfg.seed, r);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let start: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            let run = descend(&obj, start, cfg);
            let masker = parameterize_isometry(&run.params, d_a, d_b)?;
            let defect = masking_defect(&masker, states, cfg.mode)?.defect;
            Ok((
                RestartTrace {
                    restart: r,
                    seed,
                    iterations: run.iterations,
                    converged: run.converged,
                    defect,
                    objective: run.trace,
                },
                masker,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let best = runs
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.0.defect.total_cmp(&b.0.defect).then(i.cmp(j)))
        .map(|(i, _)| i)
        .expect("at least one restart");
    let (traces, maskers): (Vec<_>, Vec<_>) = runs.into_iter().unzip();

    Ok(OptimizationResult {
        best_masker: maskers[best].clone(),
        best_restart: best,
        best_defect: traces[best].defect,
        per_restart_defects: traces.iter().map(|t| t.defect).collect(),
        iterations_used: traces.iter().map(|t| t.iterations).collect(),
        converged: traces[best].converged,
        mode: cfg.mode,
        d_b,
        restarts: traces,
    })
}

/// Runs [`optimize_masker`] and returns the best defect as the floor
/// estimate together with the full evidence. A floor far above the
/// tolerance is a numerical no-masking witness; a floor near zero is not.
pub fn witness_no_masking(
    states: &[PureState],
    cfg: &OptimizerConfig,
) -> Result<(f64, OptimizationResult)> {
    let result = optimize_masker(states, cfg)?;
    Ok((result.best_defect, result))
}
