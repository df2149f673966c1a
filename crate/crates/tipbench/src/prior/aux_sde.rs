//! Auxiliary SDE system: one sampled flow MLP per variable plus linear
//! stabilization, `du_i = [(1 - eta_i) f_i(r_i) - gamma_i u_i] dt
//! + sigma_i dW_i` with diagonal diffusion.
//!
//! `r_i` concatenates the parent auxiliary variables of `i` (ascending
//! index) followed by the attached driver channels (x then y). Flow MLPs
//! have two linear layers with 32 tanh hidden units; a variable with no
//! parents and no attached drivers evaluates the network on an empty
//! input, which reduces to its bias path.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::graph::InteractionGraph;
use crate::rng::{half_cauchy_until, normal};
use crate::Result;

pub const HIDDEN_WIDTH: usize = 32;
/// Resampling cap for the truncated Half-Cauchy draws.
const RESAMPLE_CAP: usize = 10_000;

/// Two-layer tanh MLP with scalar output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowMlp {
    pub in_dim: usize,
    /// First layer, row-major `[HIDDEN_WIDTH x in_dim]`.
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    /// Output layer `[1 x HIDDEN_WIDTH]`.
    pub w2: Vec<f64>,
    pub b2: f64,
    /// Sampled weight scale, in (1, 1.5].
    pub weight_scale: f64,
    /// Sampled hidden sparsity, in [0.1, 0.5]. With two layers there is no
    /// interior hidden-to-hidden layer, so it is recorded but has no
    /// effect.
    pub hidden_sparsity: f64,
}

impl FlowMlp {
    pub fn eval(&self, input: &[f64]) -> f64 {
        debug_assert_eq!(input.len(), self.in_dim);
        let mut out = self.b2;
        for h in 0..HIDDEN_WIDTH {
            let mut pre = self.b1[h];
            for (k, x) in input.iter().enumerate() {
                pre += self.w1[h * self.in_dim + k] * x;
            }
            out += self.w2[h] * pre.tanh();
        }
        out
    }
}

/// Per-variable flow MLPs and stabilization coefficients.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuxiliarySde {
    pub mlps: Vec<FlowMlp>,
    /// Self-decay, `gamma_i = 20 |N(0,1)|`.
    pub gamma: Vec<f64>,
    /// Friction, `eta_i = 0.5 |N(0,1)|`; the flow is scaled by `1 - eta_i`.
    pub eta: Vec<f64>,
    /// Diagonal diffusion, `sigma_i = 0.05 |N(0,1)|`.
    pub sigma: Vec<f64>,
}

impl AuxiliarySde {
    /// Deterministic part of `du_i/dt` for all variables.
    ///
    /// `u` is the auxiliary state, `driver` the `(x, y)` driver state.
    pub fn drift(&self, graph: &InteractionGraph, u: &[f64], driver: (f64, f64)) -> Vec<f64> {
        let mut out = Vec::with_capacity(graph.n_vars);
        let mut input = Vec::with_capacity(16);
        for i in 0..graph.n_vars {
            input.clear();
            for &p in &graph.parents[i] {
                input.push(u[p]);
            }
            if graph.driver_attached[i][0] {
                input.push(driver.0);
            }
            if graph.driver_attached[i][1] {
                input.push(driver.1);
            }
            let flow = self.mlps[i].eval(&input);
            out.push((1.0 - self.eta[i]) * flow - self.gamma[i] * u[i]);
        }
        out
    }
}

fn sample_mlp(rng: &mut impl Rng, in_dim: usize) -> Result<FlowMlp> {
    let weight_scale = 1.0 + half_cauchy_until(rng, 1.0, RESAMPLE_CAP, |v| 1.0 + v <= 1.5)?;
    let hidden_sparsity =
        0.5 - half_cauchy_until(rng, 0.5, RESAMPLE_CAP, |v| 0.5 - v >= 0.1)?;
    let s = weight_scale;
    let w1 = (0..HIDDEN_WIDTH * in_dim).map(|_| s * normal(rng)).collect();
    let b1 = (0..HIDDEN_WIDTH).map(|_| s * normal(rng)).collect();
    let w2 = (0..HIDDEN_WIDTH).map(|_| s * normal(rng)).collect();
    let b2 = s * normal(rng);
    Ok(FlowMlp { in_dim, w1, b1, w2, b2, weight_scale, hidden_sparsity })
}

/// Sample the auxiliary SDE conditioned on a graph.
pub fn sample_aux_sde(rng: &mut impl Rng, graph: &InteractionGraph) -> Result<AuxiliarySde> {
    let mut mlps = Vec::with_capacity(graph.n_vars);
    let mut gamma = Vec::with_capacity(graph.n_vars);
    let mut eta = Vec::with_capacity(graph.n_vars);
    let mut sigma = Vec::with_capacity(graph.n_vars);
    for i in 0..graph.n_vars {
        mlps.push(sample_mlp(rng, graph.in_dim(i))?);
        gamma.push(20.0 * normal(rng).abs());
        eta.push(0.5 * normal(rng).abs());
        sigma.push(0.05 * normal(rng).abs());
    }
    Ok(AuxiliarySde { mlps, gamma, eta, sigma })
}
