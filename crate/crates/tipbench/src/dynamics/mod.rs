//! Drift fields, diffusion specifications, Jacobians and tipping criteria
//! for the validation catalog of stochastic dynamical systems.
//!
//! Every system is identified by a [`SystemId`]; its dynamics are pure
//! functions of `(params, state, control, time)`. The control argument is
//! the raw forcing parameter of that system (harvest rate `h`, attack rate
//! `a`, perceived vaccination risk `omega`, hosing `H`, shifted forcing
//! `lambda`, or the atmospheric warming rate `v` for the compost bomb,
//! which is the one system whose drift depends explicitly on time).

pub mod amoc;
pub mod catalog;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::{Error, Result};

pub type StateVector = DVector<f64>;

/// Identifier of a catalog system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemId {
    BFold,
    BHopf,
    BTranscritical,
    BHarvesting,
    BRmTc,
    BRmHopf,
    BSeirx,
    BAmoc,
    RSaddleNode,
    RBautin,
    RCompostBomb,
    RAmoc,
}

impl SystemId {
    pub const ALL: [SystemId; 12] = [
        SystemId::BFold,
        SystemId::BHopf,
        SystemId::BTranscritical,
        SystemId::BHarvesting,
        SystemId::BRmTc,
        SystemId::BRmHopf,
        SystemId::BSeirx,
        SystemId::BAmoc,
        SystemId::RSaddleNode,
        SystemId::RBautin,
        SystemId::RCompostBomb,
        SystemId::RAmoc,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SystemId::BFold => "b_fold",
            SystemId::BHopf => "b_hopf",
            SystemId::BTranscritical => "b_transcritical",
            SystemId::BHarvesting => "b_harvesting",
            SystemId::BRmTc => "b_rm_tc",
            SystemId::BRmHopf => "b_rm_hopf",
            SystemId::BSeirx => "b_seirx",
            SystemId::BAmoc => "b_amoc",
            SystemId::RSaddleNode => "r_saddle_node",
            SystemId::RBautin => "r_bautin",
            SystemId::RCompostBomb => "r_compost_bomb",
            SystemId::RAmoc => "r_amoc",
        }
    }

    pub fn from_name(name: &str) -> Result<SystemId> {
        SystemId::ALL
            .iter()
            .copied()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown system `{name}`")))
    }

    /// State dimension.
    pub fn dim(&self) -> usize {
        match self {
            SystemId::BFold | SystemId::BTranscritical | SystemId::BHarvesting
            | SystemId::RSaddleNode => 1,
            SystemId::BHopf | SystemId::BRmTc | SystemId::BRmHopf | SystemId::BAmoc
            | SystemId::RBautin | SystemId::RCompostBomb | SystemId::RAmoc => 2,
            SystemId::BSeirx => 4,
        }
    }

    /// Whether tipping in this system is bifurcation-forced (`false` means
    /// rate-forced).
    pub fn is_bifurcation_forced(&self) -> bool {
        !matches!(
            self,
            SystemId::RSaddleNode | SystemId::RBautin | SystemId::RCompostBomb | SystemId::RAmoc
        )
    }

    /// Default parameter set.
    pub fn default_params(&self) -> SystemParams {
        let pairs: &[(&str, f64)] = match self {
            SystemId::BFold => &[("sigma_x", 0.01)],
            SystemId::BHopf => &[("sigma_x", 0.01), ("sigma_y", 0.01)],
            SystemId::BTranscritical => &[("sigma_x", 0.01)],
            SystemId::BHarvesting => {
                &[("r", 1.0), ("k", 1.0), ("s", 0.1), ("sigma_x", 0.01)]
            }
            SystemId::BRmTc | SystemId::BRmHopf => &[
                ("r", 4.0),
                ("k", 1.7),
                ("e", 0.5),
                ("h", 0.15),
                ("m", 2.0),
                ("sigma_x", 0.01),
                ("sigma_y", 0.01),
            ],
            SystemId::BSeirx => &[
                ("n", 100_000.0),
                ("mu", 0.02 / 52.0),
                ("beta", 10.5),
                ("epsilon", 0.7),
                ("gamma", 0.7),
                ("kappa", 0.007),
                ("delta", 50.0),
                ("sigma_s", 5.0),
                ("sigma_e", 5.0),
                ("sigma_i", 5.0),
                ("sigma_x", 5e-4),
            ],
            SystemId::BAmoc | SystemId::RAmoc => &[("sigma_n", 1.0), ("sigma_t", 1.0)],
            SystemId::RSaddleNode => &[("lambda_max", 3.0), ("sigma_x", 0.008)],
            SystemId::RBautin => &[
                ("a", 0.1),
                ("omega", 3.0),
                ("b", 1.0),
                ("sigma_z", 0.2),
                ("lambda_max", 8.0),
            ],
            SystemId::RCompostBomb => &[
                ("mu", 2.5e6),
                ("lambda", 5.049e6),
                ("a_heat", 3.9e7),
                ("pi", 1.055),
                ("r0", 0.01),
                ("alpha", 2.5f64.ln() / 10.0),
                ("d3", 50.0),
            ],
        };
        SystemParams(pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect())
    }
}

/// Named scalar parameters of a catalog system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams(BTreeMap<String, f64>);

impl SystemParams {
    pub fn from_pairs(pairs: &[(&str, f64)]) -> Self {
        SystemParams(pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect())
    }

    pub fn get(&self, name: &str) -> f64 {
        *self
            .0
            .get(name)
            .unwrap_or_else(|| panic!("missing system parameter `{name}`"))
    }

    pub fn set(&mut self, name: &str, value: f64) {
        self.0.insert(name.to_string(), value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &f64)> {
        self.0.iter()
    }

    /// All rate and noise parameters must be finite; noise amplitudes must be
    /// non-negative.
    pub fn validate(&self) -> Result<()> {
        for (k, v) in &self.0 {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("parameter `{k}` is not finite")));
            }
            if k.starts_with("sigma") && *v < 0.0 {
                return Err(Error::InvalidArgument(format!("noise parameter `{k}` must be >= 0")));
            }
        }
        Ok(())
    }
}

fn check_inputs(system: SystemId, state: &StateVector, control: f64) -> Result<()> {
    if state.len() != system.dim() {
        return Err(Error::DimensionMismatch { expected: system.dim(), got: state.len() });
    }
    if state.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("state"));
    }
    if !control.is_finite() {
        return Err(Error::NonFinite("control"));
    }
    Ok(())
}

/// Deterministic drift `f(x, control, t)`.
pub fn drift(
    system: SystemId,
    params: &SystemParams,
    state: &StateVector,
    control: f64,
    time: f64,
) -> Result<StateVector> {
    check_inputs(system, state, control)?;
    let f = match system {
        SystemId::BFold => {
            let x = state[0];
            DVector::from_vec(vec![control - x * x])
        }
        SystemId::BHopf => {
            let (x, y) = (state[0], state[1]);
            let mu = control;
            let r2 = x * x + y * y;
            DVector::from_vec(vec![mu * x - y - x * r2, x + mu * y - y * r2])
        }
        SystemId::BTranscritical => {
            let x = state[0];
            DVector::from_vec(vec![control * x - x * x])
        }
        SystemId::BHarvesting => {
            let x = state[0];
            let (r, k, s) = (params.get("r"), params.get("k"), params.get("s"));
            let h = control;
            DVector::from_vec(vec![r * x * (1.0 - x / k) - h * x * x / (s * s + x * x)])
        }
        SystemId::BRmTc | SystemId::BRmHopf => {
            let (x, y) = (state[0], state[1]);
            let (r, k, e, h, m) = (
                params.get("r"),
                params.get("k"),
                params.get("e"),
                params.get("h"),
                params.get("m"),
            );
            let a = control;
            let fr = a * x / (1.0 + a * h * x);
            DVector::from_vec(vec![r * x * (1.0 - x / k) - fr * y, e * fr * y - m * y])
        }
        SystemId::BSeirx => {
            let (s, e_, i, x) = (state[0], state[1], state[2], state[3]);
            let n = params.get("n");
            let mu = params.get("mu");
            let beta = params.get("beta");
            let eps = params.get("epsilon");
            let gam = params.get("gamma");
            let kap = params.get("kappa");
            let del = params.get("delta");
            let omega = control;
            DVector::from_vec(vec![
                mu * n * (1.0 - x) - beta * s * i / n - mu * s,
                beta * s * i / n - (eps + mu) * e_,
                eps * e_ - (gam + mu) * i,
                kap * x * (1.0 - x) * (-omega + i + del * (2.0 * x - 1.0)),
            ])
        }
        SystemId::BAmoc | SystemId::RAmoc => amoc::drift(state, control),
        SystemId::RSaddleNode => {
            let x = state[0];
            let lam = control;
            DVector::from_vec(vec![(x + lam) * (x + lam) - 1.0])
        }
        SystemId::RBautin => {
            let (x, y) = (state[0], state[1]);
            let (a, om, b) = (params.get("a"), params.get("omega"), params.get("b"));
            // Forcing translates the system along the real axis.
            let (wx, wy) = (x - control, y);
            let r2 = wx * wx + wy * wy;
            let g = a - b * r2 + r2 * r2;
            DVector::from_vec(vec![g * wx - om * wy, om * wx + g * wy])
        }
        SystemId::RCompostBomb => {
            let (ts, cs) = (state[0], state[1]);
            let mu = params.get("mu");
            let lam = params.get("lambda");
            let a_heat = params.get("a_heat");
            let pi = params.get("pi");
            let r0 = params.get("r0");
            let alpha = params.get("alpha");
            let ta = control * time;
            let resp = r0 * (alpha * ts).exp();
            DVector::from_vec(vec![
                (-lam * (ts - ta) + a_heat * cs * resp) / mu,
                pi - cs * resp,
            ])
        }
    };
    Ok(f)
}

/// Diagonal additive diffusion amplitudes, one per state component.
///
/// Noise printed inside a volume- or capacity-scaled equation (AMOC boxes,
/// compost-bomb temperature) is divided through so the returned amplitudes
/// apply directly to `dX/dt`.
pub fn diffusion(system: SystemId, params: &SystemParams) -> DVector<f64> {
    match system {
        SystemId::BFold | SystemId::BTranscritical | SystemId::BHarvesting => {
            DVector::from_vec(vec![params.get("sigma_x")])
        }
        SystemId::BHopf | SystemId::BRmTc | SystemId::BRmHopf => {
            DVector::from_vec(vec![params.get("sigma_x"), params.get("sigma_y")])
        }
        SystemId::BSeirx => DVector::from_vec(vec![
            params.get("sigma_s"),
            params.get("sigma_e"),
            params.get("sigma_i"),
            params.get("sigma_x"),
        ]),
        SystemId::BAmoc | SystemId::RAmoc => DVector::from_vec(vec![
            params.get("sigma_n") / amoc::V_N,
            params.get("sigma_t") / amoc::V_T,
        ]),
        SystemId::RSaddleNode => {
            DVector::from_vec(vec![(2.0 * params.get("sigma_x")).sqrt()])
        }
        SystemId::RBautin => {
            let s = params.get("sigma_z");
            DVector::from_vec(vec![s, s])
        }
        SystemId::RCompostBomb => {
            DVector::from_vec(vec![params.get("d3") / params.get("mu"), 0.0])
        }
    }
}

/// Diagnosed AMOC overturning strength for a `(S_N, S_T)` state.
pub fn amoc_strength(_params: &SystemParams, state: &StateVector) -> Result<f64> {
    if state.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: state.len() });
    }
    if state.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("state"));
    }
    Ok(amoc::strength(state[0]))
}

/// Saddle-node rate forcing `lambda(t)`.
pub fn r_forcing_saddle(lambda_max: f64, epsilon: f64, time: f64) -> f64 {
    0.5 * lambda_max * ((0.5 * lambda_max * epsilon * time).tanh() + 1.0)
}

/// AMOC transient hosing profile: a sech pulse that plateaus at its peak.
pub fn r_forcing_sech(h0: f64, dh: f64, rate: f64, t_crit: f64, time: f64) -> f64 {
    if time < t_crit {
        h0 + dh / (rate * (time - t_crit)).cosh()
    } else {
        h0 + dh
    }
}

/// Finite-difference step for component `i`: `max(1e-6, 1e-6 |x_i|)`.
fn fd_step(x: f64) -> f64 {
    (1e-6 * x.abs()).max(1e-6)
}

/// Jacobian `df/dx` by central finite differences.
///
/// For the AMOC systems the evaluation must not straddle the `Q = 0`
/// switching surface; proximity is detected from the Q-perturbation the
/// finite-difference stencil would induce.
pub fn jacobian(
    system: SystemId,
    params: &SystemParams,
    state: &StateVector,
    control: f64,
) -> Result<DMatrix<f64>> {
    jacobian_at_time(system, params, state, control, 0.0)
}

/// Jacobian at an explicit time (only the compost bomb drift is
/// time-dependent; all other systems ignore `time`).
pub fn jacobian_at_time(
    system: SystemId,
    params: &SystemParams,
    state: &StateVector,
    control: f64,
    time: f64,
) -> Result<DMatrix<f64>> {
    check_inputs(system, state, control)?;
    if matches!(system, SystemId::BAmoc | SystemId::RAmoc) {
        let q = amoc::strength(state[0]);
        let dq = amoc::strength_slope() * fd_step(state[0]);
        if q.abs() <= 2.0 * dq.abs() {
            return Err(Error::SwitchingSurface { q_abs: q.abs() });
        }
    }
    let n = state.len();
    let mut jac = DMatrix::zeros(n, n);
    for j in 0..n {
        let h = fd_step(state[j]);
        let mut xp = state.clone();
        let mut xm = state.clone();
        xp[j] += h;
        xm[j] -= h;
        let fp = drift(system, params, &xp, control, time)?;
        let fm = drift(system, params, &xm, control, time)?;
        for i in 0..n {
            jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// System-specific tipping criteria, evaluated over a whole trajectory.
///
/// Returns the first output-step index at which the threshold event occurs,
/// or `None`. Thresholds:
/// - `b_fold`, `b_transcritical`: escape below `x = -1`, well past the
///   unstable branch of the normal form;
/// - `b_hopf`, `b_rm_hopf`: sustained oscillation onset, `|x - mean|`
///   exceeding 3x the pre-ramp standard deviation of `x` for at least 20
///   consecutive output samples (baseline = first quarter of the series);
/// - `b_harvesting`: biomass collapse `x < 0.1 k`;
/// - `b_rm_tc`: consumer invasion `y >= 0.1`;
/// - `b_seirx`: sentiment collapse `x < 0.5`;
/// - `b_amoc`, `r_amoc`: overturning drops below `0.2 Q(initial)`;
/// - `r_saddle_node`: `x >= 0`;
/// - `r_bautin`: radius `sqrt(x^2 + y^2) >= 10`;
/// - `r_compost_bomb`: `T_s > 30`.
pub fn tip_index(
    system: SystemId,
    params: &SystemParams,
    trajectory: &[StateVector],
) -> Result<Option<usize>> {
    if trajectory.is_empty() {
        return Err(Error::Empty("trajectory"));
    }
    let first = |pred: &dyn Fn(&StateVector) -> bool| trajectory.iter().position(|s| pred(s));
    let idx = match system {
        SystemId::BFold | SystemId::BTranscritical => first(&|s| s[0] <= -1.0),
        SystemId::BHopf | SystemId::BRmHopf => oscillation_onset(trajectory, 3.0, 20),
        SystemId::BHarvesting => {
            let k = params.get("k");
            first(&|s| s[0] < 0.1 * k)
        }
        SystemId::BRmTc => first(&|s| s[1] >= 0.1),
        SystemId::BSeirx => first(&|s| s[3] < 0.5),
        SystemId::BAmoc | SystemId::RAmoc => {
            let q0 = amoc::strength(trajectory[0][0]);
            first(&|s| amoc::strength(s[0]) < 0.2 * q0)
        }
        SystemId::RSaddleNode => first(&|s| s[0] >= 0.0),
        SystemId::RBautin => first(&|s| (s[0] * s[0] + s[1] * s[1]).sqrt() >= 10.0),
        SystemId::RCompostBomb => first(&|s| s[0] > 30.0),
    };
    Ok(idx)
}

/// Whether the system-specific threshold event occurs anywhere in the
/// trajectory.
pub fn tip_criterion(
    system: SystemId,
    params: &SystemParams,
    trajectory: &[StateVector],
) -> Result<bool> {
    Ok(tip_index(system, params, trajectory)?.is_some())
}

/// Oscillation-onset rule for Hopf-type systems: first index from which the
/// deviation of `x` from its baseline mean exceeds `factor` times the
/// baseline standard deviation for `run` consecutive samples.
fn oscillation_onset(trajectory: &[StateVector], factor: f64, run: usize) -> Option<usize> {
    let n = trajectory.len();
    let base_len = (n / 4).max(10).min(n);
    let xs: Vec<f64> = trajectory.iter().map(|s| s[0]).collect();
    let base = &xs[..base_len];
    let mean = base.iter().sum::<f64>() / base_len as f64;
    let var = base.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (base_len.max(2) - 1) as f64;
    let sd = var.sqrt();
    // A noiseless baseline would make any perturbation "sustained".
    let threshold = factor * sd.max(1e-12);
    let mut streak = 0usize;
    for (i, &x) in xs.iter().enumerate() {
        if (x - mean).abs() > threshold {
            streak += 1;
            if streak >= run {
                return Some(i + 1 - run);
            }
        } else {
            streak = 0;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sv(vals: &[f64]) -> StateVector {
        DVector::from_vec(vals.to_vec())
    }

    #[test]
    fn fold_drift_values() {
        let p = SystemId::BFold.default_params();
        // normal form dx/dt = mu - x^2 at the origin
        let f = drift(SystemId::BFold, &p, &sv(&[0.0]), 1.0, 0.0).unwrap();
        assert_eq!(f[0], 1.0);
        // equilibrium x = sqrt(mu)
        let f = drift(SystemId::BFold, &p, &sv(&[1.0]), 1.0, 0.0).unwrap();
        assert_eq!(f[0], 0.0);
    }

    #[test]
    fn harvesting_carrying_capacity_fixed_point() {
        let p = SystemId::BHarvesting.default_params();
        let f = drift(SystemId::BHarvesting, &p, &sv(&[1.0]), 0.0, 0.0).unwrap();
        assert_eq!(f[0], 0.0);
    }

    #[test]
    fn rm_coexistence_root_is_equilibrium() {
        // Solve drift = 0 by damped Newton from an interior guess, then check
        // the drift there vanishes.
        let p = SystemId::BRmTc.default_params();
        let a = 10.0;
        let eq = crate::continuation::find_equilibrium(
            SystemId::BRmTc,
            &p,
            a,
            &sv(&[0.9, 0.4]),
        )
        .unwrap();
        let f = drift(SystemId::BRmTc, &p, &eq, a, 0.0).unwrap();
        assert!(f.amax() < 1e-10, "residual {}", f.amax());
        // Closed form: x* = m / (a (e - m h)) = 1.0 at a = 10.
        assert_relative_eq!(eq[0], 1.0, epsilon = 1e-8);
        assert!(eq[1] > 0.0);
    }

    #[test]
    fn drift_is_pure() {
        let p = SystemId::BRmHopf.default_params();
        let x = sv(&[0.8, 0.3]);
        let f1 = drift(SystemId::BRmHopf, &p, &x, 13.0, 0.0).unwrap();
        let f2 = drift(SystemId::BRmHopf, &p, &x, 13.0, 0.0).unwrap();
        assert_eq!(f1, f2);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let p = SystemId::BFold.default_params();
        assert!(drift(SystemId::BFold, &p, &sv(&[0.0, 1.0]), 1.0, 0.0).is_err());
        assert!(drift(SystemId::BFold, &p, &sv(&[f64::NAN]), 1.0, 0.0).is_err());
        assert!(drift(SystemId::BFold, &p, &sv(&[0.0]), f64::INFINITY, 0.0).is_err());
    }

    #[test]
    fn saddle_forcing_limits() {
        assert_relative_eq!(r_forcing_saddle(3.0, 1.25, -1e6), 0.0, epsilon = 1e-12);
        assert_relative_eq!(r_forcing_saddle(3.0, 1.25, 1e6), 3.0, epsilon = 1e-12);
        assert_relative_eq!(r_forcing_saddle(3.0, 1.25, 0.0), 1.5, epsilon = 1e-15);
        let expected = 1.5 * ((1.875f64).tanh() + 1.0);
        assert_relative_eq!(r_forcing_saddle(3.0, 1.25, 1.0), expected, epsilon = 1e-15);
    }

    #[test]
    fn sech_forcing_shape() {
        // sech(0) = 1 and the plateau branch agree at t_crit
        assert_relative_eq!(r_forcing_sech(0.1, 0.3, 0.017, 500.0, 500.0), 0.4);
        // t -> -inf recovers H0
        assert_relative_eq!(r_forcing_sech(0.1, 0.3, 0.017, 500.0, -1e7), 0.1, epsilon = 1e-12);
        // continuity at t_crit
        let left = r_forcing_sech(0.1, 0.3, 0.017, 500.0, 500.0 - 1e-9);
        let right = r_forcing_sech(0.1, 0.3, 0.017, 500.0, 500.0);
        assert_relative_eq!(left, right, epsilon = 1e-12);
    }

    #[test]
    fn fold_jacobian_at_equilibrium() {
        let p = SystemId::BFold.default_params();
        let j = jacobian(SystemId::BFold, &p, &sv(&[1.0]), 1.0).unwrap();
        assert_relative_eq!(j[(0, 0)], -2.0, epsilon = 1e-6);
    }

    #[test]
    fn hopf_jacobian_eigenvalues_at_origin() {
        let p = SystemId::BHopf.default_params();
        let j = jacobian(SystemId::BHopf, &p, &sv(&[0.0, 0.0]), 0.3).unwrap();
        let eigs = j.complex_eigenvalues();
        let mut res: Vec<(f64, f64)> = eigs.iter().map(|c| (c.re, c.im.abs())).collect();
        res.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        for (re, im) in res {
            assert_relative_eq!(re, 0.3, epsilon = 1e-6);
            assert_relative_eq!(im, 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn harvesting_upper_branch_stable() {
        let p = SystemId::BHarvesting.default_params();
        let eq = crate::continuation::find_equilibrium(
            SystemId::BHarvesting,
            &p,
            0.2,
            &sv(&[0.9]),
        )
        .unwrap();
        let j = jacobian(SystemId::BHarvesting, &p, &eq, 0.2).unwrap();
        assert!(j[(0, 0)] < 0.0);
    }

    #[test]
    fn bautin_tip_threshold_strict() {
        let p = SystemId::RBautin.default_params();
        let traj = vec![sv(&[9.8, 0.0]), sv(&[0.0, 9.9])];
        assert!(!tip_criterion(SystemId::RBautin, &p, &traj).unwrap());
        let traj = vec![sv(&[9.8, 0.0]), sv(&[10.0, 0.0])];
        assert!(tip_criterion(SystemId::RBautin, &p, &traj).unwrap());
    }

    #[test]
    fn saddle_node_tip_boundary_inclusive() {
        let p = SystemId::RSaddleNode.default_params();
        let traj = vec![sv(&[-0.5]), sv(&[0.0]), sv(&[-0.2])];
        assert_eq!(tip_index(SystemId::RSaddleNode, &p, &traj).unwrap(), Some(1));
    }

    #[test]
    fn empty_trajectory_is_error() {
        let p = SystemId::BFold.default_params();
        assert!(tip_criterion(SystemId::BFold, &p, &[]).is_err());
    }

    #[test]
    fn seirx_nonnegative_under_zero_noise() {
        // Deterministic integration from a nonnegative state stays >= -1e-9.
        let p = SystemId::BSeirx.default_params();
        let mut x = sv(&[1000.0, 50.0, 50.0, 0.9]);
        let dt = 0.01;
        for step in 0..200_000 {
            let f = drift(SystemId::BSeirx, &p, &x, 0.0, step as f64 * dt).unwrap();
            x += f * dt;
        }
        for i in 0..4 {
            assert!(x[i] >= -1e-9, "component {i} went negative: {}", x[i]);
        }
    }
}
