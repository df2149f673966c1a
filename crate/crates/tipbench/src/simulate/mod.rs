//! Euler–Maruyama integration of driver and auxiliary systems, RDTC
//! labeling, and episode/ensemble production.
//!
//! Episodes are recorded on a fixed output grid (default interval 1.0)
//! after a 100-time-unit burn-in. For bifurcation-forced systems the
//! burn-in ramps the normalized control from 0 to the schedule's starting
//! value along a half-cosine, so recording begins near the drifted
//! equilibrium; rate-forced systems follow their native forcing profile
//! through negative time.

pub mod schedule;

pub use schedule::{
    sample_rate_schedule, sample_training_schedule, sample_validation_schedule, ForcingSchedule,
    RawForcing, ScheduleClass,
};

use nalgebra::DVector;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::continuation::find_equilibrium;
use crate::dynamics::catalog::{system_info, InitialRule, Observable};
use crate::dynamics::{self, StateVector, SystemId};
use crate::prior::GenerativeProcess;
use crate::rng::SeedTree;
use crate::{Error, Result};

/// tanh compression of the distance-to-criticality target.
pub fn rdtc_transform(rdtc: f64) -> f64 {
    (5.0 * rdtc).tanh()
}

/// Per-episode driver noise scale `sqrt(2 r_M) * 0.01 * xi`,
/// `xi ~ Triangular(0.75, 1.0, 1.25)`.
pub fn driver_noise_scale(recovery: f64, xi: f64) -> f64 {
    (2.0 * recovery).sqrt() * 0.01 * xi
}

/// Integration configuration.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EpisodeConfig {
    pub dt: f64,
    pub out_interval: f64,
    pub burn_in: f64,
}

impl Default for EpisodeConfig {
    fn default() -> Self {
        Self { dt: 0.01, out_interval: 1.0, burn_in: 100.0 }
    }
}

impl EpisodeConfig {
    fn substeps(&self) -> Result<usize> {
        let n = self.out_interval / self.dt;
        if (n - n.round()).abs() > 1e-9 || n < 1.0 {
            return Err(Error::InvalidArgument(format!(
                "dt {} must divide out_interval {}",
                self.dt, self.out_interval
            )));
        }
        Ok(n.round() as usize)
    }
}

/// One noise realization of one system under one forcing schedule.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Episode {
    pub system: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub process_ref: Option<String>,
    pub episode_seed: u64,
    pub forcing_class: ScheduleClass,
    pub dt: f64,
    pub out_interval: f64,
    /// State series, one inner vector per component, driver components
    /// first.
    pub state_cols: Vec<Vec<f64>>,
    /// Number of leading driver components in `state_cols` (the rest are
    /// auxiliary variables).
    pub n_driver_components: usize,
    /// Designated scoring observable (catalog systems that score a derived
    /// quantity; otherwise scoring reads the first state component).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obs: Option<Vec<f64>>,
    pub lambda_tilde: Vec<f64>,
    pub rdtc: Vec<f64>,
    pub tipped: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_crit: Option<usize>,
    /// First output step with a non-finite state, if the episode blew up.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invalid_at: Option<usize>,
}

impl Episode {
    pub fn len(&self) -> usize {
        self.lambda_tilde.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda_tilde.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.invalid_at.is_none()
    }

    /// Scoring signal: the designated observable or the first state
    /// component.
    pub fn signal(&self) -> &[f64] {
        self.obs.as_deref().unwrap_or(&self.state_cols[0])
    }
}

/// Core Euler–Maruyama loop. Returns states on the output grid and the
/// first output step at which the state went non-finite, if any.
#[allow(clippy::too_many_arguments)]
pub fn integrate_sde(
    drift: &dyn Fn(&StateVector, f64, f64) -> Result<StateVector>,
    diffusion: &DVector<f64>,
    bounds: Option<&[(f64, f64)]>,
    sched: &ForcingSchedule,
    raw: RawForcing,
    x0: &StateVector,
    rng: &mut ChaCha12Rng,
    config: &EpisodeConfig,
) -> Result<(Vec<StateVector>, Option<usize>)> {
    let n_sub = config.substeps()?;
    let dim = x0.len();
    let sqrt_dt = config.dt.sqrt();
    let length = sched.len();
    let mut x = x0.clone();
    let mut states = Vec::with_capacity(length);
    let mut invalid_at = None;

    let lambda0 = sched.values[0];
    let mut step_state = |x: &mut StateVector, t: f64, lam: f64| -> Result<bool> {
        let (control, drift_time) = raw.control_at(lam, t);
        let f = drift(x, control, drift_time)?;
        for i in 0..dim {
            let noise = if diffusion[i] > 0.0 {
                diffusion[i] * sqrt_dt * rng.sample::<f64, _>(rand_distr::StandardNormal)
            } else {
                0.0
            };
            x[i] += f[i] * config.dt + noise;
            if let Some(b) = bounds {
                x[i] = x[i].clamp(b[i].0, b[i].1);
            }
        }
        Ok(x.iter().all(|v| v.is_finite()))
    };

    // Burn-in over [-burn_in, 0): the normalized control ramps from 0 to
    // the schedule's initial value along a half-cosine; native rate
    // profiles are simply evaluated at negative times.
    let n_burn = (config.burn_in / config.dt).round() as usize;
    for k in 0..n_burn {
        let t = -config.burn_in + k as f64 * config.dt;
        let lam = match raw {
            RawForcing::Normalized { .. } => {
                let s = (t + config.burn_in) / config.burn_in;
                lambda0 * 0.5 * (1.0 - (std::f64::consts::PI * s).cos())
            }
            _ => 0.0,
        };
        if !step_state(&mut x, t, lam)? {
            // A blow-up during burn-in invalidates the whole episode.
            let states = vec![x.clone(); length];
            return Ok((states, Some(0)));
        }
    }

    for out_step in 0..length {
        states.push(x.clone());
        if invalid_at.is_none() && x.iter().any(|v| !v.is_finite()) {
            invalid_at = Some(out_step);
        }
        if out_step + 1 == length {
            break;
        }
        for s in 0..n_sub {
            let t = out_step as f64 * config.out_interval + s as f64 * config.dt;
            let lam = sched.lambda_at(t / config.out_interval);
            if !step_state(&mut x, t, lam)? && invalid_at.is_none() {
                invalid_at = Some(out_step + 1);
            }
        }
    }
    Ok((states, invalid_at))
}

/// Catalog-system episode from an explicit initial state.
#[allow(clippy::too_many_arguments)]
pub fn euler_maruyama_from(
    system: SystemId,
    params: &dynamics::SystemParams,
    sched: &ForcingSchedule,
    raw: RawForcing,
    x0: &StateVector,
    episode_seed: u64,
    config: &EpisodeConfig,
) -> Result<Episode> {
    params.validate()?;
    let info = system_info(system);
    let diffusion = dynamics::diffusion(system, params);
    let mut rng = SeedTree::new(episode_seed).stream("episode/noise");
    let drift_fn = |x: &StateVector, c: f64, t: f64| dynamics::drift(system, params, x, c, t);
    let (states, invalid_at) = integrate_sde(
        &drift_fn,
        &diffusion,
        Some(&info.state_bounds),
        sched,
        raw,
        x0,
        &mut rng,
        config,
    )?;

    let lambda_tilde = sched.values.clone();
    let rdtc: Vec<f64> = lambda_tilde.iter().map(|l| 1.0 - l).collect();
    let obs = match info.observable {
        Observable::Component(0) => None,
        Observable::Component(c) => Some(states.iter().map(|s| s[c]).collect()),
        Observable::AmocStrength => {
            Some(states.iter().map(|s| dynamics::amoc::strength(s[0])).collect())
        }
        Observable::Radius => {
            Some(states.iter().map(|s| (s[0] * s[0] + s[1] * s[1]).sqrt()).collect())
        }
    };
    let tip_step = dynamics::tip_index(system, params, &states)?;
    // Criticality timing: schedule-defined for bifurcation-forced systems,
    // observed for rate-forced ones.
    let t_crit = if system.is_bifurcation_forced() {
        sched.critical_step()
    } else {
        tip_step
    };
    let dim = system.dim();
    let state_cols = (0..dim)
        .map(|c| states.iter().map(|s| s[c]).collect())
        .collect();
    Ok(Episode {
        system: system.name().to_string(),
        process_ref: None,
        episode_seed,
        forcing_class: sched.class,
        dt: config.dt,
        out_interval: config.out_interval,
        state_cols,
        n_driver_components: dim,
        obs,
        lambda_tilde,
        rdtc,
        tipped: tip_step.is_some(),
        t_crit,
        invalid_at,
    })
}

/// Catalog-system episode; the initial state comes from the catalog rule
/// (equilibrium at the burn-in entry control, or an explicit state).
pub fn euler_maruyama_catalog(
    system: SystemId,
    params: &dynamics::SystemParams,
    sched: &ForcingSchedule,
    raw: RawForcing,
    episode_seed: u64,
    config: &EpisodeConfig,
) -> Result<Episode> {
    let info = system_info(system);
    let x0 = match &info.initial {
        InitialRule::Explicit { state } => DVector::from_vec(state.clone()),
        InitialRule::Equilibrium { guess } => {
            let (c0, _) = raw.control_at(0.0, -config.burn_in);
            find_equilibrium(system, params, c0, &DVector::from_vec(guess.clone()))?
        }
    };
    euler_maruyama_from(system, params, sched, raw, &x0, episode_seed, config)
}

/// Prior-process episode: driver plus auxiliary system under a training
/// (or explicitly supplied) schedule.
pub fn euler_maruyama_process(
    process: &GenerativeProcess,
    sched: &ForcingSchedule,
    episode_seed: u64,
    config: &EpisodeConfig,
) -> Result<Episode> {
    let tree = SeedTree::new(episode_seed);
    let mut xi_rng = tree.stream("episode/xi");
    let xi = crate::rng::triangular(&mut xi_rng, 0.75, 1.0, 1.25);
    let sigma_m = driver_noise_scale(process.driver.recovery, xi);

    let n_aux = process.graph.n_vars;
    let dim = 2 + n_aux;
    let mut diffusion = DVector::zeros(dim);
    diffusion[0] = sigma_m;
    diffusion[1] = sigma_m;
    for i in 0..n_aux {
        diffusion[2 + i] = process.aux.sigma[i];
    }

    let raw = RawForcing::Normalized { p0: process.driver.p0, p_crit: process.driver.p_crit };
    let mut x0 = DVector::zeros(dim);
    x0[0] = process.driver.equilibrium[0];
    x0[1] = process.driver.equilibrium[1];

    let bounds = vec![(-1e4, 1e4); dim];
    let drift_fn = |x: &StateVector, c: f64, _t: f64| -> Result<StateVector> {
        let zx = x[0];
        let zy = x[1];
        let dz = process.driver.drift(&DVector::from_vec(vec![zx, zy]), c);
        let u: Vec<f64> = (0..n_aux).map(|i| x[2 + i]).collect();
        let du = process.aux.drift(&process.graph, &u, (zx, zy));
        let mut f = DVector::zeros(dim);
        f[0] = dz[0];
        f[1] = dz[1];
        for i in 0..n_aux {
            f[2 + i] = du[i];
        }
        Ok(f)
    };

    let mut rng = tree.stream("episode/noise");
    let (states, invalid_at) =
        integrate_sde(&drift_fn, &diffusion, Some(&bounds), sched, raw, &x0, &mut rng, config)?;

    let lambda_tilde = sched.values.clone();
    let rdtc: Vec<f64> = lambda_tilde.iter().map(|l| 1.0 - l).collect();
    let t_crit = sched.critical_step();
    let state_cols: Vec<Vec<f64>> =
        (0..dim).map(|c| states.iter().map(|s| s[c]).collect()).collect();
    Ok(Episode {
        system: "prior".to_string(),
        process_ref: Some(format!("psi-{:08x}", process.seed)),
        episode_seed,
        forcing_class: sched.class,
        dt: config.dt,
        out_interval: config.out_interval,
        state_cols,
        n_driver_components: 2,
        obs: None,
        lambda_tilde,
        rdtc,
        tipped: t_crit.is_some(),
        t_crit,
        invalid_at,
    })
}

/// A shared-process episode ensemble.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpisodeEnsemble {
    pub process_ref: String,
    pub episodes: Vec<Episode>,
    pub n_invalid: usize,
}

/// Default episode count per ensemble.
pub const ENSEMBLE_SIZE: usize = 6;

/// Simulate an ensemble of `k` episodes sharing one generative process,
/// with independent training schedules and Brownian sub-streams. Invalid
/// (blown-up) episodes are dropped but counted.
pub fn simulate_ensemble(
    process: &GenerativeProcess,
    ensemble_seed: u64,
    k: usize,
    length: usize,
    config: &EpisodeConfig,
) -> Result<EpisodeEnsemble> {
    let tree = SeedTree::new(ensemble_seed);
    let mut episodes = Vec::with_capacity(k);
    let mut n_invalid = 0;
    for idx in 0..k {
        let mut sched_rng = tree.stream(&format!("ensemble/{idx}/schedule"));
        let sched = sample_training_schedule(&mut sched_rng, length);
        let episode_seed = tree.sub_seed(&format!("ensemble/{idx}/episode"));
        let ep = euler_maruyama_process(process, &sched, episode_seed, config)?;
        if ep.is_valid() {
            episodes.push(ep);
        } else {
            n_invalid += 1;
        }
    }
    Ok(EpisodeEnsemble {
        process_ref: format!("psi-{:08x}", process.seed),
        episodes,
        n_invalid,
    })
}
