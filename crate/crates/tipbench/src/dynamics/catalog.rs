//! Per-system protocol metadata and the machine-readable catalog export.
//!
//! The catalog pins, for every system: the control-parameter name and the
//! normalized forcing anchor points (`control_start` at `lambda_tilde = 0`
//! and `control_crit` at `lambda_tilde = 1` for bifurcation-forced systems),
//! the rate-forcing protocol for rate-forced systems, the scoring
//! observable, the initial-state rule, the state box that keeps
//! post-transition trajectories finite, and the tipping criterion text.

use serde::Serialize;

use super::{amoc, SystemId, SystemParams};

/// Which scalar series scoring reads from a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// A state component.
    Component(usize),
    /// Diagnosed overturning strength Q.
    AmocStrength,
    /// Radius sqrt(x^2 + y^2).
    Radius,
}

/// How the initial state of an episode is obtained.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialRule {
    /// Solve for the equilibrium at the initial control from this guess.
    Equilibrium { guess: Vec<f64> },
    /// Use this state verbatim (systems whose attractor is a limit cycle).
    Explicit { state: Vec<f64> },
}

/// Rate-forcing protocol for the rate-forced systems. `rate_critical`
/// labels the critical class, `rate_flat` the flat (faster-than-equilibrium
/// but non-tipping) class; the equilibrium class holds the forcing at its
/// initial value.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RateForcing {
    /// `lambda(t) = (max/2)(tanh(max * rate * (t - t_center) / 2) + 1)`.
    TanhRamp { max: f64, rate_critical: f64, rate_flat: f64 },
    /// Sech pulse rising to `h0 + dh` at `t_center` and holding there.
    SechPulse { h0: f64, dh: f64, rate_critical: f64, rate_flat: f64 },
    /// Delayed linear ramp `v * (t - t_start)`, zero before `t_start`.
    LinearRamp { rate_critical: f64, rate_flat: f64 },
}

/// Full protocol record for one system.
#[derive(Debug, Clone)]
pub struct SystemInfo {
    pub id: SystemId,
    pub control_name: &'static str,
    /// Raw control at `lambda_tilde = 0` (bifurcation-forced systems).
    pub control_start: f64,
    /// Raw control at `lambda_tilde = 1`, i.e. the critical value, where
    /// known.
    pub control_crit: Option<f64>,
    pub rate_forcing: Option<RateForcing>,
    pub observable: Observable,
    pub initial: InitialRule,
    /// Per-component clamp box applied after every integration substep.
    /// Keeps post-transition trajectories finite in systems with
    /// superlinear escape and enforces domain bounds (non-negative
    /// populations, fractions in [0, 1]).
    pub state_bounds: Vec<(f64, f64)>,
    pub tip_description: &'static str,
}

/// Protocol record for a system.
pub fn system_info(id: SystemId) -> SystemInfo {
    match id {
        SystemId::BFold => SystemInfo {
            id,
            control_name: "mu",
            control_start: 1.0,
            control_crit: Some(0.0),
            rate_forcing: None,
            observable: Observable::Component(0),
            initial: InitialRule::Equilibrium { guess: vec![0.9] },
            state_bounds: vec![(-100.0, 100.0)],
            tip_description: "escape below x = -1 (past the unstable branch)",
        },
        SystemId::BHopf => SystemInfo {
            id,
            control_name: "mu",
            control_start: -1.0,
            control_crit: Some(0.0),
            rate_forcing: None,
            observable: Observable::Component(0),
            initial: InitialRule::Equilibrium { guess: vec![0.05, 0.05] },
            state_bounds: vec![(-100.0, 100.0), (-100.0, 100.0)],
            tip_description: "sustained oscillation onset: |x - mean| > 3 sd(baseline) for >= 20 samples",
        },
        SystemId::BTranscritical => SystemInfo {
            id,
            control_name: "mu",
            control_start: -1.0,
            control_crit: Some(0.0),
            rate_forcing: None,
            observable: Observable::Component(0),
            initial: InitialRule::Equilibrium { guess: vec![0.0] },
            state_bounds: vec![(-100.0, 100.0)],
            tip_description: "escape below x = -1",
        },
        SystemId::BHarvesting => SystemInfo {
            id,
            control_name: "h",
            control_start: 0.15,
            control_crit: Some(0.260437),
            rate_forcing: None,
            observable: Observable::Component(0),
            initial: InitialRule::Equilibrium { guess: vec![0.9] },
            state_bounds: vec![(0.0, 100.0)],
            tip_description: "biomass collapse x < 0.1 k",
        },
        SystemId::BRmTc => SystemInfo {
            id,
            control_name: "a",
            control_start: 4.0,
            control_crit: Some(100.0 / 17.0),
            rate_forcing: None,
            observable: Observable::Component(0),
            initial: InitialRule::Equilibrium { guess: vec![1.65, 0.0] },
            state_bounds: vec![(0.0, 100.0), (0.0, 100.0)],
            tip_description: "consumer invasion y >= 0.1",
        },
        SystemId::BRmHopf => SystemInfo {
            id,
            control_name: "a",
            control_start: 12.0,
            control_crit: Some(15.686275),
            rate_forcing: None,
            observable: Observable::Component(0),
            initial: InitialRule::Equilibrium { guess: vec![0.85, 0.42] },
            state_bounds: vec![(0.0, 100.0), (0.0, 100.0)],
            tip_description: "sustained oscillation onset: |x - mean| > 3 sd(baseline) for >= 20 samples",
        },
        SystemId::BSeirx => SystemInfo {
            id,
            control_name: "omega",
            control_start: 0.0,
            control_crit: Some(50.0),
            rate_forcing: None,
            observable: Observable::Component(3),
            initial: InitialRule::Equilibrium { guess: vec![0.0, 0.0, 0.0, 1.0] },
            state_bounds: vec![(0.0, 1e5), (0.0, 1e5), (0.0, 1e5), (0.0, 1.0)],
            tip_description: "provaccine sentiment collapse x < 0.5",
        },
        SystemId::BAmoc => SystemInfo {
            id,
            control_name: "H",
            control_start: 0.0,
            control_crit: Some(0.4236),
            rate_forcing: None,
            observable: Observable::AmocStrength,
            initial: InitialRule::Equilibrium { guess: amoc::ON_STATE.to_vec() },
            state_bounds: vec![(30.0, 40.0), (30.0, 40.0)],
            tip_description: "overturning Q drops below 0.2 Q(initial)",
        },
        SystemId::RSaddleNode => SystemInfo {
            id,
            control_name: "lambda",
            control_start: 0.0,
            control_crit: None,
            rate_forcing: Some(RateForcing::TanhRamp {
                max: 3.0,
                rate_critical: 1.25,
                rate_flat: 0.625,
            }),
            observable: Observable::Component(0),
            initial: InitialRule::Equilibrium { guess: vec![-1.0] },
            state_bounds: vec![(-50.0, 50.0)],
            tip_description: "x >= 0",
        },
        SystemId::RBautin => SystemInfo {
            id,
            control_name: "Lambda",
            control_start: 0.0,
            control_crit: None,
            rate_forcing: Some(RateForcing::TanhRamp {
                max: 8.0,
                rate_critical: 0.10,
                rate_flat: 0.05,
            }),
            observable: Observable::Radius,
            // Start on the stable limit cycle of the unforced system:
            // radius^2 = (b - sqrt(b^2 - 4a))/2 for a = 0.1, b = 1.
            initial: InitialRule::Explicit { state: vec![0.335697, 0.0] },
            state_bounds: vec![(-50.0, 50.0), (-50.0, 50.0)],
            tip_description: "radius sqrt(x^2 + y^2) >= 10",
        },
        SystemId::RCompostBomb => SystemInfo {
            id,
            control_name: "v",
            control_start: 0.0,
            control_crit: None,
            rate_forcing: Some(RateForcing::LinearRamp {
                rate_critical: 0.15,
                rate_flat: 0.04,
            }),
            observable: Observable::Component(0),
            initial: InitialRule::Equilibrium { guess: vec![8.15, 50.0] },
            state_bounds: vec![(-273.15, 500.0), (0.0, 1e4)],
            tip_description: "soil temperature T_s > 30",
        },
        SystemId::RAmoc => SystemInfo {
            id,
            control_name: "H",
            control_start: 0.30,
            control_crit: None,
            rate_forcing: Some(RateForcing::SechPulse {
                h0: 0.30,
                dh: 0.11,
                rate_critical: 0.017,
                rate_flat: 0.005,
            }),
            observable: Observable::AmocStrength,
            initial: InitialRule::Equilibrium { guess: amoc::ON_STATE.to_vec() },
            state_bounds: vec![(30.0, 40.0), (30.0, 40.0)],
            tip_description: "overturning Q drops below 0.2 Q(initial)",
        },
    }
}

#[derive(Serialize)]
struct CatalogEntry {
    id: &'static str,
    dimension: usize,
    tipping: &'static str,
    parameters: SystemParams,
    control_parameter: &'static str,
    control_start: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    critical_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rate_forcing: Option<RateForcing>,
    observable: Observable,
    initial: InitialRule,
    state_bounds: Vec<(f64, f64)>,
    tip_criterion: &'static str,
}

#[derive(Serialize)]
struct CatalogDoc {
    schema: &'static str,
    amoc_constants_version: &'static str,
    systems: Vec<CatalogEntry>,
}

/// The full system catalog as a JSON document.
pub fn catalog_json() -> String {
    let systems = SystemId::ALL
        .iter()
        .map(|&id| {
            let info = system_info(id);
            CatalogEntry {
                id: id.name(),
                dimension: id.dim(),
                tipping: if id.is_bifurcation_forced() { "bifurcation" } else { "rate" },
                parameters: id.default_params(),
                control_parameter: info.control_name,
                control_start: info.control_start,
                critical_value: info.control_crit,
                rate_forcing: info.rate_forcing,
                observable: info.observable,
                initial: info.initial,
                state_bounds: info.state_bounds,
                tip_criterion: info.tip_description,
            }
        })
        .collect();
    let doc = CatalogDoc {
        schema: "tipbench-catalog-v1",
        amoc_constants_version: amoc::CONSTANTS_VERSION,
        systems,
    };
    serde_json::to_string_pretty(&doc).expect("catalog serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_covers_all_systems() {
        let json = catalog_json();
        let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
        let systems = doc["systems"].as_array().unwrap();
        assert_eq!(systems.len(), SystemId::ALL.len());
        for s in systems {
            assert!(s["dimension"].as_u64().unwrap() >= 1);
            assert!(s["tip_criterion"].as_str().unwrap().len() > 4);
        }
        for &id in &SystemId::ALL {
            if id.is_bifurcation_forced() {
                assert!(system_info(id).control_crit.is_some(), "{}", id.name());
            } else {
                assert!(system_info(id).rate_forcing.is_some(), "{}", id.name());
            }
        }
    }

    #[test]
    fn bounds_match_dimensions() {
        for &id in &SystemId::ALL {
            let info = system_info(id);
            assert_eq!(info.state_bounds.len(), id.dim(), "{}", id.name());
            match &info.initial {
                InitialRule::Equilibrium { guess } => assert_eq!(guess.len(), id.dim()),
                InitialRule::Explicit { state } => assert_eq!(state.len(), id.dim()),
            }
        }
    }
}
