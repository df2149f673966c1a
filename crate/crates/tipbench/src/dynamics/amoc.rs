//! Two-box reduction of the five-box Atlantic overturning model.
//!
//! The dynamic state is `(S_N, S_T)`, the North Atlantic and tropical
//! Atlantic salinities. Southern Ocean, Indo-Pacific and bottom-water
//! salinities are held fixed, and the overturning strength is diagnosed
//! from the density contrast:
//!
//! ```text
//! Q = lambda [alpha (T_S - T_0) + beta (S_N - S_S)] / (1 + lambda alpha mu)
//! ```
//!
//! The salinity drift is piecewise in the sign of `Q` (advective pathways
//! reverse when the circulation collapses); both branches coincide at
//! `Q = 0`, so the drift is continuous across the switching surface.
//!
//! Units: salinities in psu, fluxes and `Q` in Sv, time in years, box
//! volumes in Sv*yr (1 Sv*yr = 3.1536e13 m^3).
//!
//! The constant set below is `CONSTANTS_VERSION`. Gyre exchanges, thermal
//! coefficients and reference salinities are rounded values of the
//! five-box calibration this reduction derives from; the surface fluxes
//! `F_N0`, `F_T0` are fixed by requiring that `(S_N, S_T) =
//! (35.0, 35.6234)` is the unforced on-state equilibrium (Q ~ 16.1 Sv);
//! the hosing-to-flux slope `HOSING_SLOPE` is calibrated so that the
//! quasi-static fold of the on-state sits at `H* = 0.4236` Sv; and the box
//! volumes (which only affect transients, never equilibria) are set so the
//! rate-forced hosing protocol separates its two pulse rates.

use nalgebra::DVector;

use super::StateVector;

pub const CONSTANTS_VERSION: &str = "amoc-2box-v1";

/// North Atlantic box volume, Sv*yr.
pub const V_N: f64 = 1168.0;
/// Tropical Atlantic box volume, Sv*yr.
///
/// Volumes only set transient timescales; equilibria and the fold location
/// are volume-independent. V_T is chosen so the rate-forced hosing pulse
/// discriminates its two printed rates: at 0.017/yr the tropical box cannot
/// resupply salt fast enough and the overturning collapses even though the
/// pulse peaks below the fold, while at 0.005/yr the system tracks.
pub const V_T: f64 = 3000.0;
/// Northern gyre exchange, Sv.
pub const K_N: f64 = 5.456;
/// Southern gyre exchange, Sv.
pub const K_S: f64 = 5.447;
/// Fraction of the return path routed through the Southern Ocean box.
pub const GAMMA: f64 = 0.39;
/// Overturning transport coefficient, Sv per (kg m^-3).
pub const LAMBDA: f64 = 27.9;
/// Thermal expansion coefficient, kg m^-3 K^-1.
pub const ALPHA: f64 = 0.12;
/// Haline contraction coefficient, kg m^-3 psu^-1.
pub const BETA: f64 = 0.79;
/// Southern Ocean reference temperature, degC.
pub const T_S: f64 = 7.919;
/// Deep reference temperature, degC.
pub const T_0: f64 = 3.87;
/// Thermal feedback on the overturning, degC/Sv.
pub const MU: f64 = 0.055;
/// Reference salinity used by the virtual salt fluxes, psu.
pub const S_0: f64 = 35.0;
/// Fixed Southern Ocean salinity, psu.
pub const S_S: f64 = 34.75;
/// Fixed Indo-Pacific salinity, psu.
pub const S_IP: f64 = 34.90;
/// Fixed bottom-water salinity, psu.
pub const S_B: f64 = 34.60;
/// Unforced North Atlantic surface freshwater flux, Sv.
pub const F_N0: f64 = 0.384;
/// Unforced tropical Atlantic surface freshwater flux, Sv.
pub const F_T0: f64 = -0.5928;
/// Hosing-to-flux slope: F_N(H) = F_N0 + HOSING_SLOPE * H, i.e. the share
/// of the hosing applied to the North Atlantic box. Calibrated so the
/// quasi-static fold of the on-state sits at H* = 0.4236 Sv (the fold in
/// flux units is at F_N = F_N0 + 0.10379 Sv).
pub const HOSING_SLOPE: f64 = 0.245;

/// On-state equilibrium at H = 0 (by construction of `F_N0`, `F_T0`).
pub const ON_STATE: [f64; 2] = [35.0, 35.6234];

/// Diagnosed overturning strength for a given North Atlantic salinity.
pub fn strength(s_n: f64) -> f64 {
    LAMBDA * (ALPHA * (T_S - T_0) + BETA * (s_n - S_S)) / (1.0 + LAMBDA * ALPHA * MU)
}

/// dQ/dS_N, used by the switching-surface proximity guard.
pub fn strength_slope() -> f64 {
    LAMBDA * BETA / (1.0 + LAMBDA * ALPHA * MU)
}

/// Freshwater fluxes under hosing `H`.
pub fn fluxes(hosing: f64) -> (f64, f64) {
    (F_N0 + HOSING_SLOPE * hosing, F_T0)
}

/// Salinity drift `(dS_N/dt, dS_T/dt)` under hosing `H` (control).
pub fn drift(state: &StateVector, hosing: f64) -> StateVector {
    let (s_n, s_t) = (state[0], state[1]);
    let q = strength(s_n);
    let (f_n, f_t) = fluxes(hosing);
    let (dn, dt) = if q >= 0.0 {
        let dn = q * (s_t - s_n) + K_N * (s_t - s_n) - f_n * S_0;
        let mix = GAMMA * S_S + (1.0 - GAMMA) * S_IP;
        let dt = q * (mix - s_t) + K_S * (S_S - s_t) + K_N * (s_n - s_t) - f_t * S_0;
        (dn, dt)
    } else {
        let qa = q.abs();
        let dn = qa * (S_B - s_n) + K_N * (s_t - s_n) - f_n * S_0;
        let dt = qa * (s_n - s_t) + K_S * (S_S - s_t) + K_N * (s_n - s_t) - f_t * S_0;
        (dn, dt)
    };
    DVector::from_vec(vec![dn / V_N, dt / V_T])
}
