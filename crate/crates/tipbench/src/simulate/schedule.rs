//! Forcing-schedule families.
//!
//! Training schedules (for prior-data generation) are a nonlinear mixture:
//! Bezier ramp-and-hold (p = 0.4), linear ramp-and-hold (p = 0.4) and
//! constant zero forcing (p = 0.2); final levels may exceed 1, passing the
//! bifurcation. Validation schedules are exclusively linear with five
//! classes: critical reaches the normalized critical value exactly at its
//! critical step and holds, approaching stays bounded away by a margin,
//! receding ramps down, flat holds with small jitter, equilibrium holds
//! zero. Rate-forced systems replace the normalized ramp by their native
//! forcing profile; their classes are critical (fast rate), flat (slower,
//! non-tipping rate) and equilibrium (frozen forcing).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::catalog::RateForcing;
use crate::rng::weighted_index;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleClass {
    Critical,
    Approaching,
    Receding,
    Flat,
    Equilibrium,
    BezierAndHold,
    RampAndHold,
    Constant,
}

impl ScheduleClass {
    pub fn name(&self) -> &'static str {
        match self {
            ScheduleClass::Critical => "critical",
            ScheduleClass::Approaching => "approaching",
            ScheduleClass::Receding => "receding",
            ScheduleClass::Flat => "flat",
            ScheduleClass::Equilibrium => "equilibrium",
            ScheduleClass::BezierAndHold => "bezier_and_hold",
            ScheduleClass::RampAndHold => "ramp_and_hold",
            ScheduleClass::Constant => "constant",
        }
    }

    /// Whether episodes of this class are labeled critical.
    pub fn is_critical(&self) -> bool {
        matches!(self, ScheduleClass::Critical)
    }
}

/// Schedule-specific draw record, kept for provenance.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ScheduleParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hold_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub control_points: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_crit_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_center: Option<f64>,
}

/// How raw control values are produced from the schedule during
/// integration.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RawForcing {
    /// Interpolate the normalized values and map through
    /// `p = p0 + lambda_tilde (p_crit - p0)`.
    Normalized { p0: f64, p_crit: f64 },
    /// `lambda(t) = (max/2)(tanh(max rate (t - t_center)/2) + 1)`.
    TanhRamp { max: f64, rate: f64, t_center: f64 },
    /// Sech pulse, plateauing at `h0 + dh` from `t_center` on.
    SechPulse { h0: f64, dh: f64, rate: f64, t_center: f64 },
    /// Control is the ramp rate itself; drift time is measured from
    /// `t_start` (zero before it).
    LinearRate { rate: f64, t_start: f64 },
    /// Frozen forcing.
    Constant { value: f64 },
}

impl RawForcing {
    /// Raw control and effective drift time at absolute time `t`.
    pub fn control_at(&self, lambda_tilde: f64, t: f64) -> (f64, f64) {
        match *self {
            RawForcing::Normalized { p0, p_crit } => {
                (p0 + lambda_tilde * (p_crit - p0), t)
            }
            RawForcing::TanhRamp { max, rate, t_center } => {
                (crate::dynamics::r_forcing_saddle(max, rate, t - t_center), t)
            }
            RawForcing::SechPulse { h0, dh, rate, t_center } => {
                (crate::dynamics::r_forcing_sech(h0, dh, rate, t_center, t), t)
            }
            RawForcing::LinearRate { rate, t_start } => (rate, (t - t_start).max(0.0)),
            RawForcing::Constant { value } => (value, 0.0),
        }
    }
}

/// A time-indexed normalized control trajectory with its class tag.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ForcingSchedule {
    pub class: ScheduleClass,
    /// Normalized forcing per output step: 0 = start regime, 1 = critical.
    pub values: Vec<f64>,
    pub params: ScheduleParams,
}

impl ForcingSchedule {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Linear interpolation of the normalized values at a fractional
    /// output-step position; clamped at the ends.
    pub fn lambda_at(&self, step_pos: f64) -> f64 {
        let n = self.values.len();
        if step_pos <= 0.0 {
            return self.values[0];
        }
        let last = (n - 1) as f64;
        if step_pos >= last {
            return self.values[n - 1];
        }
        let i = step_pos.floor() as usize;
        let frac = step_pos - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    /// First output step at which the normalized forcing reaches the
    /// critical value.
    pub fn critical_step(&self) -> Option<usize> {
        self.values.iter().position(|&v| v >= 1.0 - 1e-12)
    }
}

/// De Casteljau evaluation of a Bezier curve at parameter `s in [0, 1]`.
fn de_casteljau(points: &[f64], s: f64) -> f64 {
    let mut work = points.to_vec();
    for level in (1..work.len()).rev() {
        for i in 0..level {
            work[i] = work[i] * (1.0 - s) + work[i + 1] * s;
        }
    }
    work[0]
}

/// Sample a training-family schedule.
pub fn sample_training_schedule(rng: &mut impl Rng, length: usize) -> ForcingSchedule {
    assert!(length >= 2, "schedule length must be >= 2");
    let pick = weighted_index(rng, &[0.4, 0.4, 0.2]);
    match pick {
        0 => {
            let h = rng.random_range(0.6..0.8);
            let level = if rng.random::<f64>() < 0.5 { 1.0 } else { rng.random_range(0.6..1.2) };
            let n_c = [3usize, 4, 5, 6][weighted_index(rng, &[2.0, 3.0, 2.0, 1.0])];
            let mut points = Vec::with_capacity(n_c + 1);
            points.push(0.0);
            for _ in 0..n_c.saturating_sub(2) {
                let v: f64 = rng.random_range(0.1 * level..0.9 * level);
                points.push(v.clamp(0.0, level));
            }
            points.push(level);
            // Duplicate the final control point for an approximately
            // smooth join with the hold phase.
            points.push(level);
            let values = (0..length)
                .map(|k| {
                    let f = k as f64 / (length - 1) as f64;
                    if f <= h {
                        de_casteljau(&points, f / h)
                    } else {
                        level
                    }
                })
                .collect();
            ForcingSchedule {
                class: ScheduleClass::BezierAndHold,
                values,
                params: ScheduleParams {
                    hold_fraction: Some(h),
                    level: Some(level),
                    control_points: Some(points),
                    ..Default::default()
                },
            }
        }
        1 => {
            let h = rng.random_range(0.6..0.8);
            let level = if rng.random::<f64>() < 0.5 { 1.0 } else { rng.random_range(0.6..1.2) };
            let values = (0..length)
                .map(|k| {
                    let f = k as f64 / (length - 1) as f64;
                    if f <= h {
                        level * f / h
                    } else {
                        level
                    }
                })
                .collect();
            ForcingSchedule {
                class: ScheduleClass::RampAndHold,
                values,
                params: ScheduleParams {
                    hold_fraction: Some(h),
                    level: Some(level),
                    ..Default::default()
                },
            }
        }
        _ => ForcingSchedule {
            class: ScheduleClass::Constant,
            values: vec![0.0; length],
            params: ScheduleParams::default(),
        },
    }
}

/// Sample a validation-family schedule for bifurcation-forced systems
/// (linear forms only). `class_draw` forces a class.
pub fn sample_validation_schedule(
    rng: &mut impl Rng,
    length: usize,
    class_draw: Option<ScheduleClass>,
) -> ForcingSchedule {
    assert!(length >= 2, "schedule length must be >= 2");
    let class = class_draw.unwrap_or_else(|| {
        if rng.random::<f64>() < 0.5 {
            ScheduleClass::Critical
        } else {
            [
                ScheduleClass::Approaching,
                ScheduleClass::Receding,
                ScheduleClass::Flat,
                ScheduleClass::Equilibrium,
            ][rng.random_range(0..4)]
        }
    });
    let last = (length - 1) as f64;
    match class {
        ScheduleClass::Critical => {
            let lambda0 = rng.random_range(0.0..0.5);
            let t_c = (rng.random_range(0.5..0.95) * last).round() as usize;
            let t_c = t_c.clamp(1, length - 1);
            let values = (0..length)
                .map(|k| {
                    if k >= t_c {
                        1.0
                    } else {
                        lambda0 + (1.0 - lambda0) * k as f64 / t_c as f64
                    }
                })
                .collect();
            ForcingSchedule {
                class,
                values,
                params: ScheduleParams {
                    lambda0: Some(lambda0),
                    t_crit_index: Some(t_c),
                    ..Default::default()
                },
            }
        }
        ScheduleClass::Approaching => {
            let lambda0 = rng.random_range(0.0..0.3);
            let eps = rng.random_range(0.05..0.3);
            let top = 1.0 - eps;
            let values =
                (0..length).map(|k| lambda0 + (top - lambda0) * k as f64 / last).collect();
            ForcingSchedule {
                class,
                values,
                params: ScheduleParams {
                    lambda0: Some(lambda0),
                    epsilon_margin: Some(eps),
                    ..Default::default()
                },
            }
        }
        ScheduleClass::Receding => {
            let lambda0 = rng.random_range(0.3..0.9);
            let end = rng.random_range(0.0..0.5 * lambda0);
            let values =
                (0..length).map(|k| lambda0 + (end - lambda0) * k as f64 / last).collect();
            ForcingSchedule {
                class,
                values,
                params: ScheduleParams { lambda0: Some(lambda0), ..Default::default() },
            }
        }
        ScheduleClass::Flat => {
            // Zero-mean AR(1) jitter with std 0.01 lambda0.
            let lambda0 = rng.random_range(0.1..0.8);
            let sd = 0.01 * lambda0;
            let phi: f64 = 0.9;
            let innov = sd * (1.0 - phi * phi).sqrt();
            let mut delta = sd * crate::rng::normal(rng);
            let mut values = Vec::with_capacity(length);
            for _ in 0..length {
                values.push((lambda0 + delta).max(0.0));
                delta = phi * delta + innov * crate::rng::normal(rng);
            }
            ForcingSchedule {
                class,
                values,
                params: ScheduleParams { lambda0: Some(lambda0), ..Default::default() },
            }
        }
        ScheduleClass::Equilibrium => ForcingSchedule {
            class,
            values: vec![0.0; length],
            params: ScheduleParams::default(),
        },
        other => panic!("{} is not a validation class", other.name()),
    }
}

/// Sample the per-class forcing for a rate-forced system: the normalized
/// trace plus the raw forcing description the integrator evaluates.
pub fn sample_rate_schedule(
    rng: &mut impl Rng,
    length: usize,
    forcing: &RateForcing,
    class_draw: Option<ScheduleClass>,
) -> (ForcingSchedule, RawForcing) {
    assert!(length >= 2, "schedule length must be >= 2");
    let class = class_draw.unwrap_or_else(|| {
        if rng.random::<f64>() < 0.5 {
            ScheduleClass::Critical
        } else {
            [ScheduleClass::Flat, ScheduleClass::Equilibrium][rng.random_range(0..2)]
        }
    });
    let t_center = (rng.random_range(0.4..0.8) * (length - 1) as f64).round();
    let pick_rate = |crit: f64, flat: f64| match class {
        ScheduleClass::Critical => Some(crit),
        ScheduleClass::Flat => Some(flat),
        ScheduleClass::Equilibrium => None,
        other => panic!("{} is not a rate-forcing class", other.name()),
    };
    let (raw, values): (RawForcing, Vec<f64>) = match *forcing {
        RateForcing::TanhRamp { max, rate_critical, rate_flat } => {
            match pick_rate(rate_critical, rate_flat) {
                Some(rate) => {
                    let raw = RawForcing::TanhRamp { max, rate, t_center };
                    let values = (0..length)
                        .map(|k| {
                            crate::dynamics::r_forcing_saddle(max, rate, k as f64 - t_center) / max
                        })
                        .collect();
                    (raw, values)
                }
                None => (RawForcing::Constant { value: 0.0 }, vec![0.0; length]),
            }
        }
        RateForcing::SechPulse { h0, dh, rate_critical, rate_flat } => {
            match pick_rate(rate_critical, rate_flat) {
                Some(rate) => {
                    let raw = RawForcing::SechPulse { h0, dh, rate, t_center };
                    let values = (0..length)
                        .map(|k| {
                            let h = crate::dynamics::r_forcing_sech(
                                h0,
                                dh,
                                rate,
                                t_center,
                                k as f64,
                            );
                            (h - h0) / dh
                        })
                        .collect();
                    (raw, values)
                }
                None => (RawForcing::Constant { value: h0 }, vec![0.0; length]),
            }
        }
        RateForcing::LinearRamp { rate_critical, rate_flat } => {
            let t_start = (rng.random_range(0.4..0.7) * (length - 1) as f64).round();
            match pick_rate(rate_critical, rate_flat) {
                Some(rate) => {
                    let raw = RawForcing::LinearRate { rate, t_start };
                    let span = (length - 1) as f64 - t_start;
                    let values = (0..length)
                        .map(|k| ((k as f64 - t_start).max(0.0) / span).min(1.0))
                        .collect();
                    (raw, values)
                }
                None => (RawForcing::Constant { value: 0.0 }, vec![0.0; length]),
            }
        }
    };
    let rate = match raw {
        RawForcing::TanhRamp { rate, .. }
        | RawForcing::SechPulse { rate, .. }
        | RawForcing::LinearRate { rate, .. } => Some(rate),
        _ => None,
    };
    let schedule = ForcingSchedule {
        class,
        values,
        params: ScheduleParams { rate, t_center: Some(t_center), ..Default::default() },
    };
    (schedule, raw)
}
