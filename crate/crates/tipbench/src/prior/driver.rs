//! Random two-dimensional polynomial drivers with a screened stable
//! equilibrium and a detected bifurcation along one coefficient.
//!
//! Each driver is a pair of cubic polynomial vector-field components over
//! the monomial basis `(1, x, y, x^2, xy, y^2, x^3, x^2 y, x y^2, y^3)`.
//! Coefficients are standard normal, exactly half of the 20 are zeroed,
//! and cubic coefficients are replaced by their negative absolute values
//! to bias toward bounded trajectories. Accepted drivers converge to a
//! stable equilibrium from a random start and exhibit a fold, Hopf or
//! transcritical crossing when one nonzero coefficient is swept over
//! [-5, 5].

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::continuation::{
    continue_branch_of, detect_bifurcation, leading_eigenvalue, BifurcationKind,
    ContinuableSystem,
};
use crate::dynamics::StateVector;
use crate::rng::normal;
use crate::{Error, Result};

/// Number of monomials per equation.
pub const N_MONOMIALS: usize = 10;
/// Coefficient count across both equations.
pub const N_COEFFS: usize = 20;
/// Indices of the cubic monomials `x^3, x^2 y, x y^2, y^3` within one
/// equation.
pub const CUBIC_INDICES: [usize; 4] = [6, 7, 8, 9];

/// Monomial values at `(x, y)` in basis order.
pub fn monomials(x: f64, y: f64) -> [f64; N_MONOMIALS] {
    [1.0, x, y, x * x, x * y, y * y, x * x * x, x * x * y, x * y * y, y * y * y]
}

/// d(monomial)/dx in basis order.
fn monomials_dx(x: f64, y: f64) -> [f64; N_MONOMIALS] {
    [0.0, 1.0, 0.0, 2.0 * x, y, 0.0, 3.0 * x * x, 2.0 * x * y, y * y, 0.0]
}

/// d(monomial)/dy in basis order.
fn monomials_dy(x: f64, y: f64) -> [f64; N_MONOMIALS] {
    [0.0, 0.0, 1.0, 0.0, x, 2.0 * y, 0.0, x * x, 2.0 * x * y, 3.0 * y * y]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BifClass {
    Fold,
    Hopf,
    Transcritical,
}

impl BifClass {
    pub const ALL: [BifClass; 3] = [BifClass::Fold, BifClass::Hopf, BifClass::Transcritical];

    pub fn name(&self) -> &'static str {
        match self {
            BifClass::Fold => "fold",
            BifClass::Hopf => "hopf",
            BifClass::Transcritical => "transcritical",
        }
    }
}

/// A screened polynomial driver with its bifurcation annotation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialDriver {
    pub coeffs_x: Vec<f64>,
    pub coeffs_y: Vec<f64>,
    /// Screened stable equilibrium (at the original coefficients).
    pub equilibrium: Vec<f64>,
    /// Recovery rate `|max_i Re mu_i|` at the equilibrium.
    pub recovery: f64,
    /// Index of the forcing coefficient: 0..10 in the x-equation,
    /// 10..20 in the y-equation.
    pub bif_param_index: usize,
    /// Coefficient value at `lambda_tilde = 0`.
    pub p0: f64,
    /// Detected critical coefficient value (`lambda_tilde = 1`).
    pub p_crit: f64,
    pub bif_class: BifClass,
}

impl PolynomialDriver {
    /// Drift with the forcing coefficient replaced by `control`.
    pub fn drift(&self, state: &StateVector, control: f64) -> StateVector {
        let m = monomials(state[0], state[1]);
        let (mut fx, mut fy) = (0.0, 0.0);
        for i in 0..N_MONOMIALS {
            let cx = if self.bif_param_index == i { control } else { self.coeffs_x[i] };
            let cy =
                if self.bif_param_index == i + N_MONOMIALS { control } else { self.coeffs_y[i] };
            fx += cx * m[i];
            fy += cy * m[i];
        }
        DVector::from_vec(vec![fx, fy])
    }

    /// Analytic Jacobian with the forcing coefficient replaced by
    /// `control`.
    pub fn jacobian(&self, state: &StateVector, control: f64) -> DMatrix<f64> {
        let dx = monomials_dx(state[0], state[1]);
        let dy = monomials_dy(state[0], state[1]);
        let mut j = DMatrix::zeros(2, 2);
        for i in 0..N_MONOMIALS {
            let cx = if self.bif_param_index == i { control } else { self.coeffs_x[i] };
            let cy =
                if self.bif_param_index == i + N_MONOMIALS { control } else { self.coeffs_y[i] };
            j[(0, 0)] += cx * dx[i];
            j[(0, 1)] += cx * dy[i];
            j[(1, 0)] += cy * dx[i];
            j[(1, 1)] += cy * dy[i];
        }
        j
    }
}

/// View of a raw coefficient vector with one swept coefficient, for the
/// bifurcation scan.
struct CoeffSweep<'a> {
    coeffs: &'a [f64; N_COEFFS],
    sweep_index: usize,
}

impl CoeffSweep<'_> {
    fn coeff(&self, i: usize, control: f64) -> f64 {
        if i == self.sweep_index {
            control
        } else {
            self.coeffs[i]
        }
    }
}

impl ContinuableSystem for CoeffSweep<'_> {
    fn dim(&self) -> usize {
        2
    }

    fn drift(&self, state: &StateVector, control: f64) -> Result<StateVector> {
        let m = monomials(state[0], state[1]);
        let (mut fx, mut fy) = (0.0, 0.0);
        for i in 0..N_MONOMIALS {
            fx += self.coeff(i, control) * m[i];
            fy += self.coeff(i + N_MONOMIALS, control) * m[i];
        }
        if !fx.is_finite() || !fy.is_finite() {
            return Err(Error::NonFinite("driver drift"));
        }
        Ok(DVector::from_vec(vec![fx, fy]))
    }

    fn jacobian(&self, state: &StateVector, control: f64) -> Result<DMatrix<f64>> {
        let dx = monomials_dx(state[0], state[1]);
        let dy = monomials_dy(state[0], state[1]);
        let mut j = DMatrix::zeros(2, 2);
        for i in 0..N_MONOMIALS {
            let cx = self.coeff(i, control);
            let cy = self.coeff(i + N_MONOMIALS, control);
            j[(0, 0)] += cx * dx[i];
            j[(0, 1)] += cx * dy[i];
            j[(1, 0)] += cy * dx[i];
            j[(1, 1)] += cy * dy[i];
        }
        Ok(j)
    }

    fn label(&self) -> String {
        format!("driver/coeff{}", self.sweep_index)
    }
}

/// Budget counters reported with every accepted (or failed) sample.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct SampleStats {
    pub attempts: usize,
    pub models_tried: usize,
}

/// Screening limits.
const SCREEN_DT: f64 = 0.01;
const SCREEN_STEPS: usize = 10_000;
const SCREEN_TAIL: usize = 10;
const SCREEN_RANGE_TOL: f64 = 1e-8;
const SCREEN_AMPLITUDE_MAX: f64 = 1e3;

/// Raw model budget per attempt and attempt budget per sample.
pub const MODELS_PER_ATTEMPT: usize = 100;
pub const ATTEMPTS_PER_SAMPLE: usize = 50;

/// Coefficient sweep interval and resolution for the bifurcation scan.
const SWEEP_LIMIT: f64 = 5.0;
const SWEEP_STEPS: usize = 400;

struct ScreenedModel {
    coeffs: [f64; N_COEFFS],
    equilibrium: StateVector,
    recovery: f64,
}

/// Draw raw coefficients: N(0,1), an exactly-50% random zero subset,
/// cubic coefficients negated in absolute value.
fn draw_coeffs(rng: &mut impl Rng) -> [f64; N_COEFFS] {
    let mut c = [0.0; N_COEFFS];
    for v in c.iter_mut() {
        *v = normal(rng);
    }
    let zero_set = crate::rng::shuffled_indices(rng, N_COEFFS);
    for &i in &zero_set[..N_COEFFS / 2] {
        c[i] = 0.0;
    }
    for &i in &CUBIC_INDICES {
        c[i] = -c[i].abs();
        c[i + N_MONOMIALS] = -c[i + N_MONOMIALS].abs();
    }
    c
}

/// Forward-Euler screening from `z0 ~ N(0, 4 I)`: accept if the final 10
/// states differ by less than 1e-8 in range norm, the trajectory stays
/// below 1e3 in amplitude, and the polished equilibrium is stable.
fn screen_model(rng: &mut impl Rng, coeffs: &[f64; N_COEFFS]) -> Option<ScreenedModel> {
    let sweep = CoeffSweep { coeffs, sweep_index: usize::MAX };
    let mut z = DVector::from_vec(vec![2.0 * normal(rng), 2.0 * normal(rng)]);
    let mut tail: Vec<StateVector> = Vec::with_capacity(SCREEN_TAIL);
    for step in 0..SCREEN_STEPS {
        let f = sweep.drift(&z, 0.0).ok()?;
        z += f * SCREEN_DT;
        if !z[0].is_finite() || !z[1].is_finite() || z.amax() > SCREEN_AMPLITUDE_MAX {
            return None;
        }
        if step + SCREEN_TAIL >= SCREEN_STEPS {
            tail.push(z.clone());
        }
    }
    let mut range = [0.0f64; 2];
    for d in 0..2 {
        let lo = tail.iter().map(|s| s[d]).fold(f64::INFINITY, f64::min);
        let hi = tail.iter().map(|s| s[d]).fold(f64::NEG_INFINITY, f64::max);
        range[d] = hi - lo;
    }
    if (range[0] * range[0] + range[1] * range[1]).sqrt() >= SCREEN_RANGE_TOL {
        return None;
    }
    let equilibrium = crate::continuation::find_equilibrium_of(&sweep, 0.0, &z).ok()?;
    let jac = sweep.jacobian(&equilibrium, 0.0).ok()?;
    let (re, _) = leading_eigenvalue(&jac);
    if re >= 0.0 {
        return None;
    }
    Some(ScreenedModel { coeffs: *coeffs, equilibrium, recovery: re.abs() })
}

/// Scan each nonzero coefficient over `[-5, 5]` (split at its current
/// value) for the first admissible bifurcation. Within a coefficient the
/// direction with the smaller `|p_crit - p0|` wins.
fn scan_bifurcation(
    model: &ScreenedModel,
    target: Option<BifClass>,
) -> Option<(usize, f64, f64, BifClass)> {
    for idx in 0..N_COEFFS {
        let p0 = model.coeffs[idx];
        if p0 == 0.0 {
            continue;
        }
        let sweep = CoeffSweep { coeffs: &model.coeffs, sweep_index: idx };
        let mut best: Option<(f64, BifClass)> = None;
        for limit in [SWEEP_LIMIT, -SWEEP_LIMIT] {
            let span = (limit - p0).abs();
            if span < 1e-9 {
                continue;
            }
            let steps = ((SWEEP_STEPS as f64 * span / (2.0 * SWEEP_LIMIT)).round() as usize).max(2);
            let branch = match continue_branch_of(&sweep, (p0, limit), steps, &model.equilibrium) {
                Ok(b) => b,
                Err(_) => continue,
            };
            let bp = match detect_bifurcation(&sweep, &branch) {
                Ok(bp) => bp,
                Err(_) => continue,
            };
            let class = match bp.kind {
                BifurcationKind::Fold => BifClass::Fold,
                BifurcationKind::Hopf if !bp.degenerate_frequency => BifClass::Hopf,
                BifurcationKind::TranscriticalOrFoldReal => BifClass::Transcritical,
                _ => continue,
            };
            if let Some(t) = target {
                if class != t {
                    continue;
                }
            }
            let better = match &best {
                None => true,
                Some((p, _)) => (bp.control_crit - p0).abs() < (p - p0).abs(),
            };
            if better {
                best = Some((bp.control_crit, class));
            }
        }
        if let Some((p_crit, class)) = best {
            return Some((idx, p0, p_crit, class));
        }
    }
    None
}

/// Sample one polynomial driver, optionally conditioned on a bifurcation
/// class. Budgets: up to [`MODELS_PER_ATTEMPT`] raw models per attempt,
/// up to [`ATTEMPTS_PER_SAMPLE`] attempts.
pub fn sample_driver(
    rng: &mut impl Rng,
    target: Option<BifClass>,
) -> Result<(PolynomialDriver, SampleStats)> {
    let mut stats = SampleStats::default();
    for attempt in 0..ATTEMPTS_PER_SAMPLE {
        stats.attempts = attempt + 1;
        let mut screened = None;
        for _ in 0..MODELS_PER_ATTEMPT {
            stats.models_tried += 1;
            let coeffs = draw_coeffs(rng);
            if let Some(m) = screen_model(rng, &coeffs) {
                screened = Some(m);
                break;
            }
        }
        let Some(model) = screened else { continue };
        if let Some((idx, p0, p_crit, class)) = scan_bifurcation(&model, target) {
            let driver = PolynomialDriver {
                coeffs_x: model.coeffs[..N_MONOMIALS].to_vec(),
                coeffs_y: model.coeffs[N_MONOMIALS..].to_vec(),
                equilibrium: model.equilibrium.iter().copied().collect(),
                recovery: model.recovery,
                bif_param_index: idx,
                p0,
                p_crit,
                bif_class: class,
            };
            return Ok((driver, stats));
        }
    }
    Err(Error::SamplingBudgetExhausted {
        attempts: stats.attempts,
        models_tried: stats.models_tried,
    })
}
