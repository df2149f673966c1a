//! Equilibrium tracking and bifurcation localization along a
//! control-parameter sweep.
//!
//! Natural-parameter continuation: each step re-solves `f(x, c) = 0` by
//! damped Newton, warm-started from the previous equilibrium, and records
//! the leading Jacobian eigenvalue. Folds are detected as Newton failure
//! along the sweep (the equilibrium ceases to exist); eigenvalue sign
//! changes along a persisting branch are Hopf or real crossings depending
//! on the imaginary part at the crossing.

use nalgebra::DMatrix;

use crate::dynamics::{self, StateVector, SystemId, SystemParams};
use crate::{Error, Result};

/// Newton convergence threshold on the residual infinity norm.
pub const NEWTON_TOL: f64 = 1e-10;
/// Maximum Newton iterations per solve.
pub const NEWTON_MAX_ITER: usize = 100;
/// Imaginary-part threshold separating Hopf from real crossings.
pub const IMAG_TOL: f64 = 1e-6;

/// Anything that exposes a parameterized drift can be continued.
pub trait ContinuableSystem {
    fn dim(&self) -> usize;
    fn drift(&self, state: &StateVector, control: f64) -> Result<StateVector>;

    /// Central finite differences with step `max(1e-6, 1e-6 |x_i|)` unless
    /// overridden with an analytic Jacobian.
    fn jacobian(&self, state: &StateVector, control: f64) -> Result<DMatrix<f64>> {
        let n = state.len();
        let mut jac = DMatrix::zeros(n, n);
        for j in 0..n {
            let h = (1e-6 * state[j].abs()).max(1e-6);
            let mut xp = state.clone();
            let mut xm = state.clone();
            xp[j] += h;
            xm[j] -= h;
            let fp = self.drift(&xp, control)?;
            let fm = self.drift(&xm, control)?;
            for i in 0..n {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        Ok(jac)
    }

    fn label(&self) -> String;
}

/// A catalog system bound to a parameter set.
pub struct CatalogSystem<'a> {
    pub id: SystemId,
    pub params: &'a SystemParams,
}

impl ContinuableSystem for CatalogSystem<'_> {
    fn dim(&self) -> usize {
        self.id.dim()
    }

    fn drift(&self, state: &StateVector, control: f64) -> Result<StateVector> {
        dynamics::drift(self.id, self.params, state, control, 0.0)
    }

    fn jacobian(&self, state: &StateVector, control: f64) -> Result<DMatrix<f64>> {
        dynamics::jacobian(self.id, self.params, state, control)
    }

    fn label(&self) -> String {
        self.id.name().to_string()
    }
}

/// One continuation sample.
#[derive(Debug, Clone)]
pub struct BranchSample {
    pub control: f64,
    pub state: StateVector,
    pub leading_eig_re: f64,
    pub leading_eig_im: f64,
}

/// Bracket left behind when Newton stops converging along the sweep.
#[derive(Debug, Clone, Copy)]
pub struct FoldTermination {
    pub last_converged: f64,
    pub first_failed: f64,
}

/// An equilibrium branch over a monotone control sweep.
#[derive(Debug, Clone)]
pub struct EquilibriumBranch {
    pub label: String,
    pub samples: Vec<BranchSample>,
    /// Set when the sweep terminated early because the equilibrium
    /// disappeared (fold passage / branch end).
    pub truncated: Option<FoldTermination>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BifurcationKind {
    Fold,
    Hopf,
    TranscriticalOrFoldReal,
    None,
}

#[derive(Debug, Clone)]
pub struct BifurcationPoint {
    pub control_crit: f64,
    pub kind: BifurcationKind,
    pub bracket: (f64, f64),
    /// |Im| of the leading eigenvalue at the crossing (0 for folds).
    pub imag_at_crossing: f64,
    /// Set when the crossing frequency sits in the ambiguous band just
    /// above `IMAG_TOL`; such points are reported, not silently classified.
    pub degenerate_frequency: bool,
}

/// Leading eigenvalue (largest real part) of a dense matrix.
pub fn leading_eigenvalue(m: &DMatrix<f64>) -> (f64, f64) {
    let eigs = m.complex_eigenvalues();
    let mut best = (f64::NEG_INFINITY, 0.0f64);
    for e in eigs.iter() {
        if e.re > best.0 || (e.re == best.0 && e.im.abs() > best.1.abs()) {
            best = (e.re, e.im);
        }
    }
    best
}

/// Damped Newton solve of `f(x, control) = 0`.
fn newton(sys: &dyn ContinuableSystem, control: f64, guess: &StateVector) -> Result<StateVector> {
    let mut x = guess.clone();
    let mut f = sys.drift(&x, control)?;
    let mut res = f.amax();
    for it in 0..NEWTON_MAX_ITER {
        if res < NEWTON_TOL {
            return Ok(x);
        }
        let jac = sys.jacobian(&x, control)?;
        let delta = match jac.lu().solve(&(-&f)) {
            Some(d) => d,
            None => return Err(Error::NoConvergence { iterations: it, residual: res }),
        };
        let mut accepted = false;
        let mut damping = 1.0;
        for _ in 0..8 {
            let cand = &x + &delta * damping;
            if let Ok(fc) = sys.drift(&cand, control) {
                let rc = fc.amax();
                if rc.is_finite() && rc < res {
                    x = cand;
                    f = fc;
                    res = rc;
                    accepted = true;
                    break;
                }
            }
            damping *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence { iterations: it, residual: res });
        }
    }
    if res < NEWTON_TOL {
        Ok(x)
    } else {
        Err(Error::NoConvergence { iterations: NEWTON_MAX_ITER, residual: res })
    }
}

/// Damped Newton on the drift, falling back to 500 time units of forward
/// integration followed by a Newton polish.
pub fn find_equilibrium_of(
    sys: &dyn ContinuableSystem,
    control: f64,
    guess: &StateVector,
) -> Result<StateVector> {
    if guess.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("guess"));
    }
    match newton(sys, control, guess) {
        Ok(x) => Ok(x),
        Err(_) => {
            let mut x = guess.clone();
            let dt = 0.01;
            for _ in 0..50_000 {
                let f = sys.drift(&x, control)?;
                x += f * dt;
                if x.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite("integration fallback diverged"));
                }
            }
            newton(sys, control, &x)
        }
    }
}

/// [`find_equilibrium_of`] for a catalog system.
pub fn find_equilibrium(
    system: SystemId,
    params: &SystemParams,
    control: f64,
    guess: &StateVector,
) -> Result<StateVector> {
    find_equilibrium_of(&CatalogSystem { id: system, params }, control, guess)
}

fn sample_at(
    sys: &dyn ContinuableSystem,
    control: f64,
    guess: &StateVector,
) -> Result<BranchSample> {
    let state = newton(sys, control, guess)?;
    let jac = sys.jacobian(&state, control)?;
    let (re, im) = leading_eigenvalue(&jac);
    Ok(BranchSample { control, state, leading_eig_re: re, leading_eig_im: im })
}

/// Natural-parameter continuation over `n_steps` equally spaced control
/// values, warm-starting each Newton solve from the previous equilibrium.
pub fn continue_branch_of(
    sys: &dyn ContinuableSystem,
    control_range: (f64, f64),
    n_steps: usize,
    start_state: &StateVector,
) -> Result<EquilibriumBranch> {
    if n_steps < 2 {
        return Err(Error::InvalidArgument("n_steps must be >= 2".into()));
    }
    let (c0, c1) = control_range;
    let step = (c1 - c0) / (n_steps - 1) as f64;
    let first = find_equilibrium_of(sys, c0, start_state)
        .map_err(|_| Error::ContinuationStartFailed { control: c0 })?;
    let mut samples = Vec::with_capacity(n_steps);
    samples.push(sample_at(sys, c0, &first)?);
    let mut truncated = None;
    for i in 1..n_steps {
        let c = c0 + step * i as f64;
        let guess = samples.last().unwrap().state.clone();
        match sample_at(sys, c, &guess) {
            Ok(s) => samples.push(s),
            Err(_) => {
                truncated = Some(FoldTermination {
                    last_converged: samples.last().unwrap().control,
                    first_failed: c,
                });
                break;
            }
        }
    }
    Ok(EquilibriumBranch { label: sys.label(), samples, truncated })
}

/// [`continue_branch_of`] for a catalog system.
pub fn continue_branch(
    system: SystemId,
    params: &SystemParams,
    control_range: (f64, f64),
    n_steps: usize,
    start_state: &StateVector,
) -> Result<EquilibriumBranch> {
    continue_branch_of(&CatalogSystem { id: system, params }, control_range, n_steps, start_state)
}

fn bisect_tol(lo: f64, hi: f64) -> f64 {
    1e-6 * lo.abs().max(hi.abs()).max(1.0)
}

/// Locate and classify the first stability change along a branch.
///
/// A sign change of `Re(mu_max)` between adjacent samples is refined by
/// bisection on the continued eigenvalue; a truncated branch with no sign
/// change is refined by bisection on equilibrium existence and classified
/// as a fold. `kind = None` encodes a branch with neither.
pub fn detect_bifurcation(
    sys: &dyn ContinuableSystem,
    branch: &EquilibriumBranch,
) -> Result<BifurcationPoint> {
    if branch.samples.len() < 2 && branch.truncated.is_none() {
        return Err(Error::InvalidArgument("branch needs >= 2 samples".into()));
    }

    // First sign change of the leading eigenvalue's real part.
    for w in branch.samples.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.leading_eig_re.signum() != b.leading_eig_re.signum()
            && a.leading_eig_re != 0.0
        {
            let (mut lo, mut hi) = (a.control, b.control);
            let (mut re_lo, mut state) = (a.leading_eig_re, a.state.clone());
            let mut im_cross = b.leading_eig_im;
            while (hi - lo).abs() > bisect_tol(lo, hi) {
                let mid = 0.5 * (lo + hi);
                let s = match sample_at(sys, mid, &state) {
                    Ok(s) => s,
                    Err(_) => break,
                };
                if s.leading_eig_re.signum() == re_lo.signum() {
                    lo = mid;
                    re_lo = s.leading_eig_re;
                } else {
                    hi = mid;
                    im_cross = s.leading_eig_im;
                }
                state = s.state;
            }
            let imag = im_cross.abs();
            let kind = if imag > IMAG_TOL {
                BifurcationKind::Hopf
            } else {
                BifurcationKind::TranscriticalOrFoldReal
            };
            return Ok(BifurcationPoint {
                control_crit: 0.5 * (lo + hi),
                kind,
                bracket: (a.control, b.control),
                imag_at_crossing: imag,
                degenerate_frequency: imag > IMAG_TOL && imag < 1e-4,
            });
        }
    }

    // No sign change: fold when the branch terminated early.
    if let Some(term) = branch.truncated {
        let (mut lo, mut hi) = (term.last_converged, term.first_failed);
        let mut state = branch
            .samples
            .last()
            .map(|s| s.state.clone())
            .ok_or_else(|| Error::InvalidArgument("truncated branch has no samples".into()))?;
        while (hi - lo).abs() > bisect_tol(lo, hi) {
            let mid = 0.5 * (lo + hi);
            match newton(sys, mid, &state) {
                Ok(x) => {
                    lo = mid;
                    state = x;
                }
                Err(_) => hi = mid,
            }
        }
        return Ok(BifurcationPoint {
            control_crit: 0.5 * (lo + hi),
            kind: BifurcationKind::Fold,
            bracket: (term.last_converged, term.first_failed),
            imag_at_crossing: 0.0,
            degenerate_frequency: false,
        });
    }

    Ok(BifurcationPoint {
        control_crit: f64::NAN,
        kind: BifurcationKind::None,
        bracket: (f64::NAN, f64::NAN),
        imag_at_crossing: 0.0,
        degenerate_frequency: false,
    })
}

/// Recovery rate `|max_i Re(mu_i)|` at a stable equilibrium.
pub fn recovery_rate_of(
    sys: &dyn ContinuableSystem,
    state: &StateVector,
    control: f64,
) -> Result<f64> {
    let f = sys.drift(state, control)?;
    if f.amax() > 1e-8 {
        return Err(Error::NotStableEquilibrium(format!(
            "drift residual {:.3e} exceeds 1e-8",
            f.amax()
        )));
    }
    let jac = sys.jacobian(state, control)?;
    let (re, _) = leading_eigenvalue(&jac);
    if re >= 0.0 {
        return Err(Error::NotStableEquilibrium(format!(
            "leading eigenvalue real part {re:.3e} is not negative"
        )));
    }
    Ok(re.abs())
}

/// [`recovery_rate_of`] for a catalog system.
pub fn recovery_rate(
    system: SystemId,
    params: &SystemParams,
    state: &StateVector,
    control: f64,
) -> Result<f64> {
    recovery_rate_of(&CatalogSystem { id: system, params }, state, control)
}

/// Write a branch as CSV: control, state components, Re/Im leading
/// eigenvalue.
pub fn write_branch_csv<W: std::io::Write>(branch: &EquilibriumBranch, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let dim = branch.samples.first().map(|s| s.state.len()).unwrap_or(0);
    let mut header = vec!["control".to_string()];
    header.extend((0..dim).map(|i| format!("x{i}")));
    header.push("eig_re".into());
    header.push("eig_im".into());
    w.write_record(&header)?;
    for s in &branch.samples {
        let mut rec = vec![format!("{:.17e}", s.control)];
        rec.extend(s.state.iter().map(|v| format!("{v:.17e}")));
        rec.push(format!("{:.17e}", s.leading_eig_re));
        rec.push(format!("{:.17e}", s.leading_eig_im));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::DVector;

    fn sv(vals: &[f64]) -> StateVector {
        DVector::from_vec(vals.to_vec())
    }

    #[test]
    fn fold_equilibrium_from_guess() {
        let p = SystemId::BFold.default_params();
        let x = find_equilibrium(SystemId::BFold, &p, 1.0, &sv(&[0.5])).unwrap();
        assert_relative_eq!(x[0], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn hopf_origin_only_equilibrium_below_onset() {
        let p = SystemId::BHopf.default_params();
        let x = find_equilibrium(SystemId::BHopf, &p, -0.5, &sv(&[0.1, 0.1])).unwrap();
        assert!(x.amax() < 1e-9);
    }

    #[test]
    fn harvesting_upper_branch_root_matches_bisection_oracle() {
        // 1-D residual g(x) = r x (1 - x/k) - h x^2/(s^2 + x^2) at h = 0.2;
        // bracket the upper root and bisect.
        let p = SystemId::BHarvesting.default_params();
        let g = |x: f64| x * (1.0 - x) - 0.2 * x * x / (0.01 + x * x);
        let (mut lo, mut hi) = (0.55, 0.99);
        assert!(g(lo) * g(hi) < 0.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if g(mid) * g(lo) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let x = find_equilibrium(SystemId::BHarvesting, &p, 0.2, &sv(&[0.9])).unwrap();
        assert_relative_eq!(x[0], oracle, epsilon = 1e-8);
    }

    #[test]
    fn fold_branch_tracks_sqrt_mu() {
        let p = SystemId::BFold.default_params();
        let b = continue_branch(SystemId::BFold, &p, (1.0, 0.01), 100, &sv(&[1.0])).unwrap();
        assert_eq!(b.samples.len(), 100);
        for s in &b.samples {
            assert!((s.state[0] - s.control.sqrt()).abs() < 1e-8);
        }
        assert!(b.truncated.is_none());
    }

    #[test]
    fn fold_normal_form_termination_near_zero() {
        let p = SystemId::BFold.default_params();
        let sys = CatalogSystem { id: SystemId::BFold, params: &p };
        let b = continue_branch(SystemId::BFold, &p, (1.0, -0.5), 100, &sv(&[1.0])).unwrap();
        assert!(b.truncated.is_some());
        let bp = detect_bifurcation(&sys, &b).unwrap();
        assert_eq!(bp.kind, BifurcationKind::Fold);
        assert!(bp.control_crit.abs() < 2.0 * (1.5 / 100.0), "fold at {}", bp.control_crit);
    }

    #[test]
    fn transcritical_crossing_at_zero() {
        let p = SystemId::BTranscritical.default_params();
        let sys = CatalogSystem { id: SystemId::BTranscritical, params: &p };
        let b =
            continue_branch(SystemId::BTranscritical, &p, (-1.0, 1.0), 81, &sv(&[0.0])).unwrap();
        let bp = detect_bifurcation(&sys, &b).unwrap();
        assert_eq!(bp.kind, BifurcationKind::TranscriticalOrFoldReal);
        assert!(bp.control_crit.abs() < 1e-5, "crossing at {}", bp.control_crit);
    }

    #[test]
    fn recovery_rates_match_closed_forms() {
        let pf = SystemId::BFold.default_params();
        let r = recovery_rate(SystemId::BFold, &pf, &sv(&[1.0]), 1.0).unwrap();
        assert_relative_eq!(r, 2.0, epsilon = 1e-6);

        let ph = SystemId::BHopf.default_params();
        let r = recovery_rate(SystemId::BHopf, &ph, &sv(&[0.0, 0.0]), -0.5).unwrap();
        assert_relative_eq!(r, 0.5, epsilon = 1e-6);
    }

    #[test]
    fn recovery_rate_rejects_non_equilibrium_and_unstable() {
        let p = SystemId::BFold.default_params();
        assert!(recovery_rate(SystemId::BFold, &p, &sv(&[0.3]), 1.0).is_err());
        // x = -sqrt(mu) is the unstable branch.
        assert!(recovery_rate(SystemId::BFold, &p, &sv(&[-1.0]), 1.0).is_err());
    }

    #[test]
    fn reverse_sweep_reproduces_branch() {
        let p = SystemId::BHarvesting.default_params();
        let fwd =
            continue_branch(SystemId::BHarvesting, &p, (0.0, 0.2), 51, &sv(&[0.99])).unwrap();
        let last_state = fwd.samples.last().unwrap().state.clone();
        let bwd = continue_branch(SystemId::BHarvesting, &p, (0.2, 0.0), 51, &last_state).unwrap();
        for (f, b) in fwd.samples.iter().zip(bwd.samples.iter().rev()) {
            assert_relative_eq!(f.control, b.control, epsilon = 1e-12);
            assert!((f.state[0] - b.state[0]).abs() < 1e-6);
        }
    }

    #[test]
    fn branch_csv_roundtrip_shape() {
        let p = SystemId::BFold.default_params();
        let b = continue_branch(SystemId::BFold, &p, (1.0, 0.5), 5, &sv(&[1.0])).unwrap();
        let mut buf = Vec::new();
        write_branch_csv(&b, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.trim().lines().collect();
        assert_eq!(lines.len(), 6);
        assert!(lines[0].starts_with("control,x0,eig_re,eig_im"));
    }
}
