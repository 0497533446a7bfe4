//! Principle of minimal sensitivity: fix the artificial frequency by requiring
//! the order-K energy to be stationary in it.
//!
//! Candidates are the boundary `Omega = 0` (when `omega > 0`) and every
//! interior root of `dE/dOmega_tilde`. Among them the flattest interior
//! minimum is selected; interior maxima are used only when no minimum exists,
//! and the boundary only when there is no interior stationary point at all
//! (order 1).

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::{expand_unchecked, K_MAX};
use crate::params::{check_omega_tilde, OscillatorParams, ReducedUnits};

/// Points in the sign-change scan of `dE/dOmega_tilde`.
pub const SCAN_POINTS: usize = 400;
/// Relative bracket width at which bisection stops.
pub const ROOT_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateKind {
    Boundary,
    InteriorMin,
    InteriorMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Candidate {
    pub omega_tilde: f64,
    pub omega: f64,
    pub energy: f64,
    /// `|dE/dOmega_tilde|`
    pub slope: f64,
    /// `|d^2E/dOmega^2|`
    pub flatness: f64,
    pub kind: CandidateKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PmsResult {
    pub omega_tilde_star: f64,
    pub omega_star: f64,
    pub energy: f64,
    pub flatness: f64,
    pub candidates: Vec<Candidate>,
}

impl PmsResult {
    pub fn selected(&self) -> &Candidate {
        self.candidates
            .iter()
            .find(|c| c.omega_tilde == self.omega_tilde_star)
            .expect("selected candidate is in the list")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrongCouplingResult {
    pub order: usize,
    pub alpha0: f64,
    pub omega_tilde_star: f64,
}

fn energy_at(params: &OscillatorParams, order: usize, omega_tilde: f64) -> Result<f64> {
    Ok(expand_unchecked(params, omega_tilde, order)?.energy())
}

fn slope_at(params: &OscillatorParams, order: usize, omega_tilde: f64) -> Result<f64> {
    let h = 1e-5 * omega_tilde.max(1.0);
    let up = energy_at(params, order, omega_tilde + h)?;
    let down = energy_at(params, order, omega_tilde - h)?;
    Ok((up - down) / (2.0 * h))
}

/// Signed `d^2E/dOmega^2` at `Omega = sqrt(Omega_tilde^2 - omega^2)`; the
/// energy is even in `Omega`, so the stencil may cross zero.
fn curvature_at(params: &OscillatorParams, order: usize, omega_tilde: f64) -> Result<f64> {
    let w = params.omega;
    let big = (omega_tilde * omega_tilde - w * w).max(0.0).sqrt();
    let h = 1e-4 * big.max(1.0);
    let at = |o: f64| energy_at(params, order, w.hypot(o));
    Ok((at(big + h)? - 2.0 * at(big)? + at(big - h)?) / (h * h))
}

/// Default upper end of the `Omega_tilde` bracket.
pub fn default_omega_tilde_max(params: &OscillatorParams) -> f64 {
    (10.0 * params.omega).max(10.0).max(4.0 * params.mu.cbrt())
}

/// Partial-sum energies along a sorted grid of `Omega_tilde >= omega`.
pub fn energy_curve(
    params: &OscillatorParams,
    order: usize,
    omega_tilde_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    params.require_reduced()?;
    if order > K_MAX {
        return Err(Error::OrderOutOfRange { order, max: K_MAX });
    }
    omega_tilde_grid
        .par_iter()
        .map(|&t| {
            check_omega_tilde(params, t)?;
            Ok((t, energy_at(params, order, t)?))
        })
        .collect()
}

fn candidate(params: &OscillatorParams, order: usize, omega_tilde: f64, boundary: bool) -> Result<Candidate> {
    let curvature = curvature_at(params, order, omega_tilde)?;
    let kind = if boundary {
        CandidateKind::Boundary
    } else if curvature > 0.0 {
        CandidateKind::InteriorMin
    } else {
        CandidateKind::InteriorMax
    };
    Ok(Candidate {
        omega_tilde,
        omega: (omega_tilde * omega_tilde - params.omega * params.omega).max(0.0).sqrt(),
        energy: energy_at(params, order, omega_tilde)?,
        slope: slope_at(params, order, omega_tilde)?.abs(),
        flatness: curvature.abs(),
        kind,
    })
}

/// Boundary candidate plus every interior root of `dE/dOmega_tilde` in
/// `[omega, omega_tilde_max]`, ordered by `Omega_tilde`.
pub fn stationary_points(
    params: &OscillatorParams,
    order: usize,
    omega_tilde_max: f64,
) -> Result<Vec<Candidate>> {
    params.require_reduced()?;
    if order > K_MAX {
        return Err(Error::OrderOutOfRange { order, max: K_MAX });
    }
    let w = params.omega;
    if !(omega_tilde_max > w) || !omega_tilde_max.is_finite() {
        return Err(Error::Frequency {
            omega_tilde: omega_tilde_max,
            reason: format!("bracket end must exceed omega = {w}"),
        });
    }
    let lo = if w > 0.0 { w } else { 1e-3 * omega_tilde_max };
    let step = (omega_tilde_max - lo) / (SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..SCAN_POINTS).map(|i| lo + step * i as f64).collect();
    let slopes: Vec<f64> = grid
        .par_iter()
        .map(|&t| slope_at(params, order, t))
        .collect::<Result<_>>()?;

    let mut candidates = Vec::new();
    if w > 0.0 {
        candidates.push(candidate(params, order, w, true)?);
    }
    // the boundary is its own candidate; skip the first cell when it sits at omega
    let first = usize::from(w > 0.0);
    let mut roots = Vec::new();
    for i in first..SCAN_POINTS - 1 {
        let (sa, sb) = (slopes[i], slopes[i + 1]);
        if sa == 0.0 {
            if i > first || w == 0.0 {
                roots.push(grid[i]);
            }
        } else if sa * sb < 0.0 {
            roots.push(bisect_slope(params, order, grid[i], grid[i + 1], sa)?);
        }
    }
    for t in roots {
        if w > 0.0 && (t - w).abs() <= 1e-6 * w.max(1.0) {
            continue;
        }
        candidates.push(candidate(params, order, t, false)?);
    }
    if candidates.is_empty() {
        return Err(Error::NoStationaryPoint { lo, hi: omega_tilde_max });
    }
    Ok(candidates)
}

fn bisect_slope(params: &OscillatorParams, order: usize, mut a: f64, mut b: f64, mut sa: f64) -> Result<f64> {
    while b - a > ROOT_RTOL * b {
        let mid = 0.5 * (a + b);
        let sm = slope_at(params, order, mid)?;
        if sm == 0.0 {
            return Ok(mid);
        }
        if sa * sm < 0.0 {
            b = mid;
        } else {
            a = mid;
            sa = sm;
        }
    }
    Ok(0.5 * (a + b))
}

/// Picks the flattest candidate, preferring interior minima, then interior
/// maxima, then the boundary. Ties go to the smaller `Omega`.
pub fn select_pms(candidates: Vec<Candidate>) -> Result<PmsResult> {
    let pool = [CandidateKind::InteriorMin, CandidateKind::InteriorMax, CandidateKind::Boundary]
        .into_iter()
        .map(|kind| candidates.iter().filter(move |c| c.kind == kind))
        .find_map(|mut it| {
            let first = it.next()?;
            Some(it.fold(first, |best, c| {
                if c.flatness < best.flatness || (c.flatness == best.flatness && c.omega < best.omega) {
                    c
                } else {
                    best
                }
            }))
        })
        .copied();
    let Some(best) = pool else {
        return Err(Error::NoStationaryPoint { lo: f64::NAN, hi: f64::NAN });
    };
    Ok(PmsResult {
        omega_tilde_star: best.omega_tilde,
        omega_star: best.omega,
        energy: best.energy,
        flatness: best.flatness,
        candidates,
    })
}

/// PMS energy at `order` over the default bracket, reduced units.
pub fn optimize(params: &OscillatorParams, order: usize) -> Result<PmsResult> {
    optimize_within(params, order, default_omega_tilde_max(params))
}

pub fn optimize_within(params: &OscillatorParams, order: usize, omega_tilde_max: f64) -> Result<PmsResult> {
    select_pms(stationary_points(params, order, omega_tilde_max)?)
}

/// PMS energy for physical parameters: reduces units, optimizes, and returns
/// the physical energy together with the reduced-unit result.
pub fn optimize_physical(params: &OscillatorParams, order: usize) -> Result<(f64, PmsResult, ReducedUnits)> {
    let units = params.validate()?.reduce_units();
    let result = optimize(&units.reduced, order)?;
    Ok((units.energy_to_physical(result.energy), result, units))
}

/// Coefficient of `E = alpha0 (mu/4)^{1/3}` at `omega = 0`; by scale
/// invariance it is the PMS energy of `p^2/2 + x^4`.
pub fn strong_coupling_alpha0(order: usize) -> Result<StrongCouplingResult> {
    if order == 0 || order > K_MAX {
        return Err(Error::OrderOutOfRange { order, max: K_MAX });
    }
    let params = OscillatorParams::reduced(0.0, 4.0)?;
    let r = optimize(&params, order)?;
    Ok(StrongCouplingResult { order, alpha0: r.energy, omega_tilde_star: r.omega_tilde_star })
}
