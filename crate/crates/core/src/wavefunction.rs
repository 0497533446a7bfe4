//! Approximate ground-state profile `exp(-gamma |x|^3 - beta x^2) sum_k xi_k(|x|)`
//! and its comparison with a reference profile.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::{expand, DeltaExpansion};
use crate::params::{AnsatzScales, OscillatorParams};
use crate::pms::{optimize, PmsResult};

/// Points of the default symmetric grid.
pub const DEFAULT_POINTS: usize = 2001;
/// Envelope exponent `gamma X^3 + beta X^2` reached at the grid edge.
pub const DEFAULT_EDGE_EXPONENT: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quadrature {
    Trapezoid,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveProfile {
    grid: Vec<f64>,
    values: Vec<f64>,
    normalized: bool,
    quadrature: Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub linf: f64,
    pub l2: f64,
    pub overlap: f64,
}

impl WaveProfile {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, quadrature: Quadrature) -> Result<Self> {
        if grid.len() != values.len() || grid.len() < 2 {
            return Err(Error::Profile(format!(
                "grid and values must have equal length >= 2, got {} and {}",
                grid.len(),
                values.len()
            )));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Profile("grid must be strictly increasing".into()));
        }
        if values.iter().chain(&grid).any(|v| !v.is_finite()) {
            return Err(Error::Profile("non-finite grid point or value".into()));
        }
        Ok(Self { grid, values, normalized: false, quadrature })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn quadrature(&self) -> Quadrature {
        self.quadrature
    }

    /// Trapezoid integral of `f(psi_i)` over the grid.
    fn integrate(&self, f: impl Fn(usize) -> f64) -> f64 {
        (0..self.grid.len() - 1)
            .map(|i| 0.5 * (self.grid[i + 1] - self.grid[i]) * (f(i) + f(i + 1)))
            .sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.integrate(|i| self.values[i] * self.values[i])
    }

    fn centre_index(&self) -> usize {
        self.grid
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    /// Scales to unit trapezoid norm with a positive value at the origin.
    pub fn normalize(mut self) -> Result<Self> {
        let peak = self.values.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
        if peak == 0.0 {
            return Err(Error::Profile("zero norm".into()));
        }
        let edge = self.values[0].abs().max(self.values[self.values.len() - 1].abs());
        if edge >= 1e-12 * peak {
            return Err(Error::Profile(format!(
                "grid too narrow: edge value {edge:e} vs peak {peak:e}"
            )));
        }
        let norm = self.norm_squared().sqrt();
        let sign = if self.values[self.centre_index()] < 0.0 { -1.0 } else { 1.0 };
        for v in &mut self.values {
            *v *= sign / norm;
        }
        self.normalized = true;
        Ok(self)
    }

    /// Converts reduced lengths to physical ones, `x -> l x`, keeping the norm.
    pub fn rescale_length(mut self, length_scale: f64) -> Self {
        let amp = length_scale.sqrt().recip();
        for x in &mut self.grid {
            *x *= length_scale;
        }
        for v in &mut self.values {
            *v *= amp;
        }
        self
    }

    /// `psi'(0+)` by the 4-point forward difference from the grid point at 0.
    pub fn slope_at_origin(&self) -> Result<f64> {
        let c = self.centre_index();
        if self.grid[c] != 0.0 || c + 3 >= self.grid.len() {
            return Err(Error::Profile("grid has no point at the origin with three right neighbours".into()));
        }
        let h = self.grid[c + 1] - self.grid[c];
        let v = &self.values[c..c + 4];
        Ok((-11.0 * v[0] + 18.0 * v[1] - 9.0 * v[2] + 2.0 * v[3]) / (6.0 * h))
    }
}

/// Uniform grid on `[-X, X]` with `gamma X^3 + beta X^2 >= 30`.
pub fn default_grid(scales: &AnsatzScales, points: usize) -> Vec<f64> {
    symmetric_grid(envelope_half_width(scales), points)
}

/// Smallest `X` with `gamma X^3 + beta X^2 >= 30`.
pub fn envelope_half_width(scales: &AnsatzScales) -> f64 {
    let exponent = |x: f64| scales.gamma * x.powi(3) + scales.beta * x * x;
    let mut hi = 1.0;
    while exponent(hi) < DEFAULT_EDGE_EXPONENT {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if exponent(mid) < DEFAULT_EDGE_EXPONENT {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Default grid widened until the assembled profile itself (not just the
/// envelope) is below `1e-13` at the edges; the polynomial prefactor can
/// outgrow `exp(-30)` at large coupling.
pub fn profile_grid(expansion: &DeltaExpansion, scales: &AnsatzScales, points: usize) -> Vec<f64> {
    let mut x = envelope_half_width(scales);
    while log_abs_psi(expansion, scales, x) > -30.0 {
        x *= 1.05;
    }
    symmetric_grid(x, points)
}

/// `points` equally spaced abscissae on `[-half_width, half_width]`, exactly
/// antisymmetric, with `0` included when `points` is odd.
pub fn symmetric_grid(half_width: f64, points: usize) -> Vec<f64> {
    let h = 2.0 * half_width / (points - 1) as f64;
    let mut x: Vec<f64> = (0..points).map(|i| -half_width + i as f64 * h).collect();
    for i in 0..points / 2 {
        x[points - 1 - i] = -x[i];
    }
    if points % 2 == 1 {
        x[points / 2] = 0.0;
    }
    x
}

fn check_scales(expansion: &DeltaExpansion, scales: &AnsatzScales) -> Result<()> {
    let (a, b) = (expansion.omega_tilde(), scales.omega_tilde);
    if (a - b).abs() > 1e-12 * a.abs().max(b.abs()) {
        return Err(Error::Profile(format!("omega_tilde mismatch: expansion {a}, scales {b}")));
    }
    Ok(())
}

/// Unnormalized profile; `psi(0) = 1`. Values are computed for `x >= 0` and
/// mirrored, so parity is exact.
pub fn assemble(expansion: &DeltaExpansion, scales: &AnsatzScales, grid: &[f64]) -> Result<WaveProfile> {
    check_scales(expansion, scales)?;
    let n = grid.len();
    let span = grid.iter().fold(0.0, |m: f64, x| m.max(x.abs()));
    if (0..n).any(|i| (grid[i] + grid[n - 1 - i]).abs() > 1e-12 * span) {
        return Err(Error::Profile("grid is not symmetric about 0".into()));
    }
    let xi = expansion.partial_xi(expansion.order());
    let psi = |x: f64| (-scales.gamma * x.powi(3) - scales.beta * x * x).exp() * xi.eval(x);
    let mut values = vec![0.0; n];
    for i in 0..n {
        let j = n - 1 - i;
        values[i] = if j < i { values[j] } else { psi(grid[j].abs()) };
    }
    WaveProfile::new(grid.to_vec(), values, Quadrature::Trapezoid)
}

/// `ln |psi(x)|` of the unnormalized profile, usable far into the tail where
/// `psi` itself underflows.
pub fn log_abs_psi(expansion: &DeltaExpansion, scales: &AnsatzScales, x: f64) -> f64 {
    let x = x.abs();
    -scales.gamma * x.powi(3) - scales.beta * x * x + expansion.partial_xi(expansion.order()).eval(x).abs().ln()
}

/// PMS-optimized profile at `order` on `grid`, normalized; reduced units.
pub fn pms_profile(params: &OscillatorParams, order: usize, grid: &[f64]) -> Result<(PmsResult, WaveProfile)> {
    let pms = optimize(params, order)?;
    let scales = params.ansatz_scales_tilde(pms.omega_tilde_star)?;
    let expansion = expand(params, pms.omega_tilde_star, order)?;
    let profile = assemble(&expansion, &scales, grid)?.normalize()?;
    Ok((pms, profile))
}

pub fn compare(approx: &WaveProfile, exact: &WaveProfile) -> Result<Comparison> {
    if approx.grid != exact.grid {
        return Err(Error::Profile("profiles live on different grids".into()));
    }
    if !approx.normalized || !exact.normalized {
        return Err(Error::Profile("both profiles must be normalized".into()));
    }
    let diff = |i: usize| approx.values[i] - exact.values[i];
    let linf = (0..approx.values.len()).map(|i| diff(i).abs()).fold(0.0, f64::max);
    let l2 = approx.integrate(|i| diff(i) * diff(i)).sqrt();
    let overlap = approx.integrate(|i| approx.values[i] * exact.values[i]);
    Ok(Comparison { linf, l2, overlap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gaussian(grid: &[f64]) -> WaveProfile {
        let c = std::f64::consts::PI.powf(-0.25);
        WaveProfile::new(grid.to_vec(), grid.iter().map(|x| c * (-0.5 * x * x).exp()).collect(), Quadrature::Trapezoid)
            .unwrap()
    }

    #[test]
    fn harmonic_limit_is_gaussian() {
        let p = OscillatorParams::reduced(1.0, 0.0).unwrap();
        let s = p.ansatz_scales(0.0).unwrap();
        let e = expand(&p, 1.0, 4).unwrap();
        let grid = default_grid(&s, DEFAULT_POINTS);
        let prof = assemble(&e, &s, &grid).unwrap();
        assert_eq!(prof.values()[DEFAULT_POINTS / 2], 1.0);
        for (x, v) in grid.iter().zip(prof.values()) {
            assert_relative_eq!(*v, (-0.5 * x * x).exp(), max_relative = 1e-14);
        }
    }

    #[test]
    fn parity_and_unit_origin() {
        let p = OscillatorParams::reduced(1.0, 20.0).unwrap();
        let s = p.ansatz_scales(3.0).unwrap();
        let e = expand(&p, s.omega_tilde, 5).unwrap();
        let grid = default_grid(&s, 801);
        let prof = assemble(&e, &s, &grid).unwrap();
        assert_eq!(prof.values()[400], 1.0);
        let n = grid.len();
        for i in 0..n {
            assert_eq!(prof.values()[i], prof.values()[n - 1 - i]);
        }
    }

    #[test]
    fn mismatched_frequency_rejected() {
        let p = OscillatorParams::reduced(1.0, 2.0).unwrap();
        let s = p.ansatz_scales(1.0).unwrap();
        let e = expand(&p, 1.0, 2).unwrap();
        assert!(assemble(&e, &s, &[-1.0, 0.0, 1.0]).is_err());
        let asym = [-1.0, 0.0, 2.0];
        let s1 = p.ansatz_scales(0.0).unwrap();
        assert!(assemble(&e, &s1, &asym).is_err());
    }

    #[test]
    fn normalization_behaviour() {
        let grid = symmetric_grid(12.0, 4001);
        let g = gaussian(&grid);
        let n = g.clone().normalize().unwrap();
        for (a, b) in g.values().iter().zip(n.values()) {
            assert!((a - b).abs() <= 1e-12);
        }
        let doubled = WaveProfile::new(grid.clone(), g.values().iter().map(|v| -2.0 * v).collect(), Quadrature::Trapezoid)
            .unwrap()
            .normalize()
            .unwrap();
        assert_eq!(doubled.values(), n.values());
        assert_relative_eq!(n.norm_squared(), 1.0, epsilon = 1e-10);

        let zero = WaveProfile::new(grid.clone(), vec![0.0; grid.len()], Quadrature::Trapezoid).unwrap();
        assert!(zero.normalize().is_err());
        let narrow = gaussian(&symmetric_grid(3.0, 101));
        assert!(narrow.normalize().is_err());
    }

    #[test]
    fn comparison_metrics() {
        let grid = symmetric_grid(12.0, 4001);
        let g = gaussian(&grid).normalize().unwrap();
        let m = compare(&g, &g).unwrap();
        assert_eq!((m.linf, m.l2), (0.0, 0.0));
        assert_relative_eq!(m.overlap, 1.0, epsilon = 1e-12);

        let c = std::f64::consts::PI.powf(-0.25) * 2f64.sqrt();
        let first = WaveProfile::new(
            grid.clone(),
            grid.iter().map(|x| c * x * (-0.5 * x * x).exp()).collect(),
            Quadrature::Trapezoid,
        )
        .unwrap();
        let first = WaveProfile { normalized: true, ..first };
        assert!(compare(&g, &first).unwrap().overlap.abs() < 1e-12);

        let other = gaussian(&symmetric_grid(12.0, 4003)).normalize().unwrap();
        assert!(compare(&g, &other).is_err());
        assert!(compare(&g, &gaussian(&grid)).is_err());
    }

    #[test]
    fn length_rescaling_keeps_norm() {
        let grid = symmetric_grid(12.0, 2001);
        let g = gaussian(&grid).normalize().unwrap().rescale_length(0.3);
        assert_relative_eq!(g.norm_squared(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn slope_needs_origin() {
        let g = gaussian(&symmetric_grid(12.0, 2001)).normalize().unwrap();
        assert!(g.slope_at_origin().unwrap().abs() < 1e-6);
        let even = gaussian(&symmetric_grid(12.0, 2000));
        assert!(even.slope_at_origin().is_err());
    }
}
