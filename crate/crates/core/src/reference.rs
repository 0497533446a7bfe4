//! Finite-difference ground state of `p^2/2 + omega^2 x^2/2 + mu x^4/4`.
//!
//! Second-order differences on `(-L, L)` with Dirichlet walls give a symmetric
//! tridiagonal matrix. The lowest eigenvalue comes from Sturm-count
//! bisection, the eigenvector from inverse iteration. The box is grown until
//! the wall no longer matters, then the mesh is halved until two successive
//! Richardson-extrapolated eigenvalues agree.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::OscillatorParams;
use crate::wavefunction::{Quadrature, WaveProfile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverConfig {
    pub tol: f64,
    pub half_width: f64,
    /// Interior grid points of the first mesh.
    pub points: usize,
    pub max_half_width: f64,
    pub max_points: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tol: 1e-8, half_width: 8.0, points: 1024, max_half_width: 64.0, max_points: 1 << 20 }
    }
}

impl SolverConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

/// Discretized Hamiltonian in reduced units on `x_i = -L + i h`, `i = 1..=N`,
/// `h = 2L / (N + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridHamiltonian {
    half_width: f64,
    spacing: f64,
    diagonal: Vec<f64>,
    offdiagonal: f64,
}

impl GridHamiltonian {
    pub fn new(params: &OscillatorParams, half_width: f64, points: usize) -> Result<Self> {
        params.require_reduced()?;
        if points < 2 || !(half_width > 0.0) {
            return Err(Error::Domain(format!("grid needs L > 0 and N >= 2, got L = {half_width}, N = {points}")));
        }
        let spacing = 2.0 * half_width / (points + 1) as f64;
        let kinetic = 1.0 / (spacing * spacing);
        let (w2, mu) = (params.omega * params.omega, params.mu);
        let diagonal = (1..=points)
            .map(|i| {
                let x = -half_width + i as f64 * spacing;
                let x2 = x * x;
                kinetic + 0.5 * w2 * x2 + 0.25 * mu * x2 * x2
            })
            .collect();
        Ok(Self { half_width, spacing, diagonal, offdiagonal: -0.5 * kinetic })
    }

    pub fn points(&self) -> usize {
        self.diagonal.len()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn offdiagonal(&self) -> f64 {
        self.offdiagonal
    }

    /// Interior abscissae, symmetric about the origin.
    pub fn abscissae(&self) -> Vec<f64> {
        let n = self.points();
        let mut x: Vec<f64> = (1..=n).map(|i| -self.half_width + i as f64 * self.spacing).collect();
        // mirror so that x[i] == -x[n-1-i] exactly
        for i in 0..n / 2 {
            x[i] = -x[n - 1 - i];
        }
        if n % 2 == 1 {
            x[n / 2] = 0.0;
        }
        x
    }

    /// Number of eigenvalues strictly below `lambda` (negative LDL^T pivots).
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let e2 = self.offdiagonal * self.offdiagonal;
        let guard = f64::EPSILON * self.offdiagonal.abs();
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diagonal.iter().enumerate() {
            q = if i == 0 { d - lambda } else { d - lambda - e2 / q };
            if q.abs() < guard {
                q = -guard;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Smallest eigenvalue by bisection on the Sturm count.
    pub fn lowest_eigenvalue(&self) -> f64 {
        let e = self.offdiagonal.abs();
        let dmin = self.diagonal.iter().copied().fold(f64::INFINITY, f64::min);
        let (mut lo, mut hi) = (dmin - 2.0 * e, dmin);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 2.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE) || mid == lo || mid == hi {
                break;
            }
            if self.sturm_count(mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solves `(H - shift) y = rhs` by LU without pivoting; `shift` must lie
    /// below the spectrum so the factorization stays positive definite.
    fn shifted_solve(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.points();
        let e = self.offdiagonal;
        let mut pivot = vec![0.0; n];
        let mut y = rhs.to_vec();
        pivot[0] = self.diagonal[0] - shift;
        for i in 1..n {
            let l = e / pivot[i - 1];
            pivot[i] = self.diagonal[i] - shift - l * e;
            y[i] -= l * y[i - 1];
        }
        y[n - 1] /= pivot[n - 1];
        for i in (0..n - 1).rev() {
            y[i] = (y[i] - e * y[i + 1]) / pivot[i];
        }
        y
    }

    /// Ground-state eigenvector by inverse iteration just below `eigenvalue`,
    /// normalized to `h * sum(psi^2) = 1` with a positive centre value.
    pub fn ground_vector(&self, eigenvalue: f64) -> Result<Vec<f64>> {
        let n = self.points();
        let mut offset = 1e-9 * eigenvalue.abs().max(1.0);
        for _attempt in 0..4 {
            let shift = eigenvalue - offset;
            let mut v = vec![1.0; n];
            normalize_discrete(&mut v, self.spacing);
            for _ in 0..50 {
                let mut next = self.shifted_solve(shift, &v);
                normalize_discrete(&mut next, self.spacing);
                let change = next
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                v = next;
                if !v.iter().all(|x| x.is_finite()) {
                    break;
                }
                if change <= 1e-13 {
                    return Ok(v);
                }
            }
            // stagnation: move the shift further from the eigenvalue
            offset *= 1e3;
        }
        Err(Error::NoConvergence("inverse iteration stagnated".into()))
    }

    /// `<p^2/2> - <x V'(x)>/2` for a normalized grid vector.
    pub fn virial_gap(&self, params: &OscillatorParams, psi: &[f64]) -> f64 {
        let h = self.spacing;
        let k = 1.0 / (h * h);
        let n = psi.len();
        let x = self.abscissae();
        let mut kinetic = 0.0;
        let mut force = 0.0;
        for i in 0..n {
            let left = if i > 0 { psi[i - 1] } else { 0.0 };
            let right = if i + 1 < n { psi[i + 1] } else { 0.0 };
            kinetic += psi[i] * (k * psi[i] - 0.5 * k * (left + right));
            let xi = x[i];
            force += xi * (params.omega * params.omega * xi + params.mu * xi.powi(3)) * psi[i] * psi[i];
        }
        (kinetic - 0.5 * force) * h
    }
}

fn normalize_discrete(v: &mut [f64], h: f64) {
    let norm = (h * v.iter().map(|x| x * x).sum::<f64>()).sqrt();
    let sign = if v[v.len() / 2] < 0.0 { -1.0 } else { 1.0 };
    for x in v.iter_mut() {
        *x *= sign / norm;
    }
}

/// Richardson extrapolation for an `h^2` leading error from meshes `h` and `h/2`.
pub fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

/// Converged reference ground state in reduced units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceSolution {
    /// Richardson-extrapolated eigenvalue.
    pub energy: f64,
    pub half_width: f64,
    /// Interior points of the coarser mesh of the final pair.
    pub points: usize,
    pub raw_energy: f64,
}

/// Lowest eigenvalue on a single mesh, reduced units.
pub fn grid_eigenvalue(params: &OscillatorParams, half_width: f64, points: usize) -> Result<f64> {
    Ok(GridHamiltonian::new(params, half_width, points)?.lowest_eigenvalue())
}

/// Refines box and mesh until converged; `params` must be in reduced units.
pub fn solve_reduced(params: &OscillatorParams, config: &SolverConfig) -> Result<ReferenceSolution> {
    params.require_reduced()?;
    if !(config.tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be > 0, got {}", config.tol)));
    }
    // grow the box at fixed spacing: N + 1 doubles with L
    let mut half_width = config.half_width;
    let mut points = config.points;
    let mut energy = grid_eigenvalue(params, half_width, points)?;
    loop {
        let (wider_l, wider_n) = (2.0 * half_width, 2 * points + 1);
        if wider_l > config.max_half_width || wider_n > config.max_points {
            return Err(Error::NoConvergence(format!(
                "box size not converged at L = {half_width}, last eigenvalue {energy}"
            )));
        }
        let wider = grid_eigenvalue(params, wider_l, wider_n)?;
        let shift = (wider - energy).abs();
        if shift < config.tol / 10.0 {
            break;
        }
        half_width = wider_l;
        points = wider_n;
        energy = wider;
    }

    // halve the spacing at fixed box
    let mut coarse_n = points;
    let mut coarse = energy;
    let mut fine_n = 2 * coarse_n + 1;
    let mut fine = grid_eigenvalue(params, half_width, fine_n)?;
    let mut extrapolated = richardson(coarse, fine);
    loop {
        let next_n = 2 * fine_n + 1;
        if next_n > config.max_points {
            return Err(Error::NoConvergence(format!(
                "mesh not converged at N = {fine_n}, last bracket [{}, {}]",
                extrapolated.min(fine),
                extrapolated.max(fine)
            )));
        }
        let next = grid_eigenvalue(params, half_width, next_n)?;
        let next_extrapolated = richardson(fine, next);
        let agreed = (next_extrapolated - extrapolated).abs() < config.tol;
        coarse_n = fine_n;
        coarse = fine;
        fine_n = next_n;
        fine = next;
        extrapolated = next_extrapolated;
        if agreed {
            break;
        }
    }
    Ok(ReferenceSolution { energy: extrapolated, half_width, points: coarse_n, raw_energy: coarse })
}

/// Ground energy for physical parameters.
pub fn ground_energy(params: &OscillatorParams, tol: f64) -> Result<f64> {
    let units = params.validate()?.reduce_units();
    let sol = solve_reduced(&units.reduced, &SolverConfig::with_tol(tol))?;
    Ok(units.energy_to_physical(sol.energy))
}

/// Normalized ground-state profile in reduced units on the coarse mesh of the
/// converged pair, Richardson-corrected against the next finer mesh.
pub fn ground_wavefunction_reduced(params: &OscillatorParams, config: &SolverConfig) -> Result<(ReferenceSolution, WaveProfile)> {
    let sol = solve_reduced(params, config)?;
    let coarse = GridHamiltonian::new(params, sol.half_width, sol.points)?;
    let fine = GridHamiltonian::new(params, sol.half_width, 2 * sol.points + 1)?;
    let psi_c = coarse.ground_vector(coarse.lowest_eigenvalue())?;
    let psi_f = fine.ground_vector(fine.lowest_eigenvalue())?;
    // coarse point i sits at fine index 2i + 1
    let values: Vec<f64> = psi_c
        .iter()
        .enumerate()
        .map(|(i, &c)| richardson(c, psi_f[2 * i + 1]))
        .collect();
    let profile = WaveProfile::new(coarse.abscissae(), values, Quadrature::Trapezoid)?.normalize()?;
    Ok((sol, profile))
}

/// Normalized ground-state profile for physical parameters, in physical
/// length units.
pub fn ground_wavefunction(params: &OscillatorParams, tol: f64) -> Result<WaveProfile> {
    let units = params.validate()?.reduce_units();
    let (_, profile) = ground_wavefunction_reduced(&units.reduced, &SolverConfig::with_tol(tol))?;
    Ok(profile.rescale_length(units.length_scale))
}
