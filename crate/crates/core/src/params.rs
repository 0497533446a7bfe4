//! Oscillator parameters, unit reduction, and the exponential envelope of the
//! three-scale ansatz `psi = exp(-gamma |x|^3 - beta x^2) * xi(x)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constants of `H = p^2/2m + m omega^2 x^2/2 + mu x^4/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
    pub mu: f64,
}

impl OscillatorParams {
    /// Builds and validates a parameter set.
    pub fn new(hbar: f64, mass: f64, omega: f64, mu: f64) -> Result<Self> {
        Self { hbar, mass, omega, mu }.validate()
    }

    /// Reduced units (`hbar = mass = 1`).
    pub fn reduced(omega: f64, mu: f64) -> Result<Self> {
        Self::new(1.0, 1.0, omega, mu)
    }

    pub fn validate(self) -> Result<Self> {
        let fields = [
            ("hbar", self.hbar),
            ("mass", self.mass),
            ("omega", self.omega),
            ("mu", self.mu),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be finite, got {v}")));
            }
        }
        if self.hbar <= 0.0 {
            return Err(Error::Domain(format!("hbar must be > 0, got {}", self.hbar)));
        }
        if self.mass <= 0.0 {
            return Err(Error::Domain(format!("mass must be > 0, got {}", self.mass)));
        }
        if self.omega < 0.0 {
            return Err(Error::Domain(format!("omega must be >= 0, got {}", self.omega)));
        }
        if self.mu < 0.0 {
            return Err(Error::Domain(format!("mu must be >= 0, got {}", self.mu)));
        }
        if self.mu == 0.0 && self.omega == 0.0 {
            return Err(Error::Domain("mu = omega = 0 is a free particle".into()));
        }
        Ok(self)
    }

    pub fn is_reduced(&self) -> bool {
        self.hbar == 1.0 && self.mass == 1.0
    }

    pub(crate) fn require_reduced(&self) -> Result<()> {
        if self.is_reduced() {
            Ok(())
        } else {
            Err(Error::NotReduced { hbar: self.hbar, mass: self.mass })
        }
    }

    /// Maps onto `hbar = mass = 1` with either `omega = 1` or, for the pure
    /// quartic oscillator, `mu = 4` (so the potential is `x^4`).
    pub fn reduce_units(&self) -> ReducedUnits {
        let Self { hbar, mass, omega, mu } = *self;
        if omega > 0.0 {
            ReducedUnits {
                reduced: Self { hbar: 1.0, mass: 1.0, omega: 1.0, mu: mu * hbar / (mass * mass * omega.powi(3)) },
                energy_scale: hbar * omega,
                length_scale: (hbar / (mass * omega)).sqrt(),
            }
        } else {
            ReducedUnits {
                reduced: Self { hbar: 1.0, mass: 1.0, omega: 0.0, mu: 4.0 },
                energy_scale: (hbar.powi(4) * mu / (4.0 * mass * mass)).cbrt(),
                length_scale: (4.0 * hbar * hbar / (mass * mu)).powf(1.0 / 6.0),
            }
        }
    }

    /// Envelope coefficients for an artificial frequency `omega_artificial >= 0`.
    pub fn ansatz_scales(&self, omega_artificial: f64) -> Result<AnsatzScales> {
        if !(omega_artificial >= 0.0) || !omega_artificial.is_finite() {
            return Err(Error::Domain(format!(
                "artificial frequency must be finite and >= 0, got {omega_artificial}"
            )));
        }
        let omega_tilde = if omega_artificial == 0.0 {
            self.omega
        } else {
            self.omega.hypot(omega_artificial)
        };
        Ok(self.scales_from(omega_artificial, omega_tilde))
    }

    /// Same as [`ansatz_scales`](Self::ansatz_scales), parametrized by the
    /// effective frequency `omega_tilde >= omega`.
    pub fn ansatz_scales_tilde(&self, omega_tilde: f64) -> Result<AnsatzScales> {
        check_omega_tilde(self, omega_tilde)?;
        let omega_artificial = (omega_tilde * omega_tilde - self.omega * self.omega).max(0.0).sqrt();
        Ok(self.scales_from(omega_artificial, omega_tilde))
    }

    fn scales_from(&self, omega_artificial: f64, omega_tilde: f64) -> AnsatzScales {
        AnsatzScales {
            gamma: (self.mu * self.mass / 2.0).sqrt() / (3.0 * self.hbar),
            beta: self.mass * omega_tilde / (2.0 * self.hbar),
            omega_artificial,
            omega_tilde,
        }
    }
}

/// Reduced parameters plus the factors that convert back to physical units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedUnits {
    pub reduced: OscillatorParams,
    pub energy_scale: f64,
    pub length_scale: f64,
}

impl ReducedUnits {
    pub fn energy_to_physical(&self, e: f64) -> f64 {
        e * self.energy_scale
    }

    /// Frequencies scale like energies over hbar.
    pub fn frequency_to_physical(&self, w: f64, hbar: f64) -> f64 {
        w * self.energy_scale / hbar
    }
}

/// `gamma` fixes the `|x|^3` tail, `beta` the intermediate Gaussian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnsatzScales {
    pub gamma: f64,
    pub beta: f64,
    pub omega_artificial: f64,
    pub omega_tilde: f64,
}

impl AnsatzScales {
    /// Length below which the Gaussian term dominates the cubic one.
    pub fn crossover(&self) -> f64 {
        if self.gamma > 0.0 {
            self.beta / self.gamma
        } else {
            f64::INFINITY
        }
    }
}

pub(crate) fn check_omega_tilde(params: &OscillatorParams, omega_tilde: f64) -> Result<()> {
    if !omega_tilde.is_finite() || omega_tilde <= 0.0 {
        return Err(Error::Frequency { omega_tilde, reason: "must be finite and > 0".into() });
    }
    if omega_tilde < params.omega {
        return Err(Error::Frequency {
            omega_tilde,
            reason: format!("must be >= omega = {}", params.omega),
        });
    }
    Ok(())
}
