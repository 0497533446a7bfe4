//! Order-by-order delta expansion of the ground state.
//!
//! With `psi = exp(-gamma x^3 - beta x^2) xi(x)` (x > 0, reduced units) the
//! prefactor satisfies
//!
//! ```text
//! xi'' - 2 Wt x xi' + (2E - Wt) xi
//!     = delta * { s x^2 xi' - [s Wt x^3 + (Wt^2 - w^2) x^2 - s x] xi },   s = sqrt(2 mu)
//! ```
//!
//! where `Wt` is the effective harmonic frequency. Expanding `xi` and `E` in
//! powers of `delta` gives, for the ground state, one triangular linear system
//! per order: the coefficients of `xi_k` are matched from `x^{3k}` down to
//! `x^1`, and the `x^0` equation fixes `E_k = -c_2`. Constant terms of every
//! correction are set to zero so that no correction repeats `xi_0 = 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{check_omega_tilde, OscillatorParams};
use crate::polynomial::Polynomial;

/// Highest order the recursion will build in double precision.
pub const K_MAX: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaExpansion {
    params: OscillatorParams,
    omega_tilde: f64,
    xi: Vec<Polynomial>,
    energies: Vec<f64>,
    conditioning: Vec<f64>,
}

impl DeltaExpansion {
    pub fn params(&self) -> &OscillatorParams {
        &self.params
    }

    pub fn omega_tilde(&self) -> f64 {
        self.omega_tilde
    }

    /// Quantum number of the expanded state; the recursion covers the ground state only.
    pub fn quantum_number(&self) -> usize {
        0
    }

    pub fn order(&self) -> usize {
        self.xi.len() - 1
    }

    pub fn xi(&self) -> &[Polynomial] {
        &self.xi
    }

    /// Energy corrections `E_0..E_K`.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Largest `|c_p|` of each `xi_k`; growth signals loss of precision.
    pub fn conditioning(&self) -> &[f64] {
        &self.conditioning
    }

    /// Energy summed through `order` (clamped to the built order), at `delta = 1`.
    pub fn partial_energy(&self, order: usize) -> f64 {
        self.energies[..=order.min(self.order())].iter().sum()
    }

    pub fn energy(&self) -> f64 {
        self.partial_energy(self.order())
    }

    /// `xi_0 + ... + xi_order`.
    pub fn partial_xi(&self, order: usize) -> Polynomial {
        self.xi[..=order.min(self.order())].iter().cloned().sum()
    }
}

/// Zeroth order for level `n`: `H_n(sqrt(Wt) x)` and `E = Wt (n + 1/2)`.
pub fn order_zero(n: usize, omega_tilde: f64) -> Result<(Polynomial, f64)> {
    if !omega_tilde.is_finite() || omega_tilde <= 0.0 {
        return Err(Error::Frequency { omega_tilde, reason: "must be finite and > 0".into() });
    }
    // physicists' Hermite recurrence in y, then y = sqrt(Wt) x
    let mut prev = vec![1.0];
    let mut cur = vec![0.0, 2.0];
    let h = if n == 0 {
        prev
    } else {
        for m in 1..n {
            let mut next = vec![0.0; m + 2];
            for (p, c) in cur.iter().enumerate() {
                next[p + 1] += 2.0 * c;
            }
            for (p, c) in prev.iter().enumerate() {
                next[p] -= 2.0 * m as f64 * c;
            }
            prev = std::mem::replace(&mut cur, next);
        }
        cur
    };
    let root = omega_tilde.sqrt();
    let coeffs = h.iter().enumerate().map(|(p, c)| c * root.powi(p as i32)).collect();
    Ok((Polynomial::from_coeffs(coeffs), omega_tilde * (n as f64 + 0.5)))
}

/// Coefficients `R_p`, `p = 0..=3k`, of the order-`k` right-hand side,
/// excluding the unknown `-2 E_k xi_0` term. `prior` must be built through
/// order `k - 1`.
pub fn order_rhs(prior: &DeltaExpansion, k: usize) -> Vec<f64> {
    assert!(k >= 1 && k <= prior.order() + 1, "order {k} does not follow {}", prior.order());
    let s = (2.0 * prior.params.mu).sqrt();
    let wt = prior.omega_tilde;
    let shift = wt * wt - prior.params.omega * prior.params.omega;
    let mut rhs = vec![0.0; 3 * k + 1];
    for (p, &c) in prior.xi[k - 1].coeffs().iter().enumerate() {
        // s x^2 xi'
        if p >= 1 {
            rhs[p + 1] += s * p as f64 * c;
        }
        rhs[p + 3] -= s * wt * c;
        rhs[p + 2] -= shift * c;
        rhs[p + 1] += s * c;
    }
    for j in 1..k {
        for (p, &c) in prior.xi[k - j].coeffs().iter().enumerate() {
            rhs[p] -= 2.0 * prior.energies[j] * c;
        }
    }
    rhs
}

/// Solves order `order() + 1` of the ground-state recursion.
pub fn next_order(prior: &DeltaExpansion) -> Result<(Polynomial, f64)> {
    let k = prior.order() + 1;
    if prior.omega_tilde <= 0.0 || !prior.omega_tilde.is_finite() {
        return Err(Error::Frequency {
            omega_tilde: prior.omega_tilde,
            reason: "must be finite and > 0".into(),
        });
    }
    let rhs = order_rhs(prior, k);
    let degree = 3 * k;
    let two_wt = 2.0 * prior.omega_tilde;
    let mut c = vec![0.0; degree + 3];
    for p in (1..=degree).rev() {
        c[p] = ((p + 1) as f64 * (p + 2) as f64 * c[p + 2] - rhs[p]) / (two_wt * p as f64);
    }
    let energy = -c[2];
    c.truncate(degree + 1);
    if !energy.is_finite() || c.iter().any(|v| !v.is_finite()) {
        return Err(Error::PrecisionExhausted { order: k });
    }
    Ok((Polynomial::from_coeffs(c), energy))
}

/// Builds the expansion through `order` at effective frequency `omega_tilde`.
/// Requires reduced units and `omega_tilde >= omega`.
pub fn expand(params: &OscillatorParams, omega_tilde: f64, order: usize) -> Result<DeltaExpansion> {
    params.require_reduced()?;
    check_omega_tilde(params, omega_tilde)?;
    expand_unchecked(params, omega_tilde, order)
}

/// As [`expand`] but only requires `omega_tilde > 0`; the recursion is
/// algebraic in `omega_tilde` and stays well defined slightly below `omega`,
/// which finite differences at the boundary need.
pub(crate) fn expand_unchecked(
    params: &OscillatorParams,
    omega_tilde: f64,
    order: usize,
) -> Result<DeltaExpansion> {
    if order > K_MAX {
        return Err(Error::OrderOutOfRange { order, max: K_MAX });
    }
    let (xi0, e0) = order_zero(0, omega_tilde)?;
    let mut expansion = DeltaExpansion {
        params: *params,
        omega_tilde,
        xi: vec![xi0],
        energies: vec![e0],
        conditioning: vec![1.0],
    };
    for _ in 0..order {
        let (xi, e) = next_order(&expansion)?;
        expansion.conditioning.push(xi.max_abs_coeff());
        expansion.xi.push(xi);
        expansion.energies.push(e);
    }
    Ok(expansion)
}

/// Energy through third order in closed form, reduced units.
pub fn third_order_closed_form(params: &OscillatorParams, omega_tilde: f64) -> Result<f64> {
    params.require_reduced()?;
    check_omega_tilde(params, omega_tilde)?;
    let (w, mu, t) = (params.omega, params.mu, omega_tilde);
    let w2 = w * w;
    let t2 = t * t;
    let bracket = 6.0 * mu * t * (2.0 * t2 - w2)
        + (w2 * w2 * w2 - 5.0 * w2 * w2 * t2 + 15.0 * w2 * t2 * t2 + 5.0 * t2 * t2 * t2);
    Ok(bracket / (32.0 * t.powi(5)))
}

/// Largest absolute residual of the exact transformed equation for
/// `xi = sum xi_k`, `E = sum E_k`, over `grid` (points taken as `|x|`).
pub fn residual_check(expansion: &DeltaExpansion, grid: &[f64]) -> f64 {
    let xi = expansion.partial_xi(expansion.order());
    let d1 = xi.derivative();
    let d2 = d1.derivative();
    let p = expansion.params;
    let s = (2.0 * p.mu).sqrt();
    let wt = expansion.omega_tilde;
    let shift = wt * wt - p.omega * p.omega;
    let e = expansion.energy();
    grid.iter()
        .map(|&x| {
            let x = x.abs();
            let r = d2.eval(x) - (s * x * x + 2.0 * wt * x) * d1.eval(x)
                + (s * wt * x.powi(3) + shift * x * x - s * x + 2.0 * e - wt) * xi.eval(x);
            r.abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reduced(omega: f64, mu: f64) -> OscillatorParams {
        OscillatorParams::reduced(omega, mu).unwrap()
    }

    #[test]
    fn hermite_order_zero() {
        let (p, e) = order_zero(0, 2.0).unwrap();
        assert_eq!(p, Polynomial::constant(1.0));
        assert_eq!(e, 1.0);
        let (p, e) = order_zero(1, 1.0).unwrap();
        assert_eq!(p.coeffs(), &[0.0, 2.0]);
        assert_eq!(e, 1.5);
        let (p, e) = order_zero(2, 1.0).unwrap();
        assert_eq!(p.coeffs(), &[-2.0, 0.0, 4.0]);
        assert_eq!(e, 2.5);
        let (p, _) = order_zero(3, 4.0).unwrap();
        // H_3(y) = 8y^3 - 12y at y = 2x
        assert_eq!(p.coeffs(), &[0.0, -24.0, 0.0, 64.0]);
        assert!(order_zero(0, 0.0).is_err());
    }

    #[test]
    fn first_order_coefficients() {
        for &mu in &[0.5, 5.0, 50.0] {
            for &wt in &[1.0, 1.5, 2.0, 5.0] {
                let e = expand(&reduced(1.0, mu), wt, 1).unwrap();
                let big_omega2 = wt * wt - 1.0;
                let xi1 = &e.xi()[1];
                assert_eq!(xi1.coeff(0), 0.0);
                assert_eq!(xi1.coeff(1), 0.0);
                assert_relative_eq!(xi1.coeff(2), big_omega2 / (4.0 * wt), epsilon = 1e-15);
                assert_relative_eq!(xi1.coeff(3), (mu / 2.0).sqrt() / 3.0, max_relative = 1e-14);
                assert_relative_eq!(e.energies()[1], -big_omega2 / (4.0 * wt), epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn unperturbed_oscillator_has_no_corrections() {
        let e = expand(&reduced(1.0, 0.0), 1.0, 6).unwrap();
        for k in 1..=6 {
            assert_eq!(e.energies()[k], 0.0);
            assert!(e.xi()[k].is_zero());
        }
        assert_eq!(e.energy(), 0.5);
    }

    #[test]
    fn partial_sums_match_spot_values() {
        let p = reduced(1.0, 5.0);
        let e = expand(&p, 2.0, 3).unwrap();
        assert_relative_eq!(e.energy(), 961.0 / 1024.0, max_relative = 1e-14);
        assert_relative_eq!(e.partial_energy(1), 0.625, max_relative = 1e-15);
        assert_eq!(expand(&reduced(1.0, 0.0), 1.0, 3).unwrap().energy(), 0.5);
    }

    #[test]
    fn closed_form_spot_values() {
        assert_relative_eq!(
            third_order_closed_form(&reduced(1.0, 5.0), 2.0).unwrap(),
            961.0 / 1024.0,
            max_relative = 1e-15
        );
        assert_eq!(third_order_closed_form(&reduced(1.0, 0.0), 1.0).unwrap(), 0.5);
        assert_relative_eq!(
            third_order_closed_form(&reduced(0.0, 4.0), 2.0).unwrap(),
            0.6875,
            max_relative = 1e-15
        );
    }

    #[test]
    fn degrees_and_constant_terms() {
        let e = expand(&reduced(1.0, 2.0), 1.7, K_MAX).unwrap();
        assert_eq!(e.xi()[0], Polynomial::constant(1.0));
        assert_relative_eq!(e.energies()[0], 0.85);
        for k in 1..=K_MAX {
            assert_eq!(e.xi()[k].degree(), 3 * k);
            assert_eq!(e.xi()[k].coeff(0), 0.0);
        }
        assert_eq!(e.conditioning().len(), K_MAX + 1);
    }

    #[test]
    fn order_range_and_frequency_errors() {
        let p = reduced(1.0, 1.0);
        assert!(matches!(expand(&p, 1.0, K_MAX + 1), Err(Error::OrderOutOfRange { .. })));
        assert!(matches!(expand(&p, 0.9, 2), Err(Error::Frequency { .. })));
        assert!(expand(&reduced(0.0, 1.0), 0.0, 2).is_err());
        let physical = OscillatorParams::new(2.0, 1.0, 1.0, 1.0).unwrap();
        assert!(matches!(expand(&physical, 1.0, 1), Err(Error::NotReduced { .. })));
    }

    #[test]
    fn precision_exhaustion_is_reported() {
        let p = reduced(0.0, 1e300);
        let err = expand(&p, 1.0, K_MAX).unwrap_err();
        assert!(matches!(err, Error::PrecisionExhausted { order } if order >= 2), "{err:?}");
    }

    #[test]
    fn matched_coefficients_reproduce_rhs() {
        let p = reduced(1.0, 5.0);
        let wt = 2.3;
        let e = expand(&p, wt, 8).unwrap();
        for k in 1..=8 {
            let prior = expand(&p, wt, k - 1).unwrap();
            let rhs = order_rhs(&prior, k);
            let c = &e.xi()[k];
            for q in 1..=3 * k {
                let lhs = (q + 1) as f64 * (q + 2) as f64 * c.coeff(q + 2) - 2.0 * wt * q as f64 * c.coeff(q);
                let scale = rhs[q].abs().max(lhs.abs()).max(1e-300);
                assert!((lhs - rhs[q]).abs() <= 1e-12 * scale, "k={k} p={q}: {lhs} vs {}", rhs[q]);
            }
            assert_relative_eq!(2.0 * c.coeff(2), -2.0 * e.energies()[k] + rhs[0], epsilon = 1e-13);
        }
    }

    #[test]
    fn residual_vanishes_for_harmonic_and_at_origin() {
        let grid: Vec<f64> = (0..=40).map(|i| 0.1 * i as f64).collect();
        let e = expand(&reduced(1.0, 0.0), 1.0, 0).unwrap();
        assert_eq!(residual_check(&e, &grid), 0.0);
        let e = expand(&reduced(1.0, 1.0), 1.0, 1).unwrap();
        assert!(residual_check(&e, &[0.0]) < 1e-15);
    }

    #[test]
    fn residual_shrinks_with_order() {
        let p = reduced(1.0, 0.5);
        let grid: Vec<f64> = (0..=200).map(|i| 0.01 * i as f64).collect();
        let r: Vec<f64> = (1..=5)
            .map(|k| residual_check(&expand(&p, 1.5, k).unwrap(), &grid))
            .collect();
        for w in r.windows(2) {
            assert!(w[1] < w[0], "{r:?}");
        }
    }
}
