//! Quick self-check of the main invariants, run by `aho validate`.

use crate::expansion::{expand, residual_check, third_order_closed_form};
use crate::params::OscillatorParams;
use crate::pms::{optimize, strong_coupling_alpha0};
use crate::reference::ground_energy;
use crate::report::{Cell, Table};
use crate::wavefunction::{pms_profile, profile_grid};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match f() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: format!("error: {e}") },
    }
}

fn reduced(omega: f64, mu: f64) -> Result<OscillatorParams> {
    OscillatorParams::reduced(omega, mu)
}

pub fn run_checks(tol: f64) -> Vec<Check> {
    vec![
        check("first-order-closed-form", || {
            let mut worst: f64 = 0.0;
            for mu in [0.5, 5.0, 50.0] {
                for wt in [1.0, 1.5, 2.0, 5.0] {
                    let e = expand(&reduced(1.0, mu)?, wt, 1)?;
                    let a2 = (wt * wt - 1.0) / (4.0 * wt);
                    let a3 = (mu / 2.0).sqrt() / 3.0;
                    let xi = &e.xi()[1];
                    worst = worst
                        .max((xi.coeff(2) - a2).abs() / a2.abs().max(1e-300))
                        .max((xi.coeff(3) - a3).abs() / a3)
                        .max((e.energies()[1] + a2).abs() / a2.abs().max(1e-300));
                }
            }
            Ok((worst <= 1e-13, format!("max rel err {worst:.3e}")))
        }),
        check("third-order-closed-form", || {
            let mut worst: f64 = 0.0;
            for mu in [0.5, 5.0, 50.0] {
                for wt in [1.0, 1.5, 2.0, 5.0] {
                    let p = reduced(1.0, mu)?;
                    let cf = third_order_closed_form(&p, wt)?;
                    worst = worst.max((expand(&p, wt, 3)?.energy() / cf - 1.0).abs());
                }
            }
            Ok((worst <= 1e-12, format!("max rel err {worst:.3e}")))
        }),
        check("first-order-pms-boundary", || {
            let r = optimize(&reduced(1.0, 5.0)?, 1)?;
            Ok((r.omega_star == 0.0 && r.energy == 0.5, format!("Omega* = {}, E = {}", r.omega_star, r.energy)))
        }),
        check("alpha0-third-order", || {
            let a = strong_coupling_alpha0(3)?.alpha0;
            let closed = 3.0 / 16.0 * 37.5f64.cbrt();
            Ok(((a - closed).abs() <= 1e-10, format!("alpha0 = {a:.9}")))
        }),
        check("harmonic-reference-energy", || {
            let e = ground_energy(&reduced(1.0, 0.0)?, tol)?;
            Ok(((e - 0.5).abs() <= tol, format!("E = {e:.12}")))
        }),
        check("reference-scaling", || {
            let s = 1.5f64;
            let e = ground_energy(&reduced(1.0, 2.0)?, tol)?;
            let es = ground_energy(&reduced(s, 2.0 * s.powi(3))?, tol)?;
            let gap = (es - s * e).abs();
            Ok((gap <= 10.0 * tol * es, format!("|E(s w, s^3 mu) - s E| = {gap:.3e}")))
        }),
        check("residual-decreases-with-order", || {
            let p = reduced(1.0, 0.5)?;
            let grid: Vec<f64> = (0..=200).map(|i| 0.01 * i as f64).collect();
            let r = (1..=5)
                .map(|k| Ok(residual_check(&expand(&p, 1.5, k)?, &grid)))
                .collect::<Result<Vec<f64>>>()?;
            Ok((r.windows(2).all(|w| w[1] < w[0]), r.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(" ")))
        }),
        check("harmonic-corrections-vanish", || {
            let e = expand(&reduced(1.0, 0.0)?, 1.0, 8)?;
            Ok((e.energies()[1..].iter().all(|&v| v == 0.0), "E_k = 0 for k >= 1".into()))
        }),
        check("profile-flat-at-origin", || {
            let p = reduced(1.0, 200.0)?;
            let pms = optimize(&p, 3)?;
            let scales = p.ansatz_scales_tilde(pms.omega_tilde_star)?;
            let grid = profile_grid(&expand(&p, pms.omega_tilde_star, 3)?, &scales, 2001);
            let (_, prof) = pms_profile(&p, 3, &grid)?;
            let slope = prof.slope_at_origin()?;
            Ok((slope.abs() <= 1e-6, format!("psi'(0+) = {slope:.3e}")))
        }),
    ]
}

pub fn checks_table(checks: &[Check]) -> Table {
    let mut t = Table::new("validate", &["property", "status", "detail"]);
    for c in checks {
        t.push(vec![
            Cell::Text(c.name.into()),
            Cell::Text(if c.passed { "pass" } else { "fail" }.into()),
            Cell::Text(c.detail.clone()),
        ]);
    }
    t
}
