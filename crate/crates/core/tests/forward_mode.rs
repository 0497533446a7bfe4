//! Forward-mode differentiation of the order-by-order energies with respect
//! to the artificial frequency, through a separate dense recursion over dual
//! numbers. Checks the engine's partial sums and that PMS picks are genuinely
//! stationary.

use std::ops::{Add, Div, Mul, Neg, Sub};

use aho_core::{expand, optimize, CandidateKind, OscillatorParams};

#[derive(Debug, Clone, Copy, PartialEq)]
struct Dual {
    re: f64,
    eps: f64,
}

impl Dual {
    fn constant(re: f64) -> Self {
        Dual { re, eps: 0.0 }
    }

    fn variable(re: f64) -> Self {
        Dual { re, eps: 1.0 }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual { re: self.re + o.re, eps: self.eps + o.eps }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual { re: self.re - o.re, eps: self.eps - o.eps }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual { re: self.re * o.re, eps: self.re * o.eps + self.eps * o.re }
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual { re: self.re / o.re, eps: (self.eps * o.re - self.re * o.eps) / (o.re * o.re) }
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual { re: -self.re, eps: -self.eps }
    }
}

fn c(v: f64) -> Dual {
    Dual::constant(v)
}

/// Energies `E_0..=E_order` as duals in the artificial frequency.
fn dual_energies(omega: f64, mu: f64, omega_tilde: f64, order: usize) -> Vec<Dual> {
    let t = Dual::variable(omega_tilde);
    let s = c((2.0 * mu).sqrt());
    let shift = t * t - c(omega * omega);
    let len = 3 * order + 3;
    let mut xi: Vec<Vec<Dual>> = vec![{
        let mut v = vec![c(0.0); len];
        v[0] = c(1.0);
        v
    }];
    let mut energies = vec![t / c(2.0)];
    for k in 1..=order {
        let prev = &xi[k - 1];
        // everything except the -2 E_k xi_0 term
        let mut rhs = vec![c(0.0); len];
        for j in 1..k {
            for (p, &v) in xi[k - j].iter().enumerate() {
                rhs[p] = rhs[p] - c(2.0) * energies[j] * v;
            }
        }
        for p in 1..len {
            // s x^2 xi'
            if p + 1 < len {
                rhs[p + 1] = rhs[p + 1] + s * c(p as f64) * prev[p];
            }
        }
        for p in 0..len {
            if p + 3 < len {
                rhs[p + 3] = rhs[p + 3] - s * t * prev[p];
            }
            if p + 2 < len {
                rhs[p + 2] = rhs[p + 2] - shift * prev[p];
            }
            if p + 1 < len {
                rhs[p + 1] = rhs[p + 1] + s * prev[p];
            }
        }
        // p (p - 1) a_p x^{p-2} - 2 t p a_p x^p = rhs, top-down
        let mut a = vec![c(0.0); len];
        for p in (1..len - 2).rev() {
            a[p] = (c(((p + 1) * (p + 2)) as f64) * a[p + 2] - rhs[p]) / (c(2.0 * p as f64) * t);
        }
        energies.push((rhs[0] - c(2.0) * a[2]) / c(2.0));
        xi.push(a);
    }
    energies
}

fn partial_sum(energies: &[Dual]) -> Dual {
    energies.iter().fold(c(0.0), |acc, &e| acc + e)
}

#[test]
fn energies_match_engine() {
    for (w, mu) in [(1.0, 0.5), (1.0, 5.0), (0.0, 4.0), (2.0, 30.0)] {
        let p = OscillatorParams::reduced(w, mu).unwrap();
        for wt in [1.3, 2.0, 4.5] {
            if wt < w {
                continue;
            }
            let duals = dual_energies(w, mu, wt, 8);
            let engine = expand(&p, wt, 8).unwrap();
            for (k, (d, e)) in duals.iter().zip(engine.energies()).enumerate() {
                let scale = e.abs().max(1e-12);
                assert!((d.re - e).abs() <= 1e-11 * scale, "w={w} mu={mu} wt={wt} k={k}: {} vs {e}", d.re);
            }
        }
    }
}

#[test]
fn derivative_matches_central_difference() {
    let (w, mu, wt) = (1.0, 5.0, 2.3);
    let p = OscillatorParams::reduced(w, mu).unwrap();
    for k in 1..=6 {
        let d = partial_sum(&dual_energies(w, mu, wt, k)).eps;
        let h = 1e-5;
        let fd = (expand(&p, wt + h, k).unwrap().energy() - expand(&p, wt - h, k).unwrap().energy()) / (2.0 * h);
        assert!((d - fd).abs() <= 1e-7 * d.abs().max(1.0), "K={k}: {d} vs {fd}");
    }
}

#[test]
fn pms_points_are_stationary() {
    let mut checked = 0;
    for (w, mu) in [(1.0, 1.0), (1.0, 5.0), (1.0, 200.0), (0.0, 4.0)] {
        let p = OscillatorParams::reduced(w, mu).unwrap();
        for k in 2..=8 {
            let r = optimize(&p, k).unwrap();
            if r.selected().kind == CandidateKind::Boundary {
                continue;
            }
            let e = partial_sum(&dual_energies(w, mu, r.omega_tilde_star, k));
            assert!((e.re - r.energy).abs() <= 1e-12 * r.energy.abs(), "w={w} mu={mu} K={k}");
            // energy scale is omega_tilde, so the slope is dimensionless
            assert!(e.eps.abs() <= 1e-8, "w={w} mu={mu} K={k}: dE/dwt = {:e} at {}", e.eps, r.omega_tilde_star);
            checked += 1;
        }
    }
    assert!(checked >= 20, "only {checked} interior PMS points");
}
