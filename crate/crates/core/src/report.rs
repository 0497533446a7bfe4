//! Result tables for the CLI and demo, with their CSV and JSON forms.
//!
//! Reals are written with 12 significant digits so repeated runs produce
//! byte-identical files.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::expansion::expand_unchecked;
use crate::params::OscillatorParams;
use crate::pms::{default_omega_tilde_max, optimize, optimize_physical, strong_coupling_alpha0, Candidate};
use crate::reference::{ground_energy, ground_wavefunction_reduced, SolverConfig};
use crate::wavefunction::{envelope_half_width, pms_profile};
use crate::Error;

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format_sig(*v, SIGNIFICANT_DIGITS),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Real(v) if v.is_finite() => {
                let rounded: f64 = format_sig(*v, SIGNIFICANT_DIGITS).parse().expect("formatted float parses");
                json!(rounded)
            }
            Cell::Real(_) => Value::Null,
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

/// `%.{digits}g`-style formatting: fixed notation for exponents in
/// `[-5, digits)`, scientific otherwise, trailing zeros trimmed.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, v)).to_owned()
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra JSON-only payload (e.g. stationary candidates).
    pub extra: Option<Value>,
}

impl Table {
    pub fn new(command: &str, columns: &[&'static str]) -> Self {
        Self { command: command.into(), columns: columns.to_vec(), rows: Vec::new(), extra: None }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let mut doc = json!({
            "command": self.command,
            "columns": self.columns,
            "rows": rows,
        });
        if let Some(extra) = &self.extra {
            doc["extra"] = extra.clone();
        }
        let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
        s.push('\n');
        s
    }
}

fn real(v: f64) -> Cell {
    Cell::Real(v)
}

/// PMS energy against the reference solver for one parameter set.
pub fn energy_table(params: &OscillatorParams, order: usize, tol: f64) -> Result<Table> {
    let (energy, _, _) = optimize_physical(params, order)?;
    let exact = ground_energy(params, tol)?;
    let mut t = Table::new(
        "energy",
        &["mu", "omega_phys", "order", "energy_pms", "energy_exact", "abs_gap", "rel_gap"],
    );
    t.push(vec![
        real(params.mu),
        real(params.omega),
        order.into(),
        real(energy),
        real(exact),
        real((energy - exact).abs()),
        real((energy - exact).abs() / exact.abs()),
    ]);
    Ok(t)
}

/// Scan of the partial-sum energy over the artificial frequency, one curve per
/// order; `omega_max` and the output are in physical units.
pub fn scan_omega_table(
    params: &OscillatorParams,
    orders: std::ops::RangeInclusive<usize>,
    omega_max: Option<f64>,
    points: usize,
) -> Result<Table> {
    let units = params.validate()?.reduce_units();
    let red = units.reduced;
    let to_phys = |w: f64| units.frequency_to_physical(w, params.hbar);
    let big_max = match omega_max {
        Some(m) => m / to_phys(1.0),
        None => {
            let t = default_omega_tilde_max(&red);
            (t * t - red.omega * red.omega).sqrt()
        }
    };
    if !(big_max > 0.0) || points < 2 {
        return Err(Error::Domain(format!("scan needs omega_max > 0 and >= 2 points, got {big_max}, {points}")));
    }
    let omegas: Vec<f64> = (0..points)
        .map(|i| big_max * i as f64 / (points - 1) as f64)
        .filter(|&o| red.omega > 0.0 || o > 0.0)
        .collect();

    let mut t = Table::new("scan-omega", &["omega", "omega_tilde", "order", "energy"]);
    let mut stationary = Vec::new();
    for order in orders {
        let curve: Vec<(f64, f64, f64)> = omegas
            .par_iter()
            .map(|&o| {
                let wt = red.omega.hypot(o);
                Ok((o, wt, expand_unchecked(&red, wt, order)?.energy()))
            })
            .collect::<Result<_>>()?;
        for (o, wt, e) in curve {
            t.push(vec![real(to_phys(o)), real(to_phys(wt)), order.into(), real(units.energy_to_physical(e))]);
        }
        let pms = optimize(&red, order)?;
        let scaled: Vec<Candidate> = pms
            .candidates
            .iter()
            .map(|c| Candidate {
                omega_tilde: to_phys(c.omega_tilde),
                omega: to_phys(c.omega),
                energy: units.energy_to_physical(c.energy),
                ..*c
            })
            .collect();
        stationary.push(json!({
            "order": order,
            "selected_omega": to_phys(pms.omega_star),
            "energy": units.energy_to_physical(pms.energy),
            "candidates": scaled,
        }));
    }
    t.extra = Some(json!({ "stationary": stationary }));
    Ok(t)
}

/// PMS and reference energies over a coupling grid; `base` supplies hbar,
/// mass and omega.
pub fn scan_mu_table(
    base: &OscillatorParams,
    mus: &[f64],
    orders: std::ops::RangeInclusive<usize>,
    tol: f64,
) -> Result<Table> {
    let rows: Vec<Vec<Vec<Cell>>> = mus
        .par_iter()
        .map(|&mu| {
            let params = OscillatorParams { mu, ..*base }.validate()?;
            let exact = ground_energy(&params, tol)?;
            orders
                .clone()
                .map(|order| {
                    let (e, _, _) = optimize_physical(&params, order)?;
                    Ok(vec![real(mu), order.into(), real(e), real(exact)])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new("scan-mu", &["mu", "order", "energy_pms", "energy_exact"]);
    for row in rows.into_iter().flatten() {
        t.push(row);
    }
    Ok(t)
}

/// Strong-coupling coefficient per order against the reference solver.
/// Orders without a stationary point (order 1) yield `nan`.
pub fn alpha0_table(orders: std::ops::RangeInclusive<usize>, tol: f64) -> Result<Table> {
    let reference = ground_energy(&OscillatorParams::reduced(0.0, 4.0)?, tol)?;
    let mut t = Table::new("alpha0", &["order", "alpha0", "alpha0_ref", "rel_error"]);
    let values: Vec<(usize, f64)> = orders
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&k| match strong_coupling_alpha0(k) {
            Ok(r) => Ok((k, r.alpha0)),
            Err(Error::NoStationaryPoint { .. }) => Ok((k, f64::NAN)),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    for (k, a) in values {
        t.push(vec![k.into(), real(a), real(reference), real(a / reference - 1.0)]);
    }
    Ok(t)
}

/// Reference and third/fourth-order profiles on the reference mesh, trimmed
/// to where the envelope is above `exp(-30)` and thinned to at most
/// `max_rows` rows. Physical units.
pub fn wavefunction_table(params: &OscillatorParams, tol: f64, max_rows: usize) -> Result<Table> {
    let units = params.validate()?.reduce_units();
    let red = units.reduced;
    let (_, exact) = ground_wavefunction_reduced(&red, &SolverConfig::with_tol(tol))?;
    let (pms3, k3) = pms_profile(&red, 3, exact.grid())?;
    let (_, k4) = pms_profile(&red, 4, exact.grid())?;

    let edge = envelope_half_width(&red.ansatz_scales_tilde(pms3.omega_tilde_star)?);
    let inside: Vec<usize> = (0..exact.grid().len()).filter(|&i| exact.grid()[i].abs() <= edge).collect();
    let stride = inside.len().div_ceil(max_rows.max(1)).max(1);
    let centre = inside.len() / 2;
    // keep the thinned grid symmetric by striding outward from the centre
    let mut picked: Vec<usize> = (0..=centre / stride).map(|j| inside[centre - j * stride]).collect();
    picked.reverse();
    picked.extend((1..).map(|j| centre + j * stride).take_while(|&i| i < inside.len()).map(|i| inside[i]));

    let l = units.length_scale;
    let amp = l.sqrt().recip();
    let mut t = Table::new("wavefunction", &["x", "psi_exact", "psi_K3", "psi_K4"]);
    for i in picked {
        t.push(vec![
            real(exact.grid()[i] * l),
            real(exact.values()[i] * amp),
            real(k3.values()[i] * amp),
            real(k4.values()[i] * amp),
        ]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.5, 12), "0.5");
        assert_eq!(format_sig(961.0 / 1024.0, 12), "0.9384765625");
        assert_eq!(format_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_sig(-2.0 / 3.0, 12), "-0.666666666667");
        assert_eq!(format_sig(123456.0, 12), "123456");
        assert_eq!(format_sig(1e-7, 12), "1e-7");
        assert_eq!(format_sig(1.5e20, 12), "1.5e20");
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(f64::NAN, 12), "nan");
        assert_eq!(format_sig(0.00012345, 12), "0.00012345");
    }

    #[test]
    fn csv_and_json_shapes() {
        let mut t = Table::new("demo", &["order", "value", "note"]);
        t.push(vec![1usize.into(), real(0.25), "a,b".into()]);
        t.push(vec![2usize.into(), real(f64::NAN), "plain".into()]);
        assert_eq!(t.to_csv(), "order,value,note\n1,0.25,\"a,b\"\n2,nan,plain\n");
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["rows"][0][1], json!(0.25));
        assert!(v["rows"][1][1].is_null());
        assert_eq!(v["columns"][2], json!("note"));
    }

    #[test]
    fn alpha0_table_marks_first_order_undefined() {
        let t = alpha0_table(1..=3, 1e-8).unwrap();
        let col = t.column("alpha0").unwrap();
        assert!(matches!(col[0], Cell::Real(v) if v.is_nan()));
        assert!(matches!(col[2], Cell::Real(v) if (v - 0.627593).abs() < 1e-6));
    }

    #[test]
    fn wavefunction_table_is_symmetric() {
        let p = OscillatorParams::reduced(1.0, 200.0).unwrap();
        let t = wavefunction_table(&p, 1e-8, 301).unwrap();
        assert!(t.rows.len() <= 302);
        let x = t.column("x").unwrap();
        let n = x.len();
        for i in 0..n {
            match (x[i], x[n - 1 - i]) {
                (Cell::Real(a), Cell::Real(b)) => assert_eq!(*a, -*b),
                _ => unreachable!(),
            }
        }
    }
}
