//! Figure-ready CSV tables for the worked examples.
//!
//! Energy tables carry `rho` (unit maximum), `half_Q`, `loc`, `disp` and the
//! node mask; density tables carry `rho`, `half_Q_density`, `loc_density`
//! and `disp_density`. The one-half scaling of the quantum potential exists
//! only here.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::algebra::{km_lattice, OperatorKind, PolynomialOperator, Rational};
use crate::energetics::{decompose_config, EnergyProfile};
use crate::format::num;
use crate::wavefunctions::{airy_state, qho_state, Axis, StateField, Units};

/// Default monomial degree for the `(k, m)` lattice table.
pub const LATTICE_DEGREE: usize = 4;

fn header(p: &EnergyProfile, title: &str) -> String {
    let e = p.energy.map(num).unwrap_or_else(|| "unknown".into());
    format!(
        "# {title}\n# state: {}\n# units: {}\n# E: {e}\n",
        p.state, p.units
    )
}

/// `x,rho,half_Q,loc,disp,mask`.
pub fn energy_table(p: &EnergyProfile) -> String {
    let mut s = header(p, "energy versus position");
    s.push_str("x,rho,half_Q,loc,disp,mask\n");
    for i in 0..p.len() {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            num(p.axis[i]),
            num(p.rho[i]),
            num(0.5 * p.q[i]),
            num(p.loc[i]),
            num(p.disp[i]),
            u8::from(p.mask[i])
        ));
    }
    s
}

/// `x,rho,half_Q_density,loc_density,disp_density`.
pub fn density_table(p: &EnergyProfile) -> String {
    let mut s = header(p, "energy density versus position");
    s.push_str("x,rho,half_Q_density,loc_density,disp_density\n");
    for i in 0..p.len() {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            num(p.axis[i]),
            num(p.rho[i]),
            num(0.5 * p.q_density[i]),
            num(p.loc_density[i]),
            num(p.disp_density[i])
        ));
    }
    s
}

/// `k,m,hbar_power,part` for a single monomial of `degree`.
pub fn lattice_table(degree: usize) -> String {
    let op = PolynomialOperator::monomial(
        OperatorKind::Potential,
        degree,
        Rational::from_integer(1.into()),
    );
    let mut s = String::from("k,m,hbar_power,part\n");
    for pt in km_lattice(&op) {
        s.push_str(&format!(
            "{},{},{},{}\n",
            pt.k,
            pt.m,
            pt.hbar_power,
            pt.part.as_str()
        ));
    }
    s
}

/// The three worked-example profiles: Airy (E = 0), oscillator n = 0 and n = 2.
pub fn figure_profiles(units: Units) -> Vec<EnergyProfile> {
    let states: Vec<Box<dyn StateField>> = vec![
        Box::new(airy_state(0.0, units)),
        Box::new(qho_state(0, Axis::X, units)),
        Box::new(qho_state(2, Axis::X, units)),
    ];
    states
        .par_iter()
        .map(|s| decompose_config(s.as_ref(), &s.default_grid()).expect("configuration states"))
        .collect()
}

/// `(file name, contents)` for fig1..fig6 and fig_a.
pub fn figure_tables(units: Units, lattice_degree: usize) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (i, p) in figure_profiles(units).iter().enumerate() {
        out.push((format!("fig{}.csv", 2 * i + 1), energy_table(p)));
        out.push((format!("fig{}.csv", 2 * i + 2), density_table(p)));
    }
    out.push(("fig_a.csv".into(), lattice_table(lattice_degree)));
    out
}

/// Writes every table into `dir`, creating it if needed.
pub fn write_figures(dir: &Path, units: Units, lattice_degree: usize) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    figure_tables(units, lattice_degree)
        .into_iter()
        .map(|(name, body)| {
            let path = dir.join(name);
            fs::write(&path, body)?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_for_degree_four() {
        let t = lattice_table(4);
        let rows: Vec<&str> = t.lines().skip(1).collect();
        assert_eq!(rows, ["0,4,4,quantum", "2,4,2,quantum", "4,4,0,classical"]);
    }

    #[test]
    fn seven_tables() {
        let names: Vec<String> = figure_tables(Units::default(), 4)
            .into_iter()
            .map(|t| t.0)
            .collect();
        assert_eq!(
            names,
            [
                "fig1.csv",
                "fig2.csv",
                "fig3.csv",
                "fig4.csv",
                "fig5.csv",
                "fig6.csv",
                "fig_a.csv"
            ]
        );
    }

    #[test]
    fn ground_state_disp_column_constant() {
        let t = &figure_tables(Units::default(), 4)[2].1;
        for line in t.lines().filter(|l| !l.starts_with('#')).skip(1) {
            let disp: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
            assert!((disp - 0.25).abs() < 1e-12);
        }
    }
}
