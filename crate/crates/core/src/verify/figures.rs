use super::Check;
use crate::energetics::decompose_at;
use crate::figures::figure_tables;
use crate::wavefunctions::{airy_state, qho_state, Axis, StateField, Units};

/// A parsed figure CSV.
#[derive(Clone, Debug)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// Parses a figure CSV, skipping `#` metadata lines.
pub fn parse_table(text: &str) -> Result<Table, String> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let columns: Vec<String> = lines
        .next()
        .ok_or("missing header")?
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|v| v.parse::<f64>().map_err(|e| format!("`{v}`: {e}")))
                .collect::<Result<Vec<f64>, String>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    if rows.iter().any(|r| r.len() != columns.len()) {
        return Err("ragged row".into());
    }
    Ok(Table { columns, rows })
}

fn lagrange(xs: &[f64], ys: &[f64], at: f64) -> f64 {
    (0..xs.len())
        .map(|i| {
            let w: f64 = (0..xs.len())
                .filter(|&j| j != i)
                .map(|j| (at - xs[j]) / (xs[i] - xs[j]))
                .product();
            w * ys[i]
        })
        .sum()
}

fn lagrange_slope(xs: &[f64], ys: &[f64], at: f64) -> f64 {
    let h = 1e-6 * (xs[1] - xs[0]);
    (lagrange(xs, ys, at + h) - lagrange(xs, ys, at - h)) / (2.0 * h)
}

/// At each interior local maximum of `rho`, locates the vertex of a 5-point
/// interpolant and returns `(x, |disp - loc|, |disp - half_Q|)` there.
pub fn tangency_errors(t: &Table) -> Vec<(f64, f64, f64)> {
    let (Some(x), Some(rho), Some(half_q), Some(loc), Some(disp)) = (
        t.column("x"),
        t.column("rho"),
        t.column("half_Q"),
        t.column("loc"),
        t.column("disp"),
    ) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for i in 2..x.len().saturating_sub(2) {
        if !(rho[i] > rho[i - 1] && rho[i] >= rho[i + 1]) {
            continue;
        }
        let w = i - 2..i + 3;
        let (xs, rs) = (&x[w.clone()], &rho[w.clone()]);
        let mut v = x[i];
        // secant iteration on the interpolant's slope
        let (mut a, mut b) = (x[i - 1], x[i + 1]);
        for _ in 0..60 {
            let (fa, fb) = (lagrange_slope(xs, rs, a), lagrange_slope(xs, rs, b));
            if fb == fa {
                break;
            }
            let c = b - fb * (b - a) / (fb - fa);
            a = b;
            b = c;
            if (b - a).abs() < 1e-15 {
                break;
            }
        }
        if b.is_finite() && (b - x[i]).abs() <= x[1] - x[0] {
            v = b;
        }
        let d = lagrange(xs, &disp[w.clone()], v);
        let l = lagrange(xs, &loc[w.clone()], v);
        let q = lagrange(xs, &half_q[w], v);
        out.push((v, (d - l).abs(), (d - q).abs()));
    }
    out
}

fn table(name: &str, units: Units) -> Table {
    let text = figure_tables(units, crate::figures::LATTICE_DEGREE)
        .into_iter()
        .find(|t| t.0 == name)
        .expect("known figure")
        .1;
    parse_table(&text).expect("well-formed table")
}

pub(super) fn figures(units: Units) -> Vec<Check> {
    let s = "figures";
    let mut out = Vec::new();
    let tables: Vec<(String, Table)> = (1..=6)
        .map(|i| (format!("fig{i}"), table(&format!("fig{i}.csv"), units)))
        .collect();
    for (name, t) in &tables {
        let density_cols: Vec<&str> = t
            .columns
            .iter()
            .map(String::as_str)
            .filter(|c| *c == "rho" || c.ends_with("density"))
            .collect();
        let finite = density_cols
            .iter()
            .all(|c| t.column(c).is_some_and(|v| v.iter().all(|x| x.is_finite())));
        out.push(Check::holds(
            s,
            format!("figures.{name}.densities_finite"),
            finite,
        ));
    }
    // nodes of the Fig. 1 and Fig. 5 states: masked rows hold NaN, and the
    // components grow without bound on approach
    let node_states: [(&str, Box<dyn StateField>); 2] = [
        ("fig1", Box::new(airy_state(0.0, units))),
        ("fig5", Box::new(qho_state(2, Axis::X, units))),
    ];
    for (name, state) in &node_states {
        let t = &tables.iter().find(|x| x.0 == *name).expect("present").1;
        let (x, mask, disp) = (
            t.column("x").unwrap(),
            t.column("mask").unwrap(),
            t.column("disp").unwrap(),
        );
        let mut nodes = 0;
        let mut all_masked = true;
        let mut growth = f64::INFINITY;
        for i in 0..x.len() - 1 {
            let r0 = state.r_derivative(x[i], 0);
            let r1 = state.r_derivative(x[i + 1], 0);
            if r0 * r1 >= 0.0 {
                continue;
            }
            nodes += 1;
            all_masked &=
                mask[i] == 1.0 && mask[i + 1] == 1.0 && disp[i].is_nan() && disp[i + 1].is_nan();
            let node = x[i] - r0 * (x[i + 1] - x[i]) / (r1 - r0);
            let pre = units.hbar * units.hbar / (2.0 * units.mass);
            let far = decompose_at(state.as_ref(), pre, node + 1e-3).disp.abs();
            let near = decompose_at(state.as_ref(), pre, node + 1e-5).disp.abs();
            growth = growth.min(near / far);
        }
        out.push(
            Check::holds(
                s,
                format!("figures.{name}.nodes_masked"),
                nodes > 0 && all_masked,
            )
            .with_detail(format!("{nodes} nodes")),
        );
        out.push(Check::at_least(
            s,
            format!("figures.{name}.divergence_at_nodes"),
            growth,
            1e3,
        ));
    }
    let fig1 = &tables[0].1;
    let tangency = tangency_errors(fig1);
    let worst = tangency.iter().map(|t| t.1.max(t.2)).fold(0.0f64, f64::max);
    out.push(
        Check::at_most(s, "figures.fig1.common_tangent", worst, 1e-6)
            .with_detail(format!("{} density maxima", tangency.len())),
    );
    out.push(Check::holds(
        s,
        "figures.fig1.has_maxima",
        !tangency.is_empty(),
    ));
    let disp3 = tables[2].1.column("disp").unwrap();
    let spread = disp3.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - disp3.iter().cloned().fold(f64::INFINITY, f64::min);
    out.push(Check::at_most(
        s,
        "figures.fig3.disp_constant",
        spread,
        1e-12,
    ));
    out
}
