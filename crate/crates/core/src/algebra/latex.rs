use num_traits::{One, Signed};

use super::{ExpansionTerm, QhjExpansion, Representation};

fn derivative(symbol: &str, order: u32, var: char) -> String {
    match order {
        1 => format!("\\partial_{{{var}}} {symbol}"),
        n => format!("\\partial_{{{var}}}^{{{n}}} {symbol}"),
    }
}

fn render_term(t: &ExpansionTerm, var: char, leading: bool) -> String {
    let c = t.coefficient();
    let mut s = String::new();
    if c.is_negative() {
        s.push_str(if leading { "-" } else { " - " });
    } else if !leading {
        s.push_str(" + ");
    }
    let magnitude = c.abs();
    let has_factors = t.hbar_power() > 0 || !t.r_factors().is_empty() || !t.s_factors().is_empty();
    if !magnitude.is_one() || !has_factors {
        if magnitude.denom().is_one() {
            s.push_str(&magnitude.numer().to_string());
        } else {
            s.push_str(&format!(
                "\\frac{{{}}}{{{}}}",
                magnitude.numer(),
                magnitude.denom()
            ));
        }
        if has_factors {
            s.push_str("\\,");
        }
    }
    match t.hbar_power() {
        0 => {}
        2 => s.push_str("\\hbar^{2}"),
        h => s.push_str(&format!("\\hbar^{{{h}}}")),
    }
    if !t.r_factors().is_empty() {
        let numerators: Vec<String> = t
            .r_factors()
            .iter()
            .map(|&a| derivative("R", a, var))
            .collect();
        let power = t.r_factors().len();
        let den = if power == 1 {
            "R".to_string()
        } else {
            format!("R^{{{power}}}")
        };
        s.push_str(&format!("\\frac{{{}}}{{{den}}}", numerators.join("\\,")));
    }
    let mut i = 0;
    let sf = t.s_factors();
    while i < sf.len() {
        let mut j = i;
        while j < sf.len() && sf[j] == sf[i] {
            j += 1;
        }
        let d = derivative("S", sf[i], var);
        if j - i == 1 {
            s.push_str(&format!("\\left({d}\\right)"));
        } else {
            s.push_str(&format!("\\left({d}\\right)^{{{}}}", j - i));
        }
        i = j;
    }
    s
}

fn render_sum(terms: &[ExpansionTerm], var: char) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .enumerate()
        .map(|(i, t)| render_term(t, var, i == 0))
        .collect()
}

/// Two aligned LaTeX equations, one per part.
pub fn to_latex(e: &QhjExpansion) -> String {
    let (var, q, c) = match e.representation {
        Representation::Configuration => ('x', "T_{\\hbar}(x)", "T_{0}(x)"),
        Representation::Momentum => ('p', "V_{\\hbar}(p)", "V_{0}(p)"),
    };
    format!(
        "\\begin{{aligned}}\n{q} &= {}\\\\\n{c} &= {}\n\\end{{aligned}}\n",
        render_sum(&e.quantum_part, var),
        render_sum(&e.classical_part, var)
    )
}
