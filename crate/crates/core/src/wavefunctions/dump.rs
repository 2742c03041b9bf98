use std::io::{self, Write};

use super::{Grid, StateField};
use crate::format::num;

/// Writes `axis_value,R,S,rho` rows preceded by `# state`, `# E` and `# units`
/// metadata lines.
pub fn write_state_csv(
    out: &mut impl Write,
    state: &dyn StateField,
    grid: &Grid,
) -> io::Result<()> {
    writeln!(out, "# state: {}", state.label())?;
    match state.system() {
        Some(sys) => writeln!(out, "# E: {}", num(sys.energy))?,
        None => writeln!(out, "# E: unknown")?,
    }
    writeln!(out, "# units: {}", state.units())?;
    writeln!(out, "{},R,S,rho", state.axis().symbol())?;
    for v in grid.points() {
        writeln!(
            out,
            "{},{},{},{}",
            num(v),
            num(state.r_derivative(v, 0)),
            num(state.s_derivative(v, 0)),
            num(state.density(v))
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavefunctions::{linear_momentum_state, Units};

    #[test]
    fn header_and_rows() {
        let s = linear_momentum_state(0.0, Units::default());
        let mut buf = Vec::new();
        write_state_csv(&mut buf, &s, &Grid::new(-1.0, 1.0, 9).unwrap()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# state: linear-momentum");
        assert!(lines[1].starts_with("# E: "));
        assert_eq!(lines[2], "# units: hbar=1,m=1,omega=1");
        assert_eq!(lines[3], "p,R,S,rho");
        assert_eq!(lines.len(), 4 + 9);
        assert!(lines[4].starts_with("-1.0000000000000000e0,1.0000000000000000e0,"));
    }
}
