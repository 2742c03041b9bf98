use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::{Rational, Representation};

/// Which variable the polynomial is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    /// `T(p̂)`, a function of momentum.
    Kinetic,
    /// `V(x̂)`, a function of position.
    Potential,
}

impl OperatorKind {
    pub fn variable(self) -> char {
        match self {
            OperatorKind::Kinetic => 'p',
            OperatorKind::Potential => 'x',
        }
    }

    /// The representation in which this operator acts as a differential operator.
    pub fn differential_representation(self) -> Representation {
        match self {
            OperatorKind::Kinetic => Representation::Configuration,
            OperatorKind::Potential => Representation::Momentum,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty operator expression")]
    Empty,
    #[error("unexpected token `{0}`")]
    UnexpectedToken(String),
    #[error("invalid number `{0}`")]
    InvalidNumber(String),
    #[error("invalid exponent `{0}`")]
    InvalidExponent(String),
    #[error("division by zero in `{0}`")]
    ZeroDenominator(String),
    #[error("term `{0}` mixes x and p; products of position and momentum are not supported")]
    MixedVariables(String),
}

/// A real polynomial `Σ a_m ô^m` with exact rational coefficients.
///
/// Trailing zero coefficients are stripped, so `degree()` is the index of the
/// last nonzero coefficient (zero for the empty polynomial).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolynomialOperator {
    kind: OperatorKind,
    coefficients: Vec<Rational>,
}

impl PolynomialOperator {
    pub fn new(kind: OperatorKind, mut coefficients: Vec<Rational>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        Self { kind, coefficients }
    }

    pub fn monomial(kind: OperatorKind, degree: usize, coefficient: Rational) -> Self {
        let mut coefficients = vec![Rational::zero(); degree + 1];
        coefficients[degree] = coefficient;
        Self::new(kind, coefficients)
    }

    /// `p²/(2m)`.
    pub fn kinetic_quadratic(mass: f64) -> Self {
        let a2 = Rational::one() / (rational_from_f64(mass) * Rational::from_integer(2.into()));
        Self::monomial(OperatorKind::Kinetic, 2, a2)
    }

    /// `½ m ω² x²`.
    pub fn harmonic(mass: f64, omega: f64) -> Self {
        let w = rational_from_f64(omega);
        let a2 = rational_from_f64(mass) * &w * &w / Rational::from_integer(2.into());
        Self::monomial(OperatorKind::Potential, 2, a2)
    }

    /// `slope · x`.
    pub fn linear_potential(slope: Rational) -> Self {
        Self::monomial(OperatorKind::Potential, 1, slope)
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn coefficient(&self, m: usize) -> Rational {
        self.coefficients
            .get(m)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Classical value `Σ a_m v^m`.
    pub fn value(&self, v: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, a| acc * v + to_f64(a))
    }

    /// First derivative `Σ m a_m v^(m-1)`.
    pub fn derivative_value(&self, v: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (m, a)| acc * v + m as f64 * to_f64(a))
    }

    /// Parses sums of `c*x^n` (or `c*p^n`) terms with rational `c`, such as
    /// `x^4`, `p^2/2`, `1/2*x^2 - 3*x + 1`, `0.25 p^4`.
    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ParseError::Empty);
        }
        let mut coefficients: Vec<Rational> = Vec::new();
        let mut kind: Option<OperatorKind> = None;
        for (sign, body) in split_terms(&compact)? {
            let (var, degree, coeff) = parse_term(&body)?;
            if let Some(v) = var {
                let k = if v == 'x' {
                    OperatorKind::Potential
                } else {
                    OperatorKind::Kinetic
                };
                match kind {
                    Some(existing) if existing != k => {
                        return Err(ParseError::MixedVariables(compact.clone()))
                    }
                    _ => kind = Some(k),
                }
            }
            if coefficients.len() <= degree {
                coefficients.resize(degree + 1, Rational::zero());
            }
            coefficients[degree] += if sign { -coeff } else { coeff };
        }
        Ok(Self::new(
            kind.unwrap_or(OperatorKind::Potential),
            coefficients,
        ))
    }
}

impl fmt::Display for PolynomialOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = self.kind.variable();
        let mut first = true;
        for (m, a) in self.coefficients.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let magnitude = a.abs();
            if first {
                if a.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if a.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match m {
                0 => write!(f, "{magnitude}")?,
                _ => {
                    if !magnitude.is_one() {
                        write!(f, "{magnitude}*")?;
                    }
                    if m == 1 {
                        write!(f, "{var}")?;
                    } else {
                        write!(f, "{var}^{m}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

pub(crate) fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact binary value of a finite `f64`.
pub(crate) fn rational_from_f64(v: f64) -> Rational {
    Rational::from_float(v).expect("finite unit value")
}

/// Splits on top-level `+`/`-`, returning (negative, term body).
fn split_terms(s: &str) -> Result<Vec<(bool, String)>, ParseError> {
    let mut out = Vec::new();
    let mut negative = false;
    let mut current = String::new();
    let mut prev: Option<char> = None;
    for c in s.chars() {
        let binary = matches!(c, '+' | '-') && !matches!(prev, Some('^') | Some('*') | Some('/'));
        if binary {
            if !current.is_empty() {
                out.push((negative, std::mem::take(&mut current)));
                negative = false;
            } else if prev.is_some() && !matches!(prev, Some('+') | Some('-')) {
                return Err(ParseError::UnexpectedToken(c.to_string()));
            }
            if c == '-' {
                negative = !negative;
            }
        } else {
            current.push(c);
        }
        prev = Some(c);
    }
    if current.is_empty() {
        let tail = prev.map(String::from).unwrap_or_default();
        return Err(ParseError::UnexpectedToken(tail));
    }
    out.push((negative, current));
    Ok(out)
}

fn parse_term(term: &str) -> Result<(Option<char>, usize, Rational), ParseError> {
    let vars: Vec<(usize, char)> = term
        .char_indices()
        .filter(|(_, c)| c.is_ascii_alphabetic())
        .collect();
    let var = match vars.as_slice() {
        [] => None,
        [(i, c)] if *c == 'x' || *c == 'p' => Some((*i, *c)),
        [(_, c)] => return Err(ParseError::UnexpectedToken(c.to_string())),
        many => {
            let letters: String = many.iter().map(|(_, c)| *c).collect();
            if letters.chars().all(|c| c == 'x' || c == 'p')
                && letters.contains('x')
                && letters.contains('p')
            {
                return Err(ParseError::MixedVariables(term.to_string()));
            }
            let bad = many
                .iter()
                .find(|(_, c)| *c != 'x' && *c != 'p')
                .unwrap_or(&many[1]);
            return Err(ParseError::UnexpectedToken(bad.1.to_string()));
        }
    };
    let Some((idx, v)) = var else {
        return Ok((None, 0, parse_number(term)?));
    };
    let prefix = &term[..idx];
    let suffix = &term[idx + 1..];
    let mut coeff = match prefix {
        "" => Rational::one(),
        p => parse_number(p.strip_suffix('*').unwrap_or(p))?,
    };
    let (power_part, divisor) = match suffix.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (suffix, None),
    };
    let degree = match power_part {
        "" => 1,
        p => {
            let digits = p
                .strip_prefix('^')
                .ok_or_else(|| ParseError::UnexpectedToken(p.to_string()))?;
            digits
                .parse::<usize>()
                .map_err(|_| ParseError::InvalidExponent(digits.to_string()))?
        }
    };
    if let Some(d) = divisor {
        let d = parse_number(d)?;
        if d.is_zero() {
            return Err(ParseError::ZeroDenominator(term.to_string()));
        }
        coeff /= d;
    }
    Ok((Some(v), degree, coeff))
}

/// Integer, fraction `a/b`, or decimal literal, converted exactly.
fn parse_number(s: &str) -> Result<Rational, ParseError> {
    if s.is_empty() {
        return Err(ParseError::InvalidNumber(s.to_string()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_number(num)?;
        let d = parse_number(den)?;
        if d.is_zero() {
            return Err(ParseError::ZeroDenominator(s.to_string()));
        }
        return Ok(n / d);
    }
    let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
        || (int_part.is_empty() && frac_part.is_empty())
    {
        return Err(ParseError::InvalidNumber(s.to_string()));
    }
    let digits = format!("{int_part}{frac_part}");
    let numerator: BigInt = digits
        .parse()
        .map_err(|_| ParseError::InvalidNumber(s.to_string()))?;
    let denominator = num_traits::pow(BigInt::from(10), frac_part.len());
    Ok(Rational::new(numerator, denominator))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parses_standard_forms() {
        let t = PolynomialOperator::parse("p^2/2").unwrap();
        assert_eq!(t.kind(), OperatorKind::Kinetic);
        assert_eq!(t.coefficients(), &[r(0, 1), r(0, 1), r(1, 2)]);

        let v = PolynomialOperator::parse("1/2*x^2 - 3*x + 0.25").unwrap();
        assert_eq!(v.kind(), OperatorKind::Potential);
        assert_eq!(v.coefficients(), &[r(1, 4), r(-3, 1), r(1, 2)]);

        let x = PolynomialOperator::parse("x").unwrap();
        assert_eq!(x.degree(), 1);
        assert_eq!(
            PolynomialOperator::parse("-x^4").unwrap().coefficient(4),
            r(-1, 1)
        );
        assert_eq!(
            PolynomialOperator::parse("3x^2").unwrap().coefficient(2),
            r(3, 1)
        );
    }

    #[test]
    fn strips_trailing_zeros() {
        let op = PolynomialOperator::parse("x^3 - x^3 + x").unwrap();
        assert_eq!(op.degree(), 1);
        let zero = PolynomialOperator::new(OperatorKind::Kinetic, vec![r(0, 1); 4]);
        assert!(zero.is_zero());
        assert_eq!(zero.degree(), 0);
    }

    #[test]
    fn rejects_bad_input_naming_the_token() {
        assert_eq!(
            PolynomialOperator::parse("x^2 + y").unwrap_err(),
            ParseError::UnexpectedToken("y".into())
        );
        assert!(matches!(
            PolynomialOperator::parse("x*p").unwrap_err(),
            ParseError::MixedVariables(_)
        ));
        assert!(matches!(
            PolynomialOperator::parse("x^2 + p").unwrap_err(),
            ParseError::MixedVariables(_)
        ));
        assert_eq!(
            PolynomialOperator::parse("x^1.5").unwrap_err(),
            ParseError::InvalidExponent("1.5".into())
        );
        assert_eq!(
            PolynomialOperator::parse("2*x^a").unwrap_err(),
            ParseError::UnexpectedToken("a".into())
        );
        assert!(PolynomialOperator::parse("x/0").is_err());
        assert_eq!(
            PolynomialOperator::parse("  ").unwrap_err(),
            ParseError::Empty
        );
        assert!(PolynomialOperator::parse("x +").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["x^4", "1/2*p^2", "-3*x^2 + x - 7/3", "p"] {
            let op = PolynomialOperator::parse(s).unwrap();
            let again = PolynomialOperator::parse(&op.to_string()).unwrap();
            assert_eq!(op, again, "{s}");
        }
    }

    #[test]
    fn classical_values() {
        let op = PolynomialOperator::parse("x^3 - 2*x + 1").unwrap();
        assert!((op.value(2.0) - 5.0).abs() < 1e-15);
        assert!((op.derivative_value(2.0) - 10.0).abs() < 1e-15);
        let t = PolynomialOperator::kinetic_quadratic(2.0);
        assert_eq!(t.coefficient(2), r(1, 4));
        let v = PolynomialOperator::harmonic(1.0, 2.0);
        assert_eq!(v.coefficient(2), r(2, 1));
    }
}
