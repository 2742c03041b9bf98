//! JSON form of an expansion:
//! `{"representation": "...", "quantum": [{"coeff": "p/q", "hbar_pow": n,
//! "r_derivs": [..], "s_derivs": [..]}], "classical": [...], "source": {..}}`.

use serde::{Deserialize, Serialize};

use super::{
    ExpansionTerm, OperatorKind, PolynomialOperator, QhjExpansion, Rational, Representation,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub hbar_pow: u32,
    pub r_derivs: Vec<u32>,
    pub s_derivs: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceJson {
    pub kind: OperatorKind,
    pub coefficients: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionJson {
    pub representation: Representation,
    pub quantum: Vec<TermJson>,
    pub classical: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceJson>,
}

impl From<&ExpansionTerm> for TermJson {
    fn from(t: &ExpansionTerm) -> Self {
        TermJson {
            coeff: t.coefficient().to_string(),
            hbar_pow: t.hbar_power(),
            r_derivs: t.r_factors().to_vec(),
            s_derivs: t.s_factors().to_vec(),
        }
    }
}

impl TermJson {
    pub fn to_term(&self) -> Result<ExpansionTerm, String> {
        let coeff: Rational = self
            .coeff
            .parse()
            .map_err(|_| format!("invalid coefficient `{}`", self.coeff))?;
        if !self.hbar_pow.is_multiple_of(2) {
            return Err(format!("odd hbar power {}", self.hbar_pow));
        }
        if self.r_derivs.iter().chain(&self.s_derivs).any(|&n| n == 0) {
            return Err("derivative order 0 is not a valid factor".into());
        }
        Ok(ExpansionTerm::new(
            coeff,
            self.hbar_pow,
            self.r_derivs.clone(),
            self.s_derivs.clone(),
        ))
    }
}

impl From<&QhjExpansion> for ExpansionJson {
    fn from(e: &QhjExpansion) -> Self {
        ExpansionJson {
            representation: e.representation,
            quantum: e.quantum_part.iter().map(TermJson::from).collect(),
            classical: e.classical_part.iter().map(TermJson::from).collect(),
            source: Some(SourceJson {
                kind: e.source.kind(),
                coefficients: e
                    .source
                    .coefficients()
                    .iter()
                    .map(ToString::to_string)
                    .collect(),
            }),
        }
    }
}

impl QhjExpansion {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ExpansionJson::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let j: ExpansionJson = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let terms = |v: &[TermJson]| {
            v.iter()
                .map(TermJson::to_term)
                .collect::<Result<Vec<_>, _>>()
        };
        let source = match &j.source {
            Some(s) => PolynomialOperator::new(
                s.kind,
                s.coefficients
                    .iter()
                    .map(|c| {
                        c.parse::<Rational>()
                            .map_err(|_| format!("invalid coefficient `{c}`"))
                    })
                    .collect::<Result<_, _>>()?,
            ),
            None => PolynomialOperator::new(
                match j.representation {
                    Representation::Configuration => OperatorKind::Kinetic,
                    Representation::Momentum => OperatorKind::Potential,
                },
                Vec::new(),
            ),
        };
        Ok(QhjExpansion {
            representation: j.representation,
            source,
            quantum_part: super::canonicalize(terms(&j.quantum)?),
            classical_part: super::canonicalize(terms(&j.classical)?),
        })
    }
}
