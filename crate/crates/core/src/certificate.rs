//! Machine-checkable non-realizability certificates.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use slackspace_algebra::{Ideal, Polynomial, ResourceLimits, Ring, Scalar};

use crate::error::{ModelError, Result};
use crate::signs::{positive_multiple, PositivityConstraintSet};

/// A positive quantity used inside a derivation step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    /// A constraint of the set, matched up to positive scaling.
    Premise(String),
    /// The target of an earlier step (0-based).
    Step(usize),
    /// A variable; all variables are positive.
    Var(String),
}

/// `weight · Π factors`, with `weight > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub weight: Scalar,
    #[serde(default)]
    pub factors: Vec<Factor>,
}

/// Claims `target = Σ terms`, hence `target > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationStep {
    pub target: String,
    pub terms: Vec<Term>,
}

/// Steps ending in a target that is a constant `≤ 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationChain {
    pub steps: Vec<DerivationStep>,
}

/// Why a chain was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainRejection {
    pub step: usize,
    pub reason: String,
}

impl std::fmt::Display for ChainRejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "step {}: {}", self.step, self.reason)
    }
}

/// Checks every step of `chain` against `constraints` exactly.
pub fn check_chain(constraints: &PositivityConstraintSet, chain: &DerivationChain) -> std::result::Result<(), ChainRejection> {
    let reject = |step: usize, reason: String| ChainRejection { step, reason };
    let ring = Ring::new(constraints.variables.iter().cloned()).map_err(|e| reject(0, e.to_string()))?;
    let premises = constraints.polynomials(&ring).map_err(|e| reject(0, e.to_string()))?;
    if chain.steps.is_empty() {
        return Err(reject(0, "empty chain".into()));
    }
    let mut derived: Vec<Polynomial> = Vec::new();
    for (k, step) in chain.steps.iter().enumerate() {
        let target = Polynomial::parse(&ring, &step.target).map_err(|e| reject(k, e.to_string()))?;
        let mut sum = Polynomial::zero(&ring);
        if step.terms.is_empty() {
            return Err(reject(k, "no terms".into()));
        }
        for term in &step.terms {
            if !term.weight.is_positive() {
                return Err(reject(k, format!("weight {} is not positive", term.weight)));
            }
            let mut prod = Polynomial::constant(&ring, term.weight.clone());
            for f in &term.factors {
                let p = match f {
                    Factor::Premise(text) => {
                        let p = Polynomial::parse(&ring, text).map_err(|e| reject(k, e.to_string()))?;
                        if !premises.iter().any(|q| positive_multiple(q, &p)) {
                            return Err(reject(k, format!("{text} is not among the constraints")));
                        }
                        p
                    }
                    Factor::Step(i) if *i < k => derived[*i].clone(),
                    Factor::Step(i) => return Err(reject(k, format!("step {i} is not earlier"))),
                    Factor::Var(name) => {
                        if ring.var(name).is_none() {
                            return Err(reject(k, format!("unknown variable {name}")));
                        }
                        Polynomial::named(&ring, name)
                    }
                };
                prod = &prod * &p;
            }
            sum = &sum + &prod;
        }
        if sum != target {
            return Err(reject(k, format!("terms sum to {sum}, not {}", step.target)));
        }
        derived.push(target);
    }
    let last = derived.last().expect("nonempty");
    match last.constant_value() {
        Some(c) if !c.is_positive() => Ok(()),
        _ if last.is_zero() => Ok(()),
        _ => Err(reject(chain.steps.len() - 1, format!("final target {last} is not a nonpositive constant"))),
    }
}

/// True iff `chain` derives a contradiction from `constraints`.
pub fn verify_infeasibility(constraints: &PositivityConstraintSet, chain: &DerivationChain) -> bool {
    check_chain(constraints, chain).is_ok()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NonrealizabilityCertificate {
    /// Saturating `ideal` by `factor` gives the unit ideal.
    TrivialSaturatedIdeal { variables: Vec<String>, ideal: Vec<String>, factor: String },
    /// A support entry (1-based row and facet) that is zero, possibly only
    /// modulo `ideal`.
    ExtraZero {
        row: usize,
        facet: usize,
        variables: Vec<String>,
        entry: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ideal: Option<Vec<String>>,
    },
    SignContradiction { constraints: PositivityConstraintSet, chain: DerivationChain },
}

fn parse_all(ring: &Arc<Ring>, texts: &[String]) -> Result<Vec<Polynomial>> {
    Ok(texts.iter().map(|t| Polynomial::parse(ring, t)).collect::<std::result::Result<_, _>>()?)
}

impl NonrealizabilityCertificate {
    pub fn kind(&self) -> &'static str {
        match self {
            NonrealizabilityCertificate::TrivialSaturatedIdeal { .. } => "trivial-saturated-ideal",
            NonrealizabilityCertificate::ExtraZero { .. } => "extra-zero",
            NonrealizabilityCertificate::SignContradiction { .. } => "sign-contradiction",
        }
    }

    /// Rechecks the witness from its own data.
    pub fn verify(&self, limits: &ResourceLimits) -> Result<bool> {
        match self {
            NonrealizabilityCertificate::TrivialSaturatedIdeal { variables, ideal, factor } => {
                let ring = Ring::new(variables.iter().cloned())?;
                let i = Ideal::new(&ring, parse_all(&ring, ideal)?);
                let f = Polynomial::parse(&ring, factor)?;
                Ok(i.saturate(&f, limits)?.is_trivial(limits)?)
            }
            NonrealizabilityCertificate::ExtraZero { variables, entry, ideal, .. } => {
                let ring = Ring::new(variables.iter().cloned())?;
                let e = Polynomial::parse(&ring, entry)?;
                match ideal {
                    None => Ok(e.is_zero()),
                    Some(gens) => Ok(Ideal::new(&ring, parse_all(&ring, gens)?).contains(&e, limits)?),
                }
            }
            NonrealizabilityCertificate::SignContradiction { constraints, chain } => {
                Ok(verify_infeasibility(constraints, chain))
            }
        }
    }

    pub fn summary(&self) -> String {
        match self {
            NonrealizabilityCertificate::TrivialSaturatedIdeal { factor, .. } => {
                format!("saturating by {factor} gives the unit ideal")
            }
            NonrealizabilityCertificate::ExtraZero { row, facet, ideal, .. } => {
                let how = if ideal.is_some() { "modulo the ideal" } else { "identically" };
                format!("entry at vertex {row}, facet {facet} vanishes {how}")
            }
            NonrealizabilityCertificate::SignContradiction { chain, .. } => {
                format!("{}-step derivation of 0 > 0 from required positive entries", chain.steps.len())
            }
        }
    }
}

impl TryFrom<&str> for NonrealizabilityCertificate {
    type Error = ModelError;

    fn try_from(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| ModelError::Input(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signs::PositivityConstraint;

    fn set(vars: &[&str], polys: &[&str]) -> PositivityConstraintSet {
        PositivityConstraintSet {
            variables: vars.iter().map(|s| s.to_string()).collect(),
            constraints: polys
                .iter()
                .map(|p| PositivityConstraint { polynomial: p.to_string(), row: 0, facet: 0 })
                .collect(),
        }
    }

    fn premise(p: &str) -> Term {
        Term { weight: Scalar::one(), factors: vec![Factor::Premise(p.into())] }
    }

    #[test]
    fn opposite_pair_is_infeasible() {
        let c = set(&["a"], &["a - 1", "1 - a"]);
        let chain = DerivationChain {
            steps: vec![DerivationStep { target: "0".into(), terms: vec![premise("a - 1"), premise("1 - a")] }],
        };
        assert!(verify_infeasibility(&c, &chain));
    }

    #[test]
    fn false_identity_names_its_step() {
        let c = set(&["a"], &["a - 1", "2 - a"]);
        let chain = DerivationChain {
            steps: vec![DerivationStep { target: "0".into(), terms: vec![premise("a - 1"), premise("2 - a")] }],
        };
        let err = check_chain(&c, &chain).unwrap_err();
        assert_eq!(err.step, 0);
        assert!(!verify_infeasibility(&c, &chain));
    }

    #[test]
    fn positive_final_constant_is_rejected() {
        let c = set(&["a"], &["a"]);
        let chain = DerivationChain {
            steps: vec![DerivationStep { target: "1".into(), terms: vec![Term { weight: Scalar::one(), factors: vec![] }] }],
        };
        assert!(!verify_infeasibility(&c, &chain));
    }

    #[test]
    fn json_round_trip() {
        let cert = NonrealizabilityCertificate::ExtraZero {
            row: 3,
            facet: 10,
            variables: vec!["x_1".into()],
            entry: "0".into(),
            ideal: None,
        };
        let text = serde_json::to_string(&cert).unwrap();
        assert!(text.contains("\"kind\":\"extra-zero\""));
        assert_eq!(NonrealizabilityCertificate::try_from(text.as_str()).unwrap(), cert);
        assert!(cert.verify(&ResourceLimits::default()).unwrap());
    }
}
