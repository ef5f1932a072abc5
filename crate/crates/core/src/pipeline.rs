//! The realizability check: reduce, rebuild the missing columns, then look
//! for a trivial saturation, an extra zero or a sign contradiction.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use slackspace_algebra::{Ideal, ResourceLimits};

use crate::certificate::{check_chain, DerivationChain, DerivationStep, Factor, NonrealizabilityCertificate, Term};
use crate::cone::{AbstractCone, ConeJson};
use crate::error::{ModelError, Result};
use crate::io::MatrixJson;
use crate::reduced::{detect_extra_zeros, ExtraZero, KfIdeal, ReducedSlackMatrix};
use crate::signs::{sign_normalize, PositivityConstraint, PositivityConstraintSet, SignConflict};

/// Options for the super-reduced path. Vertex indices are 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperReductionJob {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub keep: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ones: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag_rows: Option<Vec<usize>>,
}

/// Where the cone of a job comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConeSource {
    Inline(ConeJson),
    /// Path relative to the job file.
    Path(String),
}

/// A realizability check. Facet and vertex indices are 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJob {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeSource>,
    /// Reduced column set; defaults to the nonsimplicial facets when they
    /// form a valid reduction, else all facets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<Vec<usize>>,
    /// Spanning vertices for individual missing facets, keyed by facet.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bases: BTreeMap<usize, Vec<usize>>,
    /// Variables set to one before anything else.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ones: Option<Vec<String>>,
    /// A reduced matrix to use in place of the symbolic one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub super_reduction: Option<SuperReductionJob>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<DerivationChain>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    NoObstructionFound,
    NotRealizable { certificate: NonrealizabilityCertificate },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    #[serde(flatten)]
    pub verdict: Verdict,
    /// 1-based facets of the reduction.
    pub facets: Vec<usize>,
    /// One line per stage.
    pub log: Vec<String>,
    /// Facets whose column sign could not be determined.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unresolved_columns: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint_count: Option<usize>,
}

impl CheckReport {
    pub fn is_realizable_verdict(&self) -> bool {
        matches!(self.verdict, Verdict::NoObstructionFound)
    }

    pub fn certificate(&self) -> Option<&NonrealizabilityCertificate> {
        match &self.verdict {
            Verdict::NotRealizable { certificate } => Some(certificate),
            Verdict::NoObstructionFound => None,
        }
    }
}

fn zero_based(v: &[usize], bound: usize, what: &str) -> Result<Vec<usize>> {
    v.iter()
        .map(|&i| {
            if i == 0 || i > bound {
                Err(ModelError::Input(format!("{what} {i} outside 1..={bound}")))
            } else {
                Ok(i - 1)
            }
        })
        .collect()
}

/// Reduced column set used when a job names none.
pub fn default_reduction(cone: &AbstractCone) -> Vec<usize> {
    let nonsimplicial: Vec<usize> = (0..cone.num_facets()).filter(|&j| !cone.is_simplicial(j)).collect();
    if cone.is_valid_reduction(&nonsimplicial) {
        nonsimplicial
    } else {
        (0..cone.num_facets()).collect()
    }
}

fn extra_zero_certificate(z: &ExtraZero, ideal: Option<&Ideal>) -> NonrealizabilityCertificate {
    NonrealizabilityCertificate::ExtraZero {
        row: z.row + 1,
        facet: z.facet + 1,
        variables: z.entry.ring().names().to_vec(),
        entry: z.entry.to_string(),
        ideal: ideal.filter(|_| z.modulo_ideal).map(|i| i.generators().iter().map(ToString::to_string).collect()),
    }
}

fn one_based(mut set: PositivityConstraintSet) -> PositivityConstraintSet {
    for c in &mut set.constraints {
        c.row += 1;
        c.facet += 1;
    }
    set
}

struct Run {
    log: Vec<String>,
}

impl Run {
    fn note(&mut self, line: String) {
        self.log.push(line);
    }
}

/// Runs the check on `cone`.
pub fn check_realizability(cone: &Arc<AbstractCone>, job: &CheckJob, limits: &ResourceLimits) -> Result<CheckReport> {
    let mut run = Run { log: Vec::new() };
    let columns = match &job.facets {
        Some(f) => zero_based(f, cone.num_facets(), "facet")?,
        None => default_reduction(cone),
    };
    let facets_1: Vec<usize> = columns.iter().map(|j| j + 1).collect();
    let finish = |run: Run, verdict: Verdict, unresolved: Vec<usize>, count: Option<usize>| CheckReport {
        verdict,
        facets: facets_1.clone(),
        log: run.log,
        unresolved_columns: unresolved,
        constraint_count: count,
    };
    let mut reduced = match &job.matrix {
        Some(m) => ReducedSlackMatrix::from_matrix(cone, &columns, m.to_poly()?)?,
        None => ReducedSlackMatrix::new(cone, &columns)?,
    };
    if let Some(ones) = &job.ones {
        reduced = reduced.normalize_variables(ones)?.0;
        run.note(format!("set {} variables to one", ones.len()));
    }
    run.note(format!("reduced matrix {}x{}", reduced.matrix.rows(), reduced.matrix.cols()));
    let flag = job.flag.as_ref().map(|f| zero_based(f, cone.num_facets(), "facet")).transpose()?;
    let mut bases = BTreeMap::new();
    for (facet, verts) in &job.bases {
        let j = zero_based(&[*facet], cone.num_facets(), "facet")?[0];
        bases.insert(j, zero_based(verts, cone.v, "vertex")?);
    }

    if let Some(sj) = &job.super_reduction {
        let keep = sj.keep.as_ref().map(|k| zero_based(k, cone.v, "vertex")).transpose()?;
        let flag_rows = sj.flag_rows.as_ref().map(|k| zero_based(k, cone.v, "vertex")).transpose()?;
        let sg = reduced.super_reduce(keep.as_deref(), sj.ones.as_deref())?;
        run.note(format!(
            "super-reduced to vertices {:?}",
            sg.kept.iter().map(|i| i + 1).collect::<Vec<_>>()
        ));
        let rows = reduced.reconstruct_rows_with(&sg, flag_rows.as_deref())?;
        let rec = rows.reconstruct_columns_with(flag.as_deref(), &bases)?;
        if let Some(z) = detect_extra_zeros(&rec.matrix, cone, None, limits)?.first() {
            run.note(format!("entry at vertex {}, facet {} is identically zero", z.row + 1, z.facet + 1));
            let certificate = extra_zero_certificate(z, None);
            return Ok(finish(run, Verdict::NotRealizable { certificate }, Vec::new(), None));
        }
        let i_g = crate::slack::slack_ideal(&sg.matrix, cone.d, crate::slack::MinorStrategy::Bordered, limits)?;
        if !i_g.is_zero_ideal() {
            let i_g = i_g.embed(rec.matrix.ring())?;
            if let Some(z) = detect_extra_zeros(&rec.matrix, cone, Some(&i_g), limits)?.first() {
                run.note(format!("entry at vertex {}, facet {} vanishes modulo the ideal", z.row + 1, z.facet + 1));
                let certificate = extra_zero_certificate(z, Some(&i_g));
                return Ok(finish(run, Verdict::NotRealizable { certificate }, Vec::new(), None));
            }
        }
        run.note("no extra zeros after super-reduction".into());
        return Ok(finish(run, Verdict::NoObstructionFound, Vec::new(), None));
    }

    let rec = reduced.reconstruct_columns_with(flag.as_deref(), &bases)?;
    run.note(format!(
        "rebuilt {} columns with flag {:?}",
        rec.bases.len(),
        rec.flag_columns.iter().map(|j| j + 1).collect::<Vec<_>>()
    ));
    if let Some(z) = detect_extra_zeros(&rec.matrix, cone, None, limits)?.first() {
        run.note(format!("entry at vertex {}, facet {} is identically zero", z.row + 1, z.facet + 1));
        let certificate = extra_zero_certificate(z, None);
        return Ok(finish(run, Verdict::NotRealizable { certificate }, Vec::new(), None));
    }

    let i_f = reduced.slack_ideal(limits)?;
    run.note(format!("reduced slack ideal has {} generators", i_f.generators().len()));
    let variables = i_f.ring().names().to_vec();
    let ideal_text = |i: &Ideal| i.generators().iter().map(ToString::to_string).collect::<Vec<_>>();
    if i_f.is_trivial(limits)? {
        let certificate = NonrealizabilityCertificate::TrivialSaturatedIdeal {
            variables,
            ideal: ideal_text(&i_f),
            factor: "1".into(),
        };
        return Ok(finish(run, Verdict::NotRealizable { certificate }, Vec::new(), None));
    }
    if !i_f.is_zero_ideal() {
        let kf = KfIdeal::from_reconstruction(&rec, cone);
        for f in kf.essential_factors() {
            let f = f.embed(i_f.ring())?;
            if i_f.saturate(&f, limits)?.is_trivial(limits)? {
                run.note(format!("saturating by {f} gives the unit ideal"));
                let certificate = NonrealizabilityCertificate::TrivialSaturatedIdeal {
                    variables,
                    ideal: ideal_text(&i_f),
                    factor: f.to_string(),
                };
                return Ok(finish(run, Verdict::NotRealizable { certificate }, Vec::new(), None));
            }
        }
        run.note("no filling minor saturates to the unit ideal".into());
        if let Some(z) = detect_extra_zeros(&rec.matrix, cone, Some(&i_f), limits)?.first() {
            run.note(format!("entry at vertex {}, facet {} vanishes modulo the ideal", z.row + 1, z.facet + 1));
            let certificate = extra_zero_certificate(z, Some(&i_f.embed(rec.matrix.ring())?));
            return Ok(finish(run, Verdict::NotRealizable { certificate }, Vec::new(), None));
        }
    }

    let facet_labels: Vec<usize> = (0..cone.num_facets()).collect();
    let signs = sign_normalize(&rec.matrix, &facet_labels);
    let unresolved: Vec<usize> = signs.unresolved.iter().map(|j| j + 1).collect();
    let count = Some(signs.constraints.len());
    run.note(format!(
        "{} columns signed, {} positivity constraints",
        signs.column_signs.len(),
        signs.constraints.len()
    ));
    match &signs.conflict {
        Some(SignConflict::Polynomial { polynomial, first, second }) => {
            run.note(format!("{polynomial} must be both positive and negative"));
            let mut constraints = signs.constraints.clone();
            let neg = -polynomial;
            for (p, (row, facet)) in [(polynomial, first), (&neg, second)] {
                constraints.constraints.push(PositivityConstraint { polynomial: p.to_string(), row: *row, facet: *facet });
            }
            let constraints = one_based(constraints);
            let chain = DerivationChain {
                steps: vec![DerivationStep {
                    target: "0".into(),
                    terms: [polynomial, &neg]
                        .iter()
                        .map(|p| Term { weight: 1.into(), factors: vec![Factor::Premise(p.to_string())] })
                        .collect(),
                }],
            };
            let certificate = NonrealizabilityCertificate::SignContradiction { constraints, chain };
            return Ok(finish(run, Verdict::NotRealizable { certificate }, unresolved, count));
        }
        Some(SignConflict::Column { facet, first, second }) => {
            run.note(format!(
                "column of facet {} has entries at vertices {} and {} of forced opposite signs (not certified)",
                facet + 1,
                first + 1,
                second + 1
            ));
        }
        None => {}
    }
    if let Some(chain) = &job.chain {
        let constraints = one_based(signs.constraints.clone());
        check_chain(&constraints, chain)
            .map_err(|e| ModelError::CertificateInvalid { step: e.step, reason: e.reason })?;
        run.note(format!("supplied {}-step chain verified", chain.steps.len()));
        let certificate = NonrealizabilityCertificate::SignContradiction { constraints, chain: chain.clone() };
        return Ok(finish(run, Verdict::NotRealizable { certificate }, unresolved, count));
    }
    Ok(finish(run, Verdict::NoObstructionFound, unresolved, count))
}
