mod common;

use std::collections::BTreeSet;

use slackspace::certificate::{check_chain, Factor, NonrealizabilityCertificate};
use slackspace::pipeline::{check_realizability, CheckReport};
use slackspace::reduced::ReducedSlackMatrix;
use slackspace::signs::{sign_normalize, sign_normalize_shuffled, PositivityConstraintSet, SignAnalysis};
use slackspace_algebra::{Polynomial, ResourceLimits, Ring};

use common::*;

fn run(job_file: &str) -> CheckReport {
    let (c, job) = job(job_file);
    check_realizability(&c, &job, &ResourceLimits::default()).unwrap()
}

fn certificate(job_file: &str) -> NonrealizabilityCertificate {
    run(job_file).certificate().cloned().unwrap_or_else(|| panic!("{job_file}: no obstruction"))
}

fn prismatoid_signs(seed: Option<u64>) -> SignAnalysis {
    let (c, job) = job("prismatoid.check.json");
    let columns = z(job.facets.as_deref().unwrap());
    let r = ReducedSlackMatrix::from_matrix(&c, &columns, job_matrix(&job)).unwrap();
    let rec = r.reconstruct_columns(None).unwrap();
    let facets: Vec<usize> = (0..c.num_facets()).collect();
    match seed {
        None => sign_normalize(&rec.matrix, &facets),
        Some(s) => sign_normalize_shuffled(&rec.matrix, &facets, s),
    }
}

fn one_based(mut set: PositivityConstraintSet) -> PositivityConstraintSet {
    for c in &mut set.constraints {
        c.row += 1;
        c.facet += 1;
    }
    set
}

#[test]
fn each_fixture_yields_its_certificate_kind() {
    let lim = ResourceLimits::default();
    for (file, kind) in [
        ("sphere.check.json", "trivial-saturated-ideal"),
        ("sphere-super.check.json", "extra-zero"),
        ("prismatoid.check.json", "sign-contradiction"),
    ] {
        let cert = certificate(file);
        assert_eq!(cert.kind(), kind, "{file}");
        assert!(cert.verify(&lim).unwrap(), "{file}");
    }
}

#[test]
fn certificates_survive_json() {
    let lim = ResourceLimits::default();
    for file in ["sphere.check.json", "sphere-super.check.json", "prismatoid.check.json"] {
        let cert = certificate(file);
        let text = serde_json::to_string(&cert).unwrap();
        let back = NonrealizabilityCertificate::try_from(text.as_str()).unwrap();
        assert_eq!(back, cert);
        assert!(back.verify(&lim).unwrap());
    }
}

#[test]
fn tampered_certificates_fail() {
    let lim = ResourceLimits::default();
    match certificate("sphere.check.json") {
        NonrealizabilityCertificate::TrivialSaturatedIdeal { variables, ideal, .. } => {
            let factor = variables[0].clone();
            let forged = NonrealizabilityCertificate::TrivialSaturatedIdeal { variables, ideal, factor };
            assert!(!forged.verify(&lim).unwrap());
        }
        other => panic!("unexpected {other:?}"),
    }
    match certificate("sphere-super.check.json") {
        NonrealizabilityCertificate::ExtraZero { row, facet, variables, ideal, .. } => {
            let entry = variables[0].clone();
            let forged = NonrealizabilityCertificate::ExtraZero { row, facet, variables, entry, ideal };
            assert!(!forged.verify(&lim).unwrap());
        }
        other => panic!("unexpected {other:?}"),
    }
    match certificate("prismatoid.check.json") {
        NonrealizabilityCertificate::SignContradiction { constraints, mut chain } => {
            let last = chain.steps.len() - 1;
            chain.steps[last].terms[0].weight = -chain.steps[last].terms[0].weight.clone();
            let forged = NonrealizabilityCertificate::SignContradiction { constraints, chain };
            assert!(!forged.verify(&lim).unwrap());
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn every_premise_of_the_chain_is_needed() {
    let (_, job) = job("prismatoid.check.json");
    let chain = job.chain.unwrap();
    let set = one_based(prismatoid_signs(None).constraints);
    check_chain(&set, &chain).unwrap();
    let ring = Ring::new(set.variables.iter().cloned()).unwrap();
    let premises: BTreeSet<String> = chain
        .steps
        .iter()
        .flat_map(|s| s.terms.iter().flat_map(|t| &t.factors))
        .filter_map(|f| match f {
            Factor::Premise(p) => Some(p.clone()),
            _ => None,
        })
        .collect();
    assert!(!premises.is_empty());
    for p in &premises {
        let weaker = set.without(&Polynomial::parse(&ring, p).unwrap());
        assert_eq!(weaker.len(), set.len() - 1, "{p} is not a single constraint");
        assert!(check_chain(&weaker, &chain).is_err(), "chain survives without {p}");
    }
}

/// Constraints are stored primitive with a fixed sign, so text is canonical.
fn polynomials(set: &PositivityConstraintSet) -> BTreeSet<&str> {
    set.constraints.iter().map(|c| c.polynomial.as_str()).collect()
}

#[test]
fn shuffled_sign_schedules_agree() {
    let base = prismatoid_signs(None);
    assert!(base.conflict.is_none());
    for seed in 0..10 {
        let s = prismatoid_signs(Some(seed));
        assert!(s.conflict.is_none(), "seed {seed}: {:?}", s.conflict);
        assert_eq!(s.column_signs, base.column_signs, "seed {seed}");
        assert_eq!(polynomials(&s.constraints), polynomials(&base.constraints), "seed {seed}");
    }
}

#[test]
fn reports_log_each_stage() {
    let report = run("sphere-super.check.json");
    assert!(!report.log.is_empty());
    assert!(!report.is_realizable_verdict());
    let json = serde_json::to_value(&report).unwrap();
    assert_eq!(json["verdict"], "not-realizable");
    assert_eq!(json["certificate"]["kind"], "extra-zero");
}
