mod common;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use slackspace::grassmannian::{grv, plucker};
use slackspace::pipeline::{check_realizability, default_reduction, CheckJob};
use slackspace::reduced::{detect_extra_zeros, ReducedSlackMatrix};
use slackspace::slack::peeled_minors;
use slackspace::AbstractCone;
use slackspace_algebra::subsets::colex_subsets;
use slackspace_algebra::{Ideal, PolyMatrix, QMatrix, ResourceLimits, Ring, Scalar};

use common::realizations::{columns_proportional, random_point};
use common::*;

fn smallest_reduction(c: &AbstractCone) -> Vec<usize> {
    (1..=c.num_facets())
        .flat_map(|k| colex_subsets(c.num_facets(), k))
        .find(|s| c.is_valid_reduction(s))
        .expect("all facets form a reduction")
}

fn numeric(m: &PolyMatrix) -> QMatrix {
    m.eval(&vec![Scalar::zero(); m.ring().len()])
}

#[test]
fn reduce_then_reconstruct_recovers_the_realization() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let empty = Ring::new(Vec::<String>::new()).unwrap();
    for name in ["pentagon.json", "square.json", "prism.json"] {
        let c = cone(name);
        let bases = c.choose_facet_bases(&BTreeMap::new()).unwrap();
        let columns = smallest_reduction(&c);
        assert!(columns.len() < c.num_facets(), "{name}: no proper reduction");
        for _ in 0..5 {
            let x = random_point(&mut rng, &c, &bases);
            let s = grv(&plucker(&x).unwrap(), &c, &bases).unwrap();
            let kept = QMatrix::from_rows(
                s.to_rows().into_iter().map(|r| columns.iter().map(|&j| r[j].clone()).collect()).collect(),
            )
            .unwrap();
            let r = ReducedSlackMatrix::from_matrix(&c, &columns, PolyMatrix::from_numeric(&empty, &kept)).unwrap();
            let rec = r.reconstruct_columns(None).unwrap();
            assert!(columns_proportional(&s, &numeric(&rec.matrix)), "{name}: reconstruction differs");
        }
    }
}

#[test]
fn invalid_reductions_are_rejected() {
    let c = cone("prism.json");
    assert!(ReducedSlackMatrix::new(&c, &[0]).is_err());
    assert!(ReducedSlackMatrix::new(&c, &smallest_reduction(&c)).is_ok());
}

#[test]
fn sphere_reconstruction_has_rank_at_most_d_plus_1_modulo_i_f() {
    let lim = ResourceLimits::default();
    let c = cone("sphere.json");
    let r = ReducedSlackMatrix::new(&c, &z(&[1, 2, 3, 4, 5, 6])).unwrap();
    let i_f = r.slack_ideal(&lim).unwrap();
    let rec = r.reconstruct_columns(Some(&z(&[1, 2, 4, 5, 6]))).unwrap();
    let m = &rec.matrix;
    let gb = i_f.embed(m.ring()).unwrap().basis(&lim).unwrap();
    let k = c.d + 2;
    for rows in colex_subsets(m.rows(), k) {
        for cols in colex_subsets(m.cols(), k) {
            let minor = m.minor(&rows, &cols).unwrap();
            assert!(gb.reduce(&minor).is_zero(), "minor on {rows:?} x {cols:?} survives");
        }
    }
}

#[test]
fn sphere_filled_entries_vanish_on_incident_rows() {
    let c = cone("sphere.json");
    let r = ReducedSlackMatrix::new(&c, &z(&[1, 2, 3, 4, 5, 6])).unwrap();
    let rec = r.reconstruct_columns(Some(&z(&[1, 2, 4, 5, 6]))).unwrap();
    assert!(rec.incident_nonzero.is_empty(), "{:?}", rec.incident_nonzero);
    let zeros = detect_extra_zeros(&rec.matrix, &c, None, &ResourceLimits::default()).unwrap();
    assert!(zeros.is_empty(), "{:?}", zeros.iter().map(|e| (e.row, e.facet)).collect::<Vec<_>>());
}

#[test]
fn saturated_peeled_minors_lie_in_the_reduced_slack_ideal() {
    let lim = ResourceLimits::default();
    let c = cone("sphere.json");
    let r = ReducedSlackMatrix::new(&c, &z(&[1, 2, 3, 4, 5, 6])).unwrap();
    let i_f = r.slack_ideal(&lim).unwrap();
    let peeled = peeled_minors(&r.matrix, c.d, c.d + 1).unwrap();
    assert!(!peeled.is_empty());
    let all: Vec<usize> = (0..r.matrix.ring().len()).collect();
    let sub = Ideal::new(r.matrix.ring(), peeled).saturate_variables(&all, &lim).unwrap();
    assert!(i_f.contains_ideal(&sub, &lim).unwrap());
}

#[test]
fn default_reduction_keeps_nonsimplicial_facets() {
    let c = cone("cut-cube.json");
    let cols = default_reduction(&c);
    assert!(c.is_valid_reduction(&cols));
    assert!((0..c.num_facets()).filter(|&j| !c.is_simplicial(j)).all(|j| cols.contains(&j)));
}

#[test]
fn realizable_cones_show_no_obstruction() {
    let lim = ResourceLimits::default();
    for name in ["pentagon.json", "prism.json", "square.json"] {
        let c = cone(name);
        let report = check_realizability(&c, &CheckJob::default(), &lim).unwrap();
        assert!(report.is_realizable_verdict(), "{name}: {:?}", report.log);
    }
    let (c, job) = job("cut-cube.check.json");
    let report = check_realizability(&c, &job, &lim).unwrap();
    assert!(report.is_realizable_verdict(), "cut cube: {:?}", report.log);
}
