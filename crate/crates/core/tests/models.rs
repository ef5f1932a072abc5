mod common;

use std::collections::BTreeMap;

use slackspace::gale::{dependence_duality_violation, gale_transform, is_polytopal_gale, slack_from_gale};
use slackspace::grassmannian::{grr, grv, in_gr_plus, plucker, vgr};
use slackspace::io::VhJson;
use slackspace::slack::{is_slack_matrix, slack_from_vh};
use slackspace_algebra::QMatrix;

use common::realizations::columns_proportional;
use common::*;

fn pentagon() -> (QMatrix, QMatrix) {
    let vh: VhJson = serde_json::from_str(&read_fixture("pentagon.vh.json")).unwrap();
    let (normals, offsets) = vh.inequalities().unwrap();
    let x = vh.vertex_matrix().unwrap();
    (x.clone(), slack_from_vh(&x, &normals, &offsets).unwrap())
}

#[test]
fn vh_slack_is_a_slack_matrix() {
    let c = cone("pentagon.json");
    let (_, s) = pentagon();
    let verdict = is_slack_matrix(&s, &c, true);
    assert!(verdict.passes(), "{:?}", verdict.failures());
    let mut broken = s.clone();
    broken.set(0, 1, slackspace_algebra::Scalar::zero());
    assert!(!is_slack_matrix(&broken, &c, true).passes());
}

#[test]
fn grv_agrees_with_vh_slack_up_to_column_scaling() {
    let c = cone("pentagon.json");
    let bases = c.choose_facet_bases(&BTreeMap::new()).unwrap();
    let (x, s) = pentagon();
    let homogenized = QMatrix::from_rows(
        x.to_rows().into_iter().map(|r| std::iter::once(1.into()).chain(r).collect()).collect(),
    )
    .unwrap();
    let p = plucker(&homogenized).unwrap();
    assert!(in_gr_plus(&p, &c, &bases));
    assert!(columns_proportional(&s, &grv(&p, &c, &bases).unwrap()));
    assert!(vgr(&s, 3).unwrap().projectively_equal(&p));
    let r = grr(&p).unwrap();
    assert!(plucker(&r).unwrap().projectively_equal(&p));
}

#[test]
fn gale_dual_of_a_slack_matrix_reproduces_it() {
    let c = cone("pentagon.json");
    let bases = c.choose_facet_bases(&BTreeMap::new()).unwrap();
    let (_, s) = pentagon();
    let g = gale_transform(&s, 3).unwrap();
    assert!(is_polytopal_gale(&g));
    assert_eq!(dependence_duality_violation(&s, &g), None);
    let back = slack_from_gale(&g, &c, &bases).unwrap();
    assert!(columns_proportional(&s, &back));
}

#[test]
fn gale_transform_checks_rank() {
    let (_, s) = pentagon();
    assert!(gale_transform(&s, 2).is_err());
}
