//! Documents in, page tables and identity checks out.

use std::collections::BTreeMap;

use knotfloer::document::{load_knot_data, KnotDataDocument};
use knotfloer::floer::{
    build_d1, check_composite, check_knot, compose, euler, laurent, packages, recursion_check, thm_a_spectral,
    thm_b_spectral, LaurentPoly, Status, Q,
};
use knotfloer::invariants::signature;

/// One cross-window count from `a` (lift 1) to `b` (lift 4) with N = 2.
const CROSS: &str = r#"{
  "schema_version": "1",
  "knot": {"name": "cross"},
  "floer": {
    "chern_N": 2, "alpha": "1/4",
    "generators": [{"id": "a", "action": "1/8", "maslov_lift": 1},
                   {"id": "b", "action": "1/2", "maslov_lift": 4}],
    "boundary_Z": [[0, 0], [0, 0]],
    "higher_boundary": [{"source": "a", "target": "b", "coefficient": 1}]
  },
  "provenance": {"source": "constructed"}
}"#;

#[test]
fn trefoil_twice_from_documents() {
    let (t, _) = load_knot_data(packages::document("trefoil").unwrap()).unwrap();
    let c = compose(&t, &t).unwrap();
    let mut maslovs: Vec<i64> = c.strata_generators.iter().map(|g| g.maslov).collect();
    maslovs.sort();
    assert_eq!(maslovs, vec![1, 1, 2, 3]);
    assert!(build_d1(&c).unwrap().is_zero());

    let ss = thm_b_spectral(&c, None).unwrap();
    let e3 = ss.page(3);
    assert_eq!(e3.degree_ranks(), BTreeMap::from([(1, 2), (2, 1), (3, 1)]));
    let p = laurent(e3);
    assert_eq!(p, LaurentPoly::from_terms(vec![(1, 2), (2, 1), (3, 1)]));
    assert_eq!(p.to_string(), "2t + t^2 + t^3");
    assert_eq!(euler(&p), -2);
    assert_eq!(2 * euler(&p), signature(c.braid.as_ref().unwrap()).unwrap());

    let a = thm_a_spectral(&t, Q::from(0)).unwrap();
    let report = check_composite(&c, &ss, &a, &a);
    assert!(report.checks.iter().all(|c| c.status == Status::Pass), "{report:?}");
}

#[test]
fn unknot_is_a_unit_and_unknot_twice_is_empty() {
    let (u, t) = (packages::unknot(), packages::trefoil());
    let ut = thm_b_spectral(&compose(&u, &t).unwrap(), None).unwrap();
    let own = thm_a_spectral(&t, Q::from(0)).unwrap();
    assert_eq!(laurent(ut.limit()), laurent(own.limit()));
    let uu = thm_b_spectral(&compose(&u, &u).unwrap(), None).unwrap();
    assert!(uu.pages.iter().all(|p| p.is_zero()));
    assert_eq!(euler(&laurent(uu.limit())), 0);
}

#[test]
fn cross_window_document() {
    let doc = KnotDataDocument::parse(CROSS).unwrap();
    let k = doc.knot_data().unwrap();
    assert_eq!(KnotDataDocument::parse(&doc.to_json()).unwrap(), doc);

    let ss = thm_a_spectral(&k, Q::from(0)).unwrap();
    let d = &ss.pages[1].differentials;
    assert_eq!(d.len(), 1);
    // lands 2N - 1 levels deeper, one degree class down
    assert_eq!((d[0].source, d[0].target), ((1, 1), (4, 0)));
    assert!(ss.limit().is_zero());

    // B¹ is one class, and the recursion balances against it
    let b1: i64 = ss.pages[1].image_ranks().values().sum();
    assert_eq!(b1, 1);
    recursion_check(&ss.pages[1], &ss.pages[2]).unwrap();
    let report = check_knot(&k, &ss);
    assert_eq!(report.get("euler-equals-half-signature").unwrap().status, Status::Skipped);
    assert!(report.passed());
}

#[test]
fn figure_eight_pages_match_the_signature() {
    let k = packages::figure_eight();
    let ss = thm_a_spectral(&k, Q::from(0)).unwrap();
    assert_eq!(2 * euler(&laurent(ss.limit())), signature(k.braid.as_ref().unwrap()).unwrap());
    assert!(check_knot(&k, &ss).passed());
}
