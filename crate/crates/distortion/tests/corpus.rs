use potlab_distortion::corpus;
use potlab_distortion::runner::run_all;
use potlab_distortion::verify::Status;

#[test]
fn every_bundled_scenario_holds() {
    let scenarios = corpus::bundled().unwrap();
    assert_eq!(scenarios.len(), corpus::FILES.len());
    let items = run_all(&scenarios, 4).unwrap();
    let ids: Vec<&str> = items.iter().map(|i| i.id.as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    for item in &items {
        let r = item.result.as_ref().unwrap_or_else(|e| panic!("{}: {e}", item.id));
        println!("{}", r.to_json());
        assert_eq!(r.status, Status::Holds, "{}", r.to_json());
    }
}

#[test]
fn equality_cases_are_flagged() {
    for id in [
        "twopoint21_mobius",
        "twopoint22_mobius",
        "thm_4_1_lindelof",
        "thm_4_2_radius",
        "thm_4_2_radius_two_preimages",
        "thm_4_3_pvalent",
        "cor_5_1_strip",
        "cor_5_3_quarterplane",
    ] {
        let s = corpus::find(id).unwrap();
        let r = potlab_distortion::verify(&s).unwrap();
        assert!(r.equality, "{}", r.to_json());
        assert!(r.margin.abs() <= 1e-8, "{}", r.to_json());
    }
    for id in [
        "twopoint22_contraction",
        "thm_4_1_lindelof_contraction",
        "cor_5_1_strip_shift",
        "cor_5_2_halfplane",
    ] {
        let s = corpus::find(id).unwrap();
        let r = potlab_distortion::verify(&s).unwrap();
        assert!(r.margin > 1e-3 && !r.equality, "{}", r.to_json());
    }
}
