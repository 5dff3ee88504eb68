//! The bundled models under `models/`.

mod common;

use common::{model, property};
use ptasynth::model::{classify_params, constant_c, is_lu, ParamClass};
use ptasynth::synth::{synthesize, Mode};

const ATM: &str = include_str!("../../../models/atm.pta");

#[test]
fn atm_constants_and_classes() {
    let pta = model(ATM);
    let prop = property(&pta, "E<> loc == Withdraw");
    assert_eq!(pta.num_params(), 3);
    assert_eq!(constant_c(&pta, &prop), 2);
    let classes = classify_params(&pta, &prop);
    // p1 bounds the session from above in invariants and from below on timeout
    assert_eq!(classes[0], ParamClass::Mixed);
    assert!(!is_lu(&classes));
    assert!(synthesize(&pta, &prop, Mode::Auto).is_err());
}

fn region_matches(text: &str, analytic: impl Fn(&[u64]) -> bool) {
    let pta = model(text);
    let prop = property(&pta, "E<> loc == done");
    let r = synthesize(&pta, &prop, Mode::Auto).unwrap().region;
    let m = pta.num_params();
    for p in ptasynth::learn::lattice_box(m, 12) {
        assert_eq!(r.contains(&p).unwrap(), analytic(&p), "{} at {p:?}", pta.name);
    }
}

#[test]
fn synthesized_regions_are_the_analytic_ones() {
    region_matches(include_str!("../../../models/threshold.pta"), |p| p[0] >= 3);
    region_matches(include_str!("../../../models/sum.pta"), |p| p[0] + p[1] <= 4);
    region_matches(include_str!("../../../models/corner.pta"), |p| p[0] >= 2 && p[1] >= 2);
}
