use mixfrob::verify::criteria::{self, CriterionReport};

fn check(r: CriterionReport) {
    println!("{r}");
    assert!(r.passed, "{r}");
}

#[test]
fn criterion_1_reflexive_polygons() {
    check(criteria::criterion_1());
}

#[test]
fn criterion_2_jacobian_ring_dimensions() {
    check(criteria::criterion_2());
}

#[test]
fn criterion_3_b_model_pipeline() {
    check(criteria::criterion_3());
}

#[test]
fn criterion_4_unfolding_flatness() {
    check(criteria::criterion_4(criteria::SUITE_SEED));
}

#[test]
fn criterion_5_pairing_extension() {
    check(criteria::criterion_5(criteria::SUITE_SEED));
}

#[test]
fn criterion_6_limit_construction() {
    check(criteria::criterion_6());
}

#[test]
fn criterion_7_local_a_model() {
    check(criteria::criterion_7());
}

#[test]
fn criterion_8_roundtrip_laws() {
    check(criteria::criterion_8(criteria::SUITE_SEED));
}
