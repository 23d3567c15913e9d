//! The assembled effective bounds: build the constant ledger, evaluate the
//! distance-to-length threshold and bound, and walk the full pipeline.

use effcurves::bounds::{
    make_ledger, theorem_a_pipeline, thm_a_length_bound, thm_a_threshold, thm_b_bound, Variant,
};
use effcurves::interval::IntervalScalar;
use effcurves::report::render_enclosure;
use num_rational::BigRational;

fn main() {
    let prec = 128;
    let led = make_ledger(BigRational::new(1.into(), 10.into()), prec).unwrap();

    let (chi_s, chi_y) = (2u64, 1u64);
    let thr = thm_a_threshold(&led, chi_y, chi_s).unwrap();
    println!("threshold: {}", render_enclosure(&thr));

    // distances below the threshold prove nothing
    let short = thm_a_length_bound(&led, chi_y, chi_s, &IntervalScalar::from_int(10));
    println!("at distance 10: {}", short.unwrap_err());

    // at twice the threshold the bound is live; the pipeline reproduces it
    let d = thr.add(&thr, prec);
    let bound = thm_a_length_bound(&led, chi_y, chi_s, &d).unwrap();
    println!("at twice the threshold: length <= {}", render_enclosure(&bound));

    let trace = theorem_a_pipeline(&led, chi_s, chi_y, &d, Variant::Lemma).unwrap();
    for stage in &trace.stages {
        println!("  {:26} {}", stage.name, render_enclosure(&stage.value));
    }
    println!("pipeline verdict: {}", trace.verdict);
    assert!(trace.final_bound.intersects(&bound));

    // the fibered-face bound scales inversely with the injectivity radius
    let inj = IntervalScalar::from_rational(&BigRational::new(1.into(), 100.into()), prec);
    let (b, warnings) = thm_b_bound(&led, chi_s, &inj).unwrap();
    println!("fibered-face bound: {}", render_enclosure(&b));
    for w in warnings {
        println!("warning: {w}");
    }
}
