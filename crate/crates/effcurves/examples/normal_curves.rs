//! Normal curves on a triangulated surface: admissible weights,
//! classification, isotopy testing, and intersection numbers.

use effcurves::curves::format::{parse_record, write_record, CurveRecord};
use effcurves::curves::{isotopic, normal_intersection, surface::genus2_closed, NormalCurve};

fn main() {
    let surf = genus2_closed();
    let budget = 1_000_000;

    let a = NormalCurve::from_edge_weights(&surf, &[1, 2, 1, 0, 2, 1, 1, 1, 0]).unwrap();
    let b = NormalCurve::from_edge_weights(&surf, &[2, 2, 2, 2, 0, 0, 0, 0, 0]).unwrap();

    println!("a: {:?}", a.classify(&surf));
    println!("b: {:?}", b.classify(&surf));

    let i = normal_intersection(&surf, &a, &b, budget).unwrap();
    println!("i(a, b) = {i}");

    println!("a isotopic to b: {}", isotopic(&surf, &a, &b, budget).unwrap());
    println!("a isotopic to a: {}", isotopic(&surf, &a, &a, budget).unwrap());

    // curves round-trip through the text record format
    let rec = CurveRecord::Normal { surface: "genus2".into(), curve: a };
    let text = write_record(&rec);
    println!("record: {text}");
    let back = parse_record(&text).unwrap();
    assert_eq!(write_record(&back), text);
}
