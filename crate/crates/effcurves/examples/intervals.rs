//! Outward-rounded interval arithmetic: every printed range is a certified
//! two-sided enclosure of the exact value.

use effcurves::interval::{pi, IntervalScalar};
use num_rational::BigRational;

fn main() {
    let prec = 128;

    // exact rationals go in, certified enclosures come out
    let third = IntervalScalar::from_rational(&BigRational::new(1.into(), 3.into()), prec);
    println!("1/3        = {}", third.to_enclosure_string(30));

    let pi_e = pi(prec);
    println!("pi         = {}", pi_e.to_enclosure_string(30));

    // composition keeps the enclosure two-sided
    let x = pi_e.mul(&third, prec);
    let y = x.sinh(prec).unwrap();
    println!("sinh(pi/3) = {}", y.to_enclosure_string(30));

    // the inverse function brings the value back, up to the rounding width
    let back = y.asinh(prec).unwrap();
    println!("asinh(sinh(pi/3)) = {}", back.to_enclosure_string(30));
    assert!(back.intersects(&x));

    // width shrinks as the working precision grows
    for bits in [32, 64, 128, 256] {
        let v = pi(bits).sqrt(bits).unwrap();
        println!("sqrt(pi) at {bits:3} bits: {}", v.to_enclosure_string(40));
    }
}
