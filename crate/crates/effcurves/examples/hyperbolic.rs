//! Hyperbolic-geometry calculators: Margulis-style constants, collar widths,
//! tube volumes, and the recurrence-time constant.

use effcurves::hypgeom::{anosov_t, collar_width, t1_ball_volume_lower, MargulisEps};
use effcurves::interval::IntervalScalar;

fn main() {
    let prec = 128;

    // the base constant must sit strictly below arcsinh(1/4)
    let eps0 = MargulisEps::from_fraction(1, 10).expect("1/10 is admissible");
    println!("eps0 = {}", eps0.as_interval(prec).to_enclosure_string(20));
    assert!(MargulisEps::from_fraction(3, 10).is_err());

    // collar width of a short geodesic shrinks as the geodesic grows
    for len in [1u64, 2, 4, 8] {
        let l = IntervalScalar::from_int(len);
        let w = collar_width(&l, prec).unwrap();
        println!("collar width at length {len}: {}", w.to_enclosure_string(20));
    }

    // unit-tangent-bundle volume lower bound at a small radius; only valid
    // below the surrogate cutoff of 1/4
    let r = IntervalScalar::from_rational(
        &num_rational::BigRational::new(1.into(), 5.into()),
        prec,
    );
    let v = t1_ball_volume_lower(&r, prec).unwrap();
    println!("T^1 ball volume lower bound at r=1/5: {}", v.to_enclosure_string(20));

    // the recurrence-time constant: a tight enclosure, far below the rounded
    // value used in the assembled bounds
    let t = anosov_t(prec);
    println!("recurrence constant T(pi/6) = {}", t.to_enclosure_string(20));
    assert!(t.hi() < &effcurves::dyadic::Dyadic::from_int(200_000));
}
