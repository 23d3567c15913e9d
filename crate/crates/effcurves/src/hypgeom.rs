//! Closed-form hyperbolic-geometry quantities: systole and Bers-type length
//! bounds, collar and injectivity-radius formulas, thin-part separation, and
//! the recurrence count. Every quantity is exposed twice: as an expression
//! (so inequality chains around it can be re-certified) and as a certified
//! interval evaluator.

use crate::certify::{eval, EvalError, VarBox};
use crate::dyadic::{Dyadic, Round};
use crate::expr::{int, rat, var, Expr};
use crate::interval::{IntervalScalar, NumError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

/// Signature of a finite-type surface with negative Euler characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SurfaceSig {
    genus: u32,
    punctures: u32,
    boundary: u32,
}

impl SurfaceSig {
    pub fn new(genus: u32, punctures: u32, boundary: u32) -> Result<SurfaceSig, NumError> {
        let sig = SurfaceSig { genus, punctures, boundary };
        if sig.euler() >= 0 {
            return Err(NumError::Domain(format!(
                "surface signature ({genus}, {punctures}, {boundary}) has nonnegative Euler characteristic"
            )));
        }
        Ok(sig)
    }

    /// A surface with the requested |euler characteristic|, realized as a
    /// sphere with punctures.
    pub fn with_abs_euler(abs_euler: u64) -> SurfaceSig {
        SurfaceSig { genus: 0, punctures: abs_euler as u32 + 2, boundary: 0 }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn punctures(&self) -> u32 {
        self.punctures
    }

    pub fn boundary(&self) -> u32 {
        self.boundary
    }

    pub fn euler(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.punctures as i64 - self.boundary as i64
    }

    pub fn abs_euler(&self) -> u64 {
        (-self.euler()) as u64
    }
}

/// A Margulis-type constant, kept exact; the admissible range is
/// 0 < eps0 < asinh(1/4).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MargulisEps {
    eps0: BigRational,
}

impl MargulisEps {
    pub fn new(eps0: BigRational) -> Result<MargulisEps, NumError> {
        if !eps0.is_positive() {
            return Err(NumError::Domain("eps0 must be positive".into()));
        }
        // decide eps0 < asinh(1/4) with certified enclosures, escalating
        // precision; terminates since asinh(1/4) is irrational
        for prec in [64u64, 128, 256, 512, 1024] {
            let bound = IntervalScalar::from_rational(
                &BigRational::new(BigInt::from(1), BigInt::from(4)),
                prec,
            )
            .asinh(prec)
            .expect("asinh total");
            let e = IntervalScalar::from_rational(&eps0, prec);
            if e.hi() < bound.lo() {
                return Ok(MargulisEps { eps0 });
            }
            if e.lo() > bound.hi() {
                break;
            }
        }
        Err(NumError::Domain(format!("eps0 = {eps0} is not below asinh(1/4)")))
    }

    /// Convenience constructor from a small fraction.
    pub fn from_fraction(num: i64, den: i64) -> Result<MargulisEps, NumError> {
        MargulisEps::new(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn value(&self) -> &BigRational {
        &self.eps0
    }

    pub fn as_interval(&self, prec: u64) -> IntervalScalar {
        IntervalScalar::from_rational(&self.eps0, prec)
    }

    pub fn as_expr(&self) -> Expr {
        Expr::Const(self.eps0.clone())
    }
}

/// Validity radius for the flat ball-volume surrogate; the surrogate is a
/// lower bound only for small radii.
pub fn volume_surrogate_radius() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(4))
}

/// Note attached to every report that uses the volume surrogate.
pub const VOLUME_SURROGATE_NOTE: &str =
    "ball volume replaced by the flat lower bound (2*pi/3)*x^3, valid for x <= 1/4";

fn eval1(e: &Expr, name: &str, v: &IntervalScalar, prec: u64) -> Result<IntervalScalar, EvalError> {
    let mut b = VarBox::new();
    b.insert(name.to_string(), v.clone());
    eval(e, &b, prec)
}

fn chi_box(sig: &SurfaceSig) -> IntervalScalar {
    IntervalScalar::from_int(BigInt::from(sig.abs_euler()))
}

/// Shortest essential loop: 2*acosh(|chi| + 1).
pub fn shortest_loop_expr() -> Expr {
    int(2) * (var("chi").abs_e() + int(1)).acosh()
}

pub fn shortest_loop_bound(sig: &SurfaceSig, prec: u64) -> Result<IntervalScalar, EvalError> {
    eval1(&shortest_loop_expr(), "chi", &chi_box(sig), prec)
}

/// Two short loops through a thick point: 2*log(256*pi^2*|chi|^4 / eps0^2).
pub fn thick_two_loop_expr() -> Expr {
    (int(256) * Expr::Pi.pow(2) * var("chi").abs_e().pow(4) / var("eps0").pow(2)).log() * int(2)
}

pub fn thick_two_loop_bound(
    sig: &SurfaceSig,
    eps: &MargulisEps,
    prec: u64,
) -> Result<IntervalScalar, EvalError> {
    let mut b = VarBox::new();
    b.insert("chi".into(), chi_box(sig));
    b.insert("eps0".into(), eps.as_interval(prec));
    eval(&thick_two_loop_expr(), &b, prec)
}

/// Length bound for a full marking curve: 2*pi*|chi|.
pub fn bers_expr() -> Expr {
    int(2) * Expr::Pi * var("chi").abs_e()
}

pub fn bers_bound(sig: &SurfaceSig, prec: u64) -> Result<IntervalScalar, EvalError> {
    eval1(&bers_expr(), "chi", &chi_box(sig), prec)
}

/// Embedded collar half-width around a geodesic of length `len`:
/// log(coth(len/4)).
pub fn collar_width_expr() -> Expr {
    let q = var("len") / int(4);
    (q.clone().cosh() / q.sinh()).log()
}

pub fn collar_width(len: &IntervalScalar, prec: u64) -> Result<IntervalScalar, EvalError> {
    eval1(&collar_width_expr(), "len", len, prec)
}

/// Elementary lower bound for the collar half-width: exp(-len/2).
pub fn collar_width_lower_expr() -> Expr {
    (-(var("len") / int(2))).exp()
}

pub fn collar_width_lower(len: &IntervalScalar, prec: u64) -> Result<IntervalScalar, EvalError> {
    eval1(&collar_width_lower_expr(), "len", len, prec)
}

/// Injectivity radius at distance `r` from a geodesic of length `core`:
/// asinh(cosh(r) * sinh(core/2)).
pub fn inj_annulus_expr() -> Expr {
    (var("r").cosh() * (var("core") / int(2)).sinh()).asinh()
}

pub fn inj_annulus(
    core_len: &IntervalScalar,
    r: &IntervalScalar,
    prec: u64,
) -> Result<IntervalScalar, EvalError> {
    let mut b = VarBox::new();
    b.insert("core".into(), core_len.clone());
    b.insert("r".into(), r.clone());
    eval(&inj_annulus_expr(), &b, prec)
}

/// Injectivity radius at depth `r` inside a cusp neighborhood:
/// asinh(exp(-r)/2). The source writes this as asinh(1/2e^r); the
/// decreasing-in-r role in the surrounding argument forces this reading.
pub fn inj_cusp_expr() -> Expr {
    ((-var("r")).exp() / int(2)).asinh()
}

pub fn inj_cusp(r: &IntervalScalar, prec: u64) -> Result<IntervalScalar, EvalError> {
    eval1(&inj_cusp_expr(), "r", r, prec)
}

/// Radius at which the annular injectivity radius reaches `eps`:
/// acosh(sinh(eps) / sinh(core/2)). Requires sinh(eps) >= sinh(core/2).
pub fn radius_at_injectivity_annulus_expr() -> Expr {
    (var("eps").sinh() / (var("core") / int(2)).sinh()).acosh()
}

pub fn radius_at_injectivity_annulus(
    eps: &IntervalScalar,
    core_len: &IntervalScalar,
    prec: u64,
) -> Result<IntervalScalar, EvalError> {
    let mut b = VarBox::new();
    b.insert("eps".into(), eps.clone());
    b.insert("core".into(), core_len.clone());
    eval(&radius_at_injectivity_annulus_expr(), &b, prec)
}

/// Distance from an eps1-thin tube to the eps0-thick part:
/// acosh(eps0 / sqrt(7.256 * eps1)) - 0.042. The two decimal constants are
/// stored exactly.
pub fn tube_separation_expr() -> Expr {
    (var("eps0") / (rat(7256, 1000) * var("eps1")).sqrt()).acosh() - rat(42, 1000)
}

pub fn tube_separation(
    eps0: &IntervalScalar,
    eps1: &IntervalScalar,
    prec: u64,
) -> Result<IntervalScalar, EvalError> {
    let mut b = VarBox::new();
    b.insert("eps0".into(), eps0.clone());
    b.insert("eps1".into(), eps1.clone());
    eval(&tube_separation_expr(), &b, prec)
}

/// Distance from an eps1-thin cusp region to the eps0-thick part:
/// log(sinh(eps0) / sinh(eps1)).
pub fn cusp_separation_expr() -> Expr {
    (var("eps0").sinh() / var("eps1").sinh()).log()
}

pub fn cusp_separation(
    eps0: &IntervalScalar,
    eps1: &IntervalScalar,
    prec: u64,
) -> Result<IntervalScalar, EvalError> {
    let mut b = VarBox::new();
    b.insert("eps0".into(), eps0.clone());
    b.insert("eps1".into(), eps1.clone());
    eval(&cusp_separation_expr(), &b, prec)
}

/// Lower bound for the volume of a ball of radius `eps` in the unit tangent
/// bundle: (2*pi/3)*eps^3, valid below `volume_surrogate_radius`.
pub fn t1_ball_volume_lower_expr() -> Expr {
    rat(2, 3) * Expr::Pi * var("eps").pow(3)
}

pub fn t1_ball_volume_lower(
    eps: &IntervalScalar,
    prec: u64,
) -> Result<IntervalScalar, EvalError> {
    let radius =
        Dyadic::from_rational(&volume_surrogate_radius(), prec, Round::Down);
    if eps.hi() > &radius {
        return Err(EvalError::Domain {
            source: NumError::Domain(format!(
                "ball-volume surrogate only valid up to radius {}",
                volume_surrogate_radius()
            )),
            at: VarBox::new(),
        });
    }
    eval1(&t1_ball_volume_lower_expr(), "eps", eps, prec)
}

/// Closed form of the recurrence-time constant:
/// 3072*log(2)*log2(148) + 3280*log(2) + 384.
pub fn anosov_t_expr() -> Expr {
    int(3072) * int(2).log() * int(148).log2() + int(3280) * int(2).log() + int(384)
}

pub fn anosov_t(prec: u64) -> IntervalScalar {
    eval(&anosov_t_expr(), &VarBox::new(), prec).expect("closed form is total")
}

/// The rounded value the downstream recurrence estimates use.
pub const ANOSOV_T_ROUNDED: u64 = 200_000;

/// Result of the recurrence count; `straddle` reports whether the exact
/// value landed on an integer (the floor is then attained, not conservative).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceCount {
    pub n: BigInt,
    pub straddle: bool,
}

/// floor(vol(eps/2) * m / (2*pi*|chi|)) with the surrogate volume; the pi
/// factors cancel and the count is exact: floor((eps/2)^3 * m / (3*|chi|)).
pub fn recurrence_count(
    m: u64,
    eps: &BigRational,
    eps0: &MargulisEps,
    sig: &SurfaceSig,
) -> Result<RecurrenceCount, NumError> {
    if eps * BigRational::from_integer(BigInt::from(2)) >= *eps0.value() {
        return Err(NumError::Domain(format!(
            "recurrence count needs eps < eps0/2, got eps = {eps}"
        )));
    }
    if !eps.is_positive() {
        return Err(NumError::Domain("eps must be positive".into()));
    }
    let half = eps / BigRational::from_integer(BigInt::from(2));
    let q = &half * &half * &half * BigRational::from_integer(BigInt::from(m))
        / BigRational::from_integer(BigInt::from(3) * BigInt::from(sig.abs_euler()));
    let straddle = q.is_integer();
    Ok(RecurrenceCount { n: q.floor().to_integer(), straddle })
}

/// Length of the flat meridian on the Margulis tube boundary:
/// 8*pi*epsY / core_len.
pub fn flat_meridian_upper_expr() -> Expr {
    int(8) * Expr::Pi * var("epsY") / var("core")
}

pub fn flat_meridian_upper(
    eps_y: &IntervalScalar,
    core_len: &IntervalScalar,
    prec: u64,
) -> Result<IntervalScalar, EvalError> {
    let mut b = VarBox::new();
    b.insert("epsY".into(), eps_y.clone());
    b.insert("core".into(), core_len.clone());
    eval(&flat_meridian_upper_expr(), &b, prec)
}

/// Normalized length from flat length: sqrt(flat_len / sinh(2*eps0)).
pub fn normalized_length_lower_expr() -> Expr {
    (var("flat") / (int(2) * var("eps0")).sinh()).sqrt()
}

pub fn normalized_length_lower(
    flat_len: &IntervalScalar,
    eps0: &IntervalScalar,
    prec: u64,
) -> Result<IntervalScalar, EvalError> {
    if flat_len.lo().is_negative() {
        return Err(EvalError::Domain {
            source: NumError::Domain("flat length must be nonnegative".into()),
            at: VarBox::new(),
        });
    }
    let mut b = VarBox::new();
    b.insert("flat".into(), flat_len.clone());
    b.insert("eps0".into(), eps0.clone());
    eval(&normalized_length_lower_expr(), &b, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Round;

    fn ival(num: i64, den: i64, prec: u64) -> IntervalScalar {
        IntervalScalar::from_rational(
            &BigRational::new(BigInt::from(num), BigInt::from(den)),
            prec,
        )
    }

    /// Frozen oracle comparison: interval must contain the decimal value
    /// (correct to the digits given) within 1 unit in the last place.
    fn assert_near(iv: &IntervalScalar, decimal: &str) {
        let places = decimal.split('.').nth(1).map_or(0, |s| s.len()) as u32;
        let parsed: BigRational = {
            let clean = decimal.replace('.', "");
            let num: BigInt = clean.parse().unwrap();
            BigRational::new(num, BigInt::from(10u32).pow(places))
        };
        let ulp = BigRational::new(BigInt::from(1), BigInt::from(10u32).pow(places));
        let lo = IntervalScalar::from_rational(&(&parsed - &ulp), 128);
        let hi = IntervalScalar::from_rational(&(&parsed + &ulp), 128);
        assert!(
            iv.lo() <= hi.hi() && iv.hi() >= lo.lo(),
            "{} not near {decimal}",
            iv.to_enclosure_string(20)
        );
        // and the interval is at least as tight as the oracle digits
        assert!(
            iv.width() <= Dyadic::from_rational(&ulp, 64, Round::Down),
            "interval too wide for oracle {decimal}: {}",
            iv.to_enclosure_string(30)
        );
    }

    #[test]
    fn surface_sig_invariants() {
        let s = SurfaceSig::new(2, 0, 0).unwrap();
        assert_eq!(s.euler(), -2);
        assert_eq!(s.abs_euler(), 2);
        assert!(SurfaceSig::new(0, 2, 0).is_err());
        assert!(SurfaceSig::new(1, 0, 0).is_err());
        assert_eq!(SurfaceSig::with_abs_euler(3).abs_euler(), 3);
    }

    #[test]
    fn margulis_eps_range() {
        assert!(MargulisEps::from_fraction(1, 10).is_ok());
        assert!(MargulisEps::from_fraction(247, 1000).is_ok());
        assert!(MargulisEps::from_fraction(1, 4).is_err());
        assert!(MargulisEps::from_fraction(-1, 10).is_err());
        assert!(MargulisEps::from_fraction(0, 1).is_err());
        // 16*pi is far outside the admissible range
        assert!(MargulisEps::from_fraction(50, 1).is_err());
    }

    #[test]
    fn shortest_loop_values() {
        let one = SurfaceSig::with_abs_euler(1);
        let two = SurfaceSig::with_abs_euler(2);
        let v1 = shortest_loop_bound(&one, 128).unwrap();
        let v2 = shortest_loop_bound(&two, 128).unwrap();
        assert_near(&v1, "2.63391579384963341725");
        assert_near(&v2, "3.52549434807817210093");
        assert!(v1.hi() < v2.lo());
    }

    #[test]
    fn thick_two_loop_values() {
        let sig = SurfaceSig::with_abs_euler(1);
        let eps = MargulisEps::from_fraction(1, 10).unwrap();
        let v = thick_two_loop_bound(&sig, &eps, 128).unwrap();
        assert_near(&v, "24.87961480433290838332");
        // increasing in |chi|, decreasing in eps0
        let bigger_chi =
            thick_two_loop_bound(&SurfaceSig::with_abs_euler(2), &eps, 128).unwrap();
        assert!(v.hi() < bigger_chi.lo());
        let smaller_eps = thick_two_loop_bound(
            &sig,
            &MargulisEps::from_fraction(1, 100).unwrap(),
            128,
        )
        .unwrap();
        assert!(v.hi() < smaller_eps.lo());
    }

    #[test]
    fn bers_values() {
        let v1 = bers_bound(&SurfaceSig::with_abs_euler(1), 128).unwrap();
        assert_near(&v1, "6.28318530717958647692");
        let v2 = bers_bound(&SurfaceSig::with_abs_euler(2), 128).unwrap();
        let doubled = v1.mul(&IntervalScalar::from_int(2), 128);
        assert!(doubled.intersects(&v2));
    }

    #[test]
    fn collar_values() {
        let v = collar_width(&ival(1, 1, 128), 128).unwrap();
        assert_near(&v, "1.40682911374729525277");
        let lower = collar_width_lower(&ival(1, 1, 128), 128).unwrap();
        assert_near(&lower, "0.60653065971263342360");
        assert!(v.lo() > lower.hi());
        // decreasing in len
        let far = collar_width(&ival(10, 1, 128), 128).unwrap();
        assert!(far.hi() < v.lo());
        assert!(far.is_positive());
    }

    #[test]
    fn inj_values() {
        // r = 0 collapses to core/2
        let v = inj_annulus(&ival(1, 5, 128), &IntervalScalar::zero(), 128).unwrap();
        assert!(v.contains(&Dyadic::from_rational(
            &BigRational::new(BigInt::from(1), BigInt::from(10)),
            128,
            Round::Down,
        )));
        let v2 = inj_annulus(&ival(1, 5, 128), &ival(2, 1, 128), 128).unwrap();
        assert_near(&v2, "0.36845339935929026177");
        // even in r
        let v2n = inj_annulus(&ival(1, 5, 128), &ival(-2, 1, 128), 128).unwrap();
        assert!(v2.intersects(&v2n));
        let c = inj_cusp(&IntervalScalar::zero(), 128).unwrap();
        assert_near(&c, "0.48121182505960344750");
        let c2 = inj_cusp(&ival(3, 1, 128), 128).unwrap();
        assert!(c2.hi() < c.lo());
        assert!(c2.is_positive());
    }

    #[test]
    fn radius_round_trip() {
        let eps = ival(1, 10, 192);
        let core = ival(1, 20, 192);
        let r0 = radius_at_injectivity_annulus(&eps, &core, 192).unwrap();
        let back = inj_annulus(&core, &r0, 192).unwrap();
        assert!(back.intersects(&eps));
        let gap = back.sub(&eps, 64).abs();
        assert!(gap.hi().magnitude_exponent().map_or(true, |e| e < BigInt::from(-33)));
        // precondition violation: eps below core/2
        assert!(radius_at_injectivity_annulus(&ival(1, 100, 128), &core, 128).is_err());
    }

    #[test]
    fn separation_values() {
        let t = tube_separation(&ival(1, 10, 128), &ival(1, 100_000, 128), 128).unwrap();
        assert_near(&t, "3.11229150775821601770");
        let c = cusp_separation(&ival(1, 10, 128), &ival(1, 100_000, 128), 128).unwrap();
        assert_near(&c, "9.21200648342309652992");
        assert!(c.lo() > t.hi());
        let same = cusp_separation(&ival(1, 10, 128), &ival(1, 10, 128), 128).unwrap();
        assert!(same.contains(&Dyadic::zero()));
    }

    #[test]
    fn volume_values() {
        let z = t1_ball_volume_lower(&IntervalScalar::zero(), 128).unwrap();
        assert!(z.contains(&Dyadic::zero()));
        // eps = 1/8 within validity; cubic scaling doubles thrice
        let v1 = t1_ball_volume_lower(&ival(1, 8, 128), 128).unwrap();
        let v2 = t1_ball_volume_lower(&ival(1, 4, 128), 128).unwrap();
        let scaled = v1.mul(&IntervalScalar::from_int(8), 128);
        assert!(scaled.intersects(&v2));
        assert!(t1_ball_volume_lower(&ival(1, 2, 128), 128).is_err());
    }

    #[test]
    fn anosov_t_value() {
        let v = anosov_t(128);
        assert_near(&v, "18008.95885723998208904679");
        assert!(v.hi() < &Dyadic::from_int(ANOSOV_T_ROUNDED as i64));
        assert!(v.lo() > &Dyadic::from_int(384));
        // reproducible bit-exactly
        assert_eq!(v, anosov_t(128));
    }

    #[test]
    fn recurrence_values() {
        let sig = SurfaceSig::with_abs_euler(2);
        let eps0 = MargulisEps::from_fraction(2, 10).unwrap();
        let eps = BigRational::new(BigInt::from(5), BigInt::from(100));
        let zero = recurrence_count(0, &eps, &eps0, &sig).unwrap();
        assert_eq!(zero.n, BigInt::from(0));
        let big = recurrence_count(1_000_000, &eps, &eps0, &sig).unwrap();
        assert_eq!(big.n, BigInt::from(2));
        assert!(!big.straddle);
        // monotone in m
        let bigger = recurrence_count(2_000_000, &eps, &eps0, &sig).unwrap();
        assert!(bigger.n >= big.n);
        // hypothesis eps < eps0/2 enforced
        let too_big = BigRational::new(BigInt::from(1), BigInt::from(10));
        assert!(recurrence_count(1, &too_big, &eps0, &sig).is_err());
    }

    #[test]
    fn flat_meridian_values() {
        let v = flat_meridian_upper(&ival(1, 100, 128), &ival(1, 1000, 128), 128).unwrap();
        assert_near(&v, "251.32741228718345907701");
        let halved = flat_meridian_upper(&ival(1, 100, 128), &ival(1, 2000, 128), 128).unwrap();
        assert!(v.mul(&IntervalScalar::from_int(2), 128).intersects(&halved));
        let zero = flat_meridian_upper(&IntervalScalar::zero(), &ival(1, 1000, 128), 128).unwrap();
        assert!(zero.contains(&Dyadic::zero()));
    }

    #[test]
    fn normalized_length_values() {
        let v = normalized_length_lower(&ival(2, 1, 128), &ival(1, 10, 128), 128).unwrap();
        assert_near(&v, "3.15176825569854259756");
        let zero = normalized_length_lower(&IntervalScalar::zero(), &ival(1, 10, 128), 128)
            .unwrap();
        assert!(zero.contains(&Dyadic::zero()));
        // quadrupling the flat length doubles the output
        let quad = normalized_length_lower(&ival(8, 1, 128), &ival(1, 10, 128), 128).unwrap();
        assert!(v.mul(&IntervalScalar::from_int(2), 128).intersects(&quad));
        assert!(normalized_length_lower(&ival(-1, 1, 128), &ival(1, 10, 128), 128).is_err());
    }
}
