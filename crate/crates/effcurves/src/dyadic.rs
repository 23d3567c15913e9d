//! Arbitrary-precision dyadic rationals: `mantissa * 2^exponent`.
//!
//! Every certified interval endpoint in this crate is a dyadic. Addition,
//! subtraction, and multiplication are exact; directed rounding happens only
//! when a value is cut back to a working precision, so soundness reduces to
//! the correctness of [`Dyadic::round`].

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Rounding direction for precision cuts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    /// Toward negative infinity (sound for lower endpoints).
    Down,
    /// Toward positive infinity (sound for upper endpoints).
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// A dyadic rational in canonical form: the mantissa is odd or zero, and
/// zero carries exponent 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: BigInt,
}

/// Largest exponent gap (in bits) we align exactly before falling back to a
/// one-ulp outward bump. Keeps additions with wildly mismatched magnitudes
/// from allocating huge mantissas.
const MAX_ALIGN_BITS: u64 = 1 << 22;

impl Dyadic {
    pub fn zero() -> Dyadic {
        Dyadic { mantissa: BigInt::zero(), exponent: BigInt::zero() }
    }

    pub fn one() -> Dyadic {
        Dyadic { mantissa: BigInt::one(), exponent: BigInt::zero() }
    }

    pub fn new(mantissa: BigInt, exponent: impl Into<BigInt>) -> Dyadic {
        let mut d = Dyadic { mantissa, exponent: exponent.into() };
        d.normalize();
        d
    }

    pub fn from_int(n: impl Into<BigInt>) -> Dyadic {
        Dyadic::new(n.into(), 0)
    }

    /// `2^k`.
    pub fn pow2(k: impl Into<BigInt>) -> Dyadic {
        Dyadic { mantissa: BigInt::one(), exponent: k.into() }
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = BigInt::zero();
            return;
        }
        let shift = self.mantissa.trailing_zeros().unwrap_or(0);
        if shift > 0 {
            self.mantissa >>= shift;
            self.exponent += shift;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> &BigInt {
        &self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Number of significant bits of the mantissa.
    pub fn precision_bits(&self) -> u64 {
        self.mantissa.magnitude().bits()
    }

    /// Exponent of the leading bit: the value lies in `[2^k, 2^(k+1))` in
    /// magnitude where `k` is the returned exponent. Zero yields `None`.
    pub fn magnitude_exponent(&self) -> Option<BigInt> {
        if self.is_zero() {
            return None;
        }
        Some(&self.exponent + BigInt::from(self.precision_bits()) - 1)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mantissa: -&self.mantissa, exponent: self.exponent.clone() }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mantissa: self.mantissa.abs(), exponent: self.exponent.clone() }
    }

    /// Exact sum. When the exponent gap exceeds the alignment budget the
    /// result is instead the dominant operand nudged one ulp in `dir`, which
    /// is still an outward bound for the true sum.
    pub fn add(&self, other: &Dyadic, dir: Round) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let gap = (&self.exponent - &other.exponent).abs()
            + BigInt::from(self.precision_bits().max(other.precision_bits()));
        if gap > BigInt::from(MAX_ALIGN_BITS) {
            let (big, small) = if self.magnitude_exponent() >= other.magnitude_exponent() {
                (self, other)
            } else {
                (other, self)
            };
            return big.bump_ulp(small.signum(), dir);
        }
        let (lo_exp, hi) = if self.exponent <= other.exponent {
            (self.exponent.clone(), other)
        } else {
            (other.exponent.clone(), self)
        };
        let lo = if std::ptr::eq(hi, other) { self } else { other };
        let shift = usize::try_from(&hi.exponent - &lo_exp).expect("aligned shift fits usize");
        let m = (&hi.mantissa << shift) + &lo.mantissa;
        Dyadic::new(m, lo_exp)
    }

    /// Nudge this value by one ulp in the direction that soundly absorbs an
    /// addend of sign `addend_sign`, but only when the rounding direction
    /// requires it.
    fn bump_ulp(&self, addend_sign: i32, dir: Round) -> Dyadic {
        let needs = match dir {
            Round::Down => addend_sign < 0,
            Round::Up => addend_sign > 0,
        };
        if !needs {
            return self.clone();
        }
        let ulp = Dyadic::pow2(self.exponent.clone());
        let delta = if addend_sign < 0 { ulp.neg() } else { ulp };
        // gap shrank to zero, so this nested add always aligns exactly
        self.add(&delta, dir)
    }

    pub fn sub(&self, other: &Dyadic, dir: Round) -> Dyadic {
        self.add(&other.neg(), dir)
    }

    /// Exact product.
    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mantissa: &self.mantissa * &other.mantissa,
            exponent: &self.exponent + &other.exponent,
        }
    }

    /// Halve exactly.
    pub fn half(&self) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mantissa: self.mantissa.clone(), exponent: &self.exponent - 1 }
    }

    /// Round to at most `prec` mantissa bits in direction `dir`.
    pub fn round(&self, prec: u64, dir: Round) -> Dyadic {
        let bits = self.precision_bits();
        if bits <= prec {
            return self.clone();
        }
        let shift = (bits - prec) as usize;
        let (q, r) = self.mantissa.div_rem(&(BigInt::one() << shift));
        let mut q = q;
        if !r.is_zero() {
            // div_rem truncates toward zero
            match (dir, self.mantissa.is_negative()) {
                (Round::Down, true) => q -= 1,
                (Round::Up, false) => q += 1,
                _ => {}
            }
        }
        Dyadic::new(q, &self.exponent + BigInt::from(shift as u64))
    }

    /// Quotient `self / other` with `prec` significant bits, rounded in `dir`.
    /// Exact quotients are returned exactly. Panics on division by zero
    /// (callers guard the denominator through interval domain checks).
    pub fn div(&self, other: &Dyadic, prec: u64, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // scale the numerator so the integer quotient carries prec+2 bits
        let scale = (prec + 2) as i64 + other.precision_bits() as i64 - self.precision_bits() as i64;
        let scale = scale.max(0) as usize;
        let num = &self.mantissa << scale;
        let (q, r) = num.div_rem(&other.mantissa);
        let exact = r.is_zero();
        let mut q = q;
        if !exact {
            let q_neg = (self.mantissa.sign() == Sign::Minus) != (other.mantissa.sign() == Sign::Minus);
            match (dir, q_neg) {
                (Round::Down, true) => q -= 1,
                (Round::Up, false) => q += 1,
                _ => {}
            }
        }
        let exp = &self.exponent - &other.exponent - BigInt::from(scale as u64);
        let out = Dyadic::new(q, exp);
        if exact {
            out
        } else {
            out.round(prec, dir)
        }
    }

    /// Square root with `prec` significant bits, rounded in `dir`.
    /// Requires a nonnegative argument.
    pub fn sqrt(&self, prec: u64, dir: Round) -> Dyadic {
        assert!(!self.is_negative(), "dyadic sqrt of negative value");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // force an even exponent and at least 2*prec+4 mantissa bits
        let mut m = self.mantissa.clone();
        let mut e = self.exponent.clone();
        let want = 2 * prec + 4;
        let bits = m.magnitude().bits();
        let mut extra = if bits < want { want - bits } else { 0 };
        let e_minus = &e - BigInt::from(extra);
        if e_minus.is_odd() {
            extra += 1;
        }
        m <<= extra as usize;
        e -= BigInt::from(extra);
        let root = m.sqrt();
        let exact = (&root * &root) == m;
        let half_exp = e / 2;
        if exact {
            return Dyadic::new(root, half_exp);
        }
        match dir {
            Round::Down => Dyadic::new(root, half_exp).round(prec, dir),
            Round::Up => Dyadic::new(root + 1, half_exp).round(prec, dir),
        }
    }

    /// Largest integer `<= self`, as a dyadic.
    pub fn floor(&self) -> Dyadic {
        if self.exponent >= BigInt::zero() {
            return self.clone();
        }
        if self.magnitude_exponent().unwrap() < BigInt::zero() {
            // magnitude below 1: floor is 0 or -1
            return if self.is_negative() {
                Dyadic::from_int(-1)
            } else {
                Dyadic::zero()
            };
        }
        let shift = usize::try_from(-&self.exponent).expect("floor shift fits usize");
        let (q, r) = self.mantissa.div_rem(&(BigInt::one() << shift));
        let q = if self.mantissa.is_negative() && !r.is_zero() { q - 1 } else { q };
        Dyadic::from_int(q)
    }

    /// Exact conversion to a rational.
    pub fn to_rational(&self) -> BigRational {
        match u64::try_from(self.exponent.abs()) {
            Ok(e) => {
                let pow = BigInt::one() << (e as usize);
                if self.exponent.is_negative() {
                    BigRational::new(self.mantissa.clone(), pow)
                } else {
                    BigRational::from(self.mantissa.clone() * pow)
                }
            }
            Err(_) => panic!("dyadic exponent too large for rational conversion"),
        }
    }

    /// Enclose a rational: the result differs from `q` by less than one ulp
    /// at `prec` bits in the safe direction.
    pub fn from_rational(q: &BigRational, prec: u64, dir: Round) -> Dyadic {
        let num = Dyadic::from_int(q.numer().clone());
        let den = Dyadic::from_int(q.denom().clone());
        num.div(&den, prec, dir)
    }

    /// Approximate f64 view, for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(64, Round::Down);
        let m: f64 = match i128::try_from(r.mantissa.clone()) {
            Ok(v) => v as f64,
            Err(_) => return if self.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY },
        };
        let e: f64 = match i64::try_from(r.exponent.clone()) {
            Ok(v) => v as f64,
            Err(_) => {
                return if r.exponent.is_negative() {
                    0.0
                } else if self.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            }
        };
        m * 2f64.powf(e)
    }

    /// Decimal rendering with `digits` fractional digits, rounded in `dir`.
    pub fn to_decimal(&self, digits: u32, dir: Round) -> String {
        let ten = BigInt::from(10u32).pow(digits);
        let scaled = self.mul(&Dyadic::from_int(ten.clone()));
        let int = match dir {
            Round::Down => scaled.floor(),
            Round::Up => scaled.neg().floor().neg(),
        };
        let v = int.mantissa().clone() << usize::try_from(int.exponent().clone()).unwrap_or(0);
        let neg = v.is_negative();
        let (q, r) = v.abs().div_rem(&ten);
        let frac = r.to_string();
        let pad = "0".repeat(digits as usize - frac.len());
        format!("{}{}.{}{}", if neg { "-" } else { "" }, q, pad, frac)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        let s = self.signum();
        let o = other.signum();
        if s != o {
            return s.cmp(&o);
        }
        if s == 0 {
            return Ordering::Equal;
        }
        // same nonzero sign: compare leading-bit exponents first
        let me = self.magnitude_exponent().unwrap();
        let oe = other.magnitude_exponent().unwrap();
        if me != oe {
            let ord = me.cmp(&oe);
            return if s > 0 { ord } else { ord.reverse() };
        }
        // same magnitude class: align and compare exactly
        let diff = self.sub(other, Round::Down);
        diff.signum().cmp(&0)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn canonical_form() {
        let x = d(8, 0);
        assert_eq!(x.mantissa(), &BigInt::from(1));
        assert_eq!(x.exponent(), &BigInt::from(3));
        assert!(Dyadic::zero().is_zero());
        assert_eq!(Dyadic::zero().exponent(), &BigInt::zero());
    }

    #[test]
    fn ordering() {
        assert!(d(1, -1) < d(1, 0));
        assert!(d(-1, 5) < d(1, -5));
        assert!(d(3, -2) > d(5, -3)); // 0.75 > 0.625
        assert_eq!(d(4, 0), d(1, 2));
    }

    #[test]
    fn exact_arithmetic() {
        assert_eq!(d(3, -2).add(&d(1, -2), Round::Down), d(1, 0));
        assert_eq!(d(5, 0).mul(&d(3, -1)), d(15, -1));
        assert_eq!(d(1, 0).div(&d(4, 0), 64, Round::Down), d(1, -2));
    }

    #[test]
    fn directed_rounding() {
        // 1/3 is not dyadic: down < 1/3 < up
        let lo = d(1, 0).div(&d(3, 0), 16, Round::Down);
        let hi = d(1, 0).div(&d(3, 0), 16, Round::Up);
        assert!(lo < hi);
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        assert!(lo.to_rational() < third);
        assert!(hi.to_rational() > third);
        // width is one ulp
        assert!(hi.sub(&lo, Round::Up) <= Dyadic::pow2(-17));
    }

    #[test]
    fn sqrt_bounds() {
        let two = d(2, 0);
        let lo = two.sqrt(64, Round::Down);
        let hi = two.sqrt(64, Round::Up);
        assert!(lo < hi);
        assert!(lo.mul(&lo) < two);
        assert!(hi.mul(&hi) > two);
        assert_eq!(d(9, 0).sqrt(64, Round::Down), d(3, 0));
        assert_eq!(d(9, 0).sqrt(64, Round::Up), d(3, 0));
    }

    #[test]
    fn floor_values() {
        assert_eq!(d(7, -1).floor(), d(3, 0)); // 3.5 -> 3
        assert_eq!(d(-7, -1).floor(), d(-4, 0)); // -3.5 -> -4
        assert_eq!(d(5, 0).floor(), d(5, 0));
    }

    #[test]
    fn huge_exponents() {
        let big = Dyadic::pow2(1100);
        let tiny = Dyadic::pow2(-1100);
        let prod = big.mul(&tiny);
        assert_eq!(prod, Dyadic::one());
        assert!(big > tiny);
    }

    #[test]
    fn misaligned_add_is_outward() {
        let big = Dyadic::pow2(BigInt::from(1u64 << 40));
        let tiny = Dyadic::pow2(BigInt::from(-(1i64 << 40)));
        let lo = big.add(&tiny, Round::Down);
        let hi = big.add(&tiny, Round::Up);
        assert!(lo <= big);
        assert!(hi > big);
        let lo2 = big.sub(&tiny, Round::Down);
        assert!(lo2 < big);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(d(1, -2).to_decimal(4, Round::Down), "0.2500");
        assert_eq!(d(1, 0).div(&d(3, 0), 128, Round::Down).to_decimal(4, Round::Down), "0.3333");
        assert_eq!(d(1, 0).div(&d(3, 0), 128, Round::Up).to_decimal(4, Round::Up), "0.3334");
        assert_eq!(d(-1, -2).to_decimal(2, Round::Down), "-0.25");
    }
}
