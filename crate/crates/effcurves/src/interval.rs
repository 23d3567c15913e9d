//! Outward-rounded interval arithmetic over dyadic endpoints.
//!
//! The contract for every operation: if `x` lies in the input interval(s),
//! the exact real result lies in the output interval. Elementary functions
//! are computed by argument reduction plus truncated series with an explicit
//! remainder bound folded into the enclosure; monotone extensions then give
//! interval versions from point enclosures.

use crate::dyadic::{Dyadic, Round};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NumError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
}

pub type NumResult<T> = Result<T, NumError>;

/// Guard bits added to the working precision inside series evaluations.
const GUARD: u64 = 32;

/// A closed real interval `[lo, hi]` with certified dyadic endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntervalScalar {
    lo: Dyadic,
    hi: Dyadic,
}

impl IntervalScalar {
    pub fn new(lo: Dyadic, hi: Dyadic) -> IntervalScalar {
        assert!(lo <= hi, "interval endpoints out of order");
        IntervalScalar { lo, hi }
    }

    pub fn point(d: Dyadic) -> IntervalScalar {
        IntervalScalar { lo: d.clone(), hi: d }
    }

    pub fn zero() -> IntervalScalar {
        IntervalScalar::point(Dyadic::zero())
    }

    pub fn one() -> IntervalScalar {
        IntervalScalar::point(Dyadic::one())
    }

    pub fn from_int(n: impl Into<BigInt>) -> IntervalScalar {
        IntervalScalar::point(Dyadic::from_int(n))
    }

    /// Tight dyadic enclosure of a rational at `prec` bits.
    pub fn from_rational(q: &BigRational, prec: u64) -> IntervalScalar {
        IntervalScalar {
            lo: Dyadic::from_rational(q, prec, Round::Down),
            hi: Dyadic::from_rational(q, prec, Round::Up),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo, Round::Up)
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.add(&self.hi, Round::Down).half()
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        &self.lo <= d && d <= &self.hi
    }

    pub fn contains_interval(&self, other: &IntervalScalar) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &IntervalScalar) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &IntervalScalar) -> IntervalScalar {
        IntervalScalar {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Strictly positive everywhere?
    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_nonneg(&self) -> bool {
        !self.lo.is_negative()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    fn round_out(self, prec: u64) -> IntervalScalar {
        IntervalScalar {
            lo: self.lo.round(prec, Round::Down),
            hi: self.hi.round(prec, Round::Up),
        }
    }

    pub fn neg(&self) -> IntervalScalar {
        IntervalScalar { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn abs(&self) -> IntervalScalar {
        if self.lo.is_negative() && self.hi.is_positive() {
            IntervalScalar {
                lo: Dyadic::zero(),
                hi: self.lo.neg().max(self.hi.clone()),
            }
        } else if self.hi.is_negative() || (self.hi.is_zero() && self.lo.is_negative()) {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn add(&self, other: &IntervalScalar, prec: u64) -> IntervalScalar {
        IntervalScalar {
            lo: self.lo.add(&other.lo, Round::Down).round(prec, Round::Down),
            hi: self.hi.add(&other.hi, Round::Up).round(prec, Round::Up),
        }
    }

    pub fn sub(&self, other: &IntervalScalar, prec: u64) -> IntervalScalar {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &IntervalScalar, prec: u64) -> IntervalScalar {
        let products = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        IntervalScalar { lo, hi }.round_out(prec)
    }

    pub fn div(&self, other: &IntervalScalar, prec: u64) -> NumResult<IntervalScalar> {
        if !other.lo.is_positive() && !other.hi.is_negative() {
            return Err(NumError::Domain("division by interval containing zero".into()));
        }
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&other.lo, &other.hi] {
                let down = a.div(b, prec, Round::Down);
                let up = a.div(b, prec, Round::Up);
                lo = Some(match lo {
                    Some(l) => l.min(down),
                    None => down,
                });
                hi = Some(match hi {
                    Some(h) => h.max(up),
                    None => up,
                });
            }
        }
        Ok(IntervalScalar { lo: lo.unwrap(), hi: hi.unwrap() })
    }

    pub fn recip(&self, prec: u64) -> NumResult<IntervalScalar> {
        IntervalScalar::one().div(self, prec)
    }

    /// Integer power, any sign of exponent.
    pub fn powi(&self, n: i64, prec: u64) -> NumResult<IntervalScalar> {
        if n == 0 {
            return Ok(IntervalScalar::one());
        }
        if n < 0 {
            return self.powi(-n, prec)?.recip(prec);
        }
        let n = n as u64;
        if n % 2 == 0 && self.lo.is_negative() && self.hi.is_positive() {
            let m = self.lo.neg().max(self.hi.clone());
            let hi = dyadic_pow(&m, n, prec, Round::Up);
            return Ok(IntervalScalar { lo: Dyadic::zero(), hi });
        }
        // monotone on each sign component
        let (a, b) = if n % 2 == 1 {
            (
                dyadic_pow(&self.lo, n, prec, Round::Down),
                dyadic_pow(&self.hi, n, prec, Round::Up),
            )
        } else if !self.lo.is_negative() {
            (
                dyadic_pow(&self.lo, n, prec, Round::Down),
                dyadic_pow(&self.hi, n, prec, Round::Up),
            )
        } else {
            // both endpoints <= 0, even power: decreasing
            (
                dyadic_pow(&self.hi, n, prec, Round::Down),
                dyadic_pow(&self.lo, n, prec, Round::Up),
            )
        };
        Ok(IntervalScalar { lo: a, hi: b })
    }

    pub fn sqrt(&self, prec: u64) -> NumResult<IntervalScalar> {
        if self.lo.is_negative() {
            return Err(NumError::Domain("sqrt of interval below zero".into()));
        }
        Ok(IntervalScalar {
            lo: self.lo.sqrt(prec, Round::Down),
            hi: self.hi.sqrt(prec, Round::Up),
        })
    }

    pub fn floor(&self) -> IntervalScalar {
        IntervalScalar { lo: self.lo.floor(), hi: self.hi.floor() }
    }

    pub fn min(&self, other: &IntervalScalar) -> IntervalScalar {
        IntervalScalar {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
        }
    }

    pub fn max(&self, other: &IntervalScalar) -> IntervalScalar {
        IntervalScalar {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn exp(&self, prec: u64) -> NumResult<IntervalScalar> {
        let lo = exp_point(&self.lo, prec)?;
        let hi = exp_point(&self.hi, prec)?;
        Ok(IntervalScalar { lo: lo.lo, hi: hi.hi })
    }

    pub fn log(&self, prec: u64) -> NumResult<IntervalScalar> {
        if !self.lo.is_positive() {
            return Err(NumError::Domain("log of interval touching zero or below".into()));
        }
        let lo = log_point(&self.lo, prec)?;
        let hi = log_point(&self.hi, prec)?;
        Ok(IntervalScalar { lo: lo.lo, hi: hi.hi })
    }

    pub fn log2(&self, prec: u64) -> NumResult<IntervalScalar> {
        if !self.lo.is_positive() {
            return Err(NumError::Domain("log2 of interval touching zero or below".into()));
        }
        // exact for exact powers of two
        if self.is_point() && self.lo.mantissa() == &BigInt::from(1) {
            return Ok(IntervalScalar::point(Dyadic::from_int(self.lo.exponent().clone())));
        }
        let wp = prec + GUARD;
        self.log(wp)?.div(&ln2(wp), prec)
    }

    pub fn sinh(&self, prec: u64) -> NumResult<IntervalScalar> {
        let lo = sinh_point(&self.lo, prec)?;
        let hi = sinh_point(&self.hi, prec)?;
        Ok(IntervalScalar { lo: lo.lo, hi: hi.hi })
    }

    pub fn cosh(&self, prec: u64) -> NumResult<IntervalScalar> {
        let a = cosh_point(&self.lo, prec)?;
        let b = cosh_point(&self.hi, prec)?;
        if self.lo.is_negative() && self.hi.is_positive() {
            Ok(IntervalScalar { lo: Dyadic::one(), hi: a.hi.max(b.hi) })
        } else if self.hi.is_negative() || self.hi.is_zero() {
            Ok(IntervalScalar { lo: b.lo, hi: a.hi })
        } else {
            Ok(IntervalScalar { lo: a.lo, hi: b.hi })
        }
    }

    pub fn asinh(&self, prec: u64) -> NumResult<IntervalScalar> {
        let lo = asinh_point(&self.lo, prec)?;
        let hi = asinh_point(&self.hi, prec)?;
        Ok(IntervalScalar { lo: lo.lo, hi: hi.hi })
    }

    pub fn acosh(&self, prec: u64) -> NumResult<IntervalScalar> {
        if self.lo < Dyadic::one() {
            return Err(NumError::Domain("acosh of interval below one".into()));
        }
        let lo = acosh_point(&self.lo, prec)?;
        let hi = acosh_point(&self.hi, prec)?;
        Ok(IntervalScalar { lo: lo.lo, hi: hi.hi })
    }

    /// Certified enclosure string: `[lo, hi]` in decimal at `digits` places.
    pub fn to_enclosure_string(&self, digits: u32) -> String {
        format!(
            "[{}, {}]",
            self.lo.to_decimal(digits, Round::Down),
            self.hi.to_decimal(digits, Round::Up)
        )
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.lo.to_f64(), self.hi.to_f64())
    }
}

fn dyadic_pow(base: &Dyadic, n: u64, prec: u64, dir: Round) -> Dyadic {
    // repeated squaring with directed rounding at each step; the direction
    // is preserved because all intermediates here are nonnegative except a
    // possibly negative odd-power chain, which we reduce to sign * |base|^n
    let neg = base.is_negative() && n % 2 == 1;
    let mag = base.abs();
    let dir_mag = if neg { dir.flip() } else { dir };
    let wp = prec + 8;
    let mut acc = Dyadic::one();
    let mut sq = mag;
    let mut k = n;
    loop {
        if k % 2 == 1 {
            acc = acc.mul(&sq).round(wp, dir_mag);
        }
        k /= 2;
        if k == 0 {
            break;
        }
        sq = sq.mul(&sq).round(wp, dir_mag);
    }
    let acc = acc.round(prec, dir_mag);
    if neg {
        acc.neg()
    } else {
        acc
    }
}

fn constant_cache() -> &'static Mutex<HashMap<(u8, u64), IntervalScalar>> {
    static CACHE: OnceLock<Mutex<HashMap<(u8, u64), IntervalScalar>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Certified enclosure of log 2 at `prec` bits, from log 2 = sum 1/(k 2^k).
pub fn ln2(prec: u64) -> IntervalScalar {
    if let Some(v) = constant_cache().lock().unwrap().get(&(0, prec)) {
        return v.clone();
    }
    let wp = prec + GUARD;
    let mut sum = IntervalScalar::zero();
    let mut k: u64 = 1;
    loop {
        let term_num = Dyadic::pow2(-(k as i64));
        let term = IntervalScalar::point(term_num)
            .div(&IntervalScalar::from_int(k), wp)
            .expect("nonzero k");
        sum = sum.add(&term, wp);
        // tail sum_{j>k} 1/(j 2^j) <= 1/((k+1) 2^k)
        if k as u64 >= wp {
            let tail = Dyadic::pow2(-(k as i64));
            sum = IntervalScalar::new(sum.lo, sum.hi.add(&tail, Round::Up));
            break;
        }
        k += 1;
    }
    let out = sum.round_out(prec);
    constant_cache().lock().unwrap().insert((0, prec), out.clone());
    out
}

/// Certified enclosure of pi at `prec` bits (Machin's formula).
pub fn pi(prec: u64) -> IntervalScalar {
    if let Some(v) = constant_cache().lock().unwrap().get(&(1, prec)) {
        return v.clone();
    }
    let wp = prec + GUARD;
    let a = atan_inv(5, wp);
    let b = atan_inv(239, wp);
    let out = a
        .mul(&IntervalScalar::from_int(16), wp)
        .sub(&b.mul(&IntervalScalar::from_int(4), wp), wp)
        .round_out(prec);
    constant_cache().lock().unwrap().insert((1, prec), out.clone());
    out
}

/// atan(1/q) for integer q >= 2, alternating Gregory series with the first
/// omitted term as tail bound.
fn atan_inv(q: u32, wp: u64) -> IntervalScalar {
    let qi = IntervalScalar::from_int(q);
    let q2 = qi.mul(&qi, wp);
    let mut power = qi.recip(wp).expect("q nonzero"); // 1/q^(2k+1)
    let mut sum = IntervalScalar::zero();
    let mut k: u64 = 0;
    loop {
        let term = power
            .div(&IntervalScalar::from_int(2 * k + 1), wp)
            .expect("odd denominator");
        if k % 2 == 0 {
            sum = sum.add(&term, wp);
        } else {
            sum = sum.sub(&term, wp);
        }
        power = power.div(&q2, wp).expect("q^2 nonzero");
        let next = power
            .div(&IntervalScalar::from_int(2 * k + 3), wp)
            .expect("odd denominator");
        if next.hi().magnitude_exponent().map_or(true, |e| e < BigInt::from(-((wp + 2) as i64))) {
            // alternating series: error within +/- next term
            let pad = next.hi().clone();
            sum = IntervalScalar::new(
                sum.lo().sub(&pad, Round::Down),
                sum.hi().add(&pad, Round::Up),
            );
            return sum;
        }
        k += 1;
    }
}

/// Enclosure of exp(d).
pub fn exp_point(d: &Dyadic, prec: u64) -> NumResult<IntervalScalar> {
    if d.is_zero() {
        return Ok(IntervalScalar::one());
    }
    if let Some(me) = d.magnitude_exponent() {
        if me > BigInt::from(40) {
            return Err(NumError::PrecisionExhausted(
                "exp argument magnitude above 2^40".into(),
            ));
        }
    }
    let arg_bits: u64 = 48;
    let wp = prec + GUARD + arg_bits;
    // n = nearest integer to d / log 2
    let l2 = ln2(wp);
    let n = d
        .div(l2.lo(), wp, Round::Down)
        .add(&Dyadic::new(BigInt::from(1), -1), Round::Down)
        .floor();
    let n_int = n.to_rational().to_integer();
    // r = d - n*log2, |r| <= 0.5*log2 + slack
    let r = IntervalScalar::point(d.clone()).sub(&l2.mul(&IntervalScalar::point(n), wp), wp);
    let series = exp_series(&r, wp);
    // exp(d) = exp(r) * 2^n
    let p2 = Dyadic::pow2(n_int);
    let out = series.mul(&IntervalScalar::point(p2), wp);
    Ok(out.round_out(prec))
}

/// exp on a small interval (|r| <= 1) by Taylor series with tail bound.
fn exp_series(r: &IntervalScalar, wp: u64) -> IntervalScalar {
    let mut sum = IntervalScalar::one();
    let mut term = IntervalScalar::one();
    let mut k: u64 = 1;
    loop {
        term = term
            .mul(r, wp)
            .div(&IntervalScalar::from_int(k), wp)
            .expect("k nonzero");
        sum = sum.add(&term, wp);
        let tmax = term.lo().abs().max(term.hi().abs());
        if tmax.magnitude_exponent().map_or(true, |e| e < BigInt::from(-((wp + 2) as i64))) && k > 2
        {
            // |tail| <= |term_k| * sum_{j>=1} (1/2)^j = |term_k| for |r| <= 1, k >= 1
            let pad = tmax;
            return IntervalScalar::new(
                sum.lo().sub(&pad, Round::Down),
                sum.hi().add(&pad, Round::Up),
            );
        }
        k += 1;
    }
}

/// Enclosure of log(d) for d > 0.
pub fn log_point(d: &Dyadic, prec: u64) -> NumResult<IntervalScalar> {
    if !d.is_positive() {
        return Err(NumError::Domain("log of nonpositive value".into()));
    }
    let wp = prec + GUARD;
    let bits = d.precision_bits();
    let mut k = d.exponent().clone() + BigInt::from(bits) - 1;
    // m in [1, 2)
    let mut m = Dyadic::new(d.mantissa().clone(), 1 - (bits as i64));
    // keep the series argument small: push m into [0.75, 1.5)
    let threshold = Dyadic::new(BigInt::from(3), -1);
    if m >= threshold {
        m = m.half();
        k += 1;
    }
    let l2 = ln2(wp);
    let k_dy = IntervalScalar::point(Dyadic::from_int(k));
    let base = l2.mul(&k_dy, wp);
    if m == Dyadic::one() {
        return Ok(base.round_out(prec));
    }
    // log m = 2 atanh(t), t = (m-1)/(m+1), |t| <= 1/5
    let one = IntervalScalar::one();
    let mi = IntervalScalar::point(m);
    let t = mi.sub(&one, wp).div(&mi.add(&one, wp), wp)?;
    let t2 = t.mul(&t, wp);
    let mut sum = t.clone();
    let mut power = t.clone();
    let mut k2: u64 = 1;
    loop {
        power = power.mul(&t2, wp);
        let term = power
            .div(&IntervalScalar::from_int(2 * k2 + 1), wp)
            .expect("odd denominator");
        sum = sum.add(&term, wp);
        let tmax = term.lo().abs().max(term.hi().abs());
        if tmax.magnitude_exponent().map_or(true, |e| e < BigInt::from(-((wp + 2) as i64))) {
            // geometric tail with ratio t^2 <= 1/25: tail <= term * 1/24 * ... <= term
            let pad = tmax;
            sum = IntervalScalar::new(
                sum.lo().sub(&pad, Round::Down),
                sum.hi().add(&pad, Round::Up),
            );
            break;
        }
        k2 += 1;
    }
    let out = base.add(&sum.mul(&IntervalScalar::from_int(2), wp), wp);
    Ok(out.round_out(prec))
}

/// Enclosure of sinh(d).
pub fn sinh_point(d: &Dyadic, prec: u64) -> NumResult<IntervalScalar> {
    if d.is_zero() {
        return Ok(IntervalScalar::zero());
    }
    if d.is_negative() {
        return Ok(sinh_point(&d.neg(), prec)?.neg());
    }
    let wp = prec + GUARD;
    if d <= &Dyadic::one() {
        // Taylor: x + x^3/3! + ... ; tail <= term * x^2 <= term for x <= 1
        let x = IntervalScalar::point(d.clone());
        let x2 = x.mul(&x, wp);
        let mut term = x.clone();
        let mut sum = x;
        let mut k: u64 = 1;
        loop {
            term = term
                .mul(&x2, wp)
                .div(&IntervalScalar::from_int((2 * k) * (2 * k + 1)), wp)
                .expect("factorial step nonzero");
            sum = sum.add(&term, wp);
            let tmax = term.hi().abs();
            if tmax
                .magnitude_exponent()
                .map_or(true, |e| e < BigInt::from(-((wp + 2) as i64)))
            {
                let pad = tmax;
                return Ok(IntervalScalar::new(
                    sum.lo().sub(&pad, Round::Down),
                    sum.hi().add(&pad, Round::Up),
                )
                .round_out(prec));
            }
            k += 1;
        }
    }
    let e = exp_point(d, wp)?;
    let out = e.sub(&e.recip(wp)?, wp).mul(&IntervalScalar::point(Dyadic::new(BigInt::from(1), -1)), wp);
    Ok(out.round_out(prec))
}

/// Enclosure of cosh(d).
pub fn cosh_point(d: &Dyadic, prec: u64) -> NumResult<IntervalScalar> {
    let wp = prec + GUARD;
    let e = exp_point(&d.abs(), wp)?;
    let out = e.add(&e.recip(wp)?, wp).mul(&IntervalScalar::point(Dyadic::new(BigInt::from(1), -1)), wp);
    Ok(out.round_out(prec))
}

/// Enclosure of asinh(d) = log(d + sqrt(d^2 + 1)).
pub fn asinh_point(d: &Dyadic, prec: u64) -> NumResult<IntervalScalar> {
    if d.is_zero() {
        return Ok(IntervalScalar::zero());
    }
    if d.is_negative() {
        return Ok(asinh_point(&d.neg(), prec)?.neg());
    }
    let wp = prec + GUARD;
    let x = IntervalScalar::point(d.clone());
    let inner = x.mul(&x, wp).add(&IntervalScalar::one(), wp).sqrt(wp)?;
    let arg = x.add(&inner, wp);
    let out = arg.log(wp)?;
    Ok(out.round_out(prec))
}

/// Enclosure of acosh(d) = log(d + sqrt(d^2 - 1)) for d >= 1.
pub fn acosh_point(d: &Dyadic, prec: u64) -> NumResult<IntervalScalar> {
    if d < &Dyadic::one() {
        return Err(NumError::Domain("acosh argument below one".into()));
    }
    let wp = prec + GUARD;
    // d^2 - 1 is exact in dyadic arithmetic, so the enclosure stays tight
    // (and exactly zero) at the branch point d = 1
    let sq = d.mul(d).sub(&Dyadic::one(), Round::Down);
    let inner = IntervalScalar::point(sq).sqrt(wp)?;
    let arg = IntervalScalar::point(d.clone()).add(&inner, wp);
    let out = arg.log(wp)?;
    Ok(out.round_out(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    fn assert_encloses(iv: &IntervalScalar, x: f64) {
        // f64 sanity oracle: allow a few ulps of slack since libm results
        // are not correctly rounded
        let (lo, hi) = iv.to_f64_pair();
        let slack = 4.0 * f64::EPSILON * x.abs().max(1.0);
        assert!(lo - slack <= x && x <= hi + slack, "{x} not in [{lo}, {hi}]");
    }

    fn rel_width_below(iv: &IntervalScalar, log2_bound: i64) -> bool {
        let w = iv.width();
        if w.is_zero() {
            return true;
        }
        let scale = iv.lo().abs().max(iv.hi().abs());
        let rel = w.div(&scale, 64, Round::Up);
        rel.magnitude_exponent().map_or(true, |e| e < BigInt::from(log2_bound))
    }

    #[test]
    fn ln2_value() {
        let v = ln2(128);
        assert_encloses(&v, std::f64::consts::LN_2);
        assert!(rel_width_below(&v, -120));
    }

    #[test]
    fn pi_value() {
        let v = pi(128);
        assert_encloses(&v, std::f64::consts::PI);
        assert!(rel_width_below(&v, -120));
    }

    #[test]
    fn exp_values() {
        let e1 = exp_point(&Dyadic::one(), 128).unwrap();
        assert_encloses(&e1, std::f64::consts::E);
        assert!(rel_width_below(&e1, -120));
        let big = exp_point(&d(10, 0), 128).unwrap();
        assert_encloses(&big, 22026.465794806718);
        let neg = exp_point(&d(-3, 0), 128).unwrap();
        assert_encloses(&neg, (-3f64).exp());
        assert_eq!(exp_point(&Dyadic::zero(), 128).unwrap(), IntervalScalar::one());
    }

    #[test]
    fn log_values() {
        let l = log_point(&d(10, 0), 128).unwrap();
        assert_encloses(&l, 10f64.ln());
        assert!(rel_width_below(&l, -120));
        // exact zero at 1
        assert_eq!(log_point(&Dyadic::one(), 128).unwrap(), IntervalScalar::zero());
        // log of power of two is k * ln2
        let l8 = log_point(&d(8, 0), 128).unwrap();
        assert_encloses(&l8, 8f64.ln());
        assert!(log_point(&Dyadic::zero(), 128).is_err());
    }

    #[test]
    fn log_exp_roundtrip() {
        let x = d(7, -2); // 1.75
        let e = exp_point(&x, 192).unwrap();
        let back = e.log(128).unwrap();
        assert!(back.contains(&x), "{back:?}");
        assert!(rel_width_below(&back, -100));
    }

    #[test]
    fn hyperbolic_values() {
        let s = sinh_point(&Dyadic::one(), 128).unwrap();
        assert_encloses(&s, 1f64.sinh());
        assert!(rel_width_below(&s, -118));
        let s_small = sinh_point(&d(1, -30), 128).unwrap();
        assert_encloses(&s_small, (2f64.powi(-30)).sinh());
        assert!(rel_width_below(&s_small, -100));
        let c = cosh_point(&d(3, 0), 128).unwrap();
        assert_encloses(&c, 3f64.cosh());
        assert_eq!(sinh_point(&Dyadic::zero(), 128).unwrap(), IntervalScalar::zero());
    }

    #[test]
    fn inverse_hyperbolic_values() {
        let a = asinh_point(&d(1, -1), 128).unwrap();
        assert_encloses(&a, 0.5f64.asinh());
        let b = acosh_point(&d(2, 0), 128).unwrap();
        assert_encloses(&b, 2f64.acosh());
        assert_eq!(acosh_point(&Dyadic::one(), 128).unwrap(), IntervalScalar::zero());
        assert!(acosh_point(&d(1, -1), 128).is_err());
        // asinh(sinh(x)) contains x
        let x = d(5, -2);
        let s = sinh_point(&x, 192).unwrap();
        let back = s.asinh(128).unwrap();
        assert!(back.contains(&x));
    }

    #[test]
    fn interval_ops_enclose() {
        let a = IntervalScalar::new(d(1, 0), d(2, 0));
        let b = IntervalScalar::new(d(-1, 0), d(3, 0));
        let p = a.mul(&b, 64);
        assert!(p.contains(&d(-2, 0)));
        assert!(p.contains(&d(6, 0)));
        let q = b.div(&a, 64).unwrap();
        assert!(q.contains(&d(-1, 0)));
        assert!(q.contains(&d(3, 0)));
        assert!(a.div(&b, 64).is_err());
    }

    #[test]
    fn powi_cases() {
        let a = IntervalScalar::new(d(-2, 0), d(3, 0));
        let sq = a.powi(2, 64).unwrap();
        assert_eq!(sq.lo(), &Dyadic::zero());
        assert_eq!(sq.hi(), &d(9, 0));
        let cube = a.powi(3, 64).unwrap();
        assert_eq!(cube.lo(), &d(-8, 0));
        assert_eq!(cube.hi(), &d(27, 0));
        let neg = IntervalScalar::new(d(-3, 0), d(-2, 0));
        let nsq = neg.powi(2, 64).unwrap();
        assert_eq!(nsq.lo(), &d(4, 0));
        assert_eq!(nsq.hi(), &d(9, 0));
        let inv = IntervalScalar::point(d(2, 0)).powi(-2, 64).unwrap();
        assert!(inv.contains(&d(1, -2)));
    }

    #[test]
    fn huge_power_products() {
        // 2^1095 / (1/10)^200 = 2^1095 * 10^200 evaluated tightly
        let two = IntervalScalar::point(Dyadic::pow2(1095));
        let tenth = IntervalScalar::from_rational(
            &BigRational::new(BigInt::from(1), BigInt::from(10)),
            256,
        );
        let denom = tenth.powi(200, 256).unwrap();
        let v = two.div(&denom, 256).unwrap();
        assert!(v.is_positive());
        assert!(rel_width_below(&v, -200));
    }

    #[test]
    fn log2_exact_powers() {
        let v = IntervalScalar::point(Dyadic::pow2(385)).log2(128).unwrap();
        assert_eq!(v, IntervalScalar::from_int(385));
    }

    #[test]
    fn cosh_spanning_zero() {
        let a = IntervalScalar::new(d(-1, 0), d(2, 0));
        let c = a.cosh(128).unwrap();
        assert_eq!(c.lo(), &Dyadic::one());
        assert_encloses(&c, 2f64.cosh());
    }

    #[test]
    fn enclosure_rendering() {
        let v = IntervalScalar::new(d(1, 0), d(2, 0));
        assert_eq!(v.to_enclosure_string(2), "[1.00, 2.00]");
    }
}
