//! The constant ledger: exact base-2 / eps0 monomials for the power-law
//! constants, certified interval values for the log-bearing ones, and the
//! epsilon thresholds used by the length and projection bounds.
//!
//! Two of the constants are published with conflicting values, so every
//! entry that depends on them takes a [`Variant`] selector. The default is
//! the value given where the constant is introduced; the alternate is the
//! value used in the final assembly.

use super::BoundsError;
use crate::certify::{eval, VarBox};
use crate::expr::{int, rat, var, Expr};
use crate::hypgeom::MargulisEps;
use crate::interval::IntervalScalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Which published value of c1, c2, c3 to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Values from the statements introducing the constants.
    Lemma,
    /// Alternate values used in the final assembly of the constants.
    Sec76,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Lemma => "lemma",
            Variant::Sec76 => "sec76",
        }
    }
}

/// Exact monomial `coeff * 2^pow2 * eps0^eps_pow` with eps0 treated as a
/// formal indeterminate. The coefficient carries no factor of 2, so the
/// representation is canonical and identities are decided by comparing the
/// three fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    coeff: BigRational,
    pow2: i64,
    eps_pow: i64,
}

fn two() -> BigInt {
    BigInt::from(2)
}

impl Monomial {
    pub fn new(coeff: BigRational, pow2: i64, eps_pow: i64) -> Monomial {
        assert!(!coeff.is_zero(), "monomials are nonzero");
        let mut numer = coeff.numer().clone();
        let mut denom = coeff.denom().clone();
        let mut pow2 = pow2;
        while (&numer % two()).is_zero() {
            numer /= two();
            pow2 += 1;
        }
        while (&denom % two()).is_zero() {
            denom /= two();
            pow2 -= 1;
        }
        Monomial {
            coeff: BigRational::new(numer, denom),
            pow2,
            eps_pow,
        }
    }

    pub fn from_int(n: i64) -> Monomial {
        Monomial::new(BigRational::from_integer(BigInt::from(n)), 0, 0)
    }

    /// `2^pow2 * eps0^eps_pow`.
    pub fn power(pow2: i64, eps_pow: i64) -> Monomial {
        Monomial::new(BigRational::one(), pow2, eps_pow)
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn pow2(&self) -> i64 {
        self.pow2
    }

    pub fn eps_pow(&self) -> i64 {
        self.eps_pow
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(
            &self.coeff * &other.coeff,
            self.pow2 + other.pow2,
            self.eps_pow + other.eps_pow,
        )
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial::new(
            &self.coeff / &other.coeff,
            self.pow2 - other.pow2,
            self.eps_pow - other.eps_pow,
        )
    }

    /// Exact rational value at a rational eps0.
    pub fn eval_exact(&self, eps0: &BigRational) -> BigRational {
        &self.coeff * rat_pow2(self.pow2) * rat_pow(eps0, self.eps_pow)
    }

    pub fn eval(&self, eps0: &MargulisEps, prec: u64) -> IntervalScalar {
        IntervalScalar::from_rational(&self.eval_exact(eps0.value()), prec)
    }

    /// Expression in the variable `eps0`.
    pub fn as_expr(&self) -> Expr {
        let c = Expr::Const(&self.coeff * rat_pow2(self.pow2));
        if self.eps_pow == 0 {
            c
        } else if self.eps_pow > 0 {
            c * var("eps0").pow(self.eps_pow)
        } else {
            c / var("eps0").pow(-self.eps_pow)
        }
    }

    /// Canonical rendering like `2^1095/eps0^200`.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        if !self.coeff.is_one() {
            parts.push(self.coeff.to_string());
        }
        if self.pow2 != 0 {
            parts.push(format!("2^{}", self.pow2));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        let head = parts.join("*");
        match self.eps_pow {
            0 => head,
            e if e > 0 => format!("{head}*eps0^{e}"),
            e => format!("{head}/eps0^{}", -e),
        }
    }
}

fn rat_pow2(e: i64) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

fn rat_pow(q: &BigRational, e: i64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= q;
    }
    if e >= 0 {
        acc
    } else {
        acc.recip()
    }
}

/// All named constants of the length-versus-projection bounds, with the
/// power-law entries exact and the log-bearing entries certified.
#[derive(Debug, Clone)]
pub struct ConstantLedger {
    eps0: MargulisEps,
    prec: u64,
    c2_lemma: IntervalScalar,
    c2_sec76: IntervalScalar,
    c4: IntervalScalar,
    b: IntervalScalar,
    k: IntervalScalar,
}

/// Note attached wherever the thin-part scale of the efficiency formula is
/// used: the displayed denominator scales by 2^43 where the thick-to-thick
/// threshold scales by 2^37, i.e. it equals that threshold divided by 64.
pub const EFFICIENCY_SCALE_NOTE: &str =
    "displayed thin-part scale 2^43 equals the 2^37 transition threshold divided by 64";

pub fn make_ledger(eps0: BigRational, prec: u64) -> Result<ConstantLedger, BoundsError> {
    let eps0 = MargulisEps::new(eps0)
        .map_err(|e| BoundsError::InvalidEps0(e.to_string()))?;
    ConstantLedger::from_eps(eps0, prec)
}

impl ConstantLedger {
    pub fn from_eps(eps0: MargulisEps, prec: u64) -> Result<ConstantLedger, BoundsError> {
        let c1_lemma = Monomial::power(385, -60).eval(&eps0, prec);
        let c1_sec76 = Monomial::power(109, -60).eval(&eps0, prec);
        let c2_lemma = IntervalScalar::from_int(570).mul(&c1_lemma.log2(prec)?, prec);
        let c2_sec76 = IntervalScalar::from_int(230).mul(&c1_sec76.log2(prec)?, prec);
        let mut box0 = VarBox::new();
        box0.insert("eps0".into(), eps0.as_interval(prec));
        let c4 = eval(&(int(40) * (int(64) / var("eps0")).log()), &box0, prec)?;
        let b = IntervalScalar::from_int(1040).mul(&c1_lemma.log2(prec)?, prec);
        let a = Monomial::power(1095, -200).eval(&eps0, prec);
        let c = Monomial::power(331, -160).eval(&eps0, prec);
        let k = IntervalScalar::from_int(2)
            .mul(&a, prec)
            .add(&IntervalScalar::from_int(3).mul(&b, prec), prec)
            .add(&IntervalScalar::from_int(2).mul(&c, prec), prec);
        let led = ConstantLedger { eps0, prec, c2_lemma, c2_sec76, c4, b, k };
        // the thresholds are nested by exact factors, so positivity plus the
        // comparison at |chi| = 1 certifies the ordering for every |chi| >= 1
        let e1 = led.eps1(1)?;
        if !e1.is_positive() || e1.hi() >= led.eps0_interval().lo() {
            return Err(BoundsError::InvalidEps0(
                "threshold ordering eps1 < eps0 failed to certify".into(),
            ));
        }
        Ok(led)
    }

    pub fn eps0(&self) -> &MargulisEps {
        &self.eps0
    }

    pub fn eps0_interval(&self) -> IntervalScalar {
        self.eps0.as_interval(self.prec)
    }

    pub fn precision(&self) -> u64 {
        self.prec
    }

    pub fn c1(&self, v: Variant) -> Monomial {
        match v {
            Variant::Lemma => Monomial::power(385, -60),
            Variant::Sec76 => Monomial::power(109, -60),
        }
    }

    pub fn c3(&self, v: Variant) -> Monomial {
        match v {
            Variant::Lemma => Monomial::power(-870, 150),
            Variant::Sec76 => Monomial::power(-270, 150),
        }
    }

    pub fn c5(&self) -> Monomial {
        Monomial::power(-868, 150)
    }

    pub fn c6(&self) -> Monomial {
        Monomial::power(223, -50)
    }

    pub fn c7(&self) -> Monomial {
        Monomial::power(60, 10)
    }

    /// Threshold coefficient of the distance hypothesis.
    pub fn a(&self) -> Monomial {
        Monomial::power(1095, -200)
    }

    /// Numerator coefficient of the length bound.
    pub fn c(&self) -> Monomial {
        Monomial::power(331, -160)
    }

    pub fn c2(&self, v: Variant) -> &IntervalScalar {
        match v {
            Variant::Lemma => &self.c2_lemma,
            Variant::Sec76 => &self.c2_sec76,
        }
    }

    pub fn c4(&self) -> &IntervalScalar {
        &self.c4
    }

    /// Threshold coefficient of the log term.
    pub fn b(&self) -> &IntervalScalar {
        &self.b
    }

    /// Coefficient of the fibered-face bound: 2a + 3b + 2c.
    pub fn k(&self) -> &IntervalScalar {
        &self.k
    }

    /// Thin-part threshold eps0^10 / (2^37 pi^8 |chi|^16).
    pub fn eps1(&self, abs_chi: u64) -> Result<IntervalScalar, BoundsError> {
        let mut b = VarBox::new();
        b.insert("eps0".into(), self.eps0_interval());
        b.insert("chi".into(), IntervalScalar::from_int(abs_chi as i64));
        let e = var("eps0").pow(10)
            / (int(2).pow(37) * Expr::Pi.pow(8) * var("chi").pow(16));
        Ok(eval(&e, &b, self.prec)?)
    }

    /// Same formula as [`Self::eps1`], evaluated for the subsurface.
    pub fn eps_y(&self, abs_chi_y: u64) -> Result<IntervalScalar, BoundsError> {
        self.eps1(abs_chi_y)
    }

    pub fn eps3(&self, abs_chi: u64) -> Result<IntervalScalar, BoundsError> {
        let mut b = VarBox::new();
        b.insert("e1".into(), self.eps1(abs_chi)?);
        Ok(eval(&(var("e1") * rat(1, 4)), &b, self.prec)?)
    }

    pub fn eps2(&self, abs_chi: u64) -> Result<IntervalScalar, BoundsError> {
        let mut b = VarBox::new();
        b.insert("e3".into(), self.eps3(abs_chi)?);
        Ok(eval(&(var("e3") * rat(1, 8)), &b, self.prec)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tenth() -> BigRational {
        BigRational::new(BigInt::from(1), BigInt::from(10))
    }

    #[test]
    fn monomials_normalize_and_compose() {
        // 4 * c6 / c3 = 2^1095 / eps0^200
        let four = Monomial::from_int(4);
        let c6 = Monomial::power(223, -50);
        let c3 = Monomial::power(-870, 150);
        let q = four.mul(&c6).div(&c3);
        assert_eq!(q, Monomial::power(1095, -200));
        assert_eq!(q.render(), "2^1095/eps0^200");
        // exact value at eps0 = 1/10 is 2^1095 * 10^200
        let v = q.eval_exact(&tenth());
        let expect = BigRational::from_integer(
            (BigInt::one() << 1095) * BigInt::from(10).pow(200),
        );
        assert_eq!(v, expect);
        assert_eq!(Monomial::new(BigRational::new(12.into(), 10.into()), 0, 1).render(), "3/5*2^1*eps0^1");
    }

    #[test]
    fn ledger_rejects_bad_eps0_and_orders_thresholds() {
        assert!(matches!(
            make_ledger(BigRational::new(3.into(), 10.into()), 64),
            Err(BoundsError::InvalidEps0(_))
        ));
        let led = make_ledger(tenth(), 64).unwrap();
        for chi in [1u64, 2, 10] {
            let e1 = led.eps1(chi).unwrap();
            let e3 = led.eps3(chi).unwrap();
            let e2 = led.eps2(chi).unwrap();
            assert!(e2.is_positive());
            assert!(e2.hi() < e3.lo());
            assert!(e3.hi() < e1.lo());
            assert!(e1.hi() < led.eps0_interval().lo());
        }
        // decreasing in |chi|
        assert!(led.eps1(2).unwrap().hi() < led.eps1(1).unwrap().lo());
        // log-bearing entries are positive and variant-ordered
        assert!(led.c2(Variant::Sec76).hi() < led.c2(Variant::Lemma).lo());
        assert!(led.c4().is_positive());
        assert!(led.b().hi() > led.c2(Variant::Lemma).hi());
        assert!(led.k().is_positive());
        // b at eps0 = 1/10: 1040 * log2(2^385 * 10^60) ~ 1040 * 584.3
        let (blo, bhi) = led.b().to_f64_pair();
        assert!(blo > 607_000.0 && bhi < 608_500.0, "{blo} {bhi}");
    }
}
