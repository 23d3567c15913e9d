//! The filling criterion: the explicit threshold a total normalized length
//! must clear, and the certified check of a meridian family against it.

use super::BoundsError;
use crate::certify::{eval, VarBox};
use crate::expr::{int, max, rat, var, Expr};
use crate::hypgeom::normalized_length_lower;
use crate::interval::IntervalScalar;

/// A meridian on a cusp torus: its flat geodesic length and its normalized
/// length (flat length over the square root of the torus area).
#[derive(Debug, Clone)]
pub struct MeridianData {
    pub label: String,
    pub flat_length: IntervalScalar,
    pub normalized_length: IntervalScalar,
}

impl MeridianData {
    pub fn new(
        label: impl Into<String>,
        flat_length: IntervalScalar,
        normalized_length: IntervalScalar,
    ) -> Result<MeridianData, BoundsError> {
        if !normalized_length.is_positive() {
            return Err(BoundsError::BadArgument(
                "normalized length must be certified positive".into(),
            ));
        }
        Ok(MeridianData {
            label: label.into(),
            flat_length,
            normalized_length,
        })
    }

    /// Derive the normalized length from the flat length via the area
    /// comparison sqrt(flat / sinh(2 eps0)).
    pub fn from_flat(
        label: impl Into<String>,
        flat_length: IntervalScalar,
        eps0: &IntervalScalar,
        prec: u64,
    ) -> Result<MeridianData, BoundsError> {
        let normalized = normalized_length_lower(&flat_length, eps0, prec)?;
        MeridianData::new(label, flat_length, normalized)
    }
}

fn threshold_expr() -> Expr {
    // 4 * max of the two branches; 11.35 and 11.7 as exact decimals
    let b1 = int(2) * Expr::Pi * int(6771)
        * ((rat(3, 5) * var("e") + rat(59, 400)).cosh()).pow(5)
        / var("e").pow(5)
        + rat(117, 10);
    let b2 = int(2) * Expr::Pi * rat(227, 20)
        / (var("e").pow(2) * var("e").sqrt() * var("j").log())
        + rat(117, 10);
    int(4) * max(b1, b2)
}

/// The explicit filling threshold at margin eps and bilipschitz constant J.
pub fn dehn_filling_threshold(
    eps: &IntervalScalar,
    j: &IntervalScalar,
    prec: u64,
) -> Result<IntervalScalar, BoundsError> {
    let log3 = IntervalScalar::from_int(3).log(prec)?;
    if !eps.is_positive() || eps.hi() > log3.lo() {
        return Err(BoundsError::BadArgument(
            "need 0 < eps <= log 3 certified".into(),
        ));
    }
    if j.lo() <= IntervalScalar::one().hi() {
        return Err(BoundsError::BadArgument("need J > 1 certified".into()));
    }
    let mut b = VarBox::new();
    b.insert("e".into(), eps.clone());
    b.insert("j".into(), j.clone());
    Ok(eval(&threshold_expr(), &b, prec)?)
}

/// Outcome of checking a meridian family against the threshold.
#[derive(Debug, Clone)]
pub struct FillingCheck {
    /// certified: total normalized length clears the threshold
    pub ok: bool,
    /// total normalized length 1 / sum(1/L^2)
    pub total: IntervalScalar,
    pub threshold: IntervalScalar,
    /// total minus threshold
    pub margin: IntervalScalar,
    /// the min L^2 / n shortcut lower bound for the total
    pub shortcut: IntervalScalar,
    /// certified via the shortcut alone
    pub shortcut_ok: bool,
}

pub fn dehn_filling_check(
    meridians: &[MeridianData],
    eps: &IntervalScalar,
    j: &IntervalScalar,
    prec: u64,
) -> Result<FillingCheck, BoundsError> {
    if meridians.is_empty() {
        return Err(BoundsError::BadArgument("no meridians given".into()));
    }
    let threshold = dehn_filling_threshold(eps, j, prec)?;
    let mut inv_sum = IntervalScalar::from_int(0);
    let mut min_sq: Option<IntervalScalar> = None;
    for m in meridians {
        let sq = m.normalized_length.mul(&m.normalized_length, prec);
        inv_sum = inv_sum.add(&sq.recip(prec)?, prec);
        min_sq = Some(match min_sq {
            None => sq,
            Some(prev) => prev.min(&sq),
        });
    }
    let total = inv_sum.recip(prec)?;
    let margin = total.sub(&threshold, prec);
    let n = IntervalScalar::from_int(meridians.len() as i64);
    let shortcut = min_sq.unwrap().div(&n, prec)?;
    Ok(FillingCheck {
        ok: total.lo() >= threshold.hi(),
        shortcut_ok: shortcut.lo() >= threshold.hi(),
        total,
        threshold,
        margin,
        shortcut,
    })
}
