//! Interval evaluation of expressions over variable boxes and a sound
//! nonnegativity certifier based on deterministic domain bisection.
//!
//! Two facts make boundary-tight inequalities (equality attained at a box
//! corner) certifiable here: point special cases in the interval layer are
//! exact (exp 0, log 1, sqrt 0), and a monotonicity analysis of the symbolic
//! derivative over extended intervals (endpoints may be infinite) can pin a
//! variable to the face where the minimum is attained before re-evaluating.

use crate::dyadic::{Dyadic, Round};
use crate::expr::{Expr, Func, Inequality};
use crate::interval::{
    acosh_point, asinh_point, cosh_point, exp_point, log_point, pi, sinh_point, IntervalScalar,
    NumError,
};
use std::collections::BTreeMap;
use thiserror::Error;

/// Variable domains for evaluation and certification.
pub type VarBox = BTreeMap<String, IntervalScalar>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("{source} (in sub-box {})", render_box(.at))]
    Domain {
        source: NumError,
        at: VarBox,
    },
    #[error("unbound variable '{0}'")]
    Unbound(String),
}

fn render_box(b: &VarBox) -> String {
    let parts: Vec<String> = b
        .iter()
        .map(|(k, v)| format!("{k} in {}", v.to_enclosure_string(6)))
        .collect();
    parts.join(", ")
}

/// Certified enclosure of `e` over all points of `b`.
pub fn eval(e: &Expr, b: &VarBox, prec: u64) -> Result<IntervalScalar, EvalError> {
    let wrap = |r: Result<IntervalScalar, NumError>| {
        r.map_err(|source| EvalError::Domain { source, at: b.clone() })
    };
    Ok(match e {
        Expr::Const(q) => IntervalScalar::from_rational(q, prec),
        Expr::Pi => pi(prec),
        Expr::Var(v) => b
            .get(v)
            .cloned()
            .ok_or_else(|| EvalError::Unbound(v.clone()))?,
        Expr::Add(x, y) => eval(x, b, prec)?.add(&eval(y, b, prec)?, prec),
        Expr::Sub(x, y) => eval(x, b, prec)?.sub(&eval(y, b, prec)?, prec),
        Expr::Mul(x, y) => eval(x, b, prec)?.mul(&eval(y, b, prec)?, prec),
        Expr::Div(x, y) => wrap(eval(x, b, prec)?.div(&eval(y, b, prec)?, prec))?,
        Expr::Neg(x) => eval(x, b, prec)?.neg(),
        Expr::Pow(x, n) => wrap(eval(x, b, prec)?.powi(*n, prec))?,
        Expr::Min(x, y) => eval(x, b, prec)?.min(&eval(y, b, prec)?),
        Expr::Max(x, y) => eval(x, b, prec)?.max(&eval(y, b, prec)?),
        Expr::Apply(f, x) => {
            let xv = eval(x, b, prec)?;
            match f {
                Func::Sqrt => wrap(xv.sqrt(prec))?,
                Func::Exp => wrap(xv.exp(prec))?,
                Func::Log => wrap(xv.log(prec))?,
                Func::Log2 => wrap(xv.log2(prec))?,
                Func::Sinh => wrap(xv.sinh(prec))?,
                Func::Cosh => wrap(xv.cosh(prec))?,
                Func::Asinh => wrap(xv.asinh(prec))?,
                Func::Acosh => wrap(xv.acosh(prec))?,
                Func::Floor => xv.floor(),
                Func::Abs => xv.abs(),
            }
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum CertStatus {
    Proved,
    Disproved(VarBox),
    Unknown,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CertStats {
    pub subdomains: u64,
    pub max_depth_reached: u32,
    pub precision: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertResult {
    pub status: CertStatus,
    pub stats: CertStats,
}

impl CertResult {
    pub fn proved(&self) -> bool {
        matches!(self.status, CertStatus::Proved)
    }
}

/// Prove (or refute) `e >= 0` on all of `b`.
///
/// Proved is sound: every point of `b` satisfies the inequality.
/// Disproved carries a sub-box whose interval evaluation is strictly
/// negative. Unknown after `max_depth` bisection levels.
pub fn certify_nonneg(
    e: &Expr,
    b: &VarBox,
    prec: u64,
    max_depth: u32,
) -> Result<CertResult, EvalError> {
    for v in e.free_vars() {
        if !b.contains_key(&v) {
            return Err(EvalError::Unbound(v));
        }
    }
    let mut stats = CertStats { subdomains: 0, max_depth_reached: 0, precision: prec };
    let status = go(e, b, prec, max_depth, 0, &mut stats)?;
    Ok(CertResult { status, stats })
}

fn go(
    e: &Expr,
    b: &VarBox,
    prec: u64,
    max_depth: u32,
    depth: u32,
    stats: &mut CertStats,
) -> Result<CertStatus, EvalError> {
    stats.subdomains += 1;
    stats.max_depth_reached = stats.max_depth_reached.max(depth);
    let iv = eval(e, b, prec)?;
    if iv.is_nonneg() {
        return Ok(CertStatus::Proved);
    }
    if iv.is_negative() {
        return Ok(CertStatus::Disproved(b.clone()));
    }
    // point sample at the box midpoint, looking for a certified violation
    let mid: VarBox = b
        .iter()
        .map(|(k, v)| (k.clone(), IntervalScalar::point(v.midpoint())))
        .collect();
    if let Ok(miv) = eval(e, &mid, prec) {
        if miv.is_negative() {
            return Ok(CertStatus::Disproved(mid));
        }
    }
    // monotonicity pinning: move every provably monotone variable to the
    // face where the minimum is attained, then re-evaluate
    if let Some(pinned) = pin_monotone(e, b, prec) {
        if let Ok(piv) = eval(e, &pinned, prec) {
            if piv.is_nonneg() {
                return Ok(CertStatus::Proved);
            }
            if piv.is_negative() {
                return Ok(CertStatus::Disproved(pinned));
            }
        }
    }
    if depth >= max_depth {
        return Ok(CertStatus::Unknown);
    }
    let Some(split_var) = widest_variable(b) else {
        return Ok(CertStatus::Unknown);
    };
    let dom = &b[&split_var];
    let mid_pt = dom.midpoint();
    if &mid_pt <= dom.lo() || &mid_pt >= dom.hi() {
        // domain too thin to split further
        return Ok(CertStatus::Unknown);
    }
    let mut lower = b.clone();
    lower.insert(split_var.clone(), IntervalScalar::new(dom.lo().clone(), mid_pt.clone()));
    let mut upper = b.clone();
    upper.insert(split_var, IntervalScalar::new(mid_pt, dom.hi().clone()));
    let left = go(e, &lower, prec, max_depth, depth + 1, stats)?;
    if let CertStatus::Disproved(w) = left {
        return Ok(CertStatus::Disproved(w));
    }
    let right = go(e, &upper, prec, max_depth, depth + 1, stats)?;
    if let CertStatus::Disproved(w) = right {
        return Ok(CertStatus::Disproved(w));
    }
    if left == CertStatus::Proved && right == CertStatus::Proved {
        Ok(CertStatus::Proved)
    } else {
        Ok(CertStatus::Unknown)
    }
}

/// Split heuristic: widest relative width, ties broken by the
/// lexicographically first name (BTreeMap iteration order).
fn widest_variable(b: &VarBox) -> Option<String> {
    let mut best: Option<(String, Dyadic)> = None;
    for (name, dom) in b {
        if dom.is_point() {
            continue;
        }
        let w = dom.width();
        let scale = dom.lo().abs().max(dom.hi().abs()).max(Dyadic::one());
        let rel = w.div(&scale, 32, Round::Up);
        match &best {
            Some((_, bw)) if *bw >= rel => {}
            _ => best = Some((name.clone(), rel)),
        }
    }
    best.map(|(n, _)| n)
}

fn pin_monotone(e: &Expr, b: &VarBox, prec: u64) -> Option<VarBox> {
    let mut cur = b.clone();
    let mut progressed_any = false;
    loop {
        let mut progressed = false;
        let names: Vec<String> = cur
            .iter()
            .filter(|(_, d)| !d.is_point())
            .map(|(k, _)| k.clone())
            .collect();
        for name in names {
            if !e.free_vars().contains(&name) {
                continue;
            }
            let Some(deriv) = e.diff(&name) else {
                return if progressed_any { Some(cur) } else { None };
            };
            let Some(sign) = xeval(&deriv, &cur, prec) else {
                continue;
            };
            let dom = cur[&name].clone();
            if sign.is_nonneg() {
                cur.insert(name, IntervalScalar::point(dom.lo().clone()));
                progressed = true;
                progressed_any = true;
            } else if sign.is_nonpos() {
                cur.insert(name, IntervalScalar::point(dom.hi().clone()));
                progressed = true;
                progressed_any = true;
            }
        }
        if !progressed {
            break;
        }
    }
    if progressed_any {
        Some(cur)
    } else {
        None
    }
}

// ---- extended intervals for derivative sign analysis ----

/// An endpoint of an extended interval.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Ept {
    NegInf,
    Fin(Dyadic),
    PosInf,
}

use Ept::{Fin, NegInf, PosInf};

impl Ept {
    fn cmp_e(&self, other: &Ept) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Equal,
            (NegInf, _) | (_, PosInf) => Less,
            (_, NegInf) | (PosInf, _) => Greater,
            (Fin(a), Fin(b)) => a.cmp(b),
        }
    }

    fn min_e(self, other: Ept) -> Ept {
        if self.cmp_e(&other).is_le() {
            self
        } else {
            other
        }
    }

    fn max_e(self, other: Ept) -> Ept {
        if self.cmp_e(&other).is_ge() {
            self
        } else {
            other
        }
    }

    fn neg(&self) -> Ept {
        match self {
            NegInf => PosInf,
            PosInf => NegInf,
            Fin(d) => Fin(d.neg()),
        }
    }

    fn signum(&self) -> i8 {
        match self {
            NegInf => -1,
            PosInf => 1,
            Fin(d) => d.signum() as i8,
        }
    }

    // 0 * inf taken as 0: valid for enclosing products of finite reals
    fn mul(&self, other: &Ept, prec: u64, dir: Round) -> Ept {
        match (self, other) {
            (Fin(a), Fin(b)) => Fin(a.mul(b).round(prec, dir)),
            _ => {
                let s = self.signum() * other.signum();
                if s > 0 {
                    PosInf
                } else if s < 0 {
                    NegInf
                } else {
                    Fin(Dyadic::zero())
                }
            }
        }
    }
}

/// Extended interval; endpoints may be infinite.
#[derive(Debug, Clone)]
struct XScalar {
    lo: Ept,
    hi: Ept,
}

impl XScalar {
    fn from_interval(iv: &IntervalScalar) -> XScalar {
        XScalar { lo: Fin(iv.lo().clone()), hi: Fin(iv.hi().clone()) }
    }

    fn point(d: Dyadic) -> XScalar {
        XScalar { lo: Fin(d.clone()), hi: Fin(d) }
    }

    fn whole() -> XScalar {
        XScalar { lo: NegInf, hi: PosInf }
    }

    fn is_nonneg(&self) -> bool {
        matches!(&self.lo, Fin(d) if !d.is_negative())
    }

    fn is_nonpos(&self) -> bool {
        matches!(&self.hi, Fin(d) if !d.is_positive())
    }

    fn neg(&self) -> XScalar {
        XScalar { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    fn add(&self, other: &XScalar, prec: u64) -> XScalar {
        let lo = match (&self.lo, &other.lo) {
            (Fin(a), Fin(b)) => Fin(a.add(b, Round::Down).round(prec, Round::Down)),
            _ => NegInf,
        };
        let hi = match (&self.hi, &other.hi) {
            (Fin(a), Fin(b)) => Fin(a.add(b, Round::Up).round(prec, Round::Up)),
            _ => PosInf,
        };
        XScalar { lo, hi }
    }

    fn sub(&self, other: &XScalar, prec: u64) -> XScalar {
        self.add(&other.neg(), prec)
    }

    fn mul(&self, other: &XScalar, prec: u64) -> XScalar {
        let mut lo: Option<Ept> = None;
        let mut hi: Option<Ept> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&other.lo, &other.hi] {
                let down = a.mul(b, prec, Round::Down);
                let up = a.mul(b, prec, Round::Up);
                lo = Some(match lo {
                    Some(l) => l.min_e(down),
                    None => down,
                });
                hi = Some(match hi {
                    Some(h) => h.max_e(up),
                    None => up,
                });
            }
        }
        XScalar { lo: lo.unwrap(), hi: hi.unwrap() }
    }

    fn recip(&self, prec: u64) -> XScalar {
        let rec = |e: &Ept, dir: Round| -> Ept {
            match e {
                NegInf | PosInf => Fin(Dyadic::zero()),
                Fin(d) => Fin(Dyadic::one().div(d, prec, dir)),
            }
        };
        let lo_sign = self.lo.signum();
        let hi_sign = self.hi.signum();
        if lo_sign > 0 || hi_sign < 0 {
            XScalar { lo: rec(&self.hi, Round::Down), hi: rec(&self.lo, Round::Up) }
        } else if lo_sign == 0 && hi_sign > 0 {
            XScalar { lo: rec(&self.hi, Round::Down), hi: PosInf }
        } else if hi_sign == 0 && lo_sign < 0 {
            XScalar { lo: NegInf, hi: rec(&self.lo, Round::Up) }
        } else {
            XScalar::whole()
        }
    }

    fn div(&self, other: &XScalar, prec: u64) -> XScalar {
        self.mul(&other.recip(prec), prec)
    }

    fn powi(&self, n: i64, prec: u64) -> XScalar {
        if n == 0 {
            return XScalar::point(Dyadic::one());
        }
        if n < 0 {
            return self.powi(-n, prec).recip(prec);
        }
        let pow_e = |e: &Ept, dir: Round| -> Ept {
            match e {
                Fin(d) => Fin(finite_pow(d, n as u64, prec, dir)),
                NegInf => {
                    if n % 2 == 0 {
                        PosInf
                    } else {
                        NegInf
                    }
                }
                PosInf => PosInf,
            }
        };
        if n % 2 == 1 {
            XScalar { lo: pow_e(&self.lo, Round::Down), hi: pow_e(&self.hi, Round::Up) }
        } else if self.lo.signum() >= 0 {
            XScalar { lo: pow_e(&self.lo, Round::Down), hi: pow_e(&self.hi, Round::Up) }
        } else if self.hi.signum() <= 0 {
            XScalar { lo: pow_e(&self.hi, Round::Down), hi: pow_e(&self.lo, Round::Up) }
        } else {
            let m = self.neg().hi.max_e(self.hi.clone());
            XScalar { lo: Fin(Dyadic::zero()), hi: pow_e(&m, Round::Up) }
        }
    }

    fn abs(&self) -> XScalar {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            self.neg()
        } else {
            XScalar { lo: Fin(Dyadic::zero()), hi: self.lo.neg().max_e(self.hi.clone()) }
        }
    }
}

fn finite_pow(d: &Dyadic, n: u64, prec: u64, dir: Round) -> Dyadic {
    let neg = d.is_negative() && n % 2 == 1;
    let dirm = if neg { dir.flip() } else { dir };
    let mag = d.abs();
    let mut acc = Dyadic::one();
    let mut sq = mag;
    let mut k = n;
    loop {
        if k % 2 == 1 {
            acc = acc.mul(&sq).round(prec + 8, dirm);
        }
        k /= 2;
        if k == 0 {
            break;
        }
        sq = sq.mul(&sq).round(prec + 8, dirm);
    }
    let acc = acc.round(prec, dirm);
    if neg {
        acc.neg()
    } else {
        acc
    }
}

/// Monotone lift of a point enclosure to an extended endpoint, with the
/// limits at the infinite ends supplied by the caller.
fn mono_ept(
    e: &Ept,
    dir: Round,
    f: impl Fn(&Dyadic) -> Result<IntervalScalar, NumError>,
    at_neg_inf: Ept,
    at_pos_inf: Ept,
) -> Option<Ept> {
    Some(match e {
        NegInf => at_neg_inf,
        PosInf => at_pos_inf,
        Fin(d) => match f(d) {
            Ok(iv) => match dir {
                Round::Down => Fin(iv.lo().clone()),
                Round::Up => Fin(iv.hi().clone()),
            },
            Err(NumError::PrecisionExhausted(_)) => {
                // argument astronomically large; fall back to the limit
                if d.is_negative() {
                    at_neg_inf
                } else {
                    at_pos_inf
                }
            }
            Err(NumError::Domain(_)) => return None,
        },
    })
}

/// Best-effort enclosure of `e` over `b` in extended intervals. Used only
/// for derivative sign analysis; None means "no usable enclosure" and the
/// caller skips pinning. Domain clamping (log, sqrt, acosh) is sound here
/// because we only care about points of the box where the full expression
/// is defined.
fn xeval(e: &Expr, b: &VarBox, prec: u64) -> Option<XScalar> {
    Some(match e {
        Expr::Const(q) => XScalar::from_interval(&IntervalScalar::from_rational(q, prec)),
        Expr::Pi => XScalar::from_interval(&pi(prec)),
        Expr::Var(v) => XScalar::from_interval(b.get(v)?),
        Expr::Add(x, y) => xeval(x, b, prec)?.add(&xeval(y, b, prec)?, prec),
        Expr::Sub(x, y) => xeval(x, b, prec)?.sub(&xeval(y, b, prec)?, prec),
        Expr::Mul(x, y) => xeval(x, b, prec)?.mul(&xeval(y, b, prec)?, prec),
        Expr::Div(x, y) => xeval(x, b, prec)?.div(&xeval(y, b, prec)?, prec),
        Expr::Neg(x) => xeval(x, b, prec)?.neg(),
        Expr::Pow(x, n) => xeval(x, b, prec)?.powi(*n, prec),
        Expr::Min(x, y) => {
            let a = xeval(x, b, prec)?;
            let c = xeval(y, b, prec)?;
            XScalar { lo: a.lo.min_e(c.lo), hi: a.hi.min_e(c.hi) }
        }
        Expr::Max(x, y) => {
            let a = xeval(x, b, prec)?;
            let c = xeval(y, b, prec)?;
            XScalar { lo: a.lo.max_e(c.lo), hi: a.hi.max_e(c.hi) }
        }
        Expr::Apply(f, x) => {
            let xv = xeval(x, b, prec)?;
            match f {
                Func::Sqrt => {
                    let lo = match &xv.lo {
                        Fin(d) if d.is_positive() => {
                            Fin(d.sqrt(prec, Round::Down))
                        }
                        NegInf | Fin(_) => Fin(Dyadic::zero()),
                        PosInf => PosInf,
                    };
                    let hi = match &xv.hi {
                        Fin(d) if d.is_positive() => Fin(d.sqrt(prec, Round::Up)),
                        Fin(_) | NegInf => Fin(Dyadic::zero()),
                        PosInf => PosInf,
                    };
                    if hi.cmp_e(&lo).is_lt() {
                        return None;
                    }
                    XScalar { lo, hi }
                }
                Func::Exp => XScalar {
                    lo: mono_ept(&xv.lo, Round::Down, |d| exp_point(d, prec), Fin(Dyadic::zero()), PosInf)?,
                    hi: mono_ept(&xv.hi, Round::Up, |d| exp_point(d, prec), Fin(Dyadic::zero()), PosInf)?,
                },
                Func::Log | Func::Log2 => {
                    let logf = |d: &Dyadic| log_point(d, prec);
                    let lo = match &xv.lo {
                        Fin(d) if d.is_positive() => mono_ept(&xv.lo, Round::Down, logf, NegInf, PosInf)?,
                        _ => NegInf,
                    };
                    let hi = match &xv.hi {
                        Fin(d) if d.is_positive() => mono_ept(&xv.hi, Round::Up, logf, NegInf, PosInf)?,
                        PosInf => PosInf,
                        _ => return None, // entire interval outside the domain
                    };
                    let raw = XScalar { lo, hi };
                    if *f == Func::Log {
                        raw
                    } else {
                        raw.div(&XScalar::from_interval(&crate::interval::ln2(prec)), prec)
                    }
                }
                Func::Sinh => XScalar {
                    lo: mono_ept(&xv.lo, Round::Down, |d| sinh_point(d, prec), NegInf, PosInf)?,
                    hi: mono_ept(&xv.hi, Round::Up, |d| sinh_point(d, prec), NegInf, PosInf)?,
                },
                Func::Cosh => {
                    let m = xv.abs();
                    let coshf = |d: &Dyadic| cosh_point(d, prec);
                    let lo = mono_ept(&m.lo, Round::Down, coshf, PosInf, PosInf)?;
                    let hi = mono_ept(&m.hi, Round::Up, coshf, PosInf, PosInf)?;
                    XScalar { lo, hi }
                }
                Func::Asinh => XScalar {
                    lo: mono_ept(&xv.lo, Round::Down, |d| asinh_point(d, prec), NegInf, PosInf)?,
                    hi: mono_ept(&xv.hi, Round::Up, |d| asinh_point(d, prec), NegInf, PosInf)?,
                },
                Func::Acosh => {
                    let one = Dyadic::one();
                    let clamp = |e: &Ept| -> Ept {
                        match e {
                            Fin(d) if d < &one => Fin(one.clone()),
                            NegInf => Fin(one.clone()),
                            other => other.clone(),
                        }
                    };
                    if matches!(&xv.hi, Fin(d) if d < &one) {
                        return None;
                    }
                    let acoshf = |d: &Dyadic| acosh_point(d, prec);
                    XScalar {
                        lo: mono_ept(&clamp(&xv.lo), Round::Down, acoshf, PosInf, PosInf)?,
                        hi: mono_ept(&clamp(&xv.hi), Round::Up, acoshf, PosInf, PosInf)?,
                    }
                }
                Func::Floor => XScalar {
                    lo: match &xv.lo {
                        Fin(d) => Fin(d.floor()),
                        other => other.clone(),
                    },
                    hi: match &xv.hi {
                        Fin(d) => Fin(d.floor()),
                        other => other.clone(),
                    },
                },
                Func::Abs => xv.abs(),
            }
        }
    })
}

/// Build a VarBox from the rational domains of a parsed inequality.
pub fn inequality_box(ineq: &Inequality, prec: u64) -> VarBox {
    ineq.domains
        .iter()
        .map(|(name, lo, hi)| {
            (
                name.clone(),
                IntervalScalar::new(
                    Dyadic::from_rational(lo, prec, Round::Down),
                    Dyadic::from_rational(hi, prec, Round::Up),
                ),
            )
        })
        .collect()
}

/// Convenience: certify a parsed inequality line.
pub fn certify_inequality(
    ineq: &Inequality,
    prec: u64,
    max_depth: u32,
) -> Result<CertResult, EvalError> {
    let b = inequality_box(ineq, prec);
    certify_nonneg(&ineq.expr, &b, prec, max_depth)
}

/// Point box helper for single-variable evaluation.
pub fn point_box(name: &str, value: Dyadic) -> VarBox {
    let mut b = VarBox::new();
    b.insert(name.to_string(), IntervalScalar::point(value));
    b
}
