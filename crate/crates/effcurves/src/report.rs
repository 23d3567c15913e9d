//! Structured run reports: every command echoes its exact inputs and renders
//! each computed quantity as a two-sided enclosure, never a bare midpoint.

use crate::dyadic::{Dyadic, Round};
use crate::interval::IntervalScalar;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

pub const REPORT_SCHEMA: &str = "effcurves-report/1";

/// One named quantity in a report.
#[derive(Debug, Clone, Serialize)]
pub struct OutputItem {
    pub name: String,
    /// enclosure string like "[3.5255, 3.5256]", or an exact value
    pub value: String,
    /// human-readable formula or description of what was computed
    pub formula: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub outputs: Vec<OutputItem>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    /// omitted by default so reruns are byte-identical
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            schema: REPORT_SCHEMA,
            command: command.to_string(),
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
            warnings: Vec::new(),
            timestamp: None,
        }
    }

    pub fn input(&mut self, name: &str, value: impl ToString) -> &mut Self {
        self.inputs.insert(name.to_string(), value.to_string());
        self
    }

    pub fn output(&mut self, name: &str, value: impl ToString, formula: &str) -> &mut Self {
        self.outputs.push(OutputItem {
            name: name.to_string(),
            value: value.to_string(),
            formula: formula.to_string(),
        });
        self
    }

    pub fn enclosure(&mut self, name: &str, v: &IntervalScalar, formula: &str) -> &mut Self {
        self.output(name, render_enclosure(v), formula)
    }

    pub fn warn(&mut self, msg: impl ToString) -> &mut Self {
        self.warnings.push(msg.to_string());
        self
    }

    pub fn stamp_now(&mut self) -> &mut Self {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        self.timestamp = Some(format!("{secs}"));
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Plain-text table for terminal use.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("command: {}\n", self.command));
        if !self.inputs.is_empty() {
            s.push_str("inputs:\n");
            for (k, v) in &self.inputs {
                s.push_str(&format!("  {k} = {v}\n"));
            }
        }
        if !self.outputs.is_empty() {
            s.push_str("outputs:\n");
            let w = self.outputs.iter().map(|o| o.name.len()).max().unwrap_or(0);
            for o in &self.outputs {
                s.push_str(&format!("  {:w$}  {}    ({})\n", o.name, o.value, o.formula));
            }
        }
        for msg in &self.warnings {
            s.push_str(&format!("warning: {msg}\n"));
        }
        s
    }
}

/// Directed scientific rendering of one endpoint at `sig` significant digits.
fn sci(x: &Dyadic, sig: u32, dir: Round) -> String {
    if x.mantissa().is_zero() {
        return "0".to_string();
    }
    // |x| lies within a factor of 2 of 2^me; aim the scaling so the directed
    // integer below carries about `sig` decimal digits
    let me = x.magnitude_exponent().expect("nonzero").to_i64().unwrap_or(0);
    let e10_est = (me as i128 * 30103 / 100000) as i64;
    let k = i64::from(sig) - 1 - e10_est;
    let mut num = x.mantissa().clone();
    let mut den = BigInt::from(1);
    let exp = x.exponent().to_i64().unwrap_or(0);
    if exp >= 0 {
        num <<= exp as usize;
    } else {
        den <<= (-exp) as usize;
    }
    if k >= 0 {
        num *= BigInt::from(10u32).pow(k as u32);
    } else {
        den *= BigInt::from(10u32).pow((-k) as u32);
    }
    let n = match dir {
        Round::Down => num.div_floor(&den),
        Round::Up => num.div_ceil(&den),
    };
    let neg = n.is_negative();
    let digits = n.abs().to_string();
    // x is enclosed by n*10^(-k), so the decimal exponent is len-1-k
    let e10 = digits.len() as i64 - 1 - k;
    let (head, tail) = digits.split_at(1);
    let tail = tail.trim_end_matches('0');
    let mantissa = if tail.is_empty() {
        head.to_string()
    } else {
        format!("{head}.{tail}")
    };
    format!("{}{mantissa}e{e10}", if neg { "-" } else { "" })
}

fn moderate(x: &Dyadic) -> bool {
    match x.magnitude_exponent() {
        None => true,
        Some(me) => me.to_i64().is_some_and(|m| (-40..=49).contains(&m)),
    }
}

/// Two-sided enclosure string: fixed-point in a moderate range, directed
/// scientific notation outside it.
pub fn render_enclosure(v: &IntervalScalar) -> String {
    if moderate(v.lo()) && moderate(v.hi()) {
        v.to_enclosure_string(12)
    } else {
        format!("[{}, {}]", sci(v.lo(), 12, Round::Down), sci(v.hi(), 12, Round::Up))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trips_and_is_deterministic() {
        let mut r = Report::new("thm-a");
        r.input("eps0", "1/10").input("chi-s", "2");
        let v = IntervalScalar::from_int(3);
        r.enclosure("threshold", &v, "a + b*log|chiS|");
        r.warn("example warning");
        let j1 = r.to_json();
        let j2 = r.to_json();
        assert_eq!(j1, j2);
        assert!(j1.contains("\"schema\": \"effcurves-report/1\""));
        assert!(!j1.contains("timestamp"));
        let t = r.to_text();
        assert!(t.contains("threshold"));
        assert!(t.contains("warning: example warning"));
        r.stamp_now();
        assert!(r.to_json().contains("timestamp"));
    }

    #[test]
    fn enclosures_switch_to_scientific_outside_the_moderate_range() {
        let small = IntervalScalar::from_int(3);
        assert_eq!(render_enclosure(&small), "[3.000000000000, 3.000000000000]");
        let huge = IntervalScalar::from_int(10).powi(60, 64).unwrap();
        let s = render_enclosure(&huge);
        assert!(s.contains("e60"), "{s}");
        let (lo, hi) = huge.to_f64_pair();
        assert!(lo <= 1e60 && 1e60 <= hi);
        let tiny = IntervalScalar::from_int(10).powi(-60, 64).unwrap();
        let t = render_enclosure(&tiny);
        assert!(t.contains("e-60"), "{t}");
        let neg = IntervalScalar::from_int(-10).powi(61, 64).unwrap();
        assert!(render_enclosure(&neg).starts_with("[-1"), "{}", render_enclosure(&neg));
    }
}
