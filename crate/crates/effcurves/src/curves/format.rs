//! Plain-text exchange format for curves.
//!
//! Two record shapes:
//!
//! ```text
//! slope p/q
//! surface <id>; weights t0:(a,b,c) t1:(a,b,c) ...
//! ```
//!
//! The triple for triangle t lists its three corner weights. Surface ids
//! name the built-in triangulations so that records are self-contained.

use super::normal::NormalCurve;
use super::slope::Slope;
use super::surface::{
    four_holed_sphere, genus2_closed, genus2_waist, genus3_closed, one_holed_torus, torus_closed,
    two_holed_torus, TriSurface,
};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("unrecognized record: {0}")]
    Unrecognized(String),
    #[error("bad slope: {0}")]
    BadSlope(String),
    #[error("unknown surface id {0}")]
    UnknownSurface(String),
    #[error("bad weight triple: {0}")]
    BadWeights(String),
    #[error("weights are inadmissible: {0}")]
    Inadmissible(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveRecord {
    Slope(Slope),
    Normal { surface: String, curve: NormalCurve },
}

/// Built-in triangulations addressable from records.
pub fn surface_by_id(id: &str) -> Option<TriSurface> {
    match id {
        "torus" => Some(torus_closed()),
        "one-holed-torus" => Some(one_holed_torus()),
        "genus2" => Some(genus2_closed()),
        "four-holed-sphere" => Some(four_holed_sphere()),
        "genus2-waist" => Some(genus2_waist()),
        "two-holed-torus" => Some(two_holed_torus()),
        "genus3" => Some(genus3_closed()),
        _ => None,
    }
}

pub fn parse_record(text: &str) -> Result<CurveRecord, FormatError> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("slope ") {
        let (p, q) = rest
            .split_once('/')
            .ok_or_else(|| FormatError::BadSlope(rest.into()))?;
        let p: i64 = p.trim().parse().map_err(|_| FormatError::BadSlope(rest.into()))?;
        let q: i64 = q.trim().parse().map_err(|_| FormatError::BadSlope(rest.into()))?;
        let s = Slope::new(p, q).map_err(|e| FormatError::BadSlope(format!("{rest}: {e}")))?;
        return Ok(CurveRecord::Slope(s));
    }
    if let Some(rest) = text.strip_prefix("surface ") {
        let (id, weights) = rest
            .split_once(';')
            .ok_or_else(|| FormatError::Unrecognized(text.into()))?;
        let id = id.trim().to_string();
        let surf = surface_by_id(&id).ok_or_else(|| FormatError::UnknownSurface(id.clone()))?;
        let weights = weights
            .trim()
            .strip_prefix("weights")
            .ok_or_else(|| FormatError::Unrecognized(text.into()))?;
        let mut corner = vec![0u64; 3 * surf.num_triangles()];
        let mut seen = vec![false; surf.num_triangles()];
        for tok in weights.split_whitespace() {
            let (t, triple) = tok
                .split_once(':')
                .ok_or_else(|| FormatError::BadWeights(tok.into()))?;
            let t: usize = t
                .strip_prefix('t')
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| FormatError::BadWeights(tok.into()))?;
            if t >= surf.num_triangles() || seen[t] {
                return Err(FormatError::BadWeights(tok.into()));
            }
            seen[t] = true;
            let triple = triple
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| FormatError::BadWeights(tok.into()))?;
            let parts: Vec<&str> = triple.split(',').collect();
            if parts.len() != 3 {
                return Err(FormatError::BadWeights(tok.into()));
            }
            for (k, part) in parts.iter().enumerate() {
                corner[3 * t + k] = part
                    .trim()
                    .parse()
                    .map_err(|_| FormatError::BadWeights(tok.into()))?;
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(FormatError::BadWeights("missing triangle".into()));
        }
        let curve = NormalCurve::from_corner_weights(&surf, corner)
            .map_err(|e| FormatError::Inadmissible(e.to_string()))?;
        return Ok(CurveRecord::Normal { surface: id, curve });
    }
    Err(FormatError::Unrecognized(text.into()))
}

pub fn write_record(rec: &CurveRecord) -> String {
    match rec {
        CurveRecord::Slope(s) => format!("slope {s}"),
        CurveRecord::Normal { surface, curve } => {
            let mut out = format!("surface {surface}; weights");
            for (t, ch) in curve.corner_weights().chunks(3).enumerate() {
                out.push_str(&format!(" t{t}:({},{},{})", ch[0], ch[1], ch[2]));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_round_trip() {
        let rec = parse_record("slope 3/5").unwrap();
        assert_eq!(rec, CurveRecord::Slope(Slope::new(3, 5).unwrap()));
        assert_eq!(write_record(&rec), "slope 3/5");
        assert_eq!(parse_record("slope 2/-4"), Err(FormatError::BadSlope("2/-4: p and q must be coprime".into())));
        assert!(matches!(parse_record("slope x"), Err(FormatError::BadSlope(_))));
    }

    #[test]
    fn normal_round_trip() {
        let surf = torus_closed();
        let curve = NormalCurve::from_edge_weights(&surf, &[1, 1, 0]).unwrap();
        let rec = CurveRecord::Normal {
            surface: "torus".into(),
            curve: curve.clone(),
        };
        let text = write_record(&rec);
        assert!(text.starts_with("surface torus; weights t0:("));
        assert_eq!(parse_record(&text), Ok(rec));
    }

    #[test]
    fn rejects_bad_records() {
        assert!(matches!(
            parse_record("surface nowhere; weights t0:(0,0,0)"),
            Err(FormatError::UnknownSurface(_))
        ));
        assert!(matches!(
            parse_record("surface torus; weights t0:(1,0,0) t1:(0,0,0)"),
            Err(FormatError::Inadmissible(_))
        ));
        assert!(matches!(
            parse_record("surface torus; weights t0:(0,0,0)"),
            Err(FormatError::BadWeights(_))
        ));
        assert!(matches!(parse_record("hello"), Err(FormatError::Unrecognized(_))));
    }
}
