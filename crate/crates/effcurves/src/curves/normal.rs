//! Normal coordinates for simple closed curves on a triangulated surface.
//!
//! A normal curve stores one nonnegative weight per triangle corner; the
//! weight counts arcs cutting off that corner. The weight of a side is the
//! sum of its two corner weights, and a weight vector is admissible when
//! the two sides of every glued edge agree and boundary edges carry zero.
//! Curves are traced into explicit strand systems, classified as trivial,
//! peripheral or essential by inspecting their complementary regions, and
//! compared up to isotopy by reducing a pair to minimal position and
//! looking for a coannular region.

use super::position::{analyze, minimal_crossings, CurveSystem, PositionError, Strand, Token};
use super::surface::{Side, TriSurface};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NormalCurve {
    /// corner k of triangle t at index 3t + k; corner k sits at the head of
    /// side k and the tail of side k+1
    corner: Vec<u64>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NormalError {
    #[error("weight vector has wrong length")]
    WrongLength,
    #[error("edge {0}: side weights disagree across the gluing")]
    WeightMismatch(usize),
    #[error("edge {0}: boundary edges carry no weight")]
    BoundaryWeight(usize),
    #[error("triangle {0}: side weights have odd sum")]
    OddTriangle(usize),
    #[error("triangle {0}: side weights violate the triangle inequality")]
    TriangleInequality(usize),
}

/// Topological type of the traced curve system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveClass {
    Empty,
    /// some component bounds a disk
    Trivial,
    /// isotopic into the given surface boundary component
    Peripheral(usize),
    Essential,
}

impl NormalCurve {
    pub fn from_corner_weights(surf: &TriSurface, corner: Vec<u64>) -> Result<Self, NormalError> {
        if corner.len() != 3 * surf.num_triangles() {
            return Err(NormalError::WrongLength);
        }
        let c = NormalCurve { corner };
        for e in 0..surf.num_edges() {
            let (s1, s2) = surf.edge_sides(e);
            let w1 = c.side_weight(s1);
            match s2 {
                Some(s2) => {
                    if w1 != c.side_weight(s2) {
                        return Err(NormalError::WeightMismatch(e));
                    }
                }
                None => {
                    if w1 != 0 {
                        return Err(NormalError::BoundaryWeight(e));
                    }
                }
            }
        }
        Ok(c)
    }

    /// Convert per-edge weights into corner weights, checking the parity
    /// and triangle conditions in every triangle.
    pub fn from_edge_weights(surf: &TriSurface, w: &[u64]) -> Result<Self, NormalError> {
        if w.len() != surf.num_edges() {
            return Err(NormalError::WrongLength);
        }
        let mut corner = vec![0u64; 3 * surf.num_triangles()];
        for t in 0..surf.num_triangles() {
            let ws: Vec<u64> = (0..3)
                .map(|s| w[surf.side_edge(Side::new(t, s as u8)).0])
                .collect();
            if (ws[0] + ws[1] + ws[2]) % 2 != 0 {
                return Err(NormalError::OddTriangle(t));
            }
            for k in 0..3 {
                // corner k meets sides k and k+1 and is cut off by
                // (w_k + w_{k+1} - w_{k+2}) / 2 arcs
                let sum = ws[k] + ws[(k + 1) % 3];
                let other = ws[(k + 2) % 3];
                if sum < other {
                    return Err(NormalError::TriangleInequality(t));
                }
                corner[3 * t + k] = (sum - other) / 2;
            }
        }
        Self::from_corner_weights(surf, corner)
    }

    pub fn corner_weight(&self, t: usize, k: u8) -> u64 {
        self.corner[3 * t + k as usize]
    }

    pub fn corner_weights(&self) -> &[u64] {
        &self.corner
    }

    /// Weight of a triangle side: its tail corner plus its head corner.
    pub fn side_weight(&self, s: Side) -> u64 {
        self.corner_weight(s.tri, (s.side + 2) % 3) + self.corner_weight(s.tri, s.side)
    }

    pub fn edge_weights(&self, surf: &TriSurface) -> Vec<u64> {
        (0..surf.num_edges())
            .map(|e| self.side_weight(surf.edge_sides(e).0))
            .collect()
    }

    pub fn total_weight(&self, surf: &TriSurface) -> u64 {
        self.edge_weights(surf).iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.corner.iter().all(|&c| c == 0)
    }

    /// Trace the curve into strands of the given label, appending to an
    /// existing system. New edge points go after any already present.
    pub fn append_to_system(&self, surf: &TriSurface, sys: &mut CurveSystem, label: u8) {
        let ew = self.edge_weights(surf);
        // fresh tokens per edge, in edge order
        let mut toks: Vec<Vec<Token>> = Vec::with_capacity(surf.num_edges());
        for e in 0..surf.num_edges() {
            let block: Vec<Token> = (0..ew[e]).map(|_| sys.fresh_token()).collect();
            sys.edge_points[e].extend(block.iter().copied());
            toks.push(block);
        }
        // token of the point at side position p (from the side's tail)
        let token_at = |s: Side, p: u64| -> Token {
            let (e, fwd) = surf.side_edge(s);
            let w = ew[e];
            let idx = if fwd { p } else { w - 1 - p };
            toks[e][idx as usize]
        };
        // arc (t, k, j) joins side k at distance j from its head with side
        // k+1 at distance j from its tail, j = 1..=corner weight
        let arc_ends = |t: usize, k: u8, j: u64| -> (Token, Token) {
            let sk = Side::new(t, k);
            let sk1 = Side::new(t, (k + 1) % 3);
            let wk = self.side_weight(sk);
            (token_at(sk, wk - j), token_at(sk1, j - 1))
        };
        // both arc incidences of every token
        let mut at: BTreeMap<Token, Vec<(usize, u8, u64, u8)>> = BTreeMap::new();
        for t in 0..surf.num_triangles() {
            for k in 0..3u8 {
                for j in 1..=self.corner_weight(t, k) {
                    let (a, b) = arc_ends(t, k, j);
                    at.entry(a).or_default().push((t, k, j, 0));
                    at.entry(b).or_default().push((t, k, j, 1));
                }
            }
        }
        for inc in at.values() {
            debug_assert_eq!(inc.len(), 2, "each point carries two arcs");
        }
        // walk components
        let mut used: BTreeMap<(usize, u8, u64), bool> = BTreeMap::new();
        for t0 in 0..surf.num_triangles() {
            for k0 in 0..3u8 {
                for j0 in 1..=self.corner_weight(t0, k0) {
                    if used.contains_key(&(t0, k0, j0)) {
                        continue;
                    }
                    let mut points = Vec::new();
                    let mut tris = Vec::new();
                    let mut sides = Vec::new();
                    // traverse the component starting along (t0, k0, j0)
                    // from its side-k end
                    let (mut cur, mut end) = ((t0, k0, j0), 0u8);
                    loop {
                        let (t, k, j) = cur;
                        used.insert(cur, true);
                        let (a, b) = arc_ends(t, k, j);
                        let (from, to, sa, sb) = if end == 0 {
                            (a, b, k, (k + 1) % 3)
                        } else {
                            (b, a, (k + 1) % 3, k)
                        };
                        points.push(from);
                        tris.push(t);
                        sides.push((sa, sb));
                        // continue from `to` along its other arc
                        let inc = &at[&to];
                        let next = if (inc[0].0, inc[0].1, inc[0].2) == cur {
                            inc[1]
                        } else {
                            inc[0]
                        };
                        cur = (next.0, next.1, next.2);
                        end = next.3;
                        if cur == (t0, k0, j0) && end == 0 {
                            break;
                        }
                    }
                    sys.strands.push(Strand { label, closed: true, points, tris, sides });
                }
            }
        }
    }

    pub fn to_system(&self, surf: &TriSurface, label: u8) -> CurveSystem {
        let mut sys = CurveSystem::new(surf);
        self.append_to_system(surf, &mut sys, label);
        sys
    }

    pub fn components(&self, surf: &TriSurface) -> usize {
        self.to_system(surf, 0).strands.len()
    }

    pub fn is_connected(&self, surf: &TriSurface) -> bool {
        self.components(surf) == 1
    }

    /// Classify by the complementary regions: a disk region means some
    /// component bounds a disk; an annulus between one component and one
    /// surface boundary circle means that component is peripheral.
    pub fn classify(&self, surf: &TriSurface) -> Result<CurveClass, PositionError> {
        if self.is_empty() {
            return Ok(CurveClass::Empty);
        }
        let sys = self.to_system(surf, 0);
        let an = analyze(surf, &sys)?;
        debug_assert_eq!(an.cross_same, 0);
        for r in &an.regions {
            if r.chi == 1 {
                return Ok(CurveClass::Trivial);
            }
        }
        for r in &an.regions {
            if r.chi != 0 || r.cycles.len() != 2 {
                continue;
            }
            let (a, b) = (&r.cycles[0], &r.cycles[1]);
            for (curve_cy, bd_cy) in [(a, b), (b, a)] {
                if curve_cy.labels == vec![0]
                    && curve_cy.boundary_comps.is_empty()
                    && curve_cy.strands.len() == 1
                    && bd_cy.labels.is_empty()
                    && bd_cy.boundary_comps.len() == 1
                {
                    return Ok(CurveClass::Peripheral(bd_cy.boundary_comps[0]));
                }
            }
        }
        Ok(CurveClass::Essential)
    }

}

/// Exact isotopy test for two connected curves: after reduction to minimal
/// position they are isotopic exactly when they are disjoint and cobound an
/// annulus region.
pub fn isotopic(
    surf: &TriSurface,
    a: &NormalCurve,
    b: &NormalCurve,
    budget: u64,
) -> Result<bool, PositionError> {
    if a.is_empty() || b.is_empty() {
        return Ok(a.is_empty() && b.is_empty());
    }
    let mut sys = CurveSystem::new(surf);
    a.append_to_system(surf, &mut sys, 0);
    b.append_to_system(surf, &mut sys, 1);
    if minimal_crossings(surf, &mut sys, budget)? > 0 {
        return Ok(false);
    }
    let an = analyze(surf, &sys)?;
    Ok(an.regions.iter().any(|r| {
        r.chi == 0
            && r.cycles.len() == 2
            && r.cycles.iter().all(|cy| cy.boundary_comps.is_empty())
            && r.cycles.iter().any(|cy| cy.labels == vec![0])
            && r.cycles.iter().any(|cy| cy.labels == vec![1])
    }))
}

/// Validity report for a normal weight vector, naming what failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    pub valid: bool,
    pub diagnostics: Vec<String>,
}

/// A curve is valid when its weights are admissible and it is a connected,
/// essential, non-peripheral simple closed curve.
pub fn normal_is_valid(surf: &TriSurface, corner: &[u64]) -> ValidityReport {
    let mut diagnostics = Vec::new();
    let c = match NormalCurve::from_corner_weights(surf, corner.to_vec()) {
        Ok(c) => c,
        Err(e) => {
            return ValidityReport { valid: false, diagnostics: vec![e.to_string()] };
        }
    };
    if c.is_empty() {
        return ValidityReport { valid: false, diagnostics: vec!["empty".into()] };
    }
    if !c.is_connected(surf) {
        diagnostics.push(format!("disconnected: {} components", c.components(surf)));
    }
    match c.classify(surf) {
        Ok(CurveClass::Essential) => {}
        Ok(CurveClass::Trivial) => diagnostics.push("trivial: a component bounds a disk".into()),
        Ok(CurveClass::Peripheral(b)) => {
            diagnostics.push(format!("peripheral: parallel to boundary component {b}"))
        }
        Ok(CurveClass::Empty) => diagnostics.push("empty".into()),
        Err(e) => diagnostics.push(e.to_string()),
    }
    ValidityReport { valid: diagnostics.is_empty(), diagnostics }
}

/// Geometric intersection number of two normal curves, by reduction to
/// minimal position via bigon removal.
pub fn normal_intersection(
    surf: &TriSurface,
    a: &NormalCurve,
    b: &NormalCurve,
    budget: u64,
) -> Result<u64, PositionError> {
    let mut sys = CurveSystem::new(surf);
    a.append_to_system(surf, &mut sys, 0);
    b.append_to_system(surf, &mut sys, 1);
    minimal_crossings(surf, &mut sys, budget)
}

/// Brute-force oracle: minimize crossings over every interleaving of the
/// two curves' points along each edge, then certify the minimum by the
/// absence of bigons. Returns None when the configuration count exceeds
/// the budget or no explored minimum is bigon-free.
pub fn normal_intersection_oracle(
    surf: &TriSurface,
    a: &NormalCurve,
    b: &NormalCurve,
    max_configs: u64,
) -> Option<u64> {
    let base = {
        let mut sys = CurveSystem::new(surf);
        a.append_to_system(surf, &mut sys, 0);
        b.append_to_system(surf, &mut sys, 1);
        sys
    };
    let wa = a.edge_weights(surf);
    let wb = b.edge_weights(surf);
    // per-edge shuffle patterns: which slots of the merged order belong to
    // curve a, preserving each curve's internal order
    let mut patterns: Vec<Vec<Vec<bool>>> = Vec::with_capacity(surf.num_edges());
    let mut total: u64 = 1;
    for e in 0..surf.num_edges() {
        let (na, nb) = (wa[e] as usize, wb[e] as usize);
        let mut pats = Vec::new();
        gen_shuffles(na, nb, &mut Vec::new(), &mut pats);
        total = total.saturating_mul(pats.len() as u64);
        if total > max_configs {
            return None;
        }
        patterns.push(pats);
    }
    let mut best: Option<u64> = None;
    let mut best_bigonfree = false;
    let mut choice = vec![0usize; surf.num_edges()];
    loop {
        // build the interleaved system for this choice
        let mut sys = base.clone();
        for e in 0..surf.num_edges() {
            let na = wa[e] as usize;
            let pts = &base.edge_points[e];
            let (ta, tb) = pts.split_at(na);
            let (mut ia, mut ib) = (0usize, 0usize);
            let mut merged = Vec::with_capacity(pts.len());
            for &is_a in &patterns[e][choice[e]] {
                if is_a {
                    merged.push(ta[ia]);
                    ia += 1;
                } else {
                    merged.push(tb[ib]);
                    ib += 1;
                }
            }
            sys.edge_points[e] = merged;
        }
        if let Ok(an) = analyze(surf, &sys) {
            if an.cross_same == 0 {
                let better = best.map(|x| an.cross_labels < x).unwrap_or(true);
                if better {
                    best = Some(an.cross_labels);
                    best_bigonfree = an.bigon.is_none();
                } else if best == Some(an.cross_labels) && an.bigon.is_none() {
                    best_bigonfree = true;
                }
            }
        }
        // next choice
        let mut e = 0;
        loop {
            if e == surf.num_edges() {
                return if best_bigonfree { best } else { None };
            }
            choice[e] += 1;
            if choice[e] < patterns[e].len() {
                break;
            }
            choice[e] = 0;
            e += 1;
        }
    }
}

fn gen_shuffles(na: usize, nb: usize, prefix: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
    if na == 0 && nb == 0 {
        out.push(prefix.clone());
        return;
    }
    if na > 0 {
        prefix.push(true);
        gen_shuffles(na - 1, nb, prefix, out);
        prefix.pop();
    }
    if nb > 0 {
        prefix.push(false);
        gen_shuffles(na, nb - 1, prefix, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::surface::genus2_closed;

    fn torus() -> TriSurface {
        TriSurface::from_labels(&[["a", "b", "c"], ["a", "b", "c"]]).unwrap()
    }

    fn one_holed_torus() -> TriSurface {
        TriSurface::from_labels(&[["a", "b", "p"], ["p", "a", "q"], ["q", "b", "c"]]).unwrap()
    }

    #[test]
    fn edge_weight_round_trip() {
        let surf = torus();
        let c = NormalCurve::from_edge_weights(&surf, &[1, 1, 0]).unwrap();
        assert_eq!(c.edge_weights(&surf), vec![1, 1, 0]);
        assert_eq!(c.total_weight(&surf), 2);
        assert!(c.is_connected(&surf));
    }

    #[test]
    fn rejects_bad_weights() {
        let surf = torus();
        assert_eq!(
            NormalCurve::from_edge_weights(&surf, &[1, 0, 0]),
            Err(NormalError::OddTriangle(0))
        );
        assert_eq!(
            NormalCurve::from_edge_weights(&surf, &[4, 1, 1]),
            Err(NormalError::TriangleInequality(0))
        );
        let holed = one_holed_torus();
        // parity and triangle inequalities hold, but the boundary edge c
        // (the last of the five) carries weight
        assert_eq!(
            NormalCurve::from_edge_weights(&holed, &[0, 1, 1, 1, 2]),
            Err(NormalError::BoundaryWeight(4))
        );
    }

    #[test]
    fn torus_curves_intersect_like_slopes() {
        let surf = torus();
        // weights (1,1,0), (0,1,1) and (1,0,1) play the roles of three
        // slopes pairwise meeting once
        let c1 = NormalCurve::from_edge_weights(&surf, &[1, 1, 0]).unwrap();
        let c2 = NormalCurve::from_edge_weights(&surf, &[0, 1, 1]).unwrap();
        let c3 = NormalCurve::from_edge_weights(&surf, &[1, 0, 1]).unwrap();
        assert_eq!(normal_intersection(&surf, &c1, &c2, 1000), Ok(1));
        assert_eq!(normal_intersection(&surf, &c2, &c3, 1000), Ok(1));
        assert_eq!(normal_intersection(&surf, &c1, &c3, 1000), Ok(1));
        assert_eq!(normal_intersection(&surf, &c1, &c1, 1000), Ok(0));
        for (x, y) in [(&c1, &c2), (&c1, &c3), (&c2, &c3)] {
            assert_eq!(normal_intersection_oracle(&surf, x, y, 10_000), Some(1));
        }
        assert_eq!(normal_intersection_oracle(&surf, &c1, &c1, 10_000), Some(0));
    }

    #[test]
    fn classify_torus_and_holed_torus() {
        let surf = torus();
        let c = NormalCurve::from_edge_weights(&surf, &[1, 1, 0]).unwrap();
        assert_eq!(c.classify(&surf), Ok(CurveClass::Essential));
        assert!(normal_is_valid(&surf, c.corner_weights()).valid);

        let empty = NormalCurve::from_edge_weights(&surf, &[0, 0, 0]).unwrap();
        assert_eq!(empty.classify(&surf), Ok(CurveClass::Empty));
        assert!(!normal_is_valid(&surf, empty.corner_weights()).valid);

        // the full vertex link on the torus bounds a disk on both sides
        let link = NormalCurve::from_edge_weights(&surf, &[2, 2, 2]).unwrap();
        assert_eq!(link.classify(&surf), Ok(CurveClass::Trivial));

        let holed = one_holed_torus();
        let c = NormalCurve::from_edge_weights(&holed, &[0, 1, 1, 1, 0]).unwrap();
        assert_eq!(c.classify(&holed), Ok(CurveClass::Essential));
        assert!(normal_is_valid(&holed, c.corner_weights()).valid);
    }

    #[test]
    fn peripheral_detection_on_holed_torus() {
        let holed = one_holed_torus();
        // push the boundary circle inward: it crosses each interior edge
        // incident to the boundary vertex twice and cuts off an annulus
        let mut w = vec![0u64; holed.num_edges()];
        for e in 0..holed.num_edges() {
            if !holed.is_boundary_edge(e) {
                w[e] = 2;
            }
        }
        let c = NormalCurve::from_edge_weights(&holed, &w);
        if let Ok(c) = c {
            match c.classify(&holed).unwrap() {
                CurveClass::Peripheral(0) | CurveClass::Trivial => {}
                other => panic!("expected peripheral or trivial, got {other:?}"),
            }
        }
    }

    #[test]
    fn isotopy_test_distinguishes_curves() {
        let surf = torus();
        let c1 = NormalCurve::from_edge_weights(&surf, &[1, 1, 0]).unwrap();
        let c2 = NormalCurve::from_edge_weights(&surf, &[0, 1, 1]).unwrap();
        // a curve is isotopic to itself: two parallel copies reduce to
        // disjoint strands cobounding an annulus
        assert_eq!(isotopic(&surf, &c1, &c1, 1000), Ok(true));
        assert_eq!(isotopic(&surf, &c2, &c2, 1000), Ok(true));
        // curves meeting once are not isotopic
        assert_eq!(isotopic(&surf, &c1, &c2, 1000), Ok(false));
        let empty = NormalCurve::from_edge_weights(&surf, &[0, 0, 0]).unwrap();
        assert_eq!(isotopic(&surf, &empty, &empty, 1000), Ok(true));
        assert_eq!(isotopic(&surf, &empty, &c1, 1000), Ok(false));
    }

    #[test]
    fn disjoint_curves_need_not_be_isotopic() {
        let surf = genus2_closed();
        // search 0/1 edge-weight vectors for two disjoint essential curves
        // that are not isotopic: the region between them is not an annulus
        let ne = surf.num_edges();
        let mut curves = Vec::new();
        for mask in 1u32..(1 << ne) {
            let w: Vec<u64> = (0..ne).map(|e| u64::from(mask >> e & 1)).collect();
            if let Ok(c) = NormalCurve::from_edge_weights(&surf, &w) {
                if c.is_connected(&surf) && c.classify(&surf) == Ok(CurveClass::Essential) {
                    curves.push(c);
                }
            }
        }
        let mut found = false;
        'outer: for (i, a) in curves.iter().enumerate() {
            for b in &curves[i + 1..] {
                if normal_intersection(&surf, a, b, 1000) == Ok(0)
                    && isotopic(&surf, a, b, 1000) == Ok(false)
                {
                    found = true;
                    break 'outer;
                }
            }
        }
        assert!(found, "no disjoint non-isotopic pair found");
    }

    #[test]
    fn genus2_curve_is_essential() {
        let surf = genus2_closed();
        // a curve crossing the first glued handle pair once each
        for trial in [
            vec![1u64, 1, 0, 0, 0, 0, 0, 0, 0],
            vec![0, 0, 0, 0, 1, 1, 0, 0, 0],
        ] {
            if let Ok(c) = NormalCurve::from_edge_weights(&surf, &trial) {
                if c.is_connected(&surf) {
                    assert_eq!(c.classify(&surf), Ok(CurveClass::Essential));
                }
            }
        }
    }
}
