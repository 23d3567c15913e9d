//! Subsurface projections of curves.
//!
//! A subsurface is given by an injective, gluing-preserving map of its
//! triangles into an ambient surface. Its boundary circles are pushed
//! slightly inside as normal curves; a curve of the ambient surface is put
//! in minimal position with respect to all pushoffs at once and split into
//! the arcs it leaves inside. The projection of an arc is the boundary of a
//! neighborhood of the arc together with the boundary circles it meets,
//! computed combinatorially as closed side-to-side walks that are then
//! pulled tight into normal coordinates of the subsurface.

use crate::curves::graph::{CurveGraphSlice, CurveVertex};
use crate::curves::normal::{isotopic, normal_intersection, CurveClass, NormalCurve};
use crate::curves::position::{
    analyze, crossing_sequences, minimal_crossings, CrossingRef, CurveSystem, PositionError,
    Strand, Token,
};
use crate::curves::surface::{Gluing, Side, TriSurface};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ProjectionError {
    #[error("bad embedding: {0}")]
    BadEmbedding(String),
    #[error("bad fixture file: {0}")]
    BadFixture(String),
    #[error("the curve meets the subsurface in no essential way")]
    NoEssentialIntersection,
    #[error("surgery produced no essential curve")]
    DegenerateSurgery,
    #[error(transparent)]
    Position(#[from] PositionError),
}

/// An embedding of a triangulated subsurface into an ambient surface,
/// together with a certified inward pushoff of every boundary circle.
#[derive(Debug, Clone)]
pub struct SubsurfaceEmbedding {
    pub ambient: TriSurface,
    pub sub: TriSurface,
    tri_map: Vec<usize>,
    /// inverse of tri_map on its image
    inv_tri: BTreeMap<usize, usize>,
    /// ambient edge -> sub edge, for edges interior to the image
    interior_edge: BTreeMap<usize, usize>,
    pushoffs_sub: Vec<NormalCurve>,
    pushoffs_ambient: Vec<NormalCurve>,
}

/// One chord of a curve drawn on a triangulated surface: the triangle it
/// lives in and the sides it enters and leaves through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Step {
    tri: usize,
    s_in: u8,
    s_out: u8,
}

/// An essential arc the curve leaves in the subsurface, with the boundary
/// components carrying its endpoints and the interior sub edges it crosses.
#[derive(Debug, Clone)]
pub struct Arc {
    pub start_comp: usize,
    pub end_comp: usize,
    /// sub edges crossed between the endpoints, in order
    pub edges: Vec<usize>,
    /// neighborhood-boundary walks in ambient coordinates, pending tightening
    walks: Vec<Vec<Step>>,
}

/// The decomposition of a curve relative to a subsurface: deduplicated
/// essential arcs, or the curve itself when it lies inside.
#[derive(Debug, Clone)]
pub struct ArcSystem {
    pub arcs: Vec<Arc>,
    /// total arc endpoints before deduplication; equals the sum of the
    /// intersection numbers with the boundary pushoffs
    pub endpoints: u64,
    /// the curve in sub coordinates, when disjoint from all pushoffs and
    /// contained in the subsurface
    pub contained: Option<NormalCurve>,
}

/// Projection of a curve: essential curves of the subsurface, deduplicated
/// up to isotopy and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionSet {
    pub curves: Vec<NormalCurve>,
}

impl SubsurfaceEmbedding {
    pub fn new(
        ambient: TriSurface,
        sub: TriSurface,
        tri_map: Vec<usize>,
    ) -> Result<SubsurfaceEmbedding, ProjectionError> {
        let bad = |m: String| ProjectionError::BadEmbedding(m);
        if tri_map.len() != sub.num_triangles() {
            return Err(bad("triangle map has wrong length".into()));
        }
        if tri_map.iter().any(|&t| t >= ambient.num_triangles()) {
            return Err(bad("triangle map goes out of range".into()));
        }
        let mut inv_tri = BTreeMap::new();
        for (t, &a) in tri_map.iter().enumerate() {
            if inv_tri.insert(a, t).is_some() {
                return Err(bad("triangle map is not injective".into()));
            }
        }
        if sub.num_boundary_components() == 0 {
            return Err(bad("subsurface must have boundary".into()));
        }
        if sub.euler() >= 0 {
            return Err(bad("subsurface must have negative Euler characteristic".into()));
        }
        if sub.genus() == 0 && sub.num_boundary_components() == 3 {
            return Err(bad("three-holed spheres carry no essential curves".into()));
        }
        // the map must preserve gluings side for side, and may send a sub
        // boundary side only to an ambient side glued outside the image or
        // to the image of another sub boundary side
        let mut interior_edge = BTreeMap::new();
        for t in 0..sub.num_triangles() {
            for s in 0..3u8 {
                let here = Side::new(t, s);
                let amb = Side::new(tri_map[t], s);
                match sub.gluing(here) {
                    Gluing::Glued(o) => {
                        let want = Side::new(tri_map[o.tri], o.side);
                        if ambient.gluing(amb) != Gluing::Glued(want) {
                            return Err(bad("interior gluing not preserved".into()));
                        }
                        interior_edge.insert(ambient.side_edge(amb).0, sub.side_edge(here).0);
                    }
                    Gluing::Boundary => match ambient.gluing(amb) {
                        Gluing::Boundary => {
                            return Err(bad(
                                "subsurface boundary lies on the ambient boundary".into(),
                            ))
                        }
                        Gluing::Glued(q) => {
                            if let Some(&qt) = inv_tri.get(&q.tri) {
                                if sub.gluing(Side::new(qt, q.side)) != Gluing::Boundary {
                                    return Err(bad(
                                        "boundary side glued into the image interior".into(),
                                    ));
                                }
                            }
                        }
                    },
                }
            }
        }
        // every boundary vertex must be visited once by a single circuit, so
        // that the pushoff of a circuit is the link of its vertices
        let mut seen_verts = BTreeSet::new();
        let mut circuit_verts: Vec<BTreeSet<usize>> = Vec::new();
        for b in 0..sub.num_boundary_components() {
            let mut verts = BTreeSet::new();
            for side in sub.boundary_component(b) {
                let v = sub.corner_vertex(side.tri, side.side);
                if !seen_verts.insert(v) || !verts.insert(v) {
                    return Err(bad("boundary circuits must visit distinct vertices".into()));
                }
            }
            circuit_verts.push(verts);
        }
        // pushoff of circuit b: the link of its vertices, crossing each
        // interior edge once per end at a circuit vertex
        let mut pushoffs_sub = Vec::new();
        let mut pushoffs_ambient = Vec::new();
        for (b, verts) in circuit_verts.iter().enumerate() {
            let mut w = vec![0u64; sub.num_edges()];
            for e in 0..sub.num_edges() {
                if sub.is_boundary_edge(e) {
                    continue;
                }
                let (s1, _) = sub.edge_sides(e);
                let tail = sub.corner_vertex(s1.tri, (s1.side + 2) % 3);
                let head = sub.corner_vertex(s1.tri, s1.side);
                if verts.contains(&tail) {
                    w[e] += 1;
                }
                if verts.contains(&head) {
                    w[e] += 1;
                }
            }
            let c = NormalCurve::from_edge_weights(&sub, &w)
                .map_err(|e| bad(format!("pushoff of component {b} inadmissible: {e}")))?;
            if !c.is_connected(&sub) {
                return Err(bad(format!("pushoff of component {b} is disconnected")));
            }
            if c.classify(&sub)? != CurveClass::Peripheral(b) {
                return Err(bad(format!("pushoff of component {b} is not peripheral")));
            }
            // transfer corner weights through the triangle map; sub boundary
            // edges carry zero weight, so the result is admissible upstairs
            let ca = map_corners(&ambient, &sub, &tri_map, &c)
                .map_err(|e| bad(format!("pushoff of component {b} breaks upstairs: {e}")))?;
            if ca.classify(&ambient)? != CurveClass::Essential {
                return Err(bad(format!(
                    "boundary component {b} is not essential in the ambient surface"
                )));
            }
            pushoffs_sub.push(c);
            pushoffs_ambient.push(ca);
        }
        Ok(SubsurfaceEmbedding {
            ambient,
            sub,
            tri_map,
            inv_tri,
            interior_edge,
            pushoffs_sub,
            pushoffs_ambient,
        })
    }

    pub fn tri_map(&self) -> &[usize] {
        &self.tri_map
    }

    pub fn num_boundary_components(&self) -> usize {
        self.pushoffs_sub.len()
    }

    pub fn pushoff_sub(&self, b: usize) -> &NormalCurve {
        &self.pushoffs_sub[b]
    }

    pub fn pushoff_ambient(&self, b: usize) -> &NormalCurve {
        &self.pushoffs_ambient[b]
    }

    /// A sub curve re-expressed in ambient coordinates.
    pub fn to_ambient(&self, c: &NormalCurve) -> Result<NormalCurve, ProjectionError> {
        map_corners(&self.ambient, &self.sub, &self.tri_map, c)
            .map_err(|e| ProjectionError::BadEmbedding(format!("curve breaks upstairs: {e}")))
    }
}

fn map_corners(
    ambient: &TriSurface,
    sub: &TriSurface,
    tri_map: &[usize],
    c: &NormalCurve,
) -> Result<NormalCurve, crate::curves::normal::NormalError> {
    let mut amb_corner = vec![0u64; 3 * ambient.num_triangles()];
    for t in 0..sub.num_triangles() {
        for k in 0..3u8 {
            amb_corner[3 * tri_map[t] + k as usize] = c.corner_weight(t, k);
        }
    }
    NormalCurve::from_corner_weights(ambient, amb_corner)
}

/// Chords visited by the piece of a closed strand between two crossings,
/// inclusive at both ends. When both crossings sit on the same chord the
/// piece is that single chord if the second comes later along it, and the
/// whole strand otherwise.
fn segment_chords(n: usize, a: &CrossingRef, b: &CrossingRef) -> Vec<usize> {
    if a.chord == b.chord && b.rank > a.rank {
        return vec![a.chord];
    }
    let mut v = vec![a.chord];
    let mut c = (a.chord + 1) % n;
    loop {
        v.push(c);
        if c == b.chord {
            return v;
        }
        c = (c + 1) % n;
    }
}

fn chord_step(st: &Strand, c: usize) -> Step {
    Step { tri: st.tris[c], s_in: st.sides[c].0, s_out: st.sides[c].1 }
}

/// Everything the surgery needs about one arc endpoint.
#[derive(Clone, Copy)]
struct Cut {
    tri: usize,
    /// entry and exit sides of the crossed curve's chord
    a_in: u8,
    a_out: u8,
    /// pushoff strand, chord, its entry and exit sides, and the crossing's
    /// rank along that chord
    p_strand: usize,
    d: usize,
    p_in: u8,
    p_out: u8,
    p_rank: usize,
    comp: usize,
}

/// One leg of a neighborhood-boundary cycle: a run along the arc or along a
/// pushoff between two cuts. `direct` marks a run staying on a single chord,
/// whose two seams collapse into one step.
struct Leg {
    start_cut: usize,
    end_cut: usize,
    depart: u8,
    arrive: u8,
    middle: Vec<Step>,
    direct: bool,
}

/// Smooth the cuts and stitch the legs into one closed walk. At the seam
/// entering a leg the walk turns inside the cut's triangle from the previous
/// leg's arrival side to this leg's departure side.
fn emit_cycle(cuts: &[Cut], legs: &[Leg]) -> Vec<Step> {
    let n = legs.len();
    let mut skip = vec![false; n];
    for i in 0..n {
        if legs[i].direct {
            skip[(i + 1) % n] = true;
        }
    }
    let mut steps = Vec::new();
    for i in 0..n {
        if !skip[i] {
            let prev = &legs[(i + n - 1) % n];
            debug_assert_eq!(prev.end_cut, legs[i].start_cut);
            let tri = cuts[legs[i].start_cut].tri;
            let s_out = if legs[i].direct {
                debug_assert_eq!(tri, cuts[legs[i].end_cut].tri);
                legs[(i + 1) % n].depart
            } else {
                legs[i].depart
            };
            steps.push(Step { tri, s_in: prev.arrive, s_out });
        }
        steps.extend_from_slice(&legs[i].middle);
    }
    steps
}

/// Check a cyclic side walk crosses a consistent edge at every transition.
fn walk_is_consistent(surf: &TriSurface, steps: &[Step]) -> bool {
    steps.iter().enumerate().all(|(i, s)| {
        let next = &steps[(i + 1) % steps.len()];
        surf.gluing(Side::new(s.tri, s.s_out)) == Gluing::Glued(Side::new(next.tri, next.s_in))
    })
}

/// Map an ambient walk into the subsurface and pull it tight: remove turns
/// entering and leaving a triangle by the same side until none remain, then
/// read off normal coordinates. None means the walk shrank away.
fn tighten_to_sub(
    emb: &SubsurfaceEmbedding,
    steps: &[Step],
) -> Result<Option<NormalCurve>, ProjectionError> {
    let sub = &emb.sub;
    let mut v: Vec<Step> = Vec::with_capacity(steps.len());
    for s in steps {
        let &t = emb
            .inv_tri
            .get(&s.tri)
            .ok_or(ProjectionError::DegenerateSurgery)?;
        v.push(Step { tri: t, s_in: s.s_in, s_out: s.s_out });
    }
    // the walk must close up inside the subsurface; a transition through a
    // boundary edge means the surgery left the image
    if !walk_is_consistent(sub, &v) {
        return Err(ProjectionError::DegenerateSurgery);
    }
    'tighten: loop {
        if v.is_empty() {
            return Ok(None);
        }
        if v.len() == 1 {
            if v[0].s_in == v[0].s_out {
                return Ok(None);
            }
            break;
        }
        for i in 0..v.len() {
            if v[i].s_in != v[i].s_out {
                continue;
            }
            let pi = (i + v.len() - 1) % v.len();
            let ni = (i + 1) % v.len();
            let (prev, next) = (v[pi], v[ni]);
            // both neighbors attach to the one partner of the removed side
            assert_eq!(prev.tri, next.tri);
            assert_eq!(prev.s_out, next.s_in);
            let merged = Step { tri: prev.tri, s_in: prev.s_in, s_out: next.s_out };
            if pi == ni {
                v = vec![merged];
            } else {
                let mut nv = Vec::with_capacity(v.len() - 2);
                for (j, s) in v.iter().enumerate() {
                    if j == i || j == ni {
                        continue;
                    }
                    nv.push(if j == pi { merged } else { *s });
                }
                v = nv;
            }
            continue 'tighten;
        }
        break;
    }
    let mut w = vec![0u64; sub.num_edges()];
    for s in &v {
        w[sub.side_edge(Side::new(s.tri, s.s_out)).0] += 1;
    }
    let c = NormalCurve::from_edge_weights(sub, &w)
        .map_err(|_| ProjectionError::DegenerateSurgery)?;
    Ok(Some(c))
}

/// Split an ambient curve along the boundary pushoffs into the arcs it
/// leaves inside the subsurface. The curve must be essential.
pub fn split_into_arcs(
    emb: &SubsurfaceEmbedding,
    alpha: &NormalCurve,
    budget: u64,
) -> Result<ArcSystem, ProjectionError> {
    if alpha.classify(&emb.ambient)? != CurveClass::Essential {
        return Err(ProjectionError::NoEssentialIntersection);
    }
    // the bigon reduction can stall at a triple-crossing obstruction; where
    // it stalls depends on the initial drawing, so retry over insertion
    // orders until one reaches a position the side tests certify
    let npush = emb.pushoffs_ambient.len();
    for curve_pos in 0..=npush {
        for rot in 0..npush {
            match split_arcs_attempt(emb, alpha, budget, curve_pos, rot) {
                Err(ProjectionError::DegenerateSurgery) => continue,
                other => return other,
            }
        }
    }
    Err(ProjectionError::DegenerateSurgery)
}

fn split_arcs_attempt(
    emb: &SubsurfaceEmbedding,
    alpha: &NormalCurve,
    budget: u64,
    curve_pos: usize,
    rot: usize,
) -> Result<ArcSystem, ProjectionError> {
    let amb = &emb.ambient;
    let npush = emb.pushoffs_ambient.len();
    let mut sys = CurveSystem::new(amb);
    let mut slot = 0usize;
    for i in 0..=npush {
        if i == curve_pos {
            alpha.append_to_system(amb, &mut sys, 0);
        } else {
            let b = (slot + rot) % npush;
            emb.pushoffs_ambient[b].append_to_system(amb, &mut sys, (b + 1) as u8);
            slot += 1;
        }
    }
    minimal_crossings(amb, &mut sys, budget)?;

    // token -> ambient edge
    let mut token_edge: BTreeMap<Token, usize> = BTreeMap::new();
    for (e, pts) in sys.edge_points.iter().enumerate() {
        for &p in pts {
            token_edge.insert(p, e);
        }
    }
    // the side tests below read the drawn position, which is only sound
    // while the pushoffs stay strictly inside the image
    for st in sys.strands.iter().filter(|s| s.label != 0) {
        let inside = st.tris.iter().all(|t| emb.inv_tri.contains_key(t))
            && st
                .points
                .iter()
                .all(|p| emb.interior_edge.contains_key(&token_edge[p]));
        if !inside {
            return Err(ProjectionError::DegenerateSurgery);
        }
    }

    let seqs = crossing_sequences(amb, &sys)?;
    // the side tests below also assume genuine minimal position; the bigon
    // reduction can stall at a triple-crossing obstruction, which shows up
    // as leftover crossings between the pairwise disjoint pushoffs
    for (s, st) in sys.strands.iter().enumerate() {
        if st.label == 0 {
            continue;
        }
        if seqs[s].iter().any(|x| sys.strands[x.other_strand].label != 0) {
            return Err(ProjectionError::DegenerateSurgery);
        }
    }
    let find_on = |strand: usize, id: (usize, usize)| -> (usize, usize) {
        let x = seqs[strand]
            .iter()
            .find(|x| x.id == id)
            .expect("crossing appears on both strands");
        (x.chord, x.rank)
    };
    let make_cut = |x: &CrossingRef, st: &Strand| -> Cut {
        let pst = &sys.strands[x.other_strand];
        let (d, p_rank) = find_on(x.other_strand, x.id);
        debug_assert_eq!(d, x.other_chord);
        Cut {
            tri: st.tris[x.chord],
            a_in: st.sides[x.chord].0,
            a_out: st.sides[x.chord].1,
            p_strand: x.other_strand,
            d,
            p_in: pst.sides[d].0,
            p_out: pst.sides[d].1,
            p_rank,
            comp: (pst.label - 1) as usize,
        }
    };
    // pushoff run between two cuts, always in strand direction
    let push_leg = |from: usize, to: usize, cuts: &[Cut; 2]| -> Leg {
        let (x, y) = (&cuts[from], &cuts[to]);
        debug_assert_eq!(x.p_strand, y.p_strand);
        let pst = &sys.strands[x.p_strand];
        let np = pst.points.len();
        let direct = from != to && x.d == y.d && y.p_rank > x.p_rank;
        let middle = if direct {
            Vec::new()
        } else {
            let mut mids = Vec::new();
            let mut c = (x.d + 1) % np;
            while c != y.d {
                mids.push(chord_step(pst, c));
                c = (c + 1) % np;
            }
            mids
        };
        Leg {
            start_cut: from,
            end_cut: to,
            depart: x.p_out,
            arrive: y.p_in,
            middle,
            direct,
        }
    };

    let mut arcs: Vec<Arc> = Vec::new();
    let mut signatures: BTreeSet<(usize, usize, Vec<usize>)> = BTreeSet::new();
    let mut endpoints: u64 = 0;
    let mut contained: Option<NormalCurve> = None;
    let mut analysis = None;

    for (a_id, st) in sys.strands.iter().enumerate() {
        if st.label != 0 {
            continue;
        }
        let xs = &seqs[a_id];
        let n = st.points.len();
        if xs.is_empty() {
            // disjoint from every pushoff: contained exactly when the strand
            // and every region it bounds stay inside the image
            if analysis.is_none() {
                analysis = Some(analyze(amb, &sys)?);
            }
            let an = analysis.as_ref().unwrap();
            let inside = st.tris.iter().all(|t| emb.inv_tri.contains_key(t))
                && an
                    .regions
                    .iter()
                    .filter(|r| r.cycles.iter().any(|cy| cy.strands.contains(&a_id)))
                    .all(|r| r.tris.iter().all(|t| emb.inv_tri.contains_key(t)));
            if inside {
                let steps: Vec<Step> = (0..n).map(|c| chord_step(st, c)).collect();
                debug_assert!(walk_is_consistent(amb, &steps));
                contained = tighten_to_sub(emb, &steps)?;
            }
            continue;
        }
        assert_eq!(xs.len() % 2, 0, "crossings with pushoffs come in pairs");
        let m = xs.len();
        // a segment between consecutive crossings is outside when it touches
        // a triangle off the image or crosses a non-interior edge
        let mut outside = Vec::with_capacity(m);
        for i in 0..m {
            let chords = segment_chords(n, &xs[i], &xs[(i + 1) % m]);
            let mut out = chords.iter().any(|&c| !emb.inv_tri.contains_key(&st.tris[c]));
            for &c in &chords[..chords.len() - 1] {
                let e = token_edge[&st.points[(c + 1) % n]];
                if !emb.interior_edge.contains_key(&e) {
                    out = true;
                }
            }
            outside.push(out);
        }
        // the evidence above only ever marks a segment outside, and in true
        // minimal position the sides alternate, so agreement pins every
        // label; disagreement means the reduction stalled after all
        for i in 0..m {
            if outside[i] == outside[(i + 1) % m] {
                return Err(ProjectionError::DegenerateSurgery);
            }
        }
        for i in 0..m {
            if outside[i] {
                continue;
            }
            endpoints += 2;
            let (xa, xb) = (&xs[i], &xs[(i + 1) % m]);
            let cuts = [make_cut(xa, st), make_cut(xb, st)];
            let chords = segment_chords(n, xa, xb);
            let edges: Vec<usize> = chords[..chords.len() - 1]
                .iter()
                .map(|&c| emb.interior_edge[&token_edge[&st.points[(c + 1) % n]]])
                .collect();
            let arc_direct = chords.len() == 1;
            let arc_mid_f: Vec<Step> = if chords.len() <= 2 {
                Vec::new()
            } else {
                chords[1..chords.len() - 1]
                    .iter()
                    .map(|&c| chord_step(st, c))
                    .collect()
            };
            let arc_mid_r: Vec<Step> = arc_mid_f
                .iter()
                .rev()
                .map(|s| Step { tri: s.tri, s_in: s.s_out, s_out: s.s_in })
                .collect();
            let arc_f = Leg {
                start_cut: 0,
                end_cut: 1,
                depart: cuts[0].a_out,
                arrive: cuts[1].a_in,
                middle: arc_mid_f,
                direct: arc_direct,
            };
            let arc_r = Leg {
                start_cut: 1,
                end_cut: 0,
                depart: cuts[1].a_in,
                arrive: cuts[0].a_out,
                middle: arc_mid_r,
                direct: arc_direct,
            };
            let walks = if cuts[0].p_strand != cuts[1].p_strand {
                // one curve: around the arc and both full circles
                vec![emit_cycle(
                    &cuts,
                    &[arc_f, push_leg(1, 1, &cuts), arc_r, push_leg(0, 0, &cuts)],
                )]
            } else {
                // two curves: the arc with each of the two circle pieces
                vec![
                    emit_cycle(&cuts, &[arc_f, push_leg(1, 0, &cuts)]),
                    emit_cycle(&cuts, &[arc_r, push_leg(0, 1, &cuts)]),
                ]
            };
            for w in &walks {
                if !walk_is_consistent(amb, w) {
                    return Err(ProjectionError::DegenerateSurgery);
                }
            }
            let arc = Arc {
                start_comp: cuts[0].comp,
                end_comp: cuts[1].comp,
                edges,
                walks,
            };
            let sig_f = (arc.start_comp, arc.end_comp, arc.edges.clone());
            let mut rev = arc.edges.clone();
            rev.reverse();
            let sig = sig_f.clone().min((arc.end_comp, arc.start_comp, rev));
            if signatures.insert(sig) {
                arcs.push(arc);
            }
        }
    }
    if arcs.is_empty() && contained.is_none() {
        return Err(ProjectionError::NoEssentialIntersection);
    }
    Ok(ArcSystem { arcs, endpoints, contained })
}

/// Essential subsurface curves produced by surgering one arc with the
/// boundary circles at its endpoints.
pub fn project_arc(
    emb: &SubsurfaceEmbedding,
    arc: &Arc,
) -> Result<Vec<NormalCurve>, ProjectionError> {
    let mut out = Vec::new();
    for walk in &arc.walks {
        if let Some(c) = tighten_to_sub(emb, walk)? {
            if c.classify(&emb.sub)? == CurveClass::Essential {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// The subsurface projection of an essential ambient curve: the essential
/// curves arising from all its arcs, or the curve itself when contained.
pub fn project_curve(
    emb: &SubsurfaceEmbedding,
    alpha: &NormalCurve,
    budget: u64,
) -> Result<ProjectionSet, ProjectionError> {
    let arcsys = split_into_arcs(emb, alpha, budget)?;
    let mut raw = Vec::new();
    if let Some(c) = &arcsys.contained {
        if c.classify(&emb.sub)? == CurveClass::Essential {
            raw.push(c.clone());
        }
    }
    for arc in &arcsys.arcs {
        raw.extend(project_arc(emb, arc)?);
    }
    if raw.is_empty() {
        return Err(if arcsys.arcs.is_empty() {
            ProjectionError::NoEssentialIntersection
        } else {
            ProjectionError::DegenerateSurgery
        });
    }
    let mut curves: Vec<NormalCurve> = Vec::new();
    for c in raw {
        let mut dup = false;
        for kept in &curves {
            if isotopic(&emb.sub, kept, &c, budget)? {
                dup = true;
                break;
            }
        }
        if !dup {
            curves.push(c);
        }
    }
    curves.sort();
    Ok(ProjectionSet { curves })
}

/// Locate a curve among the normal vertices of a slice, up to isotopy.
fn locate(
    sub: &TriSurface,
    slice: &CurveGraphSlice,
    c: &NormalCurve,
    budget: u64,
) -> Result<Option<usize>, ProjectionError> {
    for (i, v) in slice.vertices.iter().enumerate() {
        if let CurveVertex::Normal(n) = v {
            if isotopic(sub, n, c, budget)? {
                return Ok(Some(i));
            }
        }
    }
    Ok(None)
}

/// Integer form of the curve-graph distance bound from an intersection
/// number: disjoint distinct curves are at distance one, and otherwise the
/// distance is at most 2 + 2 log2 of the intersection number.
fn intersection_distance_bound(i: u64) -> u32 {
    if i == 0 {
        1
    } else {
        2 + (i * i).ilog2()
    }
}

/// Diameter of a family of projection sets inside a curve-graph slice:
/// the largest pairwise distance upper bound over all curves involved.
/// None when some curve falls outside the slice or the slice disconnects.
pub fn projection_diameter(
    sub: &TriSurface,
    sets: &[ProjectionSet],
    slice: &CurveGraphSlice,
    budget: u64,
) -> Result<Option<u32>, ProjectionError> {
    let all: Vec<&NormalCurve> = sets.iter().flat_map(|s| s.curves.iter()).collect();
    let mut ids = Vec::with_capacity(all.len());
    for c in &all {
        match locate(sub, slice, c, budget)? {
            Some(i) => ids.push(i),
            None => return Ok(None),
        }
    }
    let mut diam = 0u32;
    for (k, &i) in ids.iter().enumerate() {
        for &j in &ids[k + 1..] {
            match slice.distance(i, j) {
                Some(d) => diam = diam.max(d),
                None => return Ok(None),
            }
        }
    }
    Ok(Some(diam))
}

/// Enclosure [lo, hi] for the distance between two projection sets, in the
/// diameter convention. The upper bound combines slice distances with the
/// intersection-number bound; the lower bound certifies 1 when some pair is
/// non-isotopic and 2 when some pair intersects.
pub fn projection_distance(
    sub: &TriSurface,
    a: &ProjectionSet,
    b: &ProjectionSet,
    slice: &CurveGraphSlice,
    budget: u64,
) -> Result<(u32, u32), ProjectionError> {
    let mut lo = 0u32;
    let mut hi = 0u32;
    for ca in &a.curves {
        let ia = locate(sub, slice, ca, budget)?;
        for cb in &b.curves {
            let (pair_lo, cross) = if isotopic(sub, ca, cb, budget)? {
                (0, 0)
            } else {
                let i = normal_intersection(sub, ca, cb, budget)?;
                (if i > 0 { 2 } else { 1 }, i)
            };
            let mut pair_hi = intersection_distance_bound(cross);
            if pair_lo == 0 {
                pair_hi = 0;
            } else if let (Some(x), Some(y)) = (ia, locate(sub, slice, cb, budget)?) {
                if let Some(d) = slice.distance(x, y) {
                    pair_hi = pair_hi.min(d);
                }
            }
            lo = lo.max(pair_lo);
            hi = hi.max(pair_hi);
        }
    }
    debug_assert!(lo <= hi);
    Ok((lo, hi))
}

/// The one-holed torus sitting as the first three triangles of the closed
/// genus-2 octagon fan.
pub fn holed_torus_in_genus2() -> SubsurfaceEmbedding {
    SubsurfaceEmbedding::new(
        crate::curves::surface::genus2_closed(),
        crate::curves::surface::one_holed_torus(),
        vec![0, 1, 2],
    )
    .expect("valid fixture")
}

/// The four-holed sphere whose boundary circles pair off to close up into a
/// genus-2 surface on the same decagon fan.
pub fn four_holed_sphere_in_genus2() -> SubsurfaceEmbedding {
    SubsurfaceEmbedding::new(
        crate::curves::surface::genus2_waist(),
        crate::curves::surface::four_holed_sphere(),
        (0..8).collect(),
    )
    .expect("valid fixture")
}

/// The two-holed torus as one half of the closed genus-3 double.
pub fn two_holed_torus_in_genus3() -> SubsurfaceEmbedding {
    SubsurfaceEmbedding::new(
        crate::curves::surface::genus3_closed(),
        crate::curves::surface::two_holed_torus(),
        (0..8).collect(),
    )
    .expect("valid fixture")
}

/// Parse a fixture file:
///
/// ```text
/// fixture <name>
/// ambient <surface-id>
/// sub <surface-id>
/// embedding t0:0 t1:1 ...
/// ```
///
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_fixture(text: &str) -> Result<(String, SubsurfaceEmbedding), ProjectionError> {
    let bad = |m: String| ProjectionError::BadFixture(m);
    let mut name = None;
    let mut ambient = None;
    let mut sub = None;
    let mut tri_map: Option<Vec<usize>> = None;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| bad(format!("bare keyword: {line}")))?;
        let rest = rest.trim();
        match key {
            "fixture" => name = Some(rest.to_string()),
            "ambient" | "sub" => {
                let surf = crate::curves::format::surface_by_id(rest)
                    .ok_or_else(|| bad(format!("unknown surface id {rest}")))?;
                if key == "ambient" {
                    ambient = Some(surf);
                } else {
                    sub = Some(surf);
                }
            }
            "embedding" => {
                let mut pairs = BTreeMap::new();
                for tok in rest.split_whitespace() {
                    let (t, a) = tok
                        .split_once(':')
                        .ok_or_else(|| bad(format!("bad embedding entry {tok}")))?;
                    let t: usize = t
                        .strip_prefix('t')
                        .and_then(|x| x.parse().ok())
                        .ok_or_else(|| bad(format!("bad embedding entry {tok}")))?;
                    let a: usize =
                        a.parse().map_err(|_| bad(format!("bad embedding entry {tok}")))?;
                    if pairs.insert(t, a).is_some() {
                        return Err(bad(format!("triangle t{t} mapped twice")));
                    }
                }
                let n = pairs.len();
                let mut map = Vec::with_capacity(n);
                for t in 0..n {
                    map.push(
                        *pairs
                            .get(&t)
                            .ok_or_else(|| bad(format!("missing entry for t{t}")))?,
                    );
                }
                tri_map = Some(map);
            }
            other => return Err(bad(format!("unknown keyword {other}"))),
        }
    }
    let name = name.ok_or_else(|| bad("missing fixture name".into()))?;
    let ambient = ambient.ok_or_else(|| bad("missing ambient surface".into()))?;
    let sub = sub.ok_or_else(|| bad("missing sub surface".into()))?;
    let tri_map = tri_map.ok_or_else(|| bad("missing embedding stanza".into()))?;
    let emb = SubsurfaceEmbedding::new(ambient, sub, tri_map)?;
    Ok((name, emb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::graph::enumerate_normal_graph;
    use crate::curves::surface::{genus2_closed, one_holed_torus};

    const BUDGET: u64 = 10_000_000;

    #[test]
    fn fixtures_build_and_validate() {
        for emb in [
            holed_torus_in_genus2(),
            four_holed_sphere_in_genus2(),
            two_holed_torus_in_genus3(),
        ] {
            for b in 0..emb.num_boundary_components() {
                assert_eq!(
                    emb.pushoff_sub(b).classify(&emb.sub),
                    Ok(CurveClass::Peripheral(b))
                );
                assert_eq!(
                    emb.pushoff_ambient(b).classify(&emb.ambient),
                    Ok(CurveClass::Essential)
                );
            }
        }
    }

    #[test]
    fn rejects_bad_embeddings() {
        let amb = genus2_closed();
        // a single triangle is a disk
        let disk = TriSurface::from_labels(&[["a", "b", "c"]]).unwrap();
        assert!(matches!(
            SubsurfaceEmbedding::new(amb.clone(), disk, vec![0]),
            Err(ProjectionError::BadEmbedding(_))
        ));
        // wrong triangle map breaks the gluings
        assert!(matches!(
            SubsurfaceEmbedding::new(amb.clone(), one_holed_torus(), vec![0, 2, 1]),
            Err(ProjectionError::BadEmbedding(_))
        ));
        assert!(matches!(
            SubsurfaceEmbedding::new(amb, one_holed_torus(), vec![0, 1, 1]),
            Err(ProjectionError::BadEmbedding(_))
        ));
    }

    #[test]
    fn fixture_file_round_trip() {
        let text = "fixture holed-torus-in-genus2\nambient genus2\nsub one-holed-torus\nembedding t0:0 t1:1 t2:2\n";
        let (name, emb) = parse_fixture(text).unwrap();
        assert_eq!(name, "holed-torus-in-genus2");
        assert_eq!(emb.tri_map(), &[0, 1, 2]);
        assert!(matches!(
            parse_fixture("fixture x\nambient nowhere\nsub torus\nembedding t0:0\n"),
            Err(ProjectionError::BadFixture(_))
        ));
        assert!(matches!(
            parse_fixture("ambient genus2\nsub one-holed-torus\nembedding t0:0 t1:1 t2:2\n"),
            Err(ProjectionError::BadFixture(_))
        ));
    }

    #[test]
    fn contained_curve_projects_to_itself() {
        let emb = holed_torus_in_genus2();
        let inner = NormalCurve::from_edge_weights(&emb.sub, &[0, 1, 1, 1, 0]).unwrap();
        let alpha = emb.to_ambient(&inner).unwrap();
        assert_eq!(alpha.classify(&emb.ambient), Ok(CurveClass::Essential));
        let ps = project_curve(&emb, &alpha, BUDGET).unwrap();
        assert_eq!(ps.curves.len(), 1);
        assert_eq!(isotopic(&emb.sub, &ps.curves[0], &inner, BUDGET), Ok(true));
    }

    #[test]
    fn disjoint_and_peripheral_curves_do_not_project() {
        let emb = holed_torus_in_genus2();
        let amb = &emb.ambient;
        // find an essential curve on the far handle missing the subsurface
        let ne = amb.num_edges();
        let mut image_edges = vec![false; ne];
        for &t_amb in emb.tri_map() {
            for s in 0..3 {
                image_edges[amb.side_edge(Side::new(t_amb, s)).0] = true;
            }
        }
        let mut far = None;
        'search: for mask in 1u32..(1 << ne) {
            let w: Vec<u64> = (0..ne).map(|e| u64::from(mask >> e & 1)).collect();
            if (0..ne).any(|e| image_edges[e] && w[e] > 0) {
                continue;
            }
            if let Ok(c) = NormalCurve::from_edge_weights(amb, &w) {
                if c.is_connected(amb) && c.classify(amb) == Ok(CurveClass::Essential) {
                    far = Some(c);
                    break 'search;
                }
            }
        }
        let far = far.expect("some small curve avoids the subsurface");
        assert_eq!(
            project_curve(&emb, &far, BUDGET),
            Err(ProjectionError::NoEssentialIntersection)
        );
        // the boundary pushoff itself carries no essential intersection
        let per = emb.pushoff_ambient(0).clone();
        assert_eq!(
            project_curve(&emb, &per, BUDGET),
            Err(ProjectionError::NoEssentialIntersection)
        );
    }

    #[test]
    fn crossing_curve_splits_and_projects() {
        let emb = holed_torus_in_genus2();
        // find an essential ambient curve meeting the boundary pushoff
        let amb = &emb.ambient;
        let ne = amb.num_edges();
        let mut alpha = None;
        'search: for mask in 1u32..3u32.pow(ne as u32) {
            let w: Vec<u64> = (0..ne)
                .map(|e| u64::from(mask / 3u32.pow(e as u32) % 3))
                .collect();
            if let Ok(c) = NormalCurve::from_edge_weights(amb, &w) {
                if c.is_connected(amb)
                    && c.classify(amb) == Ok(CurveClass::Essential)
                    && normal_intersection(amb, &c, emb.pushoff_ambient(0), BUDGET).unwrap() > 0
                {
                    alpha = Some(c);
                    break 'search;
                }
            }
        }
        let alpha = alpha.expect("some small curve crosses the subsurface boundary");
        let arcsys = split_into_arcs(&emb, &alpha, BUDGET).unwrap();
        assert!(arcsys.contained.is_none());
        assert!(!arcsys.arcs.is_empty());
        // endpoint conservation against the intersection numbers
        let mut total = 0;
        for b in 0..emb.num_boundary_components() {
            total +=
                normal_intersection(amb, &alpha, emb.pushoff_ambient(b), BUDGET).unwrap();
        }
        assert_eq!(arcsys.endpoints, total);
        let ps = project_curve(&emb, &alpha, BUDGET).unwrap();
        assert!(!ps.curves.is_empty());
        for c in &ps.curves {
            assert_eq!(c.classify(&emb.sub), Ok(CurveClass::Essential));
        }
        // projecting again is deterministic
        assert_eq!(project_curve(&emb, &alpha, BUDGET).unwrap(), ps);
    }

    #[test]
    fn projection_distance_in_slice() {
        let emb = holed_torus_in_genus2();
        let slice = enumerate_normal_graph(&emb.sub, 6, BUDGET).unwrap();
        let inner_a = NormalCurve::from_edge_weights(&emb.sub, &[0, 1, 1, 1, 0]).unwrap();
        let inner_b = NormalCurve::from_edge_weights(&emb.sub, &[1, 0, 1, 0, 0]).unwrap();
        let pa = project_curve(&emb, &emb.to_ambient(&inner_a).unwrap(), BUDGET).unwrap();
        let pb = project_curve(&emb, &emb.to_ambient(&inner_b).unwrap(), BUDGET).unwrap();
        let (lo, hi) = projection_distance(&emb.sub, &pa, &pb, &slice, BUDGET).unwrap();
        assert!(lo <= hi);
        let i = normal_intersection(&emb.sub, &inner_a, &inner_b, BUDGET).unwrap();
        if i > 0 {
            assert!(lo >= 2);
        }
        assert!(hi <= intersection_distance_bound(i));
        let d = projection_diameter(&emb.sub, &[pa.clone(), pb], &slice, BUDGET).unwrap();
        if let Some(d) = d {
            assert!(lo <= d);
        }
        let same = projection_distance(&emb.sub, &pa, &pa, &slice, BUDGET).unwrap();
        assert_eq!(same.0, 0);
    }
}
