//! Curve systems in generic position on a triangulated surface and the
//! arrangement analysis behind intersection numbers and classification.
//!
//! A curve system records, for each triangulation edge, the ordered points
//! where strands cross it, and each strand as a point sequence with the
//! triangle and local sides carrying every chord between consecutive
//! points. Analysis realizes each triangle as a convex polygon (points on a
//! parabola, exact rational arithmetic), computes the chord arrangement,
//! glues cells across triangulation edges into the complementary regions of
//! the curves, and reports each region's Euler characteristic and boundary
//! cycles. A transverse pair of curves is in minimal position exactly when
//! no complementary region is a bigon, so intersection numbers are computed
//! by repeatedly locating a bigon face and rerouting one of its sides
//! parallel to the other.

use super::surface::{Side, TriSurface};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub type Token = u64;

/// One transversally embedded strand, closed or a properly embedded arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strand {
    pub label: u8,
    pub closed: bool,
    /// points in traversal order; tokens are globally unique
    pub points: Vec<Token>,
    /// tris[i] carries the chord points[i] -> points[i+1 mod len]; closed
    /// strands have len == points.len(), open ones len == points.len() - 1
    pub tris: Vec<usize>,
    /// local sides of the chord endpoints inside tris[i]; needed because a
    /// self-glued edge meets the same triangle on two different sides
    pub sides: Vec<(u8, u8)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSystem {
    /// per edge id: tokens in order along the edge direction
    pub edge_points: Vec<Vec<Token>>,
    pub strands: Vec<Strand>,
    next: Token,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PositionError {
    #[error("work budget exhausted after {0} simplification moves")]
    ComplexityExceeded(u64),
    #[error("degenerate arrangement geometry")]
    DegenerateGeometry,
}

impl CurveSystem {
    pub fn new(surf: &TriSurface) -> CurveSystem {
        CurveSystem {
            edge_points: vec![Vec::new(); surf.num_edges()],
            strands: Vec::new(),
            next: 0,
        }
    }

    pub fn fresh_token(&mut self) -> Token {
        self.next += 1;
        self.next
    }

    pub fn edge_weight(&self, edge: usize) -> usize {
        self.edge_points[edge].len()
    }

    pub fn total_weight(&self) -> usize {
        self.edge_points.iter().map(Vec::len).sum()
    }
}

// ---- per-triangle arrangement ----

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PV {
    /// triangulation vertex heading local side s (= corner (s+2)%3)
    Corner(u8),
    Point(Token),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SubKind {
    /// polygon arc, a segment of a triangulation edge
    Arc,
    /// piece of a strand chord: (strand, chord index, piece index)
    Curve(usize, usize, usize),
}

#[derive(Debug, Clone, Copy)]
struct SubEdge {
    from: usize,
    to: usize,
    kind: SubKind,
}

#[derive(Debug, Clone, Copy)]
struct ChordSpec {
    pa: usize,
    pb: usize,
    strand: usize,
    chord: usize,
}

struct TriArr {
    npoly: usize,
    poly: Vec<PV>,
    /// local side of each polygon vertex
    poly_side: Vec<u8>,
    subedges: Vec<SubEdge>,
    /// ccw-ordered outgoing half-edge ids per local vertex
    rotation: Vec<Vec<usize>>,
    /// face on the left of each half-edge
    face_of: Vec<usize>,
    nfaces: usize,
    outer: usize,
    /// crossing metadata per crossing vertex: (strand, chord, strand, chord)
    crossings: Vec<(usize, usize, usize, usize)>,
}

fn he_from(s: &[SubEdge], h: usize) -> usize {
    if h % 2 == 0 {
        s[h / 2].from
    } else {
        s[h / 2].to
    }
}

fn he_to(s: &[SubEdge], h: usize) -> usize {
    if h % 2 == 0 {
        s[h / 2].to
    } else {
        s[h / 2].from
    }
}

impl TriArr {
    fn build(
        poly: Vec<PV>,
        poly_side: Vec<u8>,
        chords: Vec<ChordSpec>,
        attempt: u64,
    ) -> Result<TriArr, PositionError> {
        let n = poly.len();
        // strictly increasing x keeps the vertices convex on the parabola;
        // the attempt term perturbs spacing to break accidental concurrency
        let coord = |k: usize| -> (BigInt, BigInt) {
            let x = BigInt::from(k as u64 + 1)
                + BigInt::from(attempt) * BigInt::from(((k + 1) * (k + 1)) as u64);
            let y = &x * &x;
            (x, y)
        };
        let interleave = |c1: &ChordSpec, c2: &ChordSpec| -> bool {
            let (a, b) = (c1.pa.min(c1.pb), c1.pa.max(c1.pb));
            let inside = |p: usize| a < p && p < b;
            inside(c2.pa) != inside(c2.pb)
        };
        let cross_x = |c1: &ChordSpec, c2: &ChordSpec| -> BigRational {
            let (x1, y1) = coord(c1.pa);
            let (x2, y2) = coord(c1.pb);
            let (x3, y3) = coord(c2.pa);
            let (x4, y4) = coord(c2.pb);
            let d = (&x1 - &x2) * (&y3 - &y4) - (&y1 - &y2) * (&x3 - &x4);
            assert!(!d.is_zero(), "interleaved chords are never parallel");
            let a = &x1 * &y2 - &y1 * &x2;
            let b = &x3 * &y4 - &y3 * &x4;
            BigRational::new(&a * (&x3 - &x4) - (&x1 - &x2) * &b, d)
        };
        let mut xmeta = Vec::new();
        let mut per_chord: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); chords.len()];
        let mut nx = 0usize;
        for i in 0..chords.len() {
            for j in (i + 1)..chords.len() {
                if !interleave(&chords[i], &chords[j]) {
                    continue;
                }
                let px = cross_x(&chords[i], &chords[j]);
                let v = n + nx;
                nx += 1;
                xmeta.push((
                    chords[i].strand,
                    chords[i].chord,
                    chords[j].strand,
                    chords[j].chord,
                ));
                per_chord[i].push((v, px.clone()));
                per_chord[j].push((v, px));
            }
        }
        // three concurrent chords would merge arrangement vertices; the
        // caller retries with a different realization
        for list in &per_chord {
            for a in 0..list.len() {
                for b in (a + 1)..list.len() {
                    if list[a].1 == list[b].1 {
                        return Err(PositionError::DegenerateGeometry);
                    }
                }
            }
        }
        let nv = n + nx;
        let mut subedges = Vec::new();
        for k in 0..n {
            subedges.push(SubEdge { from: k, to: (k + 1) % n, kind: SubKind::Arc });
        }
        let mut chord_first_sub = vec![0usize; chords.len()];
        let mut chord_piece_count = vec![0usize; chords.len()];
        for (ci, ch) in chords.iter().enumerate() {
            let mut stops = per_chord[ci].clone();
            let (xa, _) = coord(ch.pa);
            let (xb, _) = coord(ch.pb);
            let ltr = xa < xb;
            stops.sort_by(|u, v| if ltr { u.1.cmp(&v.1) } else { v.1.cmp(&u.1) });
            chord_first_sub[ci] = subedges.len();
            chord_piece_count[ci] = stops.len() + 1;
            let mut prev = ch.pa;
            for (piece, (v, _)) in stops.iter().enumerate() {
                subedges.push(SubEdge {
                    from: prev,
                    to: *v,
                    kind: SubKind::Curve(ch.strand, ch.chord, piece),
                });
                prev = *v;
            }
            subedges.push(SubEdge {
                from: prev,
                to: ch.pb,
                kind: SubKind::Curve(ch.strand, ch.chord, stops.len()),
            });
        }
        // rotations; at a polygon vertex the ccw order is
        // [arc toward k+1, the chord end if any, arc from k-1 reversed]
        let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for k in 0..n {
            let mut out = vec![2 * k];
            for (ci, ch) in chords.iter().enumerate() {
                if ch.pa == k {
                    out.push(2 * chord_first_sub[ci]);
                } else if ch.pb == k {
                    out.push(2 * (chord_first_sub[ci] + chord_piece_count[ci] - 1) + 1);
                }
            }
            out.push(2 * ((k + n - 1) % n) + 1);
            rotation[k] = out;
        }
        // at a crossing of chords (a->b) and (p->q) the ccw order is
        // [to a, to p, to b, to q] when cross(b-a, q-p) > 0
        for v in n..nv {
            let xi = v - n;
            let meta = xmeta[xi];
            let mut to_a = usize::MAX;
            let mut to_b = usize::MAX;
            let mut to_p = usize::MAX;
            let mut to_q = usize::MAX;
            for (si, se) in subedges.iter().enumerate() {
                for (h, tail) in [(2 * si, se.from), (2 * si + 1, se.to)] {
                    if tail != v {
                        continue;
                    }
                    let SubKind::Curve(s, c, _) = se.kind else { unreachable!() };
                    let first = (s, c) == (meta.0, meta.1);
                    let toward_end = h % 2 == 0;
                    match (first, toward_end) {
                        (true, true) => to_b = h,
                        (true, false) => to_a = h,
                        (false, true) => to_q = h,
                        (false, false) => to_p = h,
                    }
                }
            }
            let ca = chords
                .iter()
                .find(|c| (c.strand, c.chord) == (meta.0, meta.1))
                .unwrap();
            let cb = chords
                .iter()
                .find(|c| (c.strand, c.chord) == (meta.2, meta.3))
                .unwrap();
            let (ax, ay) = coord(ca.pa);
            let (bx, by) = coord(ca.pb);
            let (px, py) = coord(cb.pa);
            let (qx, qy) = coord(cb.pb);
            let cr = (&bx - &ax) * (&qy - &py) - (&by - &ay) * (&qx - &px);
            let order = if cr > BigInt::zero() {
                vec![to_a, to_p, to_b, to_q]
            } else {
                vec![to_a, to_q, to_b, to_p]
            };
            assert!(order.iter().all(|&h| h != usize::MAX));
            rotation[v] = order;
        }
        // faces on the left: next(h) = ccw-predecessor of twin(h)
        let nh = 2 * subedges.len();
        let mut face_of = vec![usize::MAX; nh];
        let mut nfaces = 0usize;
        let pred = |h: usize| -> usize {
            let v = he_from(&subedges, h);
            let rot = &rotation[v];
            let pos = rot.iter().position(|&x| x == h).expect("half-edge in rotation");
            rot[(pos + rot.len() - 1) % rot.len()]
        };
        for h0 in 0..nh {
            if face_of[h0] != usize::MAX {
                continue;
            }
            let fid = nfaces;
            nfaces += 1;
            let mut h = h0;
            loop {
                face_of[h] = fid;
                h = pred(h ^ 1);
                if h == h0 {
                    break;
                }
            }
        }
        // the outer face sits on the left of every reversed polygon arc
        let outer = face_of[1];
        for k in 0..n {
            debug_assert_eq!(face_of[2 * k + 1], outer);
        }
        Ok(TriArr {
            npoly: n,
            poly,
            poly_side,
            subedges,
            rotation,
            face_of,
            nfaces,
            outer,
            crossings: xmeta,
        })
    }

    fn pred_ccw(&self, h: usize) -> usize {
        let v = he_from(&self.subedges, h);
        let rot = &self.rotation[v];
        let pos = rot.iter().position(|&x| x == h).expect("half-edge in rotation");
        rot[(pos + rot.len() - 1) % rot.len()]
    }
}

// ---- global analysis ----

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionInfo {
    pub chi: i64,
    pub cells: usize,
    pub cycles: Vec<CycleInfo>,
    /// triangles the region touches, sorted
    pub tris: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleInfo {
    /// labels of curve sides appearing on the cycle, sorted
    pub labels: Vec<u8>,
    /// surface boundary components touched, sorted
    pub boundary_comps: Vec<usize>,
    pub crossing_visits: usize,
    pub length: usize,
    /// maximal runs of one kind of edge (a label, or surface boundary)
    pub label_runs: usize,
    /// strand ids appearing on the cycle, sorted
    pub strands: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct BigonRun {
    pub strand: usize,
    /// tokens strictly between the two crossings, in walk order
    pub tokens: Vec<Token>,
    /// per token: local sides in the preceding and following gap triangle
    pub token_sides: Vec<(u8, u8)>,
    /// per token: region lies toward the earlier position on its edge
    pub region_side_prev: Vec<bool>,
    /// gap triangles, tokens.len() + 1 entries from crossing to crossing
    pub tris: Vec<usize>,
    /// strand points flanking the run just outside the crossings
    pub before: Token,
    pub after: Token,
    /// local sides of before/after inside tris[0] / tris.last()
    pub before_side: u8,
    pub after_side: u8,
    /// strand chord indices carrying the first and last walk piece
    pub first_chord: usize,
    pub last_chord: usize,
}

#[derive(Debug, Clone)]
pub struct BigonInfo {
    pub region: usize,
    pub runs: [BigonRun; 2],
}

#[derive(Debug, Clone)]
pub struct Analysis {
    /// transverse crossings between strands of different labels
    pub cross_labels: u64,
    /// crossings between strands of equal label; embedded systems have none
    pub cross_same: u64,
    pub regions: Vec<RegionInfo>,
    pub bigon: Option<BigonInfo>,
}

pub fn analyze(surf: &TriSurface, sys: &CurveSystem) -> Result<Analysis, PositionError> {
    for attempt in 0..32 {
        match try_analyze(surf, sys, attempt) {
            Err(PositionError::DegenerateGeometry) => continue,
            other => return other,
        }
    }
    Err(PositionError::DegenerateGeometry)
}

/// One transverse crossing as seen from a strand, ordered along it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingRef {
    /// chord index along this strand carrying the crossing
    pub chord: usize,
    /// position among the crossings on that chord, in strand direction
    pub rank: usize,
    pub other_strand: usize,
    pub other_chord: usize,
    /// arrangement-wide identity shared by both views of the crossing
    pub id: (usize, usize),
}

/// For every strand, its crossings in traversal order.
pub fn crossing_sequences(
    surf: &TriSurface,
    sys: &CurveSystem,
) -> Result<Vec<Vec<CrossingRef>>, PositionError> {
    let mut built = None;
    for attempt in 0..32 {
        match build_arrs(surf, sys, attempt) {
            Err(PositionError::DegenerateGeometry) => continue,
            Err(e) => return Err(e),
            Ok(b) => {
                built = Some(b);
                break;
            }
        }
    }
    let (arrs, _) = built.ok_or(PositionError::DegenerateGeometry)?;
    let mut out: Vec<Vec<CrossingRef>> = vec![Vec::new(); sys.strands.len()];
    for (t, arr) in arrs.iter().enumerate() {
        for se in &arr.subedges {
            let SubKind::Curve(s, c, piece) = se.kind else { continue };
            if se.to < arr.npoly {
                continue;
            }
            let xid = se.to - arr.npoly;
            let meta = arr.crossings[xid];
            let (os, oc) = if (s, c) == (meta.0, meta.1) {
                (meta.2, meta.3)
            } else {
                (meta.0, meta.1)
            };
            out[s].push(CrossingRef {
                chord: c,
                rank: piece,
                other_strand: os,
                other_chord: oc,
                id: (t, xid),
            });
        }
    }
    for list in &mut out {
        list.sort_unstable_by_key(|x| (x.chord, x.rank));
    }
    Ok(out)
}

type BuiltArrs = (Vec<TriArr>, Vec<Vec<(usize, usize)>>);

fn build_arrs(surf: &TriSurface, sys: &CurveSystem, attempt: u64) -> Result<BuiltArrs, PositionError> {
    let ntri = surf.num_triangles();
    // polygons: corner then the side's points in side direction, per side
    let mut polys: Vec<Vec<PV>> = Vec::with_capacity(ntri);
    let mut polys_side: Vec<Vec<u8>> = Vec::with_capacity(ntri);
    // (edge, segment index along edge direction) per polygon arc
    let mut arc_seg: Vec<Vec<(usize, usize)>> = Vec::with_capacity(ntri);
    // polygon index of every (side, token) incidence
    let mut point_pos: Vec<BTreeMap<(u8, Token), usize>> = Vec::with_capacity(ntri);
    for t in 0..ntri {
        let mut poly = Vec::new();
        let mut pside = Vec::new();
        let mut segs = Vec::new();
        let mut pos = BTreeMap::new();
        for s in 0..3u8 {
            poly.push(PV::Corner(s));
            pside.push(s);
            let (e, fwd) = surf.side_edge(Side::new(t, s));
            let pts = &sys.edge_points[e];
            let m = pts.len();
            let ordered: Vec<Token> = if fwd {
                pts.clone()
            } else {
                pts.iter().rev().copied().collect()
            };
            for (j, p) in ordered.into_iter().enumerate() {
                // segment preceding the j-th point in side direction
                segs.push((e, if fwd { j } else { m - j }));
                pos.insert((s, p), poly.len());
                poly.push(PV::Point(p));
                pside.push(s);
            }
            segs.push((e, if fwd { m } else { 0 }));
        }
        polys.push(poly);
        polys_side.push(pside);
        arc_seg.push(segs);
        point_pos.push(pos);
    }
    // chords
    let mut chords: Vec<Vec<ChordSpec>> = vec![Vec::new(); ntri];
    for (si, st) in sys.strands.iter().enumerate() {
        for c in 0..st.tris.len() {
            let a = st.points[c];
            let b = st.points[(c + 1) % st.points.len()];
            let t = st.tris[c];
            let (sa, sb) = st.sides[c];
            let pa = *point_pos[t]
                .get(&(sa, a))
                .expect("chord start on the recorded side");
            let pb = *point_pos[t]
                .get(&(sb, b))
                .expect("chord end on the recorded side");
            chords[t].push(ChordSpec { pa, pb, strand: si, chord: c });
        }
    }
    let mut arrs = Vec::with_capacity(ntri);
    for t in 0..ntri {
        arrs.push(TriArr::build(
            polys[t].clone(),
            polys_side[t].clone(),
            chords[t].clone(),
            attempt,
        )?);
    }
    Ok((arrs, arc_seg))
}

fn try_analyze(
    surf: &TriSurface,
    sys: &CurveSystem,
    attempt: u64,
) -> Result<Analysis, PositionError> {
    let (arrs, arc_seg) = build_arrs(surf, sys, attempt)?;
    let ntri = surf.num_triangles();
    let mut cross_labels = 0u64;
    let mut cross_same = 0u64;
    for arr in &arrs {
        for &(sa, _, sb, _) in &arr.crossings {
            if sys.strands[sa].label == sys.strands[sb].label {
                cross_same += 1;
            } else {
                cross_labels += 1;
            }
        }
    }
    // cells (inner faces) and the region union-find
    let mut cell_id: Vec<Vec<usize>> = Vec::with_capacity(ntri);
    let mut ncells = 0usize;
    for arr in &arrs {
        let mut ids = vec![usize::MAX; arr.nfaces];
        for (f, id) in ids.iter_mut().enumerate() {
            if f != arr.outer {
                *id = ncells;
                ncells += 1;
            }
        }
        cell_id.push(ids);
    }
    let mut uf: Vec<usize> = (0..ncells).collect();
    fn find(uf: &mut Vec<usize>, mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    // cells on the sides of every edge segment
    let mut seg_cells: Vec<Vec<Vec<usize>>> = sys
        .edge_points
        .iter()
        .map(|p| vec![Vec::new(); p.len() + 1])
        .collect();
    for t in 0..ntri {
        let arr = &arrs[t];
        for k in 0..arr.npoly {
            let (e, j) = arc_seg[t][k];
            let f = arr.face_of[2 * k];
            seg_cells[e][j].push(cell_id[t][f]);
        }
    }
    for (e, segs) in seg_cells.iter().enumerate() {
        let expected = if surf.is_boundary_edge(e) { 1 } else { 2 };
        for pair in segs {
            assert_eq!(pair.len(), expected, "segment side count");
            if expected == 2 {
                let a = find(&mut uf, pair[0]);
                let b = find(&mut uf, pair[1]);
                uf[a] = b;
            }
        }
    }
    let mut region_of_cell = vec![usize::MAX; ncells];
    let mut region_index: BTreeMap<usize, usize> = BTreeMap::new();
    for c in 0..ncells {
        let root = find(&mut uf, c);
        let next = region_index.len();
        let id = *region_index.entry(root).or_insert(next);
        region_of_cell[c] = id;
    }
    let nregions = region_index.len();
    let mut cells_in = vec![0usize; nregions];
    for c in 0..ncells {
        cells_in[region_of_cell[c]] += 1;
    }
    let mut interior_edges = vec![0usize; nregions];
    for (e, segs) in seg_cells.iter().enumerate() {
        if surf.is_boundary_edge(e) {
            continue;
        }
        for pair in segs {
            let r = region_of_cell[pair[0]];
            debug_assert_eq!(r, region_of_cell[pair[1]]);
            interior_edges[r] += 1;
        }
    }
    // interior triangulation vertices: curves avoid vertices, so a vertex
    // off the surface boundary is interior to exactly one region
    let mut interior_vertices = vec![0usize; nregions];
    {
        let mut seen = vec![false; surf.num_vertices()];
        for t in 0..ntri {
            let arr = &arrs[t];
            for k in 0..arr.npoly {
                if let PV::Corner(s) = arr.poly[k] {
                    let v = surf.corner_vertex(t, (s + 2) % 3);
                    if seen[v] {
                        continue;
                    }
                    seen[v] = true;
                    if surf.vertex_on_boundary(v) {
                        continue;
                    }
                    let f = arr.face_of[2 * k];
                    interior_vertices[region_of_cell[cell_id[t][f]]] += 1;
                }
            }
        }
    }
    // boundary walks: boundary half-edges are curve pieces and arcs of
    // surface boundary edges; the walk keeps its region on the left and
    // jumps across interior edge gluings while rotating
    let is_boundary_he = |t: usize, h: usize| -> bool {
        match arrs[t].subedges[h / 2].kind {
            SubKind::Curve(_, _, _) => true,
            // only the forward copy has a region on its left; the reversed
            // copy faces the polygon exterior
            SubKind::Arc => h % 2 == 0 && surf.is_boundary_edge(arc_seg[t][h / 2].0),
        }
    };
    let next_boundary = |t0: usize, h0: usize| -> (usize, usize) {
        let mut t = t0;
        let mut h = h0 ^ 1;
        loop {
            h = arrs[t].pred_ccw(h);
            match arrs[t].subedges[h / 2].kind {
                SubKind::Curve(_, _, _) => return (t, h),
                SubKind::Arc => {
                    let k = h / 2;
                    let (e, j) = arc_seg[t][k];
                    if surf.is_boundary_edge(e) {
                        return (t, h);
                    }
                    // cross the gluing: of the partner copies of segment
                    // (e, j), continue from the one leaving the same
                    // endpoint, i.e. running the same way along the edge
                    let s_here = arrs[t].poly_side[arrs[t].subedges[k].from];
                    let (_, fwd_here) = surf.side_edge(Side::new(t, s_here));
                    let d = (h % 2 == 0) == fwd_here;
                    let here = Side::new(t, s_here);
                    let (s1, s2) = surf.edge_sides(e);
                    let other = if s1 == here { s2.expect("interior edge") } else { s1 };
                    let ot = other.tri;
                    let ok = arc_seg[ot]
                        .iter()
                        .enumerate()
                        .find(|&(kk, &(ee, jj))| {
                            ee == e
                                && jj == j
                                && arrs[ot].poly_side[arrs[ot].subedges[kk].from] == other.side
                        })
                        .map(|(kk, _)| kk)
                        .expect("segment present in partner triangle");
                    let (_, fwd_other) = surf.side_edge(other);
                    let nh = if fwd_other == d { 2 * ok } else { 2 * ok + 1 };
                    t = ot;
                    h = nh;
                }
            }
        }
    };
    let mut region_tris: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nregions];
    for (t, ids) in cell_id.iter().enumerate() {
        for &c in ids {
            if c != usize::MAX {
                region_tris[region_of_cell[c]].insert(t);
            }
        }
    }
    let mut visited: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut regions: Vec<RegionInfo> = (0..nregions)
        .map(|r| RegionInfo {
            chi: 0,
            cells: cells_in[r],
            cycles: Vec::new(),
            tris: region_tris[r].iter().copied().collect(),
        })
        .collect();
    let mut boundary_edges = vec![0usize; nregions];
    let mut vertex_visits = vec![0usize; nregions];
    let mut walks: Vec<Vec<Vec<(usize, usize)>>> = vec![Vec::new(); nregions];
    for t in 0..ntri {
        for h in 0..2 * arrs[t].subedges.len() {
            if !is_boundary_he(t, h) || visited.contains(&(t, h)) {
                continue;
            }
            let r = region_of_cell[cell_id[t][arrs[t].face_of[h]]];
            let mut walk = Vec::new();
            let (mut ct, mut ch) = (t, h);
            loop {
                visited.insert((ct, ch));
                walk.push((ct, ch));
                let (nt, nh) = next_boundary(ct, ch);
                if (nt, nh) == (t, h) {
                    break;
                }
                ct = nt;
                ch = nh;
            }
            let mut labels = Vec::new();
            let mut comps = Vec::new();
            let mut strands_on = Vec::new();
            let mut crossing_visits = 0usize;
            let mut marks: Vec<i32> = Vec::new();
            for &(wt, wh) in &walk {
                match arrs[wt].subedges[wh / 2].kind {
                    SubKind::Curve(s, _, _) => {
                        let l = sys.strands[s].label;
                        if !labels.contains(&l) {
                            labels.push(l);
                        }
                        if !strands_on.contains(&s) {
                            strands_on.push(s);
                        }
                        marks.push(l as i32);
                    }
                    SubKind::Arc => {
                        let e = arc_seg[wt][wh / 2].0;
                        let c = surf.boundary_component_of_edge(e).expect("boundary edge");
                        if !comps.contains(&c) {
                            comps.push(c);
                        }
                        marks.push(-1);
                    }
                }
                if he_to(&arrs[wt].subedges, wh) >= arrs[wt].npoly {
                    crossing_visits += 1;
                }
            }
            let m = marks.len();
            let mut label_runs = 0usize;
            for i in 0..m {
                if marks[i] != marks[(i + m - 1) % m] {
                    label_runs += 1;
                }
            }
            if label_runs == 0 {
                label_runs = 1;
            }
            boundary_edges[r] += walk.len();
            vertex_visits[r] += walk.len();
            labels.sort_unstable();
            comps.sort_unstable();
            strands_on.sort_unstable();
            regions[r].cycles.push(CycleInfo {
                labels,
                boundary_comps: comps,
                crossing_visits,
                length: walk.len(),
                label_runs,
                strands: strands_on,
            });
            walks[r].push(walk);
        }
    }
    for r in 0..nregions {
        let v = interior_vertices[r] as i64 + vertex_visits[r] as i64;
        let e = interior_edges[r] as i64 + boundary_edges[r] as i64;
        regions[r].chi = v - e + cells_in[r] as i64;
    }
    // bigon: disk region bounded by one all-curve cycle with two label runs
    // meeting at two crossings
    let mut bigon = None;
    for r in 0..nregions {
        if regions[r].chi != 1 || regions[r].cycles.len() != 1 {
            continue;
        }
        let cy = &regions[r].cycles[0];
        if !cy.boundary_comps.is_empty()
            || cy.labels.len() != 2
            || cy.label_runs != 2
            || cy.crossing_visits != 2
        {
            continue;
        }
        let walk = &walks[r][0];
        let n = walk.len();
        let at_crossing_end = |i: usize| -> bool {
            let (wt, wh) = walk[i];
            he_to(&arrs[wt].subedges, wh) >= arrs[wt].npoly
        };
        let start = (0..n)
            .find(|&i| at_crossing_end(i))
            .map(|i| (i + 1) % n)
            .expect("two crossing visits on a bigon cycle");
        let rotated: Vec<(usize, usize)> = (0..n).map(|i| walk[(start + i) % n]).collect();
        let split = (0..n)
            .find(|&i| {
                let (wt, wh) = rotated[i];
                he_to(&arrs[wt].subedges, wh) >= arrs[wt].npoly && i + 1 < n
            })
            .map(|i| i + 1)
            .expect("second crossing visit inside the cycle");
        let run_a = extract_run(sys, &arrs, surf, &rotated[..split]);
        let run_b = extract_run(sys, &arrs, surf, &rotated[split..]);
        bigon = Some(BigonInfo { region: r, runs: [run_a, run_b] });
        break;
    }
    Ok(Analysis { cross_labels, cross_same, regions, bigon })
}

/// Pull the strand-level description of one side of a bigon out of its walk
/// half-edges. The run starts and ends at crossing vertices.
fn extract_run(
    sys: &CurveSystem,
    arrs: &[TriArr],
    surf: &TriSurface,
    run: &[(usize, usize)],
) -> BigonRun {
    let chord_of = |t: usize, h: usize| -> (usize, usize) {
        match arrs[t].subedges[h / 2].kind {
            SubKind::Curve(s, c, _) => (s, c),
            SubKind::Arc => unreachable!("bigon cycles consist of curve pieces"),
        }
    };
    let (t0, h0) = run[0];
    let (strand, first_chord) = chord_of(t0, h0);
    let (tl, hl) = *run.last().unwrap();
    let (strand2, last_chord) = chord_of(tl, hl);
    assert_eq!(strand, strand2, "one strand per bigon side");
    let mut tokens = Vec::new();
    let mut token_sides = Vec::new();
    let mut region_side_prev = Vec::new();
    let mut tris = vec![t0];
    for i in 1..run.len() {
        let (pt, ph) = run[i - 1];
        let (ct, ch) = run[i];
        if chord_of(pt, ph) == chord_of(ct, ch) {
            continue;
        }
        // gap transition through a token on a triangulation edge
        let vprev = he_to(&arrs[pt].subedges, ph);
        let PV::Point(tok) = arrs[pt].poly[vprev] else {
            unreachable!("chord transitions happen at edge points")
        };
        let s_prev = arrs[pt].poly_side[vprev];
        let vcur = he_from(&arrs[ct].subedges, ch);
        let s_cur = arrs[ct].poly_side[vcur];
        tokens.push(tok);
        token_sides.push((s_prev, s_cur));
        let toward_poly_prev = region_side_is_prev(&arrs[pt], ph, vprev);
        let (_, fwd) = surf.side_edge(Side::new(pt, s_prev));
        region_side_prev.push(if fwd { toward_poly_prev } else { !toward_poly_prev });
        tris.push(ct);
    }
    let st = &sys.strands[strand];
    let np = st.points.len();
    let endpoints = |c: usize| -> (Token, Token, u8, u8) {
        let (sa, sb) = st.sides[c];
        (st.points[c], st.points[(c + 1) % np], sa, sb)
    };
    // even half-edges traverse a chord in its own direction
    let (a0, b0, sa0, sb0) = endpoints(first_chord);
    let (before, before_side) = if h0 % 2 == 0 { (a0, sa0) } else { (b0, sb0) };
    let (a1, b1, sa1, sb1) = endpoints(last_chord);
    let (after, after_side) = if hl % 2 == 0 { (b1, sb1) } else { (a1, sa1) };
    BigonRun {
        strand,
        tokens,
        token_sides,
        region_side_prev,
        tris,
        before,
        after,
        before_side,
        after_side,
        first_chord,
        last_chord,
    }
}

/// At polygon vertex `v`, with the walk's region on the left of the
/// incoming half-edge `ih`, decide whether the region lies toward the
/// polygon-previous direction along the side.
fn region_side_is_prev(arr: &TriArr, ih: usize, v: usize) -> bool {
    let rot = &arr.rotation[v];
    let toward_next = rot[0];
    let toward_prev = *rot.last().unwrap();
    let mut cur = ih ^ 1;
    loop {
        let pos = rot.iter().position(|&x| x == cur).expect("half-edge in rotation");
        cur = rot[(pos + rot.len() - 1) % rot.len()];
        if cur == toward_next {
            return false;
        }
        if cur == toward_prev {
            return true;
        }
    }
}

// ---- bigon removal ----

/// Remove one bigon by rerouting one of its sides parallel to the other.
/// Drops the crossing count between the two labels by exactly two.
pub fn reroute(surf: &TriSurface, sys: &mut CurveSystem, b: &BigonInfo) {
    // reroute the shorter side; ties break by label then strand id
    let key = |r: &BigonRun| (r.tokens.len(), sys.strands[r.strand].label, r.strand);
    let (ra, rb) = if key(&b.runs[0]) <= key(&b.runs[1]) {
        (&b.runs[0], &b.runs[1])
    } else {
        (&b.runs[1], &b.runs[0])
    };
    // the follow run traverses the cycle the opposite way; reverse it so
    // both runs read from the same crossing to the same crossing
    let m = rb.tokens.len();
    let f_tokens: Vec<Token> = rb.tokens.iter().rev().copied().collect();
    let f_sides: Vec<(u8, u8)> = rb.token_sides.iter().rev().map(|&(x, y)| (y, x)).collect();
    let f_region_prev: Vec<bool> = rb.region_side_prev.iter().rev().copied().collect();
    let f_tris: Vec<usize> = rb.tris.iter().rev().copied().collect();
    debug_assert_eq!(f_tris[0], ra.tris[0], "runs share the crossing triangle");
    debug_assert_eq!(*f_tris.last().unwrap(), *ra.tris.last().unwrap());
    // fresh tokens inserted next to the follow tokens, on the side away
    // from the bigon region
    let mut new_tokens = Vec::with_capacity(m);
    for j in 0..m {
        let q = f_tokens[j];
        let tok = sys.fresh_token();
        let e = surf.side_edge(Side::new(f_tris[j + 1], f_sides[j].1)).0;
        let idx = sys.edge_points[e]
            .iter()
            .position(|&x| x == q)
            .expect("follow token on its edge");
        let at = if f_region_prev[j] { idx + 1 } else { idx };
        sys.edge_points[e].insert(at, tok);
        new_tokens.push(tok);
    }
    let st = sys.strands[ra.strand].clone();
    // a run with both end crossings on one chord can wrap the whole closed
    // strand; the complement is then a single chord piece inside the
    // crossing triangle, and the rerouted strand is the parallel path alone,
    // closed up through that triangle
    if st.closed && ra.tokens.len() == st.points.len() {
        assert!(m > 0, "a wrapped run reroutes onto a nonempty path");
        let mut tris_new = Vec::with_capacity(m);
        let mut sides_new = Vec::with_capacity(m);
        for i in 0..m {
            if i + 1 < m {
                tris_new.push(f_tris[i + 1]);
                sides_new.push((f_sides[i].1, f_sides[i + 1].0));
            } else {
                tris_new.push(f_tris[0]);
                sides_new.push((f_sides[m - 1].1, f_sides[0].0));
            }
        }
        let old_set: BTreeSet<Token> = st.points.iter().copied().collect();
        sys.strands[ra.strand] = Strand {
            label: st.label,
            closed: true,
            points: new_tokens,
            tris: tris_new,
            sides: sides_new,
        };
        for gone in &old_set {
            for pts in sys.edge_points.iter_mut() {
                if let Some(i) = pts.iter().position(|x| x == gone) {
                    pts.remove(i);
                    break;
                }
            }
        }
        return;
    }
    // new chords from before to after, parallel to the follow run
    let mut new_chords: Vec<(usize, u8, u8)> = Vec::with_capacity(m + 1);
    if m == 0 {
        new_chords.push((f_tris[0], ra.before_side, ra.after_side));
    } else {
        new_chords.push((f_tris[0], ra.before_side, f_sides[0].0));
        for j in 0..m - 1 {
            new_chords.push((f_tris[j + 1], f_sides[j].1, f_sides[j + 1].0));
        }
        new_chords.push((*f_tris.last().unwrap(), f_sides[m - 1].1, ra.after_side));
    }
    // splice the strand: keep the complement of the run and insert the new
    // path between `before` and `after`
    let st = sys.strands[ra.strand].clone();
    let np = st.points.len();
    let ib = st
        .points
        .iter()
        .position(|&p| p == ra.before)
        .expect("flank on strand");
    let ia = st
        .points
        .iter()
        .position(|&p| p == ra.after)
        .expect("flank on strand");
    let forward = ra.first_chord == ib;
    if !forward {
        debug_assert_eq!(ra.first_chord, (ib + np - 1) % np, "run flanks its first chord");
    }
    let mut points: Vec<Token>;
    let mut tris_new: Vec<usize>;
    let mut sides_new: Vec<(u8, u8)>;
    if st.closed {
        if forward {
            // kept points ia..=ib cyclically, kept chords ia..ib
            let keep = (ib + np - ia) % np + 1;
            points = (0..keep).map(|i| st.points[(ia + i) % np]).collect();
            tris_new = (0..keep - 1).map(|i| st.tris[(ia + i) % np]).collect();
            sides_new = (0..keep - 1).map(|i| st.sides[(ia + i) % np]).collect();
            points.extend(new_tokens.iter().copied());
            for &(t, sa, sb) in &new_chords {
                tris_new.push(t);
                sides_new.push((sa, sb));
            }
        } else {
            let keep = (ia + np - ib) % np + 1;
            points = (0..keep).map(|i| st.points[(ib + i) % np]).collect();
            tris_new = (0..keep - 1).map(|i| st.tris[(ib + i) % np]).collect();
            sides_new = (0..keep - 1).map(|i| st.sides[(ib + i) % np]).collect();
            points.extend(new_tokens.iter().rev().copied());
            for &(t, sa, sb) in new_chords.iter().rev() {
                tris_new.push(t);
                sides_new.push((sb, sa));
            }
        }
    } else if forward {
        points = st.points[..=ib].to_vec();
        tris_new = st.tris[..ib].to_vec();
        sides_new = st.sides[..ib].to_vec();
        points.extend(new_tokens.iter().copied());
        for &(t, sa, sb) in &new_chords {
            tris_new.push(t);
            sides_new.push((sa, sb));
        }
        points.extend(st.points[ia..].iter().copied());
        tris_new.extend(st.tris[ia..].iter().copied());
        sides_new.extend(st.sides[ia..].iter().copied());
    } else {
        points = st.points[..=ia].to_vec();
        tris_new = st.tris[..ia].to_vec();
        sides_new = st.sides[..ia].to_vec();
        points.extend(new_tokens.iter().rev().copied());
        for &(t, sa, sb) in new_chords.iter().rev() {
            tris_new.push(t);
            sides_new.push((sb, sa));
        }
        points.extend(st.points[ib..].iter().copied());
        tris_new.extend(st.tris[ib..].iter().copied());
        sides_new.extend(st.sides[ib..].iter().copied());
    }
    let old_set: BTreeSet<Token> = st.points.iter().copied().collect();
    let new_set: BTreeSet<Token> = points.iter().copied().collect();
    sys.strands[ra.strand] = Strand {
        label: st.label,
        closed: st.closed,
        points,
        tris: tris_new,
        sides: sides_new,
    };
    // drop abandoned tokens from their edges
    for gone in old_set.difference(&new_set) {
        for pts in sys.edge_points.iter_mut() {
            if let Some(i) = pts.iter().position(|x| x == gone) {
                pts.remove(i);
                break;
            }
        }
    }
}

/// Reduce the system to minimal position between the two labels and return
/// the geometric crossing count. The budget caps simplification moves.
pub fn minimal_crossings(
    surf: &TriSurface,
    sys: &mut CurveSystem,
    budget: u64,
) -> Result<u64, PositionError> {
    let mut moves = 0u64;
    let mut last = u64::MAX;
    loop {
        let an = analyze(surf, sys)?;
        assert_eq!(an.cross_same, 0, "strands must stay embedded");
        if last != u64::MAX {
            assert_eq!(an.cross_labels + 2, last, "each move removes one bigon");
        }
        match an.bigon {
            None => return Ok(an.cross_labels),
            Some(b) => {
                if moves >= budget {
                    return Err(PositionError::ComplexityExceeded(moves));
                }
                last = an.cross_labels;
                reroute(surf, sys, &b);
                moves += 1;
            }
        }
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
        // pentagon a b a' b' c fan-triangulated; c is the boundary
        TriSurface::from_labels(&[["a", "b", "p"], ["p", "a", "q"], ["q", "b", "c"]]).unwrap()
    }

    /// closed curve crossing two interior edges once each, one chord per
    /// triangle between the given local sides
    fn simple_curve(
        surf: &TriSurface,
        sys: &mut CurveSystem,
        label: u8,
        t_sides: [(usize, u8, u8); 2],
    ) {
        let p = sys.fresh_token();
        let q = sys.fresh_token();
        let (t0, s0a, s0b) = t_sides[0];
        let (t1, s1a, s1b) = t_sides[1];
        let e_p = surf.side_edge(Side::new(t0, s0a)).0;
        let e_q = surf.side_edge(Side::new(t0, s0b)).0;
        sys.edge_points[e_p].push(p);
        sys.edge_points[e_q].push(q);
        sys.strands.push(Strand {
            label,
            closed: true,
            points: vec![p, q],
            tris: vec![t0, t1],
            sides: vec![(s0a, s0b), (s1a, s1b)],
        });
    }

    #[test]
    fn empty_closed_surface_region() {
        let surf = genus2_closed();
        let sys = CurveSystem::new(&surf);
        let an = analyze(&surf, &sys).unwrap();
        assert_eq!(an.cross_labels, 0);
        assert_eq!(an.regions.len(), 1);
        assert_eq!(an.regions[0].chi, -2);
        assert_eq!(an.regions[0].cells, 6);
        assert!(an.regions[0].cycles.is_empty());
        assert!(an.bigon.is_none());
    }

    #[test]
    fn empty_torus_region() {
        let surf = torus();
        let sys = CurveSystem::new(&surf);
        let an = analyze(&surf, &sys).unwrap();
        assert_eq!(an.regions.len(), 1);
        assert_eq!(an.regions[0].chi, 0);
    }

    #[test]
    fn empty_holed_torus_region() {
        let surf = one_holed_torus();
        assert_eq!(surf.genus(), 1);
        assert_eq!(surf.num_boundary_components(), 1);
        let sys = CurveSystem::new(&surf);
        let an = analyze(&surf, &sys).unwrap();
        assert_eq!(an.regions.len(), 1);
        assert_eq!(an.regions[0].chi, -1);
        assert_eq!(an.regions[0].cycles.len(), 1);
        assert_eq!(an.regions[0].cycles[0].boundary_comps, vec![0]);
        assert!(an.regions[0].cycles[0].labels.is_empty());
    }

    #[test]
    fn essential_torus_curve_complement_is_annulus() {
        let surf = torus();
        let mut sys = CurveSystem::new(&surf);
        simple_curve(&surf, &mut sys, 0, [(0, 0, 1), (1, 1, 0)]);
        let an = analyze(&surf, &sys).unwrap();
        assert_eq!(an.cross_labels, 0);
        assert_eq!(an.cross_same, 0);
        assert_eq!(an.regions.len(), 1);
        assert_eq!(an.regions[0].chi, 0);
        assert_eq!(an.regions[0].cycles.len(), 2);
        assert!(an.bigon.is_none());
    }

    #[test]
    fn parallel_torus_curves_two_annuli() {
        let surf = torus();
        let mut sys = CurveSystem::new(&surf);
        simple_curve(&surf, &mut sys, 0, [(0, 0, 1), (1, 1, 0)]);
        simple_curve(&surf, &mut sys, 1, [(0, 0, 1), (1, 1, 0)]);
        // the naive layout crosses twice; both crossings cancel as a bigon
        let n = minimal_crossings(&surf, &mut sys, 100).unwrap();
        assert_eq!(n, 0);
        let an = analyze(&surf, &sys).unwrap();
        assert_eq!(an.cross_labels, 0);
        assert_eq!(an.regions.len(), 2);
        for r in &an.regions {
            assert_eq!(r.chi, 0);
            assert_eq!(r.cycles.len(), 2);
        }
        assert!(an.bigon.is_none());
    }

    #[test]
    fn transverse_torus_curves_meet_once() {
        let surf = torus();
        for flip in [false, true] {
            let mut sys = CurveSystem::new(&surf);
            simple_curve(&surf, &mut sys, 0, [(0, 0, 1), (1, 1, 0)]);
            simple_curve(&surf, &mut sys, 1, [(0, 1, 2), (1, 2, 1)]);
            if flip {
                let e = surf.side_edge(Side::new(0, 1)).0;
                sys.edge_points[e].reverse();
            }
            let n = minimal_crossings(&surf, &mut sys, 100).unwrap();
            assert_eq!(n, 1, "flip={flip}");
            let an = analyze(&surf, &sys).unwrap();
            // complement of two curves meeting once on the torus is a disk
            assert_eq!(an.regions.len(), 1);
            assert_eq!(an.regions[0].chi, 1);
            assert_eq!(an.regions[0].cycles.len(), 1);
            assert_eq!(an.regions[0].cycles[0].crossing_visits, 4);
        }
    }
}
