//! Triangulated surfaces given by oriented triangles and side gluings.
//!
//! Conventions: triangle sides are directed, side i running from local
//! vertex i to vertex i+1 (mod 3); corner i sits at the head of side i.
//! Every gluing identifies two directed sides reversing direction, so a
//! complex that glues up at all is oriented by construction. Unglued sides
//! are boundary.

use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Side {
    pub tri: usize,
    pub side: u8,
}

impl Side {
    pub fn new(tri: usize, side: u8) -> Side {
        Side { tri, side }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gluing {
    Glued(Side),
    Boundary,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("side {0:?} referenced more than twice")]
    OverusedLabel(String),
    #[error("surface is not connected")]
    Disconnected,
    #[error("invalid gluing involving triangle {0}")]
    BadGluing(usize),
}

/// An oriented triangulated surface, possibly with boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriSurface {
    glue: Vec<[Gluing; 3]>,
    /// edge id and direction flag per side; the flag is true on the side
    /// whose direction defines the edge's direction
    side_edge: Vec<[(usize, bool); 3]>,
    nedges: usize,
    /// representative boundary side per edge id, for boundary edges
    edge_sides: Vec<(Side, Option<Side>)>,
    /// vertex id per corner (corner i of triangle t at index 3t+i)
    corner_vertex: Vec<usize>,
    nvertices: usize,
    /// true if the vertex lies on the boundary
    vertex_on_boundary: Vec<bool>,
    /// boundary components as cyclic lists of boundary sides
    boundary: Vec<Vec<Side>>,
}

impl TriSurface {
    /// Build from labelled sides: `tris[t][i]` is the label of side i of
    /// triangle t. Labels appearing twice are glued (reversing direction);
    /// labels appearing once are boundary.
    pub fn from_labels(tris: &[[&str; 3]]) -> Result<TriSurface, SurfaceError> {
        let mut seen: BTreeMap<&str, Vec<Side>> = BTreeMap::new();
        for (t, labels) in tris.iter().enumerate() {
            for (i, l) in labels.iter().enumerate() {
                seen.entry(l).or_default().push(Side::new(t, i as u8));
            }
        }
        let mut glue = vec![[Gluing::Boundary; 3]; tris.len()];
        for (label, sides) in &seen {
            match sides.as_slice() {
                [_] => {}
                [a, b] => {
                    glue[a.tri][a.side as usize] = Gluing::Glued(*b);
                    glue[b.tri][b.side as usize] = Gluing::Glued(*a);
                }
                _ => return Err(SurfaceError::OverusedLabel(label.to_string())),
            }
        }
        TriSurface::from_gluings(glue)
    }

    pub fn from_gluings(glue: Vec<[Gluing; 3]>) -> Result<TriSurface, SurfaceError> {
        let ntri = glue.len();
        // validate involution
        for t in 0..ntri {
            for s in 0..3 {
                if let Gluing::Glued(o) = glue[t][s] {
                    if o.tri >= ntri
                        || (o.tri, o.side) == (t, s as u8)
                        || glue[o.tri][o.side as usize] != Gluing::Glued(Side::new(t, s as u8))
                    {
                        return Err(SurfaceError::BadGluing(t));
                    }
                }
            }
        }
        // edges
        let mut side_edge = vec![[(usize::MAX, false); 3]; ntri];
        let mut edge_sides = Vec::new();
        for t in 0..ntri {
            for s in 0..3 {
                if side_edge[t][s].0 != usize::MAX {
                    continue;
                }
                let id = edge_sides.len();
                side_edge[t][s] = (id, true);
                match glue[t][s] {
                    Gluing::Glued(o) => {
                        side_edge[o.tri][o.side as usize] = (id, false);
                        edge_sides.push((Side::new(t, s as u8), Some(o)));
                    }
                    Gluing::Boundary => {
                        edge_sides.push((Side::new(t, s as u8), None));
                    }
                }
            }
        }
        let nedges = edge_sides.len();
        // connectivity over triangles
        if ntri == 0 {
            return Err(SurfaceError::Disconnected);
        }
        let mut visited = vec![false; ntri];
        let mut stack = vec![0usize];
        visited[0] = true;
        while let Some(t) = stack.pop() {
            for s in 0..3 {
                if let Gluing::Glued(o) = glue[t][s] {
                    if !visited[o.tri] {
                        visited[o.tri] = true;
                        stack.push(o.tri);
                    }
                }
            }
        }
        if visited.iter().any(|v| !v) {
            return Err(SurfaceError::Disconnected);
        }
        // vertices: union corners by rotating around each vertex.
        // corner i of t sits at head(side i) = tail(side i+1); crossing the
        // gluing of side i+1 lands at the head of the partner side.
        let mut uf: Vec<usize> = (0..3 * ntri).collect();
        fn find(uf: &mut Vec<usize>, mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        for t in 0..ntri {
            for s in 0..3 {
                if let Gluing::Glued(o) = glue[t][(s + 1) % 3] {
                    let a = find(&mut uf, 3 * t + s);
                    let b = find(&mut uf, 3 * o.tri + o.side as usize);
                    uf[a] = b;
                }
            }
        }
        let mut vertex_id = BTreeMap::new();
        let mut corner_vertex = vec![0usize; 3 * ntri];
        for c in 0..3 * ntri {
            let root = find(&mut uf, c);
            let next = vertex_id.len();
            let id = *vertex_id.entry(root).or_insert(next);
            corner_vertex[c] = id;
        }
        let nvertices = vertex_id.len();
        // boundary components: from a boundary side, the next boundary side
        // shares its head vertex, found by rotating through glued sides
        let mut vertex_on_boundary = vec![false; nvertices];
        let mut boundary = Vec::new();
        let mut seen_bside = vec![[false; 3]; ntri];
        for t in 0..ntri {
            for s in 0..3 {
                if glue[t][s] != Gluing::Boundary || seen_bside[t][s] {
                    continue;
                }
                let mut comp = Vec::new();
                let mut cur = Side::new(t, s as u8);
                loop {
                    seen_bside[cur.tri][cur.side as usize] = true;
                    comp.push(cur);
                    vertex_on_boundary
                        [corner_vertex[3 * cur.tri + cur.side as usize]] = true;
                    // rotate around head(cur) to the next boundary side
                    let mut probe = Side::new(cur.tri, (cur.side + 1) % 3);
                    loop {
                        match glue[probe.tri][probe.side as usize] {
                            Gluing::Boundary => break,
                            Gluing::Glued(o) => {
                                probe = Side::new(o.tri, (o.side + 1) % 3);
                            }
                        }
                    }
                    if probe == Side::new(t, s as u8) {
                        break;
                    }
                    cur = probe;
                }
                boundary.push(comp);
            }
        }
        Ok(TriSurface {
            glue,
            side_edge,
            nedges,
            edge_sides,
            corner_vertex,
            nvertices,
            vertex_on_boundary,
            boundary,
        })
    }

    pub fn num_triangles(&self) -> usize {
        self.glue.len()
    }

    pub fn num_edges(&self) -> usize {
        self.nedges
    }

    pub fn num_vertices(&self) -> usize {
        self.nvertices
    }

    pub fn euler(&self) -> i64 {
        self.nvertices as i64 - self.nedges as i64 + self.glue.len() as i64
    }

    pub fn num_boundary_components(&self) -> usize {
        self.boundary.len()
    }

    pub fn genus(&self) -> u32 {
        // 2 - 2g - b = euler
        let g2 = 2 - self.euler() - self.boundary.len() as i64;
        assert!(g2 >= 0 && g2 % 2 == 0, "non-orientable or invalid complex");
        (g2 / 2) as u32
    }

    pub fn gluing(&self, side: Side) -> Gluing {
        self.glue[side.tri][side.side as usize]
    }

    /// Edge id of a side and whether the side's direction is the edge's.
    pub fn side_edge(&self, side: Side) -> (usize, bool) {
        self.side_edge[side.tri][side.side as usize]
    }

    /// The one or two sides forming an edge.
    pub fn edge_sides(&self, edge: usize) -> (Side, Option<Side>) {
        self.edge_sides[edge]
    }

    pub fn is_boundary_edge(&self, edge: usize) -> bool {
        self.edge_sides[edge].1.is_none()
    }

    /// Vertex at corner i of triangle t (head of side i).
    pub fn corner_vertex(&self, tri: usize, corner: u8) -> usize {
        self.corner_vertex[3 * tri + corner as usize]
    }

    pub fn vertex_on_boundary(&self, v: usize) -> bool {
        self.vertex_on_boundary[v]
    }

    /// Number of corners at a vertex.
    pub fn vertex_degree(&self, v: usize) -> usize {
        self.corner_vertex.iter().filter(|&&x| x == v).count()
    }

    /// Corners at vertex v in rotation order starting from an arbitrary
    /// corner (for interior vertices the order is cyclic).
    pub fn corners_at_vertex(&self, v: usize) -> Vec<(usize, u8)> {
        self.corner_vertex
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == v)
            .map(|(c, _)| (c / 3, (c % 3) as u8))
            .collect()
    }

    /// Rotate a corner one step around its vertex: cross the gluing of the
    /// outgoing side. None when the rotation hits the boundary.
    pub fn rotate_corner(&self, tri: usize, corner: u8) -> Option<(usize, u8)> {
        match self.glue[tri][(corner as usize + 1) % 3] {
            Gluing::Glued(o) => Some((o.tri, o.side)),
            Gluing::Boundary => None,
        }
    }

    pub fn boundary_component(&self, i: usize) -> &[Side] {
        &self.boundary[i]
    }

    /// Index of the boundary component containing a boundary side.
    pub fn boundary_component_of(&self, side: Side) -> Option<usize> {
        self.boundary.iter().position(|c| c.contains(&side))
    }

    /// Boundary component index of a boundary edge.
    pub fn boundary_component_of_edge(&self, edge: usize) -> Option<usize> {
        let (s, other) = self.edge_sides[edge];
        if other.is_some() {
            return None;
        }
        self.boundary_component_of(s)
    }
}

/// Triangle labels of the fan triangulation of a polygon, with diagonal
/// labels namespaced by `prefix` so fans can be combined into one complex.
fn fan_tris(word: &[&str], prefix: &str) -> Vec<[String; 3]> {
    let n = word.len();
    assert!(n >= 4, "fan needs at least a quadrilateral");
    let diag = |i: usize| format!("{prefix}-{i}");
    let mut tris: Vec<[String; 3]> = Vec::new();
    tris.push([word[0].into(), word[1].into(), diag(2)]);
    for i in 1..n - 3 {
        tris.push([diag(i + 1), word[i + 1].into(), diag(i + 2)]);
    }
    tris.push([diag(n - 2), word[n - 2].into(), word[n - 1].into()]);
    tris
}

fn build_labelled(tris: Vec<[String; 3]>) -> Result<TriSurface, SurfaceError> {
    let borrowed: Vec<[&str; 3]> = tris
        .iter()
        .map(|t| [t[0].as_str(), t[1].as_str(), t[2].as_str()])
        .collect();
    TriSurface::from_labels(&borrowed)
}

/// Fan triangulation of a polygon given by its boundary word: sides with
/// the same label are glued (head to tail, as in a surface word with the
/// second occurrence inverted), unique labels stay boundary.
pub fn fan_polygon(word: &[&str]) -> Result<TriSurface, SurfaceError> {
    build_labelled(fan_tris(word, "fan-diag"))
}

const FOUR_HOLED_WORD: [&str; 10] = ["x", "c1", "x", "y", "c2", "y", "z", "c3", "z", "c4"];
const TWO_HOLED_TORUS_WORD: [&str; 10] = ["a", "b", "a", "b", "x", "c", "x", "y", "d", "y"];

/// Decagon x c1 x' y c2 y' z c3 z' c4 triangulated by a fan: a sphere with
/// four holes, each boundary circle a one-edge loop at its own vertex.
pub fn four_holed_sphere() -> TriSurface {
    fan_polygon(&FOUR_HOLED_WORD).expect("valid complex")
}

/// The same decagon fan with the boundary labels paired off (c1 to c2 and
/// c3 to c4): a closed genus-2 surface containing the four-holed sphere
/// triangle for triangle.
pub fn genus2_waist() -> TriSurface {
    fan_polygon(&["x", "m", "x", "y", "m", "y", "z", "n", "z", "n"]).expect("valid complex")
}

/// Decagon a b a' b' x c x' y d y' triangulated by a fan: genus 1 with two
/// boundary circles, each a one-edge loop at its own vertex.
pub fn two_holed_torus() -> TriSurface {
    fan_polygon(&TWO_HOLED_TORUS_WORD).expect("valid complex")
}

/// Two copies of the two-holed torus fan glued along both boundary circles:
/// a closed genus-3 surface whose first eight triangles form the two-holed
/// torus triangle for triangle.
pub fn genus3_closed() -> TriSurface {
    let mut tris = fan_tris(&TWO_HOLED_TORUS_WORD, "adiag");
    tris.extend(fan_tris(
        &["a2", "b2", "a2", "b2", "x2", "c", "x2", "y2", "d", "y2"],
        "bdiag",
    ));
    build_labelled(tris).expect("valid complex")
}

/// Two triangles glued along all three sides: the one-vertex closed torus.
pub fn torus_closed() -> TriSurface {
    TriSurface::from_labels(&[["a", "b", "c"], ["a", "b", "c"]]).expect("valid complex")
}

/// Pentagon a b a' b' c triangulated by a fan: genus 1, one boundary circle.
pub fn one_holed_torus() -> TriSurface {
    TriSurface::from_labels(&[["a", "b", "p"], ["p", "a", "q"], ["q", "b", "c"]])
        .expect("valid complex")
}

/// The one-vertex triangulation of the closed genus-2 surface: an octagon
/// with boundary word a b a' b' c d c' d', fan-triangulated from one corner
/// (6 triangles, 9 edges, 1 vertex).
pub fn genus2_closed() -> TriSurface {
    TriSurface::from_labels(&[
        ["a", "b", "d2"],
        ["d2", "a", "d3"],
        ["d3", "b", "d4"],
        ["d4", "c", "d5"],
        ["d5", "d", "d6"],
        ["d6", "c", "d"],
    ])
    .expect("valid complex")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_torus() {
        // two triangles glued along all three sides: V=1, E=3, F=2
        let s = TriSurface::from_labels(&[["a", "b", "c"], ["a", "b", "c"]]).unwrap();
        assert_eq!(s.euler(), 0);
        assert_eq!(s.num_vertices(), 1);
        assert_eq!(s.num_boundary_components(), 0);
        assert_eq!(s.genus(), 1);
    }

    #[test]
    fn disk() {
        let s = TriSurface::from_labels(&[["a", "b", "c"]]).unwrap();
        assert_eq!(s.euler(), 1);
        assert_eq!(s.num_boundary_components(), 1);
        assert_eq!(s.boundary_component(0).len(), 3);
        assert_eq!(s.genus(), 0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(TriSurface::from_labels(&[["a", "a", "a"]]).is_err());
        assert!(
            TriSurface::from_labels(&[["a", "b", "c"], ["d", "e", "f"]]).is_err(),
            "disconnected"
        );
    }

    #[test]
    fn genus2_invariants() {
        let s = genus2_closed();
        assert_eq!(s.num_triangles(), 6);
        assert_eq!(s.num_edges(), 9);
        assert_eq!(s.num_vertices(), 1);
        assert_eq!(s.euler(), -2);
        assert_eq!(s.num_boundary_components(), 0);
        assert_eq!(s.genus(), 2);
        assert_eq!(s.vertex_degree(0), 18);
    }

    #[test]
    fn fixture_surface_topology() {
        let s = four_holed_sphere();
        assert_eq!((s.euler(), s.genus(), s.num_boundary_components()), (-2, 0, 4));
        // every boundary circle is a one-edge loop at its own vertex
        let mut bverts = std::collections::BTreeSet::new();
        for b in 0..4 {
            let comp = s.boundary_component(b);
            assert_eq!(comp.len(), 1);
            assert!(bverts.insert(s.corner_vertex(comp[0].tri, comp[0].side)));
        }

        let s = genus2_waist();
        assert_eq!((s.euler(), s.genus(), s.num_boundary_components()), (-2, 2, 0));

        let s = two_holed_torus();
        assert_eq!((s.euler(), s.genus(), s.num_boundary_components()), (-2, 1, 2));
        let v0 = s.boundary_component(0)[0];
        let v1 = s.boundary_component(1)[0];
        assert_ne!(
            s.corner_vertex(v0.tri, v0.side),
            s.corner_vertex(v1.tri, v1.side)
        );

        let s = genus3_closed();
        assert_eq!((s.euler(), s.genus(), s.num_boundary_components()), (-4, 3, 0));
        assert_eq!(s.num_triangles(), 16);
    }

    #[test]
    fn vertex_rotation_consistency() {
        let s = TriSurface::from_labels(&[["a", "b", "c"], ["a", "b", "c"]]).unwrap();
        // rotating from any corner visits all corners at the vertex
        let mut seen = std::collections::BTreeSet::new();
        let (mut t, mut c) = (0usize, 0u8);
        for _ in 0..s.vertex_degree(0) {
            seen.insert((t, c));
            let (nt, nc) = s.rotate_corner(t, c).unwrap();
            t = nt;
            c = nc;
        }
        assert_eq!(seen.len(), 6);
        assert_eq!((t, c), (0, 0));
    }
}
