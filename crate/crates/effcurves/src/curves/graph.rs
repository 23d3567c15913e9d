//! Finite slices of curve graphs.
//!
//! A slice enumerates every curve below a complexity bound together with a
//! verified adjacency list: intersection 1 on the one-holed torus, 2 on the
//! four-holed sphere, disjointness elsewhere. Output order is deterministic
//! and adjacency lists are sorted so that exports are byte-stable.

use super::normal::{isotopic, normal_intersection, CurveClass, NormalCurve};
use super::position::PositionError;
use super::slope::{slope_intersection, slopes_up_to, Slope, SporadicSurface};
use super::surface::TriSurface;
use std::collections::VecDeque;

/// A vertex of a curve-graph slice: either an exact slope on a sporadic
/// surface or a normal curve on a triangulated one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum CurveVertex {
    Slope(Slope),
    Normal(NormalCurve),
}

#[derive(Debug, Clone)]
pub struct CurveGraphSlice {
    /// enumeration bound the slice was built with
    pub bound: u64,
    pub vertices: Vec<CurveVertex>,
    /// sorted neighbor lists, one per vertex
    pub adjacency: Vec<Vec<usize>>,
}

impl CurveGraphSlice {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Breadth-first distance inside the slice; None when disconnected.
    /// This is an upper bound for the distance in the full curve graph.
    pub fn distance(&self, from: usize, to: usize) -> Option<u32> {
        let mut dist = vec![u32::MAX; self.vertices.len()];
        let mut queue = VecDeque::new();
        dist[from] = 0;
        queue.push_back(from);
        while let Some(v) = queue.pop_front() {
            if v == to {
                return Some(dist[v]);
            }
            for &w in &self.adjacency[v] {
                if dist[w] == u32::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Edge list as text: one `edge i j` line per unordered pair, i < j,
    /// preceded by one `vertex i <curve>` line per vertex.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.vertices.iter().enumerate() {
            match v {
                CurveVertex::Slope(s) => {
                    out.push_str(&format!("vertex {i} slope {s}\n"));
                }
                CurveVertex::Normal(c) => {
                    out.push_str(&format!("vertex {i} weights"));
                    for (t, ch) in c.corner_weights().chunks(3).enumerate() {
                        out.push_str(&format!(" t{t}:({},{},{})", ch[0], ch[1], ch[2]));
                    }
                    out.push('\n');
                }
            }
        }
        for (i, nbrs) in self.adjacency.iter().enumerate() {
            for &j in nbrs {
                if i < j {
                    out.push_str(&format!("edge {i} {j}\n"));
                }
            }
        }
        out
    }
}

/// The slice of a sporadic curve graph on all slopes of height at most
/// `bound`. Edges are intersection-verified, not assumed from determinants.
pub fn enumerate_slope_graph(surface: SporadicSurface, bound: u64) -> CurveGraphSlice {
    let verts = slopes_up_to(bound);
    let edge_i = match surface {
        SporadicSurface::OneHoledTorus => 1,
        SporadicSurface::FourHoledSphere => 2,
    };
    let mut adjacency = vec![Vec::new(); verts.len()];
    for (i, &a) in verts.iter().enumerate() {
        for (j, &b) in verts.iter().enumerate().skip(i + 1) {
            if slope_intersection(a, b, surface) == edge_i {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }
    for nbrs in &mut adjacency {
        nbrs.sort_unstable();
    }
    CurveGraphSlice {
        bound,
        vertices: verts.into_iter().map(CurveVertex::Slope).collect(),
        adjacency,
    }
}

/// The slice of the curve graph of a triangulated surface on all essential
/// curves of total edge weight at most `bound`, up to isotopy. Edges are
/// the disjointness relation, each verified by an intersection-number
/// computation. `budget` caps the combined reduction work.
pub fn enumerate_normal_graph(
    surf: &TriSurface,
    bound: u64,
    budget: u64,
) -> Result<CurveGraphSlice, PositionError> {
    let mut work: u64 = 0;
    let mut spend = |w: u64| -> Result<(), PositionError> {
        work = work.saturating_add(w);
        if work > budget {
            Err(PositionError::ComplexityExceeded(budget))
        } else {
            Ok(())
        }
    };

    // enumerate admissible edge-weight vectors of total weight <= bound
    let ne = surf.num_edges();
    let mut candidates = Vec::new();
    let mut w = vec![0u64; ne];
    enumerate_vectors(&mut w, 0, bound, &mut |w| {
        if let Ok(c) = NormalCurve::from_edge_weights(surf, w) {
            if !c.is_empty() && c.is_connected(surf) {
                candidates.push(c);
            }
        }
    });

    let mut verts: Vec<NormalCurve> = Vec::new();
    for c in candidates {
        spend(c.total_weight(surf) + 1)?;
        if c.classify(surf)? != CurveClass::Essential {
            continue;
        }
        // dedup up to isotopy; candidates arrive in lexicographic weight
        // order, so the kept representative is the lightest one
        let mut dup = false;
        for v in &verts {
            spend(c.total_weight(surf) + v.total_weight(surf))?;
            if isotopic(surf, v, &c, budget)? {
                dup = true;
                break;
            }
        }
        if !dup {
            verts.push(c);
        }
    }

    let mut adjacency = vec![Vec::new(); verts.len()];
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            spend(verts[i].total_weight(surf) + verts[j].total_weight(surf))?;
            if normal_intersection(surf, &verts[i], &verts[j], budget)? == 0 {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }
    for nbrs in &mut adjacency {
        nbrs.sort_unstable();
    }
    Ok(CurveGraphSlice {
        bound,
        vertices: verts.into_iter().map(CurveVertex::Normal).collect(),
        adjacency,
    })
}

fn enumerate_vectors(w: &mut Vec<u64>, idx: usize, left: u64, f: &mut impl FnMut(&[u64])) {
    if idx == w.len() {
        f(w);
        return;
    }
    for v in 0..=left {
        w[idx] = v;
        enumerate_vectors(w, idx + 1, left - v, f);
    }
    w[idx] = 0;
}
