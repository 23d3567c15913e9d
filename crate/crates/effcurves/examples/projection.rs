//! Subsurface projection: split a curve into arcs through an embedded
//! subsurface, surger the arcs into curves, and measure projection distance.

use effcurves::curves::{enumerate_normal_graph, NormalCurve};
use effcurves::projection::{
    holed_torus_in_genus2, project_curve, projection_distance, ProjectionError,
};

fn main() {
    let emb = holed_torus_in_genus2();
    let budget = 1_000_000;

    // a curve crossing the embedded one-holed torus
    let crossing =
        NormalCurve::from_edge_weights(&emb.ambient, &[1, 2, 1, 0, 2, 1, 1, 1, 0]).unwrap();
    let set_a = project_curve(&emb, &crossing, budget).unwrap();
    println!("projection of the crossing curve: {} curve(s)", set_a.curves.len());

    // a projected curve lives inside the subsurface, so projecting its
    // ambient copy again reproduces it
    let inside = emb.to_ambient(&set_a.curves[0]).unwrap();
    let set_b = project_curve(&emb, &inside, budget).unwrap();
    println!("re-projection of the projected curve: {} curve(s)", set_b.curves.len());

    // distance between the two projections inside the subsurface curve graph
    let slice = enumerate_normal_graph(&emb.sub, 8, budget).unwrap();
    let (lo, hi) = projection_distance(&emb.sub, &set_a, &set_b, &slice, budget).unwrap();
    println!("projection distance in [{lo}, {hi}]");

    // a curve missing the subsurface has no projection at all
    let far = NormalCurve::from_edge_weights(&emb.ambient, &[0, 0, 0, 0, 0, 1, 1, 1, 0]).unwrap();
    match project_curve(&emb, &far, budget) {
        Err(ProjectionError::NoEssentialIntersection) => {
            println!("disjoint curve: projection is empty, as expected")
        }
        other => println!("unexpected: {other:?}"),
    }
}
