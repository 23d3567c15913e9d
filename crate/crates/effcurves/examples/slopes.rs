//! Slope curves on the sporadic surfaces: geometric intersection numbers,
//! Farey-graph distances, and the logarithmic distance bound.

use effcurves::curves::{
    enumerate_slope_graph, farey_distance, hempel_bound, slope_intersection, Slope,
    SporadicSurface,
};

fn main() {
    let a = Slope::new(0, 1).unwrap();
    let b = Slope::new(5, 7).unwrap();

    let i = slope_intersection(a, b, SporadicSurface::OneHoledTorus);
    println!("i({a}, {b}) = {i} on the one-holed torus");

    match farey_distance(a, b, 8).resolved() {
        Some(d) => println!("curve-graph distance = {d}"),
        None => println!("distance unresolved at radius 8"),
    }

    // distance grows at most logarithmically in the intersection number
    let bound = hempel_bound(i, 64).unwrap();
    println!("log bound: distance <= {}", bound.to_enclosure_string(6));

    // a small slice of the curve graph
    let slice = enumerate_slope_graph(SporadicSurface::FourHoledSphere, 3);
    println!(
        "four-holed sphere slice at height 3: {} vertices, {} edges",
        slice.num_vertices(),
        slice.num_edges()
    );
}
